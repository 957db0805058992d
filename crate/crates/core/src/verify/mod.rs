//! Random generation and empirical checks of the theorems relating the
//! system kinds, plus a replay of the worked examples.

mod checks;
pub mod fixtures;
pub mod gen;
pub mod witness;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::Kind;

pub use fixtures::{fixture_count, run_fixture_suite, run_fixture_suite_with, FixtureSet};
pub use gen::gen_system;

/// Bounds for random generation. Identical parameters give identical output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenParams {
    pub seed: u64,
    pub max_states: usize,
    pub max_labels: usize,
    pub max_multiplicity: u64,
    pub max_denominator: u64,
    pub kind: Kind,
    /// Largest support of a generated bundle.
    pub max_out_degree: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            max_states: 4,
            max_labels: 2,
            max_multiplicity: 3,
            max_denominator: 6,
            kind: Kind::Lts,
            max_out_degree: 3,
        }
    }
}

impl GenParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_kind(mut self, kind: Kind) -> Self {
        self.kind = kind;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, msg: &str| if ok { Ok(()) } else { Err(Error::GenParams(msg.into())) };
        check((1..=6).contains(&self.max_states), "max_states must be in 1..=6")?;
        check((1..=3).contains(&self.max_labels), "max_labels must be in 1..=3")?;
        check((1..=3).contains(&self.max_multiplicity), "max_multiplicity must be in 1..=3")?;
        check((1..=6).contains(&self.max_denominator), "max_denominator must be in 1..=6")?;
        check((1..=4).contains(&self.max_out_degree), "max_out_degree must be in 1..=4")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyId {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    P8,
    P9,
    P10,
    S1,
    S2,
    S3,
    S4,
    S5,
}

impl PropertyId {
    pub const ALL: [PropertyId; 15] = [
        PropertyId::P1,
        PropertyId::P2,
        PropertyId::P3,
        PropertyId::P4,
        PropertyId::P5,
        PropertyId::P6,
        PropertyId::P7,
        PropertyId::P8,
        PropertyId::P9,
        PropertyId::P10,
        PropertyId::S1,
        PropertyId::S2,
        PropertyId::S3,
        PropertyId::S4,
        PropertyId::S5,
    ];

    pub fn description(self) -> &'static str {
        match self {
            PropertyId::P1 => "bisimulations are preserved by α",
            PropertyId::P2 => "≡^α-simulations on representations are the bisimulations on images",
            PropertyId::P3 => "near-injective bisimulations lift to some representations",
            PropertyId::P4 => "coupling and subset formulations of the distribution lifting agree",
            PropertyId::P5 => "Larsen–Skou bisimilarity, dm-image bisimilarity and ≡^dm-similarity agree",
            PropertyId::P6 => "⊑-simulations are preserved by α under the projected order",
            PropertyId::P7 => "⊑_G-simulations on images are the induced-order simulations on representations",
            PropertyId::P8 => "equality-order simulations are bisimulations",
            PropertyId::P9 => "alternating bisimulations are ≡^dma-simulations",
            PropertyId::P10 => "bounded witness search is sound for the ordered lifting",
            PropertyId::S1 => "lifting is monotone in the relation",
            PropertyId::S2 => "coupling witnesses are sound and transpose",
            PropertyId::S3 => "α commutes with renamings",
            PropertyId::S4 => "kernels are preserved by renamings",
            PropertyId::S5 => "generation is deterministic",
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for PropertyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<PropertyId> {
        PropertyId::ALL
            .into_iter()
            .find(|p| p.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownProperty(s.to_string()))
    }
}

/// One failing instance, serialized in full.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub instance: String,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub property: String,
    pub instances: usize,
    pub failures: Vec<Failure>,
    pub elapsed: Duration,
    /// Named tallies, e.g. how many instances satisfied a premise.
    pub counters: BTreeMap<String, usize>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn counter(&self, name: &str) -> usize {
        self.counters.get(name).copied().unwrap_or(0)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<8} {:<4} {:>5} instances {:>4} failures {:>8.2?}",
            self.property,
            if self.passed() { "pass" } else { "FAIL" },
            self.instances,
            self.failures.len(),
            self.elapsed
        )?;
        for (k, v) in &self.counters {
            write!(f, "  {k}={v}")?;
        }
        Ok(())
    }
}

/// Result of one generated instance.
#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub failures: Vec<Failure>,
    pub counters: BTreeMap<String, usize>,
}

impl Outcome {
    pub fn fail(&mut self, instance: impl Into<String>, detail: impl Into<String>) {
        self.failures.push(Failure { instance: instance.into(), detail: detail.into() });
    }

    pub fn count(&mut self, name: &str) {
        *self.counters.entry(name.to_string()).or_default() += 1;
    }

    fn merge(mut self, other: Outcome) -> Outcome {
        self.failures.extend(other.failures);
        for (k, v) in other.counters {
            *self.counters.entry(k).or_default() += v;
        }
        self
    }
}

/// Runs `property` on `instances` generated inputs. Instances are
/// independent and evaluated in parallel; the report is deterministic.
pub fn run_check(property: PropertyId, params: &GenParams, instances: usize) -> Result<CheckReport> {
    params.validate()?;
    let start = Instant::now();
    let outcomes: Vec<Outcome> = (0..instances as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = gen::instance_rng(params.seed, i);
            let mut out = Outcome::default();
            // a library error on a generated instance is a defect, not an abort
            if let Err(e) = checks::run_instance(property, params, &mut rng, &mut out) {
                out.fail(format!("instance {i}"), format!("error: {e}"));
            }
            out
        })
        .collect();
    let total = outcomes.into_iter().fold(Outcome::default(), Outcome::merge);
    Ok(CheckReport {
        property: property.to_string(),
        instances,
        failures: total.failures,
        elapsed: start.elapsed(),
        counters: total.counters,
    })
}
