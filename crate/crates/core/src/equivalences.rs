//! Bisimulation and ⊑-simulation checks, their greatest fixpoints, and
//! Larsen–Skou probabilistic bisimulation by partition refinement.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lifting::{lift_member, lift_ordered_member};
use crate::model::{validate_system, Bundle, Kind, Partition, Relation, StateId, System};
use crate::order::OrderSpec;
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub left: StateId,
    pub right: StateId,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}): {}", self.left, self.right, self.detail)
    }
}

/// Outcome of a check. `counterexample` is present iff `holds` is false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    pub fn pass() -> Verdict {
        Verdict { holds: true, counterexample: None }
    }

    pub fn fail(left: &str, right: &str, detail: impl Into<String>) -> Verdict {
        Verdict {
            holds: false,
            counterexample: Some(Counterexample { left: left.into(), right: right.into(), detail: detail.into() }),
        }
    }
}

fn same_kind(c: &System, d: &System) -> Result<Kind> {
    if c.kind == d.kind {
        Ok(c.kind)
    } else {
        Err(Error::KindMismatch { expected: c.kind.to_string(), found: d.kind.to_string() })
    }
}

fn check_carriers(c: &System, d: &System, rel: &Relation) -> Result<()> {
    if *rel.left() == c.state_set() && *rel.right() == d.state_set() {
        Ok(())
    } else {
        Err(Error::CarrierMismatch)
    }
}

fn step<'a>(sys: &'a System, x: &str) -> &'a Bundle {
    sys.step(x).expect("carrier checked")
}

fn first_failure<F>(c: &System, d: &System, rel: &Relation, mut ok: F) -> Result<Verdict>
where
    F: FnMut(&Bundle, &Bundle) -> Result<bool>,
{
    for (x, y) in rel.iter() {
        let (u, v) = (step(c, x), step(d, y));
        if !ok(u, v)? {
            return Ok(Verdict::fail(x, y, format!("{u:?} and {v:?} are not related by the lifting")));
        }
    }
    Ok(Verdict::pass())
}

/// Whether `rel` is a ⊑-simulation from `c` to `d`: every related pair steps
/// into `Rel(F)_⊑(rel)`. Pairs are checked in lexicographic order and the
/// first failure is reported.
pub fn is_simulation(c: &System, d: &System, rel: &Relation, ord: &OrderSpec) -> Result<Verdict> {
    let kind = same_kind(c, d)?;
    ord.check_applicable(kind)?;
    check_carriers(c, d, rel)?;
    first_failure(c, d, rel, |u, v| lift_ordered_member(ord, kind, rel, u, v))
}

/// Whether `rel` is an F-bisimulation, decided directly by `lift_member`.
pub fn is_bisimulation(c: &System, d: &System, rel: &Relation) -> Result<Verdict> {
    let kind = same_kind(c, d)?;
    check_carriers(c, d, rel)?;
    first_failure(c, d, rel, |u, v| Ok(lift_member(kind, rel, u, v)?.holds))
}

/// The largest ⊑-simulation from `c` to `d`. Each round evaluates every
/// remaining pair against the current relation and then deletes all failing
/// pairs at once.
pub fn largest_simulation(c: &System, d: &System, ord: &OrderSpec) -> Result<Relation> {
    let kind = same_kind(c, d)?;
    ord.check_applicable(kind)?;
    let mut rel = Relation::full(c, d);
    loop {
        let pairs: Vec<(String, String)> = rel.pairs().iter().cloned().collect();
        let verdicts: Vec<Result<bool>> = pairs
            .par_iter()
            .map(|(x, y)| lift_ordered_member(ord, kind, &rel, step(c, x), step(d, y)))
            .collect();
        let mut removed = false;
        for ((x, y), ok) in pairs.iter().zip(verdicts) {
            if !ok? {
                rel.remove(x, y);
                removed = true;
            }
        }
        if !removed {
            return Ok(rel);
        }
    }
}

/// Plain bisimilarity: the largest simulation for the equality order.
pub fn bisimilarity(c: &System, d: &System) -> Result<Relation> {
    largest_simulation(c, d, &OrderSpec::Equality)
}

/// Accumulated `n·p` mass per `(label, class)` of one `pmts` bundle.
fn signature(b: &Bundle, class_of: &BTreeMap<&str, usize>) -> BTreeMap<(String, usize), Rat> {
    let mut sig: BTreeMap<(String, usize), Rat> = BTreeMap::new();
    if let Bundle::M1(m) = b {
        for ((p, a, x), &n) in m.iter() {
            *sig.entry((a.clone(), class_of[x.as_str()])).or_default() += *p * Rat::from(n);
        }
    }
    sig
}

fn expect_pmts(sys: &System) -> Result<()> {
    if sys.kind == Kind::Pmts {
        Ok(())
    } else {
        Err(Error::KindMismatch { expected: Kind::Pmts.to_string(), found: sys.kind.to_string() })
    }
}

/// Whether the equivalence given by `partition` is a probabilistic
/// bisimulation on `sys`: equivalent states send equal mass into every class
/// under every label.
pub fn is_prob_bisimulation(sys: &System, partition: &Partition) -> Result<Verdict> {
    expect_pmts(sys)?;
    if partition.carrier() != sys.state_set() {
        return Err(Error::InvalidPartition("classes do not cover exactly the states of the system".into()));
    }
    let class_of = partition.class_index();
    for class in partition.classes() {
        let mut members = class.iter();
        let Some(first) = members.next() else { continue };
        let reference = signature(step(sys, first), &class_of);
        for other in members {
            let sig = signature(step(sys, other), &class_of);
            let keys: BTreeSet<&(String, usize)> = reference.keys().chain(sig.keys()).collect();
            for key in keys {
                let (m1, m2) = (reference.get(key).copied().unwrap_or_default(), sig.get(key).copied().unwrap_or_default());
                if m1 != m2 {
                    let target = partition.classes()[key.1].iter().cloned().collect::<Vec<_>>().join(",");
                    return Ok(Verdict::fail(
                        first,
                        other,
                        format!("mass under {} into {{{target}}}: {m1} ≠ {m2}", key.0),
                    ));
                }
            }
        }
    }
    Ok(Verdict::pass())
}

/// Probabilistic bisimilarity of a valid `pmts`, as the coarsest stable
/// partition. Classes are split by their signatures until nothing changes.
pub fn prob_bisimilarity(sys: &System) -> Result<Partition> {
    expect_pmts(sys)?;
    let diags = validate_system(sys);
    if !diags.is_empty() {
        return Err(Error::Invalid(diags));
    }
    let carrier = sys.state_set();
    let mut partition = if carrier.is_empty() {
        Partition::new(&carrier, [])?
    } else {
        Partition::new(&carrier, [carrier.clone()])?
    };
    loop {
        let class_of = partition.class_index();
        let mut next: Vec<BTreeSet<StateId>> = Vec::new();
        for class in partition.classes() {
            let mut groups: BTreeMap<BTreeMap<(String, usize), Rat>, BTreeSet<StateId>> = BTreeMap::new();
            for x in class {
                groups.entry(signature(step(sys, x), &class_of)).or_default().insert(x.clone());
            }
            next.extend(groups.into_values());
        }
        let refined = Partition::new(&carrier, next)?;
        if refined.len() == partition.len() {
            return Ok(refined);
        }
        partition = refined;
    }
}
