//! Golden replay of the small worked examples.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::equivalences::{
    is_bisimulation, is_prob_bisimulation, is_simulation, largest_simulation, prob_bisimilarity, Verdict,
};
use crate::error::Result;
use crate::format::{parse_relation, parse_system, render_relation, render_system};
use crate::lifting::{lift_dist_subsets_member, lift_member, lift_ordered_member, Elem};
use crate::model::build::{dist, m1, ms, r, set};
use crate::model::{disjoint_union, validate_system, Bundle, Kind, Partition, Relation, System};
use crate::order::OrderSpec;
use crate::rat::Rat;
use crate::samples::{pa, pb, s_x, s_x_ms, s_xp, s_xp_m1, s_y, s_y_ms, s_yp, s_yp_m1, R_XY, R_XY_PROB};
use crate::transforms::{alpha_image, bundle_representations, induced_order_related, kernel_related, AlphaKind};

use super::{CheckReport, Failure};

/// The systems the fixtures read. Replacing one lets the harness be tested
/// against a deliberately broken input.
#[derive(Debug, Clone)]
pub struct FixtureSet {
    /// `s_X²`, where `x` steps to `2·(a,x1)`.
    pub s_x2: System,
}

impl Default for FixtureSet {
    fn default() -> Self {
        FixtureSet { s_x2: s_x_ms(2) }
    }
}

type Check = fn(&FixtureSet) -> Result<Option<String>>;

fn expect(ok: bool, detail: impl FnOnce() -> String) -> Result<Option<String>> {
    Ok(if ok { None } else { Some(detail()) })
}

fn step<'a>(sys: &'a System, x: &str) -> &'a Bundle {
    sys.step(x).expect("fixture state")
}

fn rel(c: &System, d: &System, pairs: &[(&str, &str)]) -> Result<Relation> {
    Relation::between(c, d, pairs.iter().copied())
}

const PRIMED: [(&str, &str); 2] = [("x1", "y1"), ("x1", "y2")];

/// `(kind, relation, u, v, expected)`.
type LiftCase = (Kind, Relation, Bundle, Bundle, bool);

/// The `lift_member` fixtures.
fn lift_cases(fs: &FixtureSet) -> Result<Vec<LiftCase>> {
    let (sx1, sy1) = (s_x_ms(1), s_y_ms(1));
    Ok(vec![
        (Kind::Lts, rel(&s_x(), &s_y(), &PRIMED)?, step(&s_x(), "x").clone(), step(&s_y(), "y").clone(), true),
        (Kind::Mts, rel(&sx1, &sy1, &PRIMED)?, step(&sx1, "x").clone(), step(&sy1, "y").clone(), false),
        (Kind::Mts, rel(&fs.s_x2, &sy1, &PRIMED)?, step(&fs.s_x2, "x").clone(), step(&sy1, "y").clone(), true),
        (Kind::Pmts, rel(&pa(), &pb(), &[("x", "y")])?, step(&pa(), "x").clone(), step(&pb(), "y").clone(), false),
        (Kind::Dts, prob_rel(&s_xp(), &s_yp())?, step(&s_xp(), "x").clone(), step(&s_yp(), "y").clone(), true),
    ])
}

/// `{(x_i, y_j)}` without the pair of initial states.
fn prob_rel(c: &System, d: &System) -> Result<Relation> {
    rel(c, d, &R_XY_PROB[1..])
}

fn lift_case(fs: &FixtureSet, i: usize) -> Result<Option<String>> {
    let (kind, rel, u, v, want) = lift_cases(fs)?.swap_remove(i);
    let got = lift_member(kind, &rel, &u, &v)?.holds;
    expect(got == want, || format!("{kind}: {u:?} vs {v:?} gave {got}"))
}

fn same_steps(a: &System, b: &System) -> bool {
    a.kind == b.kind && a.steps().collect::<BTreeMap<_, _>>() == b.steps().collect::<BTreeMap<_, _>>()
}

fn refuted_at(v: &Verdict, x: &str, y: &str) -> bool {
    !v.holds && v.counterexample.as_ref().is_some_and(|c| c.left == x && c.right == y)
}

fn fixtures() -> Vec<(&'static str, Check)> {
    vec![
        ("pmts 2·(1/2,a,y) is valid", |_| {
            let diags = validate_system(&pb());
            expect(diags.is_empty(), || format!("{diags:?}"))
        }),
        ("set lifting relates x and y", |fs| lift_case(fs, 0)),
        ("multiset lifting refutes 1 vs 2 copies", |fs| lift_case(fs, 1)),
        ("multiset lifting relates s_X² and s_Y¹", |fs| {
            let (kind, rel, u, v, _) = lift_cases(fs)?.swap_remove(2);
            let verdict = lift_member(kind, &rel, &u, &v)?;
            let one = |x: &str, y: &str| {
                let e = |s: &str| Elem { weight: None, label: "a".into(), state: s.into() };
                ((e(x), e(y)), Rat::ONE)
            };
            let want: BTreeMap<(Elem, Elem), Rat> = [one("x1", "y1"), one("x1", "y2")].into();
            let got = verdict.witness.map(|w| w.weights().clone());
            expect(got.as_ref() == Some(&want), || format!("witness {got:?}"))
        }),
        ("m1 lifting refutes weight 1 vs 1/2", |fs| lift_case(fs, 3)),
        ("distribution lifting couples halves with thirds", |fs| lift_case(fs, 4)),
        ("subset condition on halves vs thirds", |_| {
            let got = lift_dist_subsets_member(&prob_rel(&s_xp(), &s_yp())?, step(&s_xp(), "x"), step(&s_yp(), "y"))?;
            expect(got, || "subset condition failed".into())
        }),
        ("equality-ordered lifting is the plain lifting", |fs| {
            for (kind, rel, u, v, _) in lift_cases(fs)? {
                let plain = lift_member(kind, &rel, &u, &v)?.holds;
                if lift_ordered_member(&OrderSpec::Equality, kind, &rel, &u, &v)? != plain {
                    return Ok(Some(format!("{kind}: {u:?} vs {v:?}")));
                }
            }
            Ok(None)
        }),
        ("support kernel lifting relates 1 vs 2 copies", |_| {
            let (sx1, sy1) = (s_x_ms(1), s_y_ms(1));
            let ord = OrderSpec::KernelOf(AlphaKind::Support);
            let got = lift_ordered_member(&ord, Kind::Mts, &rel(&sx1, &sy1, &PRIMED)?, step(&sx1, "x"), step(&sy1, "y"))?;
            expect(got, || "not related".into())
        }),
        ("s_X and s_Y are bisimilar as lts", |_| {
            let v = is_simulation(&s_x(), &s_y(), &rel(&s_x(), &s_y(), &R_XY)?, &OrderSpec::Equality)?;
            expect(v.holds, || v.counterexample.map(|c| c.to_string()).unwrap_or_default())
        }),
        ("no multiset bisimulation for canonical representations", |_| {
            let (sx1, sy1) = (s_x_ms(1), s_y_ms(1));
            let v = is_simulation(&sx1, &sy1, &rel(&sx1, &sy1, &R_XY)?, &OrderSpec::Equality)?;
            expect(refuted_at(&v, "x", "y"), || format!("{v:?}"))
        }),
        ("canonical representations are support-kernel similar", |_| {
            let (sx1, sy1) = (s_x_ms(1), s_y_ms(1));
            let v = is_simulation(&sx1, &sy1, &rel(&sx1, &sy1, &R_XY)?, &OrderSpec::KernelOf(AlphaKind::Support))?;
            expect(v.holds, || format!("{v:?}"))
        }),
        ("p_a and p_b are dm-kernel similar", |_| {
            let v = is_simulation(&pa(), &pb(), &rel(&pa(), &pb(), &[("x", "y")])?, &OrderSpec::KernelOf(AlphaKind::Dm))?;
            expect(v.holds, || format!("{v:?}"))
        }),
        ("largest lts simulation contains (x,y)", |_| {
            let sim = largest_simulation(&s_x(), &s_y(), &OrderSpec::Equality)?;
            expect(sim.contains("x", "y"), || render_relation(&sim))
        }),
        ("largest pmts simulation omits (x,y)", |_| {
            let sim = largest_simulation(&pa(), &pb(), &OrderSpec::Equality)?;
            expect(!sim.contains("x", "y"), || render_relation(&sim))
        }),
        ("halves and thirds form a probabilistic bisimulation", |_| {
            let sys = disjoint_union(&s_xp_m1(1), &s_yp_m1(1))?;
            let part = Partition::new(
                &sys.state_set(),
                [
                    vec!["left:x", "right:y"],
                    vec!["left:x1", "left:x2", "right:y1", "right:y2", "right:y3"],
                ]
                .map(|c| c.into_iter().map(String::from).collect::<std::collections::BTreeSet<_>>()),
            )?;
            let v = is_prob_bisimulation(&sys, &part)?;
            expect(v.holds, || format!("{v:?}"))
        }),
        ("Larsen–Skou refinement joins x and y", |_| {
            let sys = disjoint_union(&s_xp_m1(1), &s_yp_m1(1))?;
            let part = prob_bisimilarity(&sys)?;
            expect(part.same_class("left:x", "right:y"), || format!("{:?}", part.classes()))
        }),
        ("support of s_X² and s_X¹ is s_X", |fs| {
            let (two, one) = (alpha_image(AlphaKind::Support, &fs.s_x2)?, alpha_image(AlphaKind::Support, &s_x_ms(1))?);
            expect(same_steps(&two, &s_x()) && same_steps(&one, &s_x()), || render_system(&two))
        }),
        ("dm of s_Xp³ is the even split", |_| {
            let img = alpha_image(AlphaKind::Dm, &s_xp_m1(3))?;
            let want = dist([(r(1, 2), "a", "x1"), (r(1, 2), "a", "x2")]);
            expect(step(&img, "x") == &want, || format!("{:?}", step(&img, "x")))
        }),
        ("representations of s_X up to 3 copies", |_| {
            let mut got = bundle_representations(step(&s_x(), "x"), 3);
            got.sort();
            let mut want = vec![ms([(1, "a", "x1")]), ms([(2, "a", "x1")]), ms([(3, "a", "x1")])];
            want.sort();
            expect(got == want, || format!("{got:?}"))
        }),
        ("even split is represented by 1/6 weights", |_| {
            let split = m1([(3, r(1, 6), "a", "x1"), (3, r(1, 6), "a", "x2")]);
            let reps = bundle_representations(step(&s_xp(), "x"), 3);
            if !reps.contains(&split) {
                return Ok(Some(format!("{split:?} missing")));
            }
            // s_Xp³ against s_Yp² through the 1/6 coupling
            let (c, d) = (s_xp_m1(3), s_yp_m1(2));
            let coupling = rel(&c, &d, &[("x", "y"), ("x1", "y1"), ("x2", "y2"), ("x1", "y3"), ("x2", "y3")])?;
            let v = is_bisimulation(&c, &d, &coupling)?;
            let full = is_bisimulation(&c, &d, &rel(&c, &d, &R_XY_PROB)?)?;
            expect(v.holds && full.holds, || format!("{v:?} {full:?}"))
        }),
        ("1 and 2 copies share a support", |_| {
            let got = kernel_related(AlphaKind::Support, &ms([(1, "a", "x1")]), &ms([(2, "a", "x1")]))?;
            expect(got, || "different supports".into())
        }),
        ("order induced from equality is the kernel", |fs| {
            let mut bundles: Vec<Bundle> = Vec::new();
            for sys in [s_x_ms(1), fs.s_x2.clone(), s_y_ms(1), pa(), pb(), s_xp_m1(1), s_xp_m1(3), s_yp_m1(2)] {
                bundles.extend(sys.steps().map(|(_, b)| b.clone()));
            }
            bundles.push(set([]));
            for alpha in AlphaKind::ALL {
                for u in bundles.iter().filter(|b| alpha.apply(b).is_ok()) {
                    for v in bundles.iter().filter(|b| alpha.apply(b).is_ok()) {
                        if induced_order_related(alpha, &OrderSpec::Equality, u, v)? != kernel_related(alpha, u, v)? {
                            return Ok(Some(format!("{}: {u:?} vs {v:?}", alpha.name())));
                        }
                    }
                }
            }
            Ok(None)
        }),
        ("count=2 with p=1/2 parses to 2·(1/2,a,y)", |_| {
            let sys = parse_system("system pb pmts\nstate y\ntrans y a y p=1/2 count=2\nend\n")?;
            let want = m1([(2, r(1, 2), "a", "y")]);
            expect(step(&sys, "y") == &want, || format!("{:?}", step(&sys, "y")))
        }),
        ("support-kernel simulation check on s_X¹ and s_Y¹ holds", |_| {
            let (c, d) = (parse_system(&render_system(&s_x_ms(1)))?, parse_system(&render_system(&s_y_ms(1)))?);
            let text = "pair x y\npair x1 y1\npair x1 y2\n";
            let v = is_simulation(&c, &d, &parse_relation(text, &c.state_set(), &d.state_set())?, &OrderSpec::KernelOf(AlphaKind::Support))?;
            expect(v.holds, || format!("{v:?}"))
        }),
        ("bisimulation check on p_a and p_b is refuted at (x,y)", |_| {
            let (c, d) = (parse_system(&render_system(&pa()))?, parse_system(&render_system(&pb()))?);
            let v = is_bisimulation(&c, &d, &parse_relation("pair x y\n", &c.state_set(), &d.state_set())?)?;
            expect(refuted_at(&v, "x", "y"), || format!("{v:?}"))
        }),
    ]
}

/// Number of worked examples the suite replays.
pub fn fixture_count() -> usize {
    fixtures().len()
}

pub fn run_fixture_suite() -> CheckReport {
    run_fixture_suite_with(&FixtureSet::default())
}

pub fn run_fixture_suite_with(fs: &FixtureSet) -> CheckReport {
    let start = Instant::now();
    let all = fixtures();
    let mut failures = Vec::new();
    for (name, check) in &all {
        let detail = match check(fs) {
            Ok(None) => continue,
            Ok(Some(d)) => d,
            Err(e) => format!("error: {e}"),
        };
        failures.push(Failure { instance: name.to_string(), detail });
    }
    CheckReport {
        property: "fixtures".into(),
        instances: all.len(),
        failures,
        elapsed: start.elapsed(),
        counters: BTreeMap::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::elements;

    #[test]
    fn all_fixtures_pass() {
        let report = run_fixture_suite();
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!(report.instances, 26);
    }

    #[test]
    fn corrupting_s_x2_breaks_only_the_multiset_fixture() {
        let fs = FixtureSet { s_x2: System::from_bundles("sx2", Kind::Mts, [("x", ms([(3, "a", "x1")])), ("x1", ms([]))]) };
        let report = run_fixture_suite_with(&fs);
        let names: Vec<&str> = report.failures.iter().map(|f| f.instance.as_str()).collect();
        assert_eq!(names, ["multiset lifting relates s_X² and s_Y¹"]);
    }

    #[test]
    fn lift_cases_use_elements_of_their_bundles() {
        for (_, _, u, v, _) in lift_cases(&FixtureSet::default()).unwrap() {
            assert!(!elements(&u).is_empty() && !elements(&v).is_empty());
        }
    }
}
