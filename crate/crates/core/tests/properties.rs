use std::collections::BTreeSet;

use proptest::prelude::*;

use coalg::format::{parse_system, render_system};
use coalg::lifting::{lift_member, lift_ordered_member};
use coalg::transforms::{alpha_image, canonical_representation, enumerate_representations, AlphaKind};
use coalg::verify::gen::{gen_loose_bundle, gen_named, gen_relation, instance_rng};
use coalg::verify::{run_check, GenParams, PropertyId};
use coalg::{disjoint_union, is_simulation, largest_simulation, Kind, OrderSpec, Relation, System};

fn kind_of(i: usize) -> Kind {
    Kind::ALL[i % Kind::ALL.len()]
}

fn sys(seed: u64, kind: Kind, prefix: &str, max_states: usize) -> System {
    let p = GenParams { max_states, ..GenParams::default() };
    gen_named(&p, kind, prefix, &mut instance_rng(seed, 0))
}

fn is_equivalence_on(rel: &Relation, c: &System) -> bool {
    rel.is_equivalence() && c.states().all(|x| rel.contains(x, x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn disjoint_union_keeps_bundles(seed in any::<u64>(), k in 0usize..6) {
        let (a, b) = (sys(seed, kind_of(k), "x", 6), sys(seed ^ 1, kind_of(k), "x", 6));
        let u = disjoint_union(&a, &b).unwrap();
        for (side, s) in [("left:", &a), ("right:", &b)] {
            for (x, bundle) in s.steps() {
                let back = u.step(&format!("{side}{x}")).unwrap().rename(|t| t.strip_prefix(side).unwrap().to_string());
                prop_assert_eq!(&back, bundle);
            }
        }
        prop_assert_eq!(u.len(), a.len() + b.len());
    }

    #[test]
    fn render_parse_round_trip(seed in any::<u64>(), k in 0usize..6) {
        let s = sys(seed, kind_of(k), "s", 6);
        let text = render_system(&s);
        let back = parse_system(&text).unwrap();
        prop_assert_eq!(render_system(&back), text);
    }

    #[test]
    fn equality_similarity_is_an_equivalence(seed in any::<u64>(), k in 0usize..6) {
        let c = sys(seed, kind_of(k), "s", 6);
        let sim = largest_simulation(&c, &c, &OrderSpec::Equality).unwrap();
        prop_assert!(is_equivalence_on(&sim, &c));
    }

    #[test]
    fn kernel_similarity_is_an_equivalence(seed in any::<u64>(), a in 0usize..3) {
        let alpha = AlphaKind::ALL[a];
        let c = sys(seed, alpha.domain(), "s", 5);
        let sim = largest_simulation(&c, &c, &OrderSpec::KernelOf(alpha)).unwrap();
        prop_assert!(is_equivalence_on(&sim, &c));
    }

    #[test]
    fn largest_simulation_is_maximal(seed in any::<u64>(), k in 0usize..6) {
        let kind = kind_of(k);
        let (c, d) = (sys(seed, kind, "x", 4), sys(seed.wrapping_add(7), kind, "y", 4));
        let sim = largest_simulation(&c, &d, &OrderSpec::Equality).unwrap();
        prop_assert!(is_simulation(&c, &d, &sim, &OrderSpec::Equality).unwrap().holds);
        for x in c.states() {
            for y in d.states() {
                if !sim.contains(x, y) {
                    let mut more = sim.clone();
                    more.insert(x, y).unwrap();
                    prop_assert!(!is_simulation(&c, &d, &more, &OrderSpec::Equality).unwrap().holds);
                }
            }
        }
    }

    #[test]
    fn canonical_representation_is_a_preimage(seed in any::<u64>(), a in 0usize..3) {
        let alpha = AlphaKind::ALL[a];
        let g = sys(seed, alpha.codomain(), "s", 6);
        let f = canonical_representation(&g).unwrap();
        prop_assert_eq!(f.kind, alpha.domain());
        let img = alpha_image(alpha, &f).unwrap();
        prop_assert_eq!(img.steps().collect::<Vec<_>>(), g.steps().collect::<Vec<_>>());
    }

    #[test]
    fn enumerated_representations_are_distinct_preimages(seed in any::<u64>(), a in 0usize..3) {
        let alpha = AlphaKind::ALL[a];
        let g = sys(seed, alpha.codomain(), "s", 3);
        let Ok(reps) = enumerate_representations(&g, 2, 10_000) else { return Ok(()) };
        let rendered: BTreeSet<String> = reps.iter().map(render_system).collect();
        prop_assert_eq!(rendered.len(), reps.len());
        for r in &reps {
            let img = alpha_image(alpha, r).unwrap();
            prop_assert_eq!(img.steps().collect::<Vec<_>>(), g.steps().collect::<Vec<_>>());
        }
    }

    #[test]
    fn reports_are_deterministic(seed in any::<u64>(), i in 0usize..15) {
        let p = GenParams::default().with_seed(seed);
        let prop = PropertyId::ALL[i];
        let (a, b) = (run_check(prop, &p, 5).unwrap(), run_check(prop, &p, 5).unwrap());
        prop_assert_eq!(a.failures, b.failures);
        prop_assert_eq!(a.counters, b.counters);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn equality_ordered_lifting_is_plain_lifting(seed in any::<u64>(), k in 0usize..6) {
        let kind = kind_of(k);
        let p = GenParams { max_out_degree: 4, ..GenParams::default() };
        let mut rng = instance_rng(seed, 1);
        let (c, d) = (sys(seed, kind, "x", 4), sys(seed ^ 5, kind, "y", 4));
        let targets = |s: &System| s.states().map(str::to_string).collect::<Vec<_>>();
        let u = gen_loose_bundle(&p, kind, &targets(&c), &mut rng);
        let v = gen_loose_bundle(&p, kind, &targets(&d), &mut rng);
        let rel = gen_relation(&c, &d, 0.5, &mut rng);
        prop_assert_eq!(
            lift_ordered_member(&OrderSpec::Equality, kind, &rel, &u, &v).unwrap(),
            lift_member(kind, &rel, &u, &v).unwrap().holds
        );
    }
}
