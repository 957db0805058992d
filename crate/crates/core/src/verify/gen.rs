//! Seeded random systems, bundles, relations and renamings.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Bundle, Kind, Relation, StateTag, System};
use crate::multiset::Multiset;
use crate::rat::Rat;

use super::GenParams;

pub type GenRng = ChaCha8Rng;

const LABELS: [&str; 3] = ["a", "b", "c"];

/// The generator for instance `index` of a run seeded with `seed`.
pub fn instance_rng(seed: u64, index: u64) -> GenRng {
    // splitmix64 of the index keeps neighbouring instances unrelated
    let mut z = index.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    ChaCha8Rng::seed_from_u64(seed ^ z ^ (z >> 31))
}

/// A valid system of `p.kind`, determined by `p` alone.
pub fn gen_system(p: &GenParams) -> System {
    gen_system_with(p, p.kind, &mut ChaCha8Rng::seed_from_u64(p.seed))
}

pub fn gen_system_with(p: &GenParams, kind: Kind, rng: &mut GenRng) -> System {
    gen_named(p, kind, "s", rng)
}

/// Like [`gen_system_with`] with state names `{prefix}0, {prefix}1, ...`.
pub fn gen_named(p: &GenParams, kind: Kind, prefix: &str, rng: &mut GenRng) -> System {
    let n = rng.gen_range(1..=p.max_states);
    let states: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let labels = &LABELS[..rng.gen_range(1..=p.max_labels)];
    let mut sys = System::new(format!("{prefix}-{kind}"), kind);
    for l in labels {
        sys.add_label(*l);
    }
    for s in &states {
        let tag = kind.default_tag().unwrap_or_else(|| if rng.gen_bool(0.5) { StateTag::Nondet } else { StateTag::Prob });
        let bundle = if rng.gen_ratio(1, 5) {
            kind.empty_bundle(tag)
        } else {
            gen_bundle(p, kind, tag, &states, labels, rng)
        };
        sys.insert_state(s.clone(), bundle);
    }
    sys
}

/// A nonempty bundle for a state tagged `tag` in a system of `kind`.
pub fn gen_bundle(p: &GenParams, kind: Kind, tag: StateTag, targets: &[String], labels: &[&str], rng: &mut GenRng) -> Bundle {
    let degree = rng.gen_range(1..=p.max_out_degree);
    let mut elems: BTreeSet<(String, String)> = BTreeSet::new();
    for _ in 0..degree {
        let a = labels.choose(rng).expect("labels nonempty");
        let x = targets.choose(rng).expect("targets nonempty");
        elems.insert((a.to_string(), x.clone()));
    }
    let elems: Vec<(String, String)> = elems.into_iter().collect();
    match kind.empty_bundle(tag) {
        Bundle::Set(_) => Bundle::Set(elems.into_iter().collect()),
        Bundle::Ms(_) => Bundle::Ms(elems.into_iter().map(|e| (e, rng.gen_range(1..=p.max_multiplicity))).collect()),
        Bundle::Dist(_) => {
            let (den, parts) = split_unit(elems.len(), p.max_denominator, rng);
            Bundle::Dist(elems.into_iter().zip(parts).map(|(e, k)| (e, Rat::new(k as i128, den as i128))).collect())
        }
        Bundle::M1(_) => {
            let (den, parts) = split_unit(elems.len(), p.max_denominator, rng);
            let mut m = Multiset::new();
            for ((a, x), k) in elems.into_iter().zip(parts) {
                // k/den carried by n copies of (k/n)/den, n | k
                let divisors: Vec<u64> = (1..=p.max_multiplicity).filter(|n| k % n == 0).collect();
                let n = *divisors.choose(rng).expect("1 divides k");
                m.insert((Rat::new((k / n) as i128, den as i128), a, x), n);
            }
            Bundle::M1(m)
        }
    }
}

/// A denominator `d ≤ max_den` and `len` positive parts summing to `d`.
/// Fewer parts are returned when `max_den < len`.
fn split_unit(len: usize, max_den: u64, rng: &mut GenRng) -> (u64, Vec<u64>) {
    let len = len.min(max_den as usize) as u64;
    let den = rng.gen_range(len..=max_den);
    // choose len-1 distinct cut points in 1..den
    let mut cuts: Vec<u64> = (1..den).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<u64> = cuts.into_iter().take(len as usize - 1).collect();
    cuts.sort_unstable();
    let mut parts = Vec::new();
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(den)) {
        parts.push(c - prev);
        prev = c;
    }
    (den, parts)
}

/// Every pair independently with probability `density`.
pub fn gen_relation(c: &System, d: &System, density: f64, rng: &mut GenRng) -> Relation {
    let mut rel = Relation::empty(c.state_set(), d.state_set());
    for x in c.states() {
        for y in d.states() {
            if rng.gen_bool(density) {
                rel.insert(x, y).expect("states of the carriers");
            }
        }
    }
    rel
}

/// A copy of `sys` in which every state is split into one or two copies
/// `s.0, s.1`, each copy stepping to the copies of the original targets.
/// The returned relation `{(s, s.j)}` is an F-bisimulation.
pub fn gen_variant(sys: &System, rng: &mut GenRng) -> (System, Relation) {
    let copies: BTreeMap<String, usize> = sys.states().map(|s| (s.to_string(), rng.gen_range(1..=2))).collect();
    let name = |s: &str, j: usize| format!("{s}.{j}");
    let mut out = System::new(format!("{}'", sys.name), sys.kind);
    for l in sys.labels() {
        out.add_label(l.clone());
    }
    let mut pairs = Vec::new();
    for (s, b) in sys.steps() {
        for j in 0..copies[s] {
            out.insert_state(name(s, j), split_bundle(b, &copies, rng));
            pairs.push((s.to_string(), name(s, j)));
        }
    }
    let rel = Relation::new(sys.state_set(), out.state_set(), pairs).expect("pairs over the carriers");
    (out, rel)
}

fn split_bundle(b: &Bundle, copies: &BTreeMap<String, usize>, rng: &mut GenRng) -> Bundle {
    let name = |s: &str, j: usize| format!("{s}.{j}");
    match b {
        Bundle::Set(set) => {
            let mut out = BTreeSet::new();
            for (a, x) in set {
                let k = copies[x];
                let first = rng.gen_range(0..k);
                out.insert((a.clone(), name(x, first)));
                for j in 0..k {
                    if j != first && rng.gen_bool(0.5) {
                        out.insert((a.clone(), name(x, j)));
                    }
                }
            }
            Bundle::Set(out)
        }
        Bundle::Ms(m) => {
            let mut out = Multiset::new();
            for ((a, x), &n) in m.iter() {
                for _ in 0..n {
                    out.insert((a.clone(), name(x, rng.gen_range(0..copies[x]))), 1);
                }
            }
            Bundle::Ms(out)
        }
        Bundle::M1(m) => {
            let mut out = Multiset::new();
            for ((p, a, x), &n) in m.iter() {
                for _ in 0..n {
                    out.insert((*p, a.clone(), name(x, rng.gen_range(0..copies[x]))), 1);
                }
            }
            Bundle::M1(out)
        }
        Bundle::Dist(d) => {
            let mut out = crate::distribution::Distribution::new();
            for ((a, x), &p) in d.iter() {
                if copies[x] == 2 && rng.gen_bool(0.5) {
                    let share = Rat::new(rng.gen_range(1..=2), 3);
                    out.add((a.clone(), name(x, 0)), p * share);
                    out.add((a.clone(), name(x, 1)), p * (Rat::ONE - share));
                } else {
                    out.add((a.clone(), name(x, rng.gen_range(0..copies[x]))), p);
                }
            }
            Bundle::Dist(out)
        }
    }
}

/// A bundle with the same image under every applicable α: multiset counts
/// are redrawn, and the mass of each `(label, target)` of an `M₁` bundle is
/// carried by a fresh number of equal copies. Sets and distributions are
/// returned unchanged.
pub fn rerepresent(b: &Bundle, max_mult: u64, rng: &mut GenRng) -> Bundle {
    match b {
        Bundle::Ms(m) => Bundle::Ms(m.elements().map(|e| (e.clone(), rng.gen_range(1..=max_mult))).collect()),
        Bundle::M1(m) => {
            let mut mass: BTreeMap<(String, String), Rat> = BTreeMap::new();
            for ((p, a, x), &n) in m.iter() {
                *mass.entry((a.clone(), x.clone())).or_default() += *p * Rat::from(n);
            }
            let mut out = Multiset::new();
            for ((a, x), total) in mass {
                let n = rng.gen_range(1..=max_mult);
                out.insert((total / Rat::from(n), a, x), n);
            }
            Bundle::M1(out)
        }
        Bundle::Set(_) | Bundle::Dist(_) => b.clone(),
    }
}

/// Applies [`rerepresent`] to every bundle.
pub fn rerepresent_system(sys: &System, max_mult: u64, rng: &mut GenRng) -> System {
    sys.map_bundles(sys.kind, |b| Ok(rerepresent(b, max_mult, rng))).expect("infallible")
}

/// A random F-representation of a G-system: the canonical one with every
/// bundle re-represented.
pub fn gen_representation(g: &System, max_mult: u64, rng: &mut GenRng) -> System {
    let canon = crate::transforms::canonical_representation(g).expect("G-kind system");
    rerepresent_system(&canon, max_mult, rng)
}

/// A map from `states` onto a random subset of fresh names `t0, t1, ...`.
pub fn gen_renaming(states: &BTreeSet<String>, rng: &mut GenRng) -> BTreeMap<String, String> {
    let k = rng.gen_range(1..=states.len().max(1));
    states.iter().map(|s| (s.clone(), format!("t{}", rng.gen_range(0..k)))).collect()
}

/// A random bundle of `kind`'s shape over `targets`, possibly empty.
pub fn gen_loose_bundle(p: &GenParams, kind: Kind, targets: &[String], rng: &mut GenRng) -> Bundle {
    let tag = kind.default_tag().unwrap_or_else(|| if rng.gen_bool(0.5) { StateTag::Nondet } else { StateTag::Prob });
    if rng.gen_ratio(1, 8) {
        return kind.empty_bundle(tag);
    }
    let labels = &LABELS[..p.max_labels];
    gen_bundle(p, kind, tag, targets, labels, rng)
}
