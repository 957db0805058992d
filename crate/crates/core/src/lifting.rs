//! Membership in the relation lifting `Rel(F)(R)` of each bundle functor and
//! in the order-relaxed lifting `Rel(F)_⊑(R) = ⊑ ∘ Rel(F)(R) ∘ ⊑`.
//!
//! Every kind is decided by a coupling: a weighting of element pairs that
//! respects the relation (and label, and for `M₁` weight equality) and whose
//! marginals reproduce both bundles. Multisets need an integral coupling,
//! distributions a rational one; both come out of the same exact max-flow.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::model::{Bundle, Kind, Relation};
use crate::order::OrderSpec;
use crate::rat::Rat;

/// Largest support the subset oracle accepts on either side.
pub const SUBSET_ORACLE_CAP: usize = 10;

/// One element of a bundle's support. `weight` is the probability component
/// of an `M₁` element and `None` otherwise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    pub weight: Option<Rat>,
    pub label: String,
    pub state: String,
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.weight {
            Some(p) => write!(f, "({p},{},{})", self.label, self.state),
            None => write!(f, "({},{})", self.label, self.state),
        }
    }
}

/// Support elements of a bundle with their count or mass.
pub fn elements(b: &Bundle) -> Vec<(Elem, Rat)> {
    let plain = |a: &String, x: &String| Elem { weight: None, label: a.clone(), state: x.clone() };
    match b {
        Bundle::Set(s) => s.iter().map(|(a, x)| (plain(a, x), Rat::ONE)).collect(),
        Bundle::Ms(m) => m.iter().map(|((a, x), &n)| (plain(a, x), Rat::from(n))).collect(),
        Bundle::M1(m) => m
            .iter()
            .map(|((p, a, x), &n)| (Elem { weight: Some(*p), label: a.clone(), state: x.clone() }, Rat::from(n)))
            .collect(),
        Bundle::Dist(d) => d.iter().map(|((a, x), &p)| (plain(a, x), p)).collect(),
    }
}

/// A witness `w ∈ F(R)` presented as weights on pairs of support elements.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Coupling {
    weights: BTreeMap<(Elem, Elem), Rat>,
}

impl Coupling {
    pub fn weights(&self) -> &BTreeMap<(Elem, Elem), Rat> {
        &self.weights
    }

    pub fn left_marginal(&self) -> BTreeMap<Elem, Rat> {
        let mut out: BTreeMap<Elem, Rat> = BTreeMap::new();
        for ((l, _), w) in &self.weights {
            *out.entry(l.clone()).or_default() += *w;
        }
        out
    }

    pub fn right_marginal(&self) -> BTreeMap<Elem, Rat> {
        let mut out: BTreeMap<Elem, Rat> = BTreeMap::new();
        for ((_, r), w) in &self.weights {
            *out.entry(r.clone()).or_default() += *w;
        }
        out
    }

    pub fn transpose(&self) -> Coupling {
        Coupling { weights: self.weights.iter().map(|((l, r), w)| ((r.clone(), l.clone()), *w)).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftVerdict {
    pub holds: bool,
    pub witness: Option<Coupling>,
}

impl LiftVerdict {
    fn no() -> Self {
        LiftVerdict { holds: false, witness: None }
    }
}

/// Whether a pair of elements may carry coupling weight under `rel`.
pub fn pair_allowed(rel: &Relation, l: &Elem, r: &Elem) -> bool {
    l.label == r.label && l.weight == r.weight && rel.contains(&l.state, &r.state)
}

fn check_carriers(rel: &Relation, u: &Bundle, v: &Bundle) -> Result<()> {
    for (_, x) in u.transitions() {
        if !rel.left().contains(x) {
            return Err(Error::OutsideCarrier(x.to_string()));
        }
    }
    for (_, y) in v.transitions() {
        if !rel.right().contains(y) {
            return Err(Error::OutsideCarrier(y.to_string()));
        }
    }
    Ok(())
}

fn check_kind(kind: Kind, b: &Bundle) -> Result<()> {
    if kind.admits(b) {
        Ok(())
    } else {
        Err(Error::KindMismatch { expected: format!("{kind} bundle"), found: b.shape().to_string() })
    }
}

/// Decides `(u, v) ∈ Rel(F)(R)` for the functor of `kind`, returning a
/// coupling witness when it holds. Alternating kinds are coproducts: bundles
/// of different shapes are never related.
pub fn lift_member(kind: Kind, rel: &Relation, u: &Bundle, v: &Bundle) -> Result<LiftVerdict> {
    check_kind(kind, u)?;
    check_kind(kind, v)?;
    check_carriers(rel, u, v)?;
    if u.shape() != v.shape() {
        return Ok(LiftVerdict::no());
    }
    let left = elements(u);
    let right = elements(v);
    if let Bundle::Set(_) = u {
        return Ok(lift_sets(rel, &left, &right));
    }
    Ok(match couple(rel, &left, &right) {
        Some(c) => LiftVerdict { holds: true, witness: Some(c) },
        None => LiftVerdict::no(),
    })
}

fn lift_sets(rel: &Relation, left: &[(Elem, Rat)], right: &[(Elem, Rat)]) -> LiftVerdict {
    let forward = left.iter().all(|(l, _)| right.iter().any(|(r, _)| pair_allowed(rel, l, r)));
    let backward = right.iter().all(|(r, _)| left.iter().any(|(l, _)| pair_allowed(rel, l, r)));
    if !(forward && backward) {
        return LiftVerdict::no();
    }
    let mut weights = BTreeMap::new();
    for (l, _) in left {
        for (r, _) in right {
            if pair_allowed(rel, l, r) {
                weights.insert((l.clone(), r.clone()), Rat::ONE);
            }
        }
    }
    LiftVerdict { holds: true, witness: Some(Coupling { weights }) }
}

/// A coupling of the two weighted supports, found by exact max-flow.
fn couple(rel: &Relation, left: &[(Elem, Rat)], right: &[(Elem, Rat)]) -> Option<Coupling> {
    let total: Rat = left.iter().map(|(_, w)| *w).sum();
    if total != right.iter().map(|(_, w)| *w).sum::<Rat>() {
        return None;
    }
    let (source, sink) = (0, 1 + left.len() + right.len());
    let mut net = FlowNetwork::new(sink + 1);
    for (i, (_, w)) in left.iter().enumerate() {
        net.add_edge(source, 1 + i, *w);
    }
    for (j, (_, w)) in right.iter().enumerate() {
        net.add_edge(1 + left.len() + j, sink, *w);
    }
    let mut middle = Vec::new();
    for (i, (l, _)) in left.iter().enumerate() {
        for (j, (r, _)) in right.iter().enumerate() {
            if pair_allowed(rel, l, r) {
                middle.push((i, j, net.add_edge(1 + i, 1 + left.len() + j, total)));
            }
        }
    }
    if net.max_flow(source, sink) != total {
        return None;
    }
    let weights = middle
        .into_iter()
        .filter_map(|(i, j, e)| {
            let f = net.flow(e);
            f.is_positive().then(|| ((left[i].0.clone(), right[j].0.clone()), f))
        })
        .collect();
    Some(Coupling { weights })
}

/// Decides the distribution lifting by its subset formulation: for all
/// `U ⊆ supp(u)`, `V ⊆ supp(v)` with `Π₁⁻¹(U) = Π₂⁻¹(V)` over the related
/// element pairs, `u(U) = v(V)`.
///
/// Subsets are restricted to the supports: elements outside carry no mass.
pub fn lift_dist_subsets_member(rel: &Relation, u: &Bundle, v: &Bundle) -> Result<bool> {
    for b in [u, v] {
        if !matches!(b, Bundle::Dist(_)) {
            return Err(Error::KindMismatch { expected: "dist bundle".into(), found: b.shape().into() });
        }
        if b.support_len() > SUBSET_ORACLE_CAP {
            return Err(Error::SupportCap { size: b.support_len(), cap: SUBSET_ORACLE_CAP });
        }
    }
    check_carriers(rel, u, v)?;
    let left = elements(u);
    let right = elements(v);
    let mut pairs = Vec::new();
    for (i, (l, _)) in left.iter().enumerate() {
        for (j, (r, _)) in right.iter().enumerate() {
            if pair_allowed(rel, l, r) {
                pairs.push((i, j));
            }
        }
    }
    // pair bitmask of Π₁⁻¹(U) / Π₂⁻¹(V) for every subset, plus its mass
    let preimages = |side: &[(Elem, Rat)], pick: fn(&(usize, usize)) -> usize| -> Vec<(u128, Rat)> {
        (0u32..1 << side.len())
            .map(|set| {
                let mask = pairs
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| set & (1 << pick(p)) != 0)
                    .fold(0u128, |m, (k, _)| m | (1 << k));
                let mass = side.iter().enumerate().filter(|(i, _)| set & (1 << i) != 0).map(|(_, (_, w))| *w).sum();
                (mask, mass)
            })
            .collect()
    };
    let us = preimages(&left, |p| p.0);
    let vs = preimages(&right, |p| p.1);
    let mut by_mask: BTreeMap<u128, Vec<Rat>> = BTreeMap::new();
    for (mask, mass) in vs {
        by_mask.entry(mask).or_default().push(mass);
    }
    Ok(us.iter().all(|(mask, mass)| by_mask.get(mask).is_none_or(|ms| ms.iter().all(|m| m == mass))))
}

/// Decides `(u, v) ∈ Rel(F)_⊑(R)`.
///
/// Kernel and induced orders are decided on the G-side as
/// `(α(u), α(v)) ∈ Rel(G)_{⊑_G}(R)`; `verify::witness` holds an independent
/// search over `F(R)` that cross-checks this.
pub fn lift_ordered_member(ord: &OrderSpec, kind: Kind, rel: &Relation, u: &Bundle, v: &Bundle) -> Result<bool> {
    ord.check_applicable(kind)?;
    check_kind(kind, u)?;
    check_kind(kind, v)?;
    match ord {
        OrderSpec::Equality => Ok(lift_member(kind, rel, u, v)?.holds),
        OrderSpec::PowersetInclusion => {
            check_carriers(rel, u, v)?;
            match (u, v) {
                // ∃W. U ⊆ π₁W ∧ π₂W ⊆ V  ⟺  every element of U has a partner in V
                (Bundle::Set(_), Bundle::Set(_)) => {
                    let right = elements(v);
                    Ok(elements(u).iter().all(|(l, _)| right.iter().any(|(r, _)| pair_allowed(rel, l, r))))
                }
                (Bundle::Dist(_), Bundle::Dist(_)) => Ok(lift_member(kind, rel, u, v)?.holds),
                _ => Ok(false),
            }
        }
        OrderSpec::KernelOf(alpha) => {
            Ok(lift_member(alpha.codomain(), rel, &alpha.apply(u)?, &alpha.apply(v)?)?.holds)
        }
        OrderSpec::InducedFrom(alpha, base) => {
            lift_ordered_member(base, alpha.codomain(), rel, &alpha.apply(u)?, &alpha.apply(v)?)
        }
        OrderSpec::Extensional(ext) => {
            check_carriers(rel, u, v)?;
            let fits = |b: &Bundle, side: &std::collections::BTreeSet<String>| {
                kind.admits(b) && b.transitions().iter().all(|(_, x)| side.contains(*x))
            };
            for up in ext.above(u).filter(|b| fits(b, rel.left())) {
                for down in ext.below(v).filter(|b| fits(b, rel.right())) {
                    if lift_member(kind, rel, up, down)?.holds {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build::{dist, m1, ms, r as q, set};
    use crate::order::ExtensionalOrder;
    use crate::transforms::AlphaKind;
    use std::collections::BTreeSet;

    fn states(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn rel(left: &[&str], right: &[&str], pairs: &[(&str, &str)]) -> Relation {
        Relation::new(states(left), states(right), pairs.iter().map(|(x, y)| (x.to_string(), y.to_string())))
            .unwrap()
    }

    fn r_xy() -> Relation {
        rel(&["x", "x1"], &["y", "y1", "y2"], &[("x1", "y1"), ("x1", "y2")])
    }

    fn assert_sound(u: &Bundle, v: &Bundle, r: &Relation, verdict: &LiftVerdict) {
        let w = verdict.witness.as_ref().expect("witness");
        let to_map = |b: &Bundle| elements(b).into_iter().collect::<BTreeMap<_, _>>();
        if let Bundle::Set(_) = u {
            let lk: BTreeSet<_> = w.left_marginal().into_keys().collect();
            let rk: BTreeSet<_> = w.right_marginal().into_keys().collect();
            assert_eq!(lk, to_map(u).into_keys().collect());
            assert_eq!(rk, to_map(v).into_keys().collect());
        } else {
            assert_eq!(w.left_marginal(), to_map(u));
            assert_eq!(w.right_marginal(), to_map(v));
        }
        for (l, rr) in w.weights().keys() {
            assert!(pair_allowed(r, l, rr));
        }
    }

    #[test]
    fn powerset_lifting_of_s_x_and_s_y() {
        let (u, v) = (set([("a", "x1")]), set([("a", "y1"), ("a", "y2")]));
        let verdict = lift_member(Kind::Lts, &r_xy(), &u, &v).unwrap();
        assert!(verdict.holds);
        assert_sound(&u, &v, &r_xy(), &verdict);
    }

    #[test]
    fn canonical_multisets_have_no_coupling() {
        let (u, v) = (ms([(1, "a", "x1")]), ms([(1, "a", "y1"), (1, "a", "y2")]));
        assert!(!lift_member(Kind::Mts, &r_xy(), &u, &v).unwrap().holds);
    }

    #[test]
    fn doubled_multiset_couples() {
        let (u, v) = (ms([(2, "a", "x1")]), ms([(1, "a", "y1"), (1, "a", "y2")]));
        let verdict = lift_member(Kind::Mts, &r_xy(), &u, &v).unwrap();
        assert!(verdict.holds);
        assert_sound(&u, &v, &r_xy(), &verdict);
        let e = |s: &str| Elem { weight: None, label: "a".into(), state: s.into() };
        let expected: BTreeMap<_, _> =
            [((e("x1"), e("y1")), Rat::ONE), ((e("x1"), e("y2")), Rat::ONE)].into_iter().collect();
        assert_eq!(verdict.witness.unwrap().weights(), &expected);
    }

    #[test]
    fn m1_weights_must_match() {
        let r = rel(&["x"], &["y"], &[("x", "y")]);
        let (u, v) = (m1([(1, q(1, 1), "a", "x")]), m1([(2, q(1, 2), "a", "y")]));
        assert!(!lift_member(Kind::Pmts, &r, &u, &v).unwrap().holds);
    }

    fn half_third() -> (Relation, Bundle, Bundle) {
        let pairs: Vec<(&str, &str)> =
            ["x1", "x2"].iter().flat_map(|x| ["y1", "y2", "y3"].map(move |y| (*x, y))).collect();
        let r = rel(&["x", "x1", "x2"], &["y", "y1", "y2", "y3"], &pairs);
        let u = dist([(q(1, 2), "a", "x1"), (q(1, 2), "a", "x2")]);
        let v = dist([(q(1, 3), "a", "y1"), (q(1, 3), "a", "y2"), (q(1, 3), "a", "y3")]);
        (r, u, v)
    }

    #[test]
    fn halves_and_thirds_couple() {
        let (r, u, v) = half_third();
        let verdict = lift_member(Kind::Dts, &r, &u, &v).unwrap();
        assert!(verdict.holds);
        assert_sound(&u, &v, &r, &verdict);
        assert!(lift_dist_subsets_member(&r, &u, &v).unwrap());
    }

    #[test]
    fn subset_oracle_on_empty_relation() {
        let r = rel(&["x"], &["y"], &[]);
        let (u, v) = (dist([(q(1, 1), "a", "x")]), dist([(q(1, 1), "a", "y")]));
        assert!(!lift_dist_subsets_member(&r, &u, &v).unwrap());
        assert!(!lift_member(Kind::Dts, &r, &u, &v).unwrap().holds);
    }

    #[test]
    fn subset_oracle_support_cap() {
        let names: Vec<String> = (0..11).map(|i| format!("s{i}")).collect();
        let carrier: BTreeSet<String> = names.iter().cloned().collect();
        let r = Relation::empty(carrier.clone(), carrier);
        let u = Bundle::Dist(names.iter().map(|s| (("a".to_string(), s.clone()), q(1, 11))).collect());
        assert!(matches!(lift_dist_subsets_member(&r, &u, &u), Err(Error::SupportCap { size: 11, cap: 10 })));
    }

    /// Exhaustive comparison over supports of size ≤ 3, masses with
    /// denominators ≤ 4 and every difunctional relation between the supports.
    #[test]
    fn subset_oracle_agrees_with_coupling_on_difunctional_relations() {
        let dists = small_dists(3, 4);
        let mut checked = 0;
        for (nl, du) in &dists {
            for (nr, dv) in &dists {
                let ls: Vec<String> = (0..*nl).map(|i| format!("x{i}")).collect();
                let rs: Vec<String> = (0..*nr).map(|i| format!("y{i}")).collect();
                let u = Bundle::Dist(ls.iter().zip(du).map(|(s, p)| (("a".into(), s.clone()), *p)).collect());
                let v = Bundle::Dist(rs.iter().zip(dv).map(|(s, p)| (("a".into(), s.clone()), *p)).collect());
                for mask in 0u32..1 << (nl * nr) {
                    let pairs: Vec<(String, String)> = (0..nl * nr)
                        .filter(|k| mask & (1 << k) != 0)
                        .map(|k| (ls[k / nr].clone(), rs[k % nr].clone()))
                        .collect();
                    let r = Relation::new(ls.iter().cloned().collect(), rs.iter().cloned().collect(), pairs).unwrap();
                    if !is_difunctional(&r) {
                        continue;
                    }
                    checked += 1;
                    assert_eq!(
                        lift_member(Kind::Dts, &r, &u, &v).unwrap().holds,
                        lift_dist_subsets_member(&r, &u, &v).unwrap(),
                        "{u:?} {v:?} {r:?}"
                    );
                }
            }
        }
        assert!(checked > 1000);
    }

    /// The subset formulation only constrains unions of connected components of
    /// the element relation, so it accepts pairs no coupling can witness when
    /// the relation is not difunctional.
    #[test]
    fn subset_oracle_is_weaker_on_zigzag_relations() {
        let r = rel(&["x", "z"], &["y", "w"], &[("x", "y"), ("z", "y"), ("z", "w")]);
        let u = dist([(q(2, 3), "a", "x"), (q(1, 3), "a", "z")]);
        let v = dist([(q(1, 3), "a", "y"), (q(2, 3), "a", "w")]);
        assert!(!lift_member(Kind::Dts, &r, &u, &v).unwrap().holds);
        assert!(lift_dist_subsets_member(&r, &u, &v).unwrap());
    }

    fn is_difunctional(r: &Relation) -> bool {
        // R ∘ R⁻¹ ∘ R ⊆ R
        r.iter().all(|(x, y)| {
            r.iter().filter(|(_, y2)| *y2 == y).all(|(x2, _)| {
                r.iter().filter(|(x3, _)| *x3 == x2).all(|(_, y3)| r.contains(x, y3))
            })
        })
    }

    /// All mass vectors of length ≤ `len` with positive entries k/d, d ≤ `max_den`, summing to 1.
    fn small_dists(len: usize, max_den: i128) -> Vec<(usize, Vec<Rat>)> {
        let mut out = BTreeSet::new();
        for d in 1..=max_den {
            fn compose(rest: i128, parts: usize, d: i128, acc: &mut Vec<Rat>, out: &mut BTreeSet<Vec<Rat>>) {
                if parts == 1 {
                    if rest > 0 {
                        acc.push(Rat::new(rest, d));
                        out.insert(acc.clone());
                        acc.pop();
                    }
                    return;
                }
                for k in 1..rest {
                    acc.push(Rat::new(k, d));
                    compose(rest - k, parts - 1, d, acc, out);
                    acc.pop();
                }
            }
            for parts in 1..=len {
                compose(d, parts, d, &mut Vec::new(), &mut out);
            }
        }
        out.into_iter().map(|v| (v.len(), v)).collect()
    }

    #[test]
    fn lifting_rejects_bad_inputs() {
        let r = r_xy();
        assert!(matches!(lift_member(Kind::Lts, &r, &ms([]), &set([])), Err(Error::KindMismatch { .. })));
        assert!(matches!(
            lift_member(Kind::Lts, &r, &set([("a", "nowhere")]), &set([])),
            Err(Error::OutsideCarrier(_))
        ));
    }

    #[test]
    fn alternating_shapes_never_relate() {
        let r = rel(&["x"], &["y"], &[("x", "y")]);
        assert!(!lift_member(Kind::AltGts, &r, &set([]), &dist([])).unwrap().holds);
        assert!(lift_member(Kind::AltGts, &r, &dist([]), &dist([])).unwrap().holds);
    }

    #[test]
    fn ordered_lifting_examples() {
        let r = r_xy();
        let (u, v) = (ms([(1, "a", "x1")]), ms([(1, "a", "y1"), (1, "a", "y2")]));
        let kernel = OrderSpec::KernelOf(AlphaKind::Support);
        assert!(lift_ordered_member(&kernel, Kind::Mts, &r, &u, &v).unwrap());
        assert!(!lift_ordered_member(&OrderSpec::Equality, Kind::Mts, &r, &u, &v).unwrap());

        let rp = rel(&["x"], &["y"], &[("x", "y")]);
        let (pa, pb) = (m1([(1, q(1, 1), "a", "x")]), m1([(2, q(1, 2), "a", "y")]));
        assert!(lift_ordered_member(&OrderSpec::KernelOf(AlphaKind::Dm), Kind::Pmts, &rp, &pa, &pb).unwrap());

        assert!(matches!(
            lift_ordered_member(&OrderSpec::KernelOf(AlphaKind::Dm), Kind::Mts, &r, &u, &v),
            Err(Error::OrderMismatch { .. })
        ));
    }

    #[test]
    fn inclusion_lifting_is_forward_simulation() {
        let r = r_xy();
        let ord = OrderSpec::PowersetInclusion;
        let (u, v) = (set([("a", "x1")]), set([("a", "y1"), ("b", "y2")]));
        assert!(lift_ordered_member(&ord, Kind::Lts, &r, &u, &v).unwrap());
        assert!(!lift_ordered_member(&ord, Kind::Lts, &r, &v_to_left(), &u_right()).unwrap());
        assert!(!lift_member(Kind::Lts, &r, &u, &v).unwrap().holds);
    }

    fn v_to_left() -> Bundle {
        set([("a", "x1"), ("b", "x1")])
    }

    fn u_right() -> Bundle {
        set([("a", "y1")])
    }

    #[test]
    fn extensional_lifting_uses_comparable_bundles() {
        let r = r_xy();
        let (u, v) = (ms([(1, "a", "x1")]), ms([(1, "a", "y1"), (1, "a", "y2")]));
        let doubled = ms([(2, "a", "x1")]);
        let ord = OrderSpec::Extensional(ExtensionalOrder::closure([], [(u.clone(), doubled)]));
        assert!(lift_ordered_member(&ord, Kind::Mts, &r, &u, &v).unwrap());
        let ident = OrderSpec::Extensional(ExtensionalOrder::identity([u.clone(), v.clone()]));
        assert!(!lift_ordered_member(&ident, Kind::Mts, &r, &u, &v).unwrap());
    }
}
