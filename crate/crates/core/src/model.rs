//! Finite coalgebras: the six system kinds, their successor bundles, and the
//! relations and partitions used to compare states.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::multiset::Multiset;
use crate::rat::Rat;

pub type StateId = String;
pub type Label = String;

/// A labelled transition `(label, target)`.
pub type Trans = (Label, StateId);

/// A probabilistic transition `(p, label, target)`.
pub type WeightedTrans = (Rat, Label, StateId);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// `P(A×X)`
    Lts,
    /// `M(A×X)`
    Mts,
    /// `M₁([0,1]×A×X)`
    Pmts,
    /// `D(A×X)`
    Dts,
    /// `M(A×X) + M₁([0,1]×A×X)`
    AltMts,
    /// `P(A×X) + D(A×X)`
    AltGts,
}

impl Kind {
    pub const ALL: [Kind; 6] = [Kind::Lts, Kind::Mts, Kind::Pmts, Kind::Dts, Kind::AltMts, Kind::AltGts];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Lts => "lts",
            Kind::Mts => "mts",
            Kind::Pmts => "pmts",
            Kind::Dts => "dts",
            Kind::AltMts => "alt-mts",
            Kind::AltGts => "alt-gts",
        }
    }

    pub fn is_alternating(self) -> bool {
        matches!(self, Kind::AltMts | Kind::AltGts)
    }

    /// Whether a bundle of this shape may appear in a system of this kind.
    pub fn admits(self, bundle: &Bundle) -> bool {
        matches!(
            (self, bundle),
            (Kind::Lts, Bundle::Set(_))
                | (Kind::Mts, Bundle::Ms(_))
                | (Kind::Pmts, Bundle::M1(_))
                | (Kind::Dts, Bundle::Dist(_))
                | (Kind::AltMts, Bundle::Ms(_) | Bundle::M1(_))
                | (Kind::AltGts, Bundle::Set(_) | Bundle::Dist(_))
        )
    }

    /// The successor bundle of a state without transitions.
    pub fn empty_bundle(self, tag: StateTag) -> Bundle {
        match (self, tag) {
            (Kind::Lts, _) | (Kind::AltGts, StateTag::Nondet) => Bundle::Set(BTreeSet::new()),
            (Kind::Mts, _) | (Kind::AltMts, StateTag::Nondet) => Bundle::Ms(Multiset::new()),
            (Kind::Pmts, _) | (Kind::AltMts, StateTag::Prob) => Bundle::M1(Multiset::new()),
            (Kind::Dts, _) | (Kind::AltGts, StateTag::Prob) => Bundle::Dist(Distribution::new()),
        }
    }

    /// The tag every state of a non-alternating kind carries.
    pub fn default_tag(self) -> Option<StateTag> {
        match self {
            Kind::Lts | Kind::Mts => Some(StateTag::Nondet),
            Kind::Pmts | Kind::Dts => Some(StateTag::Prob),
            Kind::AltMts | Kind::AltGts => None,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Kind, String> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown system kind `{s}`"))
    }
}

/// Whether a state of an alternating system offers a nondeterministic or a
/// probabilistic choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StateTag {
    Nondet,
    Prob,
}

impl StateTag {
    pub fn name(self) -> &'static str {
        match self {
            StateTag::Nondet => "nondet",
            StateTag::Prob => "prob",
        }
    }
}

/// The successor structure of one state.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bundle {
    Set(BTreeSet<Trans>),
    Ms(Multiset<Trans>),
    M1(Multiset<WeightedTrans>),
    Dist(Distribution<Trans>),
}

impl Bundle {
    pub fn tag(&self) -> StateTag {
        match self {
            Bundle::Set(_) | Bundle::Ms(_) => StateTag::Nondet,
            Bundle::M1(_) | Bundle::Dist(_) => StateTag::Prob,
        }
    }

    pub fn shape(&self) -> &'static str {
        match self {
            Bundle::Set(_) => "set",
            Bundle::Ms(_) => "multiset",
            Bundle::M1(_) => "m1",
            Bundle::Dist(_) => "dist",
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Bundle::Set(s) => s.is_empty(),
            Bundle::Ms(m) => m.is_empty(),
            Bundle::M1(m) => m.is_empty(),
            Bundle::Dist(d) => d.is_empty(),
        }
    }

    /// Number of distinct elements in the support.
    pub fn support_len(&self) -> usize {
        match self {
            Bundle::Set(s) => s.len(),
            Bundle::Ms(m) => m.support_len(),
            Bundle::M1(m) => m.support_len(),
            Bundle::Dist(d) => d.support_len(),
        }
    }

    /// `(label, target)` of every element of the support, in order.
    pub fn transitions(&self) -> Vec<(&str, &str)> {
        match self {
            Bundle::Set(s) => s.iter().map(|(a, x)| (a.as_str(), x.as_str())).collect(),
            Bundle::Ms(m) => m.elements().map(|(a, x)| (a.as_str(), x.as_str())).collect(),
            Bundle::M1(m) => m.elements().map(|(_, a, x)| (a.as_str(), x.as_str())).collect(),
            Bundle::Dist(d) => d.elements().map(|(a, x)| (a.as_str(), x.as_str())).collect(),
        }
    }

    /// Functor action of a state renaming `f` on this bundle.
    pub fn rename<F>(&self, mut f: F) -> Bundle
    where
        F: FnMut(&str) -> String,
    {
        match self {
            Bundle::Set(s) => Bundle::Set(s.iter().map(|(a, x)| (a.clone(), f(x))).collect()),
            Bundle::Ms(m) => Bundle::Ms(m.map(|(a, x)| (a.clone(), f(x)))),
            Bundle::M1(m) => Bundle::M1(m.map(|(p, a, x)| (*p, a.clone(), f(x)))),
            Bundle::Dist(d) => Bundle::Dist(d.map(|(a, x)| (a.clone(), f(x)))),
        }
    }
}

impl fmt::Debug for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bundle::Set(s) => write!(f, "Set{s:?}"),
            Bundle::Ms(m) => write!(f, "Ms{m:?}"),
            Bundle::M1(m) => write!(f, "M1{m:?}"),
            Bundle::Dist(d) => write!(f, "Dist{d:?}"),
        }
    }
}

/// A finite coalgebra. States keep their declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    pub name: String,
    pub kind: Kind,
    labels: BTreeSet<Label>,
    steps: IndexMap<StateId, Bundle>,
}

impl System {
    pub fn new(name: impl Into<String>, kind: Kind) -> System {
        System { name: name.into(), kind, labels: BTreeSet::new(), steps: IndexMap::new() }
    }

    /// Builds a system from `(state, bundle)` pairs; the label alphabet is the
    /// set of labels used.
    pub fn from_bundles<S, I>(name: impl Into<String>, kind: Kind, bundles: I) -> System
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, Bundle)>,
    {
        let mut sys = System::new(name, kind);
        for (s, b) in bundles {
            sys.insert_state(s.into(), b);
        }
        sys
    }

    /// Adds or replaces a state and its bundle, extending the alphabet with
    /// the bundle's labels.
    pub fn insert_state(&mut self, id: StateId, bundle: Bundle) {
        for (a, _) in bundle.transitions() {
            if !self.labels.contains(a) {
                self.labels.insert(a.to_string());
            }
        }
        self.steps.insert(id, bundle);
    }

    pub fn add_label(&mut self, label: impl Into<String>) {
        self.labels.insert(label.into());
    }

    pub fn labels(&self) -> &BTreeSet<Label> {
        &self.labels
    }

    pub fn states(&self) -> impl Iterator<Item = &str> + '_ {
        self.steps.keys().map(String::as_str)
    }

    pub fn state_set(&self) -> BTreeSet<StateId> {
        self.steps.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.steps.contains_key(id)
    }

    pub fn step(&self, id: &str) -> Option<&Bundle> {
        self.steps.get(id)
    }

    pub fn steps(&self) -> impl Iterator<Item = (&str, &Bundle)> + '_ {
        self.steps.iter().map(|(s, b)| (s.as_str(), b))
    }

    /// Total number of distinct transitions over all bundles.
    pub fn transition_count(&self) -> usize {
        self.steps.values().map(Bundle::support_len).sum()
    }

    /// Replaces every bundle, keeping states and alphabet.
    pub fn map_bundles<F>(&self, kind: Kind, mut f: F) -> Result<System>
    where
        F: FnMut(&Bundle) -> Result<Bundle>,
    {
        let mut out = System::new(self.name.clone(), kind);
        out.labels = self.labels.clone();
        for (s, b) in &self.steps {
            out.steps.insert(s.clone(), f(b)?);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    BundleShape,
    DanglingTarget,
    UnknownLabel,
    ProbabilityRange,
    MassNotOne,
}

/// One violated invariant, naming the offending state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub state: StateId,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Checks every system invariant; an empty result means the system is valid.
pub fn validate_system(sys: &System) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (state, bundle) in sys.steps() {
        let mut diag = |rule, message: String| {
            out.push(Diagnostic { state: state.to_string(), rule, message });
        };
        if !sys.kind.admits(bundle) {
            diag(
                Rule::BundleShape,
                format!("{} bundle at {state} is not allowed in a {} system", bundle.shape(), sys.kind),
            );
        }
        for (a, x) in bundle.transitions() {
            if !sys.contains(x) {
                diag(Rule::DanglingTarget, format!("transition {state} -{a}-> {x} targets an undeclared state"));
            }
            if !sys.labels.contains(a) {
                diag(Rule::UnknownLabel, format!("label {a} at {state} is not in the alphabet"));
            }
        }
        let total = match bundle {
            Bundle::M1(m) => {
                for ((p, a, x), _) in m {
                    if !p.is_positive() || *p > Rat::ONE {
                        diag(
                            Rule::ProbabilityRange,
                            format!("probability {p} of {state} -{a}-> {x} is outside (0,1]"),
                        );
                    }
                }
                Some(m.iter().map(|((p, _, _), &n)| *p * Rat::from(n)).sum::<Rat>())
            }
            Bundle::Dist(d) => Some(d.total()),
            _ => None,
        };
        if let Some(total) = total {
            if !bundle.is_empty() && total != Rat::ONE {
                diag(Rule::MassNotOne, format!("probability mass {total} ≠ 1 at {state}"));
            }
        }
    }
    out
}

pub const LEFT_TAG: &str = "left:";
pub const RIGHT_TAG: &str = "right:";

/// Tagged union of two systems of the same kind.
pub fn disjoint_union(s1: &System, s2: &System) -> Result<System> {
    if s1.kind != s2.kind {
        return Err(Error::KindMismatch { expected: s1.kind.to_string(), found: s2.kind.to_string() });
    }
    let mut out = System::new(format!("{}+{}", s1.name, s2.name), s1.kind);
    for (prefix, sys) in [(LEFT_TAG, s1), (RIGHT_TAG, s2)] {
        for l in &sys.labels {
            out.labels.insert(l.clone());
        }
        for (s, b) in &sys.steps {
            out.steps.insert(format!("{prefix}{s}"), b.rename(|x| format!("{prefix}{x}")));
        }
    }
    Ok(out)
}

/// A relation `R ⊆ X × Y` together with its two carriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    left: BTreeSet<StateId>,
    right: BTreeSet<StateId>,
    pairs: BTreeSet<(StateId, StateId)>,
}

impl Relation {
    pub fn new<I>(left: BTreeSet<StateId>, right: BTreeSet<StateId>, pairs: I) -> Result<Relation>
    where
        I: IntoIterator<Item = (StateId, StateId)>,
    {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        for (x, y) in &pairs {
            if !left.contains(x) || !right.contains(y) {
                return Err(Error::PairOutsideCarrier(x.clone(), y.clone()));
            }
        }
        Ok(Relation { left, right, pairs })
    }

    /// A relation between the states of two systems.
    pub fn between<'a, I>(c: &System, d: &System, pairs: I) -> Result<Relation>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        Relation::new(
            c.state_set(),
            d.state_set(),
            pairs.into_iter().map(|(x, y)| (x.to_string(), y.to_string())),
        )
    }

    pub fn empty(left: BTreeSet<StateId>, right: BTreeSet<StateId>) -> Relation {
        Relation { left, right, pairs: BTreeSet::new() }
    }

    /// `X × Y`.
    pub fn full(c: &System, d: &System) -> Relation {
        let pairs = c
            .states()
            .flat_map(|x| d.states().map(move |y| (x.to_string(), y.to_string())))
            .collect();
        Relation { left: c.state_set(), right: d.state_set(), pairs }
    }

    pub fn identity(c: &System) -> Relation {
        let pairs = c.states().map(|x| (x.to_string(), x.to_string())).collect();
        Relation { left: c.state_set(), right: c.state_set(), pairs }
    }

    pub fn left(&self) -> &BTreeSet<StateId> {
        &self.left
    }

    pub fn right(&self) -> &BTreeSet<StateId> {
        &self.right
    }

    pub fn pairs(&self) -> &BTreeSet<(StateId, StateId)> {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, x: &str, y: &str) -> bool {
        // BTreeSet<(String, String)> cannot be probed with borrowed strs.
        self.pairs.contains(&(x.to_string(), y.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.pairs.iter().map(|(x, y)| (x.as_str(), y.as_str()))
    }

    pub fn insert(&mut self, x: &str, y: &str) -> Result<()> {
        if !self.left.contains(x) || !self.right.contains(y) {
            return Err(Error::PairOutsideCarrier(x.to_string(), y.to_string()));
        }
        self.pairs.insert((x.to_string(), y.to_string()));
        Ok(())
    }

    pub fn remove(&mut self, x: &str, y: &str) -> bool {
        self.pairs.remove(&(x.to_string(), y.to_string()))
    }

    pub fn transpose(&self) -> Relation {
        Relation {
            left: self.right.clone(),
            right: self.left.clone(),
            pairs: self.pairs.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
        }
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// Whether `self` is reflexive, symmetric and transitive on its carrier.
    /// Only meaningful when both carriers coincide.
    pub fn is_equivalence(&self) -> bool {
        if self.left != self.right {
            return false;
        }
        if !self.left.iter().all(|x| self.contains(x, x)) {
            return false;
        }
        if !self.iter().all(|(x, y)| self.contains(y, x)) {
            return false;
        }
        let mut succ: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for (x, y) in self.iter() {
            succ.entry(x).or_default().insert(y);
        }
        self.iter().all(|(x, y)| succ.get(y).is_none_or(|zs| zs.iter().all(|z| self.contains(x, z))))
    }
}

/// A partition of a carrier into disjoint nonempty classes. Classes are kept
/// in a canonical order (by smallest member) so equal partitions compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    classes: Vec<BTreeSet<StateId>>,
}

impl Partition {
    pub fn new<I>(carrier: &BTreeSet<StateId>, classes: I) -> Result<Partition>
    where
        I: IntoIterator<Item = BTreeSet<StateId>>,
    {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for class in classes {
            if class.is_empty() {
                return Err(Error::InvalidPartition("empty class".into()));
            }
            for s in &class {
                if !carrier.contains(s) {
                    return Err(Error::InvalidPartition(format!("state `{s}` is not in the carrier")));
                }
                if !seen.insert(s.clone()) {
                    return Err(Error::InvalidPartition(format!("state `{s}` occurs in two classes")));
                }
            }
            out.push(class);
        }
        if let Some(missing) = carrier.iter().find(|s| !seen.contains(*s)) {
            return Err(Error::InvalidPartition(format!("state `{missing}` is not covered")));
        }
        out.sort();
        Ok(Partition { classes: out })
    }

    pub fn discrete(carrier: &BTreeSet<StateId>) -> Partition {
        Partition { classes: carrier.iter().map(|s| BTreeSet::from([s.clone()])).collect() }
    }

    /// The partition of an equivalence relation, or `None` if `rel` is not one.
    pub fn from_equivalence(rel: &Relation) -> Option<Partition> {
        if !rel.is_equivalence() {
            return None;
        }
        let mut classes: BTreeSet<BTreeSet<StateId>> = BTreeSet::new();
        for x in rel.left() {
            let class: BTreeSet<StateId> =
                rel.right().iter().filter(|y| rel.contains(x, y)).cloned().collect();
            classes.insert(class);
        }
        Partition::new(rel.left(), classes).ok()
    }

    pub fn classes(&self) -> &[BTreeSet<StateId>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn carrier(&self) -> BTreeSet<StateId> {
        self.classes.iter().flatten().cloned().collect()
    }

    pub fn class_index(&self) -> BTreeMap<&str, usize> {
        let mut idx = BTreeMap::new();
        for (i, c) in self.classes.iter().enumerate() {
            for s in c {
                idx.insert(s.as_str(), i);
            }
        }
        idx
    }

    pub fn same_class(&self, x: &str, y: &str) -> bool {
        self.classes.iter().any(|c| c.contains(x) && c.contains(y))
    }

    pub fn to_relation(&self) -> Relation {
        let carrier = self.carrier();
        let pairs = self
            .classes
            .iter()
            .flat_map(|c| c.iter().flat_map(move |x| c.iter().map(move |y| (x.clone(), y.clone()))))
            .collect::<Vec<_>>();
        Relation { left: carrier.clone(), right: carrier, pairs: pairs.into_iter().collect() }
    }
}

/// Shorthand constructors, mostly for tests and fixtures.
pub mod build {
    use super::*;

    pub fn set<'a>(elems: impl IntoIterator<Item = (&'a str, &'a str)>) -> Bundle {
        Bundle::Set(elems.into_iter().map(|(a, x)| (a.to_string(), x.to_string())).collect())
    }

    pub fn ms<'a>(elems: impl IntoIterator<Item = (u64, &'a str, &'a str)>) -> Bundle {
        Bundle::Ms(elems.into_iter().map(|(n, a, x)| ((a.to_string(), x.to_string()), n)).collect())
    }

    pub fn m1<'a>(elems: impl IntoIterator<Item = (u64, Rat, &'a str, &'a str)>) -> Bundle {
        Bundle::M1(
            elems
                .into_iter()
                .map(|(n, p, a, x)| ((p, a.to_string(), x.to_string()), n))
                .collect(),
        )
    }

    pub fn dist<'a>(elems: impl IntoIterator<Item = (Rat, &'a str, &'a str)>) -> Bundle {
        Bundle::Dist(elems.into_iter().map(|(p, a, x)| ((a.to_string(), x.to_string()), p)).collect())
    }

    pub fn r(n: i128, d: i128) -> Rat {
        Rat::new(n, d)
    }
}

#[cfg(test)]
mod tests {
    use super::build::*;
    use super::*;

    fn pb() -> System {
        System::from_bundles("pb", Kind::Pmts, [("y", m1([(2, r(1, 2), "a", "y")]))])
    }

    #[test]
    fn two_halves_sum_to_one() {
        assert!(validate_system(&pb()).is_empty());
    }

    #[test]
    fn half_mass_is_reported() {
        let sys = System::from_bundles("bad", Kind::Pmts, [("x", m1([(1, r(1, 2), "a", "x")]))]);
        let diags = validate_system(&sys);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].rule, Rule::MassNotOne);
        assert_eq!(diags[0].state, "x");
        assert_eq!(diags[0].message, "probability mass 1/2 ≠ 1 at x");
    }

    #[test]
    fn empty_system_is_valid() {
        assert!(validate_system(&System::new("e", Kind::Lts)).is_empty());
    }

    #[test]
    fn terminal_probabilistic_states_are_exempt() {
        let sys = System::from_bundles(
            "t",
            Kind::Dts,
            [("x", dist([(r(1, 2), "a", "x1"), (r(1, 2), "a", "x2")])), ("x1", dist([])), ("x2", dist([]))],
        );
        assert!(validate_system(&sys).is_empty());
    }

    #[test]
    fn shape_and_dangling_targets_are_reported() {
        let mut sys = System::from_bundles("s", Kind::Lts, [("x", ms([(1, "a", "z")]))]);
        sys.insert_state("y".into(), set([("b", "y")]));
        let rules: Vec<Rule> = validate_system(&sys).into_iter().map(|d| d.rule).collect();
        assert_eq!(rules, vec![Rule::BundleShape, Rule::DanglingTarget]);
    }

    fn s_x() -> System {
        System::from_bundles("sx", Kind::Lts, [("x", set([("a", "x1")])), ("x1", set([]))])
    }

    fn s_y() -> System {
        System::from_bundles(
            "sy",
            Kind::Lts,
            [("y", set([("a", "y1"), ("a", "y2")])), ("y1", set([])), ("y2", set([]))],
        )
    }

    #[test]
    fn union_counts_states_and_transitions() {
        let u = disjoint_union(&s_x(), &s_y()).unwrap();
        assert_eq!(u.len(), 5);
        assert_eq!(u.transition_count(), 3);
        assert!(validate_system(&u).is_empty());
    }

    #[test]
    fn union_tags_clashing_names() {
        let u = disjoint_union(&s_x(), &s_x()).unwrap();
        assert_eq!(u.step("left:x"), Some(&set([("a", "left:x1")])));
        assert_eq!(u.step("right:x"), Some(&set([("a", "right:x1")])));
    }

    #[test]
    fn union_rejects_kind_mismatch() {
        assert!(matches!(disjoint_union(&s_x(), &pb()), Err(Error::KindMismatch { .. })));
    }

    #[test]
    fn union_projects_back_bit_exactly() {
        let a = s_x();
        let b = System::from_bundles("b", Kind::Lts, [("x", set([("c", "x")]))]);
        let u = disjoint_union(&a, &b).unwrap();
        for (prefix, orig) in [(LEFT_TAG, &a), (RIGHT_TAG, &b)] {
            for (s, bundle) in orig.steps() {
                let back = u.step(&format!("{prefix}{s}")).unwrap().rename(|x| x.strip_prefix(prefix).unwrap().to_string());
                assert_eq!(&back, bundle);
            }
        }
    }

    #[test]
    fn relation_checks_carriers() {
        assert!(Relation::between(&s_x(), &s_y(), [("x", "y")]).is_ok());
        assert!(matches!(Relation::between(&s_x(), &s_y(), [("y", "x")]), Err(Error::PairOutsideCarrier(..))));
    }

    #[test]
    fn partition_validation() {
        let carrier: BTreeSet<StateId> = ["a", "b", "c"].map(String::from).into();
        let class = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert!(Partition::new(&carrier, [class(&["a", "b"]), class(&["c"])]).is_ok());
        assert!(Partition::new(&carrier, [class(&["a", "b"])]).is_err());
        assert!(Partition::new(&carrier, [class(&["a", "b"]), class(&["b", "c"])]).is_err());
        let p = Partition::new(&carrier, [class(&["c"]), class(&["b", "a"])]).unwrap();
        assert_eq!(Partition::from_equivalence(&p.to_relation()), Some(p));
    }
}
