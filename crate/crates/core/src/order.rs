//! Functorial preorders on successor bundles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Bundle, Kind};
use crate::transforms::AlphaKind;

/// A preorder `⊑` on bundles, used to relax the relation lifting on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderSpec {
    Equality,
    /// Inclusion of sets on nondeterministic bundles; equality on
    /// distributions. Applies to `lts` and `alt-gts`.
    PowersetInclusion,
    /// `u ≡ v ⟺ α(u) = α(v)`.
    KernelOf(AlphaKind),
    /// `u ⊑ v ⟺ α(u) ⊑_base α(v)`, with `base` an order on α's codomain.
    InducedFrom(AlphaKind, Box<OrderSpec>),
    Extensional(ExtensionalOrder),
}

impl OrderSpec {
    pub fn applicable(&self, kind: Kind) -> bool {
        match self {
            OrderSpec::Equality => true,
            OrderSpec::PowersetInclusion => matches!(kind, Kind::Lts | Kind::AltGts),
            OrderSpec::KernelOf(alpha) => kind == alpha.domain(),
            OrderSpec::InducedFrom(alpha, base) => kind == alpha.domain() && base.applicable(alpha.codomain()),
            OrderSpec::Extensional(ext) => ext.universe.iter().all(|b| kind.admits(b)),
        }
    }

    pub(crate) fn check_applicable(&self, kind: Kind) -> Result<()> {
        if self.applicable(kind) {
            Ok(())
        } else {
            Err(Error::OrderMismatch { order: self.to_string(), kind })
        }
    }

    /// Whether `u ⊑ v` holds.
    pub fn relates(&self, u: &Bundle, v: &Bundle) -> Result<bool> {
        match self {
            OrderSpec::Equality => Ok(u == v),
            OrderSpec::PowersetInclusion => match (u, v) {
                (Bundle::Set(a), Bundle::Set(b)) => Ok(a.is_subset(b)),
                (Bundle::Dist(_), Bundle::Dist(_)) => Ok(u == v),
                (Bundle::Set(_) | Bundle::Dist(_), Bundle::Set(_) | Bundle::Dist(_)) => Ok(false),
                _ => Err(Error::KindMismatch { expected: "set or dist bundle".into(), found: u.shape().into() }),
            },
            OrderSpec::KernelOf(alpha) => Ok(alpha.apply(u)? == alpha.apply(v)?),
            OrderSpec::InducedFrom(alpha, base) => base.relates(&alpha.apply(u)?, &alpha.apply(v)?),
            OrderSpec::Extensional(ext) => Ok(ext.le(u, v)),
        }
    }
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderSpec::Equality => f.write_str("eq"),
            OrderSpec::PowersetInclusion => f.write_str("incl"),
            OrderSpec::KernelOf(alpha) => write!(f, "kernel-{alpha}"),
            OrderSpec::InducedFrom(alpha, base) => write!(f, "induced-{alpha}({base})"),
            OrderSpec::Extensional(ext) => write!(f, "extensional({} bundles)", ext.universe.len()),
        }
    }
}

/// A preorder given by its pairs over a finite universe of bundles. Bundles
/// outside the universe are related only to themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionalOrder {
    universe: BTreeSet<Bundle>,
    pairs: BTreeSet<(Bundle, Bundle)>,
}

impl ExtensionalOrder {
    /// Validates that `pairs` is a reflexive and transitive relation on `universe`.
    pub fn new(universe: BTreeSet<Bundle>, pairs: BTreeSet<(Bundle, Bundle)>) -> Result<Self> {
        for (a, b) in &pairs {
            if !universe.contains(a) || !universe.contains(b) {
                return Err(Error::InvalidOrder("pair mentions a bundle outside the universe".into()));
            }
        }
        if let Some(b) = universe.iter().find(|b| !pairs.contains(&((*b).clone(), (*b).clone()))) {
            return Err(Error::InvalidOrder(format!("not reflexive at {b:?}")));
        }
        let mut succ: BTreeMap<&Bundle, Vec<&Bundle>> = BTreeMap::new();
        for (a, b) in &pairs {
            succ.entry(a).or_default().push(b);
        }
        for (a, b) in &pairs {
            for c in succ.get(b).into_iter().flatten() {
                if !pairs.contains(&(a.clone(), (*c).clone())) {
                    return Err(Error::InvalidOrder(format!("not transitive: {a:?} ⊑ {b:?} ⊑ {c:?}")));
                }
            }
        }
        Ok(ExtensionalOrder { universe, pairs })
    }

    /// The reflexive-transitive closure of `generators` over `universe`
    /// (extended with every bundle the generators mention).
    pub fn closure<I>(universe: impl IntoIterator<Item = Bundle>, generators: I) -> Self
    where
        I: IntoIterator<Item = (Bundle, Bundle)>,
    {
        let mut universe: BTreeSet<Bundle> = universe.into_iter().collect();
        let generators: Vec<(Bundle, Bundle)> = generators.into_iter().collect();
        for (a, b) in &generators {
            universe.insert(a.clone());
            universe.insert(b.clone());
        }
        let items: Vec<&Bundle> = universe.iter().collect();
        let index: BTreeMap<&Bundle, usize> = items.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let n = items.len();
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in &generators {
            reach[index[a]][index[b]] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if i != k && reach[i][k] {
                    let via = reach[k].clone();
                    for (cell, &r) in reach[i].iter_mut().zip(&via) {
                        *cell |= r;
                    }
                }
            }
        }
        let mut pairs = BTreeSet::new();
        for i in 0..n {
            for j in 0..n {
                if reach[i][j] {
                    pairs.insert((items[i].clone(), items[j].clone()));
                }
            }
        }
        ExtensionalOrder { universe, pairs }
    }

    /// The identity order on `universe`.
    pub fn identity(universe: impl IntoIterator<Item = Bundle>) -> Self {
        Self::closure(universe, std::iter::empty())
    }

    pub fn universe(&self) -> &BTreeSet<Bundle> {
        &self.universe
    }

    pub fn pairs(&self) -> &BTreeSet<(Bundle, Bundle)> {
        &self.pairs
    }

    pub fn le(&self, u: &Bundle, v: &Bundle) -> bool {
        u == v || self.pairs.contains(&(u.clone(), v.clone()))
    }

    /// Every `w` with `u ⊑ w`, including `u` itself.
    pub fn above<'a>(&'a self, u: &'a Bundle) -> impl Iterator<Item = &'a Bundle> + 'a {
        std::iter::once(u).chain(self.pairs.iter().filter(move |(a, b)| a == u && b != u).map(|(_, b)| b))
    }

    /// Every `w` with `w ⊑ v`, including `v` itself.
    pub fn below<'a>(&'a self, v: &'a Bundle) -> impl Iterator<Item = &'a Bundle> + 'a {
        std::iter::once(v).chain(self.pairs.iter().filter(move |(a, b)| b == v && a != v).map(|(a, _)| a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build::*;

    #[test]
    fn validation_rejects_non_preorders() {
        let (a, b, c) = (ms([(1, "a", "x")]), ms([(2, "a", "x")]), ms([(3, "a", "x")]));
        let universe: BTreeSet<Bundle> = [a.clone(), b.clone(), c.clone()].into();
        let refl: BTreeSet<_> = universe.iter().map(|x| (x.clone(), x.clone())).collect();
        assert!(ExtensionalOrder::new(universe.clone(), refl.clone()).is_ok());

        let mut chain = refl.clone();
        chain.insert((a.clone(), b.clone()));
        chain.insert((b.clone(), c.clone()));
        assert!(ExtensionalOrder::new(universe.clone(), chain.clone()).is_err());
        chain.insert((a.clone(), c.clone()));
        assert!(ExtensionalOrder::new(universe.clone(), chain).is_ok());

        let mut missing = refl;
        missing.remove(&(a.clone(), a.clone()));
        assert!(ExtensionalOrder::new(universe, missing).is_err());
    }

    #[test]
    fn closure_is_transitive() {
        let (a, b, c) = (set([("a", "x")]), set([("b", "x")]), set([("c", "x")]));
        let ord = ExtensionalOrder::closure([], [(a.clone(), b.clone()), (b.clone(), c.clone())]);
        assert!(ord.le(&a, &c));
        assert!(!ord.le(&c, &a));
        assert_eq!(ord.above(&a).count(), 3);
        assert_eq!(ord.below(&a).count(), 1);
        assert!(ExtensionalOrder::new(ord.universe().clone(), ord.pairs().clone()).is_ok());
    }

    #[test]
    fn applicability() {
        assert!(OrderSpec::PowersetInclusion.applicable(Kind::Lts));
        assert!(!OrderSpec::PowersetInclusion.applicable(Kind::Mts));
        assert!(OrderSpec::KernelOf(AlphaKind::Dm).applicable(Kind::Pmts));
        assert!(!OrderSpec::KernelOf(AlphaKind::Dm).applicable(Kind::Mts));
        let induced = OrderSpec::InducedFrom(AlphaKind::Support, Box::new(OrderSpec::PowersetInclusion));
        assert!(induced.applicable(Kind::Mts));
        let bad = OrderSpec::InducedFrom(AlphaKind::Dm, Box::new(OrderSpec::PowersetInclusion));
        assert!(!bad.applicable(Kind::Pmts));
    }
}
