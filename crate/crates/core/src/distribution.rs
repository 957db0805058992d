//! Finite discrete measures.

use std::collections::btree_map;
use std::collections::BTreeMap;
use std::fmt;

use crate::rat::Rat;

/// A finite-support measure with strictly positive rational masses.
///
/// A proper distribution sums to exactly one. The empty measure is used for
/// terminal states; `validate_system` enforces that every non-empty bundle is
/// normalized.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Distribution<E: Ord> {
    mass: BTreeMap<E, Rat>,
}

impl<E: Ord> Default for Distribution<E> {
    fn default() -> Self {
        Distribution { mass: BTreeMap::new() }
    }
}

impl<E: Ord> Distribution<E> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Accumulates `p` onto `elem`. Non-positive amounts are ignored.
    pub fn add(&mut self, elem: E, p: Rat) {
        if p.is_positive() {
            *self.mass.entry(elem).or_insert(Rat::ZERO) += p;
        }
    }

    pub fn mass(&self, elem: &E) -> Rat {
        self.mass.get(elem).copied().unwrap_or(Rat::ZERO)
    }

    pub fn total(&self) -> Rat {
        self.mass.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.mass.len()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, E, Rat> {
        self.mass.iter()
    }

    pub fn elements(&self) -> btree_map::Keys<'_, E, Rat> {
        self.mass.keys()
    }

    /// Functor action: `D(f)(p)(y) = Σ_{f(x)=y} p(x)`.
    pub fn map<F, T>(&self, mut f: F) -> Distribution<T>
    where
        F: FnMut(&E) -> T,
        T: Ord,
    {
        let mut out = Distribution::new();
        for (e, &p) in &self.mass {
            out.add(f(e), p);
        }
        out
    }
}

impl<E: Ord> FromIterator<(E, Rat)> for Distribution<E> {
    fn from_iter<I: IntoIterator<Item = (E, Rat)>>(iter: I) -> Self {
        let mut d = Distribution::new();
        for (e, p) in iter {
            d.add(e, p);
        }
        d
    }
}

impl<'a, E: Ord> IntoIterator for &'a Distribution<E> {
    type Item = (&'a E, &'a Rat);
    type IntoIter = btree_map::Iter<'a, E, Rat>;
    fn into_iter(self) -> Self::IntoIter {
        self.mass.iter()
    }
}

impl<E: Ord + fmt::Debug> fmt::Debug for Distribution<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (e, p)) in self.mass.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e:?}↦{p}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulates_and_maps() {
        let d: Distribution<u8> = [(1, Rat::new(1, 3)), (2, Rat::new(1, 6)), (1, Rat::new(1, 2))]
            .into_iter()
            .collect();
        assert_eq!(d.mass(&1), Rat::new(5, 6));
        assert_eq!(d.total(), Rat::ONE);
        let img = d.map(|_| 0u8);
        assert_eq!(img.mass(&0), Rat::ONE);
        assert_eq!(img.support_len(), 1);
    }
}
