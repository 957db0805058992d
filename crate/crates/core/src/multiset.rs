//! Finite multisets represented by their characteristic function.

use std::collections::btree_map;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A finite-support multiset. Counts are always strictly positive; an element
/// with count zero is simply absent.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiset<E: Ord> {
    counts: BTreeMap<E, u64>,
}

impl<E: Ord> Default for Multiset<E> {
    fn default() -> Self {
        Multiset { counts: BTreeMap::new() }
    }
}

impl<E: Ord> Multiset<E> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `n` occurrences of `elem`. Adding zero occurrences is a no-op.
    pub fn insert(&mut self, elem: E, n: u64) {
        if n > 0 {
            *self.counts.entry(elem).or_insert(0) += n;
        }
    }

    pub fn count(&self, elem: &E) -> u64 {
        self.counts.get(elem).copied().unwrap_or(0)
    }

    pub fn contains(&self, elem: &E) -> bool {
        self.counts.contains_key(elem)
    }

    /// Number of distinct elements.
    pub fn support_len(&self) -> usize {
        self.counts.len()
    }

    /// Total number of occurrences.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, E, u64> {
        self.counts.iter()
    }

    pub fn elements(&self) -> btree_map::Keys<'_, E, u64> {
        self.counts.keys()
    }

    pub fn support(&self) -> BTreeSet<E>
    where
        E: Clone,
    {
        self.counts.keys().cloned().collect()
    }

    /// Functor action: `M(f)(χ)(y) = Σ_{f(x)=y} χ(x)`.
    pub fn map<F, T>(&self, mut f: F) -> Multiset<T>
    where
        F: FnMut(&E) -> T,
        T: Ord,
    {
        let mut out = Multiset::new();
        for (e, &n) in &self.counts {
            out.insert(f(e), n);
        }
        out
    }

    /// The multiset generated by an enumeration: each occurrence counts once.
    pub fn from_elements<I: IntoIterator<Item = E>>(iter: I) -> Self {
        iter.into_iter().map(|e| (e, 1)).collect()
    }

    /// Pointwise `≤` on counts.
    pub fn is_submultiset(&self, other: &Multiset<E>) -> bool {
        self.counts.iter().all(|(e, &n)| other.count(e) >= n)
    }
}

impl<E: Ord> FromIterator<(E, u64)> for Multiset<E> {
    fn from_iter<I: IntoIterator<Item = (E, u64)>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for (e, n) in iter {
            m.insert(e, n);
        }
        m
    }
}

impl<'a, E: Ord> IntoIterator for &'a Multiset<E> {
    type Item = (&'a E, &'a u64);
    type IntoIter = btree_map::Iter<'a, E, u64>;
    fn into_iter(self) -> Self::IntoIter {
        self.counts.iter()
    }
}

impl<E: Ord + fmt::Debug> fmt::Debug for Multiset<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (e, n)) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}·{e:?}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_counts_are_absent() {
        let mut m = Multiset::new();
        m.insert("a", 0);
        assert!(m.is_empty());
        m.insert("a", 2);
        m.insert("a", 1);
        assert_eq!(m.count(&"a"), 3);
        assert_eq!(m.total(), 3);
        assert_eq!(m.support_len(), 1);
    }

    #[test]
    fn map_sums_collapsed_counts() {
        let m: Multiset<(char, u8)> = [(('a', 1), 2), (('a', 2), 3), (('b', 1), 1)].into_iter().collect();
        let img = m.map(|(l, _)| *l);
        assert_eq!(img.count(&'a'), 5);
        assert_eq!(img.count(&'b'), 1);
    }

    proptest! {
        #[test]
        fn equality_is_order_independent(entries in proptest::collection::vec((0u8..5, 1u64..4), 0..8), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let a: Multiset<u8> = entries.iter().cloned().collect();
            let mut shuffled = entries.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let b: Multiset<u8> = shuffled.into_iter().collect();
            prop_assert_eq!(a, b);
        }
    }
}
