//! Direct searches for a witness `w ∈ F(R)`, written without the max-flow
//! solver so they can cross-check the library's liftings.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::lifting::{elements, pair_allowed, Elem};
use crate::model::{Bundle, Relation};
use crate::order::OrderSpec;
use crate::rat::Rat;
use crate::transforms::AlphaKind;

/// How the projections of a candidate witness must compare with the bundles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetMode {
    /// `π₁W = U` and `π₂W = V`.
    Equal,
    /// `U ⊆ π₁W` and `π₂W ⊆ V`.
    Inclusion,
}

fn allowed_pairs(rel: &Relation, left: &[Elem], right: &[Elem]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, l) in left.iter().enumerate() {
        for (j, r) in right.iter().enumerate() {
            if pair_allowed(rel, l, r) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Exhaustive search over subsets `W` of the related pairs of `U × V`.
pub fn set_witness(rel: &Relation, u: &[Elem], v: &[Elem], mode: SetMode) -> bool {
    let pairs = allowed_pairs(rel, u, v);
    assert!(pairs.len() < 24, "set witness search over {} pairs", pairs.len());
    (0u32..1 << pairs.len()).any(|mask| {
        let chosen = pairs.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, p)| *p);
        let (mut left, mut right) = (BTreeSet::new(), BTreeSet::new());
        for (i, j) in chosen {
            left.insert(i);
            right.insert(j);
        }
        match mode {
            SetMode::Equal => left.len() == u.len() && right.len() == v.len(),
            SetMode::Inclusion => left.len() == u.len(),
        }
    })
}

/// Whether a coupling of two weighted supports exists, by depth-first search
/// over integer entries in units of `1/L`, `L` the common denominator.
/// Transportation polytopes with integral margins have integral vertices, so
/// the grid search is complete.
pub fn grid_coupling(rel: &Relation, u: &[(Elem, Rat)], v: &[(Elem, Rat)]) -> bool {
    let l = u.iter().chain(v).fold(1i128, |acc, (_, m)| acc.lcm(&m.denom()));
    let units = |m: Rat| (m * Rat::from_int(l)).numer();
    let rows: Vec<i128> = u.iter().map(|(_, m)| units(*m)).collect();
    let mut cols: Vec<i128> = v.iter().map(|(_, m)| units(*m)).collect();
    if rows.iter().sum::<i128>() != cols.iter().sum::<i128>() {
        return false;
    }
    let left: Vec<Elem> = u.iter().map(|(e, _)| e.clone()).collect();
    let right: Vec<Elem> = v.iter().map(|(e, _)| e.clone()).collect();
    let options: Vec<Vec<usize>> = (0..left.len())
        .map(|i| (0..right.len()).filter(|&j| pair_allowed(rel, &left[i], &right[j])).collect())
        .collect();

    fn fill(row: usize, k: usize, rest: i128, rows: &[i128], opts: &[Vec<usize>], cols: &mut [i128]) -> bool {
        if row == rows.len() {
            return cols.iter().all(|c| *c == 0);
        }
        let next_row = |cols: &mut [i128]| {
            let after = row + 1;
            fill(after, 0, rows.get(after).copied().unwrap_or(0), rows, opts, cols)
        };
        if k == opts[row].len() {
            return rest == 0 && next_row(cols);
        }
        let j = opts[row][k];
        let last = k + 1 == opts[row].len();
        let hi = rest.min(cols[j]);
        let lo = if last { rest } else { 0 };
        let mut x = hi;
        while x >= lo {
            cols[j] -= x;
            let ok = fill(row, k + 1, rest - x, rows, opts, cols);
            cols[j] += x;
            if ok {
                return true;
            }
            x -= 1;
        }
        false
    }
    let first = rows.first().copied().unwrap_or(0);
    fill(0, 0, first, &rows, &options, &mut cols)
}

fn keys(b: &Bundle) -> Vec<Elem> {
    elements(b).into_iter().map(|(e, _)| e).collect()
}

/// `(u, v) ∈ Rel(F)_{≡^α}(R)` decided by searching `w ∈ F(R)` directly:
/// subsets of related pairs for supports, grid couplings for `D_M` images.
pub fn kernel_witness(alpha: AlphaKind, rel: &Relation, u: &Bundle, v: &Bundle) -> Result<bool> {
    let (gu, gv) = (alpha.apply(u)?, alpha.apply(v)?);
    Ok(match (&gu, &gv) {
        (Bundle::Set(_), Bundle::Set(_)) => set_witness(rel, &keys(&gu), &keys(&gv), SetMode::Equal),
        (Bundle::Dist(_), Bundle::Dist(_)) => grid_coupling(rel, &elements(&gu), &elements(&gv)),
        _ => false,
    })
}

/// `(g, h) ∈ Rel(G)_⊑(R)` for `⊑` the powerset inclusion, by subset search.
pub fn inclusion_witness(rel: &Relation, g: &Bundle, h: &Bundle) -> bool {
    match (g, h) {
        (Bundle::Set(_), Bundle::Set(_)) => set_witness(rel, &keys(g), &keys(h), SetMode::Inclusion),
        (Bundle::Dist(_), Bundle::Dist(_)) => grid_coupling(rel, &elements(g), &elements(h)),
        _ => false,
    }
}

/// `(u, v) ∈ Rel(F)_⊑(R)` for the order `⊑` induced along α by `base`:
/// some `w ∈ F(R)` has `α(u) ⊑ α(Fr₁ w)` and `α(Fr₂ w) ⊑ α(v)`.
pub fn induced_witness(alpha: AlphaKind, base: &OrderSpec, rel: &Relation, u: &Bundle, v: &Bundle) -> Result<bool> {
    let (gu, gv) = (alpha.apply(u)?, alpha.apply(v)?);
    let exact = |g: &Bundle, h: &Bundle| match (g, h) {
        (Bundle::Set(_), Bundle::Set(_)) => set_witness(rel, &keys(g), &keys(h), SetMode::Equal),
        (Bundle::Dist(_), Bundle::Dist(_)) => grid_coupling(rel, &elements(g), &elements(h)),
        _ => false,
    };
    match base {
        OrderSpec::Equality => Ok(exact(&gu, &gv)),
        OrderSpec::PowersetInclusion => Ok(inclusion_witness(rel, &gu, &gv)),
        OrderSpec::Extensional(ext) => {
            let within = |b: &Bundle, side: &BTreeSet<String>| b.transitions().iter().all(|(_, x)| side.contains(*x));
            Ok(ext
                .above(&gu)
                .filter(|g| within(g, rel.left()))
                .any(|g| ext.below(&gv).filter(|h| within(h, rel.right())).any(|h| exact(g, h))))
        }
        other => Err(Error::InvalidOrder(format!("no witness search for base order {other}"))),
    }
}

/// Search for `w ∈ F(R)` with every multiplicity `≤ bound` and, for `M₁`,
/// weights drawn from the equal splits `m/k` (`k ≤ bound`) of the masses of
/// `α(u)` and `α(v)`, such that `α(Fr₁ w) = α(u)` and `α(Fr₂ w) = α(v)`.
///
/// Multiplicities beyond 1 never change a support, so the multiset search
/// uses multiplicity 1 only.
pub fn bounded_kernel_witness(alpha: AlphaKind, rel: &Relation, u: &Bundle, v: &Bundle, bound: u64) -> Result<bool> {
    let (gu, gv) = (alpha.apply(u)?, alpha.apply(v)?);
    match (&gu, &gv) {
        (Bundle::Set(_), Bundle::Set(_)) => Ok(set_witness(rel, &keys(&gu), &keys(&gv), SetMode::Equal)),
        (Bundle::Dist(_), Bundle::Dist(_)) => Ok(bounded_m1_search(rel, &elements(&gu), &elements(&gv), bound)),
        (Bundle::Set(_) | Bundle::Dist(_), Bundle::Set(_) | Bundle::Dist(_)) => Ok(false),
        _ => Err(Error::KindMismatch { expected: "α image".into(), found: gu.shape().into() }),
    }
}

fn bounded_m1_search(rel: &Relation, u: &[(Elem, Rat)], v: &[(Elem, Rat)], bound: u64) -> bool {
    let mut weights = BTreeSet::new();
    for (_, m) in u.iter().chain(v) {
        for k in 1..=bound {
            weights.insert(*m / Rat::from(k));
        }
    }
    // every mass one element pair can carry: n copies of one weight
    let mut amounts: BTreeSet<Rat> = BTreeSet::new();
    for w in &weights {
        for n in 1..=bound {
            amounts.insert(*w * Rat::from(n));
        }
    }
    let amounts: Vec<Rat> = amounts.into_iter().rev().collect();
    let left: Vec<Elem> = u.iter().map(|(e, _)| e.clone()).collect();
    let right: Vec<Elem> = v.iter().map(|(e, _)| e.clone()).collect();
    let pairs = allowed_pairs(rel, &left, &right);
    let mut row: Vec<Rat> = u.iter().map(|(_, m)| *m).collect();
    let mut col: Vec<Rat> = v.iter().map(|(_, m)| *m).collect();

    fn go(k: usize, pairs: &[(usize, usize)], amounts: &[Rat], row: &mut [Rat], col: &mut [Rat]) -> bool {
        if k == pairs.len() {
            return row.iter().chain(col.iter()).all(Rat::is_zero);
        }
        let (i, j) = pairs[k];
        // a row or column whose last pair this is must be closed exactly
        let row_closes = pairs[k + 1..].iter().all(|p| p.0 != i);
        let col_closes = pairs[k + 1..].iter().all(|p| p.1 != j);
        let mut options: Vec<Rat> = vec![Rat::ZERO];
        options.extend(amounts.iter().copied().filter(|a| *a <= row[i] && *a <= col[j]));
        for a in options {
            if (row_closes && row[i] != a) || (col_closes && col[j] != a) {
                continue;
            }
            row[i] -= a;
            col[j] -= a;
            let ok = go(k + 1, pairs, amounts, row, col);
            row[i] += a;
            col[j] += a;
            if ok {
                return true;
            }
        }
        false
    }
    if row.iter().enumerate().any(|(i, m)| m.is_positive() && pairs.iter().all(|p| p.0 != i))
        || col.iter().enumerate().any(|(j, m)| m.is_positive() && pairs.iter().all(|p| p.1 != j))
    {
        return false;
    }
    go(0, &pairs, &amounts, &mut row, &mut col)
}
