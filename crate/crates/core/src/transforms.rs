//! The natural transformations between bundle functors (support, `D_M`, and
//! their alternating combination), α-images, concrete representations,
//! kernels, and the orders they induce or project.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::model::{Bundle, Kind, System};
use crate::multiset::Multiset;
use crate::order::{ExtensionalOrder, OrderSpec};
use crate::rat::Rat;

/// Default cap on the number of systems [`enumerate_representations`] may return.
pub const DEFAULT_ENUM_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlphaKind {
    /// `{·} : M ⇒ P`, forgetting multiplicities.
    Support,
    /// `D_M : M₁([0,1]×·) ⇒ D`, accumulating `n·p` per element.
    Dm,
    /// Support on nondeterministic states, `D_M` on probabilistic ones.
    Dma,
}

impl AlphaKind {
    pub const ALL: [AlphaKind; 3] = [AlphaKind::Support, AlphaKind::Dm, AlphaKind::Dma];

    pub fn name(self) -> &'static str {
        match self {
            AlphaKind::Support => "support",
            AlphaKind::Dm => "dm",
            AlphaKind::Dma => "dma",
        }
    }

    pub fn domain(self) -> Kind {
        match self {
            AlphaKind::Support => Kind::Mts,
            AlphaKind::Dm => Kind::Pmts,
            AlphaKind::Dma => Kind::AltMts,
        }
    }

    pub fn codomain(self) -> Kind {
        match self {
            AlphaKind::Support => Kind::Lts,
            AlphaKind::Dm => Kind::Dts,
            AlphaKind::Dma => Kind::AltGts,
        }
    }

    /// The transformation whose codomain is `kind`, if any.
    pub fn onto(kind: Kind) -> Option<AlphaKind> {
        AlphaKind::ALL.into_iter().find(|a| a.codomain() == kind)
    }

    /// The transformation whose domain is `kind`, if any.
    pub fn from_domain(kind: Kind) -> Option<AlphaKind> {
        AlphaKind::ALL.into_iter().find(|a| a.domain() == kind)
    }

    /// `α_X(u)`.
    pub fn apply(self, u: &Bundle) -> Result<Bundle> {
        match (self, u) {
            (AlphaKind::Support | AlphaKind::Dma, Bundle::Ms(m)) => Ok(Bundle::Set(m.support())),
            (AlphaKind::Dm | AlphaKind::Dma, Bundle::M1(m)) => Ok(Bundle::Dist(dm(m))),
            _ => Err(Error::KindMismatch {
                expected: format!("{} bundle", self.domain()),
                found: u.shape().to_string(),
            }),
        }
    }
}

fn dm(m: &Multiset<crate::model::WeightedTrans>) -> Distribution<crate::model::Trans> {
    m.iter().map(|((p, a, x), &n)| ((a.clone(), x.clone()), *p * Rat::from(n))).collect()
}

impl fmt::Display for AlphaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlphaKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<AlphaKind, String> {
        AlphaKind::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown transformation `{s}`"))
    }
}

fn expect_kind(sys: &System, kind: Kind) -> Result<()> {
    if sys.kind == kind {
        Ok(())
    } else {
        Err(Error::KindMismatch { expected: kind.to_string(), found: sys.kind.to_string() })
    }
}

/// `a_α = α_X ∘ a`.
pub fn alpha_image(alpha: AlphaKind, sys: &System) -> Result<System> {
    expect_kind(sys, alpha.domain())?;
    sys.map_bundles(alpha.codomain(), |b| alpha.apply(b))
}

/// The canonical preimage of a single G-bundle: multiplicity one everywhere.
pub fn canonical_bundle(b: &Bundle) -> Bundle {
    match b {
        Bundle::Set(s) => Bundle::Ms(s.iter().map(|t| (t.clone(), 1)).collect()),
        Bundle::Dist(d) => Bundle::M1(d.iter().map(|((a, x), &p)| ((p, a.clone(), x.clone()), 1)).collect()),
        other => other.clone(),
    }
}

/// An F-representation `a` with `α ∘ a = sys`, using multiplicity one.
pub fn canonical_representation(sys: &System) -> Result<System> {
    let alpha = AlphaKind::onto(sys.kind).ok_or_else(|| Error::KindMismatch {
        expected: "lts, dts or alt-gts".into(),
        found: sys.kind.to_string(),
    })?;
    sys.map_bundles(alpha.domain(), |b| Ok(canonical_bundle(b)))
}

/// Every preimage of a G-bundle in which each element is realized by `m ≤ bound`
/// copies (for distributions: `m` copies of weight `mass/m`). Ordered
/// lexicographically by the multiplicity vector.
pub fn bundle_representations(b: &Bundle, bound: u64) -> Vec<Bundle> {
    let bound = bound.max(1);
    match b {
        Bundle::Set(s) => {
            let elems: Vec<_> = s.iter().collect();
            multiplicity_vectors(elems.len(), bound)
                .map(|ms| Bundle::Ms(elems.iter().zip(&ms).map(|(t, &m)| ((*t).clone(), m)).collect()))
                .collect()
        }
        Bundle::Dist(d) => {
            let elems: Vec<_> = d.iter().collect();
            multiplicity_vectors(elems.len(), bound)
                .map(|ms| {
                    Bundle::M1(
                        elems
                            .iter()
                            .zip(&ms)
                            .map(|(((a, x), &p), &m)| ((p / Rat::from(m), a.clone(), x.clone()), m))
                            .collect(),
                    )
                })
                .collect()
        }
        other => vec![other.clone()],
    }
}

fn multiplicity_vectors(len: usize, bound: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = (bound as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    let mut current = vec![1u64; len];
    let mut emitted: u128 = 0;
    std::iter::from_fn(move || {
        if emitted >= total {
            return None;
        }
        let out = current.clone();
        emitted += 1;
        for slot in current.iter_mut().rev() {
            if *slot < bound {
                *slot += 1;
                break;
            }
            *slot = 1;
        }
        Some(out)
    })
}

/// All F-representations of `sys` with per-element multiplicity at most
/// `bound`, in deterministic order (the first state varies slowest).
pub fn enumerate_representations(sys: &System, bound: u64, cap: usize) -> Result<Vec<System>> {
    if bound == 0 {
        return Err(Error::InvalidArgument("representation bound must be at least 1".into()));
    }
    let alpha = AlphaKind::onto(sys.kind).ok_or_else(|| Error::KindMismatch {
        expected: "lts, dts or alt-gts".into(),
        found: sys.kind.to_string(),
    })?;
    let choices: Vec<(String, Vec<Bundle>)> =
        sys.steps().map(|(s, b)| (s.to_string(), bundle_representations(b, bound))).collect();
    let count = choices.iter().fold(1u128, |acc, (_, c)| acc.saturating_mul(c.len() as u128));
    if count > cap as u128 {
        return Err(Error::EnumerationCap { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut idx = vec![0usize; choices.len()];
    loop {
        let mut rep = System::new(sys.name.clone(), alpha.domain());
        for l in sys.labels() {
            rep.add_label(l.clone());
        }
        for ((s, options), &i) in choices.iter().zip(&idx) {
            rep.insert_state(s.clone(), options[i].clone());
        }
        out.push(rep);
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].1.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `u ≡^α v ⟺ α(u) = α(v)`.
pub fn kernel_related(alpha: AlphaKind, u: &Bundle, v: &Bundle) -> Result<bool> {
    Ok(alpha.apply(u)? == alpha.apply(v)?)
}

/// `u ⊑^{α−} v ⟺ α(u) ⊑_base α(v)`.
pub fn induced_order_related(alpha: AlphaKind, base: &OrderSpec, u: &Bundle, v: &Bundle) -> Result<bool> {
    base.relates(&alpha.apply(u)?, &alpha.apply(v)?)
}

/// The order projected along α over a finite universe of F-bundles: the
/// reflexive-transitive closure of `α(x₁) ⊑ α(x₁')` for `x₁ ⊑_F x₁'`,
/// materialized over `α(universe)`.
pub fn projected_order(alpha: AlphaKind, ord_f: &OrderSpec, universe: &BTreeSet<Bundle>) -> Result<ExtensionalOrder> {
    let images: Vec<(&Bundle, Bundle)> =
        universe.iter().map(|b| Ok((b, alpha.apply(b)?))).collect::<Result<_>>()?;
    let mut generators = Vec::new();
    for (x1, gx1) in &images {
        for (x2, gx2) in &images {
            if gx1 != gx2 && ord_f.relates(x1, x2)? {
                generators.push((gx1.clone(), gx2.clone()));
            }
        }
    }
    Ok(ExtensionalOrder::closure(images.into_iter().map(|(_, g)| g), generators))
}

/// Decides `x ⊑_F^α y` by searching the closure over α(universe).
pub fn projected_order_related(
    alpha: AlphaKind,
    ord_f: &OrderSpec,
    universe: &BTreeSet<Bundle>,
    x: &Bundle,
    y: &Bundle,
) -> Result<bool> {
    let images: Vec<(&Bundle, Bundle)> =
        universe.iter().map(|b| Ok((b, alpha.apply(b)?))).collect::<Result<_>>()?;
    if !images.iter().any(|(_, g)| g == x) || !images.iter().any(|(_, g)| g == y) {
        return Err(Error::OutsideUniverse);
    }
    if x == y {
        return Ok(true);
    }
    let mut step: BTreeMap<&Bundle, BTreeSet<&Bundle>> = BTreeMap::new();
    for (x1, gx1) in &images {
        for (x2, gx2) in &images {
            if ord_f.relates(x1, x2)? {
                step.entry(gx1).or_default().insert(gx2);
            }
        }
    }
    let mut seen = BTreeSet::from([x]);
    let mut queue = VecDeque::from([x]);
    while let Some(cur) = queue.pop_front() {
        for &next in step.get(cur).into_iter().flatten() {
            if next == y {
                return Ok(true);
            }
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    Ok(false)
}

/// One class of `F/≡^α` restricted to a finite set of elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientClass {
    /// The common α-image, which stands for the class.
    pub image: Bundle,
    pub members: Vec<Bundle>,
}

/// Groups `elements` by exact α-image; classes are ordered by image.
pub fn quotient_classes(alpha: AlphaKind, elements: &[Bundle]) -> Result<Vec<QuotientClass>> {
    let mut groups: BTreeMap<Bundle, Vec<Bundle>> = BTreeMap::new();
    for e in elements {
        let img = alpha.apply(e)?;
        let members = groups.entry(img).or_default();
        if !members.contains(e) {
            members.push(e.clone());
        }
    }
    Ok(groups.into_iter().map(|(image, members)| QuotientClass { image, members }).collect())
}
