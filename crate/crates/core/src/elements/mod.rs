//! Elements of Thompson's groups F ⊂ T ⊂ V as reduced cell-pair maps.
//!
//! An element is a bijection of `[0,1)` given by pairing a partition of the
//! domain into standard dyadic intervals with a partition of the range, each
//! cell mapped affinely onto its partner. Elements are right-continuous; for
//! F and T the closed-interval behaviour follows by continuity.
//!
//! Products use the convention `(g·h)(x) = g(h(x))`.

mod generators;
mod pairs;
mod words;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dyadic::{Dyadic, StdInterval};
use crate::error::{Error, Result};

pub use generators::{
    arc_subgroup_generators, half_rotation, half_supported_generators, squeeze, standard_generator,
    Arc, Generator, Side,
};
pub use pairs::{dyadic_cover, CellPair};
pub(crate) use pairs::{compose_raw, merge_cells, reduce_sorted, restrict_raw, sort_by_domain};
pub use words::{parse_word, random_word, symmetrized, Letter, NamedElement};

/// Which of Thompson's groups an element (or a coset graph) lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GroupClass {
    F,
    T,
    V,
}

impl GroupClass {
    pub fn join(self, other: GroupClass) -> GroupClass {
        self.max(other)
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupClass::F => "F",
            GroupClass::T => "T",
            GroupClass::V => "V",
        }
    }
}

impl fmt::Display for GroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "F" | "f" => Ok(GroupClass::F),
            "T" | "t" => Ok(GroupClass::T),
            "V" | "v" => Ok(GroupClass::V),
            other => Err(Error::Parse(format!("unknown group {other:?}"))),
        }
    }
}

/// A piece `x ↦ 2^slope_exp · x + offset` of an element restricted to a
/// standard interval; its image is again a standard interval.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffinePatch {
    pub domain: StdInterval,
    pub image: StdInterval,
}

impl AffinePatch {
    pub fn slope_exp(&self) -> i64 {
        self.as_pair().slope_exp()
    }

    pub fn offset(&self) -> Dyadic {
        self.as_pair().offset()
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.image
    }

    fn as_pair(&self) -> CellPair {
        CellPair::new(self.domain.clone(), self.image.clone())
    }
}

impl From<CellPair> for AffinePatch {
    fn from(p: CellPair) -> Self {
        AffinePatch {
            domain: p.domain,
            image: p.range,
        }
    }
}

impl fmt::Debug for AffinePatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} x -> 2^{} x + {}",
            self.domain,
            self.slope_exp(),
            self.offset()
        )
    }
}

/// A reduced element of V (with its class F, T or V).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CellMap {
    pairs: Vec<CellPair>,
    class: GroupClass,
}

impl CellMap {
    pub fn identity() -> Self {
        CellMap {
            pairs: vec![CellPair::identity(StdInterval::unit())],
            class: GroupClass::F,
        }
    }

    /// Validate both partitions, then reduce.
    pub fn from_pairs(mut pairs: Vec<CellPair>) -> Result<Self> {
        let (zero, one) = (Dyadic::zero(), Dyadic::one());
        pairs::tiles(pairs.iter().map(|p| &p.domain).collect(), &zero, &one)
            .map_err(|e| Error::MalformedPartition(format!("domain: {e}")))?;
        pairs::tiles(pairs.iter().map(|p| &p.range).collect(), &zero, &one)
            .map_err(|e| Error::MalformedPartition(format!("range: {e}")))?;
        sort_by_domain(&mut pairs);
        Ok(Self::from_sorted_valid(pairs))
    }

    /// Convenience constructor from `(k, n) -> (k', n')` literals.
    pub fn from_literal(cells: &[((u64, u32), (u64, u32))]) -> Result<Self> {
        let pairs = cells
            .iter()
            .map(|&((k, n), (k2, n2))| {
                Ok(CellPair::new(StdInterval::new(k, n)?, StdInterval::new(k2, n2)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_pairs(pairs)
    }

    /// `pairs` sorted by domain and known to be valid partitions.
    pub(crate) fn from_sorted_valid(pairs: Vec<CellPair>) -> Self {
        let pairs = reduce_sorted(pairs);
        let class = classify(&pairs);
        CellMap { pairs, class }
    }

    /// Reduced cell pairs, sorted by domain.
    pub fn pairs(&self) -> &[CellPair] {
        &self.pairs
    }

    pub fn class(&self) -> GroupClass {
        self.class
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.len() == 1 && self.pairs[0].is_identity()
    }

    /// Deepest level of any cell (domain or range).
    pub fn max_level(&self) -> u32 {
        self.pairs
            .iter()
            .map(|p| p.domain.level().max(p.range.level()))
            .max()
            .unwrap_or(0)
    }

    /// `self · other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &CellMap) -> CellMap {
        let mut pairs =
            compose_raw(&self.pairs, &other.pairs).expect("total maps always compose");
        sort_by_domain(&mut pairs);
        Self::from_sorted_valid(pairs)
    }

    pub fn invert(&self) -> CellMap {
        let mut pairs: Vec<CellPair> = self.pairs.iter().map(CellPair::inverse).collect();
        sort_by_domain(&mut pairs);
        Self::from_sorted_valid(pairs)
    }

    pub fn conjugate_by(&self, k: &CellMap) -> CellMap {
        k.compose(self).compose(&k.invert())
    }

    pub fn pow(&self, n: i64) -> CellMap {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut acc = CellMap::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    fn cell_index(&self, x: &Dyadic) -> Result<usize> {
        if x.is_negative() || *x >= Dyadic::one() {
            return Err(Error::OutOfDomain(x.to_string()));
        }
        let i = self.pairs.partition_point(|p| p.domain.left() <= *x);
        Ok(i - 1)
    }

    /// Right-continuous exact evaluation on `[0,1)`.
    pub fn evaluate(&self, x: &Dyadic) -> Result<Dyadic> {
        let i = self.cell_index(x)?;
        Ok(self.pairs[i].apply(x))
    }

    /// Limit of `self(t)` as `t → x` from the left, for `0 < x <= 1`.
    pub fn left_limit(&self, x: &Dyadic) -> Result<Dyadic> {
        if *x <= Dyadic::zero() || *x > Dyadic::one() {
            return Err(Error::OutOfDomain(x.to_string()));
        }
        let i = self.pairs.partition_point(|p| p.domain.left() < *x) - 1;
        Ok(self.pairs[i].apply(x))
    }

    /// Normalized affine patches of `self` over `region`.
    pub fn restrict(&self, region: &StdInterval) -> Vec<AffinePatch> {
        self.restrict_pairs(region)
            .into_iter()
            .map(AffinePatch::from)
            .collect()
    }

    pub(crate) fn restrict_pairs(&self, region: &StdInterval) -> Vec<CellPair> {
        reduce_sorted(restrict_raw(&self.pairs, region))
    }

    /// Left endpoints of the maximal half-open affine pieces, excluding 0.
    pub fn breakpoints(&self) -> Vec<Dyadic> {
        self.pairs
            .windows(2)
            .filter(|w| !w[0].same_law(&w[1]))
            .map(|w| w[1].domain.left())
            .collect()
    }

    /// Left endpoints of the cells of the reduced form, excluding 0. These
    /// include the breakpoints, and also the points where two cells with a
    /// common law cannot be merged into one standard pair.
    pub fn cell_boundaries(&self) -> Vec<Dyadic> {
        self.pairs.iter().skip(1).map(|p| p.domain.left()).collect()
    }

    /// `self(x) = x` for all `x` in `cell`.
    pub fn is_identity_on(&self, cell: &StdInterval) -> bool {
        self.pairs.iter().all(|p| match p.domain.intersect(cell) {
            None => true,
            Some(_) => p.is_identity(),
        })
    }

    /// Membership in `G_[0,1/2]`: the identity on `[0,1/2)` (and hence, for F
    /// and T, on the closed half by continuity).
    pub fn fixes_half(&self) -> bool {
        self.is_identity_on(&StdInterval::left_half())
    }

    /// A witness cell on which `self` is the identity, if any: the coarsest
    /// (then leftmost) identity cell of the reduced form.
    pub fn is_small(&self) -> Option<StdInterval> {
        self.pairs
            .iter()
            .filter(|p| p.is_identity())
            .min_by_key(|p| p.domain.level())
            .map(|p| p.domain.clone())
    }

    /// The coarsest standard interval inside `region` on which `self` is the
    /// identity.
    pub fn small_witness_in(&self, region: &StdInterval) -> Option<StdInterval> {
        self.pairs
            .iter()
            .filter(|p| p.is_identity())
            .filter_map(|p| p.domain.intersect(region))
            .min_by_key(|c| c.level())
    }

    /// Minimal union of standard cells off which `self` is the identity.
    pub fn support(&self) -> Vec<StdInterval> {
        merge_cells(
            self.pairs
                .iter()
                .filter(|p| !p.is_identity())
                .map(|p| p.domain.clone())
                .collect(),
        )
    }

    /// Least `n <= bound` with `self^n = 1`.
    pub fn order_up_to(&self, bound: u32) -> Option<u32> {
        let mut acc = self.clone();
        for n in 1..=bound {
            if acc.is_identity() {
                return Some(n);
            }
            acc = acc.compose(self);
        }
        None
    }

    /// Whether the one-sided limits agree at every breakpoint and across
    /// `1 ~ 0`, i.e. the map is a circle homeomorphism.
    pub fn is_circle_continuous(&self) -> bool {
        let n = self.pairs.len();
        (0..n).all(|i| {
            let a = &self.pairs[i];
            let b = &self.pairs[(i + 1) % n];
            let end = a.range.right();
            let start = b.range.left();
            end == start || (end == Dyadic::one() && start.is_zero())
        })
    }
}

fn classify(pairs: &[CellPair]) -> GroupClass {
    let n = pairs.len();
    let rotation = (0..n).all(|i| {
        let end = pairs[i].range.right();
        let start = pairs[(i + 1) % n].range.left();
        end == start || (end == Dyadic::one() && start.is_zero())
    });
    if !rotation {
        GroupClass::V
    } else if pairs[0].range.left().is_zero() {
        GroupClass::F
    } else {
        GroupClass::T
    }
}

impl fmt::Display for CellMap {
    /// `k/2^n -> k'/2^n'` per pair, separated by `; `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} -> {}", p.domain, p.range)?;
        }
        Ok(())
    }
}

impl fmt::Debug for CellMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CellMap[{}]({self})", self.class)
    }
}

impl FromStr for CellMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let pairs = s
            .split(';')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                let (a, b) = t
                    .split_once("->")
                    .ok_or_else(|| Error::Parse(format!("expected `cell -> cell`, got {t:?}")))?;
                Ok(CellPair::new(a.parse()?, b.parse()?))
            })
            .collect::<Result<Vec<_>>>()?;
        CellMap::from_pairs(pairs)
    }
}

impl Serialize for CellMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CellMap {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests;
