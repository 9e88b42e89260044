//! Algorithms on lists of cell pairs. A list need not cover `[0,1)`; the
//! coset states use the same machinery on `[0,1/2)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::dyadic::{Dyadic, StdInterval};

/// The affine orientation-preserving map of `domain` onto `range`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellPair {
    pub domain: StdInterval,
    pub range: StdInterval,
}

impl CellPair {
    pub fn new(domain: StdInterval, range: StdInterval) -> Self {
        CellPair { domain, range }
    }

    pub fn identity(cell: StdInterval) -> Self {
        CellPair {
            domain: cell.clone(),
            range: cell,
        }
    }

    /// `log2` of the slope.
    pub fn slope_exp(&self) -> i64 {
        self.domain.level() as i64 - self.range.level() as i64
    }

    /// Constant term `c` of the law `x ↦ 2^s x + c`.
    pub fn offset(&self) -> Dyadic {
        &self.range.left() - &self.domain.left().mul_pow2(self.slope_exp())
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.range
    }

    /// Same affine law (slope and offset) as `other`.
    pub fn same_law(&self, other: &CellPair) -> bool {
        self.slope_exp() == other.slope_exp() && self.offset() == other.offset()
    }

    pub fn apply(&self, x: &Dyadic) -> Dyadic {
        let rel = x - &self.domain.left();
        &self.range.left() + &rel.mul_pow2(self.slope_exp())
    }

    /// Image of a sub-interval of the domain.
    pub fn image_of(&self, sub: &StdInterval) -> StdInterval {
        sub.transport(&self.domain, &self.range)
    }

    /// Preimage of a sub-interval of the range.
    pub fn preimage_of(&self, sub: &StdInterval) -> StdInterval {
        sub.transport(&self.range, &self.domain)
    }

    pub fn inverse(&self) -> CellPair {
        CellPair::new(self.range.clone(), self.domain.clone())
    }

    pub fn split(&self) -> [CellPair; 2] {
        let (d0, d1) = self.domain.children();
        let (r0, r1) = self.range.children();
        [CellPair::new(d0, r0), CellPair::new(d1, r1)]
    }

    /// Whether `self` followed by `next` (in domain order) is a mergeable
    /// sibling pair.
    fn merges_with(&self, next: &CellPair) -> bool {
        fn siblings(a: &StdInterval, b: &StdInterval) -> bool {
            a.level() == b.level() && a.is_left_child() && *b.index() == a.index() + 1u32
        }
        siblings(&self.domain, &next.domain) && siblings(&self.range, &next.range)
    }

    fn merged(&self) -> CellPair {
        CellPair::new(
            self.domain.parent().expect("merge of level-0 cell"),
            self.range.parent().expect("merge of level-0 cell"),
        )
    }
}

impl fmt::Debug for CellPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.domain, self.range)
    }
}

pub(crate) fn sort_by_domain(pairs: &mut [CellPair]) {
    pairs.sort_by(|a, b| a.domain.cmp(&b.domain));
}

/// Merge sibling pairs until none remain. Input must be sorted by domain.
pub(crate) fn reduce_sorted(pairs: Vec<CellPair>) -> Vec<CellPair> {
    let mut out: Vec<CellPair> = Vec::with_capacity(pairs.len());
    for p in pairs {
        let mut cur = p;
        while let Some(top) = out.last() {
            if top.merges_with(&cur) {
                cur = out.pop().unwrap().merged();
            } else {
                break;
            }
        }
        out.push(cur);
    }
    out
}

/// Index of the cell whose domain contains the left endpoint of `target`,
/// assuming `pairs` is sorted by domain and the domains are disjoint.
fn locate(pairs: &[CellPair], target: &StdInterval) -> Option<usize> {
    let idx = pairs.partition_point(|p| p.domain.cmp_left(target) != Ordering::Greater);
    let i = idx.checked_sub(1)?;
    // Standard intervals are nested or disjoint, so a cell starting at or
    // before target.left contains that point iff it meets target.
    (pairs[i].domain.relate(target) != crate::dyadic::Relation::Disjoint).then_some(i)
}

/// `outer ∘ inner`, as cell pairs on the domains of `inner`. Every range of
/// `inner` must be covered by the domains of `outer` (sorted by domain).
/// Returns `None` if coverage fails. Output is unsorted and unreduced.
pub(crate) fn compose_raw(outer: &[CellPair], inner: &[CellPair]) -> Option<Vec<CellPair>> {
    let mut out = Vec::with_capacity(inner.len().max(outer.len()));
    for p in inner {
        let i = locate(outer, &p.range)?;
        let q = &outer[i];
        if p.range.is_within(&q.domain) {
            out.push(CellPair::new(p.domain.clone(), q.image_of(&p.range)));
            continue;
        }
        // The range of p is split among consecutive outer cells.
        let mut j = i;
        while let Some(q) = outer.get(j).filter(|q| q.domain.is_within(&p.range)) {
            out.push(CellPair::new(p.preimage_of(&q.domain), q.range.clone()));
            j += 1;
        }
        if j == i {
            return None;
        }
    }
    Some(out)
}

/// Pieces of `pairs` lying over `region`, as pairs whose domains partition
/// `region` (when the domains cover it).
pub(crate) fn restrict_raw(pairs: &[CellPair], region: &StdInterval) -> Vec<CellPair> {
    let mut out = Vec::new();
    for p in pairs {
        match p.domain.intersect(region) {
            None => {}
            Some(cell) if cell == p.domain => out.push(p.clone()),
            Some(cell) => out.push(CellPair::new(cell.clone(), p.image_of(&cell))),
        }
    }
    out
}

/// Check that the given intervals, once sorted, tile `[lo, hi)` exactly.
pub(crate) fn tiles(mut cells: Vec<&StdInterval>, lo: &Dyadic, hi: &Dyadic) -> Result<(), String> {
    cells.sort();
    let mut cursor = lo.clone();
    for c in cells {
        let l = c.left();
        match l.cmp(&cursor) {
            Ordering::Less => return Err(format!("cell {c:?} overlaps its predecessor")),
            Ordering::Greater => return Err(format!("gap before cell {c:?}")),
            Ordering::Equal => cursor = c.right(),
        }
    }
    if cursor != *hi {
        return Err(format!("cells end at {cursor}, expected {hi}"));
    }
    Ok(())
}

/// Maximal standard intervals tiling `[lo, hi)`, where `0 <= lo <= hi <= 1`
/// are dyadic.
pub fn dyadic_cover(lo: &Dyadic, hi: &Dyadic) -> Vec<StdInterval> {
    let mut out = Vec::new();
    let mut cur = lo.clone();
    while cur < *hi {
        // Coarsest cell starting at cur is at cur's own exponent; refine
        // until it fits below hi.
        let mut level = cur.exponent();
        while &cur + &Dyadic::pow2(-(level as i64)) > *hi {
            level += 1;
        }
        let idx: BigInt = cur.scaled_numerator(level);
        let idx = idx.to_biguint().expect("negative endpoint");
        let cell = StdInterval::new_unchecked(idx, level);
        cur = cell.right();
        out.push(cell);
    }
    out
}

/// Collapse a set of disjoint intervals by merging complete sibling pairs.
pub(crate) fn merge_cells(mut cells: Vec<StdInterval>) -> Vec<StdInterval> {
    cells.sort();
    let mut out: Vec<StdInterval> = Vec::with_capacity(cells.len());
    for c in cells {
        let mut cur = c;
        while let Some(top) = out.last() {
            if top.level() == cur.level()
                && top.is_left_child()
                && *cur.index() == top.index() + 1u32
            {
                out.pop();
                cur = cur.parent().unwrap();
            } else {
                break;
            }
        }
        out.push(cur);
    }
    out
}
