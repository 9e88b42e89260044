use std::fmt;

use crate::dyadic::{Dyadic, StdInterval};
use crate::elements::{
    compose_raw, reduce_sorted, sort_by_domain, AffinePatch, CellMap, CellPair, GroupClass,
};
use crate::error::{Error, Result};

/// The left coset `gH`, `H = G_[0,1/2]`, recorded as the restriction
/// `g|[0,1/2)`. Two elements give the same state exactly when they lie in
/// the same coset, so the record doubles as the canonical vertex key.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CosetState {
    group: GroupClass,
    patches: Vec<CellPair>,
}

impl CosetState {
    pub fn identity(group: GroupClass) -> Self {
        CosetState {
            group,
            patches: vec![CellPair::identity(StdInterval::left_half())],
        }
    }

    /// The state of `g H`.
    pub fn of(g: &CellMap, group: GroupClass) -> Result<Self> {
        if g.class() > group {
            return Err(Error::ClassMismatch {
                expected: group.to_string(),
                found: g.class().to_string(),
            });
        }
        Ok(CosetState {
            group,
            patches: g.restrict_pairs(&StdInterval::left_half()),
        })
    }

    /// Build from raw patches; they are sorted and normalized but otherwise
    /// trusted (used by the cache loader, which validates separately).
    pub(crate) fn from_patches(group: GroupClass, mut patches: Vec<CellPair>) -> Self {
        sort_by_domain(&mut patches);
        CosetState {
            group,
            patches: reduce_sorted(patches),
        }
    }

    pub fn group(&self) -> GroupClass {
        self.group
    }

    /// The same coset viewed in a larger group (`F ⊂ T ⊂ V`).
    pub fn embed(&self, group: GroupClass) -> Result<Self> {
        if group < self.group {
            return Err(Error::ClassMismatch {
                expected: group.to_string(),
                found: self.group.to_string(),
            });
        }
        Ok(CosetState {
            group,
            patches: self.patches.clone(),
        })
    }

    /// Normalized patches, sorted by domain.
    pub fn patches(&self) -> &[CellPair] {
        &self.patches
    }

    pub fn affine_patches(&self) -> Vec<AffinePatch> {
        self.patches.iter().cloned().map(AffinePatch::from).collect()
    }

    /// Single affine patch onto a standard interval.
    pub fn is_affine(&self) -> bool {
        self.patches.len() == 1
    }

    /// Image of `[0,1/2)` when the state is affine.
    pub fn affine_image(&self) -> Option<&StdInterval> {
        self.is_affine().then(|| &self.patches[0].range)
    }

    /// State of `(v·g)H` from the state of `gH`.
    pub fn step(&self, v: &CellMap) -> CosetState {
        let mut patches = compose_raw(v.pairs(), &self.patches).expect("v is total");
        sort_by_domain(&mut patches);
        CosetState {
            group: self.group,
            patches: reduce_sorted(patches),
        }
    }

    /// State of `(g·n)H` from the state of `gH`, for `n` fixing `[1/2,1)`
    /// pointwise. Such `n` normalize `H` and act on the coset graph as covering
    /// transformations commuting with every `step`.
    pub fn translate(&self, n: &CellMap) -> Result<CosetState> {
        if !n.is_identity_on(&StdInterval::right_half()) {
            return Err(Error::NotNormalizing);
        }
        let inner = n.restrict_pairs(&StdInterval::left_half());
        let mut patches = compose_raw(&self.patches, &inner).expect("n maps [0,1/2) to itself");
        sort_by_domain(&mut patches);
        Ok(CosetState {
            group: self.group,
            patches: reduce_sorted(patches),
        })
    }

    /// Evaluate the recorded restriction at `x ∈ [0,1/2)`.
    pub fn evaluate(&self, x: &Dyadic) -> Option<Dyadic> {
        self.patches
            .iter()
            .find(|p| p.domain.contains_point(x, false))
            .map(|p| p.apply(x))
    }

    /// Total length of the image of `[0,1/2)`.
    pub fn image_measure(&self) -> Dyadic {
        self.patches
            .iter()
            .fold(Dyadic::zero(), |acc, p| &acc + &p.range.length())
    }

    /// Check the structural invariants: patches tile `[0,1/2)`, images are
    /// disjoint with total length below 1, and for F the map is increasing
    /// and continuous from 0.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut cursor = Dyadic::zero();
        for p in &self.patches {
            if p.domain.left() != cursor {
                return Err(format!("patch domains do not tile at {cursor}"));
            }
            cursor = p.domain.right();
        }
        if cursor != "1/2".parse::<Dyadic>().unwrap() {
            return Err("patch domains do not end at 1/2".into());
        }
        let mut images: Vec<&StdInterval> = self.patches.iter().map(|p| &p.range).collect();
        images.sort();
        for w in images.windows(2) {
            if w[0].right() > w[1].left() {
                return Err(format!("images {:?} and {:?} overlap", w[0], w[1]));
            }
        }
        if self.image_measure() >= Dyadic::one() {
            return Err("image has full measure".into());
        }
        if self.group == GroupClass::F {
            if !self.patches[0].range.left().is_zero() {
                return Err("F state does not fix 0".into());
            }
            for w in self.patches.windows(2) {
                if w[0].range.right() != w[1].range.left() {
                    return Err("F state is not increasing and continuous".into());
                }
            }
        }
        Ok(())
    }

    /// Compact one-line form: `k,n>k',n'` per patch.
    pub fn to_record(&self) -> String {
        let mut out = String::new();
        for (i, p) in self.patches.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&format!(
                "{},{}>{},{}",
                p.domain.index(),
                p.domain.level(),
                p.range.index(),
                p.range.level()
            ));
        }
        out
    }
}

impl fmt::Debug for CosetState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "State[{}](", self.group)?;
        for (i, p) in self.patches.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} -> {}", p.domain, p.range)?;
        }
        f.write_str(")")
    }
}
