use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::pairs::{dyadic_cover, CellPair};
use super::{sort_by_domain, CellMap, GroupClass};
use crate::dyadic::{Dyadic, StdInterval};
use crate::error::{Error, Result};

/// The standard generators; `x0, x1` generate F, adding `pi0` gives T and
/// adding `pi1` gives V.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    X0,
    X1,
    Pi0,
    Pi1,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::X0, Generator::X1, Generator::Pi0, Generator::Pi1];

    pub fn name(self) -> &'static str {
        match self {
            Generator::X0 => "x0",
            Generator::X1 => "x1",
            Generator::Pi0 => "pi0",
            Generator::Pi1 => "pi1",
        }
    }

    /// Generating set used for the coset graph of `group`.
    pub fn generating_set(group: GroupClass) -> &'static [Generator] {
        match group {
            GroupClass::F => &Self::ALL[..2],
            GroupClass::T => &Self::ALL[..3],
            GroupClass::V => &Self::ALL,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x0" => Ok(Generator::X0),
            "x1" => Ok(Generator::X1),
            "pi0" | "π0" => Ok(Generator::Pi0),
            "pi1" | "π1" => Ok(Generator::Pi1),
            other => Err(Error::Parse(format!("unknown generator {other:?}"))),
        }
    }
}

pub fn standard_generator(g: Generator) -> CellMap {
    let cells: &[((u64, u32), (u64, u32))] = match g {
        // t/2 on [0,1/2), t - 1/4 on [1/2,3/4), 2t - 1 on [3/4,1)
        Generator::X0 => &[((0, 1), (0, 2)), ((2, 2), (1, 2)), ((3, 2), (1, 1))],
        // identity on [0,1/2), x0 rescaled onto [1/2,1)
        Generator::X1 => &[
            ((0, 1), (0, 1)),
            ((2, 2), (4, 3)),
            ((6, 3), (5, 3)),
            ((7, 3), (3, 2)),
        ],
        // cyclic shift of the three cells [0,1/2), [1/2,3/4), [3/4,1)
        Generator::Pi0 => &[((0, 1), (2, 2)), ((2, 2), (3, 2)), ((3, 2), (0, 1))],
        // swap the two quarters of [1/2,1)
        Generator::Pi1 => &[((0, 1), (0, 1)), ((2, 2), (3, 2)), ((3, 2), (2, 2))],
    };
    CellMap::from_literal(cells).expect("generator tables are valid partitions")
}

/// Rotation `t ↦ t + 1/2 mod 1`.
pub fn half_rotation() -> CellMap {
    CellMap::from_literal(&[((0, 1), (1, 1)), ((1, 1), (0, 1))]).unwrap()
}

/// Conjugate `g` by the affine map `t ↦ lo + 2^-scale · t` of `[0,1)` onto
/// `[lo, lo + 2^-scale)`, extended by the identity elsewhere. The target must
/// lie in `[0,1)`.
pub fn squeeze(g: &CellMap, lo: &Dyadic, scale: u32) -> Result<CellMap> {
    let hi = lo + &Dyadic::pow2(-(scale as i64));
    if lo.is_negative() || hi > Dyadic::one() {
        return Err(Error::OutOfDomain(format!("[{lo}, {hi})")));
    }
    // A level-n cell maps to a standard cell iff lo is a multiple of 2^-(n+scale).
    let need = lo.exponent().saturating_sub(scale);
    let mut work: Vec<CellPair> = g.pairs().to_vec();
    let mut refined = Vec::with_capacity(work.len());
    while let Some(p) = work.pop() {
        if p.domain.level() >= need && p.range.level() >= need {
            refined.push(p);
        } else {
            work.extend(p.split());
        }
    }
    let carry = |c: &StdInterval| -> StdInterval {
        let left = lo + &c.left().mul_pow2(-(scale as i64));
        let level = c.level() + scale;
        let idx = left
            .scaled_numerator(level)
            .to_biguint()
            .expect("non-negative endpoint");
        StdInterval::new(idx, level).expect("squeezed cell inside [0,1)")
    };
    let mut pairs: Vec<CellPair> = refined
        .iter()
        .map(|p| CellPair::new(carry(&p.domain), carry(&p.range)))
        .collect();
    for c in dyadic_cover(&Dyadic::zero(), lo)
        .into_iter()
        .chain(dyadic_cover(&hi, &Dyadic::one()))
    {
        pairs.push(CellPair::identity(c));
    }
    sort_by_domain(&mut pairs);
    Ok(CellMap::from_sorted_valid(pairs))
}

/// Which half of `[0,1)` a squeezed copy lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `[0,1/2)`: these elements normalize `G_[0,1/2]`.
    Left,
    /// `[1/2,1)`: these elements lie in `G_[0,1/2]`.
    Right,
}

/// Generators of the copy of `group` (F for F and T, V for V) supported in one
/// half of the interval, as `(name, element)` pairs.
pub fn half_supported_generators(group: GroupClass, side: Side) -> Vec<(String, CellMap)> {
    let lo = match side {
        Side::Left => Dyadic::zero(),
        Side::Right => "1/2".parse().unwrap(),
    };
    let base: &[Generator] = match group {
        GroupClass::F | GroupClass::T => &Generator::ALL[..2],
        GroupClass::V => &Generator::ALL,
    };
    let tag = match side {
        Side::Left => "L",
        Side::Right => "R",
    };
    base.iter()
        .map(|&g| {
            let e = squeeze(&standard_generator(g), &lo, 1).expect("half is inside [0,1)");
            (format!("{}{}", g.name(), tag), e)
        })
        .collect()
}

/// The four arcs of the circle `[0,1)/0~1` used to generate T by small
/// elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Arc {
    /// Upper half `(0,1/2)`.
    U,
    /// Lower half `(1/2,1)`.
    D,
    /// Left half `(1/4,3/4)`.
    L,
    /// Right half, wrapping through 0: `(3/4,5/4)`.
    R,
}

impl Arc {
    pub const ALL: [Arc; 4] = [Arc::L, Arc::R, Arc::U, Arc::D];

    pub fn opposite(self) -> Arc {
        match self {
            Arc::U => Arc::D,
            Arc::D => Arc::U,
            Arc::L => Arc::R,
            Arc::R => Arc::L,
        }
    }

    /// Standard cells tiling the complement of the arc.
    pub fn complement(self) -> Vec<StdInterval> {
        match self {
            Arc::U => vec![StdInterval::right_half()],
            Arc::D => vec![StdInterval::left_half()],
            Arc::L => vec![StdInterval::of(0, 2), StdInterval::of(3, 2)],
            Arc::R => vec![StdInterval::of(1, 2), StdInterval::of(2, 2)],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Arc::U => "U",
            Arc::D => "D",
            Arc::L => "L",
            Arc::R => "R",
        }
    }
}

/// Two generators of the copy of F supported on `arc`: `x0, x1` squeezed onto
/// the arc, rotated by a half turn for `D` and `R`.
pub fn arc_subgroup_generators(arc: Arc) -> [CellMap; 2] {
    let (lo, rotate) = match arc {
        Arc::U => (Dyadic::zero(), false),
        Arc::D => (Dyadic::zero(), true),
        Arc::L => ("1/4".parse().unwrap(), false),
        Arc::R => ("1/4".parse().unwrap(), true),
    };
    let rot = half_rotation();
    [Generator::X0, Generator::X1].map(|g| {
        let e = squeeze(&standard_generator(g), &lo, 1).expect("arc is inside [0,1)");
        if rotate {
            e.conjugate_by(&rot)
        } else {
            e
        }
    })
}
