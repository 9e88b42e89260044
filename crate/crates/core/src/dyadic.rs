//! Exact dyadic rationals and the standard dyadic intervals of `[0,1)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rational number `mantissa / 2^exponent`.
///
/// Canonical form: either `exponent == 0` or `mantissa` is odd. Zero is
/// stored as `(0, 0)`. Every constructor normalizes, so structural equality
/// is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: u32,
}

impl Dyadic {
    pub fn new(mantissa: impl Into<BigInt>, exponent: u32) -> Self {
        let mut d = Dyadic {
            mantissa: mantissa.into(),
            exponent,
        };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic {
            mantissa: BigInt::from(n),
            exponent: 0,
        }
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i64) -> Self {
        if k >= 0 {
            Dyadic {
                mantissa: BigInt::one() << (k as usize),
                exponent: 0,
            }
        } else {
            Dyadic {
                mantissa: BigInt::one(),
                exponent: (-k) as u32,
            }
        }
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        if self.exponent == 0 {
            return;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0);
        let shift = tz.min(self.exponent as u64) as u32;
        if shift > 0 {
            self.mantissa >>= shift as usize;
            self.exponent -= shift;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// Multiply by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if k >= 0 {
            let k = k as u64;
            let e = self.exponent as u64;
            if k <= e {
                Dyadic::new(self.mantissa.clone(), (e - k) as u32)
            } else {
                Dyadic::new(&self.mantissa << ((k - e) as usize), 0)
            }
        } else {
            Dyadic::new(self.mantissa.clone(), self.exponent + (-k) as u32)
        }
    }

    /// Numerator over the common denominator `2^level` (requires
    /// `level >= exponent`).
    pub fn scaled_numerator(&self, level: u32) -> BigInt {
        debug_assert!(level >= self.exponent);
        &self.mantissa << ((level - self.exponent) as usize)
    }

    fn aligned(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, u32) {
        let e = a.exponent.max(b.exponent);
        (a.scaled_numerator(e), b.scaled_numerator(e), e)
    }

    /// The pair-of-integers form used by cache files.
    pub fn to_pair(&self) -> (BigInt, u32) {
        (self.mantissa.clone(), self.exponent)
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = Dyadic::aligned(self, rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = Dyadic::aligned(self, rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic::new(-&self.mantissa, self.exponent)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = Dyadic::aligned(self, other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.mantissa)
        } else {
            write!(f, "{}/{}", self.mantissa, BigUint::one() << (self.exponent as usize))
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exponent `n` if `q == 2^n`.
fn log2_exact(q: &BigUint) -> Option<u32> {
    if q.is_zero() {
        return None;
    }
    let tz = q.trailing_zeros()?;
    if (q >> (tz as usize)).is_one() {
        u32::try_from(tz).ok()
    } else {
        None
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `p`, `p/q` with `q` a power of two, `p/2^n`, and exactly dyadic
    /// decimals such as `0.375`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not an exact dyadic rational: {s:?}"));
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den = den.trim();
            let exp = if let Some(e) = den.strip_prefix("2^") {
                e.parse::<u32>().map_err(|_| bad())?
            } else {
                let q: BigUint = den.parse().map_err(|_| bad())?;
                log2_exact(&q).ok_or_else(bad)?
            };
            return Ok(Dyadic::new(num, exp));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let negative = int.starts_with('-');
            let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
            if frac.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let mut num: BigInt = digits.parse().map_err(|_| bad())?;
            if negative {
                num = -num;
            }
            // num / 10^k = num / (2^k 5^k); exact iff 5^k divides num.
            let k = frac.len() as u32;
            let five = BigInt::from(5u32).pow(k);
            let (q, r) = num.div_rem(&five);
            if !r.is_zero() {
                return Err(bad());
            }
            return Ok(Dyadic::new(q, k));
        }
        let n: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Dyadic::new(n, 0))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Relation between two standard dyadic intervals. Any two are either
/// disjoint or nested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Disjoint,
    Equal,
    /// The first interval lies strictly inside the second.
    IinJ,
    /// The second interval lies strictly inside the first.
    JinI,
}

/// The half-open interval `[index / 2^level, (index + 1) / 2^level)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StdInterval {
    index: BigUint,
    level: u32,
}

impl StdInterval {
    pub fn new(index: impl Into<BigUint>, level: u32) -> Result<Self> {
        let index = index.into();
        if index.bits() > level as u64 {
            return Err(Error::Parse(format!(
                "interval index {index} out of range for level {level}"
            )));
        }
        Ok(StdInterval { index, level })
    }

    pub(crate) fn new_unchecked(index: BigUint, level: u32) -> Self {
        debug_assert!(index.bits() <= level as u64);
        StdInterval { index, level }
    }

    /// Convenience for small literals; panics if out of range.
    pub fn of(index: u64, level: u32) -> Self {
        StdInterval::new(index, level).expect("standard interval out of range")
    }

    /// `[0,1)`.
    pub fn unit() -> Self {
        StdInterval {
            index: BigUint::zero(),
            level: 0,
        }
    }

    /// `[0,1/2)`.
    pub fn left_half() -> Self {
        StdInterval::of(0, 1)
    }

    /// `[1/2,1)`.
    pub fn right_half() -> Self {
        StdInterval::of(1, 1)
    }

    pub fn index(&self) -> &BigUint {
        &self.index
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn left(&self) -> Dyadic {
        Dyadic::new(BigInt::from_biguint(Sign::Plus, self.index.clone()), self.level)
    }

    pub fn right(&self) -> Dyadic {
        Dyadic::new(
            BigInt::from_biguint(Sign::Plus, &self.index + 1u32),
            self.level,
        )
    }

    pub fn length(&self) -> Dyadic {
        Dyadic::pow2(-(self.level as i64))
    }

    pub fn children(&self) -> (StdInterval, StdInterval) {
        let base = &self.index << 1usize;
        (
            StdInterval::new_unchecked(base.clone(), self.level + 1),
            StdInterval::new_unchecked(base + 1u32, self.level + 1),
        )
    }

    pub fn parent(&self) -> Option<StdInterval> {
        (self.level > 0).then(|| StdInterval::new_unchecked(&self.index >> 1usize, self.level - 1))
    }

    pub fn is_left_child(&self) -> bool {
        self.level > 0 && self.index.is_even()
    }

    /// The ancestor at `level` (which must not exceed `self.level`).
    pub fn ancestor(&self, level: u32) -> StdInterval {
        debug_assert!(level <= self.level);
        StdInterval::new_unchecked(&self.index >> ((self.level - level) as usize), level)
    }

    pub fn relate(&self, other: &StdInterval) -> Relation {
        match self.level.cmp(&other.level) {
            Ordering::Equal => {
                if self.index == other.index {
                    Relation::Equal
                } else {
                    Relation::Disjoint
                }
            }
            Ordering::Greater => {
                if self.ancestor(other.level).index == other.index {
                    Relation::IinJ
                } else {
                    Relation::Disjoint
                }
            }
            Ordering::Less => {
                if other.ancestor(self.level).index == self.index {
                    Relation::JinI
                } else {
                    Relation::Disjoint
                }
            }
        }
    }

    /// `self ⊆ other`.
    pub fn is_within(&self, other: &StdInterval) -> bool {
        matches!(self.relate(other), Relation::Equal | Relation::IinJ)
    }

    pub fn intersect(&self, other: &StdInterval) -> Option<StdInterval> {
        match self.relate(other) {
            Relation::Disjoint => None,
            Relation::Equal | Relation::IinJ => Some(self.clone()),
            Relation::JinI => Some(other.clone()),
        }
    }

    /// Membership of `x`; with `strict` only the open interior counts.
    pub fn contains_point(&self, x: &Dyadic, strict: bool) -> bool {
        let (lo, hi) = (self.left(), self.right());
        if strict {
            lo < *x && *x < hi
        } else {
            lo <= *x && *x < hi
        }
    }

    /// Compare left endpoints.
    pub fn cmp_left(&self, other: &StdInterval) -> Ordering {
        let m = self.level.max(other.level);
        let a = &self.index << ((m - self.level) as usize);
        let b = &other.index << ((m - other.level) as usize);
        a.cmp(&b)
    }

    /// Affinely carry a sub-interval of `from` onto the corresponding
    /// sub-interval of `to`.
    pub fn transport(&self, from: &StdInterval, to: &StdInterval) -> StdInterval {
        debug_assert!(self.is_within(from));
        let depth = (self.level - from.level) as usize;
        let offset = &self.index - (&from.index << depth);
        StdInterval::new_unchecked((&to.index << depth) + offset, to.level + depth as u32)
    }

    /// The standard intervals of `level` covering `[0,1)` (test helper scale).
    pub fn all_at_level(level: u32) -> impl Iterator<Item = StdInterval> {
        let count = 1u64 << level;
        (0..count).map(move |k| StdInterval::new_unchecked(BigUint::from(k), level))
    }

    pub fn index_u64(&self) -> Option<u64> {
        self.index.to_u64()
    }
}

impl Ord for StdInterval {
    /// By left endpoint, then coarser first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_left(other).then(self.level.cmp(&other.level))
    }
}

impl PartialOrd for StdInterval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for StdInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.index, self.level)
    }
}

impl fmt::Debug for StdInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.left(), self.right())
    }
}

impl FromStr for StdInterval {
    type Err = Error;

    /// Parses the `k/2^n` form.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected k/2^n, got {s:?}"));
        let (k, n) = s.trim().split_once("/2^").ok_or_else(bad)?;
        let k: BigUint = k.trim().parse().map_err(|_| bad())?;
        let n: u32 = n.trim().parse().map_err(|_| bad())?;
        StdInterval::new(k, n)
    }
}

impl Serialize for StdInterval {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for StdInterval {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
