use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A letter of `Z/2 * Z/3 = <a> * <b>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
    B2,
}

/// The two free factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Factor {
    /// `<a>`, order 2.
    A,
    /// `<b>`, order 3.
    B,
}

impl Factor {
    pub fn other(self) -> Factor {
        match self {
            Factor::A => Factor::B,
            Factor::B => Factor::A,
        }
    }

    fn order(self) -> u8 {
        match self {
            Factor::A => 2,
            Factor::B => 3,
        }
    }
}

impl Letter {
    pub fn factor(self) -> Factor {
        match self {
            Letter::A => Factor::A,
            Letter::B | Letter::B2 => Factor::B,
        }
    }

    fn exponent(self) -> u8 {
        match self {
            Letter::A | Letter::B => 1,
            Letter::B2 => 2,
        }
    }

    fn from_power(factor: Factor, e: u8) -> Option<Letter> {
        match (factor, e % factor.order()) {
            (_, 0) => None,
            (Factor::A, _) => Some(Letter::A),
            (Factor::B, 1) => Some(Letter::B),
            (Factor::B, _) => Some(Letter::B2),
        }
    }

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::A,
            Letter::B => Letter::B2,
            Letter::B2 => Letter::B,
        }
    }

    /// The product of two letters of one factor, `None` for the identity.
    pub fn merge(self, other: Letter) -> Option<Letter> {
        debug_assert_eq!(self.factor(), other.factor());
        Letter::from_power(self.factor(), self.exponent() + other.exponent())
    }

    pub const ALL: [Letter; 3] = [Letter::A, Letter::B, Letter::B2];
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::A => "a",
            Letter::B => "b",
            Letter::B2 => "b²",
        })
    }
}

/// An element of the modular group in alternating normal form: consecutive
/// letters come from different factors.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModWord(Vec<Letter>);

impl ModWord {
    pub fn identity() -> ModWord {
        ModWord(Vec::new())
    }

    pub fn letter(l: Letter) -> ModWord {
        ModWord(vec![l])
    }

    /// Reduce an arbitrary letter sequence with `a² = b³ = 1`.
    pub fn normal_form(letters: &[Letter]) -> ModWord {
        let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
        for &l in letters {
            match out.last() {
                Some(&top) if top.factor() == l.factor() => {
                    out.pop();
                    if let Some(m) = top.merge(l) {
                        out.push(m);
                    }
                }
                _ => out.push(l),
            }
        }
        ModWord(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Number of letters (syllables) of the normal form.
    pub fn syllables(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn mul(&self, other: &ModWord) -> ModWord {
        let mut all = self.0.clone();
        all.extend_from_slice(&other.0);
        ModWord::normal_form(&all)
    }

    pub fn inverse(&self) -> ModWord {
        ModWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub(crate) fn pop(&self) -> ModWord {
        ModWord(self.0[..self.0.len() - 1].to_vec())
    }

    /// Every normal form with at most `max` syllables, shortest first.
    pub fn enumerate(max: usize) -> Vec<ModWord> {
        let mut out = vec![ModWord::identity()];
        let mut layer = vec![ModWord::identity()];
        for _ in 0..max {
            let mut next = Vec::new();
            for w in &layer {
                for l in Letter::ALL {
                    if w.last().is_none_or(|t| t.factor() != l.factor()) {
                        let mut v = w.0.clone();
                        v.push(l);
                        next.push(ModWord(v));
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl fmt::Display for ModWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl Serialize for ModWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parse letters `a`, `b`, `b2`, `b^2`, `b²` (whitespace and `*` ignored;
/// `1` or the empty string is the identity). The result is reduced.
impl FromStr for ModWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<ModWord> {
        let mut letters = Vec::new();
        let mut chars = s.chars().filter(|c| !c.is_whitespace() && *c != '*').peekable();
        if s.trim() == "1" {
            return Ok(ModWord::identity());
        }
        while let Some(c) = chars.next() {
            match c {
                'a' => letters.push(Letter::A),
                'b' => {
                    if chars.peek() == Some(&'^') {
                        chars.next();
                    }
                    match chars.peek() {
                        Some('2') | Some('²') => {
                            chars.next();
                            letters.push(Letter::B2);
                        }
                        _ => letters.push(Letter::B),
                    }
                }
                _ => return Err(Error::Parse(format!("unexpected {c:?} in modular word {s:?}"))),
            }
        }
        Ok(ModWord::normal_form(&letters))
    }
}
