use rand::Rng;

use super::generators::{half_rotation, standard_generator, Generator};
use super::CellMap;
use crate::error::{Error, Result};

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn name(&self) -> String {
        if self.inverse {
            format!("{}^-1", self.generator.name())
        } else {
            self.generator.name().to_string()
        }
    }

    pub fn element(&self) -> CellMap {
        let g = standard_generator(self.generator);
        if self.inverse {
            g.invert()
        } else {
            g
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedElement {
    pub name: String,
    pub element: CellMap,
}

/// `g, g^-1` for each generator, dropping inverses that coincide with an
/// earlier entry (e.g. `pi1^-1 = pi1`).
pub fn symmetrized(gens: &[Generator]) -> Vec<NamedElement> {
    let mut out: Vec<NamedElement> = Vec::with_capacity(2 * gens.len());
    for &g in gens {
        for inverse in [false, true] {
            let l = Letter { generator: g, inverse };
            let e = l.element();
            if out.iter().all(|n| n.element != e) {
                out.push(NamedElement {
                    name: l.name(),
                    element: e,
                });
            }
        }
    }
    out
}

/// Parse a product such as `x0^-1 pi1 x0 pi1` (read as `x0^-1 · pi1 · x0 ·
/// pi1`). Tokens are separated by whitespace, `*` or `·`; besides the standard
/// generators, `id` and `rot` (half rotation) are accepted.
pub fn parse_word(s: &str) -> Result<CellMap> {
    let mut acc = CellMap::identity();
    for tok in s
        .split(|c: char| c.is_whitespace() || c == '*' || c == '·')
        .filter(|t| !t.is_empty())
    {
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => (
                n,
                e.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?,
            ),
            None => (tok, 1),
        };
        let base = match name {
            "id" | "1" => CellMap::identity(),
            "rot" => half_rotation(),
            other => standard_generator(other.parse()?),
        };
        acc = acc.compose(&base.pow(exp));
    }
    Ok(acc)
}

/// A uniformly random word of length `0..=max_len` over `letters`, returned
/// with its spelling.
pub fn random_word<R: Rng>(rng: &mut R, letters: &[NamedElement], max_len: usize) -> (String, CellMap) {
    let len = rng.gen_range(0..=max_len);
    let mut acc = CellMap::identity();
    let mut spelled = Vec::with_capacity(len);
    for _ in 0..len {
        let l = &letters[rng.gen_range(0..letters.len())];
        acc = acc.compose(&l.element);
        spelled.push(l.name.as_str());
    }
    (spelled.join(" "), acc)
}
