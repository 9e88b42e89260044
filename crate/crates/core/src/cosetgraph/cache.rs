//! Line-oriented text cache for coset balls.
//!
//! ```text
//! thompson-coset-ball 1
//! group V
//! radius 2
//! generators 7
//! gen x0 0/2^1 -> 0/2^2; 2/2^2 -> 1/2^2; 3/2^2 -> 1/2^1
//! ...
//! shell 0 1
//! s 0,1>0,1
//! shell 1 7
//! s 0,1>0,2
//! ...
//! edges 98
//! e 0 0 1
//! ...
//! end
//! ```
//!
//! A state line lists its patches as `k,n>k',n'` (domain cell `k/2^n` onto
//! range cell `k'/2^n'`), sorted by domain. Any malformed or inconsistent line
//! rejects the whole file.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigUint;

use super::ball::{inverse_table, CosetBall, Edge, ExploreOptions, StateSet};
use super::state::CosetState;
use crate::dyadic::StdInterval;
use crate::elements::{CellMap, CellPair, GroupClass, NamedElement};
use crate::error::{Error, Result};

pub const CACHE_MAGIC: &str = "thompson-coset-ball";
pub const CACHE_VERSION: u32 = 1;

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "THOMPSON_CACHE_DIR";

/// `<dir>/<group>-r<radius>.ball`
pub fn cache_path(dir: &Path, group: GroupClass, radius: u32) -> PathBuf {
    dir.join(format!("{}-r{}.ball", group, radius))
}

pub fn default_cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from)
}

impl CosetBall {
    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "{CACHE_MAGIC} {CACHE_VERSION}")?;
        writeln!(w, "group {}", self.group)?;
        writeln!(w, "radius {}", self.radius)?;
        writeln!(w, "generators {}", self.generators.len())?;
        for g in &self.generators {
            writeln!(w, "gen {} {}", g.name, g.element)?;
        }
        let mut i = 0;
        for (d, &n) in self.shell_sizes().iter().enumerate() {
            writeln!(w, "shell {d} {n}")?;
            for s in self.states.iter().skip(i).take(n) {
                writeln!(w, "s {}", s.to_record())?;
            }
            i += n;
        }
        writeln!(w, "edges {}", self.edges.len())?;
        for e in &self.edges {
            writeln!(w, "e {} {} {}", e.src, e.generator, e.dst)?;
        }
        writeln!(w, "end")?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent)?;
            }
        }
        let tmp = path.with_extension("ball.tmp");
        {
            let mut w = BufWriter::new(fs::File::create(&tmp)?);
            self.write_to(&mut w)?;
            w.flush()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<CosetBall> {
        let text = fs::read_to_string(path)?;
        Self::parse_cache(&text)
    }

    pub fn parse_cache(text: &str) -> Result<CosetBall> {
        Parser::new(text).ball()
    }

    /// Load `<dir>/<group>-r<radius>.ball` if present, else explore and save.
    /// A cached ball of larger radius is truncated.
    pub fn load_or_explore(
        dir: &Path,
        group: GroupClass,
        radius: u32,
        opts: ExploreOptions,
    ) -> Result<CosetBall> {
        let exact = cache_path(dir, group, radius);
        if exact.exists() {
            return Self::load(&exact);
        }
        if let Ok(entries) = fs::read_dir(dir) {
            let prefix = format!("{}-r", group);
            let mut best: Option<(u32, PathBuf)> = None;
            for entry in entries.flatten() {
                let name = entry.file_name().to_string_lossy().into_owned();
                let r = name
                    .strip_prefix(&prefix)
                    .and_then(|t| t.strip_suffix(".ball"))
                    .and_then(|t| t.parse::<u32>().ok());
                if let Some(r) = r {
                    if r > radius && best.as_ref().is_none_or(|(b, _)| r < *b) {
                        best = Some((r, entry.path()));
                    }
                }
            }
            if let Some((_, p)) = best {
                return Ok(Self::load(&p)?.truncate(radius));
            }
        }
        let ball = Self::explore(group, radius, opts)?;
        ball.save(&exact)?;
        Ok(ball)
    }
}

struct Parser<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            lines: text.lines().enumerate(),
            last: 0,
        }
    }

    fn fail<T>(&self, reason: impl Into<String>) -> Result<T> {
        Err(Error::FormatVersionMismatch {
            line: self.last,
            reason: reason.into(),
        })
    }

    fn next(&mut self) -> Result<&'a str> {
        match self.lines.next() {
            Some((i, l)) => {
                self.last = i + 1;
                Ok(l)
            }
            None => {
                self.last += 1;
                self.fail("unexpected end of file")
            }
        }
    }

    /// Next line as `keyword rest`.
    fn expect(&mut self, keyword: &str) -> Result<&'a str> {
        let line = self.next()?;
        match line.split_once(' ') {
            Some((k, rest)) if k == keyword => Ok(rest),
            _ if line == keyword => Ok(""),
            _ => self.fail(format!("expected `{keyword}`")),
        }
    }

    fn number<T: std::str::FromStr>(&self, s: &str) -> Result<T> {
        match s.trim().parse() {
            Ok(v) => Ok(v),
            Err(_) => self.fail(format!("bad number {s:?}")),
        }
    }

    fn cell(&self, s: &str) -> Result<StdInterval> {
        let (k, n) = match s.split_once(',') {
            Some(x) => x,
            None => return self.fail(format!("bad cell {s:?}")),
        };
        let k: BigUint = self.number(k)?;
        let n: u32 = self.number(n)?;
        match StdInterval::new(k, n) {
            Ok(c) => Ok(c),
            Err(e) => self.fail(e.to_string()),
        }
    }

    fn state(&self, group: GroupClass, rec: &str) -> Result<CosetState> {
        let mut patches = Vec::new();
        for tok in rec.split_whitespace() {
            let (d, r) = match tok.split_once('>') {
                Some(x) => x,
                None => return self.fail(format!("bad patch {tok:?}")),
            };
            let domain = self.cell(d)?;
            let range = self.cell(r)?;
            if range.level() == 0 {
                return self.fail("patch image is all of [0,1)");
            }
            patches.push(CellPair::new(domain, range));
        }
        if patches.is_empty() {
            return self.fail("empty state");
        }
        let s = CosetState::from_patches(group, patches);
        if let Err(e) = s.check_invariants() {
            return self.fail(e);
        }
        if s.to_record() != rec.trim() {
            return self.fail("state is not in normal form");
        }
        Ok(s)
    }

    fn ball(mut self) -> Result<CosetBall> {
        let head = self.next()?;
        if head != format!("{CACHE_MAGIC} {CACHE_VERSION}") {
            return self.fail(format!("expected header `{CACHE_MAGIC} {CACHE_VERSION}`"));
        }
        let group: GroupClass = {
            let g = self.expect("group")?;
            match g.parse() {
                Ok(g) => g,
                Err(_) => return self.fail(format!("bad group {g:?}")),
            }
        };
        let radius: u32 = {
            let r = self.expect("radius")?;
            self.number(r)?
        };
        let ngen: usize = {
            let n = self.expect("generators")?;
            self.number(n)?
        };
        let mut generators = Vec::with_capacity(ngen);
        for _ in 0..ngen {
            let rest = self.expect("gen")?;
            let (name, map) = match rest.split_once(' ') {
                Some(x) => x,
                None => return self.fail("generator line needs a name and a map"),
            };
            let element: CellMap = match map.parse() {
                Ok(e) => e,
                Err(e) => return self.fail(format!("bad generator map: {e}")),
            };
            if element.class() > group {
                return self.fail(format!("generator {name} is not in {group}"));
            }
            generators.push(NamedElement {
                name: name.to_string(),
                element,
            });
        }
        for g in &generators {
            let inv = g.element.invert();
            if !generators.iter().any(|h| h.element == inv) {
                return self.fail("generator list is not symmetric");
            }
        }
        let inverse_of = inverse_table(&generators);

        let mut states = StateSet::default();
        let mut depth = Vec::new();
        for d in 0..=radius {
            let rest = self.expect("shell")?;
            let mut it = rest.split_whitespace();
            let (sd, sn) = match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => return self.fail("shell line needs depth and count"),
            };
            let sd: u32 = self.number(sd)?;
            let sn: usize = self.number(sn)?;
            if sd != d {
                return self.fail(format!("expected shell {d}"));
            }
            if sn == 0 {
                return self.fail("empty shell");
            }
            for _ in 0..sn {
                let rec = self.expect("s")?;
                let s = self.state(group, rec)?;
                if s.group() != group {
                    return self.fail("group mismatch");
                }
                if !states.insert(s) {
                    return self.fail("duplicate state");
                }
                depth.push(d);
            }
        }
        if states.get_index(0) != Some(&CosetState::identity(group)) {
            return self.fail("shell 0 is not the identity state");
        }

        let ne: usize = {
            let n = self.expect("edges")?;
            self.number(n)?
        };
        let mut edges = Vec::with_capacity(ne);
        for _ in 0..ne {
            let rest = self.expect("e")?;
            let f: Vec<&str> = rest.split_whitespace().collect();
            if f.len() != 3 {
                return self.fail("edge line needs three fields");
            }
            let e = Edge {
                src: self.number(f[0])?,
                generator: self.number(f[1])?,
                dst: self.number(f[2])?,
            };
            if e.src as usize >= states.len()
                || e.dst as usize >= states.len()
                || e.generator as usize >= generators.len()
            {
                return self.fail("edge index out of range");
            }
            let (ds, dd) = (depth[e.src as usize], depth[e.dst as usize]);
            if dd > ds + 1 || ds > dd + 1 {
                return self.fail("edge jumps more than one shell");
            }
            edges.push(e);
        }
        self.expect("end")?;
        if let Some((i, l)) = self.lines.find(|(_, l)| !l.trim().is_empty()) {
            self.last = i + 1;
            return self.fail(format!("trailing content {l:?}"));
        }
        Ok(CosetBall {
            group,
            generators,
            inverse_of,
            radius,
            states,
            depth,
            edges,
        })
    }
}
