use std::collections::BTreeSet;

use serde::Serialize;

use crate::cosetgraph::{CosetBall, CosetState, Edge};
use crate::dyadic::StdInterval;
use crate::elements::{CellMap, GroupClass};

/// Membership in `A = { gH : g|[0,1/2) is affine }`: the state is a single
/// affine patch onto a standard interval.
pub fn member_a(s: &CosetState) -> bool {
    s.is_affine()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FlipDirection {
    /// `s ∈ A`, `v·s ∉ A`.
    LeavesA,
    /// `s ∉ A`, `v·s ∈ A`.
    EntersA,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flip {
    pub vertex: u32,
    pub depth: u32,
    pub direction: FlipDirection,
    pub state: String,
}

/// States of a ball whose `A`-membership changes under `v`.
#[derive(Debug, Clone, Serialize)]
pub struct FlipLedger {
    pub generator: String,
    pub radius: u32,
    pub flips: Vec<Flip>,
    pub total: usize,
    /// Least depth `d` such that no flip state has depth `>= d`.
    pub stabilization_radius: u32,
}

impl FlipLedger {
    pub fn contains(&self, vertex: usize) -> bool {
        self.flips.iter().any(|f| f.vertex as usize == vertex)
    }
}

/// Enumerate the flip states of `v` in `ball`. The count is exact for the
/// ball: `v` is applied directly, so it need not be a ball generator.
pub fn symdiff_ball(name: &str, v: &CellMap, ball: &CosetBall) -> FlipLedger {
    let mut flips = Vec::new();
    for i in 0..ball.len() {
        let s = ball.state(i);
        let before = member_a(s);
        if before != member_a(&s.step(v)) {
            flips.push(Flip {
                vertex: i as u32,
                depth: ball.depth(i),
                direction: if before {
                    FlipDirection::LeavesA
                } else {
                    FlipDirection::EntersA
                },
                state: s.to_record(),
            });
        }
    }
    let stabilization_radius = flips.iter().map(|f| f.depth + 1).max().unwrap_or(0);
    FlipLedger {
        generator: name.to_string(),
        radius: ball.radius(),
        total: flips.len(),
        flips,
        stabilization_radius,
    }
}

/// The standard intervals of level `>= 1` containing a cell boundary of `w`
/// in their interior.
///
/// `w` maps such an interval `I` onto a standard interval by a single affine
/// law exactly when `I` lies inside one cell of the reduced form, so these
/// are the images `I` of `A`-states that `w` moves out of `A`. A boundary
/// `k/2^m` (`k` odd) is interior to its ancestors of level `1..m`.
pub fn breakpoint_cells(w: &CellMap) -> BTreeSet<StdInterval> {
    let mut out = BTreeSet::new();
    for b in w.cell_boundaries() {
        let m = b.exponent();
        let idx = b.scaled_numerator(m).to_biguint().expect("inside [0,1)");
        let cell = StdInterval::new(idx, m).expect("inside [0,1)");
        for level in 1..m {
            out.insert(cell.ancestor(level));
        }
    }
    out
}

/// `|{I standard, level >= 1 : w is not a single affine piece on I}|`.
pub fn count(w: &CellMap) -> usize {
    breakpoint_cells(w).len()
}

/// `|vA Δ A| = count(v) + count(v⁻¹)` in the coset graph of V (or T, where
/// every standard interval of level `>= 1` is again the image of an
/// `A`-state).
pub fn symdiff_exact(v: &CellMap) -> usize {
    count(v) + count(&v.invert())
}

/// As [`symdiff_exact`], but counting only images that occur for `group`: in
/// F the `A`-states are the images `[0, 2^-m)`.
pub fn symdiff_exact_in(v: &CellMap, group: GroupClass) -> usize {
    match group {
        GroupClass::T | GroupClass::V => symdiff_exact(v),
        GroupClass::F => {
            let initial = |w: &CellMap| {
                breakpoint_cells(w)
                    .iter()
                    .filter(|c| c.index_u64() == Some(0))
                    .count()
            };
            initial(v) + initial(&v.invert())
        }
    }
}

/// The cut between `A` and its complement and the check that it separates.
#[derive(Debug, Clone, Serialize)]
pub struct CutReport {
    pub radius: u32,
    pub cut_edges: Vec<(u32, u16, u32)>,
    pub inside: usize,
    pub outside: usize,
    /// Components of `ball ∖ cut` containing both an `A`-state and an
    /// `Aᶜ`-state (0 means the cut separates).
    pub crossing_components: usize,
}

impl CutReport {
    pub fn separates(&self) -> bool {
        self.crossing_components == 0
    }
}

/// All ball edges with exactly one endpoint satisfying `pred`, and a flood
/// fill of the ball with those edges removed.
pub fn sageev_cut(ball: &CosetBall, pred: impl Fn(&CosetState) -> bool) -> CutReport {
    let n = ball.len();
    let side: Vec<bool> = (0..n).map(|i| pred(ball.state(i))).collect();
    let crosses = |e: &Edge| side[e.src as usize] != side[e.dst as usize];
    let cut_edges: Vec<(u32, u16, u32)> = ball
        .edges()
        .iter()
        .filter(|e| crosses(e))
        .map(|e| (e.src, e.generator, e.dst))
        .collect();
    let mut adj = vec![Vec::new(); n];
    for e in ball.edges().iter().filter(|e| !crosses(e)) {
        adj[e.src as usize].push(e.dst);
        adj[e.dst as usize].push(e.src);
    }
    let mut seen = vec![false; n];
    let mut crossing = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let (mut a, mut b) = (false, false);
        while let Some(v) = stack.pop() {
            if side[v] {
                a = true;
            } else {
                b = true;
            }
            for &u in &adj[v] {
                if !seen[u as usize] {
                    seen[u as usize] = true;
                    stack.push(u as usize);
                }
            }
        }
        crossing += (a && b) as usize;
    }
    let inside = side.iter().filter(|&&x| x).count();
    CutReport {
        radius: ball.radius(),
        cut_edges,
        inside,
        outside: n - inside,
        crossing_components: crossing,
    }
}
