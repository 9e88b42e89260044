use serde::Serialize;

use super::graph::BallGraph;
use crate::error::{Error, Result};

/// A finite vertex set of a ball, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct CompactSet {
    vertices: Vec<u32>,
}

impl CompactSet {
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> CompactSet {
        let mut v: Vec<u32> = vertices.into_iter().map(|x| x as u32).collect();
        v.sort_unstable();
        v.dedup();
        CompactSet { vertices: v }
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.iter().map(|&v| v as usize)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&(v as u32)).is_ok()
    }

    pub fn union(&self, other: &CompactSet) -> CompactSet {
        CompactSet::new(self.vertices().chain(other.vertices()))
    }

    pub fn is_disjoint(&self, other: &CompactSet) -> bool {
        !self.vertices().any(|v| other.contains(v))
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for v in self.vertices() {
            m[v] = true;
        }
        m
    }

    pub fn max_depth(&self, g: &BallGraph) -> Option<u32> {
        self.vertices().map(|v| g.depth(v)).max()
    }

    /// Whether the induced subgraph is connected (the empty set counts).
    pub fn is_connected(&self, g: &BallGraph) -> bool {
        let Some(first) = self.vertices().next() else {
            return true;
        };
        let inside = self.mask(g.len());
        let mut seen = vec![false; g.len()];
        let mut stack = vec![first];
        seen[first] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in g.neighbors(v) {
                let u = u as usize;
                if inside[u] && !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ComponentKind {
    /// No frontier vertex: the component is final at every larger radius.
    ClosedBounded,
    /// Contains a frontier vertex: the finite-scale stand-in for an
    /// unbounded component.
    FrontierTouching,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub kind: ComponentKind,
    pub size: usize,
    /// Smallest vertex id, used as a stable name.
    pub representative: u32,
    #[serde(skip)]
    pub vertices: Vec<u32>,
}

/// Components of `ball ∖ K`, ordered by representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub radius: u32,
    pub removed: usize,
    pub components: Vec<Component>,
    #[serde(skip)]
    label: Vec<u32>,
}

impl ComponentReport {
    pub fn frontier_touching(&self) -> usize {
        self.components
            .iter()
            .filter(|c| c.kind == ComponentKind::FrontierTouching)
            .count()
    }

    pub fn closed_bounded(&self) -> usize {
        self.components.len() - self.frontier_touching()
    }

    /// Index into `components` of the component containing `v`, or `None`
    /// for removed vertices.
    pub fn component_of(&self, v: usize) -> Option<usize> {
        match self.label[v] {
            u32::MAX => None,
            c => Some(c as usize),
        }
    }

    /// The single component containing all of `set`, if there is one.
    pub fn component_containing(&self, set: &CompactSet) -> Option<usize> {
        let mut found = None;
        for v in set.vertices() {
            let c = self.component_of(v)?;
            match found {
                None => found = Some(c),
                Some(f) if f != c => return None,
                _ => {}
            }
        }
        found
    }
}

/// Exact components of the subgraph induced on `ball ∖ K`.
pub fn components_minus(g: &BallGraph, k: &CompactSet) -> ComponentReport {
    let n = g.len();
    let removed = k.mask(n);
    let mut label = vec![u32::MAX; n];
    let mut components = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if removed[s] || label[s] != u32::MAX {
            continue;
        }
        let c = components.len() as u32;
        label[s] = c;
        stack.push(s);
        let mut vertices = Vec::new();
        let mut touches = false;
        while let Some(v) = stack.pop() {
            vertices.push(v as u32);
            touches |= g.is_frontier(v);
            for &u in g.neighbors(v) {
                let u = u as usize;
                if !removed[u] && label[u] == u32::MAX {
                    label[u] = c;
                    stack.push(u);
                }
            }
        }
        vertices.sort_unstable();
        components.push(Component {
            kind: if touches {
                ComponentKind::FrontierTouching
            } else {
                ComponentKind::ClosedBounded
            },
            size: vertices.len(),
            representative: vertices[0],
            vertices,
        });
    }
    ComponentReport {
        radius: g.radius(),
        removed: k.len(),
        components,
        label,
    }
}

/// Extend `piece` to everything in `inside` connected to it.
fn grow(g: &BallGraph, inside: &[bool], piece: &mut Vec<usize>, in_piece: &mut [bool]) {
    let mut stack: Vec<usize> = piece.clone();
    while let Some(v) = stack.pop() {
        for &u in g.neighbors(v) {
            let u = u as usize;
            if inside[u] && !in_piece[u] {
                in_piece[u] = true;
                piece.push(u);
                stack.push(u);
            }
        }
    }
}

/// Vertices too close to the frontier to belong to a compact set: the
/// frontier and its neighbours.
fn near_frontier(g: &BallGraph, v: usize) -> bool {
    g.is_frontier(v) || g.neighbors(v).iter().any(|&u| g.is_frontier(u as usize))
}

/// Enlarge `K` to a connected set whose complement in the ball has only
/// frontier-touching components: join the pieces of `K` by shortest paths
/// that stay at depth at most `min(max depth of K, R - 2)` and then absorb
/// every closed bounded component of the complement.
///
/// `K` must avoid the frontier and its neighbours, which leaves room for the
/// complement components to be classified; the result satisfies the same
/// margin, so saturation is idempotent.
pub fn saturate(g: &BallGraph, k: &CompactSet) -> Result<CompactSet> {
    if k.is_empty() {
        return Ok(k.clone());
    }
    if let Some(v) = k.vertices().find(|&v| v >= g.len()) {
        return Err(Error::OutOfBall(format!("vertex {v} of a ball with {} vertices", g.len())));
    }
    if let Some(v) = k.vertices().find(|&v| near_frontier(g, v)) {
        return Err(Error::MarginTooSmall {
            depth: g.depth(v),
            radius: g.radius(),
        });
    }
    let cap = k
        .max_depth(g)
        .unwrap_or(0)
        .min(g.radius().saturating_sub(2));
    let mut inside = k.mask(g.len());
    let allowed = |v: usize| g.depth(v) <= cap || k.contains(v);

    // grow one connected piece from the first vertex until it meets all of K
    let first = k.vertices().next().unwrap();
    let mut piece = vec![first];
    let mut in_piece = vec![false; g.len()];
    in_piece[first] = true;
    grow(g, &inside, &mut piece, &mut in_piece);
    loop {
        let targets: Vec<bool> = (0..g.len()).map(|v| inside[v] && !in_piece[v]).collect();
        if !targets.iter().any(|&t| t) {
            break;
        }
        let path = g
            .shortest_path(&piece, &targets, &allowed)
            .expect("shallow region of a BFS ball is connected");
        for &v in &path {
            inside[v] = true;
            if !in_piece[v] {
                in_piece[v] = true;
                piece.push(v);
            }
        }
        grow(g, &inside, &mut piece, &mut in_piece);
    }
    let joined = CompactSet::new((0..g.len()).filter(|&v| inside[v]));
    let report = components_minus(g, &joined);
    let mut out: Vec<usize> = joined.vertices().collect();
    for c in &report.components {
        if c.kind == ComponentKind::ClosedBounded {
            out.extend(c.vertices.iter().map(|&v| v as usize));
        }
    }
    Ok(CompactSet::new(out))
}

/// Outcome of the finite two-set separation check: for disjoint connected
/// `K1`, `K2` with each inside a single component of the other's complement.
#[derive(Debug, Clone, Serialize)]
pub struct SeparationCheck {
    /// Every component of `ball ∖ K1` other than the one containing `K2`,
    /// and symmetrically, is a component of `ball ∖ (K1 ∪ K2)`.
    pub components_preserved: bool,
    /// Those `(m - 1) + (n - 1)` components are pairwise distinct.
    pub pairwise_distinct: bool,
    pub inherited: usize,
}

/// Check the two-set separation statement exactly on `g`. Returns `None`
/// when its hypotheses fail.
pub fn check_separation(g: &BallGraph, k1: &CompactSet, k2: &CompactSet) -> Option<SeparationCheck> {
    if k1.is_empty()
        || k2.is_empty()
        || !k1.is_disjoint(k2)
        || !k1.is_connected(g)
        || !k2.is_connected(g)
    {
        return None;
    }
    let r1 = components_minus(g, k1);
    let r2 = components_minus(g, k2);
    let c1 = r1.component_containing(k2)?;
    let c2 = r2.component_containing(k1)?;
    let both = components_minus(g, &k1.union(k2));
    let mut preserved = true;
    let mut seen = Vec::new();
    for (report, skip) in [(&r1, c1), (&r2, c2)] {
        for (i, c) in report.components.iter().enumerate() {
            if i == skip {
                continue;
            }
            let j = both.component_of(c.vertices[0] as usize);
            preserved &= j.is_some_and(|j| both.components[j].vertices == c.vertices);
            seen.push(j);
        }
    }
    let inherited = seen.len();
    seen.sort_unstable();
    seen.dedup();
    Some(SeparationCheck {
        components_preserved: preserved,
        pairwise_distinct: seen.len() == inherited,
        inherited,
    })
}

/// Result of amplifying a saturated `K` by a disjoint translate `γK`.
#[derive(Debug, Clone, Serialize)]
pub struct AmplifyReport {
    /// Frontier-touching components of `ball ∖ K`.
    pub n: usize,
    /// Frontier-touching components of `ball ∖ γK`.
    pub n_translate: usize,
    /// Frontier-touching components of `ball ∖ (K ∪ γK)`.
    pub amplified: usize,
    /// `max(2n - 2, 1)` (just 0 for `n = 0`).
    pub bound: usize,
    pub separation: SeparationCheck,
    pub report: ComponentReport,
}

impl AmplifyReport {
    pub fn holds(&self) -> bool {
        self.amplified >= self.bound
    }
}

/// Amplify: given `K` and its image `γK` under a covering translation, both
/// inside the ball, certify within the ball the hypotheses of the two-set
/// separation argument and report the components of `ball ∖ (K ∪ γK)`.
///
/// Errors with `PreconditionUnverifiable` when a hypothesis cannot be
/// checked inside the ball: `γK` meets `K`, either set is disconnected, one
/// set spans several components of the other's complement, or the ball is
/// too small to show `γK` with as many frontier-touching components as `K`.
pub fn amplify(g: &BallGraph, k: &CompactSet, gk: &CompactSet) -> Result<AmplifyReport> {
    let unverifiable = |why: &str| Err(Error::PreconditionUnverifiable(why.to_string()));
    if k.len() != gk.len() {
        return unverifiable("translate has a different size");
    }
    if !k.is_disjoint(gk) {
        return unverifiable("translate meets K");
    }
    let Some(separation) = check_separation(g, k, gk) else {
        return unverifiable("K and its translate are not connected sets lying in single complementary components");
    };
    let n = components_minus(g, k).frontier_touching();
    let n_translate = components_minus(g, gk).frontier_touching();
    if n_translate < n {
        return unverifiable("translate shows fewer frontier-touching components inside the ball");
    }
    let report = components_minus(g, &k.union(gk));
    let amplified = report.frontier_touching();
    let bound = match n {
        0 => 0,
        _ => (2 * n - 2).max(1),
    };
    Ok(AmplifyReport {
        n,
        n_translate,
        amplified,
        bound,
        separation,
        report,
    })
}

/// One finite-scale end: a chain of frontier-touching components of
/// `ball_R ∖ K` across a radius schedule, each containing the previous one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trace {
    /// `(radius, representative)` per link.
    pub links: Vec<(u32, u32)>,
}

impl Trace {
    pub fn persistence(&self) -> usize {
        self.links.len()
    }
}

/// Traces of `K` through truncations of `g` at the given radii (increasing,
/// at most `g.radius()`). Component `C` at radius `R_i` links to the
/// component at `R_{i+1}` containing it. Several components may merge into
/// one later; each chain is reported separately up to the merge, and the
/// survivor continues. Closed bounded components never appear.
pub fn end_traces(g: &BallGraph, k: &CompactSet, schedule: &[u32]) -> Vec<Trace> {
    let balls: Vec<BallGraph> = schedule.iter().map(|&r| g.truncate(r)).collect();
    end_traces_in(&balls.iter().collect::<Vec<_>>(), k)
}

/// As [`end_traces`] over prebuilt nested balls (each a truncation of the
/// next).
pub fn end_traces_in(balls: &[&BallGraph], k: &CompactSet) -> Vec<Trace> {
    let reports: Vec<(u32, ComponentReport)> = balls
        .iter()
        .map(|g| (g.radius(), components_minus(g, k)))
        .collect();
    let mut traces: Vec<Trace> = Vec::new();
    // open chains: (trace index, component index at current radius)
    let mut open: Vec<(usize, usize)> = Vec::new();
    for (step, (r, rep)) in reports.iter().enumerate() {
        let mut next: Vec<(usize, usize)> = Vec::new();
        let mut claimed: Vec<usize> = Vec::new();
        if step > 0 {
            let prev = &reports[step - 1].1;
            for &(t, c) in &open {
                let v = prev.components[c].vertices[0] as usize;
                let Some(c2) = rep.component_of(v) else { continue };
                if rep.components[c2].kind != ComponentKind::FrontierTouching {
                    continue;
                }
                if claimed.contains(&c2) {
                    continue;
                }
                claimed.push(c2);
                traces[t].links.push((*r, rep.components[c2].representative));
                next.push((t, c2));
            }
        }
        for (c, comp) in rep.components.iter().enumerate() {
            if comp.kind == ComponentKind::FrontierTouching && !claimed.contains(&c) {
                traces.push(Trace {
                    links: vec![(*r, comp.representative)],
                });
                next.push((traces.len() - 1, c));
            }
        }
        open = next;
    }
    traces
}

/// Frontier-touching components of `ball_R ∖ K` that survive as distinct
/// frontier-touching components at the larger radius `R2`.
pub fn persistent_count(g: &BallGraph, k: &CompactSet, r: u32, r2: u32) -> usize {
    let traces = end_traces(g, k, &[r, r2]);
    traces.iter().filter(|t| t.persistence() == 2).count()
}
