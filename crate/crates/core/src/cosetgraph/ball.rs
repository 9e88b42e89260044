use std::hash::BuildHasherDefault;

use indexmap::IndexSet;
use rayon::prelude::*;
use rustc_hash::FxHasher;

use super::state::CosetState;
use crate::elements::{symmetrized, CellMap, Generator, GroupClass, NamedElement};
use crate::error::{Error, Result};

pub(crate) type StateSet = IndexSet<CosetState, BuildHasherDefault<FxHasher>>;

/// Default vertex budget for exploration.
pub const DEFAULT_BUDGET: usize = 5_000_000;

/// Vertices expanded per parallel batch. Batches are merged in order, so the
/// result does not depend on the worker count.
const BATCH: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: u32,
    pub generator: u16,
    pub dst: u32,
}

#[derive(Debug, Clone, Copy)]
pub struct ExploreOptions {
    pub budget: usize,
    /// Worker cap; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            budget: DEFAULT_BUDGET,
            threads: None,
        }
    }
}

/// The radius-`R` ball around the identity coset in the coset graph of
/// `(G, G_[0,1/2])`, explored breadth first.
///
/// Vertices are numbered in BFS order, so the vertices of depth `<= r` form
/// a prefix. Edges are all labelled generator moves with both endpoints in
/// the ball; every move out of a non-frontier vertex stays inside.
#[derive(Clone)]
pub struct CosetBall {
    pub(crate) group: GroupClass,
    pub(crate) generators: Vec<NamedElement>,
    pub(crate) inverse_of: Vec<u16>,
    pub(crate) radius: u32,
    pub(crate) states: StateSet,
    pub(crate) depth: Vec<u32>,
    pub(crate) edges: Vec<Edge>,
}

pub(crate) fn inverse_table(gens: &[NamedElement]) -> Vec<u16> {
    gens.iter()
        .map(|g| {
            let inv = g.element.invert();
            gens.iter()
                .position(|h| h.element == inv)
                .expect("generator list is symmetric") as u16
        })
        .collect()
}

impl CosetBall {
    /// Explore with the standard generating set of `group`.
    pub fn explore(group: GroupClass, radius: u32, opts: ExploreOptions) -> Result<CosetBall> {
        Self::explore_with(group, Generator::generating_set(group), radius, opts)
    }

    /// Explore with the given generators (inverses are added).
    pub fn explore_with(
        group: GroupClass,
        gens: &[Generator],
        radius: u32,
        opts: ExploreOptions,
    ) -> Result<CosetBall> {
        let generators = symmetrized(gens);
        for g in &generators {
            if g.element.class() > group {
                return Err(Error::ClassMismatch {
                    expected: group.to_string(),
                    found: g.element.class().to_string(),
                });
            }
        }
        match opts.threads {
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| Error::Io(std::io::Error::other(e)))?;
                pool.install(|| Self::bfs(group, generators, radius, opts.budget))
            }
            None => Self::bfs(group, generators, radius, opts.budget),
        }
    }

    fn bfs(
        group: GroupClass,
        generators: Vec<NamedElement>,
        radius: u32,
        budget: usize,
    ) -> Result<CosetBall> {
        let inverse_of = inverse_table(&generators);
        let elements: Vec<&CellMap> = generators.iter().map(|g| &g.element).collect();
        let mut states = StateSet::default();
        states.insert(CosetState::identity(group));
        let mut depth = vec![0u32];
        let mut edges = Vec::new();
        let mut layer = 0..1usize;
        for d in 0..=radius {
            let frontier = d == radius;
            let mut start = layer.start;
            while start < layer.end {
                let end = (start + BATCH).min(layer.end);
                let images: Vec<Vec<CosetState>> = (start..end)
                    .into_par_iter()
                    .map(|i| {
                        let s = &states[i];
                        elements.iter().map(|v| s.step(v)).collect()
                    })
                    .collect();
                for (offset, row) in images.into_iter().enumerate() {
                    let src = (start + offset) as u32;
                    for (gi, t) in row.into_iter().enumerate() {
                        let dst = if frontier {
                            match states.get_index_of(&t) {
                                Some(j) => j,
                                None => continue,
                            }
                        } else {
                            let (j, fresh) = states.insert_full(t);
                            if fresh {
                                depth.push(d + 1);
                                if states.len() > budget {
                                    return Err(Error::ResourceLimit {
                                        budget,
                                        vertices: states.len(),
                                        completed_radius: d,
                                        radius_in_progress: d + 1,
                                    });
                                }
                            }
                            j
                        };
                        edges.push(Edge {
                            src,
                            generator: gi as u16,
                            dst: dst as u32,
                        });
                    }
                }
                start = end;
            }
            layer = layer.end..states.len();
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

    pub fn group(&self) -> GroupClass {
        self.group
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Symmetrized generators; edge labels index into this list.
    pub fn generators(&self) -> &[NamedElement] {
        &self.generators
    }

    pub fn inverse_label(&self, generator: u16) -> u16 {
        self.inverse_of[generator as usize]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> &CosetState {
        &self.states[i]
    }

    pub fn states(&self) -> impl Iterator<Item = &CosetState> {
        self.states.iter()
    }

    pub fn depth(&self, i: usize) -> u32 {
        self.depth[i]
    }

    pub fn depths(&self) -> &[u32] {
        &self.depth
    }

    pub fn index_of(&self, s: &CosetState) -> Option<usize> {
        self.states.get_index_of(s)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_frontier(&self, i: usize) -> bool {
        self.depth[i] == self.radius
    }

    pub fn frontier(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.is_frontier(i))
    }

    /// Number of vertices at each depth `0..=radius`.
    pub fn shell_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.radius as usize + 1];
        for &d in &self.depth {
            sizes[d as usize] += 1;
        }
        sizes
    }

    /// The sub-ball of radius `r <= radius` (a prefix of the vertex order).
    pub fn truncate(&self, r: u32) -> CosetBall {
        assert!(r <= self.radius, "cannot grow a ball by truncation");
        let n = self.depth.partition_point(|&d| d <= r);
        let mut states = StateSet::default();
        states.extend(self.states.iter().take(n).cloned());
        CosetBall {
            group: self.group,
            generators: self.generators.clone(),
            inverse_of: self.inverse_of.clone(),
            radius: r,
            states,
            depth: self.depth[..n].to_vec(),
            edges: self
                .edges
                .iter()
                .filter(|e| (e.src as usize) < n && (e.dst as usize) < n)
                .copied()
                .collect(),
        }
    }

    /// Structural equality: same group, generators, radius, vertex order,
    /// depths and edges.
    pub fn same_structure(&self, other: &CosetBall) -> bool {
        self.group == other.group
            && self.radius == other.radius
            && self.generators == other.generators
            && self.depth == other.depth
            && self.states.len() == other.states.len()
            && self.states.iter().zip(other.states.iter()).all(|(a, b)| a == b)
            && self.edges == other.edges
    }
}

impl std::fmt::Debug for CosetBall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CosetBall")
            .field("group", &self.group)
            .field("radius", &self.radius)
            .field("vertices", &self.states.len())
            .field("edges", &self.edges.len())
            .finish()
    }
}
