use std::collections::{HashMap, VecDeque};

use crate::cosetgraph::CosetBall;
use crate::error::{Error, Result};

/// A finite ball in a connected, locally finite graph: vertices numbered in
/// nondecreasing depth from a base vertex, simple undirected adjacency.
///
/// The frontier is the set of vertices at depth `radius`. Because vertices
/// are depth sorted, the sub-ball of smaller radius is an index prefix and
/// vertex ids agree across truncations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallGraph {
    radius: u32,
    depth: Vec<u32>,
    adj: Vec<Vec<u32>>,
}

impl BallGraph {
    /// Build from depths and undirected edges. Self-loops and repeated edges
    /// are dropped. Depths must be BFS distances: sorted, base at 0, every
    /// edge changes depth by at most one and every vertex of positive depth
    /// has a neighbour one step closer.
    pub fn from_parts(
        radius: u32,
        depth: Vec<u32>,
        edges: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<BallGraph> {
        let n = depth.len();
        if n == 0 || depth[0] != 0 {
            return Err(Error::Parse("ball needs a base vertex at depth 0".into()));
        }
        if depth.windows(2).any(|w| w[0] > w[1]) || depth[n - 1] > radius {
            return Err(Error::Parse("depths must be sorted and at most the radius".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            if a as usize >= n || b as usize >= n {
                return Err(Error::Parse(format!("edge ({a}, {b}) out of range")));
            }
            if a == b {
                continue;
            }
            if depth[a as usize].abs_diff(depth[b as usize]) > 1 {
                return Err(Error::Parse(format!("edge ({a}, {b}) skips a shell")));
            }
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for (v, nb) in adj.iter_mut().enumerate() {
            nb.sort_unstable();
            nb.dedup();
            if depth[v] > 0 && !nb.iter().any(|&u| depth[u as usize] + 1 == depth[v]) {
                return Err(Error::Parse(format!("vertex {v} has no parent")));
            }
        }
        Ok(BallGraph { radius, depth, adj })
    }

    /// Underlying simple graph of a coset ball (loops and labels dropped).
    pub fn from_coset_ball(ball: &CosetBall) -> BallGraph {
        BallGraph::from_parts(
            ball.radius(),
            ball.depths().to_vec(),
            ball.edges().iter().map(|e| (e.src, e.dst)),
        )
        .expect("explored balls are BFS ordered")
    }

    /// The path `-R..=R` around 0, numbered `0, 1, -1, 2, -2, ...`.
    pub fn line(radius: u32) -> BallGraph {
        let id = |k: i64| -> u32 {
            if k == 0 {
                0
            } else if k > 0 {
                (2 * k - 1) as u32
            } else {
                (-2 * k) as u32
            }
        };
        let r = radius as i64;
        let depth = (0..=2 * radius).map(|i| i.div_ceil(2)).collect();
        let edges = (-r..r).map(|k| (id(k), id(k + 1))).collect::<Vec<_>>();
        BallGraph::from_parts(radius, depth, edges).unwrap()
    }

    pub fn len(&self) -> usize {
        self.depth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depth.is_empty()
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn depth(&self, v: usize) -> u32 {
        self.depth[v]
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn is_frontier(&self, v: usize) -> bool {
        self.depth[v] == self.radius
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// The sub-ball of radius `r`.
    pub fn truncate(&self, r: u32) -> BallGraph {
        assert!(r <= self.radius, "cannot grow a ball by truncation");
        let n = self.depth.partition_point(|&d| d <= r);
        BallGraph {
            radius: r,
            depth: self.depth[..n].to_vec(),
            adj: self.adj[..n]
                .iter()
                .map(|nb| nb.iter().copied().filter(|&u| (u as usize) < n).collect())
                .collect(),
        }
    }

    /// Shortest path from `from` to the nearest vertex of `targets`, moving
    /// only through `allowed` vertices (the endpoints must be allowed).
    pub(crate) fn shortest_path(
        &self,
        from: &[usize],
        targets: &[bool],
        allowed: &dyn Fn(usize) -> bool,
    ) -> Option<Vec<usize>> {
        let mut prev = vec![u32::MAX; self.len()];
        let mut queue = VecDeque::new();
        for &s in from {
            prev[s] = s as u32;
            queue.push_back(s);
        }
        while let Some(v) = queue.pop_front() {
            if targets[v] {
                let mut path = vec![v];
                let mut cur = v;
                while prev[cur] as usize != cur {
                    cur = prev[cur] as usize;
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &u in &self.adj[v] {
                let u = u as usize;
                if prev[u] == u32::MAX && allowed(u) {
                    prev[u] = v as u32;
                    queue.push_back(u);
                }
            }
        }
        None
    }
}

/// Ball in the Cayley graph of the free group on `a, b` (the 4-regular
/// tree), with vertices labelled by reduced words so that left
/// multiplication can be applied as a covering translation.
#[derive(Debug, Clone)]
pub struct FreeGroupBall {
    words: Vec<Vec<i8>>,
    index: HashMap<Vec<i8>, usize>,
    graph: BallGraph,
}

/// Letters are `1 = a`, `-1 = a⁻¹`, `2 = b`, `-2 = b⁻¹`.
pub fn free_reduce(word: impl IntoIterator<Item = i8>) -> Vec<i8> {
    let mut out: Vec<i8> = Vec::new();
    for l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl FreeGroupBall {
    pub fn new(radius: u32) -> FreeGroupBall {
        let mut words = vec![Vec::new()];
        let mut start = 0;
        for _ in 0..radius {
            let end = words.len();
            for i in start..end {
                for l in [1i8, -1, 2, -2] {
                    if words[i].last() != Some(&-l) {
                        let mut w = words[i].clone();
                        w.push(l);
                        words.push(w);
                    }
                }
            }
            start = end;
        }
        let index: HashMap<Vec<i8>, usize> =
            words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut edges = Vec::new();
        for (i, w) in words.iter().enumerate() {
            if let Some((_, parent)) = w.split_last() {
                edges.push((index[parent] as u32, i as u32));
            }
        }
        let depth = words.iter().map(|w| w.len() as u32).collect();
        let graph = BallGraph::from_parts(radius, depth, edges).unwrap();
        FreeGroupBall {
            words,
            index,
            graph,
        }
    }

    pub fn graph(&self) -> &BallGraph {
        &self.graph
    }

    pub fn word(&self, v: usize) -> &[i8] {
        &self.words[v]
    }

    pub fn index_of(&self, word: &[i8]) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Left multiplication by `w`, or `None` if the image leaves the ball.
    pub fn translate(&self, v: usize, w: &[i8]) -> Option<usize> {
        let image = free_reduce(w.iter().chain(self.words[v].iter()).copied());
        self.index_of(&image)
    }
}
