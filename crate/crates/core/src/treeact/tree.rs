use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};

use super::word::{Factor, Letter, ModWord};
use crate::ends::BallGraph;
use crate::error::{Error, Result};

/// A vertex `w·<a>` or `w·<b>` of the Bass–Serre tree. `word` is the
/// shortest coset representative: it never ends in a letter of `kind`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeVertex {
    kind: Factor,
    word: ModWord,
}

impl TreeVertex {
    /// The coset `g·<kind>`.
    pub fn coset(g: &ModWord, kind: Factor) -> TreeVertex {
        let word = match g.last() {
            Some(l) if l.factor() == kind => g.pop(),
            _ => g.clone(),
        };
        TreeVertex { kind, word }
    }

    /// The base vertex `A = <a>`.
    pub fn base_a() -> TreeVertex {
        TreeVertex::coset(&ModWord::identity(), Factor::A)
    }

    pub fn base_b() -> TreeVertex {
        TreeVertex::coset(&ModWord::identity(), Factor::B)
    }

    pub fn kind(&self) -> Factor {
        self.kind
    }

    pub fn word(&self) -> &ModWord {
        &self.word
    }

    pub fn syllables(&self) -> usize {
        self.word.syllables()
    }

    /// `g·v`, with no ball to leave.
    pub fn translate(&self, g: &ModWord) -> TreeVertex {
        TreeVertex::coset(&g.mul(&self.word), self.kind)
    }

    /// `A` has two neighbours `w·a^i·B`, `B` has three `w·b^j·A`.
    pub fn neighbors(&self) -> Vec<TreeVertex> {
        let (other, powers): (Factor, &[Option<Letter>]) = match self.kind {
            Factor::A => (Factor::B, &[None, Some(Letter::A)]),
            Factor::B => (Factor::A, &[None, Some(Letter::B), Some(Letter::B2)]),
        };
        powers
            .iter()
            .map(|p| {
                let g = match p {
                    Some(l) => self.word.mul(&ModWord::letter(*l)),
                    None => self.word.clone(),
                };
                TreeVertex::coset(&g, other)
            })
            .collect()
    }

    /// The neighbour one step closer to `A` (`None` for `A` itself).
    pub fn parent(&self) -> Option<TreeVertex> {
        match self.word.last() {
            Some(l) => Some(TreeVertex {
                kind: l.factor(),
                word: self.word.pop(),
            }),
            None if self.kind == Factor::B => Some(TreeVertex::base_a()),
            None => None,
        }
    }

    /// Path from `A` to `self`, both ends included.
    fn spine(&self) -> Vec<TreeVertex> {
        let mut out = vec![self.clone()];
        while let Some(p) = out.last().unwrap().parent() {
            out.push(p);
        }
        out.reverse();
        out
    }

    pub fn depth(&self) -> usize {
        self.spine().len() - 1
    }

    /// Tree distance, through the common ancestor towards `A`.
    pub fn distance(&self, other: &TreeVertex) -> usize {
        let (p, q) = (self.spine(), other.spine());
        let common = p.iter().zip(&q).take_while(|(x, y)| x == y).count();
        p.len() + q.len() - 2 * common
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.word.is_identity() {
            write!(f, "{}", self.word)?;
        }
        f.write_str(match self.kind {
            Factor::A => "A",
            Factor::B => "B",
        })
    }
}

impl Serialize for TreeVertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The vertices whose representatives have at most `radius` syllables.
/// Vertices are stored in breadth-first order from `A`.
#[derive(Debug, Clone)]
pub struct TreeBall {
    radius: usize,
    vertices: Vec<TreeVertex>,
    depth: Vec<u32>,
    index: HashMap<TreeVertex, u32>,
    adj: Vec<Vec<u32>>,
}

impl TreeBall {
    pub fn new(radius: usize) -> TreeBall {
        let root = TreeVertex::base_a();
        let mut vertices = vec![root.clone()];
        let mut depth = vec![0u32];
        let mut index = HashMap::from([(root, 0u32)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for nb in vertices[i].neighbors() {
                if nb.syllables() <= radius && !index.contains_key(&nb) {
                    index.insert(nb.clone(), vertices.len() as u32);
                    queue.push_back(vertices.len());
                    depth.push(depth[i] + 1);
                    vertices.push(nb);
                }
            }
        }
        let adj = vertices
            .iter()
            .map(|v| v.neighbors().iter().filter_map(|nb| index.get(nb).copied()).collect())
            .collect();
        TreeBall {
            radius,
            vertices,
            depth,
            index,
            adj,
        }
    }

    /// Syllable radius.
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &TreeVertex {
        &self.vertices[i]
    }

    pub fn vertices(&self) -> &[TreeVertex] {
        &self.vertices
    }

    pub fn index_of(&self, v: &TreeVertex) -> Option<usize> {
        self.index.get(v).map(|&i| i as usize)
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adj[i]
    }

    /// Graph distance from `A`.
    pub fn depth(&self, i: usize) -> u32 {
        self.depth[i]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Vertices with neighbours outside the ball.
    pub fn is_frontier(&self, i: usize) -> bool {
        self.vertices[i].syllables() == self.radius
    }

    /// `g·v`, or `OutOfBall` when the image is not in the ball.
    pub fn act(&self, g: &ModWord, v: usize) -> Result<usize> {
        let image = self.vertices[v].translate(g);
        self.index_of(&image)
            .ok_or_else(|| Error::OutOfBall(format!("{g} · {} = {image}", self.vertices[v])))
    }

    /// `Fix(g)` within the ball, as sorted indices.
    pub fn fixed_set(&self, g: &ModWord) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.vertices[i].translate(g) == self.vertices[i])
            .collect()
    }

    /// Whether `set` induces a connected subgraph (the empty set does not).
    pub fn is_connected(&self, set: &[usize]) -> bool {
        let Some(&start) = set.first() else {
            return false;
        };
        let mut inside = vec![false; self.len()];
        for &v in set {
            inside[v] = true;
        }
        let mut seen = vec![false; self.len()];
        seen[start] = true;
        let mut stack = vec![start];
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                let u = u as usize;
                if inside[u] && !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    stack.push(u);
                }
            }
        }
        reached == set.len()
    }

    /// The graph ball of radius `r` around `center`, for the ends tools.
    /// Every vertex closer than `r` must have its full neighbourhood here.
    pub fn ball_graph(&self, center: &TreeVertex, r: u32) -> Result<(BallGraph, Vec<usize>)> {
        let c = self
            .index_of(center)
            .ok_or_else(|| Error::OutOfBall(format!("center {center}")))?;
        let mut dist = vec![u32::MAX; self.len()];
        dist[c] = 0;
        let mut order = vec![c];
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            if dist[v] == r {
                continue;
            }
            if self.is_frontier(v) {
                return Err(Error::OutOfBall(format!(
                    "{} at distance {} < {r} lies on the syllable frontier",
                    self.vertices[v], dist[v]
                )));
            }
            for &u in &self.adj[v] {
                if dist[u as usize] == u32::MAX {
                    dist[u as usize] = dist[v] + 1;
                    order.push(u as usize);
                }
            }
        }
        let local: HashMap<usize, u32> = order.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let mut edges = Vec::new();
        for (i, &v) in order.iter().enumerate() {
            for &u in &self.adj[v] {
                if let Some(&j) = local.get(&(u as usize)) {
                    if (i as u32) < j {
                        edges.push((i as u32, j));
                    }
                }
            }
        }
        let depth = order.iter().map(|&v| dist[v]).collect();
        Ok((BallGraph::from_parts(r, depth, edges)?, order))
    }

    /// Graphviz rendering; `fixed` vertices are filled, consecutive `axis`
    /// vertices are joined by heavy edges.
    pub fn to_dot(&self, fixed: &[usize], axis: &[usize]) -> String {
        let mut out = format!("graph tree_r{} {{\n", self.radius);
        for (i, v) in self.vertices.iter().enumerate() {
            let fill = if fixed.contains(&i) {
                "#e76f51"
            } else if v.kind() == Factor::A {
                "#ffffff"
            } else {
                "#e9ecef"
            };
            out += &format!("  v{i} [label=\"{v}\", style=filled, fillcolor=\"{fill}\"];\n");
        }
        let on_axis = |i: usize, j: usize| {
            axis.windows(2)
                .any(|w| (w[0], w[1]) == (i, j) || (w[1], w[0]) == (i, j))
        };
        for i in 0..self.len() {
            for &j in &self.adj[i] {
                let j = j as usize;
                if i < j {
                    let style = if on_axis(i, j) { " [penwidth=3]" } else { "" };
                    out += &format!("  v{i} -- v{j}{style};\n");
                }
            }
        }
        out += "}\n";
        out
    }
}
