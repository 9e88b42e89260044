use serde::Serialize;

use super::almost::member_a;
use super::components::{amplify, components_minus, end_traces_in, saturate, AmplifyReport, CompactSet};
use super::graph::BallGraph;
use crate::cosetgraph::{CosetBall, CosetState, ExploreOptions};
use crate::dyadic::{Dyadic, StdInterval};
use crate::elements::{CellMap, CellPair, GroupClass};
use crate::error::{Error, Result};

pub const REPORT_FORMAT_VERSION: u32 = 1;

/// Endpoints of all ball edges between `A` and its complement.
pub fn cut_vertices(ball: &CosetBall) -> CompactSet {
    CompactSet::new(ball.edges().iter().flat_map(|e| {
        let (s, t) = (e.src as usize, e.dst as usize);
        let cut = member_a(ball.state(s)) != member_a(ball.state(t));
        cut.then_some([s, t]).into_iter().flatten()
    }))
}

/// The `A`-side endpoints of the cut: removing them already separates `A`
/// from its complement.
pub fn inner_boundary(ball: &CosetBall) -> CompactSet {
    CompactSet::new(cut_vertices(ball).vertices().filter(|&v| member_a(ball.state(v))))
}

/// The element agreeing with the state on `[0,1/2)` and fixing `[1/2,1)`,
/// when the state maps `[0,1/2)` onto itself. Such elements normalize
/// `G_[0,1/2]`, and the state is the image of the base vertex under the
/// covering translation they induce.
pub fn normalizer_element(s: &CosetState) -> Option<CellMap> {
    let mut images: Vec<&StdInterval> = s.patches().iter().map(|p| &p.range).collect();
    images.sort();
    let mut cursor = Dyadic::zero();
    for c in images {
        if c.left() != cursor {
            return None;
        }
        cursor = c.right();
    }
    if cursor != StdInterval::left_half().right() {
        return None;
    }
    let mut pairs: Vec<CellPair> = s.patches().to_vec();
    pairs.push(CellPair::identity(StdInterval::right_half()));
    CellMap::from_pairs(pairs).ok()
}

/// Covering translations of the ball by the elements read off its
/// non-identity normalizer states, in vertex order (so by depth).
pub fn translation_candidates(ball: &CosetBall, max_depth: u32) -> Vec<(usize, CellMap)> {
    (1..ball.len())
        .take_while(|&i| ball.depth(i) <= max_depth)
        .filter_map(|i| normalizer_element(ball.state(i)).map(|n| (i, n)))
        .collect()
}

/// Image of `K` under the covering translation by `n`, if it stays among the
/// first `limit` vertices of the ball.
pub fn translate_set(ball: &CosetBall, k: &CompactSet, n: &CellMap) -> Option<CompactSet> {
    translate_set_within(ball, k, n, ball.len())
}

fn translate_set_within(ball: &CosetBall, k: &CompactSet, n: &CellMap, limit: usize) -> Option<CompactSet> {
    let mut out = Vec::with_capacity(k.len());
    for v in k.vertices() {
        let t = ball.state(v).translate(n).ok()?;
        let j = ball.index_of(&t)?;
        if j >= limit {
            return None;
        }
        out.push(j);
    }
    Some(CompactSet::new(out))
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Translations tried per greedy round.
    pub max_translations: usize,
    pub rounds: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_translations: 24,
            rounds: 3,
        }
    }
}

/// A compact set built by the greedy search.
#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    /// How the set was assembled: seed name, then `n·seed` terms.
    pub recipe: Vec<String>,
    #[serde(skip)]
    pub set: CompactSet,
    pub size: usize,
    pub max_depth: u32,
    pub frontier_touching: usize,
    pub closed_bounded: usize,
    /// Frontier-touching components still distinct and frontier-touching at
    /// the persistence radius.
    pub persistent: usize,
}

impl Candidate {
    fn score(&self) -> (usize, usize, std::cmp::Reverse<usize>) {
        (
            self.persistent,
            self.frontier_touching,
            std::cmp::Reverse(self.size),
        )
    }
}

/// Evaluate a saturated set at radius `g.radius()` with persistence checked
/// against the larger ball `next`.
pub fn evaluate_candidate(g: &BallGraph, next: &BallGraph, set: CompactSet, recipe: Vec<String>) -> Candidate {
    let rep = components_minus(g, &set);
    let traces = end_traces_in(&[g, next], &set);
    Candidate {
        recipe,
        size: set.len(),
        max_depth: set.max_depth(g).unwrap_or(0),
        frontier_touching: rep.frontier_touching(),
        closed_bounded: rep.closed_bounded(),
        persistent: traces.iter().filter(|t| t.persistence() == 2).count(),
        set,
    }
}

/// Greedy search on the coset ball truncated to radius `g.radius()`: start
/// from the saturations of a few small seeds, then repeatedly add the
/// covering translate `n·S` of the cut seed `S` that most improves the
/// persistent component count. Returns every accepted set, best last.
pub fn greedy_search(
    ball: &CosetBall,
    g: &BallGraph,
    next: &BallGraph,
    extra: Option<&Candidate>,
    opts: SearchOptions,
) -> Vec<Candidate> {
    let seed = inner_boundary(ball);
    let limit = g.len();
    let seeds: Vec<(&str, CompactSet)> = vec![
        ("A-boundary", seed.clone()),
        ("cut", cut_vertices(ball)),
        ("base", CompactSet::new([0])),
    ];
    let mut best: Option<(Candidate, CompactSet)> = None;
    let consider = |best: &mut Option<(Candidate, CompactSet)>, c: Candidate, raw: CompactSet| {
        if best.as_ref().is_none_or(|(b, _)| c.score() > b.score()) {
            *best = Some((c, raw));
        }
    };
    for (name, s) in &seeds {
        if s.vertices().any(|v| v >= limit) {
            continue;
        }
        if let Ok(k) = saturate(g, s) {
            consider(&mut best, evaluate_candidate(g, next, k, vec![name.to_string()]), s.clone());
        }
    }
    if let Some(c) = extra {
        if c.set.vertices().all(|v| v < limit) {
            if let Ok(k) = saturate(g, &c.set) {
                consider(&mut best, evaluate_candidate(g, next, k, c.recipe.clone()), c.set.clone());
            }
        }
    }
    let Some((mut current, mut raw)) = best else {
        return Vec::new();
    };
    let mut history = vec![current.clone()];
    let translations = translation_candidates(ball, g.radius().saturating_sub(2));
    for _ in 0..opts.rounds {
        let mut improved: Option<(Candidate, CompactSet)> = None;
        for (_, n) in translations.iter().take(opts.max_translations) {
            let Some(ts) = translate_set_within(ball, &seed, n, limit) else {
                continue;
            };
            if ts.vertices().all(|v| raw.contains(v)) {
                continue;
            }
            let union = raw.union(&ts);
            let Ok(k) = saturate(g, &union) else { continue };
            let mut recipe = current.recipe.clone();
            recipe.push(format!("({n})·A-boundary"));
            let c = evaluate_candidate(g, next, k, recipe);
            let beats = |x: &Candidate| c.score() > x.score();
            if beats(&current) && improved.as_ref().is_none_or(|(b, _)| beats(b)) {
                improved = Some((c, union));
            }
        }
        match improved {
            Some((c, u)) => {
                history.push(c.clone());
                current = c;
                raw = u;
            }
            None => break,
        }
    }
    history
}

#[derive(Debug, Clone, Serialize)]
pub struct RadiusEntry {
    pub radius: u32,
    pub vertices: usize,
    pub persistence_radius: u32,
    pub best: Option<Candidate>,
    /// The persistent component count of the best set.
    pub candidate_bound: usize,
    pub statement: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmplificationEntry {
    pub radius: u32,
    pub translation: String,
    pub translation_depth: u32,
    pub result: AmplifyReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct EndsReport {
    pub format_version: u32,
    pub group: GroupClass,
    pub schedule: Vec<u32>,
    pub explored_radius: u32,
    pub explored_vertices: usize,
    pub budget: usize,
    pub entries: Vec<RadiusEntry>,
    pub best_bound: usize,
    pub amplification: Option<AmplificationEntry>,
    pub notes: Vec<String>,
}

impl EndsReport {
    /// Whether some scheduled radius shows at least `n` components that
    /// persist to its persistence radius.
    pub fn persists_at_least(&self, n: usize) -> bool {
        self.entries.iter().any(|e| e.candidate_bound >= n)
    }

    /// Whether the candidate bounds never decrease along the schedule.
    pub fn is_nondecreasing(&self) -> bool {
        self.entries
            .windows(2)
            .all(|w| w[0].candidate_bound <= w[1].candidate_bound)
    }
}

const NOTES: [&str; 3] = [
    "Frontier-touching components stand in for unbounded ones; every count is a candidate lower bound at the stated radius, never a proof of unboundedness.",
    "A component counts as persistent when it is still a distinct frontier-touching component at the persistence radius.",
    "The infinite number of ends is not computed. It follows from two facts: the elements supported in [0,1/2) normalize G_[0,1/2] and act as covering transformations with infinite, not virtually cyclic, image; and a graph with two ends admits no such group of covering transformations.",
];

/// Ends report for the coset graph of `(group, G_[0,1/2])` over an
/// increasing radius schedule. The ball is explored one shell beyond the
/// last radius so that every entry has a persistence radius.
pub fn ends_report(
    group: GroupClass,
    schedule: &[u32],
    explore: ExploreOptions,
    search: SearchOptions,
) -> Result<EndsReport> {
    let top = *schedule
        .last()
        .ok_or_else(|| Error::Parse("empty radius schedule".into()))?;
    let ball = CosetBall::explore(group, top + 1, explore)?;
    ends_report_on(&ball, schedule, explore.budget, search)
}

/// As [`ends_report`] on an already explored ball whose radius exceeds the
/// last scheduled radius.
pub fn ends_report_on(
    ball: &CosetBall,
    schedule: &[u32],
    budget: usize,
    search: SearchOptions,
) -> Result<EndsReport> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parse("radius schedule must be nonempty and increasing".into()));
    }
    let top = *schedule.last().unwrap();
    if ball.radius() <= top {
        return Err(Error::Parse(format!(
            "ball radius {} does not exceed the schedule maximum {top}",
            ball.radius()
        )));
    }
    let full = BallGraph::from_coset_ball(ball);
    let mut entries: Vec<RadiusEntry> = Vec::new();
    let mut previous: Option<Candidate> = None;
    let mut strong: Vec<(u32, Candidate)> = Vec::new();
    for (i, &r) in schedule.iter().enumerate() {
        let r2 = schedule.get(i + 1).copied().unwrap_or(r + 1);
        let g = full.truncate(r);
        let next = full.truncate(r2);
        let history = greedy_search(ball, &g, &next, previous.as_ref(), search);
        strong.extend(history.iter().filter(|c| c.persistent >= 3).map(|c| (r, c.clone())));
        let best = history.last().cloned();
        let bound = best.as_ref().map_or(0, |c| c.persistent);
        let statement = match &best {
            Some(_) if bound > 0 => format!(
                "candidate lower bound on relative ends >= {bound} at radius {r} (persisting to radius {r2})"
            ),
            _ => format!("no admissible compact set at radius {r}"),
        };
        if let Some(c) = &best {
            previous = Some(c.clone());
        }
        entries.push(RadiusEntry {
            radius: r,
            vertices: g.len(),
            persistence_radius: r2,
            best,
            candidate_bound: bound,
            statement,
        });
    }
    let best_bound = entries.iter().map(|e| e.candidate_bound).max().unwrap_or(0);
    // smaller sets leave more room for a translate inside the ball
    strong.sort_by_key(|(r, c)| (c.max_depth, c.size, *r));
    let amplification = strong
        .iter()
        .find_map(|(r, c)| search_amplification(ball, &full, *r, &c.set));
    Ok(EndsReport {
        format_version: REPORT_FORMAT_VERSION,
        group: ball.group(),
        schedule: schedule.to_vec(),
        explored_radius: ball.radius(),
        explored_vertices: ball.len(),
        budget,
        entries,
        best_bound,
        amplification,
        notes: NOTES.iter().map(|s| s.to_string()).collect(),
    })
}

/// Look for a covering translation `γ` with `γK ∩ K = ∅` whose amplification
/// hypotheses verify, first at radius `r`, then in the full ball.
pub fn search_amplification(
    ball: &CosetBall,
    full: &BallGraph,
    r: u32,
    k: &CompactSet,
) -> Option<AmplificationEntry> {
    let mut radii = vec![r];
    if full.radius() > r {
        radii.push(full.radius());
    }
    for radius in radii {
        let g = full.truncate(radius);
        for (i, n) in translation_candidates(ball, radius.saturating_sub(2)) {
            let Some(gk) = translate_set_within(ball, k, &n, g.len()) else {
                continue;
            };
            if let Ok(result) = amplify(&g, k, &gk) {
                if result.holds() {
                    return Some(AmplificationEntry {
                        radius,
                        translation: n.to_string(),
                        translation_depth: ball.depth(i),
                        result,
                    });
                }
            }
        }
    }
    None
}

/// Ends report for a generic ball (testbeds) with explicit candidate sets.
/// Each candidate is saturated at every scheduled radius where it fits.
pub fn ends_report_generic(
    g: &BallGraph,
    schedule: &[u32],
    candidates: &[CompactSet],
) -> Result<Vec<RadiusEntry>> {
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parse("radius schedule must be nonempty and increasing".into()));
    }
    let top = *schedule.last().unwrap();
    if g.radius() <= top {
        return Err(Error::Parse("ball must exceed the last scheduled radius".into()));
    }
    let mut out = Vec::new();
    for (i, &r) in schedule.iter().enumerate() {
        let r2 = schedule.get(i + 1).copied().unwrap_or(r + 1);
        let gr = g.truncate(r);
        let next = g.truncate(r2);
        let mut best: Option<Candidate> = None;
        for (j, c) in candidates.iter().enumerate() {
            if c.vertices().any(|v| v >= gr.len()) {
                continue;
            }
            if let Ok(k) = saturate(&gr, c) {
                let cand = evaluate_candidate(&gr, &next, k, vec![format!("candidate {j}")]);
                if best.as_ref().is_none_or(|b| cand.score() > b.score()) {
                    best = Some(cand);
                }
            }
        }
        let bound = best.as_ref().map_or(0, |c| c.persistent);
        out.push(RadiusEntry {
            radius: r,
            vertices: gr.len(),
            persistence_radius: r2,
            statement: format!("candidate lower bound {bound} at radius {r} (persisting to radius {r2})"),
            best,
            candidate_bound: bound,
        });
    }
    Ok(out)
}
