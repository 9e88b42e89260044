use rayon::prelude::*;
use serde::Serialize;

use super::tree::{TreeBall, TreeVertex};
use super::word::ModWord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Isometry {
    Elliptic {
        fixed: TreeVertex,
    },
    Hyperbolic {
        translation_length: usize,
        /// The axis vertices inside the ball, in order along the line.
        axis: Vec<TreeVertex>,
    },
    /// The ball is smaller than `required_radius`.
    Unresolved {
        required_radius: usize,
    },
}

impl Isometry {
    pub fn is_elliptic(&self) -> bool {
        matches!(self, Isometry::Elliptic { .. })
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, Isometry::Hyperbolic { .. })
    }
}

pub fn required_radius(w: &ModWord) -> usize {
    2 * w.syllables() + 2
}

/// Minimise the displacement `d(v, w·v)` over the ball. A fixed vertex
/// makes `w` elliptic (reported as `A` when `A` is fixed); otherwise the
/// vertices of least displacement are the axis.
pub fn classify_isometry(w: &ModWord, ball: &TreeBall) -> Isometry {
    let need = required_radius(w);
    if ball.radius() < need {
        return Isometry::Unresolved { required_radius: need };
    }
    let disp: Vec<usize> = ball
        .vertices()
        .iter()
        .map(|v| v.distance(&v.translate(w)))
        .collect();
    let least = *disp.iter().min().expect("ball contains A");
    let on_axis: Vec<usize> = (0..ball.len()).filter(|&i| disp[i] == least).collect();
    if least == 0 {
        return Isometry::Elliptic {
            fixed: ball.vertex(on_axis[0]).clone(),
        };
    }
    Isometry::Hyperbolic {
        translation_length: least,
        axis: order_path(ball, &on_axis)
            .unwrap_or(on_axis)
            .into_iter()
            .map(|i| ball.vertex(i).clone())
            .collect(),
    }
}

/// Order `set` as a simple path if it induces one.
pub(crate) fn order_path(ball: &TreeBall, set: &[usize]) -> Option<Vec<usize>> {
    let inside = |u: u32| set.binary_search(&(u as usize)).is_ok();
    let deg = |v: usize| ball.neighbors(v).iter().filter(|&&u| inside(u)).count();
    if set.iter().any(|&v| deg(v) > 2) {
        return None;
    }
    let start = *set.iter().find(|&&v| deg(v) <= 1)?;
    let mut path = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = ball
        .neighbors(cur)
        .iter()
        .find(|&&u| inside(u) && u as usize != prev)
    {
        prev = cur;
        cur = next as usize;
        path.push(cur);
    }
    (path.len() == set.len()).then_some(path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// `Fix(g)` is a subtree when non-empty.
    FixSubtree,
    /// Exactly one of "fixed point" and "axis translated by a positive
    /// length", and the axis is a line that `g` shifts.
    Dichotomy,
    /// Disjoint non-empty fixed sets force a hyperbolic product.
    DisjointFix,
    /// `g1` elliptic stabilising `Fix(g2)` forces a common fixed point.
    StabilizedFix,
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub g1: ModWord,
    pub g2: Option<ModWord>,
    pub detail: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteReport {
    pub radius: usize,
    pub max_syllables: usize,
    pub elements: usize,
    pub elliptic: usize,
    pub hyperbolic: usize,
    pub pairs: usize,
    /// Pairs with non-empty disjoint fixed sets.
    pub disjoint_instances: usize,
    /// Pairs of elliptics with `g1·Fix(g2) = Fix(g2)`.
    pub stabilized_instances: usize,
    /// Pairs skipped because `Fix(g2)` reaches the ball frontier.
    pub unbounded_skipped: usize,
    pub violations: Vec<Violation>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Profile {
    w: ModWord,
    fixed: Vec<usize>,
    class: Isometry,
    bounded: bool,
}

fn check_single(ball: &TreeBall, p: &Profile, out: &mut Vec<Violation>) {
    let mut bad = |rule, detail: String| {
        out.push(Violation {
            rule,
            g1: p.w.clone(),
            g2: None,
            detail,
        })
    };
    if !p.fixed.is_empty() && !ball.is_connected(&p.fixed) {
        bad(Rule::FixSubtree, format!("{} fixed vertices, disconnected", p.fixed.len()));
    }
    match &p.class {
        Isometry::Elliptic { .. } if p.fixed.is_empty() => {
            bad(Rule::Dichotomy, "elliptic without fixed vertex".into())
        }
        Isometry::Hyperbolic { .. } if !p.fixed.is_empty() => {
            bad(Rule::Dichotomy, "hyperbolic with a fixed vertex".into())
        }
        Isometry::Hyperbolic {
            translation_length,
            axis,
        } => {
            let idx: Vec<usize> = axis.iter().map(|v| ball.index_of(v).unwrap()).collect();
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            let path_ok = idx.windows(2).all(|e| ball.neighbors(e[0]).contains(&(e[1] as u32)));
            if order_path(ball, &sorted).is_none() || !path_ok {
                bad(Rule::Dichotomy, "least-displacement set is not a line".into());
            }
            if axis.len() <= 2 * translation_length {
                bad(Rule::Dichotomy, format!("axis of {} vertices is too short to check", axis.len()));
            }
            // interior axis vertices move along the axis by the translation length
            for (k, v) in axis.iter().enumerate() {
                let image = v.translate(&p.w);
                let along = [k.checked_sub(*translation_length), Some(k + translation_length)]
                    .into_iter()
                    .flatten()
                    .filter_map(|j| axis.get(j))
                    .any(|u| *u == image);
                let interior = k >= *translation_length && k + translation_length < axis.len();
                if interior && !along {
                    bad(Rule::Dichotomy, format!("{v} is not shifted along the axis"));
                }
            }
        }
        Isometry::Unresolved { required_radius } => {
            bad(Rule::Dichotomy, format!("unresolved, needs radius {required_radius}"))
        }
        Isometry::Elliptic { .. } => {}
    }
}

fn is_disjoint(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

#[derive(Default)]
struct PairTally {
    disjoint: usize,
    stabilized: usize,
    skipped: usize,
    violations: Vec<Violation>,
}

fn check_pair(ball: &TreeBall, p1: &Profile, p2: &Profile, t: &mut PairTally) {
    let mut bad = |rule, detail: String| {
        t.violations.push(Violation {
            rule,
            g1: p1.w.clone(),
            g2: Some(p2.w.clone()),
            detail,
        })
    };
    if !p1.fixed.is_empty() && !p2.fixed.is_empty() && is_disjoint(&p1.fixed, &p2.fixed) {
        t.disjoint += 1;
        let product = p1.w.mul(&p2.w);
        if !classify_isometry(&product, ball).is_hyperbolic() {
            bad(Rule::DisjointFix, format!("product {product} is not hyperbolic"));
        }
    }
    if p1.fixed.is_empty() || p2.fixed.is_empty() {
        return;
    }
    if !p2.bounded {
        t.skipped += 1;
        return;
    }
    let stabilizes = p2.fixed.iter().all(|&v| {
        ball.act(&p1.w, v)
            .is_ok_and(|u| p2.fixed.binary_search(&u).is_ok())
    });
    if stabilizes {
        t.stabilized += 1;
        if is_disjoint(&p1.fixed, &p2.fixed) {
            bad(Rule::StabilizedFix, "stabilises Fix(g2) without a common fixed vertex".into());
        }
    }
}

/// Exhaustive fixed-point rule checks over all elements with at most
/// `max_syllables` syllables and all ordered pairs of them.
pub fn fixed_point_suite(ball: &TreeBall, max_syllables: usize) -> Result<SuiteReport> {
    let need = 2 * (2 * max_syllables) + 2;
    if ball.radius() < need {
        return Err(Error::PreconditionUnverifiable(format!(
            "products of {max_syllables}-syllable elements need radius {need}, ball has {}",
            ball.radius()
        )));
    }
    let profiles: Vec<Profile> = ModWord::enumerate(max_syllables)
        .into_par_iter()
        .map(|w| {
            let fixed = ball.fixed_set(&w);
            let class = classify_isometry(&w, ball);
            let bounded = fixed.iter().all(|&v| !ball.is_frontier(v));
            Profile {
                w,
                fixed,
                class,
                bounded,
            }
        })
        .collect();
    let mut report = SuiteReport {
        radius: ball.radius(),
        max_syllables,
        elements: profiles.len(),
        pairs: profiles.len() * profiles.len(),
        ..SuiteReport::default()
    };
    for p in &profiles {
        match p.class {
            Isometry::Elliptic { .. } => report.elliptic += 1,
            Isometry::Hyperbolic { .. } => report.hyperbolic += 1,
            Isometry::Unresolved { .. } => {}
        }
        check_single(ball, p, &mut report.violations);
    }
    let tallies: Vec<PairTally> = profiles
        .par_iter()
        .map(|p1| {
            let mut t = PairTally::default();
            for p2 in &profiles {
                check_pair(ball, p1, p2, &mut t);
            }
            t
        })
        .collect();
    for t in tallies {
        report.disjoint_instances += t.disjoint;
        report.stabilized_instances += t.stabilized;
        report.unbounded_skipped += t.skipped;
        report.violations.extend(t.violations);
    }
    Ok(report)
}
