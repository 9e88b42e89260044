//! Acceptance run: one PASS/FAIL line per criterion. Every expected value
//! is recomputed here by an oracle that does not go through the code path
//! under test.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thompson_core::cosetgraph::{CosetBall, CosetState, ExploreOptions};
use thompson_core::elements::{
    half_supported_generators, parse_word, random_word, standard_generator, symmetrized, CellMap, CellPair,
    Generator, GroupClass, Side,
};
use thompson_core::ends::{
    check_separation, ends_report, member_a, sageev_cut, saturate, symdiff_ball,
    symdiff_exact, symdiff_exact_in, translation_candidates, BallGraph, CompactSet, FreeGroupBall, SearchOptions,
};
use thompson_core::facert::{t_certificate, v_certificate, verify, EvidenceKind, FINITE_ORDER_BOUND};
use thompson_core::treeact::{fixed_point_suite, TreeBall, TreeVertex};
use thompson_core::{Dyadic, StdInterval};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rational(d: &Dyadic) -> BigRational {
    BigRational::new(d.mantissa().clone(), BigInt::one() << d.exponent() as usize)
}

fn dy(s: &str) -> Dyadic {
    s.parse().unwrap()
}

// AC1 ------------------------------------------------------------------

/// x0(t) = t/2 on [0,1/2), t - 1/4 on [1/2,3/4), 2t - 1 on [3/4,1).
fn x0_formula(t: &BigRational) -> BigRational {
    let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    if *t < q(1, 2) {
        t / q(2, 1)
    } else if *t < q(3, 4) {
        t - q(1, 4)
    } else {
        t * q(2, 1) - q(1, 1)
    }
}

fn ac1() -> Outcome {
    let x0 = standard_generator(Generator::X0);
    let mut points: Vec<Dyadic> = ["0", "1/4", "1/2", "9/16", "3/4", "7/8"].iter().map(|s| dy(s)).collect();
    for k in 1..=30 {
        points.push(&Dyadic::one() - &Dyadic::pow2(-k));
    }
    for t in &points {
        let got = rational(&x0.evaluate(t).map_err(|e| e.to_string())?);
        ensure!(got == x0_formula(&rational(t)), "x0({t}) = {got}");
    }
    // the value approaching 1 from the left
    let limit = x0.left_limit(&Dyadic::one()).map_err(|e| e.to_string())?;
    ensure!(limit == Dyadic::one(), "x0(1-) = {limit}");
    ensure!(x0.evaluate(&dy("1/2")).unwrap() == dy("1/4"), "x0(1/2) != 1/4");
    Ok(format!("x0 matches the formula at {} points and at 1-", points.len()))
}

// AC2 ------------------------------------------------------------------

/// Values at every dyadic of a fine enough grid: a functional fingerprint.
fn grid_values(g: &CellMap, level: u32) -> Vec<Dyadic> {
    (0..1u64 << level)
        .map(|k| g.evaluate(&Dyadic::new(k, level)).unwrap())
        .collect()
}

/// Split every pair of `g` `depth` times at random: same function, finer
/// presentation.
fn refine(rng: &mut ChaCha8Rng, g: &CellMap, depth: u32) -> Vec<CellPair> {
    let mut out = Vec::new();
    let mut work: Vec<(CellPair, u32)> = g.pairs().iter().map(|p| (p.clone(), 0)).collect();
    while let Some((p, d)) = work.pop() {
        if d < depth && rng.gen_bool(0.5) {
            for c in p.split() {
                work.push((c, d + 1));
            }
        } else {
            out.push(p);
        }
    }
    out
}

fn ac2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let letters = symmetrized(&Generator::ALL);
    for _ in 0..1000 {
        let (_, a) = random_word(&mut rng, &letters, 12);
        let (_, b) = random_word(&mut rng, &letters, 12);
        let (_, c) = random_word(&mut rng, &letters, 12);
        ensure!(a.compose(&b).compose(&c) == a.compose(&b.compose(&c)), "associativity fails");
        ensure!(a.compose(&a.invert()).is_identity(), "a a^-1 != 1");
        ensure!(a.invert().compose(&a).is_identity(), "a^-1 a != 1");
    }
    for i in 0..500 {
        let (w, a) = random_word(&mut rng, &letters, 12);
        // two presentations of one function: a refined partition, and a
        // word with a cancelling pair inserted
        let other = if i % 2 == 0 {
            CellMap::from_pairs(refine(&mut rng, &a, 3)).map_err(|e| e.to_string())?
        } else {
            let (_, u) = random_word(&mut rng, &letters, 6);
            let (_, v) = random_word(&mut rng, &letters, 6);
            u.compose(&v).compose(&v.invert()).compose(&u.invert()).compose(&a)
        };
        let level = a.max_level().max(other.max_level()) + 1;
        ensure!(grid_values(&a, level) == grid_values(&other, level), "oracle: {w} differs functionally");
        ensure!(a == other && a.to_string() == other.to_string(), "{w}: presentations differ");
    }
    Ok("1000 triples associative with inverses; 500 equal pairs reduce identically".into())
}

// AC3 ------------------------------------------------------------------

/// Whether `w` maps the standard interval `I` onto a standard interval by
/// one affine law, decided from values on a grid two levels below the
/// finest cell of `w`.
fn affine_onto_standard(w: &CellMap, i: &StdInterval, grid: u32) -> bool {
    let lo = rational(&i.left());
    let step = BigRational::new(BigInt::one(), BigInt::one() << grid as usize);
    let n = 1u64 << (grid - i.level());
    let mut xs = Vec::new();
    let mut x = lo.clone();
    for _ in 0..n {
        xs.push(x.clone());
        x += &step;
    }
    let to_dyadic = |r: &BigRational| -> Dyadic {
        let den = r.denom().clone();
        let e = den.bits() as u32 - 1;
        Dyadic::new(r.numer().clone(), e)
    };
    let ys: Vec<BigRational> = xs.iter().map(|x| rational(&w.evaluate(&to_dyadic(x)).unwrap())).collect();
    let slope = (&ys[1] - &ys[0]) / &step;
    let affine = xs
        .iter()
        .zip(&ys)
        .all(|(x, y)| *y == &ys[0] + &slope * (x - &lo));
    if !affine {
        return false;
    }
    // image [y0, y0 + slope·|I|) must be standard
    let len = &slope * rational(&i.length());
    let left_over_len = &ys[0] / &len;
    len.numer().is_one() && left_over_len.is_integer()
}

/// `|{I : level >= 1, w not affine onto a standard interval on I}|`, by
/// enumeration of every standard interval down to one level past the
/// finest cell. With `initial`, only the intervals `[0, 2^-m)`.
fn count_oracle(w: &CellMap, initial: bool) -> usize {
    let top = w.max_level() + 1;
    let grid = top + 2;
    let mut n = 0;
    for level in 1..=top {
        for k in 0..1u64 << level {
            if initial && k > 0 {
                break;
            }
            if !affine_onto_standard(w, &StdInterval::of(k, level), grid) {
                n += 1;
            }
        }
    }
    n
}

fn ac3() -> Outcome {
    let v6 = CosetBall::explore(GroupClass::V, 6, ExploreOptions::default()).map_err(|e| e.to_string())?;
    let v5 = v6.truncate(5);
    let f8 = CosetBall::explore(GroupClass::F, 8, ExploreOptions::default()).map_err(|e| e.to_string())?;
    let f7 = f8.truncate(7);
    let mut summary = Vec::new();
    for g in Generator::ALL {
        for inv in [false, true] {
            let v = if inv { standard_generator(g).invert() } else { standard_generator(g) };
            let name = format!("{}{}", g.name(), if inv { "^-1" } else { "" });
            let oracle = count_oracle(&v, false) + count_oracle(&v.invert(), false);
            let exact = symdiff_exact(&v);
            ensure!(oracle == exact, "{name}: oracle {oracle} vs exact {exact}");
            let big = symdiff_ball(&name, &v, &v6);
            let small = symdiff_ball(&name, &v, &v5);
            ensure!(
                big.total == small.total && big.stabilization_radius < 5,
                "{name}: no stabilization by radius 6 ({} vs {})",
                small.total,
                big.total
            );
            ensure!(big.total == exact, "{name}: ball {} vs exact {exact}", big.total);
            summary.push(format!("{name}={exact}"));
            if matches!(g, Generator::X0 | Generator::X1) {
                let oracle_f = count_oracle(&v, true) + count_oracle(&v.invert(), true);
                let exact_f = symdiff_exact_in(&v, GroupClass::F);
                let (bf, sf) = (symdiff_ball(&name, &v, &f8), symdiff_ball(&name, &v, &f7));
                ensure!(
                    oracle_f == exact_f && bf.total == exact_f && sf.total == exact_f,
                    "{name} in F: oracle {oracle_f}, exact {exact_f}, ball {}",
                    bf.total
                );
            }
        }
    }
    Ok(format!("V ledgers stable from radius 5 to 6 and exact: {}; F agrees for x0, x1", summary.join(" ")))
}

// AC4 ------------------------------------------------------------------

fn ac4() -> Outcome {
    let x0 = standard_generator(Generator::X0);
    let mut lines = Vec::new();
    for group in [GroupClass::F, GroupClass::T, GroupClass::V] {
        let r = 10;
        let ball = CosetBall::explore(group, r, ExploreOptions::default()).map_err(|e| e.to_string())?;
        let cut = sageev_cut(&ball, member_a);
        ensure!(cut.separates(), "{group}: {} crossing components", cut.crossing_components);
        ensure!(cut.inside >= 10 && cut.outside >= 10, "{group}: sides {} / {}", cut.inside, cut.outside);
        // flood fill of the ball without cut edges, as an oracle
        let cut_set: HashSet<(u32, u32)> = cut.cut_edges.iter().map(|&(s, _, t)| (s, t)).collect();
        let mut adj = vec![Vec::new(); ball.len()];
        for e in ball.edges() {
            if !cut_set.contains(&(e.src, e.dst)) {
                adj[e.src as usize].push(e.dst as usize);
            }
        }
        let mut seen = vec![false; ball.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            ensure!(member_a(ball.state(v)), "{group}: complement reached from the base vertex");
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        let mut powers = HashSet::new();
        for i in 1..=10 {
            let s = CosetState::of(&x0.pow(i), group).map_err(|e| e.to_string())?;
            let j = ball.index_of(&s).ok_or(format!("{group}: x0^{i} missing"))?;
            ensure!(member_a(ball.state(j)), "{group}: x0^{i} not in A");
            // the affine image of x0^i on [0,1/2) is [0, 2^-(i+1))
            ensure!(
                s.affine_image() == Some(&StdInterval::of(0, i as u32 + 1)),
                "{group}: x0^{i} image"
            );
            powers.insert(j);
        }
        ensure!(powers.len() == 10, "{group}: x0 powers not distinct");
        let mut outside = HashSet::new();
        for (j, n) in translation_candidates(&ball, r) {
            ensure!(n.is_identity_on(&StdInterval::right_half()), "{group}: normalizer not supported in [0,1/2)");
            ensure!(!member_a(ball.state(j)), "{group}: non-affine state in A");
            ensure!(n.pairs().len() > 2, "{group}: normalizer element is affine on [0,1/2)");
            outside.insert(j);
        }
        ensure!(outside.len() >= 10, "{group}: only {} non-affine normalizer states", outside.len());
        lines.push(format!(
            "{group} r{r}: {} in A / {} outside, {} normalizer states outside",
            cut.inside,
            cut.outside,
            outside.len()
        ));
    }
    Ok(lines.join("; "))
}

// AC5 ------------------------------------------------------------------

fn ac5() -> Outcome {
    let mut lines = Vec::new();
    for (group, schedule) in [(GroupClass::V, vec![4, 6, 8]), (GroupClass::F, vec![6, 8, 10])] {
        let rep = ends_report(group, &schedule, ExploreOptions::default(), SearchOptions::default())
            .map_err(|e| e.to_string())?;
        let best = rep
            .entries
            .iter()
            .find(|e| e.candidate_bound >= 3)
            .ok_or(format!("{group}: no K with 3 persistent components"))?;
        let amp = rep
            .amplification
            .as_ref()
            .ok_or(format!("{group}: no verified disjoint translate"))?;
        let r = &amp.result;
        ensure!(r.n >= 3 && r.holds() && r.amplified >= 2 * r.n - 2, "{group}: amplification {r:?}");
        ensure!(
            r.separation.components_preserved && r.separation.pairwise_distinct,
            "{group}: separation hypotheses"
        );
        lines.push(format!(
            "{group}: {} persistent at r{} -> r{}, amplified {} >= 2*{}-2 at r{}",
            best.candidate_bound, best.radius, best.persistence_radius, r.amplified, r.n, amp.radius
        ));
    }
    Ok(lines.join("; "))
}

// AC6 ------------------------------------------------------------------

/// Components of `g` minus `removed`, by union-find over the edges.
fn oracle_components(g: &BallGraph, removed: &HashSet<usize>) -> Vec<BTreeSet<usize>> {
    let n = g.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for v in 0..n {
        for &u in g.neighbors(v) {
            let u = u as usize;
            if !removed.contains(&v) && !removed.contains(&u) {
                let (a, b) = (find(&mut parent, v), find(&mut parent, u));
                parent[a] = b;
            }
        }
    }
    let mut by_root: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for v in (0..n).filter(|v| !removed.contains(v)) {
        let r = find(&mut parent, v);
        by_root.entry(r).or_default().insert(v);
    }
    by_root.into_values().collect()
}

fn oracle_connected(g: &BallGraph, set: &HashSet<usize>) -> bool {
    let complement: HashSet<usize> = (0..g.len()).filter(|v| !set.contains(v)).collect();
    oracle_components(g, &complement).len() == 1
}

fn check_saturation(g: &BallGraph, k: &CompactSet, seed: &[usize]) -> Result<(), String> {
    let ks: HashSet<usize> = k.vertices().collect();
    ensure!(seed.iter().all(|v| ks.contains(v)), "saturation lost a seed vertex");
    ensure!(oracle_connected(g, &ks), "saturation is not connected");
    for c in oracle_components(g, &ks) {
        ensure!(c.iter().any(|&v| g.is_frontier(v)), "bounded component of size {} remains", c.len());
    }
    Ok(())
}

fn separation_instance(g: &BallGraph, k1: &CompactSet, k2: &CompactSet) -> Result<(), String> {
    let s1: HashSet<usize> = k1.vertices().collect();
    let s2: HashSet<usize> = k2.vertices().collect();
    let both: HashSet<usize> = s1.union(&s2).copied().collect();
    let c1 = oracle_components(g, &s1);
    let c2 = oracle_components(g, &s2);
    let c12: HashSet<BTreeSet<usize>> = oracle_components(g, &both).into_iter().collect();
    let mut inherited: Vec<BTreeSet<usize>> = Vec::new();
    for (comps, other) in [(&c1, &s2), (&c2, &s1)] {
        let holding: Vec<&BTreeSet<usize>> = comps.iter().filter(|c| other.iter().any(|v| c.contains(v))).collect();
        ensure!(holding.len() == 1, "the other set meets {} components", holding.len());
        for c in comps.iter().filter(|c| !other.iter().any(|v| c.contains(v))) {
            ensure!(c12.contains(c), "a component is not inherited");
            inherited.push(c.clone());
        }
    }
    let distinct: HashSet<&BTreeSet<usize>> = inherited.iter().collect();
    ensure!(distinct.len() == inherited.len(), "inherited components coincide");
    ensure!(inherited.len() == c1.len() - 1 + c2.len() - 1, "count mismatch");
    let lib = check_separation(g, k1, k2).ok_or("library refused the instance")?;
    ensure!(
        lib.components_preserved && lib.pairwise_distinct && lib.inherited == inherited.len(),
        "library separation check disagrees: {lib:?}"
    );
    Ok(())
}

fn ac6() -> Outcome {
    let tree = TreeBall::new(10);
    let (tree_graph, _) = tree.ball_graph(&TreeVertex::base_b(), 8).map_err(|e| e.to_string())?;
    let free = FreeGroupBall::new(7);
    let v6 = BallGraph::from_coset_ball(&CosetBall::explore(GroupClass::V, 6, ExploreOptions::default()).unwrap());
    let t7 = BallGraph::from_coset_ball(&CosetBall::explore(GroupClass::T, 7, ExploreOptions::default()).unwrap());
    let graphs: [(&str, &BallGraph); 4] = [("tree", &tree_graph), ("free", free.graph()), ("V", &v6), ("T", &t7)];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut done = 0;
    for (name, g) in graphs {
        let r = g.radius();
        let near: Vec<usize> = (0..g.len()).filter(|&v| g.depth(v) <= 2).collect();
        let mid: Vec<usize> = (0..g.len()).filter(|&v| g.depth(v) >= 3 && g.depth(v) + 3 <= r).collect();
        let mut instances = 0;
        let mut attempts = 0;
        while instances < 25 {
            attempts += 1;
            ensure!(attempts < 10_000, "{name}: could not build disjoint pairs");
            let seed1: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| near[rng.gen_range(0..near.len())]).collect();
            let seed2: Vec<usize> = (0..rng.gen_range(1..=2)).map(|_| mid[rng.gen_range(0..mid.len())]).collect();
            let (Ok(k1), Ok(k2)) = (saturate(g, &CompactSet::new(seed1.clone())), saturate(g, &CompactSet::new(seed2.clone())))
            else {
                continue;
            };
            check_saturation(g, &k1, &seed1).map_err(|e| format!("{name}: {e}"))?;
            check_saturation(g, &k2, &seed2).map_err(|e| format!("{name}: {e}"))?;
            ensure!(saturate(g, &k1).map_err(|e| e.to_string())? == k1, "{name}: saturation not idempotent");
            if !k1.is_disjoint(&k2) {
                continue;
            }
            separation_instance(g, &k1, &k2).map_err(|e| format!("{name}: {e}"))?;
            instances += 1;
        }
        done += instances;
    }
    Ok(format!("{done} instances on tree, free-group, V and T balls"))
}

// AC7 ------------------------------------------------------------------

fn ac7() -> Outcome {
    let t = t_certificate().map_err(|e| e.to_string())?;
    verify(&t).map_err(|e| e.to_string())?;
    ensure!(t.generators.len() == 8, "T certificate has {} generators", t.generators.len());
    for (g, e) in t.generators.iter().zip(&t.generator_evidence) {
        let EvidenceKind::Small { witness } = &e.kind else {
            return Err(format!("{} lacks Small evidence", g.name));
        };
        ensure!(g.element.is_identity_on(witness), "{} witness", g.name);
    }
    let pairs: BTreeSet<(usize, usize)> = t.pair_evidence.iter().map(|p| (p.i, p.j)).collect();
    ensure!(pairs.len() == 36 && t.pair_evidence.len() == 36, "pair coverage {}", pairs.len());
    let mut fallback = 0;
    for p in &t.pair_evidence {
        let (a, b) = (&t.generators[p.i], &t.generators[p.j]);
        let product = a.element.compose(&b.element);
        match &p.evidence.kind {
            EvidenceKind::Small { witness } => {
                ensure!(product.is_identity_on(witness), "{}·{} witness", a.name, b.name)
            }
            EvidenceKind::CommutingDisjointPair { .. } => {
                ensure!(a.arc.unwrap().opposite() == b.arc.unwrap(), "fallback for non-opposite arcs");
                ensure!(a.element.compose(&b.element) == b.element.compose(&a.element), "no commutation");
                fallback += 1;
            }
            other => return Err(format!("unexpected evidence {other:?}")),
        }
    }

    let v = v_certificate().map_err(|e| e.to_string())?;
    verify(&v).map_err(|e| e.to_string())?;
    let pi1 = standard_generator(Generator::Pi1);
    let by_pair = |i: usize, j: usize| &v.pair_evidence.iter().find(|p| (p.i, p.j) == (i, j)).unwrap().evidence;
    ensure!(v.generators[0].element == pi1, "first V generator is not pi1");
    ensure!(v.generator_evidence[0].kind == EvidenceKind::FiniteOrder { order: 2 }, "pi1 evidence");
    ensure!(pi1.compose(&pi1).is_identity(), "oracle: pi1^2 != 1");
    let pi1pi0 = by_pair(0, 3);
    ensure!(pi1pi0.subject == parse_word("pi1 pi0").unwrap(), "pi1·pi0 subject");
    ensure!(pi1pi0.kind == EvidenceKind::FiniteOrder { order: 2 }, "pi1·pi0 evidence");
    ensure!(pi1pi0.subject.compose(&pi1pi0.subject).is_identity(), "oracle: (pi1 pi0)^2 != 1");
    let pi1x1 = by_pair(0, 2);
    ensure!(
        pi1x1.kind == EvidenceKind::Small { witness: StdInterval::left_half() }
            && pi1x1.subject == parse_word("pi1 x1").unwrap(),
        "pi1·x1 evidence"
    );
    let EvidenceKind::CommutatorChain { premises } = &by_pair(0, 1).kind else {
        return Err("pi1·x0 lacks the chain".into());
    };
    let c = parse_word("x0^-1 pi1 x0 pi1").unwrap();
    ensure!(premises.commutator() == c, "chain commutator");
    ensure!(premises.commutator_witness == StdInterval::left_half() && c.is_identity_on(&StdInterval::left_half()), "x0^-1 pi1 x0 pi1 witness");

    let mut tampered = v.clone();
    tampered.pair_evidence[2].evidence.kind = EvidenceKind::Small {
        witness: StdInterval::right_half(),
    };
    ensure!(verify(&tampered).is_err(), "tampered witness accepted");
    let mut tampered = t.clone();
    tampered.generator_evidence[3].kind = EvidenceKind::FiniteOrder { order: FINITE_ORDER_BOUND };
    ensure!(verify(&tampered).is_err(), "tampered T evidence accepted");
    Ok(format!("T: 8 small generators, 36 pair evidences ({fallback} commuting opposite-arc pairs); V: pi1, pi1·pi0 order 2, pi1·x1 and x0^-1·pi1·x0·pi1 small; tampering rejected"))
}

// AC8 ------------------------------------------------------------------

fn ac8() -> Outcome {
    let ball = TreeBall::new(18);
    let rep = fixed_point_suite(&ball, 4).map_err(|e| e.to_string())?;
    ensure!(rep.passed(), "{} violations, first {:?}", rep.violations.len(), rep.violations.first());
    ensure!(rep.disjoint_instances > 0 && rep.stabilized_instances > 0, "vacuous suite");
    Ok(format!(
        "{} elements ({} elliptic, {} hyperbolic), {} pairs, {} disjoint-fix and {} stabilised instances, 0 violations",
        rep.elements, rep.elliptic, rep.hyperbolic, rep.pairs, rep.disjoint_instances, rep.stabilized_instances
    ))
}

// AC9 ------------------------------------------------------------------

fn ac9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let groups = [GroupClass::F, GroupClass::T, GroupClass::V];
    for i in 0..500 {
        let group = groups[i % 3];
        let letters = symmetrized(Generator::generating_set(group));
        let (w, g) = random_word(&mut rng, &letters, 12);
        let hs: Vec<CellMap> = half_supported_generators(group, Side::Right)
            .into_iter()
            .flat_map(|(_, e)| [e.invert(), e])
            .collect();
        let mut h = CellMap::identity();
        for _ in 0..rng.gen_range(0..=8) {
            h = h.compose(&hs[rng.gen_range(0..hs.len())]);
        }
        // oracle: h fixes every point of [0,1/2) on a grid
        let level = h.max_level() + 1;
        ensure!(
            (0..1u64 << (level - 1)).all(|k| h.evaluate(&Dyadic::new(k, level)).unwrap() == Dyadic::new(k, level)),
            "h is not in the half stabilizer"
        );
        let a = CosetState::of(&g, group).map_err(|e| e.to_string())?;
        let b = CosetState::of(&g.compose(&h), group).map_err(|e| e.to_string())?;
        ensure!(a == b, "{group}: state of {w} changes under h");
    }
    let f = CosetBall::explore(GroupClass::F, 4, ExploreOptions::default()).map_err(|e| e.to_string())?;
    let v = CosetBall::explore(GroupClass::V, 4, ExploreOptions::default()).map_err(|e| e.to_string())?;
    let mut images = HashSet::new();
    for s in f.states() {
        let e = s.embed(GroupClass::V).map_err(|e| e.to_string())?;
        ensure!(v.index_of(&e).is_some(), "embedded F state outside the V ball");
        images.insert(e);
    }
    ensure!(images.len() == f.len(), "embedding not injective");
    Ok(format!("500 (g, h) pairs keep their state; {} F states embed injectively into V", f.len()))
}

// AC10 -----------------------------------------------------------------

fn ac10() -> Outcome {
    let mut lines = Vec::new();
    for (group, r) in [(GroupClass::V, 7), (GroupClass::F, 8)] {
        let one = CosetBall::explore(group, r, ExploreOptions { threads: Some(1), ..Default::default() })
            .map_err(|e| e.to_string())?;
        let four = CosetBall::explore(group, r, ExploreOptions { threads: Some(4), ..Default::default() })
            .map_err(|e| e.to_string())?;
        ensure!(one.same_structure(&four), "{group}: 1 and 4 workers disagree");
        let mut buf = Vec::new();
        one.write_to(&mut buf).map_err(|e| e.to_string())?;
        let back = CosetBall::parse_cache(std::str::from_utf8(&buf).unwrap()).map_err(|e| e.to_string())?;
        ensure!(back.same_structure(&one), "{group}: cache roundtrip lost data");
        let mut again = Vec::new();
        back.write_to(&mut again).map_err(|e| e.to_string())?;
        ensure!(again == buf, "{group}: re-serialization differs");
        lines.push(format!("{group} r{r}: {} states, {} bytes", one.len(), buf.len()));
    }
    Ok(lines.join("; "))
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome, u64); 10] = [
        ("AC1", "x0 table", ac1, 1),
        ("AC2", "group axioms", ac2, 10),
        ("AC3", "almost invariance", ac3, 120),
        ("AC4", "Sageev cut", ac4, 120),
        ("AC5", "ends lower bounds", ac5, 600),
        ("AC6", "saturation and component counts", ac6, 60),
        ("AC7", "FA certificates", ac7, 30),
        ("AC8", "tree testbed", ac8, 60),
        ("AC9", "coset state soundness", ac9, 60),
        ("AC10", "determinism", ac10, 120),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, title, run, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > Duration::from_secs(limit) => {
                Err(format!("{msg} (over the {limit} s limit)"))
            }
            other => other,
        };
        match outcome {
            Ok(msg) => println!("{id} PASS {title}: {msg} [{:.2} s]", elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("{id} FAIL {title}: {msg} [{:.2} s]", elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
