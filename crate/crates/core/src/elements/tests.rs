use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::dyadic::Relation;

fn d(s: &str) -> Dyadic {
    s.parse().unwrap()
}

fn gen(g: Generator) -> CellMap {
    standard_generator(g)
}

fn x0() -> CellMap {
    gen(Generator::X0)
}
fn x1() -> CellMap {
    gen(Generator::X1)
}
fn pi0() -> CellMap {
    gen(Generator::Pi0)
}
fn pi1() -> CellMap {
    gen(Generator::Pi1)
}

fn max_domain_level(g: &CellMap) -> u32 {
    g.pairs().iter().map(|p| p.domain.level()).max().unwrap()
}

/// Functional equality by evaluation on the level-(m+1) grid, where m bounds
/// the domain levels of both maps: each map is affine on every level-m cell,
/// so two points per cell determine it.
fn grid_equal(f: impl Fn(&Dyadic) -> Dyadic, g: impl Fn(&Dyadic) -> Dyadic, level: u32) -> bool {
    (0..1u64 << (level + 1)).all(|k| {
        let x = Dyadic::new(k, level + 1);
        f(&x) == g(&x)
    })
}

fn words(seed: u64, n: usize, max_len: usize) -> Vec<CellMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let letters = symmetrized(&Generator::ALL);
    (0..n).map(|_| random_word(&mut rng, &letters, max_len).1).collect()
}

#[test]
fn x0_cells_and_values() {
    let g = x0();
    let expect = CellMap::from_literal(&[((0, 1), (0, 2)), ((2, 2), (1, 2)), ((3, 2), (1, 1))]).unwrap();
    assert_eq!(g, expect);
    assert_eq!(g.pairs().len(), 3);
    assert_eq!(g.evaluate(&d("1/2")).unwrap(), d("1/4"));
    assert_eq!(g.evaluate(&d("7/8")).unwrap(), d("3/4"));
    assert_eq!(g.evaluate(&d("9/16")).unwrap(), d("5/16"));
    assert!(matches!(g.evaluate(&d("1")), Err(Error::OutOfDomain(_))));
    assert!(matches!(g.evaluate(&d("-1/4")), Err(Error::OutOfDomain(_))));
    assert_eq!(g.left_limit(&d("1")).unwrap(), d("1"));
    assert_eq!(g.class(), GroupClass::F);
}

#[test]
fn identity_evaluates_to_itself() {
    let id = CellMap::identity();
    for k in 0..16u64 {
        let x = Dyadic::new(k, 4);
        assert_eq!(id.evaluate(&x).unwrap(), x);
    }
    assert!(id.breakpoints().is_empty());
    assert!(id.support().is_empty());
    assert_eq!(id.invert(), id);
}

#[test]
fn compose_with_inverse_is_identity() {
    for g in [x0(), x1(), pi0(), pi1()] {
        assert!(g.compose(&g.invert()).is_identity());
        assert!(g.invert().compose(&g).is_identity());
    }
}

#[test]
fn x0_squared_is_quarter_slope_on_left_half() {
    let sq = x0().compose(&x0());
    let patches = sq.restrict(&StdInterval::left_half());
    assert_eq!(patches.len(), 1);
    assert_eq!(patches[0].slope_exp(), -2);
    assert_eq!(patches[0].offset(), Dyadic::zero());
    assert_eq!(patches[0].image, StdInterval::of(0, 3));
}

#[test]
fn restrict_x0_to_left_half() {
    let patches = x0().restrict(&StdInterval::left_half());
    assert_eq!(patches.len(), 1);
    assert_eq!(patches[0].slope_exp(), -1);
    assert_eq!(patches[0].offset(), Dyadic::zero());
    let id = CellMap::identity().restrict(&StdInterval::of(5, 3));
    assert_eq!(id.len(), 1);
    assert!(id[0].is_identity());
}

#[test]
fn pi1_is_an_involution() {
    let sq = pi1().compose(&pi1());
    // oracle: brute-force evaluation on the level-3 grid
    assert!(grid_equal(|x| pi1().evaluate(&pi1().evaluate(x).unwrap()).unwrap(), |x| x.clone(), 2));
    assert!(sq.is_identity());
}

#[test]
fn invert_x0_formula() {
    let inv = x0().invert();
    // 2t on [0,1/4), t + 1/4 on [1/4,1/2), (t + 1)/2 on [1/2,1)
    assert_eq!(
        inv.pairs()[0],
        CellPair::new(StdInterval::of(0, 2), StdInterval::of(0, 1))
    );
    assert_eq!(inv.pairs()[0].slope_exp(), 1);
    for k in 0..64u64 {
        let t = Dyadic::new(k, 6);
        let expect = if t < d("1/4") {
            t.mul_pow2(1)
        } else if t < d("1/2") {
            &t + &d("1/4")
        } else {
            (&t + &Dyadic::one()).mul_pow2(-1)
        };
        assert_eq!(inv.evaluate(&t).unwrap(), expect);
    }
    assert_eq!(inv.breakpoints(), vec![d("1/4"), d("1/2")]);
}

#[test]
fn invert_is_an_involution_on_random_words() {
    for g in words(11, 100, 12) {
        assert_eq!(g.invert().invert(), g);
    }
}

#[test]
fn reduce_identity_on_four_cells() {
    let pairs: Vec<CellPair> = StdInterval::all_at_level(2).map(CellPair::identity).collect();
    let g = CellMap::from_pairs(pairs).unwrap();
    assert!(g.is_identity());
    assert_eq!(g.pairs().len(), 1);
}

#[test]
fn reduce_is_idempotent_and_ignores_refinement() {
    let fine = CellMap::from_pairs(StdInterval::all_at_level(3).map(CellPair::identity).collect()).unwrap();
    for g in words(12, 500, 8) {
        let again = CellMap::from_pairs(g.pairs().to_vec()).unwrap();
        assert_eq!(again, g);
        // composing with a finely written identity changes nothing, checked
        // against grid evaluation
        let h = g.compose(&fine);
        assert_eq!(h, g);
    }
    let g = x0().compose(&x1());
    let level = max_domain_level(&g);
    let refined: Vec<CellPair> = g.pairs().iter().flat_map(|p| p.split()).collect();
    let h = CellMap::from_pairs(refined).unwrap();
    assert!(grid_equal(|x| g.evaluate(x).unwrap(), |x| h.evaluate(x).unwrap(), level + 1));
    assert_eq!(h, g);
}

#[test]
fn malformed_partitions_are_rejected() {
    let overlap = vec![
        CellPair::new(StdInterval::left_half(), StdInterval::left_half()),
        CellPair::new(StdInterval::of(1, 2), StdInterval::right_half()),
    ];
    assert!(matches!(CellMap::from_pairs(overlap), Err(Error::MalformedPartition(_))));
    let gap = vec![CellPair::new(StdInterval::left_half(), StdInterval::unit())];
    assert!(matches!(CellMap::from_pairs(gap), Err(Error::MalformedPartition(_))));
    let bad_range = vec![
        CellPair::new(StdInterval::left_half(), StdInterval::left_half()),
        CellPair::new(StdInterval::right_half(), StdInterval::left_half()),
    ];
    assert!(matches!(CellMap::from_pairs(bad_range), Err(Error::MalformedPartition(_))));
}

#[test]
fn breakpoints_of_x0() {
    assert_eq!(x0().breakpoints(), vec![d("1/2"), d("3/4")]);
    assert_eq!(pi1().breakpoints(), vec![d("1/2"), d("3/4")]);
}

#[test]
fn half_fixing() {
    assert!(x1().fixes_half());
    assert!(!x0().fixes_half());
    assert!(pi1().fixes_half());
    // x1 is the identity on every 2^-k grid point of [0,1/2)
    for k in 0..32u64 {
        let x = Dyadic::new(k, 6);
        assert_eq!(x1().evaluate(&x).unwrap(), x);
    }
    for cell in StdInterval::all_at_level(3) {
        assert!(CellMap::identity().is_identity_on(&cell));
    }
}

#[test]
fn smallness_examples() {
    assert_eq!(pi1().compose(&x1()).is_small(), Some(StdInterval::left_half()));
    let w = parse_word("x0^-1 pi1 x0 pi1").unwrap();
    assert_eq!(w.is_small(), Some(StdInterval::left_half()));
    // x0 has no identity cell at any level
    assert_eq!(x0().is_small(), None);
    for level in 0..8 {
        assert!(StdInterval::all_at_level(level).all(|c| !x0().is_identity_on(&c)));
    }
}

#[test]
fn support_examples() {
    assert_eq!(pi1().support(), vec![StdInterval::right_half()]);
    assert_eq!(x1().support(), vec![StdInterval::right_half()]);
    assert_eq!(x0().support(), vec![StdInterval::unit()]);
}

#[test]
fn orders() {
    assert_eq!(pi0().order_up_to(10), Some(3));
    assert_eq!(pi1().order_up_to(10), Some(2));
    assert_eq!(pi1().compose(&pi0()).order_up_to(10), Some(2));
    assert_eq!(x0().order_up_to(100), None);
    // slope of x0^n at 0 is 2^-n, never 1
    let mut acc = CellMap::identity();
    for n in 1..=20 {
        acc = acc.compose(&x0());
        assert_eq!(acc.pairs()[0].slope_exp(), -(n as i64));
    }
    assert_eq!(CellMap::identity().order_up_to(1), Some(1));
}

#[test]
fn generator_classes_and_tables() {
    assert_eq!(x0().class(), GroupClass::F);
    assert_eq!(x1().class(), GroupClass::F);
    assert_eq!(pi0().class(), GroupClass::T);
    assert_eq!(pi1().class(), GroupClass::V);
    assert_eq!(
        pi0(),
        CellMap::from_literal(&[((0, 1), (2, 2)), ((2, 2), (3, 2)), ((3, 2), (0, 1))]).unwrap()
    );
    assert_eq!(
        pi1(),
        CellMap::from_literal(&[((0, 1), (0, 1)), ((2, 2), (3, 2)), ((3, 2), (2, 2))]).unwrap()
    );
    assert_eq!(half_rotation().class(), GroupClass::T);
}

#[test]
fn text_form_roundtrips() {
    let s = x0().to_string();
    assert_eq!(s, "0/2^1 -> 0/2^2; 2/2^2 -> 1/2^2; 3/2^2 -> 1/2^1");
    assert_eq!(s.parse::<CellMap>().unwrap(), x0());
    assert!("0/2^1 -> 0/2^2".parse::<CellMap>().is_err());
    assert!("garbage".parse::<CellMap>().is_err());
}

#[test]
fn word_parsing() {
    assert_eq!(parse_word("x0 x0^-1").unwrap(), CellMap::identity());
    assert_eq!(parse_word("x0^2").unwrap(), x0().compose(&x0()));
    assert_eq!(parse_word("pi1*x1").unwrap(), pi1().compose(&x1()));
    assert!(parse_word("y7").is_err());
    assert!(parse_word("x0^a").is_err());
    assert_eq!(symmetrized(&Generator::ALL).len(), 7);
}

#[test]
fn squeeze_onto_quarter_offset() {
    let l = squeeze(&x0(), &d("1/4"), 1).unwrap();
    assert_eq!(
        l,
        CellMap::from_literal(&[
            ((0, 2), (0, 2)),
            ((1, 2), (2, 3)),
            ((4, 3), (3, 3)),
            ((5, 3), (2, 2)),
            ((3, 2), (3, 2)),
        ])
        .unwrap()
    );
    // conjugation law: l(1/4 + t/2) = 1/4 + x0(t)/2
    for k in 0..32u64 {
        let t = Dyadic::new(k, 5);
        let inner = &d("1/4") + &t.mul_pow2(-1);
        let outer = &d("1/4") + &x0().evaluate(&t).unwrap().mul_pow2(-1);
        assert_eq!(l.evaluate(&inner).unwrap(), outer);
    }
    assert!(squeeze(&x0(), &d("3/4"), 1).is_err());
}

#[test]
fn arc_generators() {
    for g in arc_subgroup_generators(Arc::U) {
        assert!(g.is_identity_on(&StdInterval::right_half()));
        assert_eq!(g.class(), GroupClass::F);
    }
    for g in arc_subgroup_generators(Arc::D) {
        assert!(g.is_identity_on(&StdInterval::left_half()));
        assert!(g.class() <= GroupClass::T);
    }
    for arc in Arc::ALL {
        for g in arc_subgroup_generators(arc) {
            assert!(g.is_small().is_some());
            assert!(g.is_circle_continuous());
            for c in arc.complement() {
                assert!(g.is_identity_on(&c), "{arc:?} generator moves {c:?}");
            }
        }
    }
    // L and U supports together miss [3/4,1)
    let [l, _] = arc_subgroup_generators(Arc::L);
    let [u, _] = arc_subgroup_generators(Arc::U);
    let w = l.compose(&u).small_witness_in(&StdInterval::of(3, 2)).unwrap();
    assert!(w.is_within(&StdInterval::of(3, 2)));
    // U and D generators have disjoint supports and commute
    let [d0, _] = arc_subgroup_generators(Arc::D);
    assert_eq!(u.compose(&d0), d0.compose(&u));
    assert!(u.compose(&d0).is_small().is_none());
}

#[test]
fn half_supported_generators_sit_in_their_half() {
    for group in [GroupClass::F, GroupClass::T, GroupClass::V] {
        for (_, h) in half_supported_generators(group, Side::Right) {
            assert!(h.fixes_half());
        }
        for (_, n) in half_supported_generators(group, Side::Left) {
            assert!(n.is_identity_on(&StdInterval::right_half()));
        }
    }
    assert_eq!(half_supported_generators(GroupClass::V, Side::Right).len(), 4);
}

#[test]
fn evaluation_is_an_action() {
    let ws = words(21, 200, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    use rand::Rng;
    for pair in ws.chunks(2) {
        let (g, h) = (&pair[0], &pair[1]);
        let gh = g.compose(h);
        for _ in 0..10 {
            let x = Dyadic::new(rng.gen_range(0..1u64 << 12), 12);
            assert_eq!(
                gh.evaluate(&x).unwrap(),
                g.evaluate(&h.evaluate(&x).unwrap()).unwrap()
            );
        }
    }
}

#[test]
fn class_is_monotone_under_products() {
    let f_letters = symmetrized(&Generator::ALL[..2]);
    let t_letters = symmetrized(&Generator::ALL[..3]);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let (_, a) = random_word(&mut rng, &f_letters, 8);
        let (_, b) = random_word(&mut rng, &f_letters, 8);
        assert_eq!(a.compose(&b).class(), GroupClass::F);
        let (_, a) = random_word(&mut rng, &t_letters, 8);
        let (_, b) = random_word(&mut rng, &t_letters, 8);
        let c = a.compose(&b);
        assert!(c.class() <= GroupClass::T);
        assert!(c.is_circle_continuous());
    }
}

#[test]
fn smallness_matches_brute_force() {
    for g in words(31, 500, 8) {
        let m = g.max_level();
        let brute = (0..=m).any(|l| StdInterval::all_at_level(l).any(|c| {
            // evaluate at both endpoints' interior grid: identity on c iff
            // identity on the level-(m+1) grid points inside c
            let depth = m + 1 - l;
            (0..1u64 << depth).all(|j| {
                let x = &c.left() + &Dyadic::new(j, m + 1);
                g.evaluate(&x).unwrap() == x
            })
        }));
        assert_eq!(g.is_small().is_some(), brute, "{g}");
    }
}

#[test]
fn disjoint_supports_commute() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let letters = symmetrized(&Generator::ALL);
    let cells = [
        (StdInterval::of(0, 2), StdInterval::of(1, 1)),
        (StdInterval::of(1, 1), StdInterval::of(0, 1)),
        (StdInterval::of(3, 3), StdInterval::of(3, 2)),
    ];
    let mut checked = 0;
    while checked < 200 {
        let (_, a) = random_word(&mut rng, &letters, 6);
        let (_, b) = random_word(&mut rng, &letters, 6);
        let (ca, cb) = &cells[checked % cells.len()];
        let g = squeeze(&a, &ca.left(), ca.level()).unwrap();
        let h = squeeze(&b, &cb.left(), cb.level()).unwrap();
        let disjoint = g
            .support()
            .iter()
            .all(|s| h.support().iter().all(|t| s.relate(t) == Relation::Disjoint));
        assert!(disjoint);
        let gh = g.compose(&h);
        let hg = h.compose(&g);
        let level = max_domain_level(&gh).max(max_domain_level(&hg));
        assert!(grid_equal(|x| gh.evaluate(x).unwrap(), |x| hg.evaluate(x).unwrap(), level));
        assert_eq!(gh, hg);
        checked += 1;
    }
}
