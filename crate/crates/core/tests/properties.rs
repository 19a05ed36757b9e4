use std::f64::consts::{PI, TAU};

use fuchsian::freegroup::{
    build_schottky, enumerate_reduced_words, gamma2, orbit, random_disks, GroupSpec, Letter,
    ReducedWord,
};
use fuchsian::hyperbolic::{distance, poisson_kernel, BoundaryPoint, DiskFrame, Isometry, Point};
use fuchsian::inequality::{angular_term, evaluate_defect, sin_product_slack, THEOREM_SLACK};
use fuchsian::quadrature::integrate;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn point() -> impl Strategy<Value = Point> {
    (-5.0f64..5.0, -3.0f64..3.0).prop_map(|(x, ly)| Point::new(x, ly.exp()).unwrap())
}

fn isometry() -> impl Strategy<Value = Isometry> {
    (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0)
        .prop_filter("positive determinant", |(a, b, c, d)| a * d - b * c > 0.1)
        .prop_map(|(a, b, c, d)| Isometry::new(a, b, c, d).unwrap())
}

fn schottky(seed: u64, k: usize) -> GroupSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    build_schottky(&random_disks(k, 1.0, &mut rng)).unwrap()
}

fn word(k: usize, max_len: usize) -> impl Strategy<Value = ReducedWord> {
    proptest::collection::vec(0..2 * k, 0..=max_len)
        .prop_map(|ix| ReducedWord::reduce(ix.into_iter().map(Letter::from_index)))
}

proptest! {
    #[test]
    fn distance_is_isometry_invariant(g in isometry(), p in point(), q in point()) {
        let before = distance(p, q);
        let after = distance(g.apply(p), g.apply(q));
        prop_assert!((before - after).abs() < 1e-10 * before.max(1.0), "{before} vs {after}");
    }

    #[test]
    fn group_law(g in isometry(), h in isometry(), p in point()) {
        let lhs = (g * h).apply(p);
        let rhs = g.apply(h.apply(p));
        prop_assert!(distance(lhs, rhs) < 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn normalization_is_idempotent(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, d in -3.0f64..3.0) {
        prop_assume!(a * d - b * c > 0.1);
        let g = Isometry::new(a, b, c, d).unwrap();
        let [a2, b2, c2, d2] = g.entries();
        prop_assert_eq!(Isometry::new(a2, b2, c2, d2).unwrap(), g);
        prop_assert!((g.determinant() - 1.0).abs() < 1e-12);
        let neg = Isometry::new(-a, -b, -c, -d).unwrap();
        prop_assert!(neg.operator_distance(&g) < 1e-12);
    }

    #[test]
    fn poisson_kernel_has_unit_mass(z in point(), zp in point()) {
        prop_assume!(distance(z, zp) < 6.0);
        // the round measure at z is dθ/2π in the frame centred at z
        let mass = integrate(|t| poisson_kernel(z, zp, BoundaryPoint::new(t)), 0.0, TAU, 1e-11);
        prop_assert!((mass.value / TAU - 1.0).abs() < 1e-8, "{}", mass.value / TAU);
    }

    #[test]
    fn poisson_kernel_cocycle(z in point(), zp in point(), zpp in point(), xi in -20.0f64..20.0) {
        prop_assume!(distance(z, zp) < 4.0 && distance(zp, zpp) < 4.0);
        let at = |c: Point| DiskFrame::centered(c).boundary_angle(xi);
        let direct = poisson_kernel(z, zpp, at(z));
        let chained = poisson_kernel(z, zp, at(z)) * poisson_kernel(zp, zpp, at(zp));
        prop_assert!((direct - chained).abs() < 1e-8 * direct.max(1.0), "{direct} vs {chained}");
    }

    #[test]
    fn words_multiply_like_matrices(seed in 0u64..1000, u in word(3, 5), v in word(3, 5)) {
        let spec = schottky(seed, 3);
        let joined = spec.word_matrix(&u.concat(&v)).unwrap();
        let product = spec.word_matrix(&u).unwrap() * spec.word_matrix(&v).unwrap();
        // every partial product is bounded by the product of the letter norms
        let norm = |m: &Isometry| m.entries().iter().fold(1.0f64, |acc, e| acc.max(e.abs()));
        let scale: f64 = u
            .letters()
            .iter()
            .chain(v.letters())
            .map(|&l| 2.0 * norm(&spec.letter_matrix(l)))
            .product();
        let gap = joined.operator_distance(&product);
        prop_assert!(gap < 1e-9 * scale.max(1.0), "{u} | {v}: {gap:e} at scale {scale:e}");
    }

    #[test]
    fn defect_is_nonnegative(seed in 0u64..100_000, r in 0.0f64..4.0, t in 0.0f64..TAU) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(2..=4);
        let spec = build_schottky(&random_disks(k, 1.2, &mut rng)).unwrap();
        let z = Point::from_polar(Point::I, r, t);
        let report = evaluate_defect(spec.generators(), z);
        prop_assert!(report.defect >= -THEOREM_SLACK);
        prop_assert!(!report.satisfies_main || report.satisfies_accs);
        for (&d, &y) in report.displacements.iter().zip(&report.angular_terms) {
            prop_assert!(y > 0.0 && y <= PI / 2.0);
            prop_assert_eq!(y == PI / 2.0, d == 0.0);
            prop_assert_eq!(y, angular_term(d));
        }
    }
}

#[test]
fn sin_product_lemma_on_ten_thousand_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(10_000);
    for _ in 0..10_000 {
        let x = rng.gen_range(f64::EPSILON..PI);
        let y = rng.gen_range(f64::EPSILON..PI);
        assert!(sin_product_slack(x, y) >= -1e-14, "{x} {y}");
    }
}

#[test]
fn certified_orbits_are_free() {
    let mut specs = vec![gamma2()];
    specs.extend((0..4).map(|s| schottky(s, 2 + s as usize % 2)));
    for spec in &specs {
        let mut pts = orbit(spec, Point::new(0.1, 1.3).unwrap(), 6).unwrap();
        // d(p, q) <= 1e-6 forces |p - q| <= ~1e-6 * max y, so a sweep on x finds every close pair
        let y_max = pts.iter().map(|(_, p)| p.y()).fold(0.0, f64::max);
        let window = 4e-6 * y_max;
        pts.sort_by(|a, b| a.1.x().total_cmp(&b.1.x()));
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if pts[j].1.x() - pts[i].1.x() > window {
                    break;
                }
                assert!(
                    distance(pts[i].1, pts[j].1) > 1e-6,
                    "{} and {} collide",
                    pts[i].0,
                    pts[j].0
                );
            }
        }
    }
}

#[test]
fn no_short_word_is_trivial() {
    for spec in [gamma2(), schottky(7, 2), schottky(8, 3)] {
        let max_len = if spec.k() == 2 { 8 } else { 6 };
        for w in enumerate_reduced_words(&spec, max_len).unwrap().iter().skip(1) {
            let m = spec.word_matrix(w).unwrap();
            assert!(m.operator_distance(&Isometry::IDENTITY) > 1e-6, "{w}");
        }
    }
}
