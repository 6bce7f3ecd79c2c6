use std::f64::consts::PI;

use proptest::prelude::*;
use staircase_gaps::distribution::Distribution;
use staircase_gaps::enumerate::{covering_radius, key_multiset, orbit_enumerate_ordered};
use staircase_gaps::geometry::{edge_h, edge_v, normalizing_matrix, polygon_generators, veech_generators, Mat2x2};
use staircase_gaps::section::{lambda_vectors, omega1_slope, Cell, Section, SectionPoint};

fn omega1_point(n: usize, u: f64, w: f64) -> SectionPoint {
    // u, w in (0, 1]
    let c = omega1_slope(n);
    let x = u;
    let y = 1.0 - c * x * w;
    SectionPoint::omega1(x, y)
}

proptest! {
    #[test]
    fn square_and_aspect_ratio(n in 3usize..=200, frac in 0.0f64..1.0) {
        let c = (PI / n as f64).cos();
        let i = 1 + (frac * (n.div_ceil(2) - 1) as f64) as i64;
        let v = |j| edge_v(n, j).unwrap();
        let h = |j| edge_h(n, j).unwrap();
        prop_assert!((v(i - 1) + v(i) - h(i)).abs() < 1e-12);
        prop_assert!(((h(i - 1) + h(i)) / v(i - 1) - (2.0 + 2.0 * c)).abs() < 1e-12);
    }

    #[test]
    fn extended_symmetry(n in 3usize..=200, frac in 0.0f64..1.0) {
        let ni = n as i64;
        let i = -2 + (frac * (ni + 5) as f64) as i64;
        prop_assert!((edge_h(n, ni - i).unwrap() - edge_h(n, i - 1).unwrap()).abs() < 1e-12);
        prop_assert!((edge_v(n, ni - i).unwrap() - edge_v(n, i - 2).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn conjugated_generators(n in 3usize..=200) {
        let m = normalizing_matrix(n).unwrap();
        let mi = m.inverse().unwrap();
        let (s, r) = polygon_generators(n).unwrap();
        let g = veech_generators(n).unwrap();
        prop_assert!((m * s * mi).max_abs_diff(&g.s_prime) < 1e-12);
        prop_assert!((m * r * mi).max_abs_diff(&g.r_prime) < 1e-12);
        prop_assert!(g.s2.max_abs_diff(&Mat2x2::new(1.0, 0.0, 1.0, 1.0)) < 1e-12);
        prop_assert!(g.s2.inverse().unwrap().max_abs_diff(&Mat2x2::horocycle(1.0)) < 1e-12);
        prop_assert!((g.r_prime.trace() - 2.0 * (PI / n as f64).cos()).abs() < 1e-12);
    }

    #[test]
    fn winner_slopes_decrease(n in 3usize..=200) {
        let l = lambda_vectors(n).unwrap();
        for w in l[1..].windows(2) {
            prop_assert!(w[0].slope() - w[1].slope() > 1e-12);
        }
        for w in l.windows(2) {
            prop_assert!((1.0 - w[0].x) / w[0].y > (1.0 - w[1].x) / w[1].y);
        }
        prop_assert!(l.iter().all(|v| v.x / v.y < omega1_slope(n)));
    }

    #[test]
    fn exactly_one_region(n in 3usize..=30, u in 1e-6f64..=1.0, w in 1e-6f64..1.0) {
        let s = Section::new(n).unwrap();
        let p = omega1_point(n, u, w);
        let hits = s.regions.iter().filter(|r| r.accepts(p.x, p.y)).count();
        prop_assert_eq!(hits, 1);
        prop_assert!(s.return_time(&p).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn cdf_monotone(n in 3usize..=12, a in 0.5f64..30.0, d in 0.0f64..5.0) {
        let dist = Distribution::new(n).unwrap();
        prop_assert!(dist.cdf(a) <= dist.cdf(a + d));
        prop_assert!(dist.pdf(a) >= 0.0);
        prop_assert_eq!(dist.sublevel_area(Cell::Omega2, a), dist.sublevel_area(Cell::Region(1), a));
    }

    #[test]
    fn pdf_is_cdf_rate(n in 3usize..=10, t in 1.001f64..15.0) {
        let dist = Distribution::new(n).unwrap();
        prop_assume!(dist.event_times(1e-12).iter().all(|e| (e - t).abs() > 1e-4));
        let h = 1e-5;
        let fd = (dist.cdf(t + h) - dist.cdf(t - h)) / (2.0 * h);
        prop_assert!((dist.pdf(t) - fd).abs() < 1e-5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn enumeration_ignores_generator_order(n in 3usize..=9, perm in Just([0usize, 1, 2, 3]).prop_shuffle()) {
        let k = 10.0;
        let radius = covering_radius(n, k).unwrap();
        let a = orbit_enumerate_ordered(n, k, usize::MAX, radius, [0, 1, 2, 3]).unwrap();
        let b = orbit_enumerate_ordered(n, k, usize::MAX, radius, [perm[0], perm[1], perm[2], perm[3]]).unwrap();
        prop_assert_eq!(key_multiset(&a.strip()), key_multiset(&b.strip()));
    }
}

#[test]
fn enumeration_is_depth_stable() {
    for n in 3..=12 {
        for k in [16.0, 64.0] {
            let radius = covering_radius(n, k).unwrap();
            let full = orbit_enumerate_ordered(n, k, usize::MAX, radius, [0, 1, 2, 3]).unwrap();
            assert!(full.stable, "n={n} k={k}");
            let d = full.stabilized_depth;
            let at = |depth| {
                key_multiset(&orbit_enumerate_ordered(n, k, depth, radius, [0, 1, 2, 3]).unwrap().strip())
            };
            assert_eq!(at(d), at(d + 2), "n={n} k={k}");
        }
    }
}
