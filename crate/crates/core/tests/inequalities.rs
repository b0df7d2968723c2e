mod common;

use std::f64::consts::PI;

use hypelastic::analysis::{est_dxu1_check, inequality_suite, length_ratio_holds, willmore_direct, willmore_energy, WillmoreCheck};
use hypelastic::geometry::{
    elastic_energy, random_closed_disk_curve, random_open_profile, CurveGeometry, Model, SampledCurve, Topology, Vec2,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn profile(n: usize, f: impl Fn(f64) -> Vec2) -> SampledCurve {
    let nodes = (0..n).map(|i| f(i as f64 / (n - 1) as f64)).collect();
    SampledCurve::new(Model::HalfPlane, Topology::Open, nodes, (0.0, 1.0)).unwrap()
}

/// `u(x) = (x, 1 + a sin πx)` with its derivatives.
fn wave(a: f64, x: f64) -> (Vec2, Vec2, Vec2) {
    let s = (PI * x).sin();
    let c = (PI * x).cos();
    (Vec2::new(x, 1.0 + a * s), Vec2::new(1.0, a * PI * c), Vec2::new(0.0, -a * PI * PI * s))
}

#[test]
fn est_dxu1_sides_match_quadrature_of_the_closed_form() {
    let a = 0.3;
    let u = profile(1025, |x| wave(a, x).0);
    let (lhs, rhs) = est_dxu1_check(&u).unwrap();
    let lhs_oracle = common::simpson(|x| {
        let (p, d, _) = wave(a, x);
        d.x * d.x / (d.norm() * p.y)
    }, 0.0, 1.0, 2000);
    // half-plane geodesic curvature: u² times the Euclidean curvature plus the horizontal direction cosine
    let energy_oracle = common::simpson(|x| {
        let (p, d, dd) = wave(a, x);
        let speed = d.norm();
        let k = p.y * d.cross(dd) / speed.powi(3) + d.x / speed;
        k * k * speed / p.y
    }, 0.0, 1.0, 2000);
    assert!((lhs - lhs_oracle).abs() < 1e-6, "{lhs} vs {lhs_oracle}");
    // trapezoid weights on the sampled side: O(h²) ≈ 1e−6 at h = 1/1024
    assert!((rhs - energy_oracle - 4.0).abs() < 5e-6, "{rhs} vs {}", energy_oracle + 4.0);
    assert!(lhs <= rhs);
}

#[test]
fn cylinder_willmore_energy_is_a_quarter_of_its_area() {
    // the horizontal profile at height 1 sweeps a unit cylinder of length 1 with H = 1/2
    let u = profile(257, |x| Vec2::new(x, 1.0));
    let expected = PI / 2.0;
    assert!((willmore_energy(&u).unwrap() - expected).abs() < 1e-10);
    assert!((willmore_direct(&u).unwrap() - expected).abs() < 1e-10);
}

#[test]
fn seeded_suite_has_no_violations() {
    let s = inequality_suite(11, 100, 10).unwrap();
    assert_eq!(s.violations(), 0, "{s:?}");
    assert!(s.willmore.worst < 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn est_dxu1_holds(seed in any::<u64>()) {
        let u = random_open_profile(&mut ChaCha8Rng::seed_from_u64(seed), 256);
        let (lhs, rhs) = est_dxu1_check(&u).unwrap();
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn hyperbolic_length_dominates_twice_euclidean(seed in any::<u64>()) {
        let c = random_closed_disk_curve(&mut ChaCha8Rng::seed_from_u64(seed), 128);
        let (lh, le, ok) = length_ratio_holds(&c).unwrap();
        prop_assert!(ok && lh >= 2.0 * le);
    }

    #[test]
    fn fenchel_bound_on_closed_curves(seed in any::<u64>()) {
        let c = random_closed_disk_curve(&mut ChaCha8Rng::seed_from_u64(seed), 256);
        let geo = CurveGeometry::new(&c).unwrap();
        prop_assert!(geo.hyperbolic_length() >= 4.0 * PI * PI / elastic_energy(&c).unwrap());
    }

    #[test]
    fn willmore_routes_agree(seed in any::<u64>()) {
        let u = random_open_profile(&mut ChaCha8Rng::seed_from_u64(seed), 512);
        let w = WillmoreCheck::new(&u).unwrap();
        prop_assert!(w.rel_error < 1e-3);
        prop_assert!(w.gauss_integral <= 4.0 * PI + 1e-6);
    }
}
