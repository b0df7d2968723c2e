use hypelastic::elastica::construct_lambda_figure_eight;
use hypelastic::flow::presets::{perturbed_diameter, vertical_clamp_data, vertically_clamped_drop};
use hypelastic::flow::{
    run, step, symmetry_monitor, BoundaryCondition, DtPolicy, FlowConfig, GradientKind, Symmetry, STABILITY_CONSTANT,
};
use hypelastic::geometry::{random_closed_disk_curve, reparam_constant_euclidean_speed, SampledCurve, SpeedWeight};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn closed_config(n: usize, steps: u64) -> FlowConfig {
    FlowConfig { n_nodes: n, t_end: 1e9, max_steps: Some(steps), frame_every: 50, ..Default::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn random_closed_runs_dissipate(seed in any::<u64>()) {
        let c = random_closed_disk_curve(&mut ChaCha8Rng::seed_from_u64(seed), 64);
        let r = run(&closed_config(64, 400), &c).unwrap();
        let e0 = r.initial_energy();
        prop_assert_eq!(r.stats.dissipation_violations, 0);
        prop_assert!(r.stats.max_step_increase <= 1e-10 * e0);
        for w in r.frames.windows(2) {
            prop_assert!(w[1].energy <= w[0].energy + 1e-10 * e0);
            prop_assert!(w[1].t > w[0].t);
        }
    }
}

#[test]
fn figure_eight_symmetries_survive_the_flow() {
    let f = construct_lambda_figure_eight(0.5, 1e-10, 128).unwrap();
    let config = FlowConfig { reparam_speed: SpeedWeight::Hyperbolic, ..closed_config(128, 3000) };
    let r = run(&config, &f.curve).unwrap();
    for fr in &r.frames {
        let s = fr.symmetry_residuals.unwrap();
        assert!(s.s1.unwrap() < 1e-8 && s.s2.unwrap() < 1e-8, "{s:?}");
        assert!(s.origin.unwrap() < 1e-10, "{s:?}");
    }
    assert!(r.last().energy < r.initial_energy());
}

#[test]
fn euclidean_reparametrization_keeps_the_symmetries() {
    let f = construct_lambda_figure_eight(0.2, 1e-10, 256).unwrap();
    let re: SampledCurve = reparam_constant_euclidean_speed(&f.curve, f.curve.domain).unwrap();
    for s in [Symmetry::S1, Symmetry::S2] {
        let before = symmetry_monitor(&f.curve, s).unwrap();
        let after = symmetry_monitor(&re, s).unwrap();
        assert!((after - before).abs() < 1e-10, "{s:?}: {before:e} → {after:e}");
    }
}

#[test]
fn geodesic_is_a_fixed_point_of_the_step() {
    let c = perturbed_diameter(0.6, 0.0, 64).unwrap();
    let d = hypelastic::flow::ClampedData::from_curve(&c).unwrap();
    let next = step(&c, 1e-6, BoundaryCondition::Clamped, Some(&d), GradientKind::DiscreteEnergy).unwrap();
    for (a, b) in c.nodes.iter().zip(&next.nodes) {
        assert!((*a - *b).norm() < 1e-15);
    }
}

#[test]
fn clamped_data_is_preserved_after_every_step() {
    let c = vertically_clamped_drop(1.0, 0.8, 64).unwrap();
    let config = FlowConfig {
        n_nodes: 64,
        t_end: 1e9,
        max_steps: Some(5000),
        bc: BoundaryCondition::Clamped,
        clamped_data: Some(vertical_clamp_data()),
        reparam_speed: SpeedWeight::Hyperbolic,
        frame_every: 500,
        ..Default::default()
    };
    let r = run(&config, &c).unwrap();
    assert!(r.stats.max_clamp_position_error <= 1e-12);
    assert!(r.stats.max_clamp_tangent_error <= 1e-8);
    assert!(r.stats.max_symmetry_residual < 1e-8);
    assert_eq!(r.stats.dissipation_violations, 0);
}

#[test]
fn energy_rate_matches_gradient_norm_for_small_steps() {
    let c = random_closed_disk_curve(&mut ChaCha8Rng::seed_from_u64(9), 48);
    let mut ev = hypelastic::flow::GradientEval::default();
    ev.evaluate_kind(&c, GradientKind::DiscreteEnergy, None).unwrap();
    // well inside the stability bound the explicit-Euler term dt·⟨G, HG⟩ is small
    let dt = STABILITY_CONSTANT * ev.min_spacing.powi(4) / 100.0;
    let config = FlowConfig {
        n_nodes: 48,
        dt_initial: dt,
        dt_policy: DtPolicy::Fixed,
        t_end: 1e9,
        max_steps: Some(200),
        reparam_every: 0,
        frame_every: 1,
        ..Default::default()
    };
    let r = run(&config, &c).unwrap();
    for w in r.frames.windows(2).skip(1) {
        let rate = (w[0].energy - w[1].energy) / (w[1].t - w[0].t);
        let rel = (rate / w[0].grad_norm_sq - 1.0).abs();
        assert!(rel < 0.05, "step {}: {rel}", w[1].step);
    }
}
