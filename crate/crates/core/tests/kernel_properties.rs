mod common;

use grover_qaoa::dist::{conditional_expectations, Binomial, Distribution, Normal, ReflectedGamma, TwoPoint};
use grover_qaoa::gmqaoa::{simulate, PhaseFunction};
use grover_qaoa::gmth::{
    expectation_at_threshold, optimize_threshold, saturation_cap, threshold_curve, threshold_report, GridSpec,
};
use grover_qaoa::grover::{
    amplification_ratio, grover_probability, grover_probability_poly, optimal_binary_angles, threshold_ratio,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn probability_is_bounded_and_monotone(r in 1u64..=50, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (p_lo, p_hi) = (grover_probability(lo, r), grover_probability(hi, r));
        prop_assert!((0.0..=1.0).contains(&p_lo) && (0.0..=1.0).contains(&p_hi));
        prop_assert!(p_lo <= p_hi + 1e-12, "ρ {lo} → {p_lo}, ρ {hi} → {p_hi}");
        prop_assert!(grover_probability(lo, r) <= grover_probability(lo, r + 1) + 1e-12);
    }

    #[test]
    fn amplification_never_exceeds_cap(r in 1u64..=50, rho in 1e-12f64..1.0) {
        let eta = amplification_ratio(rho, r).unwrap();
        let cap = ((2 * r + 1) * (2 * r + 1)) as f64;
        prop_assert!(eta <= cap + 1e-9, "η = {eta} > {cap}");
    }

    #[test]
    fn sine_and_polynomial_forms_agree(r in 1u64..=30, w in 0.0f64..1.0) {
        let rho = w * threshold_ratio::<f64>(r);
        prop_assert!((grover_probability(rho, r) - grover_probability_poly(rho, r).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn binary_angles_round_trip_through_simulator(r in 1u64..=20, rho in 0.001f64..0.999) {
        let d = TwoPoint::<f64>::new(rho).unwrap();
        let s = d.spectrum().unwrap();
        let angles = optimal_binary_angles(rho, r).unwrap();
        let st = simulate(s, &PhaseFunction::Threshold(-1.0), &angles).unwrap();
        prop_assert!((st.class_probability(0) - grover_probability(rho, r)).abs() < 1e-10);
    }

    #[test]
    fn threshold_expectation_is_probability_weighted_mix(seed in any::<u64>(), r in 1u64..=40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let law = common::random_empirical(&mut rng, 50);
        let s = law.spectrum().unwrap();
        for i in 0..s.len() - 1 {
            let t = s.value(i);
            let c = conditional_expectations(&law, t);
            let p = grover_probability(s.cdf_at(i), r);
            let mix = c.lower.unwrap() * p + c.upper.unwrap() * (1.0 - p);
            let e = expectation_at_threshold(&law, r, t);
            prop_assert!((e - mix).abs() <= 1e-12 * (1.0 + e.abs()), "t={t}: {e} vs {mix}");
        }
    }

    #[test]
    fn support_curves_are_unimodal(seed in any::<u64>(), r in 1u64..=200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let law = common::random_empirical(&mut rng, 60);
        let c = threshold_curve(&law, r, &GridSpec::Support).unwrap();
        prop_assert_eq!(c.unimodality_violations(1e-12), 0);
    }

    #[test]
    fn optimum_sits_below_saturation_cap(seed in any::<u64>(), r in 1u64..=100) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let law = common::random_empirical(&mut rng, 50);
        let best = optimize_threshold(&law, r).unwrap();
        let (tau, e_cap) = saturation_cap(&law, r).unwrap();
        prop_assert!(best.t <= tau);
        prop_assert!(best.e_r <= e_cap + 1e-12 * (1.0 + e_cap.abs()));
        // exhaustive check of the discrete search
        let s = law.spectrum().unwrap();
        let brute = s.values().iter().map(|t| expectation_at_threshold(&law, r, *t)).fold(f64::INFINITY, f64::min);
        prop_assert!(best.e_r <= brute + 1e-12 * (1.0 + brute.abs()));
    }

    #[test]
    fn continuous_optimum_beats_any_threshold(r in 1u64..=1000, w in 0.001f64..3.0, which in 0usize..2) {
        let laws: [Box<dyn Distribution<f64>>; 2] =
            [Box::new(Normal::standard()), Box::new(ReflectedGamma::new(2.0, 1.0).unwrap())];
        let d = &laws[which];
        let best = optimize_threshold(d.as_ref(), r).unwrap();
        let t = d.quantile((w * threshold_ratio::<f64>(r)).min(0.999)).unwrap();
        let other = threshold_report(d.as_ref(), r, t);
        prop_assert!(best.e_r <= other.e_r + 1e-10 * (1.0 + other.e_r.abs()));
        let (tau, e_cap) = saturation_cap(d.as_ref(), r).unwrap();
        prop_assert!(best.t <= tau);
        prop_assert!(best.e_r <= e_cap + 1e-12 * (1.0 + e_cap.abs()));
    }
}

#[test]
fn binomial_curves_are_unimodal_at_many_depths() {
    let b = Binomial::<f64>::new(200, 0.5).unwrap();
    for r in [1u64, 2, 3, 5, 10, 30, 100, 300, 1000, 10_000] {
        assert_eq!(threshold_curve(&b, r, &GridSpec::Support).unwrap().unimodality_violations(1e-12), 0, "r={r}");
    }
}
