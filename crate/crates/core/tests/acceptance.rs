//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line
//! to stderr (bypassing output capture) and then asserts the verdict.

mod common;

use std::time::{Duration, Instant};

use grover_qaoa::baselines::crs_blom;
use grover_qaoa::bounds::{c_th, kappa, max_amplification_floor, score_cap};
use grover_qaoa::dist::{discretize, pareto_epsilon_for_exponent, Binomial, Distribution, Normal, ReflectedPareto};
use grover_qaoa::fit::{log_log_slope, power_law_fit};
use grover_qaoa::gmqaoa::{
    expectation_from_state, expectation_series, optimize_angles, simulate, AngleSearch, PhaseFunction,
    PhasedSpectrum, SeriesObjective, SimulatorObjective,
};
use grover_qaoa::gmth::{
    expectation_at_threshold, optimize_over_layers, optimize_threshold, threshold_curve, GridSpec,
};
use grover_qaoa::grover::{
    grover_probability, grover_probability_poly, optimal_binary_angles, threshold_ratio, AngleSchedule,
};
use grover_qaoa::maxcut::{
    brute_force_spectrum, knn_spectrum, min_rounds_for_ratio, BoundKind, CostFrame, GraphInstance,
};
use grover_qaoa::optim::NelderMead;
use grover_qaoa::special::norm_cdf;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{random_empirical, random_spectrum, verdict};

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed < limit
}

fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<u64> {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).round() as usize;
    let mut rs: Vec<u64> = (0..=n)
        .map(|i| (lo * 10f64.powf(i as f64 / per_decade as f64)).round() as u64)
        .collect();
    rs.dedup();
    rs
}

#[test]
fn criterion_01_kappa() {
    let t0 = Instant::now();
    let (x1, k) = kappa::<f64>();
    let dt = t0.elapsed();
    let pass = (k - 1.4482).abs() <= 1e-3 && within(dt, Duration::from_millis(1));
    verdict(1, pass, &format!("x1 = {x1:.16}, kappa = {k:.16} (target 1.4482 ± 1e-3), {dt:?}"));
    assert!(pass);
}

#[test]
fn criterion_02_cth_table() {
    let t0 = Instant::now();
    let (_, c1) = c_th::<f64>(1);
    let (_, k) = kappa::<f64>();
    let (_, c50) = c_th::<f64>(50);
    let table: Vec<f64> = (1..=50).map(|r| c_th::<f64>(r).1).collect();
    let dt = t0.elapsed();
    let increasing = table.windows(2).all(|w| w[1] > w[0]);
    let pass = (c1 - 2.0).abs() < 1e-9 && (c50 / 50.0 - k).abs() < 0.05 * k && increasing && within(dt, Duration::from_secs(1));
    verdict(2, pass, &format!("C(1) = {c1:.12}, C(50)/50 = {:.6} vs kappa {k:.6}, {dt:?}", c50 / 50.0));
    assert!(pass);
}

#[test]
fn criterion_03_grover_kernel() {
    let t0 = Instant::now();
    let p = grover_probability(0.25f64, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let r = rng.random_range(1..=30u64);
        let rho = rng.random::<f64>() * threshold_ratio::<f64>(r);
        let a = grover_probability(rho, r);
        let b = grover_probability_poly(rho, r).unwrap();
        worst = worst.max((a - b).abs());
    }
    let dt = t0.elapsed();
    let pass = (p - 1.0).abs() < 1e-12 && worst < 1e-10 && within(dt, Duration::from_secs(1));
    verdict(3, pass, &format!("P(0.25, 1) = {p}, max |sine − poly| = {worst:e}, {dt:?}"));
    assert!(pass);
}

#[test]
fn criterion_04_threshold_closed_form_vs_simulator() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let law = random_empirical(&mut rng, 50);
        let s = law.spectrum().unwrap();
        let r = rng.random_range(1..=20u64);
        // any threshold below the largest cost keeps 0 < ρ < 1
        let i = rng.random_range(0..s.len() - 1);
        let t = s.value(i);
        let closed = expectation_at_threshold(&law, r, t);
        let angles = optimal_binary_angles(s.cdf_at(i), r).unwrap();
        let sim = expectation_from_state(&simulate(s, &PhaseFunction::Threshold(t), &angles).unwrap());
        worst = worst.max((closed - sim).abs());
    }
    let dt = t0.elapsed();
    let pass = worst < 1e-9 && within(dt, Duration::from_secs(10));
    verdict(4, pass, &format!("100 laws, max |closed form − simulator| = {worst:e}, {dt:?}"));
    assert!(pass);
}

#[test]
fn criterion_05_series_vs_simulator() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let s = random_spectrum(&mut rng, 15);
        let r = rng.random_range(1..=4usize);
        let flat: Vec<f64> = (0..2 * r).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        let angles = AngleSchedule::from_flat(&flat).unwrap();
        let series = expectation_series(&PhasedSpectrum::identity(&s), &angles).unwrap();
        let sim = expectation_from_state(&simulate(&s, &PhaseFunction::Identity, &angles).unwrap());
        worst = worst.max((series - sim).abs());
    }
    let dt = t0.elapsed();
    let pass = worst < 1e-9 && within(dt, Duration::from_secs(30));
    verdict(5, pass, &format!("50 spectra, max |series − simulator| = {worst:e}, {dt:?}"));
    assert!(pass);
}

#[test]
fn criterion_06_unimodal_threshold_curves() {
    let t0 = Instant::now();
    let binom = Binomial::<f64>::new(200, 0.5).unwrap();
    let normal_grid = discretize(&Normal::<f64>::standard(), 2000).unwrap();
    let mut violations = 0;
    let mut curves = 0;
    for r in [1u64, 10, 100, 1000] {
        for d in [&binom as &dyn Distribution<f64>, &normal_grid] {
            let c = threshold_curve(d, r, &GridSpec::Support).unwrap();
            violations += c.unimodality_violations(1e-12);
            curves += 1;
        }
    }
    let dt = t0.elapsed();
    let pass = violations == 0 && within(dt, Duration::from_secs(10));
    verdict(6, pass, &format!("{curves} curves, {violations} unimodality violations, {dt:?}"));
    assert!(pass);
}

#[test]
fn criterion_07_quantile_scaling() {
    let t0 = Instant::now();
    let n = Normal::<f64>::standard();
    let rs = log_grid(1e3, 1e6, 10);
    let reports = optimize_over_layers(&n, &rs).unwrap();
    let xs: Vec<f64> = rs.iter().map(|r| *r as f64).collect();
    let fq: Vec<f64> = reports.iter().map(|p| p.quantile).collect();
    let slope = log_log_slope(&xs, &fq).unwrap();
    let l = (-1.0f64).exp();
    let (lo, hi) = (l / 4.0, l * std::f64::consts::PI.powi(2) / 16.0);
    let scaled: Vec<f64> = rs.iter().zip(&fq).filter(|(r, _)| **r >= 10_000).map(|(r, f)| (*r as f64).powi(2) * f).collect();
    let (smin, smax) = scaled.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let in_band = scaled.iter().all(|v| *v >= lo && *v <= hi);
    let crs: Vec<f64> = rs.iter().map(|r| norm_cdf(crs_blom(0.0, 1.0, *r).unwrap())).collect();
    let crs_slope = log_log_slope(&xs, &crs).unwrap();
    let dt = t0.elapsed();
    let pass = (slope + 2.0).abs() <= 0.05
        && in_band
        && (crs_slope + 1.0).abs() <= 0.05
        && within(dt, Duration::from_secs(120));
    verdict(
        7,
        pass,
        &format!(
            "slope {slope:.5}, r²F in [{smin:.6}, {smax:.6}] vs [{lo:.6}, {hi:.6}], CRS slope {crs_slope:.5}, {dt:?}"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_08_pareto_exponents() {
    let t0 = Instant::now();
    let eps = pareto_epsilon_for_exponent(0.1f64).unwrap();
    let d = ReflectedPareto::<f64>::new(eps, 1.0).unwrap();
    let rs: Vec<u64> = (1..=100_000).collect();
    let scores: Vec<f64> = optimize_over_layers(&d, &rs).unwrap().iter().map(|p| p.c_r).collect();
    let targets = [0.5087, 0.3222, 0.2301, 0.1834, 0.1570];
    let mut fits = Vec::new();
    let mut pass = true;
    for (x, want) in targets.iter().enumerate() {
        let m = 10usize.pow(x as u32 + 1);
        let xs: Vec<f64> = rs[..m].iter().map(|r| *r as f64).collect();
        let f = power_law_fit(&xs, &scores[..m], 0.0, 1.0).unwrap();
        pass &= (f.exponent - want).abs() <= 0.01;
        fits.push(format!("{:.4}", f.exponent));
    }
    let dt = t0.elapsed();
    pass &= within(dt, Duration::from_secs(120));
    verdict(8, pass, &format!("eps = {eps}, exponents [{}] vs {targets:?}, {dt:?}", fits.join(", ")));
    assert!(pass);
}

#[test]
fn criterion_09_maxcut() {
    let t0 = Instant::now();
    let mut spectra_match = true;
    for n in 1..=5u32 {
        let g = GraphInstance::complete_bipartite(n as usize, n as usize);
        let bf = brute_force_spectrum::<f64>(&g, CostFrame::Centered).unwrap();
        let kn = knn_spectrum::<f64>(n).unwrap();
        spectra_match &= bf.spectrum().unwrap().values() == kn.spectrum().unwrap().values()
            && bf.multiplicities() == kn.multiplicities()
            && bf.total() == kn.total();
    }
    let mut min_mass_exact = true;
    for n in 1..=300u32 {
        let kn = knn_spectrum::<f64>(n).unwrap();
        // f(R_min) = 2·4^{−n}  ⇔  count 2 out of 4^n
        min_mass_exact &= kn.multiplicities()[0] == BigUint::from(2u32) && *kn.total() == BigUint::from(1u32) << (2 * n);
    }
    let mut mismatches = Vec::new();
    for n in 4..=20u32 {
        let got = min_rounds_for_ratio(n, 1.0, BoundKind::MaxAmplification).unwrap();
        let closed_form = 2f64.powf(0.5 * (2.0 * n as f64 - 3.0)).ceil() as u128;
        if got != closed_form {
            mismatches.push(format!("n={n}: {got} vs {closed_form}"));
        }
    }
    let dt = t0.elapsed();
    let pass = spectra_match && min_mass_exact && mismatches.is_empty() && within(dt, Duration::from_secs(60));
    verdict(
        9,
        pass,
        &format!(
            "spectra match {spectra_match}, f(R_min) exact {min_mass_exact}, λ=1 depth mismatches [{}], {dt:?}",
            mismatches.join("; ")
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_10_amplification_cap() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_ratio = 0.0f64;
    for _ in 0..10_000 {
        let s = random_spectrum(&mut rng, 30);
        let r = rng.random_range(1..=6usize);
        let q = match rng.random_range(0..3) {
            0 => PhaseFunction::Identity,
            1 => PhaseFunction::Threshold(s.value(rng.random_range(0..s.len()))),
            _ => PhaseFunction::PerClass((0..s.len()).map(|_| rng.random_range(-3.0..3.0)).collect()),
        };
        let flat: Vec<f64> = (0..2 * r).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        let angles = AngleSchedule::from_flat(&flat).unwrap();
        let st = simulate(&s, &q, &angles).unwrap();
        let cap = ((2 * r + 1) * (2 * r + 1)) as f64;
        for i in 0..s.len() {
            let eta = st.class_probability(i) / s.mass(i);
            worst_excess = worst_excess.max(eta - cap);
            worst_ratio = worst_ratio.max(eta / cap);
        }
    }
    let dt = t0.elapsed();
    let pass = worst_excess <= 1e-9 && within(dt, Duration::from_secs(120));
    verdict(10, pass, &format!("10^4 draws, max η/(2r+1)² = {worst_ratio:.6}, {dt:?}"));
    assert!(pass);
}

#[test]
fn criterion_11_bound_ordering() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut violations = Vec::new();
    for r in 1..=10u64 {
        let (_, cth) = c_th::<f64>(r);
        let cap = score_cap::<f64>(r);
        if cth > cap {
            violations.push(format!("r={r}: C^Th {cth} > cap {cap}"));
        }
        for _ in 0..100 {
            let law = random_empirical(&mut rng, 50);
            let rep = optimize_threshold(&law, r).unwrap();
            let floor = max_amplification_floor(&law, r).unwrap();
            if rep.c_r > cth * (1.0 + 1e-12) {
                violations.push(format!("r={r}: C_r {} > C^Th {cth}", rep.c_r));
            }
            if floor.e_floor > rep.e_r + 1e-12 * (1.0 + rep.e_r.abs()) {
                violations.push(format!("r={r}: floor {} > E_r {}", floor.e_floor, rep.e_r));
            }
        }
    }
    let dt = t0.elapsed();
    let pass = violations.is_empty() && within(dt, Duration::from_secs(60));
    verdict(11, pass, &format!("1000 laws, {} violations {:?}, {dt:?}", violations.len(), violations.first()));
    assert!(pass);
}

#[test]
fn criterion_12_gmqaoa_vs_threshold() {
    let t0 = Instant::now();
    let n = Normal::<f64>::standard();
    let s = discretize(&n, 10_000).unwrap();
    // coarse search on the closed-form normal, polished on the discretized spectrum
    let series = SeriesObjective::new(&n, 1.0);
    let sim = SimulatorObjective::new(&s, &PhaseFunction::Identity).unwrap();
    let mut warm: Vec<f64> = Vec::new();
    let mut rows = Vec::new();
    let mut pass = true;
    for r in 1..=8usize {
        let coarse = optimize_angles(
            &series,
            r,
            &AngleSearch { restarts: 20, extra_starts: vec![warm.clone()].into_iter().filter(|w| !w.is_empty()).collect(), ..Default::default() },
        );
        let polished = optimize_angles(
            &sim,
            r,
            &AngleSearch {
                restarts: 0,
                extra_starts: vec![coarse.search_point.clone()],
                local: NelderMead { max_evals: 3000, ..Default::default() },
                ..Default::default()
            },
        );
        let th = optimize_threshold(&s, r as u64).unwrap();
        pass &= polished.value >= th.e_r - 1e-6;
        rows.push(format!("r={r}: {:.5} vs {:.5}", polished.value, th.e_r));
        warm = coarse.search_point;
    }
    let dt = t0.elapsed();
    pass &= within(dt, Duration::from_secs(600));
    verdict(12, pass, &format!("GM-QAOA vs GM-Th [{}], {dt:?}", rows.join("; ")));
    assert!(pass);
}
