//! Classical random sampling: the expected best of `k` uniform draws from the
//! solution space. Effort is matched to `r` layers as `k = 2r`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureOptions};
use crate::scalar::{KahanSum, Real};
use crate::special::norm_quantile;

/// Blom's plotting-position constant.
pub const BLOM_C: f64 = 0.375;

/// Sampling effort matched to `r` layers.
pub fn effort(r: u64) -> u64 {
    2 * r
}

/// How a [`CrsResult`] was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrsMethod {
    Blom,
    Integral,
    MonteCarlo,
}

impl CrsMethod {
    pub fn name(self) -> &'static str {
        match self {
            CrsMethod::Blom => "blom",
            CrsMethod::Integral => "integral",
            CrsMethod::MonteCarlo => "monte_carlo",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrsResult<T> {
    /// Number of samples `k`.
    pub samples: u64,
    pub expected_min: T,
    /// Standard error, for Monte Carlo.
    pub stderr: Option<T>,
    pub method: CrsMethod,
}

/// Blom approximation of the expected minimum of `2r` normal draws:
/// `u + Φ⁻¹((1−c)/(2r−2c+1))·s`.
pub fn crs_blom<T: Real>(u: T, s: T, r: u64) -> Result<T> {
    if r == 0 {
        return Err(Error::domain("need at least one layer"));
    }
    blom_min(u, s, effort(r))
}

/// Blom approximation for `k` draws: `u + Φ⁻¹((1−c)/(k−2c+1))·s`.
pub fn blom_min<T: Real>(u: T, s: T, k: u64) -> Result<T> {
    if k == 0 {
        return Err(Error::domain("need at least one sample"));
    }
    let c = T::lit(BLOM_C);
    let p = (T::one() - c) / (T::from_count(k) - T::lit(2.0) * c + T::one());
    Ok(u + norm_quantile(p) * s)
}

/// `E[min of k draws]`.
///
/// Laws with atoms use the exact sum `Σ x_i·(S_i^k − S_{i+1}^k)` with
/// `S_i = P(X ≥ x_i)`. Continuous laws integrate the quantile against the
/// law of the minimum's rank: `∫₀¹ Q(1 − (1−v)^{1/k}) dv`.
pub fn crs_expected_min<T: Real, D: Distribution<T> + ?Sized>(d: &D, k: u64) -> Result<T> {
    if k == 0 {
        return Err(Error::domain("need at least one sample"));
    }
    if k == 1 {
        return Ok(d.mean());
    }
    let kf = T::from_count(k);
    if let Some(s) = d.spectrum() {
        let n = s.len();
        // S_i = P(X ≥ x_i) = P(X > x_{i−1})
        let at_least = |i: usize| if i == 0 { T::one() } else { s.sf_at(i - 1) };
        let pow = |p: T| if p > T::zero() { (kf * p.ln()).exp() } else { T::zero() };
        let mut acc = KahanSum::new();
        for i in 0..n {
            let next = if i + 1 < n { pow(at_least(i + 1)) } else { T::zero() };
            acc.add(s.value(i) * (pow(at_least(i)) - next));
        }
        return Ok(acc.value());
    }
    let rank = |v: T| -(((-v).ln_1p()) / kf).exp_m1();
    let f = |v: T| {
        let u = rank(v);
        if !(u > T::zero() && u < T::one()) {
            return T::zero();
        }
        d.quantile(u).unwrap_or_else(|_| T::nan())
    };
    let opts = QuadratureOptions { abs_tol: T::lit(1e-10), rel_tol: T::lit(1e-10), max_intervals: 8000 };
    let est = integrate(f, T::zero(), T::one(), &opts)?;
    if !(est.error <= T::lit(1e-8) * (T::one() + est.value.abs())) {
        return Err(Error::numerical(format!("expected-minimum integral error {:e}", est.error)));
    }
    Ok(est.value)
}

/// Monte Carlo estimate of `E[min of k draws]` with its standard error.
///
/// Trial `i` draws from a ChaCha stream keyed by `(seed, i)`, so the result
/// does not depend on scheduling. Each trial samples the minimum directly by
/// inverse transform: its rank is `1 − (1−V)^{1/k}` for uniform `V`.
pub fn crs_monte_carlo<T: Real, D: Distribution<T> + ?Sized>(
    d: &D,
    k: u64,
    trials: u64,
    seed: u64,
) -> Result<CrsResult<T>> {
    if k == 0 || trials == 0 {
        return Err(Error::domain("need at least one sample and one trial"));
    }
    let kf = T::from_count(k);
    let draws: Vec<T> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            // uniform on (0, 1): midpoints of the 2^53 grid
            let v = T::lit(((rng.random::<u64>() >> 11) as f64 + 0.5) / (1u64 << 53) as f64);
            let u = -(((-v).ln_1p()) / kf).exp_m1();
            d.quantile(u.max(T::min_positive_value()).min(T::one() - T::epsilon()))
        })
        .collect::<Result<_>>()?;
    let n = T::from_count(trials);
    let mean = draws.iter().copied().collect::<KahanSum<T>>().value() / n;
    let var = if trials > 1 {
        draws.iter().map(|x| (*x - mean) * (*x - mean)).collect::<KahanSum<T>>().value() / (n - T::one())
    } else {
        T::zero()
    };
    Ok(CrsResult { samples: k, expected_min: mean, stderr: Some((var / n).sqrt()), method: CrsMethod::MonteCarlo })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{Normal, TwoPoint};
    use crate::special::norm_cdf;

    #[test]
    fn blom_examples() {
        let v = crs_blom(0.0f64, 1.0, 1).unwrap();
        assert!((v - norm_quantile(0.625 / 2.25)).abs() < 1e-15);
        assert!((v + 0.5895).abs() < 1e-4);
        let w = crs_blom(3.0f64, 2.0, 7).unwrap();
        assert!((w - (3.0 + 2.0 * crs_blom(0.0, 1.0, 7).unwrap())).abs() < 1e-14);
        // quantile of the Blom value is the plotting position, so F scales as 1/r
        let f = norm_cdf(crs_blom(0.0f64, 1.0, 1000).unwrap());
        assert!((f - 0.625 / 2000.25).abs() < 1e-14);
    }

    #[test]
    fn expected_min_examples() {
        let n = Normal::<f64>::standard();
        assert!(crs_expected_min(&n, 1).unwrap().abs() < 1e-15);
        let two = crs_expected_min(&n, 2).unwrap();
        assert!((two + 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-8);
        for r in [10u64, 100, 1000] {
            let e = crs_expected_min(&n, effort(r)).unwrap();
            let b = crs_blom(0.0, 1.0, r).unwrap();
            assert!(((e - b) / e).abs() < 0.02, "r={r}: {e} vs {b}");
        }
    }

    #[test]
    fn expected_min_discrete() {
        let d = TwoPoint::<f64>::new(0.5).unwrap();
        assert!((crs_expected_min(&d, 2).unwrap() + 0.75).abs() < 1e-15);
        let d = TwoPoint::<f64>::new(0.1).unwrap();
        assert!((crs_expected_min(&d, 5).unwrap() + (1.0 - 0.9f64.powi(5))).abs() < 1e-14);
    }

    #[test]
    fn monte_carlo_examples() {
        let n = Normal::<f64>::standard();
        let mc = crs_monte_carlo(&n, 2, 200_000, 11).unwrap();
        let se = mc.stderr.unwrap();
        assert!((mc.expected_min + 1.0 / std::f64::consts::PI.sqrt()).abs() < 3.0 * se);
        let again = crs_monte_carlo(&n, 2, 200_000, 11).unwrap();
        assert_eq!(mc.expected_min.to_bits(), again.expected_min.to_bits());
        let d = TwoPoint::<f64>::new(0.5).unwrap();
        let mc = crs_monte_carlo(&d, 2, 100_000, 3).unwrap();
        assert!((mc.expected_min + 0.75).abs() < 3.0 * mc.stderr.unwrap());
        let one = crs_monte_carlo(&n, 1, 100_000, 5).unwrap();
        assert!(one.expected_min.abs() < 3.0 * one.stderr.unwrap());
    }
}
