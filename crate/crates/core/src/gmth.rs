//! Threshold-phase Grover-mixer QAOA: closed-form expectation for a given
//! threshold, threshold curves, and the optimal threshold.
//!
//! With the phase function `−1` on costs `≤ t` and `0` above, the circuit
//! reduces to Grover search over the marked fraction `ρ = F(t)`, and
//!
//! ```text
//! E_r(t) = μ − G_Y(T)·(1 − P(ρ, r)/ρ)/(1 − ρ),   T = t − μ
//! ```
//!
//! which is the `P`-weighted mix of `E[X | X ≤ t]` and `E[X | X > t]`.

use rayon::prelude::*;

use crate::dist::{Distribution, Kind};
use crate::error::{Error, Result};
use crate::grover::{grover_probability, rounds_to_saturate, threshold_ratio};
use crate::optim::golden_section_min;
use crate::scalar::Real;

/// Everything reported about one threshold evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdReport<T> {
    pub r: u64,
    /// Threshold `t` in cost units.
    pub t: T,
    /// `T = t − μ`.
    pub big_t: T,
    /// Marked fraction `F(t)`.
    pub rho: T,
    /// Probability of measuring a cost `≤ t`.
    pub p: T,
    pub e_r: T,
    /// Standard score `(μ − E_r)/σ`.
    pub c_r: T,
    /// `F(E_r)`.
    pub quantile: T,
    /// `E_r / R_min`, when `R_min` is finite and nonzero.
    pub lambda: Option<T>,
    /// Amplification `P/ρ`, when `ρ > 0`.
    pub eta: Option<T>,
}

/// `E_r(t)`; equals `μ` whenever `F(t) ∈ {0, 1}`.
pub fn expectation_at_threshold<T: Real, D: Distribution<T> + ?Sized>(d: &D, r: u64, t: T) -> T {
    expectation_parts(d, r, t).2
}

fn expectation_parts<T: Real, D: Distribution<T> + ?Sized>(d: &D, r: u64, t: T) -> (T, T, T) {
    let mu = d.mean();
    let rho = d.cdf(t);
    let tail = d.sf(t);
    if !(rho > T::zero()) || !(tail > T::zero()) {
        let p = if rho > T::zero() { T::one() } else { T::zero() };
        return (rho, p, mu);
    }
    let p = grover_probability(rho, r);
    let gy = d.centered_partial_expectation(t);
    let e = if p >= T::one() {
        // all probability on the lower branch: E[X | X ≤ t]
        mu + gy / rho
    } else {
        mu - gy * (T::one() - p / rho) / tail
    };
    (rho, p, e)
}

/// Full report for threshold `t`.
pub fn threshold_report<T: Real, D: Distribution<T> + ?Sized>(d: &D, r: u64, t: T) -> ThresholdReport<T> {
    let (rho, p, e_r) = expectation_parts(d, r, t);
    let mu = d.mean();
    let r_min = d.support().0;
    ThresholdReport {
        r,
        t,
        big_t: t - mu,
        rho,
        p,
        e_r,
        c_r: (mu - e_r) / d.std_dev(),
        quantile: d.cdf(e_r),
        lambda: (r_min.is_finite() && r_min != T::zero()).then(|| e_r / r_min),
        eta: (rho > T::zero()).then(|| p / rho),
    }
}

/// Which thresholds a curve is evaluated at.
#[derive(Clone, Debug)]
pub enum GridSpec<T> {
    /// Every support value of a discrete law.
    Support,
    /// Explicit cdf levels in `(0, 1)`; `t = F⁻¹(u)`.
    Levels(Vec<T>),
    /// `n` cdf levels log-spaced between `lo` and `hi` (both in `(0, 1)`).
    LogLevels { lo: T, hi: T, n: usize },
}

impl<T: Real> GridSpec<T> {
    fn thresholds<D: Distribution<T> + ?Sized>(&self, d: &D) -> Result<Vec<T>> {
        let ts = match self {
            GridSpec::Support => d
                .spectrum()
                .ok_or_else(|| Error::Unsupported("support grid needs a discrete law".into()))?
                .values()
                .to_vec(),
            GridSpec::Levels(us) => us.iter().map(|u| d.quantile(*u)).collect::<Result<_>>()?,
            GridSpec::LogLevels { lo, hi, n } => {
                if *n < 2 || !(*lo > T::zero() && *lo < *hi && *hi < T::one()) {
                    return Err(Error::domain("log grid needs n ≥ 2 and 0 < lo < hi < 1"));
                }
                let (a, b) = (lo.ln(), hi.ln());
                let step = (b - a) / T::from_count((*n - 1) as u64);
                (0..*n)
                    .map(|i| d.quantile((a + step * T::from_count(i as u64)).exp().min(*hi)))
                    .collect::<Result<_>>()?
            }
        };
        if ts.is_empty() {
            return Err(Error::domain("empty threshold grid"));
        }
        Ok(ts)
    }
}

/// `E_r` as a function of ascending thresholds.
#[derive(Clone, Debug)]
pub struct ThresholdCurve<T> {
    pub points: Vec<ThresholdReport<T>>,
}

impl<T: Real> ThresholdCurve<T> {
    /// Number of places where the curve rises by more than `tol·max(1, |E|)`
    /// and later falls by more than the same amount. Zero for a valley-shaped curve.
    pub fn unimodality_violations(&self, tol: T) -> usize {
        let mut rising = false;
        let mut violations = 0;
        for w in self.points.windows(2) {
            let (a, b) = (w[0].e_r, w[1].e_r);
            let slack = tol * T::one().max(a.abs()).max(b.abs());
            if b > a + slack {
                rising = true;
            } else if b < a - slack && rising {
                violations += 1;
            }
        }
        violations
    }

    /// The point with the lowest expectation (first on ties).
    pub fn valley(&self) -> Option<&ThresholdReport<T>> {
        self.points.iter().fold(None, |best: Option<&ThresholdReport<T>>, p| match best {
            Some(b) if b.e_r <= p.e_r => Some(b),
            _ => Some(p),
        })
    }
}

/// Evaluates the threshold curve on `grid`, in parallel, in ascending threshold order.
pub fn threshold_curve<T: Real, D: Distribution<T> + ?Sized>(
    d: &D,
    r: u64,
    grid: &GridSpec<T>,
) -> Result<ThresholdCurve<T>> {
    let mut ts = grid.thresholds(d)?;
    ts.sort_by(|a, b| a.partial_cmp(b).expect("finite thresholds"));
    let points = ts.par_iter().map(|&t| threshold_report(d, r, t)).collect();
    Ok(ThresholdCurve { points })
}

/// Relative tolerance of the continuous threshold search, in units of `ρ_Th(r)`.
pub const THRESHOLD_REL_TOL: f64 = 1e-12;

/// Optimal threshold for `r` layers.
///
/// Discrete laws: the valley is searched over support indices with
/// `F ≤ ρ_Th(r)` plus the first index beyond, by ternary search that breaks
/// ties to the left and finishes with a scan of the last window. Beyond that
/// index the curve is the non-decreasing `E[X | X ≤ t]`, so nothing further
/// is evaluated.
///
/// Continuous laws: golden-section over `w = F(t)/ρ_Th(r) ∈ (0, 1]`, which
/// keeps the search relative to the shrinking threshold ratio at large `r`.
pub fn optimize_threshold<T: Real, D: Distribution<T> + ?Sized>(d: &D, r: u64) -> Result<ThresholdReport<T>> {
    if r == 0 {
        return Err(Error::domain("need at least one layer"));
    }
    let th = threshold_ratio::<T>(r);
    match d.spectrum() {
        Some(s) => {
            let n = s.len();
            let k = (0..n).find(|&i| s.cdf_at(i) > th).unwrap_or(n - 1);
            let e = |i: usize| expectation_at_threshold(s, r, s.value(i));
            let (mut lo, mut hi) = (0usize, k);
            while hi - lo > 2 {
                let m1 = lo + (hi - lo) / 3;
                let m2 = hi - (hi - lo) / 3;
                if e(m1) <= e(m2) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            let best = (lo..=hi)
                .map(|i| (i, e(i)))
                .fold((lo, T::infinity()), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
            Ok(threshold_report(d, r, s.value(best.0)))
        }
        None => {
            if d.kind() != Kind::Continuous {
                return Err(Error::Unsupported("law has neither atoms nor a density".into()));
            }
            let eval = |w: T| -> T {
                match d.quantile(w * th) {
                    Ok(t) => expectation_at_threshold(d, r, t),
                    Err(_) => T::infinity(),
                }
            };
            let w_lo = T::lit(1e-9).max(T::min_positive_value() / th);
            let (w, _) = golden_section_min(eval, w_lo, T::one(), T::zero(), T::lit(THRESHOLD_REL_TOL));
            let t = d.quantile(w * th)?;
            let rep = threshold_report(d, r, t);
            if !rep.e_r.is_finite() {
                return Err(Error::numerical(format!("non-finite expectation at r = {r}")));
            }
            Ok(rep)
        }
    }
}

/// Optimal reports for many layer counts, computed in parallel and returned in input order.
pub fn optimize_over_layers<T: Real, D: Distribution<T> + ?Sized>(
    d: &D,
    rs: &[u64],
) -> Result<Vec<ThresholdReport<T>>> {
    rs.par_iter().map(|&r| optimize_threshold(d, r)).collect()
}

/// The threshold `τ` at which `P` first reaches 1 and `E[X | X ≤ τ]`.
///
/// The optimal expectation is at most `E[X | X ≤ τ] ≤ τ`.
pub fn saturation_cap<T: Real, D: Distribution<T> + ?Sized>(d: &D, r: u64) -> Result<(T, T)> {
    let th = threshold_ratio::<T>(r);
    let tau = match d.spectrum() {
        Some(s) => s.value(s.quantile_index(th).unwrap_or(s.len() - 1)),
        None => d.quantile(th)?,
    };
    let f = d.cdf(tau);
    Ok((tau, d.mean() + d.centered_partial_expectation(tau) / f))
}

/// Fewest layers that find the minimum with certainty: smallest `r` with
/// `f(R_min) ≥ ρ_Th(r)`.
pub fn min_rounds_exact_optimum<T: Real, D: Distribution<T> + ?Sized>(d: &D) -> Result<u64> {
    let s = d
        .spectrum()
        .ok_or_else(|| Error::Unsupported("exact optimization needs a point mass at the minimum".into()))?;
    rounds_to_saturate(s.mass(0)).ok_or_else(|| Error::Unattainable("depth exceeds 2^63".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{Binomial, Normal, TwoPoint};

    #[test]
    fn two_point_expectation_is_minus_p() {
        for &rho in &[0.01, 0.1, 0.25, 0.6] {
            let d = TwoPoint::<f64>::new(rho).unwrap();
            for r in 1..6 {
                let e = expectation_at_threshold(&d, r, -1.0);
                assert!((e + grover_probability(rho, r)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn degenerate_thresholds_return_mean() {
        let d = Normal::<f64>::new(2.0, 3.0).unwrap();
        assert_eq!(expectation_at_threshold(&d, 3, f64::NEG_INFINITY), 2.0);
        let b = Binomial::<f64>::new(10, 0.3).unwrap();
        assert_eq!(expectation_at_threshold(&b, 3, -1.0), b.mean());
        assert_eq!(expectation_at_threshold(&b, 3, 10.0), b.mean());
    }

    #[test]
    fn r1_normal_matches_specialized_formula() {
        let d = Normal::<f64>::standard();
        let t = -1.0;
        let f = d.cdf(t);
        let g = d.centered_partial_expectation(t);
        let want = 8.0 * g * (1.0 - 2.0 * f);
        assert!((expectation_at_threshold(&d, 1, t) - want).abs() < 1e-14);
    }

    #[test]
    fn two_point_curve_has_valley_at_minus_one() {
        let d = TwoPoint::<f64>::new(0.25).unwrap();
        let c = threshold_curve(&d, 1, &GridSpec::Support).unwrap();
        assert_eq!(c.points.len(), 2);
        assert_eq!(c.valley().unwrap().t, -1.0);
        assert_eq!(c.unimodality_violations(1e-12), 0);
    }

    #[test]
    fn continuous_optimum_respects_cap() {
        let d = Normal::<f64>::standard();
        for r in [1, 3, 10, 100] {
            let rep = optimize_threshold(&d, r).unwrap();
            let (tau, e_cap) = saturation_cap(&d, r).unwrap();
            assert!(rep.t <= tau + 1e-12);
            assert!(rep.e_r <= e_cap + 1e-12);
            assert!((rep.e_r - (d.mean() - rep.c_r * d.std_dev())).abs() < 1e-9);
        }
        let (tau, _) = saturation_cap(&d, 1).unwrap();
        assert!((tau + 0.674_489_750_196_081_7).abs() < 1e-12);
    }

    #[test]
    fn exact_optimum_rounds() {
        assert_eq!(min_rounds_exact_optimum(&TwoPoint::<f64>::new(0.25).unwrap()).unwrap(), 1);
        let d = TwoPoint::<f64>::new(0.125).unwrap();
        assert_eq!(min_rounds_exact_optimum(&d).unwrap(), 2);
        assert_eq!(grover_probability(0.125, 2), 1.0);
        assert!(min_rounds_exact_optimum(&Normal::<f64>::standard()).is_err());
    }
}
