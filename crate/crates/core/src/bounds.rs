//! Performance limits shared by every Grover-mixer variant.
//!
//! The amplification of any class of degenerate states is capped at
//! `(2r+1)²`. Putting that cap on the lowest costs, in ascending order, gives
//! an expectation floor no phase function can beat. The same cap bounds the
//! standard score by `2√(r(r+1))` and hence the depth needed for a target
//! approximation ratio.
//!
//! Threshold phases reach at most `C^Th(r)`, which is attained by a two-point
//! law; `C^Th(r)/r → κ ≈ 1.4482`.
//!
//! The ratio bound is implicit in `r`:
//!
//! ```text
//! r ≥ (μ − λ·R_min) / (2σ·√(1 + 1/r))
//! ```
//!
//! The right side increases with `r` towards `(μ − λR_min)/(2σ)`. Iterating
//! `r ← ⌈rhs(r)⌉` from `r = 1` therefore climbs monotonically and stops at
//! the smallest solution, since no iterate can pass it.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::dist::{DiscreteSpectrum, Distribution};
use crate::error::{Error, Result};
use crate::gmqaoa::{simulate, PhaseFunction};
use crate::gmth::{min_rounds_exact_optimum, optimize_threshold};
use crate::grover::AngleSchedule;
use crate::optim::{bisect, golden_section_min};
use crate::scalar::Real;

/// `(x₁, κ)` with `x₁` the smallest positive root of `2x = tan x` and
/// `κ = 2sin²(x₁)/x₁`.
pub fn kappa<T: Real>() -> (T, T) {
    let quarter = T::FRAC_PI_4();
    // tan diverges at π/2; stop just short of it
    let hi = T::FRAC_PI_2() - T::lit(1e-9);
    let x = bisect(|x: T| x.tan() - T::lit(2.0) * x, quarter, hi, T::lit(1e-15))
        .expect("tan x − 2x changes sign on (π/4, π/2)");
    let s = x.sin();
    (x, T::lit(2.0) * s * s / x)
}

/// Standard score of the two-point law with marked fraction `sin²θ` after `r`
/// rounds: `(P − ρ)/√(ρ(1−ρ))`.
fn two_point_score<T: Real>(theta: T, r: u64) -> T {
    let (s, c) = theta.sin_cos();
    let p = ((T::lit(2.0) * T::from_count(r) + T::one()) * theta).sin();
    (p * p - s * s) / (s * c)
}

/// `(ρ*, C^Th(r))`: the largest standard score reachable with a threshold
/// phase and the marked fraction that attains it.
///
/// The search runs over the angle `θ = asin√ρ ∈ (0, π/(4r+2)]`, where the
/// objective is well scaled for every `r`.
pub fn c_th<T: Real>(r: u64) -> (T, T) {
    assert!(r >= 1, "at least one layer");
    let theta_max = T::PI() / (T::lit(4.0) * T::from_count(r) + T::lit(2.0));
    let (w, neg) = golden_section_min(
        |w: T| -two_point_score(w * theta_max, r),
        T::lit(1e-9),
        T::one(),
        T::zero(),
        T::lit(1e-13),
    );
    let s = (w * theta_max).sin();
    (s * s, -neg)
}

/// `2√(r(r+1))`, the standard-score cap for any Grover-based phase function.
pub fn score_cap<T: Real>(r: u64) -> T {
    let r = T::from_count(r);
    T::lit(2.0) * (r * (r + T::one())).sqrt()
}

/// `(L/(4r²), Lπ²/(16r²))`.
pub fn quantile_sandwich<T: Real>(r: u64, l: T) -> Result<(T, T)> {
    if r == 0 {
        return Err(Error::domain("need at least one layer"));
    }
    if !(l > T::zero() && l < T::one()) {
        return Err(Error::domain(format!("limit L = {l} outside (0, 1)")));
    }
    let r2 = T::from_count(r) * T::from_count(r);
    Ok((l / (T::lit(4.0) * r2), l * T::PI() * T::PI() / (T::lit(16.0) * r2)))
}

/// Everything the amplification cap says about one law at depth `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport<T> {
    pub r: u64,
    /// Largest support value with `F ≤ 1/(2r+1)²`; `−∞` when there is none.
    pub tau1: T,
    /// Smallest support value with `F > 1/(2r+1)²`. Equal to `tau1` for
    /// continuous laws.
    pub tau2: T,
    /// Expectation floor for any Grover-based QAOA.
    pub e_floor: T,
    /// `2√(r(r+1))`.
    pub c_cap: T,
    /// `(F(E_floor), F(E_r(t_opt)))`: the quantile the best Grover-based
    /// circuit can reach lies between these, the upper end being attained by
    /// the optimal threshold phase.
    pub quantile_bounds: (T, T),
    /// Fewest layers for which the cap allows certainty on the minimum.
    pub min_rounds_any: Option<u64>,
    /// Fewest layers at which a threshold phase finds the minimum with certainty.
    pub min_rounds_threshold: Option<u64>,
}

/// Floor from assigning the amplification `(2r+1)²` to the lowest costs.
///
/// Returns `(τ₁, τ₂, E_floor)`.
pub fn amplification_floor<T: Real, D: Distribution<T> + ?Sized>(d: &D, r: u64) -> Result<(T, T, T)> {
    let amp = T::lit(2.0) * T::from_count(r) + T::one();
    amplification_floor_with(d, amp * amp)
}

/// [`amplification_floor`] for an arbitrary amplification cap `amp ≥ 1`,
/// which lets depths beyond `u64` be evaluated.
pub fn amplification_floor_with<T: Real, D: Distribution<T> + ?Sized>(d: &D, amp: T) -> Result<(T, T, T)> {
    if !(amp >= T::one()) {
        return Err(Error::domain(format!("amplification {amp} below 1")));
    }
    let cap = amp.recip();
    let mu = d.mean();
    match d.spectrum() {
        Some(s) => {
            // last index with F ≤ 1/(2r+1)², allowing for rounding in the cumulative sums
            let tol = cap * (T::one() + T::lit(64.0) * T::epsilon());
            let k = partition_point(s.len(), |i| s.cdf_at(i) <= tol);
            if k == 0 {
                let tau2 = s.value(0);
                return Ok((T::neg_infinity(), tau2, tau2));
            }
            let tau1 = s.value(k - 1);
            let tau2 = s.value(k.min(s.len() - 1));
            let f1 = s.cdf_at(k - 1);
            let rest = (T::one() - f1 * amp).max(T::zero());
            let e = mu + s.centered_partial_at(k - 1) * amp + (tau2 - mu) * rest;
            Ok((tau1, tau2, e))
        }
        None => {
            let tau1 = d.quantile(cap)?;
            let f = d.cdf(tau1);
            Ok((tau1, tau1, mu + d.centered_partial_expectation(tau1) / f))
        }
    }
}

fn partition_point(n: usize, pred: impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (0usize, n);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// [`amplification_floor`] plus the related caps, in one report.
pub fn max_amplification_floor<T: Real, D: Distribution<T> + ?Sized>(d: &D, r: u64) -> Result<BoundReport<T>> {
    if r == 0 {
        return Err(Error::domain("need at least one layer"));
    }
    let (tau1, tau2, e_floor) = amplification_floor(d, r)?;
    let gmth = optimize_threshold(d, r)?;
    let (min_any, min_th) = match d.spectrum() {
        Some(s) => (Some(grover_based_min_rounds_exact(s.mass(0))?), Some(min_rounds_exact_optimum(d)?)),
        None => (None, None),
    };
    Ok(BoundReport {
        r,
        tau1,
        tau2,
        e_floor,
        c_cap: score_cap(r),
        quantile_bounds: (d.cdf(e_floor), gmth.quantile),
        min_rounds_any: min_any,
        min_rounds_threshold: min_th,
    })
}

/// Depth bounds for a target approximation ratio `λ = E/R_min`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LayerCaps<T> {
    /// `2√(r(r+1))`.
    pub c_cap: T,
    /// Smallest `r` that the score cap does not rule out.
    pub r_min: u64,
    /// True when `μ − λR_min ≤ 0`: the ratio holds at the initial state.
    pub vacuous: bool,
}

/// Score cap at `r` and the fewest layers compatible with ratio `λ`.
pub fn layer_caps<T: Real, D: Distribution<T> + ?Sized>(d: &D, r: u64, lambda: T) -> Result<LayerCaps<T>> {
    let r_min_cost = d.support().0;
    if !r_min_cost.is_finite() || r_min_cost == T::zero() {
        return Err(Error::domain("ratio bound needs a finite, nonzero minimum cost"));
    }
    let c_cap = score_cap(r);
    let num = d.mean() - lambda * r_min_cost;
    if !(num > T::zero()) {
        return Ok(LayerCaps { c_cap, r_min: 1, vacuous: true });
    }
    let k = num / (T::lit(2.0) * d.std_dev());
    let rhs = |r: u64| k / (T::one() + T::from_count(r).recip()).sqrt();
    let mut cur = 1u64;
    for _ in 0..200 {
        let v = rhs(cur).ceil();
        let next = v.to_u64().ok_or_else(|| Error::numerical("layer bound exceeds u64"))?.max(1);
        if next <= cur {
            return Ok(LayerCaps { c_cap, r_min: cur, vacuous: false });
        }
        cur = next;
    }
    Err(Error::numerical("ratio-bound iteration did not settle"))
}

/// Smallest `r ≥ ½(1/√f_min − 1)`, i.e. `(2r+1)²·f_min ≥ 1`: below this no
/// Grover-based circuit can measure the minimum with certainty.
pub fn grover_based_min_rounds_exact<T: Real>(f_min: T) -> Result<u64> {
    if !(f_min > T::zero() && f_min <= T::one()) {
        return Err(Error::domain(format!("f_min = {f_min} outside (0, 1]")));
    }
    let guess = (T::lit(0.5) * (f_min.sqrt().recip() - T::one())).floor();
    let mut r = guess.to_u64().ok_or_else(|| Error::numerical("layer count exceeds u64"))?.saturating_sub(1);
    let ok = |r: u64| {
        let a = T::lit(2.0) * T::from_count(r) + T::one();
        a * a * f_min >= T::one() - T::lit(1e-12)
    };
    while !ok(r) {
        r += 1;
    }
    Ok(r)
}

/// [`grover_based_min_rounds_exact`] for `f_min = count/total` in exact
/// integer arithmetic.
pub fn grover_based_min_rounds_exact_ratio(count: &BigUint, total: &BigUint) -> Result<BigUint> {
    if count.is_zero() || count > total {
        return Err(Error::domain("need 0 < count ≤ total"));
    }
    // (2r+1)² ≥ total/count  ⇔  (2r+1)² ≥ ⌈total/count⌉  ⇔  2r+1 ≥ ⌈√⌈total/count⌉⌉
    let q = ceil_div(total, count);
    let root = ceil_sqrt(&q);
    Ok(root / BigUint::from(2u32))
}

fn ceil_div(a: &BigUint, b: &BigUint) -> BigUint {
    (a + b - BigUint::one()) / b
}

/// `⌈√n⌉`.
pub fn ceil_sqrt(n: &BigUint) -> BigUint {
    let s = n.sqrt();
    if &s * &s == *n {
        s
    } else {
        s + BigUint::one()
    }
}

/// Ratio `|v_i|²/f_i` of measuring cost `class_value` after versus before the circuit.
pub fn simulated_amplification<T: Real>(
    s: &DiscreteSpectrum<T>,
    q: &PhaseFunction<T>,
    angles: &AngleSchedule<T>,
    class_value: T,
) -> Result<T> {
    let i = s
        .values()
        .iter()
        .position(|v| *v == class_value)
        .ok_or_else(|| Error::domain(format!("{class_value} is not in the spectrum")))?;
    let f = s.mass(i);
    if !(f > T::zero()) {
        return Err(Error::domain("zero-mass class"));
    }
    Ok(simulate(s, q, angles)?.class_probability(i) / f)
}
