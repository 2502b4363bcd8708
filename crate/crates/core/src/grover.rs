//! Grover kernel: threshold ratio, optimal marked-state probability, its
//! polynomial form, the angle schedule that attains it, and the amplification ratio.

use crate::error::{Error, Result};
use crate::scalar::{KahanSum, Real};

/// Ordered `(β_j, γ_j)` pairs for `r` layers.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleSchedule<T> {
    pub betas: Vec<T>,
    pub gammas: Vec<T>,
}

impl<T: Real> AngleSchedule<T> {
    pub fn new(betas: Vec<T>, gammas: Vec<T>) -> Result<Self> {
        if betas.len() != gammas.len() || betas.is_empty() {
            return Err(Error::domain(format!(
                "angle schedule needs equal, non-zero lengths (got {} and {})",
                betas.len(),
                gammas.len()
            )));
        }
        Ok(Self { betas, gammas })
    }

    /// Every angle equal to `v`.
    pub fn constant(r: usize, v: T) -> Self {
        Self { betas: vec![v; r], gammas: vec![v; r] }
    }

    pub fn layers(&self) -> usize {
        self.betas.len()
    }

    /// Flattened as `[β_1, γ_1, β_2, γ_2, …]`.
    pub fn to_flat(&self) -> Vec<T> {
        self.betas.iter().zip(&self.gammas).flat_map(|(b, g)| [*b, *g]).collect()
    }

    pub fn from_flat(x: &[T]) -> Result<Self> {
        if !x.len().is_multiple_of(2) {
            return Err(Error::domain("flat schedule must have even length"));
        }
        Self::new(x.iter().step_by(2).copied().collect(), x.iter().skip(1).step_by(2).copied().collect())
    }
}

/// `ρ_Th(r) = sin²(π/(4r+2))`: the largest marked fraction for which `r`
/// Grover rounds reach probability 1.
pub fn threshold_ratio<T: Real>(r: u64) -> T {
    let s = (T::PI() / (T::lit(4.0) * T::from_count(r) + T::lit(2.0))).sin();
    s * s
}

/// Optimal probability of measuring a marked state after `r` rounds starting
/// from marked fraction `ρ`: `sin²((2r+1)·asin√ρ)` below `ρ_Th(r)`, 1 above.
pub fn grover_probability<T: Real>(rho: T, r: u64) -> T {
    if rho <= T::zero() {
        return T::zero();
    }
    if rho > threshold_ratio(r) {
        return T::one();
    }
    let theta = rho.sqrt().asin();
    let s = ((T::lit(2.0) * T::from_count(r) + T::one()) * theta).sin();
    (s * s).min(T::one())
}

/// Polynomial form `ρ·(Σ_k (−1)^k C(2r+1, 2k+1) ρ^k (1−ρ)^{r−k})²`.
///
/// Only defined below the threshold and for `r ≤ 30`, where the alternating
/// sum is still well conditioned in double precision.
pub fn grover_probability_poly<T: Real>(rho: T, r: u64) -> Result<T> {
    if !(T::zero()..=T::one()).contains(&rho) {
        return Err(Error::domain(format!("ρ = {rho} outside [0, 1]")));
    }
    if r == 0 || r > 30 {
        return Err(Error::domain(format!("polynomial form needs 1 ≤ r ≤ 30, got {r}")));
    }
    if rho > threshold_ratio(r) {
        return Err(Error::domain("polynomial form only holds for ρ ≤ ρ_Th(r)"));
    }
    let q = T::one() - rho;
    let n = 2 * r + 1;
    let mut coeff = n as f64; // C(n, 1)
    let mut acc = KahanSum::new();
    for k in 0..=r {
        if k > 0 {
            // C(n, 2k+1) from C(n, 2k−1)
            let j = (2 * k - 1) as f64;
            coeff *= (n as f64 - j) * (n as f64 - j - 1.0) / ((j + 1.0) * (j + 2.0));
        }
        let term = T::lit(coeff.round()) * rho.powi(k as i32) * q.powi((r - k) as i32);
        acc.add(if k % 2 == 0 { term } else { -term });
    }
    let s = acc.value();
    Ok(rho * s * s)
}

/// `η = P(ρ, r)/ρ ≤ (2r+1)²`.
pub fn amplification_ratio<T: Real>(rho: T, r: u64) -> Result<T> {
    if !(rho > T::zero() && rho <= T::one()) {
        return Err(Error::domain(format!("amplification needs 0 < ρ ≤ 1, got {rho}")));
    }
    Ok(grover_probability(rho, r) / rho)
}

/// Smallest `m ≥ 1` with `ρ ≥ ρ_Th(m)`, or `None` past `2^63`.
pub(crate) fn rounds_to_saturate<T: Real>(rho: T) -> Option<u64> {
    // ρ_Th(m) ≤ ρ  ⇔  m ≥ (π/(2·asin√ρ) − 2)/4 … solved and then fixed up against rounding
    let guess = ((T::PI() / rho.sqrt().asin() - T::lit(2.0)) / T::lit(4.0)).ceil();
    if !(guess < T::lit(9.2e18)) {
        return None;
    }
    let mut m = guess.to_u64()?.max(1);
    while m > 1 && threshold_ratio::<T>(m - 1) <= rho {
        m -= 1;
    }
    while threshold_ratio::<T>(m) > rho {
        m += 1;
    }
    Some(m)
}

/// The fine-tuned `(β, γ)` pair that, applied after `j` all-π Grover layers,
/// drives the marked probability to exactly 1.
///
/// After `j` layers the (marked, unmarked) amplitudes are
/// `(−1)^j (sin((2j+1)θ), cos((2j+1)θ))` with `sin θ = √ρ`. The phase layer
/// `γ` is chosen so the unmarked amplitude can be cancelled by the mixer,
/// and `β` then performs the cancellation.
pub(crate) fn fine_tuned_pair<T: Real>(rho: T, j: u64) -> (T, T) {
    let two = T::lit(2.0);
    let theta = rho.sqrt().asin();
    let phase = (two * T::from_count(j) + T::one()) * theta;
    let (v1, v0) = (phase.sin(), phase.cos());
    let (sr, sq) = (rho.sqrt(), (T::one() - rho).sqrt());
    // cos γ = −(1−2ρ)·v0 / (2√(ρ(1−ρ))·v1)
    let c = -(T::one() - two * rho) * v0 / (two * sr * sq * v1);
    let gamma = c.max(-T::one()).min(T::one()).acos();
    // overlap with |s⟩ after the phase layer, then β = arg(1 + z)
    let (s_re, s_im) = (sr * v1 * gamma.cos() + sq * v0, -sr * v1 * gamma.sin());
    let denom = sq * (s_re * s_re + s_im * s_im);
    // z = −v0 / (S·√(1−ρ)) = −v0·conj(S) / (|S|²√(1−ρ))
    let (z_re, z_im) = (-v0 * s_re / denom, v0 * s_im / denom);
    let beta = z_im.atan2(T::one() + z_re);
    (beta, gamma)
}

/// Angles that attain `P(ρ, r)` on the two-class (marked/unmarked) problem.
///
/// Below the threshold every layer is `β = γ = π`. Otherwise, with `m` the
/// fewest rounds that saturate, the first `m − 1` layers are `π`, layer `m`
/// carries the fine-tuned pair and the remaining layers are zero.
pub fn optimal_binary_angles<T: Real>(rho: T, r: u64) -> Result<AngleSchedule<T>> {
    if !(rho > T::zero() && rho < T::one()) {
        return Err(Error::domain(format!("binary angles need 0 < ρ < 1, got {rho}")));
    }
    if r == 0 {
        return Err(Error::domain("need at least one layer"));
    }
    let n = r as usize;
    // ρ_Th(1) rounds to just below 1/4; treat the boundary itself as unsaturated
    if rho <= threshold_ratio::<T>(r) * (T::one() + T::lit(8.0) * T::epsilon()) {
        return Ok(AngleSchedule::constant(n, T::PI()));
    }
    let m = rounds_to_saturate(rho).map_or(r, |m| m.min(r)) as usize;
    let mut sched = AngleSchedule::constant(n, T::zero());
    for k in 0..m - 1 {
        sched.betas[k] = T::PI();
        sched.gammas[k] = T::PI();
    }
    let (beta, gamma) = fine_tuned_pair(rho, (m - 1) as u64);
    sched.betas[m - 1] = beta;
    sched.gammas[m - 1] = gamma;
    Ok(sched)
}
