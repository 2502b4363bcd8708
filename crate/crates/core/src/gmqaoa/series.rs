//! Expectation value as a finite sum over characteristic-function terms.
//!
//! Each mixer `I + B(β)|s⟩⟨s|` with `B(β) = e^{iβ} − 1` is expanded into its
//! two summands. A bit pattern `k` picks the layers that take the projector
//! branch; between two picked layers the state collapses back onto `|s⟩`, so
//! each branch contributes `Π B(β_p)·φ(Σγ over the segment)` times a trailing
//! phase `U_P(Σγ after the last pick)|s⟩`. Pairing a bra and a ket branch
//! leaves `⟨s|U_P(−Γ_bra) H_C U_P(Γ_ket)|s⟩ = −iΨ(Γ_ket − Γ_bra)`.

use num_complex::Complex;

use crate::dist::{DiscreteSpectrum, Distribution, Normal};
use crate::error::{Error, Result};
use crate::grover::AngleSchedule;
use crate::scalar::{KahanSum, Real};

use super::expm1_i;

/// Largest layer count accepted by the literal 4^r evaluation.
pub const MAX_SERIES_LAYERS: usize = 12;

/// Cost law with `φ(γ) = E[e^{iγ q(X)}]` and `Ψ(γ) = i E[X e^{iγ q(X)}]`.
pub trait CharacteristicPair<T: Real>: Sync {
    fn phi(&self, gamma: T) -> Complex<T>;
    fn psi(&self, gamma: T) -> Complex<T>;
    /// `μ = −iΨ(0)`.
    fn mean_cost(&self) -> T;
}

/// Discrete spectrum together with per-class phase values `q(x_i)`.
#[derive(Clone, Debug)]
pub struct PhasedSpectrum<'a, T> {
    spectrum: &'a DiscreteSpectrum<T>,
    q: Vec<T>,
}

impl<'a, T: Real> PhasedSpectrum<'a, T> {
    pub fn new(spectrum: &'a DiscreteSpectrum<T>, q: Vec<T>) -> Result<Self> {
        if q.len() != spectrum.len() {
            return Err(Error::domain("phase values and classes differ in length"));
        }
        Ok(Self { spectrum, q })
    }

    /// `q(x) = x`.
    pub fn identity(spectrum: &'a DiscreteSpectrum<T>) -> Self {
        Self { spectrum, q: spectrum.values().to_vec() }
    }

    fn weighted_sum(&self, gamma: T, with_x: bool) -> Complex<T> {
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for ((x, f), q) in self.spectrum.values().iter().zip(self.spectrum.masses()).zip(&self.q) {
            let (s, c) = (gamma * *q).sin_cos();
            let w = if with_x { *f * *x } else { *f };
            re.add(w * c);
            im.add(w * s);
        }
        Complex::new(re.value(), im.value())
    }
}

impl<T: Real> CharacteristicPair<T> for PhasedSpectrum<'_, T> {
    fn phi(&self, gamma: T) -> Complex<T> {
        self.weighted_sum(gamma, false)
    }

    fn psi(&self, gamma: T) -> Complex<T> {
        let s = self.weighted_sum(gamma, true);
        Complex::new(-s.im, s.re)
    }

    fn mean_cost(&self) -> T {
        Distribution::mean(self.spectrum)
    }
}

impl<T: Real> CharacteristicPair<T> for DiscreteSpectrum<T> {
    fn phi(&self, gamma: T) -> Complex<T> {
        PhasedSpectrum::identity(self).phi(gamma)
    }

    fn psi(&self, gamma: T) -> Complex<T> {
        PhasedSpectrum::identity(self).psi(gamma)
    }

    fn mean_cost(&self) -> T {
        Distribution::mean(self)
    }
}

impl<T: Real> CharacteristicPair<T> for Normal<T> {
    /// `e^{iuγ − s²γ²/2}`.
    fn phi(&self, gamma: T) -> Complex<T> {
        let m = (-self.s * self.s * gamma * gamma * T::lit(0.5)).exp();
        let (sn, cs) = (self.u * gamma).sin_cos();
        Complex::new(m * cs, m * sn)
    }

    /// `φ′(γ) = (iu − s²γ)·φ(γ)`.
    fn psi(&self, gamma: T) -> Complex<T> {
        Complex::new(-self.s * self.s * gamma, self.u) * self.phi(gamma)
    }

    fn mean_cost(&self) -> T {
        self.u
    }
}

/// Layers picked by one bit pattern, read as consecutive segments.
///
/// Layer `j` (1-based) is picked when bit `j − 1` of the pattern is set. The
/// segment `(a, b]` collects the phase angles `γ_{a+1} … γ_b`; the tail
/// starts after the last picked layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerPartition {
    /// Picked layers in ascending order.
    pub picked: Vec<usize>,
    /// `(a, b]` segments ending at each picked layer.
    pub segments: Vec<(usize, usize)>,
    /// Layers `tail_start + 1 ..= r` form the trailing phase.
    pub tail_start: usize,
}

impl LayerPartition {
    pub fn from_bits(k: usize, r: usize) -> Self {
        let picked: Vec<usize> = (1..=r).filter(|j| k >> (j - 1) & 1 == 1).collect();
        let mut segments = Vec::with_capacity(picked.len());
        let mut prev = 0;
        for &p in &picked {
            segments.push((prev, p));
            prev = p;
        }
        Self { picked, segments, tail_start: prev }
    }
}

fn prefix_sums<T: Real>(gammas: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(gammas.len() + 1);
    let mut acc = KahanSum::new();
    out.push(T::zero());
    for g in gammas {
        acc.add(*g);
        out.push(acc.value());
    }
    out
}

/// Branch amplitudes `c_k` and their tail angles `Γ_k`.
fn branches<T: Real, D: CharacteristicPair<T> + ?Sized>(
    d: &D,
    angles: &AngleSchedule<T>,
) -> (Vec<Complex<T>>, Vec<usize>, Vec<T>) {
    let r = angles.layers();
    let prefix = prefix_sums(&angles.gammas);
    // φ over each segment (a, b], computed once
    let mut seg_phi = vec![Complex::new(T::zero(), T::zero()); (r + 1) * (r + 1)];
    for a in 0..r {
        for b in a + 1..=r {
            seg_phi[a * (r + 1) + b] = d.phi(prefix[b] - prefix[a]);
        }
    }
    let b_factor: Vec<Complex<T>> = angles.betas.iter().map(|b| expm1_i(*b)).collect();
    let tails: Vec<T> = (0..=r).map(|m| prefix[r] - prefix[m]).collect();
    let mut coeffs = Vec::with_capacity(1 << r);
    let mut tail_of = Vec::with_capacity(1 << r);
    for k in 0..1usize << r {
        let part = LayerPartition::from_bits(k, r);
        let mut c = Complex::new(T::one(), T::zero());
        for (&(a, b), &p) in part.segments.iter().zip(&part.picked) {
            c = c * b_factor[p - 1] * seg_phi[a * (r + 1) + b];
        }
        coeffs.push(c);
        tail_of.push(part.tail_start);
    }
    (coeffs, tail_of, tails)
}

/// Literal double sum over bra and ket bit patterns; O(4^r) terms.
///
/// Fails for `r > 12`, and when the imaginary residue of the sum exceeds
/// `1e-9·(1 + |E|)`.
pub fn expectation_series<T: Real, D: CharacteristicPair<T> + ?Sized>(
    d: &D,
    angles: &AngleSchedule<T>,
) -> Result<T> {
    let r = angles.layers();
    if r > MAX_SERIES_LAYERS {
        return Err(Error::Unsupported(format!(
            "series evaluation has 4^r terms; r = {r} exceeds {MAX_SERIES_LAYERS}"
        )));
    }
    let (coeffs, tail_of, tails) = branches(d, angles);
    // Ψ depends only on the pair of tails, so tabulate the (r+1)² values
    let mut psi = vec![Complex::new(T::zero(), T::zero()); (r + 1) * (r + 1)];
    for a in 0..=r {
        for b in 0..=r {
            psi[a * (r + 1) + b] = d.psi(tails[b] - tails[a]);
        }
    }
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for (cb, &ta) in coeffs.iter().zip(&tail_of) {
        let cb = cb.conj();
        for (ck, &tk) in coeffs.iter().zip(&tail_of) {
            let term = cb * *ck * psi[ta * (r + 1) + tk];
            re.add(term.re);
            im.add(term.im);
        }
    }
    // E = −i·Σ, so the real part of E is the imaginary part of Σ
    let e = im.value();
    let residue = -re.value();
    if residue.abs() > T::lit(1e-9) * (T::one() + e.abs()) {
        return Err(Error::numerical(format!("series imaginary residue {residue:e}")));
    }
    Ok(e)
}

/// Same value as [`expectation_series`] in O(r²) evaluations of φ and Ψ.
///
/// Branches sharing their last picked layer share the tail, so their
/// amplitudes are summed first by a recursion over that layer.
pub fn expectation_grouped<T: Real, D: CharacteristicPair<T> + ?Sized>(d: &D, angles: &AngleSchedule<T>) -> T {
    let r = angles.layers();
    let prefix = prefix_sums(&angles.gammas);
    let zero = Complex::new(T::zero(), T::zero());
    let mut group = vec![zero; r + 1];
    group[0] = Complex::new(T::one(), T::zero());
    for m in 1..=r {
        let mut acc = zero;
        for p in 0..m {
            acc += group[p] * d.phi(prefix[m] - prefix[p]);
        }
        group[m] = acc * expm1_i(angles.betas[m - 1]);
    }
    let tails: Vec<T> = (0..=r).map(|m| prefix[r] - prefix[m]).collect();
    let mut e = KahanSum::new();
    for a in 0..=r {
        for b in 0..=r {
            let term = group[a].conj() * group[b] * d.psi(tails[b] - tails[a]);
            e.add(term.im);
        }
    }
    e.value()
}
