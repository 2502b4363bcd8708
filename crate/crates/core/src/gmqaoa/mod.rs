//! Grover-mixer QAOA with an arbitrary phase function.
//!
//! The mixer `e^{iβ|s⟩⟨s|}` and any phase separator diagonal in the cost
//! commute with permutations inside a cost class, so the state is fully
//! described by one complex amplitude per distinct cost. [`simulate`] evolves
//! that collapsed state exactly in O(classes · layers).

mod optimize;
mod series;

pub use optimize::{optimize_angles, pad_start, AngleObjective, AngleOptimum, AngleSearch, SeriesObjective, SimulatorObjective};
pub use series::{expectation_grouped, expectation_series, CharacteristicPair, LayerPartition, PhasedSpectrum, MAX_SERIES_LAYERS};

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::dist::DiscreteSpectrum;
use crate::error::{Error, Result};
use crate::grover::AngleSchedule;
use crate::scalar::{KahanSum, Real};

/// How costs are compiled into the phase separator `e^{iγ q(x)}`.
#[derive(Clone)]
pub enum PhaseFunction<T> {
    /// `q(x) = x`: plain GM-QAOA.
    Identity,
    /// `q(x) = −1` for `x ≤ t`, else 0: the threshold variant.
    Threshold(T),
    /// One value per cost class, in ascending-cost order.
    PerClass(Vec<T>),
    /// Any deterministic map.
    Map(Arc<dyn Fn(T) -> T + Send + Sync>),
}

impl<T: Real> fmt::Debug for PhaseFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseFunction::Identity => write!(f, "Identity"),
            PhaseFunction::Threshold(t) => write!(f, "Threshold({t})"),
            PhaseFunction::PerClass(v) => write!(f, "PerClass({} values)", v.len()),
            PhaseFunction::Map(_) => write!(f, "Map(..)"),
        }
    }
}

impl<T: Real> PhaseFunction<T> {
    /// `q` evaluated on every class of `s`.
    pub fn values(&self, s: &DiscreteSpectrum<T>) -> Result<Vec<T>> {
        Ok(match self {
            PhaseFunction::Identity => s.values().to_vec(),
            PhaseFunction::Threshold(t) => s
                .values()
                .iter()
                .map(|x| if *x <= *t { -T::one() } else { T::zero() })
                .collect(),
            PhaseFunction::PerClass(v) => {
                if v.len() != s.len() {
                    return Err(Error::domain(format!(
                        "phase function has {} values for {} classes",
                        v.len(),
                        s.len()
                    )));
                }
                v.clone()
            }
            PhaseFunction::Map(f) => s.values().iter().map(|x| f(*x)).collect(),
        })
    }
}

/// One complex amplitude per distinct cost, plus the class weights `√f_i`.
#[derive(Clone, Debug)]
pub struct CollapsedState<T> {
    values: Vec<T>,
    weights: Vec<T>,
    amps: Vec<Complex<T>>,
}

/// `e^{iθ} − 1`, written to stay accurate for small θ.
pub(crate) fn expm1_i<T: Real>(theta: T) -> Complex<T> {
    let h = (theta * T::lit(0.5)).sin();
    Complex::new(-T::lit(2.0) * h * h, theta.sin())
}

impl<T: Real> CollapsedState<T> {
    /// The uniform superposition: `v_i = √f_i`.
    pub fn initial(s: &DiscreteSpectrum<T>) -> Self {
        let weights: Vec<T> = s.masses().iter().map(|m| m.sqrt()).collect();
        let amps = weights.iter().map(|w| Complex::new(*w, T::zero())).collect();
        Self { values: s.values().to_vec(), weights, amps }
    }

    /// `v_i ← e^{iγ q_i} v_i`.
    pub fn apply_phase(&mut self, gamma: T, q: &[T]) {
        for (v, qi) in self.amps.iter_mut().zip(q) {
            let (sn, cs) = (gamma * *qi).sin_cos();
            *v *= Complex::new(cs, sn);
        }
    }

    /// `v ← v + (e^{iβ} − 1)·⟨s|v⟩·√f`.
    pub fn apply_mixer(&mut self, beta: T) {
        let overlap = self.overlap();
        let k = expm1_i(beta) * overlap;
        for (v, w) in self.amps.iter_mut().zip(&self.weights) {
            *v += k.scale(*w);
        }
    }

    /// `⟨s|v⟩ = Σ √f_i v_i`.
    pub fn overlap(&self) -> Complex<T> {
        let mut re = KahanSum::new();
        let mut im = KahanSum::new();
        for (v, w) in self.amps.iter().zip(&self.weights) {
            re.add(v.re * *w);
            im.add(v.im * *w);
        }
        Complex::new(re.value(), im.value())
    }

    /// `Σ |v_i|²`; 1 for a valid state.
    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|v| v.norm_sqr()).collect::<KahanSum<T>>().value()
    }

    /// Probability of measuring a cost in class `i`.
    pub fn class_probability(&self, i: usize) -> T {
        self.amps[i].norm_sqr()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }
}

/// Runs the circuit on the collapsed state.
pub fn simulate<T: Real>(
    s: &DiscreteSpectrum<T>,
    q: &PhaseFunction<T>,
    angles: &AngleSchedule<T>,
) -> Result<CollapsedState<T>> {
    let qv = q.values(s)?;
    simulate_with_values(s, &qv, angles)
}

/// [`simulate`] with the phase values already evaluated per class.
pub fn simulate_with_values<T: Real>(
    s: &DiscreteSpectrum<T>,
    q: &[T],
    angles: &AngleSchedule<T>,
) -> Result<CollapsedState<T>> {
    if q.len() != s.len() {
        return Err(Error::domain("phase values and classes differ in length"));
    }
    if angles.betas.len() != angles.gammas.len() {
        return Err(Error::domain("β and γ schedules differ in length"));
    }
    let mut state = CollapsedState::initial(s);
    for (b, g) in angles.betas.iter().zip(&angles.gammas) {
        state.apply_phase(*g, q);
        state.apply_mixer(*b);
    }
    Ok(state)
}

/// `⟨ψ|H_C|ψ⟩ = Σ x_i |v_i|²`.
pub fn expectation_from_state<T: Real>(state: &CollapsedState<T>) -> T {
    state
        .values
        .iter()
        .zip(&state.amps)
        .map(|(x, v)| *x * v.norm_sqr())
        .collect::<KahanSum<T>>()
        .value()
}

/// `φ(γ) = Σ f(x) e^{iγx}`.
pub fn characteristic_function<T: Real>(s: &DiscreteSpectrum<T>, gamma: T) -> Complex<T> {
    PhasedSpectrum::identity(s).phi(gamma)
}

/// `Ψ(γ) = i Σ x f(x) e^{iγ q(x)}`.
pub fn psi_function<T: Real>(s: &DiscreteSpectrum<T>, q: &PhaseFunction<T>, gamma: T) -> Result<Complex<T>> {
    Ok(PhasedSpectrum::new(s, q.values(s)?)?.psi(gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{Distribution, TwoPoint};
    use crate::grover::grover_probability;
    use std::f64::consts::PI;

    #[test]
    fn zero_angles_leave_state_unchanged() {
        let s = DiscreteSpectrum::<f64>::new(vec![-1.0, 0.5, 2.0], vec![0.2, 0.5, 0.3]).unwrap();
        let st = simulate(&s, &PhaseFunction::Identity, &AngleSchedule::constant(3, 0.0)).unwrap();
        let init = CollapsedState::initial(&s);
        for (a, b) in st.amplitudes().iter().zip(init.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!((expectation_from_state(&init) - s.mean()).abs() < 1e-15);
    }

    #[test]
    fn all_pi_threshold_is_grover() {
        for &(rho, r) in &[(0.1, 1u64), (0.04, 3), (0.01, 7)] {
            let d = TwoPoint::<f64>::new(rho).unwrap();
            let s = d.spectrum().unwrap();
            let st = simulate(s, &PhaseFunction::Threshold(-1.0), &AngleSchedule::constant(r as usize, PI)).unwrap();
            assert!((st.class_probability(0) - grover_probability(rho, r)).abs() < 1e-12);
        }
    }

    #[test]
    fn saturated_two_point_expectation_is_minus_one() {
        let d = TwoPoint::<f64>::new(0.25).unwrap();
        let s = d.spectrum().unwrap();
        let st = simulate(s, &PhaseFunction::Threshold(-1.0), &AngleSchedule::constant(1, PI)).unwrap();
        assert!((expectation_from_state(&st) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn characteristic_examples() {
        let d = TwoPoint::<f64>::new(0.3).unwrap();
        let s = d.spectrum().unwrap();
        assert!((characteristic_function(s, 0.0) - Complex::new(1.0, 0.0)).norm() < 1e-15);
        let phi = characteristic_function(s, PI);
        assert!((phi - Complex::new(1.0 - 0.6, 0.0)).norm() < 1e-15);
        let psi0 = psi_function(s, &PhaseFunction::Identity, 0.0).unwrap();
        // μ = −iΨ(0)
        assert!(((Complex::new(0.0, -1.0) * psi0).re - s.mean()).abs() < 1e-15);
    }

    #[test]
    fn phase_length_mismatch_is_rejected() {
        let s = DiscreteSpectrum::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        let q = PhaseFunction::PerClass(vec![1.0]);
        assert!(simulate(&s, &q, &AngleSchedule::constant(1, 1.0)).is_err());
    }
}
