//! Multi-start Nelder–Mead search over the `2r` angles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::{DiscreteSpectrum, Distribution};
use crate::error::Result;
use crate::grover::AngleSchedule;
use crate::optim::NelderMead;
use crate::scalar::Real;

use super::series::{expectation_grouped, CharacteristicPair};
use super::{expectation_from_state, simulate_with_values, PhaseFunction};

/// Expectation value as a function of the angle schedule.
pub trait AngleObjective<T: Real>: Sync {
    fn evaluate(&self, angles: &AngleSchedule<T>) -> T;
    /// Value at the initial state; the optimizer never reports worse.
    fn mean(&self) -> T;
    /// Factor applied to the searched γ coordinates. `1/σ` makes the search
    /// invariant under affine changes of the cost.
    fn gamma_scale(&self) -> T;
}

/// Collapsed-state simulation on a discrete spectrum.
pub struct SimulatorObjective<'a, T> {
    spectrum: &'a DiscreteSpectrum<T>,
    q: Vec<T>,
    gamma_scale: T,
}

impl<'a, T: Real> SimulatorObjective<'a, T> {
    /// γ is searched in units of `1/σ` for the identity phase and unscaled
    /// otherwise, so the all-π start is the Grover point for threshold phases.
    pub fn new(spectrum: &'a DiscreteSpectrum<T>, q: &PhaseFunction<T>) -> Result<Self> {
        let gamma_scale = match q {
            PhaseFunction::Identity => spectrum.std_dev().recip(),
            _ => T::one(),
        };
        Ok(Self { spectrum, q: q.values(spectrum)?, gamma_scale })
    }

    pub fn with_gamma_scale(mut self, scale: T) -> Self {
        self.gamma_scale = scale;
        self
    }
}

impl<T: Real> AngleObjective<T> for SimulatorObjective<'_, T> {
    fn evaluate(&self, angles: &AngleSchedule<T>) -> T {
        match simulate_with_values(self.spectrum, &self.q, angles) {
            Ok(st) => expectation_from_state(&st),
            Err(_) => T::infinity(),
        }
    }

    fn mean(&self) -> T {
        Distribution::mean(self.spectrum)
    }

    fn gamma_scale(&self) -> T {
        self.gamma_scale
    }
}

/// Series evaluation through φ and Ψ; cheap for laws with closed forms.
pub struct SeriesObjective<'a, T, D: ?Sized> {
    law: &'a D,
    gamma_scale: T,
}

impl<'a, T: Real, D: CharacteristicPair<T> + ?Sized> SeriesObjective<'a, T, D> {
    pub fn new(law: &'a D, gamma_scale: T) -> Self {
        Self { law, gamma_scale }
    }
}

impl<T: Real, D: CharacteristicPair<T> + ?Sized> AngleObjective<T> for SeriesObjective<'_, T, D> {
    fn evaluate(&self, angles: &AngleSchedule<T>) -> T {
        expectation_grouped(self.law, angles)
    }

    fn mean(&self) -> T {
        self.law.mean_cost()
    }

    fn gamma_scale(&self) -> T {
        self.gamma_scale
    }
}

/// Search settings.
#[derive(Clone, Debug)]
pub struct AngleSearch<T> {
    /// Uniform random starts in `[0, 2π)^{2r}`, in addition to the all-π start.
    pub restarts: usize,
    pub seed: u64,
    /// Extra starts as flat `[β_1, γ_1, …]` in search units (γ before scaling).
    pub extra_starts: Vec<Vec<T>>,
    pub local: NelderMead<T>,
    /// Times a finished local search is restarted from its best point with a
    /// fresh simplex; a collapsed simplex often stalls short of the minimum.
    pub reseeds: usize,
}

impl<T: Real> Default for AngleSearch<T> {
    fn default() -> Self {
        Self {
            restarts: 20,
            seed: 0,
            extra_starts: Vec::new(),
            local: NelderMead { max_evals: 8000, ..NelderMead::default() },
            reseeds: 3,
        }
    }
}

/// Best schedule found.
#[derive(Clone, Debug)]
pub struct AngleOptimum<T> {
    /// Physical angles (γ already scaled).
    pub angles: AngleSchedule<T>,
    /// The same point in search units, usable as a warm start.
    pub search_point: Vec<T>,
    pub value: T,
    /// Index of the winning start: 0 is all-π, then the extra starts, then
    /// the random ones.
    pub start_index: usize,
    /// Whether the winning local search met its tolerances.
    pub converged: bool,
    pub evaluations: usize,
}

fn to_schedule<T: Real>(x: &[T], gamma_scale: T) -> AngleSchedule<T> {
    AngleSchedule {
        betas: x.iter().step_by(2).copied().collect(),
        gammas: x.iter().skip(1).step_by(2).map(|g| *g * gamma_scale).collect(),
    }
}

/// Pads a search point from fewer layers with zero layers, which leave the
/// state unchanged.
pub fn pad_start<T: Real>(x: &[T], r: usize) -> Vec<T> {
    let mut v = x.to_vec();
    v.resize(2 * r, T::zero());
    v
}

/// Minimizes the objective over `r` layers.
///
/// Starts run independently (in parallel) and the smallest value wins, with
/// ties going to the lower start index. If nothing beats the initial state
/// the zero schedule is returned with value `μ`.
pub fn optimize_angles<T: Real, O: AngleObjective<T> + ?Sized>(
    obj: &O,
    r: usize,
    search: &AngleSearch<T>,
) -> AngleOptimum<T> {
    assert!(r >= 1, "at least one layer");
    let dim = 2 * r;
    let scale = obj.gamma_scale();
    let mut starts = vec![vec![T::PI(); dim]];
    starts.extend(search.extra_starts.iter().map(|x| pad_start(x, r)));
    let tau = T::lit(std::f64::consts::TAU);
    starts.extend((0..search.restarts).map(|i| {
        let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
        rng.set_stream(i as u64);
        (0..dim).map(|_| T::lit(rng.random::<f64>()) * tau).collect()
    }));
    let runs: Vec<_> = starts
        .par_iter()
        .enumerate()
        .map(|(i, x0)| {
            let f = |x: &[T]| obj.evaluate(&to_schedule(x, scale));
            let mut m = search.local.minimize(f, x0);
            for _ in 0..search.reseeds {
                let next = search.local.minimize(f, &m.x);
                let evals = m.evals + next.evals;
                let gain = m.value - next.value;
                if next.value < m.value {
                    m = next;
                }
                m.evals = evals;
                if !(gain > search.local.f_tol * (T::one() + m.value.abs())) {
                    break;
                }
            }
            (i, m)
        })
        .collect();
    let evaluations = runs.iter().map(|(_, m)| m.evals).sum();
    let (idx, best) = runs
        .into_iter()
        .reduce(|a, b| if b.1.value < a.1.value { b } else { a })
        .expect("at least the all-π start");
    let mu = obj.mean();
    if !(best.value < mu) {
        let zero = vec![T::zero(); dim];
        return AngleOptimum {
            angles: to_schedule(&zero, scale),
            search_point: zero,
            value: mu,
            start_index: idx,
            converged: best.converged,
            evaluations,
        };
    }
    AngleOptimum {
        angles: to_schedule(&best.x, scale),
        search_point: best.x,
        value: best.value,
        start_index: idx,
        converged: best.converged,
        evaluations,
    }
}
