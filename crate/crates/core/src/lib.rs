//! Analytics for QAOA with the Grover mixer.
//!
//! Because the Grover mixer is invariant under permutations of the
//! computational basis, every quantity of interest depends only on the
//! distribution of costs of a uniformly random solution. This crate works
//! directly with that distribution:
//!
//! * [`dist`]: laws over costs with cdf, partial expectation and quantiles.
//! * [`grover`]: the Grover kernel `P(ρ, r)` and the angles attaining it.
//! * [`gmth`]: closed-form expectation of the threshold variant and its optimal threshold.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which is what the experiments use.

// `!(x > 0)` is the idiom used throughout to reject NaN along with the bad range
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod bounds;
pub mod dist;
pub mod error;
pub mod fit;
pub mod gmth;
pub mod gmqaoa;
pub mod grover;
pub mod maxcut;
pub mod optim;
pub mod quadrature;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Spectrum64 = dist::DiscreteSpectrum<f64>;
pub type Normal64 = dist::Normal<f64>;
pub type ReflectedGamma64 = dist::ReflectedGamma<f64>;
pub type ReflectedPareto64 = dist::ReflectedPareto<f64>;
pub type Binomial64 = dist::Binomial<f64>;
pub type TwoPoint64 = dist::TwoPoint<f64>;
pub type EmpiricalLaw64 = dist::EmpiricalLaw<f64>;
pub type AngleSchedule64 = grover::AngleSchedule<f64>;
pub type ThresholdReport64 = gmth::ThresholdReport<f64>;
