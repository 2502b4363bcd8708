//! One-dimensional root finding and minimization, plus a Nelder–Mead simplex.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Root of `f` on `[lo, hi]` by bisection; `f(lo)` and `f(hi)` must differ in sign.
///
/// Stops when the bracket is narrower than `tol` or after the bracket stops
/// shrinking at machine precision.
pub fn bisect<T: Real, F: Fn(T) -> T>(f: F, mut lo: T, mut hi: T, tol: T) -> Result<T> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if (flo > T::zero()) == (fhi > T::zero()) || flo.is_nan() || fhi.is_nan() {
        return Err(Error::numerical("bisection bracket does not straddle a root"));
    }
    let half = T::lit(0.5);
    for _ in 0..2000 {
        let mid = half * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Ok(mid);
        }
        if (fm > T::zero()) == (flo > T::zero()) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(half * (lo + hi))
}

/// Golden-section minimization of a unimodal `f` on `[lo, hi]`.
///
/// The search stops once the bracket width is at most `abs_tol + rel_tol·|x|`.
/// Both endpoints are evaluated as well, so a minimum on the boundary is
/// returned exactly. Returns `(argmin, min)`.
pub fn golden_section_min<T: Real, F: Fn(T) -> T>(
    f: F,
    lo: T,
    hi: T,
    abs_tol: T,
    rel_tol: T,
) -> (T, T) {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..500 {
        let scale = c.abs().max(d.abs());
        if b - a <= abs_tol + rel_tol * scale {
            break;
        }
        // ties move toward the left edge
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Settings for [`NelderMead::minimize`].
#[derive(Clone, Copy, Debug)]
pub struct NelderMead<T> {
    /// Edge length of the initial simplex along every coordinate.
    pub initial_step: T,
    pub max_evals: usize,
    /// Converged when the spread of simplex values is below `f_tol·(1+|f_best|)`.
    pub f_tol: T,
    /// ... and the simplex diameter is below `x_tol`.
    pub x_tol: T,
}

impl<T: Real> Default for NelderMead<T> {
    fn default() -> Self {
        Self {
            initial_step: T::lit(0.5),
            max_evals: 20_000,
            f_tol: T::lit(1e-13),
            x_tol: T::lit(1e-9),
        }
    }
}

/// Outcome of a local minimization.
#[derive(Clone, Debug)]
pub struct Minimum<T> {
    pub x: Vec<T>,
    pub value: T,
    pub evals: usize,
    pub converged: bool,
}

impl<T: Real> NelderMead<T> {
    /// Minimizes `f` starting from `x0`. Non-finite values are treated as +∞.
    pub fn minimize<F: FnMut(&[T]) -> T>(&self, mut f: F, x0: &[T]) -> Minimum<T> {
        let n = x0.len();
        let mut evals = 0usize;
        let mut eval = |x: &[T], evals: &mut usize| {
            *evals += 1;
            let v = f(x);
            if v.is_finite() {
                v
            } else {
                T::infinity()
            }
        };
        if n == 0 {
            let value = eval(x0, &mut evals);
            return Minimum { x: Vec::new(), value, evals, converged: true };
        }

        let (alpha, gamma, rho, sigma) = (T::one(), T::lit(2.0), T::lit(0.5), T::lit(0.5));
        let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(n + 1);
        let v0 = eval(x0, &mut evals);
        simplex.push((x0.to_vec(), v0));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += self.initial_step;
            let v = eval(&x, &mut evals);
            simplex.push((x, v));
        }

        let mut converged = false;
        while evals < self.max_evals {
            simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
            let best = simplex[0].1;
            let worst = simplex[n].1;
            let spread = worst - best;
            let diameter = simplex[1..]
                .iter()
                .map(|(x, _)| {
                    x.iter()
                        .zip(&simplex[0].0)
                        .map(|(a, b)| (*a - *b).abs())
                        .fold(T::zero(), T::max)
                })
                .fold(T::zero(), T::max);
            if spread <= self.f_tol * (T::one() + best.abs()) && diameter <= self.x_tol {
                converged = true;
                break;
            }

            let inv_n = T::one() / T::from_count(n as u64);
            let centroid: Vec<T> = (0..n)
                .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<T>() * inv_n)
                .collect();
            let along = |t: T| -> Vec<T> {
                centroid
                    .iter()
                    .zip(&simplex[n].0)
                    .map(|(c, w)| *c + t * (*c - *w))
                    .collect()
            };

            let xr = along(alpha);
            let fr = eval(&xr, &mut evals);
            if fr < simplex[0].1 {
                let xe = along(gamma);
                let fe = eval(&xe, &mut evals);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (xc, fcon) = if fr < simplex[n].1 {
                let xc = along(rho * alpha);
                let v = eval(&xc, &mut evals);
                (xc, v)
            } else {
                let xc = along(-rho);
                let v = eval(&xc, &mut evals);
                (xc, v)
            };
            if fcon < simplex[n].1.min(fr) {
                simplex[n] = (xc, fcon);
                continue;
            }
            // shrink toward the best vertex
            let x_best = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                for (xi, bi) in vertex.0.iter_mut().zip(&x_best) {
                    *xi = *bi + sigma * (*xi - *bi);
                }
                vertex.1 = eval(&vertex.0, &mut evals);
            }
        }
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let (x, value) = simplex.swap_remove(0);
        Minimum { x, value, evals, converged }
    }
}
