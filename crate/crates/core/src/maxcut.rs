//! Max-Cut solution spaces as cost laws.
//!
//! A cut is a minimization cost `X = −(cut size)`. For the complete bipartite
//! graph `K_{n,n}`, a bipartition taking `j` vertices of one side and `k` of
//! the other cuts `n² − jk − (n−j)(n−k)` edges, so in the mean-zero frame
//! `Y = X + n²/2` there are `C(n,j)·C(n,k)` solutions of cost
//! `½(n−2j)(n−2k)`.

use std::collections::BTreeMap;
use std::io::BufRead;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::bounds::{amplification_floor_with, grover_based_min_rounds_exact_ratio};
use crate::dist::{Distribution, EmpiricalLaw};
use crate::error::{Error, Result};
use crate::gmth::{min_rounds_exact_optimum, optimize_threshold};
use crate::scalar::Real;

/// Largest part size accepted by [`knn_spectrum`].
pub const MAX_PART_SIZE: u32 = 300;
/// Largest vertex count accepted by [`brute_force_spectrum`].
pub const MAX_BRUTE_FORCE_VERTICES: usize = 24;

/// Simple undirected graph with vertices `0..vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInstance {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphInstance {
    /// Rejects self-loops, repeated edges and out-of-range endpoints.
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &edges {
            if u >= vertices || v >= vertices {
                return Err(Error::domain(format!("edge ({u}, {v}) outside {vertices} vertices")));
            }
            if u == v {
                return Err(Error::domain(format!("self-loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::domain(format!("repeated edge ({u}, {v})")));
            }
        }
        Ok(Self { vertices, edges })
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
        Self { vertices: a + b, edges }
    }

    /// One `u v` pair per line, 0-indexed; `#` starts a comment line. The
    /// vertex count is one more than the largest index.
    pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Self> {
        let mut edges = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let bad = |message: String| Error::Parse { line: idx + 1, message };
            let mut it = text.split_whitespace();
            let mut next = || -> Result<usize> {
                it.next()
                    .ok_or_else(|| bad("expected `u v`".into()))?
                    .parse()
                    .map_err(|e| bad(format!("vertex: {e}")))
            };
            let (u, v) = (next()?, next()?);
            if it.next().is_some() {
                return Err(bad("expected exactly two vertices".into()));
            }
            edges.push((u, v));
        }
        let vertices = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::new(vertices, edges)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Which frame a Max-Cut spectrum is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostFrame {
    /// `X = −(cut size)`.
    Raw,
    /// `Y = X − μ`, mean zero.
    Centered,
}

/// Exact spectrum of `K_{n,n}` in the centered frame.
pub fn knn_spectrum<T: Real>(n: u32) -> Result<EmpiricalLaw<T>> {
    if n == 0 || n > MAX_PART_SIZE {
        return Err(Error::domain(format!("part size {n} outside 1..={MAX_PART_SIZE}")));
    }
    let binom = binomial_row(n);
    let n = i64::from(n);
    // keyed by twice the cost, which is an integer
    let mut tally: BTreeMap<i64, BigUint> = BTreeMap::new();
    for (j, cj) in binom.iter().enumerate() {
        for (k, ck) in binom.iter().enumerate() {
            let key = (n - 2 * j as i64) * (n - 2 * k as i64);
            *tally.entry(key).or_default() += cj * ck;
        }
    }
    EmpiricalLaw::new(tally.into_iter().map(|(k, m)| (T::lit(k as f64 * 0.5), m)).collect())
}

fn binomial_row(n: u32) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for k in 0..n {
        let next = row[k as usize].clone() * BigUint::from(n - k) / BigUint::from(k + 1);
        row.push(next);
    }
    row
}

/// `(μ, R_min)` of `K_{n,n}` in the raw frame: `(−n²/2, −n²)`.
pub fn knn_raw_frame<T: Real>(n: u32) -> (T, T) {
    let n2 = T::from_count(u64::from(n) * u64::from(n));
    (-n2 * T::lit(0.5), -n2)
}

/// Approximation ratio `E/R_min` of a centered-frame expectation on `K_{n,n}`.
pub fn knn_approximation_ratio<T: Real>(n: u32, e_centered: T) -> T {
    let (mu, r_min) = knn_raw_frame::<T>(n);
    (e_centered + mu) / r_min
}

/// Cut-size histogram of every bipartition (`2^|V|` of them), as a cost law.
pub fn brute_force_spectrum<T: Real>(g: &GraphInstance, frame: CostFrame) -> Result<EmpiricalLaw<T>> {
    let nv = g.vertices;
    if nv > MAX_BRUTE_FORCE_VERTICES {
        return Err(Error::domain(format!("{nv} vertices exceed the brute-force limit {MAX_BRUTE_FORCE_VERTICES}")));
    }
    let mut adj = vec![Vec::new(); nv];
    for &(u, v) in &g.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let ne = g.edges.len();
    let mut counts = vec![0u64; ne + 1];
    // Gray-code walk: each step flips one vertex and updates the cut locally
    let mut side = vec![false; nv];
    let mut cut = 0usize;
    counts[0] += 1;
    for step in 1u64..1u64 << nv {
        let v = step.trailing_zeros() as usize;
        for &u in &adj[v] {
            if side[u] == side[v] {
                cut += 1;
            } else {
                cut -= 1;
            }
        }
        side[v] = !side[v];
        counts[cut] += 1;
    }
    let shift = match frame {
        CostFrame::Raw => T::zero(),
        CostFrame::Centered => T::from_count(ne as u64) * T::lit(0.5),
    };
    let pairs = counts
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| **c > 0)
        .map(|(c, m)| (-T::from_count(c as u64) + shift, BigUint::from(*m)))
        .collect();
    EmpiricalLaw::new(pairs)
}

/// Which expectation the depth search targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// Floor from the `(2r+1)²` amplification cap: no Grover-based circuit
    /// reaches the ratio with fewer layers.
    MaxAmplification,
    /// Optimal threshold phase: the ratio is reached with this many layers.
    Gmth,
}

impl std::str::FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max_amplification" => Ok(BoundKind::MaxAmplification),
            "gmth" => Ok(BoundKind::Gmth),
            _ => Err(Error::domain(format!("unknown bound kind `{s}`"))),
        }
    }
}

/// Largest depth the search considers for [`BoundKind::MaxAmplification`].
const MAX_DEPTH_AMPLIFICATION: u128 = 1 << 120;
/// Largest depth the search considers for [`BoundKind::Gmth`].
const MAX_DEPTH_GMTH: u128 = 1 << 63;

/// Fewest layers at which the chosen expectation on `K_{n,n}` reaches
/// approximation ratio `λ`.
///
/// `λ = 1` uses the exact certainty conditions: `(2r+1)²·f(R_min) ≥ 1` for
/// the amplification bound and `f(R_min) ≥ ρ_Th(r)` for threshold phases.
/// Otherwise the depth is bracketed by doubling and then bisected; both
/// expectations are non-increasing in `r`.
pub fn min_rounds_for_ratio(n: u32, lambda: f64, kind: BoundKind) -> Result<u128> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::domain(format!("λ = {lambda} outside (0, 1]")));
    }
    let law = knn_spectrum::<f64>(n)?;
    let (mu, r_min) = knn_raw_frame::<f64>(n);
    if lambda == 1.0 {
        return match kind {
            BoundKind::MaxAmplification => {
                let r = grover_based_min_rounds_exact_ratio(&law.multiplicities()[0], law.total())?;
                r.to_u128().ok_or_else(|| Error::Unattainable("depth exceeds 2^128".into()))
            }
            BoundKind::Gmth => Ok(u128::from(min_rounds_exact_optimum(&law)?)),
        };
    }
    let target = lambda * r_min;
    let reaches = |r: u128| -> Result<bool> {
        let e = match kind {
            BoundKind::MaxAmplification => {
                let a = 2.0 * r as f64 + 1.0;
                amplification_floor_with(&law, a * a)?.2
            }
            BoundKind::Gmth => optimize_threshold(&law, r as u64)?.e_r,
        };
        Ok(e + mu <= target)
    };
    let limit = match kind {
        BoundKind::MaxAmplification => MAX_DEPTH_AMPLIFICATION,
        BoundKind::Gmth => MAX_DEPTH_GMTH,
    };
    let mut hi = 1u128;
    while !reaches(hi)? {
        if hi >= limit {
            return Err(Error::Unattainable(format!("λ = {lambda} not reached for r ≤ {limit}")));
        }
        hi *= 2;
    }
    let mut lo = hi / 2; // fails, or 0 when hi = 1
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Approximation ratio of the amplification floor on `K_{n,n}` at depth `r`.
pub fn knn_floor_ratio(law: &EmpiricalLaw<f64>, n: u32, r: u128) -> Result<f64> {
    let a = 2.0 * r as f64 + 1.0;
    let e = amplification_floor_with(law, a * a)?.2;
    Ok(knn_approximation_ratio(n, e))
}

/// Probability mass at the minimum cost, `f(R_min)`.
pub fn min_mass<T: Real>(law: &EmpiricalLaw<T>) -> T {
    law.spectrum().map(|s| s.mass(0)).unwrap_or_else(T::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::ceil_sqrt;

    fn pairs(law: &EmpiricalLaw<f64>) -> Vec<(f64, BigUint)> {
        let s = law.spectrum().unwrap();
        s.values().iter().copied().zip(law.multiplicities().iter().cloned()).collect()
    }

    #[test]
    fn k22_spectrum() {
        let law = knn_spectrum::<f64>(2).unwrap();
        let want: Vec<(f64, BigUint)> = vec![(-2.0, 2u32.into()), (0.0, 12u32.into()), (2.0, 2u32.into())];
        assert_eq!(pairs(&law), want);
        assert_eq!(*law.total(), BigUint::from(16u32));
    }

    #[test]
    fn knn_matches_brute_force() {
        for n in 1..=5u32 {
            let g = GraphInstance::complete_bipartite(n as usize, n as usize);
            let bf = brute_force_spectrum::<f64>(&g, CostFrame::Centered).unwrap();
            assert_eq!(pairs(&knn_spectrum(n).unwrap()), pairs(&bf), "n={n}");
        }
    }

    #[test]
    fn small_graphs() {
        let tri = GraphInstance::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let law = brute_force_spectrum::<f64>(&tri, CostFrame::Raw).unwrap();
        assert_eq!(pairs(&law), vec![(-2.0, 6u32.into()), (0.0, 2u32.into())]);
        let edge = GraphInstance::new(2, vec![(0, 1)]).unwrap();
        let law = brute_force_spectrum::<f64>(&edge, CostFrame::Raw).unwrap();
        assert_eq!(pairs(&law), vec![(-1.0, 2u32.into()), (0.0, 2u32.into())]);
    }

    #[test]
    fn minimum_mass_is_exact() {
        for n in [1u32, 2, 10, 50, 300] {
            let law = knn_spectrum::<f64>(n).unwrap();
            assert_eq!(law.multiplicities()[0], BigUint::from(2u32));
            assert_eq!(*law.total(), BigUint::one() << (2 * n as usize));
            assert_eq!(min_mass(&law), 2f64.powi(1 - 2 * n as i32));
            assert_eq!(law.spectrum().unwrap().value(0), -((n * n) as f64) / 2.0);
        }
    }

    #[test]
    fn symmetric_spectrum() {
        let law = knn_spectrum::<f64>(7).unwrap();
        let p = pairs(&law);
        for (a, b) in p.iter().zip(p.iter().rev()) {
            assert_eq!(a.0, -b.0);
            assert_eq!(a.1, b.1);
        }
    }

    #[test]
    fn exact_depth_for_full_ratio() {
        // (2r+1)² ≥ 2^{2n−1}
        for n in 2..=20u32 {
            let r = min_rounds_for_ratio(n, 1.0, BoundKind::MaxAmplification).unwrap();
            let want = ceil_sqrt(&(BigUint::one() << (2 * n as usize - 1))) / BigUint::from(2u32);
            assert_eq!(BigUint::from(r), want);
        }
        assert_eq!(min_rounds_for_ratio(2, 1.0, BoundKind::Gmth).unwrap(), 2);
        assert_eq!(min_rounds_for_ratio(2, 1.0, BoundKind::MaxAmplification).unwrap(), 1);
    }

    #[test]
    fn depth_is_monotone() {
        for kind in [BoundKind::MaxAmplification, BoundKind::Gmth] {
            let mut prev = 0;
            for lam in [0.52, 0.6, 0.8786, 16.0 / 17.0] {
                let r = min_rounds_for_ratio(8, lam, kind).unwrap();
                assert!(r >= prev);
                prev = r;
            }
        }
        let mut prev = 0;
        for n in 4..=30 {
            let r = min_rounds_for_ratio(n, 0.8786, BoundKind::MaxAmplification).unwrap();
            assert!(r >= prev, "n={n}");
            prev = r;
        }
    }

    #[test]
    fn bisection_finds_first_depth() {
        let law = knn_spectrum::<f64>(10).unwrap();
        let r = min_rounds_for_ratio(10, 0.8786, BoundKind::MaxAmplification).unwrap();
        assert!(knn_floor_ratio(&law, 10, r).unwrap() >= 0.8786);
        assert!(knn_floor_ratio(&law, 10, r - 1).unwrap() < 0.8786);
    }

    #[test]
    fn edge_list_parsing() {
        let g = GraphInstance::parse_edge_list("# square\n0 1\n1 2\n2 3\n3 0\n".as_bytes()).unwrap();
        assert_eq!(g.vertices(), 4);
        assert_eq!(g.edges().len(), 4);
        assert!(GraphInstance::parse_edge_list("0 0\n".as_bytes()).is_err());
        assert!(GraphInstance::parse_edge_list("0 1\n1 0\n".as_bytes()).is_err());
        match GraphInstance::parse_edge_list("0 1\nx 2\n".as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn limits() {
        assert!(knn_spectrum::<f64>(0).is_err());
        assert!(knn_spectrum::<f64>(301).is_err());
        let g = GraphInstance::complete_bipartite(13, 12);
        assert!(brute_force_spectrum::<f64>(&g, CostFrame::Raw).is_err());
        assert!(min_rounds_for_ratio(4, 1.5, BoundKind::Gmth).is_err());
    }
}
