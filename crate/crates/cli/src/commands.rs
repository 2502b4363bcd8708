//! One function per subcommand, each producing a [`Table`].

use std::fs::File;
use std::io::BufReader;

use clap::ValueEnum;
use grover_qaoa::baselines::{blom_min, crs_expected_min, crs_monte_carlo, CrsMethod, CrsResult};
use grover_qaoa::bounds::{amplification_floor, amplification_floor_with, c_th, kappa, max_amplification_floor, score_cap};
use grover_qaoa::dist::{discretize, Distribution, Kind, Normal};
use grover_qaoa::gmqaoa::{optimize_angles, AngleSearch, PhaseFunction, SeriesObjective, SimulatorObjective};
use grover_qaoa::gmth::{optimize_threshold, threshold_curve, threshold_report, GridSpec, ThresholdReport};
use grover_qaoa::grover::{amplification_ratio, grover_probability, threshold_ratio};
use grover_qaoa::maxcut::{
    brute_force_spectrum, knn_approximation_ratio, knn_spectrum, min_rounds_for_ratio, BoundKind, CostFrame, GraphInstance,
};
use grover_qaoa::optim::NelderMead;
use grover_qaoa::EmpiricalLaw64;
use rayon::prelude::*;

use crate::config::{parse_float_grid, DistSpec, Settings};
use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::row;

type Res<T> = Result<T, CliError>;

pub const THRESHOLD_COLUMNS: &[&str] = &["r", "t", "big_t", "rho", "p", "e_r", "c_r", "quantile", "lambda", "eta"];

pub fn threshold_row(x: &ThresholdReport<f64>) -> Vec<Cell> {
    row![x.r, x.t, x.big_t, x.rho, x.p, x.e_r, x.c_r, x.quantile, x.lambda, x.eta]
}

/// Maps `f` over `items` in parallel, keeping input order in the output.
pub fn par_rows<I: Sync, F>(items: &[I], f: F) -> Res<Vec<Vec<Cell>>>
where
    F: Fn(&I) -> Res<Vec<Cell>> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

fn u32_n(n: u64) -> Res<u32> {
    u32::try_from(n).map_err(|_| CliError::Config(format!("n = {n} too large")))
}

pub fn pr(s: &Settings) -> Res<Table> {
    let rs = s.rs("1,2,3")?;
    let rhos = parse_float_grid(s.rho.as_deref().unwrap_or("lin:0:1:101"), "rho")?;
    if let Some(bad) = rhos.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(CliError::Config(format!("rho = {bad} outside [0, 1]")));
    }
    let mut t = Table::new(&["r", "rho", "rho_th", "p", "eta"]);
    for &r in &rs {
        for &rho in &rhos {
            let eta = if rho > 0.0 { Some(amplification_ratio(rho, r)?) } else { None };
            t.push(row![r, rho, threshold_ratio::<f64>(r), grover_probability(rho, r), eta]);
        }
    }
    Ok(t)
}

pub fn threshold(s: &Settings) -> Res<Table> {
    let d = s.dist()?;
    let rs = s.rs("1")?;
    let mut t = Table::new(THRESHOLD_COLUMNS);
    t.extend(par_rows(&rs, |&r| {
        let rep = match s.t {
            Some(th) => threshold_report(d.law.as_ref(), r, th),
            None => optimize_threshold(d.law.as_ref(), r)?,
        };
        Ok(threshold_row(&rep))
    })?);
    Ok(t)
}

fn grid_spec(s: &Settings, d: &dyn Distribution<f64>) -> Res<GridSpec<f64>> {
    let default = match d.kind() {
        Kind::Discrete => "support",
        Kind::Continuous => "levels:1e-12:0.5:200",
    };
    let spec = s.grid.as_deref().unwrap_or(default).trim();
    if spec == "support" {
        return Ok(GridSpec::Support);
    }
    if let Some(rest) = spec.strip_prefix("levels:") {
        let f: Vec<&str> = rest.split(':').collect();
        let bad = || CliError::Config(format!("grid: malformed `{spec}`"));
        if f.len() != 3 {
            return Err(bad());
        }
        let lo = f[0].parse().map_err(|_| bad())?;
        let hi = f[1].parse().map_err(|_| bad())?;
        let n = f[2].parse().map_err(|_| bad())?;
        return Ok(GridSpec::LogLevels { lo, hi, n });
    }
    Ok(GridSpec::Levels(parse_float_grid(spec, "grid")?))
}

pub fn curve(s: &Settings) -> Res<Table> {
    let d = s.dist()?;
    let rs = s.rs("1")?;
    let grid = grid_spec(s, d.law.as_ref())?;
    let curves: Vec<_> = rs
        .par_iter()
        .map(|&r| threshold_curve(d.law.as_ref(), r, &grid))
        .collect::<Result<_, _>>()?;
    let mut t = Table::new(THRESHOLD_COLUMNS);
    for c in &curves {
        t.extend(c.points.iter().map(threshold_row));
    }
    Ok(t)
}

/// CRS method named in the settings; Blom for normals, else the exact integral.
pub fn crs_method(s: &Settings, d: &DistSpec) -> Res<CrsMethod> {
    let default = if d.normal.is_some() { "blom" } else { "integral" };
    match s.method.as_deref().unwrap_or(default) {
        "blom" if d.normal.is_some() => Ok(CrsMethod::Blom),
        "blom" => Err(CliError::Config("the Blom approximation needs a normal law".into())),
        "integral" => Ok(CrsMethod::Integral),
        "monte_carlo" => Ok(CrsMethod::MonteCarlo),
        m => Err(CliError::Config(format!("unknown CRS method `{m}`"))),
    }
}

pub fn crs_run(s: &Settings, d: &DistSpec, method: CrsMethod, k: u64) -> Res<CrsResult<f64>> {
    Ok(match method {
        CrsMethod::Blom => {
            let (u, sd) = d.normal.expect("checked by crs_method");
            CrsResult { samples: k, expected_min: blom_min(u, sd, k)?, stderr: None, method }
        }
        CrsMethod::Integral => {
            CrsResult { samples: k, expected_min: crs_expected_min(d.law.as_ref(), k)?, stderr: None, method }
        }
        CrsMethod::MonteCarlo => crs_monte_carlo(d.law.as_ref(), k, s.trials.unwrap_or(10_000), s.seed())?,
    })
}

pub fn sweep(s: &Settings) -> Res<Table> {
    let d = s.dist()?;
    let rs = s.rs("1..50")?;
    let kf = s.effort_factor()?;
    let method = crs_method(s, &d)?;
    let law = d.law.as_ref();
    let (mu, sd) = (law.mean(), law.std_dev());
    let mut t = Table::new(&[
        "r", "t_opt", "rho", "p", "e_r", "c_r", "quantile", "cth", "e_floor", "floor_quantile", "crs_k", "crs_e",
        "crs_c", "crs_quantile",
    ]);
    t.extend(par_rows(&rs, |&r| {
        let g = optimize_threshold(law, r)?;
        let (_, cth) = c_th::<f64>(r);
        let (_, _, floor) = amplification_floor(law, r)?;
        let k = r.checked_mul(kf).ok_or_else(|| CliError::Config("CRS effort overflows".into()))?;
        let c = crs_run(s, &d, method, k)?;
        Ok(row![
            r,
            g.t,
            g.rho,
            g.p,
            g.e_r,
            g.c_r,
            g.quantile,
            cth,
            floor,
            law.cdf(floor),
            k,
            c.expected_min,
            (mu - c.expected_min) / sd,
            law.cdf(c.expected_min)
        ])
    })?);
    Ok(t)
}

pub fn cthr(s: &Settings) -> Res<Table> {
    let rs = s.rs("1..50")?;
    let (_, k) = kappa::<f64>();
    let mut t = Table::new(&["r", "rho_star", "cth", "cth_over_r", "kappa_r", "cap"]);
    t.extend(par_rows(&rs, |&r| {
        let (rho, c) = c_th::<f64>(r);
        Ok(row![r, rho, c, c / r as f64, k * r as f64, score_cap::<f64>(r)])
    })?);
    Ok(t)
}

pub fn kappa_table() -> Table {
    let (x1, k) = kappa::<f64>();
    let mut t = Table::new(&["x1", "kappa"]);
    t.push(row![x1, k]);
    t
}

pub const GMQAOA_COLUMNS: &[&str] = &[
    "r", "e_r", "c_r", "quantile", "gmth_e_r", "gmth_c_r", "evaluations", "converged", "start_index", "betas", "gammas",
];

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ")
}

/// Optimizes GM-QAOA angles at each depth in `rs` (ascending) on the
/// discretized law, warm-starting each depth from the previous optimum.
///
/// Normal laws search first on the closed-form characteristic function and
/// then polish on the discretized spectrum; other laws search the spectrum
/// directly.
pub fn gmqaoa_rows(s: &Settings, d: &DistSpec, rs: &[u64]) -> Res<Vec<Vec<Cell>>> {
    let spec = discretize(d.law.as_ref(), s.bins()?)?;
    let (mu, sd) = (spec.mean(), spec.std_dev());
    let base = NelderMead::<f64>::default();
    let local = NelderMead { max_evals: s.max_evals.unwrap_or(8000), f_tol: s.f_tol.unwrap_or(base.f_tol), ..base };
    let sim = SimulatorObjective::new(&spec, &PhaseFunction::Identity)?;
    let normal = match d.normal {
        Some((u, sdev)) => Some((Normal::new(u, sdev)?, sdev)),
        None => None,
    };
    let mut warm: Vec<f64> = Vec::new();
    let mut rows = Vec::with_capacity(rs.len());
    for &r in rs {
        let depth = usize::try_from(r).map_err(|_| CliError::Config("r too large".into()))?;
        let extra = if warm.is_empty() { vec![] } else { vec![warm.clone()] };
        let search = AngleSearch {
            restarts: s.restarts.unwrap_or(20),
            seed: s.seed(),
            extra_starts: extra,
            local,
            ..Default::default()
        };
        let best = match &normal {
            Some((n, sdev)) => {
                let series = SeriesObjective::new(n, 1.0 / sdev);
                let coarse = optimize_angles(&series, depth, &search);
                warm = coarse.search_point.clone();
                let polish = AngleSearch {
                    restarts: 0,
                    extra_starts: vec![coarse.search_point],
                    local: NelderMead { max_evals: 3000, ..local },
                    ..Default::default()
                };
                let sim = SimulatorObjective::new(&spec, &PhaseFunction::Identity)?.with_gamma_scale(1.0 / sdev);
                let mut b = optimize_angles(&sim, depth, &polish);
                b.evaluations += coarse.evaluations;
                b
            }
            None => {
                let b = optimize_angles(&sim, depth, &search);
                warm = b.search_point.clone();
                b
            }
        };
        let th = optimize_threshold(&spec, r)?;
        rows.push(row![
            r,
            best.value,
            (mu - best.value) / sd,
            spec.cdf(best.value),
            th.e_r,
            th.c_r,
            best.evaluations,
            best.converged,
            best.start_index,
            join(&best.angles.betas),
            join(&best.angles.gammas)
        ]);
    }
    Ok(rows)
}

pub fn gmqaoa(s: &Settings) -> Res<Table> {
    let d = s.dist()?;
    let rs = s.rs("1..4")?;
    let mut t = Table::new(GMQAOA_COLUMNS);
    t.extend(gmqaoa_rows(s, &d, &rs)?);
    Ok(t)
}

pub fn bound(s: &Settings) -> Res<Table> {
    let d = s.dist()?;
    let rs = s.rs("1")?;
    let mut t = Table::new(&[
        "r",
        "tau1",
        "tau2",
        "e_floor",
        "c_cap",
        "quantile_floor",
        "quantile_gmth",
        "min_rounds_any",
        "min_rounds_threshold",
    ]);
    t.extend(par_rows(&rs, |&r| {
        let b = max_amplification_floor(d.law.as_ref(), r)?;
        Ok(row![
            r,
            b.tau1,
            b.tau2,
            b.e_floor,
            b.c_cap,
            b.quantile_bounds.0,
            b.quantile_bounds.1,
            b.min_rounds_any,
            b.min_rounds_threshold
        ])
    })?);
    Ok(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MaxcutMode {
    /// Cut-value histogram of `K_{n,n}` or of `--graph`.
    Spectrum,
    /// Fewest layers reaching each approximation ratio.
    Rounds,
    /// Approximation ratio of the bound at each depth.
    Ratio,
}

pub fn spectrum_table(law: &EmpiricalLaw64, edges: u64) -> Table {
    let s = law.spectrum().expect("empirical laws are discrete");
    let half = edges as f64 / 2.0;
    let mut t = Table::new(&["value", "cut", "multiplicity", "pmf", "cdf"]);
    for (i, m) in law.multiplicities().iter().enumerate() {
        t.push(row![s.value(i), half - s.value(i), m.to_string(), s.mass(i), s.cdf_at(i)]);
    }
    t
}

fn single_n(s: &Settings, default: Option<&str>) -> Res<u32> {
    match s.ns(default)?.as_slice() {
        [n] => u32_n(*n),
        _ => Err(CliError::Config("this mode takes a single --n".into())),
    }
}

pub fn ratio_rows(law: &EmpiricalLaw64, n: u32, rs: &[u64], kind: BoundKind) -> Res<Vec<Vec<Cell>>> {
    par_rows(rs, |&r| {
        let e = match kind {
            BoundKind::MaxAmplification => {
                let a = 2.0 * r as f64 + 1.0;
                amplification_floor_with(law, a * a)?.2
            }
            BoundKind::Gmth => optimize_threshold(law, r)?.e_r,
        };
        Ok(row![r, e, knn_approximation_ratio(n, e)])
    })
}

pub fn bound_kind_name(k: BoundKind) -> &'static str {
    match k {
        BoundKind::MaxAmplification => "max_amplification",
        BoundKind::Gmth => "gmth",
    }
}

pub fn rounds_rows(ns: &[u64], lambdas: &[f64], kind: BoundKind) -> Res<Vec<Vec<Cell>>> {
    let jobs: Vec<(u64, f64)> = ns.iter().flat_map(|&n| lambdas.iter().map(move |&l| (n, l))).collect();
    par_rows(&jobs, |&(n, l)| {
        let m = min_rounds_for_ratio(u32_n(n)?, l, kind)?;
        Ok(row![n, l, bound_kind_name(kind), m])
    })
}

pub fn maxcut(s: &Settings, mode: MaxcutMode) -> Res<Table> {
    match mode {
        MaxcutMode::Spectrum => {
            if let Some(path) = &s.graph {
                let f = File::open(path).map_err(|e| CliError::Config(format!("cannot open {}: {e}", path.display())))?;
                let g = GraphInstance::parse_edge_list(BufReader::new(f))?;
                let law = brute_force_spectrum::<f64>(&g, CostFrame::Centered)?;
                return Ok(spectrum_table(&law, g.edges().len() as u64));
            }
            let n = single_n(s, None)?;
            Ok(spectrum_table(&knn_spectrum(n)?, u64::from(n) * u64::from(n)))
        }
        MaxcutMode::Rounds => {
            let ns = s.ns(Some("4..20"))?;
            let lambdas = parse_float_grid(s.lambda.as_deref().unwrap_or("1"), "lambda")?;
            let mut t = Table::new(&["n", "lambda", "bound_kind", "min_rounds"]);
            t.extend(rounds_rows(&ns, &lambdas, s.bound_kind()?)?);
            Ok(t)
        }
        MaxcutMode::Ratio => {
            let n = single_n(s, Some("50"))?;
            let rs = s.rs("pow2:5000")?;
            let law = knn_spectrum::<f64>(n)?;
            let mut t = Table::new(&["r", "e_r", "ratio"]);
            t.extend(ratio_rows(&law, n, &rs, s.bound_kind()?)?);
            Ok(t)
        }
    }
}

pub fn crs(s: &Settings) -> Res<Table> {
    let d = s.dist()?;
    let rs = s.rs("1")?;
    let kf = s.effort_factor()?;
    let method = crs_method(s, &d)?;
    let law = d.law.as_ref();
    let (mu, sd) = (law.mean(), law.std_dev());
    let mut t = Table::new(&["r", "k", "method", "expected_min", "stderr", "c", "quantile"]);
    t.extend(par_rows(&rs, |&r| {
        let k = r.checked_mul(kf).ok_or_else(|| CliError::Config("CRS effort overflows".into()))?;
        let c = crs_run(s, &d, method, k)?;
        Ok(row![
            r,
            k,
            c.method.name(),
            c.expected_min,
            c.stderr,
            (mu - c.expected_min) / sd,
            law.cdf(c.expected_min)
        ])
    })?);
    Ok(t)
}
