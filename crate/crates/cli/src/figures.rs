//! `reproduce` targets. Each writes the series behind one figure.

use clap::ValueEnum;
use grover_qaoa::baselines::blom_min;
use grover_qaoa::bounds::{amplification_floor_with, c_th};
use grover_qaoa::dist::{pareto_epsilon_for_exponent, Binomial, Distribution, Normal, ReflectedGamma, ReflectedPareto};
use grover_qaoa::fit::power_law_fit;
use grover_qaoa::gmth::{optimize_over_layers, threshold_curve, GridSpec};
use grover_qaoa::maxcut::{knn_approximation_ratio, knn_spectrum, min_rounds_for_ratio, BoundKind};

use crate::commands::{bound_kind_name, gmqaoa_rows, par_rows, spectrum_table, GMQAOA_COLUMNS};
use crate::config::{parse_int_grid, DistSpec, Settings};
use crate::error::CliError;
use crate::output::Table;
use crate::row;

type Res<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// C^Th(r) and its slope for r = 1..50.
    Fig1,
    /// Normal law: GM-Th and CRS score and quantile up to 10⁶ layers.
    Fig2,
    /// Normal law: optimized GM-QAOA against GM-Th for r = 1..8.
    Fig3,
    /// Gamma quantiles and Pareto scores up to 10⁵ layers, with power-law fits.
    Fig4,
    /// Binomial(200, 1/2) against the matching normal, r = 1..100.
    Fig5,
    /// Binomial(200, 1/2): optimal threshold and its probability, r = 1..100.
    Fig6,
    /// Threshold curves C_r(t) against F(t), r = 10⁰..10⁶.
    Fig7,
    /// K_{50,50} cut-value pmf and cdf.
    Fig8,
    /// K_{n,n} amplification-bound ratio and minimum depths.
    Fig9,
}

/// Gamma shape parameters `a = k/2` (with `b = 1/2`).
pub const GAMMA_K: [f64; 5] = [100.0, 10.0, 1.0, 0.1, 0.01];
/// Pareto tail exponents `j`; the fitted exponents read 0.99, 0.9, 0.77, 0.50, 0.31, 0.16.
pub const PARETO_J: [f64; 6] = [0.99, 0.9, 0.77, 0.5, 0.3, 0.1];

pub fn reproduce(s: &Settings, fig: Figure) -> Res<Table> {
    match fig {
        Figure::Fig1 => fig1(),
        Figure::Fig2 => fig2(s),
        Figure::Fig3 => fig3(s),
        Figure::Fig4 => fig4(),
        Figure::Fig5 => fig5(),
        Figure::Fig6 => fig6(),
        Figure::Fig7 => fig7(),
        Figure::Fig8 => Ok(spectrum_table(&knn_spectrum(50)?, 2500)),
        Figure::Fig9 => fig9(s),
    }
}

fn fig1() -> Res<Table> {
    let rs: Vec<u64> = (1..=50).collect();
    let mut t = Table::new(&["r", "cth", "cth_over_r"]);
    t.extend(par_rows(&rs, |&r| {
        let (_, c) = c_th::<f64>(r);
        Ok(row![r, c, c / r as f64])
    })?);
    Ok(t)
}

/// `⌈2^{x/100}⌉` up to `max`, deduplicated.
fn pow2_grid(max: u64) -> Res<Vec<u64>> {
    let xmax = (100.0 * (max as f64).log2()).ceil() as u64;
    let mut rs = parse_int_grid(&format!("pow2:{xmax}"), "r", 1)?;
    rs.retain(|r| *r <= max);
    Ok(rs)
}

fn fig2(s: &Settings) -> Res<Table> {
    let n = Normal::<f64>::standard();
    let rs = pow2_grid(1_000_000)?;
    let kf = s.effort_factor()?;
    let reps = optimize_over_layers(&n, &rs)?;
    let mut t = Table::new(&[
        "r", "gmth_t", "gmth_rho", "gmth_p", "gmth_e", "gmth_c", "gmth_quantile", "crs_k", "crs_e", "crs_c",
        "crs_quantile",
    ]);
    for g in &reps {
        let k = g.r * kf;
        let e = blom_min(0.0, 1.0, k)?;
        t.push(row![g.r, g.t, g.rho, g.p, g.e_r, g.c_r, g.quantile, k, e, -e, n.cdf(e)]);
    }
    Ok(t)
}

fn fig3(s: &Settings) -> Res<Table> {
    let d = DistSpec::parse("normal:0,1")?;
    let rs: Vec<u64> = (1..=8).collect();
    let mut t = Table::new(GMQAOA_COLUMNS);
    t.extend(gmqaoa_rows(s, &d, &rs)?);
    Ok(t)
}

fn fig4() -> Res<Table> {
    let mut t = Table::new(&["panel", "param", "r", "quantile", "c_r", "c_normalized", "exponent"]);
    // ⌈10^{x/20}⌉ up to 10⁵
    let mut grid: Vec<u64> = (0..=100).map(|x| 10f64.powf(f64::from(x) / 20.0).ceil() as u64).collect();
    grid.dedup();
    for k in GAMMA_K {
        let d = ReflectedGamma::new(k / 2.0, 0.5)?;
        for g in optimize_over_layers(&d, &grid)? {
            t.push(row!["a", k, g.r, g.quantile, g.c_r, None::<f64>, None::<f64>]);
        }
    }
    let all: Vec<u64> = (1..=100_000).collect();
    let xs: Vec<f64> = all.iter().map(|r| *r as f64).collect();
    for j in PARETO_J {
        let d = ReflectedPareto::new(pareto_epsilon_for_exponent(j)?, 1.0)?;
        let reps = optimize_over_layers(&d, &all)?;
        let c_max = reps[reps.len() - 1].c_r;
        for &r in &grid {
            let g = &reps[r as usize - 1];
            t.push(row!["b", j, r, g.quantile, g.c_r, g.c_r / c_max, None::<f64>]);
        }
        let cs: Vec<f64> = reps.iter().map(|g| g.c_r).collect();
        for x in 1..=5u32 {
            let m = 10usize.pow(x);
            let f = power_law_fit(&xs[..m], &cs[..m], 0.0, 2.0)?;
            t.push(row!["fit", j, m as u64, None::<f64>, None::<f64>, None::<f64>, f.exponent]);
        }
    }
    Ok(t)
}

fn fig5() -> Res<Table> {
    let b = Binomial::<f64>::new(200, 0.5)?;
    let n = Normal::new(100.0, 50f64.sqrt())?;
    let rs: Vec<u64> = (1..=100).collect();
    let (bs, ns) = (optimize_over_layers(&b, &rs)?, optimize_over_layers(&n, &rs)?);
    let mut t = Table::new(&["r", "binomial_t", "binomial_c", "binomial_quantile", "normal_c", "normal_quantile"]);
    for (x, y) in bs.iter().zip(&ns) {
        t.push(row![x.r, x.t, x.c_r, x.quantile, y.c_r, y.quantile]);
    }
    Ok(t)
}

fn fig6() -> Res<Table> {
    let b = Binomial::<f64>::new(200, 0.5)?;
    let rs: Vec<u64> = (1..=100).collect();
    let mut t = Table::new(&["r", "t_opt", "rho", "p"]);
    for g in optimize_over_layers(&b, &rs)? {
        t.push(row![g.r, g.t, g.rho, g.p]);
    }
    Ok(t)
}

fn fig7() -> Res<Table> {
    let normal = Normal::<f64>::standard();
    let binom = Binomial::<f64>::new(200, 0.5)?;
    let laws: [(&str, &dyn Distribution<f64>, GridSpec<f64>); 2] = [
        ("normal", &normal, GridSpec::LogLevels { lo: 1e-15, hi: 0.99, n: 2000 }),
        ("binomial", &binom, GridSpec::Support),
    ];
    let mut t = Table::new(&["family", "r", "t", "rho", "p", "c_r"]);
    for (name, d, grid) in &laws {
        for k in 0..=6 {
            let r = 10u64.pow(k);
            for p in threshold_curve(*d, r, grid)?.points {
                t.push(row![*name, r, p.t, p.rho, p.p, p.c_r]);
            }
        }
    }
    Ok(t)
}

fn fig9(s: &Settings) -> Res<Table> {
    let kind = s.bound_kind()?;
    let mut t = Table::new(&["panel", "n", "lambda", "bound_kind", "r", "ratio"]);
    let law = knn_spectrum::<f64>(50)?;
    let rs = parse_int_grid("pow2:5000", "r", 1)?;
    // panel (a) is the amplification bound by definition
    t.extend(par_rows(&rs, |&r| {
        let a = 2.0 * r as f64 + 1.0;
        let e = amplification_floor_with(&law, a * a)?.2;
        Ok(row!["a", 50u64, None::<f64>, bound_kind_name(BoundKind::MaxAmplification), r, knn_approximation_ratio(50, e)])
    })?);
    let panels: [(&str, u64, &[f64]); 2] = [("b", 100, &[1.0, 16.0 / 17.0, 0.8786]), ("c", 300, &[0.52])];
    for (panel, n_max, lambdas) in panels {
        let jobs: Vec<(u64, f64)> = lambdas.iter().flat_map(|&l| (4..=n_max).map(move |n| (n, l))).collect();
        t.extend(par_rows(&jobs, |&(n, l)| {
            // threshold depths past the search cap leave the cell empty rather than failing the figure
            let m = match min_rounds_for_ratio(n as u32, l, kind) {
                Ok(m) => Some(m),
                Err(grover_qaoa::Error::Unattainable(_)) => None,
                Err(e) => return Err(e.into()),
            };
            Ok(row![panel, n, l, bound_kind_name(kind), m, l])
        })?);
    }
    Ok(t)
}
