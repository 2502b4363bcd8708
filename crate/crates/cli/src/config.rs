//! Experiment configuration: flags, the key-value config file, and the small
//! grammars for distributions and grids.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::Args;
use grover_qaoa::dist::{
    pareto_epsilon_for_exponent, Binomial, Distribution, EmpiricalLaw, Normal, ReflectedGamma, ReflectedPareto,
    TwoPoint,
};
use grover_qaoa::maxcut::{knn_spectrum, BoundKind};

use crate::error::CliError;

/// Settings shared by every subcommand. All optional so a config file can
/// fill what the flags leave out.
#[derive(Args, Clone, Debug, Default)]
pub struct Settings {
    /// Key-value config file (`key = value` per line, `#` comments).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Cost law, `name:params` (e.g. `normal:0,1`, `binomial:200,0.5`).
    #[arg(long, global = true)]
    pub dist: Option<String>,
    /// Layer counts: `5`, `1,2,10`, `1..50`, `lin:a:b:n`, `log:a:b:n`, `pow2:xmax`.
    #[arg(long, global = true)]
    pub r: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Bins used to discretize a continuous law for simulation.
    #[arg(long, global = true)]
    pub bins: Option<usize>,
    /// `max_amplification` or `gmth`.
    #[arg(long = "bound-kind", global = true)]
    pub bound_kind: Option<String>,
    /// CRS samples per layer.
    #[arg(long = "effort-factor", global = true)]
    pub effort_factor: Option<u64>,
    /// Random starts for the angle search.
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Evaluation budget of one local search.
    #[arg(long = "max-evals", global = true)]
    pub max_evals: Option<usize>,
    /// Relative tolerance of the local search.
    #[arg(long = "f-tol", global = true)]
    pub f_tol: Option<f64>,
    /// Monte Carlo trials.
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// CRS method: `blom`, `integral` or `monte_carlo`.
    #[arg(long, global = true)]
    pub method: Option<String>,
    /// Approximation ratios, as a float grid.
    #[arg(long, global = true)]
    pub lambda: Option<String>,
    /// Part sizes for Max-Cut on `K_{n,n}`, as an integer grid.
    #[arg(long, global = true)]
    pub n: Option<String>,
    /// Fixed threshold; optimized when absent.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Marked fractions, as a float grid.
    #[arg(long, global = true)]
    pub rho: Option<String>,
    /// Threshold grid: `support`, `levels:lo:hi:n` (log-spaced cdf levels) or a list of levels.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    /// Edge list (`u v` per line, 0-indexed).
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "dist",
    "r",
    "out",
    "seed",
    "bins",
    "bound-kind",
    "effort-factor",
    "restarts",
    "max-evals",
    "f-tol",
    "trials",
    "method",
    "lambda",
    "n",
    "t",
    "rho",
    "grid",
    "graph",
];

fn parse_value<V: std::str::FromStr>(key: &str, v: &str) -> Result<V, CliError>
where
    V::Err: std::fmt::Display,
{
    v.parse().map_err(|e| CliError::Config(format!("{key}: {e}")))
}

impl Settings {
    /// Fills unset fields from the config file, if one was named. Flags win.
    pub fn merge_config_file(mut self) -> Result<Self, CliError> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let file = Self::from_config_text(&text)?;
        macro_rules! fill {
            ($($f:ident),*) => { $( if self.$f.is_none() { self.$f = file.$f; } )* };
        }
        fill!(dist, r, out, seed, bins, bound_kind, effort_factor, restarts, max_evals, f_tol, trials, method, lambda, n, t, rho, grid, graph);
        Ok(self)
    }

    pub fn from_config_text(text: &str) -> Result<Self, CliError> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("config line {}: expected `key = value`", i + 1)))?;
            let (k, v) = (k.trim().replace('_', "-"), v.trim().trim_matches('"').to_string());
            if !KEYS.contains(&k.as_str()) {
                return Err(CliError::Config(format!("config line {}: unknown key `{k}`", i + 1)));
            }
            match k.as_str() {
                "dist" => s.dist = Some(v),
                "r" => s.r = Some(v),
                "out" => s.out = Some(v.into()),
                "seed" => s.seed = Some(parse_value(&k, &v)?),
                "bins" => s.bins = Some(parse_value(&k, &v)?),
                "bound-kind" => s.bound_kind = Some(v),
                "effort-factor" => s.effort_factor = Some(parse_value(&k, &v)?),
                "restarts" => s.restarts = Some(parse_value(&k, &v)?),
                "max-evals" => s.max_evals = Some(parse_value(&k, &v)?),
                "f-tol" => s.f_tol = Some(parse_value(&k, &v)?),
                "trials" => s.trials = Some(parse_value(&k, &v)?),
                "method" => s.method = Some(v),
                "lambda" => s.lambda = Some(v),
                "n" => s.n = Some(v),
                "t" => s.t = Some(parse_value(&k, &v)?),
                "rho" => s.rho = Some(v),
                "grid" => s.grid = Some(v),
                "graph" => s.graph = Some(v.into()),
                _ => unreachable!("key list and match arms agree"),
            }
        }
        Ok(s)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn bins(&self) -> Result<usize, CliError> {
        match self.bins.unwrap_or(10_000) {
            b if b >= 2 => Ok(b),
            b => Err(CliError::Config(format!("bins = {b}: need at least 2"))),
        }
    }

    pub fn effort_factor(&self) -> Result<u64, CliError> {
        match self.effort_factor.unwrap_or(2) {
            0 => Err(CliError::Config("effort-factor must be positive".into())),
            k => Ok(k),
        }
    }

    pub fn bound_kind(&self) -> Result<BoundKind, CliError> {
        self.bound_kind.as_deref().unwrap_or("max_amplification").parse().map_err(CliError::from)
    }

    pub fn dist(&self) -> Result<DistSpec, CliError> {
        let spec = self.dist.as_deref().ok_or_else(|| CliError::Config("--dist is required".into()))?;
        DistSpec::parse(spec)
    }

    pub fn rs(&self, default: &str) -> Result<Vec<u64>, CliError> {
        parse_int_grid(self.r.as_deref().unwrap_or(default), "r", 1)
    }

    pub fn ns(&self, default: Option<&str>) -> Result<Vec<u64>, CliError> {
        let spec = self.n.as_deref().or(default).ok_or_else(|| CliError::Config("--n is required".into()))?;
        parse_int_grid(spec, "n", 1)
    }
}

/// A parsed `--dist`. Keeps the normal parameters around because some
/// commands (Blom, the series objective) need them in closed form.
pub struct DistSpec {
    pub law: Box<dyn Distribution<f64>>,
    pub normal: Option<(f64, f64)>,
}

fn params(name: &str, body: &str, want: usize) -> Result<Vec<f64>, CliError> {
    let vals: Vec<f64> = body
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().map_err(|e| CliError::Config(format!("{name}: `{s}`: {e}"))))
        .collect::<Result<_, _>>()?;
    if vals.len() != want {
        return Err(CliError::Config(format!("{name} takes {want} parameter(s), got {}", vals.len())));
    }
    Ok(vals)
}

fn count(name: &str, x: f64) -> Result<u64, CliError> {
    if x >= 0.0 && x.fract() == 0.0 && x < 9.0e15 {
        Ok(x as u64)
    } else {
        Err(CliError::Config(format!("{name}: `{x}` is not a count")))
    }
}

impl DistSpec {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let (name, body) = spec.split_once(':').unwrap_or((spec, ""));
        let name = name.trim();
        let mut normal = None;
        let law: Box<dyn Distribution<f64>> = match name {
            "normal" => {
                let p = if body.trim().is_empty() { vec![0.0, 1.0] } else { params(name, body, 2)? };
                normal = Some((p[0], p[1]));
                Box::new(Normal::new(p[0], p[1])?)
            }
            "gamma" => {
                let p = params(name, body, 2)?;
                Box::new(ReflectedGamma::new(p[0], p[1])?)
            }
            "pareto" => {
                let p = params(name, body, 2)?;
                Box::new(ReflectedPareto::new(p[0], p[1])?)
            }
            "pareto-j" => {
                let p = params(name, body, 1)?;
                Box::new(ReflectedPareto::new(pareto_epsilon_for_exponent(p[0])?, 1.0)?)
            }
            "binomial" => {
                let p = params(name, body, 2)?;
                Box::new(Binomial::new(count(name, p[0])?, p[1])?)
            }
            "twopoint" => {
                let p = params(name, body, 1)?;
                Box::new(TwoPoint::new(p[0])?)
            }
            "knn" => {
                let p = params(name, body, 1)?;
                let n = u32::try_from(count(name, p[0])?).map_err(|_| CliError::Config("knn: n too large".into()))?;
                Box::new(knn_spectrum::<f64>(n)?)
            }
            "empirical" => Box::new(load_empirical(Path::new(body.trim()))?),
            _ => return Err(CliError::Config(format!("unknown distribution `{name}`"))),
        };
        Ok(DistSpec { law, normal })
    }
}

pub fn load_empirical(path: &Path) -> Result<EmpiricalLaw<f64>, CliError> {
    let f = File::open(path).map_err(|e| CliError::Config(format!("cannot open {}: {e}", path.display())))?;
    Ok(EmpiricalLaw::parse(BufReader::new(f))?)
}

fn split_fields<'a>(item: &'a str, n: usize, what: &str) -> Result<Vec<&'a str>, CliError> {
    let f: Vec<&str> = item.split(':').collect();
    if f.len() != n {
        return Err(CliError::Config(format!("{what}: malformed `{item}`")));
    }
    Ok(f)
}

fn num<V: std::str::FromStr>(what: &str, s: &str) -> Result<V, CliError>
where
    V::Err: std::fmt::Display,
{
    s.trim().parse().map_err(|e| CliError::Config(format!("{what}: `{s}`: {e}")))
}

/// Integer grid, sorted and deduplicated. Items are comma-separated and
/// each is `k`, `a..b` (inclusive), `lin:a:b:n`, `log:a:b:n` or `pow2:xmax`
/// (`⌈2^{x/100}⌉` for `x = 0..=xmax`); fractional points round up.
pub fn parse_int_grid(spec: &str, what: &str, min: u64) -> Result<Vec<u64>, CliError> {
    let mut out: Vec<u64> = Vec::new();
    let ceil = |x: f64| -> Result<u64, CliError> {
        if x.is_finite() && (0.0..1.8e19).contains(&x) {
            // 10^{log10(100)/2} lands a hair above 10; don't round that up to 11
            Ok((x * (1.0 - 1e-12)).ceil() as u64)
        } else {
            Err(CliError::Config(format!("{what}: point {x} out of range")))
        }
    };
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some(rest) = item.strip_prefix("pow2:") {
            let xmax: u32 = num(what, rest)?;
            if xmax > 6300 {
                return Err(CliError::Config(format!("{what}: pow2 exponent {xmax} too large")));
            }
            for x in 0..=xmax {
                out.push(ceil(2f64.powf(f64::from(x) / 100.0))?);
            }
        } else if item.starts_with("lin:") || item.starts_with("log:") {
            let f = split_fields(item, 4, what)?;
            let (a, b): (f64, f64) = (num(what, f[1])?, num(what, f[2])?);
            let n: usize = num(what, f[3])?;
            for x in float_points(f[0], a, b, n, what)? {
                out.push(ceil(x)?);
            }
        } else if let Some((a, b)) = item.split_once("..") {
            let (a, b): (u64, u64) = (num(what, a)?, num(what, b)?);
            if a > b {
                return Err(CliError::Config(format!("{what}: empty range `{item}`")));
            }
            out.extend(a..=b);
        } else {
            out.push(num(what, item)?);
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(CliError::Config(format!("{what}: empty grid")));
    }
    if out[0] < min {
        return Err(CliError::Config(format!("{what}: values must be at least {min}")));
    }
    Ok(out)
}

fn float_points(kind: &str, a: f64, b: f64, n: usize, what: &str) -> Result<Vec<f64>, CliError> {
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(CliError::Config(format!("{what}: bad {kind} grid")));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let step = |i: usize| i as f64 / (n - 1) as f64;
    Ok(match kind {
        "lin" => (0..n).map(|i| if i == n - 1 { b } else { a + (b - a) * step(i) }).collect(),
        _ => {
            if !(a > 0.0 && b > 0.0) {
                return Err(CliError::Config(format!("{what}: log grid needs positive ends")));
            }
            let (la, lb) = (a.ln(), b.ln());
            (0..n).map(|i| if i == n - 1 { b } else { (la + (lb - la) * step(i)).exp() }).collect()
        }
    })
}

/// Float grid in the order given: comma-separated numbers or `a/b`
/// fractions, `lin:a:b:n` and `log:a:b:n`.
pub fn parse_float_grid(spec: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if item.starts_with("lin:") || item.starts_with("log:") {
            let f = split_fields(item, 4, what)?;
            out.extend(float_points(f[0], num(what, f[1])?, num(what, f[2])?, num(what, f[3])?, what)?);
        } else if let Some((p, q)) = item.split_once('/') {
            out.push(num::<f64>(what, p)? / num::<f64>(what, q)?);
        } else {
            out.push(num(what, item)?);
        }
    }
    if out.is_empty() {
        return Err(CliError::Config(format!("{what}: empty grid")));
    }
    Ok(out)
}
