//! Command-line front end. [`run`] parses arguments and returns the exit code
//! and captured output, so the binary is a thin wrapper.

mod args;

pub use args::*;

use crate::centroid::{qa_centroid, CentroidOptions, Side};
use crate::conformal::conformal_i1;
use crate::densities::{
    cauchy_ah_alpha_quadrature, load_density, save_density, write_density, DensityFormat,
    DensityPair, DiscreteDensity, LoadOptions,
};
use crate::divergences::{
    fg_jeffreys, fg_kl, qa_alpha_div, standard_alpha_div, zhang_alpha_beta_div,
    zhang_rho_alpha_div, AlphaParam, DivergenceResult, QaPair,
};
use crate::error::{ConvexityWitness, Error};
use crate::means::{check_strict_comparability, default_grid, log_grid, Comparability, Generator};
use crate::power_family::{power_alpha_div, PowerPair};
use crate::selftest::{run_selftest, SelftestOptions};
use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::Path;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const CAUCHY_REL_TOL: f64 = 1e-3;
const CAUCHY_ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = std::result::Result<(i32, String), Failure>;

pub fn run<I, S>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CliOutput {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Sweep(a) => sweep(a),
        Command::Check(a) => check(a),
        Command::Cauchy(a) => cauchy(a),
        Command::Centroid(a) => centroid(a),
        Command::Selftest(a) => selftest(a),
    };
    match result {
        Ok((code, stdout)) => CliOutput {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => CliOutput {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {}\n", msg),
        },
        Err(Failure::Lib(e)) => CliOutput {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {}\n", e),
        },
    }
}

fn num(x: f64, precision: Option<usize>) -> String {
    match precision {
        Some(p) => format!("{:.*}", p, x),
        None => x.to_string(),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn input_format(path: &Path, input: &InputArgs) -> std::result::Result<DensityFormat, Failure> {
    match input.input_format {
        Some(InputFormat::Csv) => Ok(DensityFormat::Csv),
        Some(InputFormat::Json) => Ok(DensityFormat::Json),
        None => DensityFormat::from_path(path).ok_or_else(|| {
            Failure::Usage(format!(
                "cannot infer the format of {}; pass --input-format",
                path.display()
            ))
        }),
    }
}

fn load(
    path: &Path,
    input: &InputArgs,
) -> std::result::Result<(DiscreteDensity<f64>, usize), Failure> {
    let format = input_format(path, input)?;
    let opts = LoadOptions {
        clamp_eps: input.clamp_eps,
    };
    let loaded = load_density(path, format, opts).map_err(|e| Failure::Lib(annotate(e, path)))?;
    Ok((loaded.density, loaded.clamped))
}

fn annotate(e: Error, path: &Path) -> Error {
    match e {
        Error::Io(io) => Error::Io(std::io::Error::new(
            io.kind(),
            format!("{}: {}", path.display(), io),
        )),
        Error::Parse(msg) => Error::Parse(format!("{}: {}", path.display(), msg)),
        other => other,
    }
}

fn alpha_param(a: &AlphaArgs) -> Option<AlphaParam<f64>> {
    match (a.alpha, a.alpha_amari) {
        (Some(x), _) => Some(AlphaParam::standard(x)),
        (None, Some(x)) => Some(AlphaParam::amari(x)),
        (None, None) => None,
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Standard => "standard",
        Method::Qa => "qa",
        Method::Power => "power",
        Method::ZhangRho => "zhang-rho",
        Method::ZhangAb => "zhang-ab",
        Method::KlFg => "kl-fg",
        Method::JeffreysFg => "jeffreys-fg",
    }
}

fn method_uses_alpha(m: Method) -> bool {
    !matches!(m, Method::KlFg | Method::JeffreysFg)
}

/// A divergence value with whatever diagnostics the method provides.
struct Evaluated {
    value: f64,
    details: Option<DivergenceResult<f64>>,
}

fn evaluate(
    m: &MethodArgs,
    alpha: Option<AlphaParam<f64>>,
    pair: &DensityPair<f64>,
) -> std::result::Result<Evaluated, Failure> {
    let need_alpha = || {
        alpha.ok_or_else(|| {
            Failure::Usage(format!(
                "method {} needs --alpha or --alpha-amari",
                method_name(m.method)
            ))
        })
    };
    let gen = |id: &str| Generator::from_id(id).map_err(Failure::Lib);
    let full = |r: DivergenceResult<f64>| Evaluated {
        value: r.value,
        details: Some(r),
    };
    let bare = |value: f64| Evaluated {
        value,
        details: None,
    };
    Ok(match m.method {
        Method::Standard => full(standard_alpha_div(need_alpha()?.alpha(), pair)?),
        Method::Qa => full(qa_alpha_div(
            &gen(&m.f)?,
            &gen(&m.g)?,
            need_alpha()?.alpha(),
            pair,
        )?),
        Method::Power => {
            let (r, s) = match (m.r, m.s) {
                (Some(r), Some(s)) => (r, s),
                _ => return Err(Failure::Usage("method power needs --r and --s".into())),
            };
            full(power_alpha_div(
                &PowerPair::new(r, s)?,
                need_alpha()?.alpha(),
                pair,
            )?)
        }
        Method::ZhangRho => bare(zhang_rho_alpha_div(
            &gen(&m.rho)?,
            need_alpha()?.alpha_amari(),
            pair,
        )?),
        Method::ZhangAb => {
            let beta = m
                .beta_amari
                .ok_or_else(|| Failure::Usage("method zhang-ab needs --beta-amari".into()))?;
            bare(zhang_alpha_beta_div(
                need_alpha()?.alpha_amari(),
                beta,
                pair,
            )?)
        }
        Method::KlFg => bare(fg_kl(&gen(&m.f)?, &gen(&m.g)?, pair)?),
        Method::JeffreysFg => bare(fg_jeffreys(&gen(&m.f)?, &gen(&m.g)?, pair)?),
    })
}

#[derive(Serialize)]
struct ComputeReport {
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    f: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    g: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_amari: Option<f64>,
    value: f64,
    n_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit_branch_used: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_integrand: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_integrand: Option<f64>,
    clamped_values: usize,
}

fn compute(a: &ComputeArgs) -> CmdResult {
    let (p, cp) = load(&a.p, &a.input)?;
    let (q, cq) = load(&a.q, &a.input)?;
    let pair = DensityPair::new(p, q)?;
    let alpha = alpha_param(&a.alpha);
    let m = &a.method;
    let ev = evaluate(m, alpha, &pair)?;
    let uses_fg = matches!(m.method, Method::Qa | Method::KlFg | Method::JeffreysFg);
    let uses_alpha = method_uses_alpha(m.method);
    let report = ComputeReport {
        method: method_name(m.method),
        f: uses_fg.then(|| m.f.clone()),
        g: uses_fg.then(|| m.g.clone()),
        alpha: alpha.filter(|_| uses_alpha).map(|x| x.alpha()),
        alpha_amari: alpha.filter(|_| uses_alpha).map(|x| x.alpha_amari()),
        value: ev.value,
        n_points: pair.len(),
        limit_branch_used: ev.details.as_ref().map(|d| d.limit_branch_used),
        min_integrand: ev.details.as_ref().map(|d| d.min_integrand),
        max_integrand: ev.details.as_ref().map(|d| d.max_integrand),
        clamped_values: cp + cq,
    };
    let out = match a.output.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Text => {
            let prec = a.output.precision;
            let mut s = String::new();
            let _ = writeln!(s, "method: {}", report.method);
            if let (Some(f), Some(g)) = (&report.f, &report.g) {
                let _ = writeln!(s, "generators: {} {}", f, g);
            }
            if let (Some(x), Some(y)) = (report.alpha, report.alpha_amari) {
                let _ = writeln!(s, "alpha: {}", num(x, prec));
                let _ = writeln!(s, "alpha_amari: {}", num(y, prec));
            }
            let _ = writeln!(s, "value: {}", num(report.value, prec));
            let _ = writeln!(s, "n_points: {}", report.n_points);
            if let Some(d) = &ev.details {
                let _ = writeln!(s, "limit_branch_used: {}", d.limit_branch_used);
                let _ = writeln!(s, "min_integrand: {}", num(d.min_integrand, prec));
                let _ = writeln!(s, "max_integrand: {}", num(d.max_integrand, prec));
            }
            if report.clamped_values > 0 {
                let _ = writeln!(s, "clamped_values: {}", report.clamped_values);
            }
            s
        }
    };
    Ok((EXIT_OK, out))
}

/// Parses `start:end:step` into strictly increasing α values in `[0, 1]`, end included.
pub fn parse_alpha_range(spec: &str) -> std::result::Result<Vec<f64>, Error> {
    let bad = || Error::BadGridSpec(format!("expected start:end:step, got {:?}", spec));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<std::result::Result<Vec<f64>, _>>()?;
    let (start, end, step) = (nums[0], nums[1], nums[2]);
    if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&end) || start > end {
        return Err(Error::BadGridSpec(format!(
            "need 0 <= start <= end <= 1, got {:?}",
            spec
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::BadGridSpec(format!(
            "step must be positive, got {:?}",
            spec
        )));
    }
    let span = end - start;
    let n = (span / step + 1e-9).floor() as usize;
    if n > 10_000_000 {
        return Err(Error::BadGridSpec(format!("{} steps is too many", n)));
    }
    let mut alphas: Vec<f64> = (0..=n)
        .map(|i| (start + i as f64 * step).min(end))
        .collect();
    let last = *alphas.last().expect("at least start");
    if end - last > 1e-12 * step.max(1.0) {
        alphas.push(end);
    } else {
        *alphas.last_mut().expect("non-empty") = end;
    }
    alphas.dedup();
    Ok(alphas)
}

fn sweep(a: &SweepArgs) -> CmdResult {
    if !method_uses_alpha(a.method.method) {
        return Err(Failure::Usage(format!(
            "method {} has no α to sweep",
            method_name(a.method.method)
        )));
    }
    let alphas = parse_alpha_range(&a.range)?;
    let (p, _) = load(&a.p, &a.input)?;
    let (q, _) = load(&a.q, &a.input)?;
    let pair = DensityPair::new(p, q)?;
    let mut out = String::from("alpha,value\n");
    for alpha in alphas {
        let v = evaluate(&a.method, Some(AlphaParam::standard(alpha)), &pair)?.value;
        let _ = writeln!(out, "{},{}", alpha, v);
    }
    Ok((EXIT_OK, out))
}

fn parse_grid(spec: &str) -> std::result::Result<Vec<f64>, Error> {
    let bad = || Error::BadGridSpec(format!("expected lo:hi:points, got {:?}", spec));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::BadGridSpec(format!(
            "need 0 < lo < hi, got {:?}",
            spec
        )));
    }
    Ok(log_grid(lo, hi, n))
}

#[derive(Serialize)]
struct WitnessJson {
    a: f64,
    b: f64,
    c: f64,
    h_a: f64,
    h_b: f64,
    h_c: f64,
    chord_at_b: f64,
}

impl From<&ConvexityWitness> for WitnessJson {
    fn from(w: &ConvexityWitness) -> Self {
        Self {
            a: w.a,
            b: w.b,
            c: w.c,
            h_a: w.ha,
            h_b: w.hb,
            h_c: w.hc,
            chord_at_b: w.chord_at_b(),
        }
    }
}

#[derive(Serialize)]
struct ConformalJson {
    cases: usize,
    worst_rel_error: f64,
    passed: bool,
}

#[derive(Serialize)]
struct CheckReport {
    f: String,
    g: String,
    grid_points: usize,
    grid_lo: f64,
    grid_hi: f64,
    comparable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conformal: Option<ConformalJson>,
}

const CONFORMAL_CASES: usize = 100;
const CONFORMAL_TOL: f64 = 1e-10;

fn conformal_selfcheck(
    f: &Generator<f64>,
    g: &Generator<f64>,
    seed: u64,
) -> std::result::Result<ConformalJson, Error> {
    let qa = QaPair::new(f.clone(), g.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..CONFORMAL_CASES {
        let n = rng.gen_range(1..=8);
        let mut draw = || -> Vec<f64> {
            (0..n)
                .map(|_| rng.gen_range(0.1f64.ln()..10f64.ln()).exp())
                .collect()
        };
        let pair = DensityPair::counting(draw(), draw())?;
        let a = conformal_i1(f, g, &pair)?;
        let b = qa.alpha_div(1.0, &pair)?.value;
        let err = if a == b {
            0.0
        } else {
            (a - b).abs() / a.abs().max(b.abs())
        };
        worst = worst.max(if err.is_nan() { f64::INFINITY } else { err });
    }
    Ok(ConformalJson {
        cases: CONFORMAL_CASES,
        worst_rel_error: worst,
        passed: worst <= CONFORMAL_TOL,
    })
}

fn check(a: &CheckArgs) -> CmdResult {
    let f = Generator::from_id(&a.f)?;
    let g = Generator::from_id(&a.g)?;
    let grid = match &a.grid {
        Some(spec) => parse_grid(spec)?,
        None => default_grid(),
    };
    let verdict = check_strict_comparability(&f, &g, &grid)?;
    let witness = match &verdict {
        Comparability::Comparable => None,
        Comparability::NotComparable(w) => Some(*w),
    };
    let conformal = if a.conformal && witness.is_none() {
        Some(conformal_selfcheck(&f, &g, a.seed)?)
    } else {
        None
    };
    let code = match &conformal {
        Some(c) if !c.passed => EXIT_CHECK_FAILED,
        _ => EXIT_OK,
    };
    let report = CheckReport {
        f: f.id().to_string(),
        g: g.id().to_string(),
        grid_points: grid.len(),
        grid_lo: grid[0],
        grid_hi: grid[grid.len() - 1],
        comparable: witness.is_none(),
        witness: witness.as_ref().map(WitnessJson::from),
        conformal,
    };
    let out = match a.output.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Text => {
            let prec = a.output.precision;
            let mut s = String::new();
            match &witness {
                None => {
                    let _ = writeln!(
                        s,
                        "Comparable: {}∘{}⁻¹ is strictly convex on {} points in [{}, {}]",
                        report.f,
                        report.g,
                        report.grid_points,
                        num(report.grid_lo, prec),
                        num(report.grid_hi, prec)
                    );
                }
                Some(w) => {
                    let _ = writeln!(
                        s,
                        "NotComparable: {}∘{}⁻¹ is not strictly convex",
                        report.f, report.g
                    );
                    let _ = writeln!(s, "witness: {}", w);
                }
            }
            if a.conformal {
                match &report.conformal {
                    Some(c) => {
                        let _ = writeln!(
                            s,
                            "conformal identity: {} ({} cases, worst relative error {})",
                            if c.passed { "PASS" } else { "FAIL" },
                            c.cases,
                            num(c.worst_rel_error, prec)
                        );
                    }
                    None => {
                        let _ = writeln!(s, "conformal identity: skipped (pair not comparable)");
                    }
                }
            }
            s
        }
    };
    Ok((code, out))
}

#[derive(Serialize)]
struct CauchyReport {
    s1: f64,
    s2: f64,
    alpha: f64,
    half_width: f64,
    points: usize,
    closed_form: f64,
    quadrature: f64,
    abs_error: f64,
    rel_error: f64,
    passed: bool,
}

fn cauchy(a: &CauchyArgs) -> CmdResult {
    let c = cauchy_ah_alpha_quadrature(a.s1, a.s2, a.alpha, a.half_width, a.points)?;
    let passed = if c.closed_form == 0.0 {
        c.abs_error <= CAUCHY_ZERO_TOL
    } else {
        c.rel_error <= CAUCHY_REL_TOL
    };
    let report = CauchyReport {
        s1: a.s1,
        s2: a.s2,
        alpha: a.alpha,
        half_width: a.half_width,
        points: a.points,
        closed_form: c.closed_form,
        quadrature: c.quadrature,
        abs_error: c.abs_error,
        rel_error: c.rel_error,
        passed,
    };
    let out = match a.output.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Text => {
            let prec = a.output.precision;
            format!(
                "closed_form: {}\nquadrature: {}\nabs_error: {}\nrel_error: {}\n{}\n",
                num(c.closed_form, prec),
                num(c.quadrature, prec),
                num(c.abs_error, prec),
                num(c.rel_error, prec),
                if passed { "PASS" } else { "FAIL" }
            )
        }
    };
    Ok((if passed { EXIT_OK } else { EXIT_CHECK_FAILED }, out))
}

#[derive(Serialize)]
struct DensityJson<'a> {
    support: &'a [String],
    values: &'a [f64],
    weights: &'a [f64],
}

#[derive(Serialize)]
struct CentroidJson<'a> {
    f: &'a str,
    g: &'a str,
    alpha: f64,
    side: &'static str,
    iterations: usize,
    converged: bool,
    objective: f64,
    objective_trace: &'a [f64],
    centroid: DensityJson<'a>,
}

fn centroid(a: &CentroidArgs) -> CmdResult {
    let alpha = alpha_param(&a.alpha)
        .ok_or_else(|| Failure::Usage("centroid needs --alpha or --alpha-amari".into()))?
        .alpha();
    let densities = a
        .densities
        .iter()
        .map(|p| load(p, &a.input).map(|(d, _)| d))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let weights = match &a.weights {
        Some(w) => w.clone(),
        None => vec![1.0; densities.len()],
    };
    let qa = QaPair::new(Generator::from_id(&a.f)?, Generator::from_id(&a.g)?)?;
    let (side, side_name) = match a.side {
        SideArg::Left => (Side::Left, "left"),
        SideArg::Right => (Side::Right, "right"),
        SideArg::Jeffreys => (Side::Jeffreys, "jeffreys"),
    };
    let opts = CentroidOptions {
        alpha,
        side,
        max_iter: a.max_iter,
        tol: a.tol,
    };
    let report = qa_centroid(&qa, &densities, &weights, &opts)?;
    if let Some(path) = &a.output_file {
        let format = DensityFormat::from_path(path).unwrap_or(DensityFormat::Csv);
        save_density(&report.centroid, path, format)?;
    }
    let out = match a.output.format {
        OutputFormat::Json => to_json(&CentroidJson {
            f: qa.f().id(),
            g: qa.g().id(),
            alpha,
            side: side_name,
            iterations: report.iterations,
            converged: report.converged,
            objective: report.objective(),
            objective_trace: &report.objective_trace,
            centroid: DensityJson {
                support: report.centroid.support(),
                values: report.centroid.values(),
                weights: report.centroid.weights(),
            },
        }),
        OutputFormat::Text => {
            let prec = a.output.precision;
            let mut s = String::new();
            let _ = writeln!(s, "side: {}", side_name);
            let _ = writeln!(s, "iterations: {}", report.iterations);
            let _ = writeln!(s, "converged: {}", report.converged);
            let _ = writeln!(s, "objective: {}", num(report.objective(), prec));
            let _ = writeln!(
                s,
                "initial_objective: {}",
                num(report.objective_trace[0], prec)
            );
            let _ = writeln!(s, "centroid:");
            s.push_str(&write_density(&report.centroid, DensityFormat::Csv)?);
            s
        }
    };
    Ok((EXIT_OK, out))
}

fn selftest(a: &SelftestArgs) -> CmdResult {
    let report = run_selftest(&SelftestOptions {
        seed: a.seed,
        cases: a.cases,
        break_duality: a.break_duality,
    });
    let code = if report.passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    Ok((code, format!("{}\n", report)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_range_parsing() {
        assert_eq!(
            parse_alpha_range("0:1:0.25").unwrap(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
        assert_eq!(parse_alpha_range("0:1:0.3").unwrap().last(), Some(&1.0));
        let a = parse_alpha_range("0:1:0.1").unwrap();
        assert_eq!(a.len(), 11);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(parse_alpha_range("0.5:0.5:0.1").unwrap(), vec![0.5]);
        for bad in ["0:1", "0:2:0.1", "1:0:0.1", "0:1:0", "0:1:-1", "a:1:0.1"] {
            assert!(parse_alpha_range(bad).is_err(), "{}", bad);
        }
    }

    #[test]
    fn number_formatting() {
        assert_eq!(num(0.1, None), "0.1");
        assert_eq!(num(1.0 / 3.0, Some(4)), "0.3333");
    }

    #[test]
    fn usage_errors_exit_two() {
        let out = run(["alphadiv", "frobnicate"]);
        assert_eq!(out.code, EXIT_USAGE);
        let out = run(["alphadiv", "check", "--f", "nope", "--g", "log"]);
        assert_eq!(out.code, EXIT_USAGE);
        assert!(out.stderr.contains("nope"));
        let out = run(["alphadiv", "--help"]);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("compute"));
    }
}
