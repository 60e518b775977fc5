//! Command-line front end. [`run`] takes the argument vector and two
//! writers so the binary and the tests share one code path.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 numeric precondition failure.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::asymptotic_fit::{compare, fit_spectrum, CompareReport, FitResult, TGrid, DEFAULT_N_TERMS, DEFAULT_SAMPLES, DEFAULT_TOLERANCES};
use crate::boundary_geometry::{catalog, BoundaryClassification, ModelManifold};
use crate::conditions::{BoundaryCondition, OperatorPair};
use crate::discriminator::{
    compare_manifolds, fitted_dataset, recover_invariants, to_float_dataset, FitOptions, SpectralDataset, TransferReport,
};
use crate::error::{Error, Result};
use crate::exact_algebra::{
    coefficient_matrix, int, parse_rational, verify_section4_tables, ExactJson, ExactValue, Rational,
};
use crate::format::f15;
use crate::heat_coefficients::{a3_section4_form, heat_coefficients, pair_row, HeatCoefficientSet};
use crate::scalar::Scalar;
use crate::spectra::{spectrum, EigenvalueList, DEFAULT_LAMBDA_MAX};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Width of the label column in `table` output.
pub const WIDTH_ENV: &str = "HEATSPEC_WIDTH";

const EXPECTED_DETERMINANTS: [(OperatorPair, i64); 3] = [
    (OperatorPair::DirichletNeumann, -144),
    (OperatorPair::Absolute01, 1584),
    (OperatorPair::Relative01, -432),
];

#[derive(Parser, Debug)]
#[command(name = "heatspec", version, about = "Heat-trace coefficients, spectra and boundary discrimination")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the model manifolds with their boundary invariants.
    Catalog {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Exact a₀..a₃ for one operator on one model.
    Coeff {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long, value_parser = parse_bc)]
        bc: BoundaryCondition,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Eigenvalues below a cutoff, as `lambda,multiplicity`.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long, value_parser = parse_bc)]
        bc: BoundaryCondition,
        #[arg(long, default_value_t = DEFAULT_LAMBDA_MAX)]
        lambda_max: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Fit heat coefficients to a spectrum; with a model, compare against
    /// the closed forms.
    Fit(FitArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Recover boundary invariants for two manifolds and report which
    /// boundary properties transfer.
    Discriminate(DiscriminateArgs),
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// interval, disk, cylinder or hemisphere
    #[arg(long)]
    model: Option<String>,
    /// Rational, or a rational multiple of pi such as `pi`, `2pi`, `pi/3`.
    #[arg(long)]
    radius: Option<String>,
    #[arg(long)]
    length: Option<String>,
    #[arg(long)]
    height: Option<String>,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Spectrum CSV to fit instead of a generated one.
    #[arg(long, conflicts_with = "model")]
    spectrum: Option<String>,
    /// Dimension, required with `--spectrum`.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    p: usize,
    #[arg(long, value_parser = parse_bc)]
    bc: Option<BoundaryCondition>,
    #[arg(long, default_value_t = DEFAULT_LAMBDA_MAX)]
    lambda_max: f64,
    /// Weyl constant of an imported spectrum, for a certified tail bound.
    #[arg(long)]
    weyl: Option<f64>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_N_TERMS)]
    n_terms: usize,
    /// Relative tolerances for a₀..a₃, comma separated.
    #[arg(long, value_parser = parse_tolerances)]
    tol: Option<[f64; 4]>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Traces,
    Matrices,
    HeatFit,
    Classify,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Dimensions for the traces and matrices suites, as `lo..hi` (inclusive).
    #[arg(long, value_parser = parse_m_range, default_value = "2..8")]
    m_range: RangeInclusive<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random second fundamental forms per dimension in the traces suite.
    #[arg(long, default_value_t = 8)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_LAMBDA_MAX)]
    lambda_max: f64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args, Debug)]
struct DiscriminateArgs {
    /// `FILE,FILE` spectra of the two operators of the pair, or a model
    /// such as `disk:radius=1`.
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long, value_parser = parse_pair, default_value = "dn")]
    pair: OperatorPair,
    /// Scalar curvature for spectra read from files.
    #[arg(long, value_parser = parse_q)]
    tau: Option<Rational>,
    /// Scalar curvature of `--b` when it differs from `--tau`.
    #[arg(long, value_parser = parse_q)]
    tau_b: Option<Rational>,
    #[arg(long)]
    m: Option<usize>,
    /// Classifier tolerance relative to vol(∂M).
    #[arg(long)]
    tol: Option<f64>,
    /// How model inputs are turned into coefficients.
    #[arg(long, value_enum, default_value_t = Route::Exact)]
    route: Route,
    #[arg(long, default_value_t = DEFAULT_LAMBDA_MAX)]
    lambda_max: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Route {
    Exact,
    Fitted,
}

fn parse_bc(s: &str) -> std::result::Result<BoundaryCondition, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_pair(s: &str) -> std::result::Result<OperatorPair, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_q(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_m_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected `lo..hi`, got {s:?}");
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn parse_tolerances(s: &str) -> std::result::Result<[f64; 4], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| e.to_string())?;
    v.try_into().map_err(|_| "expected four comma-separated tolerances".to_string())
}

/// `3/2`, `pi`, `2pi`, `2*pi`, `pi/4`, `3pi/2`.
pub fn parse_exact(s: &str) -> Result<ExactValue> {
    let s = s.trim().to_ascii_lowercase().replace(' ', "");
    match s.split_once("pi") {
        None => Ok(ExactValue::rational(parse_rational(&s)?)),
        Some((pre, post)) => {
            let pre = pre.strip_suffix('*').unwrap_or(pre);
            let coeff = if pre.is_empty() { int(1) } else { parse_rational(pre)? };
            let coeff = match post {
                "" => coeff,
                _ => {
                    let den = post
                        .strip_prefix('/')
                        .ok_or_else(|| Error::Parse(format!("cannot read {s:?} as a multiple of pi")))?;
                    coeff / parse_rational(den)?
                }
            };
            Ok(ExactValue::new(coeff, 2))
        }
    }
}

/// Builds a model from its name and `key=value` parameters.
pub fn build_model(name: &str, params: &BTreeMap<String, String>) -> Result<ModelManifold> {
    let allowed: &[&str] = match name {
        "interval" => &["length"],
        "disk" => &["radius"],
        "cylinder" => &["height", "radius"],
        "hemisphere" => &[],
        _ => return Err(Error::Parse(format!("unknown model {name:?}"))),
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::Parse(format!("model {name} takes no parameter {k:?}")));
    }
    let get = |k: &str, default: ExactValue| params.get(k).map_or(Ok(default), |v| parse_exact(v));
    let pi = ExactValue::pi_pow_half(2);
    match name {
        "interval" => ModelManifold::interval(get("length", pi)?),
        "disk" => {
            let r = get("radius", ExactValue::from_int(1))?;
            let q = r
                .as_rational()
                .ok_or_else(|| Error::InvalidParameter("disk radius must be rational".into()))?;
            ModelManifold::disk(q.clone())
        }
        "cylinder" => ModelManifold::cylinder(get("height", pi)?, get("radius", ExactValue::from_int(1))?),
        _ => Ok(ModelManifold::hemisphere()),
    }
}

/// `disk:radius=1`, `cylinder:height=pi,radius=1`, `hemisphere`.
pub fn parse_model_spec(spec: &str) -> Result<ModelManifold> {
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut params = BTreeMap::new();
    for kv in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {kv:?}")))?;
        params.insert(k.trim().to_string(), v.trim().to_string());
    }
    build_model(name.trim(), &params)
}

fn is_model_spec(spec: &str) -> bool {
    let name = spec.split_once(':').map_or(spec, |(n, _)| n);
    matches!(name.trim(), "interval" | "disk" | "cylinder" | "hemisphere")
}

impl ModelArgs {
    fn resolve(&self) -> Result<ModelManifold> {
        let name = self
            .model
            .as_deref()
            .ok_or_else(|| Error::Parse("--model is required".into()))?;
        let mut params = BTreeMap::new();
        for (k, v) in [("radius", &self.radius), ("length", &self.length), ("height", &self.height)] {
            if let Some(v) = v {
                params.insert(k.to_string(), v.clone());
            }
        }
        build_model(name, &params)
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numeric_precondition() {
        return EXIT_NUMERIC;
    }
    match e {
        Error::Parse(_)
        | Error::Io(_)
        | Error::InvalidParameter(_)
        | Error::DegreeOutOfRange { .. }
        | Error::DimensionTooSmall { .. }
        | Error::DimensionMismatch { .. }
        | Error::Unsupported(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

/// Runs one command. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let mut buf = String::new();
    let result = match cli.command {
        Command::Catalog { format } => cmd_catalog(format, &mut buf),
        Command::Coeff { model, p, bc, format } => cmd_coeff(&model, p, bc, format, &mut buf),
        Command::Spectrum { model, p, bc, lambda_max, format } => {
            cmd_spectrum(&model, p, bc, lambda_max, format, &mut buf)
        }
        Command::Fit(a) => cmd_fit(&a, &mut buf),
        Command::Verify(a) => cmd_verify(&a, &mut buf),
        Command::Discriminate(a) => cmd_discriminate(&a, &mut buf),
    };
    if out.write_all(buf.as_bytes()).and_then(|_| out.flush()).is_err() {
        return EXIT_FAIL;
    }
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn push_json<T: Serialize>(buf: &mut String, v: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    buf.push_str(&s);
    buf.push('\n');
    Ok(())
}

fn width() -> usize {
    std::env::var(WIDTH_ENV)
        .ok()
        .and_then(|w| w.parse().ok())
        .filter(|&w: &usize| w > 0)
        .unwrap_or(14)
}

fn row(buf: &mut String, label: &str, cells: &[String]) {
    let w = width();
    buf.push_str(&format!("{label:<w$}"));
    for c in cells {
        buf.push_str("  ");
        buf.push_str(c);
    }
    buf.push('\n');
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn flags<V>(c: &BoundaryClassification<V>) -> [bool; 4] {
    [c.totally_geodesic, c.minimal, c.totally_umbilic, c.strongly_totally_umbilic]
}

fn flag_text<V: Scalar>(c: &BoundaryClassification<V>) -> String {
    let names = ["geodesic", "minimal", "umbilic", "strongly-umbilic"];
    let mut parts: Vec<String> = names
        .iter()
        .zip(flags(c))
        .filter(|(_, on)| *on)
        .map(|(n, _)| n.to_string())
        .collect();
    if let Some(mu) = &c.mu {
        parts.push(format!("mu={}", f15(mu.to_f64())));
    }
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(",")
    }
}

fn cmd_catalog(format: Format, buf: &mut String) -> Result<bool> {
    let models = catalog();
    let mut entries = Vec::new();
    for model in &models {
        entries.push((model, model.boundary_invariants()?, model.ground_truth()?));
    }
    match format {
        Format::Json => {
            let v: Vec<Value> = entries
                .iter()
                .map(|(m, inv, cl)| json!({"model": m, "invariants": inv, "classification": cl}))
                .collect();
            push_json(buf, &v)?;
        }
        Format::Csv => {
            buf.push_str("name,m,vol_M,vol_dM,I0,I1,I2,geodesic,minimal,umbilic,strongly_umbilic\n");
            for (m, inv, cl) in &entries {
                let f = flags(cl);
                buf.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{}\n",
                    m.name,
                    m.m,
                    f15(m.vol_m.to_f64()),
                    f15(m.vol_dm.to_f64()),
                    f15(inv.i0.to_f64()),
                    f15(inv.i1.to_f64()),
                    f15(inv.i2.to_f64()),
                    f[0],
                    f[1],
                    f[2],
                    f[3]
                ));
            }
        }
        Format::Table => {
            for (m, inv, cl) in &entries {
                let params: Vec<String> = m.parameters().iter().map(|(k, v)| format!("{k}={v}")).collect();
                row(buf, m.name, &[format!("m={}", m.m), params.join(" ")]);
                row(buf, "  vol", &[format!("M={}", m.vol_m), format!("dM={}", m.vol_dm), format!("tau={}", m.tau)]);
                row(buf, "  invariants", &[format!("I0={}", inv.i0), format!("I1={}", inv.i1), format!("I2={}", inv.i2)]);
                row(buf, "  boundary", &[flag_text(cl)]);
            }
        }
    }
    Ok(true)
}

fn coeff_rows(buf: &mut String, set: &HeatCoefficientSet, format: Format) -> Result<()> {
    match format {
        Format::Json => push_json(buf, set)?,
        Format::Csv => {
            buf.push_str("n,num,den,pi_half_exponent,float\n");
            for (n, a) in set.a.iter().enumerate() {
                let j = ExactJson::from(a);
                buf.push_str(&format!("{n},{},{},{},{}\n", j.num, j.den, j.pi_half_exponent, f15(a.to_f64())));
            }
        }
        Format::Table => {
            row(buf, &set.model, &[format!("m={}", set.m), format!("p={}", set.p), set.bc.to_string()]);
            for (n, a) in set.a.iter().enumerate() {
                row(buf, &format!("a{n}"), &[a.to_string(), f15(a.to_f64())]);
            }
        }
    }
    Ok(())
}

fn cmd_coeff(model: &ModelArgs, p: usize, bc: BoundaryCondition, format: Format, buf: &mut String) -> Result<bool> {
    let model = model.resolve()?;
    let set = heat_coefficients(&model, p, bc)?;
    coeff_rows(buf, &set, format)?;
    Ok(true)
}

fn spectrum_json(list: &EigenvalueList) -> Value {
    json!({
        "source": list.source,
        "m": list.m,
        "lambda_max": list.lambda_max,
        "weyl": list.weyl,
        "count": list.count(),
        "entries": list.entries,
    })
}

fn cmd_spectrum(
    model: &ModelArgs,
    p: usize,
    bc: BoundaryCondition,
    lambda_max: f64,
    format: Format,
    buf: &mut String,
) -> Result<bool> {
    let model = model.resolve()?;
    let list = spectrum(&model, p, bc, lambda_max)?;
    match format {
        Format::Json => push_json(buf, &spectrum_json(&list))?,
        Format::Csv => buf.push_str(&list.to_csv()),
        Format::Table => {
            row(buf, "lambda", &["multiplicity".into()]);
            for (l, k) in &list.entries {
                row(buf, &f15(*l), &[k.to_string()]);
            }
        }
    }
    Ok(true)
}

fn cmd_fit(a: &FitArgs, buf: &mut String) -> Result<bool> {
    let (list, exact, length) = match (&a.spectrum, &a.model.model) {
        (Some(path), _) => {
            let m = a.m.ok_or_else(|| Error::Parse("--m is required with --spectrum".into()))?;
            let file = File::open(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
            let list = EigenvalueList::from_csv(BufReader::new(file), m, None, a.weyl)?;
            (list, None, None)
        }
        (None, Some(_)) => {
            let model = a.model.resolve()?;
            let bc = a.bc.ok_or_else(|| Error::Parse("--bc is required with --model".into()))?;
            let list = spectrum(&model, a.p, bc, a.lambda_max)?;
            let exact = heat_coefficients(&model, a.p, bc)?;
            (list, Some(exact), Some(model.length_scale()))
        }
        (None, None) => return Err(Error::Parse("give --model or --spectrum".into())),
    };
    let default = match length {
        Some(l) => TGrid::default_for(list.lambda_max, l)?,
        None => TGrid::new(28.0 / list.lambda_max, 2800.0 / list.lambda_max, a.samples)?,
    };
    let grid = TGrid::new(a.t_min.unwrap_or(default.t_min), a.t_max.unwrap_or(default.t_max), a.samples)?;
    let fit = fit_spectrum(&list, &grid, a.n_terms)?;
    let report = match &exact {
        Some(e) => Some(compare(&fit, e, &a.tol.unwrap_or(DEFAULT_TOLERANCES))?),
        None => None,
    };
    write_fit(buf, &fit, report.as_ref(), a.format)?;
    Ok(report.is_none_or(|r| r.all_pass))
}

fn write_fit(buf: &mut String, fit: &FitResult, report: Option<&CompareReport>, format: Format) -> Result<()> {
    match format {
        Format::Json => push_json(buf, &json!({"fit": fit, "comparison": report}))?,
        Format::Csv => {
            buf.push_str("n,fitted,exact,error,threshold,pass\n");
            for (n, x) in fit.a_hat.iter().enumerate() {
                let e = report.and_then(|r| r.entries.iter().find(|e| e.n == n));
                let cells = match e {
                    Some(e) => format!("{},{},{},{}", f15(e.exact), f15(e.error), f15(e.threshold), e.pass),
                    None => ",,,".into(),
                };
                buf.push_str(&format!("{n},{},{cells}\n", f15(*x)));
            }
        }
        Format::Table => {
            row(
                buf,
                "fit",
                &[
                    format!("m={}", fit.m),
                    format!("terms={}", fit.n_terms),
                    format!("condition={}", f15(fit.condition_estimate)),
                    format!("residual={}", f15(fit.residual_norm)),
                    format!("max_tail={}", f15(fit.max_tail_bound)),
                ],
            );
            for (n, x) in fit.a_hat.iter().enumerate() {
                let mut cells = vec![f15(*x)];
                if let Some(e) = report.and_then(|r| r.entries.iter().find(|e| e.n == n)) {
                    cells.push(format!("exact={}", f15(e.exact)));
                    cells.push(format!("error={}", f15(e.error)));
                    cells.push(pass_word(e.pass).into());
                }
                row(buf, &format!("a{n}"), &cells);
            }
        }
    }
    Ok(())
}

/// One checked item of a verification suite.
#[derive(Clone, Debug, Serialize)]
struct Check {
    suite: &'static str,
    case: String,
    detail: String,
    pass: bool,
}

fn suite_traces(range: &RangeInclusive<usize>, seed: u64, samples: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for m in range.clone() {
        let report = verify_section4_tables(m, seed, samples)?;
        let failed = report.rows.iter().filter(|r| !r.pass).count();
        out.push(Check {
            suite: "traces",
            case: format!("m={m}"),
            detail: format!("{} identities x {samples} forms, {failed} failed", report.rows.len()),
            pass: report.all_pass(),
        });
    }
    Ok(out)
}

fn suite_matrices(range: &RangeInclusive<usize>) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for m in range.clone() {
        for (pair, expected) in EXPECTED_DETERMINANTS {
            if m < pair.min_dimension() {
                continue;
            }
            let cm = coefficient_matrix(pair, m)?;
            let [first, second] = pair.members();
            let rows_ok = [(first, &cm.rows[0]), (second, &cm.rows[1])].iter().all(|(op, r)| {
                pair_row(m, op.p, op.bc).is_ok_and(|(a, b)| a == r[0] && b == r[1])
            });
            out.push(Check {
                suite: "matrices",
                case: format!("m={m} {pair}"),
                detail: format!(
                    "det={} rows=[[{}, {}], [{}, {}]]",
                    cm.determinant, cm.rows[0][0], cm.rows[0][1], cm.rows[1][0], cm.rows[1][1]
                ),
                pass: cm.determinant == int(expected) && rows_ok,
            });
        }
    }
    Ok(out)
}

fn suite_heat_fit(lambda_max: f64) -> Result<Vec<Check>> {
    use BoundaryCondition::*;
    let mut out = Vec::new();
    for model in catalog() {
        let grid = TGrid::default_for(lambda_max, model.length_scale())?;
        for (p, bc) in [(0, Dirichlet), (0, Neumann), (1, Absolute), (1, Relative)] {
            if p > model.m {
                continue;
            }
            let exact = heat_coefficients(&model, p, bc)?;
            let list = spectrum(&model, p, bc, lambda_max)?;
            let fit = fit_spectrum(&list, &grid, DEFAULT_N_TERMS)?;
            let report = compare(&fit, &exact, &DEFAULT_TOLERANCES)?;
            let errs: Vec<String> = report.entries.iter().map(|e| format!("{:.1e}", e.error)).collect();
            out.push(Check {
                suite: "heat-fit",
                case: format!("{} p={p} {bc}", model.name),
                detail: format!("errors [{}] condition {:.1e}", errs.join(", "), fit.condition_estimate),
                pass: report.all_pass,
            });
        }
    }
    Ok(out)
}

fn suite_classify(lambda_max: f64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for model in catalog() {
        let truth = model.ground_truth()?;
        let invariants = model.boundary_invariants()?;
        for pair in OperatorPair::ALL {
            if model.m < pair.min_dimension() {
                continue;
            }
            let specialized = a3_section4_form(&model, pair).is_ok();
            let exact = recover_invariants(&SpectralDataset::exact(&model, pair)?, None)?;
            out.push(Check {
                suite: "classify",
                case: format!("{} {pair} exact", model.name),
                detail: flag_text(&exact.classification),
                pass: specialized && exact.invariants == invariants && exact.classification == truth,
            });
            let [first, second] = pair.members();
            let s1 = spectrum(&model, first.p, first.bc, lambda_max)?;
            let s2 = spectrum(&model, second.p, second.bc, lambda_max)?;
            let options = FitOptions {
                grid: Some(TGrid::default_for(lambda_max, model.length_scale())?),
                ..FitOptions::default()
            };
            let data = fitted_dataset([&s1, &s2], pair, model.m, &model.tau_rational()?, &options)?;
            let fitted = recover_invariants(&data, None)?;
            out.push(Check {
                suite: "classify",
                case: format!("{} {pair} fitted", model.name),
                detail: flag_text(&fitted.classification),
                pass: flags(&fitted.classification) == flags(&truth),
            });
        }
    }
    Ok(out)
}

fn cmd_verify(a: &VerifyArgs, buf: &mut String) -> Result<bool> {
    let mut checks = Vec::new();
    let all = a.suite == Suite::All;
    if all || a.suite == Suite::Traces {
        checks.extend(suite_traces(&a.m_range, a.seed, a.samples)?);
    }
    if all || a.suite == Suite::Matrices {
        checks.extend(suite_matrices(&a.m_range)?);
    }
    if all || a.suite == Suite::HeatFit {
        checks.extend(suite_heat_fit(a.lambda_max)?);
    }
    if all || a.suite == Suite::Classify {
        checks.extend(suite_classify(a.lambda_max)?);
    }
    let all_pass = checks.iter().all(|c| c.pass);
    match a.format {
        Format::Json => push_json(
            buf,
            &json!({
                "m_range": [a.m_range.start(), a.m_range.end()],
                "seed": a.seed,
                "checks": checks,
                "all_pass": all_pass,
            }),
        )?,
        Format::Csv => {
            buf.push_str("suite,case,detail,pass\n");
            for c in &checks {
                buf.push_str(&format!("{},{},\"{}\",{}\n", c.suite, c.case, c.detail, c.pass));
            }
        }
        Format::Table => {
            for c in &checks {
                row(buf, pass_word(c.pass), &[c.suite.into(), c.case.clone(), c.detail.clone()]);
            }
            row(buf, pass_word(all_pass), &[format!("{} checks", checks.len())]);
        }
    }
    Ok(all_pass)
}

enum Input {
    Exact(SpectralDataset<ExactValue>),
    Fitted(SpectralDataset<f64>),
}

impl Input {
    fn float(&self) -> SpectralDataset<f64> {
        match self {
            Input::Exact(d) => to_float_dataset(d),
            Input::Fitted(d) => d.clone(),
        }
    }
}

fn load_input(spec: &str, tau: Option<&Rational>, a: &DiscriminateArgs) -> Result<Input> {
    let check_m = |m: usize| match a.m {
        Some(want) if want != m => Err(Error::DimensionMismatch { expected: want, got: m }),
        _ => Ok(()),
    };
    if is_model_spec(spec) {
        let model = parse_model_spec(spec)?;
        check_m(model.m)?;
        return match a.route {
            Route::Exact => Ok(Input::Exact(SpectralDataset::exact(&model, a.pair)?)),
            Route::Fitted => {
                let [first, second] = a.pair.members();
                let s1 = spectrum(&model, first.p, first.bc, a.lambda_max)?;
                let s2 = spectrum(&model, second.p, second.bc, a.lambda_max)?;
                let options = FitOptions {
                    grid: Some(TGrid::default_for(a.lambda_max, model.length_scale())?),
                    ..FitOptions::default()
                };
                let data = fitted_dataset([&s1, &s2], a.pair, model.m, &model.tau_rational()?, &options)?;
                Ok(Input::Fitted(data))
            }
        };
    }
    let files: Vec<&str> = spec.split(',').map(str::trim).collect();
    let [f1, f2] = files[..] else {
        return Err(Error::Parse(format!("expected FILE,FILE or a model, got {spec:?}")));
    };
    let m = a.m.ok_or_else(|| Error::Parse("--m is required for spectrum files".into()))?;
    let tau = tau.ok_or_else(|| Error::Parse("--tau is required for spectrum files".into()))?;
    let read = |path: &str| -> Result<EigenvalueList> {
        let file = File::open(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
        EigenvalueList::from_csv(BufReader::new(file), m, None, None)
    };
    let (s1, s2) = (read(f1)?, read(f2)?);
    Ok(Input::Fitted(fitted_dataset([&s1, &s2], a.pair, m, tau, &FitOptions::default())?))
}

fn cmd_discriminate(a: &DiscriminateArgs, buf: &mut String) -> Result<bool> {
    let tau_b = a.tau_b.as_ref().or(a.tau.as_ref());
    let ia = load_input(&a.a, a.tau.as_ref(), a)?;
    let ib = load_input(&a.b, tau_b, a)?;
    match (&ia, &ib) {
        (Input::Exact(x), Input::Exact(y)) => write_transfer(buf, &compare_manifolds(x, y, a.tol)?, a.format)?,
        _ => write_transfer(buf, &compare_manifolds(&ia.float(), &ib.float(), a.tol)?, a.format)?,
    }
    Ok(true)
}

fn write_transfer<V: Scalar + Serialize>(buf: &mut String, r: &TransferReport<V>, format: Format) -> Result<()> {
    match format {
        Format::Json => push_json(buf, r)?,
        Format::Csv => {
            buf.push_str("property,a_has,b_has,transfer_holds\n");
            for p in &r.properties {
                buf.push_str(&format!("{},{},{},{}\n", p.property, p.a_has, p.b_has, p.transfer_holds));
            }
        }
        Format::Table => {
            row(buf, "pair", &[r.pair.to_string(), format!("m={}", r.m)]);
            for (label, res) in [("a", &r.a), ("b", &r.b)] {
                let inv = &res.invariants;
                row(
                    buf,
                    label,
                    &[
                        format!("I0={}", f15(inv.i0.to_f64())),
                        format!("I1={}", f15(inv.i1.to_f64())),
                        format!("I2={}", f15(inv.i2.to_f64())),
                        flag_text(&res.classification),
                    ],
                );
            }
            row(
                buf,
                "delta",
                &[
                    format!("I0={}", f15(r.delta_i0.to_f64())),
                    format!("I1={}", f15(r.delta_i1.to_f64())),
                    format!("I2={}", f15(r.delta_i2.to_f64())),
                ],
            );
            for p in &r.properties {
                row(
                    buf,
                    &p.property,
                    &[format!("a={} b={}", p.a_has, p.b_has), pass_word(p.transfer_holds).into()],
                );
            }
        }
    }
    Ok(())
}
