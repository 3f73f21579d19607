//! Command-line front end.
//!
//! Curve files are JSON:
//! `{"n": 3, "backend": "exact", "compact": true, "frames": [["1", "z", "z^2"]]}`
//! with an optional `"weights"` list of positive rationals, one per
//! coordinate, standing for the squares of coordinate scale factors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::curves::{HolCurve, PrimitiveLift};
use crate::error::Error;
use crate::exterior::{DiagonalMetric, PolyVector};
use crate::flagmetric::{degrees, maximize_area};
use crate::geometry::{constant_value, curvature, induced_metric, latitude_point, per_level_constancy, InvariantMetric, PointEvaluator};
use crate::hermpoly::{parse_hol, parse_hol_float};
use crate::oracle::{float_lift, FloatCurve, GridSpec};
use crate::scalar::{Complex64, GaussianRational, Scalar};
use crate::veronese::{congruence_test, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Sequence,
    Curvature,
    Degrees,
    Maximize,
    Plot,
    Certify,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "flagcurve", version, about = "Harmonic sequences, flag-manifold metrics and curvature certificates")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    pub file: PathBuf,
    /// Invariant-metric weights, comma separated (`1,2` or `1/2,3` or `0.89,0.45`).
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Latitude samples for `plot`.
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    /// CSV destination for `plot`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub n: usize,
    pub backend: Backend,
    pub compact: bool,
    pub frames: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<String>>,
}

/// A failure with the process exit code it maps to.
#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    fn from_error(op: &str, e: Error) -> Self {
        Self::new(exit_code(&e), format!("{op}: {e}"))
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. } | Error::NonHolomorphic { .. } | Error::ExponentOverflow(_) => 2,
        Error::WeightCountMismatch { .. } => 4,
        Error::NonCompactDomain => 5,
        Error::ExactBackendRequired => 6,
        _ => 3,
    }
}

fn ctx(op: &'static str) -> impl FnOnce(Error) -> CliError {
    move |e| CliError::from_error(op, e)
}

impl CurveFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::new(2, format!("curve file: {e}")))
    }

    fn metric(&self) -> Result<DiagonalMetric, CliError> {
        let Some(w) = &self.weights else {
            return Ok(DiagonalMetric::identity(self.n));
        };
        if w.len() != self.n {
            return Err(CliError::new(2, format!("curve file: {} weights for n = {}", w.len(), self.n)));
        }
        let w = w
            .iter()
            .map(|s| BigRational::from_str(s.trim()).map_err(|_| CliError::new(2, format!("curve file: bad weight '{s}'"))))
            .collect::<Result<Vec<_>, _>>()?;
        DiagonalMetric::new(w).map_err(|e| CliError::new(2, format!("curve file: {e}")))
    }

    fn vectors<F: Scalar>(
        &self,
        parse: impl Fn(&str) -> crate::Result<crate::hermpoly::UniPoly<F>>,
    ) -> Result<Vec<PolyVector<crate::hermpoly::UniPoly<F>>>, CliError> {
        if self.frames.is_empty() {
            return Err(CliError::new(2, "curve file: no frame vectors"));
        }
        self.frames
            .iter()
            .enumerate()
            .map(|(k, v)| {
                if v.len() != self.n {
                    return Err(CliError::new(2, format!("curve file: frame {k} has {} entries, n = {}", v.len(), self.n)));
                }
                v.iter()
                    .enumerate()
                    .map(|(i, s)| parse(s).map_err(|e| CliError::new(2, format!("frame {k}, entry {i}: {e}"))))
                    .collect::<Result<Vec<_>, _>>()
                    .map(PolyVector::new)
            })
            .collect()
    }

    pub fn load(&self) -> Result<Lift, CliError> {
        let metric = self.metric()?;
        match self.backend {
            Backend::Exact => {
                let c = HolCurve::new(self.vectors(parse_hol)?, metric).map_err(ctx("curve"))?;
                let lift = PrimitiveLift::from_curve(&c).map_err(ctx("primitive_lift"))?;
                Ok(Lift::Exact(lift.with_compact(self.compact)))
            }
            Backend::Float => {
                let c = FloatCurve::new(self.vectors(parse_hol_float)?, metric).map_err(ctx("curve"))?;
                let lift = float_lift(&c).map_err(ctx("float_harmonic_sequence"))?;
                Ok(Lift::Float(lift.with_compact(self.compact)))
            }
        }
    }
}

pub enum Lift {
    Exact(PrimitiveLift<GaussianRational>),
    Float(PrimitiveLift<Complex64>),
}

macro_rules! with_lift {
    ($lift:expr, $l:ident => $body:expr) => {
        match $lift {
            Lift::Exact($l) => $body,
            Lift::Float($l) => $body,
        }
    };
}

/// Parsed `--lambda`, plus a warning when exact and decimal entries were mixed.
pub fn parse_lambda(text: &str) -> Result<(InvariantMetric, Option<String>), CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = |s: &str| CliError::new(2, format!("--lambda: cannot parse '{s}'"));
    let exact: Vec<Option<BigRational>> = parts.iter().map(|s| BigRational::from_str(s).ok()).collect();
    let weight_err = |e: Error| CliError::new(2, format!("--lambda: {e}"));
    if exact.iter().all(Option::is_some) {
        let m = InvariantMetric::exact(exact.into_iter().flatten().collect()).map_err(weight_err)?;
        return Ok((m, None));
    }
    let floats = parts
        .iter()
        .map(|s| {
            if let Some((p, q)) = s.split_once('/') {
                let p: f64 = p.trim().parse().map_err(|_| bad(s))?;
                let q: f64 = q.trim().parse().map_err(|_| bad(s))?;
                Ok(p / q)
            } else {
                s.parse::<f64>().map_err(|_| bad(s))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let warning = exact
        .iter()
        .any(Option::is_some)
        .then(|| "warning: --lambda mixes rationals and decimals; using floating point".to_string());
    Ok((InvariantMetric::float(floats).map_err(weight_err)?, warning))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub backend: Backend,
    pub n: usize,
    pub ranks: Vec<usize>,
    pub flag_type: String,
    pub gammas: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub weights: Vec<String>,
    pub exact: bool,
    /// Symbolic curvature, exact mode only.
    pub curvature: Option<String>,
    pub constant: bool,
    pub value: Option<String>,
    pub value_f64: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreesReport {
    pub degrees: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximizeReport {
    pub degrees: Vec<u64>,
    pub direction: Vec<u64>,
    pub norm_sq: u64,
    pub weights: Vec<f64>,
    pub max_area_over_pi: f64,
    pub max_area: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotRow {
    pub phi: f64,
    /// `None` where every phase hit a pole or a degenerate metric.
    pub k: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotTable {
    pub weights: Vec<f64>,
    pub rows: Vec<PlotRow>,
}

impl PlotTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("phi,K\n");
        for r in &self.rows {
            match r.k {
                Some(k) => writeln!(s, "{},{}", r.phi, k),
                None => writeln!(s, "{},", r.phi),
            }
            .expect("write to string");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub quadric: String,
    pub exponent: u32,
    pub constant: String,
    pub factor: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub verdict: String,
    pub levels: Vec<Option<LevelReport>>,
    /// α_j of γ_j = α_j/(1+zz̄)², when every level has that form.
    pub per_level_alphas: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Report {
    Sequence(SequenceReport),
    Curvature(CurvatureReport),
    Degrees(DegreesReport),
    Maximize(MaximizeReport),
    Plot(PlotTable),
    Certify(CertifyReport),
}

/// A report plus diagnostics destined for stderr.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub warnings: Vec<String>,
}

fn sequence<F: Scalar>(lift: &PrimitiveLift<F>, backend: Backend) -> SequenceReport {
    SequenceReport {
        backend,
        n: lift.n(),
        ranks: lift.ranks().to_vec(),
        flag_type: lift.flag_type(),
        gammas: lift.gammas().iter().map(|g| g.fmt_factored()).collect(),
    }
}

/// Curvature sampled on the constancy grid, as (mean, spread).
fn sampled_curvature(ev: &PointEvaluator, m: &InvariantMetric) -> Result<(f64, f64), CliError> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut sum = 0.0;
    let points = GridSpec::constancy().points();
    for &(phi, theta) in &points {
        let k = ev.curvature(m, latitude_point(phi, theta)).map_err(ctx("curvature"))?;
        lo = lo.min(k);
        hi = hi.max(k);
        sum += k;
    }
    Ok((sum / points.len() as f64, hi - lo))
}

fn curvature_report(lift: &Lift, m: &InvariantMetric) -> Result<CurvatureReport, CliError> {
    let weights = match m {
        InvariantMetric::Exact(w) => w.iter().map(ToString::to_string).collect(),
        InvariantMetric::Float(w) => w.iter().map(ToString::to_string).collect(),
    };
    if let (Lift::Exact(l), InvariantMetric::Exact(_)) = (lift, m) {
        let rho = induced_metric(l, m).map_err(ctx("induced_metric"))?;
        let k = curvature(&rho).map_err(ctx("curvature"))?;
        let c = constant_value(&k);
        return Ok(CurvatureReport {
            weights,
            exact: true,
            curvature: Some(k.fmt_factored()),
            constant: c.is_some(),
            value: c.as_ref().map(|c| c.re.to_string()),
            value_f64: c.map(|c| c.to_c64().re),
        });
    }
    let ev = with_lift!(lift, l => {
        if m.len() != l.p() {
            return Err(CliError::from_error("induced_metric", Error::WeightCountMismatch { expected: l.p(), found: m.len() }));
        }
        PointEvaluator::new(l)
    });
    let (mean, spread) = sampled_curvature(&ev, m)?;
    let constant = spread <= 1e-8;
    Ok(CurvatureReport {
        weights,
        exact: false,
        curvature: None,
        constant,
        value: constant.then(|| mean.to_string()),
        value_f64: constant.then_some(mean),
    })
}

fn plot<F: Scalar>(lift: &PrimitiveLift<F>, m: &InvariantMetric, samples: usize) -> Result<PlotTable, CliError> {
    if m.len() != lift.p() {
        return Err(CliError::from_error("plot", Error::WeightCountMismatch { expected: lift.p(), found: m.len() }));
    }
    let grid = GridSpec::new(samples, 8).map_err(ctx("plot"))?;
    let ev = PointEvaluator::new(lift);
    let radial = lift.betas().iter().all(|b| b.is_radial());
    let thetas = grid.thetas();
    let mut rows = Vec::with_capacity(samples);
    for phi in grid.phis() {
        let vals: Vec<f64> = thetas
            .iter()
            .filter_map(|&t| ev.curvature(m, latitude_point(phi, t)).ok())
            .filter(|k| k.is_finite())
            .collect();
        if vals.len() < thetas.len() {
            rows.push(PlotRow { phi, k: None });
            continue;
        }
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let spread = vals.iter().fold(0.0f64, |s, v| s.max((v - mean).abs()));
        if radial && spread >= 1e-8 * mean.abs().max(1.0) {
            return Err(CliError::new(3, format!("plot: phase spread {spread:e} at φ = {phi} for a radial curve")));
        }
        rows.push(PlotRow { phi, k: Some(mean) });
    }
    Ok(PlotTable { weights: m.to_f64(), rows })
}

fn certify(lift: &PrimitiveLift<GaussianRational>) -> Result<CertifyReport, CliError> {
    let cert = congruence_test(lift).map_err(ctx("congruence_test"))?;
    let alphas = per_level_constancy(lift);
    if let (Verdict::ConstantCurvatureAllMetrics { alphas: a }, Some(b)) = (&cert.verdict, &alphas) {
        let agree = a.iter().zip(b).all(|(&x, y)| *y == GaussianRational::from_ints(x.into(), 0));
        if !agree {
            return Err(CliError::new(3, "congruence_test: exponents disagree with per-level constancy"));
        }
    }
    Ok(CertifyReport {
        verdict: cert.verdict.to_string(),
        levels: cert
            .levels
            .iter()
            .map(|l| {
                l.as_ref().map(|c| LevelReport {
                    quadric: c.quadric.to_string(),
                    exponent: c.exponent,
                    constant: c.constant.to_string(),
                    factor: c.factor.to_herm().to_string(),
                })
            })
            .collect(),
        per_level_alphas: alphas.map(|a| a.iter().map(|x| x.re.to_string()).collect()),
    })
}

/// Runs a command on an already-read curve file.
pub fn execute(cli: &Cli, file: &CurveFile) -> Result<Outcome, CliError> {
    let mut warnings = Vec::new();
    if cli.command == Command::Certify && file.backend == Backend::Float {
        return Err(CliError::from_error("certify", Error::ExactBackendRequired));
    }
    let lift = file.load()?;
    let p = with_lift!(&lift, l => l.p());
    let metric = match &cli.lambda {
        Some(text) => {
            let (m, w) = parse_lambda(text)?;
            warnings.extend(w);
            m
        }
        None => InvariantMetric::unit(p),
    };
    let report = match cli.command {
        Command::Sequence => Report::Sequence(with_lift!(&lift, l => sequence(l, file.backend))),
        Command::Curvature => Report::Curvature(curvature_report(&lift, &metric)?),
        Command::Degrees | Command::Maximize => {
            if !file.compact {
                return Err(CliError::from_error("degrees", Error::NonCompactDomain));
            }
            let d = with_lift!(&lift, l => degrees(l)).map_err(ctx("degrees"))?;
            if cli.command == Command::Degrees {
                Report::Degrees(DegreesReport { degrees: d.as_slice().to_vec() })
            } else {
                let opt = maximize_area(&d).map_err(ctx("maximize_area"))?;
                Report::Maximize(MaximizeReport {
                    degrees: d.as_slice().to_vec(),
                    direction: opt.direction,
                    norm_sq: opt.norm_sq,
                    weights: opt.weights,
                    max_area_over_pi: opt.max_area_over_pi,
                    max_area: std::f64::consts::PI * opt.max_area_over_pi,
                })
            }
        }
        Command::Plot => Report::Plot(with_lift!(&lift, l => plot(l, &metric, cli.samples))?),
        Command::Certify => match &lift {
            Lift::Exact(l) => Report::Certify(certify(l)?),
            Lift::Float(_) => return Err(CliError::from_error("certify", Error::ExactBackendRequired)),
        },
    };
    Ok(Outcome { report, warnings })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Human-readable rendering.
pub fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let w = &mut s;
    match r {
        Report::Sequence(q) => {
            writeln!(w, "ranks: {}", join(&q.ranks)).unwrap();
            writeln!(w, "flag: {}", q.flag_type).unwrap();
            for (j, g) in q.gammas.iter().enumerate() {
                writeln!(w, "gamma_{j} = {g}").unwrap();
            }
        }
        Report::Curvature(q) => {
            writeln!(w, "lambda: {}", join(&q.weights)).unwrap();
            if let Some(k) = &q.curvature {
                writeln!(w, "K = {k}").unwrap();
            }
            match &q.value {
                Some(v) => writeln!(w, "constant, K = {v}").unwrap(),
                None => writeln!(w, "nonconstant").unwrap(),
            }
        }
        Report::Degrees(q) => writeln!(w, "degrees: ({})", join(&q.degrees)).unwrap(),
        Report::Maximize(q) => {
            writeln!(w, "degrees: ({})", join(&q.degrees)).unwrap();
            writeln!(w, "direction: ({}) / sqrt({})", join(&q.direction), q.norm_sq).unwrap();
            let ws: Vec<String> = q.weights.iter().map(|x| format!("{x:.6}")).collect();
            writeln!(w, "lambda*: ({})", ws.join(", ")).unwrap();
            writeln!(w, "max area: {:.12} = pi * {:.12}", q.max_area, q.max_area_over_pi).unwrap();
        }
        Report::Plot(t) => w.push_str(&t.to_csv()),
        Report::Certify(q) => {
            writeln!(w, "{}", q.verdict).unwrap();
            for (j, l) in q.levels.iter().enumerate() {
                match l {
                    Some(c) => {
                        writeln!(w, "level {j}: Q = {}, N = {}, c = {}, h = {}", c.quadric, c.exponent, c.constant, c.factor).unwrap()
                    }
                    None => writeln!(w, "level {j}: no factorization").unwrap(),
                }
            }
        }
    }
    s
}

pub fn render_json(r: &Report) -> String {
    serde_json::to_string_pretty(r).expect("reports serialize") + "\n"
}

/// Full command: reads the file, runs, writes `--out`, returns stdout text.
pub fn run(cli: &Cli) -> Result<(String, Vec<String>), CliError> {
    let text = std::fs::read_to_string(&cli.file)
        .map_err(|e| CliError::new(2, format!("{}: {e}", cli.file.display())))?;
    let file = CurveFile::parse(&text)?;
    let outcome = execute(cli, &file)?;
    if let (Report::Plot(t), Some(path)) = (&outcome.report, &cli.out) {
        std::fs::write(path, t.to_csv()).map_err(|e| CliError::new(3, format!("{}: {e}", path.display())))?;
        if !cli.json {
            return Ok((String::new(), outcome.warnings));
        }
    }
    let out = if cli.json { render_json(&outcome.report) } else { render_text(&outcome.report) };
    Ok((out, outcome.warnings))
}
