//! The `mcpi` command line: `fit` a CSV file, `synth`esize a data set, or
//! run the replicated `demo` comparison against standard PCA.
//!
//! Exit codes: 0 success, 2 parse or usage error, 3 degenerate input,
//! 4 I/O error, 1 anything else.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::datagen::{generate, reference_scatter, ExperimentSpec, OutlierBasis};
use crate::mcpi::{fit, standard_pca, ComponentDiagnostics, McpiConfig, PcaResult, SigmaInit};
use crate::metrics::{component_alignment, AlignmentReport};
use crate::{DataMatrix, Error, Matrix, Vector};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Numeric(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::Io { .. } => 4,
            CliError::Numeric(_) => 1,
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_owned(),
            source,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Degenerate(msg) => CliError::Degenerate(msg),
            Error::InvalidConfig(msg) => CliError::Parse(msg),
            other => CliError::Numeric(other),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mcpi",
    version,
    about = "Robust PCA with maximum correntropy power iterations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit MCPI and standard PCA to a CSV data set and write a JSON report.
    Fit(FitArgs),
    /// Generate a synthetic data set as CSV with a JSON sidecar.
    Synth(SynthArgs),
    /// Replicated comparison of MCPI and standard PCA on synthetic data.
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Kernel decay factor per shrinking round.
    #[arg(long, default_value_t = 0.95)]
    pub eta: f64,
    /// Shrinking rounds per component.
    #[arg(long, default_value_t = 65)]
    pub n_decay: usize,
    /// Subtract column means before fitting.
    #[arg(long)]
    pub center: bool,
    #[arg(long, default_value_t = 1e-10)]
    pub inner_tol: f64,
    #[arg(long, default_value_t = 1000)]
    pub inner_max_iter: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub outer_tol: f64,
    #[arg(long, default_value_t = 200)]
    pub outer_max_iter: usize,
}

impl SolverArgs {
    pub fn config(&self) -> McpiConfig {
        McpiConfig {
            eta: self.eta,
            n_decay: self.n_decay,
            inner_tol: self.inner_tol,
            inner_max_iter: self.inner_max_iter,
            outer_tol: self.outer_tol,
            outer_max_iter: self.outer_max_iter,
            center: self.center,
            sigma_init: SigmaInit::APriori,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Skip the first line of the input.
    #[arg(long)]
    pub header: bool,
    /// Recorded in the report; the fit itself is deterministic.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Literal,
    Rotated,
}

impl From<BasisArg> for OutlierBasis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Literal => OutlierBasis::Literal,
            BasisArg::Rotated => OutlierBasis::Rotated,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    #[arg(long, default_value_t = 400)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub p: usize,
    /// Fraction of rows replaced by outliers.
    #[arg(long, default_value_t = 0.0)]
    pub outlier_frac: f64,
    /// Outlier power scale.
    #[arg(long, default_value_t = 15.0)]
    pub nu: f64,
    #[arg(long, value_enum, default_value_t = BasisArg::Literal)]
    pub outlier_basis: BasisArg,
    /// True scatter matrix, rows separated by ';' and entries by ','.
    /// Required when p is not 3.
    #[arg(long)]
    pub scatter: Option<String>,
}

impl DataArgs {
    pub fn spec(&self, seed: u64) -> Result<ExperimentSpec, CliError> {
        let scatter = match &self.scatter {
            Some(text) => parse_matrix(text)?,
            None if self.p == 3 => reference_scatter(),
            None => {
                return Err(CliError::Parse(format!(
                    "--p {} needs an explicit --scatter",
                    self.p
                )))
            }
        };
        let spec = ExperimentSpec {
            n: self.n,
            p: self.p,
            scatter,
            outlier_fraction: self.outlier_frac,
            nu: self.nu,
            seed,
            outlier_basis: self.outlier_basis.into(),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub seed: u64,
    /// CSV destination; the sidecar is written next to it with a `.json`
    /// extension.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct DemoArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = 20)]
    pub replicates: usize,
    /// Replicate r uses seed + r.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON summary destination (stdout when omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Plot-ready CSV of the first replicate.
    #[arg(long)]
    pub plot_csv: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Fit(args) => cmd_fit(args).map(|_| ()),
        Command::Synth(args) => cmd_synth(args).map(|_| ()),
        Command::Demo(args) => {
            let report = cmd_demo(args)?;
            if args.output.is_none() {
                let text = to_json(&report)?;
                println!("{text}");
            }
            Ok(())
        }
    }
}

/// Parses `"a,b;c,d"` into a row-major matrix.
pub fn parse_matrix(text: &str) -> Result<Matrix, CliError> {
    let rows: Vec<Vec<f64>> = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|e| CliError::Parse(format!("matrix entry {v:?}: {e}")))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let p = rows.len();
    if rows.iter().any(|r| r.len() != p) {
        return Err(CliError::Parse(format!("matrix {text:?} is not square")));
    }
    Ok(Matrix::from_row_iterator(p, p, rows.into_iter().flatten()))
}

/// Reads a comma-separated numeric matrix, optionally skipping one header line.
pub fn read_csv(path: &Path, header: bool) -> Result<DataMatrix, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Parse(e.to_string()))?;
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map_err(|e| CliError::Parse(format!("record {}: {field:?}: {e}", line + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() || rows[0].is_empty() {
        return Err(CliError::Parse(format!(
            "{} contains no data",
            path.display()
        )));
    }
    DataMatrix::from_rows(&rows).map_err(|e| CliError::Parse(e.to_string()))
}

/// Writes rows with 17 significant digits so values round-trip exactly.
pub fn write_csv(path: &Path, x: &DataMatrix) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    for row in x.as_matrix().row_iter() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(out, "{}", line.join(",")).map_err(|e| CliError::io(path, e))?;
    }
    out.flush().map_err(|e| CliError::io(path, e))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numeric(Error::InvalidConfig(e.to_string())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = to_json(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn rows_of(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn vec_of(v: &Vector) -> Vec<f64> {
    v.iter().copied().collect()
}

#[derive(Debug, Serialize)]
pub struct FitConfigEcho {
    pub input: String,
    pub header: bool,
    pub seed: u64,
    pub solver: McpiConfig,
}

#[derive(Debug, Serialize)]
pub struct BaselineReport {
    pub components: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct FitReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub config: FitConfigEcho,
    pub n: usize,
    pub p: usize,
    /// Row-major p×p matrix; column j is component j.
    pub components: Vec<Vec<f64>>,
    pub apriori_eigenvalues: Vec<f64>,
    pub diagnostics: Vec<ComponentDiagnostics>,
    pub mean: Option<Vec<f64>>,
    pub standard_pca: BaselineReport,
}

impl FitReport {
    fn new(
        config: FitConfigEcho,
        x: &DataMatrix,
        robust: &PcaResult,
        baseline: &PcaResult,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: "fit",
            config,
            n: x.n(),
            p: x.p(),
            components: rows_of(&robust.components),
            apriori_eigenvalues: vec_of(&robust.apriori_eigenvalues),
            diagnostics: robust.diagnostics.clone(),
            mean: robust.mean.as_ref().map(vec_of),
            standard_pca: BaselineReport {
                components: rows_of(&baseline.components),
                eigenvalues: vec_of(&baseline.apriori_eigenvalues),
            },
        }
    }
}

pub fn cmd_fit(args: &FitArgs) -> Result<FitReport, CliError> {
    let cfg = args.solver.config();
    cfg.validate()?;
    let x = read_csv(&args.input, args.header)?;
    if x.n() < x.p() {
        return Err(CliError::Degenerate(format!(
            "{} samples for {} variables",
            x.n(),
            x.p()
        )));
    }
    let robust = fit(&x, &cfg)?;
    let baseline = standard_pca(&x, cfg.center)?;
    let echo = FitConfigEcho {
        input: args.input.display().to_string(),
        header: args.header,
        seed: args.seed,
        solver: cfg,
    };
    let report = FitReport::new(echo, &x, &robust, &baseline);
    write_json(&args.output, &report)?;
    Ok(report)
}

#[derive(Debug, Serialize)]
pub struct SpecEcho {
    pub n: usize,
    pub p: usize,
    pub scatter: Vec<Vec<f64>>,
    pub outlier_fraction: f64,
    pub nu: f64,
    pub outlier_basis: OutlierBasis,
    pub seed: u64,
}

impl From<&ExperimentSpec> for SpecEcho {
    fn from(s: &ExperimentSpec) -> Self {
        Self {
            n: s.n,
            p: s.p,
            scatter: rows_of(&s.scatter),
            outlier_fraction: s.outlier_fraction,
            nu: s.nu,
            outlier_basis: s.outlier_basis,
            seed: s.seed,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SynthSidecar {
    pub schema_version: u32,
    pub command: &'static str,
    pub data_file: String,
    pub spec: SpecEcho,
    pub outlier_indices: Vec<usize>,
}

/// Path of the JSON sidecar written next to a `synth` CSV.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

pub fn cmd_synth(args: &SynthArgs) -> Result<SynthSidecar, CliError> {
    let spec = args.data.spec(args.seed)?;
    let data = generate(&spec)?;
    write_csv(&args.output, &data.samples)?;
    let sidecar = SynthSidecar {
        schema_version: SCHEMA_VERSION,
        command: "synth",
        data_file: args.output.display().to_string(),
        spec: SpecEcho::from(&spec),
        outlier_indices: data.outlier_indices,
    };
    write_json(&sidecar_path(&args.output), &sidecar)?;
    Ok(sidecar)
}

#[derive(Debug, Serialize)]
pub struct DemoConfigEcho {
    pub data: SpecEcho,
    pub replicates: usize,
    pub solver: McpiConfig,
}

#[derive(Debug, Serialize)]
pub struct ReplicateReport {
    pub index: usize,
    pub seed: u64,
    pub outlier_count: usize,
    pub mcpi: AlignmentReport,
    pub pca: AlignmentReport,
}

#[derive(Debug, Serialize)]
pub struct MethodSummary {
    /// Per-component median of `|cos|` over replicates.
    pub median: Vec<f64>,
    pub mean: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct Aggregate {
    pub mcpi: MethodSummary,
    pub pca: MethodSummary,
}

#[derive(Debug, Serialize)]
pub struct DemoReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub config: DemoConfigEcho,
    pub true_eigenvalues: Vec<f64>,
    pub true_components: Vec<Vec<f64>>,
    pub replicates: Vec<ReplicateReport>,
    pub aggregate: Aggregate,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    match v.len() {
        0 => f64::NAN,
        len if len % 2 == 0 => (v[m - 1] + v[m]) / 2.0,
        _ => v[m],
    }
}

fn summarise(reports: &[&AlignmentReport], p: usize) -> MethodSummary {
    let column =
        |i: usize| -> Vec<f64> { reports.iter().map(|r| r.per_component_abs_cos[i]).collect() };
    MethodSummary {
        median: (0..p).map(|i| median(&column(i))).collect(),
        mean: (0..p)
            .map(|i| column(i).iter().sum::<f64>() / reports.len() as f64)
            .collect(),
    }
}

pub fn cmd_demo(args: &DemoArgs) -> Result<DemoReport, CliError> {
    if args.replicates == 0 {
        return Err(CliError::Parse("--replicates must be at least 1".into()));
    }
    let cfg = args.solver.config();
    cfg.validate()?;
    let base = args.data.spec(args.seed)?;
    let truth = base.true_eigen()?;

    let mut replicates = Vec::with_capacity(args.replicates);
    for index in 0..args.replicates {
        let spec = ExperimentSpec {
            seed: args.seed.wrapping_add(index as u64),
            ..base.clone()
        };
        let data = generate(&spec)?;
        let robust = fit(&data.samples, &cfg)?;
        let baseline = standard_pca(&data.samples, cfg.center)?;
        if index == 0 {
            if let Some(path) = &args.plot_csv {
                write_plot_csv(
                    path,
                    &data.samples,
                    &data.outlier_indices,
                    &truth,
                    &robust,
                    &baseline,
                )?;
            }
        }
        replicates.push(ReplicateReport {
            index,
            seed: spec.seed,
            outlier_count: data.outlier_indices.len(),
            mcpi: component_alignment(&robust.components, &truth.vectors)?,
            pca: component_alignment(&baseline.components, &truth.vectors)?,
        });
    }

    let p = base.p;
    let aggregate = Aggregate {
        mcpi: summarise(&replicates.iter().map(|r| &r.mcpi).collect::<Vec<_>>(), p),
        pca: summarise(&replicates.iter().map(|r| &r.pca).collect::<Vec<_>>(), p),
    };
    let report = DemoReport {
        schema_version: SCHEMA_VERSION,
        command: "demo",
        config: DemoConfigEcho {
            data: SpecEcho::from(&base),
            replicates: args.replicates,
            solver: cfg,
        },
        true_eigenvalues: vec_of(&truth.values),
        true_components: rows_of(&truth.vectors),
        replicates,
        aggregate,
    };
    if let Some(path) = &args.output {
        write_json(path, &report)?;
    }
    Ok(report)
}

/// Sample rows (`sample,k,is_outlier,x…`) followed by one row per component
/// and method (`true|mcpi|pca,i,0,x…`). Directions are scaled to two true
/// standard deviations and oriented to agree with the true component.
fn write_plot_csv(
    path: &Path,
    x: &DataMatrix,
    outliers: &[usize],
    truth: &crate::linalg::EigenPairs,
    robust: &PcaResult,
    baseline: &PcaResult,
) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    let io = |e| CliError::io(path, e);
    let p = x.p();
    let coords: Vec<String> = (1..=p).map(|j| format!("x{j}")).collect();
    writeln!(out, "kind,index,outlier,{}", coords.join(",")).map_err(io)?;
    let fmt = |v: &[f64]| {
        v.iter()
            .map(|c| format!("{c:.16e}"))
            .collect::<Vec<_>>()
            .join(",")
    };

    for k in 0..x.n() {
        let flag = u8::from(outliers.binary_search(&k).is_ok());
        writeln!(out, "sample,{k},{flag},{}", fmt(x.row(k).as_slice())).map_err(io)?;
    }
    let methods = [
        ("true", &truth.vectors),
        ("mcpi", &robust.components),
        ("pca", &baseline.components),
    ];
    for (name, components) in methods {
        let matched = component_alignment(components, &truth.vectors)?;
        for (i, &j) in matched.component_order.iter().enumerate() {
            let reference = truth.vectors.column(j);
            let mut dir = components.column(i).into_owned();
            if dir.dot(&reference) < 0.0 {
                dir.neg_mut();
            }
            let scaled = dir * (2.0 * truth.values[j].max(0.0).sqrt());
            writeln!(out, "{name},{j},0,{}", fmt(scaled.as_slice())).map_err(io)?;
        }
    }
    out.flush().map_err(io)
}
