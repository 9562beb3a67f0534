//! Command-line surface and exit-code policy.
//!
//! Exit codes: 0 on success, 1 on a domain error, 2 on a usage error and 3
//! when a checked inequality fails.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand};
use graphon_cheeger::partition::sweep_cut;
use graphon_cheeger::pipeline::DEFAULT_ORACLE_LIMIT;
use graphon_cheeger::spectral::discrete_spectrum;
use graphon_cheeger::{
    brute_force_hk, eigen_k, k_way_partition, verify_theorem, CellSet, Error, OracleResult,
    PartitionConfig, StepGraphon, VertexFunction,
};

use crate::canonical::{format_float, to_canonical_string};
use crate::error::{io_error, CliError, Result};
use crate::io::{load_graphon, Format};
use crate::preset::{discretize_preset, KernelPreset};
use crate::report::{
    InputInfo, OracleSection, PartitionSection, Report, SpectrumSection, SweepSection,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

pub const SEED_ENV: &str = "GRAPHON_CHEEGER_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "graphon-cheeger",
    version,
    about = "Spectral k-way partitioning of step graphons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bottom of the spectrum, step-space and graphon values side by side.
    Spectrum(SpectrumArgs),
    /// Run the partitioning pipeline and report the sets with all certificates.
    Partition(PartitionArgs),
    /// Exhaustive k-way expansion at cell granularity.
    Oracle(OracleArgs),
    /// Check both sides of the k-way Cheeger inequality for a partition.
    Verify(VerifyArgs),
    /// Best threshold cut of a single function.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Analytic kernel: constant:p, sbm:blocks,p,q, product, mean or min.
    #[arg(
        long,
        conflicts_with = "input",
        required_unless_present = "input",
        requires = "n"
    )]
    pub preset: Option<KernelPreset>,
    /// Kernel file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Format of --input; guessed from the extension when omitted.
    #[arg(long, value_enum, requires = "input")]
    pub format: Option<Format>,
    /// Number of cells for --preset.
    #[arg(long)]
    pub n: Option<usize>,
    /// Sample points per cell axis when discretizing a preset.
    #[arg(long, default_value_t = 8)]
    pub subsample: usize,
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    pub require_connected: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a CSV table here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Grid shifts tried before giving up on the mass threshold.
    #[arg(long, default_value_t = 64)]
    pub max_tries: usize,
    /// Extra mass tolerated below the acceptance threshold.
    #[arg(long, default_value_t = 0.0)]
    pub slack: f64,
}

impl SearchArgs {
    fn config(&self) -> PartitionConfig {
        PartitionConfig {
            max_tries: self.max_tries,
            slack: self.slack,
            allow_shortfall: true,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Check the inequality on the result and exit with 3 if it fails.
    #[arg(long)]
    pub verify: bool,
    /// Largest labeling count for which --verify also runs the oracle.
    #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
    pub oracle_limit: u128,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub k: usize,
    /// Refuse inputs with more than this many labelings.
    #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
    pub oracle_limit: u128,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Defaults to the k of --result.
    #[arg(long, required_unless_present = "result")]
    pub k: Option<usize>,
    /// A report written by `partition`; without it the pipeline is run first.
    #[arg(long)]
    pub result: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
    pub oracle_limit: u128,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// File with one real per cell, whitespace or comma separated.
    #[arg(long, conflicts_with = "eigenfunction")]
    pub function: Option<PathBuf>,
    /// Sweep the j-th eigenfunction (1-based).
    #[arg(long, default_value_t = 2)]
    pub eigenfunction: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Resolves `--preset` or `--input` to a graphon.
pub fn load_source(source: &SourceArgs) -> Result<(StepGraphon, InputInfo)> {
    if let Some(preset) = &source.preset {
        let n = source
            .n
            .ok_or_else(|| CliError::Usage("--preset requires --n".into()))?;
        if n == 0 {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        if source.subsample == 0 {
            return Err(CliError::Usage("--subsample must be at least 1".into()));
        }
        let w = discretize_preset(preset, n, source.subsample, source.require_connected)?;
        let info = InputInfo {
            source: "preset".into(),
            preset: Some(preset.to_string()),
            subsample: Some(source.subsample),
            path: None,
            format: None,
            n,
            require_connected: source.require_connected,
        };
        return Ok((w, info));
    }
    let path = source
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage("one of --preset or --input is required".into()))?;
    let format = source.format.unwrap_or_else(|| Format::from_path(path));
    let w = load_graphon(path, format, source.require_connected)?;
    if let Some(n) = source.n {
        if n != w.n() {
            return Err(CliError::Usage(format!(
                "--n {n} disagrees with the {} cells in {}",
                w.n(),
                path.display()
            )));
        }
    }
    let info = InputInfo {
        source: "file".into(),
        preset: None,
        subsample: None,
        path: Some(path.display().to_string()),
        format: Some(format.name().into()),
        n: w.n(),
        require_connected: source.require_connected,
    };
    Ok((w, info))
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(io_error(path))
}

fn emit(report: &Report, output: &OutputArgs, csv: Option<String>) -> Result<()> {
    let text = to_canonical_string(report)?;
    match &output.out {
        Some(path) => write_file(path, &text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(io_error("<stdout>"))?;
        }
    }
    if let (Some(path), Some(table)) = (&output.csv, csv) {
        write_file(path, &table)?;
    }
    Ok(())
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let report = |e: csv::Error| CliError::Report(e.to_string());
    writer.write_record(header).map_err(report)?;
    for row in rows {
        writer.write_record(&row).map_err(report)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Report(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Report(e.to_string()))
}

fn optional_float(x: Option<f64>) -> String {
    x.map_or_else(String::new, format_float)
}

fn set_rows(w: &StepGraphon, sets: &[CellSet]) -> Result<Vec<Vec<String>>> {
    sets.iter()
        .enumerate()
        .map(|(i, s)| {
            Ok(vec![
                (i + 1).to_string(),
                s.len().to_string(),
                format_float(w.expansion(s)?),
                s.members()
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(" "),
            ])
        })
        .collect()
}

/// Runs the oracle when the labeling count is within `limit`.
fn oracle_if_feasible(w: &StepGraphon, k: usize, limit: u128) -> Result<Option<OracleResult>> {
    match brute_force_hk(w, k, limit) {
        Ok(o) => Ok(Some(o)),
        Err(Error::TooLarge { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn spectrum(args: &SpectrumArgs) -> Result<i32> {
    check_k(args.k)?;
    let (w, info) = load_source(&args.source)?;
    let section = SpectrumSection::new(args.k, discrete_spectrum(&w)?);
    let rows = (0..args.k).map(|j| {
        vec![
            (j + 1).to_string(),
            optional_float(section.discrete.get(j).copied()),
            format_float(section.graphon[j]),
        ]
    });
    let table = csv_table(&["index", "discrete", "graphon"], rows)?;
    let mut report = Report::new(info);
    report.spectrum = Some(section);
    emit(&report, &args.output, Some(table))?;
    Ok(EXIT_OK)
}

fn partition(args: &PartitionArgs) -> Result<i32> {
    check_k(args.k)?;
    let (w, info) = load_source(&args.source)?;
    let result = k_way_partition(&w, args.k, args.search.seed, &args.search.config())?;
    let mut report = Report::new(info);
    report.spectrum = Some(SpectrumSection::new(
        args.k,
        eigen_k(&w, args.k)?.eigenvalues().to_vec(),
    ));
    let mut code = EXIT_OK;
    if args.verify {
        let oracle = oracle_if_feasible(&w, args.k, args.oracle_limit)?;
        let verdict = verify_theorem(&w, args.k, &result, oracle.as_ref())?;
        if !verdict.passed {
            code = EXIT_CHECK_FAILED;
        }
        report.oracle = oracle.as_ref().map(OracleSection::from);
        report.verify = Some(verdict);
    }
    let mut rows = set_rows(&w, &result.sets)?;
    for (row, bound) in rows.iter_mut().zip(&result.certificates.sweep.bounds) {
        row.insert(3, format_float(*bound));
    }
    let table = csv_table(&["set", "size", "expansion", "sweep_bound", "cells"], rows)?;
    report.partition = Some(PartitionSection::from(&result));
    emit(&report, &args.output, Some(table))?;
    Ok(code)
}

fn oracle(args: &OracleArgs) -> Result<i32> {
    check_k(args.k)?;
    let (w, info) = load_source(&args.source)?;
    let o = brute_force_hk(&w, args.k, args.oracle_limit)?;
    let table = csv_table(
        &["set", "size", "expansion", "cells"],
        set_rows(&w, &o.witness)?,
    )?;
    let mut report = Report::new(info);
    report.oracle = Some(OracleSection::from(&o));
    emit(&report, &args.output, Some(table))?;
    Ok(EXIT_OK)
}

fn verify(args: &VerifyArgs) -> Result<i32> {
    let (w, info) = load_source(&args.source)?;
    let section = match &args.result {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(io_error(path))?;
            Report::from_json(&text)?.partition.ok_or_else(|| {
                CliError::Report(format!("{} has no partition section", path.display()))
            })?
        }
        None => {
            let k = args.k.unwrap_or(0);
            check_k(k)?;
            PartitionSection::from(&k_way_partition(
                &w,
                k,
                args.search.seed,
                &args.search.config(),
            )?)
        }
    };
    let k = args.k.unwrap_or(section.k);
    check_k(k)?;
    if section.n != w.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            found: section.n,
        }
        .into());
    }
    let result = section.to_result()?;
    let oracle = oracle_if_feasible(&w, k, args.oracle_limit)?;
    let verdict = verify_theorem(&w, k, &result, oracle.as_ref())?;
    let rows = verdict.checks.iter().map(|c| {
        vec![
            c.name.clone(),
            format_float(c.lhs),
            format_float(c.rhs),
            format_float(c.slack),
            c.passed.to_string(),
        ]
    });
    let table = csv_table(&["check", "lhs", "rhs", "slack", "passed"], rows)?;
    let code = if verdict.passed {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    let mut report = Report::new(info);
    report.partition = Some(section);
    report.oracle = oracle.as_ref().map(OracleSection::from);
    report.verify = Some(verdict);
    emit(&report, &args.output, Some(table))?;
    Ok(code)
}

/// Reads one real per cell from text separated by whitespace or commas.
pub fn parse_function(text: &str) -> Result<VertexFunction> {
    let mut values = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        for token in line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            let column = line.find(token).unwrap_or(0) + 1;
            let v = token.parse().map_err(|_| CliError::Parse {
                line: line_no + 1,
                column,
                message: format!("`{token}` is not a number"),
            })?;
            values.push(v);
        }
    }
    Ok(VertexFunction::new(values)?)
}

fn sweep(args: &SweepArgs) -> Result<i32> {
    let (w, info) = load_source(&args.source)?;
    let (label, g) = match &args.function {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(io_error(path))?;
            ("file".to_string(), parse_function(&text)?)
        }
        None => {
            let j = args.eigenfunction;
            if j == 0 || j > w.n() {
                return Err(CliError::Usage(format!(
                    "--eigenfunction must lie in 1..={}",
                    w.n()
                )));
            }
            let basis = eigen_k(&w, j)?;
            (
                format!("eigenfunction:{j}"),
                basis.functions()[j - 1].clone(),
            )
        }
    };
    let cut = sweep_cut(&w, &g)?;
    let rows = cut.profile.iter().map(|s| {
        vec![
            format_float(s.threshold),
            s.size.to_string(),
            optional_float(s.expansion),
        ]
    });
    let table = csv_table(&["threshold", "size", "expansion"], rows)?;
    let code = if cut.expansion <= cut.bound + graphon_cheeger::pipeline::SWEEP_TOLERANCE {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    let mut report = Report::new(info);
    report.sweep = Some(SweepSection::new(label, &cut));
    emit(&report, &args.output, Some(table))?;
    Ok(code)
}

pub fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Spectrum(a) => spectrum(a),
        Command::Partition(a) => partition(a),
        Command::Oracle(a) => oracle(a),
        Command::Verify(a) => verify(a),
        Command::Sweep(a) => sweep(a),
    }
}

fn exit_code(error: &CliError) -> i32 {
    match error {
        CliError::Usage(_) => EXIT_USAGE,
        e if matches!(e.graphon_error(), Some(Error::CertificateViolation(_))) => EXIT_CHECK_FAILED,
        _ => EXIT_DOMAIN,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(error) => {
            let message = serde_json::json!({
                "error": { "kind": error.kind(), "message": error.to_string() }
            });
            eprintln!("{message}");
            exit_code(&error)
        }
    }
}
