//! Command-line front end. `main` in the binary only forwards here so the
//! commands can be driven from tests.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::Ordering;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::code::StabilizerCode;
use crate::enumerator::{
    analyze, build_x_code, distillation_polynomial, format_decimal, parse_vector_file,
    x_group_enumerator, DistillationReport,
};
use crate::error::{CodeError, EnumeratorError, OracleError, SearchError};
use crate::oracle::{cross_check, standard_samples, CrossCheck, MAX_ORACLE_QUBITS};
use crate::pauli::Axis;
use crate::search::{run_search, write_records, Emit, SearchConfig, SearchMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID_CODE: i32 = 3;
pub const EXIT_ORACLE_MISMATCH: i32 = 4;
pub const EXIT_INTERRUPTED: i32 = 130;

/// Random operators classified by `--verify` on top of the fixed probes.
const VERIFY_RANDOM_OPERATORS: usize = 500;
const VERIFY_SEED: u64 = 0x5eed;

#[derive(Parser, Debug)]
#[command(name = "magicdistill", version, about = "Signed weight enumerators and |T> distillation thresholds of [[n,1]] stabilizer codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerators, axis preservation and threshold of one code.
    Analyze {
        codefile: PathBuf,
        /// Cross-check against the dense-matrix oracle (n ≤ 7).
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive search over standard-form codes or M3-codes.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m3: bool,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// JSON-lines file for the emitted records.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Checkpoint file of finished branches.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Continue from an existing checkpoint instead of starting over.
        #[arg(long, requires = "checkpoint")]
        resume: bool,
        /// Report the bit metric in the summary.
        #[arg(long)]
        instrument: bool,
        #[arg(long, value_enum, default_value_t = EmitArg::Useful)]
        emit: EmitArg,
        #[arg(long, default_value_t = 2)]
        min_weight: u32,
    },
    /// CSV samples of W_dist, W_I and success probability over r ∈ [0, 1].
    Plotdata {
        codefile: PathBuf,
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
    /// All-X code and W_I from binary vectors, one 0/1 string per line.
    Xcode {
        vectorfile: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Dense-oracle cross-check of a code's enumerators and classifier.
    Verify {
        codefile: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum EmitArg {
    Useful,
    AxisPreserving,
    All,
}

impl From<EmitArg> for Emit {
    fn from(e: EmitArg) -> Self {
        match e {
            EmitArg::Useful => Emit::Useful,
            EmitArg::AxisPreserving => Emit::AxisPreserving,
            EmitArg::All => Emit::All,
        }
    }
}

/// Error with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::new(EXIT_FAILURE, e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::new(EXIT_FAILURE, e.to_string())
    }
}

impl From<CodeError> for CliError {
    fn from(e: CodeError) -> Self {
        let code = match e {
            CodeError::Parse { .. } | CodeError::EmptyCodeFile | CodeError::Pauli(_) => EXIT_USAGE,
            CodeError::GeneratorCount { .. } | CodeError::Invalid(_) | CodeError::CorruptFrame => {
                EXIT_INVALID_CODE
            }
        };
        CliError::new(code, e.to_string())
    }
}

impl From<EnumeratorError> for CliError {
    fn from(e: EnumeratorError) -> Self {
        match e {
            EnumeratorError::Code(c) => c.into(),
            EnumeratorError::VectorLength { .. } | EnumeratorError::VectorCharacter(_) => {
                CliError::new(EXIT_USAGE, e.to_string())
            }
            other => CliError::new(EXIT_INVALID_CODE, other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Code(c) => c.into(),
            OracleError::TooLarge { .. } => CliError::new(EXIT_USAGE, e.to_string()),
            other => CliError::new(EXIT_ORACLE_MISMATCH, other.to_string()),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        let code = match e {
            SearchError::TooSmall(_)
            | SearchError::TooLarge { .. }
            | SearchError::OddGeneratorCount(_)
            | SearchError::Checkpoint(_) => EXIT_USAGE,
            SearchError::Interrupted => EXIT_INTERRUPTED,
            _ => EXIT_FAILURE,
        };
        CliError::new(code, e.to_string())
    }
}

fn read_code(path: &Path) -> Result<StabilizerCode, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    let code = StabilizerCode::parse_code_file(&text)?;
    code.validate().map_err(CodeError::from)?;
    Ok(code)
}

fn verify_code(code: &StabilizerCode, report: &DistillationReport) -> Result<CrossCheck, CliError> {
    if code.num_qubits() > MAX_ORACLE_QUBITS {
        return Err(CliError::new(
            EXIT_USAGE,
            format!("--verify supports n ≤ {MAX_ORACLE_QUBITS}"),
        ));
    }
    Ok(cross_check(
        code,
        &report.enumerators,
        &standard_samples(),
        VERIFY_RANDOM_OPERATORS,
        VERIFY_SEED,
    )?)
}

fn human_report(report: &DistillationReport) -> String {
    let mut s = String::new();
    let e = &report.enumerators;
    let code = &report.code;
    let _ = writeln!(s, "code: [[{},1]] with {} generators", code.num_qubits(), code.generators().len());
    for g in code.generators() {
        let _ = writeln!(s, "  {g}");
    }
    let f = &e.frame;
    let _ = writeln!(s, "frame: X = {}, Y = {}, Z = {}", f.xbar, f.ybar, f.zbar);
    let _ = writeln!(s, "W_I = {}", e.w_i());
    for a in Axis::LOGICAL {
        let _ = writeln!(s, "W_{a} = {}", e.get(a));
    }
    let yes = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(s, "t-axis preserving: {}", yes(report.t_axis_preserving));
    if let Some(r) = report.relabeling {
        let _ = writeln!(s, "relabeling: {r}");
    }
    let _ = writeln!(s, "M3-code: {}", yes(report.m3_code));
    if let Some(w) = &report.w_dist {
        let _ = writeln!(s, "W_dist = {w}");
    }
    let radical = report
        .threshold
        .as_ref()
        .and_then(|t| t.radical.clone())
        .map(|r| format!(" = {r}"))
        .unwrap_or_default();
    let _ = writeln!(s, "threshold r* = {}{radical}", format_decimal(report.threshold_r()));
    let _ = writeln!(s, "useful: {}", yes(report.useful));
    if report.threshold.as_ref().is_some_and(|t| t.multiple_interior_roots) {
        let _ = writeln!(s, "note: several fixed points inside the physical range");
    }
    let _ = writeln!(s, "success probability at r = 1: {}", report.success_probability_at_pure());
    s
}

#[derive(Serialize)]
struct AnalyzeJson<'a> {
    #[serde(flatten)]
    report: crate::enumerator::ReportJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<&'a CrossCheck>,
}

fn cmd_analyze(codefile: &Path, verify: bool, json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let code = read_code(codefile)?;
    let report = analyze(&code)?;
    let check = if verify { Some(verify_code(&code, &report)?) } else { None };
    if json {
        let j = AnalyzeJson {
            report: report.to_json(),
            verification: check.as_ref(),
        };
        writeln!(out, "{}", serde_json::to_string_pretty(&j)?)?;
    } else {
        write!(out, "{}", human_report(&report))?;
        if let Some(c) = &check {
            writeln!(
                out,
                "oracle: max enumerator deviation {:.3e}, {} operators classified, {} mismatches",
                c.max_enumerator_deviation,
                c.operators_classified,
                c.classifier_mismatches.len()
            )?;
        }
    }
    match check {
        Some(c) if !c.passed() => Err(CliError::new(
            EXIT_ORACLE_MISMATCH,
            format!("oracle mismatch: {:?}", c.classifier_mismatches.first()),
        )),
        _ => Ok(()),
    }
}

fn cmd_verify(codefile: &Path, json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let code = read_code(codefile)?;
    let report = analyze(&code)?;
    let check = verify_code(&code, &report)?;
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&check)?)?;
    } else {
        writeln!(out, "max enumerator deviation: {:.3e}", check.max_enumerator_deviation)?;
        writeln!(out, "operators classified: {}", check.operators_classified)?;
        for m in &check.classifier_mismatches {
            writeln!(out, "mismatch: {m}")?;
        }
        writeln!(out, "{}", if check.passed() { "agree" } else { "DISAGREE" })?;
    }
    if !check.passed() {
        return Err(CliError::new(EXIT_ORACLE_MISMATCH, "oracle disagrees with exact computation"));
    }
    Ok(())
}

/// `r` samples on `[0, 1]` plus the polytope boundary `r = 1/√3`.
pub fn plot_rows(report: &DistillationReport, samples: usize) -> Result<String, CliError> {
    let w_dist = distillation_polynomial(&report.enumerators)?;
    if samples < 2 {
        return Err(CliError::new(EXIT_USAGE, "--samples must be at least 2"));
    }
    let n = report.code.num_qubits();
    let scale = (1u64 << (n - 1)) as f64;
    let mut rs: Vec<f64> = (0..samples).map(|k| k as f64 / (samples - 1) as f64).collect();
    let boundary = 1.0 / 3f64.sqrt();
    if !rs.iter().any(|&r| (r - boundary).abs() < 1e-15) {
        rs.push(boundary);
        rs.sort_by(f64::total_cmp);
    }
    let mut csv = String::from("r,rbar,w_dist,w_i,p_success\n");
    for r in rs {
        let rbar = r / 3f64.sqrt();
        let wi = report.enumerators.w_i().eval_f64(rbar);
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            format_decimal(r),
            format_decimal(rbar),
            format_decimal(w_dist.eval_f64(rbar)),
            format_decimal(wi),
            format_decimal(wi / scale)
        );
    }
    Ok(csv)
}

fn cmd_plotdata(codefile: &Path, samples: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let code = read_code(codefile)?;
    let report = analyze(&code)?;
    if !report.t_axis_preserving {
        return Err(CliError::new(EXIT_INVALID_CODE, "code is not |T>-axis preserving"));
    }
    write!(out, "{}", plot_rows(&report, samples)?)?;
    Ok(())
}

#[derive(Serialize)]
struct XcodeJson {
    n: usize,
    generators: Vec<String>,
    complete_code: bool,
    w_i: Vec<i64>,
    weights: Vec<(usize, i64)>,
}

fn cmd_xcode(vectorfile: &Path, json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let text = fs::read_to_string(vectorfile)
        .map_err(|e| CliError::new(EXIT_USAGE, format!("{}: {e}", vectorfile.display())))?;
    let (n, vectors) = parse_vector_file(&text)?;
    let w_i = x_group_enumerator(n, &vectors)?;
    let complete = vectors.len() + 1 == n;
    let generators: Vec<String> = if complete {
        build_x_code(n, &vectors)?
            .generators()
            .iter()
            .map(|g| g.to_string())
            .collect()
    } else {
        vectors
            .iter()
            .map(|&a| crate::pauli::PauliOperator::x_operator(n, a).to_string())
            .collect()
    };
    let weights: Vec<(usize, i64)> = w_i
        .coefficients()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| (k, c))
        .collect();
    if json {
        let j = XcodeJson {
            n,
            generators,
            complete_code: complete,
            w_i: w_i.coefficients().to_vec(),
            weights,
        };
        writeln!(out, "{}", serde_json::to_string_pretty(&j)?)?;
        return Ok(());
    }
    if !complete {
        writeln!(out, "# {} of {} generators; not a complete [[{n},1]] code", vectors.len(), n - 1)?;
    }
    for g in &generators {
        writeln!(out, "{g}")?;
    }
    writeln!(out, "# W_I = {w_i}")?;
    let listed: Vec<String> = weights.iter().map(|(k, c)| format!("{k}:{c}")).collect();
    writeln!(out, "# weights {{{}}}", listed.join(", "))?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    n: usize,
    m3: bool,
    jobs: usize,
    out_path: Option<&Path>,
    checkpoint: Option<&Path>,
    resume: bool,
    instrument: bool,
    emit: EmitArg,
    min_weight: u32,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let mode = if m3 { SearchMode::M3 } else { SearchMode::General };
    let mut config = SearchConfig::new(n, mode);
    config.jobs = jobs;
    config.instrument = instrument;
    config.emit = emit.into();
    config.min_weight = min_weight;
    config.checkpoint = checkpoint.map(Path::to_path_buf);
    config.validate()?;
    if let Some(path) = checkpoint {
        if !resume && path.exists() {
            fs::remove_file(path)?;
        }
    }
    let cancel = config.cancel.clone();
    // a second registration (tests running several searches) is harmless
    let _ = ctrlc::set_handler(move || cancel.store(true, Ordering::SeqCst));
    let outcome = run_search(&config)?;
    if let Some(path) = out_path {
        write_records(io::BufWriter::new(fs::File::create(path)?), &outcome.records)?;
    }
    writeln!(out, "{}", serde_json::to_string_pretty(&outcome.summary)?)?;
    Ok(())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { codefile, verify, json } => cmd_analyze(&codefile, verify, json, out),
        Command::Search {
            n,
            m3,
            jobs,
            out: out_path,
            checkpoint,
            resume,
            instrument,
            emit,
            min_weight,
        } => cmd_search(
            n,
            m3,
            jobs,
            out_path.as_deref(),
            checkpoint.as_deref(),
            resume,
            instrument,
            emit,
            min_weight,
            out,
        ),
        Command::Plotdata { codefile, samples } => cmd_plotdata(&codefile, samples, out),
        Command::Xcode { vectorfile, json } => cmd_xcode(&vectorfile, json, out),
        Command::Verify { codefile, json } => cmd_verify(&codefile, json, out),
    }
}

/// Parses `args`, runs the command against stdout and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
