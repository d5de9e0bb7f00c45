//! Command-line front end.
//!
//! Every run prints one JSON document: a report on success, or
//! `{"error": {"kind", "message"}}` on failure. Exit codes: 0 success,
//! 1 bad input or arguments, 2 computation failure.

mod input;
mod selftest;
mod tasks;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde_json::{json, Map, Value};

use crate::error::Error;
pub use input::{parse_input, parse_matrix_file, Format, ParsedInput};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Task {
    Charpoly,
    Det,
    Minor,
    Cofactor,
    Eigenvector,
    KirchhoffCharpoly,
    TropicalSpectrum,
    Validate,
    Selftest,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Self::Charpoly => "charpoly",
            Self::Det => "det",
            Self::Minor => "minor",
            Self::Cofactor => "cofactor",
            Self::Eigenvector => "eigenvector",
            Self::KirchhoffCharpoly => "kirchhoff-charpoly",
            Self::TropicalSpectrum => "tropical-spectrum",
            Self::Validate => "validate",
            Self::Selftest => "selftest",
        }
    }

    fn default_mode(self) -> Mode {
        match self {
            Self::TropicalSpectrum | Self::Validate => Mode::Tropical,
            _ => Mode::Exact,
        }
    }

    fn allows(self, mode: Mode) -> bool {
        match self {
            Self::TropicalSpectrum | Self::Validate => mode == Mode::Tropical,
            Self::Charpoly | Self::Selftest => true,
            _ => mode != Mode::Tropical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
    Tropical,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::Float => "float",
            Self::Tropical => "tropical",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "forest-spectra",
    version,
    about = "Characteristic polynomials, minors, cofactors and eigenvectors from rooted forest sums"
)]
pub struct Args {
    #[arg(long, value_enum)]
    pub task: Task,
    /// Defaults to tropical for tropical-spectrum and validate, exact otherwise.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// JSON (`.json`) or CSV (`.csv`) input file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// One-based indices removed for `minor`, e.g. `1,3`.
    #[arg(long, value_delimiter = ',')]
    pub roots: Vec<usize>,
    /// One-based row (`cofactor`) or pivot (`eigenvector`).
    #[arg(long = "n")]
    pub n: Option<usize>,
    /// One-based column for `cofactor`.
    #[arg(long = "m")]
    pub m: Option<usize>,
    /// Eigenvalue for `eigenvector`: `p/q`, integer or decimal literal.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Strictly decreasing ε schedule for `validate`.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.05")]
    pub eps: Vec<f64>,
    /// Left eigenvector (eigenvector of the transpose).
    #[arg(long)]
    pub transpose: bool,
    /// Count zero-weight arcs as present when counting forests.
    #[arg(long)]
    pub include_zero_arcs: bool,
    /// Refuse inputs with more states than this.
    #[arg(long, default_value_t = 12)]
    pub max_n: usize,
    /// Seed of the selftest sampler.
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
    /// Number of random matrices in the selftest.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
}

/// A validated request; indices are zero-based.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskRequest {
    pub task: Task,
    pub mode: Mode,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub roots: Vec<usize>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub lambda: Option<String>,
    pub eps: Vec<f64>,
    pub transpose: bool,
    pub include_zero_arcs: bool,
    pub max_n: usize,
    pub seed: u64,
    pub samples: usize,
}

fn zero_based(label: usize, flag: &str) -> Result<usize, CliError> {
    label
        .checked_sub(1)
        .ok_or_else(|| CliError::input("InvalidArgument", format!("{flag} takes one-based indices, got 0")))
}

impl TryFrom<Args> for TaskRequest {
    type Error = CliError;

    fn try_from(args: Args) -> Result<Self, CliError> {
        let mode = args.mode.unwrap_or(args.task.default_mode());
        if !args.task.allows(mode) {
            return Err(CliError::input(
                "InvalidArgument",
                format!("task {} does not run in {} mode", args.task.name(), mode.name()),
            ));
        }
        if args.input.is_none() && args.task != Task::Selftest {
            return Err(CliError::input("InvalidArgument", format!("task {} needs --input", args.task.name())));
        }
        let roots = args.roots.iter().map(|&r| zero_based(r, "--roots")).collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            task: args.task,
            mode,
            input: args.input,
            output: args.output,
            roots,
            n: args.n.map(|n| zero_based(n, "--n")).transpose()?,
            m: args.m.map(|m| zero_based(m, "--m")).transpose()?,
            lambda: args.lambda,
            eps: args.eps,
            transpose: args.transpose,
            include_zero_arcs: args.include_zero_arcs,
            max_n: args.max_n,
            seed: args.seed,
            samples: args.samples,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
    pub position: Option<(u64, u64)>,
}

impl CliError {
    pub fn input(kind: &str, message: impl Into<String>) -> Self {
        Self { kind: kind.into(), message: message.into(), exit_code: EXIT_INPUT, position: None }
    }

    pub fn computation(kind: &str, message: impl Into<String>) -> Self {
        Self { kind: kind.into(), message: message.into(), exit_code: EXIT_COMPUTATION, position: None }
    }

    pub fn at(mut self, line: u64, column: u64) -> Self {
        self.position = Some((line, column));
        self
    }

    pub fn to_json(&self) -> Value {
        let mut body = Map::new();
        body.insert("kind".into(), json!(self.kind));
        body.insert("message".into(), json!(self.message));
        if let Some((line, column)) = self.position {
            body.insert("line".into(), json!(line));
            body.insert("column".into(), json!(column));
        }
        json!({ "error": body })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::EmptyMatrix => "EmptyMatrix",
            Error::InvalidQuery(_) => "InvalidQuery",
            Error::InvalidIndex { .. } => "InvalidIndex",
            Error::MissingArc { .. } => "MissingArc",
            Error::LoopArc(_) => "LoopArc",
            Error::NotAForest(_) => "NotAForest",
            Error::ZeroDenominator { .. } => "ZeroDenominator",
            Error::TooLarge { .. } => "TooLarge",
            Error::ConvergenceFailure(_) => "ConvergenceFailure",
            Error::NegationAttempted => "NegationAttempted",
            Error::InvalidRate(_) => "InvalidRate",
            Error::DegenerateSlopes { .. } => "DegenerateSlopes",
            Error::InvalidEpsilon(_) => "InvalidEpsilon",
        };
        let computational = matches!(
            e,
            Error::ZeroDenominator { .. }
                | Error::ConvergenceFailure(_)
                | Error::NegationAttempted
                | Error::DegenerateSlopes { .. }
                | Error::MissingArc { .. }
        );
        if computational {
            Self::computation(kind, e.to_string())
        } else {
            Self::input(kind, e.to_string())
        }
    }
}

/// Task output before the common envelope is added.
#[derive(Debug, Clone, Default)]
pub struct TaskOutput {
    pub result: Value,
    pub forest_count: Option<u64>,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
    pub exit_code: i32,
}

impl TaskOutput {
    fn new(result: Value) -> Self {
        Self { result, ..Self::default() }
    }
}

/// Runs one request and returns the report with its exit code.
pub fn run(request: &TaskRequest) -> Result<(Value, i32), CliError> {
    let start = Instant::now();
    let (n, echo, out) = if request.task == Task::Selftest {
        (Value::Null, Value::Null, selftest::run(request)?)
    } else {
        let path = request.input.as_ref().expect("checked when the request was built");
        let parsed = parse_matrix_file(path, request.mode)?;
        if parsed.n() > request.max_n {
            return Err(CliError::input(
                "TooLarge",
                format!(
                    "n = {} exceeds --max-n {}: a dense matrix has up to (n+1)^(n-1) rooted forests to enumerate; \
                     raise --max-n to run anyway",
                    parsed.n(),
                    request.max_n
                ),
            ));
        }
        let out = tasks::run(request, &parsed)?;
        (json!(parsed.n()), parsed.echo(), out)
    };
    let mut report = Map::new();
    report.insert("task".into(), json!(request.task.name()));
    report.insert("mode".into(), json!(request.mode.name()));
    report.insert("n".into(), n);
    report.insert("result".into(), out.result);
    if let Some(count) = out.forest_count {
        report.insert("forest_count".into(), json!(count));
    }
    report.insert("notes".into(), json!(out.notes));
    report.insert("warnings".into(), json!(out.warnings));
    report.insert("input_echo".into(), echo);
    report.insert("elapsed_ms".into(), json!(start.elapsed().as_secs_f64() * 1e3));
    Ok((Value::Object(report), out.exit_code))
}

/// Parses `argv`, runs the request and renders the JSON document. The
/// report goes to `--output` when given; the returned text is what belongs
/// on standard output.
pub fn execute<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            return (EXIT_OK, e.to_string());
        }
        Err(e) => return render_error(&CliError::input("InvalidArgument", e.to_string().trim_end())),
    };
    let request = match TaskRequest::try_from(args) {
        Ok(r) => r,
        Err(e) => return render_error(&e),
    };
    match run(&request) {
        Ok((report, code)) => {
            let text = pretty(&report);
            match &request.output {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => (code, String::new()),
                    Err(e) => render_error(&CliError::input("IoError", format!("cannot write {}: {e}", path.display()))),
                },
                None => (code, text),
            }
        }
        Err(e) => render_error(&e),
    }
}

fn render_error(e: &CliError) -> (i32, String) {
    (e.exit_code, pretty(&e.to_json()))
}

fn pretty(v: &Value) -> String {
    let mut text = serde_json::to_string_pretty(v).expect("JSON values always serialise");
    text.push('\n');
    text
}

/// Caps the global rayon pool from `FOREST_SPECTRA_THREADS` when set.
pub fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("FOREST_SPECTRA_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("FOREST_SPECTRA_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request(args: &[&str]) -> Result<TaskRequest, CliError> {
        let argv = std::iter::once("forest-spectra").chain(args.iter().copied());
        TaskRequest::try_from(Args::try_parse_from(argv).unwrap())
    }

    #[test]
    fn task_mode_compatibility() {
        assert!(request(&["--task", "tropical-spectrum", "--mode", "exact", "--input", "x"]).is_err());
        assert!(request(&["--task", "eigenvector", "--mode", "tropical", "--input", "x"]).is_err());
        assert_eq!(request(&["--task", "validate", "--input", "x"]).unwrap().mode, Mode::Tropical);
        assert_eq!(request(&["--task", "det", "--input", "x"]).unwrap().mode, Mode::Exact);
    }

    #[test]
    fn labels_become_zero_based() {
        let r = request(&["--task", "minor", "--roots", "1,3", "--input", "x"]).unwrap();
        assert_eq!(r.roots, vec![0, 2]);
        assert_eq!(request(&["--task", "cofactor", "--n", "0", "--m", "1", "--input", "x"]).unwrap_err().exit_code, 1);
    }

    #[test]
    fn missing_input_is_an_input_error() {
        assert_eq!(request(&["--task", "det"]).unwrap_err().exit_code, EXIT_INPUT);
    }

    #[test]
    fn bad_flags_are_reported_as_json() {
        let (code, text) = execute(["forest-spectra", "--task", "nonsense"]);
        assert_eq!(code, EXIT_INPUT);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["error"]["kind"], "InvalidArgument");
    }

    #[test]
    fn library_errors_keep_their_class() {
        assert_eq!(CliError::from(Error::ZeroDenominator { pivot: 0 }).exit_code, EXIT_COMPUTATION);
        assert_eq!(CliError::from(Error::InvalidIndex { index: 4, n: 2 }).exit_code, EXIT_INPUT);
    }
}
