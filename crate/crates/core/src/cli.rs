//! Command-line front end.
//!
//! Every subcommand is also a library function that takes file contents and
//! returns a [`Report`], so the binary is a thin wrapper around [`run`].

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::engine::{compile, Depth, DepthProfile, EngineError, Threshold};
use crate::format::{self, FormatError};
use crate::logic::Proposition;
use crate::semantics::{
    psi_sweep, ParameterAssignment, SemanticsError, Verdict, DEFAULT_DELTA_GRID, DEFAULT_PSI_SWEEP,
};
use crate::zplus::{from_zplus, to_zplus, ZPlusError};

/// Exit status when the input cannot be read or parsed.
pub const EXIT_INPUT_ERROR: i32 = 1;
/// `check`: the knowledge base is inconsistent.
pub const EXIT_INCONSISTENT: i32 = 2;
/// `query`: not entailed. `validate`: the samples refute the threshold.
pub const EXIT_NEGATIVE: i32 = 3;
/// `validate`: the fit is inconclusive.
pub const EXIT_INCONCLUSIVE: i32 = 4;

pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_ETA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Kv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    /// Knowledge-base file to Z+ rules.
    To,
    /// Z+ rule file to a knowledge base.
    From,
}

#[derive(Debug, Parser)]
#[command(name = "tgl", version, about = "Depth entailment for thresholded generalizations")]
struct Cli {
    /// Rule file to read.
    #[arg(long, global = true, value_name = "PATH")]
    kb: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide consistency and print the exception chain.
    Check,
    /// Decide a query `gamma => zeta @ j`.
    Query { query: String },
    /// Degree of rarity of a proposition.
    Rarity { proposition: String },
    /// Depth of every atom.
    Depthmap,
    /// Exception chain with the rules that fire at each depth.
    Explain,
    /// Translate between rule files and Z+ rule files.
    Zplus {
        #[arg(value_enum)]
        direction: Direction,
    },
    /// Check a query against sampled probability models.
    Validate {
        query: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_delimiter = ',', value_name = "CSV")]
        delta_grid: Option<Vec<f64>>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES, value_name = "N")]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_ETA, value_name = "R")]
        eta: f64,
        /// Uniform premise weights to sweep.
        #[arg(long, value_delimiter = ',', value_name = "CSV")]
        psi: Option<Vec<f64>>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    ZPlus(#[from] ZPlusError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("malformed record: {0}")]
    Record(String),
}

/// Exit status and output of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Report {
    fn ok(code: i32, stdout: String) -> Self {
        Report {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: &CliError) -> Self {
        Report {
            code: EXIT_INPUT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Options of `validate`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidateOptions {
    pub seed: u64,
    pub delta_grid: Vec<f64>,
    pub samples: usize,
    pub eta: f64,
    pub psi: Vec<f64>,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            seed: 0,
            delta_grid: DEFAULT_DELTA_GRID.to_vec(),
            samples: DEFAULT_SAMPLES,
            eta: DEFAULT_ETA,
            psi: DEFAULT_PSI_SWEEP.to_vec(),
        }
    }
}

/// Entry point of the binary: runs with the process arguments, prints and
/// returns the exit status.
pub fn main() -> i32 {
    let report = run(std::env::args_os());
    print!("{}", report.stdout);
    eprint!("{}", report.stderr);
    report.code
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Report {
                    code: EXIT_INPUT_ERROR,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Report::ok(0, text)
            };
        }
    };
    match dispatch(cli) {
        Ok(report) => report,
        Err(e) => Report::error(&e),
    }
}

fn dispatch(cli: Cli) -> Result<Report, CliError> {
    let path = cli
        .kb
        .ok_or_else(|| CliError::Usage("--kb PATH is required".into()))?;
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let fmt = cli.format;
    match cli.command {
        Command::Check => cmd_check(&text, fmt),
        Command::Query { query } => cmd_query(&text, &query, fmt),
        Command::Rarity { proposition } => cmd_rarity(&text, &proposition, fmt),
        Command::Depthmap => cmd_depthmap(&text, fmt),
        Command::Explain => cmd_explain(&text, fmt),
        Command::Zplus { direction } => cmd_zplus(&text, direction),
        Command::Validate {
            query,
            seed,
            delta_grid,
            samples,
            eta,
            psi,
        } => {
            let defaults = ValidateOptions::default();
            let options = ValidateOptions {
                seed,
                delta_grid: delta_grid.unwrap_or(defaults.delta_grid),
                samples,
                eta,
                psi: psi.unwrap_or(defaults.psi),
            };
            cmd_validate(&text, &query, &options, fmt)
        }
    }
}

fn render(p: &Proposition) -> String {
    p.display_expr().render(p.signature())
}

fn chain_lines(profile: &DepthProfile, out: &mut String, fmt: OutputFormat) {
    for (d, xi) in profile.chain().iter().enumerate() {
        match fmt {
            OutputFormat::Text => writeln!(out, "xi({d}) = {}", render(xi)),
            OutputFormat::Kv => writeln!(out, "xi.{d}={}", render(xi)),
        }
        .unwrap();
    }
}

/// Consistency check. Exit 0 when consistent, 2 when not.
pub fn cmd_check(kb_text: &str, fmt: OutputFormat) -> Result<Report, CliError> {
    let kb = format::parse_kb(kb_text)?;
    let profile = compile(&kb)?;
    let consistent = profile.is_consistent();
    let mut out = String::new();
    match fmt {
        OutputFormat::Text => {
            let word = if consistent { "consistent" } else { "inconsistent" };
            writeln!(out, "{word}").unwrap();
            writeln!(out, "D = {}", profile.fixpoint()).unwrap();
        }
        OutputFormat::Kv => {
            writeln!(out, "consistent={consistent}").unwrap();
            writeln!(out, "D={}", profile.fixpoint()).unwrap();
            writeln!(out, "window={}", profile.window()).unwrap();
        }
    }
    chain_lines(&profile, &mut out, fmt);
    let code = if consistent { 0 } else { EXIT_INCONSISTENT };
    Ok(Report::ok(code, out))
}

/// A decided query in serializable form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryRecord {
    pub gamma: String,
    pub zeta: String,
    pub threshold: Threshold,
    pub verdict: bool,
    pub d_antecedent: Depth,
    pub d_exception: Depth,
    pub vacuous: bool,
    pub fixpoint: usize,
    pub consistent: bool,
}

impl QueryRecord {
    /// The query as accepted by `query`.
    pub fn query_text(&self) -> String {
        format!("{} => {} @ {}", self.gamma, self.zeta, self.threshold)
    }

    pub fn to_kv(&self) -> String {
        let verdict = if self.verdict { "entailed" } else { "not_entailed" };
        format!(
            "verdict={verdict}\ngamma={}\nzeta={}\nthreshold={}\nd_antecedent={}\nd_exception={}\nvacuous={}\nD={}\nconsistent={}\n",
            self.gamma,
            self.zeta,
            self.threshold,
            self.d_antecedent,
            self.d_exception,
            self.vacuous,
            self.fixpoint,
            self.consistent
        )
    }

    pub fn to_text(&self) -> String {
        let verdict = if self.verdict { "entailed" } else { "not entailed" };
        let mut out = format!("{verdict}: {}\n", self.query_text());
        writeln!(out, "depth of antecedent: {}", self.d_antecedent).unwrap();
        writeln!(out, "depth of exception: {}", self.d_exception).unwrap();
        writeln!(
            out,
            "needs {} >= {} + {}",
            self.d_exception, self.d_antecedent, self.threshold
        )
        .unwrap();
        if self.vacuous {
            writeln!(out, "vacuous: the antecedent is impossible").unwrap();
        }
        if !self.consistent {
            writeln!(out, "note: the knowledge base is inconsistent").unwrap();
        }
        out
    }

    /// Reads the output of [`QueryRecord::to_kv`]. Unknown keys are ignored;
    /// a verdict that disagrees with the depths is rejected.
    pub fn from_kv(text: &str) -> Result<Self, CliError> {
        let mut fields = std::collections::HashMap::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Record(format!("line without `=`: {line}")))?;
            fields.insert(k.trim(), v.trim());
        }
        let get = |key: &str| {
            fields
                .get(key)
                .copied()
                .ok_or_else(|| CliError::Record(format!("missing key `{key}`")))
        };
        let flag = |key: &str| -> Result<bool, CliError> {
            get(key)?
                .parse()
                .map_err(|_| CliError::Record(format!("`{key}` is not a boolean")))
        };
        let verdict = match get("verdict")? {
            "entailed" => true,
            "not_entailed" => false,
            other => return Err(CliError::Record(format!("unknown verdict `{other}`"))),
        };
        let record = QueryRecord {
            gamma: get("gamma")?.to_string(),
            zeta: get("zeta")?.to_string(),
            threshold: get("threshold")?.parse()?,
            verdict,
            d_antecedent: get("d_antecedent")?.parse()?,
            d_exception: get("d_exception")?.parse()?,
            vacuous: flag("vacuous")?,
            fixpoint: get("D")?
                .parse()
                .map_err(|_| CliError::Record("`D` is not an integer".into()))?,
            consistent: flag("consistent")?,
        };
        let implied = record
            .d_exception
            .at_least_sum(record.d_antecedent, record.threshold.depth());
        if implied != record.verdict {
            return Err(CliError::Record("verdict disagrees with the depths".into()));
        }
        Ok(record)
    }
}

/// Decides `γ => ζ @ j` and returns the record alongside the exit status.
pub fn query_record(kb_text: &str, query: &str) -> Result<QueryRecord, CliError> {
    let (kb, q) = format::parse_kb_with_query(kb_text, query)?;
    let profile = compile(&kb)?;
    let outcome = profile.evaluate(&q)?;
    Ok(QueryRecord {
        gamma: render(q.antecedent()),
        zeta: render(q.consequent()),
        threshold: q.threshold(),
        verdict: outcome.entailed,
        d_antecedent: outcome.antecedent_depth,
        d_exception: outcome.exception_depth,
        vacuous: outcome.vacuous,
        fixpoint: profile.fixpoint(),
        consistent: profile.is_consistent(),
    })
}

/// Entailment query. Exit 0 when entailed, 3 when not.
pub fn cmd_query(kb_text: &str, query: &str, fmt: OutputFormat) -> Result<Report, CliError> {
    let record = query_record(kb_text, query)?;
    let out = match fmt {
        OutputFormat::Text => record.to_text(),
        OutputFormat::Kv => record.to_kv(),
    };
    let code = if record.verdict { 0 } else { EXIT_NEGATIVE };
    Ok(Report::ok(code, out))
}

/// Degree of rarity of one proposition.
pub fn cmd_rarity(kb_text: &str, prop: &str, fmt: OutputFormat) -> Result<Report, CliError> {
    let (kb, p) = format::parse_kb_with_proposition(kb_text, prop)?;
    let depth = compile(&kb)?.degree_of_rarity(&p)?;
    let out = match fmt {
        OutputFormat::Text => format!("{depth}\n"),
        OutputFormat::Kv => format!("proposition={}\nrarity={depth}\n", render(&p)),
    };
    Ok(Report::ok(0, out))
}

/// Depth of every atom, one per line.
pub fn cmd_depthmap(kb_text: &str, fmt: OutputFormat) -> Result<Report, CliError> {
    let kb = format::parse_kb(kb_text)?;
    let profile = compile(&kb)?;
    let sig = kb.signature();
    let labels: Vec<String> = (0..sig.atom_count()).map(|i| sig.atom_label(i)).collect();
    let width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (i, (label, depth)) in labels.iter().zip(profile.atom_depths()).enumerate() {
        match fmt {
            OutputFormat::Text => writeln!(out, "{label:<width$}  {depth}"),
            OutputFormat::Kv => writeln!(out, "atom.{i}={depth}"),
        }
        .unwrap();
    }
    Ok(Report::ok(0, out))
}

/// Exception chain with the rules whose exceptions enter at each depth.
pub fn cmd_explain(kb_text: &str, fmt: OutputFormat) -> Result<Report, CliError> {
    let kb = format::parse_kb(kb_text)?;
    let profile = compile(&kb)?;
    let mut out = String::new();
    let chain = profile.chain();
    for (d, xi) in chain.iter().enumerate() {
        let fired = profile.fired_at(d);
        match fmt {
            OutputFormat::Text => {
                writeln!(out, "xi({d}) = {}", render(xi)).unwrap();
                for &i in fired {
                    writeln!(out, "  rule {i}: {}", kb.rules()[i]).unwrap();
                }
            }
            OutputFormat::Kv => {
                writeln!(out, "xi.{d}={}", render(xi)).unwrap();
                let list: Vec<String> = fired.iter().map(|i| i.to_string()).collect();
                writeln!(out, "fired.{d}={}", list.join(",")).unwrap();
            }
        }
    }
    let consistent = profile.is_consistent();
    match fmt {
        OutputFormat::Text => {
            writeln!(out, "D = {}", profile.fixpoint()).unwrap();
            writeln!(out, "xi(inf) = {}", render(&profile.xi_infinity())).unwrap();
            let word = if consistent { "consistent" } else { "inconsistent" };
            writeln!(out, "{word}").unwrap();
        }
        OutputFormat::Kv => {
            writeln!(out, "D={}", profile.fixpoint()).unwrap();
            writeln!(out, "xi.inf={}", render(&profile.xi_infinity())).unwrap();
            writeln!(out, "consistent={consistent}").unwrap();
        }
    }
    Ok(Report::ok(0, out))
}

/// Translation between the two rule-file formats.
pub fn cmd_zplus(text: &str, direction: Direction) -> Result<Report, CliError> {
    let out = match direction {
        Direction::To => format::write_zplus(&to_zplus(&format::parse_kb(text)?)?),
        Direction::From => {
            let (sig, rules) = format::parse_zplus(text)?;
            format::write_kb(&from_zplus(&rules, &sig)?)
        }
    };
    Ok(Report::ok(0, out))
}

/// Monte-Carlo check of a query: fits the quantile decay exponent for each
/// uniform `ψ`. Exit 0 when every run supports the threshold, 3 when they
/// refute it, 4 otherwise.
pub fn cmd_validate(
    kb_text: &str,
    query: &str,
    options: &ValidateOptions,
    fmt: OutputFormat,
) -> Result<Report, CliError> {
    let (kb, q) = format::parse_kb_with_query(kb_text, query)?;
    let symbolic = compile(&kb)?.entails_in_probability(&q)?;
    let first_delta = options.delta_grid.first().copied().unwrap_or(0.5);
    let template = ParameterAssignment::new(vec![1.0; kb.len()], first_delta, 1.0, options.eta)?;
    let sweep = psi_sweep(
        &kb,
        &q,
        &options.delta_grid,
        &template,
        &options.psi,
        options.samples,
        options.seed,
    )?;
    let mut out = String::new();
    match fmt {
        OutputFormat::Text => {
            writeln!(out, "query: {q}").unwrap();
            let word = if symbolic { "entailed" } else { "not entailed" };
            writeln!(out, "depth verdict: {word}").unwrap();
            for (psi, report) in &sweep.runs {
                writeln!(out, "psi = {psi}").unwrap();
                for p in &report.points {
                    writeln!(out, "  delta = {:<8} quantile = {:e}", p.delta, p.quantile).unwrap();
                }
                writeln!(
                    out,
                    "  slope = {:.4}  {}",
                    report.fitted_exponent, report.verdict
                )
                .unwrap();
            }
            writeln!(out, "{}", sweep.verdict).unwrap();
        }
        OutputFormat::Kv => {
            writeln!(out, "verdict={}", sweep.verdict).unwrap();
            writeln!(out, "threshold={}", q.threshold()).unwrap();
            writeln!(out, "entailed={symbolic}").unwrap();
            writeln!(out, "samples={}", options.samples).unwrap();
            writeln!(out, "seed={}", options.seed).unwrap();
            for (i, (psi, report)) in sweep.runs.iter().enumerate() {
                writeln!(out, "psi.{i}={psi}").unwrap();
                writeln!(out, "slope.{i}={}", report.fitted_exponent).unwrap();
                writeln!(out, "verdict.{i}={}", report.verdict).unwrap();
                for (g, p) in report.points.iter().enumerate() {
                    writeln!(out, "quantile.{i}.{g}={}", p.quantile).unwrap();
                }
            }
        }
    }
    let code = match sweep.verdict {
        Verdict::Supports => 0,
        Verdict::Refutes => EXIT_NEGATIVE,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    };
    Ok(Report::ok(code, out))
}
