mod analyze;
mod document;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use stationary_af::{corpus, Error};

use analyze::{CheckKind, Request};
use document::MatrixDocument;

/// Exact invariants and equivalence certificates for stationary Bratteli
/// diagrams.
#[derive(Parser)]
#[command(name = "stationary-af", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one or more matrix documents. Pairwise checks read J, K and
    /// an optional intertwiner A1 (default: identity) in that order.
    Analyze {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        charpoly: bool,
        /// Perron eigenvalue, eigenvectors and spectral radii.
        #[arg(long)]
        pf: bool,
        #[arg(long)]
        dimgroup: bool,
        #[arg(long)]
        primitive: bool,
        /// Idempotent tower modulo p^1..p^m.
        #[arg(long, num_args = 2, value_names = ["P", "M"])]
        padic: Option<Vec<u64>>,
        #[arg(long, value_enum)]
        check: Vec<CheckKind>,
        /// Inclusive exponent range a..b for --check conjugate.
        #[arg(long, value_parser = parse_range)]
        powers: Option<(u32, u32)>,
        /// Search budget: largest lag for se, largest exponent for cstar.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run or list the built-in example corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    Run {
        /// Only items whose tag starts with this prefix.
        #[arg(long)]
        only: Option<String>,
    },
    List,
    /// Write every corpus matrix as a document `<name>.json` into a directory.
    Export { dir: PathBuf },
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: u32 = a.parse().map_err(|_| format!("bad start {a:?}"))?;
    let b: u32 = b.parse().map_err(|_| format!("bad end {b:?}"))?;
    if a == 0 || a > b {
        return Err("need 1 <= a <= b".into());
    }
    Ok((a, b))
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Parse(String),
    Precondition { name: &'static str, message: String },
    Budget(String),
    /// Corpus checks ran but some failed.
    Checks(usize),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Checks(_) => 1,
            Failure::Usage(_) | Failure::Parse(_) => 2,
            Failure::Precondition { .. } => 3,
            Failure::Budget(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => format!("usage error: {m}"),
            Failure::Parse(m) => format!("parse error: {m}"),
            Failure::Precondition { name, message } => format!("precondition failed [{name}]: {message}"),
            Failure::Budget(m) => format!("budget exhausted: {m}"),
            Failure::Checks(n) => format!("{n} corpus item(s) failed"),
        }
    }
}

fn error_name(e: &Error) -> &'static str {
    match e {
        Error::ZeroPolynomialDivisor => "zero_polynomial_divisor",
        Error::ZeroPolynomial => "zero_polynomial",
        Error::DivisionByZero => "division_by_zero",
        Error::FieldMismatch => "field_mismatch",
        Error::DimensionMismatch(_) => "dimension_mismatch",
        Error::NotSquare { .. } => "not_square",
        Error::Singular => "singular",
        Error::NegativeEntry { .. } => "negative_entry",
        Error::NotPrimitive => "not_primitive",
        Error::InvalidCompanion(_) => "invalid_companion",
        Error::NotCompanionForm(_) => "not_companion_form",
        Error::PerronMismatch(_) => "perron_mismatch",
        Error::IntertwinerCondition { .. } => "intertwiner_condition",
        Error::IntegralityPrecondition { .. } => "integrality_precondition",
        Error::BudgetExhausted(_) => "budget_exhausted",
        Error::NotMember => "not_member",
        Error::Unsupported(_) => "unsupported",
        Error::Certification(_) => "certification",
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            // Interval refinement giving up is a resource limit, not bad input.
            Error::BudgetExhausted(_) | Error::Certification(_) => Failure::Budget(e.to_string()),
            _ => Failure::Precondition { name: error_name(&e), message: e.to_string() },
        }
    }
}

fn load(path: &PathBuf) -> Result<MatrixDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    MatrixDocument::parse(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn corpus_list() -> Result<(), Failure> {
    let items = corpus::select(None);
    for it in &items {
        eprintln!("{:<22} {}", it.tag, it.description);
    }
    println!("{}", serde_json::to_string_pretty(&items).expect("plain data"));
    Ok(())
}

fn corpus_export(dir: &std::path::Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    for (name, m) in corpus::matrices() {
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, MatrixDocument::new(&name, m).to_canonical())
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn corpus_run(only: Option<&str>) -> Result<(), Failure> {
    let items = corpus::select(only);
    if items.is_empty() {
        return Err(Failure::Usage(format!("no corpus item matches {:?}", only.unwrap_or(""))));
    }
    let mut reports: Vec<_> = items
        .par_iter()
        .map(|it| corpus::run_item(it.tag).expect("tag comes from the item table"))
        .collect();
    reports.sort_by(|a, b| a.tag.cmp(&b.tag));
    let mut failed = 0;
    for r in &reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        eprintln!("{status} {:<22} {:>9.1} ms", r.tag, r.elapsed.as_secs_f64() * 1e3);
        for c in r.checks.iter().filter(|c| !c.passed) {
            eprintln!("     {}: {}", c.name, c.detail);
        }
        failed += usize::from(!r.passed);
    }
    eprintln!("{} of {} items passed", reports.len() - failed, reports.len());
    println!("{}", serde_json::to_string_pretty(&reports).expect("plain data"));
    if failed > 0 {
        return Err(Failure::Checks(failed));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { files, charpoly, pf, dimgroup, primitive, padic, check, powers, budget } => {
            let docs = files.iter().map(load).collect::<Result<Vec<_>, _>>()?;
            let padic = match padic.as_deref() {
                None => None,
                Some([p, m]) => {
                    let m = u32::try_from(*m).ok().filter(|&m| m >= 1);
                    Some((*p, m.ok_or_else(|| Failure::Usage("--padic needs m >= 1".into()))?))
                }
                Some(_) => return Err(Failure::Usage("--padic takes P and M".into())),
            };
            let mut checks = check;
            checks.sort();
            checks.dedup();
            let req = Request { charpoly, pf, dimgroup, primitive, padic, checks, powers, budget };
            let out = analyze::run(&docs, &req)?;
            for line in &out.summary {
                eprintln!("{line}");
            }
            print!("{}", out.json);
            Ok(())
        }
        Command::Corpus { action: CorpusAction::List } => corpus_list(),
        Command::Corpus { action: CorpusAction::Run { only } } => corpus_run(only.as_deref()),
        Command::Corpus { action: CorpusAction::Export { dir } } => corpus_export(&dir),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
