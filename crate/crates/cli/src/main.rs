use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cyclo2rank_core::rank::{rank_report, RankReport};
use cyclo2rank_core::report::build_report;
use cyclo2rank_core::tables;
use cyclo2rank_core::verify::{self, Suite};
use cyclo2rank_core::{Coverage, Level, Parity, SquarefreeOdd};

/// Sweeps accept bounds below this.
const SWEEP_LIMIT: u64 = 1_000_000;

const EXIT_INVALID: u8 = 1;
const EXIT_NOT_COVERED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "cyclo2rank",
    version,
    about = "2-rank invariants of Q(zeta_{2^m}, sqrt d)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one d. Exit code 2 when the rank theorem does not cover d.
    Report {
        #[arg(long)]
        d: String,
        #[arg(long, default_value_t = 3)]
        m: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// One row per covered d in [min, max].
    Sweep {
        #[arg(long, default_value_t = 1)]
        min: u64,
        #[arg(long)]
        max: u64,
        #[arg(long, default_value_t = 3)]
        m: u32,
        #[arg(long, value_enum)]
        filter: Option<Filter>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Print a reference table: splitting16 or symbols.
    Tables { which: String },
    /// Run oracle cross-checks: splitting, symbols, ranks, quadratic, kummer or all.
    Verify {
        suite: String,
        /// Suite-specific range; capped by CYCLO2RANK_VERIFY_BUDGET when set.
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Filter {
    SameCoset,
    Mixed,
    Prime,
}

impl Filter {
    fn accepts(self, d: &SquarefreeOdd) -> bool {
        match self {
            Filter::SameCoset => !d.is_prime() && d.same_coset(),
            Filter::Mixed => !d.is_prime() && !d.same_coset(),
            Filter::Prime => d.is_prime(),
        }
    }
}

#[derive(Serialize)]
struct Row {
    d: u64,
    r: usize,
    residues8: String,
    parity: String,
    rank2: String,
    e: String,
    t: u64,
    real_rank2: String,
    cyclic: String,
}

fn cell<T: ToString>(c: Coverage<T>) -> String {
    match c {
        Coverage::Covered(v) => v.to_string(),
        Coverage::NotCovered => "not_covered".into(),
    }
}

impl Row {
    fn new(rep: &RankReport) -> Self {
        Row {
            d: rep.d,
            r: rep.r,
            residues8: join(&rep.residues8),
            parity: rep.parity.to_string(),
            rank2: cell(rep.rank2),
            e: cell(rep.e),
            t: rep.t,
            real_rank2: cell(rep.real_rank2),
            cyclic: cell(rep.cyclic_nontrivial),
        }
    }
}

fn join(v: &[u8]) -> String {
    v.iter().map(u8::to_string).collect::<Vec<_>>().join(",")
}

/// Sweep row in JSON lines form, same columns as the CSV.
#[derive(Serialize)]
struct JsonRow<'a> {
    d: u64,
    r: usize,
    residues8: &'a [u8],
    parity: Parity,
    rank2: Coverage<u32>,
    e: Coverage<u32>,
    t: u64,
    real_rank2: Coverage<u32>,
    cyclic: Coverage<bool>,
}

impl<'a> JsonRow<'a> {
    fn new(rep: &'a RankReport) -> Self {
        JsonRow {
            d: rep.d,
            r: rep.r,
            residues8: &rep.residues8,
            parity: rep.parity,
            rank2: rep.rank2,
            e: rep.e,
            t: rep.t,
            real_rank2: rep.real_rank2,
            cyclic: rep.cyclic_nontrivial,
        }
    }
}

fn level(m: u32) -> Result<Level> {
    Level::new(m).with_context(|| format!("invalid m = {m}"))
}

fn parse_d(raw: &str) -> Result<SquarefreeOdd> {
    let n: u64 = raw
        .trim()
        .parse()
        .with_context(|| format!("invalid d {raw:?}: not a positive integer"))?;
    SquarefreeOdd::new(n).with_context(|| format!("invalid d = {n}"))
}

fn csv_writer(out: impl Write) -> csv::Writer<impl Write> {
    csv::WriterBuilder::new().has_headers(true).from_writer(out)
}

const CSV_HEADER: [&str; 9] = [
    "d",
    "r",
    "residues8",
    "parity",
    "rank2",
    "e",
    "t",
    "real_rank2",
    "cyclic",
];

fn cmd_report(raw_d: &str, m: u32, format: Format) -> Result<u8> {
    let level = level(m)?;
    let d = parse_d(raw_d)?;
    let doc = build_report(&d, level);
    let mut out = io::stdout().lock();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv_writer(&mut out);
            w.serialize(Row::new(&doc.ranks))?;
            w.flush()?;
        }
    }
    if !doc.is_covered() {
        eprintln!(
            "d = {} is not covered by the rank theorem (some prime factor is 1 or 7 mod 8)",
            d.value()
        );
        return Ok(EXIT_NOT_COVERED);
    }
    if !doc.all_checks_passed() {
        bail!("an oracle cross-check failed for d = {}", d.value());
    }
    Ok(0)
}

fn cmd_sweep(min: u64, max: u64, m: u32, filter: Option<Filter>, format: Format) -> Result<u8> {
    let level = level(m)?;
    if max >= SWEEP_LIMIT || min >= SWEEP_LIMIT {
        bail!("sweep bounds must be below {SWEEP_LIMIT}");
    }
    let reports = (min.max(1)..=max)
        .filter_map(|n| SquarefreeOdd::new(n).ok())
        .filter(|d| filter.is_none_or(|f| f.accepts(d)))
        .map(|d| rank_report(&d, level))
        .filter(|rep| rep.rank2.is_covered());
    let mut out = BufWriter::new(io::stdout().lock());
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(&mut out);
            w.write_record(CSV_HEADER)?;
            for rep in reports {
                w.serialize(Row::new(&rep))?;
            }
            w.flush()?;
        }
        Format::Json => {
            for rep in reports {
                serde_json::to_writer(&mut out, &JsonRow::new(&rep))?;
                writeln!(out)?;
            }
        }
    }
    out.flush()?;
    Ok(0)
}

fn cmd_tables(which: &str) -> Result<u8> {
    let Some(text) = tables::render(which) else {
        bail!(
            "unknown table {which:?}; expected one of {}",
            tables::TABLE_NAMES.join(", ")
        );
    };
    io::stdout().lock().write_all(text.as_bytes())?;
    Ok(0)
}

fn cmd_verify(suite: &str, budget: Option<u64>) -> Result<u8> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(anyhow::Error::msg)?]
    };
    let ceiling = verify::budget_ceiling_from_env();
    let plan: Vec<(Suite, u64)> = suites
        .iter()
        .map(|&s| (s, verify::effective_budget(s, budget, ceiling)))
        .collect();
    let mut out = io::stdout().lock();
    for (s, b) in &plan {
        writeln!(out, "suite {s}: budget {b}")?;
    }
    let outcomes = verify::run(&plan);
    for o in &outcomes {
        writeln!(out, "{o}")?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    writeln!(out, "{} checks, {failed} failed", outcomes.len())?;
    Ok(if failed == 0 { 0 } else { EXIT_INVALID })
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>()
            .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<serde_json::Error>()
                .and_then(|j| j.io_error_kind())
                == Some(io::ErrorKind::BrokenPipe)
    })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Report { d, m, format } => cmd_report(&d, m, format),
        Command::Sweep {
            min,
            max,
            m,
            filter,
            format,
        } => cmd_sweep(min, max, m, filter, format),
        Command::Tables { which } => cmd_tables(&which),
        Command::Verify { suite, budget } => cmd_verify(&suite, budget),
    }
}

fn main() -> ExitCode {
    // clap reports usage errors with status 2, which is reserved here for
    // uncovered inputs
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
