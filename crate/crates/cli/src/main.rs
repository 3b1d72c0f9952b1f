//! `chern`: verify identities, evaluate classes, print tables, and check
//! variety records.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use chern_core::exactnum::{todd_number, Prime};
use chern_core::kchow::ModelVariety;
use chern_core::series::{r_series, todd_series};
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{One, Zero};
use serde_json::json;

use chern_cli::checks::{self, Params, REGISTRY};
use chern_cli::eval::{Context, Evaluator};
use chern_cli::output::{Format, Table};
use chern_cli::parser;

#[derive(Parser, Debug)]
#[command(name = "chern", version, about = "Exact characteristic classes on products of projective spaces")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for every random sample.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print nothing on success; the exit status carries the result.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a registered check (`all` runs every check with its defaults).
    Verify {
        /// Check id; see `--list`.
        id: Option<String>,
        /// List the registered checks.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        l: Option<i64>,
        #[arg(long)]
        variety: Option<ModelVariety>,
        #[arg(long)]
        max_dim: Option<u32>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        max_n: Option<u64>,
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Evaluate an expression on a model variety.
    Compute {
        #[arg(long)]
        variety: ModelVariety,
        #[arg(long)]
        expr: String,
        /// Reduce Chow results mod this prime; needed by T, Tc, S and Tp.
        #[arg(long = "mod")]
        modulus: Option<u64>,
        /// Require the result to be a Chow or a K class.
        #[arg(long, value_enum)]
        context: Option<ContextArg>,
    },
    /// Print a table of numbers or series coefficients.
    Table {
        #[arg(value_enum)]
        which: TableKind,
        /// Largest d for todd-numbers.
        #[arg(long)]
        max: Option<u64>,
        /// Largest degree for the series tables.
        #[arg(long)]
        max_deg: Option<usize>,
        /// Prime for r-series.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Evaluate variety records against the index bound, the degree formula
    /// and the incompressibility criterion.
    Degree {
        records: PathBuf,
        #[arg(long, default_value_t = 3)]
        p: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ContextArg {
    Chow,
    K,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableKind {
    ToddNumbers,
    ToddSeries,
    RSeries,
}

/// Exit statuses: 0 success, 1 a check or record failed, 2 usage or input error.
enum Outcome {
    Ok,
    Failed,
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("chern: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, text: &str) {
    if !cli.quiet {
        let mut out = std::io::stdout().lock();
        // Ignore a closed pipe such as `| head`.
        let _ = writeln!(out, "{text}");
    }
}

fn run(cli: &Cli) -> Result<Outcome, Usage> {
    match &cli.command {
        Command::Verify { id, list, p, l, variety, max_dim, samples, order, max_n, records } => {
            if *list {
                let mut t = Table::new(&["id", "parameters", "description"]);
                for c in REGISTRY {
                    t.row(vec![c.id.into(), c.accepts.join(" "), c.about.into()]);
                }
                emit(cli, &t.render(cli.format));
                return Ok(Outcome::Ok);
            }
            let id = id.as_deref().ok_or_else(|| Usage("verify needs a check id or --list".into()))?;
            let params = Params {
                p: *p,
                l: *l,
                variety: variety.clone(),
                max_dim: *max_dim,
                samples: *samples,
                order: *order,
                max_n: *max_n,
                records: records.clone(),
                seed: cli.seed,
            };
            verify(cli, id, &params)
        }
        Command::Compute { variety, expr, modulus, context } => {
            compute(cli, variety, expr, *modulus, context.map(|c| match c {
                ContextArg::Chow => Context::Chow,
                ContextArg::K => Context::K,
            }))
        }
        Command::Table { which, max, max_deg, p } => table(cli, *which, *max, *max_deg, *p),
        Command::Degree { records, p } => degree(cli, records, *p),
    }
}

fn verify(cli: &Cli, id: &str, params: &Params) -> Result<Outcome, Usage> {
    let ids: Vec<&str> = if id == "all" {
        if *params != (Params { seed: params.seed, ..Params::default() }) {
            return Err(Usage("verify all takes no check parameters".into()));
        }
        REGISTRY.iter().map(|c| c.id).collect()
    } else {
        vec![id]
    };
    let mut reports = Vec::new();
    for id in ids {
        reports.push(checks::run_check(id, params)?);
    }
    let text = match cli.format {
        Format::Text => reports.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"),
        Format::Json => {
            let v = if reports.len() == 1 {
                reports[0].to_json()
            } else {
                json!(reports.iter().map(|r| r.to_json()).collect::<Vec<_>>())
            };
            serde_json::to_string_pretty(&v).expect("json")
        }
        Format::Csv => {
            let mut t = Table::new(&["check", "status", "cases", "failures", "seed"]);
            for r in &reports {
                let status = if r.is_ok() { "ok" } else { "fail" };
                t.row(vec![r.check.clone(), status.into(), r.cases.to_string(), r.failures.len().to_string(), r.seed.to_string()]);
            }
            t.render(Format::Csv)
        }
    };
    emit(cli, &text);
    Ok(if reports.iter().all(|r| r.is_ok()) { Outcome::Ok } else { Outcome::Failed })
}

fn compute(
    cli: &Cli,
    variety: &ModelVariety,
    src: &str,
    modulus: Option<u64>,
    context: Option<Context>,
) -> Result<Outcome, Usage> {
    let modulus = modulus.map(Prime::new).transpose()?;
    let e = parser::parse(src)?;
    let ev = Evaluator::new(variety, modulus)?;
    let v = ev.run(&e, context)?;
    let text = match cli.format {
        Format::Text => v.to_string(),
        Format::Json => {
            let field = v.field().map_or("Q".to_string(), |f| f.to_string());
            serde_json::to_string_pretty(&json!({
                "variety": variety.to_string(), "expr": e.to_string(), "kind": v.kind().name(),
                "field": field, "value": v.to_json(),
            }))
            .expect("json")
        }
        Format::Csv => {
            let mut t = Table::new(&["dim", "term", "coefficient"]);
            for (a, b, c) in v.csv_rows() {
                t.row(vec![a, b, c]);
            }
            t.render(Format::Csv)
        }
    };
    emit(cli, &text);
    Ok(Outcome::Ok)
}

fn table(cli: &Cli, which: TableKind, max: Option<u64>, max_deg: Option<usize>, p: Option<u64>) -> Result<Outcome, Usage> {
    let t = match which {
        TableKind::ToddNumbers => {
            if max_deg.is_some() || p.is_some() {
                return Err(Usage("todd-numbers takes --max only".into()));
            }
            let mut t = Table::new(&["d", "tau"]);
            for d in 0..=max.unwrap_or(10) {
                t.row(vec![d.to_string(), todd_number(d).to_string()]);
            }
            t
        }
        TableKind::ToddSeries => {
            if max.is_some() || p.is_some() {
                return Err(Usage("todd-series takes --max-deg only".into()));
            }
            let s = todd_series(max_deg.unwrap_or(10));
            let mut t = Table::new(&["degree", "coefficient"]);
            for (k, c) in s.coeffs().iter().enumerate() {
                t.row(vec![k.to_string(), c.to_string()]);
            }
            t
        }
        TableKind::RSeries => {
            if max.is_some() {
                return Err(Usage("r-series takes --p and --max-deg".into()));
            }
            let p = Prime::new(p.ok_or_else(|| Usage("r-series needs --p".into()))?)?;
            let s = r_series(p, max_deg.unwrap_or(10));
            let mut t = Table::new(&["exponent", "sign", "residue"]);
            for (k, c) in s.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    let sign = if c.is_one() { "+" } else { "-" };
                    t.row(vec![k.to_string(), sign.into(), c.to_string()]);
                }
            }
            t
        }
    };
    emit(cli, &t.render(cli.format));
    Ok(Outcome::Ok)
}

fn degree(cli: &Cli, path: &PathBuf, p: u64) -> Result<Outcome, Usage> {
    let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    let verdicts = checks::degree_verdicts(&text, p).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    let out = match cli.format {
        Format::Text => verdicts
            .iter()
            .map(|v| format!("{}: {} [{}]", v.subject, v.verdict, v.check))
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json => serde_json::to_string_pretty(&verdicts).expect("json"),
        Format::Csv => {
            let mut t = Table::new(&["check", "subject", "verdict", "reference"]);
            for v in &verdicts {
                t.row(vec![v.check.clone(), v.subject.clone(), v.verdict.to_string(), v.reference.into()]);
            }
            t.render(Format::Csv)
        }
    };
    if !verdicts.is_empty() || cli.format != Format::Text {
        emit(cli, &out);
    }
    Ok(if verdicts.iter().any(|v| v.verdict.is_violation()) { Outcome::Failed } else { Outcome::Ok })
}
