use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use pglcode::export;
use pglcode::gl2::Gl2;
use pglcode::oracle::{default_workers, verify_theorem_gl, verify_theorem_pgl};
use pglcode::{Error, Field, OracleMode, VerifyOptions};

#[derive(Parser)]
#[command(name = "pglcode", version, about = "Verify λ-codes in Cayley graphs of PGL(2,q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that every group element occurs equally often in A·D.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = LevelArg::Pgl)]
        level: LevelArg,
        #[command(flatten)]
        run: RunArgs,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Per-element counts N(a,b), R-set sizes and multiplicities.
    Tables {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        run: RunArgs,
    },
    /// The parameter sets T, T₁ and the conjugacy classes that make up A.
    Classes {
        #[command(flatten)]
        common: Common,
    },
    /// Enumerated and closed-form counts for one pair (a, b).
    Count {
        #[command(flatten)]
        common: Common,
        /// Element index of a.
        #[arg(long)]
        a: u64,
        /// Element index of b.
        #[arg(long)]
        b: u64,
    },
    /// Edge list of Cay(PGL(2,q), A).
    ExportCayley {
        #[command(flatten)]
        common: Common,
    },
    /// Modulus, generator and exp/log tables of GF(q²).
    FieldDump {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Prime power q; the field is GF(q²).
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Worker threads for product sweeps; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = OracleArg::Both)]
    oracle: OracleArg,
}

impl RunArgs {
    fn options(&self) -> VerifyOptions {
        VerifyOptions {
            workers: self.workers.unwrap_or_else(default_workers).max(1),
            mode: match self.oracle {
                OracleArg::ClosedForm => OracleMode::ClosedForm,
                OracleArg::BruteForce => OracleMode::BruteForce,
                OracleArg::Both => OracleMode::Both,
            },
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Gl,
    Pgl,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    ClosedForm,
    BruteForce,
    Both,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPrime(_)
            | Error::NotPrimePower(_)
            | Error::InvalidSpec(_)
            | Error::Capacity { .. }
            | Error::OutOfRange(_)
            | Error::NotInvertible { .. }
            | Error::Domain(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

/// Output text and whether every assertion behind it held.
struct Artifact {
    body: String,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Verify { common, .. }
        | Command::Tables { common, .. }
        | Command::Classes { common }
        | Command::Count { common, .. }
        | Command::ExportCayley { common }
        | Command::FieldDump { common } => common,
    };
    let result = run(&cli.command, common).and_then(|artifact| {
        emit(common.out.as_ref(), &artifact.body)?;
        Ok(artifact.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn emit(out: Option<&PathBuf>, body: &str) -> Result<(), Failure> {
    let written = match out {
        Some(path) => fs::write(path, body),
        None => io::stdout().lock().write_all(body.as_bytes()),
    };
    written.map_err(|e| Failure::Runtime(format!("cannot write output: {e}")))
}

fn check_format(command: &str, format: Format, allowed: &[Format]) -> Result<(), Failure> {
    if allowed.contains(&format) {
        return Ok(());
    }
    let name = format.to_possible_value().expect("no skipped variants").get_name().to_owned();
    Err(Failure::Usage(format!("--format {name} is not available for {command}")))
}

fn run(command: &Command, common: &Common) -> Result<Artifact, Failure> {
    let field = Field::for_q(common.q)?;
    let format = common.format;
    match command {
        Command::Verify { level, run, timing, .. } => {
            check_format("verify", format, &[Format::Json, Format::Text])?;
            let opts = run.options();
            let mut report = match level {
                LevelArg::Gl => verify_theorem_gl(&field, &opts)?,
                LevelArg::Pgl => verify_theorem_pgl(&field, &opts)?,
            };
            if !timing {
                report.elapsed_ms = None;
            }
            Ok(Artifact {
                body: structured(&report, format),
                pass: report.pass,
            })
        }
        Command::Tables { run, .. } => {
            check_format("tables", format, &[Format::Json, Format::Csv, Format::Text])?;
            let opts = run.options();
            let rows = export::tables(&field, opts.mode, opts.workers)?;
            let t = Gl2::new(&field).t_size();
            let pass = rows.iter().all(|r| {
                let agree = match (r.n_ab_enum, r.n_ab_closed) {
                    (Some(e), Some(c)) => e == c,
                    _ => true,
                };
                agree
                    && r.multiplicity_closed.is_none_or(|m| m == t)
                    && r.multiplicity_bruteforce.is_none_or(|m| m == t)
            });
            let body = match format {
                Format::Csv => export::tables_csv(&rows),
                _ => structured(&rows, format),
            };
            Ok(Artifact { body, pass })
        }
        Command::Classes { .. } => {
            check_format("classes", format, &[Format::Json, Format::Text])?;
            let listing = export::classes(&field)?;
            let q = field.q() as u64;
            let pass = listing.classes.iter().all(|c| c.size == q * (q - 1))
                && 2 * listing.t1.len() == listing.t.len();
            Ok(Artifact {
                body: structured(&listing, format),
                pass,
            })
        }
        Command::Count { a, b, .. } => {
            check_format("count", format, &[Format::Json, Format::Text])?;
            let count = export::count_pair(&field, field.elem(*a)?, field.elem(*b)?)?;
            Ok(Artifact {
                body: structured(&count, format),
                pass: count.pass,
            })
        }
        Command::ExportCayley { .. } => {
            check_format("export-cayley", format, &[Format::Json, Format::Csv, Format::Dot])?;
            let graph = export::cayley_graph(&field)?;
            let mut degree = vec![0usize; graph.vertices];
            for &(u, v) in &graph.edges {
                degree[u as usize] += 1;
                degree[v as usize] += 1;
            }
            let pass = degree.iter().all(|&d| d == graph.degree);
            let body = match format {
                Format::Dot => graph.to_dot(),
                Format::Csv => graph.to_csv(),
                _ => structured(&graph, format),
            };
            Ok(Artifact { body, pass })
        }
        Command::FieldDump { .. } => {
            check_format("field-dump", format, &[Format::Json, Format::Text])?;
            Ok(Artifact {
                body: structured(&export::field_dump(&field), format),
                pass: true,
            })
        }
    }
}

fn structured<T: Serialize>(data: &T, format: Format) -> String {
    match format {
        Format::Text => {
            let value = serde_json::to_value(data).expect("reports serialize");
            let mut out = String::new();
            render_text(&mut out, "", &value);
            out
        }
        _ => {
            let mut s = serde_json::to_string_pretty(data).expect("reports serialize");
            s.push('\n');
            s
        }
    }
}

/// `key: value` lines; nested objects get dotted keys, arrays of records get
/// one line per record.
fn render_text(out: &mut String, prefix: &str, value: &Value) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                render_text(out, &key, v);
            }
        }
        Value::Array(items) if items.iter().any(|v| v.is_object()) => {
            for (i, item) in items.iter().enumerate() {
                let key = if prefix.is_empty() { i.to_string() } else { format!("{prefix}[{i}]") };
                let mut line = String::new();
                if let Value::Object(map) = item {
                    let cells: Vec<String> = map.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect();
                    line = cells.join(" ");
                }
                out.push_str(&format!("{key}: {line}\n"));
            }
        }
        other => out.push_str(&format!("{prefix}: {}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}
