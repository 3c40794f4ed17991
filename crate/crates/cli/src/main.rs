mod names;
mod tasks;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use dgcat::io::Workspace;
use dgcat::linalg::Field;
use serde_json::json;

use tasks::{Outcome, Status};

#[derive(Parser, Debug)]
#[command(name = "dgcat", version, about = "Exact dg algebra, bimodule and twisted complex computations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Ground field for built-in constructions: Q or F<p>.
    #[arg(long, global = true, default_value = "Q")]
    field: String,
    /// Seed for every randomized search.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Search budget: candidate count for equivalence searches, step count for ideal probes.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Where to write certificates and other artifacts.
    #[arg(long, global = true)]
    certificate_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a workspace file and run the axiom checker on everything in it.
    Check { file: PathBuf },
    /// Run a computation.
    Compute {
        /// Workspace file providing named objects.
        #[arg(long, global = true)]
        input: Option<PathBuf>,
        #[command(subcommand)]
        task: tasks::Task,
    },
    /// List built-in objects and tasks, or the contents of a workspace file.
    List { file: Option<PathBuf> },
    /// Write a built-in object as a workspace file.
    Export {
        /// An algebra name (see `list`) or `ks` for a braid complex.
        name: String,
        /// Strand count for `ks`.
        #[arg(long)]
        n: Option<usize>,
        /// Braid word for `ks`, e.g. "1 -2".
        #[arg(long, allow_hyphen_values = true)]
        word: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Failures mapped to exit codes.
enum Failure {
    Parse(anyhow::Error),
    Other(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Other(_) => 1,
        }
    }
}

fn read_workspace(path: &Path) -> Result<Workspace, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Parse)?;
    Workspace::from_json(&text).with_context(|| format!("parsing {}", path.display())).map_err(Failure::Parse)
}

impl Global {
    fn field(&self) -> Result<Field, Failure> {
        names::parse_field(&self.field).map_err(Failure::Parse)
    }
}

fn check(file: &Path, global: &Global) -> Result<Outcome, Failure> {
    let ws = read_workspace(file)?;
    let reports = ws.check().map_err(|e| Failure::Other(e.into()))?;
    let mut text = String::new();
    let mut items = Vec::new();
    let mut ok = true;
    for (kind, name, r) in &reports {
        ok &= r.passed;
        text.push_str(&format!("{} {kind} {name}\n", if r.passed { "ok  " } else { "FAIL" }));
        if !r.passed {
            text.push_str(&format!("{r}\n"));
        }
        items.push(json!({"kind": kind, "name": name, "passed": r.passed, "violations": r.violations}));
    }
    let _ = global;
    Ok(Outcome {
        status: if ok { Status::Success } else { Status::Failure },
        text,
        json: json!({"file": file.display().to_string(), "passed": ok, "objects": items}),
        artifact: None,
    })
}

fn list(file: Option<&Path>) -> Result<Outcome, Failure> {
    let mut text = String::new();
    let data = match file {
        Some(f) => {
            let ws = read_workspace(f)?;
            text.push_str(&format!("field {}\n", ws.field));
            for (n, a) in &ws.algebras {
                text.push_str(&format!("algebra {n} (dimension {})\n", a.dim()));
            }
            for (n, m) in &ws.bimodules {
                text.push_str(&format!("bimodule {n} (dimension {})\n", m.dim()));
            }
            for (n, x) in &ws.complexes {
                text.push_str(&format!("complex {n} ({} summands)\n", x.len()));
            }
            for n in ws.certificates.keys() {
                text.push_str(&format!("certificate {n}\n"));
            }
            json!({
                "field": ws.field.to_string(),
                "algebras": ws.algebras.keys().collect::<Vec<_>>(),
                "bimodules": ws.bimodules.keys().collect::<Vec<_>>(),
                "complexes": ws.complexes.keys().collect::<Vec<_>>(),
                "certificates": ws.certificates.keys().collect::<Vec<_>>(),
            })
        }
        None => {
            let section = |title: &str, rows: &[(&str, &str)], text: &mut String| {
                text.push_str(&format!("{title}:\n"));
                for (n, d) in rows {
                    text.push_str(&format!("  {n:<14} {d}\n"));
                }
            };
            section("algebras", names::ALGEBRAS, &mut text);
            section("spaces", names::SPACES, &mut text);
            section("modules", names::MODULES, &mut text);
            section("tasks", tasks::TASKS, &mut text);
            json!({
                "algebras": names::ALGEBRAS.iter().map(|r| r.0).collect::<Vec<_>>(),
                "spaces": names::SPACES.iter().map(|r| r.0).collect::<Vec<_>>(),
                "tasks": tasks::TASKS.iter().map(|r| r.0).collect::<Vec<_>>(),
            })
        }
    };
    Ok(Outcome { status: Status::Success, text, json: data, artifact: None })
}

fn export(name: &str, n: Option<usize>, word: Option<&str>, global: &Global) -> Result<Outcome, Failure> {
    let field = global.field()?;
    let ws = if name == "ks" {
        let n = n.ok_or_else(|| Failure::Parse(anyhow::anyhow!("ks needs --n")))?;
        let w = dgcat::zoo::BraidWord::parse(n, word.unwrap_or("")).map_err(|e| Failure::Parse(e.into()))?;
        let za = dgcat::zoo::zigzag_ambient(n, field).map_err(|e| Failure::Other(e.into()))?;
        let x = dgcat::zoo::ks_complex(&za, &w).map_err(|e| Failure::Other(e.into()))?;
        dgcat::io::workspace_with_complex(&za.ambient, "ks", &x)
    } else {
        let mut ws = Workspace::new(field);
        if name == "R'" || name == "tian" {
            let (r, m) = dgcat::zoo::tian_quotient(field).map_err(|e| Failure::Other(e.into()))?;
            ws.add_algebra(&r);
            ws.add_bimodule("M'", &m);
        } else {
            let a = names::zoo_algebra(name, field).map_err(Failure::Parse)?;
            ws.add_algebra(&a);
        }
        ws
    };
    let text = ws.to_json();
    Ok(Outcome {
        status: Status::Success,
        json: serde_json::from_str(&text).expect("valid JSON"),
        text: text + "\n",
        artifact: None,
    })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Check { file } => check(file, &cli.global),
        Command::List { file } => list(file.as_deref()),
        Command::Export { name, n, word, output } => {
            let out = export(name, *n, word.as_deref(), &cli.global)?;
            if let Some(path) = output {
                std::fs::write(path, &out.text)
                    .with_context(|| format!("writing {}", path.display()))
                    .map_err(Failure::Other)?;
                return Ok(Outcome { text: format!("wrote {}\n", path.display()), ..out });
            }
            Ok(out)
        }
        Command::Compute { input, task } => {
            let ws = input.as_deref().map(read_workspace).transpose()?;
            let field = match &ws {
                Some(w) => w.field,
                None => cli.global.field()?,
            };
            let seed = cli.global.seed.or(ws.as_ref().and_then(|w| w.seed)).unwrap_or(0);
            let ctx = tasks::Context { ws: ws.as_ref(), field, seed, budget: cli.global.budget };
            task.run(&ctx).map_err(|e| match e.downcast::<tasks::BadInput>() {
                Ok(b) => Failure::Parse(anyhow::anyhow!(b.0)),
                Err(e) => Failure::Other(e),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let (Some(path), Some(ws)) = (&cli.global.certificate_out, &out.artifact) {
                if let Err(e) = std::fs::write(path, ws.to_json() + "\n") {
                    eprintln!("error: writing {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            let text = if cli.global.json {
                serde_json::to_string_pretty(&out.json).expect("serializable report") + "\n"
            } else {
                out.text
            };
            // a closed pipe downstream is not an error of the computation
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::from(out.status.code())
        }
        Err(f) => {
            let (Failure::Parse(e) | Failure::Other(e)) = &f;
            if cli.global.json {
                println!("{}", json!({"error": format!("{e:#}"), "exit": f.code()}));
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(f.code())
        }
    }
}
