use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use singeq::linalg::FieldSpec;
use singeq::tasks::run_text;

/// Exact homological algebra for finite-dimensional elementary algebras:
/// runs the tasks of a workspace file and reports verdicts.
#[derive(Parser)]
#[command(name = "singeq", version, about)]
struct Cli {
    /// Workspace file; use - for stdin.
    workspace: String,

    /// Write the JSON report array to this path.
    #[arg(long)]
    json: Option<PathBuf>,

    /// Default resolution/search cutoff for tasks without an explicit CUTOFF.
    #[arg(long)]
    cutoff: Option<usize>,

    /// Default seed for tasks without an explicit SEED.
    #[arg(long)]
    seed: Option<u64>,

    /// Override the FIELD directive: prime:<p> or rational.
    #[arg(long)]
    field: Option<String>,

    /// Run independent tasks concurrently (output order is unchanged).
    #[arg(long)]
    parallel: bool,
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    if s == "rational" {
        return Ok(FieldSpec::Rational);
    }
    if let Some(p) = s.strip_prefix("prime:") {
        let p: u64 = p.parse().map_err(|_| format!("bad prime {p}"))?;
        let spec = FieldSpec::Prime(p);
        spec.validate().map_err(|e| e.to_string())?;
        return Ok(spec);
    }
    Err(format!(
        "unknown field spec {s} (use prime:<p> or rational)"
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = if cli.workspace == "-" {
        let mut buf = String::new();
        if let Err(e) = std::io::stdin().read_to_string(&mut buf) {
            eprintln!("error: cannot read stdin: {e}");
            return ExitCode::from(3);
        }
        buf
    } else {
        match std::fs::read_to_string(&cli.workspace) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", cli.workspace);
                return ExitCode::from(3);
            }
        }
    };
    let field = match cli.field.as_deref().map(parse_field) {
        None => None,
        Some(Ok(f)) => Some(f),
        Some(Err(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    match run_text(&text, field, cli.seed, cli.cutoff, cli.parallel) {
        Ok((human, json, exit)) => {
            print!("{human}");
            if let Some(path) = cli.json {
                if let Err(e) = std::fs::write(&path, json) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(3);
                }
            }
            ExitCode::from(exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
