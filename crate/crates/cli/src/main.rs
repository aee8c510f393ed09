//! `monopair`: run a job file and print a deterministic check report.
//!
//! Exit codes: 0 all checks pass, 1 a check failed or was refused, 2 inconclusive checks only,
//! 64 usage or schema error.

mod exact_cmds;
mod job;
mod numeric_cmds;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use job::{Command, UsageError};
use numeric_cmds::Context;
use report::Report;

const USAGE: u8 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "monopair",
    version,
    about = "Checks for singular monopoles on the circle times a surface"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Job file (TOML) with a table named after the command.
    #[arg(long)]
    input: PathBuf,
    /// Multiplies every numeric error tolerance; convergence-order thresholds are unchanged.
    #[arg(long, default_value_t = 1.0)]
    tolerance_scale: f64,
    /// Overrides the job's seed for randomized samples.
    #[arg(long)]
    seed: Option<u64>,
    /// Writes field samples as `t x y value` lines (abelian and dirac jobs).
    #[arg(long)]
    emit_fields: Option<PathBuf>,
}

struct Flags {
    scale: f64,
    seed: Option<u64>,
    emit_fields: Option<PathBuf>,
}

fn run_file(
    command: Command,
    path: &Path,
    flags: &Flags,
    depth: usize,
) -> Result<Report, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError::Plain(format!("cannot read {}: {e}", path.display())))?;
    let doc: toml::Table = toml::from_str(&text)
        .map_err(|e| UsageError::Plain(format!("{}: {}", path.display(), e.message())))?;
    let (header, body) = job::split(doc, command)?;
    let seed = flags.seed.or(header.seed).unwrap_or(0);
    let tol = job::tolerances(command, &header, flags.scale);
    let echo = toml::to_string(&body).map_err(|e| UsageError::Plain(e.to_string()))?;
    let mut settings = vec![("seed".to_string(), seed.to_string())];
    for (k, v) in &tol {
        settings.push((format!("tolerance {k}"), format!("{v:e}")));
    }
    let mut report = Report::new(command.name(), echo, settings);
    let ctx = Context {
        seed,
        tol,
        emit_fields: flags.emit_fields.clone(),
    };
    let checks = match command {
        Command::Validate => exact_cmds::validate(body)?,
        Command::Factorize => exact_cmds::factorize_cmd(body)?,
        Command::Stability => exact_cmds::stability_cmd(body)?,
        Command::Dims => exact_cmds::dims(body)?,
        Command::Spectral => exact_cmds::spectral(body)?,
        Command::Abelian => numeric_cmds::abelian(body, &ctx)?,
        Command::Dirac => numeric_cmds::dirac(body, &ctx)?,
        Command::Report => {
            if depth > 0 {
                return Err(job::at("report", "report jobs do not nest"));
            }
            let r: job::ReportJob = job::typed("report", body)?;
            let dir = path.parent().unwrap_or(Path::new("."));
            for (i, sub) in r.jobs.iter().enumerate() {
                let sub_path = dir.join(sub);
                let name =
                    sub_command(&sub_path).map_err(|m| job::at(format!("report.jobs[{i}]"), m))?;
                report
                    .sections
                    .push(run_file(name, &sub_path, flags, depth + 1)?);
            }
            Vec::new()
        }
    };
    for c in checks {
        report.push(c);
    }
    Ok(report)
}

/// The command a bundled job file declares in its `command` key.
fn sub_command(path: &Path) -> Result<Command, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let doc: toml::Table =
        toml::from_str(&text).map_err(|e| format!("{}: {}", path.display(), e.message()))?;
    let name = doc
        .get("command")
        .and_then(|v| v.as_str())
        .ok_or_else(|| format!("{} has no `command` key", path.display()))?;
    Command::all()
        .into_iter()
        .find(|c| c.name() == name)
        .ok_or_else(|| format!("unknown command {name:?}"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    if !(cli.tolerance_scale > 0.0 && cli.tolerance_scale.is_finite()) {
        eprintln!("error: --tolerance-scale must be a positive number");
        return ExitCode::from(USAGE);
    }
    let flags = Flags {
        scale: cli.tolerance_scale,
        seed: cli.seed,
        emit_fields: cli.emit_fields,
    };
    match run_file(cli.command, &cli.input, &flags, 0) {
        Ok(report) => {
            print!("{}", report.render());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE)
        }
    }
}
