use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sphertwist_cli::doc::{validate, AuditKind};
use sphertwist_cli::run::threads_from_env;
use sphertwist_cli::{parse_scenario_bytes, run, serialize_report, Format, RunOptions};

#[derive(Parser)]
#[command(name = "sphertwist", version, about = "Audit spherical objects, twists and contraction algebras from scenario files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scenario file and echo its contents.
    Validate(Common),
    /// Partially minimal resolutions of the contraction algebra and its summands.
    Resolve(Common),
    /// Ext profiles and their cross-checks.
    Ext(Common),
    /// Tor of the quotient with itself, the cotwist and its permutation.
    Tor(Common),
    /// Both characterisations of relative sphericity, per t.
    Spherical(Common),
    /// The twist certificate and the triangle battery.
    Twist(Common),
    /// The tilting bimodules, per t.
    Tilting(Common),
    /// Every audit the scenario lists.
    Report(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON).
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Maximum resolution length before giving up.
    #[arg(long)]
    cap: Option<usize>,
    /// Degree window LO,HI for twists and hom tables.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<[i64; 2]>,
}

fn parse_window(s: &str) -> Result<[i64; 2], String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo = lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?;
    let hi = hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?;
    Ok([lo, hi])
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (only, common): (Option<Vec<AuditKind>>, Common) = match cli.command {
        Command::Validate(c) => (Some(vec![]), c),
        Command::Resolve(c) => (Some(vec![AuditKind::Resolve]), c),
        Command::Ext(c) => (Some(vec![AuditKind::Ext]), c),
        Command::Tor(c) => (Some(vec![AuditKind::Tor]), c),
        Command::Spherical(c) => (Some(vec![AuditKind::Spherical]), c),
        Command::Twist(c) => (Some(vec![AuditKind::Twist]), c),
        Command::Tilting(c) => (Some(vec![AuditKind::Tilting]), c),
        Command::Report(c) => (None, c),
    };
    ExitCode::from(execute(only, &common) as u8)
}

fn execute(only: Option<Vec<AuditKind>>, c: &Common) -> i32 {
    let threads = match threads_from_env() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let bytes = match std::fs::read(&c.file) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {}: {e}", c.file.display());
            return 2;
        }
    };
    let mut doc = match parse_scenario_bytes(&bytes) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("{}: {e}", c.file.display());
            return 2;
        }
    };
    if let Some(kinds) = only {
        doc.scenario.audits = kinds;
    }
    if let Some(cap) = c.cap {
        doc.scenario.cap = Some(cap);
    }
    if let Some(w) = c.window {
        doc.scenario.window = Some(w);
    }
    if let Err(e) = validate(&doc, &String::from_utf8_lossy(&bytes)) {
        eprintln!("{}: {e}", c.file.display());
        return 2;
    }
    let report = match run(&doc, &RunOptions { threads }) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let out = serialize_report(&report, c.format);
    if std::io::stdout().lock().write_all(&out).is_err() {
        return 2;
    }
    report.exit_code()
}
