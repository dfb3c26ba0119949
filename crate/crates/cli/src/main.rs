//! Command line entry point: run verification scenarios, print algebra
//! facts, and export structure constants.
//!
//! Exit codes: 0 all checks pass, 1 check failures or I/O errors,
//! 2 usage errors.

use clap::{Args, Parser, Subcommand};
use modlie::chevalley::{export_table, ChevalleyZ};
use modlie::rootsys::{RootSystem, TypeLabel};
use modlie::scenarios::{self, ScenarioReport};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "modlie",
    version,
    about = "Exact verification scenarios for modular Lie algebras of exceptional type"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification scenarios and report pass/fail per check.
    Verify(VerifyArgs),
    /// Export structure constants in the line-oriented text format.
    Export(ExportArgs),
    /// Print root-system and prime facts for a type.
    Info(InfoArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Scenario name, e.g. esdp, levi, socle_uniqueness:i,
    /// witt_maximal:G2, normalizer, orbit_identify:A3A2A1,
    /// lattice_exponentials, e8_reduction.
    #[arg(long)]
    scenario: Option<String>,
    /// Run every scenario applicable at the given prime.
    #[arg(long)]
    all: bool,
    /// Characteristic.
    #[arg(long)]
    p: Option<u64>,
    /// Type for scenarios parameterised by type (witt_maximal).
    #[arg(long, value_name = "TYPE")]
    r#type: Option<String>,
    /// Seed for randomised checks (falls back to MODLIE_SEED, then a
    /// fixed default).
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON reports to this path instead of stdout.
    #[arg(long)]
    out: Option<String>,
    /// Output format: json or text.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct ExportArgs {
    /// Type label A..G.
    #[arg(long, value_name = "TYPE")]
    r#type: String,
    /// Rank (may be part of the type, e.g. --type G2).
    #[arg(long)]
    rank: Option<usize>,
    /// Characteristic; 0 exports the integral constants.
    #[arg(long, default_value_t = 0)]
    p: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct InfoArgs {
    #[arg(long, value_name = "TYPE")]
    r#type: String,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    p: Option<u64>,
}

fn parse_type(spec: &str, rank: Option<usize>) -> Result<(TypeLabel, usize), String> {
    let spec = spec.trim();
    let (letter, digits) = spec.split_at(1);
    let label = TypeLabel::parse(letter).ok_or_else(|| format!("unknown type label {letter}"))?;
    let rank = if digits.is_empty() {
        rank.ok_or_else(|| "missing rank: pass --rank or a combined label like E7".to_string())?
    } else {
        digits.parse().map_err(|_| format!("bad rank {digits}"))?
    };
    Ok((label, rank))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Export(args) => cmd_export(args),
        Command::Info(args) => cmd_info(args),
    }
}

fn resolve_seed(cli_seed: Option<u64>) -> u64 {
    cli_seed
        .or_else(|| {
            std::env::var("MODLIE_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(scenarios::DEFAULT_SEED)
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let seed = resolve_seed(args.seed);
    let mut names: Vec<String> = Vec::new();
    if args.all {
        let Some(p) = args.p else {
            eprintln!("--all needs --p");
            return ExitCode::from(2);
        };
        names = scenarios::scenarios_for_prime(p);
        if names.is_empty() {
            eprintln!("no scenarios registered for p = {p}");
            return ExitCode::from(2);
        }
    } else if let Some(s) = &args.scenario {
        let mut name = s.clone();
        // `--scenario witt_maximal --type E6` style.
        if let Some(t) = &args.r#type {
            if !name.contains(':') {
                name = format!("{name}:{t}");
            }
        }
        names.push(name);
    } else {
        eprintln!("pass --scenario NAME or --all");
        return ExitCode::from(2);
    }

    let mut reports: Vec<ScenarioReport> = Vec::new();
    for name in &names {
        match scenarios::run_named(name, args.p, seed) {
            Ok(mut rs) => reports.append(&mut rs),
            Err(modlie::ModlieError::Unsupported(msg)) => {
                eprintln!("usage error: {msg}");
                return ExitCode::from(2);
            }
            Err(e) => {
                eprintln!("scenario {name} failed to run: {e}");
                return ExitCode::from(1);
            }
        }
    }
    // Deterministic order by scenario name.
    reports.sort_by(|a, b| a.scenario.cmp(&b.scenario));

    let rendered = match args.format.as_str() {
        "json" => {
            let body: Vec<String> = reports.iter().map(|r| r.to_json()).collect();
            format!("[{}]\n", body.join(","))
        }
        "text" => reports
            .iter()
            .map(|r| r.to_text())
            .collect::<Vec<_>>()
            .join(""),
        other => {
            eprintln!("unknown format {other}; use json or text");
            return ExitCode::from(2);
        }
    };
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, &rendered) {
            eprintln!("write {path}: {e}");
            return ExitCode::from(1);
        }
    } else if std::io::stdout().write_all(rendered.as_bytes()).is_err() {
        return ExitCode::from(1);
    }
    let failures: usize = reports.iter().map(|r| r.failures()).sum();
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        eprintln!("{failures} check(s) failed");
        ExitCode::from(1)
    }
}

fn cmd_export(args: ExportArgs) -> ExitCode {
    let (label, rank) = match parse_type(&args.r#type, args.rank) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let rs = match RootSystem::new(label, rank) {
        Ok(rs) => rs,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    if args.p != 0 && !modlie::field::is_prime(args.p) {
        eprintln!("p must be 0 or a prime");
        return ExitCode::from(2);
    }
    let chev = ChevalleyZ::new(&rs);
    let header = format!("LIEALG {}{} p={} dim={}", label, rank, args.p, chev.dim());
    let body = if args.p == 0 {
        export_table(&header, &chev.table)
    } else {
        // Reduce the integral constants mod p for the export.
        let alg = chev.over_fp(args.p);
        let mut out = String::new();
        out.push_str(&header);
        out.push('\n');
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                for &(k, c) in alg.table.pairs(i, j) {
                    let cc = c.rem_euclid(args.p as i64);
                    if cc != 0 {
                        out.push_str(&format!("B {i} {j} {k} {cc}\n"));
                    }
                }
            }
        }
        out
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                eprintln!("write {path}: {e}");
                return ExitCode::from(1);
            }
        }
        None => print!("{body}"),
    }
    ExitCode::SUCCESS
}

fn cmd_info(args: InfoArgs) -> ExitCode {
    let (label, rank) = match parse_type(&args.r#type, args.rank) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let rs = match RootSystem::new(label, rank) {
        Ok(rs) => rs,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    println!("type: {}{}", label, rank);
    println!("dimension: {}", rs.num_roots() + rs.rank);
    println!("roots: {}", rs.num_roots());
    let hr: Vec<String> = rs.highest_root.iter().map(|c| c.to_string()).collect();
    println!("highest root: {}", hr.join(","));
    println!("coxeter number: {}", rs.coxeter_number());
    if let Some(p) = args.p {
        if !modlie::field::is_prime(p) {
            eprintln!("p must be prime");
            return ExitCode::from(2);
        }
        println!(
            "good prime: {}",
            if rs.is_good_prime(p) { "yes" } else { "no" }
        );
        println!(
            "very good prime: {}",
            if rs.is_very_good_prime(p) {
                "yes"
            } else {
                "no"
            }
        );
    }
    ExitCode::SUCCESS
}
