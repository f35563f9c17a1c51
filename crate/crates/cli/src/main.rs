mod cache;
mod spec;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use hallq::sweep::{Failure, SweepOutcome};
use hallq::{HallError, Workbench};
use serde::Serialize;

use crate::cache::{DiskStore, FORMAT_VERSION};
use crate::spec::Ingested;

#[derive(Parser, Debug)]
#[command(name = "hallq", version, about = "Hall algebras of quivers with automorphism over finite fields")]
struct Cli {
    /// Quiver description (JSON).
    #[arg(long, global = true)]
    quiver: Option<PathBuf>,
    /// Overrides `e` from the quiver file; `q = p^e`.
    #[arg(long = "q-power", global = true)]
    q_power: Option<u32>,
    /// Largest total dimension of the middle terms considered.
    #[arg(long = "max-total-dim", global = true, default_value_t = 3)]
    max_total_dim: u32,
    /// Directory for cached orbit and Hall tables.
    #[arg(long, env = "HALLQ_CACHE", global = true)]
    cache: Option<PathBuf>,
    /// Worker threads for the outer instance loop.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orbit table of one dimension vector as TSV.
    Orbits {
        /// Comma-separated entries in declaration order, e.g. `1,1`.
        #[arg(long)]
        dim: String,
    },
    /// Hall numbers for every grading up to the total dimension, as TSV.
    Hall,
    /// Runs one verification suite and prints a JSON report.
    Check {
        #[arg(value_enum)]
        name: CheckName,
        /// Number of random tuples for `shift`.
        #[arg(long, default_value_t = 500)]
        tuples: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CheckName {
    Green,
    Bialgebra,
    Rp,
    Euler,
    Phi,
    Indres,
    GreenFn,
    Serre,
    Shift,
    Orbits,
}

impl CheckName {
    fn label(self) -> &'static str {
        match self {
            CheckName::Green => "green",
            CheckName::Bialgebra => "bialgebra",
            CheckName::Rp => "rp",
            CheckName::Euler => "euler",
            CheckName::Phi => "phi",
            CheckName::Indres => "indres",
            CheckName::GreenFn => "green-fn",
            CheckName::Serre => "serre",
            CheckName::Shift => "shift",
            CheckName::Orbits => "orbits",
        }
    }
}

#[derive(Serialize)]
struct CheckReport {
    format_version: u32,
    check: String,
    quiver: String,
    p: u32,
    e: u32,
    q: u64,
    max_total_dim: u32,
    seed: Option<u64>,
    instances: u64,
    verdict: &'static str,
    failures: Vec<Failure>,
    stats: BTreeMap<String, u64>,
    wall_time_ms: u128,
}

/// Exit status classes.
enum Fail {
    Check,
    Resource(anyhow::Error),
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<HallError> for Fail {
    fn from(e: HallError) -> Self {
        match e {
            HallError::SpaceTooLarge { .. } | HallError::FieldTooLarge { .. } | HallError::NoIrreducibleFound { .. } => {
                Fail::Resource(e.into())
            }
            HallError::NonPrime(_)
            | HallError::MalformedQuiver(_)
            | HallError::HasLoop(_)
            | HallError::NotEquivariant(_)
            | HallError::NotAdmissible(_)
            | HallError::DimensionMismatch { .. }
            | HallError::NotInvariant(_)
            | HallError::GradingMismatch(_) => Fail::Input(e.into()),
            _ => Fail::Internal(e.into()),
        }
    }
}

struct Session {
    ingested: Ingested,
    wb: Workbench,
    p: u32,
    e: u32,
}

fn open(cli: &Cli) -> Result<Session, Fail> {
    let path = cli.quiver.as_ref().ok_or_else(|| Fail::Input(anyhow!("--quiver is required")))?;
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Fail::Input)?;
    let ingested = Ingested::from_text(&text).map_err(|e| Fail::Input(anyhow!("{}:{e}", path.display())))?;
    let p = ingested.spec.p;
    let e = cli.q_power.unwrap_or(ingested.spec.e);
    let mut wb = Workbench::new(ingested.quiver.clone(), p, e)?;
    if let Some(dir) = &cli.cache {
        let store = DiskStore::new(dir, &ingested.canonical_text(), wb.q())
            .with_context(|| format!("opening cache {}", dir.display()))
            .map_err(Fail::Input)?;
        wb = wb.with_store(Arc::new(store));
    }
    Ok(Session { ingested, wb, p, e })
}

fn orbits(s: &Session, dim: &str) -> Result<String, Fail> {
    let entries: Vec<u32> = dim
        .split(',')
        .map(|x| x.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|e| Fail::Input(anyhow!("bad --dim {dim:?}: {e}")))?;
    let canonical = s
        .ingested
        .to_canonical(&entries)
        .ok_or_else(|| Fail::Input(anyhow!("--dim needs {} entries", s.ingested.canonical_index.len())))?;
    let d = s.wb.dim(canonical)?;
    let table = s.wb.orbit_table(&d)?;
    let mut out = String::from("dim\torbit\tsize\taut_order\trepresentative\n");
    for (k, o) in table.orbits.iter().enumerate() {
        writeln!(out, "{}\t{k}\t{}\t{}\t{}", s.ingested.declared(&d), o.size, o.aut_order, o.representative).unwrap();
    }
    Ok(out)
}

fn hall(s: &Session, max_total: u32) -> Result<String, Fail> {
    let mut out = String::from("quotient_dim\tsub_dim\tM\tN\tL\tg\n");
    for d in s.wb.orbit_data().dims_up_to(max_total) {
        for (qd, sd) in s.wb.orbit_data().splittings(&d) {
            let table = s.wb.hall_table(&qd, &sd)?;
            for &(m, n, l, g) in table.entries() {
                writeln!(out, "{}\t{}\t{m}\t{n}\t{l}\t{g}", s.ingested.declared(&qd), s.ingested.declared(&sd)).unwrap();
            }
        }
    }
    Ok(out)
}

fn check(s: &Session, cli: &Cli, name: CheckName, tuples: usize) -> Result<(String, bool), Fail> {
    let start = Instant::now();
    let max = cli.max_total_dim;
    let wb = &s.wb;
    let outcome: SweepOutcome = match name {
        CheckName::Green => wb.sweep_green(max)?,
        CheckName::Bialgebra => wb.sweep_bialgebra(max)?,
        CheckName::Rp => wb.sweep_riedtmann_peng(max)?,
        CheckName::Euler => wb.sweep_euler(max)?,
        CheckName::Phi => wb.sweep_phi(max)?,
        CheckName::Indres => wb.sweep_ind_res(max)?,
        CheckName::GreenFn => wb.sweep_green_fn(max)?,
        CheckName::Serre => wb.sweep_serre()?,
        CheckName::Shift => wb.sweep_shift(tuples, max, cli.seed)?,
        CheckName::Orbits => wb.sweep_orbits(max)?,
    };
    let passed = outcome.passed();
    let report = CheckReport {
        format_version: FORMAT_VERSION,
        check: name.label().into(),
        quiver: s.ingested.canonical_text(),
        p: s.p,
        e: s.e,
        q: wb.q(),
        max_total_dim: max,
        seed: (name == CheckName::Shift).then_some(cli.seed),
        instances: outcome.instances,
        verdict: if passed { "pass" } else { "fail" },
        failures: outcome.failures,
        stats: outcome.stats,
        wall_time_ms: start.elapsed().as_millis(),
    };
    let text = serde_json::to_string_pretty(&report).map_err(|e| Fail::Internal(e.into()))?;
    Ok((text + "\n", passed))
}

fn run(cli: &Cli) -> Result<(), Fail> {
    if let Some(k) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global()
            .map_err(|e| Fail::Internal(e.into()))?;
    }
    let session = open(cli)?;
    match &cli.command {
        Command::Orbits { dim } => print!("{}", orbits(&session, dim)?),
        Command::Hall => print!("{}", hall(&session, cli.max_total_dim)?),
        Command::Check { name, tuples } => {
            let (text, passed) = check(&session, cli, *name, *tuples)?;
            print!("{text}");
            if !passed {
                return Err(Fail::Check);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Check) => ExitCode::from(1),
        Err(Fail::Internal(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Fail::Resource(e)) => {
            eprintln!("resource bound exceeded: {e:#}");
            ExitCode::from(2)
        }
        Err(Fail::Input(e)) => {
            eprintln!("input error: {e:#}");
            ExitCode::from(3)
        }
    }
}
