//! Command-line front end. Exit status: 0 on success, 1 when `validate`
//! rejects a schedule, 2 for usage and input errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchConfig, GenSpec};
use crate::error::{Error, Result};
use crate::format;
use crate::heuristics::{HeuristicConfig, DEFAULT_ITERATIONS};
use crate::milp;
use crate::model::{self, Mode, Time};
use crate::oracle::DEFAULT_ORACLE_LIMIT;
use crate::solver::{self, Algorithm, SolveOptions};

#[derive(Debug, Parser)]
#[command(
    name = "batchsched",
    version,
    about = "Makespan scheduling on capacity-2 batch machines"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Max,
    Sum,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Max => Mode::Max,
            ModeArg::Sum => Mode::Sum,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance and print the schedule.
    Solve {
        /// Instance file, `-` for stdin.
        instance: PathBuf,
        /// b1max, b1sum, bmmax-id, bmsum-id, is, tux, auto, oracle, h1 or h2.
        #[arg(short, long, default_value = "auto")]
        algorithm: String,
        /// Heuristic iterations.
        #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
        iters: usize,
        /// Heuristic seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest job count the oracle accepts.
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        oracle_limit: usize,
        /// Output file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a schedule against an instance.
    Validate { instance: PathBuf, schedule: PathBuf },
    /// Write a random instance.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Edge probability in percent, in (0, 100].
        #[arg(long, default_value_t = 50.0)]
        density: f64,
        #[arg(long, default_value_t = 10)]
        p_min: Time,
        #[arg(long, default_value_t = 100)]
        p_max: Time,
        /// Comma-separated setup times; one is drawn uniformly.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        s_set: Vec<Time>,
        #[arg(long, value_enum, default_value_t = ModeArg::Max)]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Export the mixed-integer model in LP format.
    ExportLp {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run an experiment grid; CSV on stdout.
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
}

/// Parses `std::env::args` and runs the command.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    let mut stderr = io::stderr().lock();
    ExitCode::from(run(cli, &mut stdout, &mut stderr))
}

/// Runs a parsed command, returning the exit status.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8> {
    match cli.command {
        Command::Solve {
            instance,
            algorithm,
            iters,
            seed,
            oracle_limit,
            output,
        } => {
            let inst = format::parse_instance(&read_input(&instance)?)?;
            let alg: Algorithm = algorithm.parse()?;
            let opts = SolveOptions {
                heuristic: HeuristicConfig::new(iters, seed)?,
                oracle_limit,
            };
            let solved = solver::solve(&inst, alg, &opts)?;
            let cmax = model::makespan(&solved.schedule, &inst)?;
            if cmax != solved.cmax {
                return Err(Error::Internal(format!(
                    "{} reported {} but the schedule evaluates to {cmax}",
                    solved.used, solved.cmax
                )));
            }
            if alg == Algorithm::Auto {
                writeln!(err, "algorithm: {}", solved.used)?;
            }
            emit(
                &format::write_schedule(&solved.schedule, cmax),
                output.as_deref(),
                out,
            )?;
            Ok(0)
        }
        Command::Validate { instance, schedule } => {
            let inst = format::parse_instance(&read_input(&instance)?)?;
            let (sched, stated) = format::parse_schedule(&read_input(&schedule)?)?;
            let violations = model::validate(&sched, &inst);
            if !violations.is_empty() {
                for v in &violations {
                    writeln!(err, "violation: {v}")?;
                }
                return Ok(1);
            }
            let cmax = inst.eval(&sched);
            if cmax != stated {
                writeln!(
                    err,
                    "violation: stated Cmax {stated} but the schedule evaluates to {cmax}"
                )?;
                return Ok(1);
            }
            writeln!(out, "valid Cmax {cmax}")?;
            Ok(0)
        }
        Command::Generate {
            n,
            m,
            density,
            p_min,
            p_max,
            s_set,
            mode,
            seed,
            output,
        } => {
            let spec = GenSpec {
                n,
                m,
                density_pct: density,
                p_range: (p_min, p_max),
                s_choices: s_set,
                mode: mode.into(),
                seed,
            };
            let inst = bench::generate_instance(&spec)?;
            emit(&format::write_instance(&inst), output.as_deref(), out)?;
            Ok(0)
        }
        Command::ExportLp { instance, output } => {
            let inst = format::parse_instance(&read_input(&instance)?)?;
            let model = milp::build_model(&inst)?;
            emit(&milp::export_lp(&model), output.as_deref(), out)?;
            Ok(0)
        }
        Command::Bench { config } => {
            let cfg = BenchConfig::parse(&read_input(&config)?)?;
            let report = bench::run_config(&cfg)?;
            for row in &report.rows {
                writeln!(
                    err,
                    "n={} m={} density={} method={}: BS from {}, {} skipped",
                    row.n,
                    row.m,
                    row.density,
                    row.method,
                    row.bs_source.as_str(),
                    row.skipped
                )?;
            }
            out.write_all(report.to_csv().as_bytes())?;
            Ok(0)
        }
    }
}
