use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rankpart::cli::{
    census, cmd_diff, cmd_generate, cmd_reshuffle, cmd_verify, node_budget_from_env, render_census,
    render_verify, Family, Fault, HeadSelector, RunConfig, DEFAULT_HORIZON, DEFAULT_SHOWN,
};
use rankpart::io::Format;
use rankpart::Error;

#[derive(Parser)]
#[command(
    name = "rankpart",
    version,
    about = "Rank-sum partitions of the non-negative integers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a partition table for the standard partition, a head id, or a head file.
    Generate {
        #[arg(long, default_value_t = 5)]
        m: i64,
        #[arg(long, default_value = "standard")]
        head: HeadSelector,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
        #[arg(long, default_value_t = DEFAULT_SHOWN)]
        show: usize,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Enumerate every head and report counts, groups and classes.
    Census {
        #[arg(long, default_value_t = 5)]
        m: i64,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
        /// Also classify with the standard partition included.
        #[arg(long)]
        both_protocols: bool,
        #[arg(long, default_value = "json")]
        format: Format,
    },
    /// Run the invariant suites; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value_t = 5)]
        m: i64,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
        /// Corrupt the data under test: schedule[:RANK] or swap[:SET,RANK,SET,RANK].
        #[arg(long)]
        inject: Option<Fault>,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Ranks where a partition departs from the standard one.
    Diff {
        #[arg(long, default_value_t = 5)]
        m: i64,
        #[arg(long)]
        head: HeadSelector,
        #[arg(long, default_value = "standard", value_parser = ["standard"])]
        against: String,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Apply a sum-preserving exchange family to the m = 5 standard partition.
    Reshuffle {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        kmax: usize,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
        #[arg(long, default_value_t = DEFAULT_SHOWN)]
        show: usize,
        #[arg(long, default_value = "text")]
        format: Format,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Resource { .. } => 3,
        Error::Collision { .. } | Error::Negative { .. } | Error::Horizon { .. } => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<(String, bool), Error> {
    let budget = node_budget_from_env()?;
    let base = |m: i64, horizon: usize| -> Result<RunConfig, Error> {
        Ok(RunConfig::new(m)?
            .with_horizon(horizon)
            .with_node_budget(budget))
    };
    match cli.command {
        Command::Generate {
            m,
            head,
            horizon,
            show,
            format,
        } => {
            let run = base(m, horizon)?.with_shown(show).with_format(format);
            Ok((cmd_generate(&run, &head)?, true))
        }
        Command::Census {
            m,
            horizon,
            both_protocols,
            format,
        } => {
            let run = base(m, horizon)?;
            let report = census(&run, both_protocols)?;
            Ok((render_census(&report, format)?, true))
        }
        Command::Verify {
            m,
            horizon,
            inject,
            format,
        } => {
            let run = base(m, horizon)?;
            let report = cmd_verify(&run, inject)?;
            Ok((render_verify(&report, format), report.passed))
        }
        Command::Diff {
            m,
            head,
            horizon,
            format,
            ..
        } => {
            let run = base(m, horizon)?.with_format(format);
            Ok((cmd_diff(&run, &head)?, true))
        }
        Command::Reshuffle {
            family,
            kmax,
            horizon,
            show,
            format,
        } => {
            let run = base(5, horizon)?.with_shown(show).with_format(format);
            Ok((cmd_reshuffle(&run, family, kmax)?, true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("rankpart: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
