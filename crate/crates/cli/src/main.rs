//! `hgforge` command-line interface.
//!
//! Exit codes: 0 success or property holds, 1 mathematical rejection,
//! 2 input error, 3 degenerate measure (cube still written).

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::output::{emit, Format};

#[derive(Parser)]
#[command(
    name = "hgforge",
    version,
    about = "Structure-constant cubes of finite commutative semihypergroups"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Seed for the pseudo-random measure generator.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    /// Output file: the cube for `derive`, the group for `recover`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PropertySelection {
    All,
    Commutative,
    Associative,
    ConditionA,
    Corollaries,
}

#[derive(Subcommand)]
enum Command {
    /// Check shape, nonnegativity and unit column sums of a cube file.
    Validate { cube: PathBuf },

    /// Run property checks on a cube file.
    Check {
        cube: PathBuf,
        #[arg(long, value_enum, default_value_t = PropertySelection::All)]
        property: PropertySelection,
        /// Maximum witnesses listed per property.
        #[arg(long, default_value_t = hgforge::report::DEFAULT_WITNESS_CAP)]
        witnesses: usize,
    },

    /// Build the cube of the translates of a measure on a group.
    Derive { group: PathBuf, measure: PathBuf },

    /// Recover the group and measure behind a cube.
    Recover {
        cube: PathBuf,
        /// Where to write the recovered measure.
        #[arg(long)]
        out_measure: Option<PathBuf>,
    },

    /// List the abelian groups of order n as invariant-factor lists.
    EnumerateGroups {
        n: usize,
        /// Print only the number of groups.
        #[arg(long)]
        count: bool,
        /// Largest accepted order.
        #[arg(long, default_value_t = hgforge::groups::DEFAULT_ORDER_CAP)]
        cap: usize,
    },

    /// Derive and recover random measures on every abelian group of an order.
    Roundtrip {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Also run uniform measures on subgroups; they count as skipped.
        #[arg(long)]
        include_degenerate: bool,
        /// Weights are drawn as k / D for integers k in 0..=D before renormalizing.
        #[arg(long, default_value_t = hgforge::sampler::DEFAULT_DENOMINATOR)]
        denominator: u32,
        #[arg(long, default_value_t = hgforge::groups::DEFAULT_ORDER_CAP)]
        cap: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, result) = match cli.command {
        Command::Validate { cube } => ("validate", commands::validate(&cube)),
        Command::Check {
            cube,
            property,
            witnesses,
        } => ("check", commands::check(&cube, property, witnesses)),
        Command::Derive { group, measure } => ("derive", commands::derive(&group, &measure, cli.out.as_deref())),
        Command::Recover { cube, out_measure } => (
            "recover",
            commands::recover(&cube, cli.out.as_deref(), out_measure.as_deref()),
        ),
        Command::EnumerateGroups { n, count, cap } => ("enumerate-groups", commands::enumerate_groups(n, count, cap)),
        Command::Roundtrip {
            order,
            trials,
            include_degenerate,
            denominator,
            cap,
        } => (
            "roundtrip",
            commands::roundtrip(commands::RoundtripArgs {
                order,
                trials,
                seed: cli.seed,
                include_degenerate,
                denominator,
                cap,
            }),
        ),
    };
    ExitCode::from(emit(name, cli.format, result))
}
