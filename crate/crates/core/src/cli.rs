//! Command-line front end.
//!
//! Exit status: 0 success (and rationalizable for `test`), 1 a negative
//! verdict (`test` not rationalizable, `verify` disagreement, `tum`
//! violation), 2 invalid input, 3 enumeration cap or internal error.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    check_decomposition_optimality, choice_counts, cross_validate, exchange_repair,
    primal_decompose, random_demand, shared_classes, test_rationalizable, type_classes,
};
use crate::error::{Error, Result};
use crate::problem::{parse_index_map, parse_problem, Instance};
use crate::report::{self, Report};
use crate::revealed::{enumerate_types, TypeSpace, DEFAULT_TYPE_CAP};
use crate::xi::{chain_partition, check_total_unimodularity};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Patch enumeration with witness points.
    Patches,
    /// The Ξ matrix.
    Xi,
    /// The row test Ξπ >= 1.
    Test,
    /// Largest weight on rational types, D(π).
    Weight,
    /// An optimal decomposition of π into behavioral types.
    Decompose,
    /// The type classes of every row.
    Classes,
    /// Exchange repair of the types in the problem file.
    Repair,
    /// The chain partition of the subfamilies.
    Chain,
    /// Cross-check of the row test against LP oracles.
    Verify,
    /// Total unimodularity probe of Ξ.
    Tum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "rum-dual", version, about = "Exact random utility rationalizability tests on linear budgets")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Problem file; standard input when absent or `-`.
    pub input: Option<PathBuf>,
    /// Patch relabeling for display, overriding the one in the problem file.
    #[arg(long)]
    pub index_map: Option<PathBuf>,
    /// Cap on the number of behavioral types to enumerate.
    #[arg(long, default_value_t = DEFAULT_TYPE_CAP as u64)]
    pub max_types: u64,
    /// Seed for sampling (`verify --samples`, large `tum` probes).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Extra random demand systems for `verify`.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    /// Largest submatrix order for `tum`; defaults to the full size.
    #[arg(long)]
    pub max_order: Option<usize>,
}

pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::EnumerationCap { .. } | Error::Internal(_) => EXIT_LIMIT,
        _ => EXIT_INPUT,
    }
}

fn types(inst: &Instance, cli: &Cli) -> Result<TypeSpace> {
    enumerate_types(&inst.layout, u128::from(cli.max_types))
}

/// Runs one command on an already loaded instance. Returns the report and
/// the exit status it implies.
pub fn run_command(cli: &Cli, inst: &Instance) -> Result<(Report, i32)> {
    let layout = &inst.layout;
    let xi = &inst.xi;
    Ok(match cli.command {
        Command::Patches => (Report::Patches(report::patches_doc(inst)), EXIT_OK),
        Command::Xi => (Report::Xi(report::xi_doc(inst)), EXIT_OK),
        Command::Test => {
            let r = test_rationalizable(layout, xi, inst.require_pi()?)?;
            let code = if r.rationalizable { EXIT_OK } else { EXIT_NEGATIVE };
            (Report::Test(report::test_doc(&r)), code)
        }
        Command::Weight => {
            let r = test_rationalizable(layout, xi, inst.require_pi()?)?;
            (Report::Weight(report::weight_doc(&r)), EXIT_OK)
        }
        Command::Decompose => {
            let pi = inst.require_pi()?;
            let space = types(inst, cli)?;
            let d = primal_decompose(layout, &space, pi)?;
            let classes = type_classes(layout, xi, &space);
            let verdict = check_decomposition_optimality(&d, &classes);
            (Report::Decompose(report::decompose_doc(inst, &d, &verdict)), EXIT_OK)
        }
        Command::Classes => {
            let space = types(inst, cli)?;
            let classes = type_classes(layout, xi, &space);
            let shared = (!inst.types.is_empty()).then(|| shared_classes(layout, xi, &inst.types));
            (Report::Classes(report::classes_doc(inst, &classes, shared.as_deref())), EXIT_OK)
        }
        Command::Repair => {
            let outcome = exchange_repair(layout, xi, &inst.types)?;
            let preserved = choice_counts(layout, &outcome.types) == choice_counts(layout, &inst.types);
            (Report::Repair(report::repair_doc(inst, &inst.types, &outcome, preserved)), EXIT_OK)
        }
        Command::Chain => {
            let chain = chain_partition(&inst.family, layout)?;
            (Report::Chain(report::chain_doc(inst, &chain)), EXIT_OK)
        }
        Command::Verify => {
            let pi = inst.require_pi()?;
            let space = types(inst, cli)?;
            let certificate = cross_validate(layout, xi, &space, pi)?;
            let exceptions = space
                .all
                .iter()
                .zip(&space.rational)
                .filter(|(a, &r)| xi.covers(layout, a) != r)
                .count();
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let mut extra = Vec::new();
            for k in 0..cli.samples {
                let sample = random_demand(layout, &mut rng);
                let c = cross_validate(layout, xi, &space, &sample)?;
                extra.extend(c.disagreements.into_iter().map(|d| format!("sample {}: {d}", k + 1)));
            }
            let doc = report::verify_doc(&certificate, exceptions, space.len(), cli.samples, extra);
            let code = if doc.agree { EXIT_OK } else { EXIT_NEGATIVE };
            (Report::Verify(doc), code)
        }
        Command::Tum => {
            let matrix = xi.as_integers();
            let full = xi.num_rows().min(xi.num_cols());
            let order = cli.max_order.unwrap_or(full).min(full);
            let verdict = check_total_unimodularity(&matrix, order, cli.seed);
            let code = if verdict.is_unimodular() { EXIT_OK } else { EXIT_NEGATIVE };
            (Report::Tum(report::tum_doc(xi.num_rows(), xi.num_cols(), &verdict)), code)
        }
    })
}

fn read_input(cli: &Cli) -> Result<String> {
    let io_error = |e: io::Error| Error::Problem {
        field: "input".into(),
        reason: e.to_string(),
    };
    match cli.input.as_deref() {
        Some(path) if path.as_os_str() != "-" => fs::read_to_string(path).map_err(io_error),
        _ => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text).map_err(io_error)?;
            Ok(text)
        }
    }
}

/// Loads the problem named on the command line and runs the command.
pub fn execute(cli: &Cli) -> Result<(Report, i32)> {
    let problem = parse_problem(&read_input(cli)?)?;
    let map = match &cli.index_map {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Problem {
                field: "index_map".into(),
                reason: format!("{}: {e}", path.display()),
            })?;
            Some(parse_index_map(&text)?)
        }
        None => None,
    };
    let inst = Instance::from_problem(&problem, map.as_deref())?;
    run_command(cli, &inst)
}

/// Entry point for the binary; returns the process exit status.
pub fn main_with(cli: Cli) -> i32 {
    match execute(&cli) {
        Ok((report, code)) => {
            let text = match cli.format {
                Format::Text => report::to_text(&report),
                Format::Machine => report::to_machine(&report) + "\n",
            };
            print!("{text}");
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
