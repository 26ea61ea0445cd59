#![allow(clippy::result_large_err)]

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{ArgGroup, Parser, Subcommand};
use mergetree::critical::residual_critical_values;
use mergetree::ingest::{self, Connectivity};
use mergetree::json;
use mergetree::locally_correct::{build_locally_correct, check_locally_correct, CheckMode};
use mergetree::oracle::oracle_decide;
use mergetree::solver::residual_distance;
use mergetree::{AnchoredInterleaving, Error, MergeTree, PartialInterleaving, TreePair};

/// Merge tree interleavings: distances, locally correct interleavings and
/// their verification.
#[derive(Parser)]
#[command(name = "mt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a tree, or a partial interleaving given after its two trees.
    Validate {
        #[arg(num_args = 1..=3, value_name = "FILE")]
        files: Vec<PathBuf>,
    },
    /// Print the residual critical values, one per line.
    Critical {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_name = "P.json")]
        constraints: Option<PathBuf>,
    },
    /// Print the (residual) interleaving distance.
    Distance {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_name = "P.json")]
        constraints: Option<PathBuf>,
        /// Write an optimal interleaving.
        #[arg(long, value_name = "OUT.json", conflicts_with = "oracle")]
        witness: Option<PathBuf>,
        /// Use the brute-force decision procedure (small instances only).
        #[arg(long)]
        oracle: bool,
    },
    /// Build a locally correct interleaving.
    LocallyCorrect {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long, value_name = "I.json")]
        output: PathBuf,
        /// Write the per-iteration record.
        #[arg(long, value_name = "TRACE.json")]
        trace: Option<PathBuf>,
    },
    /// Search for a restriction on which the interleaving is not optimal.
    Check {
        first: PathBuf,
        second: PathBuf,
        interleaving: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Try every subset of anchor arrows, however many.
        #[arg(long)]
        exhaustive: bool,
        /// Where a counterexample is written [default: <I>.counterexample.json]
        #[arg(short, long, value_name = "OUT.json")]
        output: Option<PathBuf>,
    },
    /// Build the merge tree of a CSV series or grid.
    #[command(group(ArgGroup::new("input").required(true).args(["series", "grid"])))]
    Ingest {
        #[arg(long, value_name = "CSV")]
        series: Option<PathBuf>,
        #[arg(long, value_name = "CSV")]
        grid: Option<PathBuf>,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(4..=8))]
        connectivity: u8,
        /// Output file; stdout when omitted.
        #[arg(short, long, value_name = "T.json")]
        output: Option<PathBuf>,
    },
    /// Draw two trees and optionally an interleaving as SVG.
    Render {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_name = "I.json")]
        interleaving: Option<PathBuf>,
        /// Constraint arrows whose fans are shaded.
        #[arg(long, value_name = "P.json")]
        constraints: Option<PathBuf>,
        /// Output file; stdout when omitted.
        #[arg(short, long, value_name = "OUT.svg")]
        output: Option<PathBuf>,
    },
}

/// A "no" from the mathematics, as opposed to a malformed call.
#[derive(Debug)]
struct Negative(String);

impl std::fmt::Display for Negative {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Negative {}

fn negative(message: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Negative(message.into()))
}

fn exit_code(error: &anyhow::Error) -> u8 {
    if error.downcast_ref::<Negative>().is_some() {
        return 1;
    }
    match error.downcast_ref::<Error>() {
        Some(Error::Precondition(_) | Error::NotCritical(_) | Error::Internal(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(exit_code(&error))
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn read_tree(path: &Path) -> anyhow::Result<MergeTree> {
    json::tree_from_json(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn read_pair(first: &Path, second: &Path) -> anyhow::Result<TreePair> {
    Ok(TreePair::new(read_tree(first)?, read_tree(second)?))
}

fn read_constraints(pair: &TreePair, path: Option<&Path>) -> anyhow::Result<PartialInterleaving> {
    match path {
        Some(path) => json::interleaving_from_json(pair, &read(path)?).with_context(|| format!("in {}", path.display())),
        None => Ok(PartialInterleaving::empty()),
    }
}

fn with_newline(mut text: String) -> String {
    text.push('\n');
    text
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Validate { files } => validate(&files),
        Command::Critical { first, second, constraints } => {
            let pair = read_pair(&first, &second)?;
            let p = read_constraints(&pair, constraints.as_deref())?;
            for value in residual_critical_values(&pair, &p) {
                println!("{value}");
            }
            Ok(())
        }
        Command::Distance { first, second, constraints, witness, oracle } => {
            let pair = read_pair(&first, &second)?;
            let p = read_constraints(&pair, constraints.as_deref())?;
            if oracle {
                let values = residual_critical_values(&pair, &p);
                for value in &values {
                    if oracle_decide(&pair, &p, value)? {
                        println!("{value}");
                        return Ok(());
                    }
                }
                return Err(negative("no residual critical value is feasible"));
            }
            let (distance, found) = residual_distance(&pair, &p)?;
            if let Some(path) = witness {
                write(&path, &with_newline(json::interleaving_to_json(found.anchors())))?;
            }
            println!("{distance}");
            Ok(())
        }
        Command::LocallyCorrect { first, second, output, trace } => {
            let pair = read_pair(&first, &second)?;
            let (result, record) = build_locally_correct(&pair)?;
            write(&output, &with_newline(json::interleaving_to_json(result.anchors())))?;
            if let Some(path) = trace {
                write(&path, &with_newline(serde_json::to_string_pretty(&record)?))?;
            }
            println!("{}", result.shift());
            Ok(())
        }
        Command::Check { first, second, interleaving, samples, seed, exhaustive, output } => {
            let pair = read_pair(&first, &second)?;
            let anchors = json::interleaving_from_json(&pair, &read(&interleaving)?)
                .with_context(|| format!("in {}", interleaving.display()))?;
            let candidate = AnchoredInterleaving::new(&pair, anchors).map_err(|e| negative(e.to_string()))?;
            let mode = if exhaustive { CheckMode::Exhaustive } else { CheckMode::Auto { samples, seed } };
            match check_locally_correct(&pair, &candidate, &mode)? {
                None => {
                    println!("no counterexample found");
                    Ok(())
                }
                Some(found) => {
                    let path = output.unwrap_or_else(|| interleaving.with_extension("counterexample.json"));
                    write(&path, &with_newline(json::interleaving_to_json(&found.restriction)))?;
                    Err(negative(format!(
                        "not locally correct: a restriction with {} arrows has residual shift {} but residual distance {}; written to {}",
                        found.restriction.len(),
                        found.residual_shift,
                        found.residual_distance,
                        path.display()
                    )))
                }
            }
        }
        Command::Ingest { series, grid, connectivity, output } => {
            let tree = match (series, grid) {
                (Some(path), _) => ingest::merge_tree_from_series(&ingest::parse_series_csv(&read(&path)?)?)?,
                (None, Some(path)) => ingest::merge_tree_from_grid(
                    &ingest::parse_grid_csv(&read(&path)?)?,
                    Connectivity::from_count(connectivity)?,
                )?,
                (None, None) => bail!("one of --series and --grid is required"),
            };
            let text = with_newline(json::tree_to_json(&tree));
            match output {
                Some(path) => write(&path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Render { first, second, interleaving, constraints, output } => {
            let pair = read_pair(&first, &second)?;
            let anchors = match interleaving {
                Some(path) => {
                    let p = json::interleaving_from_json(&pair, &read(&path)?)
                        .with_context(|| format!("in {}", path.display()))?;
                    Some(p)
                }
                None => None,
            };
            let p = read_constraints(&pair, constraints.as_deref())?;
            let svg = render::render(&pair, anchors.as_ref(), &p);
            match output {
                Some(path) => write(&path, &svg),
                None => {
                    print!("{svg}");
                    Ok(())
                }
            }
        }
    }
}

fn validate(files: &[PathBuf]) -> anyhow::Result<()> {
    match files {
        [tree] => {
            let nodes = json::nodes_from_json(&read(tree)?).with_context(|| format!("in {}", tree.display()))?;
            mergetree::tree::validate(&nodes).map_err(|v| negative(format!("{}: {v}", tree.display())))?;
            println!("valid merge tree with {} nodes", nodes.len());
            Ok(())
        }
        [first, second, interleaving] => {
            let pair = read_pair(first, second)?;
            let p = json::interleaving_from_json(&pair, &read(interleaving)?).map_err(|e| match e {
                Error::Json(_) | Error::Parse(_) | Error::Height(_) => anyhow!(e),
                other => negative(format!("{}: {other}", interleaving.display())),
            })?;
            match AnchoredInterleaving::new(&pair, p.clone()).map(|i| i.verify_complete(&pair).map(|()| i)) {
                Ok(Ok(complete)) => println!("valid complete interleaving with shift {}", complete.shift()),
                Ok(Err(violation)) => println!("valid partial interleaving; not complete: {violation}"),
                Err(_) => println!("valid partial interleaving with {} arrows; not complete", p.len()),
            }
            Ok(())
        }
        _ => bail!("expected a tree file, or two tree files and an interleaving file"),
    }
}
