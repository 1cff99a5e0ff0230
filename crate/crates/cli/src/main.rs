//! `tqcsp`: command-line front end for the temporal QCSP analysis engine.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tqcsp_core::Bounds;

const BUILD_ID: &str = concat!(env!("CARGO_PKG_VERSION"), " (", env!("TQCSP_BUILD_ID"), ")");

/// Exit code for malformed input.
pub const EXIT_INPUT: u8 = 2;
/// Exit code for internal inconsistencies.
pub const EXIT_INTERNAL: u8 = 1;

#[derive(Debug, Parser)]
#[command(name = "tqcsp", version = BUILD_ID, about = "Analyse temporal constraint languages over (Q; <)")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Search bounds, e.g. `E=2,A=4,D=2,C=6`.
    #[arg(long, global = true, value_name = "LIST")]
    pub bounds: Option<String>,
    /// Seed for sampled modes.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for the parallel engines.
    #[arg(long, global = true, value_name = "N")]
    pub parallel: Option<usize>,
}

impl Global {
    pub fn bounds(&self) -> anyhow::Result<Bounds> {
        let mut b = match &self.bounds {
            Some(text) => text.parse::<Bounds>()?,
            None => Bounds::default(),
        };
        if let Some(seed) = self.seed {
            b.seed = seed;
        }
        Ok(b)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the QCSP of a language as P, NP-hard or coNP-hard.
    Classify {
        #[arg(long)]
        language: PathBuf,
    },
    /// Check preservation of every relation by a catalog operation.
    PolyCheck {
        #[arg(long)]
        op: String,
        #[arg(long)]
        language: PathBuf,
    },
    /// Evaluate a primitive positive formula to its orbit set.
    PpEval {
        #[arg(long)]
        language: PathBuf,
        #[arg(long)]
        expr: String,
        /// Output variable order; defaults to order of first appearance.
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
    },
    /// Search for a pp-definition of a relation within the bounds.
    PpSearch {
        #[arg(long)]
        language: PathBuf,
        /// Catalog or language relation name.
        #[arg(long, conflicts_with = "formula", required_unless_present = "formula")]
        target: Option<String>,
        /// Target given as a first-order formula over `<`.
        #[arg(long)]
        formula: Option<String>,
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
    },
    /// Decide a quantified conjunction over a language.
    QcspEval {
        #[arg(long)]
        language: PathBuf,
        #[arg(long, conflicts_with = "expr", required_unless_present = "expr")]
        instance: Option<PathBuf>,
        #[arg(long)]
        expr: Option<String>,
    },
    /// Ord-Horn, positive, equality or Guarded Ord-Horn definitions.
    Define {
        #[arg(long)]
        kind: String,
        /// Catalog relation name or language file.
        #[arg(long)]
        relation: String,
    },
    /// Classify a unary piecewise operation.
    UnaryClassify {
        /// Spec file or catalog name.
        #[arg(long)]
        op: String,
    },
    /// Bounded check that a set of operations generates another.
    GenerateCheck {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 3)]
        arity: usize,
    },
    /// List the catalog relations and operations.
    Catalog,
    /// Run the exhaustive law suites.
    Sweep {
        #[arg(long, default_value_t = 3)]
        arity: usize,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.global.parallel {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not size the worker pool: {e}");
        }
    }
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let internal = e
                .chain()
                .any(|c| matches!(c.downcast_ref::<tqcsp_core::Error>(), Some(tqcsp_core::Error::InternalInconsistency(_))));
            ExitCode::from(if internal { EXIT_INTERNAL } else { EXIT_INPUT })
        }
    }
}
