//! `gralg`: build atom structures and algebras from graphs, run the check
//! suites and the network game, and check duality over graph chains.

mod commands;
mod config;
mod input;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{Config, Output, Overrides};
use report::Report;
use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;

/// A usage, input or resource problem; always exit code 2.
#[derive(Debug)]
pub struct CliError {
    /// The offending field, file or argument.
    pub field: String,
    pub message: String,
}

impl CliError {
    pub fn input(field: impl Display, message: impl Display) -> Self {
        CliError {
            field: field.to_string(),
            message: message.to_string(),
        }
    }

    pub fn resource(field: impl Display, message: impl Display) -> Self {
        Self::input(field, format!("resource limit: {message}"))
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Parser, Debug)]
#[command(name = "gralg", version, about)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// JSON config file, overriding the file named in GRALG_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Dimension (3..=5).
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    atom_bound: Option<usize>,
    /// Random samples per sampled check.
    #[arg(long = "samples", global = true)]
    sample_count: Option<usize>,
    #[arg(long, global = true, value_enum)]
    output: Option<Output>,
    /// Rounds of the network game.
    #[arg(long, global = true)]
    depth: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Graph utilities.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Atom structures.
    #[command(subcommand)]
    Atoms(AtomsCmd),
    /// Complex algebras and their axioms.
    #[command(subcommand)]
    Bao(BaoCmd),
    /// The graph-sorted model and its lemma suites.
    #[command(subcommand)]
    Ags(AgsCmd),
    /// Ultrafilter networks.
    #[command(subcommand)]
    Net(NetCmd),
    /// The network game.
    #[command(subcommand)]
    Game(GameCmd),
    /// Duality between graph maps and algebra embeddings.
    #[command(subcommand)]
    Dual(DualCmd),
    /// Composite suites.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Subcommand, Debug)]
enum GraphCmd {
    /// List the builtin graph names.
    List,
    /// Print a graph as JSON, or as DOT with --dot.
    Show {
        graph: String,
        #[arg(long)]
        dot: bool,
    },
    /// Exact chromatic number with a witness colouring.
    Chi { graph: String },
    /// Girth (null for an acyclic graph).
    Girth { graph: String },
    /// The inflated graph Γ×n.
    Inflate { graph: String },
    /// The Mycielskian.
    Mycielski { graph: String },
    /// Seeded random search for a graph of given girth and chromatic number.
    Search {
        #[arg(long)]
        girth: usize,
        #[arg(long)]
        chi: usize,
        #[arg(long, default_value_t = gralg::graph::SearchParams::DEFAULT_BUDGET)]
        budget: usize,
    },
}

#[derive(Subcommand, Debug)]
enum AtomsCmd {
    /// Enumerate the atoms of a graph.
    Enumerate {
        graph: String,
        #[arg(long)]
        count_only: bool,
    },
}

#[derive(Subcommand, Debug)]
enum BaoCmd {
    /// Build the complex algebra and summarise it.
    Build { graph: String },
    /// Check an axiom set: `ca`, `pea`, or an equation file.
    Check {
        graph: String,
        #[arg(long)]
        axioms: String,
        /// Corrupt one cylindrification row before checking.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Check that the algebra has a discriminator term.
    Discriminator { graph: String },
    /// Check the canonical extension against the algebra.
    Canext { graph: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteName {
    Rs,
    Proj,
    Subst,
    Model,
    All,
}

#[derive(Subcommand, Debug)]
enum AgsCmd {
    /// Build the model and summarise it.
    Build { graph: String },
    /// Evaluate θ_k both via χ and via independent covers.
    Theta {
        graph: String,
        #[arg(long)]
        k: usize,
    },
    /// Run a lemma suite.
    Suite {
        graph: String,
        #[arg(value_enum)]
        which: SuiteName,
        /// Make S_0 forget the atoms above vertex 0.
        #[arg(long)]
        inject_fault: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Cylindric,
    Polyadic,
}

#[derive(Subcommand, Debug)]
enum NetCmd {
    /// Print the one-node starting network.
    Initial { graph: String },
    /// Check the network conditions.
    Validate {
        graph: String,
        network: PathBuf,
        #[arg(long, value_enum, default_value = "polyadic")]
        mode: ModeArg,
    },
    /// The patch system on the boundary of a network, with its coherence.
    Boundary { graph: String, network: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    #[value(alias = "paper")]
    Constructed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MovesArg {
    Atoms,
    Elements,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SymmetryArg {
    Lex,
    Seeded,
}

#[derive(Subcommand, Debug)]
enum GameCmd {
    /// Play the game from the starting network to the configured depth.
    Run {
        graph: String,
        #[arg(long, value_enum, default_value = "exhaustive")]
        strategy: StrategyArg,
        #[arg(long, value_enum, default_value = "atoms")]
        moves: MovesArg,
        #[arg(long, value_enum, default_value = "polyadic")]
        mode: ModeArg,
        /// Representative choice for the constructed strategy.
        #[arg(long, value_enum, default_value = "lex")]
        symmetry: SymmetryArg,
        /// Search steps before giving up with an unknown verdict.
        #[arg(long, default_value_t = gralg::networks::DEFAULT_STEP_BUDGET)]
        budget: u64,
    },
}

#[derive(Subcommand, Debug)]
enum DualCmd {
    /// Lift a vertex map to the atom structures and check it and its dual.
    Lift {
        source: String,
        target: String,
        /// Target vertex for each source vertex.
        #[arg(long, value_delimiter = ',', required = true)]
        map: Vec<usize>,
        /// Redirect the image of atom 0 before checking.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Check every stage, step and composite of a chain.
    CheckChain {
        /// Chain JSON file.
        #[arg(required_unless_present = "wraps", conflicts_with = "wraps")]
        chain: Option<PathBuf>,
        /// The chain C_base ← C_2base ← … with the given number of wrap steps.
        #[arg(long, value_delimiter = ',', value_name = "BASE,STEPS")]
        wraps: Option<Vec<usize>>,
    },
}

#[derive(Subcommand, Debug)]
enum SuiteCmd {
    /// Every module suite on one graph.
    All {
        #[arg(long)]
        graph: String,
    },
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let g = &cli.global;
    let overrides = Overrides {
        n: g.n,
        seed: g.seed,
        atom_bound: g.atom_bound,
        sample_count: g.sample_count,
        output: g.output,
        depth: g.depth,
    };
    let outcome = Config::load(g.config.as_deref(), &overrides).and_then(|config| {
        let mut report = Report::new(argv[1..].to_vec(), config);
        commands::run(&cli.command, &mut report)?;
        Ok(report)
    });
    match outcome {
        Ok(report) => {
            println!("{}", report.render());
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
