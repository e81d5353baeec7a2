use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::record::Format;

/// Fault-tolerant cluster states from crystal tilings: symbols, chain
/// complexes, lattices and threshold simulations.
#[derive(Debug, Parser)]
#[command(name = "crystalft", version)]
pub struct Cli {
    /// Worker threads for simulations (defaults to all cores)
    #[arg(long, global = true, env = "CRYSTALFT_THREADS", value_parser = positive)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Delaney symbols: validation, duals and candidate enumeration
    #[command(subcommand)]
    Symbol(SymbolCommand),
    /// Chain complexes and foliation of CSS codes
    #[command(subcommand)]
    Complex(ComplexCommand),
    /// Unit cells, tori and decoder graphs
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Monte Carlo logical failure rate at one noise point
    Simulate(SimulateArgs),
    /// Sweep a noise regime and fit the threshold
    Threshold(ThresholdArgs),
}

#[derive(Debug, Subcommand)]
pub enum SymbolCommand {
    /// Parse a symbol and check the Delaney axioms
    Validate {
        /// Symbol file, or a bundled name (cubic, square, icosahedral, truncated_square)
        symbol: String,
    },
    /// Print the dual symbol
    Dual { symbol: String },
    /// Search for an isomorphism to the dual
    Selfdual { symbol: String },
    /// Enumerate grid candidates for self-dual 3D symbols
    Enumerate {
        /// Target size divisor n
        #[arg(long)]
        n: u32,
        /// Grid side k (divides n, or equals 2n with a periodic boundary)
        #[arg(long)]
        k: usize,
        /// Grid boundary: loop or periodic
        #[arg(long, default_value = "loop")]
        boundary: String,
        /// Print only the number of candidates
        #[arg(long)]
        count_only: bool,
        /// Print full symbols instead of m12 label lists
        #[arg(long, conflicts_with = "count_only")]
        symbols: bool,
        /// Stop after this many candidates
        #[arg(long)]
        limit: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ComplexCommand {
    /// Check a complex file and print its dimensions and Betti numbers
    Check { file: PathBuf },
    /// Foliate a CSS code into a length-3 complex
    Foliate {
        /// Complex file of length 2, or a bundled code (422, toric:L)
        code: String,
        /// Number of layers
        #[arg(long, default_value_t = 1, value_parser = positive)]
        layers: usize,
        /// Output file (defaults to standard output)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum LatticeCommand {
    /// Build the decoder graph on an L-torus and print it as JSON
    Build {
        /// Bundled lattice name or unit-cell file
        #[arg(long, visible_alias = "lattice")]
        name: String,
        #[arg(long = "L", value_parser = size)]
        l: usize,
        /// Output file (defaults to standard output)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Counts and average degrees of one cell
    Stats {
        #[arg(long, visible_alias = "lattice")]
        name: String,
    },
    /// Bundled lattices with decoder and graph-state degrees
    List,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("noise").required(true).args(["regime", "pz"])))]
pub struct SimulateArgs {
    /// Bundled lattice name or unit-cell file
    #[arg(long)]
    pub lattice: String,
    /// Torus sizes, comma separated
    #[arg(long = "L", value_delimiter = ',', required = true, value_parser = size)]
    pub l: Vec<usize>,
    /// Noise regime (pz, pz10, sym, px10), used with --p
    #[arg(long, requires = "p", conflicts_with_all = ["pz", "px", "pm"])]
    pub regime: Option<String>,
    /// Largest rate of the regime
    #[arg(long, requires = "regime")]
    pub p: Option<f64>,
    /// Z gate failure rate
    #[arg(long)]
    pub pz: Option<f64>,
    /// X gate failure rate
    #[arg(long, requires = "pz")]
    pub px: Option<f64>,
    /// Measurement failure rate
    #[arg(long, requires = "pz")]
    pub pm: Option<f64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output file (defaults to standard output)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Edge weights: neg-log or log-odds
    #[arg(long, default_value = "neg-log")]
    pub weights: String,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Bundled lattice name or unit-cell file
    #[arg(long)]
    pub lattice: String,
    /// Noise regime: pz, pz10, sym or px10
    #[arg(long)]
    pub regime: String,
    /// Torus sizes, comma separated
    #[arg(long = "Ls", value_delimiter = ',', required = true, value_parser = size)]
    pub ls: Vec<usize>,
    #[arg(long)]
    pub pmin: f64,
    #[arg(long)]
    pub pmax: f64,
    /// Number of evenly spaced rates
    #[arg(long, default_value_t = 8, value_parser = positive)]
    pub points: usize,
    /// Trials per point
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Bootstrap resamples for the error bars
    #[arg(long, default_value_t = 200)]
    pub bootstrap: usize,
    /// Edge weights: neg-log or log-odds
    #[arg(long, default_value = "neg-log")]
    pub weights: String,
    /// Output file for the JSON report (defaults to standard output)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the per-point rows as CSV
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn size(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n < 2 => Err("torus size must be at least 2".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}
