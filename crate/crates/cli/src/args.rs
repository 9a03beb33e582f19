use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gbss_core::search::{DEFAULT_BUDGET, DEFAULT_SEED};
use gbss_core::{EntropySpec, GammaConvention};

#[derive(Debug, Parser)]
#[command(name = "gbss", version, about = "Discord and geometric discord of generalized Bloch sphere states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump a maximal anticommuting set and its identity checks.
    Gamma(GammaArgs),
    /// Closed-form and numerical spectrum of a state, with its region tags.
    State(StateArgs),
    /// Mutual information, classical correlation and discord.
    Discord(DiscordArgs),
    /// Geometric discord, closed form and basis-search oracle.
    Gmqd(GmqdArgs),
    /// Extremal geometric discord over the physical and separable regions.
    Region(RegionArgs),
    /// Sample a constant-GMQD level surface and write CSV.
    Levels(LevelsArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum Convention {
    #[default]
    Tower,
    Weyl,
}

impl From<Convention> for GammaConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Tower => GammaConvention::Tower,
            Convention::Weyl => GammaConvention::Weyl,
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// Gamma-matrix convention (weyl is only defined for N = 4).
    #[arg(long, value_enum, default_value_t = Convention::Tower, global = true)]
    pub convention: Convention,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

/// A state given either inline (`--n --m --t [--x --y]`) or as a JSON
/// descriptor (`--state '{"n":1,"m":1,"t":[...]}'` or `--state file.json`).
#[derive(Debug, Args)]
pub struct StateInput {
    /// JSON descriptor, inline or a path to a file.
    #[arg(long, conflicts_with_all = ["n", "m", "t", "x", "y"])]
    pub state: Option<String>,
    /// Qubits on side A (N = 2^n).
    #[arg(long)]
    pub n: Option<usize>,
    /// Qubits on side B (M = 2^m, m >= n).
    #[arg(long)]
    pub m: Option<usize>,
    /// Correlation coefficients t_1..t_{2n+1}, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub t: Option<Vec<f64>>,
    /// Local vector on A, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Option<Vec<f64>>,
    /// Local vector on B, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub y: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct OracleInput {
    /// Random bases scored by the oracle; 0 skips the oracle.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub oracle_budget: usize,
    /// Seed for every random draw (decimal or 0x-prefixed hex).
    #[arg(long, env = "GBSS_SEED", default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GammaArgs {
    /// Clifford dimension d (even); the matrices are 2^(d/2) square.
    #[arg(long, conflicts_with = "dim")]
    pub d: Option<usize>,
    /// Matrix dimension N (power of two); shorthand for d = 2 log2 N.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Include the matrices themselves.
    #[arg(long)]
    pub matrices: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub input: StateInput,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct DiscordArgs {
    #[command(flatten)]
    pub input: StateInput,
    /// vn, renyi:q (0 <= q <= 1) or tsallis:q (q > 0).
    #[arg(long, default_value = "vn", value_parser = parse_entropy)]
    pub entropy: EntropySpec,
    #[command(flatten)]
    pub oracle: OracleInput,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct GmqdArgs {
    #[command(flatten)]
    pub input: StateInput,
    #[command(flatten)]
    pub oracle: OracleInput,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, env = "GBSS_SEED", default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct LevelsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    /// Target geometric discord.
    #[arg(long = "D", id = "target")]
    pub target: f64,
    /// Number of points to draw.
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long, env = "GBSS_SEED", default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only these criteria (comma separated numbers 1-8).
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(1..=8))]
    pub only: Option<Vec<u8>>,
    #[command(flatten)]
    pub oracle: OracleInput,
    #[command(flatten)]
    pub common: Common,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

fn parse_entropy(s: &str) -> Result<EntropySpec, String> {
    s.parse().map_err(|e: gbss_core::Error| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn seeds_accept_hex_and_decimal() {
        assert_eq!(parse_seed("0xD15C0"), Ok(0xD15C0));
        assert_eq!(parse_seed("42"), Ok(42));
        assert!(parse_seed("0xZZ").is_err());
    }

    #[test]
    fn negative_coefficients_parse() {
        let cli = Cli::try_parse_from(["gbss", "state", "--n", "1", "--m", "1", "--t", "1,-1,1"]).unwrap();
        let Command::State(args) = cli.command else { panic!("wrong subcommand") };
        assert_eq!(args.input.t, Some(vec![1.0, -1.0, 1.0]));
    }
}
