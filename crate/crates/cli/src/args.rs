use std::ops::Range;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use signed_hultman::group::GroupSpec;
use signed_hultman::prob::{NegMethod, PowerMethod};
use signed_hultman::{HVertex, SignedPermutation};

#[derive(Debug, Parser)]
#[command(name = "hultman", version, about = "Signed Hultman numbers and signed commuting probabilities")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Output format; commands reject formats they cannot produce.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write a run manifest (JSON) here.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Size of the worker pool; output does not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Lift the rank guards of census, enumeration and normalization.
    #[arg(long, global = true)]
    pub override_size_guard: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Signed Hultman numbers of B_n.
    Census(CensusArgs),
    /// Breakpoint graph walks of one permutation.
    Graph(PiArg),
    /// Number of alternating cycles.
    S(SArgs),
    /// Apply one rewrite operation.
    Op {
        #[arg(value_enum)]
        kind: OpKind,
        #[command(flatten)]
        args: OpArgs,
    },
    /// Rewrite to the canonical representative of the class.
    Normalize(NormalizeArgs),
    #[command(subcommand)]
    Group(GroupCommand),
    #[command(subcommand)]
    Prob(ProbCommand),
    /// Distribution of Pr_π(G) over B_n.
    Spectrum(SpectrumArgs),
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long)]
    pub n: usize,
    /// Split each row into positive and nonpositive counts.
    #[arg(long)]
    pub split: bool,
    /// Number of index shards.
    #[arg(long, default_value_t = 64)]
    pub shards: usize,
    /// Only count enumeration indices START..END.
    #[arg(long, value_parser = parse_range)]
    pub range: Option<Range<u64>>,
}

#[derive(Debug, Args)]
pub struct PiArg {
    #[arg(long, allow_hyphen_values = true)]
    pub pi: SignedPermutation,
    /// Draw walks with ~ and - instead of ⇝ and ↔.
    #[arg(long)]
    pub ascii: bool,
}

#[derive(Debug, Args)]
pub struct SArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub pi: SignedPermutation,
    #[arg(long, value_enum, default_value_t = SMethod::Graph)]
    pub method: SMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SMethod {
    Graph,
    Circ,
    /// Both routes; fails if they disagree.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpKind {
    Exchange,
    Cyclic,
    SignChange,
}

#[derive(Debug, Args)]
pub struct OpArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub pi: SignedPermutation,
    #[arg(long, allow_hyphen_values = true)]
    pub x: HVertex,
    /// Required except for sign-change, where it must be x + 1 if given.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<HVertex>,
}

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub pi: SignedPermutation,
    #[arg(long)]
    pub emit_trace: bool,
    /// BFS state cap.
    #[arg(long, default_value_t = 2_000_000)]
    pub max_states: usize,
}

#[derive(Debug, Args)]
pub struct GroupArg {
    /// cyclic:N, dihedral:2M, quaternion8, symmetric:N, alternating:N,
    /// frobenius21, klein4, direct_sum(A,B,...), file:PATH
    #[arg(long, alias = "group")]
    pub spec: GroupSpec,
}

#[derive(Debug, Subcommand)]
pub enum GroupCommand {
    /// Order, classes and structural counts.
    Info(GroupArg),
    /// Cayley table as a group file.
    Export(GroupArg),
    /// c_{i1..in;j}.
    Constants {
        #[command(flatten)]
        group: GroupArg,
        /// Comma-separated class indices.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        classes: Vec<usize>,
        #[arg(long)]
        target: usize,
    },
    /// |Stab_n(g1..gn)|.
    Stab {
        #[command(flatten)]
        group: GroupArg,
        /// Comma-separated element indices.
        #[arg(long, value_delimiter = ',', required = true)]
        elements: Vec<usize>,
    },
}

#[derive(Debug, Args)]
pub struct ProbGroup {
    #[arg(long)]
    pub group: GroupSpec,
}

#[derive(Debug, Subcommand)]
pub enum ProbCommand {
    /// Pr_π(G) by brute force.
    Pi {
        #[command(flatten)]
        group: ProbGroup,
        #[arg(long, allow_hyphen_values = true)]
        pi: SignedPermutation,
    },
    /// Pr^m(G).
    Power {
        #[command(flatten)]
        group: ProbGroup,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = PowerMethodArg::Auto)]
        method: PowerMethodArg,
    },
    /// Pr^-k(G).
    Neg {
        #[command(flatten)]
        group: ProbGroup,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = NegMethodArg::Squares)]
        method: NegMethodArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PowerMethodArg {
    Bruteforce,
    Classformula,
    Auto,
}

impl From<PowerMethodArg> for PowerMethod {
    fn from(m: PowerMethodArg) -> Self {
        match m {
            PowerMethodArg::Bruteforce => PowerMethod::Bruteforce,
            PowerMethodArg::Classformula => PowerMethod::ClassFormula,
            PowerMethodArg::Auto => PowerMethod::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NegMethodArg {
    Bruteforce,
    Squares,
    Classformula,
}

impl From<NegMethodArg> for NegMethod {
    fn from(m: NegMethodArg) -> Self {
        match m {
            NegMethodArg::Bruteforce => NegMethod::Bruteforce,
            NegMethodArg::Squares => NegMethod::Squares,
            NegMethodArg::Classformula => NegMethod::ClassFormula,
        }
    }
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub group: ProbGroup,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 64)]
    pub shards: usize,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Brute-force Pr_π(G) against the class prediction; exit 1 on a counterexample.
    MainTheorem {
        #[command(flatten)]
        group: ProbGroup,
        #[arg(long)]
        n: usize,
        /// Check this many seeded uniform draws instead of all of B_n.
        #[arg(long, requires = "seed")]
        sampled: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Probability-side corollaries against group structure; exit 1 on disagreement.
    Predicates {
        #[command(flatten)]
        group: ProbGroup,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        k: Vec<usize>,
    },
}

fn parse_range(s: &str) -> Result<Range<u64>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected START..END, got {s:?}"))?;
    let a: u64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a > b {
        return Err(format!("empty range {s:?} has start after end"));
    }
    Ok(a..b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..10").unwrap(), 3..10);
        assert_eq!(parse_range("4..4").unwrap(), 4..4);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("7").is_err());
    }

    #[test]
    fn negative_values_parse() {
        let cli = Cli::try_parse_from(["hultman", "op", "exchange", "--pi", "-2,+1", "--x", "-0", "--y", "+0"]).unwrap();
        let Command::Op { kind, args } = cli.command else { panic!("not op") };
        assert_eq!(kind, OpKind::Exchange);
        assert_eq!(args.x, HVertex::MINUS_ZERO);
        assert_eq!(args.pi.to_string(), "-2,+1");
    }
}
