use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "singer-gq",
    version,
    about = "Generalized quadrangles, their Singer groups and lattice presentations"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Output format (json by default; gap for `lattice emit`).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Refuse to build any group or structure larger than this.
    #[arg(long, global = true, env = "SINGER_GQ_MAX_ORDER", default_value_t = 1 << 16)]
    pub max_order: u64,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// How much of the constructed objects to verify.
    #[arg(long, global = true, value_enum, default_value_t = VerifyLevel::Full)]
    pub verify_level: VerifyLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
    Markdown,
    Gap,
    Magma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyLevel {
    Full,
    Sample,
    Off,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build, verify or derive generalized quadrangles.
    #[command(subcommand)]
    Gq(GqCommand),
    /// Enumerate and classify the Singer groups of 𝒫(q).
    #[command(subcommand)]
    Singer(SingerCommand),
    /// Hyperovals and the Singer groups of T₂*(ℋ).
    #[command(subcommand)]
    Hyperoval(HyperovalCommand),
    /// Lattice presentations from two Singer groups.
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Run every claim check and aggregate the results into one table.
    Report(ReportArgs),
}

#[derive(Debug, Subcommand)]
pub enum GqCommand {
    /// Build W(q) and certify it.
    Build(QArg),
    /// Verify the quadrangle axioms of an incidence CSV (`point_id,line_id`).
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Build 𝒫(q), the Payne derivative of W(q), and certify it.
    Derive(QArg),
}

#[derive(Debug, Clone, Args)]
pub struct QArg {
    #[arg(long)]
    pub q: u32,
}

#[derive(Debug, Subcommand)]
pub enum SingerCommand {
    /// One record per element of B(ℓ), plus a summary.
    Enumerate(SingerArgs),
    /// Abelian-quotient count, fingerprint classes and commuting multisets.
    Classify(SingerArgs),
    /// Cross-check the counting claims for q, or run the prime-case census.
    Census(CensusArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SingerArgs {
    #[arg(long)]
    pub q: u32,
    /// Line of Π(x) (0..=q).
    #[arg(long, default_value_t = 0)]
    pub line: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CensusArgs {
    #[arg(long, required_unless_present = "p")]
    pub q: Option<u32>,
    #[arg(long, requires = "prime_case")]
    pub p: Option<u32>,
    #[arg(long)]
    pub prime_case: bool,
    /// Verify this many random lifts instead of all of them.
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum HyperovalCommand {
    /// Build a hyperoval and, with --verify, its quadrangle and Singer group.
    Build(HyperovalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HyperovalKindArg {
    Regular,
    Translation,
    Payne,
}

#[derive(Debug, Clone, Args)]
pub struct HyperovalArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long, value_enum, default_value_t = HyperovalKindArg::Regular)]
    pub kind: HyperovalKindArg,
    /// Exponent 2^k of a translation hyperoval.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Subcommand)]
pub enum LatticeCommand {
    /// Emit the Γ₁ presentation for two Singer groups.
    Emit(LatticeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GqKind {
    /// 𝒫(q) with lifted Singer groups.
    Payne,
    /// T₂* of the regular hyperoval with its translation Singer group.
    T2star,
}

#[derive(Debug, Clone, Args)]
pub struct LatticeArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long, value_enum, default_value_t = GqKind::Payne)]
    pub gq: GqKind,
    /// Use the lift of the zero candidate for both groups.
    #[arg(long, conflicts_with_all = ["singer_a", "singer_b"])]
    pub classic: bool,
    /// Candidate index of S in B(ℓ).
    #[arg(long)]
    pub singer_a: Option<u64>,
    /// Candidate index of S′ in B(ℓ).
    #[arg(long)]
    pub singer_b: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub line: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Include the slow rows (q = 8, 9 samples, q = 32 hyperoval, n = 5).
    #[arg(long)]
    pub all: bool,
    /// Skip rows whose field order exceeds this.
    #[arg(long, default_value_t = 9)]
    pub max_q: u32,
}
