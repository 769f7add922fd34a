use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "takagi", version, about = "Exact experiments on level sets of the Takagi function")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Destination file; standard output when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for randomized checks, recorded in every header.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate τ and τ^S at a point.
    Eval(EvalArgs),
    /// Certified cover of the level set L(y).
    Levelset(LevelsetArgs),
    /// Enumerate the local level set through a point.
    Localset(LocalsetArgs),
    /// Removed intervals, breakpoint words and Ω^L membership.
    Omega(OmegaArgs),
    /// Singular measure masses and self-similarity checks.
    Measure(MeasureArgs),
    /// Γ_{2r} alphabets, box counts, spectrum and bi-Lipschitz checks.
    Dim(DimArgs),
    /// Run the randomized invariant suites.
    Verify(VerifyArgs),
}

fn depth_arg(s: &str) -> Result<u32, String> {
    let d: u32 = s.parse().map_err(|_| format!("not a depth: {s}"))?;
    if d > 64 {
        return Err(format!("depth {d} exceeds the limit 64"));
    }
    Ok(d)
}

#[derive(Args, Debug, Serialize)]
pub struct EvalArgs {
    /// Point as an expansion literal (`0.01(10)`) or a rational (`1/3`).
    #[arg(long)]
    pub x: String,
    /// Grid depth for the SVG graph.
    #[arg(long, default_value_t = 10, value_parser = depth_arg)]
    pub depth: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct LevelsetArgs {
    /// Level as `p/q`.
    #[arg(long)]
    pub y: String,
    #[arg(long, default_value_t = 12, value_parser = depth_arg)]
    pub depth: u32,
}

#[derive(Args, Debug, Serialize)]
pub struct LocalsetArgs {
    #[arg(long)]
    pub x: String,
    /// Number of leading blocks allowed to flip.
    #[arg(long, default_value_t = 8)]
    pub blocks: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaWhat {
    Intervals,
    Breakpoints,
    Counts,
    Lengths,
    Membership,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Full,
    Small,
}

#[derive(Args, Debug, Serialize)]
pub struct OmegaArgs {
    #[arg(long, value_enum, default_value_t = OmegaWhat::Intervals)]
    pub what: OmegaWhat,
    /// Largest breakpoint word length.
    #[arg(long, default_value_t = 8)]
    pub max_len: usize,
    #[arg(long, value_enum, default_value_t = KindArg::Small)]
    pub kind: KindArg,
    /// Point for `--what membership`.
    #[arg(long)]
    pub x: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureWhat {
    Masses,
    Cells,
    Selfsimilar,
    Staircase,
}

#[derive(Args, Debug, Serialize)]
pub struct MeasureArgs {
    #[arg(long, value_enum, default_value_t = MeasureWhat::Masses)]
    pub what: MeasureWhat,
    /// Largest `m` in mass tables.
    #[arg(long, default_value_t = 10)]
    pub m_max: usize,
    /// Number of random self-similarity cases.
    #[arg(long, default_value_t = 100)]
    pub cases: usize,
    /// Grid depth for the staircase.
    #[arg(long, default_value_t = 10, value_parser = depth_arg)]
    pub depth: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DimWhat {
    Alphabet,
    Boxes,
    Spectrum,
    Bilipschitz,
    Local,
}

#[derive(Args, Debug, Serialize)]
pub struct DimArgs {
    #[arg(long, value_enum, default_value_t = DimWhat::Spectrum)]
    pub what: DimWhat,
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    /// Number of alphabet blocks.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 64)]
    pub r_max: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Arith,
    Takagi,
    Level,
    Omega,
    Measure,
    Dim,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Base sample count for randomized checks.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
}
