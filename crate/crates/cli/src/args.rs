use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "grover-su2",
    version,
    about = "Quantum-search experiment driver: step sweeps and closed-form-versus-oracle cross-checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sweep the step count and emit one row per step with the closed-form
    /// probability, the oracle probability (where feasible), and their
    /// absolute difference.
    Sweep(ModelArgs),
    /// Run the closed-form-versus-oracle invariant checks for a model and
    /// exit nonzero on any violation.
    Check(ModelArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// Plain search from the uniform superposition.
    Ideal,
    /// Search from a random initial state (seeded).
    General,
    /// Several marked items ("needles in the same haystack").
    Multi,
    /// Pointer-ensemble decoherence via the F1/F2 factors.
    Decohered,
    /// Phase-matched pointers: the below-classical regime.
    Necoherence,
    /// Dephasing in the rotation eigenbasis, parameterized by (r, delta).
    MinimalCoupling,
    /// Harmonic dephasing bath: decoherence-factor norm and decay fit.
    Bath,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Ideal => "ideal",
            ModelKind::General => "general",
            ModelKind::Multi => "multi",
            ModelKind::Decohered => "decohered",
            ModelKind::Necoherence => "necoherence",
            ModelKind::MinimalCoupling => "minimal-coupling",
            ModelKind::Bath => "bath",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnsembleKind {
    /// All pointers equal: no decoherence, F1 = F2 = 1.
    Identical,
    /// Pairwise orthonormal pointers: complete decoherence, F1 = F2 = 0.
    Orthonormal,
    /// Roots-of-unity phases, vanishing collective pointer: F1 = -1/(N-2).
    PhaseMatched,
    /// Seeded random unit pointers.
    Random,
}

impl EnsembleKind {
    pub fn name(&self) -> &'static str {
        match self {
            EnsembleKind::Identical => "identical",
            EnsembleKind::Orthonormal => "orthonormal",
            EnsembleKind::PhaseMatched => "phase-matched",
            EnsembleKind::Random => "random",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Which probability model to evaluate.
    #[arg(long, value_enum)]
    pub model: ModelKind,

    /// Database size N (all models except bath).
    #[arg(long)]
    pub n: Option<u64>,

    /// Marked basis indices, comma separated (single index except for the
    /// multi model).
    #[arg(long, value_delimiter = ',')]
    pub marked: Option<Vec<usize>>,

    /// Largest step count l in the sweep (default: twice the optimal step
    /// count, or 50 for the bath model).
    #[arg(long)]
    pub steps_max: Option<u64>,

    /// Pointer overlap magnitude r in [0, 1] (minimal-coupling only).
    #[arg(long)]
    pub r: Option<f64>,

    /// Pointer overlap half-phase delta in radians (minimal-coupling only).
    #[arg(long)]
    pub delta: Option<f64>,

    /// Pointer ensemble kind (decohered only; default random).
    #[arg(long, value_enum)]
    pub ensemble: Option<EnsembleKind>,

    /// Environment dimension D (decohered only; defaults per ensemble kind).
    #[arg(long)]
    pub env_dim: Option<usize>,

    /// Bath description file: one `omega g_k g_kprime` line per mode,
    /// '#' lines ignored (bath only).
    #[arg(long)]
    pub bath_file: Option<PathBuf>,

    /// Duration of one search step (minimal-coupling and bath; default 1).
    #[arg(long)]
    pub t0: Option<f64>,

    /// Highest retained Fock level in the bath oracle (default 40).
    #[arg(long)]
    pub fock_cutoff: Option<usize>,

    /// Coherence floor defining the effective step budget (bath;
    /// default 1/e).
    #[arg(long)]
    pub floor: Option<f64>,

    /// Seed for every random choice made by the run.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Output format for sweeps.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Output path, or '-' for stdout.
    #[arg(long, default_value = "-")]
    pub out: String,

    /// Oracle feasibility budget in amplitudes; oracles whose state would
    /// exceed it are skipped.
    #[arg(long, default_value_t = 100_000)]
    pub oracle_budget: u64,
}
