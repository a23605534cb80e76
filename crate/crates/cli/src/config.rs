use std::fmt;
use std::fs;
use std::path::PathBuf;

use grover_su2::decoherence::BathSpec;
use num_complex::Complex64;

use crate::args::{EnsembleKind, ModelArgs, ModelKind, OutputFormat};

/// Errors that terminate a run, each mapped to a distinct exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 1.
    InvalidConfig(String),
    /// Exit code 2; the report has already been written.
    CheckFailed,
    /// Exit code 3.
    OracleInfeasible(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            CliError::CheckFailed => write!(f, "crosscheck failed"),
            CliError::OracleInfeasible(msg) => write!(f, "oracle infeasible: {msg}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidConfig(_) => 1,
            CliError::CheckFailed => 2,
            CliError::OracleInfeasible(_) => 3,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::InvalidConfig(msg.into())
}

/// Fully resolved model parameters.
#[derive(Debug)]
pub enum ModelConfig {
    Ideal {
        n: u64,
        marked: usize,
    },
    General {
        n: u64,
        marked: usize,
    },
    Multi {
        n: u64,
        marked: Vec<usize>,
    },
    Decohered {
        n: u64,
        marked: usize,
        kind: EnsembleKind,
        env_dim: usize,
    },
    Necoherence {
        n: u64,
        marked: usize,
    },
    MinimalCoupling {
        n: u64,
        r: f64,
        delta: f64,
        t0: f64,
    },
    Bath {
        bath: BathSpec,
        path: PathBuf,
        fock_cutoff: usize,
        floor: f64,
    },
}

#[derive(Debug)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    pub steps_max: u64,
    pub seed: u64,
    pub format: OutputFormat,
    pub out: String,
    pub oracle_budget: u64,
}

impl ExperimentConfig {
    pub fn model_name(&self) -> &'static str {
        match self.model {
            ModelConfig::Ideal { .. } => "ideal",
            ModelConfig::General { .. } => "general",
            ModelConfig::Multi { .. } => "multi",
            ModelConfig::Decohered { .. } => "decohered",
            ModelConfig::Necoherence { .. } => "necoherence",
            ModelConfig::MinimalCoupling { .. } => "minimal-coupling",
            ModelConfig::Bath { .. } => "bath",
        }
    }
}

/// Reject flags that have no meaning for the chosen model, so a config
/// error never silently shadows an intended parameter.
fn reject_irrelevant(args: &ModelArgs) -> Result<(), CliError> {
    let model = args.model;
    let mut offenders: Vec<&str> = Vec::new();
    let relevant_r = matches!(model, ModelKind::MinimalCoupling);
    if args.r.is_some() && !relevant_r {
        offenders.push("--r");
    }
    if args.delta.is_some() && !relevant_r {
        offenders.push("--delta");
    }
    if args.ensemble.is_some() && !matches!(model, ModelKind::Decohered) {
        offenders.push("--ensemble");
    }
    if args.env_dim.is_some() && !matches!(model, ModelKind::Decohered) {
        offenders.push("--env-dim");
    }
    if args.bath_file.is_some() && !matches!(model, ModelKind::Bath) {
        offenders.push("--bath-file");
    }
    if args.t0.is_some() && !matches!(model, ModelKind::MinimalCoupling | ModelKind::Bath) {
        offenders.push("--t0");
    }
    if args.fock_cutoff.is_some() && !matches!(model, ModelKind::Bath) {
        offenders.push("--fock-cutoff");
    }
    if args.floor.is_some() && !matches!(model, ModelKind::Bath) {
        offenders.push("--floor");
    }
    if args.n.is_some() && matches!(model, ModelKind::Bath) {
        offenders.push("--n");
    }
    if args.marked.is_some() && matches!(model, ModelKind::Bath | ModelKind::MinimalCoupling) {
        offenders.push("--marked");
    }
    if offenders.is_empty() {
        Ok(())
    } else {
        Err(invalid(format!(
            "{} not applicable to model '{}'",
            offenders.join(", "),
            model.name()
        )))
    }
}

fn require_n(args: &ModelArgs, min: u64) -> Result<u64, CliError> {
    let n = args
        .n
        .ok_or_else(|| invalid(format!("--n is required for model '{}'", args.model.name())))?;
    if n < min {
        return Err(invalid(format!(
            "model '{}' needs n >= {min}, got {n}",
            args.model.name()
        )));
    }
    Ok(n)
}

fn single_marked(args: &ModelArgs, n: u64) -> Result<usize, CliError> {
    let marked = args.marked.clone().unwrap_or_else(|| vec![0]);
    if marked.len() != 1 {
        return Err(invalid(format!(
            "model '{}' takes exactly one marked index, got {}",
            args.model.name(),
            marked.len()
        )));
    }
    let m = marked[0];
    if m as u64 >= n {
        return Err(invalid(format!("marked index {m} out of range for n={n}")));
    }
    Ok(m)
}

fn parse_bath_file(path: &PathBuf, t0: f64) -> Result<BathSpec, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read bath file {}: {e}", path.display())))?;
    let mut freqs = Vec::new();
    let mut g0 = Vec::new();
    let mut g1 = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(invalid(format!(
                "bath file line {}: expected `omega g_k g_kprime`, got {} fields",
                lineno + 1,
                fields.len()
            )));
        }
        let parse = |s: &str, what: &str| -> Result<f64, CliError> {
            s.parse::<f64>()
                .map_err(|_| invalid(format!("bath file line {}: bad {what} '{s}'", lineno + 1)))
        };
        freqs.push(parse(fields[0], "frequency")?);
        g0.push(Complex64::new(parse(fields[1], "coupling")?, 0.0));
        g1.push(Complex64::new(parse(fields[2], "coupling")?, 0.0));
    }
    BathSpec::new(freqs, vec![g0, g1], t0).map_err(|e| invalid(format!("bath file: {e}")))
}

pub fn resolve(args: &ModelArgs) -> Result<ExperimentConfig, CliError> {
    reject_irrelevant(args)?;
    if args.oracle_budget == 0 {
        return Err(invalid("--oracle-budget must be positive"));
    }

    let model = match args.model {
        ModelKind::Ideal => {
            let n = require_n(args, 2)?;
            ModelConfig::Ideal {
                n,
                marked: single_marked(args, n)?,
            }
        }
        ModelKind::General => {
            let n = require_n(args, 2)?;
            ModelConfig::General {
                n,
                marked: single_marked(args, n)?,
            }
        }
        ModelKind::Multi => {
            let n = require_n(args, 2)?;
            let mut marked = args.marked.clone().unwrap_or_else(|| vec![0]);
            marked.sort_unstable();
            marked.dedup();
            if marked.iter().any(|&m| m as u64 >= n) {
                return Err(invalid(format!("marked index out of range for n={n}")));
            }
            if marked.len() as u64 >= n {
                return Err(invalid("marked set must leave at least one unmarked state"));
            }
            ModelConfig::Multi { n, marked }
        }
        ModelKind::Decohered => {
            let n = require_n(args, 3)?;
            let marked = single_marked(args, n)?;
            let kind = args.ensemble.unwrap_or(EnsembleKind::Random);
            let env_dim = match (kind, args.env_dim) {
                (EnsembleKind::Orthonormal, Some(d)) if d as u64 != n => {
                    return Err(invalid(format!(
                        "orthonormal ensembles have env-dim = n = {n}, got {d}"
                    )));
                }
                (EnsembleKind::Orthonormal, _) => n as usize,
                (EnsembleKind::Identical | EnsembleKind::PhaseMatched, d) => d.unwrap_or(1),
                // default random dimension keeps the oracle within budget
                (EnsembleKind::Random, d) => {
                    d.unwrap_or(((args.oracle_budget / n).clamp(1, n)) as usize)
                }
            };
            if env_dim == 0 {
                return Err(invalid("--env-dim must be positive"));
            }
            // the ensemble itself must be materialized for F1/F2 even when
            // the oracle is skipped, so cap the allocation outright
            const ENSEMBLE_ENTRY_CAP: u128 = 10_000_000;
            if n as u128 * env_dim as u128 > ENSEMBLE_ENTRY_CAP {
                return Err(invalid(format!(
                    "ensemble of n*env_dim = {} amplitudes exceeds the materialization cap {ENSEMBLE_ENTRY_CAP}",
                    n as u128 * env_dim as u128
                )));
            }
            ModelConfig::Decohered {
                n,
                marked,
                kind,
                env_dim,
            }
        }
        ModelKind::Necoherence => {
            let n = require_n(args, 3)?;
            ModelConfig::Necoherence {
                n,
                marked: single_marked(args, n)?,
            }
        }
        ModelKind::MinimalCoupling => {
            let n = require_n(args, 2)?;
            let r = args.r.unwrap_or(1.0);
            if !(0.0..=1.0).contains(&r) {
                return Err(invalid(format!("--r must lie in [0, 1], got {r}")));
            }
            let t0 = args.t0.unwrap_or(1.0);
            if t0.is_nan() || t0 <= 0.0 {
                return Err(invalid(format!("--t0 must be positive, got {t0}")));
            }
            ModelConfig::MinimalCoupling {
                n,
                r,
                delta: args.delta.unwrap_or(0.0),
                t0,
            }
        }
        ModelKind::Bath => {
            let path = args
                .bath_file
                .clone()
                .ok_or_else(|| invalid("--bath-file is required for model 'bath'"))?;
            let t0 = args.t0.unwrap_or(1.0);
            if t0.is_nan() || t0 <= 0.0 {
                return Err(invalid(format!("--t0 must be positive, got {t0}")));
            }
            let fock_cutoff = args.fock_cutoff.unwrap_or(40);
            if fock_cutoff < 2 {
                return Err(invalid(format!(
                    "--fock-cutoff must be at least 2, got {fock_cutoff}"
                )));
            }
            let floor = args.floor.unwrap_or_else(|| (-1.0f64).exp());
            if !(floor > 0.0 && floor < 1.0) {
                return Err(invalid(format!(
                    "--floor must lie strictly between 0 and 1, got {floor}"
                )));
            }
            let bath = parse_bath_file(&path, t0)?;
            ModelConfig::Bath {
                bath,
                path,
                fock_cutoff,
                floor,
            }
        }
    };

    let steps_max = match args.steps_max {
        Some(s) => s,
        None => default_steps(&model)?,
    };

    Ok(ExperimentConfig {
        model,
        steps_max,
        seed: args.seed,
        format: args.format,
        out: args.out.clone(),
        oracle_budget: args.oracle_budget,
    })
}

fn default_steps(model: &ModelConfig) -> Result<u64, CliError> {
    use grover_su2::su2::{multi_state_bound, SearchAngle};
    let from_n = |n: u64| -> Result<u64, CliError> {
        let bound = SearchAngle::from_size(n)
            .map_err(|e| invalid(e.to_string()))?
            .optimal_steps();
        Ok(2 * bound.exact + 1)
    };
    match model {
        ModelConfig::Ideal { n, .. }
        | ModelConfig::General { n, .. }
        | ModelConfig::Decohered { n, .. }
        | ModelConfig::Necoherence { n, .. }
        | ModelConfig::MinimalCoupling { n, .. } => from_n(*n),
        ModelConfig::Multi { n, marked } => {
            let bound =
                multi_state_bound(*n, marked.len() as u64).map_err(|e| invalid(e.to_string()))?;
            Ok(2 * bound.exact + 1)
        }
        ModelConfig::Bath { .. } => Ok(50),
    }
}
