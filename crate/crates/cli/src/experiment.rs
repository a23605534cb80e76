use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::f64::consts::PI;

use grover_su2::decoherence::{
    bath_factor_norm, decohered_probability, decoherence_factors, fit_decoherence_rate,
    max_effective_steps, minimal_coupling_probability, necoherence_probability, BathSpec,
    DecoherenceFactors, EffectiveSteps, MinimalCouplingParams, PointerEnsemble,
};
use grover_su2::environment::{
    entangled_marked_trace, hermitian_pair_for_params, minimal_coupling_evolve, oscillator_overlap,
    pointer_phase_params, OscillatorEnvironment,
};
use grover_su2::fullstate::{run_search, MarkedSet, StateVector};
use grover_su2::su2::{
    general_success_probability, ideal_success_probability, multi_state_bound, GeneralSearchAngle,
    SearchAngle,
};

use crate::args::EnsembleKind;
use crate::config::{CliError, ExperimentConfig, ModelConfig};
use crate::output::MetaValue;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::InvalidConfig(msg.into())
}

/// One sweep row; a missing oracle value means the oracle was skipped for
/// this row (infeasible budget, or undefined as at l = 0 for the
/// minimal-coupling pointer construction).
pub struct Row {
    pub l: u64,
    pub closed: f64,
    pub oracle: Option<f64>,
}

pub struct Sweep {
    pub meta: Vec<(String, MetaValue)>,
    pub rows: Vec<Row>,
}

/// One line of a crosscheck report: `value` compared against `limit`.
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    fn deviation(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            limit,
            pass: value <= limit,
        }
    }
}

pub struct CheckReport {
    pub meta: Vec<(String, MetaValue)>,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn base_meta(config: &ExperimentConfig, command: &str) -> Vec<(String, MetaValue)> {
    let mut meta: Vec<(String, MetaValue)> = vec![
        (
            "generator".into(),
            MetaValue::Str(format!("grover-su2 {}", env!("CARGO_PKG_VERSION"))),
        ),
        ("command".into(), MetaValue::Str(command.into())),
        ("model".into(), MetaValue::Str(config.model_name().into())),
    ];
    match &config.model {
        ModelConfig::Ideal { n, marked }
        | ModelConfig::General { n, marked }
        | ModelConfig::Necoherence { n, marked } => {
            meta.push(("n".into(), MetaValue::Int(*n)));
            meta.push(("marked".into(), MetaValue::Str(marked.to_string())));
        }
        ModelConfig::Multi { n, marked } => {
            meta.push(("n".into(), MetaValue::Int(*n)));
            let list = marked
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",");
            meta.push(("marked".into(), MetaValue::Str(list)));
        }
        ModelConfig::Decohered {
            n,
            marked,
            kind,
            env_dim,
        } => {
            meta.push(("n".into(), MetaValue::Int(*n)));
            meta.push(("marked".into(), MetaValue::Str(marked.to_string())));
            meta.push(("ensemble".into(), MetaValue::Str(kind.name().into())));
            meta.push(("env_dim".into(), MetaValue::Int(*env_dim as u64)));
        }
        ModelConfig::MinimalCoupling { n, r, delta, t0 } => {
            meta.push(("n".into(), MetaValue::Int(*n)));
            meta.push(("r".into(), MetaValue::Float(*r)));
            meta.push(("delta".into(), MetaValue::Float(*delta)));
            meta.push(("t0".into(), MetaValue::Float(*t0)));
        }
        ModelConfig::Bath {
            bath,
            path,
            fock_cutoff,
            floor,
        } => {
            meta.push((
                "bath_file".into(),
                MetaValue::Str(path.display().to_string()),
            ));
            meta.push(("modes".into(), MetaValue::Int(bath.modes() as u64)));
            meta.push(("t0".into(), MetaValue::Float(bath.step_time())));
            meta.push(("fock_cutoff".into(), MetaValue::Int(*fock_cutoff as u64)));
            meta.push(("floor".into(), MetaValue::Float(*floor)));
        }
    }
    meta.push(("steps_max".into(), MetaValue::Int(config.steps_max)));
    meta.push(("seed".into(), MetaValue::Int(config.seed)));
    meta.push((
        "rng".into(),
        MetaValue::Str("ChaCha12 seeded with `seed` (rand_chacha)".into()),
    ));
    meta.push(("oracle_budget".into(), MetaValue::Int(config.oracle_budget)));
    meta
}

fn push_angle_meta(meta: &mut Vec<(String, MetaValue)>, angle: &SearchAngle) {
    let bound = angle.optimal_steps();
    meta.push(("theta".into(), MetaValue::Float(angle.theta())));
    meta.push(("optimal_steps_exact".into(), MetaValue::Int(bound.exact)));
    meta.push((
        "optimal_steps_asymptotic".into(),
        MetaValue::Float(bound.asymptotic),
    ));
}

/// Oracle cost in amplitudes for each model's exact simulation.
fn oracle_cost(config: &ExperimentConfig) -> u64 {
    match &config.model {
        ModelConfig::Ideal { n, .. }
        | ModelConfig::General { n, .. }
        | ModelConfig::Multi { n, .. }
        | ModelConfig::Necoherence { n, .. } => *n,
        ModelConfig::Decohered { n, env_dim, .. } => n * *env_dim as u64,
        ModelConfig::MinimalCoupling { .. } => 4,
        ModelConfig::Bath {
            bath, fock_cutoff, ..
        } => (bath.modes() * (fock_cutoff + 1)) as u64,
    }
}

fn oracle_note(config: &ExperimentConfig, feasible: bool) -> MetaValue {
    let cost = oracle_cost(config);
    if feasible {
        MetaValue::Str(format!(
            "exact (cost {cost} amplitudes <= budget {})",
            config.oracle_budget
        ))
    } else {
        MetaValue::Str(format!(
            "skipped (cost {cost} amplitudes > budget {})",
            config.oracle_budget
        ))
    }
}

fn build_ensemble(
    kind: EnsembleKind,
    n: usize,
    env_dim: usize,
    marked: usize,
    seed: u64,
) -> Result<PointerEnsemble, CliError> {
    let built = match kind {
        EnsembleKind::Identical => PointerEnsemble::identical(n, env_dim, marked),
        EnsembleKind::Orthonormal => PointerEnsemble::orthonormal(n, marked),
        EnsembleKind::PhaseMatched => PointerEnsemble::phase_matched(n, marked),
        EnsembleKind::Random => {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            PointerEnsemble::random(n, env_dim, marked, &mut rng)
        }
    };
    built.map_err(|e| invalid(e.to_string()))
}

/// A random normalized state whose marked amplitude defines the general
/// search angle, drawn from the seeded ChaCha12 stream.
fn random_gamma(n: usize, rng: &mut ChaCha12Rng) -> StateVector {
    loop {
        let amps: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if let Ok(state) = StateVector::normalized(amps) {
            return state;
        }
    }
}

pub fn run_sweep(config: &ExperimentConfig) -> Result<Sweep, CliError> {
    let mut meta = base_meta(config, "sweep");
    let feasible = oracle_cost(config) <= config.oracle_budget;
    let steps = config.steps_max;

    let rows = match &config.model {
        ModelConfig::Ideal { n, marked } => {
            let angle = SearchAngle::from_size(*n).map_err(|e| invalid(e.to_string()))?;
            push_angle_meta(&mut meta, &angle);
            let oracle = if feasible {
                let uniform =
                    StateVector::uniform(*n as usize).map_err(|e| invalid(e.to_string()))?;
                Some(
                    run_search(&uniform, &MarkedSet::single(*marked), steps)
                        .map_err(|e| invalid(e.to_string()))?,
                )
            } else {
                None
            };
            (0..=steps)
                .map(|l| Row {
                    l,
                    closed: ideal_success_probability(&angle, l),
                    oracle: oracle.as_ref().map(|t| t[l as usize]),
                })
                .collect()
        }
        ModelConfig::General { n, marked } => {
            let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
            let gamma = random_gamma(*n as usize, &mut rng);
            let angle = GeneralSearchAngle::from_amplitude(gamma.amplitudes()[*marked])
                .map_err(|e| invalid(format!("seeded initial state: {e}")))?;
            meta.push(("theta_gamma".into(), MetaValue::Float(angle.theta_gamma())));
            meta.push(("phi".into(), MetaValue::Float(angle.phi())));
            let bound = angle.optimal_steps();
            meta.push(("optimal_steps_exact".into(), MetaValue::Int(bound.exact)));
            meta.push((
                "optimal_steps_asymptotic".into(),
                MetaValue::Float(bound.asymptotic),
            ));
            let oracle = if feasible {
                Some(
                    run_search(&gamma, &MarkedSet::single(*marked), steps)
                        .map_err(|e| invalid(e.to_string()))?,
                )
            } else {
                None
            };
            (0..=steps)
                .map(|l| Row {
                    l,
                    closed: general_success_probability(&angle, l),
                    oracle: oracle.as_ref().map(|t| t[l as usize]),
                })
                .collect()
        }
        ModelConfig::Multi { n, marked } => {
            let s = marked.len() as u64;
            let theta = ((s as f64 / *n as f64).sqrt()).asin();
            let angle = SearchAngle::from_theta(theta).map_err(|e| invalid(e.to_string()))?;
            let bound = multi_state_bound(*n, s).map_err(|e| invalid(e.to_string()))?;
            meta.push(("marked_count".into(), MetaValue::Int(s)));
            meta.push(("theta_s".into(), MetaValue::Float(theta)));
            meta.push(("optimal_steps_exact".into(), MetaValue::Int(bound.exact)));
            meta.push((
                "optimal_steps_asymptotic".into(),
                MetaValue::Float(bound.asymptotic),
            ));
            let oracle = if feasible {
                let uniform =
                    StateVector::uniform(*n as usize).map_err(|e| invalid(e.to_string()))?;
                let set = MarkedSet::new(marked.clone()).map_err(|e| invalid(e.to_string()))?;
                Some(run_search(&uniform, &set, steps).map_err(|e| invalid(e.to_string()))?)
            } else {
                None
            };
            (0..=steps)
                .map(|l| Row {
                    l,
                    closed: ideal_success_probability(&angle, l),
                    oracle: oracle.as_ref().map(|t| t[l as usize]),
                })
                .collect()
        }
        ModelConfig::Decohered {
            n,
            marked,
            kind,
            env_dim,
        } => {
            let ensemble = build_ensemble(*kind, *n as usize, *env_dim, *marked, config.seed)?;
            let factors = decoherence_factors(&ensemble).map_err(|e| invalid(e.to_string()))?;
            let angle = SearchAngle::from_size(*n).map_err(|e| invalid(e.to_string()))?;
            push_angle_meta(&mut meta, &angle);
            meta.push(("f1".into(), MetaValue::Float(factors.f1)));
            meta.push(("f2".into(), MetaValue::Float(factors.f2)));
            let oracle = if feasible {
                Some(entangled_marked_trace(&ensemble, steps).map_err(|e| invalid(e.to_string()))?)
            } else {
                None
            };
            (0..=steps)
                .map(|l| -> Result<Row, CliError> {
                    Ok(Row {
                        l,
                        closed: decohered_probability(*n, l, &factors)
                            .map_err(|e| invalid(e.to_string()))?,
                        oracle: oracle.as_ref().map(|t| t[l as usize]),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        ModelConfig::Necoherence { n, marked } => {
            let angle = SearchAngle::from_size(*n).map_err(|e| invalid(e.to_string()))?;
            push_angle_meta(&mut meta, &angle);
            let oracle = if feasible {
                let ensemble = PointerEnsemble::phase_matched(*n as usize, *marked)
                    .map_err(|e| invalid(e.to_string()))?;
                Some(entangled_marked_trace(&ensemble, steps).map_err(|e| invalid(e.to_string()))?)
            } else {
                None
            };
            (0..=steps)
                .map(|l| -> Result<Row, CliError> {
                    Ok(Row {
                        l,
                        closed: necoherence_probability(*n, l)
                            .map_err(|e| invalid(e.to_string()))?,
                        oracle: oracle.as_ref().map(|t| t[l as usize]),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        ModelConfig::MinimalCoupling { n, r, delta, t0 } => {
            let angle = SearchAngle::from_size(*n).map_err(|e| invalid(e.to_string()))?;
            push_angle_meta(&mut meta, &angle);
            let params =
                MinimalCouplingParams::new(*r, *delta).map_err(|e| invalid(e.to_string()))?;
            meta.push((
                "oracle_note".into(),
                MetaValue::Str(
                    "pointer overlap is realized by conditional evolution over l*t0, undefined at l=0"
                        .into(),
                ),
            ));
            let mut rows = Vec::with_capacity(steps as usize + 1);
            for l in 0..=steps {
                let closed = minimal_coupling_probability(&angle, l, &params);
                let oracle = if feasible && l > 0 {
                    let t = l as f64 * t0;
                    let (hp, hm) = hermitian_pair_for_params(&params, t)
                        .map_err(|e| invalid(e.to_string()))?;
                    Some(
                        minimal_coupling_evolve(&angle, &hp, &hm, *t0, l)
                            .map_err(|e| invalid(e.to_string()))?,
                    )
                } else {
                    None
                };
                rows.push(Row { l, closed, oracle });
            }
            rows
        }
        ModelConfig::Bath {
            bath,
            fock_cutoff,
            floor,
            ..
        } => {
            push_bath_fit_meta(&mut meta, bath, *floor, steps)?;
            let env = if feasible {
                Some(
                    OscillatorEnvironment::new(bath.clone(), *fock_cutoff)
                        .map_err(|e| invalid(e.to_string()))?,
                )
            } else {
                None
            };
            (0..=steps)
                .map(|l| -> Result<Row, CliError> {
                    let closed =
                        bath_factor_norm(bath, 0, 1, l).map_err(|e| invalid(e.to_string()))?;
                    let oracle = match &env {
                        Some(env) => Some(
                            oscillator_overlap(env, 0, 1, l)
                                .map_err(|e| invalid(e.to_string()))?
                                .norm(),
                        ),
                        None => None,
                    };
                    Ok(Row { l, closed, oracle })
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };

    meta.push(("oracle".into(), oracle_note(config, feasible)));
    Ok(Sweep { meta, rows })
}

fn push_bath_fit_meta(
    meta: &mut Vec<(String, MetaValue)>,
    bath: &BathSpec,
    floor: f64,
    steps: u64,
) -> Result<(), CliError> {
    match fit_decoherence_rate(bath, 0, 1, steps.max(2)) {
        Ok(fit) => {
            meta.push(("gamma_fit_status".into(), MetaValue::Str("ok".into())));
            meta.push(("gamma".into(), MetaValue::Float(fit.gamma)));
            meta.push((
                "gamma_fit_intercept".into(),
                MetaValue::Float(fit.intercept),
            ));
            meta.push(("gamma_fit_residual".into(), MetaValue::Float(fit.residual)));
            let eff = max_effective_steps(fit.gamma.max(0.0), bath.step_time(), floor)
                .map_err(|e| invalid(e.to_string()))?;
            match eff {
                EffectiveSteps::Bounded(l) => {
                    meta.push(("max_effective_steps".into(), MetaValue::Int(l)));
                }
                EffectiveSteps::Unbounded => {
                    meta.push((
                        "max_effective_steps".into(),
                        MetaValue::Str("unbounded".into()),
                    ));
                }
            }
        }
        Err(grover_su2::Error::FitUnreliable { residual }) => {
            meta.push((
                "gamma_fit_status".into(),
                MetaValue::Str("unreliable (|F| not monotonically decaying)".into()),
            ));
            meta.push(("gamma_fit_residual".into(), MetaValue::Float(residual)));
        }
        Err(e) => return Err(invalid(e.to_string())),
    }
    Ok(())
}

pub fn run_check(config: &ExperimentConfig) -> Result<CheckReport, CliError> {
    let meta = base_meta(config, "check");
    let feasible = oracle_cost(config) <= config.oracle_budget;
    if !feasible {
        return Err(CliError::OracleInfeasible(format!(
            "model '{}' needs {} amplitudes, budget is {}",
            config.model_name(),
            oracle_cost(config),
            config.oracle_budget
        )));
    }
    let steps = config.steps_max;
    let mut checks = Vec::new();

    match &config.model {
        ModelConfig::Ideal { n, marked } => {
            let angle = SearchAngle::from_size(*n).map_err(|e| invalid(e.to_string()))?;
            let uniform = StateVector::uniform(*n as usize).map_err(|e| invalid(e.to_string()))?;
            let trace = run_search(&uniform, &MarkedSet::single(*marked), steps)
                .map_err(|e| invalid(e.to_string()))?;
            let worst = trace
                .iter()
                .enumerate()
                .map(|(l, p)| (p - ideal_success_probability(&angle, l as u64)).abs())
                .fold(0.0f64, f64::max);
            checks.push(Check::deviation("full-state-vs-closed-form", worst, 1e-10));
        }
        ModelConfig::General { n, marked } => {
            let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
            let gamma = random_gamma(*n as usize, &mut rng);
            let angle = GeneralSearchAngle::from_amplitude(gamma.amplitudes()[*marked])
                .map_err(|e| invalid(e.to_string()))?;
            let trace = run_search(&gamma, &MarkedSet::single(*marked), steps)
                .map_err(|e| invalid(e.to_string()))?;
            let worst = trace
                .iter()
                .enumerate()
                .map(|(l, p)| (p - general_success_probability(&angle, l as u64)).abs())
                .fold(0.0f64, f64::max);
            checks.push(Check::deviation("full-state-vs-closed-form", worst, 1e-10));
            let argmax = trace
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).expect("probabilities are finite"))
                .map(|(l, _)| l)
                .unwrap_or(0);
            let gap = (argmax as f64 - angle.optimal_steps().asymptotic).abs();
            checks.push(Check::deviation("peak-vs-asymptotic-bound", gap, 1.0));
        }
        ModelConfig::Multi { n, marked } => {
            let s = marked.len() as u64;
            let theta = ((s as f64 / *n as f64).sqrt()).asin();
            let angle = SearchAngle::from_theta(theta).map_err(|e| invalid(e.to_string()))?;
            let uniform = StateVector::uniform(*n as usize).map_err(|e| invalid(e.to_string()))?;
            let set = MarkedSet::new(marked.clone()).map_err(|e| invalid(e.to_string()))?;
            let trace = run_search(&uniform, &set, steps).map_err(|e| invalid(e.to_string()))?;
            let worst = trace
                .iter()
                .enumerate()
                .map(|(l, p)| (p - ideal_success_probability(&angle, l as u64)).abs())
                .fold(0.0f64, f64::max);
            checks.push(Check::deviation("full-state-vs-closed-form", worst, 1e-10));
            let argmax = trace
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.partial_cmp(b.1).expect("probabilities are finite"))
                .map(|(l, _)| l)
                .unwrap_or(0);
            let bound = 0.25 * PI * (*n as f64 / s as f64).sqrt();
            checks.push(Check::deviation(
                "peak-vs-multi-state-bound",
                (argmax as f64 - bound).abs(),
                1.0,
            ));
        }
        ModelConfig::Decohered {
            n,
            marked,
            kind,
            env_dim,
        } => {
            let ensemble = build_ensemble(*kind, *n as usize, *env_dim, *marked, config.seed)?;
            let factors = decoherence_factors(&ensemble).map_err(|e| invalid(e.to_string()))?;
            let trace =
                entangled_marked_trace(&ensemble, steps).map_err(|e| invalid(e.to_string()))?;
            let mut worst: f64 = 0.0;
            for (l, oracle) in trace.iter().enumerate() {
                let closed = decohered_probability(*n, l as u64, &factors)
                    .map_err(|e| invalid(e.to_string()))?;
                worst = worst.max((closed - oracle).abs());
            }
            checks.push(Check::deviation(
                "partial-trace-vs-closed-form",
                worst,
                1e-10,
            ));
            checks.push(Check::deviation(
                "factor-bounds-excess",
                factor_bound_excess(*n, &factors),
                1e-12,
            ));
        }
        ModelConfig::Necoherence { n, marked } => {
            let ensemble = PointerEnsemble::phase_matched(*n as usize, *marked)
                .map_err(|e| invalid(e.to_string()))?;
            let trace =
                entangled_marked_trace(&ensemble, steps).map_err(|e| invalid(e.to_string()))?;
            let mut worst: f64 = 0.0;
            for (l, oracle) in trace.iter().enumerate() {
                let closed =
                    necoherence_probability(*n, l as u64).map_err(|e| invalid(e.to_string()))?;
                worst = worst.max((closed - oracle).abs());
            }
            checks.push(Check::deviation(
                "partial-trace-vs-closed-form",
                worst,
                1e-10,
            ));
            let l_g = SearchAngle::from_size(*n)
                .map_err(|e| invalid(e.to_string()))?
                .optimal_steps()
                .exact;
            let at_peak = necoherence_probability(*n, l_g).map_err(|e| invalid(e.to_string()))?;
            let classical = 1.0 / *n as f64;
            checks.push(Check {
                name: "below-classical-at-scheduled-peak".into(),
                value: at_peak,
                limit: classical,
                pass: at_peak < classical,
            });
        }
        ModelConfig::MinimalCoupling { n, r, delta, t0 } => {
            let angle = SearchAngle::from_size(*n).map_err(|e| invalid(e.to_string()))?;
            let params =
                MinimalCouplingParams::new(*r, *delta).map_err(|e| invalid(e.to_string()))?;
            let mut worst: f64 = 0.0;
            for l in 1..=steps {
                let (hp, hm) = hermitian_pair_for_params(&params, l as f64 * t0)
                    .map_err(|e| invalid(e.to_string()))?;
                let oracle = minimal_coupling_evolve(&angle, &hp, &hm, *t0, l)
                    .map_err(|e| invalid(e.to_string()))?;
                let closed = minimal_coupling_probability(&angle, l, &params);
                worst = worst.max((oracle - closed).abs());
            }
            checks.push(Check::deviation(
                "configured-params-evolution-vs-closed-form",
                worst,
                1e-9,
            ));

            let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
            let mut worst_random: f64 = 0.0;
            for _ in 0..20 {
                let d = rng.gen_range(1..=4usize);
                let hp = random_hermitian(d, &mut rng);
                let hm = random_hermitian(d, &mut rng);
                let l = rng.gen_range(0..=steps.max(1));
                let oracle = minimal_coupling_evolve(&angle, &hp, &hm, *t0, l)
                    .map_err(|e| invalid(e.to_string()))?;
                let extracted = pointer_phase_params(&hp, &hm, l as f64 * t0)
                    .map_err(|e| invalid(e.to_string()))?;
                let closed = minimal_coupling_probability(&angle, l, &extracted);
                worst_random = worst_random.max((oracle - closed).abs());
            }
            checks.push(Check::deviation(
                "random-pairs-evolution-vs-closed-form",
                worst_random,
                1e-9,
            ));
        }
        ModelConfig::Bath {
            bath, fock_cutoff, ..
        } => {
            let env = OscillatorEnvironment::new(bath.clone(), *fock_cutoff)
                .map_err(|e| invalid(e.to_string()))?;
            let mut worst: f64 = 0.0;
            for l in 0..=steps.min(50) {
                let closed = bath_factor_norm(bath, 0, 1, l).map_err(|e| invalid(e.to_string()))?;
                let oracle = oscillator_overlap(&env, 0, 1, l)
                    .map_err(|e| invalid(e.to_string()))?
                    .norm();
                worst = worst.max((closed - oracle).abs());
            }
            checks.push(Check::deviation(
                "oscillator-overlap-vs-closed-form",
                worst,
                1e-6,
            ));
        }
    }

    Ok(CheckReport { meta, checks })
}

fn factor_bound_excess(n: u64, factors: &DecoherenceFactors) -> f64 {
    let lower = -1.0 / (n as f64 - 2.0);
    let mut excess: f64 = 0.0;
    excess = excess.max(lower - factors.f1);
    excess = excess.max(factors.f1 - 1.0);
    excess = excess.max(factors.f2.abs() - 1.0);
    excess.max(0.0)
}

fn random_hermitian(d: usize, rng: &mut ChaCha12Rng) -> Array2<Complex64> {
    let mut a = Array2::<Complex64>::zeros((d, d));
    for i in 0..d {
        for j in 0..d {
            a[[i, j]] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let adag = a.t().mapv(|z| z.conj());
    (a + adag).mapv(|z| z * 0.5)
}
