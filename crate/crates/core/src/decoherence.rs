//! Closed-form layer for environment effects on the search.
//!
//! An environment that entangles pointer states with the database basis
//! reshapes the success probability through exactly two real numbers, the
//! decoherence factors F1 and F2 built from the collective pointer state.
//! This module computes those factors from pointer ensembles, evaluates
//! the decohered, classical-limit and phase-matched ("necoherence")
//! probabilities, the minimal-coupling dephasing formula, the
//! harmonic-bath decoherence-factor norm, and the effective step bound set
//! by the fitted decay rate.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::su2::SearchAngle;

const POINTER_NORM_TOL: f64 = 1e-10;
const FACTOR_BOUND_TOL: f64 = 1e-12;

/// The family of environment states reached after the entangling
/// evolution, one unit-or-subnormalized pointer per basis index, plus the
/// marked index. Stored as an n x d array, one pointer per row.
#[derive(Debug, Clone)]
pub struct PointerEnsemble {
    pointers: Array2<Complex64>,
    marked_index: usize,
}

impl PointerEnsemble {
    /// Validates pointer norms (<= 1 within 1e-10) and the marked index.
    pub fn new(pointers: Array2<Complex64>, marked_index: usize) -> Result<Self> {
        let n = pointers.nrows();
        if n < 2 {
            return Err(Error::Domain(format!(
                "ensemble needs at least 2 pointers, got {n}"
            )));
        }
        if pointers.ncols() == 0 {
            return Err(Error::Domain("pointer dimension must be >= 1".into()));
        }
        if marked_index >= n {
            return Err(Error::Domain(format!(
                "marked index {marked_index} out of range for {n} pointers"
            )));
        }
        for (k, row) in pointers.rows().into_iter().enumerate() {
            let norm_sqr: f64 = row.iter().map(|z| z.norm_sqr()).sum();
            if norm_sqr > 1.0 + POINTER_NORM_TOL {
                return Err(Error::Domain(format!(
                    "pointer {k} has squared norm {norm_sqr} > 1"
                )));
            }
        }
        Ok(Self {
            pointers,
            marked_index,
        })
    }

    /// All pointers equal to the first environment basis vector: the
    /// decoupled environment, F1 = F2 = 1.
    pub fn identical(n: usize, dim: usize, marked_index: usize) -> Result<Self> {
        let mut pointers = Array2::zeros((n, dim.max(1)));
        for k in 0..n {
            pointers[[k, 0]] = Complex64::new(1.0, 0.0);
        }
        Self::new(pointers, marked_index)
    }

    /// Pairwise orthonormal pointers (dimension n): complete which-path
    /// information, F1 = F2 = 0.
    pub fn orthonormal(n: usize, marked_index: usize) -> Result<Self> {
        let mut pointers = Array2::zeros((n, n));
        for k in 0..n {
            pointers[[k, k]] = Complex64::new(1.0, 0.0);
        }
        Self::new(pointers, marked_index)
    }

    /// Pointers that differ only by phases chosen as the (n-1)-th roots of
    /// unity over the unmarked indices, so the collective pointer vanishes:
    /// F1 = -1/(n-2), F2 = 0.
    pub fn phase_matched(n: usize, marked_index: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!(
                "phase-matched ensemble needs n >= 3, got {n}"
            )));
        }
        let mut pointers = Array2::zeros((n, 1));
        let mut j = 0usize;
        for k in 0..n {
            if k == marked_index {
                pointers[[k, 0]] = Complex64::new(1.0, 0.0);
            } else {
                pointers[[k, 0]] = Complex64::from_polar(1.0, TAU * j as f64 / (n - 1) as f64);
                j += 1;
            }
        }
        Self::new(pointers, marked_index)
    }

    /// Unit-norm pointers with independent standard complex Gaussian
    /// components drawn from `rng`, then normalized.
    pub fn random<R: Rng>(n: usize, dim: usize, marked_index: usize, rng: &mut R) -> Result<Self> {
        let mut pointers = Array2::zeros((n, dim.max(1)));
        for k in 0..n {
            let mut norm_sqr = 0.0;
            for d in 0..pointers.ncols() {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let z = Complex64::new(re, im);
                norm_sqr += z.norm_sqr();
                pointers[[k, d]] = z;
            }
            let norm = norm_sqr.sqrt();
            for d in 0..pointers.ncols() {
                pointers[[k, d]] /= norm;
            }
        }
        Self::new(pointers, marked_index)
    }

    /// Number of pointers (= database size n).
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.pointers.nrows()
    }

    /// Environment dimension d.
    pub fn dim(&self) -> usize {
        self.pointers.ncols()
    }

    pub fn marked_index(&self) -> usize {
        self.marked_index
    }

    pub fn pointers(&self) -> &Array2<Complex64> {
        &self.pointers
    }

    /// Max deviation of any pointer's squared norm from 1.
    pub fn unit_norm_deviation(&self) -> f64 {
        self.pointers
            .rows()
            .into_iter()
            .map(|row| {
                let n: f64 = row.iter().map(|z| z.norm_sqr()).sum();
                (n - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Normalized sum of the unmarked pointers and its squared norm,
/// which ranges over [0, n-1].
#[derive(Debug, Clone)]
pub struct CollectivePointer {
    vector: Vec<Complex64>,
    squared_norm: f64,
}

impl CollectivePointer {
    pub fn vector(&self) -> &[Complex64] {
        &self.vector
    }

    pub fn squared_norm(&self) -> f64 {
        self.squared_norm
    }
}

/// (1/sqrt(n-1)) sum of the pointers over the unmarked indices.
pub fn collective_pointer(ensemble: &PointerEnsemble) -> Result<CollectivePointer> {
    let n = ensemble.len();
    if n < 3 {
        return Err(Error::Domain(format!(
            "collective pointer needs n >= 3 (F1 divides by n-2), got {n}"
        )));
    }
    let scale = 1.0 / ((n - 1) as f64).sqrt();
    let mut vector = vec![Complex64::new(0.0, 0.0); ensemble.dim()];
    for (k, row) in ensemble.pointers().rows().into_iter().enumerate() {
        if k == ensemble.marked_index() {
            continue;
        }
        for (v, z) in vector.iter_mut().zip(row.iter()) {
            *v += z;
        }
    }
    for v in &mut vector {
        *v *= scale;
    }
    let squared_norm = vector.iter().map(|z| z.norm_sqr()).sum();
    Ok(CollectivePointer {
        vector,
        squared_norm,
    })
}

/// The pair of real decoherence factors controlling the marked-state
/// probability: F1 = (<d|d> - 1)/(n - 2) and
/// F2 = (<d|e_m> + <e_m|d>)/(2 sqrt(n-1)).
///
/// F2 is real by construction; any imaginary content of <d|e_m> is
/// discarded by that definition.
#[derive(Debug, Clone, Copy)]
pub struct DecoherenceFactors {
    pub f1: f64,
    pub f2: f64,
}

impl DecoherenceFactors {
    pub fn new(f1: f64, f2: f64) -> Self {
        Self { f1, f2 }
    }

    /// Whether the factors respect the ensemble bounds for size `n`:
    /// -1/(n-2) <= F1 <= 1 and |F2| <= 1.
    pub fn within_bounds(&self, n: u64) -> bool {
        let lower = -1.0 / (n as f64 - 2.0);
        self.f1 >= lower - FACTOR_BOUND_TOL
            && self.f1 <= 1.0 + FACTOR_BOUND_TOL
            && self.f2.abs() <= 1.0 + FACTOR_BOUND_TOL
    }
}

/// Decoherence factors of an ensemble.
pub fn decoherence_factors(ensemble: &PointerEnsemble) -> Result<DecoherenceFactors> {
    let n = ensemble.len();
    let d = collective_pointer(ensemble)?;
    let f1 = (d.squared_norm() - 1.0) / (n as f64 - 2.0);
    let marked = ensemble.pointers().row(ensemble.marked_index());
    let mut overlap = Complex64::new(0.0, 0.0);
    for (dv, em) in d.vector().iter().zip(marked.iter()) {
        overlap += dv.conj() * em;
    }
    let f2 = overlap.re / ((n as f64 - 1.0).sqrt());
    let factors = DecoherenceFactors::new(f1, f2);
    debug_assert!(factors.within_bounds(n as u64));
    Ok(factors)
}

/// Marked-state probability after `steps` iterations in the presence of
/// the environment:
///
/// P = F1 sin^2((2l+1) theta) + (1 - F1)/n
///     + (1/2)(F2 - F1) sin(2 theta) sin(4 l theta)
///
/// with theta the plain search angle for size n. For factors produced by
/// a pointer ensemble this equals the exact partial-trace probability and
/// lies in [0, 1]; the result is clamped to that interval to absorb
/// rounding.
pub fn decohered_probability(n: u64, steps: u64, factors: &DecoherenceFactors) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "decohered probability needs n >= 3, got {n}"
        )));
    }
    if !factors.within_bounds(n) {
        return Err(Error::Domain(format!(
            "decoherence factors out of bounds for n={n}: F1={}, F2={}",
            factors.f1, factors.f2
        )));
    }
    let theta = SearchAngle::from_size(n)?.theta();
    let l = steps as f64;
    let ideal = ((2.0 * l + 1.0) * theta).sin().powi(2);
    let p = factors.f1 * ideal
        + (1.0 - factors.f1) / n as f64
        + 0.5 * (factors.f2 - factors.f1) * (2.0 * theta).sin() * (4.0 * l * theta).sin();
    Ok(p.clamp(0.0, 1.0))
}

/// Marked-state probability for phase-matched pointers (the vanishing
/// collective pointer): cos^2(2 l theta) / n, which drops below the
/// classical 1/n everywhere except at full periods.
pub fn necoherence_probability(n: u64, steps: u64) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "necoherence probability needs n >= 3, got {n}"
        )));
    }
    let theta = SearchAngle::from_size(n)?.theta();
    Ok((2.0 * steps as f64 * theta).cos().powi(2) / n as f64)
}

/// Overlap magnitude and half-phase of the two branch pointer states in
/// the minimal-coupling dephasing model.
#[derive(Debug, Clone, Copy)]
pub struct MinimalCouplingParams {
    r: f64,
    delta: f64,
}

impl MinimalCouplingParams {
    pub fn new(r: f64, delta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Domain(format!(
                "pointer overlap magnitude must lie in [0, 1], got {r}"
            )));
        }
        Ok(Self { r, delta })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Marked-state probability in the minimal-coupling model:
/// (1/2)(1 - r) + r sin^2((2l+1) theta + delta).
pub fn minimal_coupling_probability(
    angle: &SearchAngle,
    steps: u64,
    params: &MinimalCouplingParams,
) -> f64 {
    let alpha = (2 * steps + 1) as f64 * angle.theta() + params.delta();
    0.5 * (1.0 - params.r()) + params.r() * alpha.sin().powi(2)
}

/// Harmonic dephasing bath: mode frequencies, one row of complex
/// couplings per system level, and the duration of a single search step.
#[derive(Debug, Clone)]
pub struct BathSpec {
    frequencies: Vec<f64>,
    couplings: Vec<Vec<Complex64>>,
    step_time: f64,
}

impl BathSpec {
    pub fn new(
        frequencies: Vec<f64>,
        couplings: Vec<Vec<Complex64>>,
        step_time: f64,
    ) -> Result<Self> {
        if frequencies.is_empty() {
            return Err(Error::Domain("bath needs at least one mode".into()));
        }
        if frequencies.iter().any(|&w| w.is_nan() || w <= 0.0) {
            return Err(Error::Domain(
                "all mode frequencies must be positive".into(),
            ));
        }
        if couplings.len() < 2 {
            return Err(Error::Domain(
                "bath needs couplings for at least two system levels".into(),
            ));
        }
        if couplings.iter().any(|row| row.len() != frequencies.len()) {
            return Err(Error::Dimension(format!(
                "each coupling row must have one entry per mode ({})",
                frequencies.len()
            )));
        }
        if step_time.is_nan() || step_time <= 0.0 {
            return Err(Error::Domain(format!(
                "step duration must be positive, got {step_time}"
            )));
        }
        Ok(Self {
            frequencies,
            couplings,
            step_time,
        })
    }

    pub fn modes(&self) -> usize {
        self.frequencies.len()
    }

    pub fn levels(&self) -> usize {
        self.couplings.len()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn coupling(&self, level: usize, mode: usize) -> Complex64 {
        self.couplings[level][mode]
    }

    pub fn step_time(&self) -> f64 {
        self.step_time
    }

    fn check_levels(&self, k: usize, k_prime: usize) -> Result<()> {
        let levels = self.levels();
        if k >= levels || k_prime >= levels {
            return Err(Error::Domain(format!(
                "level indices ({k}, {k_prime}) out of range for {levels} levels"
            )));
        }
        Ok(())
    }
}

/// Norm of the bath decoherence factor between levels k and k' after
/// `steps` search steps at zero temperature:
///
/// |F| = exp{ -sum_j (2 |g_jk - g_jk'|^2 / w_j^2) sin^2(w_j l t0 / 2) }
///
/// Only coupling differences enter, so |F| is invariant under a common
/// per-mode shift of both coupling rows.
pub fn bath_factor_norm(bath: &BathSpec, k: usize, k_prime: usize, steps: u64) -> Result<f64> {
    bath.check_levels(k, k_prime)?;
    let t = steps as f64 * bath.step_time();
    let mut exponent = 0.0;
    for (j, &w) in bath.frequencies().iter().enumerate() {
        let dg = bath.coupling(k, j) - bath.coupling(k_prime, j);
        let s = (w * t / 2.0).sin();
        exponent += 2.0 * dg.norm_sqr() / (w * w) * s * s;
    }
    Ok((-exponent).exp())
}

/// Affine least-squares fit of -ln|F| against elapsed time.
#[derive(Debug, Clone, Copy)]
pub struct DecayFit {
    /// Fitted decay rate (slope), in inverse time units.
    pub gamma: f64,
    /// Fitted intercept; absorbs the short-time transient.
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
}

/// Fit the exponential decay rate of |F_{k,k'}|: least squares of
/// -ln|F| versus l t0 over l in [1, max_steps].
///
/// Requires |F| to decay monotonically over the window; a bath whose
/// factor recurs (a single mode, for instance) is rejected with the
/// residual attached so the caller can judge how far from exponential the
/// window is.
pub fn fit_decoherence_rate(
    bath: &BathSpec,
    k: usize,
    k_prime: usize,
    max_steps: u64,
) -> Result<DecayFit> {
    if max_steps < 2 {
        return Err(Error::Domain(format!(
            "decay fit needs at least 2 steps, got {max_steps}"
        )));
    }
    bath.check_levels(k, k_prime)?;

    let ls: Vec<f64> = (1..=max_steps)
        .map(|l| l as f64 * bath.step_time())
        .collect();
    let ys: Vec<f64> = (1..=max_steps)
        .map(|l| -f64::ln(bath_factor_norm(bath, k, k_prime, l).expect("levels checked")))
        .collect();

    let n = ls.len() as f64;
    let mean_x = ls.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in ls.iter().zip(&ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let gamma = sxy / sxx;
    let intercept = mean_y - gamma * mean_x;
    let residual = (ls
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (gamma * x + intercept);
            e * e
        })
        .sum::<f64>()
        / n)
        .sqrt();

    let monotone = ys.windows(2).all(|w| w[1] >= w[0] - 1e-15);
    if !monotone {
        return Err(Error::FitUnreliable { residual });
    }
    Ok(DecayFit {
        gamma,
        intercept,
        residual,
    })
}

/// Step budget allowed by a decay rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectiveSteps {
    /// Largest l with e^{-gamma l t0} >= floor.
    Bounded(u64),
    /// No decay (gamma = 0): any number of steps stays coherent.
    Unbounded,
}

/// Largest step count l whose accumulated decoherence factor stays at or
/// above `floor`: floor(-ln(floor) / (gamma t0)), adjusted so the defining
/// inequality e^{-gamma l t0} >= floor holds exactly.
pub fn max_effective_steps(gamma: f64, t0: f64, floor: f64) -> Result<EffectiveSteps> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::Domain(format!(
            "decay rate must be nonnegative, got {gamma}"
        )));
    }
    if t0.is_nan() || t0 <= 0.0 {
        return Err(Error::Domain(format!(
            "step duration must be positive, got {t0}"
        )));
    }
    if !(floor > 0.0 && floor < 1.0) {
        return Err(Error::Domain(format!(
            "floor must lie strictly between 0 and 1, got {floor}"
        )));
    }
    if gamma == 0.0 {
        return Ok(EffectiveSteps::Unbounded);
    }
    let keeps = |l: u64| (-gamma * l as f64 * t0).exp() >= floor;
    let mut l = (-floor.ln() / (gamma * t0)).floor().max(0.0) as u64;
    while keeps(l + 1) {
        l += 1;
    }
    while l > 0 && !keeps(l) {
        l -= 1;
    }
    Ok(EffectiveSteps::Bounded(l))
}
