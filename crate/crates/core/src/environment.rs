//! Exact brute-force simulations of the system-plus-environment models:
//! pointer-state entanglement with partial trace, the minimal-coupling
//! two-level dephasing model, and a truncated harmonic-oscillator bath.
//! These validate every closed form in [`crate::decoherence`] without
//! sharing a code path with it.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::decoherence::{BathSpec, MinimalCouplingParams, PointerEnsemble};
use crate::error::{Error, Result};
use crate::fullstate::{self, MarkedSet, StateVector};
use crate::linalg;
use crate::su2::SearchAngle;

const GLOBAL_NORM_TOL: f64 = 1e-10;
const LEAKAGE_LIMIT: f64 = 1e-8;
const HERMITIAN_TOL: f64 = 1e-9;

/// Joint state of the system and environment, stored as an n x d complex
/// tensor (system index by environment index), unit global norm.
#[derive(Debug, Clone)]
pub struct EntangledState {
    amplitudes: Array2<Complex64>,
}

impl EntangledState {
    pub fn new(amplitudes: Array2<Complex64>) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        let deviation = (norm_sqr - 1.0).abs();
        if deviation > GLOBAL_NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { amplitudes })
    }

    pub fn system_dim(&self) -> usize {
        self.amplitudes.nrows()
    }

    pub fn env_dim(&self) -> usize {
        self.amplitudes.ncols()
    }

    pub fn amplitudes(&self) -> &Array2<Complex64> {
        &self.amplitudes
    }

    /// Marked-state probability read directly off the tensor,
    /// sum_d |amplitudes[m, d]|^2 — the diagonal entry of the reduced
    /// density matrix without materializing the matrix. Useful when n is
    /// too large for an n x n array.
    pub fn marked_probability(&self, marked: usize) -> f64 {
        self.amplitudes
            .row(marked)
            .iter()
            .map(|z| z.norm_sqr())
            .sum()
    }
}

/// Reduced density matrix of the system, Hermitian with unit trace and
/// nonnegative spectrum.
#[derive(Debug, Clone)]
pub struct ReducedDensity {
    matrix: Array2<Complex64>,
}

impl ReducedDensity {
    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.matrix[[i, i]]).sum()
    }

    /// Diagonal probability of finding the system in basis state `marked`.
    pub fn marked_probability(&self, marked: usize) -> f64 {
        self.matrix[[marked, marked]].re
    }

    /// Check Hermiticity, unit trace, and positivity of the spectrum down
    /// to -`eigen_floor` (via Cholesky of matrix + eigen_floor * identity).
    pub fn validate(&self, eigen_floor: f64) -> Result<()> {
        let herm = linalg::hermiticity_deviation(&self.matrix);
        if herm > 1e-10 {
            return Err(Error::NotHermitian { deviation: herm });
        }
        let trace_dev = (self.trace() - Complex64::new(1.0, 0.0)).norm();
        if trace_dev > 1e-10 {
            return Err(Error::Domain(format!(
                "density matrix trace deviates from 1 by {trace_dev:e}"
            )));
        }
        if !linalg::is_positive_semidefinite(&self.matrix, eigen_floor) {
            return Err(Error::Domain(format!(
                "density matrix has an eigenvalue below -{eigen_floor:e}"
            )));
        }
        Ok(())
    }
}

/// Entangle each basis state with its pointer, then run `steps` search
/// iterations on the system factor:
///
/// (1/sqrt(n)) sum_k (S^l |k>) (x) |e_k>
///
/// where S^l is the genuinely iterated full-space operator of
/// [`crate::fullstate`], carrying the (-1)^l sign on the complement of
/// the search plane. Requires unit-norm pointers.
pub fn entangle_then_search(ensemble: &PointerEnsemble, steps: u64) -> Result<EntangledState> {
    let mut walk = EntangledWalk::new(ensemble)?;
    for _ in 0..steps {
        walk.step();
    }
    EntangledState::new(walk.work.reversed_axes().as_standard_layout().to_owned())
}

/// Marked-state probability after each of 0..=steps search iterations of
/// the entangled evolution, evolved incrementally. Entry l equals
/// `entangle_then_search(ensemble, l)` followed by the reduced-density
/// diagonal at the marked index, without materializing either.
pub fn entangled_marked_trace(ensemble: &PointerEnsemble, steps: u64) -> Result<Vec<f64>> {
    let mut walk = EntangledWalk::new(ensemble)?;
    let mut trace = Vec::with_capacity(steps as usize + 1);
    trace.push(walk.marked_probability());
    for _ in 0..steps {
        walk.step();
        trace.push(walk.marked_probability());
    }
    Ok(trace)
}

/// The entangled tensor held transposed (environment index by system
/// index) so each environment slice is a contiguous n-vector the search
/// step can act on independently.
struct EntangledWalk {
    work: Array2<Complex64>,
    marked: MarkedSet,
    axis: Vec<Complex64>,
}

impl EntangledWalk {
    fn new(ensemble: &PointerEnsemble) -> Result<Self> {
        let n = ensemble.len();
        let dev = ensemble.unit_norm_deviation();
        if dev > GLOBAL_NORM_TOL {
            return Err(Error::NotNormalized { deviation: dev });
        }
        let axis: Vec<Complex64> = StateVector::uniform(n)?.amplitudes().to_vec();
        let scale = 1.0 / (n as f64).sqrt();
        let d = ensemble.dim();
        let mut work = Array2::<Complex64>::zeros((d, n));
        for k in 0..n {
            for dd in 0..d {
                work[[dd, k]] = ensemble.pointers()[[k, dd]] * scale;
            }
        }
        Ok(Self {
            work,
            marked: MarkedSet::single(ensemble.marked_index()),
            axis,
        })
    }

    fn step(&mut self) {
        for mut row in self.work.rows_mut() {
            let slice = row.as_slice_mut().expect("row-major layout");
            fullstate::reflect_marked_in_place(slice, &self.marked);
            fullstate::reflect_about_in_place(slice, &self.axis);
        }
    }

    fn marked_probability(&self) -> f64 {
        let m = self.marked.indices()[0];
        (0..self.work.nrows())
            .map(|dd| self.work[[dd, m]].norm_sqr())
            .sum()
    }
}

/// Trace out the environment: rho[a, b] = sum_d T[a, d] conj(T[b, d]).
/// The lower triangle is filled by conjugate symmetry, so the result is
/// Hermitian by construction.
pub fn reduce(state: &EntangledState) -> ReducedDensity {
    let n = state.system_dim();
    let t = state.amplitudes();
    let mut rho = Array2::<Complex64>::zeros((n, n));
    for a in 0..n {
        let row_a = t.row(a);
        for b in a..n {
            let row_b = t.row(b);
            let mut s = Complex64::new(0.0, 0.0);
            for (x, y) in row_a.iter().zip(row_b.iter()) {
                s += x * y.conj();
            }
            rho[[a, b]] = s;
            if a != b {
                rho[[b, a]] = s.conj();
            }
        }
    }
    ReducedDensity { matrix: rho }
}

/// Probability of the marked state under a reduced density matrix.
pub fn marked_probability(rho: &ReducedDensity, marked: usize) -> f64 {
    rho.marked_probability(marked)
}

/// Exact evolution of the minimal-coupling dephasing model on the
/// 2 x d space spanned by the search plane and the environment.
///
/// The total generator is H0 + H_plus |+><+| + H_minus |-><-| with
/// |+-> = (|m> +- i |c>)/sqrt(2); the environment starts in the first
/// basis vector and the system in the search initial state. Returns the
/// marked-state probability at t = steps * t0.
pub fn minimal_coupling_evolve(
    angle: &SearchAngle,
    h_plus: &Array2<Complex64>,
    h_minus: &Array2<Complex64>,
    t0: f64,
    steps: u64,
) -> Result<f64> {
    if t0.is_nan() || t0 <= 0.0 {
        return Err(Error::Domain(format!(
            "step duration must be positive, got {t0}"
        )));
    }
    linalg::require_hermitian(h_plus, HERMITIAN_TOL)?;
    linalg::require_hermitian(h_minus, HERMITIAN_TOL)?;
    let d = h_plus.nrows();
    if h_minus.nrows() != d {
        return Err(Error::Dimension(format!(
            "branch generators must share a dimension, got {d} and {}",
            h_minus.nrows()
        )));
    }

    let theta = angle.theta();
    let total = build_minimal_coupling_hamiltonian(theta, t0, h_plus, h_minus);

    // initial state psi (x) e0 in the (m, c) (x) environment basis
    let mut state = Array1::<Complex64>::zeros(2 * d);
    state[0] = Complex64::new(theta.sin(), 0.0);
    state[d] = Complex64::new(theta.cos(), 0.0);

    let u = linalg::evolution_operator(&total, steps as f64 * t0);
    let evolved = u.dot(&state);
    // <m| picks the first block
    Ok(evolved.iter().take(d).map(|z| z.norm_sqr()).sum())
}

fn build_minimal_coupling_hamiltonian(
    theta: f64,
    t0: f64,
    h_plus: &Array2<Complex64>,
    h_minus: &Array2<Complex64>,
) -> Array2<Complex64> {
    let d = h_plus.nrows();
    let w = 2.0 * theta / t0;
    // H0 in the (m, c) basis
    let h0 = [
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, w)],
        [Complex64::new(0.0, -w), Complex64::new(0.0, 0.0)],
    ];
    // projectors onto |+-> = (|m> +- i|c>)/sqrt(2)
    let half = Complex64::new(0.5, 0.0);
    let half_i = Complex64::new(0.0, 0.5);
    // |+><+| = [[1/2, -i/2], [i/2, 1/2]], |-><-| = [[1/2, i/2], [-i/2, 1/2]]
    let p_plus = [[half, -half_i], [half_i, half]];
    let p_minus = [[half, half_i], [-half_i, half]];

    let mut total = Array2::<Complex64>::zeros((2 * d, 2 * d));
    for si in 0..2 {
        for sj in 0..2 {
            for di in 0..d {
                for dj in 0..d {
                    let mut v = Complex64::new(0.0, 0.0);
                    if di == dj {
                        v += h0[si][sj];
                    }
                    v += p_plus[si][sj] * h_plus[[di, dj]];
                    v += p_minus[si][sj] * h_minus[[di, dj]];
                    total[[si * d + di, sj * d + dj]] = v;
                }
            }
        }
    }
    total
}

/// Overlap parameters (r, delta) realized by a pair of branch generators
/// after time t: the pointer states are e_pm = exp(-i t H_pm) e0 and the
/// convention is <e_minus | e_plus> = r e^{i 2 delta}, under which the
/// closed-form probability (1/2)(1-r) + r sin^2((2l+1) theta + delta)
/// reproduces [`minimal_coupling_evolve`] exactly.
pub fn pointer_phase_params(
    h_plus: &Array2<Complex64>,
    h_minus: &Array2<Complex64>,
    t: f64,
) -> Result<MinimalCouplingParams> {
    linalg::require_hermitian(h_plus, HERMITIAN_TOL)?;
    linalg::require_hermitian(h_minus, HERMITIAN_TOL)?;
    let d = h_plus.nrows();
    if h_minus.nrows() != d {
        return Err(Error::Dimension(format!(
            "branch generators must share a dimension, got {d} and {}",
            h_minus.nrows()
        )));
    }
    let mut e0 = Array1::<Complex64>::zeros(d);
    e0[0] = Complex64::new(1.0, 0.0);
    let e_plus = linalg::evolution_operator(h_plus, t).dot(&e0);
    let e_minus = linalg::evolution_operator(h_minus, t).dot(&e0);
    let mut overlap = Complex64::new(0.0, 0.0);
    for (m, p) in e_minus.iter().zip(e_plus.iter()) {
        overlap += m.conj() * p;
    }
    MinimalCouplingParams::new(overlap.norm().min(1.0), overlap.arg() / 2.0)
}

/// A D = 2 pair of branch generators that realizes the overlap parameters
/// (r, delta) at time t, for driving the closed form through the exact
/// evolution: H_plus = 0 and H_minus generates the SU(2) element whose
/// first column is the required |e_minus>.
pub fn hermitian_pair_for_params(
    params: &MinimalCouplingParams,
    t: f64,
) -> Result<(Array2<Complex64>, Array2<Complex64>)> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::Domain(format!(
            "pointer parameters can only be realized over positive time, got t={t}"
        )));
    }
    let r = params.r();
    let delta = params.delta();
    // want <e_minus|e_plus> = r e^{i 2 delta} with e_plus = e0, so
    // e_minus = (r e^{-i 2 delta}, sqrt(1 - r^2))
    let top = Complex64::from_polar(r, -2.0 * delta);
    let bottom = Complex64::new((1.0 - r * r).max(0.0).sqrt(), 0.0);
    // unitary with that first column, det = 1
    let v = [[top, -bottom], [Complex64::new(bottom.re, 0.0), top.conj()]];
    // V = exp(-i phi n.sigma) with cos phi = Re tr(V)/2
    let cos_phi = ((v[0][0] + v[1][1]) / 2.0).re;
    let phi = cos_phi.clamp(-1.0, 1.0).acos();
    let mut h_minus = Array2::<Complex64>::zeros((2, 2));
    let sin_phi = phi.sin();
    if sin_phi.abs() > 1e-9 {
        // n.sigma = i (V - cos phi I)/sin phi, Hermitian with unit norm
        let scale = Complex64::new(0.0, 1.0) / sin_phi;
        for i in 0..2 {
            for j in 0..2 {
                let id = if i == j {
                    Complex64::new(cos_phi, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                h_minus[[i, j]] = scale * (v[i][j] - id) * (phi / t);
            }
        }
    } else if cos_phi < 0.0 {
        // V = -I (r = 1, delta = +-pi/2): any rotation axis works
        h_minus[[0, 0]] = Complex64::new(phi / t, 0.0);
        h_minus[[1, 1]] = Complex64::new(-phi / t, 0.0);
    }
    // cos phi near +1 leaves H_minus = 0 (identity evolution: r=1, delta=0)
    let h_plus = Array2::<Complex64>::zeros((2, 2));
    Ok((h_plus, h_minus))
}

/// Truncated-Fock-space realization of a dephasing bath.
#[derive(Debug, Clone)]
pub struct OscillatorEnvironment {
    bath: BathSpec,
    fock_cutoff: usize,
}

impl OscillatorEnvironment {
    /// `fock_cutoff` is the highest retained Fock level per mode.
    pub fn new(bath: BathSpec, fock_cutoff: usize) -> Result<Self> {
        if fock_cutoff < 2 {
            return Err(Error::Domain(format!(
                "Fock cutoff must be at least 2, got {fock_cutoff}"
            )));
        }
        Ok(Self { bath, fock_cutoff })
    }

    pub fn bath(&self) -> &BathSpec {
        &self.bath
    }

    pub fn fock_cutoff(&self) -> usize {
        self.fock_cutoff
    }
}

/// Exact conditional-evolution overlap <e_k | e_k'> of the bath after
/// `steps` search steps.
///
/// Each mode evolves the vacuum under w a†a + (g a + g* a†) conditioned on
/// the system level; modes are mutually commuting, so the total overlap
/// is the product of per-mode overlaps. Evolution is dense matrix
/// exponentiation in the truncated Fock space, stepped finely enough to
/// watch the top-level population, which must stay below 1e-8 or the
/// truncation is rejected.
pub fn oscillator_overlap(
    env: &OscillatorEnvironment,
    k: usize,
    k_prime: usize,
    steps: u64,
) -> Result<Complex64> {
    let bath = env.bath();
    let levels = bath.levels();
    if k >= levels || k_prime >= levels {
        return Err(Error::Domain(format!(
            "level indices ({k}, {k_prime}) out of range for {levels} levels"
        )));
    }
    let mut overlap = Complex64::new(1.0, 0.0);
    for mode in 0..bath.modes() {
        let w = bath.frequencies()[mode];
        let state_k = evolve_mode(env, w, bath.coupling(k, mode), steps)?;
        let state_kp = evolve_mode(env, w, bath.coupling(k_prime, mode), steps)?;
        let mut s = Complex64::new(0.0, 0.0);
        for (a, b) in state_k.iter().zip(state_kp.iter()) {
            s += a.conj() * b;
        }
        overlap *= s;
    }
    Ok(overlap)
}

fn evolve_mode(
    env: &OscillatorEnvironment,
    omega: f64,
    g: Complex64,
    steps: u64,
) -> Result<Array1<Complex64>> {
    let dim = env.fock_cutoff() + 1;
    let t0 = env.bath().step_time();

    let mut h = Array2::<Complex64>::zeros((dim, dim));
    for f in 0..dim {
        h[[f, f]] = Complex64::new(omega * f as f64, 0.0);
    }
    for f in 1..dim {
        let root = (f as f64).sqrt();
        // a|f> = sqrt(f)|f-1>, so <f-1| a |f> = sqrt(f)
        h[[f - 1, f]] += g * root;
        h[[f, f - 1]] += g.conj() * root;
    }

    // substep so the top-level population is sampled at least a few times
    // per oscillation period
    let substeps_per_step = (omega * t0 / (std::f64::consts::PI / 4.0)).ceil().max(1.0) as u64;
    let dt = t0 / substeps_per_step as f64;
    let u = linalg::evolution_operator(&h, dt);

    let mut state = Array1::<Complex64>::zeros(dim);
    state[0] = Complex64::new(1.0, 0.0);
    for _ in 0..steps * substeps_per_step {
        state = u.dot(&state);
        let leakage = state[dim - 1].norm_sqr();
        if leakage >= LEAKAGE_LIMIT {
            return Err(Error::Truncation {
                leakage,
                limit: LEAKAGE_LIMIT,
            });
        }
    }
    Ok(state)
}
