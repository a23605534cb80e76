//! Closed-form engine for the two-dimensional search dynamics.
//!
//! One iteration of the search walks the state around a plane spanned by
//! the marked state and the collective (uniform unmarked) state; on that
//! plane the iterate is a rotation by twice the mixing angle. This module
//! holds the angle types, the 2x2 rotation operators, the success
//! probabilities, and the optimal step counts for the plain, generalized
//! (arbitrary initial state) and multi-marked searches.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

/// 2x2 complex matrix in the ordered basis (marked, collective).
pub type Mat2 = [[Complex64; 2]; 2];

/// Tolerance below which two success probabilities count as tied when
/// selecting the optimal step count (ties go to the smaller count).
const STEP_TIE_TOL: f64 = 1e-12;

/// Mixing angle of the plain search: sin(theta) = amplitude of the marked
/// state in the uniform superposition. Half the rotation per step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchAngle {
    theta: f64,
    size: Option<u64>,
}

impl SearchAngle {
    /// Angle for a database of `n` items, theta = arcsin(1/sqrt(n)).
    pub fn from_size(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!(
                "database size must be >= 2 (the collective state needs n-1 >= 1), got {n}"
            )));
        }
        Ok(Self {
            theta: (1.0 / (n as f64).sqrt()).asin(),
            size: Some(n),
        })
    }

    /// Angle from a raw value in (0, pi/2].
    pub fn from_theta(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta <= FRAC_PI_2) {
            return Err(Error::Domain(format!(
                "search angle must lie in (0, pi/2], got {theta}"
            )));
        }
        Ok(Self { theta, size: None })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Database size, when the angle was built from one.
    pub fn size(&self) -> Option<u64> {
        self.size
    }

    pub fn sin_theta(&self) -> f64 {
        self.theta.sin()
    }

    /// Optimal step count: the closed-form asymptotic bound next to the
    /// exact argmax of the success probability.
    pub fn optimal_steps(&self) -> StepBound {
        let asymptotic = match self.size {
            Some(n) => 0.25 * PI * (n as f64).sqrt() - 0.5,
            None => PI / (4.0 * self.sin_theta()) - 0.5,
        };
        step_bound(self.theta, asymptotic)
    }
}

/// Mixing angle and phase of a search started from an arbitrary state:
/// the marked amplitude of the initial state is sin(theta_gamma) e^{i phi}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralSearchAngle {
    theta_gamma: f64,
    phi: f64,
}

impl GeneralSearchAngle {
    pub fn new(theta_gamma: f64, phi: f64) -> Result<Self> {
        if !(theta_gamma > 0.0 && theta_gamma <= FRAC_PI_2) {
            return Err(Error::Domain(format!(
                "general search angle must lie in (0, pi/2], got {theta_gamma}"
            )));
        }
        if !(phi > -PI && phi <= PI) {
            return Err(Error::Domain(format!(
                "phase must lie in (-pi, pi], got {phi}"
            )));
        }
        Ok(Self { theta_gamma, phi })
    }

    /// Angle read off a marked-state amplitude: theta = arcsin(|a|),
    /// phi = arg(a).
    pub fn from_amplitude(amplitude: Complex64) -> Result<Self> {
        let mag = amplitude.norm();
        if !(mag > 0.0 && mag <= 1.0) {
            return Err(Error::Domain(format!(
                "marked amplitude magnitude must lie in (0, 1], got {mag}"
            )));
        }
        let mut phi = amplitude.arg();
        if phi == -PI {
            phi = PI;
        }
        Self::new(mag.asin(), phi)
    }

    pub fn theta_gamma(&self) -> f64 {
        self.theta_gamma
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Optimal step count; the asymptotic bound is pi/(4 sin theta) - 1/2.
    pub fn optimal_steps(&self) -> StepBound {
        let asymptotic = PI / (4.0 * self.theta_gamma.sin()) - 0.5;
        step_bound(self.theta_gamma, asymptotic)
    }
}

/// A 2x2 unitary acting on the search plane, together with the sign it
/// applies to every vector in the orthogonal complement of that plane.
///
/// The complement sign never enters any probability computed here (only
/// marked-state matrix elements do), but iterating the operator carries
/// (-1)^l on the complement and the full-space oracles reproduce that.
#[derive(Debug, Clone, Copy)]
pub struct Su2Operator {
    entries: Mat2,
    complement_sign: i8,
}

impl Su2Operator {
    /// Validates unitarity and |det| = 1 within 1e-12.
    pub fn new(entries: Mat2, complement_sign: i8) -> Result<Self> {
        if complement_sign != 1 && complement_sign != -1 {
            return Err(Error::Domain(format!(
                "complement sign must be +1 or -1, got {complement_sign}"
            )));
        }
        let op = Self {
            entries,
            complement_sign,
        };
        let dev = op.unitarity_deviation();
        if dev > 1e-12 {
            return Err(Error::Domain(format!(
                "matrix is not unitary: max |U^dagger U - 1| element = {dev:e}"
            )));
        }
        let det_dev = (op.determinant().norm() - 1.0).abs();
        if det_dev > 1e-12 {
            return Err(Error::Domain(format!(
                "matrix determinant modulus deviates from 1 by {det_dev:e}"
            )));
        }
        Ok(op)
    }

    fn from_raw(entries: Mat2, complement_sign: i8) -> Self {
        Self {
            entries,
            complement_sign,
        }
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::from_raw([[one, zero], [zero, one]], 1)
    }

    pub fn entries(&self) -> &Mat2 {
        &self.entries
    }

    pub fn complement_sign(&self) -> i8 {
        self.complement_sign
    }

    pub fn determinant(&self) -> Complex64 {
        self.entries[0][0] * self.entries[1][1] - self.entries[0][1] * self.entries[1][0]
    }

    /// max element of |U^dagger U - I|.
    pub fn unitarity_deviation(&self) -> f64 {
        let u = &self.entries;
        let mut max = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let s = u[0][i].conj() * u[0][j] + u[1][i].conj() * u[1][j];
                let want = if i == j { 1.0 } else { 0.0 };
                max = max.max((s - Complex64::new(want, 0.0)).norm());
            }
        }
        max
    }

    pub fn mul(&self, other: &Su2Operator) -> Su2Operator {
        let a = &self.entries;
        let b = &other.entries;
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Su2Operator::from_raw(out, self.complement_sign * other.complement_sign)
    }

    /// l-th power by repeated squaring; the complement sign follows parity.
    pub fn pow(&self, l: u64) -> Su2Operator {
        let mut result = Su2Operator::identity();
        let mut base = *self;
        let mut exp = l;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        result
    }

    /// Apply to a vector in the (marked, collective) plane basis.
    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.entries[0][0] * v[0] + self.entries[0][1] * v[1],
            self.entries[1][0] * v[0] + self.entries[1][1] * v[1],
        ]
    }
}

/// One step of the plain search restricted to the search plane: a rotation
/// by 2 theta. The complement of the plane picks up a factor -1 per step.
pub fn search_operator(angle: &SearchAngle) -> Su2Operator {
    let (s2, c2) = (2.0 * angle.theta()).sin_cos();
    let r = |x: f64| Complex64::new(x, 0.0);
    Su2Operator::from_raw([[r(c2), r(s2)], [r(-s2), r(c2)]], -1)
}

/// One step of the search from an arbitrary initial state: the plane
/// rotation conjugated by the marked-amplitude phase.
pub fn general_search_operator(angle: &GeneralSearchAngle) -> Su2Operator {
    let (s2, c2) = (2.0 * angle.theta_gamma()).sin_cos();
    let phase = Complex64::from_polar(1.0, angle.phi());
    Su2Operator::from_raw(
        [
            [Complex64::new(c2, 0.0), phase * s2],
            [-phase.conj() * s2, Complex64::new(c2, 0.0)],
        ],
        -1,
    )
}

/// Probability of finding the marked state after `steps` iterations from
/// the uniform start: sin^2((2 l + 1) theta).
pub fn ideal_success_probability(angle: &SearchAngle, steps: u64) -> f64 {
    let s = ((2 * steps + 1) as f64 * angle.theta()).sin();
    s * s
}

/// Probability after `steps` iterations from the arbitrary initial state:
/// sin^2((2 l + 1) theta_gamma), independent of the phase (the diagonal
/// phase conjugation commutes out of the marked-amplitude modulus).
pub fn general_success_probability(angle: &GeneralSearchAngle, steps: u64) -> f64 {
    let s = ((2 * steps + 1) as f64 * angle.theta_gamma()).sin();
    s * s
}

/// Closed-form step bound next to the exact argmax of the success
/// probability.
#[derive(Debug, Clone, Copy)]
pub struct StepBound {
    /// The closed-form asymptotic optimum.
    pub asymptotic: f64,
    /// argmax over steps of the success probability, ties broken toward
    /// the smaller count.
    pub exact: u64,
    /// Success probability at `exact`.
    pub achieved_probability: f64,
}

fn step_bound(theta: f64, asymptotic: f64) -> StepBound {
    let l_max = (PI / (2.0 * theta)).ceil() as u64;
    let mut best_l = 0u64;
    let mut best_p = (theta.sin()).powi(2);
    for l in 1..=l_max {
        let s = ((2 * l + 1) as f64 * theta).sin();
        let p = s * s;
        if p > best_p + STEP_TIE_TOL {
            best_p = p;
            best_l = l;
        }
    }
    StepBound {
        asymptotic,
        exact: best_l,
        achieved_probability: best_p,
    }
}

/// Step bound for finding any of `s` marked items among `n`: the search
/// angle obeys sin(theta_s) = sqrt(s/n).
pub fn multi_state_bound(n: u64, s: u64) -> Result<StepBound> {
    if s < 1 || s >= n {
        return Err(Error::Domain(format!(
            "marked count must satisfy 1 <= s < n, got s={s}, n={n}"
        )));
    }
    let theta = (((s as f64) / (n as f64)).sqrt()).asin();
    Ok(SearchAngle::from_theta(theta)?.optimal_steps())
}

/// Hermitian generator of one search step: exp(-i t0 H) reproduces the
/// step operator. In the plane basis H = (2 theta / t0) [[0, i], [-i, 0]].
pub fn generator_hamiltonian(angle: &SearchAngle, t0: f64) -> Result<Mat2> {
    if t0.is_nan() || t0 <= 0.0 {
        return Err(Error::Domain(format!(
            "step duration must be positive, got {t0}"
        )));
    }
    let w = 2.0 * angle.theta() / t0;
    let zero = Complex64::new(0.0, 0.0);
    Ok([
        [zero, Complex64::new(0.0, w)],
        [Complex64::new(0.0, -w), zero],
    ])
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::linalg;
    use ndarray::Array2;
    use std::f64::consts::FRAC_PI_4;

    const FRAC_PI_6: f64 = PI / 6.0;

    #[test]
    fn angle_from_size_small_cases() {
        let a4 = SearchAngle::from_size(4).unwrap();
        assert!((a4.theta() - FRAC_PI_6).abs() < 1e-15);
        assert_eq!(a4.size(), Some(4));

        let a2 = SearchAngle::from_size(2).unwrap();
        assert!((a2.theta() - FRAC_PI_4).abs() < 1e-15);

        assert!(SearchAngle::from_size(1).is_err());
        assert!(SearchAngle::from_size(0).is_err());
    }

    #[test]
    fn angle_from_size_matches_arcsin_series_at_million() {
        // arcsin(x) = x + x^3/6 + 3 x^5/40 + ... at x = 1e-3
        let x: f64 = 1e-3;
        let series = x + x.powi(3) / 6.0 + 3.0 * x.powi(5) / 40.0;
        let a = SearchAngle::from_size(1_000_000).unwrap();
        assert!((a.theta() - series).abs() < 1e-18);
        assert!((a.theta() - 1.0000001666667416e-3).abs() < 1e-18);
    }

    #[test]
    fn angle_from_theta_rejects_out_of_range() {
        assert!(SearchAngle::from_theta(0.0).is_err());
        assert!(SearchAngle::from_theta(-0.1).is_err());
        assert!(SearchAngle::from_theta(FRAC_PI_2 + 0.01).is_err());
        assert!(SearchAngle::from_theta(FRAC_PI_2).is_ok());
    }

    #[test]
    fn search_operator_quarter_cases() {
        let op = search_operator(&SearchAngle::from_theta(FRAC_PI_6).unwrap());
        let e = op.entries();
        assert!((e[0][0].re - 0.5).abs() < 1e-15);
        assert!((e[0][1].re - 0.75f64.sqrt()).abs() < 1e-15);
        assert!((e[1][0].re + 0.75f64.sqrt()).abs() < 1e-15);
        assert!((e[1][1].re - 0.5).abs() < 1e-15);
        assert_eq!(op.complement_sign(), -1);

        let quarter = search_operator(&SearchAngle::from_theta(FRAC_PI_4).unwrap());
        let q = quarter.entries();
        assert!(q[0][0].norm() < 1e-15);
        assert!((q[0][1].re - 1.0).abs() < 1e-15);
        assert!((q[1][0].re + 1.0).abs() < 1e-15);
    }

    #[test]
    fn three_sixth_rotations_make_minus_identity() {
        let op = search_operator(&SearchAngle::from_theta(FRAC_PI_6).unwrap());
        let cubed = op.pow(3);
        let e = cubed.entries();
        assert!((e[0][0].re + 1.0).abs() < 1e-14);
        assert!((e[1][1].re + 1.0).abs() < 1e-14);
        assert!(e[0][1].norm() < 1e-14);
        assert!(e[1][0].norm() < 1e-14);
        assert_eq!(cubed.complement_sign(), -1);
    }

    #[test]
    fn general_operator_reduces_at_zero_phase() {
        let theta = 0.2371;
        let plain = search_operator(&SearchAngle::from_theta(theta).unwrap());
        let general = general_search_operator(&GeneralSearchAngle::new(theta, 0.0).unwrap());
        for i in 0..2 {
            for j in 0..2 {
                assert!((plain.entries()[i][j] - general.entries()[i][j]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn general_operator_at_right_angle_phase() {
        let op = general_search_operator(&GeneralSearchAngle::new(FRAC_PI_6, FRAC_PI_2).unwrap());
        let e = op.entries();
        let s = 0.75f64.sqrt();
        assert!((e[0][0] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((e[0][1] - Complex64::new(0.0, s)).norm() < 1e-15);
        assert!((e[1][0] - Complex64::new(0.0, s)).norm() < 1e-15);
        assert!((e[1][1] - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn general_operator_is_phase_conjugated_rotation() {
        // S_gamma = D R(2 theta) D^dagger with D = diag(e^{i phi}, 1)
        for (theta, phi) in [(0.31, 1.7), (0.02, -2.9), (1.2, 0.4)] {
            let op = general_search_operator(&GeneralSearchAngle::new(theta, phi).unwrap());
            let (s2, c2) = (2.0 * theta).sin_cos();
            let d0 = Complex64::from_polar(1.0, phi);
            let want = [
                [Complex64::new(c2, 0.0), d0 * s2],
                [-d0.conj() * s2, Complex64::new(c2, 0.0)],
            ];
            for i in 0..2 {
                for j in 0..2 {
                    assert!((op.entries()[i][j] - want[i][j]).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn ideal_probability_known_values() {
        let a4 = SearchAngle::from_size(4).unwrap();
        assert_eq!(ideal_success_probability(&a4, 1), 1.0);
        // l = 0 gives the pre-search probability 1/n
        for n in [2u64, 4, 100, 1024] {
            let a = SearchAngle::from_size(n).unwrap();
            assert!((ideal_success_probability(&a, 0) - 1.0 / n as f64).abs() < 1e-15);
        }
        let a100 = SearchAngle::from_size(100).unwrap();
        let want = (15.0 * 0.1f64.asin()).sin().powi(2);
        assert!((ideal_success_probability(&a100, 7) - want).abs() < 1e-15);
        assert!((want - 0.9953444003575992).abs() < 1e-15);
    }

    #[test]
    fn general_probability_known_values() {
        // reduces to the plain search when theta matches the uniform start
        let n = 77u64;
        let theta = (1.0 / (n as f64).sqrt()).asin();
        let plain = SearchAngle::from_size(n).unwrap();
        let gen = GeneralSearchAngle::new(theta, 2.13).unwrap();
        for l in [0u64, 1, 5, 11] {
            assert!(
                (general_success_probability(&gen, l) - ideal_success_probability(&plain, l)).abs()
                    < 1e-15
            );
        }

        let g = GeneralSearchAngle::new(0.01, 1.3).unwrap();
        let want = (157.0 * 0.01f64).sin().powi(2);
        assert!((general_success_probability(&g, 78) - want).abs() < 1e-15);
        assert!((want - 0.9999993658637698).abs() < 1e-15);
        assert!((general_success_probability(&g, 0) - 0.01f64.sin().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn optimal_steps_small_and_large() {
        let b4 = SearchAngle::from_size(4).unwrap().optimal_steps();
        assert_eq!(b4.exact, 1);
        assert_eq!(b4.achieved_probability, 1.0);

        let b1m = SearchAngle::from_size(1_000_000).unwrap().optimal_steps();
        assert!((b1m.asymptotic - (0.25 * PI * 1000.0 - 0.5)).abs() < 1e-12);
        assert!((b1m.asymptotic - 784.8981633974483).abs() < 1e-10);
        assert!((b1m.exact as f64 - b1m.asymptotic).abs() <= 1.0);
    }

    #[test]
    fn optimal_steps_ties_break_low() {
        // n = 2: sin^2((2l+1) pi/4) = 1/2 for every l, so the tie goes to 0
        let b2 = SearchAngle::from_size(2).unwrap().optimal_steps();
        assert_eq!(b2.exact, 0);
        assert!((b2.achieved_probability - 0.5).abs() < 1e-12);
    }

    #[test]
    fn multi_state_bound_cases() {
        let b = multi_state_bound(4, 1).unwrap();
        assert_eq!(b.exact, 1);

        let b = multi_state_bound(16, 4).unwrap();
        assert_eq!(b.exact, 1);
        assert_eq!(b.achieved_probability, 1.0);

        let b = multi_state_bound(10_000, 4).unwrap();
        assert!((b.asymptotic - (0.25 * PI * 50.0 - 0.5)).abs() < 1e-12);

        assert!(multi_state_bound(4, 4).is_err());
        assert!(multi_state_bound(4, 0).is_err());
    }

    #[test]
    fn generator_matches_step_operator() {
        let angle = SearchAngle::from_theta(FRAC_PI_6).unwrap();
        let h = generator_hamiltonian(&angle, 1.0).unwrap();
        assert!((h[0][1] - Complex64::new(0.0, PI / 3.0)).norm() < 1e-15);
        assert!((h[1][0] - Complex64::new(0.0, -PI / 3.0)).norm() < 1e-15);
        // Hermitian
        assert!((h[0][1] - h[1][0].conj()).norm() < 1e-15);
        assert!(h[0][0].norm() < 1e-15 && h[1][1].norm() < 1e-15);

        // exp(-i t0 H) = S(theta)
        let mut hm = Array2::zeros((2, 2));
        for i in 0..2 {
            for j in 0..2 {
                hm[[i, j]] = h[i][j];
            }
        }
        let u = linalg::evolution_operator(&hm, 1.0);
        let s = search_operator(&angle);
        for i in 0..2 {
            for j in 0..2 {
                assert!((u[[i, j]] - s.entries()[i][j]).norm() < 1e-14);
            }
        }

        assert!(generator_hamiltonian(&angle, 0.0).is_err());
        assert!(generator_hamiltonian(&angle, -1.0).is_err());
    }

    #[test]
    fn generator_vanishes_with_angle() {
        let tiny = SearchAngle::from_theta(1e-14).unwrap();
        let h = generator_hamiltonian(&tiny, 1.0).unwrap();
        assert!(h[0][1].norm() < 1e-13);
    }

    #[test]
    fn search_operator_from_reflection_construction() {
        // S = -(2|psi><psi| - 1)(1 - 2|m><m|) restricted to the plane,
        // with |psi> = (sin theta, cos theta)
        for theta in [0.1f64, 0.5, 1.3] {
            let (st, ct) = theta.sin_cos();
            // I_m on the plane basis: diag(-1, 1)
            // -I_psi = 2|psi><psi| - 1
            let psi = [st, ct];
            let mut built = [[0.0f64; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    let im = if j == 0 { -1.0 } else { 1.0 };
                    let delta = if i == j { 1.0 } else { 0.0 };
                    built[i][j] = (2.0 * psi[i] * psi[j] - delta) * im;
                }
            }
            let op = search_operator(&SearchAngle::from_theta(theta).unwrap());
            for i in 0..2 {
                for j in 0..2 {
                    assert!((op.entries()[i][j].re - built[i][j]).abs() < 1e-14);
                    assert!(op.entries()[i][j].im.abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn su2_constructor_validates() {
        let bad = [
            [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        ];
        assert!(Su2Operator::new(bad, -1).is_err());
        let ok = search_operator(&SearchAngle::from_theta(0.3).unwrap());
        assert!(Su2Operator::new(*ok.entries(), -1).is_ok());
        assert!(Su2Operator::new(*ok.entries(), 2).is_err());
    }
}
