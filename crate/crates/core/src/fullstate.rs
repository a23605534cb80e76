//! Brute-force dense simulator of the search on the full N-dimensional
//! space. Deliberately literal — two reflections per step at O(N) cost —
//! so it can serve as an independent oracle for every closed form in
//! [`crate::su2`].

use num_complex::Complex64;

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-10;
const AXIS_NORM_TOL: f64 = 1e-8;

/// Dense complex amplitude vector over the computational basis,
/// normalized within 1e-10.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wrap amplitudes, requiring unit norm within 1e-10.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::Domain(format!(
                "state dimension must be >= 2, got {}",
                amplitudes.len()
            )));
        }
        let deviation = (norm_sqr(&amplitudes) - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { amplitudes })
    }

    /// Normalize arbitrary nonzero amplitudes into a state.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = norm_sqr(&amplitudes).sqrt();
        if norm == 0.0 {
            return Err(Error::Domain("zero vector cannot be normalized".into()));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(amplitudes)
    }

    /// The homogeneous superposition: every amplitude 1/sqrt(n).
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!(
                "database size must be >= 2, got {n}"
            )));
        }
        let a = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        Ok(Self {
            amplitudes: vec![a; n],
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// Total probability carried by the marked indices.
    pub fn marked_probability(&self, marked: &MarkedSet) -> f64 {
        marked
            .indices()
            .iter()
            .map(|&k| self.amplitudes[k].norm_sqr())
            .sum()
    }
}

/// Nonempty set of distinct marked basis indices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedSet {
    indices: Vec<usize>,
}

impl MarkedSet {
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Domain("marked set must be nonempty".into()));
        }
        indices.sort_unstable();
        indices.dedup();
        Ok(Self { indices })
    }

    pub fn single(index: usize) -> Self {
        Self {
            indices: vec![index],
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Number of marked indices; never zero.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    fn check_against_dim(&self, dim: usize) -> Result<()> {
        let &max = self.indices.last().expect("nonempty by construction");
        if max >= dim {
            return Err(Error::Domain(format!(
                "marked index {max} out of range for dimension {dim}"
            )));
        }
        if self.indices.len() >= dim {
            return Err(Error::Domain(format!(
                "marked set of size {} must leave at least one unmarked state in dimension {dim}",
                self.indices.len()
            )));
        }
        Ok(())
    }
}

fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

pub(crate) fn reflect_marked_in_place(amps: &mut [Complex64], marked: &MarkedSet) {
    for &k in marked.indices() {
        amps[k] = -amps[k];
    }
}

pub(crate) fn reflect_about_in_place(amps: &mut [Complex64], axis: &[Complex64]) {
    let mut overlap = Complex64::new(0.0, 0.0);
    for (a, s) in axis.iter().zip(amps.iter()) {
        overlap += a.conj() * s;
    }
    let two_overlap = 2.0 * overlap;
    for (s, a) in amps.iter_mut().zip(axis.iter()) {
        *s = two_overlap * a - *s;
    }
}

/// Selective sign flip of the marked amplitudes, 1 - 2 sum_m |m><m|.
pub fn reflect_marked(state: &StateVector, marked: &MarkedSet) -> Result<StateVector> {
    marked.check_against_dim(state.dim())?;
    let mut amps = state.amplitudes.clone();
    reflect_marked_in_place(&mut amps, marked);
    Ok(StateVector { amplitudes: amps })
}

/// Reflection through `axis`: 2 <axis|state> axis - state.
pub fn reflect_about(state: &StateVector, axis: &StateVector) -> Result<StateVector> {
    if state.dim() != axis.dim() {
        return Err(Error::Dimension(format!(
            "state dimension {} vs axis dimension {}",
            state.dim(),
            axis.dim()
        )));
    }
    let deviation = (axis.norm_sqr() - 1.0).abs();
    if deviation > AXIS_NORM_TOL {
        return Err(Error::NotNormalized { deviation });
    }
    let mut amps = state.amplitudes.clone();
    reflect_about_in_place(&mut amps, &axis.amplitudes);
    Ok(StateVector { amplitudes: amps })
}

/// One search iteration: the marked-state sign flip followed by the
/// diffusion reflection through `axis`.
pub fn grover_step(
    state: &StateVector,
    marked: &MarkedSet,
    axis: &StateVector,
) -> Result<StateVector> {
    let flipped = reflect_marked(state, marked)?;
    reflect_about(&flipped, axis)
}

/// Probability trace of a search run: entry l is the total marked
/// probability after l iterations starting from `axis` itself, so entry 0
/// is the classical pre-search baseline.
pub fn run_search(axis: &StateVector, marked: &MarkedSet, steps: u64) -> Result<Vec<f64>> {
    marked.check_against_dim(axis.dim())?;
    let deviation = (axis.norm_sqr() - 1.0).abs();
    if deviation > AXIS_NORM_TOL {
        return Err(Error::NotNormalized { deviation });
    }
    let mut amps = axis.amplitudes.clone();
    let mut trace = Vec::with_capacity(steps as usize + 1);
    let marked_prob =
        |amps: &[Complex64]| -> f64 { marked.indices().iter().map(|&k| amps[k].norm_sqr()).sum() };
    trace.push(marked_prob(&amps));
    for _ in 0..steps {
        reflect_marked_in_place(&mut amps, marked);
        reflect_about_in_place(&mut amps, &axis.amplitudes);
        trace.push(marked_prob(&amps));
    }
    Ok(trace)
}
