//! Small dense complex-matrix helpers: matrix exponential, Hermiticity
//! checks, and a Cholesky-based positive-semidefiniteness test.
//!
//! Everything here targets the modest dimensions used by the oracles in
//! this crate (2 up to a few hundred); no external LAPACK backend is pulled
//! in.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Matrix exponential exp(A) by scaling-and-squaring with a Padé(13)
/// approximant (Higham's method).
pub fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return Array2::zeros((0, 0));
    }
    if n == 1 {
        return Array2::from_elem((1, 1), a[[0, 0]].exp());
    }

    // theta_13 from Higham's error analysis.
    let theta_13 = 5.371_920_351_148_152e0;
    let norm = one_norm(a);
    let s = if norm > theta_13 {
        (norm / theta_13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.mapv(|z| z / (f64::powi(2.0, s as i32)));
    let mut result = pade13(&scaled);
    for _ in 0..s {
        result = result.dot(&result);
    }
    result
}

/// Padé(13,13) numerator coefficients.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn pade13(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    let eye = Array2::<Complex64>::eye(n);
    let c = |k: usize| Complex64::new(PADE13[k], 0.0);

    let a2 = a.dot(a);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);

    let u_inner = &a6 * c(13) + &a4 * c(11) + &a2 * c(9);
    let u = a.dot(&(a6.dot(&u_inner) + &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &eye * c(1)));
    let v_inner = &a6 * c(12) + &a4 * c(10) + &a2 * c(8);
    let v = a6.dot(&v_inner) + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &eye * c(0);

    // exp(A) ~ (V - U)^{-1} (V + U)
    solve(&(&v - &u), &(&v + &u))
}

/// Solve A X = B by Gaussian elimination with partial pivoting.
fn solve(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    let m = b.ncols();
    let mut aug = Array2::<Complex64>::zeros((n, n + m));
    aug.slice_mut(ndarray::s![.., ..n]).assign(a);
    aug.slice_mut(ndarray::s![.., n..]).assign(b);

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_val = aug[[col, col]].norm();
        for row in col + 1..n {
            let v = aug[[row, col]].norm();
            if v > pivot_val {
                pivot_val = v;
                pivot_row = row;
            }
        }
        assert!(pivot_val > 0.0, "singular matrix in Padé solve");
        if pivot_row != col {
            for j in 0..n + m {
                let tmp = aug[[col, j]];
                aug[[col, j]] = aug[[pivot_row, j]];
                aug[[pivot_row, j]] = tmp;
            }
        }
        let pivot = aug[[col, col]];
        for row in col + 1..n {
            let factor = aug[[row, col]] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in col..n + m {
                let v = aug[[col, j]];
                aug[[row, j]] -= factor * v;
            }
        }
    }

    let mut x = Array2::<Complex64>::zeros((n, m));
    for col in (0..n).rev() {
        for j in 0..m {
            let mut sum = aug[[col, n + j]];
            for k in col + 1..n {
                sum -= aug[[col, k]] * x[[k, j]];
            }
            x[[col, j]] = sum / aug[[col, col]];
        }
    }
    x
}

fn one_norm(a: &Array2<Complex64>) -> f64 {
    let mut max = 0.0f64;
    for j in 0..a.ncols() {
        let mut col = 0.0;
        for i in 0..a.nrows() {
            col += a[[i, j]].norm();
        }
        max = max.max(col);
    }
    max
}

/// Max element deviation from Hermiticity, max_{ij} |A_ij - conj(A_ji)|.
pub fn hermiticity_deviation(a: &Array2<Complex64>) -> f64 {
    let n = a.nrows();
    let mut max = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            max = max.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    max
}

/// Error unless `a` is square and Hermitian within `tol` per element.
pub fn require_hermitian(a: &Array2<Complex64>, tol: f64) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension(format!(
            "Hermitian matrix must be square, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let dev = hermiticity_deviation(a);
    if dev > tol {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(())
}

/// Whether the Hermitian matrix `a` has all eigenvalues >= -shift,
/// decided by attempting a Cholesky factorization of A + shift*I.
pub fn is_positive_semidefinite(a: &Array2<Complex64>, shift: f64) -> bool {
    let n = a.nrows();
    let mut l = Array2::<Complex64>::zeros((n, n));
    for j in 0..n {
        let mut d = a[[j, j]].re + shift;
        for k in 0..j {
            d -= l[[j, k]].norm_sqr();
        }
        if d <= 0.0 {
            return false;
        }
        let djj = d.sqrt();
        l[[j, j]] = Complex64::new(djj, 0.0);
        for i in j + 1..n {
            let mut s = a[[i, j]];
            for k in 0..j {
                s -= l[[i, k]] * l[[j, k]].conj();
            }
            l[[i, j]] = s / djj;
        }
    }
    true
}

/// exp(-i t H) for Hermitian H.
pub fn evolution_operator(h: &Array2<Complex64>, t: f64) -> Array2<Complex64> {
    expm(&h.mapv(|z| Complex64::new(0.0, -t) * z))
}
