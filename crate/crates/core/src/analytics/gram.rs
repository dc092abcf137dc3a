//! Finite-X estimates of the correlation matrix
//! a(n, m) = X^(-3/2) int_1^X Delta(x/n) Delta(x/m) dx
//! and the quadratic form it induces on convolution coefficients.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::convolution::ConvolutionCoeffs;
use crate::error::{Error, Result};
use crate::sieve::DeltaEvaluator;

use super::piecewise::dilated_delta_product_integral;

/// Symmetric matrix of normalized dilated-Delta correlations at a finite
/// endpoint, with its Jacobi eigenvalues (ascending). Eigenvalue signs are
/// data to report, not something this type asserts.
#[derive(Debug, Clone)]
pub struct GramEstimate {
    pub moduli: Vec<u64>,
    pub x_end: f64,
    /// Row-major T x T matrix, exactly symmetric by construction.
    pub entries: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
}

pub fn gram_matrix(moduli: &[u64], x_end: f64, evaluator: &DeltaEvaluator) -> Result<GramEstimate> {
    let mut moduli: Vec<u64> = moduli.to_vec();
    moduli.sort_unstable();
    moduli.dedup();
    if moduli.is_empty() {
        return Err(Error::input("gram_matrix: empty moduli list"));
    }
    if moduli.len() > 16 {
        return Err(Error::input(format!(
            "gram_matrix: at most 16 moduli supported, got {}",
            moduli.len()
        )));
    }
    if moduli[0] < 1 {
        return Err(Error::input("gram_matrix: moduli must be positive"));
    }
    let max = *moduli.last().unwrap();
    if x_end.is_nan() || x_end <= max as f64 {
        return Err(Error::input(format!(
            "gram_matrix: X = {x_end} must exceed max modulus {max}"
        )));
    }

    let t = moduli.len();
    let scale = x_end.powf(1.5);
    let pairs: Vec<(usize, usize)> = (0..t).flat_map(|i| (i..t).map(move |j| (i, j))).collect();
    let computed: Result<Vec<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            dilated_delta_product_integral(moduli[i], moduli[j], x_end, evaluator)
                .map(|v| v / scale)
        })
        .collect();
    let computed = computed?;

    let mut entries = vec![vec![0.0; t]; t];
    for (&(i, j), &v) in pairs.iter().zip(&computed) {
        entries[i][j] = v;
        entries[j][i] = v;
    }
    let eigenvalues = jacobi_eigenvalues(&entries, 1e-12, 100)?;
    Ok(GramEstimate {
        moduli,
        x_end,
        entries,
        eigenvalues,
    })
}

impl GramEstimate {
    pub fn index_of(&self, n: u64) -> Option<usize> {
        self.moduli.binary_search(&n).ok()
    }

    pub fn trace(&self) -> f64 {
        (0..self.moduli.len()).map(|i| self.entries[i][i]).sum()
    }
}

/// Eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations
/// with the default convergence settings used for Gram estimates.
pub fn symmetric_eigenvalues(matrix: &[Vec<f64>]) -> Result<Vec<f64>> {
    jacobi_eigenvalues(matrix, 1e-12, 100)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations. Converges
/// when the largest off-diagonal entry falls below `threshold` times the
/// Frobenius norm; errors out after `max_sweeps` sweeps.
#[allow(clippy::needless_range_loop)]
pub(crate) fn jacobi_eigenvalues(
    matrix: &[Vec<f64>],
    threshold: f64,
    max_sweeps: usize,
) -> Result<Vec<f64>> {
    let t = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let norm = a
        .iter()
        .flat_map(|row| row.iter())
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt();
    let done = |a: &Vec<Vec<f64>>| -> bool {
        let mut off = 0.0f64;
        for p in 0..t {
            for q in 0..t {
                if p != q {
                    off = off.max(a[p][q].abs());
                }
            }
        }
        off <= threshold * norm
    };

    if t > 1 && norm > 0.0 {
        let mut converged = false;
        for _ in 0..max_sweeps {
            if done(&a) {
                converged = true;
                break;
            }
            for p in 0..t - 1 {
                for q in p + 1..t {
                    let apq = a[p][q];
                    if apq.abs() <= threshold * norm / 1e3 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                    let tan = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let tan = if theta == 0.0 { 1.0 } else { tan };
                    let cos = 1.0 / (tan * tan + 1.0).sqrt();
                    let sin = tan * cos;
                    a[p][p] -= tan * apq;
                    a[q][q] += tan * apq;
                    a[p][q] = 0.0;
                    a[q][p] = 0.0;
                    for k in 0..t {
                        if k != p && k != q {
                            let akp = a[k][p];
                            let akq = a[k][q];
                            a[k][p] = cos * akp - sin * akq;
                            a[p][k] = a[k][p];
                            a[k][q] = sin * akp + cos * akq;
                            a[q][k] = a[k][q];
                        }
                    }
                }
            }
        }
        if !converged && !done(&a) {
            return Err(Error::Numeric(format!(
                "Jacobi eigenvalue iteration did not converge in {max_sweeps} sweeps"
            )));
        }
    }
    let mut eig: Vec<f64> = (0..t).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(eig)
}

/// sum_{n,m} g(n) conj(g(m)) a(n, m) over the support of the coefficients:
/// the finite-X estimate of the normalized squared L2 norm of
/// sum_n g(n) Delta(x/n). Every support point must appear among the moduli.
pub fn quadratic_form(coeffs: &ConvolutionCoeffs, gram: &GramEstimate) -> Result<f64> {
    let mut indexed: Vec<(usize, Complex64)> = Vec::with_capacity(coeffs.support.len());
    for &(n, g) in &coeffs.support {
        let idx = gram.index_of(n).ok_or_else(|| {
            Error::input(format!(
                "quadratic_form: support point {n} is not among the Gram moduli"
            ))
        })?;
        indexed.push((idx, g));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for &(i, gi) in &indexed {
        for &(j, gj) in &indexed {
            acc += gi * gj.conj() * gram.entries[i][j];
        }
    }
    Ok(acc.re)
}
