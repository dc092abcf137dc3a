//! Quantitative study of the divisor error term: the mean-square constant,
//! exact L2 norms of dilated Delta, correlation Gram matrices and their
//! eigenvalues, tau-correlation sums, and large-divisor-count witnesses.

mod correlation;
mod gram;
mod piecewise;
mod tong;
mod witness;
pub mod zeta;

pub use correlation::tau_correlation;
pub use gram::{gram_matrix, quadratic_form, symmetric_eigenvalues, GramEstimate};
pub use piecewise::{dilated_delta_product_integral, l2_norm_delta};
pub use tong::{tong_constant, TongEstimate};
pub use witness::{omega_witness, OmegaWitness};
pub use zeta::zeta;

/// The lower-bound factor q^(3/2) - 2 q^(3/4) - 1 from the Minkowski estimate
/// for the combined norm of Delta(x) - 2q Delta(x/q) + q^2 Delta(x/q^2).
/// Accepts any real q >= 0 for plotting; it is positive from q = 5 on.
pub fn lambda_q(q: f64) -> f64 {
    q.powf(1.5) - 2.0 * q.powf(0.75) - 1.0
}

#[cfg(test)]
mod tests {
    use super::lambda_q;

    #[test]
    fn lambda_values() {
        assert!((lambda_q(5.0) - 3.4929).abs() <= 1e-4);
        assert_eq!(lambda_q(1.0), -2.0);
        assert!(lambda_q(4.99) < lambda_q(5.0));
    }

    #[test]
    fn lambda_increasing_on_grid() {
        let mut prev = lambda_q(1.0);
        for q in 2..=100 {
            let cur = lambda_q(q as f64);
            assert!(cur > prev, "lambda must increase at q = {q}");
            prev = cur;
        }
    }
}
