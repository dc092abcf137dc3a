//! Periodic multiplicative functions with bounded partial sums, and the
//! Dirichlet-divisor error term Delta(x) that controls the partial sums of
//! their convolutions.
//!
//! The crate has four layers:
//!
//! * [`spec`] - define and validate multiplicative functions given by
//!   finitely many exceptional primes, evaluate them, and test the
//!   vanishing-Euler-factor condition that characterizes bounded partial
//!   sums.
//! * [`sieve`] - bulk tables over 1..N, prefix sums, Dirichlet convolution,
//!   the divisor-count sieve, and exact D(x), Delta(x) via the hyperbola
//!   formula.
//! * [`convolution`] - the finitely supported kernel g = (f1*mu)*(f2*mu) and
//!   the exact decomposition of partial sums of f1*f2 into dilated Delta
//!   terms.
//! * [`analytics`] - the mean-square constant of Delta, exact L2 norms of
//!   dilated error terms, correlation Gram matrices with eigenvalues,
//!   tau-correlation sums, and divisor-count witnesses.
//!
//! Everything is a pure function of immutable inputs; tables can be shared
//! across threads freely, and parallel code paths are written to give
//! bit-identical results at any thread count.

pub mod analytics;
pub mod arith;
pub mod convolution;
pub mod error;
pub mod output;
pub mod sieve;
pub mod spec;

pub use analytics::{
    dilated_delta_product_integral, gram_matrix, l2_norm_delta, lambda_q, omega_witness,
    quadratic_form, symmetric_eigenvalues, tau_correlation, tong_constant, zeta, GramEstimate,
    OmegaWitness, TongEstimate,
};
pub use convolution::{
    verify_delta_decomposition, ConvolutionCoeffs, DecompositionReport, DecompositionSample,
    LocalPolynomial,
};
pub use error::{Error, Result};
pub use sieve::{
    delta, dirichlet_convolve, tau_summatory, tau_table, CompensatedSum, DeltaEvaluator,
    MemoryBudget, ValueTable, EULER_GAMMA,
};
pub use spec::{EulerFactorEntry, EulerFactorReport, LocalPrimeData, MultiplicativeSpec};
