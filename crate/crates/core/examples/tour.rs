//! A short tour of the library: build a function, certify bounded partial
//! sums, decompose the partial sums of its self-convolution into dilated
//! divisor error terms, and estimate the mean-square constant behind them.
//!
//! Run with `cargo run --example tour`.

use bpslab::{
    l2_norm_delta, omega_witness, tong_constant, verify_delta_decomposition, ConvolutionCoeffs,
    DeltaEvaluator, MemoryBudget, MultiplicativeSpec, ValueTable,
};

fn main() -> bpslab::Result<()> {
    let budget = MemoryBudget::default();

    // A 27-periodic multiplicative function: f(3) = 2, f(9) = -15, f(27) = 0,
    // and f = 1 at everything coprime to 3.
    let f = MultiplicativeSpec::preset("example1")?;
    let report = f.check_conditions(1e-9);
    println!("period: {}", report.period);
    for e in &report.entries {
        println!(
            "euler factor at {}: {} (vanishes: {})",
            e.prime, e.factor, e.is_zero
        );
    }
    println!("bounded partial sums: {}", report.condition_i_holds);

    // The partial sums really are bounded; watch them over 1e6 values.
    let sums = ValueTable::sieve(&f, 1_000_000, &budget)?.prefix_sums();
    let max = (1..=1_000_000u64)
        .map(|x| sums.get(x).norm())
        .fold(0.0f64, f64::max);
    println!("max |S(x)| up to 1e6: {max}");

    // The self-convolution is not bounded: its partial sums are a finite
    // combination of dilated divisor error terms.
    let g = ConvolutionCoeffs::build(&f, &f)?;
    println!(
        "kernel support: {:?}",
        g.support.iter().map(|&(n, _)| n).collect::<Vec<_>>()
    );
    let samples: Vec<f64> = (1..=5).map(|k| 10f64.powi(k) + 729.5).collect();
    let check = verify_delta_decomposition(&f, &f, &samples, &budget)?;
    println!(
        "decomposition residual over {} samples: {:.3e}",
        check.samples.len(),
        check.max_residual
    );

    // The error term itself: its mean square grows like A * X^(3/2).
    let tong = tong_constant(1_000_000, &budget)?;
    println!("A (zeta route)  = {:.6}", tong.a_zeta);
    println!(
        "A (series route)= {:.6} (+ tail <= {:.4})",
        tong.a_series, tong.tail_bracket
    );
    let ev = DeltaEvaluator::with_cache(1_000_000, &budget)?;
    let norm = l2_norm_delta(1, 1e6, &ev)?;
    println!(
        "||Delta||_L2[1,1e6]^2 / (A * 1e9) = {:.4}",
        norm * norm / (tong.a_zeta * 1e9)
    );

    // And the lower-bound witness for the convolution growth.
    let w = omega_witness(f.period(), 1_000_000)?;
    println!(
        "tau({}) = {} with gcd({}, {}) = 1",
        w.n, w.tau, w.n, w.modulus
    );
    Ok(())
}
