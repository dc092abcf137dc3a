//! Exact integration of products Delta(x/n) Delta(x/m) over [1, X].
//!
//! Between consecutive multiples of n and m the integrand is
//! (c1 - u1 log u1 - b u1)(c2 - u2 log u2 - b u2) with u_i = x/n_i and
//! constant c_i, so every piece has a closed-form antiderivative built from
//! x^j (log x)^k with j, k <= 2. Evaluating those antiderivatives at large
//! endpoints and subtracting would cancel catastrophically; instead every
//! piece is integrated in local coordinates anchored at its left endpoint,
//! which keeps all intermediate terms on the scale of the piece itself.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sieve::{CompensatedSum, DeltaEvaluator, TWO_GAMMA_MINUS_ONE};

/// The three primitive integrals over [0, omega] with P = 1 + omega:
///   K_a = int (1+t) log(1+t) dt
///   K_b = int t (1+t) log(1+t) dt
///   K_c = int (1+t)^2 log^2(1+t) dt
/// Closed forms are used for omega > 1/32; below that the alternating series
/// avoids the 1/omega cancellation of the closed forms.
fn k_abc(omega: f64) -> (f64, f64, f64) {
    debug_assert!(omega >= 0.0);
    if omega > 1.0 / 32.0 {
        let p = 1.0 + omega;
        let l = omega.ln_1p();
        let p2 = p * p;
        let p3 = p2 * p;
        let ka = p2 * l / 2.0 - omega * (2.0 + omega) / 4.0;
        let kb = p3 * l / 3.0 - p2 * l / 2.0 - (p3 - 1.0) / 9.0 + (p2 - 1.0) / 4.0;
        let kc = p3 * l * l / 3.0 - 2.0 * p3 * l / 9.0 + 2.0 * (p3 - 1.0) / 27.0;
        return (ka, kb, kc);
    }
    // K_a = w^2/2 + sum_{j>=2} (-1)^j w^(j+1) / (j (j-1) (j+1))
    let mut ka = omega * omega / 2.0;
    let mut pw = omega * omega * omega;
    let mut sign = 1.0;
    let mut j = 2u32;
    while j < 64 {
        let term = sign * pw / ((j * (j - 1) * (j + 1)) as f64);
        ka += term;
        if term.abs() < f64::EPSILON * ka.abs() {
            break;
        }
        pw *= omega;
        sign = -sign;
        j += 1;
    }
    // K_b = w^3/3 + sum_{j>=2} (-1)^j w^(j+2) / (j (j-1) (j+2))
    let mut kb = omega * omega * omega / 3.0;
    let mut pw = omega * omega * omega * omega;
    let mut sign = 1.0;
    let mut j = 2u32;
    while j < 64 {
        let term = sign * pw / ((j * (j - 1) * (j + 2)) as f64);
        kb += term;
        if term.abs() < f64::EPSILON * kb.abs() {
            break;
        }
        pw *= omega;
        sign = -sign;
        j += 1;
    }
    // log^2(1+t) = sum_{m>=2} (-1)^m (2 H_{m-1} / m) t^m, integrated against
    // (1 + 2t + t^2)
    let mut kc = 0.0f64;
    let mut harmonic = 0.0f64;
    let mut pw = omega * omega; // omega^m
    let mut sign = 1.0;
    let mut m = 2u32;
    while m < 64 {
        harmonic += 1.0 / (m as f64 - 1.0);
        let c = sign * 2.0 * harmonic / m as f64;
        let om1 = pw * omega;
        let term = c
            * (om1 / (m as f64 + 1.0)
                + 2.0 * om1 * omega / (m as f64 + 2.0)
                + om1 * omega * omega / (m as f64 + 3.0));
        kc += term;
        if term.abs() < f64::EPSILON * kc.abs() && m > 3 {
            break;
        }
        pw *= omega;
        sign = -sign;
        m += 1;
    }
    (ka, kb, kc)
}

/// Exact integral over [x0, x0 + w] of
/// (c1 - u1 log u1 - b u1)(c2 - u2 log u2 - b u2), u_i = x/n_i,
/// valid while floor(x/n_i) stays constant on the piece.
pub(crate) fn piece_product_integral(x0: f64, w: f64, n1: f64, n2: f64, c1: f64, c2: f64) -> f64 {
    let b = TWO_GAMMA_MINUS_ONE;
    let u1 = x0 / n1;
    let u2 = x0 / n2;
    let d1 = c1 - u1 * u1.ln() - b * u1;
    let d2 = c2 - u2 * u2.ln() - b * u2;
    let l1 = u1.ln() + b;
    let l2 = u2.ln() + b;
    let omega = w / x0;
    let (ka, kb, kc) = k_abc(omega);
    let x0_2 = x0 * x0;
    let x0_3 = x0_2 * x0;
    let q1 = (l1 * w * w / 2.0 + x0_2 * ka) / n1;
    let q2 = (l2 * w * w / 2.0 + x0_2 * ka) / n2;
    let p12 = (l1 * l2 * w * w * w / 3.0 + (l1 + l2) * x0_3 * kb + x0_3 * kc) / (n1 * n2);
    d1 * d2 * w - d1 * q2 - d2 * q1 + p12
}

/// floor(x / n) for nonnegative x, exact when x is an integer-valued f64.
fn floor_div(x: f64, n: u64) -> u64 {
    if x <= 0.0 {
        return 0;
    }
    if x.fract() == 0.0 {
        (x as u64) / n
    } else {
        (x / n as f64).floor() as u64
    }
}

/// int_1^X Delta(x/n1) Delta(x/n2) dx by exact piecewise integration with
/// breakpoints at every multiple of n1 and of n2. Pieces are integrated in
/// blocks of fixed size; block partial sums are compensated and merged in
/// block order, so the result does not depend on the thread count.
pub fn dilated_delta_product_integral(
    n1: u64,
    n2: u64,
    x_end: f64,
    evaluator: &DeltaEvaluator,
) -> Result<f64> {
    if n1 < 1 || n2 < 1 {
        return Err(Error::input("moduli must be >= 1"));
    }
    if !x_end.is_finite() || x_end <= n1.max(n2) as f64 {
        return Err(Error::input(format!(
            "integration endpoint X = {x_end} must exceed max(n1, n2) = {}",
            n1.max(n2)
        )));
    }

    // merged breakpoints: 1, multiples of n1 and n2 inside (1, X), then X
    let mut bounds: Vec<f64> = Vec::new();
    bounds.push(1.0);
    let mut k1 = n1; // next multiple of n1
    let mut k2 = n2;
    loop {
        let next = k1.min(k2);
        if (next as f64) >= x_end {
            break;
        }
        if next as f64 > 1.0 {
            bounds.push(next as f64);
        }
        if k1 == next {
            k1 += n1;
        }
        if k2 == next {
            k2 += n2;
        }
    }
    bounds.push(x_end);

    const BLOCK: usize = 1 << 15;
    let pieces = bounds.len() - 1;
    let block_sums: Result<Vec<CompensatedSum>> = (0..pieces.div_ceil(BLOCK))
        .into_par_iter()
        .map(|blk| {
            let lo = blk * BLOCK;
            let hi = (lo + BLOCK).min(pieces);
            let mut acc = CompensatedSum::default();
            for i in lo..hi {
                let a = bounds[i];
                let b = bounds[i + 1];
                if b <= a {
                    continue;
                }
                let c1 = evaluator.d_int(floor_div(a, n1))? as f64;
                let c2 = evaluator.d_int(floor_div(a, n2))? as f64;
                acc.add(piece_product_integral(
                    a,
                    b - a,
                    n1 as f64,
                    n2 as f64,
                    c1,
                    c2,
                ));
            }
            Ok(acc)
        })
        .collect();

    let mut total = CompensatedSum::default();
    for s in block_sums? {
        total.merge(s);
    }
    Ok(total.value())
}

/// L2[1, X] norm of Delta(x/n): the square root of the dilated product
/// integral with n1 = n2 = n.
pub fn l2_norm_delta(n: u64, x_end: f64, evaluator: &DeltaEvaluator) -> Result<f64> {
    if n < 1 {
        return Err(Error::input("l2_norm_delta requires n >= 1"));
    }
    if x_end.is_nan() || x_end <= n as f64 {
        return Err(Error::input(format!(
            "l2_norm_delta requires X > n, got X = {x_end}, n = {n}"
        )));
    }
    let sq = dilated_delta_product_integral(n, n, x_end, evaluator)?;
    Ok(sq.max(0.0).sqrt())
}
