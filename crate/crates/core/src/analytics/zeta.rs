//! Riemann zeta on the real axis s > 1 by Euler-Maclaurin summation.

use crate::error::{Error, Result};

/// zeta(3/2), correctly rounded; kept as a mutual check against the
/// Euler-Maclaurin evaluation.
#[allow(clippy::excessive_precision)]
pub const ZETA_THREE_HALVES: f64 = 2.612_375_348_685_488_3;

/// zeta(3) (Apery's constant), same role.
pub const ZETA_THREE: f64 = 1.202_056_903_159_594_3;

/// Bernoulli numbers B_2, B_4, ..., B_16.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// zeta(s) for real s > 1: direct sum to N = 24 plus the integral and
/// Bernoulli corrections, eight terms. Good to full double precision for
/// s >= 1.1 or so.
pub fn zeta(s: f64) -> Result<f64> {
    if s.is_nan() || s <= 1.0 {
        return Err(Error::input(format!("zeta requires s > 1, got {s}")));
    }
    const N: u32 = 24;
    let nf = N as f64;
    let mut sum = 0.0f64;
    for n in 1..N {
        sum += (n as f64).powf(-s);
    }
    sum += nf.powf(1.0 - s) / (s - 1.0);
    sum += 0.5 * nf.powf(-s);

    // correction terms B_2k/(2k)! * s(s+1)...(s+2k-2) * N^(-s-2k+1)
    let mut rising = s; // product of (s + j), j = 0..2k-2
    let mut factorial = 1.0f64; // (2k)!
    for (k, b) in BERNOULLI.iter().enumerate() {
        let two_k = 2 * (k as u32 + 1);
        factorial *= (two_k - 1) as f64 * two_k as f64;
        if k > 0 {
            rising *= (s + (two_k - 3) as f64) * (s + (two_k - 2) as f64);
        }
        sum += b / factorial * rising * nf.powf(-(s + two_k as f64 - 1.0));
    }
    Ok(sum)
}
