//! Divisor-count maximization: find n <= x coprime to m with tau(n) as large
//! as possible. Some maximizer always has non-increasing exponents over the
//! smallest usable primes (moving a larger exponent to a smaller prime never
//! increases n and keeps tau), so enumerating those patterns is exhaustive.

use crate::arith::{gcd, primes_up_to};
use crate::error::{Error, Result};

/// A large-tau witness: n <= x, gcd(n, m) = 1, with tau(n) maximal over the
/// searched pattern space (provably maximal; see module docs). `ratio`
/// compares tau(n) against exp(log 2 * log x / log log x), the growth scale
/// of the maximal divisor count; it is NaN for x < 30 where log log x is too
/// close to zero to be meaningful.
#[derive(Debug, Clone, Copy)]
pub struct OmegaWitness {
    pub x: u64,
    pub modulus: u64,
    pub n: u64,
    pub tau: u64,
    pub omega: u32,
    pub ratio: f64,
}

pub fn omega_witness(m: u64, x: u64) -> Result<OmegaWitness> {
    if m < 1 {
        return Err(Error::input("omega_witness requires m >= 1"));
    }
    if x < 1 {
        return Err(Error::input("omega_witness requires x >= 1"));
    }

    // smallest primes coprime to m whose running product exceeds x
    let mut usable: Vec<u64> = Vec::new();
    let mut product: u128 = 1;
    for p in primes_up_to(1000) {
        if m.is_multiple_of(p) {
            continue;
        }
        usable.push(p);
        product *= p as u128;
        if product > x as u128 {
            break;
        }
    }

    let mut best = (1u64, 1u64); // (tau, n); n = 1 always qualifies
    search(&usable, 0, 63, x, 1, 1, &mut best);

    let (tau, n) = best;
    let mut omega = 0u32;
    let mut rest = n;
    for &p in &usable {
        if rest % p == 0 {
            omega += 1;
            while rest % p == 0 {
                rest /= p;
            }
        }
    }
    debug_assert_eq!(rest, 1);
    debug_assert_eq!(gcd(n, m), 1);

    let xf = x as f64;
    let ratio = if x >= 30 {
        tau as f64 / (std::f64::consts::LN_2 * xf.ln() / xf.ln().ln()).exp()
    } else {
        f64::NAN
    };
    Ok(OmegaWitness {
        x,
        modulus: m,
        n,
        tau,
        omega,
        ratio,
    })
}

/// Depth-first walk over non-increasing exponent vectors. `remaining` is
/// floor(x / n_so_far), the largest factor that still fits.
fn search(
    primes: &[u64],
    idx: usize,
    max_exp: u32,
    remaining: u64,
    n: u64,
    tau: u64,
    best: &mut (u64, u64),
) {
    if tau > best.0 || (tau == best.0 && n < best.1) {
        *best = (tau, n);
    }
    if idx == primes.len() {
        return;
    }
    let p = primes[idx];
    let mut pk = 1u64;
    for e in 1..=max_exp {
        if pk > remaining / p {
            break;
        }
        pk *= p;
        search(
            primes,
            idx + 1,
            e,
            remaining / pk,
            n * pk,
            tau * (e as u64 + 1),
            best,
        );
    }
}
