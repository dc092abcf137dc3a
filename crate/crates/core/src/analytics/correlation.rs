//! Exact correlation sums sum_{n<=x} tau(a n) tau(b n).

use crate::error::{Error, Result};
use crate::sieve::{tau_table, MemoryBudget};

pub fn tau_correlation(a: u64, b: u64, x: f64, budget: &MemoryBudget) -> Result<u64> {
    if a < 1 || b < 1 {
        return Err(Error::input("tau_correlation requires a, b >= 1"));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::input(format!(
            "tau_correlation requires x >= 0, got {x}"
        )));
    }
    let limit_x = x.floor() as u64;
    if limit_x == 0 {
        return Ok(0);
    }
    let table_len = a
        .max(b)
        .checked_mul(limit_x)
        .ok_or_else(|| Error::Range("a*x does not fit in 64 bits".into()))?;
    let tau = tau_table(table_len, budget)?;
    let mut acc: u128 = 0;
    for n in 1..=limit_x {
        acc += tau[(a * n) as usize] as u128 * tau[(b * n) as usize] as u128;
    }
    u64::try_from(acc).map_err(|_| Error::Range("correlation sum overflows u64".into()))
}
