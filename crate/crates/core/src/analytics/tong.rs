//! The mean-square constant A of the divisor error term, two ways: a
//! truncated sum of tau(n)^2 / n^(3/2) and the closed form
//! zeta(3/2)^4 / (6 pi^2 zeta(3)), which comes from
//! sum tau(n)^2 n^(-s) = zeta(s)^4 / zeta(2s) at s = 3/2.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sieve::{tau_table, CompensatedSum, MemoryBudget};

use super::zeta::zeta;

/// The two estimates of A plus a rigorous-in-spirit truncation bracket.
/// The series converges like (log N)^2 / sqrt(N), so `a_zeta` is the
/// reference value and `a_series` the cross-check.
#[derive(Debug, Clone, Copy)]
pub struct TongEstimate {
    /// Truncated sum of tau(n)^2/n^(3/2) up to n_max, scaled by 1/(6 pi^2).
    pub a_series: f64,
    /// zeta(3/2)^4 / (6 pi^2 zeta(3)).
    pub a_zeta: f64,
    /// Upper bound for the missing tail of `a_series`, on the same scale:
    /// 8 (log n_max + 2)^2 / sqrt(n_max), divided by 6 pi^2. The true gap
    /// a_zeta - a_series lies in [0, tail_bracket].
    pub tail_bracket: f64,
    pub n_max: u64,
}

impl TongEstimate {
    pub fn relative_gap(&self) -> f64 {
        (self.a_series - self.a_zeta).abs() / self.a_zeta
    }
}

pub fn tong_constant(n_max: u64, budget: &MemoryBudget) -> Result<TongEstimate> {
    if n_max < 1000 {
        return Err(Error::input(format!(
            "tong_constant requires n_max >= 1000, got {n_max}"
        )));
    }
    let tau = tau_table(n_max, budget)?;
    let mut sum = CompensatedSum::default();
    for (n, &t) in tau.iter().enumerate().skip(1) {
        let nf = n as f64;
        let t = t as f64;
        sum.add(t * t / (nf * nf.sqrt()));
    }
    let six_pi_sq = 6.0 * PI * PI;
    let a_series = sum.value() / six_pi_sq;
    let a_zeta = zeta(1.5)?.powi(4) / (six_pi_sq * zeta(3.0)?);
    let nf = n_max as f64;
    let tail_bracket = 8.0 * (nf.ln() + 2.0).powi(2) / nf.sqrt() / six_pi_sq;
    Ok(TongEstimate {
        a_series,
        a_zeta,
        tail_bracket,
        n_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::zeta::{ZETA_THREE, ZETA_THREE_HALVES};

    #[test]
    fn zeta_route_value() {
        let t = tong_constant(1000, &MemoryBudget::default()).unwrap();
        assert!((0.64..=0.67).contains(&t.a_zeta), "a_zeta = {}", t.a_zeta);
        // hard-coded constants agree with the Euler-Maclaurin evaluation
        let pinned = ZETA_THREE_HALVES.powi(4) / (6.0 * PI * PI * ZETA_THREE);
        assert!((t.a_zeta - pinned).abs() < 1e-12);
    }

    #[test]
    fn series_is_monotone_and_bracketed() {
        let b = MemoryBudget::default();
        let t3 = tong_constant(1_000, &b).unwrap();
        let t5 = tong_constant(100_000, &b).unwrap();
        assert!(t5.a_series > t3.a_series, "positive terms only");
        assert!(t3.a_series > 0.0 && t3.a_zeta > 0.0);
        for t in [t3, t5] {
            let gap = t.a_zeta - t.a_series;
            assert!(gap >= 0.0, "series must underestimate, gap = {gap}");
            assert!(
                gap <= t.tail_bracket,
                "gap {gap} > bracket {}",
                t.tail_bracket
            );
        }
    }

    #[test]
    fn n_max_floor_is_enforced() {
        assert!(tong_constant(999, &MemoryBudget::default()).is_err());
    }
}
