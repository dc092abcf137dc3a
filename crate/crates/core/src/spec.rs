//! Periodic multiplicative functions described by finitely many exceptional
//! primes with eventually constant prime-power values.
//!
//! A [`MultiplicativeSpec`] stores, for each exceptional prime p, the values
//! f(p), f(p^2), ..., f(p^a); beyond the stabilization exponent a the value
//! repeats, and at every prime coprime to the period the function is 1. The
//! period is m = prod p^a. Whether such a function has bounded partial sums
//! comes down to one analytic condition: some Euler factor
//! sum_k f(q^k)/q^k must vanish at a prime q dividing m.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::Path;

use crate::arith::{is_prime, primes_up_to};
use crate::error::{Error, Result};
use crate::sieve::CompensatedSum;

/// Values of f at the powers of a single prime: `values[k-1] = f(p^k)` for
/// 1 <= k <= a, and f(p^k) = f(p^a) for every k >= a, where a = values.len().
/// f(p^0) = 1 is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalPrimeData {
    prime: u64,
    values: Vec<Complex64>,
}

impl LocalPrimeData {
    pub fn new(prime: u64, values: Vec<Complex64>) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::input(format!("{prime} is not prime")));
        }
        if values.is_empty() {
            return Err(Error::input(format!(
                "prime {prime}: at least one prime-power value is required"
            )));
        }
        for (k, v) in values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::input(format!(
                    "prime {prime}: value at exponent {} is not finite",
                    k + 1
                )));
            }
        }
        Ok(Self { prime, values })
    }

    /// Convenience constructor for real-valued data.
    pub fn real(prime: u64, values: &[f64]) -> Result<Self> {
        Self::new(
            prime,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// The exponent a past which f(p^k) stays constant.
    pub fn stabilization_exponent(&self) -> u32 {
        self.values.len() as u32
    }

    /// f(p^e); e = 0 gives 1, e >= a gives the stabilized value.
    pub fn value_at_exponent(&self, e: u32) -> Complex64 {
        if e == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            let idx = (e as usize).min(self.values.len());
            self.values[idx - 1]
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// Entry of an [`EulerFactorReport`]: the Euler factor at s = 1 for one prime
/// dividing the period, and whether it vanishes within tolerance.
#[derive(Debug, Clone, Copy)]
pub struct EulerFactorEntry {
    pub prime: u64,
    pub factor: Complex64,
    pub is_zero: bool,
}

/// Result of checking the bounded-partial-sums characterization. The shape of
/// the data makes the stabilization and coprime-value conditions hold by
/// construction; only the vanishing-Euler-factor condition needs evaluation.
#[derive(Debug, Clone)]
pub struct EulerFactorReport {
    pub entries: Vec<EulerFactorEntry>,
    pub condition_i_holds: bool,
    pub period: u64,
    pub tolerance: f64,
}

/// A multiplicative function determined by its exceptional primes. Primes are
/// kept sorted; the period m = prod p^a is validated to fit in u64 at
/// construction time.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeSpec {
    exceptional: Vec<LocalPrimeData>,
    period: u64,
}

#[derive(Serialize, Deserialize)]
struct SpecFileEntry {
    p: u64,
    values: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct SpecFile {
    exceptional: Vec<SpecFileEntry>,
}

impl MultiplicativeSpec {
    pub fn new(mut exceptional: Vec<LocalPrimeData>) -> Result<Self> {
        exceptional.sort_by_key(|d| d.prime);
        for pair in exceptional.windows(2) {
            if pair[0].prime == pair[1].prime {
                return Err(Error::input(format!(
                    "duplicate exceptional prime {}",
                    pair[0].prime
                )));
            }
        }
        let mut period = 1u64;
        for d in &exceptional {
            for _ in 0..d.stabilization_exponent() {
                period = period.checked_mul(d.prime).ok_or_else(|| {
                    Error::Range("period m = prod p^a does not fit in 64 bits".into())
                })?;
            }
        }
        Ok(Self {
            exceptional,
            period,
        })
    }

    /// The constant function 1 (no exceptional primes, period 1).
    pub fn one() -> Self {
        Self {
            exceptional: Vec::new(),
            period: 1,
        }
    }

    /// Named built-in functions. `parity` is (-1)^(n+1); `example1` has data
    /// 2, -15, 0 at powers of 3; `example2` has pi, -20-4*pi at powers of 5;
    /// `qperiodic:<q>` is the unique q-periodic function with f(q) = -(q-1);
    /// `one` is constant 1.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "one" => Ok(Self::one()),
            "parity" => Self::new(vec![LocalPrimeData::real(2, &[-1.0])?]),
            "example1" => Self::new(vec![LocalPrimeData::real(3, &[2.0, -15.0, 0.0])?]),
            "example2" => Self::new(vec![LocalPrimeData::real(5, &[PI, -20.0 - 4.0 * PI])?]),
            _ => {
                if let Some(qs) = name.strip_prefix("qperiodic:") {
                    let q: u64 = qs
                        .parse()
                        .map_err(|_| Error::input(format!("bad qperiodic prime: {qs:?}")))?;
                    if !is_prime(q) {
                        return Err(Error::input(format!("qperiodic:{q}: {q} is not prime")));
                    }
                    Self::new(vec![LocalPrimeData::real(q, &[-((q - 1) as f64)])?])
                } else {
                    Err(Error::input(format!(
                        "unknown preset {name:?} (expected one of: parity, example1, example2, one, qperiodic:<q>)"
                    )))
                }
            }
        }
    }

    /// Parse the JSON spec-file format:
    /// `{"exceptional":[{"p":3,"values":[[2,0],[-15,0],[0,0]]}]}`
    /// where `values[k-1]` is the (re, im) pair for f(p^k).
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpecFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let mut data = Vec::with_capacity(file.exceptional.len());
        for entry in file.exceptional {
            data.push(LocalPrimeData::new(
                entry.p,
                entry
                    .values
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect(),
            )?);
        }
        Self::new(data)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let file = SpecFile {
            exceptional: self
                .exceptional
                .iter()
                .map(|d| SpecFileEntry {
                    p: d.prime,
                    values: d.values.iter().map(|v| [v.re, v.im]).collect(),
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("spec serialization cannot fail")
    }

    pub fn exceptional(&self) -> &[LocalPrimeData] {
        &self.exceptional
    }

    /// The period m = prod p^a over the exceptional primes.
    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn local_data(&self, p: u64) -> Option<&LocalPrimeData> {
        self.exceptional
            .binary_search_by_key(&p, |d| d.prime)
            .ok()
            .map(|i| &self.exceptional[i])
    }

    /// f(n) as the product of local values at the exceptional primes dividing
    /// n; every other prime power contributes 1.
    ///
    /// Panics if n = 0.
    pub fn evaluate(&self, n: u64) -> Complex64 {
        assert!(n >= 1, "evaluate requires n >= 1");
        let mut acc = Complex64::new(1.0, 0.0);
        for d in &self.exceptional {
            if n.is_multiple_of(d.prime) {
                let mut m = n / d.prime;
                let mut e = 1u32;
                while m.is_multiple_of(d.prime) {
                    m /= d.prime;
                    e += 1;
                }
                acc *= d.value_at_exponent(e);
            }
        }
        acc
    }

    /// f(p) for a prime p (the k = 1 local value, or 1 off the period).
    pub fn prime_value(&self, p: u64) -> Complex64 {
        self.local_data(p)
            .map(|d| d.value_at_exponent(1))
            .unwrap_or_else(|| Complex64::new(1.0, 0.0))
    }

    /// The Euler factor sum_{k>=0} f(q^k) q^{-k} at s = 1, in closed form:
    /// the geometric tail past the stabilization exponent is summed exactly.
    /// Non-exceptional primes give q/(q-1).
    pub fn euler_factor(&self, q: u64) -> Result<Complex64> {
        if !is_prime(q) {
            return Err(Error::input(format!("euler_factor: {q} is not prime")));
        }
        let qf = q as f64;
        match self.local_data(q) {
            None => Ok(Complex64::new(qf / (qf - 1.0), 0.0)),
            Some(d) => {
                let a = d.stabilization_exponent();
                let mut sum = Complex64::new(0.0, 0.0);
                let mut qpow = 1.0;
                for k in 0..a {
                    sum += d.value_at_exponent(k) / qpow;
                    qpow *= qf;
                }
                // remaining tail: f(q^a) * q^{1-a} / (q-1), with qpow = q^a
                sum += d.value_at_exponent(a) * (qf / (qpow * (qf - 1.0)));
                Ok(sum)
            }
        }
    }

    /// Evaluate every Euler factor at the primes dividing the period and
    /// report whether some factor vanishes (|factor| <= tolerance). The other
    /// two structural conditions hold by construction of the type.
    pub fn check_conditions(&self, tolerance: f64) -> EulerFactorReport {
        debug_assert!(tolerance > 0.0);
        let entries: Vec<EulerFactorEntry> = self
            .exceptional
            .iter()
            .map(|d| {
                let factor = self
                    .euler_factor(d.prime)
                    .expect("exceptional primes are prime by construction");
                EulerFactorEntry {
                    prime: d.prime,
                    factor,
                    is_zero: factor.norm() <= tolerance,
                }
            })
            .collect();
        let condition_i_holds = entries.iter().any(|e| e.is_zero);
        EulerFactorReport {
            entries,
            condition_i_holds,
            period: self.period,
            tolerance,
        }
    }

    /// Sum of f over one period via the closed form
    /// phi(m) * prod_{p|m} sum_k f(p^k)/p^k.
    pub fn period_sum_formula(&self) -> Complex64 {
        let mut phi = 1.0f64;
        let mut prod = Complex64::new(1.0, 0.0);
        for d in &self.exceptional {
            let p = d.prime as f64;
            phi *= p.powi(d.stabilization_exponent() as i32 - 1) * (p - 1.0);
            prod *= self
                .euler_factor(d.prime)
                .expect("exceptional primes are prime by construction");
        }
        prod * phi
    }

    /// Pretentious distance D(f, g; x) = sqrt(sum_{p<=x} (1 - Re f(p) conj(g(p)))/p).
    /// Summands can go negative when |f(p)| > 1; if the total does, the raw
    /// sum is reported through a domain error instead of being interpreted.
    pub fn pretentious_distance(&self, target: &MultiplicativeSpec, x: f64) -> Result<f64> {
        if x.is_nan() || x < 2.0 {
            return Err(Error::input(format!(
                "pretentious_distance needs x >= 2, got {x}"
            )));
        }
        if x > (1u64 << 31) as f64 {
            return Err(Error::input(
                "pretentious_distance: x too large for prime enumeration",
            ));
        }
        let mut sum = CompensatedSum::default();
        for p in primes_up_to(x.floor() as u64) {
            let fp = self.prime_value(p);
            let gp = target.prime_value(p);
            sum.add((1.0 - (fp * gp.conj()).re) / p as f64);
        }
        let total = sum.value();
        if total < 0.0 {
            return Err(Error::Domain {
                message: "squared pretentious distance is negative (values outside the unit disk)"
                    .into(),
                raw: total,
            });
        }
        Ok(total.sqrt())
    }
}
