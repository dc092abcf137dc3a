//! Bulk computation over 1..N: value tables for multiplicative functions,
//! prefix sums, Dirichlet convolution, the divisor-count sieve, and the
//! divisor summatory function D(x) with its error term Delta(x).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spec::MultiplicativeSpec;

/// Euler-Mascheroni constant, correctly rounded to f64.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub(crate) const TWO_GAMMA_MINUS_ONE: f64 = 2.0 * EULER_GAMMA - 1.0;

/// Neumaier compensated accumulator. Used everywhere a long float sum must be
/// reproducible under a fixed traversal order.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Fold another accumulator in; combining per-block partials in a fixed
    /// block order keeps parallel reductions deterministic.
    pub fn merge(&mut self, other: CompensatedSum) {
        self.add(other.sum);
        self.compensation += other.compensation;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Byte budget for the table-building operations. Requests above the budget
/// fail with a resource error rather than attempting the allocation.
#[derive(Debug, Clone, Copy)]
pub struct MemoryBudget {
    bytes: u64,
}

impl MemoryBudget {
    pub fn from_gib(gib: f64) -> Self {
        let bytes = (gib.max(0.0) * (1u64 << 30) as f64) as u64;
        Self { bytes }
    }

    pub fn from_bytes(bytes: u64) -> Self {
        Self { bytes }
    }

    pub fn bytes(&self) -> u64 {
        self.bytes
    }

    pub fn check(&self, required: u64) -> Result<()> {
        if required > self.bytes {
            Err(Error::Resource {
                required,
                budget: self.bytes,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for MemoryBudget {
    /// 2 GiB.
    fn default() -> Self {
        Self::from_gib(2.0)
    }
}

/// Values of a function on 1..=N, 16 bytes per entry. Index 0 is an unused
/// zero slot so that `get(n)` is 1-based like the mathematics.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    values: Vec<Complex64>,
}

impl ValueTable {
    /// Table of f(n) for n = 1..=n_max. Every entry starts at 1 and is then
    /// multiplied, for each exceptional prime p | n, by the local value at
    /// the exact exponent of p in n; primes off the period contribute 1, so
    /// no further factorization is needed. Chunks of the range are processed
    /// independently, which parallelizes without changing any result.
    pub fn sieve(spec: &MultiplicativeSpec, n_max: u64, budget: &MemoryBudget) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::input("sieve requires n_max >= 1"));
        }
        budget.check(16 * (n_max + 1))?;
        let n = usize::try_from(n_max).map_err(|_| Error::Range("n_max exceeds usize".into()))?;
        let mut values = vec![Complex64::new(1.0, 0.0); n + 1];
        values[0] = Complex64::new(0.0, 0.0);

        const CHUNK: usize = 1 << 16;
        values[1..]
            .par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(chunk_idx, chunk)| {
                let start = chunk_idx * CHUNK + 1; // value index of chunk[0]
                for data in spec.exceptional() {
                    let p = data.prime() as usize;
                    let first = start.div_ceil(p) * p;
                    let mut m = first;
                    while m < start + chunk.len() {
                        let mut e = 1u32;
                        let mut rest = m / p;
                        while rest.is_multiple_of(p) {
                            rest /= p;
                            e += 1;
                        }
                        chunk[m - start] *= data.value_at_exponent(e);
                        m += p;
                    }
                }
            });
        Ok(Self { values })
    }

    /// Wrap explicit values for n = 1..=len; used by tests and conversions.
    pub fn from_values(values_1_based: Vec<Complex64>) -> Self {
        let mut values = Vec::with_capacity(values_1_based.len() + 1);
        values.push(Complex64::new(0.0, 0.0));
        values.extend(values_1_based);
        Self { values }
    }

    pub fn n_max(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    /// f(n); panics when n = 0 or n > n_max.
    pub fn get(&self, n: u64) -> Complex64 {
        assert!(n >= 1, "tables are 1-based");
        self.values[n as usize]
    }

    /// Raw storage including the unused 0 slot.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Running sums: `output[x] = sum_{n<=x} input[n]`, accumulated left to
    /// right with compensation so the result is bit-stable.
    pub fn prefix_sums(&self) -> ValueTable {
        let mut re = CompensatedSum::default();
        let mut im = CompensatedSum::default();
        let mut out = Vec::with_capacity(self.values.len());
        out.push(Complex64::new(0.0, 0.0));
        for v in &self.values[1..] {
            re.add(v.re);
            im.add(v.im);
            out.push(Complex64::new(re.value(), im.value()));
        }
        ValueTable { values: out }
    }
}

/// (a * b)(n) = sum_{d|n} a(d) b(n/d) for n up to the common table length,
/// by the divisor-multiple double loop.
pub fn dirichlet_convolve(
    a: &ValueTable,
    b: &ValueTable,
    budget: &MemoryBudget,
) -> Result<ValueTable> {
    if a.n_max() != b.n_max() {
        return Err(Error::input(format!(
            "dirichlet_convolve: table lengths differ ({} vs {})",
            a.n_max(),
            b.n_max()
        )));
    }
    let n = a.values.len() - 1;
    budget.check(16 * (n as u64 + 1))?;
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for d in 1..=n {
        let ad = a.values[d];
        let mut m = d;
        let mut q = 1;
        while m <= n {
            out[m] += ad * b.values[q];
            m += d;
            q += 1;
        }
    }
    Ok(ValueTable { values: out })
}

/// Divisor counts tau(n) for n = 1..=n_max via a linear smallest-prime-factor
/// sieve: tau(i*p) is updated from tau(i) and the exponent of the least prime.
pub fn tau_table(n_max: u64, budget: &MemoryBudget) -> Result<Vec<u32>> {
    if n_max < 1 {
        return Err(Error::input("tau_table requires n_max >= 1"));
    }
    if n_max >= u32::MAX as u64 {
        return Err(Error::Range("tau_table limited to n_max < 2^32".into()));
    }
    budget.check((n_max + 1) * 9)?;
    let n = n_max as usize;
    let mut tau = vec![0u32; n + 1];
    let mut least = vec![0u32; n + 1];
    let mut lp_exp = vec![0u8; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    tau[1] = 1;
    for i in 2..=n {
        if least[i] == 0 {
            least[i] = i as u32;
            lp_exp[i] = 1;
            tau[i] = 2;
            primes.push(i);
        }
        for &p in &primes {
            if p > least[i] as usize || i * p > n {
                break;
            }
            let m = i * p;
            least[m] = p as u32;
            if p == least[i] as usize {
                let e = lp_exp[i] as u32;
                lp_exp[m] = lp_exp[i] + 1;
                tau[m] = tau[i] / (e + 1) * (e + 2);
            } else {
                lp_exp[m] = 1;
                tau[m] = tau[i] * 2;
            }
        }
    }
    Ok(tau)
}

/// Exact divisor summatory function D(x) = sum_{n<=floor(x)} tau(n) by the
/// hyperbola formula 2*sum_{n<=sqrt(X)} floor(X/n) - floor(sqrt(X))^2.
pub fn tau_summatory(x: f64) -> Result<u64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::input(format!(
            "tau_summatory requires x >= 0, got {x}"
        )));
    }
    if x >= u64::MAX as f64 {
        return Err(Error::Range(
            "tau_summatory: x does not fit in 64 bits".into(),
        ));
    }
    let xx = x.floor() as u64;
    if xx == 0 {
        return Ok(0);
    }
    let s = xx.isqrt();
    let mut acc: u128 = 0;
    for n in 1..=s {
        acc += (xx / n) as u128;
    }
    let total = 2 * acc - (s as u128) * (s as u128);
    u64::try_from(total).map_err(|_| Error::Range("divisor summatory overflows u64".into()))
}

/// Delta(x) = D(x) - x log x - (2 gamma - 1) x for x >= 1.
pub fn delta(x: f64) -> Result<f64> {
    DeltaEvaluator::new().delta(x)
}

/// D(x) and Delta(x) evaluation with an optional divisor-sum prefix cache.
/// Piecewise integration touches D at millions of consecutive integers; the
/// cache turns each lookup into an array read. Outside the cached range the
/// hyperbola formula is used, so results are identical either way.
#[derive(Debug, Clone, Default)]
pub struct DeltaEvaluator {
    d_prefix: Vec<u64>,
}

impl DeltaEvaluator {
    /// No cache; every evaluation runs the hyperbola formula.
    pub fn new() -> Self {
        Self {
            d_prefix: Vec::new(),
        }
    }

    /// Cache D(k) for all k <= limit (8 bytes per entry plus the transient
    /// tau sieve).
    pub fn with_cache(limit: u64, budget: &MemoryBudget) -> Result<Self> {
        budget.check((limit + 1) * (8 + 9))?;
        let tau = tau_table(limit, budget)?;
        let mut d_prefix = Vec::with_capacity(tau.len());
        d_prefix.push(0u64);
        let mut acc = 0u64;
        for &t in &tau[1..] {
            acc += t as u64;
            d_prefix.push(acc);
        }
        Ok(Self { d_prefix })
    }

    pub fn cache_limit(&self) -> u64 {
        self.d_prefix.len().saturating_sub(1) as u64
    }

    /// D at an integer argument.
    pub fn d_int(&self, k: u64) -> Result<u64> {
        if (k as usize) < self.d_prefix.len() {
            Ok(self.d_prefix[k as usize])
        } else {
            tau_summatory(k as f64)
        }
    }

    /// D(x) = D(floor(x)).
    pub fn divisor_summatory(&self, x: f64) -> Result<u64> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::input(format!(
                "divisor summatory requires x >= 0, got {x}"
            )));
        }
        if x >= u64::MAX as f64 {
            return Err(Error::Range(
                "divisor summatory: x does not fit in 64 bits".into(),
            ));
        }
        self.d_int(x.floor() as u64)
    }

    /// Delta(x) = D(x) - x log x - (2 gamma - 1) x; requires x >= 1.
    pub fn delta(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 1.0 {
            return Err(Error::input(format!("delta requires x >= 1, got {x}")));
        }
        let d = self.divisor_summatory(x)? as f64;
        Ok(d - x * x.ln() - TWO_GAMMA_MINUS_ONE * x)
    }
}
