//! Euler-product limit probabilities and their constructive realization:
//! exact coprimality counts, the prime log-series with certified tails,
//! the greedy subset-sum construction, and sieve-backed prime searches.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::One;
use thiserror::Error;

use crate::field::factorize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DensityError {
    #[error("the target interval is empty or nonpositive")]
    IntervalEmpty,
    #[error("the interval's upper end exceeds the certified available sum")]
    IntervalTooHigh,
    #[error("required and excluded prime sets overlap")]
    NotDisjoint,
    #[error("the interval leaves the attainable range of limit probabilities")]
    IntervalOutsideI,
    #[error("no witness prime within the search bound")]
    NotFound,
}

/// All primes up to and including `bound`, by Eratosthenes.
pub fn sieve_primes(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let size = bound as usize + 1;
    let mut composite = vec![false; size];
    let mut primes = Vec::new();
    for q in 2..size {
        if !composite[q] {
            primes.push(q as u64);
            let mut m = q * q;
            while m < size {
                composite[m] = true;
                m += q;
            }
        }
    }
    primes
}

fn first_primes(count: usize) -> Vec<u64> {
    let mut bound = if count < 6 {
        15u64
    } else {
        let c = count as f64;
        (c * (c.ln() + c.ln().ln()) * 1.2) as u64
    };
    loop {
        let primes = sieve_primes(bound);
        if primes.len() >= count {
            return primes[..count].to_vec();
        }
        bound *= 2;
    }
}

/// The series x_j = -ln(1 - 1/p_j^2) over the first primes, with prefix
/// sums. Indexing is 1-based to match the usual prime numbering. Truncated
/// sums lower-bound the infinite ones; adding 2/p_len gives a certified
/// upper bound, since the tail past the last kept prime is below
/// sum_{m > p_len} 2/m^2 < 2/p_len.
#[derive(Debug, Clone)]
pub struct XSequence {
    primes: Vec<u64>,
    x: Vec<f64>,
    prefix: Vec<f64>,
}

impl XSequence {
    pub fn with_terms(count: usize) -> Self {
        let primes = first_primes(count);
        let x: Vec<f64> = primes
            .iter()
            .map(|&p| -(-1.0 / (p as f64 * p as f64)).ln_1p())
            .collect();
        let mut prefix = Vec::with_capacity(count + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for &value in &x {
            acc += value;
            prefix.push(acc);
        }
        Self { primes, x, prefix }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn prime(&self, j: usize) -> u64 {
        self.primes[j - 1]
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x[j - 1]
    }

    /// Sum of the first j terms.
    pub fn prefix(&self, j: usize) -> f64 {
        self.prefix[j]
    }

    /// Truncated tail sum over i >= j; a lower bound for the full tail.
    pub fn tail_from(&self, j: usize) -> f64 {
        self.prefix[self.len()] - self.prefix[j - 1]
    }

    /// Certified upper bound for the full tail over i >= j.
    pub fn tail_upper_from(&self, j: usize) -> f64 {
        self.tail_from(j) + 2.0 / *self.primes.last().expect("nonempty sequence") as f64
    }
}

/// Shared 110000-term instance; plenty for every certified check here.
pub fn shared() -> &'static XSequence {
    static SEQ: OnceLock<XSequence> = OnceLock::new();
    SEQ.get_or_init(|| XSequence::with_terms(110_000))
}

/// x_j to double precision, from the shared sequence.
pub fn x_value(j: usize) -> f64 {
    assert!(j >= 1 && j <= shared().len());
    shared().x(j)
}

/// Exact product of (1 - 1/q^2) over the distinct primes q dividing n.
/// This is the probability that two independent uniform residues mod n
/// generate Z_n together, i.e. that gcd(a, b, n) = 1.
pub fn euler_product(n: u64) -> Ratio<BigInt> {
    assert!(n >= 1);
    let mut acc = Ratio::one();
    for (q, _) in factorize(n) {
        let q2 = BigInt::from(q) * BigInt::from(q);
        acc *= Ratio::new(&q2 - BigInt::one(), q2);
    }
    acc
}

/// #{(a, b) in Z_n^2 : gcd(a, b, n) = 1}, exactly n^2 * euler_product(n),
/// computed by inclusion-exclusion over the distinct prime divisors.
pub fn coprime_pair_count(n: u64) -> u64 {
    assert!(n >= 1);
    let primes: Vec<u64> = factorize(n).into_iter().map(|(q, _)| q).collect();
    let mut total: i128 = 0;
    for mask in 0u32..(1 << primes.len()) {
        let mut divisor = 1u64;
        for (i, &q) in primes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                divisor *= q;
            }
        }
        let cofactor = (n / divisor) as i128;
        let term = cofactor * cofactor;
        if mask.count_ones() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total as u64
}

/// Decides whether x_k is strictly below the tail sum over j > k. A true
/// verdict uses only the truncated tail (which understates the right
/// side), so it is rigorous; a false verdict is reported only when x_k
/// clears the certified tail upper bound as well.
pub fn tail_condition(k: usize) -> bool {
    assert!(k >= 1);
    let goal = (k + 10_000).max(100_000);
    let local;
    let seq = if goal <= shared().len() {
        shared()
    } else {
        local = XSequence::with_terms(goal);
        &local
    };
    let xk = seq.x(k);
    let truncated = seq.prefix(seq.len()) - seq.prefix(k);
    if xk < truncated {
        return true;
    }
    let certified_upper = truncated + 2.0 / *seq.primes.last().unwrap() as f64;
    if xk >= certified_upper {
        return false;
    }
    panic!("tail comparison at k = {k} is not certifiable at this truncation");
}

/// The inductive subset construction on (x_j) for j >= start: scan upward,
/// admit a term whenever it keeps the running sum below t, and stop as
/// soon as the sum exceeds s. Returns indices whose x-sum lies in (s, t).
pub fn greedy_subset(s: f64, t: f64, start: usize) -> Result<BTreeSet<usize>, DensityError> {
    if !(s > 0.0 && s < t) {
        return Err(DensityError::IntervalEmpty);
    }
    let seq = shared();
    assert!(start >= 1 && start <= seq.len());
    let available = seq.tail_from(start);
    if t >= available {
        return Err(DensityError::IntervalTooHigh);
    }
    let mut sum = 0.0;
    let mut chosen = BTreeSet::new();
    for j in start..=seq.len() {
        let xj = seq.x(j);
        if sum + xj < t {
            chosen.insert(j);
            sum += xj;
            if sum > s {
                return Ok(chosen);
            }
        }
    }
    panic!("greedy construction exhausted the certified sequence without crossing s");
}

/// All primes p <= bound (p odd) such that every prime in `required`
/// divides p - 1 and no prime in `excluded` does.
pub fn prime_search(
    required: &BTreeSet<u64>,
    excluded: &BTreeSet<u64>,
    bound: u64,
) -> Result<Vec<u64>, DensityError> {
    if required.intersection(excluded).next().is_some() {
        return Err(DensityError::NotDisjoint);
    }
    Ok(sieve_primes(bound)
        .into_iter()
        .filter(|&p| p >= 3)
        .filter(|&p| required.iter().all(|&q| (p - 1) % q == 0))
        .filter(|&p| excluded.iter().all(|&q| (p - 1) % q != 0))
        .collect())
}

/// 1/zeta(2) as a certified interval: the truncated product over the
/// shared primes is an upper bound, and multiplying by e^(-2/p_last)
/// gives a lower bound.
pub fn zeta2_reciprocal_bracket() -> (f64, f64) {
    let seq = shared();
    let mut product = 1.0f64;
    for &p in &seq.primes {
        product *= 1.0 - 1.0 / (p as f64 * p as f64);
    }
    let lower = product * (-2.0 / *seq.primes.last().unwrap() as f64).exp();
    (lower, product)
}

const Z2_INV: f64 = 0.6079271018540267;
const BRANCH_TOL: f64 = 1e-12;

/// Smallest prime p <= bound with euler_product(p - 1) strictly inside
/// (s, t). The interval must lie in one of the two attainable bands:
/// [1/zeta(2), 2/3] (intervals whose witnesses have 3 | p-1) or
/// [9/(8 zeta(2)), 3/4] (witnesses with 3 not dividing p-1). The chosen
/// band fixes the forced small primes; the greedy subset supplies the
/// required larger prime divisors; a certified tail cutoff K bounds the
/// effect of divisors past the exclusion window; and every sieve candidate
/// is finally checked exactly.
pub fn realize_interval(s: f64, t: f64, bound: u64) -> Result<u64, DensityError> {
    if !(s < t) {
        return Err(DensityError::IntervalEmpty);
    }
    let high_inf = 1.125 * Z2_INV;
    let (base, forces_three) = if s >= Z2_INV - BRANCH_TOL && t <= 2.0 / 3.0 + BRANCH_TOL {
        (2.0 / 3.0, true)
    } else if s >= high_inf - BRANCH_TOL && t <= 0.75 + BRANCH_TOL {
        (0.75, false)
    } else {
        return Err(DensityError::IntervalOutsideI);
    };
    let seq = shared();
    // Work with log-domain targets: a subset with x-sum in (s', t') puts
    // the nominal product base * e^(-sum) inside (s, t).
    let t_log = (base / s).ln();
    let s_log = if t >= base {
        t_log * 1e-3
    } else {
        (base / t).ln()
    };
    let subset = match greedy_subset(s_log, t_log, 3) {
        Ok(set) => set,
        Err(_) => return Err(DensityError::NotFound),
    };
    let nominal_sum: f64 = subset.iter().map(|&j| seq.x(j)).sum();
    // Divisors beyond the exclusion window shrink the product by at most
    // e^(-tail); keep that inside the remaining room above s.
    let slack = t_log - nominal_sum;
    let k_start = subset.iter().max().copied().unwrap_or(2).max(2);
    let cutoff = (k_start..=200.min(seq.len()))
        .find(|&k| seq.tail_upper_from(k + 1) < slack)
        .ok_or(DensityError::NotFound)?;
    let mut required: BTreeSet<u64> = subset.iter().map(|&j| seq.prime(j)).collect();
    if forces_three {
        required.insert(3);
    }
    let excluded: BTreeSet<u64> = (2..=cutoff)
        .map(|j| seq.prime(j))
        .filter(|q| !required.contains(q))
        .collect();
    let candidates = prime_search(&required, &excluded, bound)?;
    let s_exact = Ratio::from_float(s).expect("finite float");
    let t_exact = Ratio::from_float(t).expect("finite float");
    candidates
        .into_iter()
        .find(|&p| {
            let value = euler_product(p - 1);
            value > s_exact && value < t_exact
        })
        .ok_or(DensityError::NotFound)
}
