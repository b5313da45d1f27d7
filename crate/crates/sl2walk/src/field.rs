//! Prime-field context: primality, factorization of the group order,
//! primitive roots, quadratic characters, discrete logarithms, and centered
//! residues.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too small; the walk needs an odd prime p >= 3")]
    TooSmall(u64),
    #[error("discrete logarithm of zero is undefined")]
    ZeroArgument,
    #[error("{root} does not generate the multiplicative group mod {p}")]
    NotPrimitiveRoot { root: u64, p: u64 },
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    debug_assert!(m > 1);
    base %= m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the prime `p`, via Fermat's little theorem.
///
/// # Panics
/// Panics if `a ≡ 0 (mod p)`.
#[inline]
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "zero has no inverse");
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs with the fixed
/// witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime(n) && n % 2 == 1);
    // Brent's cycle variant; the constant c is bumped on failure, so the
    // loop terminates for every composite input.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorization, sorted by prime: trial division up to 10^6, then
/// Pollard rho on whatever survives.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut push = |q: u64, e: u32| {
        if e > 0 {
            out.push((q, e));
        }
    };
    let mut e = 0;
    while n % 2 == 0 {
        n /= 2;
        e += 1;
    }
    push(2, e);
    let mut d = 3u64;
    while d <= 1_000_000 && d as u128 * d as u128 <= n as u128 {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        push(d, e);
        d += 2;
    }
    // Remaining cofactor has no divisor <= 10^6; split it recursively.
    let mut stack = Vec::new();
    if n > 1 {
        stack.push(n);
    }
    let mut large: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if is_prime(m) {
            large.push(m);
        } else {
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    large.sort_unstable();
    let mut i = 0;
    while i < large.len() {
        let q = large[i];
        let mut e = 0;
        while i < large.len() && large[i] == q {
            e += 1;
            i += 1;
        }
        out.push((q, e));
    }
    out.sort_unstable();
    out
}

/// Immutable arithmetic context for one odd prime p.
///
/// Holds the group order n = p−1, its factorization, the chosen generator g
/// of the multiplicative group, and a baby-step table so discrete logs cost
/// O(√n) per query.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    pub p: u64,
    pub n: u64,
    pub g: u64,
    pub factors_n: Vec<(u64, u32)>,
    baby: HashMap<u64, u64>,
    baby_span: u64,
    giant_step: u64,
}

impl PrimeContext {
    /// Validates p and builds the context with the smallest primitive root.
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p <= 2 {
            return Err(FieldError::TooSmall(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let n = p - 1;
        let factors_n = factorize(n);
        let g = (2..p)
            .find(|&g| is_primitive_root(g, p, &factors_n))
            .expect("every prime field has a primitive root");
        Ok(Self::assemble(p, n, g, factors_n))
    }

    /// Builds a context around an explicit generator instead of the smallest
    /// one. Downstream walk statistics do not depend on this choice; the
    /// constructor exists so that independence can be exercised directly.
    pub fn with_root(p: u64, g: u64) -> Result<Self, FieldError> {
        if p <= 2 {
            return Err(FieldError::TooSmall(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let n = p - 1;
        let factors_n = factorize(n);
        if g == 0 || g >= p || !is_primitive_root(g, p, &factors_n) {
            return Err(FieldError::NotPrimitiveRoot { root: g, p });
        }
        Ok(Self::assemble(p, n, g, factors_n))
    }

    fn assemble(p: u64, n: u64, g: u64, factors_n: Vec<(u64, u32)>) -> Self {
        let baby_span = (n as f64).sqrt().ceil() as u64;
        let mut baby = HashMap::with_capacity(baby_span as usize);
        let mut cur = 1u64;
        for j in 0..baby_span {
            baby.entry(cur).or_insert(j);
            cur = mul_mod(cur, g, p);
        }
        // cur is now g^baby_span; its inverse is the giant step.
        let giant_step = inv_mod(cur, p);
        Self { p, n, g, factors_n, baby, baby_span, giant_step }
    }

    /// Quadratic character by Euler's criterion: 0 on zero, +1 on nonzero
    /// squares, −1 otherwise.
    pub fn quadratic_character(&self, x: u64) -> i32 {
        let x = x % self.p;
        if x == 0 {
            return 0;
        }
        if pow_mod(x, self.n / 2, self.p) == 1 {
            1
        } else {
            -1
        }
    }

    /// Discrete logarithm base g via baby-step giant-step.
    pub fn discrete_log(&self, x: u64) -> Result<u64, FieldError> {
        let mut cur = x % self.p;
        if cur == 0 {
            return Err(FieldError::ZeroArgument);
        }
        let giants = self.n / self.baby_span + 1;
        for i in 0..=giants {
            if let Some(&j) = self.baby.get(&cur) {
                return Ok((i * self.baby_span + j) % self.n);
            }
            cur = mul_mod(cur, self.giant_step, self.p);
        }
        unreachable!("g generates the full group, so every nonzero x has a log")
    }
}

fn is_primitive_root(g: u64, p: u64, factors_n: &[(u64, u32)]) -> bool {
    factors_n.iter().all(|&(q, _)| pow_mod(g, (p - 1) / q, p) != 1)
}

/// The unique representative of `j` mod `n` in the interval (−n/2, n/2];
/// for even n the boundary value n/2 is kept with a positive sign.
pub fn centered_residue(j: i64, n: u64) -> i64 {
    debug_assert!(n >= 1);
    let n_i = n as i64;
    let r = j.rem_euclid(n_i);
    if 2 * r > n_i {
        r - n_i
    } else {
        r
    }
}
