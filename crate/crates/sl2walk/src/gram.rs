//! Gram-matrix fibers of uniformly random pairs: exact closed-form orbit
//! counts, a brute-force enumeration oracle for small p, the parameter map
//! into Z_n x Z_n, and exact pushforward masses.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::Ratio;
use thiserror::Error;

use crate::field::{mul_mod, PrimeContext};
use crate::sl2::GramTriple;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GramError {
    #[error("p = {0} exceeds the p^6 enumeration budget (p <= 13)")]
    TooLarge(u64),
    #[error("a Gram entry is zero, so the parameter map is undefined")]
    DegenerateGram,
}

/// Symmetric 2x2 matrix [[x11, x12], [x12, x22]] of pairings of a matrix
/// pair: x11 = <A,A>, x12 = <A,B>, x22 = <B,B>.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymMatrix2 {
    pub x11: u64,
    pub x12: u64,
    pub x22: u64,
}

impl SymMatrix2 {
    pub fn new(x11: u64, x12: u64, x22: u64) -> Self {
        Self { x11, x12, x22 }
    }

    /// 0 iff all entries vanish; 2 iff the determinant is nonzero; else 1.
    pub fn rank(&self, p: u64) -> u32 {
        let (x11, x12, x22) = (self.x11 % p, self.x12 % p, self.x22 % p);
        if x11 == 0 && x12 == 0 && x22 == 0 {
            return 0;
        }
        let det = (x11 as u128 * x22 as u128 + (p as u128 * p as u128)
            - x12 as u128 * x12 as u128)
            % p as u128;
        if det == 0 {
            1
        } else {
            2
        }
    }
}

/// Number of pairs (A, B) in sl2 x sl2 whose pairing matrix equals `x`,
/// by the rank-stratified closed forms. The rank-1 stratum splits on the
/// quadratic characters of the halved diagonal entries: the large fiber
/// applies when both are in {0, +1}, the small one when either is -1.
pub fn fiber_size(ctx: &PrimeContext, x: &SymMatrix2) -> u64 {
    let p = ctx.p;
    let (p2, p3) = (p * p, p * p * p);
    match x.rank(p) {
        0 => p3 + p2 - p,
        2 => p3 - p,
        _ => {
            let inv2 = (p + 1) / 2;
            let e11 = ctx.quadratic_character(mul_mod(x.x11 % p, inv2, p));
            let e22 = ctx.quadratic_character(mul_mod(x.x22 % p, inv2, p));
            if e11 >= 0 && e22 >= 0 {
                2 * p3 + p2 - p
            } else {
                p2 - p
            }
        }
    }
}

fn symmetric_index(x11: u64, x12: u64, x22: u64, p: u64) -> usize {
    ((x11 * p + x12) * p + x22) as usize
}

/// One full pass over all p^6 pairs, tallying how many land on each
/// pairing matrix. Entry `((x11*p)+x12)*p + x22` holds the count for that
/// matrix. Gated to p <= 13.
pub fn fiber_histogram(ctx: &PrimeContext) -> Result<Vec<u64>, GramError> {
    let p = ctx.p;
    if p > 13 {
        return Err(GramError::TooLarge(p));
    }
    let count = (p * p * p) as usize;
    // Entries are < 13, so plain u64 arithmetic never overflows below.
    let coords: Vec<(u64, u64, u64)> = (0..count as u64)
        .map(|i| (i / (p * p), (i / p) % p, i % p))
        .collect();
    let self_norm: Vec<u64> = coords
        .iter()
        .map(|&(a11, a12, a21)| (2 * a11 * a11 + 2 * a12 * a21) % p)
        .collect();
    let mut hist = vec![0u64; count];
    for (i, &(a11, a12, a21)) in coords.iter().enumerate() {
        let x11 = self_norm[i];
        for (j, &(b11, b12, b21)) in coords.iter().enumerate() {
            let x12 = (2 * a11 * b11 + a12 * b21 + a21 * b12) % p;
            hist[symmetric_index(x11, x12, self_norm[j], p)] += 1;
        }
    }
    Ok(hist)
}

/// Brute-force fiber count for one pairing matrix; must equal fiber_size.
/// Costs a full p^6 pass per call, so sweeps should use fiber_histogram.
pub fn fiber_size_oracle(ctx: &PrimeContext, x: &SymMatrix2) -> Result<u64, GramError> {
    let p = ctx.p;
    let hist = fiber_histogram(ctx)?;
    Ok(hist[symmetric_index(x.x11 % p, x.x12 % p, x.x22 % p, p)])
}

/// Number of A in sl2 with <A,A> = a, which is p(p + eta(a/2)).
pub fn anisotropic_count(ctx: &PrimeContext, a: u64) -> u64 {
    let p = ctx.p;
    let inv2 = (p + 1) / 2;
    let eta = ctx.quadratic_character(mul_mod(a % p, inv2, p)) as i64;
    (p as i64 * (p as i64 + eta)) as u64
}

/// The same count by scanning all p^3 elements; O(p^3) per call.
pub fn anisotropic_count_oracle(ctx: &PrimeContext, a: u64) -> u64 {
    let p = ctx.p;
    let a = a % p;
    let mut count = 0;
    for a11 in 0..p {
        for a12 in 0..p {
            for a21 in 0..p {
                let norm = (2 * mul_mod(a11, a11, p) + 2 * mul_mod(a12, a21, p)) % p;
                if norm == a {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Reduced coordinates of a nondegenerate Gram triple: (log(alpha/beta),
/// log(alpha/gamma)) with the context's fixed generator.
pub fn parameter_map(ctx: &PrimeContext, gt: &GramTriple) -> Result<(u64, u64), GramError> {
    let p = ctx.p;
    let (alpha, beta, gamma) = (gt.alpha % p, gt.beta % p, gt.gamma % p);
    if alpha == 0 || beta == 0 || gamma == 0 {
        return Err(GramError::DegenerateGram);
    }
    let log = |num: u64, den: u64| {
        let ratio = mul_mod(num, crate::field::inv_mod(den, p), p);
        ctx.discrete_log(ratio)
            .expect("nonzero ratio always has a discrete log")
    };
    Ok((log(alpha, beta), log(alpha, gamma)))
}

/// Closed-form size of the preimage of one reduced point (a, b): pairs
/// whose parameter map lands there. (p-1)(p^3-p) off the antidiagonal
/// a + b = 0 mod n, p^4 - 2p^2 + p on it.
///
/// On the antidiagonal the pairing matrix is forced to rank one, and the
/// two halved diagonal entries share a common quadratic character, so the
/// n alpha values split evenly between the large and small rank-one
/// fibers: (n/2)(2p^3 + p^2 - p) + (n/2)(p^2 - p) = (p-1)(p^3 + p^2 - p).
pub fn fiber_count_closed(ctx: &PrimeContext, a: u64, b: u64) -> u64 {
    let (p, n) = (ctx.p, ctx.n);
    if (a % n + b % n) % n != 0 {
        (p - 1) * (p * p * p - p)
    } else {
        (p - 1) * (p * p * p + p * p - p)
    }
}

/// Exact pushforward mass of a set of reduced points under uniformly
/// random pairs: the summed closed-form fiber sizes over p^6. Input points
/// are reduced mod n and deduplicated.
pub fn pushforward_mass(ctx: &PrimeContext, points: &[(u64, u64)]) -> Ratio<BigInt> {
    let n = ctx.n;
    let reduced: BTreeSet<(u64, u64)> = points.iter().map(|&(a, b)| (a % n, b % n)).collect();
    let total: u64 = reduced
        .iter()
        .map(|&(a, b)| fiber_count_closed(ctx, a, b))
        .sum();
    let p6 = BigInt::from(ctx.p).pow(6);
    Ratio::new(BigInt::from(total), p6)
}

/// Exact probability that the cross pairing 2<A,B> of a uniform pair
/// equals v, summed from fiber_size over all diagonal completions.
pub fn alpha_mass(ctx: &PrimeContext, v: u64) -> Ratio<BigInt> {
    let p = ctx.p;
    let inv2 = (p + 1) / 2;
    let x12 = mul_mod(v % p, inv2, p);
    let mut total = 0u64;
    for x11 in 0..p {
        for x22 in 0..p {
            total += fiber_size(ctx, &SymMatrix2::new(x11, x12, x22));
        }
    }
    let p6 = BigInt::from(p).pow(6);
    Ratio::new(BigInt::from(total), p6)
}
