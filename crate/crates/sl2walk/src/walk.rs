//! The bracket walk: Monte Carlo trajectories on sl2, reduction to the
//! cyclic-group parameters, exact distribution evolution on Z_n, and
//! lifting distributions back to the bracket line.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::{gcd, PrimeContext};
use crate::rng::CounterRng;
use crate::sl2::{bracket, gram_triple, Gen, Sl2Element, Sl2Error};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("[A, B] = 0; the walk never leaves zero")]
    DegeneratePair,
    #[error("a Gram entry is zero, so the reduction to Z_n breaks down")]
    DegenerateGram,
    #[error(transparent)]
    Algebra(#[from] Sl2Error),
}

/// The reduced walk's data on Z_n, n = p-1: the three step logarithms,
/// their pairwise offsets a = alpha_log - beta_log and b = alpha_log -
/// gamma_log, and d = gcd(a, b, n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkParams {
    pub n: u64,
    pub alpha_log: u64,
    pub beta_log: u64,
    pub gamma_log: u64,
    pub a: u64,
    pub b: u64,
    pub d: u64,
}

impl WalkParams {
    /// Builds params from the three step logarithms, deriving (a, b, d).
    pub fn from_logs(n: u64, alpha_log: u64, beta_log: u64, gamma_log: u64) -> Self {
        debug_assert!(n >= 1);
        let (alpha_log, beta_log, gamma_log) = (alpha_log % n, beta_log % n, gamma_log % n);
        let a = (alpha_log + n - beta_log) % n;
        let b = (alpha_log + n - gamma_log) % n;
        let d = gcd(n, gcd(a, b));
        Self { n, alpha_log, beta_log, gamma_log, a, b, d }
    }

    /// Builds params from alpha_log and the two offsets directly; handy for
    /// sweeps that sample (a, b) rather than the raw logarithms.
    pub fn from_offsets(n: u64, alpha_log: u64, a: u64, b: u64) -> Self {
        let (alpha_log, a, b) = (alpha_log % n, a % n, b % n);
        Self::from_logs(n, alpha_log, (alpha_log + n - a) % n, (alpha_log + n - b) % n)
    }
}

/// A probability vector over Z_n. Construction checks total mass within
/// 1e-9 of one and nonnegativity; nothing ever rescales silently.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Self {
        assert!(!probs.is_empty(), "empty support");
        let mass: f64 = probs.iter().sum();
        assert!((mass - 1.0).abs() <= 1e-9, "total mass {mass} drifts past 1e-9");
        assert!(probs.iter().all(|&q| q >= 0.0), "negative probability entry");
        Self { probs }
    }

    pub fn point_mass(n: u64, at: u64) -> Self {
        let mut probs = vec![0.0; n as usize];
        probs[(at % n) as usize] = 1.0;
        Self { probs }
    }

    pub fn n(&self) -> u64 {
        self.probs.len() as u64
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, x: u64) -> f64 {
        self.probs[(x % self.n()) as usize]
    }
}

/// Whether a lifted step count is even or odd. Even counts land on the
/// bracket line; odd counts land on the two transversal lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

fn start_element(a: &Sl2Element, b: &Sl2Element) -> Result<Sl2Element, WalkError> {
    let x0 = bracket(a, b)?;
    if x0.is_zero() {
        return Err(WalkError::DegeneratePair);
    }
    Ok(x0)
}

/// Runs the walk for `steps` bracket applications with i.i.d. uniform
/// choices from {A, B}, returning the full trajectory X_0..X_steps.
/// Trajectories are pure functions of (seed, step index).
pub fn simulate(
    a: &Sl2Element,
    b: &Sl2Element,
    steps: u64,
    seed: u64,
) -> Result<Vec<Sl2Element>, WalkError> {
    let mut rng = CounterRng::new(seed, 0);
    let mut trajectory = Vec::with_capacity(steps as usize + 1);
    let mut cur = start_element(a, b)?;
    trajectory.push(cur);
    for _ in 0..steps {
        let z = if rng.coin() { b } else { a };
        cur = bracket(z, &cur)?;
        trajectory.push(cur);
    }
    Ok(trajectory)
}

/// Deterministic replay of the walk under an explicit choice sequence,
/// choices[i] being the generator applied at step i+1.
pub fn trajectory_from_choices(
    a: &Sl2Element,
    b: &Sl2Element,
    choices: &[Gen],
) -> Result<Vec<Sl2Element>, WalkError> {
    let mut trajectory = Vec::with_capacity(choices.len() + 1);
    let mut cur = start_element(a, b)?;
    trajectory.push(cur);
    for gen in choices {
        let z = match gen {
            Gen::A => a,
            Gen::B => b,
        };
        cur = bracket(z, &cur)?;
        trajectory.push(cur);
    }
    Ok(trajectory)
}

/// Reduces the pair to its cyclic-walk parameters: one reduced step
/// corresponds to two bracket steps, and the law of X_{2k} on the bracket
/// line is the even lift of the reduced distribution after k steps.
pub fn reduce(ctx: &PrimeContext, a: &Sl2Element, b: &Sl2Element) -> Result<WalkParams, WalkError> {
    if ctx.p != a.modulus() {
        return Err(Sl2Error::ModulusMismatch(ctx.p, a.modulus()).into());
    }
    start_element(a, b)?;
    let gt = gram_triple(a, b)?;
    if gt.alpha % ctx.p == 0 || gt.beta % ctx.p == 0 || gt.gamma % ctx.p == 0 {
        return Err(WalkError::DegenerateGram);
    }
    let log = |v: u64| {
        ctx.discrete_log(v)
            .expect("nonzero values always have a discrete log")
    };
    Ok(WalkParams::from_logs(ctx.n, log(gt.alpha), log(gt.beta), log(gt.gamma)))
}

/// Exact law after k reduced steps: k sparse convolutions with the 3-point
/// step (alpha_log w.p. 1/2, beta_log and gamma_log w.p. 1/4 each),
/// starting from the point mass at 0.
pub fn evolve(params: &WalkParams, k: u64) -> Distribution {
    let n = params.n as usize;
    let mut cur = vec![0.0f64; n];
    cur[0] = 1.0;
    let shifts = [
        (params.alpha_log as usize, 0.5),
        (params.beta_log as usize, 0.25),
        (params.gamma_log as usize, 0.25),
    ];
    for _ in 0..k {
        let mut next = vec![0.0f64; n];
        for (x, &mass) in cur.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            for &(shift, w) in &shifts {
                let mut y = x + shift;
                if y >= n {
                    y -= n;
                }
                next[y] += w * mass;
            }
        }
        cur = next;
    }
    Distribution::new(cur)
}

/// Lifts a distribution on Z_n to sl2 elements. Even parity sends the
/// exponent e to g^e [A,B]. Odd parity splits each even atom c[A,B] into
/// mass/2 on c(-alpha A + beta B) and mass/2 on c(-gamma A + alpha B),
/// the two possible successors after one more bracket step.
pub fn lift(
    ctx: &PrimeContext,
    a: &Sl2Element,
    b: &Sl2Element,
    dist: &Distribution,
    parity: Parity,
) -> Result<BTreeMap<Sl2Element, f64>, WalkError> {
    assert_eq!(dist.n(), ctx.n, "distribution support must be Z_(p-1)");
    if ctx.p != a.modulus() {
        return Err(Sl2Error::ModulusMismatch(ctx.p, a.modulus()).into());
    }
    let x0 = start_element(a, b)?;
    let gt = gram_triple(a, b)?;
    let p = ctx.p;
    let odd_lines = {
        let minus_alpha_a = -a.scale(gt.alpha);
        let minus_gamma_a = -a.scale(gt.gamma);
        (
            minus_alpha_a + b.scale(gt.beta),
            minus_gamma_a + b.scale(gt.alpha),
        )
    };
    let mut out: BTreeMap<Sl2Element, f64> = BTreeMap::new();
    let mut scalar = 1u64;
    for e in 0..ctx.n {
        let mass = dist.prob(e);
        if mass > 0.0 {
            match parity {
                Parity::Even => {
                    *out.entry(x0.scale(scalar)).or_insert(0.0) += mass;
                }
                Parity::Odd => {
                    *out.entry(odd_lines.0.scale(scalar)).or_insert(0.0) += mass / 2.0;
                    *out.entry(odd_lines.1.scale(scalar)).or_insert(0.0) += mass / 2.0;
                }
            }
        }
        scalar = crate::field::mul_mod(scalar, ctx.g, p);
    }
    Ok(out)
}

/// Recovers the scalar c with cur = c * x0, given cur lies on the line.
fn line_scalar(ctx: &PrimeContext, x0: &Sl2Element, cur: &Sl2Element) -> u64 {
    let p = ctx.p;
    let pairs = [
        (x0.a11(), cur.a11()),
        (x0.a12(), cur.a12()),
        (x0.a21(), cur.a21()),
    ];
    let &(base, image) = pairs
        .iter()
        .find(|&&(base, _)| base != 0)
        .expect("x0 is nonzero");
    let c = crate::field::mul_mod(image, crate::field::inv_mod(base, p), p);
    debug_assert_eq!(*cur, x0.scale(c), "trajectory left the bracket line");
    c
}

/// Runs `trials` independent walks of 2k bracket steps, tabulates the
/// exponent of X_{2k} on the bracket line, and reports the total variation
/// distance to the supplied reference law on Z_n. Trial t draws its
/// randomness from the (seed, t) counter stream.
pub fn empirical(
    ctx: &PrimeContext,
    a: &Sl2Element,
    b: &Sl2Element,
    k: u64,
    trials: u64,
    seed: u64,
    reference: &Distribution,
) -> Result<(Distribution, f64), WalkError> {
    assert!(trials >= 1, "at least one trial");
    let params = reduce(ctx, a, b)?;
    assert_eq!(reference.n(), params.n, "reference must live on Z_(p-1)");
    let x0 = start_element(a, b)?;
    let mut counts = vec![0u64; params.n as usize];
    for trial in 0..trials {
        let mut rng = CounterRng::new(seed, trial);
        let mut cur = x0;
        for _ in 0..2 * k {
            let z = if rng.coin() { b } else { a };
            cur = bracket(z, &cur)?;
        }
        let c = line_scalar(ctx, &x0, &cur);
        let e = ctx
            .discrete_log(c)
            .expect("scalars on the line are nonzero under a nondegenerate Gram");
        counts[e as usize] += 1;
    }
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / trials as f64).collect();
    let dist = Distribution::new(probs);
    let tv = 0.5
        * dist
            .probs()
            .iter()
            .zip(reference.probs())
            .map(|(x, y)| (x - y).abs())
            .sum::<f64>();
    Ok((dist, tv))
}
