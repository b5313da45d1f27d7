//! Batch experiment harness over the walk library.
//!
//! Each runner takes an [`ExperimentConfig`] and returns a complete CSV
//! document (header plus rows, UTF-8, LF line endings). Randomized runners
//! fan the master seed out per trial through the library's counter RNG, and
//! trials execute in parallel with rows assembled in trial-index order, so
//! an identical config always produces byte-identical output.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use sl2walk::density::{
    coprime_pair_count, greedy_subset, realize_interval, shared, tail_condition,
    zeta2_reciprocal_bracket, DensityError,
};
use sl2walk::diameter::{
    digit_expansion, full_witness, line_witness, pair_admits_witnesses, pn_cover_time,
    DiameterError,
};
use sl2walk::field::{factorize, FieldError, PrimeContext};
use sl2walk::gram::{fiber_histogram, fiber_size, GramError, SymMatrix2};
use sl2walk::rng::CounterRng;
use sl2walk::sl2::{gram_triple, Gen, Sl2Element, Sl2Error};
use sl2walk::spectral::{
    bound_upper, eigenvalues, limiting, minimal_norm, sigma_fourier, tv, SpectralError,
};
use sl2walk::walk::{reduce, trajectory_from_choices, WalkError, WalkParams};

/// Shared knobs for every subcommand. Not every runner consumes every
/// field; unused knobs are simply ignored by that experiment family.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Odd prime modulus of the algebra.
    pub p: u64,
    /// Number of independent trials for the randomized runners.
    pub trials: u64,
    /// Master seed; trial i draws from the (master_seed, i) counter stream.
    pub master_seed: u64,
    /// Step counts at which distances are reported.
    pub k_list: Vec<u64>,
    /// Mixing threshold for certified stopping rules.
    pub eps: f64,
    /// Sieve bound for prime searches.
    pub bound: u64,
    /// Cover-time search cap; 0 selects floor(10 ln p).
    pub cap: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            p: 11,
            trials: 10,
            master_seed: 1,
            k_list: vec![1, 10, 100],
            eps: 0.1,
            bound: 100,
            cap: 0,
        }
    }
}

impl ExperimentConfig {
    /// Rejects configurations no runner can act on.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.k_list.is_empty() {
            return Err(CliError::EmptyKList);
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(CliError::BadEps(self.eps));
        }
        Ok(())
    }

    fn effective_cap(&self) -> u64 {
        if self.cap == 0 {
            (10.0 * (self.p as f64).ln()).floor() as u64
        } else {
            self.cap
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("p = {0} must be at least 5 for this experiment")]
    PrimeTooSmall(u64),
    #[error("p = {0} is beyond the p <= 13 enumeration range")]
    PrimeTooLarge(u64),
    #[error("the step-count list must not be empty")]
    EmptyKList,
    #[error("eps must lie strictly between 0 and 1, got {0}")]
    BadEps(f64),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Gram(#[from] GramError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Diameter(#[from] DiameterError),
    #[error(transparent)]
    Algebra(#[from] Sl2Error),
    #[error("failed to write output: {0}")]
    Io(#[from] std::io::Error),
}

pub const PRECUTOFF_HEADER: &str = "p,trial,seed,a,b,d,smin,n2,k,tv,prop62_bound,rho_pow_k_half";
pub const UNIFORM_PROB_HEADER: &str =
    "p,n,coprime_pairs,uniform_prob,sl2_prob,abs_diff,transfer_bound,within_bound,mc_trials,mc_prob";
pub const FIBERS_HEADER: &str = "p,x11,x12,x22,rank,formula,oracle,matches";
pub const DIAMETER_HEADER: &str = "p,kind,index,cover_time,weight,max_degree,weight_bound,sound";
pub const DENSITY_HEADER: &str = "section,key,val_a,val_b,val_c,result";
pub const SIMULATE_HEADER: &str = "p,trial,seed,rejections,k,x11,x12,x21";

/// Floats are printed with 12 significant digits in scientific notation,
/// so equal values always serialize to equal bytes.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

fn rand_element(rng: &mut CounterRng, p: u64) -> Sl2Element {
    let x11 = rng.below(p);
    let x12 = rng.below(p);
    let x21 = rng.below(p);
    Sl2Element::new(p, x11, x12, x21)
}

/// Draws uniform pairs from the stream until the reduction to Z_(p-1)
/// succeeds, returning the pair, its reduced parameters, and the number
/// of rejected draws.
fn sample_pair(ctx: &PrimeContext, rng: &mut CounterRng) -> (Sl2Element, Sl2Element, WalkParams, u64) {
    let mut rejections = 0;
    loop {
        let a = rand_element(rng, ctx.p);
        let b = rand_element(rng, ctx.p);
        if let Ok(params) = reduce(ctx, &a, &b) {
            return (a, b, params, rejections);
        }
        rejections += 1;
    }
}

fn euler_phi(n: u64) -> u64 {
    factorize(n).into_iter().fold(n, |acc, (q, _)| acc / q * (q - 1))
}

fn ratio_to_f64(r: &Ratio<BigInt>) -> f64 {
    r.to_f64().expect("ratio fits in f64")
}

/// Exact total-variation trajectory of the reduced walk against its limit,
/// with the two certified upper bounds, one row per (trial, k).
///
/// Pairs whose reduction lands on a = b = 0 have no nonzero frequency
/// point; such rows report smin = 0 and zero bounds, and the walk is
/// exactly mixed at every even step.
pub fn run_precutoff(cfg: &ExperimentConfig) -> Result<String, CliError> {
    cfg.validate()?;
    if cfg.p < 5 {
        return Err(CliError::PrimeTooSmall(cfg.p));
    }
    let ctx = PrimeContext::new(cfg.p)?;
    let blocks = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| -> Result<String, CliError> {
            let mut rng = CounterRng::new(cfg.master_seed, trial);
            let (_, _, params, _) = sample_pair(&ctx, &mut rng);
            let trivial = params.a == 0 && params.b == 0;
            let smin = if trivial { 0 } else { minimal_norm(&params)?.s_min };
            let rho = if trivial { 0.0 } else { eigenvalues(&params).rho() };
            let n2 = params.n * params.n;
            let mut block = String::new();
            for &k in &cfg.k_list {
                let dist = tv(&sigma_fourier(&params, k), &limiting(&params, k))?;
                let (prop62, rho_half) = if trivial {
                    (0.0, 0.0)
                } else {
                    (bound_upper(&params, k)?.prop62, rho.powi(k as i32) / 2.0)
                };
                writeln!(
                    block,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    cfg.p,
                    trial,
                    cfg.master_seed,
                    params.a,
                    params.b,
                    params.d,
                    smin,
                    n2,
                    k,
                    fmt_float(dist),
                    fmt_float(prop62),
                    fmt_float(rho_half),
                )
                .expect("string write");
            }
            Ok(block)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = String::from(PRECUTOFF_HEADER);
    out.push('\n');
    out.extend(blocks);
    Ok(out)
}

/// Exact probability that a uniform pair reduces to coprime offsets,
/// compared against the coprimality density of uniform offsets with the
/// 15/p transfer bound, plus an optional Monte Carlo estimate.
pub fn run_uniform_prob(cfg: &ExperimentConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let ctx = PrimeContext::new(cfg.p)?;
    let (p, n) = (ctx.p, ctx.n);
    let coprime = coprime_pair_count(n);
    // Coprime points on the antidiagonal a + b = 0 are exactly the
    // (a, n - a) with gcd(a, n) = 1, so the closed-form fiber counts sum
    // without touching all n^2 points.
    let phi = euler_phi(n);
    let big = BigInt::from;
    let off_fiber = big(p - 1) * (big(p).pow(3) - big(p));
    let anti_fiber = big(p - 1) * (big(p).pow(3) + big(p).pow(2) - big(p));
    let sl2_count = off_fiber * (big(coprime) - big(phi)) + anti_fiber * big(phi);
    let sl2_prob = Ratio::new(sl2_count, big(p).pow(6));
    let uniform_prob = Ratio::new(big(coprime), big(n) * big(n));
    let abs_diff = (sl2_prob.clone() - uniform_prob.clone()).abs();
    let transfer_bound = Ratio::new(big(15), big(p));
    let within = abs_diff < transfer_bound;
    let hits = (0..cfg.trials)
        .into_par_iter()
        .filter(|&trial| {
            let mut rng = CounterRng::new(cfg.master_seed, trial);
            let a = rand_element(&mut rng, p);
            let b = rand_element(&mut rng, p);
            matches!(reduce(&ctx, &a, &b), Ok(q) if q.d == 1)
        })
        .count() as u64;
    let mc_prob = if cfg.trials == 0 { 0.0 } else { hits as f64 / cfg.trials as f64 };
    let mut out = String::from(UNIFORM_PROB_HEADER);
    out.push('\n');
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{}",
        p,
        n,
        coprime,
        fmt_float(ratio_to_f64(&uniform_prob)),
        fmt_float(ratio_to_f64(&sl2_prob)),
        fmt_float(ratio_to_f64(&abs_diff)),
        fmt_float(ratio_to_f64(&transfer_bound)),
        within,
        cfg.trials,
        fmt_float(mc_prob),
    )
    .expect("string write");
    Ok(out)
}

/// Closed-form pairing-matrix fiber sizes against the full enumeration,
/// one row per symmetric matrix. Gated to p <= 13 by the oracle cost.
pub fn run_fibers(cfg: &ExperimentConfig) -> Result<String, CliError> {
    cfg.validate()?;
    if cfg.p > 13 {
        return Err(CliError::PrimeTooLarge(cfg.p));
    }
    let ctx = PrimeContext::new(cfg.p)?;
    let p = ctx.p;
    let hist = fiber_histogram(&ctx)?;
    let mut out = String::from(FIBERS_HEADER);
    out.push('\n');
    for x11 in 0..p {
        for x12 in 0..p {
            for x22 in 0..p {
                let x = SymMatrix2::new(x11, x12, x22);
                let formula = fiber_size(&ctx, &x);
                let oracle = hist[((x11 * p + x12) * p + x22) as usize];
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    p,
                    x11,
                    x12,
                    x22,
                    x.rank(p),
                    formula,
                    oracle,
                    formula == oracle,
                )
                .expect("string write");
            }
        }
    }
    Ok(out)
}

/// Cover times for every multiplier a in F_p, then per-trial certificate
/// rows: one full witness and one bracket-line witness per sampled pair,
/// with their weights, degrees, weight bounds, and soundness flags.
pub fn run_diameter(cfg: &ExperimentConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let ctx = PrimeContext::new(cfg.p)?;
    let p = ctx.p;
    let cap = cfg.effective_cap();
    let cover_rows: Vec<String> = (0..p)
        .into_par_iter()
        .map(|a_val| {
            let cover = pn_cover_time(&ctx, a_val, cap);
            let cover_cell = cover.map_or(String::new(), |t| t.to_string());
            format!(
                "{},cover,{},{},,,{},{}\n",
                p,
                a_val,
                cover_cell,
                cap,
                cover.is_some(),
            )
        })
        .collect();
    let cert_blocks = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| -> Result<String, CliError> {
            let mut rng = CounterRng::new(cfg.master_seed, trial);
            let (a, b) = loop {
                let a = rand_element(&mut rng, p);
                let b = rand_element(&mut rng, p);
                if pair_admits_witnesses(&ctx, &a, &b) {
                    break (a, b);
                }
            };
            let target = rand_element(&mut rng, p);
            let witness = full_witness(&ctx, &a, &b, &target)?;
            let mut block = String::new();
            writeln!(
                block,
                "{},certificate,{},,{},{},{},{}",
                p,
                trial,
                witness.certificate.weight(),
                witness.max_degree,
                12 * witness.max_degree + 8,
                witness.certificate.verify(&a, &b)?,
            )
            .expect("string write");
            let c = rng.below(p);
            let alpha = gram_triple(&a, &b)?.alpha;
            let degree = digit_expansion(&ctx, alpha, c, 2 * p)?.len() as u64 - 1;
            let line = line_witness(&ctx, &a, &b, c)?;
            writeln!(
                block,
                "{},line,{},,{},{},{},{}",
                p,
                trial,
                line.weight(),
                degree,
                4 * degree + 2,
                line.verify(&a, &b)?,
            )
            .expect("string write");
            Ok(block)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = String::from(DIAMETER_HEADER);
    out.push('\n');
    out.extend(cover_rows);
    out.extend(cert_blocks);
    Ok(out)
}

/// Deterministic reference rows for the prime-density machinery: the head
/// of the x_j table with truncated and certified tails, tail-condition
/// verdicts, greedy subset examples, the zeta(2) reciprocal bracket, and
/// realized primes for target intervals.
pub fn run_density(cfg: &ExperimentConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let seq = shared();
    let mut out = String::from(DENSITY_HEADER);
    out.push('\n');
    for j in 1..=4usize {
        writeln!(
            out,
            "x_table,{},{},{},{},{}",
            j,
            seq.prime(j),
            fmt_float(seq.x(j)),
            fmt_float(seq.tail_from(j + 1)),
            fmt_float(seq.tail_upper_from(j + 1)),
        )
        .expect("string write");
    }
    for k in [1usize, 2, 3, 4, 5, 10, 50, 100, 200] {
        writeln!(out, "tail_condition,{},,,,{}", k, tail_condition(k)).expect("string write");
    }
    for (s, t) in [(0.04, 0.05), (0.045, 0.05), (0.5, 0.6)] {
        let result = match greedy_subset(s, t, 3) {
            Ok(set) => {
                let parts: Vec<String> = set.iter().map(|j| j.to_string()).collect();
                format!("{{{}}}", parts.join(" "))
            }
            Err(e) => format!("{e:?}"),
        };
        writeln!(
            out,
            "greedy,({s};{t}),{},{},3,{}",
            fmt_float(s),
            fmt_float(t),
            result,
        )
        .expect("string write");
    }
    let (lo, hi) = zeta2_reciprocal_bracket();
    let zeta2_inv = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    writeln!(
        out,
        "zeta,bracket,{},{},,{}",
        fmt_float(lo),
        fmt_float(hi),
        lo <= zeta2_inv && zeta2_inv <= hi,
    )
    .expect("string write");
    let realize_cases = [
        (0.70, 0.73, cfg.bound),
        (0.74, 0.745, cfg.bound),
        (0.2, 0.3, cfg.bound),
        (0.74, 0.745, 5),
    ];
    for (s, t, bound) in realize_cases {
        let result = match realize_interval(s, t, bound) {
            Ok(prime) => prime.to_string(),
            Err(e) => format!("{e:?}"),
        };
        writeln!(
            out,
            "realize,({s};{t}),{},{},{},{}",
            fmt_float(s),
            fmt_float(t),
            bound,
            result,
        )
        .expect("string write");
    }
    Ok(out)
}

/// Raw walk trajectories: per trial a rejection-sampled pair and one row
/// of bracket-walk coordinates for each requested step count.
pub fn run_simulate(cfg: &ExperimentConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let ctx = PrimeContext::new(cfg.p)?;
    let steps = *cfg.k_list.iter().max().expect("validated nonempty");
    let blocks = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| -> Result<String, CliError> {
            let mut rng = CounterRng::new(cfg.master_seed, trial);
            let (a, b, _, rejections) = sample_pair(&ctx, &mut rng);
            let choices: Vec<Gen> = (0..steps)
                .map(|_| if rng.coin() { Gen::B } else { Gen::A })
                .collect();
            let trajectory = trajectory_from_choices(&a, &b, &choices)?;
            let mut block = String::new();
            for &k in &cfg.k_list {
                let (x11, x12, x21) = trajectory[k as usize].coords();
                writeln!(
                    block,
                    "{},{},{},{},{},{},{},{}",
                    cfg.p, trial, cfg.master_seed, rejections, k, x11, x12, x21,
                )
                .expect("string write");
            }
            Ok(block)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = String::from(SIMULATE_HEADER);
    out.push('\n');
    out.extend(blocks);
    Ok(out)
}
