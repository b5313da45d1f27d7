//! Fourier analysis of the reduced walk: character eigenvalues, the
//! limiting coset law, exact distributions via inversion, lattice minimal
//! norms, certified mixing bounds, and witness-set lower bounds.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::centered_residue;
use crate::walk::{Distribution, WalkParams};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("distributions live on different supports: Z_{0} vs Z_{1}")]
    SupportMismatch(u64, u64),
    #[error("a = b = 0: every character is flat and the lattice has no nonzero points")]
    TrivialLattice,
}

/// The n character eigenvalues of one reduced step, with the flat indices
/// (unit modulus) classified by integer divisibility, never by float
/// comparison.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub n: u64,
    pub lambdas: Vec<Complex64>,
    pub flat_set: BTreeSet<u64>,
}

impl Spectrum {
    /// Largest modulus among non-flat eigenvalues; 0 if every index is flat.
    pub fn rho(&self) -> f64 {
        self.lambdas
            .iter()
            .enumerate()
            .filter(|(j, _)| !self.flat_set.contains(&(*j as u64)))
            .map(|(_, l)| l.norm())
            .fold(0.0, f64::max)
    }
}

/// Exact squared minimal norm of the nonzero frequency points: s_min/n^2
/// with s_min an integer, plus a witnessing index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeInfo {
    pub n: u64,
    pub a: u64,
    pub b: u64,
    pub s_min: u64,
    pub argmin_j: u64,
}

impl LatticeInfo {
    pub fn delta_sq(&self) -> f64 {
        self.s_min as f64 / (self.n as f64 * self.n as f64)
    }

    pub fn delta(&self) -> f64 {
        self.delta_sq().sqrt()
    }
}

/// The two upper bounds on the distance to the limit after k steps: the
/// lattice-certified bound 11 d e^(-k delta^2) on the squared total
/// variation distance, and the eigenvalue sum bounding the squared L1 norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperBounds {
    pub prop62: f64,
    pub lemma41_sum: f64,
}

/// A witness set S with a certified lower bound on sigma_k(S) and an upper
/// bound on phi_k(S); their difference lower-bounds the total variation
/// distance.
#[derive(Debug, Clone)]
pub struct WitnessRecord {
    pub s: BTreeSet<u64>,
    pub sigma_mass_lb: f64,
    pub phi_mass_ub: f64,
}

impl WitnessRecord {
    pub fn lower_gap(&self) -> f64 {
        self.sigma_mass_lb - self.phi_mass_ub
    }
}

/// Exact-rational twin of WitnessRecord for small k.
#[derive(Debug, Clone)]
pub struct WitnessRecordExact {
    pub s: BTreeSet<u64>,
    pub sigma_mass_lb: Ratio<BigInt>,
    pub phi_mass_ub: Ratio<BigInt>,
}

fn unit_roots(n: u64) -> Vec<Complex64> {
    (0..n)
        .map(|t| {
            let (sin, cos) = (2.0 * PI * t as f64 / n as f64).sin_cos();
            Complex64::new(cos, sin)
        })
        .collect()
}

/// Eigenvalue of the step operator at character j: a weighted sum of the
/// three step shifts, lambda_j = w^(-j alpha')/2 + w^(-j beta')/4 +
/// w^(-j gamma')/4. Flat exactly when (n/d) divides j.
pub fn eigenvalues(params: &WalkParams) -> Spectrum {
    let n = params.n;
    let roots = unit_roots(n);
    let neg = |j: u64, shift: u64| roots[((n - (j * shift) % n) % n) as usize];
    let lambdas: Vec<Complex64> = (0..n)
        .map(|j| {
            0.5 * neg(j, params.alpha_log)
                + 0.25 * neg(j, params.beta_log)
                + 0.25 * neg(j, params.gamma_log)
        })
        .collect();
    let period = n / params.d;
    let flat_set: BTreeSet<u64> = (0..n).filter(|j| j % period == 0).collect();
    Spectrum { n, lambdas, flat_set }
}

/// The limiting law after k steps: uniform mass d/n on the coset
/// k alpha' + d Z_n.
pub fn limiting(params: &WalkParams, k: u64) -> Distribution {
    let n = params.n;
    let start = ((k % n) * (params.alpha_log % n)) % n;
    let mut probs = vec![0.0f64; n as usize];
    let mass = params.d as f64 / n as f64;
    let mut point = start;
    for _ in 0..(n / params.d) {
        probs[point as usize] = mass;
        point = (point + params.d) % n;
    }
    Distribution::new(probs)
}

fn lambda_power(lambda: Complex64, k: u64) -> Complex64 {
    if k == 0 {
        return Complex64::one();
    }
    let r = lambda.norm();
    if r == 0.0 {
        return Complex64::zero();
    }
    let magnitude = (k as f64 * r.ln()).exp();
    let (sin, cos) = (k as f64 * lambda.arg()).sin_cos();
    Complex64::new(magnitude * cos, magnitude * sin)
}

/// Exact law after k steps by inverse character sum, O(n^2). Flat
/// eigenvalue powers are evaluated through integer exponent arithmetic, so
/// the result stays accurate for arbitrarily large k.
pub fn sigma_fourier(params: &WalkParams, k: u64) -> Distribution {
    let n = params.n;
    let roots = unit_roots(n);
    let spectrum = eigenvalues(params);
    let powers: Vec<Complex64> = (0..n)
        .map(|j| {
            if spectrum.flat_set.contains(&j) {
                // lambda_j = w^(-j alpha'), so its k-th power is the root
                // at -(j alpha' k) mod n, exactly.
                let e = ((j * (params.alpha_log % n)) % n) * (k % n) % n;
                roots[((n - e) % n) as usize]
            } else {
                lambda_power(spectrum.lambdas[j as usize], k)
            }
        })
        .collect();
    let scale = 1.0 / n as f64;
    let probs: Vec<f64> = (0..n)
        .map(|x| {
            let mut acc = Complex64::zero();
            for j in 0..n {
                acc += powers[j as usize] * roots[((j * x) % n) as usize];
            }
            let value = acc.re * scale;
            if value < 0.0 {
                debug_assert!(value > -1e-9, "inversion produced {value}");
                0.0
            } else {
                value
            }
        })
        .collect();
    Distribution::new(probs)
}

/// Total variation distance: half the L1 distance.
pub fn tv(u: &Distribution, v: &Distribution) -> Result<f64, SpectralError> {
    if u.n() != v.n() {
        return Err(SpectralError::SupportMismatch(u.n(), v.n()));
    }
    Ok(0.5
        * u.probs()
            .iter()
            .zip(v.probs())
            .map(|(x, y)| (x - y).abs())
            .sum::<f64>())
}

/// Scans j = 1..n-1, skipping the flat indices (where the frequency point
/// is zero), for the minimal integer squared norm
/// s_j = cr(ja)^2 + cr(jb)^2 with centered residues mod n.
pub fn minimal_norm(params: &WalkParams) -> Result<LatticeInfo, SpectralError> {
    let n = params.n;
    let (a, b) = (params.a % n, params.b % n);
    if a == 0 && b == 0 {
        return Err(SpectralError::TrivialLattice);
    }
    let period = n / params.d;
    let mut best: Option<(u64, u64)> = None;
    for j in 1..n {
        if j % period == 0 {
            continue;
        }
        let ra = centered_residue(((j * a) % n) as i64, n);
        let rb = centered_residue(((j * b) % n) as i64, n);
        let s = (ra * ra + rb * rb) as u64;
        if best.map_or(true, |(smin, _)| s < smin) {
            best = Some((s, j));
        }
    }
    let (s_min, argmin_j) = best.expect("a nonzero offset yields at least one nonzero point");
    Ok(LatticeInfo { n, a, b, s_min, argmin_j })
}

/// Certified upper bounds after k steps. prop62 bounds the squared total
/// variation distance by 11 d e^(-k delta^2); lemma41_sum bounds the
/// squared L1 distance by the sum of non-flat |lambda_j|^(2k).
pub fn bound_upper(params: &WalkParams, k: u64) -> Result<UpperBounds, SpectralError> {
    let lattice = minimal_norm(params)?;
    let prop62 = 11.0 * params.d as f64 * (-(k as f64) * lattice.delta_sq()).exp();
    let spectrum = eigenvalues(params);
    let lemma41_sum = (0..params.n)
        .filter(|j| !spectrum.flat_set.contains(j))
        .map(|j| {
            let r = spectrum.lambdas[j as usize].norm();
            if k == 0 {
                1.0
            } else if r == 0.0 {
                0.0
            } else {
                (2.0 * k as f64 * r.ln()).exp()
            }
        })
        .sum();
    Ok(UpperBounds { prop62, lemma41_sum })
}

/// Smallest k whose certified bound guarantees total variation at most
/// eps: the least k with 11 d e^(-k delta^2) <= eps^2.
pub fn mixing_k_star(params: &WalkParams, eps: f64) -> Result<u64, SpectralError> {
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    let lattice = minimal_norm(params)?;
    let delta_sq = lattice.delta_sq();
    let target = eps * eps;
    let bound = |k: u64| 11.0 * params.d as f64 * (-(k as f64) * delta_sq).exp();
    let raw = (11.0 * params.d as f64 / target).ln() / delta_sq;
    let mut k = if raw <= 0.0 { 0 } else { raw.ceil() as u64 };
    while bound(k) > target {
        k += 1;
    }
    while k > 0 && bound(k - 1) <= target {
        k -= 1;
    }
    Ok(k)
}

fn ln_factorials(k: u64) -> Vec<f64> {
    let mut table = Vec::with_capacity(k as usize + 1);
    table.push(0.0);
    let mut acc = 0.0;
    for i in 1..=k {
        acc += (i as f64).ln();
        table.push(acc);
    }
    table
}

fn witness_window(k: u64, lambda: f64) -> (u64, u64) {
    // A 1e-9 nudge keeps integer boundary points inside the window
    // despite the inexact square root.
    let center = k as f64 / 4.0;
    let half = lambda * (k as f64).sqrt();
    let lo = (center - half - 1e-9).ceil().max(0.0) as u64;
    let hi = ((center + half + 1e-9).floor() as u64).min(k);
    (lo, hi)
}

fn witness_set(params: &WalkParams, k: u64, lo: u64, hi: u64) -> BTreeSet<u64> {
    let n = params.n;
    let mut s = BTreeSet::new();
    for x in lo..=hi {
        for y in lo..=hi.min(k - x) {
            let z = k - x - y;
            let point = (z % n * (params.alpha_log % n)
                + x % n * (params.beta_log % n)
                + y % n * (params.gamma_log % n))
                % n;
            s.insert(point);
        }
    }
    s
}

/// Witness-set lower bound on the distance after k steps. The set S
/// collects the reduced positions of step histories whose beta and gamma
/// counts both lie within lambda sqrt(k) of k/4; sigma_mass_lb is the
/// exact multinomial mass of those histories (log-space accumulation) and
/// phi_mass_ub = |S| d/n dominates the limit law's mass on S.
pub fn witness_lower(params: &WalkParams, k: u64, lambda: f64) -> WitnessRecord {
    assert!(k >= 1, "the witness construction needs at least one step");
    let (lo, hi) = witness_window(k, lambda);
    let s = witness_set(params, k, lo, hi);
    let lf = ln_factorials(k);
    let ln2 = std::f64::consts::LN_2;
    let mut sigma_mass_lb = 0.0;
    for x in lo..=hi {
        for y in lo..=hi.min(k - x) {
            let z = k - x - y;
            let log_term = lf[k as usize]
                - lf[z as usize]
                - lf[x as usize]
                - lf[y as usize]
                - (k + x + y) as f64 * ln2;
            sigma_mass_lb += log_term.exp();
        }
    }
    let phi_mass_ub = s.len() as f64 * params.d as f64 / params.n as f64;
    WitnessRecord { s, sigma_mass_lb: sigma_mass_lb.min(1.0), phi_mass_ub }
}

/// Exact-rational version of witness_lower, for k up to 200.
pub fn witness_lower_exact(params: &WalkParams, k: u64, lambda: f64) -> WitnessRecordExact {
    assert!(k >= 1, "the witness construction needs at least one step");
    assert!(k <= 200, "exact factorials are kept to k <= 200");
    let (lo, hi) = witness_window(k, lambda);
    let s = witness_set(params, k, lo, hi);
    let factorial = |m: u64| -> BigInt {
        let mut acc = BigInt::one();
        for i in 2..=m {
            acc *= BigInt::from(i);
        }
        acc
    };
    let k_fact = factorial(k);
    let mut sigma_mass_lb: Ratio<BigInt> = Ratio::zero();
    for x in lo..=hi {
        for y in lo..=hi.min(k - x) {
            let z = k - x - y;
            let coeff = &k_fact / (factorial(z) * factorial(x) * factorial(y));
            let denom = BigInt::one() << (k + x + y) as usize;
            sigma_mass_lb += Ratio::new(coeff, denom);
        }
    }
    let phi_mass_ub = Ratio::new(
        BigInt::from(s.len() as u64 * params.d),
        BigInt::from(params.n),
    );
    WitnessRecordExact { s, sigma_mass_lb, phi_mass_ub }
}
