//! Constructive short bracket expressions: digit expansions along the
//! line spanned by [A, B], explicit certificates whose weight grows
//! linearly in the expansion degree, and exact ball growth for tiny
//! primes as an independent check.

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::field::{inv_mod, mul_mod, pow_mod, PrimeContext};
use crate::sl2::{bracket, gram_triple, is_generating_pair, decompose, Sl2Element, Sl2Error};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiameterError {
    #[error("exact ball enumeration is limited to p <= 7, got {0}")]
    TooLarge(u64),
    #[error("the residue is not reachable within the digit cap")]
    NotReachable,
    #[error("the pair has a zero bracket")]
    DegeneratePair,
    #[error("the pair does not span the algebra")]
    NotGenerating,
    #[error("the Gram determinant vanishes")]
    SingularGram,
    #[error(transparent)]
    Algebra(#[from] Sl2Error),
}

/// Signed generator leaves for bracket certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Leaf {
    Zero,
    PlusA,
    MinusA,
    PlusB,
    MinusB,
}

/// A bracket expression over the two generators. Weight counts leaves;
/// it bounds the number of generator copies consumed by the expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertNode {
    Leaf(Leaf),
    Sum(Box<CertNode>, Box<CertNode>),
    Bracket(Box<CertNode>, Box<CertNode>),
}

impl CertNode {
    pub fn weight(&self) -> u64 {
        match self {
            CertNode::Leaf(_) => 1,
            CertNode::Sum(l, r) | CertNode::Bracket(l, r) => l.weight() + r.weight(),
        }
    }

    pub fn eval(&self, a: &Sl2Element, b: &Sl2Element) -> Result<Sl2Element, Sl2Error> {
        match self {
            CertNode::Leaf(Leaf::Zero) => Ok(Sl2Element::zero(a.modulus())),
            CertNode::Leaf(Leaf::PlusA) => Ok(a.clone()),
            CertNode::Leaf(Leaf::MinusA) => Ok(-a.clone()),
            CertNode::Leaf(Leaf::PlusB) => Ok(b.clone()),
            CertNode::Leaf(Leaf::MinusB) => Ok(-b.clone()),
            CertNode::Sum(l, r) => Ok(l.eval(a, b)? + r.eval(a, b)?),
            CertNode::Bracket(l, r) => bracket(&l.eval(a, b)?, &r.eval(a, b)?),
        }
    }
}

/// A bracket expression together with the element it claims to produce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightCertificate {
    pub root: CertNode,
    pub claimed: Sl2Element,
}

impl WeightCertificate {
    pub fn weight(&self) -> u64 {
        self.root.weight()
    }

    /// Re-evaluates the expression from the given generators and compares
    /// against the claim.
    pub fn verify(&self, a: &Sl2Element, b: &Sl2Element) -> Result<bool, Sl2Error> {
        Ok(self.root.eval(a, b)? == self.claimed)
    }
}

/// Certificate for an arbitrary target, with the largest digit-expansion
/// degree used by any of its line segments.
#[derive(Debug, Clone)]
pub struct FullWitness {
    pub certificate: WeightCertificate,
    pub max_degree: u64,
}

fn rotate(set: &BigUint, shift: u64, p: u64, mask: &BigUint) -> BigUint {
    if shift == 0 {
        return set.clone();
    }
    ((set << shift as usize) | (set >> (p - shift) as usize)) & mask
}

fn base_level(p: u64) -> BigUint {
    let mut level = BigUint::ZERO;
    level.set_bit(0, true);
    level.set_bit(1 % p, true);
    level.set_bit(p - 1, true);
    level
}

fn next_level(level: &BigUint, step: u64, p: u64, mask: &BigUint) -> BigUint {
    level | rotate(level, step % p, p, mask) | rotate(level, (p - step % p) % p, p, mask)
}

/// Number of rounds until the sets P_0 = {0, 1, -1}, P_n = P_{n-1} +
/// a^n {-1, 0, 1} cover all of Z_p, or None if `cap` rounds do not
/// suffice.
pub fn pn_cover_time(ctx: &PrimeContext, a: u64, cap: u64) -> Option<u64> {
    let p = ctx.p;
    let mask = (BigUint::one() << p as usize) - BigUint::one();
    let mut level = base_level(p);
    for n in 0..=cap {
        if level == mask {
            return Some(n);
        }
        level = next_level(&level, pow_mod(a, n + 1, p), p, &mask);
    }
    None
}

/// Digits b_0..b_r in {-1, 0, 1} with sum b_i a^i = c mod p and r minimal,
/// found by growing the reachable sets and walking back from the top,
/// preferring 0, then +1, then -1 at each position.
pub fn digit_expansion(ctx: &PrimeContext, a: u64, c: u64, cap: u64) -> Result<Vec<i8>, DiameterError> {
    let p = ctx.p;
    let c = c % p;
    if c == 0 {
        return Ok(vec![0]);
    }
    let mask = (BigUint::one() << p as usize) - BigUint::one();
    let mut levels = vec![base_level(p)];
    let mut top = loop {
        let n = levels.len() - 1;
        if levels[n].bit(c) {
            break n;
        }
        if n as u64 >= cap {
            return Err(DiameterError::NotReachable);
        }
        let next = next_level(&levels[n], pow_mod(a, n as u64 + 1, p), p, &mask);
        levels.push(next);
    };
    let mut digits = vec![0i8; top + 1];
    let mut cur = c;
    while top > 0 {
        let step = pow_mod(a, top as u64, p);
        let mut found = false;
        for d in [0i8, 1, -1] {
            let cand = match d {
                0 => cur,
                1 => (cur + p - step) % p,
                _ => (cur + step) % p,
            };
            if levels[top - 1].bit(cand) {
                digits[top] = d;
                cur = cand;
                found = true;
                break;
            }
        }
        assert!(found, "level membership guarantees a digit");
        top -= 1;
    }
    digits[0] = match cur {
        0 => 0,
        1 => 1,
        _ => {
            assert_eq!(cur, p - 1);
            -1
        }
    };
    Ok(digits)
}

fn signed_bracket(sign: i8) -> CertNode {
    // [A, B] for +1, [B, A] = -[A, B] for -1.
    if sign >= 0 {
        CertNode::Bracket(
            Box::new(CertNode::Leaf(Leaf::PlusA)),
            Box::new(CertNode::Leaf(Leaf::PlusB)),
        )
    } else {
        CertNode::Bracket(
            Box::new(CertNode::Leaf(Leaf::PlusB)),
            Box::new(CertNode::Leaf(Leaf::PlusA)),
        )
    }
}

/// Builds a node evaluating to c [A, B] by a Horner scheme over the digit
/// expansion of c in base alpha: wrapping a node Y in [B, [A, Y]]
/// multiplies its line coefficient by alpha. Returns the node and the
/// expansion degree.
fn line_digit_certificate(
    ctx: &PrimeContext,
    alpha: u64,
    c: u64,
    cap: u64,
) -> Result<(CertNode, u64), DiameterError> {
    if c % ctx.p == 0 {
        return Ok((CertNode::Leaf(Leaf::Zero), 0));
    }
    let digits = digit_expansion(ctx, alpha, c, cap)?;
    let degree = (digits.len() - 1) as u64;
    let top = digits[digits.len() - 1];
    assert!(top != 0, "minimal expansions have a nonzero top digit");
    let mut node = signed_bracket(top);
    for i in (0..digits.len() - 1).rev() {
        node = CertNode::Bracket(
            Box::new(CertNode::Leaf(Leaf::PlusB)),
            Box::new(CertNode::Bracket(
                Box::new(CertNode::Leaf(Leaf::PlusA)),
                Box::new(node),
            )),
        );
        if digits[i] != 0 {
            node = CertNode::Sum(Box::new(node), Box::new(signed_bracket(digits[i])));
        }
    }
    Ok((node, degree))
}

/// Certificate for c [A, B], of weight at most 4r + 2 where r is the
/// digit-expansion degree of c in base alpha = 2 <A, B>.
pub fn line_witness(
    ctx: &PrimeContext,
    a: &Sl2Element,
    b: &Sl2Element,
    c: u64,
) -> Result<WeightCertificate, DiameterError> {
    let x0 = bracket(a, b)?;
    if x0.is_zero() {
        return Err(DiameterError::DegeneratePair);
    }
    let gt = gram_triple(a, b)?;
    let (root, _) = line_digit_certificate(ctx, gt.alpha, c % ctx.p, 2 * ctx.p)?;
    Ok(WeightCertificate {
        root,
        claimed: x0.scale(c),
    })
}

/// True when the pair supports certificates for every target: it
/// generates, alpha is a unit, the Gram determinant is a unit, and the
/// digit sets for base alpha cover Z_p.
pub fn pair_admits_witnesses(ctx: &PrimeContext, a: &Sl2Element, b: &Sl2Element) -> bool {
    let Ok(x0) = bracket(a, b) else {
        return false;
    };
    if x0.is_zero() || !is_generating_pair(a, b).expect("moduli already checked") {
        return false;
    }
    let gt = gram_triple(a, b).expect("moduli already checked");
    let det = (mul_mod(gt.alpha, gt.alpha, ctx.p) + ctx.p
        - mul_mod(gt.beta, gt.gamma, ctx.p))
        % ctx.p;
    gt.alpha != 0 && det != 0 && pn_cover_time(ctx, gt.alpha, 2 * ctx.p).is_some()
}

/// Certificate for an arbitrary target element. The target is decomposed
/// as x A + y B + z [A, B]; the A- and B-components are produced as
/// [A, r [A, B]] and [B, s [A, B]] with (r, s) solved from the Gram data,
/// and each line coefficient gets its own digit certificate. Total weight
/// is at most 12r + 8 for max degree r.
pub fn full_witness(
    ctx: &PrimeContext,
    a: &Sl2Element,
    b: &Sl2Element,
    target: &Sl2Element,
) -> Result<FullWitness, DiameterError> {
    let p = ctx.p;
    let x0 = bracket(a, b)?;
    if x0.is_zero() {
        return Err(DiameterError::DegeneratePair);
    }
    let gt = gram_triple(a, b)?;
    let det = (mul_mod(gt.alpha, gt.alpha, p) + p - mul_mod(gt.beta, gt.gamma, p)) % p;
    if det == 0 {
        return Err(DiameterError::SingularGram);
    }
    let (x, y, z) = match decompose(target, a, b) {
        Ok(coeffs) => coeffs,
        Err(Sl2Error::NotGenerating) => return Err(DiameterError::NotGenerating),
        Err(e) => return Err(DiameterError::Algebra(e)),
    };
    // [A, r[A,B]] + [B, s[A,B]] = (-r alpha - s gamma) A + (r beta + s alpha) B,
    // so solve r alpha + s gamma = -x, r beta + s alpha = y.
    let inv_det = inv_mod(det, p);
    let num_r = (p - (mul_mod(x, gt.alpha, p) + mul_mod(gt.gamma, y, p)) % p) % p;
    let num_s = (mul_mod(gt.alpha, y, p) + mul_mod(x, gt.beta, p)) % p;
    let r = mul_mod(num_r, inv_det, p);
    let s = mul_mod(num_s, inv_det, p);
    let cap = 2 * p;
    let mut legs: Vec<CertNode> = Vec::new();
    let mut max_degree = 0u64;
    for (leaf, coeff) in [(Leaf::PlusA, r), (Leaf::PlusB, s)] {
        if coeff != 0 {
            let (node, degree) = line_digit_certificate(ctx, gt.alpha, coeff, cap)?;
            max_degree = max_degree.max(degree);
            legs.push(CertNode::Bracket(
                Box::new(CertNode::Leaf(leaf)),
                Box::new(node),
            ));
        }
    }
    if z != 0 {
        let (node, degree) = line_digit_certificate(ctx, gt.alpha, z, cap)?;
        max_degree = max_degree.max(degree);
        legs.push(node);
    }
    let root = legs
        .into_iter()
        .reduce(|acc, leg| CertNode::Sum(Box::new(acc), Box::new(leg)))
        .unwrap_or(CertNode::Leaf(Leaf::Zero));
    Ok(FullWitness {
        certificate: WeightCertificate {
            root,
            claimed: target.clone(),
        },
        max_degree,
    })
}

const BALL_PRIME_CAP: u64 = 7;

struct BallTables {
    size: usize,
    add: Vec<u16>,
    bracket: Vec<u16>,
}

fn build_tables(p: u64) -> BallTables {
    let p = p as i64;
    let size = (p * p * p) as usize;
    let coords: Vec<(i64, i64, i64)> = (0..size as i64)
        .map(|i| (i / (p * p), (i / p) % p, i % p))
        .collect();
    let index = |x11: i64, x12: i64, x21: i64| ((x11 * p + x12) * p + x21) as u16;
    let md = |v: i64| v.rem_euclid(p);
    let mut add = vec![0u16; size * size];
    let mut bracket = vec![0u16; size * size];
    for (i, &(a11, a12, a21)) in coords.iter().enumerate() {
        for (j, &(b11, b12, b21)) in coords.iter().enumerate() {
            add[i * size + j] = index(md(a11 + b11), md(a12 + b12), md(a21 + b21));
            let c11 = md(a12 * b21 - b12 * a21);
            let c12 = md(2 * (a11 * b12 - a12 * b11));
            let c21 = md(2 * (a21 * b11 - a11 * b21));
            bracket[i * size + j] = index(c11, c12, c21);
        }
    }
    BallTables {
        size,
        add,
        bracket,
    }
}

fn element_index(e: &Sl2Element, p: u64) -> u16 {
    let (x11, x12, x21) = e.coords();
    ((x11 * p + x12) * p + x21) as u16
}

fn seed_level(a: &Sl2Element, b: &Sl2Element, p: u64, size: usize) -> (Vec<bool>, Vec<u16>) {
    let mut level = vec![false; size];
    let mut members = Vec::new();
    for e in [
        Sl2Element::zero(p),
        a.clone(),
        -a.clone(),
        b.clone(),
        -b.clone(),
    ] {
        let idx = element_index(&e, p);
        if !level[idx as usize] {
            level[idx as usize] = true;
            members.push(idx);
        }
    }
    (level, members)
}

fn grow_level(tables: &BallTables, members: &[Vec<u16>], k: usize) -> (Vec<bool>, Vec<u16>) {
    let mut level = vec![false; tables.size];
    let mut new_members = Vec::new();
    for j in 1..k {
        for &u in &members[j] {
            let row = u as usize * tables.size;
            for &v in &members[k - j] {
                for w in [tables.add[row + v as usize], tables.bracket[row + v as usize]] {
                    if !level[w as usize] {
                        level[w as usize] = true;
                        new_members.push(w);
                    }
                }
            }
        }
    }
    (level, new_members)
}

/// Membership tables for the sets S^1..S^k_max, where S^1 = {0, A, -A,
/// B, -B} and S^k is the union over splits of pairwise sums and brackets.
/// Index 0 is an unused empty placeholder so that index k answers for
/// S^k. Only p <= 7 is supported; once a level saturates, later levels
/// are copied without recomputation.
pub fn ball_growth(
    ctx: &PrimeContext,
    a: &Sl2Element,
    b: &Sl2Element,
    k_max: usize,
) -> Result<Vec<Vec<bool>>, DiameterError> {
    if ctx.p > BALL_PRIME_CAP {
        return Err(DiameterError::TooLarge(ctx.p));
    }
    let tables = build_tables(ctx.p);
    let mut levels = vec![vec![false; tables.size]];
    let mut members = vec![Vec::new()];
    let (l1, m1) = seed_level(a, b, ctx.p, tables.size);
    levels.push(l1);
    members.push(m1);
    for k in 2..=k_max {
        if members[k - 1].len() == tables.size {
            levels.push(levels[k - 1].clone());
            members.push(members[k - 1].clone());
            continue;
        }
        let (level, mem) = grow_level(&tables, &members, k);
        levels.push(level);
        members.push(mem);
    }
    Ok(levels)
}

/// Smallest k with S^k equal to the whole algebra, by direct growth.
pub fn exact_diameter(
    ctx: &PrimeContext,
    a: &Sl2Element,
    b: &Sl2Element,
) -> Result<u64, DiameterError> {
    if ctx.p > BALL_PRIME_CAP {
        return Err(DiameterError::TooLarge(ctx.p));
    }
    if !is_generating_pair(a, b)? {
        return Err(DiameterError::NotGenerating);
    }
    let tables = build_tables(ctx.p);
    let mut members = vec![Vec::new()];
    let (_, m1) = seed_level(a, b, ctx.p, tables.size);
    members.push(m1);
    let mut k = 1;
    loop {
        if members[k].len() == tables.size {
            return Ok(k as u64);
        }
        k += 1;
        assert!(k <= 100, "a generating pair must saturate quickly");
        let (_, mem) = grow_level(&tables, &members, k);
        members.push(mem);
    }
}
