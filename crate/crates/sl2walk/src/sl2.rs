//! Trace-zero 2x2 matrices over F_p: Lie bracket, the invariant bilinear
//! form, Gram data of a matrix pair, and adjoint operators in the basis
//! (A, B, [A, B]).

use std::fmt;
use std::ops::{Add, Neg, Sub};

use thiserror::Error;

use crate::field::{inv_mod, mul_mod};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Sl2Error {
    #[error("elements live over different primes: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("the pair does not span the algebra together with its bracket")]
    NotGenerating,
}

/// A trace-zero matrix [[a11, a12], [a21, -a11]] with entries mod p.
///
/// Only the three free coordinates are stored; `a22` is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sl2Element {
    p: u64,
    a11: u64,
    a12: u64,
    a21: u64,
}

/// Which of the two walk generators an operator or step refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gen {
    A,
    B,
}

/// The three pairings (2<A,B>, 2<A,A>, 2<B,B>) that control the reduced walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GramTriple {
    pub alpha: u64,
    pub beta: u64,
    pub gamma: u64,
}

impl Sl2Element {
    pub fn new(p: u64, a11: u64, a12: u64, a21: u64) -> Self {
        debug_assert!(p >= 3);
        Self { p, a11: a11 % p, a12: a12 % p, a21: a21 % p }
    }

    pub fn zero(p: u64) -> Self {
        Self { p, a11: 0, a12: 0, a21: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a11 == 0 && self.a12 == 0 && self.a21 == 0
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn a11(&self) -> u64 {
        self.a11
    }

    pub fn a12(&self) -> u64 {
        self.a12
    }

    pub fn a21(&self) -> u64 {
        self.a21
    }

    pub fn a22(&self) -> u64 {
        (self.p - self.a11) % self.p
    }

    /// The stored coordinates (a11, a12, a21).
    pub fn coords(&self) -> (u64, u64, u64) {
        (self.a11, self.a12, self.a21)
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.p;
        Self {
            p: self.p,
            a11: mul_mod(c, self.a11, self.p),
            a12: mul_mod(c, self.a12, self.p),
            a21: mul_mod(c, self.a21, self.p),
        }
    }

    fn check_same_field(&self, other: &Self) -> Result<(), Sl2Error> {
        if self.p != other.p {
            Err(Sl2Error::ModulusMismatch(self.p, other.p))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Sl2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a11, self.a12, self.a21, self.a22())
    }
}

impl Add for Sl2Element {
    type Output = Sl2Element;
    fn add(self, rhs: Sl2Element) -> Sl2Element {
        assert_eq!(self.p, rhs.p, "cannot add elements over different primes");
        Sl2Element {
            p: self.p,
            a11: (self.a11 + rhs.a11) % self.p,
            a12: (self.a12 + rhs.a12) % self.p,
            a21: (self.a21 + rhs.a21) % self.p,
        }
    }
}

impl Sub for Sl2Element {
    type Output = Sl2Element;
    fn sub(self, rhs: Sl2Element) -> Sl2Element {
        assert_eq!(self.p, rhs.p, "cannot subtract elements over different primes");
        Sl2Element {
            p: self.p,
            a11: (self.a11 + self.p - rhs.a11) % self.p,
            a12: (self.a12 + self.p - rhs.a12) % self.p,
            a21: (self.a21 + self.p - rhs.a21) % self.p,
        }
    }
}

impl Neg for Sl2Element {
    type Output = Sl2Element;
    fn neg(self) -> Sl2Element {
        Sl2Element {
            p: self.p,
            a11: (self.p - self.a11) % self.p,
            a12: (self.p - self.a12) % self.p,
            a21: (self.p - self.a21) % self.p,
        }
    }
}

/// Lie bracket [X, Y] = XY − YX, stays trace-zero. In coordinates:
/// c11 = x12 y21 − y12 x21, c12 = 2(x11 y12 − x12 y11),
/// c21 = 2(x21 y11 − x11 y21).
pub fn bracket(x: &Sl2Element, y: &Sl2Element) -> Result<Sl2Element, Sl2Error> {
    x.check_same_field(y)?;
    let p = x.p;
    let sub = |a: u64, b: u64| (a + p - b % p) % p;
    let c11 = sub(mul_mod(x.a12, y.a21, p), mul_mod(y.a12, x.a21, p));
    let c12 = mul_mod(2, sub(mul_mod(x.a11, y.a12, p), mul_mod(x.a12, y.a11, p)), p);
    let c21 = mul_mod(2, sub(mul_mod(x.a21, y.a11, p), mul_mod(x.a11, y.a21, p)), p);
    Ok(Sl2Element { p, a11: c11, a12: c12, a21: c21 })
}

/// The invariant form <X, Y> = 2 x11 y11 + x12 y21 + x21 y12, equal to
/// tr(XY); in particular <X, X> = −2 det X.
pub fn inner(x: &Sl2Element, y: &Sl2Element) -> Result<u64, Sl2Error> {
    x.check_same_field(y)?;
    let p = x.p;
    let mut acc = mul_mod(2, mul_mod(x.a11, y.a11, p), p);
    acc = (acc + mul_mod(x.a12, y.a21, p)) % p;
    acc = (acc + mul_mod(x.a21, y.a12, p)) % p;
    Ok(acc)
}

/// Gram data of the pair: alpha = 2<A,B>, beta = 2<A,A>, gamma = 2<B,B>.
pub fn gram_triple(a: &Sl2Element, b: &Sl2Element) -> Result<GramTriple, Sl2Error> {
    let p = a.p;
    Ok(GramTriple {
        alpha: mul_mod(2, inner(a, b)?, p),
        beta: mul_mod(2, inner(a, a)?, p),
        gamma: mul_mod(2, inner(b, b)?, p),
    })
}

/// Matrix of ad_A or ad_B acting on column vectors in the ordered basis
/// (A, B, [A, B]). Both operators kill their own generator, send the other
/// generator to ±[A, B], and fold the bracket back into the plane:
/// ad_A [A,B] = −alpha A + beta B, ad_B [A,B] = −gamma A + alpha B.
pub fn adjoint_matrix(side: Gen, gt: &GramTriple, p: u64) -> [[u64; 3]; 3] {
    let neg = |v: u64| (p - v % p) % p;
    match side {
        Gen::A => [
            [0, 0, neg(gt.alpha)],
            [0, 0, gt.beta % p],
            [0, 1, 0],
        ],
        Gen::B => [
            [0, 0, neg(gt.gamma)],
            [0, 0, gt.alpha % p],
            [neg(1), 0, 0],
        ],
    }
}

fn det3_mod(m: [[u64; 3]; 3], p: u64) -> u64 {
    let mul = |a, b| mul_mod(a, b, p);
    let sub = |a: u64, b: u64| (a + p - b % p) % p;
    let c0 = sub(mul(m[1][1], m[2][2]), mul(m[1][2], m[2][1]));
    let c1 = sub(mul(m[1][0], m[2][2]), mul(m[1][2], m[2][0]));
    let c2 = sub(mul(m[1][0], m[2][1]), mul(m[1][1], m[2][0]));
    let t = (mul(m[0][0], c0) + mul(m[0][2], c2)) % p;
    sub(t, mul(m[0][1], c1))
}

/// Whether (A, B, [A, B]) is a basis of the whole trace-zero algebra.
pub fn is_generating_pair(a: &Sl2Element, b: &Sl2Element) -> Result<bool, Sl2Error> {
    let x0 = bracket(a, b)?;
    let m = [
        [a.a11, b.a11, x0.a11],
        [a.a12, b.a12, x0.a12],
        [a.a21, b.a21, x0.a21],
    ];
    Ok(det3_mod(m, a.p) != 0)
}

/// Coordinates (r, s, t) with X = rA + sB + t[A,B], by Cramer's rule.
/// Requires a generating pair.
pub fn decompose(
    x: &Sl2Element,
    a: &Sl2Element,
    b: &Sl2Element,
) -> Result<(u64, u64, u64), Sl2Error> {
    x.check_same_field(a)?;
    x.check_same_field(b)?;
    let p = x.p;
    let x0 = bracket(a, b)?;
    let cols = [a.coords(), b.coords(), x0.coords()];
    let base = [
        [cols[0].0, cols[1].0, cols[2].0],
        [cols[0].1, cols[1].1, cols[2].1],
        [cols[0].2, cols[1].2, cols[2].2],
    ];
    let det = det3_mod(base, p);
    if det == 0 {
        return Err(Sl2Error::NotGenerating);
    }
    let det_inv = inv_mod(det, p);
    let target = [x.a11, x.a12, x.a21];
    let mut out = [0u64; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut m = base;
        for row in 0..3 {
            m[row][k] = target[row];
        }
        *slot = mul_mod(det3_mod(m, p), det_inv, p);
    }
    Ok((out[0], out[1], out[2]))
}
