//! Random bracket walks on the trace-zero 2x2 matrices over a prime
//! field, and everything needed to study them exactly: the reduction of
//! the walk to a random shift on a cyclic group, Fourier-side mixing
//! bounds with certified constants, the limiting distribution and its
//! lower-bound witnesses, counting of Gram fibers, Euler-product limit
//! probabilities with constructive prime witnesses, and short bracket
//! certificates reaching any target element.
//!
//! All group- and field-level arithmetic is exact over u64/u128 or big
//! integers; floating point enters only where a quantity is genuinely
//! real-valued (eigenvalue moduli, total variation, log-domain tails),
//! and every float-backed verdict is paired with an integer or rational
//! certificate where one exists.

pub mod density;
pub mod diameter;
pub mod field;
pub mod gram;
pub mod rng;
pub mod sl2;
pub mod spectral;
pub mod walk;
