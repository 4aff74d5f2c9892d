//! Exact computer algebra for Witt vectors, formal group laws, restricted
//! Lie algebras, θ-modules with their Bockstein calculus, and spectral
//! sequences of filtered complexes.
//!
//! Everything is computed exactly: rationals are arbitrary precision,
//! residues are taken modulo `p^k`, and series are truncated by explicit
//! weighted-degree bounds rather than approximated.

pub mod fgl;
pub mod gadual;
pub mod liealg;
pub mod linalg;
pub mod ring;
pub mod specseq;
pub mod witt;

/// Trial-division primality test, adequate for the small primes used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
