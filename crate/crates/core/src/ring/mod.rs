//! Exact coefficient arithmetic and truncated weighted series.
//!
//! Two coefficient rings are provided: [`Rational`] (characteristic zero,
//! with `p`-adic valuation queries) and [`ModPrimePower`] (residues modulo
//! `p^k`). Both implement [`RingElem`], as does [`WeightedSeries`] itself, so
//! Witt vector arithmetic can be evaluated over scalars or symbolically.

mod modp;
mod rational;
mod series;

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

pub use modp::{ModPrimePower, Modulus};
pub use rational::{
    exact_div_p, int, is_integral, rat, reduce_mod, valuation_p, Rational, Valuation,
};
pub use series::{Monomial, SeriesRing, SeriesRingBuilder, Variable, WeightedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("{value} is not divisible by {p}^{exponent}")]
    NotDivisible { value: String, p: u64, exponent: u32 },
    #[error("series live in different rings")]
    IncompatibleRings,
    #[error("cannot substitute into `{variable}`: binding has a nonzero constant term")]
    NonComposable { variable: String },
    #[error("operation needs an invertible factorial; coefficient ring has characteristic dividing {0}")]
    InvalidCoefficientRing(u64),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("{value} is not {p}-integral")]
    NotIntegral { value: String, p: u64 },
    #[error("series is not nilpotent under the ring's truncation")]
    NotNilpotent,
    #[error("term {term} is not divisible by `{variable}`")]
    NotDivisibleByVariable { variable: String, term: String },
    #[error("invalid modulus {p}^{k}")]
    InvalidModulus { p: u64, k: u32 },
}

/// A commutative ring element that knows its own ring.
///
/// The context carries whatever runtime data the ring needs (nothing for
/// rationals, the modulus for residues, the variable layout for series).
pub trait RingElem: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    type Ctx: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_integer(ctx: &Self::Ctx, n: &BigInt) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    /// Multiplicative inverse, if it exists.
    fn try_inverse(&self) -> Option<Self>;

    fn zero_like(&self) -> Self {
        Self::zero(&self.ctx())
    }

    fn one_like(&self) -> Self {
        Self::one(&self.ctx())
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}
