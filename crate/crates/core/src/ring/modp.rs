use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{RingElem, RingError};

/// The modulus `p^k` of a residue ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    p: u64,
    k: u32,
    order: u64,
}

impl Modulus {
    /// `p` must be prime; `p^k` must stay below `2^31` so products fit in a word.
    pub fn new(p: u64, k: u32) -> Result<Self, RingError> {
        if k == 0 || !crate::is_prime(p) {
            return Err(RingError::InvalidModulus { p, k });
        }
        let order = p
            .checked_pow(k)
            .filter(|n| *n < (1 << 31))
            .ok_or(RingError::InvalidModulus { p, k })?;
        Ok(Modulus { p, k, order })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.k
    }

    /// `p^k`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// The same prime with exponent `k - 1`; `None` when `k == 1`.
    pub fn lower(&self) -> Option<Modulus> {
        (self.k > 1).then(|| Modulus::new(self.p, self.k - 1).unwrap())
    }
}

/// A residue modulo `p^k`, with `0 <= value < p^k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModPrimePower {
    modulus: Modulus,
    value: u64,
}

impl ModPrimePower {
    pub fn new(modulus: Modulus, value: u64) -> Self {
        ModPrimePower {
            modulus,
            value: value % modulus.order,
        }
    }

    pub fn from_i64(modulus: Modulus, value: i64) -> Self {
        let n = modulus.order as i64;
        ModPrimePower {
            modulus,
            value: value.rem_euclid(n) as u64,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// Largest `e <= k` with `p^e | value` (`k` for zero).
    pub fn valuation(&self) -> u32 {
        if self.value == 0 {
            return self.modulus.k;
        }
        let mut v = 0;
        let mut x = self.value;
        while x.is_multiple_of(self.modulus.p) {
            x /= self.modulus.p;
            v += 1;
        }
        v
    }

    /// Reduction to a smaller power of the same prime.
    pub fn reduce(&self, target: Modulus) -> ModPrimePower {
        assert_eq!(target.p, self.modulus.p, "reduction changes the prime");
        assert!(target.k <= self.modulus.k, "reduction cannot raise the exponent");
        ModPrimePower::new(target, self.value)
    }

    /// The canonical lift `0 <= value < p^j` into `Z/p^j`, `j >= k`.
    pub fn lift(&self, target: Modulus) -> ModPrimePower {
        assert_eq!(target.p, self.modulus.p);
        assert!(target.k >= self.modulus.k);
        ModPrimePower::new(target, self.value)
    }
}

impl fmt::Debug for ModPrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus.order)
    }
}

impl fmt::Display for ModPrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl RingElem for ModPrimePower {
    type Ctx = Modulus;

    fn ctx(&self) -> Modulus {
        self.modulus
    }

    fn zero(ctx: &Modulus) -> Self {
        ModPrimePower::new(*ctx, 0)
    }

    fn one(ctx: &Modulus) -> Self {
        ModPrimePower::new(*ctx, 1)
    }

    fn from_integer(ctx: &Modulus, n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(ctx.order)).to_u64().unwrap();
        ModPrimePower::new(*ctx, r)
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn plus(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        ModPrimePower::new(self.modulus, self.value + other.value)
    }

    fn minus(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        ModPrimePower::new(self.modulus, self.value + self.modulus.order - other.value)
    }

    fn times(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        ModPrimePower::new(self.modulus, self.value * other.value)
    }

    fn negate(&self) -> Self {
        ModPrimePower::new(self.modulus, self.modulus.order - self.value)
    }

    fn try_inverse(&self) -> Option<Self> {
        if self.value.is_multiple_of(self.modulus.p) {
            return None;
        }
        let n = self.modulus.order as i64;
        let g = (self.value as i64).extended_gcd(&n);
        debug_assert_eq!(g.gcd, 1);
        Some(ModPrimePower::from_i64(self.modulus, g.x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_mod_nine() {
        let m = Modulus::new(3, 2).unwrap();
        let a = ModPrimePower::new(m, 7);
        let b = ModPrimePower::new(m, 5);
        assert_eq!(a.plus(&b).value(), 3);
        assert_eq!(a.minus(&b).value(), 2);
        assert_eq!(b.minus(&a).value(), 7);
        assert_eq!(a.times(&b).value(), 8);
        assert_eq!(a.try_inverse().unwrap().times(&a).value(), 1);
        assert!(ModPrimePower::new(m, 6).try_inverse().is_none());
        assert_eq!(ModPrimePower::new(m, 6).valuation(), 1);
        assert_eq!(ModPrimePower::new(m, 0).valuation(), 2);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(Modulus::new(4, 1).is_err());
        assert!(Modulus::new(2, 0).is_err());
        assert!(Modulus::new(2, 40).is_err());
    }
}
