use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ModPrimePower, Modulus, RingElem, RingError};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// `p`-adic valuation of a rational; zero has infinite valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn at_least(self, e: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= e,
            Valuation::Infinite => true,
        }
    }
}

/// Shorthand for an integral rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num / den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn valuation_int(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(numerator) - v_p(denominator)`.
pub fn valuation_p(x: &Rational, p: u64) -> Valuation {
    if Zero::is_zero(x) {
        return Valuation::Infinite;
    }
    Valuation::Finite(valuation_int(x.numer(), p) - valuation_int(x.denom(), p))
}

/// Divides `x` by `p^e`, failing unless the quotient stays `p`-integral
/// relative to `x` (that is, unless `v_p(x) >= e`).
pub fn exact_div_p(x: &Rational, e: u32, p: u64) -> Result<Rational, RingError> {
    if !valuation_p(x, p).at_least(i64::from(e)) {
        return Err(RingError::NotDivisible {
            value: x.to_string(),
            p,
            exponent: e,
        });
    }
    Ok(x / Rational::from_integer(BigInt::from(p).pow(e)))
}

/// True when the denominator is 1.
pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Reduction `Z_(p) -> Z/p^k`. Fails on inputs that are not `p`-integral.
pub fn reduce_mod(x: &Rational, modulus: Modulus) -> Result<ModPrimePower, RingError> {
    let n = BigInt::from(modulus.order());
    let num = x.numer().mod_floor(&n).to_u64().expect("residue fits");
    let den = x.denom().mod_floor(&n).to_u64().expect("residue fits");
    let den = ModPrimePower::new(modulus, den);
    match den.try_inverse() {
        Some(inv) => Ok(ModPrimePower::new(modulus, num).times(&inv)),
        None => Err(RingError::NotIntegral {
            value: x.to_string(),
            p: modulus.prime(),
        }),
    }
}

impl RingElem for Rational {
    type Ctx = ();

    fn ctx(&self) {}

    fn zero(_: &()) -> Self {
        <Rational as Zero>::zero()
    }

    fn one(_: &()) -> Self {
        <Rational as One>::one()
    }

    fn from_integer(_: &(), n: &BigInt) -> Self {
        Rational::from_integer(n.clone())
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn minus(&self, other: &Self) -> Self {
        self - other
    }

    fn times(&self, other: &Self) -> Self {
        self * other
    }

    fn negate(&self) -> Self {
        -self
    }

    fn try_inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(valuation_p(&rat(4, 3), 2), Valuation::Finite(2));
        assert_eq!(valuation_p(&rat(1, 2), 2), Valuation::Finite(-1));
        assert_eq!(valuation_p(&int(0), 5), Valuation::Infinite);
        assert_eq!(valuation_p(&rat(-50, 7), 5), Valuation::Finite(2));
    }

    #[test]
    fn exact_division() {
        assert_eq!(exact_div_p(&int(12), 2, 2).unwrap(), int(3));
        assert_eq!(exact_div_p(&int(6), 1, 3).unwrap(), int(2));
        assert!(matches!(
            exact_div_p(&int(1), 1, 2),
            Err(RingError::NotDivisible { .. })
        ));
        assert_eq!(exact_div_p(&int(0), 7, 3).unwrap(), int(0));
    }

    #[test]
    fn reduction() {
        let m = Modulus::new(3, 2).unwrap();
        // 1/2 = 5 mod 9
        assert_eq!(reduce_mod(&rat(1, 2), m).unwrap().value(), 5);
        assert_eq!(reduce_mod(&rat(-1, 1), m).unwrap().value(), 8);
        assert!(reduce_mod(&rat(1, 3), m).is_err());
    }
}
