//! One-dimensional formal group laws over truncated series rings.
//!
//! Laws are series in `v, w` (weight 1), optionally with a deformation
//! parameter `lambda` (weight −1, capped). Morphisms are series in `u`.
//! Identities are checked by exact comparison of truncated series.

mod psi;

use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::ring::{int, rat, Rational, RingElem, RingError, SeriesRing, WeightedSeries};
use crate::witt::WittError;

pub use psi::{
    minimal_coordinates, psi_homomorphism_check, psi_matches_truncated_exponential, psi_series,
    PsiCheck,
};

pub type Poly = WeightedSeries<Rational>;

pub const LAMBDA: &str = "lambda";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FglError {
    #[error("series lacks the variable `{0}`")]
    MissingVariable(&'static str),
    #[error("morphism has a nonzero constant term")]
    NonzeroConstant,
    #[error("{m} Witt coordinates requested but only {max} survive lambda^{cap}")]
    TooManyCoordinates { m: usize, max: usize, cap: u32 },
    #[error("integrality failure: {0}")]
    IntegralityFailure(String),
    #[error("{0} is not prime")]
    InvalidPrime(u64),
    #[error("height must be at least 1")]
    InvalidHeight,
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Witt(#[from] WittError),
}

/// A ring with `lambda` (if `lambda_cap` is given) followed by `names`.
pub fn law_ring(
    lambda_cap: Option<u32>,
    names: &[&str],
    degree: u32,
) -> Arc<SeriesRing<Rational>> {
    let mut b = SeriesRing::builder(());
    if let Some(cap) = lambda_cap {
        b = b.capped(LAMBDA, -1, cap);
    }
    for n in names {
        b = b.var(n, 1);
    }
    b.degree(degree).build()
}

fn lambda_cap_of(ring: &SeriesRing<Rational>) -> Option<u32> {
    ring.index_of(LAMBDA).map(|_| ring.cap(LAMBDA).unwrap_or(0))
}

/// A formal group law `F(v, w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalGroupLaw1D {
    law: Poly,
}

/// Which formal group law axioms hold to the truncation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FglAxioms {
    pub unit: bool,
    pub commutative: bool,
    pub associative: bool,
}

impl FglAxioms {
    pub fn all(&self) -> bool {
        self.unit && self.commutative && self.associative
    }
}

impl FormalGroupLaw1D {
    pub fn new(law: Poly) -> Result<Self, FglError> {
        for v in ["v", "w"] {
            if law.ring().index_of(v).is_none() {
                return Err(FglError::MissingVariable(v));
            }
        }
        Ok(FormalGroupLaw1D { law })
    }

    pub fn series(&self) -> &Poly {
        &self.law
    }

    pub fn ring(&self) -> &Arc<SeriesRing<Rational>> {
        self.law.ring()
    }

    pub fn degree(&self) -> u32 {
        self.ring().degree().unwrap_or(0)
    }

    pub fn lambda_cap(&self) -> Option<u32> {
        lambda_cap_of(self.ring())
    }

    /// `F(a, b)` computed in `target`.
    pub fn apply(
        &self,
        target: &Arc<SeriesRing<Rational>>,
        a: &Poly,
        b: &Poly,
    ) -> Result<Poly, FglError> {
        Ok(self
            .law
            .substitute(target, &[("v", a.clone()), ("w", b.clone())])?)
    }

    /// Specializes `lambda` to a constant.
    pub fn specialize_lambda(&self, value: i64) -> Result<Poly, FglError> {
        let target = law_ring(None, &["v", "w"], self.degree());
        if self.ring().index_of(LAMBDA).is_none() {
            return Ok(self.law.to_ring(&target)?);
        }
        let li = self.ring().index_of(LAMBDA).unwrap();
        let mut acc = Poly::zero(&target);
        for (m, coeff) in self.law.terms() {
            let e = m.exponents();
            let scale = RingElem::pow(&int(value), e[li] as u64).times(coeff);
            let powers: Vec<(&str, u32)> = self
                .ring()
                .variables()
                .iter()
                .zip(e)
                .filter(|(v, _)| v.name != LAMBDA)
                .map(|(v, &x)| (v.name.as_str(), x))
                .collect();
            acc = acc.plus(&Poly::monomial(&target, &powers, scale)?);
        }
        Ok(acc)
    }

    pub fn axioms(&self) -> Result<FglAxioms, FglError> {
        let ring = self.ring();
        let v = Poly::var(ring, "v")?;
        let w = Poly::var(ring, "w")?;
        let zero = Poly::zero(ring);
        let unit = self.apply(ring, &v, &zero)? == v && self.apply(ring, &zero, &w)? == w;
        let commutative = self.apply(ring, &w, &v)? == self.law;

        let abc = law_ring(self.lambda_cap(), &["a", "b", "c"], self.degree());
        let a = Poly::var(&abc, "a")?;
        let b = Poly::var(&abc, "b")?;
        let c = Poly::var(&abc, "c")?;
        let ab = self.apply(&abc, &a, &b)?;
        let bc = self.apply(&abc, &b, &c)?;
        let associative = self.apply(&abc, &ab, &c)? == self.apply(&abc, &a, &bc)?;
        Ok(FglAxioms {
            unit,
            commutative,
            associative,
        })
    }
}

/// True iff unit, commutativity and associativity hold to truncation.
pub fn validate_fgl(f: &FormalGroupLaw1D) -> bool {
    f.axioms().map(|a| a.all()).unwrap_or(false)
}

/// `v + w`.
pub fn additive(degree: u32) -> FormalGroupLaw1D {
    let r = law_ring(None, &["v", "w"], degree);
    let law = Poly::var(&r, "v").unwrap().plus(&Poly::var(&r, "w").unwrap());
    FormalGroupLaw1D { law }
}

/// `v + w + vw`.
pub fn multiplicative(degree: u32) -> FormalGroupLaw1D {
    let r = law_ring(None, &["v", "w"], degree);
    let v = Poly::var(&r, "v").unwrap();
    let w = Poly::var(&r, "w").unwrap();
    FormalGroupLaw1D {
        law: v.plus(&w).plus(&v.times(&w)),
    }
}

/// The deformed law `v + w + lambda v w`, keeping `lambda^0..lambda^cap`.
pub fn g_lambda(lambda_cap: u32, degree: u32) -> FormalGroupLaw1D {
    let r = law_ring(Some(lambda_cap), &["v", "w"], degree);
    let v = Poly::var(&r, "v").unwrap();
    let w = Poly::var(&r, "w").unwrap();
    let l = Poly::var(&r, LAMBDA).unwrap();
    FormalGroupLaw1D {
        law: v.plus(&w).plus(&l.times(&v).times(&w)),
    }
}

/// A series `phi(u)` with zero constant term, possibly involving `lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesMorphism {
    series: Poly,
}

impl SeriesMorphism {
    pub fn new(series: Poly) -> Result<Self, FglError> {
        if series.ring().index_of("u").is_none() {
            return Err(FglError::MissingVariable("u"));
        }
        if !series.constant_term().is_zero() {
            return Err(FglError::NonzeroConstant);
        }
        Ok(SeriesMorphism { series })
    }

    /// The identity `u`.
    pub fn identity(degree: u32) -> Self {
        let r = law_ring(None, &["u"], degree);
        SeriesMorphism {
            series: Poly::var(&r, "u").unwrap(),
        }
    }

    pub fn series(&self) -> &Poly {
        &self.series
    }

    /// `phi(x)` computed in `target`.
    pub fn apply(&self, target: &Arc<SeriesRing<Rational>>, x: &Poly) -> Result<Poly, FglError> {
        Ok(self.series.substitute(target, &[("u", x.clone())])?)
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

/// `E_lambda(u) = sum_{n=1}^{p-1} lambda^{n-1} u^n / n!`.
pub fn truncated_exponential(p: u64) -> Result<SeriesMorphism, FglError> {
    if !crate::is_prime(p) {
        return Err(FglError::InvalidPrime(p));
    }
    let r = law_ring(Some(p as u32), &["u"], 2 * p as u32);
    let mut acc = Poly::zero(&r);
    for n in 1..p {
        let c = Rational::new(BigInt::from(1), factorial(n));
        acc = acc.plus(&Poly::monomial(&r, &[(LAMBDA, n as u32 - 1), ("u", n as u32)], c)?);
    }
    SeriesMorphism::new(acc)
}

/// Whether `phi(F(u, v)) = G(phi(u), phi(v))` modulo `lambda^lambda_modulus`
/// and total degree above `degree`.
pub fn is_homomorphism(
    phi: &SeriesMorphism,
    f: &FormalGroupLaw1D,
    g: &FormalGroupLaw1D,
    lambda_modulus: u32,
    degree: u32,
) -> Result<bool, FglError> {
    if lambda_modulus == 0 {
        return Ok(true);
    }
    let ring = law_ring(Some(lambda_modulus - 1), &["a", "b"], degree);
    let a = Poly::var(&ring, "a")?;
    let b = Poly::var(&ring, "b")?;
    let lhs = phi.apply(&ring, &f.apply(&ring, &a, &b)?)?;
    let rhs = g.apply(&ring, &phi.apply(&ring, &a)?, &phi.apply(&ring, &b)?)?;
    Ok(lhs == rhs)
}

/// `exp(sum_{p^r <= degree} T^{p^r} / p^r)` truncated at `degree`.
pub fn artin_hasse(p: u64, degree: u32) -> Result<Poly, FglError> {
    if !crate::is_prime(p) {
        return Err(FglError::InvalidPrime(p));
    }
    let r = SeriesRing::builder(()).var("T", 1).degree(degree).build();
    let mut arg = Poly::zero(&r);
    let mut pr = 1u64;
    while pr <= degree as u64 {
        arg = arg.plus(&Poly::monomial(&r, &[("T", pr as u32)], rat(1, pr as i64))?);
        pr *= p;
    }
    Ok(arg.exp_truncated()?)
}

/// The height-`h` law `v + w + (v^N + w^N - (v+w)^N)/p`, `N = p^h`,
/// truncated at degree `N`.
pub fn height_h_law(p: u64, h: u32) -> Result<FormalGroupLaw1D, FglError> {
    if !crate::is_prime(p) {
        return Err(FglError::InvalidPrime(p));
    }
    if h == 0 {
        return Err(FglError::InvalidHeight);
    }
    let n = p.pow(h);
    let r = law_ring(None, &["v", "w"], n as u32);
    let v = Poly::var(&r, "v")?;
    let w = Poly::var(&r, "w")?;
    let corr = v
        .pow(n)
        .plus(&w.pow(n))
        .minus(&v.plus(&w).pow(n))
        .scale(&rat(1, p as i64));
    if !corr.is_p_integral(p) {
        return Err(FglError::IntegralityFailure(corr.to_text()));
    }
    FormalGroupLaw1D::new(v.plus(&w).plus(&corr))
}

/// The rescaled law `lambda^{-1} F(lambda v, lambda w)`, keeping
/// `lambda^0..lambda^cap`.
pub fn rescaled(f: &FormalGroupLaw1D, cap: u32) -> Result<FormalGroupLaw1D, FglError> {
    let wide = law_ring(Some(cap + 1), &["v", "w"], f.degree());
    let l = Poly::var(&wide, LAMBDA)?;
    let lv = l.times(&Poly::var(&wide, "v")?);
    let lw = l.times(&Poly::var(&wide, "w")?);
    let scaled = f.apply(&wide, &lv, &lw)?.divide_by_var(LAMBDA)?;
    let target = law_ring(Some(cap), &["v", "w"], f.degree());
    FormalGroupLaw1D::new(scaled.to_ring(&target)?)
}

/// Largest `k` such that the rescaled law is `v + w` modulo `lambda^k`.
pub fn rescaled_triviality_order(f: &FormalGroupLaw1D) -> Result<u32, FglError> {
    let cap = f.degree();
    let r = rescaled(f, cap)?;
    let additive_part = Poly::var(r.ring(), "v")?.plus(&Poly::var(r.ring(), "w")?);
    let diff = r.series().minus(&additive_part);
    let li = r.ring().index_of(LAMBDA).unwrap();
    Ok(diff
        .terms()
        .map(|(m, _)| m.exponents()[li])
        .min()
        .unwrap_or(cap + 1))
}

/// Outcome of the height-`h` checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeightCheck {
    pub p: u64,
    pub h: u32,
    pub law: String,
    pub axioms: FglAxioms,
    pub integral: bool,
    /// The rescaled law is additive modulo `lambda^{p^h - 1}`.
    pub trivial_below_split_order: bool,
    /// First `lambda` exponent where the rescaled law differs from `v + w`.
    pub first_nontrivial_lambda: u32,
}

pub fn height_h_check(p: u64, h: u32) -> Result<HeightCheck, FglError> {
    let f = height_h_law(p, h)?;
    let n = p.pow(h) as u32;
    let axioms = f.axioms()?;
    let first = rescaled_triviality_order(&f)?;
    Ok(HeightCheck {
        p,
        h,
        law: f.series().to_text(),
        axioms,
        integral: f.series().is_p_integral(p),
        trivial_below_split_order: first >= n - 1,
        first_nontrivial_lambda: first,
    })
}
