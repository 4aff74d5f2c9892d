//! `p`-typical Witt vectors of finite length.
//!
//! The structure polynomials are obtained by solving the ghost equations
//! over the rationals, one coordinate at a time, dividing exactly by `p^i`.
//! A [`WittPolynomialSystem`] holds all of them for a fixed `(p, n)`; after
//! it is built, every Witt operation is a polynomial evaluation.

mod vector;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use thiserror::Error;

use crate::ring::{
    exact_div_p, is_integral, Rational, RingElem, RingError, SeriesRing, WeightedSeries,
};

pub use vector::{
    frobenius, p_fold_sum, teichmuller, verschiebung, verschiebung_extend, witt_add, witt_mul,
    witt_neg, witt_sub, WittVector,
};

pub type Poly = WeightedSeries<Rational>;

/// Environment variable bounding the number of terms any single structure
/// polynomial may have before construction is aborted.
pub const MAX_TERMS_ENV: &str = "HKR_WITT_MAX_TERMS";
const DEFAULT_MAX_TERMS: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WittError {
    #[error("{family}_{index} is not integral: {detail}")]
    IntegralityFailure {
        family: &'static str,
        index: usize,
        detail: String,
    },
    #[error("Witt vector length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("length {n} exceeds the cap {cap} for p = {p}")]
    ExceedsCap { p: u64, n: usize, cap: usize },
    #[error("{family}_{index} has {terms} terms, over the limit {limit} (raise {MAX_TERMS_ENV} to allow more)")]
    TooLarge {
        family: &'static str,
        index: usize,
        terms: usize,
        limit: usize,
    },
    #[error("{0} is not prime")]
    InvalidPrime(u64),
    #[error("index {index} out of range for length {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Largest supported length for a prime.
pub fn length_cap(p: u64) -> usize {
    match p {
        2 => 4,
        3 => 3,
        5 => 2,
        _ => 1,
    }
}

fn max_terms() -> usize {
    std::env::var(MAX_TERMS_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_TERMS)
}

/// Variable names `prefix0 .. prefix{count-1}`.
pub fn var_names(prefix: &str, count: usize) -> Vec<String> {
    (0..count).map(|i| format!("{prefix}{i}")).collect()
}

/// A polynomial ring over the rationals in the given variables, with no
/// truncation.
pub fn poly_ring(names: &[String]) -> Arc<SeriesRing<Rational>> {
    SeriesRing::builder(()).vars(names, 1).build()
}

/// `Φ_i = sum_{j <= i} p^j T_j^{p^{i-j}}` in the variables `prefix0..`.
pub fn ghost_in(ring: &Arc<SeriesRing<Rational>>, prefix: &str, p: u64, i: usize) -> Poly {
    let mut acc = Poly::zero(ring);
    for j in 0..=i {
        let name = format!("{prefix}{j}");
        let coeff = Rational::from_integer(BigInt::from(p).pow(j as u32));
        let e = p.pow((i - j) as u32) as u32;
        acc = acc.plus(&Poly::monomial(ring, &[(&name, e)], coeff).expect("variable exists"));
    }
    acc
}

/// The ghost polynomial `Φ_i` in `T_0..T_i`.
pub fn ghost_polynomial(p: u64, i: usize) -> Poly {
    let ring = poly_ring(&var_names("T", i + 1));
    ghost_in(&ring, "T", p, i)
}

/// Solves `Φ_i(x) = targets[i]` for `x` coordinate by coordinate.
fn solve_ghost(p: u64, family: &'static str, targets: &[Poly]) -> Result<Vec<Poly>, WittError> {
    let limit = max_terms();
    let mut xs: Vec<Poly> = Vec::with_capacity(targets.len());
    for (i, target) in targets.iter().enumerate() {
        let mut rest = target.clone();
        for (j, x) in xs.iter().enumerate() {
            let pj = Rational::from_integer(BigInt::from(p).pow(j as u32));
            let power = x.pow(p.pow((i - j) as u32));
            rest = rest.minus(&power.scale(&pj));
            if rest.num_terms() > limit {
                return Err(WittError::TooLarge {
                    family,
                    index: i,
                    terms: rest.num_terms(),
                    limit,
                });
            }
        }
        let mut terms = Vec::with_capacity(rest.num_terms());
        for (m, c) in rest.terms() {
            let q = exact_div_p(c, i as u32, p).map_err(|e| WittError::IntegralityFailure {
                family,
                index: i,
                detail: e.to_string(),
            })?;
            if !is_integral(&q) {
                return Err(WittError::IntegralityFailure {
                    family,
                    index: i,
                    detail: format!("coefficient {q}"),
                });
            }
            terms.push((m.exponents().to_vec(), q));
        }
        xs.push(Poly::from_terms(rest.ring(), terms));
    }
    Ok(xs)
}

/// Sum, product, negation and Frobenius polynomials for `W_n` at `p`.
#[derive(Debug)]
pub struct WittPolynomialSystem {
    p: u64,
    n: usize,
    xy_ring: Arc<SeriesRing<Rational>>,
    t_ring: Arc<SeriesRing<Rational>>,
    ghost: Vec<Poly>,
    sum: Vec<Poly>,
    product: Vec<Poly>,
    negation: Vec<Poly>,
    frobenius: Vec<Poly>,
}

impl WittPolynomialSystem {
    /// Solves all structure polynomials for length `n`.
    pub fn build(p: u64, n: usize) -> Result<Self, WittError> {
        if !crate::is_prime(p) {
            return Err(WittError::InvalidPrime(p));
        }
        let cap = length_cap(p);
        if n == 0 || n > cap {
            return Err(WittError::ExceedsCap { p, n, cap });
        }
        let mut names = var_names("X", n);
        names.extend(var_names("Y", n));
        let xy_ring = poly_ring(&names);
        let t_ring = poly_ring(&var_names("T", n + 1));

        let gx: Vec<Poly> = (0..n).map(|i| ghost_in(&xy_ring, "X", p, i)).collect();
        let gy: Vec<Poly> = (0..n).map(|i| ghost_in(&xy_ring, "Y", p, i)).collect();
        let ghost: Vec<Poly> = (0..=n).map(|i| ghost_in(&t_ring, "T", p, i)).collect();

        let sums: Vec<Poly> = gx.iter().zip(&gy).map(|(a, b)| a.plus(b)).collect();
        let sum = solve_ghost(p, "S", &sums)?;
        let prods: Vec<Poly> = gx.iter().zip(&gy).map(|(a, b)| a.times(b)).collect();
        let product = solve_ghost(p, "P", &prods)?;
        let negs: Vec<Poly> = ghost[..n].iter().map(|g| g.negate()).collect();
        let negation = solve_ghost(p, "N", &negs)?;
        let frobenius = solve_ghost(p, "F", &ghost[1..])?;

        Ok(WittPolynomialSystem {
            p,
            n,
            xy_ring,
            t_ring,
            ghost,
            sum,
            product,
            negation,
            frobenius,
        })
    }

    /// A process-wide cached system, built on first use.
    pub fn shared(p: u64, n: usize) -> Result<Arc<Self>, WittError> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<WittPolynomialSystem>>>> =
            OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(sys) = cache.lock().unwrap().get(&(p, n)) {
            return Ok(sys.clone());
        }
        let sys = Arc::new(Self::build(p, n)?);
        cache.lock().unwrap().entry((p, n)).or_insert(sys.clone());
        Ok(sys)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn length(&self) -> usize {
        self.n
    }

    /// Ring of `X_0..X_{n-1}, Y_0..Y_{n-1}`.
    pub fn xy_ring(&self) -> &Arc<SeriesRing<Rational>> {
        &self.xy_ring
    }

    /// Ring of `T_0..T_n`.
    pub fn t_ring(&self) -> &Arc<SeriesRing<Rational>> {
        &self.t_ring
    }

    /// `Φ_0..Φ_n` in `T`.
    pub fn ghost_polys(&self) -> &[Poly] {
        &self.ghost
    }

    pub fn sum_polys(&self) -> &[Poly] {
        &self.sum
    }

    pub fn product_polys(&self) -> &[Poly] {
        &self.product
    }

    /// Coordinates of `-T`, in `T_0..T_{n-1}`.
    pub fn negation_polys(&self) -> &[Poly] {
        &self.negation
    }

    /// `F_0..F_{n-1}` in `T_0..T_n`.
    pub fn frobenius_polys(&self) -> &[Poly] {
        &self.frobenius
    }

    /// Largest term count among the structure polynomials.
    pub fn max_terms(&self) -> usize {
        self.sum
            .iter()
            .chain(&self.product)
            .chain(&self.negation)
            .chain(&self.frobenius)
            .map(Poly::num_terms)
            .max()
            .unwrap_or(0)
    }

    /// True when every structure polynomial has integer coefficients.
    pub fn all_integral(&self) -> bool {
        self.sum
            .iter()
            .chain(&self.product)
            .chain(&self.negation)
            .chain(&self.frobenius)
            .all(Poly::is_integral)
    }

    /// `G_i = (F_i - T_i^p) / p`, defined for `i < n`.
    pub fn sekiguchi_suwa_g(&self, i: usize) -> Result<Poly, WittError> {
        if i >= self.n {
            return Err(WittError::IndexOutOfRange {
                index: i,
                n: self.n,
            });
        }
        let ti = Poly::var(&self.t_ring, &format!("T{i}"))?;
        let diff = self.frobenius[i].minus(&ti.pow(self.p));
        let mut terms = Vec::new();
        for (m, c) in diff.terms() {
            let q = exact_div_p(c, 1, self.p).map_err(|e| WittError::IntegralityFailure {
                family: "G",
                index: i,
                detail: e.to_string(),
            })?;
            terms.push((m.exponents().to_vec(), q));
        }
        Ok(Poly::from_terms(&self.t_ring, terms))
    }

    /// Right-hand side of the Sekiguchi–Suwa recursion for `G_i`, built
    /// from `G_0..G_{i-1}`.
    pub fn sekiguchi_suwa_recursion(&self, i: usize) -> Result<Poly, WittError> {
        let p = self.p;
        let mut rhs = Poly::var(&self.t_ring, &format!("T{}", i + 1))?;
        for j in 0..i {
            let tj = Poly::var(&self.t_ring, &format!("T{j}"))?;
            let gj = self.sekiguchi_suwa_g(j)?;
            let pij = p.pow((i - j) as u32);
            let mut corr = tj.pow(p * (pij - 1)).times(&gj);
            if p == 2 {
                corr = corr.plus(&tj.pow(2 * (pij - 2)).times(&gj.times(&gj)));
            }
            rhs = rhs.minus(&corr);
        }
        Ok(rhs)
    }

    /// Compares `G_i` with its recursion, both exactly over `Z` and modulo `p`.
    pub fn check_recursion(&self, i: usize) -> Result<RecursionCheck, WittError> {
        let g = self.sekiguchi_suwa_g(i)?;
        let rhs = self.sekiguchi_suwa_recursion(i)?;
        let diff = g.minus(&rhs);
        let mod_p = diff
            .terms()
            .all(|(_, c)| crate::ring::valuation_p(c, self.p).at_least(1));
        Ok(RecursionCheck {
            p: self.p,
            index: i,
            exact: diff.is_zero(),
            mod_p,
            difference_terms: diff.num_terms(),
        })
    }

    /// Coefficients of `dT_0..dT_n` in the differential of `G_i` at `T = 0`.
    pub fn dg_at_origin(&self, i: usize) -> Result<Vec<Rational>, WittError> {
        let g = self.sekiguchi_suwa_g(i)?;
        Ok((0..=self.n)
            .map(|j| g.coeff_of(&[(&format!("T{j}"), 1)]))
            .collect())
    }

    /// `Φ_i(S(X,Y)) = Φ_i(X) + Φ_i(Y)`, `Φ_i(P(X,Y)) = Φ_i(X) Φ_i(Y)` and
    /// `Φ_i(F(T)) = Φ_{i+1}(T)` as exact polynomial identities.
    pub fn check_ghost_identities(&self) -> Result<bool, WittError> {
        let p = self.p;
        let one = Poly::one(&self.xy_ring);
        for i in 0..self.n {
            let gx = ghost_in(&self.xy_ring, "X", p, i);
            let gy = ghost_in(&self.xy_ring, "Y", p, i);
            let phi = ghost_in(&poly_ring(&var_names("Z", self.n)), "Z", p, i);
            let s = phi.evaluate(&self.sum, &one)?;
            if s != gx.plus(&gy) {
                return Ok(false);
            }
            let m = phi.evaluate(&self.product, &one)?;
            if m != gx.times(&gy) {
                return Ok(false);
            }
            let tone = Poly::one(&self.t_ring);
            let neg = phi.evaluate(
                &self.negation,
                &tone,
            )?;
            if neg != self.ghost[i].negate() {
                return Ok(false);
            }
            let f = phi.evaluate(&self.frobenius, &tone)?;
            if f != self.ghost[i + 1] {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `F_i ≡ T_i^p (mod p)` as a polynomial congruence.
    pub fn check_frobenius_congruence(&self) -> Result<bool, WittError> {
        for i in 0..self.n {
            let ti = Poly::var(&self.t_ring, &format!("T{i}"))?;
            let diff = self.frobenius[i].minus(&ti.pow(self.p));
            if !diff
                .terms()
                .all(|(_, c)| crate::ring::valuation_p(c, self.p).at_least(1))
            {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Outcome of comparing `G_i` with the Sekiguchi–Suwa recursion.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RecursionCheck {
    pub p: u64,
    pub index: usize,
    /// Equality in `Z[T]`.
    pub exact: bool,
    /// Equality in `F_p[T]`.
    pub mod_p: bool,
    pub difference_terms: usize,
}

/// `G_i` for the cached system of length `n`.
pub fn sekiguchi_suwa_g(p: u64, i: usize, n: usize) -> Result<Poly, WittError> {
    WittPolynomialSystem::shared(p, n)?.sekiguchi_suwa_g(i)
}

/// `T_0..T_{count-1}` as a Witt vector of polynomials.
pub fn generic_vector(ring: &Arc<SeriesRing<Rational>>, p: u64, prefix: &str, count: usize) -> WittVector<Poly> {
    WittVector::new(
        p,
        (0..count)
            .map(|i| Poly::var(ring, &format!("{prefix}{i}")).expect("variable exists"))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, RingElem};

    fn poly_from(ring: &Arc<SeriesRing<Rational>>, terms: &[(&[(&str, u32)], i64)]) -> Poly {
        let mut acc = Poly::zero(ring);
        for (powers, c) in terms {
            acc = acc.plus(&Poly::monomial(ring, powers, int(*c)).unwrap());
        }
        acc
    }

    #[test]
    fn ghost_examples() {
        let g = ghost_polynomial(2, 0);
        assert_eq!(g.to_text(), "1 * T0^1");
        let g = ghost_polynomial(2, 1);
        let r = g.ring().clone();
        assert_eq!(g, poly_from(&r, &[(&[("T0", 2)], 1), (&[("T1", 1)], 2)]));
        let g = ghost_polynomial(3, 2);
        let r = g.ring().clone();
        assert_eq!(
            g,
            poly_from(&r, &[(&[("T0", 9)], 1), (&[("T1", 3)], 3), (&[("T2", 1)], 9)])
        );
    }

    #[test]
    fn low_structure_polynomials() {
        let sys = WittPolynomialSystem::build(2, 2).unwrap();
        let r = sys.xy_ring().clone();
        assert_eq!(sys.sum_polys()[0], poly_from(&r, &[(&[("X0", 1)], 1), (&[("Y0", 1)], 1)]));
        assert_eq!(
            sys.sum_polys()[1],
            poly_from(
                &r,
                &[(&[("X1", 1)], 1), (&[("Y1", 1)], 1), (&[("X0", 1), ("Y0", 1)], -1)]
            )
        );
        for p in [2, 3, 5] {
            let sys = WittPolynomialSystem::build(p, 1).unwrap();
            let t = sys.t_ring().clone();
            let f0 = poly_from(&t, &[(&[("T0", p as u32)], 1), (&[("T1", 1)], p as i64)]);
            assert_eq!(sys.frobenius_polys()[0], f0);
            assert_eq!(sys.sekiguchi_suwa_g(0).unwrap(), Poly::var(&t, "T1").unwrap());
        }
    }

    #[test]
    fn independent_oracle_for_s1() {
        // Solve Φ_1(S) = Φ_1(X) + Φ_1(Y) by hand: S_1 = (X0^p + Y0^p - (X0+Y0)^p)/p + X1 + Y1.
        for p in [2u64, 3, 5] {
            let sys = WittPolynomialSystem::build(p, 2).unwrap();
            let r = sys.xy_ring().clone();
            let mut expect = poly_from(&r, &[(&[("X1", 1)], 1), (&[("Y1", 1)], 1)]);
            for k in 1..p as u32 {
                let binom = (1..=k).fold(1u64, |acc, j| acc * (p - j as u64 + 1) / j as u64);
                let c = -(binom as i64) / p as i64;
                expect = expect.plus(&poly_from(&r, &[(&[("X0", k), ("Y0", p as u32 - k)], c)]));
            }
            assert_eq!(sys.sum_polys()[1], expect, "p = {p}");
        }
    }

    #[test]
    fn ghost_identities_small() {
        for (p, n) in [(2, 3), (3, 2), (5, 2)] {
            let sys = WittPolynomialSystem::build(p, n).unwrap();
            assert!(sys.all_integral());
            assert!(sys.check_ghost_identities().unwrap());
            assert!(sys.check_frobenius_congruence().unwrap());
        }
    }

    #[test]
    fn caps_and_errors() {
        assert!(matches!(
            WittPolynomialSystem::build(3, 4),
            Err(WittError::ExceedsCap { cap: 3, .. })
        ));
        assert!(matches!(
            WittPolynomialSystem::build(4, 1),
            Err(WittError::InvalidPrime(4))
        ));
        let sys = WittPolynomialSystem::build(2, 2).unwrap();
        assert!(sys.sekiguchi_suwa_g(2).is_err());
    }

    #[test]
    fn recursion_for_g1_at_two() {
        let sys = WittPolynomialSystem::build(2, 2).unwrap();
        let t = sys.t_ring().clone();
        // (F_1 - T_1^2)/2 computed by hand from the ghost equations
        let expect = poly_from(
            &t,
            &[(&[("T2", 1)], 1), (&[("T0", 2), ("T1", 1)], -1), (&[("T1", 2)], -1)],
        );
        assert_eq!(sys.sekiguchi_suwa_g(1).unwrap(), expect);
        let check = sys.check_recursion(1).unwrap();
        assert!(check.exact && check.mod_p);
    }

    #[test]
    fn recursion_at_three_is_a_congruence() {
        let sys = WittPolynomialSystem::build(3, 2).unwrap();
        let t = sys.t_ring().clone();
        let expect = poly_from(
            &t,
            &[
                (&[("T2", 1)], 1),
                (&[("T0", 6), ("T1", 1)], -1),
                (&[("T0", 3), ("T1", 2)], -3),
                (&[("T1", 3)], -3),
            ],
        );
        assert_eq!(sys.sekiguchi_suwa_g(1).unwrap(), expect);
        let check = sys.check_recursion(1).unwrap();
        assert!(check.mod_p);
        assert!(!check.exact);
    }

    #[test]
    fn differential_at_origin() {
        for (p, n) in [(2, 3), (3, 3)] {
            let sys = WittPolynomialSystem::shared(p, n).unwrap();
            for i in 0..n {
                let dg = sys.dg_at_origin(i).unwrap();
                for (j, c) in dg.iter().enumerate() {
                    let expect = if j == i + 1 { int(1) } else { int(0) };
                    assert!(
                        crate::ring::valuation_p(&(c - &expect), p).at_least(1),
                        "p={p} i={i} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn negation_is_minus_for_odd_primes() {
        let sys = WittPolynomialSystem::build(3, 2).unwrap();
        for (i, nq) in sys.negation_polys().iter().enumerate() {
            assert_eq!(*nq, Poly::var(sys.t_ring(), &format!("T{i}")).unwrap().negate());
        }
    }
}
