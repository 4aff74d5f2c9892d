use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::{rational::valuation_p, Rational, RingElem, RingError};

/// A named indeterminate with an integer weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Variable {
    pub name: String,
    pub weight: i32,
}

/// Exponent vector, ordered graded-lexicographically: lower total degree
/// first, then larger exponents of earlier variables first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Variable layout and truncation shared by a family of series.
///
/// A monomial survives truncation when its weighted degree (the sum of
/// `weight * exponent` over variables of positive weight) is at most
/// `degree`, and each capped variable's exponent is at most its cap.
/// Variables of non-positive weight are bounded only by their caps.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRing<C: RingElem> {
    vars: Vec<Variable>,
    caps: Vec<Option<u32>>,
    degree: Option<u32>,
    coeff_ctx: C::Ctx,
}

pub struct SeriesRingBuilder<C: RingElem> {
    ring: SeriesRing<C>,
}

impl<C: RingElem> SeriesRingBuilder<C> {
    pub fn var(mut self, name: &str, weight: i32) -> Self {
        self.push(name, weight, None);
        self
    }

    /// A variable whose exponent never exceeds `cap`.
    pub fn capped(mut self, name: &str, weight: i32, cap: u32) -> Self {
        self.push(name, weight, Some(cap));
        self
    }

    pub fn vars<S: AsRef<str>>(mut self, names: impl IntoIterator<Item = S>, weight: i32) -> Self {
        for n in names {
            self.push(n.as_ref(), weight, None);
        }
        self
    }

    /// Maximum weighted degree retained.
    pub fn degree(mut self, degree: u32) -> Self {
        self.ring.degree = Some(degree);
        self
    }

    pub fn build(self) -> Arc<SeriesRing<C>> {
        Arc::new(self.ring)
    }

    fn push(&mut self, name: &str, weight: i32, cap: Option<u32>) {
        assert!(
            self.ring.index_of(name).is_none(),
            "duplicate variable `{name}`"
        );
        self.ring.vars.push(Variable {
            name: name.to_owned(),
            weight,
        });
        self.ring.caps.push(cap);
    }
}

impl<C: RingElem> SeriesRing<C> {
    pub fn builder(coeff_ctx: C::Ctx) -> SeriesRingBuilder<C> {
        SeriesRingBuilder {
            ring: SeriesRing {
                vars: Vec::new(),
                caps: Vec::new(),
                degree: None,
                coeff_ctx,
            },
        }
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn degree(&self) -> Option<u32> {
        self.degree
    }

    pub fn cap(&self, name: &str) -> Option<u32> {
        self.index_of(name).and_then(|i| self.caps[i])
    }

    pub fn coeff_ctx(&self) -> &C::Ctx {
        &self.coeff_ctx
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn weighted_degree(&self, exps: &[u32]) -> u64 {
        self.vars
            .iter()
            .zip(exps)
            .filter(|(v, _)| v.weight > 0)
            .map(|(v, &e)| v.weight as u64 * e as u64)
            .sum()
    }

    /// Whether the exponent vector survives truncation.
    pub fn admits(&self, exps: &[u32]) -> bool {
        if exps.iter().zip(&self.caps).any(|(&e, c)| matches!(c, Some(c) if e > *c)) {
            return false;
        }
        match self.degree {
            Some(d) => self.weighted_degree(exps) <= d as u64,
            None => true,
        }
    }

    /// A copy of this layout with different truncation data.
    pub fn retruncated(&self, degree: Option<u32>, caps: &[(&str, Option<u32>)]) -> Arc<Self> {
        let mut r = self.clone();
        r.degree = degree;
        for (name, cap) in caps {
            let i = r.index_of(name).unwrap_or_else(|| panic!("unknown variable `{name}`"));
            r.caps[i] = *cap;
        }
        Arc::new(r)
    }
}

fn same_ring<C: RingElem>(a: &Arc<SeriesRing<C>>, b: &Arc<SeriesRing<C>>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A truncated multivariate series with coefficients in `C`.
#[derive(Clone)]
pub struct WeightedSeries<C: RingElem> {
    ring: Arc<SeriesRing<C>>,
    terms: BTreeMap<Monomial, C>,
}

impl<C: RingElem> PartialEq for WeightedSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<C: RingElem> fmt::Debug for WeightedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightedSeries({})", self.to_text())
    }
}

impl<C: RingElem> fmt::Display for WeightedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<C: RingElem> WeightedSeries<C> {
    pub fn zero(ring: &Arc<SeriesRing<C>>) -> Self {
        WeightedSeries {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<SeriesRing<C>>) -> Self {
        Self::constant(ring, C::one(&ring.coeff_ctx))
    }

    pub fn constant(ring: &Arc<SeriesRing<C>>, c: C) -> Self {
        Self::from_terms(ring, [(vec![0; ring.num_vars()], c)])
    }

    pub fn integer(ring: &Arc<SeriesRing<C>>, n: i64) -> Self {
        Self::constant(ring, C::from_integer(&ring.coeff_ctx, &BigInt::from(n)))
    }

    /// The series consisting of the single variable `name`.
    pub fn var(ring: &Arc<SeriesRing<C>>, name: &str) -> Result<Self, RingError> {
        Self::monomial(ring, &[(name, 1)], C::one(&ring.coeff_ctx))
    }

    /// `c * prod name^e`, truncated.
    pub fn monomial(
        ring: &Arc<SeriesRing<C>>,
        powers: &[(&str, u32)],
        c: C,
    ) -> Result<Self, RingError> {
        let mut exps = vec![0; ring.num_vars()];
        for (name, e) in powers {
            let i = ring
                .index_of(name)
                .ok_or_else(|| RingError::UnknownVariable((*name).to_owned()))?;
            exps[i] += e;
        }
        Ok(Self::from_terms(ring, [(exps, c)]))
    }

    /// Builds a series from exponent vectors, summing duplicates and
    /// dropping zero or truncated terms.
    pub fn from_terms(
        ring: &Arc<SeriesRing<C>>,
        terms: impl IntoIterator<Item = (Vec<u32>, C)>,
    ) -> Self {
        let mut out = BTreeMap::new();
        for (exps, c) in terms {
            assert_eq!(exps.len(), ring.num_vars(), "exponent vector length");
            if !ring.admits(&exps) || c.is_zero() {
                continue;
            }
            accumulate(&mut out, Monomial(exps), c);
        }
        WeightedSeries {
            ring: ring.clone(),
            terms: out,
        }
    }

    pub fn ring(&self) -> &Arc<SeriesRing<C>> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> C {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| C::zero(&self.ring.coeff_ctx))
    }

    /// Coefficient of `prod name^e`.
    pub fn coeff_of(&self, powers: &[(&str, u32)]) -> C {
        let mut exps = vec![0; self.ring.num_vars()];
        for (name, e) in powers {
            let i = self.ring.index_of(name).expect("known variable");
            exps[i] = *e;
        }
        self.coeff(&exps)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.ring.num_vars()])
    }

    /// Largest exponent of `name` among stored terms.
    pub fn degree_in(&self, name: &str) -> u32 {
        let i = self.ring.index_of(name).expect("known variable");
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &C) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, x)| (m.0.clone(), x.times(c)));
        Self::from_terms(&self.ring, terms)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(RingError::IncompatibleRings);
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut terms, m.clone(), c.clone());
        }
        Ok(WeightedSeries {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.checked_add(&other.negate())
    }

    /// Truncated product.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, RingError> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(RingError::IncompatibleRings);
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let ring = &self.ring;
        if self.is_zero() || other.is_zero() {
            return Self::zero(ring);
        }
        let limit = ring.degree.map(u64::from);
        let mut rhs: Vec<(u64, &Monomial, &C)> = other
            .terms
            .iter()
            .map(|(m, c)| (ring.weighted_degree(&m.0), m, c))
            .collect();
        rhs.sort_by_key(|t| t.0);
        let mut acc: HashMap<Vec<u32>, C> = HashMap::new();
        let mut exps = vec![0u32; ring.num_vars()];
        for (m1, c1) in &self.terms {
            let d1 = ring.weighted_degree(&m1.0);
            for (d2, m2, c2) in &rhs {
                if matches!(limit, Some(l) if d1 + d2 > l) {
                    break;
                }
                let mut ok = true;
                for (i, e) in exps.iter_mut().enumerate() {
                    *e = m1.0[i] + m2.0[i];
                    if matches!(ring.caps[i], Some(c) if *e > c) {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                let prod = c1.times(c2);
                match acc.get_mut(&exps) {
                    Some(x) => *x = x.plus(&prod),
                    None => {
                        acc.insert(exps.clone(), prod);
                    }
                }
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (Monomial(e), c))
            .collect();
        WeightedSeries {
            ring: ring.clone(),
            terms,
        }
    }

    /// Replaces variables by series living in `target`. Variables without a
    /// binding are sent to the variable of the same name in `target`.
    pub fn substitute(
        &self,
        target: &Arc<SeriesRing<C>>,
        bindings: &[(&str, WeightedSeries<C>)],
    ) -> Result<Self, RingError> {
        let n = self.ring.num_vars();
        let mut images: Vec<Option<WeightedSeries<C>>> = vec![None; n];
        for (name, s) in bindings {
            let i = self
                .ring
                .index_of(name)
                .ok_or_else(|| RingError::UnknownVariable((*name).to_owned()))?;
            if !same_ring(&s.ring, target) {
                return Err(RingError::IncompatibleRings);
            }
            images[i] = Some(s.clone());
        }
        for (i, slot) in images.iter_mut().enumerate() {
            if slot.is_none() {
                let name = &self.ring.vars[i].name;
                *slot = Some(WeightedSeries::var(target, name)?);
            }
        }
        let images: Vec<WeightedSeries<C>> = images.into_iter().map(Option::unwrap).collect();
        for (i, img) in images.iter().enumerate() {
            let v = &self.ring.vars[i];
            let used = self.terms.keys().any(|m| m.0[i] > 0);
            if used && self.ring.degree.is_some() && v.weight > 0 && !img.constant_term().is_zero()
            {
                return Err(RingError::NonComposable {
                    variable: v.name.clone(),
                });
            }
        }
        Ok(self.evaluate_with(&images, WeightedSeries::one(target), |c| {
            WeightedSeries::constant(target, c.clone())
        }))
    }

    /// Generic evaluation `f(values)`, mapping coefficients through `embed`.
    pub fn evaluate_with<R: RingElem>(&self, values: &[R], one: R, mut embed: impl FnMut(&C) -> R) -> R {
        assert_eq!(values.len(), self.ring.num_vars(), "one value per variable");
        let mut powers: Vec<Vec<R>> = values.iter().map(|_| vec![one.clone()]).collect();
        let mut acc = one.zero_like();
        for (m, c) in &self.terms {
            let mut term = embed(c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().times(&values[i]);
                    cache.push(next);
                }
                term = term.times(&cache[e as usize]);
                if term.is_zero() {
                    break;
                }
            }
            acc = acc.plus(&term);
        }
        acc
    }

    /// Re-expresses the series in another ring whose variables include
    /// every variable actually used here; the result is re-truncated.
    pub fn to_ring(&self, target: &Arc<SeriesRing<C>>) -> Result<Self, RingError> {
        let mut map = Vec::with_capacity(self.ring.num_vars());
        for (i, v) in self.ring.vars.iter().enumerate() {
            match target.index_of(&v.name) {
                Some(j) => map.push(Some(j)),
                None if self.terms.keys().all(|m| m.0[i] == 0) => map.push(None),
                None => return Err(RingError::UnknownVariable(v.name.clone())),
            }
        }
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; target.num_vars()];
            for (i, j) in map.iter().enumerate() {
                if let Some(j) = j {
                    e[*j] += m.0[i];
                }
            }
            (e, c.clone())
        });
        Ok(Self::from_terms(target, terms))
    }

    /// Divides by a variable; every term must contain it.
    pub fn divide_by_var(&self, name: &str) -> Result<Self, RingError> {
        let i = self
            .ring
            .index_of(name)
            .ok_or_else(|| RingError::UnknownVariable(name.to_owned()))?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                return Err(RingError::NotDivisibleByVariable {
                    variable: name.to_owned(),
                    term: self.format_term(m, c),
                });
            }
            let mut e = m.0.clone();
            e[i] -= 1;
            terms.push((e, c.clone()));
        }
        Ok(Self::from_terms(&self.ring, terms))
    }

    /// Sets the listed variables to zero.
    pub fn set_zero(&self, names: &[&str]) -> Self {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| self.ring.index_of(n).expect("known variable"))
            .collect();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| idx.iter().all(|&i| m.0[i] == 0))
            .map(|(m, c)| (m.0.clone(), c.clone()));
        Self::from_terms(&self.ring, terms)
    }

    /// Terms whose total (unweighted) degree in `names` equals `d`.
    pub fn part_of_degree(&self, names: &[&str], d: u32) -> Self {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| self.ring.index_of(n).expect("known variable"))
            .collect();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| idx.iter().map(|&i| m.0[i]).sum::<u32>() == d)
            .map(|(m, c)| (m.0.clone(), c.clone()));
        Self::from_terms(&self.ring, terms)
    }

    /// Partial derivative with respect to `name`.
    pub fn derivative(&self, name: &str) -> Self {
        let i = self.ring.index_of(name).expect("known variable");
        let ctx = &self.ring.coeff_ctx;
        let terms = self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
            let mut e = m.0.clone();
            let k = e[i];
            e[i] -= 1;
            (e, c.times(&C::from_integer(ctx, &BigInt::from(k))))
        });
        Self::from_terms(&self.ring, terms)
    }

    /// Applies `f` to each coefficient, landing in a ring with the same
    /// variable layout but another coefficient type.
    pub fn map_coeffs<D: RingElem>(
        &self,
        target: &Arc<SeriesRing<D>>,
        f: impl Fn(&C) -> Result<D, RingError>,
    ) -> Result<WeightedSeries<D>, RingError> {
        assert_eq!(
            target.vars, self.ring.vars,
            "coefficient change keeps the variables"
        );
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.0.clone(), f(c)?));
        }
        Ok(WeightedSeries::from_terms(target, terms))
    }

    /// `sum f^n / n!`, for `f` with zero constant term.
    pub fn exp_truncated(&self) -> Result<Self, RingError> {
        if !self.constant_term().is_zero() {
            return Err(RingError::NonComposable {
                variable: "<constant term>".to_owned(),
            });
        }
        let ctx = &self.ring.coeff_ctx;
        let bound = self.nilpotency_bound();
        let mut acc = Self::one(&self.ring);
        let mut power = Self::one(&self.ring);
        let mut factorial = BigInt::one();
        for n in 1..=bound + 1 {
            power = power.mul_unchecked(self);
            if power.is_zero() {
                return Ok(acc);
            }
            if n > bound {
                break;
            }
            factorial *= n;
            let inv = C::from_integer(ctx, &factorial)
                .try_inverse()
                .ok_or(RingError::InvalidCoefficientRing(n))?;
            acc = acc.plus(&power.scale(&inv));
        }
        Err(RingError::NotNilpotent)
    }

    /// Number of factors after which any product of zero-constant-term
    /// series must vanish, when the truncation forces that at all.
    fn nilpotency_bound(&self) -> u64 {
        let caps: u64 = self.ring.caps.iter().flatten().map(|&c| c as u64).sum();
        caps + self.ring.degree.unwrap_or(0) as u64 + 1
    }

    fn format_term(&self, m: &Monomial, c: &C) -> String {
        let factors: Vec<String> = m
            .0
            .iter()
            .zip(&self.ring.vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| format!("{}^{}", v.name, e))
            .collect();
        if factors.is_empty() {
            format!("{c}")
        } else {
            format!("{c} * {}", factors.join(" "))
        }
    }

    /// Canonical text form `coeff * x^a y^b + ...` in monomial order.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_owned();
        }
        self.terms
            .iter()
            .map(|(m, c)| self.format_term(m, c))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Canonical JSON form `{variables, weights, truncation, terms}`.
    pub fn to_json(&self) -> serde_json::Value {
        let caps: BTreeMap<&str, u32> = self
            .ring
            .vars
            .iter()
            .zip(&self.ring.caps)
            .filter_map(|(v, c)| c.map(|c| (v.name.as_str(), c)))
            .collect();
        serde_json::json!({
            "variables": self.ring.vars.iter().map(|v| &v.name).collect::<Vec<_>>(),
            "weights": self.ring.vars.iter().map(|v| v.weight).collect::<Vec<_>>(),
            "truncation": { "degree": self.ring.degree, "caps": caps },
            "terms": self.terms.iter().map(|(m, c)| serde_json::json!({
                "coeff": format!("{c}"),
                "exponents": m.0,
            })).collect::<Vec<_>>(),
        })
    }
}

impl WeightedSeries<Rational> {
    /// True iff every coefficient has nonnegative `p`-adic valuation.
    pub fn is_p_integral(&self, p: u64) -> bool {
        self.terms.values().all(|c| valuation_p(c, p).at_least(0))
    }

    /// True iff every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(super::is_integral)
    }

    /// Evaluation into any ring, reading coefficients as elements of
    /// `Z_(p)`; fails if a denominator is not invertible there.
    pub fn evaluate<R: RingElem>(&self, values: &[R], one: &R) -> Result<R, RingError> {
        let mut err = None;
        let out = self.evaluate_with(values, one.clone(), |c| {
            let num = R::from_integer(&one.ctx(), c.numer());
            if c.denom().is_one() {
                return num;
            }
            match R::from_integer(&one.ctx(), c.denom()).try_inverse() {
                Some(inv) => num.times(&inv),
                None => {
                    err = Some(RingError::NotIntegral {
                        value: c.to_string(),
                        p: 0,
                    });
                    one.zero_like()
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }
}

fn accumulate<C: RingElem>(terms: &mut BTreeMap<Monomial, C>, m: Monomial, c: C) {
    use std::collections::btree_map::Entry;
    match terms.entry(m) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            let s = o.get().plus(&c);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

impl<C: RingElem> RingElem for WeightedSeries<C> {
    type Ctx = Arc<SeriesRing<C>>;

    fn ctx(&self) -> Self::Ctx {
        self.ring.clone()
    }

    fn zero(ctx: &Self::Ctx) -> Self {
        WeightedSeries::zero(ctx)
    }

    fn one(ctx: &Self::Ctx) -> Self {
        WeightedSeries::one(ctx)
    }

    fn from_integer(ctx: &Self::Ctx, n: &BigInt) -> Self {
        WeightedSeries::constant(ctx, C::from_integer(&ctx.coeff_ctx, n))
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn plus(&self, other: &Self) -> Self {
        self.checked_add(other).expect("series in the same ring")
    }

    fn minus(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("series in the same ring")
    }

    fn times(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("series in the same ring")
    }

    fn negate(&self) -> Self {
        WeightedSeries {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.negate()))
                .collect(),
        }
    }

    /// Inverts `c0 (1 + g)` as `c0^{-1} sum (-g)^n` when `c0` is a unit and
    /// `g` is nilpotent under truncation.
    fn try_inverse(&self) -> Option<Self> {
        let c0 = self.constant_term();
        let inv0 = c0.try_inverse()?;
        let g = self.scale(&inv0).minus(&WeightedSeries::one(&self.ring));
        if g.is_zero() {
            return Some(WeightedSeries::constant(&self.ring, inv0));
        }
        let neg_g = g.negate();
        let mut acc = WeightedSeries::one(&self.ring);
        let mut power = WeightedSeries::one(&self.ring);
        for _ in 0..=self.nilpotency_bound() {
            power = power.mul_unchecked(&neg_g);
            if power.is_zero() {
                return Some(acc.scale(&inv0));
            }
            acc = acc.plus(&power);
        }
        None
    }
}

impl<C: RingElem> fmt::Display for SeriesRing<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.vars.iter().map(|v| v.name.as_str()).collect();
        write!(f, "[{}]", names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, rat, Modulus, ModPrimePower};

    type S = WeightedSeries<Rational>;

    fn uring(d: u32) -> Arc<SeriesRing<Rational>> {
        SeriesRing::builder(()).var("u", 1).degree(d).build()
    }

    fn lam_u(cap: u32, d: u32) -> Arc<SeriesRing<Rational>> {
        SeriesRing::builder(())
            .capped("lambda", -1, cap)
            .var("u", 1)
            .degree(d)
            .build()
    }

    fn poly(ring: &Arc<SeriesRing<Rational>>, terms: &[(&[(&str, u32)], Rational)]) -> S {
        let mut acc = S::zero(ring);
        for (powers, c) in terms {
            acc = acc.plus(&S::monomial(ring, powers, c.clone()).unwrap());
        }
        acc
    }

    #[test]
    fn product_examples() {
        let r = uring(2);
        let a = poly(&r, &[(&[], int(1)), (&[("u", 1)], int(1))]);
        let b = poly(&r, &[(&[], int(1)), (&[("u", 1)], int(-1))]);
        let expect = poly(&r, &[(&[], int(1)), (&[("u", 2)], int(-1))]);
        assert_eq!(a.checked_mul(&b).unwrap(), expect);

        let g = SeriesRing::builder(())
            .capped("lambda", -1, 3)
            .var("v", 1)
            .var("w", 1)
            .degree(6)
            .build();
        let law = poly(
            &g,
            &[
                (&[("v", 1)], int(1)),
                (&[("w", 1)], int(1)),
                (&[("lambda", 1), ("v", 1), ("w", 1)], int(1)),
            ],
        );
        assert_eq!(law.checked_mul(&S::one(&g)).unwrap(), law);

        let r = lam_u(1, 4);
        let f = poly(&r, &[(&[("u", 1)], int(1)), (&[("lambda", 1), ("u", 2)], rat(1, 2))]);
        let expect = poly(&r, &[(&[("u", 2)], int(1)), (&[("lambda", 1), ("u", 3)], int(1))]);
        assert_eq!(f.checked_mul(&f).unwrap(), expect);
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = S::one(&uring(2));
        let b = S::one(&uring(3));
        assert_eq!(a.checked_mul(&b), Err(RingError::IncompatibleRings));
        assert_eq!(a.checked_add(&b), Err(RingError::IncompatibleRings));
    }

    #[test]
    fn substitution_examples() {
        let src = SeriesRing::builder(())
            .capped("lambda", -1, 3)
            .var("v", 1)
            .var("w", 1)
            .degree(4)
            .build();
        let dst = lam_u(3, 4);
        let u = S::var(&dst, "u").unwrap();

        let sum = poly(&src, &[(&[("v", 1)], int(1)), (&[("w", 1)], int(1))]);
        let got = sum
            .substitute(&dst, &[("v", u.clone()), ("w", u.clone())])
            .unwrap();
        assert_eq!(got, u.scale(&int(2)));

        let law = sum.plus(&poly(&src, &[(&[("lambda", 1), ("v", 1), ("w", 1)], int(1))]));
        let e = poly(&dst, &[(&[("u", 1)], int(1)), (&[("lambda", 1), ("u", 2)], rat(1, 2))]);
        let got = law
            .substitute(&dst, &[("v", e.clone()), ("w", S::zero(&dst))])
            .unwrap();
        assert_eq!(got, e);

        let bad = S::one(&dst).plus(&u);
        assert!(matches!(
            law.substitute(&dst, &[("v", bad), ("w", u.clone())]),
            Err(RingError::NonComposable { .. })
        ));
    }

    #[test]
    fn exponential_by_substitution() {
        // sum u^n/n! with u -> lambda*u, lambda capped at 2
        let r = lam_u(2, 3);
        let mut taylor = S::zero(&r);
        let mut fact = 1;
        for n in 0..=3u32 {
            if n > 0 {
                fact *= n as i64;
            }
            taylor = taylor.plus(&poly(&r, &[(&[("u", n)], rat(1, fact))]));
        }
        let lu = poly(&r, &[(&[("lambda", 1), ("u", 1)], int(1))]);
        let got = taylor.substitute(&r, &[("u", lu)]).unwrap();
        let expect = poly(
            &r,
            &[
                (&[], int(1)),
                (&[("lambda", 1), ("u", 1)], int(1)),
                (&[("lambda", 2), ("u", 2)], rat(1, 2)),
            ],
        );
        assert_eq!(got, expect);
    }

    #[test]
    fn exp_examples() {
        let r = uring(3);
        assert_eq!(S::zero(&r).exp_truncated().unwrap(), S::one(&r));
        let u = S::var(&r, "u").unwrap();
        let expect = poly(
            &r,
            &[
                (&[], int(1)),
                (&[("u", 1)], int(1)),
                (&[("u", 2)], rat(1, 2)),
                (&[("u", 3)], rat(1, 6)),
            ],
        );
        assert_eq!(u.exp_truncated().unwrap(), expect);

        let t = SeriesRing::builder(()).var("T", 1).degree(2).build();
        let f = poly(&t, &[(&[("T", 1)], int(1)), (&[("T", 2)], rat(1, 2))]);
        let expect = poly(&t, &[(&[], int(1)), (&[("T", 1)], int(1)), (&[("T", 2)], int(1))]);
        assert_eq!(f.exp_truncated().unwrap(), expect);

        assert!(matches!(
            S::one(&r).exp_truncated(),
            Err(RingError::NonComposable { .. })
        ));
    }

    #[test]
    fn exp_needs_invertible_factorials() {
        let m = Modulus::new(2, 1).unwrap();
        let r = SeriesRing::<ModPrimePower>::builder(m).var("u", 1).degree(3).build();
        let u = WeightedSeries::var(&r, "u").unwrap();
        assert_eq!(u.exp_truncated(), Err(RingError::InvalidCoefficientRing(2)));
    }

    #[test]
    fn integrality() {
        let r = uring(3);
        let f = poly(&r, &[(&[], int(1)), (&[("u", 1)], int(1)), (&[("u", 2)], rat(1, 2))]);
        assert!(f.is_p_integral(3));
        assert!(!f.is_p_integral(2));
    }

    #[test]
    fn canonical_forms() {
        let r = SeriesRing::builder(())
            .capped("lambda", -1, 2)
            .var("v", 1)
            .var("w", 1)
            .degree(4)
            .build();
        let law = poly(
            &r,
            &[
                (&[("lambda", 1), ("v", 1), ("w", 1)], int(1)),
                (&[("w", 1)], int(1)),
                (&[("v", 1)], int(1)),
            ],
        );
        assert_eq!(law.to_text(), "1 * v^1 + 1 * w^1 + 1 * lambda^1 v^1 w^1");
        assert_eq!(S::zero(&r).to_text(), "0");
        let j = law.to_json();
        assert_eq!(j["variables"], serde_json::json!(["lambda", "v", "w"]));
        assert_eq!(j["weights"], serde_json::json!([-1, 1, 1]));
        assert_eq!(j["truncation"]["degree"], 4);
        assert_eq!(j["terms"][2]["exponents"], serde_json::json!([1, 1, 1]));
    }

    #[test]
    fn series_inverse() {
        let r = uring(4);
        let one_minus_u = poly(&r, &[(&[], int(1)), (&[("u", 1)], int(-1))]);
        let inv = one_minus_u.try_inverse().unwrap();
        assert_eq!(inv.times(&one_minus_u), S::one(&r));
        assert_eq!(inv.coeff_of(&[("u", 4)]), int(1));
    }

    #[test]
    fn division_by_variable() {
        let r = lam_u(3, 4);
        let f = poly(&r, &[(&[("lambda", 1), ("u", 1)], int(3)), (&[("lambda", 2)], int(1))]);
        let q = f.divide_by_var("lambda").unwrap();
        assert_eq!(q, poly(&r, &[(&[("u", 1)], int(3)), (&[("lambda", 1)], int(1))]));
        assert!(q.divide_by_var("lambda").is_err());
    }
}
