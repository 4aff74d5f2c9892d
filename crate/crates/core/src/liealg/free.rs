use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::Matrix;
use crate::ring::Modulus;

use super::LieError;

/// Largest arity handled by the multilinear constructions.
pub const MAX_ARITY: u64 = 5;

fn check_arity(p: u64) -> Result<(), LieError> {
    if !crate::is_prime(p) {
        return Err(LieError::InvalidPrime(p));
    }
    if p > MAX_ARITY {
        return Err(LieError::ArityTooLarge { arity: p, cap: MAX_ARITY });
    }
    Ok(())
}

/// A noncommutative polynomial over `F_p` in letters `0, 1, 2, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FreeAssoc {
    p: u64,
    terms: BTreeMap<Vec<u8>, u64>,
}

impl FreeAssoc {
    pub fn zero(p: u64) -> Self {
        FreeAssoc {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn word(p: u64, letters: &[u8], coeff: i64) -> Self {
        let mut z = Self::zero(p);
        z.add_term(letters.to_vec(), coeff.rem_euclid(p as i64) as u64);
        z
    }

    pub fn letter(p: u64, a: u8) -> Self {
        Self::word(p, &[a], 1)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    fn add_term(&mut self, w: Vec<u8>, c: u64) {
        let c = c % self.p;
        if c == 0 {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert(0);
        *e = (*e + c) % self.p;
        if *e == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &u64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &[u8]) -> u64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = c.rem_euclid(self.p as i64) as u64;
        let mut out = Self::zero(self.p);
        for (w, &x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.p);
        for (a, &x) in &self.terms {
            for (b, &y) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, x * y);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::word(self.p, &[], 1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `[a, b] = ab - ba`.
    pub fn bracket(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Evaluates the polynomial with letter `i` sent to `letters[i]`.
    pub fn eval(&self, letters: &[Matrix]) -> Matrix {
        let m = letters[0].modulus();
        let n = letters[0].rows();
        let mut acc = Matrix::zeros(m, n, n);
        for (w, &c) in &self.terms {
            let mut prod = Matrix::identity(m, n);
            for &a in w {
                prod = prod.mul(&letters[a as usize]);
            }
            acc = acc.add(&prod.scale(c as i64));
        }
        acc
    }

    /// Formats words using the given letter names.
    pub fn format_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_owned();
        }
        self.terms
            .iter()
            .map(|(w, c)| {
                let word: String = w.iter().map(|&a| names[a as usize]).collect();
                if *c == 1 {
                    word
                } else {
                    format!("{c}*{word}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for FreeAssoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=16).map(|i| format!("X{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.format_with(&refs))
    }
}

/// A multilinear element of the associative operad at arity `p`: a
/// combination of the `p!` words `X_{σ(1)} ⋯ X_{σ(p)}`.
pub type MultilinearAssoc = FreeAssoc;

/// A multilinear Lie element at arity `p`, in the basis of left-normed
/// brackets `[[…[X_{σ(1)}, X_{σ(2)}], …], X_{σ(p)}]` with `σ(1) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearLie {
    p: u64,
    terms: BTreeMap<Vec<u8>, u64>,
}

impl MultilinearLie {
    pub fn arity(&self) -> u64 {
        self.p
    }

    /// Coefficients keyed by the permutation (0-based, first entry 0).
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &u64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

impl fmt::Display for MultilinearLie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| {
                let mut b = format!("X{}", s[0] + 1);
                for &a in &s[1..] {
                    b = format!("[{b},X{}]", a + 1);
                }
                if *c == 1 {
                    b
                } else {
                    format!("{c}*{b}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

/// Advances to the next lexicographic permutation; false at the last one.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `w = sum_{σ(1)=1} [[…[X_{σ(1)}, X_{σ(2)}], …], X_{σ(p)}]`.
pub fn w_element(p: u64) -> Result<MultilinearLie, LieError> {
    check_arity(p)?;
    let terms = permutations(p as usize)
        .into_iter()
        .filter(|s| s[0] == 0)
        .map(|s| (s, 1))
        .collect();
    Ok(MultilinearLie { p, terms })
}

/// Expansion of a left-normed bracket into words.
pub fn left_normed(p: u64, letters: &[u8]) -> FreeAssoc {
    let mut acc = FreeAssoc::letter(p, letters[0]);
    for &a in &letters[1..] {
        acc = acc.bracket(&FreeAssoc::letter(p, a));
    }
    acc
}

/// The natural map `Lie(p) -> Ass(p)`.
pub fn lie_to_assoc(e: &MultilinearLie) -> MultilinearAssoc {
    let mut acc = FreeAssoc::zero(e.p);
    for (s, &c) in &e.terms {
        acc = acc.add(&left_normed(e.p, s).scale(c as i64));
    }
    acc
}

/// The norm `sum_{σ ∈ Σ_p} X_{σ(1)} ⋯ X_{σ(p)}`.
pub fn norm_element(p: u64) -> Result<MultilinearAssoc, LieError> {
    check_arity(p)?;
    let mut acc = FreeAssoc::zero(p);
    for s in permutations(p as usize) {
        acc = acc.add(&FreeAssoc::word(p, &s, 1));
    }
    Ok(acc)
}

/// Rank over `F_p` of the images of the `(p-1)!` left-normed basis
/// brackets in the `p!`-dimensional word space.
pub fn left_normed_rank(p: u64) -> Result<usize, LieError> {
    check_arity(p)?;
    let words = permutations(p as usize);
    let index: BTreeMap<&Vec<u8>, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let basis: Vec<Vec<u8>> = words.iter().filter(|s| s[0] == 0).cloned().collect();
    let modulus = Modulus::new(p, 1).expect("prime");
    let mut m = Matrix::zeros(modulus, basis.len(), words.len());
    for (r, s) in basis.iter().enumerate() {
        for (w, &c) in left_normed(p, s).terms() {
            m.set(r, index[w], c as i64);
        }
    }
    Ok(m.rank())
}

/// A Lie polynomial written as right-nested brackets
/// `[a_1, [a_2, …, [a_{k-1}, a_k]]]` in letters `0 = x`, `1 = y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiePolynomial {
    p: u64,
    terms: BTreeMap<Vec<u8>, u64>,
}

impl LiePolynomial {
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &u64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn nested_assoc(p: u64, letters: &[u8]) -> FreeAssoc {
        let k = letters.len();
        let mut acc = FreeAssoc::letter(p, letters[k - 1]);
        for &a in letters[..k - 1].iter().rev() {
            acc = FreeAssoc::letter(p, a).bracket(&acc);
        }
        acc
    }

    pub fn to_assoc(&self) -> FreeAssoc {
        let mut acc = FreeAssoc::zero(self.p);
        for (w, &c) in &self.terms {
            acc = acc.add(&Self::nested_assoc(self.p, w).scale(c as i64));
        }
        acc
    }

    /// Evaluates with `x`, `y` sent to matrices, brackets as commutators.
    pub fn eval(&self, x: &Matrix, y: &Matrix) -> Matrix {
        let letters = [x.clone(), y.clone()];
        let mut acc = Matrix::zeros(x.modulus(), x.rows(), x.cols());
        for (w, &c) in &self.terms {
            let k = w.len();
            let mut v = letters[w[k - 1] as usize].clone();
            for &a in w[..k - 1].iter().rev() {
                let z = &letters[a as usize];
                v = z.mul(&v).sub(&v.mul(z));
            }
            acc = acc.add(&v.scale(c as i64));
        }
        acc
    }

    /// `L(x, 0)`: drops every bracket containing `y`.
    pub fn at_y_zero(&self) -> Self {
        LiePolynomial {
            p: self.p,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| !w.contains(&1))
                .map(|(w, c)| (w.clone(), *c))
                .collect(),
        }
    }
}

impl fmt::Display for LiePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let name = |a: u8| if a == 0 { "x" } else { "y" };
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let k = w.len();
                let mut s = name(w[k - 1]).to_owned();
                for &a in w[..k - 1].iter().rev() {
                    s = format!("[{},{s}]", name(a));
                }
                if *c == 1 {
                    s
                } else {
                    format!("{c}*{s}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

fn inverse_mod(a: u64, p: u64) -> u64 {
    // p is prime, so a^{p-2} is the inverse
    let mut acc = 1;
    for _ in 0..p - 2 {
        acc = acc * a % p;
    }
    acc
}

/// Jacobson's polynomial `L(x, y) = sum_{i=1}^{p-1} s_i(x, y)`, where
/// `i s_i` is the coefficient of `t^{i-1}` in `ad(tx + y)^{p-1}(x)`.
/// The result is certified against `(x+y)^p - x^p - y^p` in the free
/// associative algebra.
pub fn jacobson_l(p: u64) -> Result<LiePolynomial, LieError> {
    check_arity(p)?;
    let k = (p - 1) as usize;
    let mut terms = BTreeMap::new();
    for mask in 0u32..(1 << k) {
        let z: Vec<u8> = (0..k).map(|b| ((mask >> b) & 1) as u8).collect();
        let xs = z.iter().filter(|&&a| a == 0).count() as u64;
        let i = xs + 1;
        if i > p - 1 {
            continue;
        }
        let mut w = z;
        w.push(0);
        terms.insert(w, inverse_mod(i, p));
    }
    let l = LiePolynomial { p, terms };
    let x = FreeAssoc::letter(p, 0);
    let y = FreeAssoc::letter(p, 1);
    let expect = x.add(&y).pow(p as u32).sub(&x.pow(p as u32)).sub(&y.pow(p as u32));
    if l.to_assoc() != expect {
        return Err(LieError::CertificationFailure(format!(
            "(x+y)^{p} - x^{p} - y^{p} differs from L at p = {p}"
        )));
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_examples() {
        assert_eq!(w_element(2).unwrap().to_string(), "[X1,X2]");
        assert_eq!(w_element(3).unwrap().to_string(), "[[X1,X2],X3] + [[X1,X3],X2]");
        let w5 = w_element(5).unwrap();
        assert_eq!(w5.num_terms(), 24);
        assert!(w5.terms().all(|(_, &c)| c == 1));
        assert!(matches!(w_element(7), Err(LieError::ArityTooLarge { .. })));
    }

    #[test]
    fn bracket_expansion() {
        let a = left_normed(3, &[0, 1]);
        assert_eq!(a.to_string(), "X1X2 + 2*X2X1");
        // signs vanish mod 2: [X1,X2] is the norm
        assert_eq!(lie_to_assoc(&w_element(2).unwrap()), norm_element(2).unwrap());
    }

    #[test]
    fn w_maps_to_norm() {
        for p in [2, 3, 5] {
            assert_eq!(lie_to_assoc(&w_element(p).unwrap()), norm_element(p).unwrap());
        }
    }

    #[test]
    fn left_normed_basis_is_independent() {
        for (p, dim) in [(2, 1), (3, 2), (5, 24)] {
            assert_eq!(left_normed_rank(p).unwrap(), dim);
        }
    }

    #[test]
    fn jacobson_examples() {
        let l2 = jacobson_l(2).unwrap();
        let x = FreeAssoc::letter(2, 0);
        let y = FreeAssoc::letter(2, 1);
        assert_eq!(l2.to_assoc(), x.bracket(&y));
        for p in [2, 3, 5] {
            let l = jacobson_l(p).unwrap();
            assert!(l.at_y_zero().to_assoc().is_zero());
        }
    }

    #[test]
    fn jacobson_on_elementary_matrices() {
        let f3 = Modulus::new(3, 1).unwrap();
        let e12 = Matrix::from_rows(f3, &[vec![0, 1], vec![0, 0]]);
        let e21 = Matrix::from_rows(f3, &[vec![0, 0], vec![1, 0]]);
        let l = jacobson_l(3).unwrap();
        assert_eq!(l.eval(&e12, &e21), e12.add(&e21));
    }

    #[test]
    fn permutation_enumeration() {
        assert_eq!(permutations(3).len(), 6);
        let mut v = vec![0, 0, 1];
        let mut n = 1;
        while next_permutation(&mut v) {
            n += 1;
        }
        assert_eq!(n, 3);
    }
}
