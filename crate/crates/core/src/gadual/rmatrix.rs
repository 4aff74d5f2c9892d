use std::fmt;

use serde::Serialize;

use crate::linalg::Matrix;
use crate::ring::Modulus;

use super::GaDualError;

/// The coefficient rings `F_p`, `Z/p^2`, `F_p[λ]/λ^p`, `Z/p^2[λ]/λ^p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BaseRing {
    Fp(u64),
    Zp2(u64),
    FpLambda(u64),
    Zp2Lambda(u64),
}

impl BaseRing {
    pub fn prime(self) -> u64 {
        match self {
            BaseRing::Fp(p) | BaseRing::Zp2(p) | BaseRing::FpLambda(p) | BaseRing::Zp2Lambda(p) => p,
        }
    }

    pub fn has_lambda(self) -> bool {
        matches!(self, BaseRing::FpLambda(_) | BaseRing::Zp2Lambda(_))
    }

    /// Exponent `k` of the scalar ring `Z/p^k`.
    pub fn exponent(self) -> u32 {
        match self {
            BaseRing::Fp(_) | BaseRing::FpLambda(_) => 1,
            BaseRing::Zp2(_) | BaseRing::Zp2Lambda(_) => 2,
        }
    }

    pub fn modulus(self) -> Modulus {
        Modulus::new(self.prime(), self.exponent()).expect("valid ring")
    }

    /// Rank of the ring as a module over its scalars: `p` with `λ`, else 1.
    pub fn lambda_dim(self) -> usize {
        if self.has_lambda() {
            self.prime() as usize
        } else {
            1
        }
    }

    pub fn mod_p(self) -> BaseRing {
        match self {
            BaseRing::Zp2(p) => BaseRing::Fp(p),
            BaseRing::Zp2Lambda(p) => BaseRing::FpLambda(p),
            r => r,
        }
    }

    pub fn at_lambda_zero(self) -> BaseRing {
        match self {
            BaseRing::FpLambda(p) => BaseRing::Fp(p),
            BaseRing::Zp2Lambda(p) => BaseRing::Zp2(p),
            r => r,
        }
    }

    pub fn name(self) -> String {
        let p = self.prime();
        match self {
            BaseRing::Fp(_) => format!("F_{p}"),
            BaseRing::Zp2(_) => format!("Z/{}", p * p),
            BaseRing::FpLambda(_) => format!("F_{p}[λ]/λ^{p}"),
            BaseRing::Zp2Lambda(_) => format!("Z/{}[λ]/λ^{p}", p * p),
        }
    }

    pub(crate) fn check(self) -> Result<Self, GaDualError> {
        if crate::is_prime(self.prime()) {
            Ok(self)
        } else {
            Err(GaDualError::InvalidPrime(self.prime()))
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A matrix over a [`BaseRing`], stored as `sum_j λ^j A_j` with each `A_j`
/// over `Z/p^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RMatrix {
    ring: BaseRing,
    rows: usize,
    cols: usize,
    coeffs: Vec<Matrix>,
}

impl RMatrix {
    pub fn zeros(ring: BaseRing, rows: usize, cols: usize) -> Self {
        let m = ring.modulus();
        RMatrix {
            ring,
            rows,
            cols,
            coeffs: (0..ring.lambda_dim()).map(|_| Matrix::zeros(m, rows, cols)).collect(),
        }
    }

    pub fn identity(ring: BaseRing, n: usize) -> Self {
        Self::lambda_times(ring, 0, &Matrix::identity(ring.modulus(), n))
    }

    /// `λ^j · m`; zero once `j` reaches the `λ` cap.
    pub fn lambda_times(ring: BaseRing, j: usize, m: &Matrix) -> Self {
        let mut out = Self::zeros(ring, m.rows(), m.cols());
        if j < ring.lambda_dim() {
            out.coeffs[j] = m.reduce(ring.modulus());
        }
        out
    }

    pub fn from_rows(ring: BaseRing, rows: &[Vec<i64>]) -> Self {
        Self::lambda_times(ring, 0, &Matrix::from_rows(ring.modulus(), rows))
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Coefficient of `λ^j`.
    pub fn coeff(&self, j: usize) -> &Matrix {
        &self.coeffs[j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Matrix::is_zero)
    }

    /// Adds `c λ^j` at entry `(r, s)`.
    pub fn add_entry(&mut self, r: usize, s: usize, j: usize, c: i64) {
        if j >= self.coeffs.len() {
            return;
        }
        let n = self.ring.modulus().order() as i64;
        let v = (self.coeffs[j].get(r, s) as i64 + c).rem_euclid(n);
        self.coeffs[j].set(r, s, v);
    }

    fn zip(&self, other: &Self, f: impl Fn(&Matrix, &Matrix) -> Matrix) -> Self {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        RMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, Matrix::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, Matrix::sub)
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn scale(&self, c: i64) -> Self {
        RMatrix {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
            ..self.clone()
        }
    }

    fn convolve(&self, other: &Self, rows: usize, cols: usize, f: impl Fn(&Matrix, &Matrix) -> Matrix) -> Self {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        let mut out = Self::zeros(self.ring, rows, cols);
        let l = self.ring.lambda_dim();
        for a in 0..l {
            if self.coeffs[a].is_zero() {
                continue;
            }
            for b in 0..l - a {
                out.coeffs[a + b] = out.coeffs[a + b].add(&f(&self.coeffs[a], &other.coeffs[b]));
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        self.convolve(other, self.rows, other.cols, Matrix::mul)
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::identity(self.ring, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn kron(&self, other: &Self) -> Self {
        self.convolve(other, self.rows * other.rows, self.cols * other.cols, Matrix::kron)
    }

    pub fn transpose(&self) -> Self {
        RMatrix {
            ring: self.ring,
            rows: self.cols,
            cols: self.rows,
            coeffs: self.coeffs.iter().map(Matrix::transpose).collect(),
        }
    }

    /// Places `m` with its top-left corner at `(r, c)`.
    pub fn paste(&mut self, r: usize, c: usize, m: &RMatrix) {
        for (a, b) in self.coeffs.iter_mut().zip(&m.coeffs) {
            a.paste(r, c, b);
        }
    }

    /// The matrix over `Z/p^k` of the underlying scalar-linear map, in the
    /// basis `e_i λ^a` indexed by `i * lambda_dim + a`.
    pub fn expand(&self) -> Matrix {
        let l = self.ring.lambda_dim();
        let m = self.ring.modulus();
        let shift = Matrix::from_fn(m, l, l, |r, c| (r == c + 1) as i64);
        let mut power = Matrix::identity(m, l);
        let mut out = Matrix::zeros(m, self.rows * l, self.cols * l);
        for a in &self.coeffs {
            out = out.add(&a.kron(&power));
            power = power.mul(&shift);
        }
        out
    }

    /// Image under `Z/p^2 → F_p` and/or `λ ↦ 0`.
    pub fn reduce_to(&self, target: BaseRing) -> Self {
        assert_eq!(target.prime(), self.ring.prime());
        assert!(target.exponent() <= self.ring.exponent());
        assert!(!target.has_lambda() || self.ring.has_lambda());
        let m = target.modulus();
        RMatrix {
            ring: target,
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs[..target.lambda_dim()].iter().map(|a| a.reduce(m)).collect(),
        }
    }

    /// Canonical lift to a ring with larger scalars (same `λ` structure).
    pub fn lift_to(&self, target: BaseRing) -> Self {
        assert_eq!(target.lambda_dim(), self.ring.lambda_dim());
        let m = target.modulus();
        RMatrix {
            ring: target,
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs.iter().map(|a| a.lift(m)).collect(),
        }
    }

    /// Entry `(r, c)` as text, e.g. `2 - λ`.
    pub fn entry_text(&self, r: usize, c: usize) -> String {
        let n = self.ring.modulus().order();
        let mut parts = Vec::new();
        for (j, a) in self.coeffs.iter().enumerate() {
            let v = a.get(r, c);
            if v == 0 {
                continue;
            }
            let (sign, mag) = if v > n / 2 { ("-", n - v) } else { ("+", v) };
            let mono = match j {
                0 => String::new(),
                1 => "λ".to_owned(),
                _ => format!("λ^{j}"),
            };
            let body = match (mag, mono.is_empty()) {
                (m, true) => m.to_string(),
                (1, false) => mono,
                (m, false) => format!("{m}{mono}"),
            };
            parts.push((sign, body));
        }
        if parts.is_empty() {
            return "0".to_owned();
        }
        let mut s = String::new();
        for (i, (sign, body)) in parts.into_iter().enumerate() {
            match (i, sign) {
                (0, "+") => s.push_str(&body),
                (0, _) => s.push_str(&format!("-{body}")),
                (_, sg) => s.push_str(&format!(" {sg} {body}")),
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_arithmetic_truncates() {
        let r = BaseRing::Zp2Lambda(2);
        let one = Matrix::identity(r.modulus(), 1);
        let lam = RMatrix::lambda_times(r, 1, &one);
        assert!(lam.mul(&lam).is_zero());
        assert_eq!(lam.entry_text(0, 0), "λ");
        let x = RMatrix::lambda_times(r, 0, &one.scale(2)).sub(&lam);
        assert_eq!(x.entry_text(0, 0), "2 - λ");
    }

    #[test]
    fn expansion_is_multiplicative() {
        let r = BaseRing::Zp2Lambda(3);
        let mut a = RMatrix::zeros(r, 2, 2);
        a.add_entry(0, 1, 1, 1);
        a.add_entry(1, 0, 0, 3);
        let mut b = RMatrix::zeros(r, 2, 2);
        b.add_entry(1, 1, 2, 5);
        b.add_entry(0, 0, 1, 2);
        assert_eq!(a.mul(&b).expand(), a.expand().mul(&b.expand()));
        assert_eq!(a.kron(&b).mul(&b.kron(&a)), a.mul(&b).kron(&b.mul(&a)));
    }

    #[test]
    fn reductions() {
        let r = BaseRing::Zp2Lambda(2);
        let mut a = RMatrix::zeros(r, 1, 1);
        a.add_entry(0, 0, 0, 2);
        a.add_entry(0, 0, 1, 1);
        assert!(a.reduce_to(BaseRing::Fp(2)).is_zero());
        assert_eq!(a.reduce_to(BaseRing::FpLambda(2)).entry_text(0, 0), "λ");
    }
}
