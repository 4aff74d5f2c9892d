use std::fmt;

use crate::linalg::Matrix;
use crate::ring::Modulus;

use super::LieError;

/// A derivation `ξ` of `F_p[x]/(x^N)`, stored as `ξ(x)`; it acts by
/// `ξ(f) = f' · ξ(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedDerivation {
    p: u64,
    value: Vec<u64>,
}

impl TruncatedDerivation {
    /// `value[i]` is the coefficient of `x^i` in `ξ(x)`; its length is `N`.
    /// Fails unless `ξ` preserves the ideal `(x^N)`, i.e. `N · ξ(x)_0 = 0`.
    pub fn new(p: u64, value: &[i64]) -> Result<Self, LieError> {
        if !crate::is_prime(p) {
            return Err(LieError::InvalidPrime(p));
        }
        if value.is_empty() {
            return Err(LieError::NotADerivation("truncation length is zero".into()));
        }
        let value: Vec<u64> = value.iter().map(|c| c.rem_euclid(p as i64) as u64).collect();
        let n = value.len() as u64;
        if !(n % p * value[0]).is_multiple_of(p) {
            return Err(LieError::NotADerivation(format!(
                "ξ(x^{n}) = {n}·x^{}·ξ(x) is not in (x^{n})",
                n - 1
            )));
        }
        Ok(TruncatedDerivation { p, value })
    }

    /// `x^k ∂/∂x` on `F_p[x]/(x^N)`.
    pub fn monomial(p: u64, k: usize, truncation: usize) -> Result<Self, LieError> {
        let mut v = vec![0; truncation];
        if k < truncation {
            v[k] = 1;
        }
        Self::new(p, &v)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn truncation(&self) -> usize {
        self.value.len()
    }

    pub fn value(&self) -> &[u64] {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.iter().all(|&c| c == 0)
    }

    fn field(&self) -> Modulus {
        Modulus::new(self.p, 1).expect("prime")
    }

    /// `ξ(f)` for a truncated polynomial `f`.
    pub fn apply(&self, f: &[u64]) -> Vec<u64> {
        let n = self.value.len();
        let p = self.p;
        let mut out = vec![0; n];
        for (i, &c) in f.iter().enumerate().skip(1) {
            let d = c * (i as u64 % p) % p;
            if d == 0 {
                continue;
            }
            for (j, &g) in self.value.iter().enumerate() {
                if i - 1 + j < n {
                    out[i - 1 + j] = (out[i - 1 + j] + d * g) % p;
                }
            }
        }
        out
    }

    /// Matrix of `ξ` on the basis `1, x, …, x^{N-1}`.
    pub fn matrix(&self) -> Matrix {
        let n = self.value.len();
        let mut m = Matrix::zeros(self.field(), n, n);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            for (r, c) in self.apply(&e).into_iter().enumerate() {
                m.set(r, i, c as i64);
            }
        }
        m
    }
}

impl fmt::Display for TruncatedDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .value
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| {
                let mono = match i {
                    0 => String::new(),
                    1 => "x".to_owned(),
                    _ => format!("x^{i}"),
                };
                match (*c, mono.is_empty()) {
                    (1, true) => "d/dx".to_owned(),
                    (1, false) => format!("{mono} d/dx"),
                    (c, true) => format!("{c} d/dx"),
                    (c, false) => format!("{c}*{mono} d/dx"),
                }
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Product in `F_p[x]/(x^N)`.
pub fn truncated_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len();
    let mut out = vec![0; n];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            if i + j < n {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
    }
    out
}

/// Whether the linear operator `d` satisfies `d(fg) = d(f) g + f d(g)` on
/// the given pairs.
pub fn satisfies_leibniz(p: u64, d: &Matrix, pairs: &[(Vec<u64>, Vec<u64>)]) -> bool {
    pairs.iter().all(|(f, g)| {
        let lhs = d.apply(&truncated_mul(p, f, g));
        let a = truncated_mul(p, &d.apply(f), g);
        let b = truncated_mul(p, f, &d.apply(g));
        lhs.iter()
            .zip(a.iter().zip(&b))
            .all(|(l, (x, y))| *l == (x + y) % p)
    })
}

/// `ξ^{[p]}`, the `p`-fold composite of `ξ`. The composite is checked to
/// satisfy Leibniz on `x · x` and to agree on every basis monomial with
/// the derivation determined by its value on `x`.
pub fn derivation_pth_power(
    xi: &TruncatedDerivation,
    p: u64,
) -> Result<TruncatedDerivation, LieError> {
    if p != xi.p {
        return Err(LieError::InvalidPrime(p));
    }
    let n = xi.truncation();
    let dp = xi.matrix().pow(p);
    let mut x = vec![0; n];
    if n > 1 {
        x[1] = 1;
    }
    if !satisfies_leibniz(p, &dp, &[(x.clone(), x.clone())]) {
        return Err(LieError::NotADerivation("Leibniz fails on x·x".into()));
    }
    let value: Vec<i64> = dp.apply(&x).into_iter().map(|c| c as i64).collect();
    let out = TruncatedDerivation::new(p, &value)?;
    if out.matrix() != dp {
        return Err(LieError::NotADerivation(
            "composite differs from the derivation with the same value on x".into(),
        ));
    }
    Ok(out)
}
