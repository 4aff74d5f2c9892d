use serde::Serialize;

use crate::ring::{Rational, RingElem};

use super::{WittError, WittPolynomialSystem};

/// A Witt vector `(x_0, x_1, ...)` with coordinates in any ring.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WittVector<R> {
    pub prime: u64,
    pub coords: Vec<R>,
}

impl<R: RingElem> WittVector<R> {
    pub fn new(prime: u64, coords: Vec<R>) -> Self {
        WittVector { prime, coords }
    }

    pub fn zero(prime: u64, length: usize, ctx: &R::Ctx) -> Self {
        WittVector::new(prime, vec![R::zero(ctx); length])
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(R::is_zero)
    }

    /// The first `k` coordinates.
    pub fn truncate(&self, k: usize) -> Self {
        WittVector::new(self.prime, self.coords[..k].to_vec())
    }

    /// Ghost components `Φ_0..Φ_{n-1}` evaluated on this vector.
    pub fn ghost_components(&self) -> Vec<R> {
        let p = self.prime;
        let ctx = self.coords[0].ctx();
        (0..self.len())
            .map(|i| {
                let mut acc = R::zero(&ctx);
                for j in 0..=i {
                    let pj = R::from_integer(&ctx, &num_bigint::BigInt::from(p).pow(j as u32));
                    acc = acc.plus(&pj.times(&self.coords[j].pow(p.pow((i - j) as u32))));
                }
                acc
            })
            .collect()
    }
}

fn check_len<R>(sys: &WittPolynomialSystem, x: &WittVector<R>, expected: usize) -> Result<(), WittError> {
    if x.coords.len() != expected {
        return Err(WittError::LengthMismatch {
            expected,
            found: x.coords.len(),
        });
    }
    if x.prime != sys.prime() {
        return Err(WittError::LengthMismatch {
            expected,
            found: 0,
        });
    }
    Ok(())
}

fn eval_all<R: RingElem>(
    polys: &[super::Poly],
    values: &[R],
) -> Result<Vec<R>, WittError> {
    let one = values[0].one_like();
    polys
        .iter()
        .map(|f| f.evaluate(values, &one).map_err(WittError::from))
        .collect()
}

/// Witt vector sum.
pub fn witt_add<R: RingElem>(
    sys: &WittPolynomialSystem,
    x: &WittVector<R>,
    y: &WittVector<R>,
) -> Result<WittVector<R>, WittError> {
    let n = sys.length();
    check_len(sys, x, n)?;
    check_len(sys, y, n)?;
    let values: Vec<R> = x.coords.iter().chain(&y.coords).cloned().collect();
    Ok(WittVector::new(sys.prime(), eval_all(sys.sum_polys(), &values)?))
}

/// Witt vector product.
pub fn witt_mul<R: RingElem>(
    sys: &WittPolynomialSystem,
    x: &WittVector<R>,
    y: &WittVector<R>,
) -> Result<WittVector<R>, WittError> {
    let n = sys.length();
    check_len(sys, x, n)?;
    check_len(sys, y, n)?;
    let values: Vec<R> = x.coords.iter().chain(&y.coords).cloned().collect();
    Ok(WittVector::new(sys.prime(), eval_all(sys.product_polys(), &values)?))
}

/// Additive inverse.
pub fn witt_neg<R: RingElem>(
    sys: &WittPolynomialSystem,
    x: &WittVector<R>,
) -> Result<WittVector<R>, WittError> {
    let n = sys.length();
    check_len(sys, x, n)?;
    // negation polynomials live in T_0..T_n; T_n does not occur
    let mut values = x.coords.clone();
    values.push(x.coords[0].zero_like());
    Ok(WittVector::new(sys.prime(), eval_all(sys.negation_polys(), &values)?))
}

pub fn witt_sub<R: RingElem>(
    sys: &WittPolynomialSystem,
    x: &WittVector<R>,
    y: &WittVector<R>,
) -> Result<WittVector<R>, WittError> {
    witt_add(sys, x, &witt_neg(sys, y)?)
}

/// Frobenius `W_{n+1} -> W_n`; `x` must have `n + 1` coordinates.
pub fn frobenius<R: RingElem>(
    sys: &WittPolynomialSystem,
    x: &WittVector<R>,
) -> Result<WittVector<R>, WittError> {
    check_len(sys, x, sys.length() + 1)?;
    Ok(WittVector::new(sys.prime(), eval_all(sys.frobenius_polys(), &x.coords)?))
}

/// Verschiebung on `W_n`: `(0, x_0, ..., x_{n-2})`.
pub fn verschiebung<R: RingElem>(x: &WittVector<R>) -> WittVector<R> {
    let mut coords = Vec::with_capacity(x.len());
    coords.push(x.coords[0].zero_like());
    coords.extend(x.coords[..x.len() - 1].iter().cloned());
    WittVector::new(x.prime, coords)
}

/// Verschiebung `W_n -> W_{n+1}`: `(0, x_0, ..., x_{n-1})`.
pub fn verschiebung_extend<R: RingElem>(x: &WittVector<R>) -> WittVector<R> {
    let mut coords = Vec::with_capacity(x.len() + 1);
    coords.push(x.coords[0].zero_like());
    coords.extend(x.coords.iter().cloned());
    WittVector::new(x.prime, coords)
}

/// Multiplicative lift `[a] = (a, 0, ..., 0)`.
pub fn teichmuller<R: RingElem>(p: u64, a: R, length: usize) -> WittVector<R> {
    let mut coords = vec![a.zero_like(); length];
    coords[0] = a;
    WittVector::new(p, coords)
}

/// `x + x + ... + x` (`k` summands).
pub fn p_fold_sum<R: RingElem>(
    sys: &WittPolynomialSystem,
    x: &WittVector<R>,
    k: u64,
) -> Result<WittVector<R>, WittError> {
    let mut acc = WittVector::new(x.prime, vec![x.coords[0].zero_like(); x.len()]);
    for _ in 0..k {
        acc = witt_add(sys, &acc, x)?;
    }
    Ok(acc)
}

impl WittVector<Rational> {
    pub fn from_integers(prime: u64, xs: &[i64]) -> Self {
        WittVector::new(prime, xs.iter().map(|&x| crate::ring::int(x)).collect())
    }
}
