use rand::Rng;
use serde::Serialize;

use super::filtered::{random_filtered, FilteredComplex};
use super::pages::page;
use super::SpecSeqError;

fn pow_mod(m: u64, e: u64, p: u64) -> u64 {
    let (mut acc, mut b, mut e) = (1 % p, m % p, e);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn check_primitive_root(m: u64, p: u64) -> Result<(), SpecSeqError> {
    if !crate::is_prime(p) {
        return Err(SpecSeqError::InvalidPrime(p));
    }
    let order = (1..p).find(|&e| pow_mod(m, e, p) == 1);
    if m.is_multiple_of(p) || order != Some(p - 1) {
        return Err(SpecSeqError::NotPrimitiveRoot { m, p });
    }
    Ok(())
}

/// Pages `2 ≤ r ≤ max_r` on which `d_r` may be nonzero: `m^{r-1} ≡ 1 mod p`,
/// that is `r ≡ 1 mod p - 1`.
pub fn adams_allowed_pages(p: u64, m: u64, max_r: u32) -> Result<Vec<u32>, SpecSeqError> {
    check_primitive_root(m, p)?;
    Ok((2..=max_r).filter(|&r| pow_mod(m, r as u64 - 1, p) == 1).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdamsReport {
    pub p: u64,
    pub m: u64,
    /// Allowed pages up to `N + 1`.
    pub allowed: Vec<u32>,
    /// `(r, rank d_r)` for every forbidden page up to `N + 1`.
    pub forbidden_ranks: Vec<(u32, usize)>,
}

impl AdamsReport {
    pub fn passed(&self) -> bool {
        self.forbidden_ranks.iter().all(|&(_, rank)| rank == 0)
    }
}

/// Checks that the weights split the filtration and that `gr^t` has pure
/// weight `m^t mod p`: projecting `F^t` onto weight `w` stays in `F^t`, and
/// lands in `F^{t+1}` unless `w ≡ m^t`.
fn check_purity(fc: &FilteredComplex, m: u64) -> Result<(), SpecSeqError> {
    let p = fc.prime();
    let weights = fc
        .weights()
        .ok_or_else(|| SpecSeqError::WeightMismatch("complex carries no weights".into()))?;
    for k in fc.degrees() {
        let ws = &weights[(k - fc.start()) as usize];
        for t in 0..=fc.top() as i64 {
            let ft = fc.f(k, t);
            let next = fc.f(k, t + 1);
            let pure = pow_mod(m, t as u64, p);
            for v in ft.basis() {
                for w in 0..p {
                    let proj: Vec<u64> = v
                        .iter()
                        .zip(ws)
                        .map(|(&x, &wt)| if wt % p == w { x } else { 0 })
                        .collect();
                    if !ft.contains(&proj) || (w != pure && !next.contains(&proj)) {
                        return Err(SpecSeqError::WeightMismatch(format!(
                            "gr^{t} in degree {k} is not pure of weight {pure}"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Certifies from the weights which `d_r` must vanish and checks those
/// differentials against the computed pages.
pub fn adams_vanishing_check(fc: &FilteredComplex, m: u64) -> Result<AdamsReport, SpecSeqError> {
    let p = fc.prime();
    check_primitive_root(m, p)?;
    check_purity(fc, m)?;
    let max_r = fc.top() as u32 + 1;
    let allowed = adams_allowed_pages(p, m, max_r)?;
    let forbidden_ranks = (2..=max_r)
        .filter(|r| !allowed.contains(r))
        .map(|r| (r, page(fc, r).d_rank_total()))
        .collect();
    Ok(AdamsReport {
        p,
        m,
        allowed,
        forbidden_ranks,
    })
}

/// A random coordinate-filtered complex in which basis vectors of level `i`
/// have weight `m^i mod p` and `d` only connects equal weights.
pub fn random_weight_pure(
    p: u64,
    m: u64,
    degrees: usize,
    max_dim: usize,
    top: usize,
    rng: &mut impl Rng,
) -> Result<FilteredComplex, SpecSeqError> {
    check_primitive_root(m, p)?;
    let period = (p - 1) as usize;
    let (diffs, levels) = random_filtered(p, degrees, max_dim, top, |s| s % period == 0, rng);
    let weights = levels
        .iter()
        .map(|ls| ls.iter().map(|&l| pow_mod(m, l as u64, p)).collect())
        .collect();
    FilteredComplex::from_levels(p, 0, diffs, levels, top)?.with_weights(weights)
}
