use std::sync::Arc;

use serde::Serialize;

use crate::ring::{Rational, RingElem, SeriesRing};
use crate::witt::{teichmuller, var_names, verschiebung, witt_add, witt_mul, WittPolynomialSystem, WittVector};

use super::{artin_hasse, g_lambda, truncated_exponential, FglError, Poly, LAMBDA};

/// Largest `m` for which `lambda^{p^m}` survives when products keep
/// `lambda^0..lambda^{lambda_degree + 1}` (one more than `Ψ` itself, since
/// `Ψ` divides by `lambda`).
pub fn minimal_coordinates(p: u64, lambda_degree: u32) -> usize {
    let mut m = 0;
    while p.pow(m as u32 + 1) <= lambda_degree as u64 + 1 {
        m += 1;
    }
    m
}

fn psi_ring(
    lambda_cap: u32,
    names: &[String],
    degree: u32,
) -> Arc<SeriesRing<Rational>> {
    SeriesRing::builder(())
        .capped(LAMBDA, -1, lambda_cap)
        .vars(names, 1)
        .degree(degree)
        .build()
}

/// `Ψ = (prod_{j <= m} AH(lambda^{p^j} T_j) - 1) / lambda`, keeping total
/// degree `<= degree_t` in the `T_j` and `lambda^0..lambda^{degree_lambda}`.
pub fn psi_series(p: u64, m: usize, degree_t: u32, degree_lambda: u32) -> Result<Poly, FglError> {
    let max = minimal_coordinates(p, degree_lambda);
    if m > max {
        return Err(FglError::TooManyCoordinates {
            m,
            max,
            cap: degree_lambda,
        });
    }
    let names = var_names("T", m + 1);
    let wide = psi_ring(degree_lambda + 1, &names, degree_t);
    let ah = artin_hasse(p, degree_t)?;
    let lam = Poly::var(&wide, LAMBDA)?;
    let mut prod = Poly::one(&wide);
    for (j, name) in names.iter().enumerate() {
        let arg = lam.pow(p.pow(j as u32)).times(&Poly::var(&wide, name)?);
        prod = prod.times(&ah.substitute(&wide, &[("T", arg)])?);
    }
    let psi = prod.minus(&Poly::one(&wide)).divide_by_var(LAMBDA)?;
    let psi = psi.to_ring(&psi_ring(degree_lambda, &names, degree_t))?;
    if !psi.is_p_integral(p) {
        return Err(FglError::IntegralityFailure(format!(
            "Ψ at p = {p} has a coefficient with negative valuation"
        )));
    }
    Ok(psi)
}

/// `Ψ ≡ E_lambda(T_0) (mod lambda^{p-1})`.
pub fn psi_matches_truncated_exponential(psi: &Poly, p: u64) -> Result<bool, FglError> {
    let degree = psi.ring().degree().unwrap_or(0);
    let names: Vec<String> = psi
        .ring()
        .variables()
        .iter()
        .filter(|v| v.name != LAMBDA)
        .map(|v| v.name.clone())
        .collect();
    let low = psi_ring(p as u32 - 2, &names, degree);
    let e = truncated_exponential(p)?;
    let t0 = Poly::var(&low, "T0")?;
    let expect = e.apply(&low, &t0)?;
    Ok(psi.to_ring(&low)? == expect)
}

/// Both clauses of the homomorphism check for `Ψ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiCheck {
    pub p: u64,
    pub m: usize,
    pub degree_t: u32,
    pub degree_lambda: u32,
    pub integral: bool,
    pub matches_truncated_exponential: bool,
    /// `Ψ(X +_W Y) = Ψ(X) + Ψ(Y) + lambda Ψ(X) Ψ(Y)`.
    pub additive: bool,
    /// `Ψ(V T) = Ψ([lambda^{p-1}] T)`.
    pub kills_v_minus_lift: bool,
    /// `Ψ(V T) ≡ 0 (mod lambda)`.
    pub kills_v_at_lambda_zero: bool,
    pub psi_terms: usize,
}

impl PsiCheck {
    pub fn passed(&self) -> bool {
        self.integral
            && self.matches_truncated_exponential
            && self.additive
            && self.kills_v_minus_lift
            && self.kills_v_at_lambda_zero
    }
}

pub fn psi_homomorphism_check(
    p: u64,
    m: usize,
    degree_t: u32,
    degree_lambda: u32,
) -> Result<PsiCheck, FglError> {
    let psi = psi_series(p, m, degree_t, degree_lambda)?;
    let sys = WittPolynomialSystem::shared(p, m + 1)?;
    let t_names = var_names("T", m + 1);

    // clause (a)
    let mut xy_names = var_names("X", m + 1);
    xy_names.extend(var_names("Y", m + 1));
    let xy = psi_ring(degree_lambda, &xy_names, degree_t);
    let xs: Vec<Poly> = (0..=m)
        .map(|i| Poly::var(&xy, &format!("X{i}")))
        .collect::<Result<_, _>>()?;
    let ys: Vec<Poly> = (0..=m)
        .map(|i| Poly::var(&xy, &format!("Y{i}")))
        .collect::<Result<_, _>>()?;
    let sum = witt_add(
        &sys,
        &WittVector::new(p, xs.clone()),
        &WittVector::new(p, ys.clone()),
    )?;
    let eval = |coords: &[Poly], target: &Arc<SeriesRing<Rational>>| -> Result<Poly, FglError> {
        let bindings: Vec<(&str, Poly)> = t_names
            .iter()
            .map(String::as_str)
            .zip(coords.iter().cloned())
            .collect();
        Ok(psi.substitute(target, &bindings)?)
    };
    let lhs = eval(&sum.coords, &xy)?;
    let law = g_lambda(degree_lambda, degree_t);
    let rhs = law.apply(&xy, &eval(&xs, &xy)?, &eval(&ys, &xy)?)?;
    let additive = lhs == rhs;

    // clause (b)
    let tr = psi.ring().clone();
    let ts: Vec<Poly> = t_names
        .iter()
        .map(|n| Poly::var(&tr, n))
        .collect::<Result<_, _>>()?;
    let t = WittVector::new(p, ts);
    let vt = verschiebung(&t);
    let lift = teichmuller(p, Poly::var(&tr, LAMBDA)?.pow(p - 1), m + 1);
    let lt = witt_mul(&sys, &lift, &t)?;
    let psi_vt = eval(&vt.coords, &tr)?;
    let kills_v_minus_lift = psi_vt == eval(&lt.coords, &tr)?;
    let kills_v_at_lambda_zero = psi_vt.set_zero(&[LAMBDA]).is_zero();

    Ok(PsiCheck {
        p,
        m,
        degree_t,
        degree_lambda,
        integral: psi.is_p_integral(p),
        matches_truncated_exponential: psi_matches_truncated_exponential(&psi, p)?,
        additive,
        kills_v_minus_lift,
        kills_v_at_lambda_zero,
        psi_terms: psi.num_terms(),
    })
}
