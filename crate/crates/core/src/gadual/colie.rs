use serde::Serialize;

use crate::ring::reduce_mod;
use crate::witt::WittPolynomialSystem;

use super::complex::{FreeComplex, RComplex};
use super::rmatrix::{BaseRing, RMatrix};
use super::theta::{rhom, ThetaComplex};
use super::GaDualError;

/// The co-Lie complex `dS_0..dS_{n-1} → dT_0..dT_{n-1}` (degrees -1, 0)
/// over `Z/p^2[λ]/λ^p`, with trivial action and differential the linear
/// part of `F - [λ^{p-1}]` at the origin:
/// `D(dS_i) = sum_j (∂F_i/∂T_j)(0) dT_j - λ^{p^i (p-1)} dT_i`, dropping
/// `j ≥ n` and `λ`-exponents `≥ p`.
pub fn colie_complex(p: u64, n: usize) -> Result<ThetaComplex, GaDualError> {
    let sys = WittPolynomialSystem::shared(p, n)?;
    let ring = BaseRing::Zp2Lambda(p);
    let modulus = ring.modulus();
    let mut d = RMatrix::zeros(ring, n, n);
    for (i, f) in sys.frobenius_polys().iter().enumerate() {
        for j in 0..n {
            let c = f.coeff_of(&[(&format!("T{j}"), 1)]);
            let c = reduce_mod(&c, modulus).map_err(|e| GaDualError::Witt(e.to_string()))?;
            d.add_entry(j, i, 0, c.value() as i64);
        }
        let e = p.checked_pow(i as u32).map_or(u64::MAX, |q| q * (p - 1));
        if e < p {
            d.add_entry(i, i, e as usize, -1);
        }
    }
    let labels = vec![
        (0..n).map(|i| format!("dS_{i}")).collect(),
        (0..n).map(|i| format!("dT_{i}")).collect(),
    ];
    let c = RComplex::new(ring, -1, vec![n, n], vec![d], labels)?;
    Ok(ThetaComplex::with_trivial_action(c))
}

/// `D(dS_i) = …` for each `i`, as text.
pub fn colie_differential_text(c: &ThetaComplex) -> Vec<String> {
    let cx = c.complex();
    let d = cx.diff(-1);
    let src = cx.labels(-1);
    let dst = cx.labels(0);
    (0..d.cols())
        .map(|i| {
            let mut terms = Vec::new();
            for j in (0..d.rows()).rev() {
                let e = d.entry_text(j, i);
                if e == "0" {
                    continue;
                }
                let t = if e == "1" {
                    dst[j].clone()
                } else if e == "-1" {
                    format!("-{}", dst[j])
                } else if e.contains(' ') {
                    format!("({e})·{}", dst[j])
                } else {
                    format!("{e}·{}", dst[j])
                };
                terms.push(t);
            }
            let rhs = if terms.is_empty() {
                "0".to_owned()
            } else {
                terms.join(" + ").replace("+ -", "- ")
            };
            format!("D({}) = {rhs}", src[i])
        })
        .collect()
}

fn unit(ring: BaseRing) -> ThetaComplex {
    ThetaComplex::with_trivial_action(RComplex::concentrated(ring, 0, vec!["1".to_owned()]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtRow {
    pub degree: i32,
    pub rank: usize,
    pub basis: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    pub p: u64,
    pub n: usize,
    pub rows: Vec<ExtRow>,
}

impl ExtTable {
    pub fn ranks(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.rank).collect()
    }
}

/// `RHom(ℓ, F_p)` for the co-Lie complex reduced mod `(p, λ)`.
pub fn ext_complex(p: u64, n: usize) -> Result<FreeComplex, GaDualError> {
    let c = colie_complex(p, n)?.reduce_to(BaseRing::Fp(p));
    if !c.complex().diff(-1).is_zero() {
        return Err(GaDualError::InvalidComplex(
            "co-Lie differential is nonzero mod (p, λ)".into(),
        ));
    }
    Ok(rhom(&c, &unit(BaseRing::Fp(p)))?.expand())
}

/// Ranks and named bases of `Ext^k(ℓ, F_p)` for `k = 0..=3`.
pub fn ext_table(p: u64, n: usize) -> Result<ExtTable, GaDualError> {
    let c = ext_complex(p, n)?;
    let rows = (0..=3)
        .map(|k| {
            let h = c.cohomology_mod_p(k);
            ExtRow {
                degree: k,
                rank: h.dim(),
                basis: h.basis.iter().map(|v| c.describe(k, v)).collect(),
            }
        })
        .collect();
    Ok(ExtTable { p, n, rows })
}

fn basis_vector(c: &FreeComplex, k: i32, label: &str) -> Result<Vec<u64>, GaDualError> {
    let idx = c
        .labels(k)
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| GaDualError::InvalidComplex(format!("no basis element {label} in degree {k}")))?;
    let mut v = vec![0; c.dim(k)];
    v[idx] = 1;
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeformationCheck {
    pub p: u64,
    pub n: usize,
    /// `Bock(∂_{T_{i+1}}) = -∂_{S_i}` for every `i < n - 1`.
    pub dual_bockstein: bool,
    /// `Bock(τ∂_{T_1})` over `Z/p^2`, named in the basis of `Ext^2`.
    pub bock_tau_dt1: String,
    /// `Bock(τ∂_{T_1}) = τ∂_{S_0}` in `Ext^2`, Bockstein taken over `Z/p^2`.
    pub equal_over_zp2: bool,
    /// The same with the Bockstein taken over `Z/p^2[λ]/λ^p`, then reduced
    /// mod `λ`.
    pub equal_over_lambda: bool,
}

impl DeformationCheck {
    pub fn passed(&self) -> bool {
        self.dual_bockstein && self.equal_over_zp2 && self.equal_over_lambda
    }
}

/// Compares the two expressions `-τ∂_{S_0} λ^{p-1}` and
/// `-λ^{p-1} Bock(τ∂_{T_1})` for the deformation class.
pub fn deformation_class_check(p: u64, n: usize) -> Result<DeformationCheck, GaDualError> {
    if n < 2 {
        return Err(GaDualError::InvalidComplex("needs n ≥ 2 for T_1".into()));
    }
    let colie = colie_complex(p, n)?;
    let ext = ext_complex(p, n)?;
    let h1 = ext.cohomology_mod_p(1);
    let h2 = ext.cohomology_mod_p(2);
    let target = basis_vector(&ext, 2, "τ∂_{S_0}")?;

    let zp2 = rhom(&colie.reduce_to(BaseRing::Zp2(p)), &unit(BaseRing::Zp2(p)))?.expand();
    let mut dual_bockstein = true;
    for i in 0..n - 1 {
        let b = zp2.bockstein(0, &basis_vector(&zp2, 0, &format!("∂_{{T_{}}}", i + 1))?)?;
        let expect: Vec<u64> = basis_vector(&zp2, 1, &format!("∂_{{S_{i}}}"))?
            .iter()
            .map(|x| x * (p - 1) % p)
            .collect();
        dual_bockstein &= h1.same_class(&b, &expect);
    }
    let b = zp2.bockstein(1, &basis_vector(&zp2, 1, "τ∂_{T_1}")?)?;
    let equal_over_zp2 = h2.same_class(&b, &target);
    let bock_tau_dt1 = ext.describe(2, &b);

    let lam = rhom(&colie, &unit(BaseRing::Zp2Lambda(p)))?.expand();
    let bl = lam.bockstein(1, &basis_vector(&lam, 1, "τ∂_{T_1}")?)?;
    let l = p as usize;
    let reduced: Vec<u64> = bl.iter().step_by(l).copied().collect();
    let equal_over_lambda = h2.same_class(&reduced, &target);

    Ok(DeformationCheck {
        p,
        n,
        dual_bockstein,
        bock_tau_dt1,
        equal_over_zp2,
        equal_over_lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colie_differential_examples() {
        let c = colie_complex(2, 3).unwrap();
        let text = colie_differential_text(&c);
        assert_eq!(text[0], "D(dS_0) = 2·dT_1 - λ·dT_0");
        assert_eq!(text[1], "D(dS_1) = 2·dT_2");
        assert_eq!(text[2], "D(dS_2) = 0");
        let c3 = colie_complex(3, 2).unwrap();
        assert_eq!(colie_differential_text(&c3)[0], "D(dS_0) = 3·dT_1 - λ^2·dT_0");
    }

    #[test]
    fn colie_mod_p_keeps_only_lambda_term() {
        let c = colie_complex(3, 3).unwrap().reduce_to(BaseRing::FpLambda(3));
        let d = c.complex().diff(-1);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == 0 && j == 0 { "-λ^2" } else { "0" };
                assert_eq!(d.entry_text(j, i), expect);
            }
        }
    }

    #[test]
    fn bockstein_on_colie() {
        let c = colie_complex(2, 3).unwrap();
        let flat = c.reduce_to(BaseRing::Zp2(2)).complex().expand();
        for i in 0..2 {
            let mut z = vec![0; 3];
            z[i] = 1;
            let b = flat.bockstein(-1, &z).unwrap();
            assert_eq!(flat.describe(0, &b), format!("dT_{}", i + 1));
            assert!(flat.bockstein(0, &b).unwrap().is_empty());
        }
        let lam = c.complex().expand();
        // dS_0 itself is not a cocycle mod p once λ is present
        let mut z = vec![0; 6];
        z[0] = 1;
        assert!(matches!(lam.bockstein(-1, &z), Err(GaDualError::LiftNotCocycle { .. })));
        z = vec![0; 6];
        z[1] = 1;
        assert_eq!(lam.describe(0, &lam.bockstein(-1, &z).unwrap()), "λ·dT_1");
        z = vec![0; 6];
        z[2] = 1;
        assert_eq!(lam.describe(0, &lam.bockstein(-1, &z).unwrap()), "dT_2");
    }

    #[test]
    fn ext_table_shape() {
        let t = ext_table(2, 2).unwrap();
        assert_eq!(t.ranks(), vec![2, 4, 2, 0]);
        assert_eq!(t.rows[0].basis, vec!["∂_{T_0}", "∂_{T_1}"]);
        assert_eq!(t.rows[1].basis, vec!["∂_{S_0}", "∂_{S_1}", "τ∂_{T_0}", "τ∂_{T_1}"]);
        assert_eq!(t.rows[2].basis, vec!["τ∂_{S_0}", "τ∂_{S_1}"]);
        for (p, n) in [(2, 3), (3, 2), (3, 3)] {
            assert_eq!(ext_table(p, n).unwrap().ranks(), vec![n, 2 * n, n, 0]);
        }
    }

    #[test]
    fn deformation_class() {
        for (p, n) in [(2, 3), (3, 2), (2, 2), (3, 3)] {
            let r = deformation_class_check(p, n).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.bock_tau_dt1, "τ∂_{S_0}");
        }
    }
}
