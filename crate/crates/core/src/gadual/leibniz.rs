use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::complex::{FreeComplex, RComplex};
use super::rmatrix::{BaseRing, RMatrix};
use super::GaDualError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeibnizReport {
    pub p: u64,
    pub trials: usize,
    pub seed: u64,
    pub tensor_checks: usize,
    pub tensor_failures: usize,
    pub hom_checks: usize,
    pub hom_failures: usize,
    pub lift_checks: usize,
    pub lift_failures: usize,
}

impl LeibnizReport {
    pub fn passed(&self) -> bool {
        self.tensor_failures == 0 && self.hom_failures == 0 && self.lift_failures == 0
    }
}

/// A random free complex over `Z/p^2` with one or two terms of rank 1 to 3
/// in degrees starting at 0. About half the entries are multiples of `p`,
/// so that Bocksteins are frequently nonzero.
pub fn random_complex(p: u64, rng: &mut impl Rng) -> RComplex {
    let ring = BaseRing::Zp2(p);
    let len = rng.gen_range(1..=2);
    let dims: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=3)).collect();
    let diffs = dims
        .windows(2)
        .map(|w| {
            let rows: Vec<Vec<i64>> = (0..w[1])
                .map(|_| {
                    (0..w[0])
                        .map(|_| {
                            let x = rng.gen_range(0..p) as i64;
                            if rng.gen_bool(0.5) {
                                x * p as i64
                            } else {
                                x
                            }
                        })
                        .collect()
                })
                .collect();
            RMatrix::from_rows(ring, &rows)
        })
        .collect();
    RComplex::new(ring, 0, dims, diffs, vec![]).expect("two-term complexes have d² = 0")
}

fn degrees(c: &FreeComplex) -> std::ops::Range<i32> {
    c.start..c.end()
}

fn cocycle_basis(c: &FreeComplex, k: i32) -> Vec<Vec<u64>> {
    c.cohomology_mod_p(k).cocycles.basis().to_vec()
}

fn kron_vec(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y % p)).collect()
}

/// Embeds `u ⊗ v` (`u` in `M^i`, `v` in `M'^j`) into `(M ⊗ M')^{i+j}`.
fn tensor_embed(m: &RComplex, n: &RComplex, t: &FreeComplex, i: i32, u: &[u64], j: i32, v: &[u64]) -> Vec<u64> {
    let p = t.modulus.prime();
    let mut out = vec![0; t.dim(i + j)];
    let off = m.tensor_offset(n, i + j, i);
    for (s, x) in kron_vec(p, u, v).into_iter().enumerate() {
        out[off + s] = x;
    }
    out
}

/// Applies the component `M^j → M'^{j+k}` of `f ∈ Hom^k(M, M')` to `x`.
fn hom_apply(m: &RComplex, n: &RComplex, k: i32, f: &[u64], j: i32, x: &[u64]) -> Vec<u64> {
    let p = m.ring().prime();
    let (a, b) = (m.dim(j), n.dim(j + k));
    let mut out = vec![0; b];
    let Some(&(_, off)) = m.hom_blocks(n, k).iter().find(|(t, _)| *t == j) else {
        return out;
    };
    for (r, o) in out.iter_mut().enumerate() {
        for (c, xc) in x.iter().enumerate() {
            *o = (*o + f[off + r * a + c] * xc) % p;
        }
    }
    out
}

fn add(p: u64, a: &[u64], b: &[u64], sign: i64) -> Vec<u64> {
    let s = if sign >= 0 { 1 } else { p - 1 };
    a.iter().zip(b).map(|(x, y)| (x + s * y) % p).collect()
}

fn parity(k: i32) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// On random pairs of complexes over `Z/p^2`, checks on mod-`p` cohomology
/// that
/// `Bock(z ⊗ z') = Bock(z) ⊗ z' + (-1)^{|z|} z ⊗ Bock(z')` and
/// `Bock(f)(x) = Bock(f x) - (-1)^{|f|} f(Bock x)`,
/// for cocycle bases `z, z', x, f`, and that the Bockstein does not depend
/// on the lift.
pub fn bockstein_leibniz_check(p: u64, trials: usize, seed: u64) -> Result<LeibnizReport, GaDualError> {
    BaseRing::Zp2(p).check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = LeibnizReport {
        p,
        trials,
        seed,
        tensor_checks: 0,
        tensor_failures: 0,
        hom_checks: 0,
        hom_failures: 0,
        lift_checks: 0,
        lift_failures: 0,
    };
    for _ in 0..trials {
        let m = random_complex(p, &mut rng);
        let n = random_complex(p, &mut rng);
        let (fm, fn_) = (m.expand(), n.expand());

        let t = m.tensor(&n)?;
        let ft = t.expand();
        for i in degrees(&fm) {
            for j in degrees(&fn_) {
                let h = ft.cohomology_mod_p(i + j + 1);
                for u in cocycle_basis(&fm, i) {
                    for v in cocycle_basis(&fn_, j) {
                        report.tensor_checks += 1;
                        let lhs = ft.bockstein(i + j, &tensor_embed(&m, &n, &ft, i, &u, j, &v))?;
                        let mut rhs = vec![0; ft.dim(i + j + 1)];
                        if fm.dim(i + 1) > 0 {
                            let bu = fm.bockstein(i, &u)?;
                            rhs = add(p, &rhs, &tensor_embed(&m, &n, &ft, i + 1, &bu, j, &v), 1);
                        }
                        if fn_.dim(j + 1) > 0 {
                            let bv = fn_.bockstein(j, &v)?;
                            rhs = add(p, &rhs, &tensor_embed(&m, &n, &ft, i, &u, j + 1, &bv), parity(i));
                        }
                        if !h.same_class(&lhs, &rhs) {
                            report.tensor_failures += 1;
                        }
                    }
                }
            }
        }

        let hm = m.hom(&n)?;
        let fh = hm.expand();
        for k in degrees(&fh) {
            for f in cocycle_basis(&fh, k) {
                let bf = if fh.dim(k + 1) > 0 {
                    fh.bockstein(k, &f)?
                } else {
                    vec![]
                };
                for j in degrees(&fm) {
                    if fn_.dim(j + k + 1) == 0 {
                        continue;
                    }
                    let h = fn_.cohomology_mod_p(j + k + 1);
                    for x in cocycle_basis(&fm, j) {
                        report.hom_checks += 1;
                        let lhs = if bf.is_empty() {
                            vec![0; fn_.dim(j + k + 1)]
                        } else {
                            hom_apply(&m, &n, k + 1, &bf, j, &x)
                        };
                        let fx = hom_apply(&m, &n, k, &f, j, &x);
                        let mut rhs = if fn_.dim(j + k) > 0 {
                            fn_.bockstein(j + k, &fx)?
                        } else {
                            vec![0; fn_.dim(j + k + 1)]
                        };
                        if fm.dim(j + 1) > 0 {
                            let bx = fm.bockstein(j, &x)?;
                            rhs = add(p, &rhs, &hom_apply(&m, &n, k, &f, j + 1, &bx), -parity(k));
                        }
                        if !h.same_class(&lhs, &rhs) {
                            report.hom_failures += 1;
                        }
                    }
                }
            }
        }

        for k in degrees(&ft) {
            if ft.dim(k + 1) == 0 {
                continue;
            }
            let zs = cocycle_basis(&ft, k);
            if zs.is_empty() {
                continue;
            }
            let z = zs[rng.gen_range(0..zs.len())].clone();
            let w: Vec<u64> = (0..z.len()).map(|_| rng.gen_range(0..p)).collect();
            report.lift_checks += 1;
            let a = ft.bockstein(k, &z)?;
            let b = ft.bockstein_with_lift(k, &z, Some(&w))?;
            if !ft.cohomology_mod_p(k + 1).same_class(&a, &b) {
                report.lift_failures += 1;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_trials_pass() {
        for p in [2, 3] {
            let r = bockstein_leibniz_check(p, 100, 11).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(r.tensor_checks > 100 && r.hom_checks > 100);
        }
    }

    #[test]
    fn zero_differentials() {
        let ring = BaseRing::Zp2(3);
        let m = RComplex::concentrated(ring, 0, vec!["a".into(), "b".into()]);
        let t = m.tensor(&m).unwrap().expand();
        assert!(t.bockstein(0, &[1, 0, 0, 1]).unwrap().is_empty());
    }
}
