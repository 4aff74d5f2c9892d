use rand::Rng;
use serde::Serialize;

use crate::linalg::{Matrix, Subspace};
use crate::ring::Modulus;

use super::filtered::{quotient_coords, random_constrained, FilteredComplex};
use super::pages::{page, SpectralPage};
use super::SpecSeqError;

/// A splitting of `F^t / F^{t+n+1}` as `⊕_{i=0}^n gr^{t+i}` for every `t`:
/// `sigma[t][k]` has one column per basis vector of `gr^{t+i} C^k`
/// (`i = 0..=n`, in order), holding a representative in `F^t C^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitData {
    pub order: usize,
    pub sigma: Vec<Vec<Matrix>>,
}

fn sub_vec(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| (x + p - y % p) % p).collect()
}

impl SplitData {
    /// `σ(x) = g x` for the graded basis vectors `x`, where `g[k]` is an
    /// automorphism of `C^k`; `g = 1` when `None`.
    pub fn from_automorphism(fc: &FilteredComplex, order: usize, g: Option<&[Matrix]>) -> Self {
        let top = fc.top() as i64;
        let sigma = (0..=top)
            .map(|t| {
                fc.degrees()
                    .map(|k| {
                        let mut cols = Vec::new();
                        for i in 0..=order as i64 {
                            for x in fc.gr_basis(k, t + i) {
                                cols.push(match g {
                                    Some(g) => g[(k - fc.start()) as usize].apply(&x),
                                    None => x,
                                });
                            }
                        }
                        Matrix::from_columns(fc.field(), fc.dim(k), &cols)
                    })
                    .collect()
            })
            .collect();
        SplitData { order, sigma }
    }

    fn block(&self, fc: &FilteredComplex, t: i64, k: i32, i: i64) -> Vec<Vec<u64>> {
        let cols = self.sigma[t as usize][(k - fc.start()) as usize].columns();
        let off: usize = (0..i).map(|j| fc.gr_basis(k, t + j).len()).sum();
        let len = fc.gr_basis(k, t + i).len();
        cols[off..off + len].to_vec()
    }

    fn check_shape(&self, fc: &FilteredComplex) -> Result<(), SpecSeqError> {
        let top = fc.top() as i64;
        if self.sigma.len() != top as usize + 1 {
            return Err(SpecSeqError::MalformedSplitData("one splitting per filtration index".into()));
        }
        for t in 0..=top {
            if self.sigma[t as usize].len() != fc.degrees().len() {
                return Err(SpecSeqError::MalformedSplitData("one matrix per degree".into()));
            }
            for k in fc.degrees() {
                let m = &self.sigma[t as usize][(k - fc.start()) as usize];
                let cols: usize = (0..=self.order as i64).map(|i| fc.gr_basis(k, t + i).len()).sum();
                if m.rows() != fc.dim(k) || m.cols() != cols || m.modulus() != fc.field() {
                    return Err(SpecSeqError::MalformedSplitData(format!(
                        "splitting at t = {t}, degree {k} has the wrong shape"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks that each `σ_t` is a filtered isomorphism inducing the identity
    /// on `gr`, that it commutes with `d` modulo `F^{t+n+1}`, and that
    /// `σ_t` and `σ_{t+1}` agree on their common summands
    /// `gr^{t+1} ⊕ … ⊕ gr^{t+n}` modulo `F^{t+n+1}`.
    pub fn verify(&self, fc: &FilteredComplex) -> Result<bool, SpecSeqError> {
        self.check_shape(fc)?;
        let p = fc.prime();
        let n = self.order as i64;
        let top = fc.top() as i64;
        for t in 0..=top {
            for k in fc.degrees() {
                let upper = fc.f(k, t + n + 1);
                for i in 0..=n {
                    let basis = fc.gr_basis(k, t + i);
                    let lifts = self.block(fc, t, k, i);
                    for (x, y) in basis.iter().zip(&lifts) {
                        if !fc.f(k, t + i + 1).contains(&sub_vec(p, y, x)) {
                            return Ok(false);
                        }
                    }
                    // chain condition: d σ(x) ≡ σ(d_gr x) mod F^{t+n+1}
                    if fc.dim(k + 1) == 0 {
                        continue;
                    }
                    let dgr = fc.gr_diff(k, t + i);
                    let next = self.block(fc, t, k + 1, i);
                    let d = fc.diff(k);
                    let upper1 = fc.f(k + 1, t + n + 1);
                    for (c, y) in lifts.iter().enumerate() {
                        let mut s = vec![0; fc.dim(k + 1)];
                        for (r, z) in next.iter().enumerate() {
                            let a = dgr.get(r, c);
                            for (sv, zv) in s.iter_mut().zip(z) {
                                *sv = (*sv + a * zv) % p;
                            }
                        }
                        if !upper1.contains(&sub_vec(p, &d.apply(y), &s)) {
                            return Ok(false);
                        }
                    }
                }
                if t < top {
                    for i in 1..=n {
                        let a = self.block(fc, t, k, i);
                        let b = self.block(fc, t + 1, k, i - 1);
                        if a.iter().zip(&b).any(|(x, y)| !upper.contains(&sub_vec(p, x, y))) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingReport {
    pub order: usize,
    pub verified: bool,
    /// Ranks of `d_2, …, d_{n+1}`, all zero when the theorem applies.
    pub low_ranks: Vec<usize>,
    /// Rank of `d_{n+2}`, the first differential not forced to vanish.
    pub first_open_rank: usize,
}

impl VanishingReport {
    pub fn passed(&self) -> bool {
        self.verified && self.low_ranks.iter().all(|&r| r == 0)
    }
}

/// Verifies the splitting, then computes `d_r` for `r ≤ n + 2`.
pub fn split_vanishing_check(fc: &FilteredComplex, sd: &SplitData) -> Result<VanishingReport, SpecSeqError> {
    let verified = sd.verify(fc)?;
    let n = sd.order as u32;
    let low_ranks = (2..=n + 1).map(|r| page(fc, r).d_rank_total()).collect();
    Ok(VanishingReport {
        order: sd.order,
        verified,
        low_ranks,
        first_open_rank: page(fc, n + 2).d_rank_total(),
    })
}

/// `e: gr^t C^k → gr^{t+n+1} C^{k+1}` for one `(t, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeComponent {
    pub t: i64,
    pub degree: i32,
    pub matrix: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionEdge {
    pub order: usize,
    pub components: Vec<EdgeComponent>,
    /// `H(e) = d_{n+2}` on every class of `E_{n+2}`.
    pub matches_differential: bool,
}

impl ExtensionEdge {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.matrix.is_zero())
    }
}

/// The connecting map of `gr^{t+n+1} → F^t/F^{t+n+2} → F^t/F^{t+n+1}`
/// precomposed with `gr^t → ⊕_{i≤n} gr^{t+i} ≅ F^t/F^{t+n+1}`, compared on
/// cohomology with `d_{n+2}`.
pub fn extension_edge(fc: &FilteredComplex, sd: &SplitData) -> Result<ExtensionEdge, SpecSeqError> {
    if !sd.verify(fc)? {
        return Err(SpecSeqError::MalformedSplitData("splitting does not verify".into()));
    }
    let p = fc.prime();
    let n = sd.order as i64;
    let top = fc.top() as i64;
    let mut components = Vec::new();
    for t in 0..=top {
        for k in fc.degrees() {
            let dst = fc.gr_basis(k + 1, t + n + 1);
            let mut cols = Vec::new();
            let sigma_next: Vec<Vec<u64>> = if fc.dim(k + 1) > 0 {
                sd.sigma[t as usize][(k + 1 - fc.start()) as usize].columns()
            } else {
                Vec::new()
            };
            let upper = fc.f(k + 1, t + n + 1);
            for y in &sd.block(fc, t, k, 0) {
                if dst.is_empty() {
                    cols.push(Vec::new());
                    continue;
                }
                let dy = fc.diff(k).apply(y);
                let c = quotient_coords(&upper, &sigma_next, &dy).expect("σ spans F^t mod F^{t+n+1}");
                let mut res = dy.clone();
                for (cv, z) in c.iter().zip(&sigma_next) {
                    for (r, zv) in res.iter_mut().zip(z) {
                        *r = (*r + (p - cv * zv % p)) % p;
                    }
                }
                cols.push(fc.gr_coords(k + 1, t + n + 1, &res).expect("residual lies in F^{t+n+1}"));
            }
            components.push(EdgeComponent {
                t,
                degree: k,
                matrix: Matrix::from_columns(fc.field(), dst.len(), &cols),
            });
        }
    }
    let edge = |t: i64, k: i32| components.iter().find(|c| c.t == t && c.degree == k).map(|c| &c.matrix);
    let e_page: SpectralPage = page(fc, sd.order as u32 + 2);
    let rho = n + 1;
    let mut matches = true;
    for g in e_page.groups() {
        let (f, k) = (g.filtration, g.degree);
        if fc.dim(k + 1) == 0 {
            continue;
        }
        let tgt = f + rho;
        let gr_b = if tgt <= top { gr_boundaries(fc, k + 1, tgt) } else { Subspace::zero(fc.field(), 0) };
        for x in &g.basis {
            let lhs = if tgt <= top {
                fc.gr_coords(k + 1, tgt, &fc.diff(k).apply(x)).expect("x ∈ Z_ρ")
            } else {
                Vec::new()
            };
            let gx = fc.gr_coords(k, f, x).expect("x ∈ F^f");
            let rhs = match edge(f, k) {
                Some(m) if m.rows() > 0 => m.apply(&gx),
                _ => vec![0; lhs.len()],
            };
            if !gr_b.contains(&sub_vec(p, &lhs, &rhs)) {
                matches = false;
            }
        }
    }
    Ok(ExtensionEdge {
        order: sd.order,
        components,
        matches_differential: matches,
    })
}

/// Image of `gr^t C^{k-1} → gr^t C^k`, in `gr` coordinates.
fn gr_boundaries(fc: &FilteredComplex, k: i32, t: i64) -> Subspace {
    let n = fc.gr_basis(k, t).len();
    if n == 0 || fc.gr_basis(k - 1, t).is_empty() {
        return Subspace::zero(fc.field(), n);
    }
    Subspace::image(&fc.gr_diff(k - 1, t))
}

/// A generated instance: a complex split to order `n` with its splitting
/// and the graded data it was built from.
#[derive(Debug, Clone)]
pub struct SplitInstance {
    pub complex: FilteredComplex,
    pub split: SplitData,
    /// Scalar of the chain-map part of the perturbation; zero means the
    /// perturbation is null-homotopic.
    pub twist: u64,
}

/// Builds a complex in degrees `0..=3` with filtration levels `0..=n+1`:
/// random graded pieces, plus a perturbation `P: gr^0 → gr^{n+1}[1]` made of
/// `twist` times an inclusion onto a shifted copy of `gr^0` and a
/// null-homotopic term `d H - H d`; then conjugated by a random filtered
/// unipotent `g`. The result is split to order `n` via `σ = g`.
pub fn split_generator(p: u64, n: usize, rng: &mut impl Rng) -> Result<SplitInstance, SpecSeqError> {
    let field = Modulus::new(p, 1).map_err(|_| SpecSeqError::InvalidPrime(p))?;
    let top = n + 1;
    let degrees = 4usize;
    // graded pieces: level -> per-degree dims and differentials
    let mut level_dims: Vec<Vec<usize>> = Vec::new();
    let mut level_diffs: Vec<Vec<Matrix>> = Vec::new();
    for level in 0..=top {
        let dims: Vec<usize> = (0..degrees)
            .map(|k| if level == 0 && k >= 2 { 0 } else { rng.gen_range(0..=2) })
            .collect();
        let mut ds: Vec<Matrix> = Vec::new();
        for k in 0..degrees - 1 {
            let d = random_constrained(field, dims[k + 1], dims[k], ds.last(), |_, _| true, rng);
            ds.push(d);
        }
        level_dims.push(dims);
        level_diffs.push(ds);
    }
    // shifted copy of gr^0 inside gr^{top}: degree k+1 gets dims[0][k] more
    // vectors, with differential -d_0
    let base_dims = level_dims[top].clone();
    let copy_dims: Vec<usize> = (0..degrees).map(|k| if k == 0 { 0 } else { level_dims[0][k - 1] }).collect();
    let top_dims: Vec<usize> = (0..degrees).map(|k| base_dims[k] + copy_dims[k]).collect();
    let top_diffs: Vec<Matrix> = (0..degrees - 1)
        .map(|k| {
            let a = &level_diffs[top][k];
            let b = if k == 0 {
                Matrix::zeros(field, copy_dims[1], 0)
            } else {
                level_diffs[0][k - 1].neg()
            };
            let mut m = Matrix::zeros(field, top_dims[k + 1], top_dims[k]);
            m.paste(0, 0, a);
            m.paste(base_dims[k + 1], base_dims[k], &b);
            m
        })
        .collect();
    level_dims[top] = top_dims;
    level_diffs[top] = top_diffs;

    // assemble: degree k basis = concatenation over levels
    let offsets: Vec<Vec<usize>> = (0..degrees)
        .map(|k| {
            let mut acc = 0;
            (0..=top)
                .map(|l| {
                    let o = acc;
                    acc += level_dims[l][k];
                    o
                })
                .collect()
        })
        .collect();
    let dims: Vec<usize> = (0..degrees).map(|k| (0..=top).map(|l| level_dims[l][k]).sum()).collect();
    let levels: Vec<Vec<usize>> = (0..degrees)
        .map(|k| (0..=top).flat_map(|l| std::iter::repeat_n(l, level_dims[l][k])).collect())
        .collect();
    let twist = rng.gen_range(0..p);
    let mut diffs: Vec<Matrix> = Vec::new();
    // H: gr^0 C^k → gr^{top} C^k, random
    let homotopy: Vec<Matrix> = (0..degrees)
        .map(|k| Matrix::random(field, level_dims[top][k], level_dims[0][k], rng))
        .collect();
    for k in 0..degrees - 1 {
        let mut d = Matrix::zeros(field, dims[k + 1], dims[k]);
        for l in 0..=top {
            d.paste(offsets[k + 1][l], offsets[k][l], &level_diffs[l][k]);
        }
        // P = twist·J + d_top H - H d_0, from level 0 in degree k to level
        // top in degree k+1
        let pmat = level_diffs[top][k]
            .mul(&homotopy[k])
            .sub(&homotopy[k + 1].mul(&level_diffs[0][k]));
        let mut j = Matrix::zeros(field, level_dims[top][k + 1], level_dims[0][k]);
        let base = level_dims[top][k + 1] - copy_dims[k + 1];
        for i in 0..level_dims[0][k] {
            j.set(base + i, i, twist as i64);
        }
        let pfull = pmat.add(&j);
        d.paste(offsets[k + 1][top], offsets[k][0], &pfull);
        diffs.push(d);
    }
    // conjugate by a filtered unipotent g
    let g: Vec<Matrix> = (0..degrees)
        .map(|k| {
            let lv = &levels[k];
            let mut m = Matrix::identity(field, dims[k]);
            for r in 0..dims[k] {
                for c in 0..dims[k] {
                    if lv[r] > lv[c] {
                        m.set(r, c, rng.gen_range(0..p) as i64);
                    }
                }
            }
            m
        })
        .collect();
    let g_inv: Vec<Matrix> = g.iter().map(|m| m.inverse().expect("unipotent")).collect();
    let diffs: Vec<Matrix> = diffs
        .iter()
        .enumerate()
        .map(|(k, d)| g[k + 1].mul(d).mul(&g_inv[k]))
        .collect();
    let complex = FilteredComplex::from_levels(p, 0, diffs, levels, top)?;
    let split = SplitData::from_automorphism(&complex, n, Some(&g));
    Ok(SplitInstance { complex, split, twist })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_step(p: u64) -> FilteredComplex {
        let f = Modulus::new(p, 1).unwrap();
        let d = Matrix::from_rows(f, &[vec![1]]);
        FilteredComplex::from_levels(p, 0, vec![d], vec![vec![0], vec![1]], 1).unwrap()
    }

    #[test]
    fn two_step_split_to_order_zero_only() {
        let fc = two_step(2);
        let s0 = SplitData::from_automorphism(&fc, 0, None);
        assert!(s0.verify(&fc).unwrap());
        let s1 = SplitData::from_automorphism(&fc, 1, None);
        assert!(!s1.verify(&fc).unwrap());
        let r = split_vanishing_check(&fc, &s0).unwrap();
        assert!(r.passed());
        assert_eq!(r.first_open_rank, 1);
        let e = extension_edge(&fc, &s0).unwrap();
        let c = e.components.iter().find(|c| c.t == 0 && c.degree == 0).unwrap();
        assert_eq!(c.matrix, Matrix::identity(Modulus::new(2, 1).unwrap(), 1));
        assert!(e.matches_differential);
    }

    #[test]
    fn direct_sum_is_split_to_every_order() {
        let f = Modulus::new(3, 1).unwrap();
        let d = Matrix::from_rows(f, &[vec![1, 0], vec![0, 2]]);
        let fc = FilteredComplex::from_levels(3, 0, vec![d], vec![vec![0, 2], vec![0, 2]], 2).unwrap();
        for n in 0..3 {
            let s = SplitData::from_automorphism(&fc, n, None);
            let r = split_vanishing_check(&fc, &s).unwrap();
            assert!(r.passed() && r.first_open_rank == 0);
            let e = extension_edge(&fc, &s).unwrap();
            assert!(e.is_zero() && e.matches_differential);
        }
    }

    #[test]
    fn generated_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut nonzero = 0;
        for p in [2, 3] {
            for n in 0..3 {
                for _ in 0..30 {
                    let inst = split_generator(p, n, &mut rng).unwrap();
                    let r = split_vanishing_check(&inst.complex, &inst.split).unwrap();
                    assert!(r.passed(), "p={p} n={n} {r:?}");
                    let e = extension_edge(&inst.complex, &inst.split).unwrap();
                    assert!(e.matches_differential);
                    if r.first_open_rank > 0 {
                        nonzero += 1;
                    }
                }
            }
        }
        assert!(nonzero > 20);
    }

    #[test]
    fn malformed_split_data() {
        let fc = two_step(2);
        let bad = SplitData { order: 0, sigma: vec![] };
        assert!(matches!(bad.verify(&fc), Err(SpecSeqError::MalformedSplitData(_))));
    }
}
