use crate::linalg::{Matrix, Subspace};
use crate::ring::Modulus;

use super::rmatrix::{BaseRing, RMatrix};
use super::GaDualError;

/// A bounded cochain complex of free modules over a [`BaseRing`], with
/// degrees `start, start + 1, …` and differentials `d^k: C^k → C^{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RComplex {
    ring: BaseRing,
    start: i32,
    dims: Vec<usize>,
    diffs: Vec<RMatrix>,
    labels: Vec<Vec<String>>,
}

fn sign(k: i32) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl RComplex {
    /// `diffs[i]` is the differential out of degree `start + i`; basis
    /// labels are optional (generated as `e{k}_{i}` when empty).
    pub fn new(
        ring: BaseRing,
        start: i32,
        dims: Vec<usize>,
        diffs: Vec<RMatrix>,
        labels: Vec<Vec<String>>,
    ) -> Result<Self, GaDualError> {
        ring.check()?;
        if diffs.len() + 1 != dims.len().max(1) {
            return Err(GaDualError::InvalidComplex("one differential per adjacent pair".into()));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.ring() != ring || d.cols() != dims[i] || d.rows() != dims[i + 1] {
                return Err(GaDualError::InvalidComplex(format!(
                    "differential out of degree {} has the wrong shape or ring",
                    start + i as i32
                )));
            }
        }
        for w in diffs.windows(2) {
            if !w[1].mul(&w[0]).is_zero() {
                return Err(GaDualError::InvalidComplex("d² ≠ 0".into()));
            }
        }
        let labels = if labels.is_empty() {
            dims.iter()
                .enumerate()
                .map(|(i, &n)| (0..n).map(|j| format!("e{}_{j}", start + i as i32)).collect())
                .collect()
        } else {
            labels
        };
        if labels.len() != dims.len() || labels.iter().zip(&dims).any(|(l, &n)| l.len() != n) {
            return Err(GaDualError::InvalidComplex("label count".into()));
        }
        Ok(RComplex {
            ring,
            start,
            dims,
            diffs,
            labels,
        })
    }

    /// A single module `R^n` in degree `k`.
    pub fn concentrated(ring: BaseRing, k: i32, labels: Vec<String>) -> Self {
        let n = labels.len();
        RComplex::new(ring, k, vec![n], Vec::new(), vec![labels]).expect("valid")
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    /// One past the top degree.
    pub fn end(&self) -> i32 {
        self.start + self.dims.len() as i32
    }

    pub fn dim(&self, k: i32) -> usize {
        if k < self.start || k >= self.end() {
            0
        } else {
            self.dims[(k - self.start) as usize]
        }
    }

    /// `d^k`, the zero map outside the stored range.
    pub fn diff(&self, k: i32) -> RMatrix {
        if k >= self.start && k + 1 < self.end() {
            self.diffs[(k - self.start) as usize].clone()
        } else {
            RMatrix::zeros(self.ring, self.dim(k + 1), self.dim(k))
        }
    }

    pub fn labels(&self, k: i32) -> &[String] {
        if k < self.start || k >= self.end() {
            &[]
        } else {
            &self.labels[(k - self.start) as usize]
        }
    }

    pub fn reduce_to(&self, target: BaseRing) -> Self {
        RComplex {
            ring: target,
            diffs: self.diffs.iter().map(|d| d.reduce_to(target)).collect(),
            ..self.clone()
        }
    }

    /// The underlying complex of free `Z/p^k`-modules.
    pub fn expand(&self) -> FreeComplex {
        let l = self.ring.lambda_dim();
        let labels = self
            .labels
            .iter()
            .map(|ls| {
                ls.iter()
                    .flat_map(|s| {
                        (0..l).map(move |a| match a {
                            0 => s.clone(),
                            1 => format!("λ·{s}"),
                            _ => format!("λ^{a}·{s}"),
                        })
                    })
                    .collect()
            })
            .collect();
        FreeComplex {
            modulus: self.ring.modulus(),
            start: self.start,
            dims: self.dims.iter().map(|n| n * l).collect(),
            diffs: self.diffs.iter().map(RMatrix::expand).collect(),
            labels,
        }
    }

    /// Offset of the block `C^i ⊗ D^{k-i}` inside `(C ⊗ D)^k`.
    pub fn tensor_offset(&self, other: &Self, k: i32, i: i32) -> usize {
        (self.start..i).map(|a| self.dim(a) * other.dim(k - a)).sum()
    }

    /// `(C ⊗ D)^k = ⊕ C^i ⊗ D^{k-i}` with `d(c ⊗ e) = dc ⊗ e + (-1)^i c ⊗ de`.
    pub fn tensor(&self, other: &Self) -> Result<Self, GaDualError> {
        if self.ring != other.ring {
            return Err(GaDualError::RingMismatch(self.ring, other.ring));
        }
        let start = self.start + other.start;
        let end = self.end() + other.end() - 1;
        let dims: Vec<usize> = (start..end)
            .map(|k| (self.start..self.end()).map(|i| self.dim(i) * other.dim(k - i)).sum())
            .collect();
        let labels: Vec<Vec<String>> = (start..end)
            .map(|k| {
                let mut ls = Vec::new();
                for i in self.start..self.end() {
                    for a in self.labels(i) {
                        for b in other.labels(k - i) {
                            ls.push(format!("{a}⊗{b}"));
                        }
                    }
                }
                ls
            })
            .collect();
        let mut diffs = Vec::new();
        for k in start..end - 1 {
            let mut d = RMatrix::zeros(self.ring, dims[(k + 1 - start) as usize], dims[(k - start) as usize]);
            for i in self.start..self.end() {
                let j = k - i;
                if other.dim(j) == 0 || self.dim(i) == 0 {
                    continue;
                }
                let src = self.tensor_offset(other, k, i);
                if self.dim(i + 1) > 0 {
                    let blk = self.diff(i).kron(&RMatrix::identity(self.ring, other.dim(j)));
                    d.paste(self.tensor_offset(other, k + 1, i + 1), src, &blk);
                }
                if other.dim(j + 1) > 0 {
                    let blk = RMatrix::identity(self.ring, self.dim(i))
                        .kron(&other.diff(j))
                        .scale(sign(i));
                    d.paste(self.tensor_offset(other, k + 1, i), src, &blk);
                }
            }
            diffs.push(d);
        }
        RComplex::new(self.ring, start, dims, diffs, labels)
    }

    /// Components `(j, offset)` of `Hom^k(C, D) = ⊕_j Hom(C^j, D^{j+k})`.
    pub fn hom_blocks(&self, other: &Self, k: i32) -> Vec<(i32, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for j in self.start..self.end() {
            let n = self.dim(j) * other.dim(j + k);
            if n > 0 {
                out.push((j, off));
                off += n;
            }
        }
        out
    }

    /// `Hom(C, D)` with `d f = d_D f - (-1)^k f d_C`. A map `C^j → D^{j+k}`
    /// is flattened row-major, entry `(r, c)` at `r * dim C^j + c`.
    pub fn hom(&self, other: &Self) -> Result<Self, GaDualError> {
        if self.ring != other.ring {
            return Err(GaDualError::RingMismatch(self.ring, other.ring));
        }
        let start = other.start - self.end() + 1;
        let end = other.end() - self.start;
        let dims: Vec<usize> = (start..end)
            .map(|k| self.hom_blocks(other, k).iter().map(|&(j, _)| self.dim(j) * other.dim(j + k)).sum())
            .collect();
        let labels: Vec<Vec<String>> = (start..end)
            .map(|k| {
                let mut ls = Vec::new();
                for (j, _) in self.hom_blocks(other, k) {
                    for b in other.labels(j + k) {
                        for a in self.labels(j) {
                            ls.push(hom_label(a, b));
                        }
                    }
                }
                ls
            })
            .collect();
        let mut diffs = Vec::new();
        for k in start..end - 1 {
            let mut d = RMatrix::zeros(self.ring, dims[(k + 1 - start) as usize], dims[(k - start) as usize]);
            let target: Vec<(i32, usize)> = self.hom_blocks(other, k + 1);
            let find = |j: i32| target.iter().find(|(t, _)| *t == j).map(|&(_, o)| o);
            for (j, src) in self.hom_blocks(other, k) {
                // f ↦ d_D f lands in Hom(C^j, D^{j+k+1})
                if let Some(dst) = find(j) {
                    let blk = other
                        .diff(j + k)
                        .kron(&RMatrix::identity(self.ring, self.dim(j)));
                    d.paste(dst, src, &blk);
                }
                // f ↦ -(-1)^k f d_C lands in Hom(C^{j-1}, D^{j+k})
                if let Some(dst) = find(j - 1) {
                    let blk = RMatrix::identity(self.ring, other.dim(j + k))
                        .kron(&self.diff(j - 1).transpose())
                        .scale(-sign(k));
                    d.paste(dst, src, &blk);
                }
            }
            diffs.push(d);
        }
        RComplex::new(self.ring, start, dims, diffs, labels)
    }
}

/// `∂_{X}` for the functional dual to `dX` into a unit target, else `b·∂_{X}`.
fn hom_label(source: &str, target: &str) -> String {
    let x = source.strip_prefix('d').unwrap_or(source);
    if target == "1" {
        format!("∂_{{{x}}}")
    } else {
        format!("{target}·∂_{{{x}}}")
    }
}

/// A bounded complex of free `Z/p^k`-modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeComplex {
    pub modulus: Modulus,
    pub start: i32,
    pub dims: Vec<usize>,
    pub diffs: Vec<Matrix>,
    pub labels: Vec<Vec<String>>,
}

/// Mod-`p` cohomology in one degree: cocycles, coboundaries and a basis of
/// representatives of the quotient.
#[derive(Debug, Clone)]
pub struct CohomologyGroup {
    pub degree: i32,
    pub cocycles: Subspace,
    pub boundaries: Subspace,
    pub basis: Vec<Vec<u64>>,
}

impl CohomologyGroup {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn same_class(&self, u: &[u64], v: &[u64]) -> bool {
        let p = self.cocycles.field().prime();
        let diff: Vec<u64> = u.iter().zip(v).map(|(a, b)| (a + p - b % p) % p).collect();
        self.boundaries.contains(&diff)
    }

    pub fn is_zero_class(&self, u: &[u64]) -> bool {
        self.boundaries.contains(u)
    }
}

impl FreeComplex {
    pub fn end(&self) -> i32 {
        self.start + self.dims.len() as i32
    }

    pub fn dim(&self, k: i32) -> usize {
        if k < self.start || k >= self.end() {
            0
        } else {
            self.dims[(k - self.start) as usize]
        }
    }

    pub fn diff(&self, k: i32) -> Matrix {
        if k >= self.start && k + 1 < self.end() {
            self.diffs[(k - self.start) as usize].clone()
        } else {
            Matrix::zeros(self.modulus, self.dim(k + 1), self.dim(k))
        }
    }

    pub fn labels(&self, k: i32) -> &[String] {
        if k < self.start || k >= self.end() {
            &[]
        } else {
            &self.labels[(k - self.start) as usize]
        }
    }

    fn field(&self) -> Modulus {
        Modulus::new(self.modulus.prime(), 1).expect("prime")
    }

    /// Mod-`p` cohomology in degree `k`.
    pub fn cohomology_mod_p(&self, k: i32) -> CohomologyGroup {
        let f = self.field();
        let n = self.dim(k);
        let cocycles = if n == 0 {
            Subspace::zero(f, 0)
        } else if self.dim(k + 1) == 0 {
            Subspace::full(f, n)
        } else {
            Subspace::kernel(&self.diff(k).reduce(f))
        };
        let boundaries = if n == 0 || self.dim(k - 1) == 0 {
            Subspace::zero(f, n)
        } else {
            Subspace::image(&self.diff(k - 1).reduce(f))
        };
        let basis = boundaries.complement_in(&cocycles);
        CohomologyGroup {
            degree: k,
            cocycles,
            boundaries,
            basis,
        }
    }

    /// The Bockstein of a mod-`p` cocycle `z` in degree `k`: lift `z + p w`
    /// (with `w` defaulting to zero), apply `d`, divide by `p`, reduce.
    pub fn bockstein_with_lift(
        &self,
        k: i32,
        z: &[u64],
        w: Option<&[u64]>,
    ) -> Result<Vec<u64>, GaDualError> {
        let p = self.modulus.prime();
        if self.modulus.exponent() < 2 {
            return Err(GaDualError::InvalidComplex("Bockstein needs a complex over Z/p^2".into()));
        }
        if z.len() != self.dim(k) {
            return Err(GaDualError::InvalidComplex("cochain length".into()));
        }
        let order = self.modulus.order();
        let lift: Vec<u64> = match w {
            None => z.iter().map(|x| x % p).collect(),
            Some(w) => z.iter().zip(w).map(|(x, y)| (x % p + p * y) % order).collect(),
        };
        if self.dim(k + 1) == 0 {
            return Ok(Vec::new());
        }
        let dz = self.diff(k).apply(&lift);
        if dz.iter().any(|x| x % p != 0) {
            return Err(GaDualError::LiftNotCocycle { degree: k });
        }
        Ok(dz.iter().map(|x| (x / p) % p).collect())
    }

    pub fn bockstein(&self, k: i32, z: &[u64]) -> Result<Vec<u64>, GaDualError> {
        self.bockstein_with_lift(k, z, None)
    }

    /// Names a mod-`p` vector in degree `k` by its basis labels.
    pub fn describe(&self, k: i32, v: &[u64]) -> String {
        let p = self.modulus.prime();
        let ls = self.labels(k);
        let parts: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| **c % p != 0)
            .map(|(i, c)| match c % p {
                1 => ls[i].clone(),
                c if c == p - 1 => format!("-{}", ls[i]),
                c => format!("{c}·{}", ls[i]),
            })
            .collect();
        if parts.is_empty() {
            "0".to_owned()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_map(p: u64) -> RComplex {
        let r = BaseRing::Zp2(p);
        RComplex::new(
            r,
            0,
            vec![1, 1],
            vec![RMatrix::from_rows(r, &[vec![p as i64]])],
            vec![vec!["a".into()], vec!["b".into()]],
        )
        .unwrap()
    }

    #[test]
    fn bockstein_of_multiplication_by_p() {
        let c = p_map(3).expand();
        assert_eq!(c.bockstein(0, &[1]).unwrap(), vec![1]);
        assert_eq!(c.cohomology_mod_p(0).dim(), 1);
        assert_eq!(c.cohomology_mod_p(1).dim(), 1);
    }

    #[test]
    fn tensor_square_leibniz() {
        let m = p_map(2);
        let t = m.tensor(&m).unwrap();
        assert_eq!(t.dim(1), 2);
        let f = t.expand();
        // B(a⊗a) = a⊗b + b⊗a
        let b = f.bockstein(0, &[1]).unwrap();
        assert_eq!(f.describe(1, &b), "a⊗b + b⊗a");
    }

    #[test]
    fn hom_into_unit_is_dual() {
        let m = p_map(3);
        let unit = RComplex::concentrated(BaseRing::Zp2(3), 0, vec!["1".into()]);
        let h = m.hom(&unit).unwrap();
        assert_eq!(h.start(), -1);
        assert_eq!(h.labels(-1), ["∂_{b}"]);
        assert_eq!(h.labels(0), ["∂_{a}"]);
        // d(∂_b) = ∂_b ∘ d = 3 ∂_a
        let f = h.expand();
        assert_eq!(f.diff(-1).get(0, 0), 3);
        assert_eq!(f.bockstein(-1, &[1]).unwrap(), vec![1]);
    }

    #[test]
    fn rejects_nonzero_square() {
        let r = BaseRing::Fp(2);
        let one = RMatrix::from_rows(r, &[vec![1]]);
        assert!(RComplex::new(r, 0, vec![1, 1, 1], vec![one.clone(), one], vec![]).is_err());
    }
}
