use crate::ring::Modulus;

use super::Matrix;

/// A subspace of `F_p^n`, stored as a reduced row echelon basis so that
/// equal subspaces have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Modulus,
    ambient: usize,
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Modulus, ambient: usize) -> Self {
        assert_eq!(field.exponent(), 1, "subspaces live over a prime field");
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Modulus, ambient: usize) -> Self {
        let vs: Vec<Vec<u64>> = (0..ambient)
            .map(|i| (0..ambient).map(|j| (i == j) as u64).collect())
            .collect();
        Self::span(field, ambient, &vs)
    }

    pub fn span(field: Modulus, ambient: usize, vectors: &[Vec<u64>]) -> Self {
        assert_eq!(field.exponent(), 1, "subspaces live over a prime field");
        if vectors.is_empty() {
            return Self::zero(field, ambient);
        }
        let rows: Vec<Vec<i64>> = vectors
            .iter()
            .map(|v| {
                assert_eq!(v.len(), ambient, "vector length");
                v.iter().map(|&x| x as i64).collect()
            })
            .collect();
        let (r, pivots) = Matrix::from_rows(field, &rows).rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace {
            field,
            ambient,
            basis,
            pivots,
        }
    }

    /// Column space of a matrix.
    pub fn image(m: &Matrix) -> Self {
        Self::span(m.modulus(), m.rows(), &m.columns())
    }

    /// Null space of a matrix.
    pub fn kernel(m: &Matrix) -> Self {
        Self::span(m.modulus(), m.cols(), &m.kernel())
    }

    pub fn field(&self) -> Modulus {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    /// Matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.ambient, &self.basis)
    }

    /// Canonical representative of `v` modulo this subspace: the pivot
    /// coordinates are cleared.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let n = self.field.order();
        let mut out: Vec<u64> = v.iter().map(|x| x % n).collect();
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let f = out[pc];
            if f != 0 {
                for (o, &x) in out.iter_mut().zip(b) {
                    *o = (*o + (n - f) * x) % n;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Self {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Self::span(self.field, self.ambient, &vs)
    }

    /// Linear functionals vanishing on the subspace, as row vectors.
    pub fn annihilator(&self) -> Vec<Vec<u64>> {
        if self.basis.is_empty() {
            return Subspace::full(self.field, self.ambient).basis;
        }
        Matrix::from_columns(self.field, self.ambient, &self.basis)
            .transpose()
            .kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Self {
        let mut rows = self.annihilator();
        rows.extend(other.annihilator());
        if rows.is_empty() {
            return Subspace::full(self.field, self.ambient);
        }
        let rows: Vec<Vec<i64>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x as i64).collect())
            .collect();
        Subspace::kernel(&Matrix::from_rows(self.field, &rows))
    }

    /// `{x : m x ∈ target}` inside the source space of `m`.
    pub fn preimage(m: &Matrix, target: &Subspace) -> Self {
        assert_eq!(m.rows(), target.ambient);
        let ann = target.annihilator();
        if ann.is_empty() {
            return Subspace::full(m.modulus(), m.cols());
        }
        let rows: Vec<Vec<i64>> = ann
            .into_iter()
            .map(|r| r.into_iter().map(|x| x as i64).collect())
            .collect();
        let a = Matrix::from_rows(m.modulus(), &rows);
        Subspace::kernel(&a.mul(m))
    }

    /// Image of the subspace under `m`.
    pub fn map(&self, m: &Matrix) -> Self {
        let vs: Vec<Vec<u64>> = self.basis.iter().map(|v| m.apply(v)).collect();
        Self::span(self.field, m.rows(), &vs)
    }

    /// Vectors of `sup` completing a basis of `self` to one of `sup`; their
    /// classes form a basis of `sup / self`.
    pub fn complement_in(&self, sup: &Subspace) -> Vec<Vec<u64>> {
        debug_assert!(sup.contains_subspace(self));
        let mut acc = self.clone();
        let mut out = Vec::new();
        for v in &sup.basis {
            if !acc.contains(v) {
                out.push(v.clone());
                acc = acc.sum(&Subspace::span(self.field, self.ambient, std::slice::from_ref(v)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Modulus {
        Modulus::new(2, 1).unwrap()
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::span(f2(), 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::span(f2(), 3, &[vec![0, 1, 1], vec![1, 1, 0]]);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[1, 1, 0]));
        assert_eq!(a.sum(&b).dim(), 3);
        assert_eq!(a.complement_in(&Subspace::full(f2(), 3)).len(), 1);
    }

    #[test]
    fn preimage_of_subspace() {
        let m = Matrix::from_rows(f2(), &[vec![1, 1], vec![0, 0]]);
        let target = Subspace::zero(f2(), 2);
        let k = Subspace::preimage(&m, &target);
        assert_eq!(k, Subspace::span(f2(), 2, &[vec![1, 1]]));
        assert_eq!(
            Subspace::preimage(&m, &Subspace::full(f2(), 2)).dim(),
            2
        );
    }

    #[test]
    fn reduction_is_canonical() {
        let a = Subspace::span(f2(), 3, &[vec![1, 1, 0]]);
        assert_eq!(a.reduce(&[1, 0, 1]), a.reduce(&[0, 1, 1]));
    }
}
