use rand::Rng;

use crate::linalg::{Matrix, Subspace};
use crate::ring::Modulus;

use super::SpecSeqError;

/// A bounded cochain complex of `F_p`-vector spaces in degrees
/// `start, start + 1, …` with a decreasing filtration
/// `C = F^0 ⊇ F^1 ⊇ … ⊇ F^N ⊇ F^{N+1} = 0` preserved by `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredComplex {
    field: Modulus,
    start: i32,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
    /// `filtration[k][t]` is `F^t` in degree `start + k`, for `t = 0..=N`.
    filtration: Vec<Vec<Subspace>>,
    weights: Option<Vec<Vec<u64>>>,
}

/// Coordinates of `y` modulo `sub` in terms of `basis` (whose classes must
/// be independent modulo `sub`), or `None` if `y` is not in their span.
pub fn quotient_coords(sub: &Subspace, basis: &[Vec<u64>], y: &[u64]) -> Option<Vec<u64>> {
    let ry = sub.reduce(y);
    if basis.is_empty() {
        return ry.iter().all(|&x| x == 0).then(Vec::new);
    }
    let cols: Vec<Vec<u64>> = basis.iter().map(|b| sub.reduce(b)).collect();
    Matrix::from_columns(sub.field(), sub.ambient(), &cols).solve(&ry)
}

impl FilteredComplex {
    /// `diffs[k]` maps degree `start + k` to `start + k + 1`; `filtration[k]`
    /// lists `F^0 ⊇ … ⊇ F^N` (the same `N` in every degree).
    pub fn new(
        p: u64,
        start: i32,
        dims: Vec<usize>,
        diffs: Vec<Matrix>,
        filtration: Vec<Vec<Subspace>>,
    ) -> Result<Self, SpecSeqError> {
        if !crate::is_prime(p) {
            return Err(SpecSeqError::InvalidPrime(p));
        }
        let field = Modulus::new(p, 1).expect("prime");
        if diffs.len() + 1 != dims.len().max(1) {
            return Err(SpecSeqError::InvalidComplex("one differential per adjacent pair".into()));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.modulus() != field || d.cols() != dims[k] || d.rows() != dims[k + 1] {
                return Err(SpecSeqError::InvalidComplex(format!("differential {k} has the wrong shape")));
            }
        }
        for w in diffs.windows(2) {
            if !w[1].mul(&w[0]).is_zero() {
                return Err(SpecSeqError::InvalidComplex("d² ≠ 0".into()));
            }
        }
        if filtration.len() != dims.len() {
            return Err(SpecSeqError::InvalidFiltration("one filtration per degree".into()));
        }
        let levels = filtration.first().map_or(1, Vec::len);
        for (k, fs) in filtration.iter().enumerate() {
            if fs.len() != levels || levels == 0 {
                return Err(SpecSeqError::InvalidFiltration("filtration lengths differ".into()));
            }
            if fs[0].dim() != dims[k] || fs.iter().any(|s| s.ambient() != dims[k]) {
                return Err(SpecSeqError::InvalidFiltration(format!("F^0 ≠ C in degree index {k}")));
            }
            for t in 1..levels {
                if !fs[t - 1].contains_subspace(&fs[t]) {
                    return Err(SpecSeqError::InvalidFiltration(format!("F^{t} ⊄ F^{}", t - 1)));
                }
            }
        }
        for (k, d) in diffs.iter().enumerate() {
            for t in 0..levels {
                let img = filtration[k][t].map(d);
                if !filtration[k + 1][t].contains_subspace(&img) {
                    return Err(SpecSeqError::InvalidFiltration(format!(
                        "d does not preserve F^{t} out of degree {}",
                        start + k as i32
                    )));
                }
            }
        }
        Ok(FilteredComplex {
            field,
            start,
            dims,
            diffs,
            filtration,
            weights: None,
        })
    }

    /// Filtration by coordinate subspaces: basis vector `i` of degree index
    /// `k` lies in `F^{levels[k][i]}`.
    pub fn from_levels(
        p: u64,
        start: i32,
        diffs: Vec<Matrix>,
        levels: Vec<Vec<usize>>,
        top: usize,
    ) -> Result<Self, SpecSeqError> {
        if !crate::is_prime(p) {
            return Err(SpecSeqError::InvalidPrime(p));
        }
        let field = Modulus::new(p, 1).expect("prime");
        let dims: Vec<usize> = levels.iter().map(Vec::len).collect();
        let filtration = levels
            .iter()
            .map(|ls| {
                (0..=top)
                    .map(|t| {
                        let vs: Vec<Vec<u64>> = ls
                            .iter()
                            .enumerate()
                            .filter(|(_, &l)| l >= t)
                            .map(|(i, _)| (0..ls.len()).map(|j| (i == j) as u64).collect())
                            .collect();
                        Subspace::span(field, ls.len(), &vs)
                    })
                    .collect()
            })
            .collect();
        Self::new(p, start, dims, diffs, filtration)
    }

    /// Attaches a weight (a unit mod `p`) to every basis vector.
    pub fn with_weights(mut self, weights: Vec<Vec<u64>>) -> Result<Self, SpecSeqError> {
        if weights.len() != self.dims.len() || weights.iter().zip(&self.dims).any(|(w, &n)| w.len() != n) {
            return Err(SpecSeqError::WeightMismatch("one weight per basis vector".into()));
        }
        for (k, d) in self.diffs.iter().enumerate() {
            for r in 0..d.rows() {
                for c in 0..d.cols() {
                    if d.get(r, c) != 0 && weights[k + 1][r] != weights[k][c] {
                        return Err(SpecSeqError::WeightMismatch(format!(
                            "d mixes weights out of degree {}",
                            self.start + k as i32
                        )));
                    }
                }
            }
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn prime(&self) -> u64 {
        self.field.prime()
    }

    pub fn field(&self) -> Modulus {
        self.field
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    pub fn end(&self) -> i32 {
        self.start + self.dims.len() as i32
    }

    pub fn degrees(&self) -> std::ops::Range<i32> {
        self.start..self.end()
    }

    /// `N`, the last filtration index that may be nonzero.
    pub fn top(&self) -> usize {
        self.filtration.first().map_or(0, |f| f.len() - 1)
    }

    pub fn dim(&self, k: i32) -> usize {
        if k < self.start || k >= self.end() {
            0
        } else {
            self.dims[(k - self.start) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn weights(&self) -> Option<&[Vec<u64>]> {
        self.weights.as_deref()
    }

    /// `d^k`, the zero map outside the stored range.
    pub fn diff(&self, k: i32) -> Matrix {
        if k >= self.start && k + 1 < self.end() {
            self.diffs[(k - self.start) as usize].clone()
        } else {
            Matrix::zeros(self.field, self.dim(k + 1), self.dim(k))
        }
    }

    /// `F^t C^k`, with `F^t = C` for `t ≤ 0` and `0` above `N`.
    pub fn f(&self, k: i32, t: i64) -> Subspace {
        let n = self.dim(k);
        if n == 0 || t > self.top() as i64 {
            return Subspace::zero(self.field, n);
        }
        if t <= 0 {
            return Subspace::full(self.field, n);
        }
        self.filtration[(k - self.start) as usize][t as usize].clone()
    }

    /// Representatives of a basis of `gr^t C^k = F^t / F^{t+1}`.
    pub fn gr_basis(&self, k: i32, t: i64) -> Vec<Vec<u64>> {
        self.f(k, t + 1).complement_in(&self.f(k, t))
    }

    /// `gr^t C^k` coordinates of `y ∈ F^t C^k`.
    pub fn gr_coords(&self, k: i32, t: i64, y: &[u64]) -> Option<Vec<u64>> {
        quotient_coords(&self.f(k, t + 1), &self.gr_basis(k, t), y)
    }

    /// The induced differential `gr^t C^k → gr^t C^{k+1}`.
    pub fn gr_diff(&self, k: i32, t: i64) -> Matrix {
        let src = self.gr_basis(k, t);
        let n = self.gr_basis(k + 1, t).len();
        let d = self.diff(k);
        let cols: Vec<Vec<u64>> = src
            .iter()
            .map(|x| {
                if n == 0 {
                    Vec::new()
                } else {
                    self.gr_coords(k + 1, t, &d.apply(x)).expect("d preserves the filtration")
                }
            })
            .collect();
        Matrix::from_columns(self.field, n, &cols)
    }

    /// `dim H(gr^t C)`, summed over all degrees.
    pub fn gr_cohomology_dim(&self, t: i64) -> usize {
        self.degrees()
            .map(|k| {
                let n = self.gr_basis(k, t).len();
                let out = if n == 0 || self.gr_basis(k + 1, t).is_empty() { 0 } else { self.gr_diff(k, t).rank() };
                let inc = if n == 0 || self.gr_basis(k - 1, t).is_empty() { 0 } else { self.gr_diff(k - 1, t).rank() };
                n - out - inc
            })
            .sum()
    }

    /// `Z(C^k)` and `B(C^k)`.
    pub fn cycles_boundaries(&self, k: i32) -> (Subspace, Subspace) {
        let n = self.dim(k);
        let z = if self.dim(k + 1) == 0 {
            Subspace::full(self.field, n)
        } else {
            Subspace::kernel(&self.diff(k))
        };
        let b = if self.dim(k - 1) == 0 || n == 0 {
            Subspace::zero(self.field, n)
        } else {
            Subspace::image(&self.diff(k - 1))
        };
        (z, b)
    }

    /// `dim H^k(C)` by direct linear algebra.
    pub fn cohomology_dim(&self, k: i32) -> usize {
        let (z, b) = self.cycles_boundaries(k);
        z.dim() - b.dim()
    }

    /// `dim F^t H^k / F^{t+1} H^k` for the filtration induced on cohomology,
    /// `F^t H = (Z ∩ F^t + B) / B`.
    pub fn induced_gr_dim(&self, k: i32, t: i64) -> usize {
        let (z, b) = self.cycles_boundaries(k);
        let a = z.intersect(&self.f(k, t)).sum(&b).dim();
        let c = z.intersect(&self.f(k, t + 1)).sum(&b).dim();
        a - c
    }
}

/// A random `rows × cols` matrix `X` over `F_p` with `X prev = 0` whose
/// entry `(r, c)` may be nonzero only when `allowed(r, c)`.
pub fn random_constrained(
    field: Modulus,
    rows: usize,
    cols: usize,
    prev: Option<&Matrix>,
    allowed: impl Fn(usize, usize) -> bool,
    rng: &mut impl Rng,
) -> Matrix {
    let p = field.prime();
    let mut x = Matrix::zeros(field, rows, cols);
    for r in 0..rows {
        let free: Vec<usize> = (0..cols).filter(|&c| allowed(r, c)).collect();
        if free.is_empty() {
            continue;
        }
        let choices: Vec<Vec<u64>> = match prev {
            None => free
                .iter()
                .enumerate()
                .map(|(i, _)| (0..free.len()).map(|j| (i == j) as u64).collect())
                .collect(),
            Some(m) => {
                // row vectors v on the free columns with v · m[free, :] = 0
                let rows_m: Vec<Vec<i64>> = (0..m.cols())
                    .map(|c| free.iter().map(|&b| m.get(b, c) as i64).collect())
                    .collect();
                if rows_m.is_empty() {
                    free.iter()
                        .enumerate()
                        .map(|(i, _)| (0..free.len()).map(|j| (i == j) as u64).collect())
                        .collect()
                } else {
                    Matrix::from_rows(field, &rows_m).kernel()
                }
            }
        };
        for v in choices {
            let c = rng.gen_range(0..p);
            for (j, &b) in free.iter().enumerate() {
                let cur = x.get(r, b);
                x.set(r, b, ((cur + c * v[j]) % p) as i64);
            }
        }
    }
    x
}

/// A random filtered complex with coordinate filtration in degrees
/// `0..degrees`, each of dimension at most `max_dim`, levels `0..=top`.
/// Entries of `d` are allowed from level `i` to level `j` when `j ≥ i` and
/// `shift_ok(j - i)`.
pub fn random_filtered(
    p: u64,
    degrees: usize,
    max_dim: usize,
    top: usize,
    shift_ok: impl Fn(usize) -> bool,
    rng: &mut impl Rng,
) -> (Vec<Matrix>, Vec<Vec<usize>>) {
    let field = Modulus::new(p, 1).expect("prime");
    let levels: Vec<Vec<usize>> = (0..degrees)
        .map(|_| {
            let n = rng.gen_range(0..=max_dim);
            (0..n).map(|_| rng.gen_range(0..=top)).collect()
        })
        .collect();
    let mut diffs: Vec<Matrix> = Vec::new();
    for k in 0..degrees.saturating_sub(1) {
        let (src, dst) = (&levels[k], &levels[k + 1]);
        let d = random_constrained(
            field,
            dst.len(),
            src.len(),
            diffs.last(),
            |r, c| dst[r] >= src[c] && shift_ok(dst[r] - src[c]),
            rng,
        );
        diffs.push(d);
    }
    (diffs, levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_complexes_are_filtered() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let (d, l) = random_filtered(3, 4, 3, 2, |_| true, &mut rng);
            let fc = FilteredComplex::from_levels(3, 0, d, l, 2).unwrap();
            assert!(fc.total_dim() <= 12);
        }
    }

    #[test]
    fn rejects_unfiltered_differential() {
        let f = Modulus::new(2, 1).unwrap();
        let d = Matrix::from_rows(f, &[vec![1]]);
        // level 1 mapping to level 0 breaks d(F^1) ⊆ F^1
        assert!(matches!(
            FilteredComplex::from_levels(2, 0, vec![d], vec![vec![1], vec![0]], 1),
            Err(SpecSeqError::InvalidFiltration(_))
        ));
    }

    #[test]
    fn gr_of_coordinate_filtration() {
        let f = Modulus::new(2, 1).unwrap();
        let d = Matrix::from_rows(f, &[vec![1, 0]]);
        let fc = FilteredComplex::from_levels(2, 0, vec![d], vec![vec![0, 1], vec![1]], 1).unwrap();
        assert_eq!(fc.gr_basis(0, 0), vec![vec![1, 0]]);
        assert_eq!(fc.gr_basis(0, 1), vec![vec![0, 1]]);
        assert!(fc.gr_diff(0, 0).is_zero());
        assert_eq!(fc.cohomology_dim(0), 1);
        assert_eq!(fc.cohomology_dim(1), 0);
    }
}
