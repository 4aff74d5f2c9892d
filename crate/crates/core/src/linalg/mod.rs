//! Dense matrices over `Z/p^k`, with row reduction and subspace calculus
//! over `F_p` and Smith normal form over `Z/p^k`.

mod subspace;

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::ring::{ModPrimePower, Modulus};

pub use subspace::Subspace;

/// A dense `rows x cols` matrix with entries reduced modulo `p^k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix mod {} ({}x{})", self.modulus.order(), self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        Matrix {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: Modulus, n: usize) -> Self {
        Self::from_fn(modulus, n, n, |i, j| (i == j) as i64)
    }

    pub fn from_fn(
        modulus: Modulus,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> i64,
    ) -> Self {
        let mut m = Self::zeros(modulus, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from row vectors of signed integers.
    pub fn from_rows(modulus: Modulus, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_fn(modulus, rows.len(), cols, |i, j| rows[i][j])
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(modulus: Modulus, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(modulus, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x % modulus.order();
            }
        }
        m
    }

    pub fn random(modulus: Modulus, rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        let n = modulus.order();
        let mut m = Self::zeros(modulus, rows, cols);
        for x in &mut m.data {
            *x = rng.gen_range(0..n);
        }
        m
    }

    /// A uniformly random invertible square matrix.
    pub fn random_invertible(modulus: Modulus, n: usize, rng: &mut impl Rng) -> Self {
        loop {
            let m = Self::random(modulus, n, n, rng);
            if m.reduce(Modulus::new(modulus.prime(), 1).unwrap()).rank() == n {
                return m;
            }
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> ModPrimePower {
        ModPrimePower::new(self.modulus, self.get(i, j))
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        let n = self.modulus.order() as i64;
        self.data[i * self.cols + j] = v.rem_euclid(n) as u64;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.modulus, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.modulus.order();
        self.zip(other, |a, b| a + n - b)
    }

    pub fn neg(&self) -> Self {
        self.scale(self.modulus.order() as i64 - 1)
    }

    pub fn scale(&self, c: i64) -> Self {
        let n = self.modulus.order();
        let c = c.rem_euclid(n as i64) as u64;
        Matrix {
            data: self.data.iter().map(|&x| x * c % n).collect(),
            ..self.clone()
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.modulus, other.modulus, "modulus mismatch");
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let n = self.modulus.order();
        Matrix {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b) % n)
                .collect(),
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus, "modulus mismatch");
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let n = self.modulus.order();
        let mut out = Self::zeros(self.modulus, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = (out.data[idx] + a * other.get(k, j)) % n;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "vector length");
        let n = self.modulus.order();
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| (acc + a * (b % n)) % n)
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.modulus, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Kronecker product `self ⊗ other`, row-major in the pair index.
    pub fn kron(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        let n = self.modulus.order();
        let mut out = Self::zeros(
            self.modulus,
            self.rows * other.rows,
            self.cols * other.cols,
        );
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let r = i * other.rows + k;
                        let c = j * other.cols + l;
                        out.data[r * out.cols + c] = a * other.get(k, l) % n;
                    }
                }
            }
        }
        out
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let mut out = Self::zeros(a.modulus, a.rows + c.rows, a.cols + b.cols);
        out.paste(0, 0, a);
        out.paste(0, a.cols, b);
        out.paste(a.rows, 0, c);
        out.paste(a.rows, a.cols, d);
        out
    }

    /// Block-diagonal matrix.
    pub fn direct_sum(blocks: &[&Self]) -> Self {
        let modulus = blocks[0].modulus;
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(modulus, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.paste(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Copies `m` into `self` with its top-left corner at `(r, c)`.
    pub fn paste(&mut self, r: usize, c: usize, m: &Self) {
        for i in 0..m.rows {
            for j in 0..m.cols {
                self.data[(r + i) * self.cols + c + j] = m.get(i, j);
            }
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let (r0, c0) = (rows.start, cols.start);
        Self::from_fn(self.modulus, rows.len(), cols.len(), |i, j| {
            self.get(r0 + i, c0 + j) as i64
        })
    }

    /// Reduction to a smaller power of the same prime.
    pub fn reduce(&self, target: Modulus) -> Self {
        assert_eq!(target.prime(), self.modulus.prime());
        let n = target.order();
        Matrix {
            modulus: target,
            data: self.data.iter().map(|x| x % n).collect(),
            ..self.clone()
        }
    }

    /// Canonical lift of entries `0 <= x < p^j` into a larger modulus.
    pub fn lift(&self, target: Modulus) -> Self {
        assert_eq!(target.prime(), self.modulus.prime());
        assert!(target.exponent() >= self.modulus.exponent());
        Matrix {
            modulus: target,
            ..self.clone()
        }
    }

    /// Divides every entry by `p`, landing in `Z/p^{k-1}`. Returns `None`
    /// unless every entry is divisible by `p`.
    pub fn divide_by_p(&self) -> Option<Self> {
        let lower = self.modulus.lower()?;
        let p = self.modulus.prime();
        if self.data.iter().any(|x| x % p != 0) {
            return None;
        }
        Some(Matrix {
            modulus: lower,
            data: self.data.iter().map(|x| x / p).collect(),
            ..self.clone()
        })
    }

    fn assert_field(&self) {
        assert_eq!(self.modulus.exponent(), 1, "operation needs a prime field");
    }

    fn inv_fp(&self, a: u64) -> u64 {
        use crate::ring::RingElem;
        ModPrimePower::new(self.modulus, a)
            .try_inverse()
            .expect("nonzero element of a field")
            .value()
    }

    /// Reduced row echelon form over `F_p` and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        self.assert_field();
        let n = self.modulus.order();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.inv_fp(m.get(r, c));
            for j in 0..m.cols {
                let idx = r * m.cols + j;
                m.data[idx] = m.data[idx] * inv % n;
            }
            for i in 0..m.rows {
                let f = m.get(i, c);
                if i != r && f != 0 {
                    for j in 0..m.cols {
                        let v = m.get(r, j);
                        let idx = i * m.cols + j;
                        m.data[idx] = (m.data[idx] + (n - f) * v) % n;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space over `F_p`, as vectors.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let n = self.modulus.order();
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0; self.cols];
                v[f] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = (n - r.get(i, f)) % n;
                }
                v
            })
            .collect()
    }

    /// Some `x` with `self * x = b` over `F_p`.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let aug = Matrix::block(
            self,
            &Matrix::from_columns(self.modulus, self.rows, &[b.to_vec()]),
            &Matrix::zeros(self.modulus, 0, self.cols),
            &Matrix::zeros(self.modulus, 0, 1),
        );
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = Matrix::block(
            self,
            &Matrix::identity(self.modulus, n),
            &Matrix::zeros(self.modulus, 0, n),
            &Matrix::zeros(self.modulus, 0, n),
        );
        let (r, pivots) = aug.rref();
        if n > 0 && (pivots.len() < n || pivots[n - 1] != n - 1) {
            return None;
        }
        Some(r.submatrix(0..n, n..2 * n))
    }

    /// Inverse over `Z/p^k` by Newton lifting from the inverse mod `p`.
    pub fn inverse_mod(&self) -> Option<Self> {
        let fp = Modulus::new(self.modulus.prime(), 1).unwrap();
        let inv = self.reduce(fp).inverse()?.lift(self.modulus);
        let two = Matrix::identity(self.modulus, self.rows).scale(2);
        let mut x = inv;
        for _ in 0..self.modulus.exponent() {
            x = x.mul(&two.sub(&self.mul(&x)));
        }
        debug_assert_eq!(self.mul(&x), Matrix::identity(self.modulus, self.rows));
        Some(x)
    }

    /// Valuations of the Smith normal form diagonal over `Z/p^k`
    /// (`min(rows, cols)` entries; `k` stands for zero).
    pub fn smith_valuations(&self) -> Vec<u32> {
        let p = self.modulus.prime();
        let k = self.modulus.exponent();
        let n = self.modulus.order();
        let val = |x: u64| ModPrimePower::new(self.modulus, x).valuation();
        let mut m = self.clone();
        let size = m.rows.min(m.cols);
        let mut out = Vec::with_capacity(size);
        for t in 0..size {
            let mut best: Option<(u32, usize, usize)> = None;
            for i in t..m.rows {
                for j in t..m.cols {
                    let v = val(m.get(i, j));
                    if v < k && best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
            let Some((e, bi, bj)) = best else {
                out.extend(std::iter::repeat_n(k, size - t));
                break;
            };
            m.swap_rows(t, bi);
            m.swap_cols(t, bj);
            let pe = p.pow(e);
            let unit = m.get(t, t) / pe;
            let uinv = {
                use crate::ring::RingElem;
                ModPrimePower::new(self.modulus, unit)
                    .try_inverse()
                    .expect("unit")
                    .value()
            };
            for i in t + 1..m.rows {
                let f = (m.get(i, t) / pe) * uinv % n;
                if f != 0 {
                    for j in t..m.cols {
                        let v = m.get(t, j);
                        let idx = i * m.cols + j;
                        m.data[idx] = (m.data[idx] + (n - f) * v) % n;
                    }
                }
            }
            for j in t + 1..m.cols {
                let f = (m.get(t, j) / pe) * uinv % n;
                if f != 0 {
                    for i in t..m.rows {
                        let v = m.get(i, t);
                        let idx = i * m.cols + j;
                        m.data[idx] = (m.data[idx] + (n - f) * v) % n;
                    }
                }
            }
            out.push(e);
        }
        out
    }

    /// Isomorphism types of kernel and cokernel over `Z/p^k`.
    pub fn kernel_cokernel_types(&self) -> (ModuleType, ModuleType) {
        let k = self.modulus.exponent();
        let diag = self.smith_valuations();
        let mut ker = Vec::new();
        let mut coker = Vec::new();
        for &e in &diag {
            if e > 0 {
                ker.push(e);
                coker.push(e);
            }
        }
        ker.extend(std::iter::repeat_n(k, self.cols - diag.len()));
        coker.extend(std::iter::repeat_n(k, self.rows - diag.len()));
        (
            ModuleType::new(self.modulus, ker),
            ModuleType::new(self.modulus, coker),
        )
    }
}

/// A finite `Z/p^k`-module up to isomorphism: a sum of cyclic modules
/// `Z/p^e`, listed by exponent in decreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleType {
    pub prime: u64,
    pub ring_exponent: u32,
    pub exponents: Vec<u32>,
}

impl ModuleType {
    pub fn new(modulus: Modulus, mut exponents: Vec<u32>) -> Self {
        exponents.retain(|&e| e > 0);
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        ModuleType {
            prime: modulus.prime(),
            ring_exponent: modulus.exponent(),
            exponents,
        }
    }

    /// Number of cyclic summands.
    pub fn num_summands(&self) -> usize {
        self.exponents.len()
    }

    /// Number of summands isomorphic to the whole ring.
    pub fn free_rank(&self) -> usize {
        self.exponents
            .iter()
            .filter(|&&e| e == self.ring_exponent)
            .count()
    }

    pub fn is_free(&self) -> bool {
        self.free_rank() == self.exponents.len()
    }
}

impl fmt::Display for ModuleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|&e| format!("Z/{}", self.prime.pow(e)))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> Modulus {
        Modulus::new(p, 1).unwrap()
    }

    #[test]
    fn rank_kernel_solve() {
        let m = Matrix::from_rows(fp(3), &[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]]);
        // row 2 = 2 * row 1 mod 3
        assert_eq!(m.rank(), 2);
        let ker = m.kernel();
        assert_eq!(ker.len(), 1);
        assert!(m.apply(&ker[0]).iter().all(|&x| x == 0));
        let b = vec![1, 2, 2];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
        assert!(m.solve(&[1, 0, 0]).is_none());
    }

    #[test]
    fn inverses() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2, 3, 5] {
            let m = Matrix::random_invertible(fp(p), 4, &mut rng);
            let inv = m.inverse().unwrap();
            assert_eq!(m.mul(&inv), Matrix::identity(fp(p), 4));
        }
        let z4 = Modulus::new(2, 2).unwrap();
        let m = Matrix::random_invertible(z4, 3, &mut rng);
        assert_eq!(m.mul(&m.inverse_mod().unwrap()), Matrix::identity(z4, 3));
    }

    #[test]
    fn smith_form_over_z4() {
        let z4 = Modulus::new(2, 2).unwrap();
        let m = Matrix::from_rows(z4, &[vec![2, 0], vec![0, 0]]);
        assert_eq!(m.smith_valuations(), vec![1, 2]);
        let (ker, coker) = m.kernel_cokernel_types();
        assert_eq!(ker.exponents, vec![2, 1]);
        assert_eq!(coker.to_string(), "Z/4 + Z/2");

        let zero = Matrix::zeros(z4, 1, 1);
        let (ker, coker) = zero.kernel_cokernel_types();
        assert!(ker.is_free() && coker.is_free());
        assert_eq!((ker.free_rank(), coker.free_rank()), (1, 1));
    }

    #[test]
    fn smith_valuations_are_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m9 = Modulus::new(3, 2).unwrap();
        for _ in 0..20 {
            let a = Matrix::random(m9, 3, 4, &mut rng).scale(3);
            let u = Matrix::random_invertible(m9, 3, &mut rng);
            let v = Matrix::random_invertible(m9, 4, &mut rng);
            let mut s1 = a.smith_valuations();
            let mut s2 = u.mul(&a).mul(&v).smith_valuations();
            s1.sort();
            s2.sort();
            assert_eq!(s1, s2);
        }
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = Modulus::new(3, 2).unwrap();
        let a = Matrix::random(m, 2, 2, &mut rng);
        let b = Matrix::random(m, 3, 3, &mut rng);
        let c = Matrix::random(m, 2, 2, &mut rng);
        let d = Matrix::random(m, 3, 3, &mut rng);
        assert_eq!(a.kron(&b).mul(&c.kron(&d)), a.mul(&c).kron(&b.mul(&d)));
    }

    #[test]
    fn divide_by_p() {
        let z4 = Modulus::new(2, 2).unwrap();
        let m = Matrix::from_rows(z4, &[vec![2, 0, 2]]);
        assert_eq!(m.divide_by_p().unwrap().row(0), &[1, 0, 1]);
        assert!(Matrix::from_rows(z4, &[vec![1]]).divide_by_p().is_none());
    }
}
