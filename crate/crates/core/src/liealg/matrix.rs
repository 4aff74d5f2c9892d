use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::linalg::Matrix;
use crate::ring::Modulus;

use super::free::{jacobson_l, next_permutation, permutations, w_element};
use super::LieError;

/// An element of `gl_n(F_p)`.
pub type MatrixLieElement = Matrix;

fn field(p: u64) -> Result<Modulus, LieError> {
    if !crate::is_prime(p) {
        return Err(LieError::InvalidPrime(p));
    }
    Ok(Modulus::new(p, 1).expect("prime"))
}

/// `[a, b] = ab - ba`.
pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a.mul(b).sub(&b.mul(a))
}

/// `ad(x)^k (y)`.
pub fn ad_power(x: &Matrix, y: &Matrix, k: u64) -> Matrix {
    let mut v = y.clone();
    for _ in 0..k {
        v = commutator(x, &v);
    }
    v
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub identity: String,
    pub trial: usize,
    pub x: Vec<Vec<u64>>,
    pub y: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictedReport {
    pub n: usize,
    pub p: u64,
    pub trials: usize,
    pub seed: u64,
    pub scaling_failures: usize,
    pub jacobson_failures: usize,
    pub adjoint_failures: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl RestrictedReport {
    pub fn passed(&self) -> bool {
        self.scaling_failures == 0 && self.jacobson_failures == 0 && self.adjoint_failures == 0
    }
}

fn rows_of(m: &Matrix) -> Vec<Vec<u64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Checks the three restricted Lie algebra axioms on `gl_n(F_p)` with
/// `x^{[p]} = x^p`, on `trials` seeded random pairs.
pub fn restricted_checks(
    n: usize,
    p: u64,
    trials: usize,
    seed: u64,
) -> Result<RestrictedReport, LieError> {
    let f = field(p)?;
    let l = jacobson_l(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<(Matrix, Matrix, u64)> = (0..trials)
        .map(|_| {
            let x = Matrix::random(f, n, n, &mut rng);
            let y = Matrix::random(f, n, n, &mut rng);
            let c = rng.gen_range(0..p);
            (x, y, c)
        })
        .collect();
    let mut report = RestrictedReport {
        n,
        p,
        trials,
        seed,
        scaling_failures: 0,
        jacobson_failures: 0,
        adjoint_failures: 0,
        counterexamples: Vec::new(),
    };
    for (t, (x, y, c)) in samples.iter().enumerate() {
        let xp = x.pow(p);
        let yp = y.pow(p);
        let cp = (0..p).fold(1u64, |a, _| a * c % p);
        let mut fail = |name: &str, count: &mut usize| {
            *count += 1;
            report.counterexamples.push(Counterexample {
                identity: name.to_owned(),
                trial: t,
                x: rows_of(x),
                y: rows_of(y),
            });
        };
        if x.scale(*c as i64).pow(p) != xp.scale(cp as i64) {
            fail("scaling", &mut report.scaling_failures);
        }
        if x.add(y).pow(p) != xp.add(&yp).add(&l.eval(x, y)) {
            fail("jacobson", &mut report.jacobson_failures);
        }
        if commutator(&xp, y) != ad_power(x, y, p) {
            fail("adjoint", &mut report.adjoint_failures);
        }
    }
    Ok(report)
}

/// An element of `gl_n^{⊗p}` as a sparse combination of basis tensors
/// `E_{i_1} ⊗ ⋯ ⊗ E_{i_p}`, where `E_k` is the elementary matrix with
/// index `k = row * n + col`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    pub terms: Vec<(Vec<usize>, u64)>,
}

impl Tensor {
    /// Orbit sum of a basis tensor: each distinct rearrangement once.
    pub fn orbit_sum(multiset: &[usize]) -> Self {
        let mut cur = multiset.to_vec();
        cur.sort_unstable();
        let mut terms = vec![(cur.clone(), 1)];
        while next_permutation(&mut cur) {
            terms.push((cur.clone(), 1));
        }
        Tensor { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(_, c)| *c == 0)
    }
}

fn elementary(f: Modulus, n: usize, k: usize) -> Matrix {
    let mut m = Matrix::zeros(f, n, n);
    m.set(k / n, k % n, 1);
    m
}

/// `V(z)`: multiply the tensor factors.
pub fn verschiebung(f: Modulus, n: usize, z: &Tensor) -> Matrix {
    let mut acc = Matrix::zeros(f, n, n);
    for (idx, c) in &z.terms {
        let mut prod = Matrix::identity(f, n);
        for &k in idx {
            prod = prod.mul(&elementary(f, n, k));
        }
        acc = acc.add(&prod.scale(*c as i64));
    }
    acc
}

/// Evaluates `a_1 ⊗ ⋯ ⊗ a_p ⊗ y ↦ [a_1, [a_2, …, [a_p, y]]]` on `z ⊗ y`.
pub fn nested_bracket(f: Modulus, n: usize, z: &Tensor, y: &Matrix) -> Matrix {
    let mut acc = Matrix::zeros(f, n, n);
    for (idx, c) in &z.terms {
        let mut v = y.clone();
        for &k in idx.iter().rev() {
            v = commutator(&elementary(f, n, k), &v);
        }
        acc = acc.add(&v.scale(*c as i64));
    }
    acc
}

/// `N(x_1 ⋯ x_p)` pushed through `V`: `sum_σ x_{σ(1)} ⋯ x_{σ(p)}`.
pub fn norm_product(xs: &[Matrix]) -> Matrix {
    let f = xs[0].modulus();
    let n = xs[0].rows();
    let mut acc = Matrix::zeros(f, n, n);
    for s in permutations(xs.len()) {
        let mut prod = Matrix::identity(f, n);
        for &i in &s {
            prod = prod.mul(&xs[i as usize]);
        }
        acc = acc.add(&prod);
    }
    acc
}

/// Evaluates `w` on matrices.
pub fn w_evaluate(xs: &[Matrix]) -> Result<Matrix, LieError> {
    let w = w_element(xs.len() as u64)?;
    let f = xs[0].modulus();
    let n = xs[0].rows();
    let mut acc = Matrix::zeros(f, n, n);
    for (s, &c) in w.terms() {
        let mut b = xs[s[0] as usize].clone();
        for &i in &s[1..] {
            b = commutator(&b, &xs[i as usize]);
        }
        acc = acc.add(&b.scale(c as i64));
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaReport {
    pub n: usize,
    pub p: u64,
    pub trials: usize,
    pub seed: u64,
    /// Number of orbit-sum basis elements of `Γ^p gl_n`.
    pub orbit_sums: usize,
    pub diagram1_checked: usize,
    pub diagram1_failures: usize,
    pub diagram2_checked: usize,
    pub diagram2_failures: usize,
}

impl GammaReport {
    pub fn passed(&self) -> bool {
        self.diagram1_failures == 0 && self.diagram2_failures == 0
    }
}

/// Multisets of size `k` drawn from `0..d`, as sorted vectors.
pub fn multisets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(d: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            go(d, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Checks both diagrams for `V: Γ^p gl_n → gl_n`.
///
/// Diagram 1 is checked on every monomial in the elementary matrices
/// (a spanning set of `Sym^p`) and on `trials` random tuples. Diagram 2 is
/// checked on every orbit sum against every elementary `y`, which covers
/// `Γ^p g ⊗ g` by linearity, then on `trials` random pairs: `x^{⊗p}` and
/// a random combination of orbit sums.
pub fn gamma_p_verschiebung_checks(
    n: usize,
    p: u64,
    trials: usize,
    seed: u64,
) -> Result<GammaReport, LieError> {
    if p != 2 && p != 3 {
        return Err(LieError::TooLarge(format!("Γ^p checks need p ∈ {{2, 3}}, got {p}")));
    }
    if n == 0 || n > 3 {
        return Err(LieError::TooLarge(format!("Γ^p checks need 1 ≤ n ≤ 3, got {n}")));
    }
    let f = field(p)?;
    let d = n * n;
    let basis: Vec<Matrix> = (0..d).map(|k| elementary(f, n, k)).collect();
    let orbits = multisets(d, p as usize);
    let mut report = GammaReport {
        n,
        p,
        trials,
        seed,
        orbit_sums: orbits.len(),
        diagram1_checked: 0,
        diagram1_failures: 0,
        diagram2_checked: 0,
        diagram2_failures: 0,
    };

    let check1 = |xs: &[Matrix], report: &mut GammaReport| -> Result<(), LieError> {
        report.diagram1_checked += 1;
        if norm_product(xs) != w_evaluate(xs)? {
            report.diagram1_failures += 1;
        }
        Ok(())
    };
    for ms in &orbits {
        let xs: Vec<Matrix> = ms.iter().map(|&k| basis[k].clone()).collect();
        check1(&xs, &mut report)?;
    }

    let check2 = |z: &Tensor, y: &Matrix, report: &mut GammaReport| {
        report.diagram2_checked += 1;
        if commutator(&verschiebung(f, n, z), y) != nested_bracket(f, n, z, y) {
            report.diagram2_failures += 1;
        }
    };
    for ms in &orbits {
        let z = Tensor::orbit_sum(ms);
        for y in &basis {
            check2(&z, y, &mut report);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let xs: Vec<Matrix> = (0..p).map(|_| Matrix::random(f, n, n, &mut rng)).collect();
        check1(&xs, &mut report)?;

        let x = Matrix::random(f, n, n, &mut rng);
        let y = Matrix::random(f, n, n, &mut rng);
        report.diagram2_checked += 1;
        if commutator(&x.pow(p), &y) != ad_power(&x, &y, p) {
            report.diagram2_failures += 1;
        }

        let mut z = Tensor { terms: Vec::new() };
        for ms in &orbits {
            let c = rng.gen_range(0..p);
            if c != 0 {
                for (idx, _) in Tensor::orbit_sum(ms).terms {
                    z.terms.push((idx, c));
                }
            }
        }
        check2(&z, &y, &mut report);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restricted_small_cases() {
        for (n, p) in [(2, 2), (3, 3)] {
            let r = restricted_checks(n, p, 100, 7).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(r.counterexamples.is_empty());
        }
    }

    #[test]
    fn nilpotent_adjoint_vanishes() {
        let f = Modulus::new(3, 1).unwrap();
        let x = Matrix::from_rows(f, &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]);
        assert!(x.pow(3).is_zero());
        let y = Matrix::from_rows(f, &[vec![1, 2, 0], vec![0, 1, 1], vec![2, 0, 1]]);
        assert!(ad_power(&x, &y, 3).is_zero());
    }

    #[test]
    fn norm_matches_w_on_distinct_elements() {
        let f = Modulus::new(2, 1).unwrap();
        let x1 = Matrix::from_rows(f, &[vec![1, 1], vec![0, 1]]);
        let x2 = Matrix::from_rows(f, &[vec![0, 1], vec![1, 1]]);
        assert_eq!(norm_product(&[x1.clone(), x2.clone()]), w_evaluate(&[x1, x2]).unwrap());
    }

    #[test]
    fn zero_tensor() {
        let f = Modulus::new(2, 1).unwrap();
        let z = Tensor { terms: Vec::new() };
        assert!(z.is_zero());
        let y = Matrix::identity(f, 2);
        assert!(verschiebung(f, 2, &z).is_zero());
        assert!(nested_bracket(f, 2, &z, &y).is_zero());
    }

    #[test]
    fn orbit_sums_count() {
        assert_eq!(multisets(4, 2).len(), 10);
        assert_eq!(Tensor::orbit_sum(&[1, 0, 1]).terms.len(), 3);
    }

    #[test]
    fn gamma_diagrams() {
        for (n, p) in [(2, 2), (2, 3), (3, 2)] {
            let r = gamma_p_verschiebung_checks(n, p, 20, 3).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        assert!(gamma_p_verschiebung_checks(2, 5, 1, 0).is_err());
    }
}
