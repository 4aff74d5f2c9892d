use serde::Serialize;

use crate::linalg::ModuleType;

use super::complex::RComplex;
use super::rmatrix::{BaseRing, RMatrix};
use super::GaDualError;

/// A representation of the dual additive group: a free module of finite
/// rank with a nilpotent endomorphism `θ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaModule {
    ring: BaseRing,
    rank: usize,
    theta: RMatrix,
    weights: Option<Vec<i64>>,
}

fn is_nilpotent(m: &RMatrix) -> bool {
    let e = m.expand();
    e.pow(e.rows().max(1) as u64).is_zero()
}

impl ThetaModule {
    pub fn new(theta: RMatrix, weights: Option<Vec<i64>>) -> Result<Self, GaDualError> {
        let ring = theta.ring().check()?;
        if theta.rows() != theta.cols() {
            return Err(GaDualError::InvalidModule("θ must be square".into()));
        }
        if !is_nilpotent(&theta) {
            return Err(GaDualError::NotNilpotent);
        }
        if weights.as_ref().is_some_and(|w| w.len() != theta.rows()) {
            return Err(GaDualError::InvalidModule("one weight per basis vector".into()));
        }
        Ok(ThetaModule {
            ring,
            rank: theta.rows(),
            theta,
            weights,
        })
    }

    /// `R^rank` with `θ = 0`.
    pub fn trivial(ring: BaseRing, rank: usize) -> Self {
        Self::new(RMatrix::zeros(ring, rank, rank), None).expect("zero is nilpotent")
    }

    /// The Jordan block `θ = [[0, 0], [1, 0]]`, sending `e_0` to `e_1`.
    pub fn tau_module(ring: BaseRing) -> Self {
        Self::new(RMatrix::from_rows(ring, &[vec![0, 0], vec![1, 0]]), None).expect("nilpotent")
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn theta(&self) -> &RMatrix {
        &self.theta
    }

    pub fn weights(&self) -> Option<&[i64]> {
        self.weights.as_deref()
    }

    pub fn with_weights(self, weights: Vec<i64>) -> Result<Self, GaDualError> {
        Self::new(self.theta, Some(weights))
    }

    /// Least `k` with `θ^k = 0`.
    pub fn nilpotency_index(&self) -> usize {
        let e = self.theta.expand();
        let mut acc = crate::linalg::Matrix::identity(e.modulus(), e.rows());
        let mut k = 0;
        while !acc.is_zero() {
            acc = acc.mul(&e);
            k += 1;
        }
        k
    }

    /// `θ_{M ⊗ M'} = θ_M ⊗ 1 + 1 ⊗ θ_{M'}`; weights add.
    pub fn tensor(&self, other: &Self) -> Result<Self, GaDualError> {
        if self.ring != other.ring {
            return Err(GaDualError::RingMismatch(self.ring, other.ring));
        }
        let theta = self
            .theta
            .kron(&RMatrix::identity(self.ring, other.rank))
            .add(&RMatrix::identity(self.ring, self.rank).kron(&other.theta));
        let weights = match (&self.weights, &other.weights) {
            (Some(a), Some(b)) => Some(a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect()),
            _ => None,
        };
        Self::new(theta, weights)
    }
}

/// `RΓ` of a representation, `[M →θ M]`, as kernel and cokernel of `θ`
/// over the scalars `Z/p^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepCohomology {
    pub ring: BaseRing,
    pub h0: ModuleType,
    pub h1: ModuleType,
}

impl RepCohomology {
    /// Numbers of cyclic summands of `H^0` and `H^1` over `Z/p^k`.
    pub fn ranks_over_scalars(&self) -> (usize, usize) {
        (self.h0.num_summands(), self.h1.num_summands())
    }
}

pub fn cohomology_of_rep(m: &ThetaModule) -> RepCohomology {
    let (h0, h1) = m.theta.expand().kernel_cokernel_types();
    RepCohomology {
        ring: m.ring,
        h0,
        h1,
    }
}

/// The two-term complex `[M →θ M]` in degrees 0 and 1.
pub fn rgamma(m: &ThetaModule) -> RComplex {
    RComplex::new(m.ring, 0, vec![m.rank, m.rank], vec![m.theta.clone()], vec![])
        .expect("two-term complex")
}

/// A class in `H^degree` of `RΓ` or of an `RHom` complex, given by a
/// representative cocycle over `Z/p^k` in the expanded basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtClass {
    pub degree: i32,
    pub representative: Vec<u64>,
    pub label: String,
}

/// The class in `H^1(triv)` of the extension `0 → triv → E → triv → 0`
/// with `E` the Jordan block: `θ_E` applied to a lift of the quotient
/// generator, projected to the sub.
pub fn tau_class(ring: BaseRing) -> ExtClass {
    let e = ThetaModule::tau_module(ring);
    // e_0 lifts the quotient generator, e_1 spans the sub
    let l = ring.lambda_dim();
    let column = e.theta.expand().column(0);
    let representative = column[l..2 * l].to_vec();
    ExtClass {
        degree: 1,
        representative,
        label: "τ".to_owned(),
    }
}

/// A cochain complex of representations: an [`RComplex`] with `θ` in each
/// degree commuting with the differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaComplex {
    complex: RComplex,
    thetas: Vec<RMatrix>,
}

impl ThetaComplex {
    pub fn new(complex: RComplex, thetas: Vec<RMatrix>) -> Result<Self, GaDualError> {
        let ring = complex.ring();
        let degrees: Vec<i32> = (complex.start()..complex.end()).collect();
        if thetas.len() != degrees.len() {
            return Err(GaDualError::InvalidComplex("one θ per degree".into()));
        }
        for (&k, t) in degrees.iter().zip(&thetas) {
            if t.ring() != ring || t.rows() != complex.dim(k) || t.cols() != complex.dim(k) {
                return Err(GaDualError::InvalidComplex(format!("θ in degree {k} has the wrong shape")));
            }
            if !is_nilpotent(t) {
                return Err(GaDualError::NotNilpotent);
            }
            if k + 1 < complex.end() {
                let d = complex.diff(k);
                if d.mul(t) != thetas[(k + 1 - complex.start()) as usize].mul(&d) {
                    return Err(GaDualError::InvalidComplex(format!("dθ ≠ θd out of degree {k}")));
                }
            }
        }
        Ok(ThetaComplex { complex, thetas })
    }

    /// Trivial action in every degree.
    pub fn with_trivial_action(complex: RComplex) -> Self {
        let ring = complex.ring();
        let thetas = (complex.start()..complex.end())
            .map(|k| RMatrix::zeros(ring, complex.dim(k), complex.dim(k)))
            .collect();
        ThetaComplex { complex, thetas }
    }

    pub fn complex(&self) -> &RComplex {
        &self.complex
    }

    pub fn theta(&self, k: i32) -> RMatrix {
        if k < self.complex.start() || k >= self.complex.end() {
            RMatrix::zeros(self.complex.ring(), 0, 0)
        } else {
            self.thetas[(k - self.complex.start()) as usize].clone()
        }
    }

    pub fn reduce_to(&self, target: BaseRing) -> Self {
        ThetaComplex {
            complex: self.complex.reduce_to(target),
            thetas: self.thetas.iter().map(|t| t.reduce_to(target)).collect(),
        }
    }
}

/// `RHom(C, D)` in representations: the total complex of
/// `Hom(C, D) →θ_* Hom(C, D)` with `θ_* f = θ_D f - f θ_C`. The second copy
/// is shifted up by one and its basis is labelled with a `τ` prefix; those
/// are the cup products with `τ`.
pub fn rhom(c: &ThetaComplex, d: &ThetaComplex) -> Result<RComplex, GaDualError> {
    let (cc, dc) = (&c.complex, &d.complex);
    let a = cc.hom(dc)?;
    let ring = a.ring();
    let theta_star = |k: i32| -> RMatrix {
        let mut t = RMatrix::zeros(ring, a.dim(k), a.dim(k));
        for (j, off) in cc.hom_blocks(dc, k) {
            let blk = d
                .theta(j + k)
                .kron(&RMatrix::identity(ring, cc.dim(j)))
                .sub(&RMatrix::identity(ring, dc.dim(j + k)).kron(&c.theta(j).transpose()));
            t.paste(off, off, &blk);
        }
        t
    };
    let start = a.start();
    let end = a.end() + 1;
    let dims: Vec<usize> = (start..end).map(|k| a.dim(k) + a.dim(k - 1)).collect();
    let labels: Vec<Vec<String>> = (start..end)
        .map(|k| {
            let mut ls: Vec<String> = a.labels(k).to_vec();
            ls.extend(a.labels(k - 1).iter().map(|s| format!("τ{s}")));
            ls
        })
        .collect();
    let mut diffs = Vec::new();
    for k in start..end - 1 {
        let mut m = RMatrix::zeros(ring, dims[(k + 1 - start) as usize], dims[(k - start) as usize]);
        let (ak, ak1) = (a.dim(k), a.dim(k + 1));
        // (x, y) ↦ (d x, θ_* x - d y)
        if ak1 > 0 && ak > 0 {
            m.paste(0, 0, &a.diff(k));
        }
        if ak > 0 {
            m.paste(ak1, 0, &theta_star(k));
        }
        if ak > 0 && a.dim(k - 1) > 0 {
            m.paste(ak1, ak, &a.diff(k - 1).neg());
        }
        diffs.push(m);
    }
    RComplex::new(ring, start, dims, diffs, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cohomology_is_the_ring() {
        for r in [
            BaseRing::Fp(3),
            BaseRing::Zp2(3),
            BaseRing::FpLambda(3),
            BaseRing::Zp2Lambda(2),
        ] {
            let h = cohomology_of_rep(&ThetaModule::trivial(r, 1));
            assert_eq!(h.h0.num_summands(), r.lambda_dim());
            assert!(h.h0.is_free() && h.h1.is_free());
            assert_eq!(h.h0, h.h1);
        }
        let h = cohomology_of_rep(&ThetaModule::trivial(BaseRing::Zp2(2), 1));
        assert_eq!(h.h0.to_string(), "Z/4");
    }

    #[test]
    fn jordan_block_cohomology() {
        let h = cohomology_of_rep(&ThetaModule::tau_module(BaseRing::Fp(5)));
        assert_eq!(h.ranks_over_scalars(), (1, 1));
        let h = cohomology_of_rep(&ThetaModule::tau_module(BaseRing::Zp2(3)));
        assert_eq!(h.h0.to_string(), "Z/9");
        assert_eq!(h.h1.to_string(), "Z/9");
    }

    #[test]
    fn nilpotency_enforced() {
        let r = BaseRing::Fp(2);
        assert!(matches!(
            ThetaModule::new(RMatrix::identity(r, 1), None),
            Err(GaDualError::NotNilpotent)
        ));
    }

    #[test]
    fn tensor_examples() {
        let r = BaseRing::Fp(3);
        let t = ThetaModule::tau_module(r);
        let m = ThetaModule::tau_module(r).with_weights(vec![1, 2]).unwrap();
        assert_eq!(ThetaModule::trivial(r, 1).tensor(&t).unwrap(), t);
        let tt = t.tensor(&t).unwrap();
        assert_eq!(tt.rank(), 4);
        assert_eq!(tt.nilpotency_index(), 3);
        let t2 = ThetaModule::tau_module(BaseRing::Fp(2));
        assert_eq!(t2.tensor(&t2).unwrap().nilpotency_index(), 2);
        let mm = m.tensor(&m).unwrap();
        assert_eq!(mm.weights().unwrap(), &[2, 3, 3, 4]);
        assert!(matches!(t.tensor(&t2), Err(GaDualError::RingMismatch(..))));
    }

    #[test]
    fn tau_generates() {
        let tau = tau_class(BaseRing::Fp(3));
        assert_eq!(tau.representative, vec![1]);
        let tau = tau_class(BaseRing::Zp2(5));
        let twice = tau.representative[0] * 2 % 25;
        assert_ne!(twice, 0);
        let c = rgamma(&ThetaModule::trivial(BaseRing::Zp2(5), 1)).expand();
        assert!(c.bockstein(1, &tau.representative).unwrap().iter().all(|&x| x == 0));
        assert_eq!(c.cohomology_mod_p(1).dim(), 1);
        assert!(!c.cohomology_mod_p(1).is_zero_class(&[1]));
    }
}
