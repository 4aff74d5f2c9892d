//! Representations of the dual additive group as nilpotent `θ`-modules,
//! their cohomology and `RHom`, the Bockstein over `Z/p^2`, and the co-Lie
//! complex of the `λ`-deformation.

mod colie;
mod complex;
mod leibniz;
mod rmatrix;
mod theta;

pub use colie::{
    colie_complex, colie_differential_text, deformation_class_check, ext_complex, ext_table,
    DeformationCheck, ExtRow, ExtTable,
};
pub use complex::{CohomologyGroup, FreeComplex, RComplex};
pub use leibniz::{bockstein_leibniz_check, random_complex, LeibnizReport};
pub use rmatrix::{BaseRing, RMatrix};
pub use theta::{
    cohomology_of_rep, rgamma, rhom, tau_class, ExtClass, RepCohomology, ThetaComplex, ThetaModule,
};

use crate::witt::WittError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GaDualError {
    #[error("{0} is not prime")]
    InvalidPrime(u64),
    #[error("base rings differ: {0} vs {1}")]
    RingMismatch(BaseRing, BaseRing),
    #[error("θ is not nilpotent")]
    NotNilpotent,
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("the lift of the cochain in degree {degree} is not a cocycle mod p")]
    LiftNotCocycle { degree: i32 },
    #[error("witt: {0}")]
    Witt(String),
}

impl From<WittError> for GaDualError {
    fn from(e: WittError) -> Self {
        GaDualError::Witt(e.to_string())
    }
}
