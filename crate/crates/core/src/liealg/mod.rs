//! Multilinear Lie and associative elements at arity `p`, Jacobson's
//! polynomial, restricted Lie algebra identities on `gl_n(F_p)`, the
//! Verschiebung on `Γ^p`, and `p`-th powers of derivations.

mod derivation;
mod free;
mod matrix;

pub use derivation::{derivation_pth_power, satisfies_leibniz, truncated_mul, TruncatedDerivation};
pub use free::{
    jacobson_l, left_normed, left_normed_rank, lie_to_assoc, next_permutation, norm_element,
    permutations, w_element, FreeAssoc, LiePolynomial, MultilinearAssoc, MultilinearLie,
    MAX_ARITY,
};
pub use matrix::{
    ad_power, commutator, gamma_p_verschiebung_checks, multisets, nested_bracket, norm_product,
    restricted_checks, verschiebung, w_evaluate, Counterexample, GammaReport, MatrixLieElement,
    RestrictedReport, Tensor,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("arity {arity} exceeds the cap {cap}")]
    ArityTooLarge { arity: u64, cap: u64 },
    #[error("{0} is not prime")]
    InvalidPrime(u64),
    #[error("certification failed: {0}")]
    CertificationFailure(String),
    #[error("not a derivation: {0}")]
    NotADerivation(String),
    #[error("input too large: {0}")]
    TooLarge(String),
}
