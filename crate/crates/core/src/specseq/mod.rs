//! Spectral sequences of finitely filtered cochain complexes over `F_p`:
//! pages from the `Z_r / B_r` calculus, splittings to order `n` with the
//! extension map inducing `d_{n+2}`, and vanishing forced by Adams weights.

mod adams;
mod filtered;
mod pages;
mod split;

pub use adams::{adams_allowed_pages, adams_vanishing_check, random_weight_pure, AdamsReport};
pub use filtered::{quotient_coords, random_constrained, random_filtered, FilteredComplex};
pub use pages::{
    all_pages, converges, infinity_page, initial_page, page, turn_page, Group, PageEntry, SpectralPage,
};
pub use split::{
    extension_edge, split_generator, split_vanishing_check, EdgeComponent, ExtensionEdge, SplitData,
    SplitInstance, VanishingReport,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecSeqError {
    #[error("{0} is not prime")]
    InvalidPrime(u64),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("malformed split data: {0}")]
    MalformedSplitData(String),
    #[error("inconsistent page: {0}")]
    Inconsistent(String),
    #[error("{m} is not a primitive root mod {p}")]
    NotPrimitiveRoot { m: u64, p: u64 },
}
