//! Exhaustive searches: perfect codes via exact cover, perfect bitrades via
//! constraint propagation.

pub mod bitrade;
pub mod cover;
pub mod dlx;
pub mod linear;

pub use bitrade::{enumerate_bitrades, BitradeSpectrum, DEFAULT_BITRADE_BUDGET};
pub use cover::{
    build_code_cover, classify_perfect_codes, embed_bitrade, solve_exact_cover, Classification,
    CodeClass, Embedding, ExactCoverInstance, SolutionReport, SolveOptions, DEFAULT_CODE_BUDGET,
};
