//! Algebra of self-dual codes over GF(2) and GF(4), permutation group
//! machinery, and the constrained overcode searches built on top of them.
//!
//! The crate is organized bottom-up:
//!
//! * [`bits`] — bit-packed vectors and GF(2) matrices (rank, kernel, solve);
//! * [`gf2`] — binary linear codes: duality, weights, minimum distance,
//!   known families, and exhaustive enumeration of self-dual codes;
//! * [`perm`] — permutations, stabilizer chains, centralizers of the
//!   standard fixed-point-free actions, and block-collapse epimorphisms;
//! * [`decomp`] — automorphism-equivariant decompositions of codes and the
//!   identification of even-weight cycle blocks with GF(4);
//! * [`gf4`] — linear and additive codes over GF(4) with Hermitian and
//!   trace-Hermitian duality, the interleaving lift and its inverse;
//! * [`equiv`] — code equivalence and automorphism groups by partition
//!   refinement, plus orbit-representative computations;
//! * [`extend`] — quotient spaces with forms, isotropic subspace
//!   enumeration, and the free-module overcode search;
//! * [`verify`] — named self-check suites driven by the CLI;
//! * [`shard`] — deterministic job splitting and report records;
//! * [`io`] — text formats for codes, groups, and datasets.

pub mod bits;
pub mod decomp;
pub mod equiv;
pub mod extend;
pub mod gf2;
pub mod gf4;
pub mod io;
pub mod perm;
pub mod shard;
pub mod verify;

use std::sync::OnceLock;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("no nonzero codewords")]
    ZeroDimensional,
    #[error("enumeration too large: {0} items exceeds budget {1}")]
    EnumerationTooLarge(u128, u128),
    #[error("group order exceeds backend limit")]
    OrderOverflow,
    #[error("not invariant under the given permutation")]
    NotInvariant,
    #[error("vector is not constant on a cycle: not in the fixed space")]
    NotInFixedSpace,
    #[error("block has odd weight: not in the even-weight field")]
    OddWeightBlock,
    #[error("code is not self-orthogonal")]
    NotSelfOrthogonal,
    #[error("code is not doubly-even")]
    NotDoublyEven,
    #[error("permutation has wrong order: expected {expected}, got {got}")]
    WrongOrder { expected: u32, got: u32 },
    #[error("form is degenerate")]
    DegenerateForm,
    #[error("minimal polynomial mismatch: action is not a primitive cube root of unity")]
    MinimalPolynomial,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("budget exceeded in {0}")]
    BudgetExceeded(&'static str),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Enumeration cap shared by group-element and subspace walks.
///
/// Read once from `SDSEARCH_BUDGET`; defaults to one million items.
pub fn enumeration_budget() -> u128 {
    static BUDGET: OnceLock<u128> = OnceLock::new();
    *BUDGET.get_or_init(|| {
        std::env::var("SDSEARCH_BUDGET")
            .ok()
            .and_then(|s| s.parse::<u128>().ok())
            .unwrap_or(1_000_000)
    })
}
