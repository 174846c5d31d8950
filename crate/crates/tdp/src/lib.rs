//! Exact calculus for del Pezzo surfaces carrying T-singularities.
//!
//! The crate has four mathematical layers and a command-line surface:
//!
//! - [`quotsing`] — two-dimensional cyclic quotient and Du Val
//!   singularities: Hirzebruch-Jung expansions, T-recognition, Milnor
//!   numbers, Gorenstein indices, Weil class groups.
//! - [`toric`] — complete lattice fans and the surfaces they define:
//!   singularity content, intersection theory, `K^2`, del Pezzo tests,
//!   anticanonical lattice-point counts, weighted projective planes.
//! - [`markov`] — Markov-type Diophantine equations
//!   `x^2 + y^2 + k z^2 = m x y z` under Vieta mutation, and the
//!   translation of solution triples to weighted projective planes.
//! - [`qgdeform`] — Q-Gorenstein deformation combinatorics on abstract
//!   surface records: the partition rule for partial smoothings of
//!   T-points, Picard jumps, Noether conservation, and the
//!   `s <= rho + 2` bound report.
//! - [`corpus`] and [`cli`] — exhaustive fan enumeration modulo
//!   unimodular equivalence and the machine-checkable verification
//!   harness behind the `tdp` binary.
//!
//! All arithmetic is exact: arbitrary-precision integers for lattice and
//! germ data, exact rationals for intersection numbers.

pub mod arith;
pub mod cli;
pub mod corpus;
pub mod markov;
pub mod qgdeform;
pub mod quotsing;
pub mod toric;

use num_bigint::BigInt;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid germ: gcd({a}, {r}) != 1")]
    NotCoprime { r: BigInt, a: BigInt },
    #[error("invalid germ: order must be positive, got {0}")]
    NonPositiveOrder(BigInt),
    #[error("invalid chain: entry {0} < 2")]
    InvalidChainEntry(BigInt),
    #[error("not a T-singularity: {0}")]
    NotTSingularity(String),
    #[error("not a Du Val singularity: {0}")]
    NotDuVal(String),
    #[error("fan needs at least 3 rays, got {0}")]
    TooFewRays(usize),
    #[error("ray ({0}, {1}) is not primitive")]
    NonPrimitiveRay(BigInt, BigInt),
    #[error("duplicate ray ({0}, {1})")]
    DuplicateRay(BigInt, BigInt),
    #[error("degenerate cone: rays ({0}, {1}) and ({2}, {3}) are opposite")]
    NonConvexCone(BigInt, BigInt, BigInt, BigInt),
    #[error("fan is not complete: angular gap of at least pi after ray ({0}, {1})")]
    NotComplete(BigInt, BigInt),
    #[error("cone determinant {0} is not positive")]
    NonPositiveDeterminant(BigInt),
    #[error("ill-formed weights: gcd({wi}, {wj}) = {g} after removing common factors")]
    IllFormedWeights { wi: BigInt, wj: BigInt, g: BigInt },
    #[error("weight {0} is not positive")]
    NonPositiveWeight(BigInt),
    #[error("unsupported equation (k, m) = ({k}, {m}); supported: k = m, or (k, m) = (1, 3)")]
    UnsupportedEquation { k: BigInt, m: BigInt },
    #[error("({a}, {b}, {c}) does not solve x^2 + y^2 + {k} z^2 = {m} x y z")]
    NotASolution {
        a: BigInt,
        b: BigInt,
        c: BigInt,
        k: BigInt,
        m: BigInt,
    },
    #[error("mutation undefined: {0}")]
    MutationUndefined(String),
    #[error("invalid deformation: {0}")]
    InvalidDeformation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use markov::{MarkovEquation, MarkovTriple};
pub use qgdeform::{DeformCase, DeformationStep, SurfaceRecord};
pub use quotsing::{CyclicQuotSing, SingularityClass, TClassData};
pub use toric::{cone_singularity, wps_fan, Fan, LatticeVector, ToricSurface};
