//! Combinatorics of dual graphs of nodal curves.
//!
//! A connected nodal curve is modeled by its dual graph: one vertex per
//! irreducible component, one edge per node (multi-edges and loops allowed).
//! This crate implements the calculus of subcurves and their cuts, the
//! construction of nested tail chains, the canonical semistability and
//! quasistability tests for multidegrees, and the degree-0 twist that makes
//! the double-point bundle `O(2P - Q - Q')` quasistable. A verification
//! module runs exhaustive and randomized searches for counterexamples to the
//! structural lemmas behind the construction.
//!
//! All arithmetic is exact: degrees are signed integers (generic over
//! [`Degree`], defaulting to [`Deg`]), half-integers use a doubled
//! representation, and spanning-tree counts use big integers.

pub mod abel_neron;
pub mod document;
pub mod fixtures;
pub mod graph;
mod scalar;
pub mod stability;
pub mod tails;
pub mod verify;

pub use graph::{DualGraph, EdgeSet, PairClass, Subcurve};
pub use scalar::Degree;
pub use stability::{HalfInt, Multidegree};

/// Concrete degree scalar used throughout the crate's own pipelines.
pub type Deg = i64;

/// Hard cap on component count: subcurves are `u32` bitmasks and exhaustive
/// scans walk `2^p` subsets.
pub const MAX_COMPONENTS: usize = 30;

/// Hard cap on edge count: edge sets are `u128` bitmasks.
pub const MAX_EDGES: usize = 128;

/// Default limit on the component count for exhaustive (`2^p`) operations.
pub const DEFAULT_ENUM_LIMIT: usize = 20;

/// Limit for operations that enumerate all `2^p` subcurves of a graph.
///
/// The default allows up to [`DEFAULT_ENUM_LIMIT`] components; an explicit
/// limit can be requested up to [`MAX_COMPONENTS`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumGuard {
    max_components: usize,
}

impl EnumGuard {
    pub const DEFAULT: EnumGuard = EnumGuard {
        max_components: DEFAULT_ENUM_LIMIT,
    };

    /// A guard admitting graphs with at most `max_components` components,
    /// clamped to [`MAX_COMPONENTS`].
    pub fn new(max_components: usize) -> Self {
        EnumGuard {
            max_components: max_components.min(MAX_COMPONENTS),
        }
    }

    pub fn max_components(&self) -> usize {
        self.max_components
    }

    /// Errors with [`Error::GuardExceeded`] if `g` is too large to scan.
    pub fn admit(&self, g: &DualGraph) -> Result<()> {
        if g.components() > self.max_components {
            Err(Error::GuardExceeded {
                components: g.components(),
                limit: self.max_components,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for EnumGuard {
    fn default() -> Self {
        EnumGuard::new(DEFAULT_ENUM_LIMIT)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("a dual graph needs at least one component")]
    Empty,
    #[error("edge {edge} endpoint {endpoint} out of range 1..={components}")]
    OutOfRange {
        edge: usize,
        endpoint: usize,
        components: usize,
    },
    #[error("the dual graph is not connected")]
    Disconnected,
    #[error("at most {MAX_COMPONENTS} components supported, got {0}")]
    TooManyComponents(usize),
    #[error("at most {MAX_EDGES} edges supported, got {0}")]
    TooManyEdges(usize),
    #[error("component index {index} out of range 1..={components}")]
    BadComponent { index: usize, components: usize },
    #[error("subcurves must be nonempty proper subsets of the components")]
    BadSubcurve,
    #[error("exhaustive scan refused: {components} components exceed the limit {limit}")]
    GuardExceeded { components: usize, limit: usize },
    #[error("invalid generation parameters: {0}")]
    InvalidParams(String),
    #[error("1-tail family is not a nested chain at {at}")]
    ChainViolation { at: Subcurve },
    #[error("candidate family is not closed under meets: computed {computed} is not a candidate")]
    ClosureViolation { computed: String },
}

pub type Result<T> = std::result::Result<T, Error>;
