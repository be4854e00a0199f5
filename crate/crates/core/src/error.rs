//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while building graphs, algebras,
/// representations, or crystals.
#[derive(Debug, Error)]
pub enum Error {
    /// A minimal polynomial failed the irreducibility test, so the requested
    /// quotient ring is not a field.
    #[error("not a field: {0}")]
    NotAField(String),

    /// A construction that is outside what this crate supports
    /// (e.g. extension degrees above four over the rationals).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Two scalars or matrices from different fields were combined.
    #[error("field mismatch: {0}")]
    HandleMismatch(String),

    /// Matrix dimensions do not line up for the requested operation.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A matrix that had to be invertible was singular.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// The modulated-graph description is malformed (bad adjacency, missing
    /// bimodule, inconsistent dimensions, ...).
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// A bimodule action does not satisfy the required module axioms.
    #[error("not a bimodule: {0}")]
    NotABimodule(String),

    /// A bilinear form on an edge is degenerate.
    #[error("degenerate form on arrow ({0}, {1})")]
    DegenerateForm(String, String),

    /// The matrices of a representation are inconsistent with the graph.
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    /// A lowering operator was applied to a module with empty socle (or a
    /// dual lowering operator to a module with zero head) at the vertex.
    #[error("operator undefined: {0}")]
    OperatorUndefined(String),

    /// Repeated random sampling failed to reach agreement on a generic
    /// construction.
    #[error("genericity undetermined: {0}")]
    GenericityUndetermined(String),

    /// Crystal enumeration was requested outside finite type.
    #[error("crystal scope error: {0}")]
    CrystalScope(String),

    /// A root-system computation was requested for a non-finite Cartan
    /// matrix.
    #[error("not finite type: {0}")]
    InfiniteType(String),

    /// A named preset does not exist.
    #[error("unknown preset: {0}")]
    UnknownPreset(String),

    /// Malformed input file or parameter string.
    #[error("parse error: {0}")]
    Parse(String),

    /// A counter overflowed the fixed-width integer used to hold it.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A self-test comparison against pinned reference data failed.
    #[error("check failed: {0}")]
    CheckFailed(String),

    /// Underlying I/O failure when reading or writing files.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
