use thiserror::Error;

/// Errors raised by field arithmetic, form manipulation and geometry queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} is outside 1..={max}", max = crate::field::MAX_DEGREE)]
    UnsupportedDegree(u32),
    #[error("modulus {modulus:#x} is not an irreducible polynomial of degree {n}")]
    ModulusReducible { n: u32, modulus: u32 },
    #[error("modulus {modulus:#x} does not have degree {n}")]
    ModulusDegree { n: u32, modulus: u32 },
    #[error("value {value} is not an element of GF(2^{n})")]
    ElementOutOfRange { value: u32, n: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("coefficient matrix is not upper triangular")]
    NotUpperTriangular,
    #[error("associated bilinear form is degenerate")]
    DegenerateBilinear,
    #[error("quadratic form has a non-trivial radical")]
    DegenerateForm,
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("partial map is not an isometry: {0}")]
    NotPartialIsometry(String),
    #[error("no isometric extension found (contract violation)")]
    ExtensionNotFound,
    #[error("U ∩ U⊥ has dimension {0}; no non-degenerate minimal embedding exists")]
    NotEmbeddable(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("geometry construction failed: {0}")]
    BuildFailed(String),
    #[error("invalid geometry: {}", .0.join("; "))]
    InvalidGeometry(Vec<String>),
    #[error("the projective point is the zero vector")]
    ZeroVector,
    #[error("Arf⟨Ω, x⟩ is not defined: x is parallel to Ω")]
    NotDefined,
    #[error("replacement Ω has Q(Ω) = 0")]
    DegenerateOmega,
    #[error("cycle is not an independent line: {0}")]
    NotIndependent(String),
    #[error("line is ideal (B(P, ℓ) = 0)")]
    IdealLine,
    #[error("no group element sends the first point to the second")]
    NotConnected,
    #[error("{0} group elements send the first point to the second")]
    AmbiguousDistance(usize),
    #[error("contract violation: {0}")]
    ContractViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
