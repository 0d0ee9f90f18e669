use thiserror::Error;

/// Errors raised by the workbench. Variants map onto the failure modes of
/// each operation; [`Error::is_internal`] marks the ones that indicate a bug
/// rather than bad input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("relation term {0:?} is not admissible (paths in relations must have length >= 2)")]
    NonAdmissible(String),
    #[error("J^{bound} != 0: path {path:?} does not reduce to zero")]
    NotFiniteDimensional { bound: usize, path: String },
    #[error("multiplication is not associative on ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("bad idempotents: {0}")]
    BadIdempotents(String),
    #[error("radical/semisimple split fails: {0}")]
    SplitFailure(String),
    #[error("non-basic algebra (semisimple part is not a product of copies of the field)")]
    NonBasicUnsupported,
    #[error("module does not satisfy the algebra relations: {0}")]
    BadModule(String),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("isomorphism search exhausted its budget")]
    BudgetExceeded,
    #[error("decomposition inconclusive: no splitting eigenvalue found in the scanned range")]
    DecompositionInconclusive,
    #[error("cutoff {cutoff} too small: need at least {needed}")]
    CutoffTooSmall { cutoff: usize, needed: usize },
    #[error("dimension overflow in stable Hom bookkeeping")]
    DimensionOverflow,
    #[error("certificate transport failed: {0}")]
    TransportFailure(String),
    #[error("non-vanishing prediction violated at n = {n} for a virtually periodic module")]
    TheoremViolation { n: i64 },
    #[error("rewriting did not terminate within {0} steps")]
    RewriteBudget(usize),
    #[error("critical pair does not resolve: {0}")]
    ConfluenceFailure(String),
    #[error("dg axiom fails: {0}")]
    AxiomFailure(String),
    #[error("crosscheck mismatch in degree {degree}: cohomology {cohomology} vs singularity Hom {sg_hom}")]
    CrosscheckMismatch { degree: i64, cohomology: usize, sg_hom: u64 },
    #[error("certificate replay failed: {0}")]
    Verification(String),
    #[error("projective dimension is finite (pd = {0}); such a module is not virtually periodic")]
    FinitePd(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Errors that signal an internal invariant breach.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::TransportFailure(_)
                | Error::TheoremViolation { .. }
                | Error::RewriteBudget(_)
                | Error::ConfluenceFailure(_)
                | Error::AxiomFailure(_)
                | Error::CrosscheckMismatch { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
