use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operands live in different algebra signatures")]
    SignatureMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator index {0} out of range")]
    GeneratorOutOfRange(usize),
    #[error("duplicate generator label `{0}`")]
    DuplicateLabel(String),
    #[error("signature has {labels} labels but {metric} metric entries")]
    MetricLength { labels: usize, metric: usize },
    #[error("{0} generators exceed the capacity of {max}", max = crate::MAX_GENERATORS)]
    CapacityExceeded(usize),
    #[error("malformed blade `{0}`")]
    MalformedBlade(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("expected a homogeneous multivector of grade {expected:?}")]
    NotHomogeneous { expected: Option<usize> },
    #[error("operation requires the three-dimensional Euclidean algebra")]
    NotEuclidean3,
    #[error("generator sets overlap")]
    OverlappingSets,
    #[error("generator sets have different sizes ({0} vs {1})")]
    SetSizeMismatch(usize, usize),
    #[error("multivector has support outside the substituted generator set")]
    OutsideSubstitution,
    #[error("substitution matrix is singular")]
    SingularMatrix,
    #[error("substitution matrix must be {expected}x{expected}, got {rows}x{cols}")]
    MatrixShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("image of a generator must be grade 1 in the target signature")]
    NonLinearImage,
    #[error("Gaussian pair integral needs 2 <= N <= {max}, got {n}", max = crate::berezin::MAX_GAUSS_SETS)]
    GaussianRange { n: usize },
    #[error("exponent has a scalar part and is not nilpotent")]
    NotNilpotent,
    #[error("mass must be nonzero")]
    ZeroMass,
    #[error("degenerate spin Hamiltonian: {0}")]
    DegenerateHamiltonian(String),
    #[error("the signature has no central pseudoscalar squaring to -1")]
    NoPseudoscalarUnit,
    #[error("bivector is not normalized (B*B = {0} instead of -1)")]
    NotNormalizedBivector(String),
    #[error("spinor must be an even multivector with real coefficients")]
    NotSpinor,
    #[error("spinor is not normalized")]
    NotNormalizedSpinor,
    #[error("ladder operators are defined for complex bivector Hamiltonians only")]
    UnsupportedHamiltonian,
    #[error("element lies outside the domain of the isomorphism")]
    OutsideDomain,
    #[error("star exponential has odd components; the Grassmann measure would not commute with it")]
    OddPropagator,
    #[error("two evaluation routes disagree by {0:e}")]
    RouteMismatch(f64),
    #[error("slice count must be at least 1")]
    NoSlices,
}
