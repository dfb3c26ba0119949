use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ModlieError {
    #[error("invalid root system: {0}")]
    InvalidRootSystem(String),
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
    #[error("element is not nilpotent")]
    NotNilpotent,
    #[error("element is not semisimple")]
    NotSemisimple,
    #[error("algebra has a nonzero centre; p-th powers are not determined")]
    NonzeroCenter,
    #[error("subspace is not a subalgebra")]
    NotSubalgebra,
    #[error("element is not contained in the given subalgebra")]
    NotContained,
    #[error("nilpotency bound violated: measured nildegree {0}")]
    NilpotencyBound(usize),
    #[error("divided power {index} is not integral on the lattice (denominator {denom})")]
    Integrality { index: usize, denom: String },
    #[error("no sl2-triple through the given element")]
    NotSl2Embeddable,
    #[error("not classifiable as a transitive subalgebra (dim {0})")]
    NotTransitiveClassifiable(usize),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}
