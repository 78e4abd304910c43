use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index-set mismatch")]
    IndexSetMismatch,
    #[error("empty family")]
    EmptyFamily,
    #[error("index set must contain at least one label")]
    EmptyIndexSet,
    #[error("index set holds {0} labels; at most 64 are supported")]
    IndexSetTooLarge(usize),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("alphabet of `{0}` is empty")]
    EmptyAlphabet(String),
    #[error("symbol `{symbol}` is not in the alphabet of `{label}`")]
    UnknownSymbol { label: String, symbol: String },
    #[error("symbol index {symbol} out of range for `{label}`")]
    SymbolOutOfRange { label: String, symbol: usize },
    #[error("state-count overflow: {0} states exceed the limit of {1}")]
    StateCountOverflow(u128, u128),
    #[error("restriction outside domain")]
    RestrictionOutsideDomain,
    #[error("overlapping glue")]
    OverlappingGlue,
    #[error("partial state assigns {found} symbols to a domain of size {expected}")]
    AssignmentLength { expected: usize, found: usize },

    #[error("table has {found} values, state space has {expected} states")]
    TableLength { expected: usize, found: usize },
    #[error("not strictly positive: value {value} at position {position}")]
    NotStrictlyPositive { position: usize, value: f64 },
    #[error("input not in G_a: residual={residual:.5e}")]
    NotInCylinder { residual: f64 },
    #[error("table is not factorisable over the covering: residual={residual:.5e}")]
    NotFactorisable { residual: f64 },
    #[error("factor systems disagree: max rel err={0:.5e}")]
    FactorSystemsDisagree(f64),
    #[error("factor domain does not match covering: {0}")]
    DomainMismatch(String),
    #[error("exact minimal factorization limited to n≤5; use graphical_hull")]
    MinimalFactorizationTooLarge(usize),

    #[error("vertices adjacent")]
    VerticesAdjacent,
    #[error("a pair covering needs two distinct vertices")]
    SameVertex,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("graph has {0} vertices; clique enumeration is limited to 24")]
    TooManyVertices(usize),

    #[error("distribution sums to {0}, not 1")]
    NotNormalized(f64),
    #[error("variable groups overlap")]
    OverlappingGroups,
    #[error("expected {expected} variables, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("suite size {requested} outside the supported range 1..={max}")]
    SuiteSize { requested: usize, max: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
