use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: u64, vertex: usize },

    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: u64, u: usize, v: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("edge ({0}, {1}) is not in the graph")]
    EdgeNotFound(usize, usize),

    #[error("n * degree must be even (n = {n}, degree = {degree})")]
    DegreeParity { n: usize, degree: usize },

    #[error("no simple {degree}-regular graph on {n} vertices (degree must be < n)")]
    InfeasibleDegree { n: usize, degree: usize },

    #[error("brute-force MaxCut refused: n = {n} exceeds the cap of {cap} vertices")]
    OracleCap { n: usize, cap: usize },

    #[error("statevector of {n} qubits exceeds the cap of {cap}")]
    QubitCap { n: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("variant mismatch: expected {expected}, got {actual}")]
    VariantMismatch { expected: String, actual: String },

    /// `coordinate` is the perturbed parameter, `None` for the base point.
    #[error("objective is not finite{} (value {value})", at_coordinate(.coordinate))]
    NonFiniteObjective { coordinate: Option<usize>, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn at_coordinate(c: &Option<usize>) -> String {
    c.map(|i| format!(" when perturbing coordinate {i}")).unwrap_or_default()
}
