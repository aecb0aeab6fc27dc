use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PauliError {
    #[error("empty Pauli operator text")]
    Empty,
    #[error("illegal character {character:?} in Pauli operator {text:?}")]
    IllegalCharacter { character: char, text: String },
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unsupported qubit count {0} (must be 1..=64)")]
    UnsupportedQubitCount(usize),
    #[error("bit pattern has bits above qubit count {n}")]
    BitsOutOfRange { n: usize },
}

/// First violated invariant of a candidate stabilizer code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeViolation {
    #[error("generator {index} ({generator}) has non-real phase")]
    ComplexPhase { index: usize, generator: String },
    #[error("generators {first} and {second} anticommute")]
    Anticommuting { first: usize, second: usize },
    #[error("generator {index} is a product of earlier generators")]
    Dependent { index: usize },
    #[error("generator {index} closes the group on -I")]
    ContainsMinusIdentity { index: usize },
}

#[derive(Debug, Error)]
pub enum CodeError {
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("an [[n,1]] code on {n} qubits needs {expected} generators, got {got}")]
    GeneratorCount { n: usize, expected: usize, got: usize },
    #[error("invalid stabilizer code: {0}")]
    Invalid(#[from] CodeViolation),
    #[error("line {line}: {source}")]
    Parse { line: usize, source: PauliError },
    #[error("code file contains no generators")]
    EmptyCodeFile,
    #[error("classification residue is not in ±G; frame does not belong to this code")]
    CorruptFrame,
}

#[derive(Debug, Error)]
pub enum EnumeratorError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("code is not |T>-axis preserving: W_X, W_Y, W_Z differ")]
    NotAxisPreserving,
    #[error("W_I(r̄) = {value} ≤ 0: projection has zero or unphysical success probability")]
    ZeroSuccess { value: String },
    #[error("r̄ = {0} outside the physical range [0, 1/√3]")]
    Unphysical(String),
    #[error("vector {index} is in the span of earlier vectors")]
    DependentVectors { index: usize },
    #[error("vector {index} has length {got}, expected {expected}")]
    VectorLength { index: usize, got: usize, expected: usize },
    #[error("illegal character {0:?} in binary vector")]
    VectorCharacter(char),
    #[error("need n-1 = {expected} vectors of length n, got {got}")]
    VectorCount { expected: usize, got: usize },
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("dense oracle supports at most {max} qubits, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("r̄ = {0} outside the physical range [0, 1/√3]")]
    Unphysical(f64),
    #[error("Π P Π matches none of the candidate logical images")]
    NoMatch,
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("search needs n ≥ 2, got {0}")]
    TooSmall(usize),
    #[error("M3 search needs an even number of generators; n - 1 = {0} is odd")]
    OddGeneratorCount(usize),
    #[error("this search mode supports n ≤ {max}, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("could not start worker pool: {0}")]
    ThreadPool(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("search interrupted")]
    Interrupted,
}
