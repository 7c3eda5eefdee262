use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("pole on the jω axis at ω = {omega} rad/s")]
    PoleOnAxis { omega: f64 },
    #[error("expected a degree-{expected} polynomial, got degree {actual}")]
    WrongDegree { expected: usize, actual: usize },
    #[error("coefficients must all be positive")]
    NonPositiveCoefficients,
    #[error("no sign change found in [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error("quadratic factor has real roots, Q is undefined")]
    RealQuadratic,

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("node `{0}` is not connected to any element")]
    UndeclaredNode(String),
    #[error("line {line}: duplicate input directive")]
    DuplicateInput { line: usize },
    #[error("missing .in directive")]
    MissingInput,
    #[error("missing .out directive")]
    MissingOutput,
    #[error("netlist has no ground (node 0) connection")]
    MissingGround,
    #[error("invalid netlist: {0}")]
    InvalidNetlist(String),
    #[error("circuit equations are singular")]
    Singular,
    #[error("transfer function degree {0} exceeds the supported maximum of 8")]
    DegreeOverflow(usize),
    #[error("topology mismatch: {0}")]
    TopologyMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("special case requires R1 = R3 and C1 = C3")]
    SpecialCaseViolation,
    #[error("peak lies on the boundary of [{f_lo}, {f_hi}] Hz")]
    BoundaryPeak { f_lo: f64, f_hi: f64 },

    #[error("{what} = {value} Ω is outside the trimmer range [{min}, {max}] Ω")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("{band} Hz band: {target} target is not reachable within the trimmer range")]
    Unreachable { band: f64, target: &'static str },
    #[error("{band} Hz band did not converge after {iterations} iterations")]
    NotConverged { band: f64, iterations: usize },

    #[error("channel index {0} out of range")]
    ChannelIndex(usize),
    #[error("frequencies must be positive and strictly increasing")]
    FrequencyOrder,
    #[error("no sweep rows inside [{f_lo}, {f_hi}] Hz")]
    EmptyBand { f_lo: f64, f_hi: f64 },
    #[error("invalid bank configuration: {0}")]
    InvalidBank(String),
}
