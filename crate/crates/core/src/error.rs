use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the measure algebra is empty")]
    EmptyAlgebra,

    #[error("invalid measure {value}: measures must be finite and strictly positive")]
    InvalidMeasure { value: f64 },

    #[error("weight label `{0}` is not of the form aleph_<k>")]
    InvalidLabel(String),

    #[error("a realized component must carry the label aleph_0, found {0}")]
    RealizedHigherWeight(String),

    #[error("malformed event: {0}")]
    MalformedEvent(String),

    #[error("malformed function: {0}")]
    MalformedFunction(String),

    #[error("operands live on different spaces")]
    SpaceMismatch,

    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("zero measure on {0}")]
    ZeroMeasure(String),

    #[error("map is not measure preserving: {0}")]
    NotMeasurePreserving(String),

    #[error("images of source atoms {first} and {second} overlap on target atom {shared}")]
    DisjointnessViolation {
        first: usize,
        second: usize,
        shared: usize,
    },

    #[error("source atom {column} is mapped to zero")]
    DegenerateColumn { column: usize },

    #[error("source atom {atom} has measure {source_measure} but its image has measure {image_measure}")]
    MeasureMismatch {
        atom: usize,
        source_measure: f64,
        image_measure: f64,
    },

    #[error("|U(1)| = {modulus} but -1 + 2·dλ/dμ = {expected} on {location}")]
    FormulaViolation {
        location: String,
        modulus: f64,
        expected: f64,
    },

    #[error("isometry is not surjective: {0}")]
    NotSurjective(String),

    #[error("total measures are equal; no separating value exists")]
    EqualTotals,

    #[error("{atoms} atoms exceeds the brute-force limit of {limit}")]
    TooLarge { atoms: usize, limit: usize },

    #[error("not representable: {0}")]
    Unrepresentable(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short stable name of the error variant, used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyAlgebra => "EmptyAlgebra",
            Error::InvalidMeasure { .. } => "InvalidMeasure",
            Error::InvalidLabel(_) => "InvalidLabel",
            Error::RealizedHigherWeight(_) => "RealizedHigherWeight",
            Error::MalformedEvent(_) => "MalformedEvent",
            Error::MalformedFunction(_) => "MalformedFunction",
            Error::SpaceMismatch => "SpaceMismatch",
            Error::StructureMismatch(_) => "StructureMismatch",
            Error::ZeroMeasure(_) => "ZeroMeasure",
            Error::NotMeasurePreserving(_) => "NotMeasurePreserving",
            Error::DisjointnessViolation { .. } => "DisjointnessViolation",
            Error::DegenerateColumn { .. } => "DegenerateColumn",
            Error::MeasureMismatch { .. } => "MeasureMismatch",
            Error::FormulaViolation { .. } => "FormulaViolation",
            Error::NotSurjective(_) => "NotSurjective",
            Error::EqualTotals => "EqualTotals",
            Error::TooLarge { .. } => "TooLarge",
            Error::Unrepresentable(_) => "Unrepresentable",
            Error::Parse(_) => "Parse",
        }
    }

    /// The structural property of isometries that this error witnesses as
    /// violated, if any.
    pub fn violated_property(&self) -> Option<&'static str> {
        match self {
            // An isometry cannot annihilate a nonzero function, and images of
            // disjoint functions stay disjoint.
            Error::DisjointnessViolation { .. } | Error::DegenerateColumn { .. } => {
                Some("disjointness-preservation")
            }
            Error::MeasureMismatch { .. } | Error::NotMeasurePreserving(_) => {
                Some("measure-preservation")
            }
            Error::FormulaViolation { .. } => Some("modulus-formula"),
            _ => None,
        }
    }

    /// Whether the error is a sound negative mathematical answer rather than
    /// bad input.
    pub fn is_mathematical(&self) -> bool {
        self.violated_property().is_some() || matches!(self, Error::NotSurjective(_))
    }
}
