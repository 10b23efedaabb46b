use serde::Serialize;
use thiserror::Error;

/// A single failed check, with enough structure to be emitted as JSON.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
    pub witness: serde_json::Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Splitting,
    ZeroColorValuation,
    ConeNotGenerated,
    InteriorMissesValuationCone,
    ColorNotInCone,
    ConeNotPointed,
    MissingFace,
    InteriorOverlap,
    FaceCriterion,
    TailMismatch,
    WeylStabilizer,
    /// A check that could not be carried out with the data supplied.
    Unverifiable,
}

/// Outcome of a validation: `violations` is empty iff the object passed.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(
        &mut self,
        kind: ViolationKind,
        message: impl Into<String>,
        witness: serde_json::Value,
    ) {
        self.violations.push(Violation {
            kind,
            message: message.into(),
            witness,
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.violations.extend(other.violations);
    }

    pub fn into_result(self) -> Result<(), Error> {
        if self.ok() {
            Ok(())
        } else {
            Err(Error::Validation(self))
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("rank mismatch in {context}: expected {expected}, found {found}")]
    RankMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("the zero vector has no primitive generator")]
    ZeroVector,
    #[error("operation is undefined on the empty polyhedron")]
    EmptyPolyhedron,
    #[error("unbounded evaluation: functional is not in the dual of the tail cone")]
    UnboundedEvaluation,
    #[error("support cone of an image fan must be pointed")]
    NonPointedSupport,
    #[error("image of the fan is not contained in the support cone")]
    ImageOutsideSupport,
    #[error("unknown color `{0}`")]
    UnknownColor(String),
    #[error("colored fan is not toroidal; use the general construction")]
    NotToroidal,
    #[error("weyl group exceeds the configured bound of {0} elements")]
    WeylGroupTooLarge(usize),
    #[error("unsupported cartan type `{0}`")]
    UnsupportedCartanType(String),
    #[error("color action table has no entry for ({word}, {color})")]
    MissingColorAction { word: String, color: String },
    #[error("no divisor correspondence supplied for crosscheck")]
    MissingCorrespondence,
    #[error("validation failed: {}", summary(.0))]
    Validation(Report),
    #[error("schema error: {0}")]
    Schema(String),
}

fn summary(report: &Report) -> String {
    report
        .violations
        .iter()
        .map(|v| v.message.as_str())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
