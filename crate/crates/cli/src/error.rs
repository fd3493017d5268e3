use chgeom::GeomError;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input.
    #[error("{0}")]
    Input(String),
    /// A parameter outside the preconditions of the requested operation.
    #[error("{0}")]
    Spec(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 input/parse, 3 degenerate geometry, 4 spec violation, 5 budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Spec(_) => 4,
            CliError::Geom(e) => match e {
                GeomError::Dimension { .. }
                | GeomError::InvalidPoint(_)
                | GeomError::NotIsometry { .. }
                | GeomError::NonUnitary { .. } => 2,
                GeomError::Domain(_)
                | GeomError::Borderline { .. }
                | GeomError::DegenerateInput(_)
                | GeomError::Pole
                | GeomError::PointAtInfinity
                | GeomError::DegenerateCenter { .. }
                | GeomError::DegeneratePointSet(_)
                | GeomError::BranchBoundary
                | GeomError::CoincidentPoints => 3,
                GeomError::InvalidPacking { .. }
                | GeomError::CertificateFailed { .. }
                | GeomError::Invariance(_)
                | GeomError::InvalidSpec(_) => 4,
                GeomError::Budget { .. } => 5,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Spec(_) => "spec-violation",
            CliError::Io(_) => "io",
            CliError::Geom(e) => match e {
                GeomError::Dimension { .. } => "dimension",
                GeomError::InvalidPoint(_) => "invalid-point",
                GeomError::NotIsometry { .. } => "not-isometry",
                GeomError::NonUnitary { .. } => "non-unitary",
                GeomError::Domain(_) => "domain",
                GeomError::Borderline { .. } => "borderline",
                GeomError::DegenerateInput(_) => "degenerate-input",
                GeomError::Pole => "pole",
                GeomError::PointAtInfinity => "point-at-infinity",
                GeomError::InvalidPacking { .. } => "invalid-packing",
                GeomError::CertificateFailed { .. } => "certificate-failed",
                GeomError::Budget { .. } => "budget",
                GeomError::DegenerateCenter { .. } => "degenerate-center",
                GeomError::DegeneratePointSet(_) => "degenerate-point-set",
                GeomError::BranchBoundary => "branch-boundary",
                GeomError::Invariance(_) => "invariance",
                GeomError::InvalidSpec(_) => "invalid-spec",
                GeomError::CoincidentPoints => "coincident-points",
            },
        }
    }

    /// Machine-readable error object for standard error.
    pub fn to_json(&self) -> Value {
        let mut body = json!({
            "kind": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        let extra = match self {
            CliError::Geom(GeomError::NotIsometry { defect }) => json!({ "form_defect": defect }),
            CliError::Geom(GeomError::Budget { budget, completed_radius }) => {
                json!({ "budget": budget, "completed_radius": completed_radius })
            }
            CliError::Geom(GeomError::CertificateFailed { i, j, margin }) => json!({ "pair": [i, j], "margin": margin }),
            CliError::Geom(GeomError::InvalidPacking { i, j, distance, radii_sum }) => {
                json!({ "pair": [i, j], "distance": distance, "radii_sum": radii_sum })
            }
            CliError::Geom(GeomError::DegenerateCenter { word }) => json!({ "word": word }),
            _ => Value::Null,
        };
        if let (Value::Object(b), Value::Object(e)) = (&mut body, extra) {
            b.extend(e);
        }
        json!({ "error": body })
    }
}

pub type CliResult<T> = Result<T, CliError>;
