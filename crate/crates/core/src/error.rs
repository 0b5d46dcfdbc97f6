use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::model::TrialKey;
use crate::variants::ModelKind;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A measurement outside its domain (non-positive length, time, speed...).
    Domain {
        field: &'static str,
        value: f64,
    },
    /// A domain error raised while deriving one trial.
    Trial {
        key: TrialKey,
        source: Box<Error>,
    },
    /// An empty sequence where at least one value is required.
    Empty {
        what: &'static str,
    },
    TooFewPoints {
        needed: usize,
        got: usize,
    },
    /// The regression design is singular; `column` names the offending predictor.
    DegenerateDesign {
        column: &'static str,
    },
    UndefinedCorrelation {
        axis: &'static str,
    },
    IncompatibleTrial {
        model: ModelKind,
        expected: &'static str,
    },
    UnknownModel(String),
    UnknownShot(String),
    UnknownFigure(u8),
    /// A fit or aggregate failed for a named group of trials.
    Group {
        label: String,
        source: Box<Error>,
    },
    /// An option combination that cannot produce an analysis.
    Usage(String),
}

impl Error {
    pub(crate) fn domain(field: &'static str, value: f64) -> Self {
        Error::Domain { field, value }
    }

    pub(crate) fn in_group(self, label: impl Into<String>) -> Self {
        Error::Group {
            label: label.into(),
            source: Box::new(self),
        }
    }

    /// True for errors caused by the data rather than by how the library was called.
    pub fn is_data_error(&self) -> bool {
        match self {
            Error::Domain { .. }
            | Error::DegenerateDesign { .. }
            | Error::UndefinedCorrelation { .. }
            | Error::TooFewPoints { .. }
            | Error::Empty { .. } => true,
            Error::Trial { .. } => true,
            Error::Group { source, .. } => source.is_data_error(),
            _ => false,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { field, value } => {
                write!(f, "{field} must be positive, got {value}")
            }
            Error::Trial { key, source } => write!(f, "trial {key}: {source}"),
            Error::Empty { what } => write!(f, "{what} is empty"),
            Error::TooFewPoints { needed, got } => {
                write!(f, "need at least {needed} points, got {got}")
            }
            Error::DegenerateDesign { column } => {
                write!(f, "degenerate design: column `{column}` is constant or collinear")
            }
            Error::UndefinedCorrelation { axis } => {
                write!(f, "correlation undefined: {axis} values are constant")
            }
            Error::IncompatibleTrial { model, expected } => {
                write!(f, "model `{}` requires {expected}", model.name())
            }
            Error::UnknownModel(name) => write!(
                f,
                "unknown model `{name}` (expected one of: squash, fitts, mackenzie, welford, steering)"
            ),
            Error::UnknownShot(label) => {
                write!(f, "unknown shot `{label}` (expected drive, drop, lob or boast)")
            }
            Error::UnknownFigure(n) => write!(f, "unknown figure {n} (expected 4 to 8)"),
            Error::Group { label, source } => write!(f, "{label}: {source}"),
            Error::Usage(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::Trial { source, .. } | Error::Group { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}
