//! Three-valued membership verdicts with certificates.

use serde::Serialize;

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Member,
    NonMember,
    Inconclusive,
}

/// A membership or class result. `Member` and `NonMember` are only issued
/// with a certificate: an exact value, an analytic classification, or a
/// divergence witness. Probe-bound-only evidence stays `Inconclusive` and
/// carries its trace.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    /// Exact norm or sup value backing the verdict, when rational.
    pub value: Option<Scalar>,
    /// The rule, classification, or witness behind the verdict.
    pub certificate: String,
    /// Partial-sum or sup trace as (index, value) pairs.
    pub trace: Vec<(u64, Scalar)>,
}

impl Verdict {
    pub fn member_with_value(value: Scalar, certificate: impl Into<String>) -> Self {
        Verdict {
            status: Status::Member,
            value: Some(value),
            certificate: certificate.into(),
            trace: Vec::new(),
        }
    }

    pub fn member_classified(certificate: impl Into<String>) -> Self {
        Verdict {
            status: Status::Member,
            value: None,
            certificate: certificate.into(),
            trace: Vec::new(),
        }
    }

    pub fn non_member(certificate: impl Into<String>) -> Self {
        Verdict {
            status: Status::NonMember,
            value: None,
            certificate: certificate.into(),
            trace: Vec::new(),
        }
    }

    pub fn inconclusive(note: impl Into<String>, trace: Vec<(u64, Scalar)>) -> Self {
        Verdict {
            status: Status::Inconclusive,
            value: None,
            certificate: note.into(),
            trace,
        }
    }

    pub fn with_trace(mut self, trace: Vec<(u64, Scalar)>) -> Self {
        self.trace = trace;
        self
    }

    pub fn with_context(mut self, note: &str) -> Self {
        self.certificate = format!("{note}; {}", self.certificate);
        self
    }

    pub fn is_member(&self) -> bool {
        self.status == Status::Member
    }

    pub fn decided(&self) -> bool {
        self.status != Status::Inconclusive
    }
}
