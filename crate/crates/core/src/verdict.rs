use serde::{Deserialize, Serialize};

use crate::rational::{is_negation, Rational};

/// Outcome of checking a printed closed form against the exact oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Confirmed,
    ConfirmedUpToSign,
    CorrectedFactor,
    NotApplicable,
    Failed,
}

impl Verdict {
    /// Equal → confirmed, negated → up to sign, anything else → failed.
    pub fn compare(oracle: &Rational, printed: &Rational) -> Self {
        if oracle == printed {
            Verdict::Confirmed
        } else if is_negation(oracle, printed) {
            Verdict::ConfirmedUpToSign
        } else {
            Verdict::Failed
        }
    }

    /// Verdict for a printed form that has a corrected counterpart.
    pub fn with_correction(oracle: &Rational, printed: &Rational, corrected: &Rational) -> Self {
        if corrected != oracle {
            Verdict::Failed
        } else if printed == oracle {
            Verdict::Confirmed
        } else {
            Verdict::CorrectedFactor
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Confirmed => "CONFIRMED",
            Verdict::ConfirmedUpToSign => "CONFIRMED_UP_TO_SIGN",
            Verdict::CorrectedFactor => "CORRECTED_FACTOR",
            Verdict::NotApplicable => "NOT_APPLICABLE",
            Verdict::Failed => "FAILED",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
