//! Pass/fail reports with reproducible witnesses.
//!
//! Every decision procedure in [`crate::axioms`] and [`crate::morphisms`]
//! returns a [`Report`]. Checks enumerate basis tuples in lexicographic
//! order and a failing report carries the lexicographically first violating
//! tuple together with both sides of the identity, rendered canonically, so
//! golden outputs are stable byte for byte.

use serde::{Deserialize, Serialize};
use std::fmt;

/// First failing tuple of a check, with both sides of the identity rendered
/// as canonical rational text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Concatenated basis indices of the failing tuple. Empty for
    /// non-tuple failures such as a rank deficiency.
    pub tuple: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub pass: bool,
    pub witness: Option<Witness>,
    /// Size of the tuple domain covered by the executed stages of the
    /// check. This depends only on the input dimensions, never on the
    /// scan strategy.
    pub tuples_scanned: usize,
}

impl Report {
    pub fn pass(check: &str, tuples_scanned: usize) -> Self {
        Report {
            check: check.to_owned(),
            pass: true,
            witness: None,
            tuples_scanned,
        }
    }

    pub fn fail(check: &str, tuples_scanned: usize, witness: Witness) -> Self {
        Report {
            check: check.to_owned(),
            pass: false,
            witness: Some(witness),
            tuples_scanned,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            write!(
                f,
                "check {}: pass ({} tuples)",
                self.check, self.tuples_scanned
            )
        } else {
            let w = self.witness.as_ref().expect("failing report has witness");
            write!(
                f,
                "check {}: FAIL at tuple {:?}: lhs = {}, rhs = {} ({} tuples)",
                self.check, w.tuple, w.lhs, w.rhs, self.tuples_scanned
            )
        }
    }
}
