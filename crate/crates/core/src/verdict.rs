use serde::{Deserialize, Serialize};

use crate::formula::Formula;
use crate::kripke::PointedModel;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Complete,
    Incomplete,
}

/// Which part of the decision produced a verdict.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// The logic's completeness problem is trivial for this variable set.
    Triviality,
    /// Canonical flat shapes (logics with axiom 5).
    Flat,
    /// Search over maximal states and views (K, K4, D4, S4).
    Cc,
    /// The formula is unsatisfiable and therefore vacuously complete.
    Unsat,
}

/// The answer to a completeness query.
///
/// An incomplete verdict carries `psi` such that both `f & psi` and
/// `f & ~psi` are satisfiable. When witnesses are attached, the first model
/// satisfies `f & psi` and the second `f & ~psi`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Verdict {
    #[serde(rename = "verdict")]
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Formula>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<(PointedModel, PointedModel)>,
    pub provenance: Provenance,
}

impl Verdict {
    pub fn complete(provenance: Provenance) -> Verdict {
        Verdict {
            outcome: Outcome::Complete,
            psi: None,
            witnesses: None,
            provenance,
        }
    }

    pub fn incomplete(psi: Formula, provenance: Provenance) -> Verdict {
        Verdict {
            outcome: Outcome::Incomplete,
            psi: Some(psi),
            witnesses: None,
            provenance,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.outcome == Outcome::Complete
    }
}
