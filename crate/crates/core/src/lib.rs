//! Satisfiability, provability and completeness of modal formulas for the
//! normal modal logics between K and S5.
//!
//! A formula is *complete* for a logic when it decides every formula over its
//! own variables. Logics with axiom 5 are handled through canonical flat
//! models ([`flatfive`]); K, K4, D4 and S4 go through a search over maximal
//! states and views ([`cc`]); D and T are settled by a variable check. The
//! [`oracle`] module holds brute-force model enumeration used to cross-check
//! everything else.

pub mod bisim;
pub mod cc;
pub mod complete;
pub mod error;
pub mod flatfive;
pub mod formula;
pub mod kripke;
pub mod logics;
pub mod normalform;
pub mod oracle;
pub mod prover;
pub mod verdict;

pub use complete::{complete, CompletenessOptions};
pub use error::{Error, Result};
pub use formula::{big_and, big_or, parse, Formula, VarSet};
pub use kripke::PointedModel;
pub use logics::Logic;
pub use verdict::{Outcome, Provenance, Verdict};
