//! Completeness for every supported logic, its variants, and the reductions
//! from provability.

use crate::bisim::{bisimilar, distinguishing_formula};
use crate::cc::cc_decide;
use crate::error::{Error, Result};
use crate::flatfive::flat_complete;
use crate::formula::{big_and, known_complete_formula, Formula, VarSet};
use crate::kripke::PointedModel;
use crate::logics::Logic;
use crate::prover::Prover;
use crate::verdict::{Provenance, Verdict};

const MODULE: &str = "complete";

/// Largest unravelling built when extending a model for D or T.
const MAX_UNRAVEL: usize = 1 << 14;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct CompletenessOptions {
    /// Attach a pair of witness models to incomplete verdicts.
    pub witnesses: bool,
}

/// Decides whether `f` is complete for `logic`.
pub fn complete(logic: Logic, f: &Formula) -> Result<Verdict> {
    complete_with(logic, f, CompletenessOptions::default())
}

pub fn complete_with(logic: Logic, f: &Formula, options: CompletenessOptions) -> Result<Verdict> {
    let prover = Prover::shared();
    if !prover.satisfiable(logic, f)? {
        return Ok(Verdict::complete(Provenance::Unsat));
    }
    let vars = f.vars();
    let mut verdict = if logic.has_5() {
        flat_complete(logic, f)?
    } else if !logic.has_4() && logic.has_d() {
        if vars.is_empty() {
            Verdict::complete(Provenance::Triviality)
        } else {
            serial_incompleteness(prover, logic, f)?
        }
    } else if logic.has_d() && vars.is_empty() {
        Verdict::complete(Provenance::Triviality)
    } else {
        cc_decide(logic, f)?
    };
    if let Some(psi) = &verdict.psi {
        confirm(prover, logic, f, psi)?;
        if options.witnesses {
            if verdict.witnesses.is_none() {
                verdict.witnesses = Some(witness_models(prover, logic, f, psi)?);
            }
            let (m1, m2) = verdict.witnesses.as_ref().unwrap();
            if !(m1.check(f) && m2.check(f)) || bisimilar(m1, m2, &vars) {
                return Err(Error::Internal(format!("bad witnesses for {f} in {logic}")));
            }
        } else {
            verdict.witnesses = None;
        }
    }
    Ok(verdict)
}

/// Whether `f` is both satisfiable and complete for `logic`.
pub fn satisfiable_and_complete(logic: Logic, f: &Formula) -> Result<bool> {
    Ok(Prover::shared().satisfiable(logic, f)? && complete(logic, f)?.is_complete())
}

/// Completeness of `f` given a model of it. On an incomplete verdict the
/// given model is one of the two witnesses.
pub fn complete_wrt_model(logic: Logic, model: &PointedModel, f: &Formula) -> Result<Verdict> {
    if !model.is_model_for(logic) {
        return Err(Error::Precondition(format!(
            "the model is not a frame for {logic}"
        )));
    }
    if !model.check(f) {
        return Err(Error::Precondition(format!(
            "the model does not satisfy {f}"
        )));
    }
    let mut verdict = complete(logic, f)?;
    if let Some(psi) = &verdict.psi {
        let prover = Prover::shared();
        let other = |with: Formula| -> Result<PointedModel> {
            prover
                .model(logic, [f, &with])?
                .ok_or_else(|| Error::Internal(format!("no model of {f} & {with}")))
        };
        verdict.witnesses = Some(if model.check(psi) {
            (model.clone(), other(psi.negate())?)
        } else {
            (other(psi.clone())?, model.clone())
        });
    }
    Ok(verdict)
}

/// Maps `f` to a formula that is complete for `logic` exactly when `f` is
/// provable in `logic`.
pub fn hardness_reduction(logic: Logic, f: &Formula) -> Result<Formula> {
    let vars = reduction_vars(f)?;
    if logic.has_d() && !logic.has_4() && !logic.has_5() {
        return Err(Error::Unsupported(format!(
            "completeness for {logic} is decided by a variable check"
        )));
    }
    let target = known_complete_formula(logic, &vars)
        .ok_or_else(|| Error::Internal(format!("no complete formula for {logic}")))?;
    let base = base_model(logic, &vars);
    if !base.check(&target) {
        return Err(Error::Internal(format!("base model misses {target}")));
    }
    Ok(if base.check(f) {
        f.implies(&target)
    } else {
        all_true(&vars)
    })
}

/// `P & []P & ... & []^depth P` for the conjunction `P` of `vars`.
pub fn depth_guard(vars: &VarSet, depth: usize) -> Formula {
    let all = all_true(vars);
    big_and((0..=depth).map(|i| all.boxes(i)))
}

/// Maps `f` to a formula that is complete up to its depth exactly when `f`
/// is provable. The guard depth is raised to `md(f)` when `depth` is lower.
pub fn reduction_up_to_depth(logic: Logic, f: &Formula, depth: usize) -> Result<Formula> {
    let vars = reduction_vars(f)?;
    let serial_only = logic.has_d() && !logic.has_4() && !logic.has_5();
    let target = if serial_only {
        depth_guard(&vars, depth.max(f.modal_depth()))
    } else {
        known_complete_formula(logic, &vars)
            .ok_or_else(|| Error::Internal(format!("no complete formula for {logic}")))?
    };
    let base = base_model(logic, &vars);
    Ok(if base.check(f) {
        f.implies(&target)
    } else {
        Formula::and(all_true(&vars), Formula::boxed(Formula::Top))
    })
}

fn reduction_vars(f: &Formula) -> Result<VarSet> {
    let vars = f.vars();
    if vars.is_empty() {
        return Err(Error::Precondition(
            "the reduction needs at least one variable".into(),
        ));
    }
    Ok(vars)
}

fn all_true(vars: &VarSet) -> Formula {
    big_and(vars.iter().map(Formula::var))
}

/// One state where every variable holds: a dead end for K and K4, a loop
/// otherwise.
fn base_model(logic: Logic, vars: &VarSet) -> PointedModel {
    let succ = if logic.has_d() || logic.has_5() {
        vec![vec![0]]
    } else {
        vec![vec![]]
    };
    PointedModel::from_parts(succ, vec![vars.clone()], 0)
}

fn confirm(prover: &Prover, logic: Logic, f: &Formula, psi: &Formula) -> Result<()> {
    let neg = psi.negate();
    if prover.consistent(logic, [f, psi])? && prover.consistent(logic, [f, &neg])? {
        Ok(())
    } else {
        Err(Error::Internal(format!(
            "{psi} does not split {f} in {logic}"
        )))
    }
}

fn witness_models(
    prover: &Prover,
    logic: Logic,
    f: &Formula,
    psi: &Formula,
) -> Result<(PointedModel, PointedModel)> {
    let neg = psi.negate();
    let m1 = prover.model(logic, [f, psi])?;
    let m2 = prover.model(logic, [f, &neg])?;
    match (m1, m2) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::Internal(format!(
            "{psi} does not split {f} in {logic}"
        ))),
    }
}

/// For D and T with variables: two models of `f` agreeing up to its depth
/// and then ending in a loop where every variable is false, or every
/// variable is true.
fn serial_incompleteness(prover: &Prover, logic: Logic, f: &Formula) -> Result<Verdict> {
    let m = prover
        .model(logic, [f])?
        .ok_or_else(|| Error::Internal(format!("no model of satisfiable {f}")))?;
    let vars = f.vars();
    let low = extend_below(&m, f.modal_depth(), logic.has_t(), VarSet::new())?;
    let high = extend_below(&m, f.modal_depth(), logic.has_t(), vars.clone())?;
    let psi = distinguishing_formula(&low, &high, &vars)
        .ok_or_else(|| Error::Internal(format!("extensions of a model of {f} coincide")))?;
    let (m1, m2) = if low.check(&psi) {
        (low, high)
    } else {
        (high, low)
    };
    let mut verdict = Verdict::incomplete(psi, Provenance::Triviality);
    verdict.witnesses = Some((m1, m2));
    Ok(verdict)
}

/// The unravelling of `m` to `depth`, with every node at that depth pointing
/// to one looping state valued `tail`.
fn extend_below(
    m: &PointedModel,
    depth: usize,
    reflexive: bool,
    tail: VarSet,
) -> Result<PointedModel> {
    let mut origin = vec![m.point()];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new()];
    let mut layer = vec![0usize];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &node in &layer {
            for &t in m.successors(origin[node]) {
                let child = origin.len();
                origin.push(t);
                succ.push(Vec::new());
                succ[node].push(child);
                next.push(child);
            }
            if origin.len() > MAX_UNRAVEL {
                return Err(Error::cap(
                    MODULE,
                    format!("unravelling exceeds {MAX_UNRAVEL} nodes"),
                ));
            }
        }
        layer = next;
    }
    let sink = origin.len();
    for &node in &layer {
        succ[node].push(sink);
    }
    succ.push(vec![sink]);
    if reflexive {
        for (s, out) in succ.iter_mut().enumerate() {
            out.push(s);
        }
    }
    let mut val: Vec<VarSet> = origin.iter().map(|&s| m.valuation(s).clone()).collect();
    val.push(tail);
    Ok(PointedModel::from_parts(succ, val, 0))
}
