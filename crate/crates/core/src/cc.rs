//! Completeness for K, K4, D4 and S4 by a depth-first search over maximal
//! states.
//!
//! A formula is incomplete when it has two maximal states, or when some
//! sequence of forced successors ends at a state `a` with a legitimate child
//! `c` such that `th(a) -> <>th(c)` is not provable. The search explores every
//! such sequence up to `size(f) + 2` steps.
//!
//! For K the states are additionally bounded in depth: the root lives in the
//! closure of the whole formula and each step down drops one level of modal
//! depth, so a branch that reaches depth zero always finds an unforced child.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::formula::{big_and, Formula};
use crate::logics::Logic;
use crate::prover::Prover;
use crate::verdict::{Provenance, Verdict};

const MODULE: &str = "cc";

/// A maximally consistent subset of (part of) the closure of the input.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MaximalState {
    members: BTreeSet<Formula>,
}

impl MaximalState {
    pub fn members(&self) -> &BTreeSet<Formula> {
        &self.members
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.members.contains(f)
    }

    /// The `<>`-formulas among the members.
    pub fn diamonds(&self) -> BTreeSet<&Formula> {
        self.members
            .iter()
            .filter(|f| matches!(f, Formula::Diamond(_)))
            .collect()
    }

    /// The `[]`-formulas among the members.
    pub fn boxes(&self) -> BTreeSet<&Formula> {
        self.members
            .iter()
            .filter(|f| matches!(f, Formula::Box(_)))
            .collect()
    }

    /// The conjunction of all members.
    pub fn theory(&self) -> Formula {
        big_and(self.members.iter().cloned())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CcOptions {
    pub max_closure: usize,
}

impl Default for CcOptions {
    fn default() -> Self {
        CcOptions { max_closure: 24 }
    }
}

/// How an incomplete verdict was reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CcTrace {
    /// Two distinct maximal states contain the input.
    Initial(MaximalState, MaximalState),
    /// A chain of forced states ending in a parent with an unforced child.
    Branch {
        path: Vec<MaximalState>,
        child: MaximalState,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CcStats {
    pub views: usize,
    pub provability_checks: usize,
    pub deepest: usize,
}

#[derive(Clone, Debug)]
pub struct CcRun {
    pub verdict: Verdict,
    pub trace: Option<CcTrace>,
    pub stats: CcStats,
}

fn check_logic(logic: Logic) -> Result<()> {
    if logic.has_5() || (!logic.has_4() && logic.has_d()) {
        return Err(Error::Unsupported(format!(
            "the maximal-state search handles k, k4, d4 and s4, not {logic}"
        )));
    }
    Ok(())
}

/// Every maximal state over the closure of `f` (for K with a depth budget,
/// over the closure restricted to that depth) that contains `must_contain`.
///
/// States are produced in a fixed order: assignments to variables and boxes
/// are enumerated in canonical formula order, true before false.
pub fn maximal_states(
    prover: &Prover,
    logic: Logic,
    f: &Formula,
    must_contain: &BTreeSet<Formula>,
    depth_budget: Option<usize>,
) -> Result<Vec<MaximalState>> {
    states_up_to(prover, logic, f, must_contain, depth_budget, usize::MAX)
}

fn universe(f: &Formula, depth_budget: Option<usize>) -> BTreeSet<Formula> {
    match depth_budget {
        Some(d) => f.closure_at_depth(d),
        None => f.closure(),
    }
}

fn states_up_to(
    prover: &Prover,
    logic: Logic,
    f: &Formula,
    must_contain: &BTreeSet<Formula>,
    depth_budget: Option<usize>,
    limit: usize,
) -> Result<Vec<MaximalState>> {
    let universe = universe(f, depth_budget);
    if !must_contain.is_subset(&universe) {
        return Ok(Vec::new());
    }
    let atoms: Vec<&Formula> = universe
        .iter()
        .filter(|g| matches!(g, Formula::Var(_) | Formula::Box(_)))
        .collect();
    if atoms.len() >= 32 {
        return Err(Error::cap(
            MODULE,
            format!("{} atoms in the closure", atoms.len()),
        ));
    }
    let mut out = Vec::new();
    for assignment in 0u64..1 << atoms.len() {
        let truth: HashMap<&Formula, bool> = atoms
            .iter()
            .enumerate()
            .map(|(i, g)| (*g, assignment >> (atoms.len() - 1 - i) & 1 == 0))
            .collect();
        let mut memo: HashMap<&Formula, bool> = HashMap::new();
        let mut members = BTreeSet::new();
        for g in &universe {
            if value(g, &truth, &mut memo) {
                members.insert(g.clone());
            }
        }
        if !must_contain.is_subset(&members) {
            continue;
        }
        if logic.has_t()
            && members.iter().any(|g| match g {
                Formula::Box(c) => !members.contains(c.as_ref()),
                _ => false,
            })
        {
            continue;
        }
        if prover.consistent(logic, &members)? {
            out.push(MaximalState { members });
            if out.len() >= limit {
                break;
            }
        }
    }
    Ok(out)
}

fn value<'a>(
    g: &'a Formula,
    atoms: &HashMap<&'a Formula, bool>,
    memo: &mut HashMap<&'a Formula, bool>,
) -> bool {
    if let Some(&v) = atoms.get(g) {
        return v;
    }
    if let Some(&v) = memo.get(g) {
        return v;
    }
    let v = match g {
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::NegVar(p) => !atoms[&Formula::Var(p.clone())],
        Formula::And(l, r) => value(l, atoms, memo) && value(r, atoms, memo),
        Formula::Or(l, r) => value(l, atoms, memo) || value(r, atoms, memo),
        Formula::Diamond(c) => !atoms[&Formula::boxed(c.negate())],
        Formula::Var(_) | Formula::Box(_) => unreachable!("atoms are assigned"),
    };
    memo.insert(g, v);
    v
}

/// The states that may serve as a child of `parent` in a view: consistent,
/// maximal, containing `psi` for every `[]psi` in the parent and, for
/// transitive logics, `[]psi` itself. For K, children live one level of modal
/// depth below the parent's budget (never below zero).
pub fn candidate_children(
    prover: &Prover,
    logic: Logic,
    parent: &MaximalState,
    f: &Formula,
    parent_budget: Option<usize>,
) -> Result<Vec<MaximalState>> {
    let mut must = BTreeSet::new();
    for b in parent.boxes() {
        if let Formula::Box(c) = b {
            must.insert(c.as_ref().clone());
            if logic.has_4() {
                must.insert(b.clone());
            }
        }
    }
    let budget = parent_budget.map(|b| b.saturating_sub(1));
    maximal_states(prover, logic, f, &must, budget)
}

/// Decides completeness of `f` for K, K4, D4 or S4.
pub fn cc_decide(logic: Logic, f: &Formula) -> Result<Verdict> {
    Ok(cc_run(Prover::shared(), logic, f, CcOptions::default())?.verdict)
}

pub fn cc_run(prover: &Prover, logic: Logic, f: &Formula, options: CcOptions) -> Result<CcRun> {
    check_logic(logic)?;
    let closure = f.closure().len();
    if closure > options.max_closure {
        return Err(Error::cap(
            MODULE,
            format!(
                "closure has {closure} members, limit {}",
                options.max_closure
            ),
        ));
    }
    let root_budget = (logic == Logic::K).then(|| f.modal_depth());
    let must = BTreeSet::from([f.clone()]);
    let initial = states_up_to(prover, logic, f, &must, root_budget, 2)?;
    let mut search = Search {
        prover,
        logic,
        f,
        rejected: HashMap::new(),
        stats: CcStats::default(),
    };
    match initial.as_slice() {
        [] => Ok(CcRun {
            verdict: Verdict::complete(Provenance::Unsat),
            trace: None,
            stats: search.stats,
        }),
        [a, b] => {
            let trace = CcTrace::Initial(a.clone(), b.clone());
            let psi = incompleteness_witness(prover, logic, f, &trace)?;
            Ok(CcRun {
                verdict: Verdict::incomplete(psi, Provenance::Cc),
                trace: Some(trace),
                stats: search.stats,
            })
        }
        [a] => {
            let steps = f.size() + 2;
            let mut path = vec![a.clone()];
            match search.explore(&mut path, root_budget, steps)? {
                Some(child) => {
                    debug_assert!(path.len() <= steps + 1);
                    let trace = CcTrace::Branch { path, child };
                    let psi = incompleteness_witness(prover, logic, f, &trace)?;
                    Ok(CcRun {
                        verdict: Verdict::incomplete(psi, Provenance::Cc),
                        trace: Some(trace),
                        stats: search.stats,
                    })
                }
                None => Ok(CcRun {
                    verdict: Verdict::complete(Provenance::Cc),
                    trace: None,
                    stats: search.stats,
                }),
            }
        }
        _ => unreachable!("at most two initial states are requested"),
    }
}

struct Search<'a> {
    prover: &'a Prover,
    logic: Logic,
    f: &'a Formula,
    /// Largest step allowance for which a (state, budget) pair was rejected.
    rejected: HashMap<(MaximalState, Option<usize>), usize>,
    stats: CcStats,
}

impl Search<'_> {
    /// Explores views below the last state of `path` with `steps` moves left.
    /// On acceptance returns the unforced child and leaves the accepting
    /// chain in `path`.
    fn explore(
        &mut self,
        path: &mut Vec<MaximalState>,
        budget: Option<usize>,
        steps: usize,
    ) -> Result<Option<MaximalState>> {
        let a = path.last().unwrap().clone();
        let key = (a.clone(), budget);
        if self.rejected.get(&key).is_some_and(|&n| n >= steps) {
            return Ok(None);
        }
        self.stats.views += 1;
        self.stats.deepest = self.stats.deepest.max(path.len() - 1);
        let children = candidate_children(self.prover, self.logic, &a, self.f, budget)?;
        let th_a = a.theory();
        for c in &children {
            self.stats.provability_checks += 1;
            let forced = th_a.implies(&Formula::diamond(c.theory()));
            if !self.prover.provable(self.logic, &forced)? {
                return Ok(Some(c.clone()));
            }
        }
        if steps > 0 {
            let child_budget = budget.map(|b| b.saturating_sub(1));
            for c in children {
                if self.logic.has_4() {
                    debug_assert!(a.boxes().is_subset(&c.boxes()));
                    debug_assert!(c.diamonds().is_subset(&a.diamonds()));
                }
                path.push(c);
                if let Some(found) = self.explore(path, child_budget, steps - 1)? {
                    return Ok(Some(found));
                }
                path.pop();
            }
        }
        let entry = self.rejected.entry(key).or_insert(0);
        *entry = (*entry).max(steps);
        Ok(None)
    }
}

/// A formula `psi` such that both `f & psi` and `f & ~psi` are satisfiable,
/// rebuilt from an accepting trace and checked with the prover.
pub fn incompleteness_witness(
    prover: &Prover,
    logic: Logic,
    f: &Formula,
    trace: &CcTrace,
) -> Result<Formula> {
    let splits = |state: &MaximalState, psi: &Formula| -> Result<bool> {
        let with = state.members().iter().chain(std::iter::once(psi));
        let neg = psi.negate();
        let without = state.members().iter().chain(std::iter::once(&neg));
        Ok(prover.consistent(logic, with)? && prover.consistent(logic, without)?)
    };
    let psi = match trace {
        CcTrace::Initial(a, b) => a
            .members()
            .iter()
            .find(|g| !b.contains(g))
            .cloned()
            .ok_or_else(|| Error::Internal("initial states coincide".into()))?,
        CcTrace::Branch { path, child } => {
            let mut psi = Formula::diamond(child.theory());
            let last = path.last().unwrap();
            if !splits(last, &psi)? {
                return Err(Error::Internal(format!("child {psi} is forced after all")));
            }
            for pair in path.windows(2).rev() {
                let (parent, below) = (&pair[0], &pair[1]);
                let th = below.theory();
                let options = [
                    Formula::diamond(Formula::and(th.clone(), psi.clone())),
                    Formula::diamond(Formula::and(th, psi.negate())),
                    psi.clone(),
                ];
                let mut chosen = None;
                for option in options {
                    if splits(parent, &option)? {
                        chosen = Some(option);
                        break;
                    }
                }
                psi = chosen.ok_or_else(|| {
                    Error::Internal("no distinguishing formula along the trace".into())
                })?;
            }
            psi
        }
    };
    let both =
        prover.consistent(logic, [f, &psi])? && prover.consistent(logic, [f, &psi.negate()])?;
    if !both {
        return Err(Error::Internal(format!("{psi} does not split {f}")));
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn decide(l: Logic, s: &str) -> Verdict {
        let f = parse(s).unwrap();
        let v = cc_decide(l, &f).unwrap();
        if let Some(psi) = &v.psi {
            let p = Prover::shared();
            assert!(p.consistent(l, [&f, psi]).unwrap());
            assert!(p.consistent(l, [&f, &psi.negate()]).unwrap());
        }
        v
    }

    #[test]
    fn maximal_state_examples() {
        let p = Prover::new();
        let f = parse("p & []false").unwrap();
        let must = BTreeSet::from([f.clone()]);
        let states = maximal_states(&p, Logic::K, &f, &must, Some(1)).unwrap();
        assert_eq!(states.len(), 1);
        assert!(states[0].contains(&parse("[]false").unwrap()));
        assert!(states[0].contains(&parse("p").unwrap()));

        let top = Formula::Top;
        let states =
            maximal_states(&p, Logic::K, &top, &BTreeSet::from([top.clone()]), Some(0)).unwrap();
        assert_eq!(states.len(), 1);

        let f = parse("<>p").unwrap();
        let states =
            maximal_states(&p, Logic::K, &f, &BTreeSet::from([f.clone()]), Some(1)).unwrap();
        assert_eq!(states.len(), 2);
        // variables true first
        assert!(states[0].contains(&parse("p").unwrap()));
    }

    #[test]
    fn candidate_examples() {
        let p = Prover::new();
        let f = parse("p & []false").unwrap();
        let a =
            &maximal_states(&p, Logic::K, &f, &BTreeSet::from([f.clone()]), Some(1)).unwrap()[0];
        assert!(candidate_children(&p, Logic::K, a, &f, Some(1))
            .unwrap()
            .is_empty());

        let top = Formula::Top;
        let a = &maximal_states(&p, Logic::K, &top, &BTreeSet::new(), Some(0)).unwrap()[0];
        let kids = candidate_children(&p, Logic::K, a, &top, Some(0)).unwrap();
        assert_eq!(kids.len(), 1);
        let forced = a.theory().implies(&Formula::diamond(kids[0].theory()));
        assert!(!p.provable(Logic::K, &forced).unwrap());

        let f = parse("[]p & <>~q").unwrap();
        let must = BTreeSet::from([f.clone()]);
        for a in maximal_states(&p, Logic::S4, &f, &must, None).unwrap() {
            for c in candidate_children(&p, Logic::S4, &a, &f, None).unwrap() {
                assert!(c.contains(&parse("p").unwrap()));
                assert!(c.contains(&parse("[]p").unwrap()));
            }
        }
    }

    #[test]
    fn decisions() {
        assert!(decide(Logic::K, "p & []false").is_complete());
        assert!(decide(Logic::K4, "p & []false").is_complete());
        assert!(!decide(Logic::K, "true").is_complete());
        assert!(!decide(Logic::K4, "true").is_complete());
        assert!(decide(Logic::S4, "p & []p").is_complete());
        assert!(decide(Logic::D4, "p & []p").is_complete());
        assert!(!decide(Logic::K, "p & <>p & []p").is_complete());
        assert!(!decide(Logic::K, "p").is_complete());
        assert!(decide(Logic::K, "p & ~p").is_complete());
        assert!(decide(Logic::K, "p & <>(~p & []false) & [](~p & []false)").is_complete());
        assert!(!decide(Logic::S4, "p").is_complete());
        assert!(!decide(Logic::K4, "p & []p").is_complete());
    }

    #[test]
    fn witness_for_top_is_about_successors() {
        let v = decide(Logic::K, "true");
        let psi = v.psi.unwrap();
        assert_eq!(psi.modal_depth(), 1);
    }

    #[test]
    fn unsupported_logics() {
        assert!(cc_decide(Logic::D, &Formula::Top).is_err());
        assert!(cc_decide(Logic::S5, &Formula::Top).is_err());
    }

    #[test]
    fn closure_cap() {
        let f = parse("a & b & c & d & e & f & g & h & i & j & k & l & m").unwrap();
        assert!(matches!(
            cc_decide(Logic::K, &f),
            Err(Error::ResourceCap { .. })
        ));
    }
}
