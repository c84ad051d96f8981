//! Brute-force ground truth at desk scale: exhaustive enumeration of small
//! models, satisfiability and incompleteness by search, and the exhaustive
//! suite of small formulas used to cross-check the decision procedures.
//!
//! Everything here avoids the fast paths it is meant to check: bisimilarity
//! goes through the naive fixpoint, and no tableau or shape search is used.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use crate::bisim::{greatest_bisimulation, naive_bisimilar};
use crate::error::{Error, Result};
use crate::formula::{Formula, VarSet};
use crate::kripke::PointedModel;
use crate::logics::{is_frame_for, Logic};

const MODULE: &str = "oracle";

/// Largest number of bits (`n*n` relation bits plus `|P|*n` valuation bits)
/// an enumeration may range over.
pub const MAX_ENCODING_BITS: usize = 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelBudget {
    pub max_states: usize,
    pub vars: VarSet,
}

impl ModelBudget {
    pub fn new(max_states: usize, vars: VarSet) -> ModelBudget {
        ModelBudget { max_states, vars }
    }

    fn check(&self) -> Result<()> {
        if self.max_states == 0 {
            return Err(Error::Precondition(
                "a model budget needs at least one state".into(),
            ));
        }
        let n = self.max_states;
        let bits = n * n + self.vars.len() * n;
        if bits > MAX_ENCODING_BITS || self.vars.len() > 16 {
            return Err(Error::cap(
                MODULE,
                format!(
                    "{n} states over {} variables need {bits} bits",
                    self.vars.len()
                ),
            ));
        }
        Ok(())
    }
}

/// A model in raw form: relation bits `a*n + b`, valuation bits `s*k + i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
struct Code {
    n: usize,
    rel: u64,
    val: u64,
    point: usize,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn go(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == perm.len() {
            out.push(perm.clone());
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            go(k + 1, perm, out);
            perm.swap(k, i);
        }
    }
    go(0, &mut perm, &mut out);
    out
}

impl Code {
    fn permute(&self, perm: &[usize], k: usize) -> Code {
        let n = self.n;
        let mut rel = 0u64;
        let mut val = 0u64;
        for a in 0..n {
            for b in 0..n {
                if self.rel >> (a * n + b) & 1 == 1 {
                    rel |= 1 << (perm[a] * n + perm[b]);
                }
            }
            let bits = self.val >> (a * k) & ((1 << k) - 1);
            val |= bits << (perm[a] * k);
        }
        Code {
            n,
            point: perm[self.point],
            rel,
            val,
        }
    }

    fn is_canonical(&self, perms: &[Vec<usize>], k: usize) -> bool {
        perms.iter().all(|p| *self <= self.permute(p, k))
    }

    fn canonical(&self, perms: &[Vec<usize>], k: usize) -> Code {
        perms.iter().map(|p| self.permute(p, k)).min().unwrap()
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        (0..n)
            .map(|a| {
                (0..n)
                    .filter(|&b| self.rel >> (a * n + b) & 1 == 1)
                    .collect()
            })
            .collect()
    }

    fn model(&self, vars: &[&str]) -> PointedModel {
        let k = vars.len();
        let val = (0..self.n)
            .map(|s| {
                vars.iter()
                    .enumerate()
                    .filter(|(i, _)| self.val >> (s * k + i) & 1 == 1)
                    .map(|(_, p)| *p)
                    .collect()
            })
            .collect();
        PointedModel::from_parts(self.successors(), val, self.point)
    }

    fn from_model(m: &PointedModel, vars: &[&str]) -> Code {
        let n = m.len();
        let k = vars.len();
        let mut rel = 0u64;
        let mut val = 0u64;
        for a in 0..n {
            for &b in m.successors(a) {
                rel |= 1 << (a * n + b);
            }
            for (i, p) in vars.iter().enumerate() {
                if m.valuation(a).contains(p) {
                    val |= 1 << (a * k + i);
                }
            }
        }
        Code {
            n,
            point: m.point(),
            rel,
            val,
        }
    }
}

/// Visits every pointed model of `logic` within the budget. With `prune`,
/// only one model per isomorphism class is visited.
pub fn for_each_model<F>(
    logic: Logic,
    budget: &ModelBudget,
    prune: bool,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&PointedModel) -> ControlFlow<()>,
{
    budget.check()?;
    let vars: Vec<&str> = budget.vars.iter().collect();
    let k = vars.len();
    for n in 1..=budget.max_states {
        let perms = permutations(n);
        for rel in 0u64..1 << (n * n) {
            let base = Code {
                n,
                rel,
                val: 0,
                point: 0,
            };
            // codes order by relation first, so a relation with a smaller
            // image is never canonical and only its stabilizer matters below
            let mut stabilizer = Vec::new();
            if prune {
                let mut smaller = false;
                for perm in &perms {
                    let image = base.permute(perm, k).rel;
                    smaller |= image < rel;
                    if image == rel {
                        stabilizer.push(perm.clone());
                    }
                }
                if smaller {
                    continue;
                }
            }
            if !is_frame_for(&base.successors(), logic) {
                continue;
            }
            for val in 0u64..1 << (n * k) {
                for point in 0..n {
                    let code = Code { n, rel, val, point };
                    if prune && !code.is_canonical(&stabilizer, k) {
                        continue;
                    }
                    if visit(&code.model(&vars)).is_break() {
                        return Ok(());
                    }
                }
            }
        }
    }
    Ok(())
}

/// Every pointed model of `logic` within the budget.
pub fn enumerate_models(
    logic: Logic,
    budget: &ModelBudget,
    prune: bool,
) -> Result<Vec<PointedModel>> {
    let mut out = Vec::new();
    for_each_model(logic, budget, prune, |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Whether some model of `logic` with at most `max_states` states satisfies `f`.
pub fn brute_sat(logic: Logic, f: &Formula, max_states: usize) -> Result<bool> {
    let budget = ModelBudget::new(max_states, f.vars());
    let mut found = false;
    for_each_model(logic, &budget, true, |m| {
        if m.check(f) {
            found = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

/// Two models of `f` within the budget that are not bisimilar modulo
/// `vars(f)`, if any exist.
pub fn brute_incomplete(
    logic: Logic,
    f: &Formula,
    max_states: usize,
) -> Result<Option<(PointedModel, PointedModel)>> {
    let vars = f.vars();
    let budget = ModelBudget::new(max_states, vars.clone());
    let mut first: Option<PointedModel> = None;
    let mut pair = None;
    for_each_model(logic, &budget, true, |m| {
        if !m.check(f) {
            return ControlFlow::Continue(());
        }
        match &first {
            None => {
                first = Some(m.clone());
                ControlFlow::Continue(())
            }
            Some(a) if !naive_bisimilar(a, m, &vars) => {
                pair = Some((a.clone(), m.clone()));
                ControlFlow::Break(())
            }
            Some(_) => ControlFlow::Continue(()),
        }
    })?;
    Ok(pair)
}

/// The bisimulation-minimal, point-generated quotient of `m` modulo `vars`.
pub fn minimize(m: &PointedModel, vars: &VarSet) -> PointedModel {
    let m = m.restrict_to_reachable();
    let rel = greatest_bisimulation(&m, &m, vars);
    let n = m.len();
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for s in 0..n {
        if class[s] == usize::MAX {
            for t in s..n {
                if rel[s][t] {
                    class[t] = reps.len();
                }
            }
            reps.push(s);
        }
    }
    let succ = reps
        .iter()
        .map(|&s| m.successors(s).iter().map(|&t| class[t]).collect())
        .collect();
    let val = reps
        .iter()
        .map(|&s| m.valuation(s).intersection(vars))
        .collect();
    PointedModel::from_parts(succ, val, class[m.point()])
}

/// One representative per bisimulation class (modulo `vars`) of the pointed
/// models of a logic within a state budget.
///
/// Two minimal point-generated models are bisimilar exactly when they are
/// isomorphic, so classes are keyed by a canonical encoding of the minimal
/// quotient.
pub struct ModelSpace {
    logic: Logic,
    vars: VarSet,
    max_states: usize,
    reps: Vec<PointedModel>,
}

impl ModelSpace {
    pub fn new(logic: Logic, vars: &VarSet, max_states: usize) -> Result<ModelSpace> {
        let budget = ModelBudget::new(max_states, vars.clone());
        let names: Vec<&str> = vars.iter().collect();
        let k = names.len();
        let perms: Vec<Vec<Vec<usize>>> = (0..=max_states).map(permutations).collect();
        let mut classes: BTreeMap<Code, PointedModel> = BTreeMap::new();
        for_each_model(logic, &budget, true, |m| {
            if m.reach(m.point()).len() == m.len() {
                let q = minimize(m, vars);
                let key = Code::from_model(&q, &names).canonical(&perms[q.len()], k);
                classes.entry(key).or_insert_with(|| key.model(&names));
            }
            ControlFlow::Continue(())
        })?;
        Ok(ModelSpace {
            logic,
            vars: vars.clone(),
            max_states,
            reps: classes.into_values().collect(),
        })
    }

    pub fn logic(&self) -> Logic {
        self.logic
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn max_states(&self) -> usize {
        self.max_states
    }

    pub fn classes(&self) -> &[PointedModel] {
        &self.reps
    }

    /// Representatives satisfying `f`, whose variables must lie in the space.
    pub fn satisfying<'a>(&'a self, f: &'a Formula) -> impl Iterator<Item = &'a PointedModel> + 'a {
        debug_assert!(f.vars().is_subset(&self.vars));
        self.reps.iter().filter(move |m| m.check(f))
    }

    /// Two non-bisimilar models of `f` from the space, when `vars(f)` equals
    /// the space's variables.
    pub fn incomplete_pair(&self, f: &Formula) -> Option<(PointedModel, PointedModel)> {
        debug_assert_eq!(f.vars(), self.vars);
        let mut it = self.satisfying(f);
        let a = it.next()?;
        let b = it.next()?;
        Some((a.clone(), b.clone()))
    }
}

/// Every formula over `vars` (not necessarily using all of them) whose
/// closure has at most `max_closure` members and whose modal depth is at
/// most `max_depth`, in canonical order.
pub fn exhaustive_formulas(vars: &VarSet, max_closure: usize, max_depth: usize) -> Vec<Formula> {
    let ok = |f: &Formula| f.modal_depth() <= max_depth && f.closure().len() <= max_closure;
    let mut all: BTreeSet<Formula> = [Formula::Top, Formula::Bottom].into_iter().collect();
    for p in vars.iter() {
        all.insert(Formula::var(p));
        all.insert(Formula::neg_var(p));
    }
    all.retain(|f| ok(f));
    let mut frontier: Vec<Formula> = all.iter().cloned().collect();
    while !frontier.is_empty() {
        let known: Vec<Formula> = all.iter().cloned().collect();
        let mut next = Vec::new();
        let mut consider = |f: Formula, all: &mut BTreeSet<Formula>| {
            if !all.contains(&f) && ok(&f) {
                all.insert(f.clone());
                next.push(f);
            }
        };
        for g in &frontier {
            consider(Formula::boxed(g.clone()), &mut all);
            consider(Formula::diamond(g.clone()), &mut all);
            for h in &known {
                consider(Formula::and(g.clone(), h.clone()), &mut all);
                consider(Formula::and(h.clone(), g.clone()), &mut all);
                consider(Formula::or(g.clone(), h.clone()), &mut all);
                consider(Formula::or(h.clone(), g.clone()), &mut all);
            }
        }
        frontier = next;
    }
    all.into_iter().collect()
}
