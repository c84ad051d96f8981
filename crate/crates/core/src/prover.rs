//! Satisfiability and provability for every supported logic.
//!
//! Logics without axiom 5 use a depth-first tableau that builds one branch
//! at a time and extracts a model from an open branch. Logics with axiom 5
//! search canonical flat shapes (see [`crate::flatfive`]).

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::{Mutex, OnceLock};

use crate::error::Result;
use crate::flatfive;
use crate::formula::{Formula, VarSet};
use crate::kripke::PointedModel;
use crate::logics::Logic;

/// A memoizing satisfiability oracle. Safe to share between threads.
#[derive(Default)]
pub struct Prover {
    memo: Mutex<HashMap<(Logic, BTreeSet<Formula>), bool>>,
}

impl Prover {
    pub fn new() -> Prover {
        Prover::default()
    }

    /// A process-wide instance.
    pub fn shared() -> &'static Prover {
        static SHARED: OnceLock<Prover> = OnceLock::new();
        SHARED.get_or_init(Prover::new)
    }

    pub fn satisfiable(&self, logic: Logic, f: &Formula) -> Result<bool> {
        self.consistent(logic, std::iter::once(f))
    }

    pub fn provable(&self, logic: Logic, f: &Formula) -> Result<bool> {
        Ok(!self.satisfiable(logic, &f.negate())?)
    }

    /// Whether the conjunction of `fs` is satisfiable.
    pub fn consistent<'a, I>(&self, logic: Logic, fs: I) -> Result<bool>
    where
        I: IntoIterator<Item = &'a Formula>,
    {
        let label: BTreeSet<Formula> = fs.into_iter().cloned().collect();
        let key = (logic, label);
        if let Some(&known) = self.memo.lock().unwrap().get(&key) {
            return Ok(known);
        }
        let answer = if logic.has_5() {
            flatfive::find_model(logic, &key.1)?.is_some()
        } else {
            Tableau::new(logic).run(key.1.clone()).is_some()
        };
        self.memo.lock().unwrap().insert(key, answer);
        Ok(answer)
    }

    /// A model of the conjunction of `fs`, if one exists.
    pub fn model<'a, I>(&self, logic: Logic, fs: I) -> Result<Option<PointedModel>>
    where
        I: IntoIterator<Item = &'a Formula>,
    {
        let label: BTreeSet<Formula> = fs.into_iter().cloned().collect();
        let model = if logic.has_5() {
            flatfive::find_model(logic, &label)?
        } else {
            Tableau::new(logic).run(label.clone())
        };
        self.memo
            .lock()
            .unwrap()
            .insert((logic, label), model.is_some());
        Ok(model)
    }

    pub fn cache_len(&self) -> usize {
        self.memo.lock().unwrap().len()
    }
}

pub fn satisfiable(logic: Logic, f: &Formula) -> Result<bool> {
    Prover::shared().satisfiable(logic, f)
}

pub fn provable(logic: Logic, f: &Formula) -> Result<bool> {
    Prover::shared().provable(logic, f)
}

pub fn consistent<'a, I>(logic: Logic, fs: I) -> Result<bool>
where
    I: IntoIterator<Item = &'a Formula>,
{
    Prover::shared().consistent(logic, fs)
}

struct World {
    val: VarSet,
    succ: Vec<usize>,
}

/// One tableau run for a logic without axiom 5.
struct Tableau {
    logic: Logic,
    worlds: Vec<World>,
    /// Creation labels of the nodes on the current path, with their worlds.
    /// Only kept for transitive logics, where it drives loop blocking.
    ancestors: Vec<(BTreeSet<Formula>, usize)>,
    /// Creation labels already shown unsatisfiable.
    closed: HashSet<BTreeSet<Formula>>,
}

impl Tableau {
    fn new(logic: Logic) -> Tableau {
        debug_assert!(!logic.has_5());
        Tableau {
            logic,
            worlds: Vec::new(),
            ancestors: Vec::new(),
            closed: HashSet::new(),
        }
    }

    fn run(mut self, label: BTreeSet<Formula>) -> Option<PointedModel> {
        let root = self.node(label)?;
        let n = self.worlds.len();
        let mut succ: Vec<Vec<usize>> = self.worlds.iter().map(|w| w.succ.clone()).collect();
        if self.logic.has_t() {
            for (i, out) in succ.iter_mut().enumerate() {
                out.push(i);
            }
        }
        if self.logic.has_4() {
            succ = transitive_closure(&succ);
        }
        let val = self.worlds.into_iter().map(|w| w.val).collect();
        debug_assert!(root < n);
        let model = PointedModel::from_parts(succ, val, root).restrict_to_reachable();
        debug_assert!(model.is_model_for(self.logic));
        Some(model)
    }

    /// Opens a node for `label`, returning its world on success.
    fn node(&mut self, label: BTreeSet<Formula>) -> Option<usize> {
        if self.logic.has_4() {
            if let Some((_, w)) = self.ancestors.iter().find(|(l, _)| *l == label) {
                return Some(*w);
            }
        }
        if self.closed.contains(&label) {
            return None;
        }
        let mark = self.worlds.len();
        let todo: Vec<Formula> = label.iter().cloned().collect();
        let result = self.saturate(todo, BTreeSet::new(), &label);
        if result.is_none() {
            self.worlds.truncate(mark);
            self.closed.insert(label);
        }
        result
    }

    /// Applies the propositional rules (and the T rule), branching on
    /// disjunctions, then expands the modal part of each open saturation.
    fn saturate(
        &mut self,
        mut todo: Vec<Formula>,
        mut done: BTreeSet<Formula>,
        label: &BTreeSet<Formula>,
    ) -> Option<usize> {
        while let Some(f) = todo.pop() {
            if done.contains(&f) {
                continue;
            }
            match &f {
                Formula::Bottom => return None,
                Formula::Top | Formula::Diamond(_) => {}
                Formula::Var(p) => {
                    if done.contains(&Formula::NegVar(p.clone())) {
                        return None;
                    }
                }
                Formula::NegVar(p) => {
                    if done.contains(&Formula::Var(p.clone())) {
                        return None;
                    }
                }
                Formula::And(l, r) => {
                    todo.push(l.as_ref().clone());
                    todo.push(r.as_ref().clone());
                }
                Formula::Or(l, r) => {
                    if done.contains(l.as_ref()) || done.contains(r.as_ref()) {
                        done.insert(f);
                        continue;
                    }
                    done.insert(f.clone());
                    for choice in [l, r] {
                        let mark = self.worlds.len();
                        let mut branch = todo.clone();
                        branch.push(choice.as_ref().clone());
                        if let Some(w) = self.saturate(branch, done.clone(), label) {
                            return Some(w);
                        }
                        self.worlds.truncate(mark);
                    }
                    return None;
                }
                Formula::Box(c) => {
                    if self.logic.has_t() {
                        todo.push(c.as_ref().clone());
                    }
                }
            }
            done.insert(f);
        }
        self.expand_modal(&done, label)
    }

    fn expand_modal(
        &mut self,
        sat: &BTreeSet<Formula>,
        label: &BTreeSet<Formula>,
    ) -> Option<usize> {
        let mut val = VarSet::new();
        let mut boxes: Vec<Formula> = Vec::new();
        let mut diamonds: Vec<Formula> = Vec::new();
        for f in sat {
            match f {
                Formula::Var(p) => {
                    val.insert(p);
                }
                Formula::Box(c) => boxes.push(c.as_ref().clone()),
                Formula::Diamond(c) => diamonds.push(c.as_ref().clone()),
                _ => {}
            }
        }
        let w = self.worlds.len();
        self.worlds.push(World {
            val,
            succ: Vec::new(),
        });

        let carried = |extra: Option<&Formula>| -> BTreeSet<Formula> {
            let mut lab: BTreeSet<Formula> = boxes.iter().cloned().collect();
            if self.logic.has_4() {
                lab.extend(boxes.iter().map(|c| Formula::boxed(c.clone())));
            }
            lab.extend(extra.cloned());
            lab
        };
        let mut children: Vec<BTreeSet<Formula>> =
            diamonds.iter().map(|d| carried(Some(d))).collect();
        if diamonds.is_empty() && self.logic.has_d() && !self.logic.has_t() {
            if boxes.is_empty() {
                self.worlds[w].succ.push(w);
            } else {
                children.push(carried(None));
            }
        }

        if self.logic.has_4() {
            self.ancestors.push((label.clone(), w));
        }
        let mut open = true;
        for child in children {
            match self.node(child) {
                Some(c) => self.worlds[w].succ.push(c),
                None => {
                    open = false;
                    break;
                }
            }
        }
        if self.logic.has_4() {
            self.ancestors.pop();
        }
        open.then_some(w)
    }
}

pub(crate) fn transitive_closure(succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    (0..succ.len())
        .map(|s| {
            let mut seen = BTreeSet::new();
            let mut stack: Vec<usize> = succ[s].clone();
            while let Some(t) = stack.pop() {
                if seen.insert(t) {
                    stack.extend(succ[t].iter().copied());
                }
            }
            seen.into_iter().collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn sat(l: Logic, s: &str) -> bool {
        let f = parse(s).unwrap();
        let p = Prover::new();
        let answer = p.satisfiable(l, &f).unwrap();
        if answer {
            let m = p.model(l, [&f]).unwrap().expect("model");
            assert!(m.is_model_for(l), "{l} {s} {m:?}");
            assert!(m.check(&f), "{l} {s} {m:?}");
        }
        answer
    }

    fn prov(l: Logic, s: &str) -> bool {
        Prover::new().provable(l, &parse(s).unwrap()).unwrap()
    }

    #[test]
    fn satisfiability_examples() {
        assert!(sat(Logic::K, "[]false"));
        assert!(!sat(Logic::D, "[]false"));
        assert!(!sat(Logic::T, "p & []~p"));
        assert!(sat(Logic::K4, "p & []~p"));
        assert!(!sat(Logic::S4, "<>p & [](~p | []~p) & ~p"));
        assert!(sat(Logic::S4, "<>p & [](~p | []p) & ~p"));
        assert!(!sat(Logic::S5, "[]false"));
        assert!(sat(Logic::K5, "[]false"));
    }

    #[test]
    fn provability_examples() {
        assert!(prov(Logic::T, "[]p -> p"));
        assert!(!prov(Logic::K, "[]p -> p"));
        assert!(prov(Logic::K4, "[]p -> [][]p"));
        assert!(!prov(Logic::K, "[]p -> [][]p"));
        for l in [Logic::K5, Logic::KD5, Logic::K45, Logic::KD45, Logic::S5] {
            assert!(prov(l, "<>p -> []<>p"), "{l}");
        }
        assert!(prov(Logic::D, "<>true"));
        assert!(!prov(Logic::K, "<>true"));
    }

    #[test]
    fn consistency_examples() {
        let p = Prover::new();
        for l in Logic::all() {
            assert!(p.consistent(l, []).unwrap());
            let pair = [parse("p").unwrap(), parse("~p").unwrap()];
            assert!(!p.consistent(l, &pair).unwrap());
            let pair = [parse("[]false").unwrap(), parse("<>true").unwrap()];
            assert!(!p.consistent(l, &pair).unwrap());
        }
    }

    #[test]
    fn transitive_loops_are_blocked() {
        // forces an infinite ascending chain unless cycles are allowed
        assert!(sat(Logic::K4, "[]<>p & <>p"));
        assert!(sat(Logic::D4, "[]<>true"));
        assert!(sat(Logic::S4, "[](<>p & <>~p)"));
        assert!(!sat(Logic::K4, "<>p & []~p"));
        assert!(!sat(Logic::K4, "<><>p & []~p"));
        assert!(sat(Logic::K, "<><>p & []~p"));
    }

    #[test]
    fn serial_leaf_gets_a_loop() {
        assert!(sat(Logic::D, "p & []q"));
        assert!(sat(Logic::D, "<>p"));
        assert!(!sat(Logic::D, "[][]false"));
    }
}
