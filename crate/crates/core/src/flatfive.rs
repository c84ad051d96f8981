//! Canonical flat models for logics with axiom 5.
//!
//! Every pointed model of a logic with axiom 5 is bisimilar to a flat one: a
//! root whose successors lie in a single cluster of mutually accessible
//! states. Up to bisimilarity modulo `P`, a flat model is fixed by three
//! pieces of data: the root valuation, the set of valuations in the cluster,
//! and the set of valuations the root sees directly. Those three sets are a
//! [`FlatShape`].
//!
//! Transitivity forces the root to see the whole cluster, so under K45 and
//! KD45 (and S5) the successor set always equals the cluster set.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{big_and, valuation_formula, Formula, VarSet};
use crate::kripke::PointedModel;
use crate::logics::Logic;
use crate::verdict::{Provenance, Verdict};

const MODULE: &str = "flatfive";

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct FlatShape {
    pub root: VarSet,
    pub cluster: BTreeSet<VarSet>,
    pub successors: BTreeSet<VarSet>,
}

/// Limits on shape enumeration.
#[derive(Clone, Copy, Debug)]
pub struct ShapeCaps {
    /// At most 6, since valuations are indexed by bits of a `u64`.
    pub max_vars: usize,
    pub max_shapes: usize,
}

impl Default for ShapeCaps {
    fn default() -> Self {
        ShapeCaps {
            max_vars: 6,
            max_shapes: 1 << 16,
        }
    }
}

impl FlatShape {
    /// Whether the shape is a canonical flat shape for `logic`.
    pub fn fits(&self, logic: Logic) -> bool {
        self.successors.is_subset(&self.cluster)
            && self.successors.is_empty() == self.cluster.is_empty()
            && (!logic.has_d() || !self.cluster.is_empty())
            && (!logic.has_t() || self.cluster.contains(&self.root))
            && (!(logic.has_t() || logic.has_4()) || self.successors == self.cluster)
    }
}

/// Builds the flat model of a shape: one state per cluster valuation, all
/// mutually accessible, and a separate root unless the logic is reflexive,
/// in which case the point is the cluster state carrying the root valuation.
pub fn realize(shape: &FlatShape, logic: Logic) -> Result<PointedModel> {
    if !logic.has_5() {
        return Err(Error::Unsupported(format!(
            "flat shapes need axiom 5, got {logic}"
        )));
    }
    if !shape.fits(logic) {
        return Err(Error::Precondition(format!(
            "shape {shape:?} is not a {logic} shape"
        )));
    }
    let cluster: Vec<&VarSet> = shape.cluster.iter().collect();
    let k = cluster.len();
    let mut names: Vec<String> = (0..k).map(|i| format!("c{i}")).collect();
    let mut succ: Vec<Vec<usize>> = vec![(0..k).collect(); k];
    let mut val: Vec<VarSet> = cluster.iter().map(|v| (*v).clone()).collect();
    let point = if logic.has_t() {
        cluster.iter().position(|v| **v == shape.root).unwrap()
    } else {
        names.push("r".into());
        succ.push(
            (0..k)
                .filter(|&i| shape.successors.contains(cluster[i]))
                .collect(),
        );
        val.push(shape.root.clone());
        k
    };
    let m = PointedModel::with_names(names, succ, val, point)?;
    debug_assert!(m.is_model_for(logic));
    Ok(m)
}

/// The shape of a flat normalisation of `m`, a model of a logic with
/// axiom 5, over the variables `vars`.
pub fn read_off(m: &PointedModel, vars: &VarSet) -> FlatShape {
    let m = m.restrict_to_reachable();
    let restrict = |s: usize| m.valuation(s).intersection(vars);
    let mut has_pred = vec![false; m.len()];
    for s in 0..m.len() {
        for &t in m.successors(s) {
            has_pred[t] = true;
        }
    }
    FlatShape {
        root: restrict(m.point()),
        cluster: (0..m.len())
            .filter(|&s| has_pred[s])
            .map(restrict)
            .collect(),
        successors: m
            .successors(m.point())
            .iter()
            .map(|&s| restrict(s))
            .collect(),
    }
}

/// Every shape for `logic` over `vars(f)` whose realisation satisfies `f`.
pub fn sat_shapes(logic: Logic, f: &Formula) -> Result<BTreeSet<FlatShape>> {
    sat_shapes_over(logic, f, &f.vars(), ShapeCaps::default())
}

/// As [`sat_shapes`], over an explicit variable set containing `vars(f)`.
pub fn sat_shapes_over(
    logic: Logic,
    f: &Formula,
    vars: &VarSet,
    caps: ShapeCaps,
) -> Result<BTreeSet<FlatShape>> {
    let search = Search::new(logic, f, vars, caps)?;
    let found = search.run(caps.max_shapes.saturating_add(1));
    if found.len() > caps.max_shapes {
        return Err(Error::cap(
            MODULE,
            format!("more than {} satisfying shapes", caps.max_shapes),
        ));
    }
    Ok(found.into_iter().collect())
}

/// Completeness for a logic with axiom 5: complete iff at most one shape
/// satisfies `f`.
pub fn flat_complete(logic: Logic, f: &Formula) -> Result<Verdict> {
    if !logic.has_5() {
        return Err(Error::Unsupported(format!(
            "flat shapes need axiom 5, got {logic}"
        )));
    }
    let vars = f.vars();
    let search = Search::new(logic, f, &vars, ShapeCaps::default())?;
    let found = search.run(2);
    match found.as_slice() {
        [] => Ok(Verdict::complete(Provenance::Unsat)),
        [_] => Ok(Verdict::complete(Provenance::Flat)),
        [a, b, ..] => {
            let psi = separating_formula(a, b, &vars);
            let (ma, mb) = (realize(a, logic)?, realize(b, logic)?);
            let (m1, m2) = if ma.check(&psi) { (ma, mb) } else { (mb, ma) };
            debug_assert!(m1.check(&psi) && !m2.check(&psi));
            let mut v = Verdict::incomplete(psi, Provenance::Flat);
            v.witnesses = Some((m1, m2));
            Ok(v)
        }
    }
}

/// A formula over `vars` that holds in exactly one of the realisations of
/// two distinct shapes.
pub fn separating_formula(a: &FlatShape, b: &FlatShape, vars: &VarSet) -> Formula {
    if let Some(p) = vars
        .iter()
        .find(|p| a.root.contains(p) != b.root.contains(p))
    {
        return Formula::var(p);
    }
    let odd =
        |x: &BTreeSet<VarSet>, y: &BTreeSet<VarSet>| x.symmetric_difference(y).next().cloned();
    if let Some(v) = odd(&a.successors, &b.successors) {
        return Formula::diamond(valuation_formula(vars, &v));
    }
    let v = odd(&a.cluster, &b.cluster).expect("distinct shapes");
    Formula::diamond(Formula::diamond(valuation_formula(vars, &v)))
}

/// A flat model of the conjunction of `label`, if one exists.
pub(crate) fn find_model(logic: Logic, label: &BTreeSet<Formula>) -> Result<Option<PointedModel>> {
    let f = big_and(label.iter().cloned());
    let search = Search::new(logic, &f, &f.vars(), ShapeCaps::default())?;
    match search.run(1).first() {
        Some(shape) => Ok(Some(realize(shape, logic)?)),
        None => Ok(None),
    }
}

#[derive(Clone, Copy)]
enum Op {
    Const(bool),
    Lit(u64),
    And(usize, usize),
    Or(usize, usize),
    Box(usize),
    Dia(usize),
}

/// Depth-first assignment of a status (absent, cluster only, successor) to
/// each valuation, pruned by three-valued evaluation of the formula.
struct Search {
    logic: Logic,
    vars: VarSet,
    nvals: usize,
    full: u64,
    ops: Vec<Op>,
}

impl Search {
    fn new(logic: Logic, f: &Formula, vars: &VarSet, caps: ShapeCaps) -> Result<Search> {
        debug_assert!(f.vars().is_subset(vars));
        let limit = caps.max_vars.min(6);
        if vars.len() > limit {
            return Err(Error::cap(
                MODULE,
                format!("{} variables exceed the limit of {limit}", vars.len()),
            ));
        }
        let nvals = 1usize << vars.len();
        let full = if nvals == 64 {
            u64::MAX
        } else {
            (1u64 << nvals) - 1
        };
        let mut search = Search {
            logic,
            vars: vars.clone(),
            nvals,
            full,
            ops: Vec::new(),
        };
        let mut memo = HashMap::new();
        search.compile(f, &mut memo);
        Ok(search)
    }

    fn lit_mask(&self, name: &str) -> u64 {
        let i = self
            .vars
            .iter()
            .position(|p| p == name)
            .expect("variable in range");
        (0..self.nvals)
            .filter(|v| v >> i & 1 == 1)
            .fold(0, |m, v| m | 1 << v)
    }

    fn compile(&mut self, f: &Formula, memo: &mut HashMap<Formula, usize>) -> usize {
        if let Some(&i) = memo.get(f) {
            return i;
        }
        let op = match f {
            Formula::Top => Op::Const(true),
            Formula::Bottom => Op::Const(false),
            Formula::Var(p) => Op::Lit(self.lit_mask(p)),
            Formula::NegVar(p) => Op::Lit(!self.lit_mask(p) & self.full),
            Formula::And(l, r) => Op::And(self.compile(l, memo), self.compile(r, memo)),
            Formula::Or(l, r) => Op::Or(self.compile(l, memo), self.compile(r, memo)),
            Formula::Box(c) => Op::Box(self.compile(c, memo)),
            Formula::Diamond(c) => Op::Dia(self.compile(c, memo)),
        };
        self.ops.push(op);
        memo.insert(f.clone(), self.ops.len() - 1);
        self.ops.len() - 1
    }

    /// Lower and upper truth of the formula at the root, given the states
    /// known to be in the cluster (`c_in`) and among the root's successors
    /// (`s_in`), with `open` valuations still undecided.
    fn eval(&self, root: usize, c_in: u64, s_in: u64, open: u64) -> (bool, bool) {
        let mut cl: Vec<(u64, u64)> = Vec::with_capacity(self.ops.len());
        let mut rt: Vec<(bool, bool)> = Vec::with_capacity(self.ops.len());
        let full = self.full;
        let c_may = c_in | open;
        let s_may = s_in | open;
        let all = |b: bool| if b { full } else { 0 };
        for op in &self.ops {
            let (c, r) = match *op {
                Op::Const(b) => ((all(b), all(b)), (b, b)),
                Op::Lit(m) => {
                    let b = m >> root & 1 == 1;
                    ((m, m), (b, b))
                }
                Op::And(i, j) => (
                    (cl[i].0 & cl[j].0, cl[i].1 & cl[j].1),
                    (rt[i].0 && rt[j].0, rt[i].1 && rt[j].1),
                ),
                Op::Or(i, j) => (
                    (cl[i].0 | cl[j].0, cl[i].1 | cl[j].1),
                    (rt[i].0 || rt[j].0, rt[i].1 || rt[j].1),
                ),
                Op::Dia(i) => {
                    let (lo, hi) = cl[i];
                    (
                        (all(lo & c_in != 0), all(hi & c_may != 0)),
                        (lo & s_in != 0, hi & s_may != 0),
                    )
                }
                Op::Box(i) => {
                    let (lo, hi) = cl[i];
                    (
                        (all(c_may & !lo == 0), all(c_in & !hi == 0)),
                        (s_may & !lo == 0, s_in & !hi == 0),
                    )
                }
            };
            cl.push(c);
            rt.push(r);
        }
        let top = self.ops.len() - 1;
        if self.logic.has_t() {
            (cl[top].0 >> root & 1 == 1, cl[top].1 >> root & 1 == 1)
        } else {
            rt[top]
        }
    }

    fn run(&self, limit: usize) -> Vec<FlatShape> {
        let mut out = Vec::new();
        for root in 0..self.nvals {
            self.dfs(root, 0, 0, 0, &mut out, limit);
            if out.len() >= limit {
                break;
            }
        }
        out
    }

    fn dfs(
        &self,
        root: usize,
        v: usize,
        c_in: u64,
        s_in: u64,
        out: &mut Vec<FlatShape>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        let decided = if v >= 64 { u64::MAX } else { (1u64 << v) - 1 };
        let open = self.full & !decided;
        let (lo, hi) = self.eval(root, c_in, s_in, open);
        if !hi {
            return;
        }
        if v == self.nvals {
            debug_assert_eq!(lo, hi);
            let shape = self.shape(root, c_in, s_in);
            if lo && shape.fits(self.logic) {
                out.push(shape);
            }
            return;
        }
        let bit = 1u64 << v;
        let forced = self.logic.has_t() && v == root;
        if !forced {
            self.dfs(root, v + 1, c_in, s_in, out, limit);
        }
        self.dfs(root, v + 1, c_in | bit, s_in | bit, out, limit);
        if !(self.logic.has_t() || self.logic.has_4()) {
            self.dfs(root, v + 1, c_in | bit, s_in, out, limit);
        }
    }

    fn valuation(&self, v: usize) -> VarSet {
        self.vars.subset_from_mask(v as u64)
    }

    fn shape(&self, root: usize, c_in: u64, s_in: u64) -> FlatShape {
        let set = |mask: u64| -> BTreeSet<VarSet> {
            (0..self.nvals)
                .filter(|v| mask >> v & 1 == 1)
                .map(|v| self.valuation(v))
                .collect()
        };
        FlatShape {
            root: self.valuation(root),
            cluster: set(c_in),
            successors: set(s_in),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisim::bisimilar;
    use crate::formula::parse;

    fn vs(items: &[&str]) -> VarSet {
        items.iter().collect()
    }

    fn sets(items: &[&[&str]]) -> BTreeSet<VarSet> {
        items.iter().map(|v| vs(v)).collect()
    }

    #[test]
    fn realize_examples() {
        let dead = FlatShape {
            root: VarSet::new(),
            cluster: BTreeSet::new(),
            successors: BTreeSet::new(),
        };
        let m = realize(&dead, Logic::K5).unwrap();
        assert_eq!((m.len(), m.edge_count()), (1, 0));

        let refl = FlatShape {
            root: vs(&["p"]),
            cluster: sets(&[&["p"]]),
            successors: sets(&[&["p"]]),
        };
        let m = realize(&refl, Logic::S5).unwrap();
        assert_eq!((m.len(), m.edge_count()), (1, 1));
        assert!(m.check(&parse("p & <>[]p").unwrap()));

        // root sees part of a two-state cluster
        let partial = FlatShape {
            root: vs(&["p"]),
            cluster: sets(&[&["p"], &[]]),
            successors: sets(&[&["p"]]),
        };
        let m = realize(&partial, Logic::KD5).unwrap();
        assert_eq!((m.len(), m.edge_count()), (3, 5));
        assert!(m.is_model_for(Logic::KD5));
        // not transitive, so not a KD45 shape
        assert!(realize(&partial, Logic::KD45).is_err());
        assert!(realize(&dead, Logic::KD45).is_err());
        assert!(realize(&dead, Logic::K4).is_err());
    }

    #[test]
    fn sat_shapes_examples() {
        let shapes = sat_shapes(Logic::S5, &parse("p & <>[]p").unwrap()).unwrap();
        assert_eq!(
            shapes.into_iter().collect::<Vec<_>>(),
            vec![FlatShape {
                root: vs(&["p"]),
                cluster: sets(&[&["p"]]),
                successors: sets(&[&["p"]]),
            }]
        );
        let shapes = sat_shapes(Logic::K5, &parse("[]false").unwrap()).unwrap();
        assert_eq!(shapes.len(), 1);
        assert!(shapes.iter().next().unwrap().cluster.is_empty());
        assert!(sat_shapes(Logic::KD45, &parse("[]false").unwrap())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn s5_shape_count_over_one_variable() {
        let all =
            sat_shapes_over(Logic::S5, &Formula::Top, &vs(&["p"]), ShapeCaps::default()).unwrap();
        // root valuation times non-empty clusters containing it
        assert_eq!(all.len(), 4);
    }

    #[test]
    fn shape_search_matches_model_checking() {
        let p = vs(&["p"]);
        for logic in [Logic::K5, Logic::KD5, Logic::K45, Logic::KD45, Logic::S5] {
            let all = sat_shapes_over(logic, &Formula::Top, &p, ShapeCaps::default()).unwrap();
            for f in ["<>p", "[]p", "<><>p & []~p", "p & []~p", "<>[]p | []<>~p"] {
                let f = parse(f).unwrap();
                let found = sat_shapes_over(logic, &f, &p, ShapeCaps::default()).unwrap();
                let expected: BTreeSet<FlatShape> = all
                    .iter()
                    .filter(|sh| realize(sh, logic).unwrap().check(&f))
                    .cloned()
                    .collect();
                assert_eq!(found, expected, "{logic} {f}");
            }
        }
    }

    #[test]
    fn distinct_shapes_are_not_bisimilar() {
        let p = vs(&["p"]);
        for logic in [Logic::K5, Logic::KD5, Logic::K45, Logic::KD45, Logic::S5] {
            let all: Vec<FlatShape> =
                sat_shapes_over(logic, &Formula::Top, &p, ShapeCaps::default())
                    .unwrap()
                    .into_iter()
                    .collect();
            for a in &all {
                for b in &all {
                    let (ma, mb) = (realize(a, logic).unwrap(), realize(b, logic).unwrap());
                    assert_eq!(a == b, bisimilar(&ma, &mb, &p));
                    if a != b {
                        let psi = separating_formula(a, b, &p);
                        assert_ne!(ma.check(&psi), mb.check(&psi));
                    }
                }
            }
        }
    }

    #[test]
    fn flat_complete_examples() {
        assert!(flat_complete(Logic::S5, &parse("p & <>[]p").unwrap())
            .unwrap()
            .is_complete());
        let v = flat_complete(Logic::S5, &parse("p").unwrap()).unwrap();
        assert!(!v.is_complete());
        let (m1, m2) = v.witnesses.unwrap();
        let psi = v.psi.unwrap();
        assert!(m1.check(&psi) && !m2.check(&psi));
        assert!(flat_complete(Logic::K5, &parse("[]false").unwrap())
            .unwrap()
            .is_complete());
        assert!(!flat_complete(Logic::K5, &Formula::Top)
            .unwrap()
            .is_complete());
    }

    #[test]
    fn transitive_five_logics_need_full_successor_sets() {
        let f = parse("<><>p & []~p").unwrap();
        assert!(!sat_shapes(Logic::K5, &f).unwrap().is_empty());
        assert!(sat_shapes(Logic::K45, &f).unwrap().is_empty());
    }

    #[test]
    fn read_off_recovers_shapes() {
        let m: PointedModel = "states: r a b\nedges: r->a a->a a->b b->a b->b\nval: a p\npoint: r"
            .parse()
            .unwrap();
        let sh = read_off(&m, &vs(&["p"]));
        assert_eq!(sh.successors, sets(&[&["p"]]));
        assert_eq!(sh.cluster, sets(&[&["p"], &[]]));
        assert!(bisimilar(
            &realize(&sh, Logic::K5).unwrap(),
            &m,
            &vs(&["p"])
        ));
    }

    #[test]
    fn variable_cap() {
        let f = parse("a & b & c & d & e & f & g").unwrap();
        assert!(matches!(
            sat_shapes(Logic::S5, &f),
            Err(Error::ResourceCap { .. })
        ));
    }
}
