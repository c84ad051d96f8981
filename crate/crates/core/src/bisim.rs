//! Bisimilarity modulo a set of variables.
//!
//! [`bisimilar`] refines a partition of the disjoint union of the two models
//! with a splitter worklist; [`naive_bisimilar`] computes the greatest
//! bisimulation by deleting violating pairs until nothing changes and serves
//! as its oracle.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::formula::{big_and, big_or, Formula, VarSet};
use crate::kripke::PointedModel;

/// A partition of the states of a disjoint union.
#[derive(Clone, Debug)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn block_of(&self, s: usize) -> usize {
        self.block_of[s]
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Stacks the adjacency lists of `m1` and `m2`, shifting `m2` by `m1.len()`.
fn union_graph(m1: &PointedModel, m2: &PointedModel) -> Vec<Vec<usize>> {
    let off = m1.len();
    let mut succ: Vec<Vec<usize>> = m1.adjacency().to_vec();
    succ.extend(
        m2.adjacency()
            .iter()
            .map(|out| out.iter().map(|t| t + off).collect()),
    );
    succ
}

fn restricted_valuations(m1: &PointedModel, m2: &PointedModel, vars: &VarSet) -> Vec<VarSet> {
    (0..m1.len())
        .map(|s| m1.valuation(s).intersection(vars))
        .chain((0..m2.len()).map(|s| m2.valuation(s).intersection(vars)))
        .collect()
}

fn initial_labels(vals: &[VarSet]) -> Vec<usize> {
    let mut ids: HashMap<&VarSet, usize> = HashMap::new();
    vals.iter()
        .map(|v| {
            let next = ids.len();
            *ids.entry(v).or_insert(next)
        })
        .collect()
}

/// The coarsest stable refinement of `labels` with respect to `succ`.
pub fn coarsest_partition(succ: &[Vec<usize>], labels: &[usize]) -> Partition {
    let n = succ.len();
    let mut pred = vec![Vec::new(); n];
    for (s, out) in succ.iter().enumerate() {
        for &t in out {
            pred[t].push(s);
        }
    }

    let mut block_of = vec![0; n];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut ids: HashMap<usize, usize> = HashMap::new();
    for (s, &l) in labels.iter().enumerate() {
        let b = *ids.entry(l).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[b].push(s);
        block_of[s] = b;
    }

    let mut queued = vec![true; blocks.len()];
    let mut worklist: VecDeque<usize> = (0..blocks.len()).collect();
    let mut marked = vec![false; n];
    let mut hits: Vec<usize> = vec![0; blocks.len()];

    while let Some(splitter) = worklist.pop_front() {
        queued[splitter] = false;
        let mut pre: Vec<usize> = Vec::new();
        for &t in &blocks[splitter] {
            for &s in &pred[t] {
                if !marked[s] {
                    marked[s] = true;
                    pre.push(s);
                }
            }
        }
        let mut touched = Vec::new();
        for &s in &pre {
            let b = block_of[s];
            if hits[b] == 0 {
                touched.push(b);
            }
            hits[b] += 1;
        }
        for b in touched {
            let count = std::mem::take(&mut hits[b]);
            if count == blocks[b].len() {
                continue;
            }
            let (inside, outside): (Vec<usize>, Vec<usize>) =
                blocks[b].iter().partition(|&&s| marked[s]);
            let fresh = blocks.len();
            for &s in &inside {
                block_of[s] = fresh;
            }
            blocks[b] = outside;
            blocks.push(inside);
            queued.push(true);
            hits.push(0);
            worklist.push_back(fresh);
            if !queued[b] {
                queued[b] = true;
                worklist.push_back(b);
            }
        }
        for s in pre {
            marked[s] = false;
        }
    }
    Partition { block_of, blocks }
}

/// Whether the points of `m1` and `m2` are bisimilar modulo `vars`.
pub fn bisimilar(m1: &PointedModel, m2: &PointedModel, vars: &VarSet) -> bool {
    let succ = union_graph(m1, m2);
    let labels = initial_labels(&restricted_valuations(m1, m2, vars));
    let part = coarsest_partition(&succ, &labels);
    part.block_of(m1.point()) == part.block_of(m1.len() + m2.point())
}

/// The greatest bisimulation modulo `vars` between the states of `m1` and
/// `m2`, as a matrix indexed `[s1][s2]`.
pub fn greatest_bisimulation(
    m1: &PointedModel,
    m2: &PointedModel,
    vars: &VarSet,
) -> Vec<Vec<bool>> {
    let (n1, n2) = (m1.len(), m2.len());
    let mut rel: Vec<Vec<bool>> = (0..n1)
        .map(|a| {
            let va = m1.valuation(a).intersection(vars);
            (0..n2)
                .map(|b| m2.valuation(b).intersection(vars) == va)
                .collect()
        })
        .collect();
    loop {
        let mut changed = false;
        for a in 0..n1 {
            for b in 0..n2 {
                if !rel[a][b] {
                    continue;
                }
                let forth = m1
                    .successors(a)
                    .iter()
                    .all(|&a2| m2.successors(b).iter().any(|&b2| rel[a2][b2]));
                let back = m2
                    .successors(b)
                    .iter()
                    .all(|&b2| m1.successors(a).iter().any(|&a2| rel[a2][b2]));
                if !(forth && back) {
                    rel[a][b] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

/// Same answer as [`bisimilar`], by the greatest-fixpoint definition.
pub fn naive_bisimilar(m1: &PointedModel, m2: &PointedModel, vars: &VarSet) -> bool {
    greatest_bisimulation(m1, m2, vars)[m1.point()][m2.point()]
}

/// A formula over `vars` true at the point of `m1` and false at the point of
/// `m2`, or `None` when the points are bisimilar modulo `vars`.
pub fn distinguishing_formula(
    m1: &PointedModel,
    m2: &PointedModel,
    vars: &VarSet,
) -> Option<Formula> {
    let succ = union_graph(m1, m2);
    let vals = restricted_valuations(m1, m2, vars);
    let levels = refinement_levels(&succ, &vals);
    let (a, b) = (m1.point(), m1.len() + m2.point());
    if levels.last().unwrap()[a] == levels.last().unwrap()[b] {
        return None;
    }
    let mut ctx = Distinguisher {
        succ: &succ,
        vals: &vals,
        levels: &levels,
        memo: HashMap::new(),
    };
    Some(ctx.dist(a, b))
}

/// Class labels after `k` rounds of refinement, for every `k` up to
/// stabilisation.
fn refinement_levels(succ: &[Vec<usize>], vals: &[VarSet]) -> Vec<Vec<usize>> {
    let mut levels = vec![initial_labels(vals)];
    loop {
        let prev = levels.last().unwrap();
        let mut ids: HashMap<(usize, BTreeSet<usize>), usize> = HashMap::new();
        let next: Vec<usize> = (0..succ.len())
            .map(|s| {
                let sig = (prev[s], succ[s].iter().map(|&t| prev[t]).collect());
                let fresh = ids.len();
                *ids.entry(sig).or_insert(fresh)
            })
            .collect();
        let count_prev = prev.iter().collect::<BTreeSet<_>>().len();
        let stable = ids.len() == count_prev;
        levels.push(next);
        if stable {
            return levels;
        }
    }
}

struct Distinguisher<'a> {
    succ: &'a [Vec<usize>],
    vals: &'a [VarSet],
    levels: &'a [Vec<usize>],
    memo: HashMap<(usize, usize), Formula>,
}

impl Distinguisher<'_> {
    /// A formula true at `s` and false at `t`; the two must be separated at
    /// some refinement level.
    fn dist(&mut self, s: usize, t: usize) -> Formula {
        if let Some(f) = self.memo.get(&(s, t)) {
            return f.clone();
        }
        let k = (0..self.levels.len())
            .find(|&k| self.levels[k][s] != self.levels[k][t])
            .expect("states separated at some level");
        let f = if k == 0 {
            let (vs, vt) = (&self.vals[s], &self.vals[t]);
            match vs.iter().find(|p| !vt.contains(p)) {
                Some(p) => Formula::var(p),
                None => Formula::neg_var(vt.iter().find(|p| !vs.contains(p)).unwrap()),
            }
        } else {
            let prev = &self.levels[k - 1];
            let t_classes: BTreeSet<usize> = self.succ[t].iter().map(|&x| prev[x]).collect();
            let s_classes: BTreeSet<usize> = self.succ[s].iter().map(|&x| prev[x]).collect();
            if let Some(&s2) = self.succ[s]
                .iter()
                .find(|&&x| !t_classes.contains(&prev[x]))
            {
                let parts: Vec<Formula> = self.succ[t]
                    .iter()
                    .map(|&t2| self.dist(s2, t2))
                    .collect();
                Formula::diamond(big_and(parts))
            } else {
                let t2 = *self.succ[t]
                    .iter()
                    .find(|&&x| !s_classes.contains(&prev[x]))
                    .expect("successor signatures differ");
                let parts: Vec<Formula> = self.succ[s]
                    .iter()
                    .map(|&s2| self.dist(t2, s2).negate())
                    .collect();
                Formula::boxed(big_or(parts))
            }
        };
        self.memo.insert((s, t), f.clone());
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(items: &[&str]) -> VarSet {
        items.iter().collect()
    }

    fn both(m1: &PointedModel, m2: &PointedModel, vars: &VarSet) -> bool {
        let fast = bisimilar(m1, m2, vars);
        assert_eq!(fast, naive_bisimilar(m1, m2, vars));
        match distinguishing_formula(m1, m2, vars) {
            None => assert!(fast),
            Some(f) => {
                assert!(!fast);
                assert!(f.vars().is_subset(vars));
                assert!(m1.check(&f) && !m2.check(&f), "{f}");
            }
        }
        fast
    }

    #[test]
    fn identical_single_states() {
        let m = PointedModel::from_parts(vec![vec![]], vec![vs(&["p"])], 0);
        assert!(both(&m, &m, &vs(&["p"])));
    }

    #[test]
    fn dead_end_versus_loop() {
        let dead = PointedModel::from_parts(vec![vec![]], vec![VarSet::new()], 0);
        let looped = PointedModel::from_parts(vec![vec![0]], vec![VarSet::new()], 0);
        assert!(!both(&dead, &looped, &VarSet::new()));
        assert!(!both(&looped, &dead, &VarSet::new()));
    }

    #[test]
    fn loop_versus_chain_into_loop() {
        let p = vs(&["p"]);
        let looped = PointedModel::from_parts(vec![vec![0]], vec![p.clone()], 0);
        let chain = PointedModel::from_parts(
            vec![vec![1], vec![2], vec![3], vec![3]],
            vec![p.clone(); 4],
            0,
        );
        assert!(both(&looped, &chain, &p));
    }

    #[test]
    fn serial_models_agree_without_variables() {
        let a = PointedModel::from_parts(vec![vec![1], vec![0, 1]], vec![vs(&["p"]), vs(&[])], 0);
        let b = PointedModel::from_parts(vec![vec![0]], vec![vs(&["q"])], 0);
        assert!(both(&a, &b, &VarSet::new()));
        assert!(!both(&a, &b, &vs(&["p"])));
    }

    #[test]
    fn variables_outside_the_set_are_ignored() {
        let a = PointedModel::from_parts(vec![vec![]], vec![vs(&["p", "q"])], 0);
        let b = PointedModel::from_parts(vec![vec![]], vec![vs(&["p"])], 0);
        assert!(both(&a, &b, &vs(&["p"])));
        assert!(!both(&a, &b, &vs(&["p", "q"])));
    }

    #[test]
    fn branching_difference_needs_a_box() {
        // a -> {b(p)}, versus a -> {b(p), c()}
        let p = vs(&["p"]);
        let m1 = PointedModel::from_parts(vec![vec![1], vec![]], vec![vs(&[]), p.clone()], 0);
        let m2 = PointedModel::from_parts(
            vec![vec![1, 2], vec![], vec![]],
            vec![vs(&[]), p.clone(), vs(&[])],
            0,
        );
        assert!(!both(&m1, &m2, &p));
        assert!(!both(&m2, &m1, &p));
    }
}
