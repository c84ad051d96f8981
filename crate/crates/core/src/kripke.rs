//! Finite pointed Kripke models, model checking, and the text format.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::formula::{Formula, VarSet};
use crate::logics::{is_frame_for, Logic};

/// A finite Kripke model `(W, R, V)` with a distinguished state.
///
/// States are indices `0..len()`; each carries an opaque name used only for
/// input and output. Successor lists are sorted and duplicate-free.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct PointedModel {
    names: Vec<String>,
    succ: Vec<Vec<usize>>,
    val: Vec<VarSet>,
    point: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate `{directive}` directive")]
    Duplicate { line: usize, directive: String },
    #[error("line {line}: unknown state `{name}`")]
    UnknownState { line: usize, name: String },
    #[error("missing `{0}` directive")]
    Missing(&'static str),
    #[error("invalid model: {0}")]
    Invalid(String),
}

impl PointedModel {
    /// Builds a model from successor lists, naming states `s0`, `s1`, ...
    pub fn from_parts(succ: Vec<Vec<usize>>, val: Vec<VarSet>, point: usize) -> PointedModel {
        let names = (0..succ.len()).map(|i| format!("s{i}")).collect();
        PointedModel::with_names(names, succ, val, point).expect("well-formed model parts")
    }

    pub fn with_names(
        names: Vec<String>,
        mut succ: Vec<Vec<usize>>,
        val: Vec<VarSet>,
        point: usize,
    ) -> Result<PointedModel, ModelError> {
        let n = names.len();
        if n == 0 {
            return Err(ModelError::Invalid("no states".into()));
        }
        if succ.len() != n || val.len() != n {
            return Err(ModelError::Invalid(
                "successor and valuation tables must cover every state".into(),
            ));
        }
        if point >= n {
            return Err(ModelError::Invalid(format!("point {point} out of range")));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != n {
            return Err(ModelError::Invalid("state names must be distinct".into()));
        }
        for out in &mut succ {
            out.sort_unstable();
            out.dedup();
            if out.last().is_some_and(|&b| b >= n) {
                return Err(ModelError::Invalid("edge to unknown state".into()));
            }
        }
        Ok(PointedModel {
            names,
            succ,
            val,
            point,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn point(&self) -> usize {
        self.point
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn successors(&self, s: usize) -> &[usize] {
        &self.succ[s]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.succ
    }

    pub fn valuation(&self, s: usize) -> &VarSet {
        &self.val[s]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.succ[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// `|W| + |R|`.
    pub fn size(&self) -> usize {
        self.len() + self.edge_count()
    }

    /// All variables true somewhere in the model.
    pub fn vars(&self) -> VarSet {
        self.val.iter().fold(VarSet::new(), |acc, v| acc.union(v))
    }

    pub fn is_model_for(&self, logic: Logic) -> bool {
        is_frame_for(&self.succ, logic)
    }

    /// The same model evaluated at another state.
    pub fn with_point(&self, point: usize) -> PointedModel {
        assert!(point < self.len(), "point out of range");
        PointedModel {
            point,
            ..self.clone()
        }
    }

    /// The truth value of `f` at the point.
    pub fn check(&self, f: &Formula) -> bool {
        self.eval(f)[self.point]
    }

    /// The truth value of `f` at every state.
    pub fn eval(&self, f: &Formula) -> Vec<bool> {
        let n = self.len();
        match f {
            Formula::Top => vec![true; n],
            Formula::Bottom => vec![false; n],
            Formula::Var(p) => self.val.iter().map(|v| v.contains(p)).collect(),
            Formula::NegVar(p) => self.val.iter().map(|v| !v.contains(p)).collect(),
            Formula::And(l, r) => {
                let mut a = self.eval(l);
                for (x, y) in a.iter_mut().zip(self.eval(r)) {
                    *x &= y;
                }
                a
            }
            Formula::Or(l, r) => {
                let mut a = self.eval(l);
                for (x, y) in a.iter_mut().zip(self.eval(r)) {
                    *x |= y;
                }
                a
            }
            Formula::Box(c) => {
                let a = self.eval(c);
                self.succ
                    .iter()
                    .map(|out| out.iter().all(|&t| a[t]))
                    .collect()
            }
            Formula::Diamond(c) => {
                let a = self.eval(c);
                self.succ
                    .iter()
                    .map(|out| out.iter().any(|&t| a[t]))
                    .collect()
            }
        }
    }

    /// States reachable from `x`, including `x`.
    pub fn reach(&self, x: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([x]);
        let mut stack = vec![x];
        while let Some(s) = stack.pop() {
            for &t in &self.succ[s] {
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// The submodel induced on the states reachable from the point, keeping
    /// the original relative order of states.
    pub fn restrict_to_reachable(&self) -> PointedModel {
        let keep = self.reach(self.point);
        if keep.len() == self.len() {
            return self.clone();
        }
        self.induced(&keep)
    }

    /// The submodel induced on `keep`, which must contain the point.
    pub fn induced(&self, keep: &BTreeSet<usize>) -> PointedModel {
        assert!(
            keep.contains(&self.point),
            "induced submodel must keep the point"
        );
        let index: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let names = keep.iter().map(|&s| self.names[s].clone()).collect();
        let succ = keep
            .iter()
            .map(|&s| {
                self.succ[s]
                    .iter()
                    .filter_map(|t| index.get(t).copied())
                    .collect()
            })
            .collect();
        let val = keep.iter().map(|&s| self.val[s].clone()).collect();
        PointedModel::with_names(names, succ, val, index[&self.point]).expect("induced submodel")
    }

    /// The same model with every state renamed by `rename`.
    pub fn renamed(&self, rename: impl Fn(&str) -> String) -> Result<PointedModel, ModelError> {
        let names = self.names.iter().map(|n| rename(n)).collect();
        PointedModel::with_names(names, self.succ.clone(), self.val.clone(), self.point)
    }

    /// Reorders states by the permutation `perm` (old index `i` becomes
    /// `perm[i]`), keeping names attached to their states.
    pub fn permuted(&self, perm: &[usize]) -> PointedModel {
        let n = self.len();
        assert_eq!(perm.len(), n);
        let mut names = vec![String::new(); n];
        let mut succ = vec![Vec::new(); n];
        let mut val = vec![VarSet::new(); n];
        for i in 0..n {
            names[perm[i]] = self.names[i].clone();
            succ[perm[i]] = self.succ[i].iter().map(|&t| perm[t]).collect();
            val[perm[i]] = self.val[i].clone();
        }
        PointedModel::with_names(names, succ, val, perm[self.point]).expect("permutation")
    }

    /// Disjoint union with `other`; states of `other` are shifted by
    /// `self.len()`. The point is kept from `self`.
    pub fn disjoint_union(&self, other: &PointedModel) -> PointedModel {
        let off = self.len();
        let mut names: Vec<String> = self.names.iter().map(|n| format!("l.{n}")).collect();
        names.extend(other.names.iter().map(|n| format!("r.{n}")));
        let mut succ = self.succ.clone();
        succ.extend(
            other
                .succ
                .iter()
                .map(|out| out.iter().map(|t| t + off).collect()),
        );
        let mut val = self.val.clone();
        val.extend(other.val.iter().cloned());
        PointedModel::with_names(names, succ, val, self.point).expect("disjoint union")
    }

    pub fn state_named(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

impl fmt::Display for PointedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states: {}", self.names.join(" "))?;
        let edges: Vec<String> = self
            .succ
            .iter()
            .enumerate()
            .flat_map(|(a, out)| {
                out.iter()
                    .map(move |&b| format!("{}->{}", self.names[a], self.names[b]))
            })
            .collect();
        if !edges.is_empty() {
            writeln!(f, "edges: {}", edges.join(" "))?;
        }
        for (s, v) in self.val.iter().enumerate() {
            if !v.is_empty() {
                let vars: Vec<&str> = v.iter().collect();
                writeln!(f, "val: {} {}", self.names[s], vars.join(" "))?;
            }
        }
        writeln!(f, "point: {}", self.names[self.point])
    }
}

impl fmt::Debug for PointedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for s in 0..self.len() {
            let out: Vec<&str> = self.succ[s]
                .iter()
                .map(|&t| self.names[t].as_str())
                .collect();
            parts.push(format!(
                "{}{}{}->[{}]",
                if s == self.point { "*" } else { "" },
                self.names[s],
                self.val[s],
                out.join(",")
            ));
        }
        write!(f, "Model({})", parts.join(" "))
    }
}

fn valid_state_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '\''))
}

fn valid_var_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
        && s != "true"
        && s != "false"
}

impl FromStr for PointedModel {
    type Err = ModelError;

    fn from_str(text: &str) -> Result<PointedModel, ModelError> {
        let mut states: Option<Vec<String>> = None;
        let mut edge_line: Option<(usize, Vec<(String, String)>)> = None;
        let mut vals: Vec<(usize, String, Vec<String>)> = Vec::new();
        let mut point: Option<(usize, String)> = None;

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, rest) = content.split_once(':').ok_or_else(|| ModelError::Syntax {
                line,
                message: format!("expected `directive: ...`, found {content:?}"),
            })?;
            let words: Vec<&str> = rest.split_whitespace().collect();
            let dup = |d: &str| ModelError::Duplicate {
                line,
                directive: d.to_owned(),
            };
            match key.trim() {
                "states" => {
                    if states.is_some() {
                        return Err(dup("states"));
                    }
                    if let Some(bad) = words.iter().find(|w| !valid_state_name(w)) {
                        return Err(ModelError::Syntax {
                            line,
                            message: format!("invalid state name {bad:?}"),
                        });
                    }
                    states = Some(words.iter().map(|w| w.to_string()).collect());
                }
                "edges" => {
                    if edge_line.is_some() {
                        return Err(dup("edges"));
                    }
                    let mut edges = Vec::new();
                    for w in words {
                        let (a, b) = w.split_once("->").ok_or_else(|| ModelError::Syntax {
                            line,
                            message: format!("expected `a->b`, found {w:?}"),
                        })?;
                        edges.push((a.to_owned(), b.to_owned()));
                    }
                    edge_line = Some((line, edges));
                }
                "val" => {
                    let (state, vars) = words.split_first().ok_or_else(|| ModelError::Syntax {
                        line,
                        message: "`val` needs a state name".into(),
                    })?;
                    if let Some(bad) = vars.iter().find(|v| !valid_var_name(v)) {
                        return Err(ModelError::Syntax {
                            line,
                            message: format!("invalid variable name {bad:?}"),
                        });
                    }
                    if vals.iter().any(|(_, s, _)| s == state) {
                        return Err(dup(&format!("val: {state}")));
                    }
                    vals.push((
                        line,
                        state.to_string(),
                        vars.iter().map(|v| v.to_string()).collect(),
                    ));
                }
                "point" => {
                    if point.is_some() {
                        return Err(dup("point"));
                    }
                    match words.as_slice() {
                        [p] => point = Some((line, p.to_string())),
                        _ => {
                            return Err(ModelError::Syntax {
                                line,
                                message: "`point` takes exactly one state".into(),
                            })
                        }
                    }
                }
                other => {
                    return Err(ModelError::Syntax {
                        line,
                        message: format!("unknown directive {other:?}"),
                    })
                }
            }
        }

        let names = states.ok_or(ModelError::Missing("states"))?;
        let (pline, pname) = point.ok_or(ModelError::Missing("point"))?;
        let lookup = |line: usize, name: &str| {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| ModelError::UnknownState {
                    line,
                    name: name.to_owned(),
                })
        };
        let n = names.len();
        let mut succ = vec![Vec::new(); n];
        if let Some((line, edges)) = edge_line {
            for (a, b) in edges {
                let (a, b) = (lookup(line, &a)?, lookup(line, &b)?);
                succ[a].push(b);
            }
        }
        let mut val = vec![VarSet::new(); n];
        for (line, state, vars) in vals {
            val[lookup(line, &state)?] = vars.iter().collect();
        }
        let p = lookup(pline, &pname)?;
        PointedModel::with_names(names, succ, val, p)
    }
}

impl From<PointedModel> for String {
    fn from(m: PointedModel) -> String {
        m.to_string()
    }
}

impl TryFrom<String> for PointedModel {
    type Error = ModelError;

    fn try_from(s: String) -> Result<PointedModel, ModelError> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn vs(items: &[&str]) -> VarSet {
        items.iter().collect()
    }

    #[test]
    fn check_examples() {
        let dead = PointedModel::from_parts(vec![vec![]], vec![VarSet::new()], 0);
        assert!(dead.check(&parse("[]false").unwrap()));
        let ab = PointedModel::from_parts(vec![vec![1], vec![]], vec![vs(&[]), vs(&["p"])], 0);
        assert!(ab.check(&parse("<>p").unwrap()));
        let refl = PointedModel::from_parts(vec![vec![0]], vec![vs(&["p"])], 0);
        assert!(refl.check(&parse("p & <>[]p").unwrap()));
        // unknown variables are false
        assert!(refl.check(&parse("~q").unwrap()));
    }

    #[test]
    fn reach_examples() {
        let iso = PointedModel::from_parts(vec![vec![], vec![]], vec![VarSet::new(); 2], 0);
        assert_eq!(iso.reach(0), BTreeSet::from([0]));
        let chain =
            PointedModel::from_parts(vec![vec![1], vec![2], vec![]], vec![VarSet::new(); 3], 0);
        assert_eq!(chain.reach(0), BTreeSet::from([0, 1, 2]));
        let cycle = PointedModel::from_parts(vec![vec![1], vec![0]], vec![VarSet::new(); 2], 0);
        assert_eq!(cycle.reach(0), BTreeSet::from([0, 1]));
    }

    #[test]
    fn restriction() {
        let chain =
            PointedModel::from_parts(vec![vec![1], vec![2], vec![]], vec![VarSet::new(); 3], 0);
        assert_eq!(chain.restrict_to_reachable(), chain);
        let island = PointedModel::from_parts(
            vec![vec![1], vec![], vec![2]],
            vec![vs(&[]), vs(&["p"]), vs(&["q"])],
            0,
        );
        let r = island.restrict_to_reachable();
        assert_eq!(r.len(), 2);
        assert!(r.size() <= island.size());
        assert_eq!(r.restrict_to_reachable(), r);
        assert_eq!(r.names(), &["s0".to_string(), "s1".to_string()]);
    }

    #[test]
    fn text_format_round_trip() {
        let text = "# a model\nstates: a b c\nedges: a->b b->c\nval: a p q\nval: b p\npoint: a\n";
        let m: PointedModel = text.parse().unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(m.edge_count(), 2);
        assert_eq!(m.size(), 5);
        assert_eq!(m.valuation(0), &vs(&["p", "q"]));
        assert!(m.valuation(2).is_empty());
        let again: PointedModel = m.to_string().parse().unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn text_format_errors() {
        assert!(matches!(
            "states: a\nstates: b\npoint: a".parse::<PointedModel>(),
            Err(ModelError::Duplicate { line: 2, .. })
        ));
        assert!(matches!(
            "states: a\nval: a p\nval: a q\npoint: a".parse::<PointedModel>(),
            Err(ModelError::Duplicate { line: 3, .. })
        ));
        assert!(matches!(
            "states: a\nedges: a->b\npoint: a".parse::<PointedModel>(),
            Err(ModelError::UnknownState { line: 2, .. })
        ));
        assert!(matches!(
            "states: a".parse::<PointedModel>(),
            Err(ModelError::Missing("point"))
        ));
        assert!(matches!(
            "states: a\nedges: ab\npoint: a".parse::<PointedModel>(),
            Err(ModelError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            "states: a\nval: a P\npoint: a".parse::<PointedModel>(),
            Err(ModelError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn renaming_is_transparent() {
        let m: PointedModel = "states: a b\nedges: a->b b->b\nval: b p\npoint: a"
            .parse()
            .unwrap();
        let r = m.renamed(|n| format!("{n}_x")).unwrap();
        for f in ["<>p", "[]<>p", "p", "<>[]~p"] {
            let f = parse(f).unwrap();
            assert_eq!(m.check(&f), r.check(&f));
        }
        let perm = m.permuted(&[1, 0]);
        assert_eq!(perm.name(perm.point()), "a");
        assert!(perm.check(&parse("<>p & []<>p").unwrap()));
    }
}
