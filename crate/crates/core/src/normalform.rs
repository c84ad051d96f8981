//! Fine normal forms for K.
//!
//! A normal form of depth `d` over `P` fixes the valuation of the root and,
//! for `d > 0`, exactly which normal forms of depth `d - 1` occur among its
//! successors. Every K-consistent formula of depth at most `d` is equivalent
//! to a disjunction of them, and distinct forms exclude each other.

use std::collections::BTreeSet;

use crate::cc::cc_decide;
use crate::error::{Error, Result};
use crate::formula::{big_and, big_or, valuation_formula, Formula, VarSet};
use crate::kripke::PointedModel;
use crate::logics::Logic;

const MODULE: &str = "normalform";

/// Largest number of forms a single enumeration may produce.
pub const MAX_FORMS: u64 = 1 << 16;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NormalForm {
    depth: usize,
    valuation: VarSet,
    children: BTreeSet<NormalForm>,
}

impl NormalForm {
    pub fn leaf(valuation: VarSet) -> NormalForm {
        NormalForm {
            depth: 0,
            valuation,
            children: BTreeSet::new(),
        }
    }

    /// A form of depth `depth`; every child must have depth `depth - 1`.
    pub fn node(
        depth: usize,
        valuation: VarSet,
        children: BTreeSet<NormalForm>,
    ) -> Result<NormalForm> {
        if depth == 0 || children.iter().any(|c| c.depth + 1 != depth) {
            return Err(Error::Precondition(format!(
                "children of a depth-{depth} form must have depth {}",
                depth.saturating_sub(1)
            )));
        }
        Ok(NormalForm {
            depth,
            valuation,
            children,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn valuation(&self) -> &VarSet {
        &self.valuation
    }

    pub fn children(&self) -> &BTreeSet<NormalForm> {
        &self.children
    }

    /// The formula the form denotes over `vars`.
    pub fn to_formula(&self, vars: &VarSet) -> Formula {
        let root = valuation_formula(vars, &self.valuation);
        if self.depth == 0 {
            return root;
        }
        let kids: Vec<Formula> = self.children.iter().map(|c| c.to_formula(vars)).collect();
        let mut parts = vec![root];
        parts.extend(kids.iter().cloned().map(Formula::diamond));
        parts.push(Formula::boxed(big_or(kids)));
        big_and(parts)
    }

    /// The tree model the form describes, with dead ends below its depth.
    pub fn tree_model(&self) -> PointedModel {
        fn build(nf: &NormalForm, succ: &mut Vec<Vec<usize>>, val: &mut Vec<VarSet>) -> usize {
            let me = succ.len();
            succ.push(Vec::new());
            val.push(nf.valuation.clone());
            for c in &nf.children {
                let child = build(c, succ, val);
                succ[me].push(child);
            }
            me
        }
        let (mut succ, mut val) = (Vec::new(), Vec::new());
        build(self, &mut succ, &mut val);
        PointedModel::from_parts(succ, val, 0)
    }
}

/// Number of forms of depth `depth` over `vars`, if it is at most [`MAX_FORMS`].
pub fn form_count(vars: &VarSet, depth: usize) -> Option<u64> {
    if vars.len() >= 16 {
        return None;
    }
    let base = 1u64 << vars.len();
    let mut count = base;
    for _ in 0..depth {
        if count >= 48 {
            return None;
        }
        count = base.checked_mul(1 << count)?;
    }
    (count <= MAX_FORMS).then_some(count)
}

/// Every form of depth `depth` over `vars`, in canonical order.
pub fn enumerate_forms(vars: &VarSet, depth: usize) -> Result<Vec<NormalForm>> {
    if form_count(vars, depth).is_none() {
        return Err(Error::cap(
            MODULE,
            format!(
                "depth {depth} over {} variables exceeds {MAX_FORMS} forms",
                vars.len()
            ),
        ));
    }
    let valuations: Vec<VarSet> = (0..1u64 << vars.len())
        .map(|m| vars.subset_from_mask(m))
        .collect();
    let mut forms: Vec<NormalForm> = valuations.iter().cloned().map(NormalForm::leaf).collect();
    for d in 1..=depth {
        let below = forms;
        forms = Vec::new();
        for v in &valuations {
            for mask in 0u64..1 << below.len() {
                let children = (0..below.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| below[i].clone())
                    .collect();
                forms.push(NormalForm {
                    depth: d,
                    valuation: v.clone(),
                    children,
                });
            }
        }
    }
    forms.sort();
    Ok(forms)
}

/// The forms of depth `md(f)` over `vars(f)` whose disjunction is
/// K-equivalent to `f`.
pub fn normal_forms_of(f: &Formula) -> Result<BTreeSet<NormalForm>> {
    normal_forms_over(f, &f.vars(), f.modal_depth())
}

/// As [`normal_forms_of`] over explicit `vars ⊇ vars(f)` and `depth ≥ md(f)`.
pub fn normal_forms_over(f: &Formula, vars: &VarSet, depth: usize) -> Result<BTreeSet<NormalForm>> {
    if !f.vars().is_subset(vars) || depth < f.modal_depth() {
        return Err(Error::Precondition(format!(
            "{f} is not over the given variables and depth"
        )));
    }
    Ok(enumerate_forms(vars, depth)?
        .into_iter()
        .filter(|nf| nf.tree_model().check(f))
        .collect())
}

/// Whether every branch of the form ends strictly above its depth.
pub fn grounded(nf: &NormalForm) -> bool {
    nf.depth >= 1 && nf.children.iter().all(grounded)
}

/// Completeness for K read off the normal forms: unsatisfiable, or a single
/// grounded form.
pub fn complete_by_grounded_form(f: &Formula) -> Result<bool> {
    let forms = normal_forms_of(f)?;
    Ok(match forms.len() {
        0 => true,
        1 => grounded(forms.first().unwrap()),
        _ => false,
    })
}

/// Whether `f` decides, in K, every formula over its variables of depth at
/// most its own. Uses normal forms when they fit and the bounded-tree
/// reduction otherwise.
pub fn complete_up_to_depth(f: &Formula) -> Result<bool> {
    match up_to_depth_by_forms(f) {
        Err(Error::ResourceCap { .. }) => up_to_depth_by_bounding(f),
        other => other,
    }
}

/// At most one normal form.
pub fn up_to_depth_by_forms(f: &Formula) -> Result<bool> {
    Ok(normal_forms_of(f)?.len() <= 1)
}

/// Completeness of `f & []^(md(f)+1) false` in K.
pub fn up_to_depth_by_bounding(f: &Formula) -> Result<bool> {
    Ok(cc_decide(Logic::K, &bounded(f))?.is_complete())
}

/// `f & []^(md(f)+1) false`.
pub fn bounded(f: &Formula) -> Formula {
    Formula::and(f.clone(), Formula::Bottom.boxes(f.modal_depth() + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::prover::{consistent, provable};

    fn p() -> VarSet {
        ["p"].into_iter().collect()
    }

    #[test]
    fn counts_follow_the_definition() {
        let counts: Vec<usize> = (0..=2)
            .map(|d| enumerate_forms(&p(), d).unwrap().len())
            .collect();
        assert_eq!(counts, [2, 8, 512]);
        let counts: Vec<usize> = (0..=2)
            .map(|d| enumerate_forms(&VarSet::new(), d).unwrap().len())
            .collect();
        assert_eq!(counts, [1, 2, 4]);
        for d in 0..=2 {
            assert_eq!(form_count(&p(), d), Some(counts_p(d)));
        }
        assert!(enumerate_forms(&["p", "q"].into_iter().collect(), 2).is_err());
    }

    fn counts_p(d: usize) -> u64 {
        [2, 8, 512][d]
    }

    #[test]
    fn forms_of_examples() {
        assert_eq!(normal_forms_of(&parse("<>p").unwrap()).unwrap().len(), 4);
        assert!(normal_forms_of(&Formula::Bottom).unwrap().is_empty());
        let f = parse("p & <>p & []p").unwrap();
        let forms = normal_forms_of(&f).unwrap();
        assert_eq!(forms.len(), 1);
        let nf = forms.first().unwrap();
        assert_eq!(nf.valuation(), &p());
        assert_eq!(nf.children().len(), 1);
        assert!(provable(Logic::K, &nf.to_formula(&p()).iff(&f)).unwrap());
    }

    #[test]
    fn up_to_depth_examples() {
        for f in ["p & <>p & []p", "true", "p & []false", "false"] {
            let f = parse(f).unwrap();
            assert!(up_to_depth_by_forms(&f).unwrap());
            assert!(up_to_depth_by_bounding(&f).unwrap());
        }
        let f = parse("<>p").unwrap();
        assert!(!up_to_depth_by_forms(&f).unwrap());
        assert!(!up_to_depth_by_bounding(&f).unwrap());
    }

    #[test]
    fn grounded_examples() {
        let dead = NormalForm::node(1, p(), BTreeSet::new()).unwrap();
        assert!(grounded(&dead));
        let open = NormalForm::node(1, p(), BTreeSet::from([NormalForm::leaf(p())])).unwrap();
        assert!(!grounded(&open));
        assert!(!grounded(&NormalForm::leaf(p())));
        assert!(complete_by_grounded_form(&parse("p & []false").unwrap()).unwrap());
        assert!(!complete_by_grounded_form(&parse("p & <>p & []p").unwrap()).unwrap());
    }

    #[test]
    fn depth_one_forms_partition_k() {
        let forms: Vec<Formula> = enumerate_forms(&p(), 1)
            .unwrap()
            .iter()
            .map(|nf| nf.to_formula(&p()))
            .collect();
        for (i, a) in forms.iter().enumerate() {
            assert!(consistent(Logic::K, [a]).unwrap());
            for b in &forms[i + 1..] {
                assert!(!consistent(Logic::K, [a, b]).unwrap());
            }
        }
        assert!(provable(Logic::K, &big_or(forms)).unwrap());
    }

    #[test]
    fn node_checks_depth() {
        assert!(NormalForm::node(2, p(), BTreeSet::from([NormalForm::leaf(p())])).is_err());
        assert!(NormalForm::node(0, p(), BTreeSet::new()).is_err());
    }
}
