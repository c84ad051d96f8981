//! Modal formulas in negation normal form, the surface syntax, and the
//! syntactic measures (modal depth, subformulas, closure, size).
//!
//! Negation only ever appears on variables. `~`, `->` and `<->` exist in the
//! surface syntax and are eliminated while parsing.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::logics::Logic;

/// A modal formula in negation normal form.
///
/// The derived ordering (constructor first, then children left to right) is
/// the canonical order used by [`big_and`], [`big_or`] and every enumeration
/// in the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Formula {
    Top,
    Bottom,
    Var(Arc<str>),
    NegVar(Arc<str>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Box(Arc<Formula>),
    Diamond(Arc<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(Arc::from(name))
    }

    pub fn neg_var(name: &str) -> Formula {
        Formula::NegVar(Arc::from(name))
    }

    pub fn and(left: Formula, right: Formula) -> Formula {
        Formula::And(Arc::new(left), Arc::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Formula {
        Formula::Or(Arc::new(left), Arc::new(right))
    }

    pub fn boxed(child: Formula) -> Formula {
        Formula::Box(Arc::new(child))
    }

    pub fn diamond(child: Formula) -> Formula {
        Formula::Diamond(Arc::new(child))
    }

    /// `self -> other`, as `~self | other`.
    pub fn implies(&self, other: &Formula) -> Formula {
        Formula::or(self.negate(), other.clone())
    }

    /// `self <-> other`, as `(~self | other) & (self | ~other)`.
    pub fn iff(&self, other: &Formula) -> Formula {
        Formula::and(
            Formula::or(self.negate(), other.clone()),
            Formula::or(self.clone(), other.negate()),
        )
    }

    /// `n` nested boxes around `self`.
    pub fn boxes(&self, n: usize) -> Formula {
        (0..n).fold(self.clone(), |acc, _| Formula::boxed(acc))
    }

    /// `n` nested diamonds around `self`.
    pub fn diamonds(&self, n: usize) -> Formula {
        (0..n).fold(self.clone(), |acc, _| Formula::diamond(acc))
    }

    /// The negation normal form of `~self`.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Top => Formula::Bottom,
            Formula::Bottom => Formula::Top,
            Formula::Var(p) => Formula::NegVar(p.clone()),
            Formula::NegVar(p) => Formula::Var(p.clone()),
            Formula::And(l, r) => Formula::or(l.negate(), r.negate()),
            Formula::Or(l, r) => Formula::and(l.negate(), r.negate()),
            Formula::Box(c) => Formula::diamond(c.negate()),
            Formula::Diamond(c) => Formula::boxed(c.negate()),
        }
    }

    /// Modal depth: the deepest nesting of `[]`/`<>`.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bottom | Formula::Var(_) | Formula::NegVar(_) => 0,
            Formula::And(l, r) | Formula::Or(l, r) => l.modal_depth().max(r.modal_depth()),
            Formula::Box(c) | Formula::Diamond(c) => c.modal_depth() + 1,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::Var(_) | Formula::NegVar(_))
    }

    pub fn is_modal(&self) -> bool {
        matches!(self, Formula::Box(_) | Formula::Diamond(_))
    }

    /// The variables occurring in the formula.
    pub fn vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut VarSet) {
        match self {
            Formula::Top | Formula::Bottom => {}
            Formula::Var(p) | Formula::NegVar(p) => {
                out.insert(p);
            }
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Formula::Box(c) | Formula::Diamond(c) => c.collect_vars(out),
        }
    }

    /// The set of distinct subformulas, including `self`.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.contains(self) {
            return;
        }
        match self {
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_subformulas(out);
                r.collect_subformulas(out);
            }
            Formula::Box(c) | Formula::Diamond(c) => c.collect_subformulas(out),
            _ => {}
        }
        out.insert(self.clone());
    }

    /// Number of distinct subformulas.
    pub fn size(&self) -> usize {
        self.subformulas().len()
    }

    /// Subformulas together with their negations.
    pub fn closure(&self) -> BTreeSet<Formula> {
        let sub = self.subformulas();
        let negs: Vec<Formula> = sub.iter().map(Formula::negate).collect();
        let mut out = sub;
        out.extend(negs);
        out
    }

    /// Members of [`Formula::closure`] with modal depth at most `depth`.
    pub fn closure_at_depth(&self, depth: usize) -> BTreeSet<Formula> {
        self.closure()
            .into_iter()
            .filter(|f| f.modal_depth() <= depth)
            .collect()
    }
}

/// Canonical right-nested conjunction; the empty conjunction is `true`.
pub fn big_and<I: IntoIterator<Item = Formula>>(formulas: I) -> Formula {
    let set: BTreeSet<Formula> = formulas.into_iter().collect();
    fold_right(set, Formula::Top, Formula::and)
}

/// Canonical right-nested disjunction; the empty disjunction is `false`.
pub fn big_or<I: IntoIterator<Item = Formula>>(formulas: I) -> Formula {
    let set: BTreeSet<Formula> = formulas.into_iter().collect();
    fold_right(set, Formula::Bottom, Formula::or)
}

fn fold_right(
    set: BTreeSet<Formula>,
    empty: Formula,
    join: fn(Formula, Formula) -> Formula,
) -> Formula {
    let mut items = set.into_iter().rev();
    match items.next() {
        None => empty,
        Some(last) => items.fold(last, |acc, f| join(f, acc)),
    }
}

/// The conjunction describing exactly the valuation `true_vars` over `vars`:
/// every member of `true_vars` positively, every other member of `vars`
/// negatively.
pub fn valuation_formula(vars: &VarSet, true_vars: &VarSet) -> Formula {
    big_and(vars.iter().map(|p| {
        if true_vars.contains(p) {
            Formula::var(p)
        } else {
            Formula::neg_var(p)
        }
    }))
}

/// A satisfiable formula over exactly `vars` that is complete for `logic`, when
/// one exists. Logics with seriality or reflexivity but neither 4 nor 5 have
/// no satisfiable complete formula once `vars` is non-empty.
pub fn known_complete_formula(logic: Logic, vars: &VarSet) -> Option<Formula> {
    let all = big_and(vars.iter().map(Formula::var));
    let with = |modal: Formula| {
        if vars.is_empty() {
            modal
        } else {
            Formula::and(all.clone(), modal)
        }
    };
    if logic.has_5() {
        Some(with(Formula::diamond(Formula::boxed(all.clone()))))
    } else if logic.has_4() && logic.has_d() {
        Some(with(Formula::boxed(all.clone())))
    } else if logic.has_d() {
        vars.is_empty().then_some(Formula::Top)
    } else {
        Some(with(Formula::boxed(Formula::Bottom)))
    }
}

/// A finite, lexicographically ordered set of variable names.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct VarSet(BTreeSet<String>);

impl VarSet {
    pub fn new() -> VarSet {
        VarSet::default()
    }

    pub fn insert(&mut self, name: &str) -> bool {
        if self.0.contains(name) {
            false
        } else {
            self.0.insert(name.to_owned())
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(name)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.0.iter().map(String::as_str)
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// The subset selected by the bits of `mask`, bit `i` standing for the
    /// `i`-th variable in order.
    pub fn subset_from_mask(&self, mask: u64) -> VarSet {
        VarSet(
            self.0
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect(),
        )
    }

    /// Inverse of [`VarSet::subset_from_mask`]; members outside `self` are ignored.
    pub fn mask_of(&self, subset: &VarSet) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| subset.contains(p))
            .fold(0, |m, (i, _)| m | 1 << i)
    }
}

impl<S: AsRef<str>> FromIterator<S> for VarSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        VarSet(iter.into_iter().map(|s| s.as_ref().to_owned()).collect())
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

// ---------------------------------------------------------------------------
// Printing

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        _ => 3,
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => write!(f, "true"),
            Formula::Bottom => write!(f, "false"),
            Formula::Var(p) => write!(f, "{p}"),
            Formula::NegVar(p) => write!(f, "~{p}"),
            // Both connectives associate to the right, so only a left operand
            // of equal precedence needs parentheses.
            Formula::And(l, r) => {
                write_child(f, l, precedence(l) <= 2)?;
                write!(f, " & ")?;
                write_child(f, r, precedence(r) < 2)
            }
            Formula::Or(l, r) => {
                write_child(f, l, precedence(l) <= 1)?;
                write!(f, " | ")?;
                write_child(f, r, false)
            }
            Formula::Box(c) => {
                write!(f, "[]")?;
                write_child(f, c, precedence(c) < 3)
            }
            Formula::Diamond(c) => {
                write!(f, "<>")?;
                write_child(f, c, precedence(c) < 3)
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl From<Formula> for String {
    fn from(f: Formula) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for Formula {
    type Error = ParseError;

    fn try_from(s: String) -> Result<Formula, ParseError> {
        parse(&s)
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("unexpected character {ch:?} at byte {offset}")]
    BadChar { offset: usize, ch: char },
    #[error("unbalanced parenthesis at byte {offset}")]
    Unbalanced { offset: usize },
    #[error("expected {expected}, found {found} at byte {offset}")]
    Unexpected {
        offset: usize,
        expected: &'static str,
        found: String,
    },
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Empty => None,
            ParseError::BadChar { offset, .. }
            | ParseError::Unbalanced { offset }
            | ParseError::Unexpected { offset, .. } => Some(*offset),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    True,
    False,
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    Box,
    Diamond,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Box => "`[]`".into(),
            Tok::Diamond => "`<>`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Implies
            }
            b'[' if bytes.get(i + 1) == Some(&b']') => {
                i += 1;
                Tok::Box
            }
            b'<' if bytes[i..].starts_with(b"<->") => {
                i += 2;
                Tok::Iff
            }
            b'<' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Diamond
            }
            b'a'..=b'z' => {
                while i + 1 < bytes.len()
                    && matches!(bytes[i + 1], b'a'..=b'z' | b'0'..=b'9' | b'_')
                {
                    i += 1;
                }
                match &input[start..=i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    name => Tok::Ident(name.to_owned()),
                }
            }
            _ => {
                let ch = input[start..].chars().next().unwrap_or('\0');
                return Err(ParseError::BadChar { offset: start, ch });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, input.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    open: Vec<usize>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Tok::RParen if self.open.is_empty() => ParseError::Unbalanced {
                offset: self.offset(),
            },
            Tok::End if !self.open.is_empty() => ParseError::Unbalanced {
                offset: *self.open.last().unwrap(),
            },
            t => ParseError::Unexpected {
                offset: self.offset(),
                expected,
                found: t.describe(),
            },
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            lhs = lhs.iff(&rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(lhs.implies(&rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.conjunction()?;
        if *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.disjunction()?;
            return Ok(Formula::or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::And {
            self.bump();
            let rhs = self.conjunction()?;
            return Ok(Formula::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(self.unary()?.negate())
            }
            Tok::Box => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::Diamond => {
                self.bump();
                Ok(Formula::diamond(self.unary()?))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::var(&name))
            }
            Tok::LParen => {
                self.open.push(self.offset());
                self.bump();
                let inner = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                self.open.pop();
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

/// Parses the surface syntax into negation normal form.
///
/// Binding strength, tightest first: `~ [] <>`, `&`, `|`, `->`, `<->`.
/// `&`, `|` and `->` associate to the right, `<->` to the left.
pub fn parse(input: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(input)?;
    if toks.len() == 1 {
        return Err(ParseError::Empty);
    }
    let mut parser = Parser {
        toks,
        pos: 0,
        open: Vec::new(),
    };
    let f = parser.iff()?;
    if *parser.peek() != Tok::End {
        return Err(parser.unexpected("end of input"));
    }
    Ok(f)
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Formula, ParseError> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::var("p")
    }

    fn q() -> Formula {
        Formula::var("q")
    }

    #[test]
    fn parses_grammar_examples() {
        assert_eq!(
            parse("p & []~p").unwrap(),
            Formula::and(p(), Formula::boxed(Formula::neg_var("p")))
        );
        assert_eq!(
            parse("~(p & q)").unwrap(),
            Formula::or(Formula::neg_var("p"), Formula::neg_var("q"))
        );
        assert_eq!(
            parse("~[]p").unwrap(),
            Formula::diamond(Formula::neg_var("p"))
        );
    }

    #[test]
    fn sugar_and_precedence() {
        assert_eq!(
            parse("p -> q").unwrap(),
            Formula::or(Formula::neg_var("p"), q())
        );
        assert_eq!(
            parse("p | q & p").unwrap(),
            Formula::or(p(), Formula::and(q(), p()))
        );
        assert_eq!(
            parse("[]p & q").unwrap(),
            Formula::and(Formula::boxed(p()), q())
        );
        // right associative implication
        assert_eq!(
            parse("p -> q -> p").unwrap(),
            parse("p -> (q -> p)").unwrap()
        );
        assert_eq!(parse("p <-> q").unwrap(), p().iff(&q()));
        assert_eq!(
            parse("true & false").unwrap(),
            Formula::and(Formula::Top, Formula::Bottom)
        );
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse(""), Err(ParseError::Empty));
        assert_eq!(parse("   "), Err(ParseError::Empty));
        assert_eq!(parse("(p & q"), Err(ParseError::Unbalanced { offset: 0 }));
        assert_eq!(parse("p)"), Err(ParseError::Unbalanced { offset: 1 }));
        assert_eq!(
            parse("p # q"),
            Err(ParseError::BadChar { offset: 2, ch: '#' })
        );
        assert!(matches!(
            parse("p & & q"),
            Err(ParseError::Unexpected { offset: 4, .. })
        ));
        assert!(matches!(
            parse("p q"),
            Err(ParseError::Unexpected { offset: 2, .. })
        ));
        assert!(matches!(
            parse("P"),
            Err(ParseError::BadChar { offset: 0, .. })
        ));
    }

    #[test]
    fn negation_examples() {
        assert_eq!(Formula::Top.negate(), Formula::Bottom);
        assert_eq!(
            Formula::boxed(p()).negate(),
            Formula::diamond(Formula::neg_var("p"))
        );
        assert_eq!(
            Formula::and(p(), Formula::diamond(q())).negate(),
            Formula::or(Formula::neg_var("p"), Formula::boxed(Formula::neg_var("q")))
        );
    }

    #[test]
    fn modal_depth_examples() {
        assert_eq!(p().modal_depth(), 0);
        assert_eq!(Formula::boxed(p()).modal_depth(), 1);
        let f = Formula::and(Formula::boxed(p()), Formula::diamond(Formula::diamond(p())));
        assert_eq!(f.modal_depth(), 2);
    }

    #[test]
    fn subformulas_closure_and_size() {
        let f = Formula::and(p(), Formula::boxed(p()));
        let sub: BTreeSet<_> = [f.clone(), p(), Formula::boxed(p())].into_iter().collect();
        assert_eq!(f.subformulas(), sub);
        assert_eq!(f.size(), 3);
        let cl: BTreeSet<_> = [p(), Formula::neg_var("p")].into_iter().collect();
        assert_eq!(p().closure(), cl);
        // shared subtrees count once
        assert_eq!(Formula::and(p(), p()).size(), 2);
        let g = parse("[]p & <>[]q").unwrap();
        assert!(g.closure_at_depth(1).iter().all(|h| h.modal_depth() <= 1));
        assert!(g.closure_at_depth(1).contains(&Formula::boxed(q())));
        assert!(!g.closure_at_depth(1).contains(&parse("<>[]q").unwrap()));
    }

    #[test]
    fn big_connectives() {
        assert_eq!(big_and(Vec::new()), Formula::Top);
        assert_eq!(big_or(Vec::new()), Formula::Bottom);
        assert_eq!(big_and(vec![q(), p()]), Formula::and(p(), q()));
        assert_eq!(big_and(vec![p(), p()]), p());
        let three = big_or(vec![Formula::var("r"), q(), p()]);
        assert_eq!(three.to_string(), "p | q | r");
    }

    #[test]
    fn known_complete_formulas() {
        let ps: VarSet = ["p"].into_iter().collect();
        assert_eq!(
            known_complete_formula(Logic::K, &ps),
            Some(parse("p & []false").unwrap())
        );
        assert_eq!(
            known_complete_formula(Logic::K4, &ps),
            Some(parse("p & []false").unwrap())
        );
        assert_eq!(
            known_complete_formula(Logic::S4, &ps),
            Some(parse("p & []p").unwrap())
        );
        assert_eq!(
            known_complete_formula(Logic::D4, &ps),
            Some(parse("p & []p").unwrap())
        );
        for l in [Logic::K5, Logic::KD5, Logic::K45, Logic::KD45, Logic::S5] {
            assert_eq!(
                known_complete_formula(l, &ps),
                Some(parse("p & <>[]p").unwrap())
            );
        }
        assert_eq!(known_complete_formula(Logic::D, &ps), None);
        assert_eq!(known_complete_formula(Logic::T, &ps), None);
        assert_eq!(
            known_complete_formula(Logic::T, &VarSet::new()),
            Some(Formula::Top)
        );
    }

    #[test]
    fn printing_uses_surface_syntax() {
        let f = parse("(p | q) & ~r & [](p & q) & <>false").unwrap();
        assert_eq!(f.to_string(), "(p | q) & ~r & [](p & q) & <>false");
        let g = Formula::and(Formula::and(p(), q()), p());
        assert_eq!(g.to_string(), "(p & q) & p");
        assert_eq!(parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn var_masks() {
        let vs: VarSet = ["p", "q", "r"].into_iter().collect();
        let sub: VarSet = ["p", "r"].into_iter().collect();
        assert_eq!(vs.mask_of(&sub), 0b101);
        assert_eq!(vs.subset_from_mask(0b101), sub);
    }
}
