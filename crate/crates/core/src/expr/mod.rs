//! Color-algebra expressions: sums of products of `δ`, `f`, `d`, explicit
//! `T`/`F`/`D` matrix elements and traces, with Einstein summation over
//! repeated indices.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := item (("*" | "/") item)*
//! item   := factor | number | "i" | "NN" | "(" arith ")"      [ "^" int ]
//! factor := delta(x,y) | f(a,b,c) | d(a,b,c)
//!         | T(a;i,j) | F(a;b,c) | D(a;b,c)
//!         | Tr[T(a) T(b) ...] | TrAdj[F(a) D(b) ...]
//! ```
//!
//! Index labels are identifiers, 1-based integers (fixed values) or
//! `_<k>` dummies. A label used twice in a term is summed over its range:
//! `1..=N` for fundamental indices, `1..=N^2-1` for adjoint ones.

mod canonical;
mod npoly;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use canonical::{canonicalize, canonicalize_term};
pub use npoly::{GaussRational, NPoly, Rational};
pub use parse::{parse, parse_with_sorts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    /// Range `1..=N^2-1`.
    Adjoint,
    /// Range `1..=N`.
    Fundamental,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexKind {
    /// A fixed 1-based index value.
    Value(u32),
    /// A user-chosen label.
    Named(String),
    /// A summed label, printed as `_k`.
    Dummy(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Index {
    pub kind: IndexKind,
    pub sort: Sort,
}

impl Index {
    pub fn named(name: &str, sort: Sort) -> Self {
        Self {
            kind: IndexKind::Named(name.to_string()),
            sort,
        }
    }

    pub fn adj(name: &str) -> Self {
        Self::named(name, Sort::Adjoint)
    }

    pub fn fund(name: &str) -> Self {
        Self::named(name, Sort::Fundamental)
    }

    pub fn dummy(k: u32, sort: Sort) -> Self {
        Self {
            kind: IndexKind::Dummy(k),
            sort,
        }
    }

    pub fn value(v: u32, sort: Sort) -> Self {
        Self {
            kind: IndexKind::Value(v),
            sort,
        }
    }

    /// True for labels (named or dummy), false for fixed values.
    pub fn is_label(&self) -> bool {
        !matches!(self.kind, IndexKind::Value(_))
    }

    pub fn is_dummy(&self) -> bool {
        matches!(self.kind, IndexKind::Dummy(_))
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            IndexKind::Value(v) => write!(f, "{v}"),
            IndexKind::Named(s) => f.write_str(s),
            IndexKind::Dummy(k) => write!(f, "_{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AdjKind {
    F,
    D,
}

/// One multiplicative factor. The derived order (variant first, then
/// indices) is the canonical factor order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    Delta(Index, Index),
    F3([Index; 3]),
    D3([Index; 3]),
    /// `(T^a)_ij`.
    TElem { a: Index, i: Index, j: Index },
    /// `(F^a)_bc = -i f_abc`.
    FElem { a: Index, b: Index, c: Index },
    /// `(D^a)_bc = d_abc`.
    DElem { a: Index, b: Index, c: Index },
    /// `Tr(T^a1 ... T^ak)` in the defining representation.
    TrDef(Vec<Index>),
    /// Trace of a word in `F^a`, `D^a`.
    TrAdj(Vec<(AdjKind, Index)>),
}

impl Factor {
    pub fn f(a: Index, b: Index, c: Index) -> Self {
        Factor::F3([a, b, c])
    }

    pub fn d(a: Index, b: Index, c: Index) -> Self {
        Factor::D3([a, b, c])
    }

    pub fn delta(x: Index, y: Index) -> Self {
        Factor::Delta(x, y)
    }

    pub fn indices(&self) -> Vec<&Index> {
        match self {
            Factor::Delta(x, y) => vec![x, y],
            Factor::F3(v) | Factor::D3(v) => v.iter().collect(),
            Factor::TElem { a, i, j } => vec![a, i, j],
            Factor::FElem { a, b, c } | Factor::DElem { a, b, c } => vec![a, b, c],
            Factor::TrDef(v) => v.iter().collect(),
            Factor::TrAdj(v) => v.iter().map(|(_, x)| x).collect(),
        }
    }

    pub fn for_each_index_mut(&mut self, mut f: impl FnMut(&mut Index)) {
        match self {
            Factor::Delta(x, y) => {
                f(x);
                f(y);
            }
            Factor::F3(v) | Factor::D3(v) => v.iter_mut().for_each(f),
            Factor::TElem { a, i, j } => {
                f(a);
                f(i);
                f(j);
            }
            Factor::FElem { a, b, c } | Factor::DElem { a, b, c } => {
                f(a);
                f(b);
                f(c);
            }
            Factor::TrDef(v) => v.iter_mut().for_each(f),
            Factor::TrAdj(v) => v.iter_mut().for_each(|(_, x)| f(x)),
        }
    }

    /// The sort each slot requires; `None` for `delta`, whose slots take
    /// the sort of their partner.
    fn slot_sorts(&self) -> Vec<Option<Sort>> {
        use Sort::*;
        match self {
            Factor::Delta(..) => vec![None, None],
            Factor::TElem { .. } => vec![Some(Adjoint), Some(Fundamental), Some(Fundamental)],
            other => vec![Some(Adjoint); other.indices().len()],
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Delta(x, y) => write!(f, "delta({x},{y})"),
            Factor::F3([a, b, c]) => write!(f, "f({a},{b},{c})"),
            Factor::D3([a, b, c]) => write!(f, "d({a},{b},{c})"),
            Factor::TElem { a, i, j } => write!(f, "T({a};{i},{j})"),
            Factor::FElem { a, b, c } => write!(f, "F({a};{b},{c})"),
            Factor::DElem { a, b, c } => write!(f, "D({a};{b},{c})"),
            Factor::TrDef(v) => {
                f.write_str("Tr[")?;
                for a in v {
                    write!(f, "T({a})")?;
                }
                f.write_str("]")
            }
            Factor::TrAdj(v) => {
                f.write_str("TrAdj[")?;
                for (k, a) in v {
                    let tag = match k {
                        AdjKind::F => "F",
                        AdjKind::D => "D",
                    };
                    write!(f, "{tag}({a})")?;
                }
                f.write_str("]")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: NPoly,
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn new(coeff: NPoly, factors: Vec<Factor>) -> Self {
        Self { coeff, factors }
    }

    pub fn scalar(coeff: NPoly) -> Self {
        Self::new(coeff, Vec::new())
    }

    /// Occurrence counts of every label (fixed values excluded).
    pub fn label_counts(&self) -> BTreeMap<&Index, usize> {
        let mut counts = BTreeMap::new();
        for f in &self.factors {
            for x in f.indices() {
                if x.is_label() {
                    *counts.entry(x).or_insert(0) += 1;
                }
            }
        }
        counts
    }

    /// Labels appearing exactly once.
    pub fn free_indices(&self) -> BTreeSet<Index> {
        self.label_counts()
            .into_iter()
            .filter(|(_, c)| *c == 1)
            .map(|(x, _)| x.clone())
            .collect()
    }

    /// Labels appearing twice.
    pub fn bound_indices(&self) -> BTreeSet<Index> {
        self.label_counts()
            .into_iter()
            .filter(|(_, c)| *c == 2)
            .map(|(x, _)| x.clone())
            .collect()
    }

    pub fn max_dummy(&self) -> u32 {
        self.factors
            .iter()
            .flat_map(|f| f.indices())
            .filter_map(|x| match x.kind {
                IndexKind::Dummy(k) => Some(k),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    fn fmt_with_sign(&self, f: &mut fmt::Formatter<'_>, first: bool) -> fmt::Result {
        let negative = self.coeff.leading_is_negative();
        let coeff = if negative { -&self.coeff } else { self.coeff.clone() };
        match (first, negative) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        let rendered = coeff.render();
        let factors: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        if factors.is_empty() {
            if rendered.monomials > 1 && !rendered.has_denominator {
                return write!(f, "({})", rendered.text);
            }
            return f.write_str(&rendered.text);
        }
        if !coeff.is_one() {
            if rendered.has_denominator || rendered.monomials > 1 {
                write!(f, "({})*", rendered.text)?;
            } else {
                write!(f, "{}*", rendered.text)?;
            }
        }
        f.write_str(&factors.join("*"))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_sign(f, true)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("syntax error at column {column}: {msg}")]
    Syntax { column: usize, msg: String },
    #[error("sort mismatch: index '{label}' is used as both adjoint and fundamental")]
    SortMismatch { label: String },
    #[error("index '{label}' appears {count} times in one term")]
    TooManyOccurrences { label: String, count: usize },
    #[error("inconsistent free indices: term {term} has {{{found}}}, expected {{{expected}}}")]
    InconsistentFree { term: usize, expected: String, found: String },
    #[error("dummy index '{label}' must appear exactly twice")]
    UnpairedDummy { label: String },
    #[error("fixed index values start at 1")]
    ZeroIndex,
}

/// A sum of terms sharing one set of free indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColorExpr {
    free: Vec<Index>,
    terms: Vec<Term>,
}

fn index_list(set: &BTreeSet<Index>) -> String {
    set.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Validates one term and returns its free labels.
pub(crate) fn check_term(term: &Term) -> Result<BTreeSet<Index>, ExprError> {
    let mut sorts: BTreeMap<&IndexKind, Sort> = BTreeMap::new();
    for factor in &term.factors {
        let idx = factor.indices();
        if let Factor::Delta(x, y) = factor {
            if x.sort != y.sort {
                return Err(ExprError::SortMismatch { label: x.to_string() });
            }
        }
        for (x, slot) in idx.iter().zip(factor.slot_sorts()) {
            if let IndexKind::Value(0) = x.kind {
                return Err(ExprError::ZeroIndex);
            }
            if slot.is_some_and(|s| s != x.sort) {
                return Err(ExprError::SortMismatch { label: x.to_string() });
            }
            if x.is_label() {
                if let Some(prev) = sorts.insert(&x.kind, x.sort) {
                    if prev != x.sort {
                        return Err(ExprError::SortMismatch { label: x.to_string() });
                    }
                }
            }
        }
    }
    for (x, count) in term.label_counts() {
        if count > 2 {
            return Err(ExprError::TooManyOccurrences {
                label: x.to_string(),
                count,
            });
        }
        if count == 1 && x.is_dummy() {
            return Err(ExprError::UnpairedDummy { label: x.to_string() });
        }
    }
    Ok(term.free_indices())
}

impl ColorExpr {
    /// Builds a validated expression. Zero-coefficient terms are dropped.
    pub fn new(free: Vec<Index>, terms: Vec<Term>) -> Result<Self, ExprError> {
        let expected: BTreeSet<Index> = free.iter().cloned().collect();
        let terms: Vec<Term> = terms.into_iter().filter(|t| !t.coeff.is_zero()).collect();
        for (k, t) in terms.iter().enumerate() {
            let found = check_term(t)?;
            if found != expected {
                return Err(ExprError::InconsistentFree {
                    term: k + 1,
                    expected: index_list(&expected),
                    found: index_list(&found),
                });
            }
        }
        Ok(Self {
            free: expected.into_iter().collect(),
            terms,
        })
    }

    /// Builds an expression whose terms are already known to be valid.
    pub(crate) fn from_parts(free: Vec<Index>, terms: Vec<Term>) -> Self {
        let mut free = free;
        free.sort();
        Self { free, terms }
    }

    pub fn zero(free: Vec<Index>) -> Self {
        Self::from_parts(free, Vec::new())
    }

    pub fn free(&self) -> &[Index] {
        &self.free
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &NPoly) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(&t.coeff * c, t.factors.clone()))
            .filter(|t| !t.coeff.is_zero())
            .collect();
        Self::from_parts(self.free.clone(), terms)
    }

    /// `self + other`, concatenating terms.
    pub fn add(&self, other: &ColorExpr) -> Result<Self, ExprError> {
        if self.free != other.free {
            let a: BTreeSet<Index> = self.free.iter().cloned().collect();
            let b: BTreeSet<Index> = other.free.iter().cloned().collect();
            return Err(ExprError::InconsistentFree {
                term: self.terms.len() + 1,
                expected: index_list(&a),
                found: index_list(&b),
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self::from_parts(self.free.clone(), terms))
    }

    pub fn sub(&self, other: &ColorExpr) -> Result<Self, ExprError> {
        self.add(&other.scale(&NPoly::int(-1)))
    }
}

impl fmt::Display for ColorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            t.fmt_with_sign(f, k == 0)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printing_terms() {
        let c = Index::adj("c");
        let d = Index::adj("d");
        let t = Term::new(NPoly::n(), vec![Factor::delta(c.clone(), d.clone())]);
        assert_eq!(t.to_string(), "NN*delta(c,d)");
        let t = Term::new(NPoly::from_real(&[(1, 1, 1), (-1, -4, 1)]), vec![Factor::delta(c.clone(), d.clone())]);
        assert_eq!(t.to_string(), "((NN^2-4)/NN)*delta(c,d)");
        let t = Term::new(NPoly::from_real(&[(-1, -1, 4)]), vec![Factor::delta(c, d)]);
        assert_eq!(t.to_string(), "-(1/(4*NN))*delta(c,d)");
        assert_eq!(Term::scalar(NPoly::from_real(&[(2, 1, 1), (0, -1, 1)])).to_string(), "(NN^2-1)");
        assert_eq!(Term::scalar(NPoly::from_real(&[(2, 1, 2), (0, -1, 2)])).to_string(), "(NN^2-1)/2");
    }

    #[test]
    fn trace_printing() {
        let f = Factor::TrAdj(vec![(AdjKind::F, Index::adj("a")), (AdjKind::D, Index::dummy(1, Sort::Adjoint))]);
        assert_eq!(f.to_string(), "TrAdj[F(a)D(_1)]");
        let f = Factor::TElem {
            a: Index::value(3, Sort::Adjoint),
            i: Index::fund("i"),
            j: Index::fund("j"),
        };
        assert_eq!(f.to_string(), "T(3;i,j)");
    }

    #[test]
    fn validation_rejects_bad_terms() {
        let a = Index::adj("a");
        let t = Term::new(NPoly::one(), vec![Factor::f(a.clone(), a.clone(), a.clone())]);
        assert!(matches!(
            ColorExpr::new(vec![], vec![t]),
            Err(ExprError::TooManyOccurrences { count: 3, .. })
        ));
        let t = Term::new(NPoly::one(), vec![Factor::delta(Index::adj("x"), Index::fund("y"))]);
        assert!(matches!(ColorExpr::new(vec![], vec![t]), Err(ExprError::SortMismatch { .. })));
        let t = Term::new(
            NPoly::one(),
            vec![Factor::f(Index::dummy(1, Sort::Adjoint), Index::adj("b"), Index::adj("c"))],
        );
        assert!(matches!(
            ColorExpr::new(vec![Index::adj("b"), Index::adj("c")], vec![t]),
            Err(ExprError::UnpairedDummy { .. })
        ));
    }

    #[test]
    fn arithmetic_checks_free_sets() {
        let a = ColorExpr::new(
            vec![Index::adj("a"), Index::adj("b")],
            vec![Term::new(NPoly::one(), vec![Factor::delta(Index::adj("a"), Index::adj("b"))])],
        )
        .unwrap();
        let zero = ColorExpr::zero(vec![]);
        assert!(a.sub(&zero).is_err());
        let diff = a.sub(&a).unwrap();
        assert_eq!(diff.terms().len(), 2);
        assert_eq!(diff.to_string(), "delta(a,b) - delta(a,b)");
    }
}
