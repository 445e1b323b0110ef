//! Terminating rewrite system for color expressions.
//!
//! Rules are applied term by term in a fixed priority order:
//!
//! 1. zero rules (`f` with a repeated index, `Tr T^a`, summed `d_aab`, ...)
//! 2. Kronecker contraction and `δ_aa = N^2 - 1`, `δ_ii = N`
//! 3. expansion of `Tr[..]` into generator matrix elements, of `TrAdj[..]`
//!    into `f`/`d` rings, of `F(a;b,c)` and `D(a;b,c)`
//! 4. Fierz on two generators sharing a summed adjoint index
//! 5. the generator product `T^a T^b = δ_ab/(2N) + (d_abe + i f_abe) T^e / 2`
//!    on generators sharing a summed fundamental index
//! 6. bubbles: `f f = N δ`, `d d = (N^2-4)/N δ`, `f d = 0`
//! 7. triangles: three `f`/`d` pairwise sharing one summed index reduce to a
//!    single `f` or `d` times a coefficient
//! 8. `f_pqs f_rts` in terms of `δδ` and `dd`, subject to a term budget
//! 9. optionally, for `N = 3` only, the `dd` completeness relation
//!
//! Every application strictly lowers a lexicographic measure (checked in
//! debug builds), so rewriting terminates.

mod rules;

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{canonicalize, ColorExpr, Factor, Index, IndexKind, Term};
use rules::{find_rule, measure, RuleSet};

/// Tuning knobs for [`simplify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplifyOptions {
    /// Maximum number of live terms grown from one input term by the
    /// `f·f` splitting rule.
    pub split_cap: usize,
    /// Enable identities that hold only for `N = 3`.
    pub n3_rules: bool,
    /// Record every rule application.
    pub record: bool,
}

impl Default for SimplifyOptions {
    fn default() -> Self {
        SimplifyOptions {
            split_cap: 64,
            n3_rules: false,
            record: false,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("contraction requires trace and matrix-element factors to be expanded first, found {factor}")]
    Unexpanded { factor: String },
    #[error("replay step {step}: term {term} does not match the recorded input")]
    ReplayMismatch { step: usize, term: usize },
}

/// One application of a rule to one term.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleApplication {
    pub rule_id: &'static str,
    /// Position of the rewritten term in the expression at that moment.
    pub term: usize,
    /// Positions of the factors the rule matched.
    pub factors: Vec<usize>,
    pub before: Term,
    pub after: Vec<Term>,
}

impl fmt::Display for RuleApplication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self.factors.iter().map(usize::to_string).collect();
        let after = ColorExpr::from_parts(Vec::new(), self.after.clone());
        write!(
            f,
            "{} @ {}/{} : {} ⇒ {}",
            self.rule_id,
            self.term,
            factors.join(","),
            self.before,
            after
        )
    }
}

/// Entry of a rewrite log.
#[derive(Debug, Clone, PartialEq)]
pub enum LogEntry {
    Rule(RuleApplication),
    /// Canonical relabeling and merging of like terms.
    Canonicalize,
}

impl fmt::Display for LogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogEntry::Rule(r) => r.fmt(f),
            LogEntry::Canonicalize => f.write_str("canonicalize"),
        }
    }
}

/// Result of a rewrite together with the steps taken.
#[derive(Debug, Clone)]
pub struct Rewritten {
    pub expr: ColorExpr,
    pub log: Vec<LogEntry>,
}

/// Renames summed named labels to dummies so the rules can recognize them.
fn prepare_term(t: &Term) -> Term {
    let bound: Vec<Index> = t
        .label_counts()
        .into_iter()
        .filter(|(x, c)| *c == 2 && matches!(x.kind, IndexKind::Named(_)))
        .map(|(x, _)| x.clone())
        .collect();
    if bound.is_empty() {
        return t.clone();
    }
    let mut next = t.max_dummy() + 1;
    let mut factors = t.factors.clone();
    for b in bound {
        let to = Index::dummy(next, b.sort);
        next += 1;
        for f in factors.iter_mut() {
            f.for_each_index_mut(|x| {
                if *x == b {
                    *x = to.clone();
                }
            });
        }
    }
    Term::new(t.coeff.clone(), factors)
}

/// Rewrites one term to normal form with respect to `rules`. Steps are
/// recorded with positions relative to the term's own block starting at
/// `offset`.
fn normalize_term(t: &Term, rules: RuleSet, opts: &SimplifyOptions, offset: usize) -> (Vec<Term>, Vec<RuleApplication>) {
    let mut log = Vec::new();
    let mut done = Vec::new();
    let start = prepare_term(t);
    if opts.record && start != *t {
        log.push(RuleApplication {
            rule_id: "rename",
            term: offset,
            factors: Vec::new(),
            before: t.clone(),
            after: vec![start.clone()],
        });
    }
    let mut stack = vec![start];
    let mut live = 1usize;
    while let Some(cur) = stack.pop() {
        let mut active = rules;
        active.split = rules.split && live + 3 <= opts.split_cap;
        let Some(rw) = find_rule(&cur, active) else {
            done.push(cur);
            continue;
        };
        debug_assert!(
            rw.out.iter().all(|o| measure(o) < measure(&cur)),
            "rule {} does not decrease the measure on {}",
            rw.rule,
            cur
        );
        live = live + rw.out.len() - 1;
        let out: Vec<Term> = rw.out.into_iter().filter(|o| !o.coeff.is_zero()).collect();
        if opts.record {
            log.push(RuleApplication {
                rule_id: rw.rule,
                term: offset + done.len(),
                factors: rw.factors,
                before: cur,
                after: out.clone(),
            });
        }
        stack.extend(out.into_iter().rev());
    }
    (done, log)
}

fn run(e: &ColorExpr, rules: RuleSet, opts: &SimplifyOptions, log: &mut Vec<LogEntry>) -> ColorExpr {
    let results: Vec<(Vec<Term>, Vec<RuleApplication>)> = if opts.record {
        // Positions depend on the output sizes of earlier terms.
        let mut offset = 0;
        let mut out = Vec::new();
        for t in e.terms() {
            let r = normalize_term(t, rules, opts, offset);
            offset += r.0.len();
            out.push(r);
        }
        out
    } else {
        e.terms().par_iter().map(|t| normalize_term(t, rules, opts, 0)).collect()
    };
    let mut terms = Vec::new();
    for (done, steps) in results {
        terms.extend(done);
        log.extend(steps.into_iter().map(LogEntry::Rule));
    }
    ColorExpr::from_parts(e.free().to_vec(), terms)
}

const BASIC: RuleSet = RuleSet {
    basic: true,
    defining: false,
    adjoint: false,
    contract: false,
    split: false,
    n3: false,
};

/// Expands defining-representation traces and removes generator products
/// with Fierz and the product rule.
pub fn reduce_defining(e: &ColorExpr) -> ColorExpr {
    let rules = RuleSet { defining: true, ..BASIC };
    run(e, rules, &SimplifyOptions::default(), &mut Vec::new())
}

/// Rewrites `TrAdj[..]`, `F(a;b,c)` and `D(a;b,c)` in terms of `f` and `d`.
pub fn expand_adjoint(e: &ColorExpr) -> ColorExpr {
    let rules = RuleSet {
        basic: false,
        adjoint: true,
        ..BASIC
    };
    run(e, rules, &SimplifyOptions::default(), &mut Vec::new())
}

/// Contracts `f`/`d`/`δ` networks. Fails if traces or adjoint matrix
/// elements are still present.
pub fn contract(e: &ColorExpr) -> Result<ColorExpr, RewriteError> {
    for t in e.terms() {
        if let Some(f) = t.factors.iter().find(|f| {
            matches!(f, Factor::TrDef(_) | Factor::TrAdj(_) | Factor::FElem { .. } | Factor::DElem { .. })
        }) {
            return Err(RewriteError::Unexpanded { factor: f.to_string() });
        }
    }
    let rules = RuleSet {
        contract: true,
        split: true,
        ..BASIC
    };
    Ok(run(e, rules, &SimplifyOptions::default(), &mut Vec::new()))
}

const MAX_PASSES: usize = 8;

/// Full simplification with a log of every step.
pub fn simplify_logged(e: &ColorExpr, opts: &SimplifyOptions) -> Rewritten {
    let mut log = Vec::new();
    let mut rules = RuleSet {
        basic: true,
        defining: true,
        adjoint: true,
        contract: true,
        split: true,
        n3: opts.n3_rules,
    };
    let mut cur = e.clone();
    for _ in 0..MAX_PASSES {
        let next = canonicalize(&run(&cur, rules, opts, &mut log));
        if opts.record {
            log.push(LogEntry::Canonicalize);
        }
        if next == cur {
            break;
        }
        cur = next;
        // Canonicalization never creates new f·f pairs, so any left over
        // were held back by the term budget and stay that way.
        rules.split = false;
    }
    Rewritten { expr: cur, log }
}

/// Simplifies to a canonical normal form with exact coefficients.
pub fn simplify(e: &ColorExpr, opts: &SimplifyOptions) -> ColorExpr {
    simplify_logged(e, opts).expr
}

/// Reapplies a log to `input`; the result equals the logged rewrite output.
pub fn replay(input: &ColorExpr, log: &[LogEntry]) -> Result<ColorExpr, RewriteError> {
    let mut terms = input.terms().to_vec();
    for (step, entry) in log.iter().enumerate() {
        match entry {
            LogEntry::Canonicalize => {
                terms = canonicalize(&ColorExpr::from_parts(input.free().to_vec(), terms)).into_terms();
            }
            LogEntry::Rule(r) => {
                if terms.get(r.term) != Some(&r.before) {
                    return Err(RewriteError::ReplayMismatch { step, term: r.term });
                }
                terms.splice(r.term..=r.term, r.after.iter().cloned());
            }
        }
    }
    Ok(ColorExpr::from_parts(input.free().to_vec(), terms))
}
