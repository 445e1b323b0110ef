//! Brute-force numeric evaluation of [`ColorExpr`] values at a concrete `N`.
//!
//! Every summed label is iterated over its full range with explicit
//! matrices and tensors; the only shortcut is skipping values that make a
//! partial product exactly zero. When a label is the last unknown slot of an
//! `f`, `d` or `delta`, only the values where that factor is nonzero are
//! visited. Traces of short matrix words are memoized per `N`.
//!
//! Cost per term is `O(R^k · F)` for `k` summed labels of range `R` and `F`
//! factors, times `O(L · M^3)` for each uncached trace of length `L` over
//! `M × M` matrices.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, LazyLock, Mutex, RwLock};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError};
use crate::expr::{AdjKind, ColorExpr, Factor, Index, IndexKind, Sort, Term};
use crate::linalg::{CMatrix, SparseMatrix};

/// Default absolute tolerance for oracle comparisons.
pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("N must be at least 2, got {0}")]
    InvalidN(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("no value assigned to free index '{0}'")]
    MissingAssignment(String),
    #[error("'{0}' is not a free index of the expression")]
    UnexpectedAssignment(String),
    #[error("value {value} for index '{label}' outside 1..={max}")]
    OutOfRange { label: String, value: usize, max: usize },
    #[error("free indices differ: {{{left}}} vs {{{right}}}")]
    FreeMismatch { left: String, right: String },
}

pub type Assignment = BTreeMap<String, usize>;

/// Longest matrix word whose trace is memoized.
const MEMO_MAX_LEN: usize = 3;

/// Product of a nonempty word, left to right.
fn chain(mats: &[&SparseMatrix]) -> CMatrix {
    mats[1..].iter().fold(mats[0].to_dense(), |acc, m| m.left_mul(&acc))
}

/// `Tr(M_0 ... M_k)` as `Tr(L R)` with `L`, `R` the products of the two halves.
fn trace_of_word(mats: &[&SparseMatrix]) -> Complex64 {
    if mats.len() == 1 {
        return mats[0].to_dense().trace().expect("square");
    }
    let (left, right) = mats.split_at(mats.len() / 2);
    chain(left).trace_of_product(&chain(right)).expect("square")
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum TraceKey {
    Def(Vec<u16>),
    Adj(Vec<(AdjKind, u16)>),
}

/// Matrices and tensors for one `N`, plus a trace memo.
pub struct NumericContext {
    pub algebra: Algebra,
    /// Row-compressed `T^a`, `F^a`, `D^a` used for trace products.
    sparse_t: Vec<SparseMatrix>,
    sparse_f: Vec<SparseMatrix>,
    sparse_d: Vec<SparseMatrix>,
    /// For `a*dim + b`, the `c` with `f_abc != 0` (resp. `d_abc`). Nonzero
    /// patterns of both tensors are invariant under index permutations.
    f_fibers: Vec<Vec<usize>>,
    d_fibers: Vec<Vec<usize>>,
    /// `0..max(dim, N)`, sliced for full ranges and single values.
    counting: Vec<usize>,
    traces: RwLock<HashMap<TraceKey, Complex64>>,
}

impl NumericContext {
    pub fn new(n: usize) -> Result<Self, OracleError> {
        if n < 2 {
            return Err(OracleError::InvalidN(n));
        }
        let algebra = Algebra::new(n)?;
        let sparse = |ms: &[CMatrix]| ms.iter().map(SparseMatrix::from_dense).collect();
        let dim = algebra.dim();
        let fibers = |get: &dyn Fn(usize, usize, usize) -> f64| -> Vec<Vec<usize>> {
            (0..dim * dim)
                .map(|ab| (0..dim).filter(|&c| get(ab / dim, ab % dim, c) != 0.0).collect())
                .collect()
        };
        Ok(Self {
            f_fibers: fibers(&|a, b, c| algebra.f_dense.get(a, b, c)),
            d_fibers: fibers(&|a, b, c| algebra.d_dense.get(a, b, c)),
            counting: (0..dim.max(n)).collect(),
            sparse_t: sparse(algebra.basis.generators()),
            sparse_f: sparse(algebra.adjoint.f_all()),
            sparse_d: sparse(algebra.adjoint.d_all()),
            algebra,
            traces: RwLock::new(HashMap::new()),
        })
    }

    fn range(&self, sort: Sort) -> usize {
        match sort {
            Sort::Adjoint => self.algebra.dim(),
            Sort::Fundamental => self.algebra.n(),
        }
    }

    fn trace(&self, key: TraceKey) -> Complex64 {
        let mats: Vec<&SparseMatrix> = match &key {
            TraceKey::Def(w) => w.iter().map(|&a| &self.sparse_t[a as usize]).collect(),
            TraceKey::Adj(w) => w
                .iter()
                .map(|&(k, a)| match k {
                    AdjKind::F => &self.sparse_f[a as usize],
                    AdjKind::D => &self.sparse_d[a as usize],
                })
                .collect(),
        };
        // Long words rarely repeat under sampling, so only short ones are kept.
        if mats.len() > MEMO_MAX_LEN {
            return trace_of_word(&mats);
        }
        if let Some(v) = self.traces.read().expect("trace memo").get(&key) {
            return *v;
        }
        let value = trace_of_word(&mats);
        self.traces.write().expect("trace memo").insert(key, value);
        value
    }

    fn factor_value(&self, f: &Factor, idx: &[usize]) -> Complex64 {
        let alg = &self.algebra;
        let real = |x: f64| Complex64::new(x, 0.0);
        match f {
            Factor::Delta(..) => real(if idx[0] == idx[1] { 1.0 } else { 0.0 }),
            Factor::F3(_) => real(alg.f_dense.get(idx[0], idx[1], idx[2])),
            Factor::D3(_) => real(alg.d_dense.get(idx[0], idx[1], idx[2])),
            Factor::TElem { .. } => alg.basis.generator(idx[0])[(idx[1], idx[2])],
            Factor::FElem { .. } => alg.adjoint.f(idx[0])[(idx[1], idx[2])],
            Factor::DElem { .. } => alg.adjoint.d(idx[0])[(idx[1], idx[2])],
            Factor::TrDef(_) => self.trace(TraceKey::Def(idx.iter().map(|&a| a as u16).collect())),
            Factor::TrAdj(word) => self.trace(TraceKey::Adj(
                word.iter().zip(idx).map(|((k, _), &a)| (*k, a as u16)).collect(),
            )),
        }
    }
}

#[derive(Clone, Copy)]
enum Src {
    Const(usize),
    Var(usize),
}

/// A factor that restricts the values of the label at its depth.
#[derive(Clone, Copy)]
enum Guard {
    /// `delta` whose other slot is known.
    Equal(Src),
    /// `f` or `d` whose other two slots are known.
    F(Src, Src),
    D(Src, Src),
}

struct Plan<'a> {
    ranges: Vec<usize>,
    guards: Vec<Option<Guard>>,
    /// Factors whose last summed label is at this depth; slot 0 holds the
    /// factors with no summed labels.
    at_depth: Vec<Vec<(&'a Factor, Vec<Src>)>>,
}

fn factor_rank(f: &Factor) -> u8 {
    match f {
        Factor::Delta(..) => 0,
        Factor::F3(_) => 1,
        Factor::D3(_) => 2,
        Factor::TElem { .. } => 3,
        Factor::FElem { .. } => 4,
        Factor::DElem { .. } => 5,
        Factor::TrDef(_) => 6,
        Factor::TrAdj(_) => 7,
    }
}

fn plan_term<'a>(
    ctx: &NumericContext,
    term: &'a Term,
    assignment: &Assignment,
) -> Result<Plan<'a>, OracleError> {
    let mut factors: Vec<&Factor> = term.factors.iter().collect();
    factors.sort_by_key(|f| factor_rank(f));
    let counts = term.label_counts();
    // Greedy order: next label comes from the factor with the fewest
    // unplaced labels, so factors complete (and prune) as early as possible.
    let mut vars: Vec<&Index> = Vec::new();
    loop {
        let next = factors
            .iter()
            .filter_map(|f| {
                let open: Vec<&Index> = f
                    .indices()
                    .into_iter()
                    .filter(|x| x.is_label() && counts[*x] >= 2 && !vars.contains(x))
                    .collect();
                (!open.is_empty()).then(|| (open.len(), open[0]))
            })
            .min_by_key(|(k, _)| *k);
        match next {
            Some((_, x)) => vars.push(x),
            None => break,
        }
    }
    let ranges = vars.iter().map(|x| ctx.range(x.sort)).collect();
    let mut at_depth: Vec<Vec<(&Factor, Vec<Src>)>> = vec![Vec::new(); vars.len() + 1];
    for f in factors {
        let mut srcs = Vec::new();
        let mut depth = 0;
        for x in f.indices() {
            let max = ctx.range(x.sort);
            let src = match &x.kind {
                IndexKind::Value(v) => {
                    let v = *v as usize;
                    if v > max {
                        return Err(OracleError::OutOfRange {
                            label: x.to_string(),
                            value: v,
                            max,
                        });
                    }
                    Src::Const(v - 1)
                }
                _ => match vars.iter().position(|y| *y == x) {
                    Some(p) => {
                        depth = depth.max(p + 1);
                        Src::Var(p)
                    }
                    None => {
                        let name = x.to_string();
                        let v = *assignment
                            .get(&name)
                            .ok_or_else(|| OracleError::MissingAssignment(name.clone()))?;
                        if v == 0 || v > max {
                            return Err(OracleError::OutOfRange {
                                label: name,
                                value: v,
                                max,
                            });
                        }
                        Src::Const(v - 1)
                    }
                },
            };
            srcs.push(src);
        }
        at_depth[depth].push((f, srcs));
    }
    let guards = (0..vars.len()).map(|d| find_guard(&at_depth[d + 1], d)).collect();
    Ok(Plan {
        ranges,
        guards,
        at_depth,
    })
}

fn find_guard(factors: &[(&Factor, Vec<Src>)], depth: usize) -> Option<Guard> {
    factors.iter().find_map(|(f, srcs)| {
        let mine = |s: &Src| matches!(s, Src::Var(p) if *p == depth);
        if srcs.iter().filter(|s| mine(s)).count() != 1 {
            return None;
        }
        let mut others = srcs.iter().copied().filter(|s| !mine(s));
        match f {
            Factor::Delta(..) => Some(Guard::Equal(others.next()?)),
            Factor::F3(_) => Some(Guard::F(others.next()?, others.next()?)),
            Factor::D3(_) => Some(Guard::D(others.next()?, others.next()?)),
            _ => None,
        }
    })
}

fn resolve(srcs: &[Src], vals: &[usize], out: &mut Vec<usize>) {
    out.clear();
    out.extend(srcs.iter().map(|s| match *s {
        Src::Const(v) => v,
        Src::Var(p) => vals[p],
    }));
}

fn sum_plan(ctx: &NumericContext, plan: &Plan, depth: usize, vals: &mut Vec<usize>, acc: Complex64) -> Complex64 {
    if depth == plan.ranges.len() {
        return acc;
    }
    let mut total = Complex64::new(0.0, 0.0);
    let mut buf = Vec::new();
    let at = |s: Src| match s {
        Src::Const(v) => v,
        Src::Var(p) => vals[p],
    };
    let dim = ctx.algebra.dim();
    let candidates: &[usize] = match plan.guards[depth] {
        None => &ctx.counting[..plan.ranges[depth]],
        Some(Guard::Equal(s)) => {
            let v = at(s);
            &ctx.counting[v..v + 1]
        }
        Some(Guard::F(x, y)) => &ctx.f_fibers[at(x) * dim + at(y)],
        Some(Guard::D(x, y)) => &ctx.d_fibers[at(x) * dim + at(y)],
    };
    for &v in candidates {
        vals[depth] = v;
        let mut val = acc;
        for (f, srcs) in &plan.at_depth[depth + 1] {
            resolve(srcs, vals, &mut buf);
            val *= ctx.factor_value(f, &buf);
            if val == Complex64::new(0.0, 0.0) {
                break;
            }
        }
        if val != Complex64::new(0.0, 0.0) {
            total += sum_plan(ctx, plan, depth + 1, vals, val);
        }
    }
    total
}

fn eval_term(ctx: &NumericContext, term: &Term, assignment: &Assignment) -> Result<Complex64, OracleError> {
    let plan = plan_term(ctx, term, assignment)?;
    let mut acc = term.coeff.eval_complex(ctx.algebra.n() as i64);
    let mut buf = Vec::new();
    for (f, srcs) in &plan.at_depth[0] {
        resolve(srcs, &[], &mut buf);
        acc *= ctx.factor_value(f, &buf);
    }
    if acc == Complex64::new(0.0, 0.0) {
        return Ok(acc);
    }
    let mut vals = vec![0; plan.ranges.len()];
    Ok(sum_plan(ctx, &plan, 0, &mut vals, acc))
}

fn free_list(e: &ColorExpr) -> String {
    e.free().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Worst disagreement found by [`Oracle::equal_by_sampling`].
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub n: usize,
    pub assignment: Assignment,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingVerdict {
    pub equal: bool,
    pub samples: usize,
    /// `None` only when nothing was sampled.
    pub worst: Option<Witness>,
}

impl SamplingVerdict {
    pub fn worst_residual(&self) -> f64 {
        self.worst.as_ref().map_or(0.0, |w| w.residual)
    }
}

/// Per-`N` numeric contexts, built on first use and then shared.
#[derive(Default)]
pub struct Oracle {
    contexts: Mutex<BTreeMap<usize, Arc<NumericContext>>>,
}

static GLOBAL: LazyLock<Oracle> = LazyLock::new(Oracle::new);

/// Process-wide oracle instance.
pub fn global() -> &'static Oracle {
    &GLOBAL
}

/// Evaluates with the process-wide oracle.
pub fn eval(e: &ColorExpr, n: usize, assignment: &Assignment) -> Result<Complex64, OracleError> {
    global().eval(e, n, assignment)
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn context(&self, n: usize) -> Result<Arc<NumericContext>, OracleError> {
        // Holding the lock while building serializes construction per N.
        let mut map = self.contexts.lock().expect("context cache");
        if let Some(ctx) = map.get(&n) {
            return Ok(Arc::clone(ctx));
        }
        let ctx = Arc::new(NumericContext::new(n)?);
        map.insert(n, Arc::clone(&ctx));
        Ok(ctx)
    }

    /// Value of `e` at `N = n` with the free indices fixed by `assignment`
    /// (1-based values keyed by label).
    pub fn eval(&self, e: &ColorExpr, n: usize, assignment: &Assignment) -> Result<Complex64, OracleError> {
        let ctx = self.context(n)?;
        for x in e.free() {
            if !assignment.contains_key(&x.to_string()) {
                return Err(OracleError::MissingAssignment(x.to_string()));
            }
        }
        for name in assignment.keys() {
            if !e.free().iter().any(|x| x.to_string() == *name) {
                return Err(OracleError::UnexpectedAssignment(name.clone()));
            }
        }
        for x in e.free() {
            let v = assignment[&x.to_string()];
            let max = ctx.range(x.sort);
            if v == 0 || v > max {
                return Err(OracleError::OutOfRange {
                    label: x.to_string(),
                    value: v,
                    max,
                });
            }
        }
        let mut total = Complex64::new(0.0, 0.0);
        for t in e.terms() {
            total += eval_term(&ctx, t, assignment)?;
        }
        Ok(total)
    }

    /// Free-index assignments used by [`Oracle::equal_by_sampling`]: every
    /// assignment when there are at most `samples` of them, otherwise
    /// `samples` uniform draws from a generator seeded by `(seed, n)`.
    pub fn sample_assignments(
        &self,
        e: &ColorExpr,
        n: usize,
        samples: usize,
        seed: u64,
    ) -> Result<Vec<Assignment>, OracleError> {
        let ctx = self.context(n)?;
        let ranges: Vec<(String, usize)> = e.free().iter().map(|x| (x.to_string(), ctx.range(x.sort))).collect();
        let space = ranges
            .iter()
            .try_fold(1usize, |acc, (_, r)| acc.checked_mul(*r))
            .unwrap_or(usize::MAX);
        if space <= samples.max(1) {
            let mut out = Vec::with_capacity(space);
            for mut k in 0..space {
                let mut a = Assignment::new();
                for (name, r) in &ranges {
                    a.insert(name.clone(), k % r + 1);
                    k /= r;
                }
                out.push(a);
            }
            return Ok(out);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        Ok((0..samples)
            .map(|_| {
                ranges
                    .iter()
                    .map(|(name, r)| (name.clone(), rng.random_range(1..=*r)))
                    .collect()
            })
            .collect())
    }

    /// Compares `a` and `b` on sampled free-index assignments for each `N`
    /// in `n_set`; equal when every absolute difference is within `tol`.
    pub fn equal_by_sampling(
        &self,
        a: &ColorExpr,
        b: &ColorExpr,
        n_set: &[usize],
        samples: usize,
        tol: f64,
        seed: u64,
    ) -> Result<SamplingVerdict, OracleError> {
        if a.free() != b.free() {
            return Err(OracleError::FreeMismatch {
                left: free_list(a),
                right: free_list(b),
            });
        }
        let mut jobs = Vec::new();
        for &n in n_set {
            for asg in self.sample_assignments(a, n, samples, seed)? {
                jobs.push((n, asg));
            }
        }
        let results: Vec<Witness> = jobs
            .into_par_iter()
            .map(|(n, assignment)| {
                let lhs = self.eval(a, n, &assignment)?;
                let rhs = self.eval(b, n, &assignment)?;
                Ok(Witness {
                    n,
                    residual: (lhs - rhs).norm(),
                    assignment,
                    lhs,
                    rhs,
                })
            })
            .collect::<Result<_, OracleError>>()?;
        let samples = results.len();
        let worst = results
            .into_iter()
            .reduce(|x, y| if y.residual > x.residual { y } else { x });
        Ok(SamplingVerdict {
            equal: worst.as_ref().map_or(true, |w| w.residual <= tol),
            samples,
            worst,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use approx::assert_abs_diff_eq;

    fn asg(pairs: &[(&str, usize)]) -> Assignment {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn ev(s: &str, n: usize, pairs: &[(&str, usize)]) -> Complex64 {
        eval(&parse(s).unwrap(), n, &asg(pairs)).unwrap()
    }

    #[test]
    fn fixed_structure_constant() {
        assert_abs_diff_eq!(ev("f(1,2,3)", 3, &[]).re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn four_t_trace_at_su3() {
        let v = ev("Tr[T(a)T(b)T(a)T(c)]", 3, &[("b", 1), ("c", 1)]);
        assert_abs_diff_eq!(v.re, -1.0 / 12.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn scalar_contractions() {
        assert_abs_diff_eq!(ev("delta(a,a)", 3, &[]).re, 8.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev("delta(i,i)*T(a;j,j)*T(a;k,k) + 0*delta(i,i)", 3, &[]).re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev("TrAdj[F(a)F(a)]", 3, &[]).re, 24.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ev("TrAdj[D(a)D(b)]", 2, &[("a", 1), ("b", 1)]).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn guarded_contractions() {
        // delta and f/d fibers restrict the loops; results must match the closed forms.
        let ff = ev("delta(x,y)*f(a,x,z)*f(b,y,z)", 4, &[("a", 3), ("b", 3)]);
        assert_abs_diff_eq!(ff.re, 4.0, epsilon = 1e-12);
        let dd = ev("d(x,a,y)*d(y,x,b)", 4, &[("a", 5), ("b", 5)]);
        assert_abs_diff_eq!(dd.re, 3.0, epsilon = 1e-12);
        let off = ev("d(x,a,y)*d(y,x,b)", 4, &[("a", 5), ("b", 6)]);
        assert_abs_diff_eq!(off.norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn coefficients_evaluate_exactly() {
        let v = ev("(NN^2-1)/(2*NN)", 3, &[]);
        assert_eq!(v, Complex64::new(4.0 / 3.0, 0.0));
    }

    #[test]
    fn assignment_errors() {
        let e = parse("delta(a,b)").unwrap();
        assert!(matches!(eval(&e, 3, &asg(&[("a", 1)])), Err(OracleError::MissingAssignment(_))));
        assert!(matches!(
            eval(&e, 3, &asg(&[("a", 1), ("b", 9)])),
            Err(OracleError::OutOfRange { max: 8, .. })
        ));
        assert!(matches!(
            eval(&e, 3, &asg(&[("a", 1), ("b", 1), ("c", 1)])),
            Err(OracleError::UnexpectedAssignment(_))
        ));
        assert!(matches!(eval(&parse("f(1,2,9)").unwrap(), 3, &Assignment::new()), Err(OracleError::OutOfRange { .. })));
        assert!(matches!(eval(&e, 1, &Assignment::new()), Err(OracleError::InvalidN(1))));
    }

    #[test]
    fn fierz_by_sampling() {
        let lhs = parse("T(a;i,j)*T(a;k,l)").unwrap();
        let rhs = crate::expr::parse_with_sorts(
            "(1/2)*delta(i,l)*delta(j,k) - 1/(2*NN)*delta(i,j)*delta(k,l)",
            lhs.free(),
        )
        .unwrap();
        let v = global().equal_by_sampling(&lhs, &rhs, &[2, 3, 4], 30, ORACLE_TOL, 0).unwrap();
        assert!(v.equal, "{v:?}");
    }

    #[test]
    fn antisymmetric_part_is_detected() {
        let a = parse("Tr[T(a)T(b)T(c)]").unwrap();
        let b = parse("Tr[T(b)T(a)T(c)]").unwrap();
        let v = global().equal_by_sampling(&a, &b, &[3], 200, ORACLE_TOL, 0).unwrap();
        assert!(!v.equal);
        let w = v.worst.unwrap();
        let f = ev("f(a,b,c)", 3, &[("a", w.assignment["a"]), ("b", w.assignment["b"]), ("c", w.assignment["c"])]);
        assert!(f.norm() > 0.1);
        let same = global().equal_by_sampling(&a, &a, &[2, 3], 20, ORACLE_TOL, 0).unwrap();
        assert!(same.equal);
        assert_eq!(same.worst_residual(), 0.0);
    }

    #[test]
    fn repeated_evaluation_is_bit_identical() {
        let e = parse("TrAdj[F(a)D(b)F(c)D(a)]").unwrap();
        let x = eval(&e, 4, &asg(&[("b", 3), ("c", 8)])).unwrap();
        let y = eval(&e, 4, &asg(&[("b", 3), ("c", 8)])).unwrap();
        assert_eq!(x.re.to_bits(), y.re.to_bits());
        assert_eq!(x.im.to_bits(), y.im.to_bits());
    }

    #[test]
    fn mismatched_free_sets() {
        let a = parse("delta(a,b)").unwrap();
        let b = parse("delta(a,c)").unwrap();
        assert!(matches!(
            global().equal_by_sampling(&a, &b, &[3], 5, ORACLE_TOL, 0),
            Err(OracleError::FreeMismatch { .. })
        ));
    }
}
