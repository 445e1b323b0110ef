//! Individual rewrite rules. Each rule inspects one term and, when it
//! applies, returns the replacement terms (possibly none, for a term that
//! vanishes).

use std::cmp::Ordering;

use crate::expr::{AdjKind, Factor, Index, IndexKind, NPoly, Sort, Term};

#[derive(Debug, Clone)]
pub(crate) struct Rewrite {
    pub rule: &'static str,
    pub factors: Vec<usize>,
    pub out: Vec<Term>,
}

/// Which groups of rules are active.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RuleSet {
    /// Zero and Kronecker rules.
    pub basic: bool,
    /// Defining-trace expansion, Fierz, generator products.
    pub defining: bool,
    /// `TrAdj`, `F(a;b,c)`, `D(a;b,c)` expansion.
    pub adjoint: bool,
    /// Bubbles, triangles, `f·f` splitting.
    pub contract: bool,
    pub split: bool,
    pub n3: bool,
}

fn n() -> NPoly {
    NPoly::n()
}

fn next_dummy(t: &Term) -> u32 {
    t.max_dummy() + 1
}

fn others(t: &Term, skip: &[usize]) -> Vec<Factor> {
    t.factors
        .iter()
        .enumerate()
        .filter(|(k, _)| !skip.contains(k))
        .map(|(_, f)| f.clone())
        .collect()
}

fn with(coeff: NPoly, mut base: Vec<Factor>, extra: Vec<Factor>) -> Term {
    base.extend(extra);
    Term::new(coeff, base)
}

fn substitute(factors: &mut [Factor], from: &Index, to: &Index) {
    for f in factors.iter_mut() {
        f.for_each_index_mut(|x| {
            if x == from {
                *x = to.clone();
            }
        });
    }
}

fn has_dup(v: &[&Index]) -> bool {
    (0..v.len()).any(|i| (i + 1..v.len()).any(|j| v[i] == v[j]))
}

fn has_dup_dummy(v: &[&Index]) -> bool {
    (0..v.len()).any(|i| v[i].is_dummy() && (i + 1..v.len()).any(|j| v[i] == v[j]))
}

fn zero_rule(t: &Term) -> Option<Rewrite> {
    for (k, f) in t.factors.iter().enumerate() {
        let idx = f.indices();
        let rule = match f {
            Factor::F3(_) if has_dup(&idx) => "zero-f",
            Factor::D3(_) if has_dup_dummy(&idx) => "zero-d",
            Factor::TElem { i, j, .. } if i == j && i.is_dummy() => "zero-T",
            Factor::FElem { .. } if has_dup(&idx) => "zero-F",
            Factor::DElem { .. } if has_dup_dummy(&idx) => "zero-D",
            Factor::TrDef(v) if v.len() == 1 => "zero-trace",
            Factor::TrAdj(v) if v.len() == 1 => "zero-trace",
            _ => continue,
        };
        return Some(Rewrite {
            rule,
            factors: vec![k],
            out: Vec::new(),
        });
    }
    None
}

fn range_of(sort: Sort) -> NPoly {
    match sort {
        Sort::Fundamental => n(),
        Sort::Adjoint => NPoly::from_real(&[(2, 1, 1), (0, -1, 1)]),
    }
}

fn kronecker_rule(t: &Term) -> Option<Rewrite> {
    for (k, f) in t.factors.iter().enumerate() {
        let Factor::Delta(x, y) = f else { continue };
        let rest = others(t, &[k]);
        let (rule, out) = if x == y && x.is_dummy() {
            ("delta-trace", vec![Term::new(&t.coeff * &range_of(x.sort), rest)])
        } else if !x.is_label() && !y.is_label() {
            let out = if x.kind == y.kind {
                vec![Term::new(t.coeff.clone(), rest)]
            } else {
                Vec::new()
            };
            ("delta-fixed", out)
        } else if x.is_dummy() || y.is_dummy() {
            let (from, to) = if x.is_dummy() { (x, y) } else { (y, x) };
            let mut rest = rest;
            substitute(&mut rest, from, to);
            ("delta", vec![Term::new(t.coeff.clone(), rest)])
        } else {
            continue;
        };
        return Some(Rewrite {
            rule,
            factors: vec![k],
            out,
        });
    }
    None
}

fn trdef_rule(t: &Term) -> Option<Rewrite> {
    for (k, f) in t.factors.iter().enumerate() {
        let Factor::TrDef(word) = f else { continue };
        let rest = others(t, &[k]);
        if word.len() == 2 {
            let delta = Factor::Delta(word[0].clone(), word[1].clone());
            return Some(Rewrite {
                rule: "trdef-2",
                factors: vec![k],
                out: vec![with(&t.coeff * &NPoly::rational(1, 2), rest, vec![delta])],
            });
        }
        if word.len() >= 3 {
            // Tr(T^a1 .. T^ak) = T^a1_{j1 j2} T^a2_{j2 j3} .. T^ak_{jk j1}
            let base = next_dummy(t);
            let len = word.len() as u32;
            let j = |m: u32| Index::dummy(base + m % len, Sort::Fundamental);
            let chain = word
                .iter()
                .zip(0u32..)
                .map(|(a, m)| Factor::TElem {
                    a: a.clone(),
                    i: j(m),
                    j: j(m + 1),
                })
                .collect();
            return Some(Rewrite {
                rule: "trdef-expand",
                factors: vec![k],
                out: vec![with(t.coeff.clone(), rest, chain)],
            });
        }
    }
    None
}

fn adjoint_rule(t: &Term) -> Option<Rewrite> {
    for (k, f) in t.factors.iter().enumerate() {
        let rest = others(t, &[k]);
        let (rule, coeff, extra) = match f {
            Factor::TrAdj(word) if word.len() >= 2 => {
                // Tr(X1 .. Xk) = (X1)_{e1 e2} (X2)_{e2 e3} .. (Xk)_{ek e1}
                let base = next_dummy(t);
                let len = word.len() as u32;
                let e = |m: u32| Index::dummy(base + m % len, Sort::Adjoint);
                let mut coeff = t.coeff.clone();
                let mut chain = Vec::new();
                for ((kind, a), m) in word.iter().zip(0u32..) {
                    let idx = [a.clone(), e(m), e(m + 1)];
                    chain.push(match kind {
                        AdjKind::F => {
                            coeff = &coeff * &NPoly::imag(-1, 1);
                            Factor::F3(idx)
                        }
                        AdjKind::D => Factor::D3(idx),
                    });
                }
                ("tradj-expand", coeff, chain)
            }
            Factor::FElem { a, b, c } => (
                "F-expand",
                &t.coeff * &NPoly::imag(-1, 1),
                vec![Factor::F3([a.clone(), b.clone(), c.clone()])],
            ),
            Factor::DElem { a, b, c } => (
                "D-expand",
                t.coeff.clone(),
                vec![Factor::D3([a.clone(), b.clone(), c.clone()])],
            ),
            _ => continue,
        };
        return Some(Rewrite {
            rule,
            factors: vec![k],
            out: vec![with(coeff, rest, extra)],
        });
    }
    None
}

fn telems(t: &Term) -> Vec<(usize, &Index, &Index, &Index)> {
    t.factors
        .iter()
        .enumerate()
        .filter_map(|(k, f)| match f {
            Factor::TElem { a, i, j } => Some((k, a, i, j)),
            _ => None,
        })
        .collect()
}

fn fierz_rule(t: &Term) -> Option<Rewrite> {
    let ts = telems(t);
    for (x, &(k1, a1, i, j)) in ts.iter().enumerate() {
        for &(k2, a2, k, l) in &ts[x + 1..] {
            if a1 != a2 || !a1.is_dummy() {
                continue;
            }
            // T^a_ij T^a_kl = 1/2 δ_il δ_jk - 1/(2N) δ_ij δ_kl
            let rest = others(t, &[k1, k2]);
            let d = |p: &Index, q: &Index| Factor::Delta(p.clone(), q.clone());
            let out = vec![
                with(&t.coeff * &NPoly::rational(1, 2), rest.clone(), vec![d(i, l), d(j, k)]),
                with(
                    &t.coeff * &NPoly::from_real(&[(-1, -1, 2)]),
                    rest,
                    vec![d(i, j), d(k, l)],
                ),
            ];
            return Some(Rewrite {
                rule: "fierz",
                factors: vec![k1, k2],
                out,
            });
        }
    }
    None
}

fn tproduct_rule(t: &Term) -> Option<Rewrite> {
    let ts = telems(t);
    for &(k1, a, i, j) in &ts {
        for &(k2, b, j2, k) in &ts {
            if k1 == k2 || j != j2 || !j.is_dummy() {
                continue;
            }
            // (T^a T^b)_ik = 1/(2N) δ_ab δ_ik + 1/2 (d_abe + i f_abe) T^e_ik
            let e = Index::dummy(next_dummy(t), Sort::Adjoint);
            let rest = others(t, &[k1, k2]);
            let te = Factor::TElem {
                a: e.clone(),
                i: i.clone(),
                j: k.clone(),
            };
            let out = vec![
                with(
                    &t.coeff * &NPoly::from_real(&[(-1, 1, 2)]),
                    rest.clone(),
                    vec![Factor::Delta(a.clone(), b.clone()), Factor::Delta(i.clone(), k.clone())],
                ),
                with(
                    &t.coeff * &NPoly::rational(1, 2),
                    rest.clone(),
                    vec![Factor::D3([a.clone(), b.clone(), e.clone()]), te.clone()],
                ),
                with(
                    &t.coeff * &NPoly::imag(1, 2),
                    rest,
                    vec![Factor::F3([a.clone(), b.clone(), e]), te],
                ),
            ];
            return Some(Rewrite {
                rule: "T-product",
                factors: vec![k1, k2],
                out,
            });
        }
    }
    None
}

/// Three-index tensor factors (`f` or `d`) with their positions.
fn tensors(t: &Term) -> Vec<(usize, bool, &[Index; 3])> {
    t.factors
        .iter()
        .enumerate()
        .filter_map(|(k, f)| match f {
            Factor::F3(v) => Some((k, true, v)),
            Factor::D3(v) => Some((k, false, v)),
            _ => None,
        })
        .collect()
}

fn shared_dummies<'a>(x: &'a [Index; 3], y: &[Index; 3]) -> Vec<&'a Index> {
    x.iter().filter(|i| i.is_dummy() && y.contains(i)).collect()
}

/// Position of `i` in `v`.
fn pos(v: &[Index; 3], i: &Index) -> usize {
    v.iter().position(|x| x == i).expect("index present")
}

/// Given the positions of the two chosen slots, returns the remaining index
/// and the parity of the permutation taking `v` to `(rest, first, second)`.
fn arrange(v: &[Index; 3], first: &Index, second: &Index) -> (Index, bool) {
    let p1 = pos(v, first);
    let p2 = pos(v, second);
    let p0 = 3 - p1 - p2;
    let perm = [p0, p1, p2];
    let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
    (v[p0].clone(), inversions % 2 == 1)
}

fn bubble_rule(t: &Term) -> Option<Rewrite> {
    let ts = tensors(t);
    for (x, &(k1, f1, v1)) in ts.iter().enumerate() {
        for &(k2, f2, v2) in &ts[x + 1..] {
            let shared = shared_dummies(v1, v2);
            if shared.len() < 2 {
                continue;
            }
            let (p, q) = (shared[0], shared[1]);
            let (a, s1) = arrange(v1, p, q);
            let (b, s2) = arrange(v2, p, q);
            let rest = others(t, &[k1, k2]);
            let delta = vec![Factor::Delta(a, b)];
            let (rule, out) = match (f1, f2) {
                (true, true) => {
                    // f_apq f_bpq = N δ_ab
                    let sign = if s1 ^ s2 { NPoly::int(-1) } else { NPoly::one() };
                    ("bubble-ff", vec![with(&(&t.coeff * &sign) * &n(), rest, delta)])
                }
                (false, false) => {
                    // d_apq d_bpq = (N^2 - 4)/N δ_ab
                    let c = NPoly::from_real(&[(1, 1, 1), (-1, -4, 1)]);
                    ("bubble-dd", vec![with(&t.coeff * &c, rest, delta)])
                }
                _ => ("bubble-fd", Vec::new()),
            };
            return Some(Rewrite {
                rule,
                factors: vec![k1, k2],
                out,
            });
        }
    }
    None
}

fn single_shared<'a>(x: &'a [Index; 3], y: &[Index; 3]) -> Option<&'a Index> {
    let s = shared_dummies(x, y);
    (s.len() == 1).then(|| s[0])
}

fn triangle_rule(t: &Term) -> Option<Rewrite> {
    let ts = tensors(t);
    for x in 0..ts.len() {
        for y in x + 1..ts.len() {
            let Some(q) = single_shared(ts[x].2, ts[y].2) else { continue };
            for z in y + 1..ts.len() {
                let (kx, fx, vx) = ts[x];
                let (ky, fy, vy) = ts[y];
                let (kz, fz, vz) = ts[z];
                let (Some(r), Some(p)) = (single_shared(vy, vz), single_shared(vz, vx)) else {
                    continue;
                };
                if p == q || q == r || p == r {
                    continue;
                }
                // X(a,p,q) Y(b,q,r) Z(c,r,p): the trace of three adjoint
                // matrices with the f/d pattern of X, Y, Z.
                let (a, sx) = arrange(vx, p, q);
                let (b, sy) = arrange(vy, q, r);
                let (c, sz) = arrange(vz, r, p);
                let mut odd = false;
                for (is_f, s) in [(fx, sx), (fy, sy), (fz, sz)] {
                    if is_f {
                        odd ^= s;
                    }
                }
                let nf = [fx, fy, fz].iter().filter(|f| **f).count();
                let coeff = match nf {
                    3 => NPoly::from_real(&[(1, 1, 2)]),
                    2 => NPoly::from_real(&[(1, -1, 2)]),
                    1 => NPoly::from_real(&[(1, -1, 2), (-1, 2, 1)]),
                    _ => NPoly::from_real(&[(1, 1, 2), (-1, -6, 1)]),
                };
                let coeff = if odd { -coeff } else { coeff };
                let tensor = if nf % 2 == 1 { Factor::F3([a, b, c]) } else { Factor::D3([a, b, c]) };
                let rest = others(t, &[kx, ky, kz]);
                return Some(Rewrite {
                    rule: "triangle",
                    factors: vec![kx, ky, kz],
                    out: vec![with(&t.coeff * &coeff, rest, vec![tensor])],
                });
            }
        }
    }
    None
}

/// Rotates `v` cyclically (an even permutation) so that `s` is last.
fn rotate_last(v: &[Index; 3], s: &Index) -> [Index; 3] {
    let p = pos(v, s);
    let mut w = v.clone();
    w.rotate_left((p + 1) % 3);
    w
}

fn split_rule(t: &Term) -> Option<Rewrite> {
    let ts = tensors(t);
    for (x, &(k1, f1, v1)) in ts.iter().enumerate() {
        if !f1 {
            continue;
        }
        for &(k2, f2, v2) in &ts[x + 1..] {
            if !f2 {
                continue;
            }
            let Some(s) = single_shared(v1, v2) else { continue };
            // f_pqs f_rts = 2/N (δ_pr δ_qt - δ_pt δ_qr) + d_prx d_qtx - d_qrx d_ptx
            let [p, q, _] = rotate_last(v1, s);
            let [r, u, _] = rotate_last(v2, s);
            let xd = Index::dummy(next_dummy(t), Sort::Adjoint);
            let rest = others(t, &[k1, k2]);
            let dl = |a: &Index, b: &Index| Factor::Delta(a.clone(), b.clone());
            let dd = |a: &Index, b: &Index| Factor::D3([a.clone(), b.clone(), xd.clone()]);
            let two_over_n = NPoly::from_real(&[(-1, 2, 1)]);
            let out = vec![
                with(&t.coeff * &two_over_n, rest.clone(), vec![dl(&p, &r), dl(&q, &u)]),
                with(&t.coeff * &-&two_over_n, rest.clone(), vec![dl(&p, &u), dl(&q, &r)]),
                with(t.coeff.clone(), rest.clone(), vec![dd(&p, &r), dd(&q, &u)]),
                with(-&t.coeff, rest, vec![dd(&q, &r), dd(&p, &u)]),
            ];
            return Some(Rewrite {
                rule: "ff-split",
                factors: vec![k1, k2],
                out,
            });
        }
    }
    None
}

type Pairing = [[Index; 2]; 2];

fn pairing(a: &Index, b: &Index, c: &Index, d: &Index) -> Pairing {
    let mut p = [a.clone(), b.clone()];
    p.sort();
    let mut q = [c.clone(), d.clone()];
    q.sort();
    let mut pr = [p, q];
    pr.sort();
    pr
}

/// For `d_pqx d_rtx` with four external legs: the legs and whether the
/// current pairing is the strictly greatest of the three.
fn dd_external(v1: &[Index; 3], v2: &[Index; 3]) -> Option<([Index; 4], Index, bool)> {
    let x = single_shared(v1, v2)?;
    let [p, q, _] = rotate_last(v1, x);
    let [r, u, _] = rotate_last(v2, x);
    if [&p, &q, &r, &u].iter().any(|i| i.is_dummy()) {
        return None;
    }
    let cur = pairing(&p, &q, &r, &u);
    let alt1 = pairing(&p, &r, &q, &u);
    let alt2 = pairing(&p, &u, &q, &r);
    let greatest = cur.cmp(&alt1) == Ordering::Greater && cur.cmp(&alt2) == Ordering::Greater;
    Some(([p, q, r, u], x.clone(), greatest))
}

/// Number of `d·d` pairs in the strictly greatest pairing, for the measure.
pub(crate) fn max_pairings(t: &Term) -> usize {
    let ts = tensors(t);
    let mut count = 0;
    for (x, &(_, f1, v1)) in ts.iter().enumerate() {
        for &(_, f2, v2) in &ts[x + 1..] {
            if !f1 && !f2 && dd_external(v1, v2).is_some_and(|(_, _, g)| g) {
                count += 1;
            }
        }
    }
    count
}

/// SU(3) only: `d_abx d_cdx + d_acx d_bdx + d_adx d_bcx = (δδ + δδ + δδ)/3`,
/// used to eliminate the greatest of the three pairings.
fn n3_rule(t: &Term) -> Option<Rewrite> {
    let ts = tensors(t);
    for (x, &(k1, f1, v1)) in ts.iter().enumerate() {
        for &(k2, f2, v2) in &ts[x + 1..] {
            if f1 || f2 {
                continue;
            }
            let Some(([p, q, r, u], xd, true)) = dd_external(v1, v2) else { continue };
            let rest = others(t, &[k1, k2]);
            let dl = |a: &Index, b: &Index| Factor::Delta(a.clone(), b.clone());
            let dd = |a: &Index, b: &Index| Factor::D3([a.clone(), b.clone(), xd.clone()]);
            let third = &t.coeff * &NPoly::rational(1, 3);
            let out = vec![
                with(third.clone(), rest.clone(), vec![dl(&p, &q), dl(&r, &u)]),
                with(third.clone(), rest.clone(), vec![dl(&p, &r), dl(&q, &u)]),
                with(third, rest.clone(), vec![dl(&p, &u), dl(&q, &r)]),
                with(-&t.coeff, rest.clone(), vec![dd(&p, &r), dd(&q, &u)]),
                with(-&t.coeff, rest, vec![dd(&p, &u), dd(&q, &r)]),
            ];
            return Some(Rewrite {
                rule: "n3-dd",
                factors: vec![k1, k2],
                out,
            });
        }
    }
    None
}

/// First applicable rule in priority order.
pub(crate) fn find_rule(t: &Term, rules: RuleSet) -> Option<Rewrite> {
    if rules.basic {
        if let Some(r) = zero_rule(t).or_else(|| kronecker_rule(t)) {
            return Some(r);
        }
    }
    if rules.defining {
        if let Some(r) = trdef_rule(t) {
            return Some(r);
        }
    }
    if rules.adjoint {
        if let Some(r) = adjoint_rule(t) {
            return Some(r);
        }
    }
    if rules.defining {
        if let Some(r) = fierz_rule(t).or_else(|| tproduct_rule(t)) {
            return Some(r);
        }
    }
    if rules.contract {
        if let Some(r) = bubble_rule(t).or_else(|| triangle_rule(t)) {
            return Some(r);
        }
        if rules.split {
            if let Some(r) = split_rule(t) {
                return Some(r);
            }
        }
        if rules.n3 {
            return n3_rule(t);
        }
    }
    None
}

/// Lexicographic termination measure; every rule application replaces a
/// term by terms with strictly smaller measure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Measure {
    traces: usize,
    trace_len: usize,
    telems: usize,
    matrix_elems: usize,
    bound_fund: usize,
    f_count: usize,
    bound_adj: usize,
    factors: usize,
    max_pairings: usize,
}

pub(crate) fn measure(t: &Term) -> Measure {
    let mut m = Measure {
        traces: 0,
        trace_len: 0,
        telems: 0,
        matrix_elems: 0,
        bound_fund: 0,
        f_count: 0,
        bound_adj: 0,
        factors: t.factors.len(),
        max_pairings: max_pairings(t),
    };
    for f in &t.factors {
        match f {
            Factor::TrDef(v) => {
                m.traces += 1;
                m.trace_len += v.len();
            }
            Factor::TrAdj(v) => {
                m.traces += 1;
                m.trace_len += v.len();
            }
            Factor::TElem { .. } => m.telems += 1,
            Factor::FElem { .. } | Factor::DElem { .. } => m.matrix_elems += 1,
            Factor::F3(_) => m.f_count += 1,
            _ => {}
        }
    }
    for (x, c) in t.label_counts() {
        if c == 2 && matches!(x.kind, IndexKind::Dummy(_) | IndexKind::Named(_)) {
            match x.sort {
                Sort::Fundamental => m.bound_fund += 1,
                Sort::Adjoint => m.bound_adj += 1,
            }
        }
    }
    m
}
