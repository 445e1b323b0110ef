use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{AdjKind, ColorExpr, Factor, Index, IndexKind, NPoly, Term};

/// Exhaustive relabeling is used up to this many summed labels.
const EXHAUSTIVE_DUMMIES: usize = 6;

/// Sorts in place and reports whether the permutation was odd.
fn sort_parity<T: Ord>(v: &mut [T]) -> bool {
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    odd
}

fn has_repeat<T: PartialEq>(sorted: &[T]) -> bool {
    sorted.windows(2).any(|w| w[0] == w[1])
}

fn min_rotation<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    (0..v.len())
        .map(|r| {
            let mut w = v.to_vec();
            w.rotate_left(r);
            w
        })
        .min()
        .unwrap_or_default()
}

/// Puts one factor into its canonical form. Returns `None` when the factor
/// vanishes identically, otherwise the factor and whether the sign flipped.
pub(crate) fn normalize_factor(f: Factor) -> Option<(Factor, bool)> {
    match f {
        Factor::Delta(x, y) => Some(if x <= y {
            (Factor::Delta(x, y), false)
        } else {
            (Factor::Delta(y, x), false)
        }),
        Factor::F3(mut v) => {
            let odd = sort_parity(&mut v);
            (!has_repeat(&v)).then_some((Factor::F3(v), odd))
        }
        Factor::D3(mut v) => {
            sort_parity(&mut v);
            Some((Factor::D3(v), false))
        }
        Factor::FElem { a, b, c } => {
            let mut v = [a, b, c];
            let odd = sort_parity(&mut v);
            if has_repeat(&v) {
                return None;
            }
            let [a, b, c] = v;
            Some((Factor::FElem { a, b, c }, odd))
        }
        Factor::DElem { a, b, c } => {
            let mut v = [a, b, c];
            sort_parity(&mut v);
            let [a, b, c] = v;
            Some((Factor::DElem { a, b, c }, false))
        }
        t @ Factor::TElem { .. } => Some((t, false)),
        Factor::TrDef(v) => Some((Factor::TrDef(min_rotation(&v)), false)),
        Factor::TrAdj(v) => {
            // Tr(X1..Xk) = (-1)^{#F} Tr(Xk..X1) since F^T = -F, D^T = D.
            let forward = min_rotation(&v);
            let mut rev = v.clone();
            rev.reverse();
            let backward = min_rotation(&rev);
            let odd = v.iter().filter(|(k, _)| *k == AdjKind::F).count() % 2 == 1;
            if forward == backward {
                if odd {
                    return None;
                }
                Some((Factor::TrAdj(forward), false))
            } else if forward < backward {
                Some((Factor::TrAdj(forward), false))
            } else {
                Some((Factor::TrAdj(backward), odd))
            }
        }
    }
}

/// Normalizes every factor and sorts them; `None` if the product vanishes.
fn normalize_all(factors: Vec<Factor>) -> Option<(Vec<Factor>, bool)> {
    let mut neg = false;
    let mut out = Vec::with_capacity(factors.len());
    for f in factors {
        let (g, flip) = normalize_factor(f)?;
        neg ^= flip;
        out.push(g);
    }
    out.sort();
    Some((out, neg))
}

fn relabel(factors: &[Factor], map: &BTreeMap<Index, u32>) -> Vec<Factor> {
    factors
        .iter()
        .map(|f| {
            let mut g = f.clone();
            g.for_each_index_mut(|x| {
                if let Some(&k) = map.get(x) {
                    x.kind = IndexKind::Dummy(k);
                }
            });
            g
        })
        .collect()
}

fn next_permutation(p: &mut [u32]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn bound_labels(factors: &[Factor]) -> Vec<Index> {
    let mut counts: BTreeMap<&Index, usize> = BTreeMap::new();
    let mut order = Vec::new();
    for f in factors {
        for x in f.indices() {
            if x.is_label() {
                let c = counts.entry(x).or_insert(0);
                if *c == 0 {
                    order.push(x);
                }
                *c += 1;
            }
        }
    }
    order.into_iter().filter(|x| counts[x] == 2).cloned().collect()
}

fn masked(f: &Factor) -> Factor {
    let mut g = f.clone();
    g.for_each_index_mut(|x| {
        if x.is_dummy() {
            x.kind = IndexKind::Dummy(0);
        }
    });
    g
}

/// Returns the canonical factor list and sign, or `None` if the term is zero.
fn canonical_factors(factors: Vec<Factor>) -> Option<(Vec<Factor>, bool)> {
    let (factors, neg) = normalize_all(factors)?;
    let bound = bound_labels(&factors);
    if bound.is_empty() {
        return Some((factors, neg));
    }
    if bound.len() <= EXHAUSTIVE_DUMMIES {
        let mut perm: Vec<u32> = (1..=bound.len() as u32).collect();
        let mut best: Option<(Vec<Factor>, bool)> = None;
        let mut vanishes = false;
        loop {
            let map: BTreeMap<Index, u32> = bound.iter().cloned().zip(perm.iter().copied()).collect();
            let (cand, flip) = normalize_all(relabel(&factors, &map))?;
            let sign = neg ^ flip;
            match &best {
                Some((b, s)) if cand == *b => vanishes |= *s != sign,
                Some((b, _)) if cand > *b => {}
                _ => {
                    best = Some((cand, sign));
                    vanishes = false;
                }
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        return if vanishes { None } else { best };
    }
    // Heuristic for many dummies: sort with dummies masked, relabel by first
    // occurrence, repeat until a state recurs, then take the least state of
    // the cycle so the result does not depend on the entry point.
    let mut seen: Vec<(Vec<Factor>, bool)> = Vec::new();
    let mut state = (factors, neg);
    loop {
        let mut fs = state.0.clone();
        fs.sort_by(|x, y| masked(x).cmp(&masked(y)).then_with(|| x.cmp(y)));
        let order = bound_labels(&fs);
        let map: BTreeMap<Index, u32> = order.into_iter().zip(1..).collect();
        let (next, flip) = normalize_all(relabel(&fs, &map))?;
        let next = (next, state.1 ^ flip);
        if let Some(pos) = seen.iter().position(|s| s.0 == next.0) {
            if seen[pos].1 != next.1 {
                return None;
            }
            return seen[pos..].iter().min_by(|a, b| a.0.cmp(&b.0)).cloned();
        }
        seen.push(next.clone());
        state = next;
    }
}

/// Canonical form of a single term, `None` if it vanishes by symmetry.
pub fn canonicalize_term(term: &Term) -> Option<Term> {
    if term.coeff.is_zero() {
        return None;
    }
    let (factors, neg) = canonical_factors(term.factors.clone())?;
    let coeff = if neg { -&term.coeff } else { term.coeff.clone() };
    Some(Term::new(coeff, factors))
}

/// Sorts indices within factors (tracking signs), orders factors, renumbers
/// summed labels, merges like terms and drops zeros.
pub fn canonicalize(e: &ColorExpr) -> ColorExpr {
    let canon: Vec<Option<Term>> = e.terms().par_iter().map(canonicalize_term).collect();
    let mut merged: BTreeMap<Vec<Factor>, NPoly> = BTreeMap::new();
    for t in canon.into_iter().flatten() {
        let slot = merged.entry(t.factors).or_default();
        *slot = &*slot + &t.coeff;
    }
    let terms = merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(f, c)| Term::new(c, f))
        .collect();
    ColorExpr::from_parts(e.free().to_vec(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn canon(s: &str) -> String {
        canonicalize(&parse(s).unwrap()).to_string()
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(canon("f(b,a,c)"), "-f(a,b,c)");
        assert_eq!(canon("d(c,a,b)"), "d(a,b,c)");
        assert_eq!(canon("f(a,b,c) + f(b,a,c)"), "0");
        assert_eq!(canon("f(a,a,b)"), "0");
    }

    #[test]
    fn dummies_are_renumbered() {
        assert_eq!(canon("f(x,y,c)*f(x,y,d)"), canon("f(p,q,c)*f(q,p,d)*(-1)"));
        assert_eq!(canon("f(a,b,c)*f(a,b,d) + f(x,y,c)*f(x,y,d)"), "2*f(c,_1,_2)*f(d,_1,_2)");
        // f_abe d_abc vanishes by symmetry of the summed pair
        assert_eq!(canon("f(a,b,x)*d(a,b,y)"), "0");
    }

    #[test]
    fn traces_rotate_and_reflect() {
        assert_eq!(canon("Tr[T(b)T(c)T(a)]"), "Tr[T(a)T(b)T(c)]");
        assert_eq!(canon("TrAdj[F(c)F(b)F(a)]"), "-TrAdj[F(a)F(b)F(c)]");
        assert_eq!(canon("TrAdj[D(c)D(b)D(a)]"), "TrAdj[D(a)D(b)D(c)]");
        assert_eq!(canon("TrAdj[F(a)]"), "0");
        assert_eq!(canon("TrAdj[F(a)D(b)]"), "0");
    }

    #[test]
    fn many_dummies_use_the_heuristic_idempotently() {
        let s = "f(a,b,c)*f(c,d,e)*f(e,g,h)*f(h,k,a)*d(b,d,m)*d(g,k,m)";
        let once = canonicalize(&parse(s).unwrap());
        assert_eq!(canonicalize(&once), once);
    }
}
