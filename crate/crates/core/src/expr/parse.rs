use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::npoly::{GaussRational, NPoly, Rational};
use super::{AdjKind, ColorExpr, ExprError, Factor, Index, IndexKind, Sort, Term};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Dummy(u32),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Star,
    Slash,
    Plus,
    Minus,
    Caret,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Int(v) => format!("'{v}'"),
        Tok::Dummy(k) => format!("'_{k}'"),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::LBrack => "'['".into(),
        Tok::RBrack => "']'".into(),
        Tok::Comma => "','".into(),
        Tok::Semi => "';'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Caret => "'^'".into(),
        Tok::End => "end of input".into(),
    }
}

fn syntax(column: usize, msg: impl Into<String>) -> ExprError {
    ExprError::Syntax {
        column,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = k + 1;
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '*' | '·' | '⋅' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = chars[start..k].iter().collect();
            out.push((Tok::Int(digits.parse().expect("ascii digits")), col));
            continue;
        }
        if c == '_' {
            let start = k + 1;
            k += 1;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = chars[start..k].iter().collect();
            let n: u32 = digits
                .parse()
                .map_err(|_| syntax(col, "expected digits after '_' in a dummy index"))?;
            if n == 0 {
                return Err(syntax(col, "dummy indices are numbered from _1"));
            }
            out.push((Tok::Dummy(n), col));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push((Tok::Ident(chars[start..k].iter().collect()), col));
            continue;
        }
        return Err(syntax(col, format!("unexpected character '{c}'")));
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

enum Item {
    Coeff(NPoly),
    Factor(Factor),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let k = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[k].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ExprError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.col(),
                format!("expected {}, found {}", describe(&want), describe(self.peek())),
            ))
        }
    }

    fn expr(&mut self) -> Result<Vec<Term>, ExprError> {
        let mut terms = Vec::new();
        let mut negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let mut t = self.term()?;
            if negate {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            negate = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                Tok::End => break,
                other => {
                    return Err(syntax(
                        self.col(),
                        format!("expected '+', '-' or end of input, found {}", describe(other)),
                    ))
                }
            };
            self.bump();
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<Term, ExprError> {
        let mut coeff = NPoly::one();
        let mut factors = Vec::new();
        let mut divide = false;
        loop {
            let col = self.col();
            match self.item()? {
                Item::Factor(f) if divide => {
                    let _ = f;
                    return Err(syntax(col, "cannot divide by a tensor factor"));
                }
                Item::Factor(f) => factors.push(f),
                Item::Coeff(c) if divide => {
                    let inv = c
                        .inverse()
                        .ok_or_else(|| syntax(col, "can only divide by a nonzero monomial in NN"))?;
                    coeff = &coeff * &inv;
                }
                Item::Coeff(c) => coeff = &coeff * &c,
            }
            divide = match self.peek() {
                Tok::Star => false,
                Tok::Slash => true,
                _ => break,
            };
            self.bump();
        }
        Ok(Term::new(coeff, factors))
    }

    fn item(&mut self) -> Result<Item, ExprError> {
        let col = self.col();
        if let Tok::Ident(name) = self.peek().clone() {
            let opener = self.peek_at(1).clone();
            match (name.as_str(), opener) {
                ("delta" | "f" | "d" | "T" | "F" | "D", Tok::LParen) | ("Tr" | "TrAdj", Tok::LBrack) => {
                    self.bump();
                    return Ok(Item::Factor(self.factor(&name)?));
                }
                ("i" | "NN", _) => {}
                _ => return Err(syntax(col, format!("unknown factor '{name}'"))),
            }
        }
        let base = match self.peek() {
            Tok::Ident(_) | Tok::Int(_) | Tok::LParen => self.atom()?,
            other => {
                return Err(syntax(
                    col,
                    format!("expected a factor or coefficient, found {}", describe(other)),
                ))
            }
        };
        Ok(Item::Coeff(self.power(base, col)?))
    }

    fn power(&mut self, base: NPoly, col: usize) -> Result<NPoly, ExprError> {
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let exp_col = self.col();
        let exp = match self.bump() {
            Tok::Int(v) => v.to_i32().filter(|e| *e <= 64).ok_or_else(|| syntax(exp_col, "exponent too large"))?,
            other => return Err(syntax(exp_col, format!("expected an integer exponent, found {}", describe(&other)))),
        };
        let exp = if negative { -exp } else { exp };
        base.pow(exp)
            .ok_or_else(|| syntax(col, "negative powers are only allowed for nonzero monomials"))
    }

    fn atom(&mut self) -> Result<NPoly, ExprError> {
        let col = self.col();
        match self.bump() {
            Tok::Int(v) => Ok(NPoly::constant(GaussRational::real(Rational::from_integer(v)))),
            Tok::Ident(s) if s == "i" => Ok(NPoly::imag(1, 1)),
            Tok::Ident(s) if s == "NN" => Ok(NPoly::n()),
            Tok::LParen => {
                let v = self.arith()?;
                self.expect(Tok::RParen)?;
                Ok(v)
            }
            other => Err(syntax(col, format!("expected a coefficient, found {}", describe(&other)))),
        }
    }

    fn arith(&mut self) -> Result<NPoly, ExprError> {
        let mut negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = NPoly::zero();
        loop {
            let t = self.arith_term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            negate = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(acc),
            };
            self.bump();
        }
    }

    fn arith_term(&mut self) -> Result<NPoly, ExprError> {
        let col = self.col();
        let first = self.atom()?;
        let mut acc = self.power(first, col)?;
        loop {
            let divide = match self.peek() {
                Tok::Star => false,
                Tok::Slash => true,
                _ => return Ok(acc),
            };
            self.bump();
            let col = self.col();
            let base = self.atom()?;
            let v = self.power(base, col)?;
            acc = if divide {
                let inv = v
                    .inverse()
                    .ok_or_else(|| syntax(col, "can only divide by a nonzero monomial in NN"))?;
                &acc * &inv
            } else {
                &acc * &v
            };
        }
    }

    fn index(&mut self, sort: Sort) -> Result<Index, ExprError> {
        let col = self.col();
        let kind = match self.bump() {
            Tok::Ident(s) => IndexKind::Named(s),
            Tok::Dummy(k) => IndexKind::Dummy(k),
            Tok::Int(v) => {
                let v = v.to_u32().ok_or_else(|| syntax(col, "index value too large"))?;
                if v.is_zero() {
                    return Err(syntax(col, "fixed index values start at 1"));
                }
                IndexKind::Value(v)
            }
            other => return Err(syntax(col, format!("expected an index, found {}", describe(&other)))),
        };
        Ok(Index { kind, sort })
    }

    fn factor(&mut self, name: &str) -> Result<Factor, ExprError> {
        use Sort::{Adjoint, Fundamental};
        match name {
            "delta" => {
                self.expect(Tok::LParen)?;
                let x = self.index(Adjoint)?;
                self.expect(Tok::Comma)?;
                let y = self.index(Adjoint)?;
                self.expect(Tok::RParen)?;
                Ok(Factor::Delta(x, y))
            }
            "f" | "d" => {
                self.expect(Tok::LParen)?;
                let a = self.index(Adjoint)?;
                self.expect(Tok::Comma)?;
                let b = self.index(Adjoint)?;
                self.expect(Tok::Comma)?;
                let c = self.index(Adjoint)?;
                self.expect(Tok::RParen)?;
                Ok(if name == "f" {
                    Factor::F3([a, b, c])
                } else {
                    Factor::D3([a, b, c])
                })
            }
            "T" | "F" | "D" => {
                let inner = if name == "T" { Fundamental } else { Adjoint };
                self.expect(Tok::LParen)?;
                let a = self.index(Adjoint)?;
                self.expect(Tok::Semi)?;
                let b = self.index(inner)?;
                self.expect(Tok::Comma)?;
                let c = self.index(inner)?;
                self.expect(Tok::RParen)?;
                Ok(match name {
                    "T" => Factor::TElem { a, i: b, j: c },
                    "F" => Factor::FElem { a, b, c },
                    _ => Factor::DElem { a, b, c },
                })
            }
            "Tr" => {
                self.expect(Tok::LBrack)?;
                let mut word = Vec::new();
                while *self.peek() != Tok::RBrack {
                    if !word.is_empty() && *self.peek() == Tok::Star {
                        self.bump();
                    }
                    self.expect(Tok::Ident("T".into()))?;
                    self.expect(Tok::LParen)?;
                    word.push(self.index(Adjoint)?);
                    self.expect(Tok::RParen)?;
                }
                if word.is_empty() {
                    return Err(syntax(self.col(), "empty trace"));
                }
                self.bump();
                Ok(Factor::TrDef(word))
            }
            _ => {
                self.expect(Tok::LBrack)?;
                let mut word = Vec::new();
                while *self.peek() != Tok::RBrack {
                    if !word.is_empty() && *self.peek() == Tok::Star {
                        self.bump();
                    }
                    let col = self.col();
                    let kind = match self.bump() {
                        Tok::Ident(s) if s == "F" => AdjKind::F,
                        Tok::Ident(s) if s == "D" => AdjKind::D,
                        other => {
                            return Err(syntax(col, format!("expected 'F' or 'D', found {}", describe(&other))))
                        }
                    };
                    self.expect(Tok::LParen)?;
                    word.push((kind, self.index(Adjoint)?));
                    self.expect(Tok::RParen)?;
                }
                if word.is_empty() {
                    return Err(syntax(self.col(), "empty trace"));
                }
                self.bump();
                Ok(Factor::TrAdj(word))
            }
        }
    }
}

/// Label sorts fixed by non-delta slots, propagated through deltas.
fn propagate(term: &Term, known: &mut BTreeMap<IndexKind, Sort>) -> Result<(), ExprError> {
    loop {
        let mut changed = false;
        for f in &term.factors {
            if let Factor::Delta(x, y) = f {
                let sx = known.get(&x.kind).copied().filter(|_| x.is_label());
                let sy = known.get(&y.kind).copied().filter(|_| y.is_label());
                match (sx, sy) {
                    (Some(a), Some(b)) if a != b => {
                        return Err(ExprError::SortMismatch { label: x.to_string() });
                    }
                    (Some(a), None) if y.is_label() => {
                        known.insert(y.kind.clone(), a);
                        changed = true;
                    }
                    (None, Some(b)) if x.is_label() => {
                        known.insert(x.kind.clone(), b);
                        changed = true;
                    }
                    _ => {}
                }
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

fn slot_sorts(term: &Term) -> Result<BTreeMap<IndexKind, Sort>, ExprError> {
    let mut known = BTreeMap::new();
    for f in &term.factors {
        if matches!(f, Factor::Delta(..)) {
            continue;
        }
        for x in f.indices() {
            if x.is_label() {
                if let Some(prev) = known.insert(x.kind.clone(), x.sort) {
                    if prev != x.sort {
                        return Err(ExprError::SortMismatch { label: x.to_string() });
                    }
                }
            }
        }
    }
    propagate(term, &mut known)?;
    Ok(known)
}

fn label_counts(term: &Term) -> BTreeMap<IndexKind, usize> {
    let mut counts = BTreeMap::new();
    for f in &term.factors {
        for x in f.indices() {
            if x.is_label() {
                *counts.entry(x.kind.clone()).or_insert(0) += 1;
            }
        }
    }
    counts
}

fn resolve_sorts(terms: &mut [Term], hints: &[Index]) -> Result<(), ExprError> {
    let mut per_term = Vec::with_capacity(terms.len());
    let mut free_sorts: BTreeMap<IndexKind, Sort> = hints.iter().map(|x| (x.kind.clone(), x.sort)).collect();
    for t in terms.iter() {
        let known = slot_sorts(t)?;
        for (kind, count) in label_counts(t) {
            if count == 1 {
                if let Some(&s) = known.get(&kind) {
                    if let Some(prev) = free_sorts.insert(kind.clone(), s) {
                        if prev != s {
                            let label = Index { kind, sort: s }.to_string();
                            return Err(ExprError::SortMismatch { label });
                        }
                    }
                }
            }
        }
        per_term.push(known);
    }
    for (t, known) in terms.iter_mut().zip(per_term) {
        let mut known = known;
        for (kind, count) in label_counts(t) {
            if count == 1 && !known.contains_key(&kind) {
                if let Some(&s) = free_sorts.get(&kind) {
                    known.insert(kind, s);
                }
            }
        }
        propagate(t, &mut known)?;
        loop {
            let unresolved = t.factors.iter().find_map(|f| match f {
                Factor::Delta(x, y) => [x, y]
                    .into_iter()
                    .find(|z| z.is_label() && !known.contains_key(&z.kind))
                    .map(|z| z.kind.clone()),
                _ => None,
            });
            match unresolved {
                Some(kind) => {
                    known.insert(kind, Sort::Adjoint);
                    propagate(t, &mut known)?;
                }
                None => break,
            }
        }
        for f in t.factors.iter_mut() {
            if let Factor::Delta(x, y) = f {
                let sx = if x.is_label() { known.get(&x.kind).copied() } else { None };
                let sy = if y.is_label() { known.get(&y.kind).copied() } else { None };
                let s = sx.or(sy).unwrap_or(Sort::Adjoint);
                x.sort = s;
                y.sort = s;
            }
        }
    }
    Ok(())
}

/// Renames twice-used named labels to fresh dummies in first-occurrence order.
fn rename_bound(term: &mut Term) {
    let counts = label_counts(term);
    let used: BTreeSet<u32> = counts
        .keys()
        .filter_map(|k| match k {
            IndexKind::Dummy(n) => Some(*n),
            _ => None,
        })
        .collect();
    let mut next = 1u32;
    let mut map: BTreeMap<IndexKind, u32> = BTreeMap::new();
    for f in &term.factors {
        for x in f.indices() {
            if matches!(x.kind, IndexKind::Named(_)) && counts[&x.kind] == 2 && !map.contains_key(&x.kind) {
                while used.contains(&next) {
                    next += 1;
                }
                map.insert(x.kind.clone(), next);
                next += 1;
            }
        }
    }
    for f in term.factors.iter_mut() {
        f.for_each_index_mut(|x| {
            if let Some(&k) = map.get(&x.kind) {
                x.kind = IndexKind::Dummy(k);
            }
        });
    }
}

/// Parses an expression, infers index sorts and renames summed labels to
/// dummies `_1, _2, ...`. Zero-coefficient terms are dropped.
///
/// Sorts come from the slots an index occupies; `delta` passes sorts
/// between its two slots. A free label whose sort is still undetermined
/// (say, one only seen in `delta`) is adjoint.
pub fn parse(text: &str) -> Result<ColorExpr, ExprError> {
    parse_with_sorts(text, &[])
}

/// Like [`parse`], with known sorts for some free labels. Used to parse
/// one side of an identity with the free indices of the other.
pub fn parse_with_sorts(text: &str, hints: &[Index]) -> Result<ColorExpr, ExprError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0 };
    let mut terms = parser.expr()?;
    terms.retain(|t| !t.coeff.is_zero());
    resolve_sorts(&mut terms, hints)?;
    for t in terms.iter_mut() {
        rename_bound(t);
    }
    let free: Vec<Index> = match terms.first() {
        Some(t) => {
            // A label appearing three times must be reported as such, not as
            // a free-index mismatch.
            super::check_term(t)?;
            t.free_indices().into_iter().collect()
        }
        None => Vec::new(),
    };
    ColorExpr::new(free, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contracted_structure_constants() {
        let e = parse("f(a,b,c)*f(a,b,d)").unwrap();
        assert_eq!(e.terms().len(), 1);
        assert_eq!(e.free(), &[Index::adj("c"), Index::adj("d")]);
        assert_eq!(e.to_string(), "f(_1,_2,c)*f(_1,_2,d)");
    }

    #[test]
    fn defining_trace() {
        let e = parse("Tr[T(a) T(b) T(a) T(c)]").unwrap();
        assert_eq!(e.free(), &[Index::adj("b"), Index::adj("c")]);
        assert_eq!(e.to_string(), "Tr[T(_1)T(b)T(_1)T(c)]");
    }

    #[test]
    fn unicode_minus_and_coefficients() {
        let e = parse("Tr[T(a)T(b)] − (1/2)*delta(a,b)").unwrap();
        assert_eq!(e.terms().len(), 2);
        assert_eq!(e.terms()[1].coeff, NPoly::rational(-1, 2));
        assert_eq!(e.to_string(), "Tr[T(a)T(b)] - (1/2)*delta(a,b)");
    }

    #[test]
    fn repeated_antisymmetric_slot_is_accepted() {
        let e = parse("f(a,a,b)").unwrap();
        assert_eq!(e.free(), &[Index::adj("b")]);
    }

    #[test]
    fn delta_sorts_follow_their_partners() {
        let e = parse("delta(i,j)*T(a;j,k)").unwrap();
        let sorts: Vec<Sort> = e.free().iter().map(|x| x.sort).collect();
        assert_eq!(sorts, vec![Sort::Adjoint, Sort::Fundamental, Sort::Fundamental]);
        let e = parse("delta(x,y)").unwrap();
        assert!(e.free().iter().all(|x| x.sort == Sort::Adjoint));
        // sorts of free labels carry across terms
        let e = parse("delta(i,j) + T(a;i,j)*T(a;k,k)").unwrap();
        assert!(e.free().iter().all(|x| x.sort == Sort::Fundamental));
    }

    #[test]
    fn sort_hints() {
        let hints = [Index::fund("i"), Index::fund("j")];
        let e = parse_with_sorts("delta(i,j)", &hints).unwrap();
        assert_eq!(e.free(), &hints);
        assert!(matches!(
            parse_with_sorts("f(i,j,a)", &hints),
            Err(ExprError::SortMismatch { .. })
        ));
    }

    #[test]
    fn coefficient_grammar() {
        let e = parse("(NN^2-4)/(2*NN)*d(a,b,c)").unwrap();
        assert_eq!(e.terms()[0].coeff, NPoly::from_real(&[(1, 1, 2), (-1, -2, 1)]));
        let e = parse("i*NN/2*f(a,b,c)").unwrap();
        assert_eq!(e.terms()[0].coeff, &NPoly::imag(1, 2) * &NPoly::n());
        let e = parse("NN^-2").unwrap();
        assert_eq!(e.terms()[0].coeff, NPoly::from_real(&[(-2, 1, 1)]));
        let e = parse("0").unwrap();
        assert!(e.is_zero());
        let e = parse("-(-3)*f(1,2,3)").unwrap();
        assert_eq!(e.terms()[0].coeff, NPoly::int(3));
    }

    #[test]
    fn fixed_indices() {
        let e = parse("f(1,2,3)").unwrap();
        assert!(e.free().is_empty());
        assert!(parse("f(0,1,2)").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        match parse("f(a,b c)") {
            Err(ExprError::Syntax { column, .. }) => assert_eq!(column, 7),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("g(a)"), Err(ExprError::Syntax { column: 1, .. })));
        assert!(matches!(parse("f(a,b,c) /"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("1/(NN-1)"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("2/f(a,b,c)*f(a,b,c)"), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn semantic_errors() {
        assert!(matches!(
            parse("f(a,b,c)*d(a,b,e)*delta(a,x)"),
            Err(ExprError::TooManyOccurrences { count: 3, .. })
        ));
        assert!(matches!(parse("T(a;i,a)"), Err(ExprError::SortMismatch { .. })));
        assert!(matches!(parse("delta(a,b) + delta(a,c)"), Err(ExprError::InconsistentFree { .. })));
        assert!(matches!(parse("T(a;i,j)*delta(i,b)*f(b,c,d)"), Err(ExprError::SortMismatch { .. })));
    }

    #[test]
    fn existing_dummies_are_kept() {
        let e = parse("f(_1,b,c)*f(_1,x,y)*delta(b,x)").unwrap();
        assert_eq!(e.to_string(), "f(_1,_2,c)*f(_1,_3,y)*delta(_2,_3)");
    }
}
