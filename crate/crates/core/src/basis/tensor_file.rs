//! The `sun-tensors v1` text format.
//!
//! ```text
//! sun-tensors v1
//! N 3
//! f 1 2 3 1.0
//! d 1 1 8 0.57735026918962573
//! ```
//!
//! Indices are 1-based and canonically ordered (`a < b < c` for `f`,
//! `a <= b <= c` for `d`). Values carry 17 significant digits, so a
//! print/parse cycle reproduces every `f64` bit for bit.

use serde::Serialize;
use thiserror::Error;

use super::{Rank3Tensor, Symmetry};
use crate::numfmt::format_f64;

pub const HEADER: &str = "sun-tensors v1";

#[derive(Debug, Error, PartialEq)]
pub enum TensorFileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header line '{HEADER}'")]
    MissingHeader,
    #[error("missing 'N <n>' line")]
    MissingN,
    #[error("f and d tensors disagree on N ({f} vs {d})")]
    RankMismatch { f: usize, d: usize },
}

/// The `f` and `d` tensors of one SU(N).
#[derive(Debug, Clone, PartialEq)]
pub struct TensorSet {
    pub f: Rank3Tensor,
    pub d: Rank3Tensor,
}

impl TensorSet {
    pub fn new(f: Rank3Tensor, d: Rank3Tensor) -> Result<Self, TensorFileError> {
        if f.n() != d.n() {
            return Err(TensorFileError::RankMismatch { f: f.n(), d: d.n() });
        }
        Ok(Self { f, d })
    }

    pub fn n(&self) -> usize {
        self.f.n()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{HEADER}\nN {}\n", self.n());
        for (tag, tensor) in [("f", &self.f), ("d", &self.d)] {
            for ([a, b, c], v) in tensor.entries() {
                out.push_str(&format!("{tag} {} {} {} {}\n", a + 1, b + 1, c + 1, format_f64(v)));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, TensorFileError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, HEADER)) => {}
            _ => return Err(TensorFileError::MissingHeader),
        }
        let n = match lines.next() {
            Some((line, l)) => {
                let rest = l.strip_prefix("N ").ok_or(TensorFileError::MissingN)?;
                let n: usize = rest.trim().parse().map_err(|_| TensorFileError::Syntax {
                    line,
                    msg: format!("bad N value '{rest}'"),
                })?;
                if n < 2 {
                    return Err(TensorFileError::Syntax {
                        line,
                        msg: format!("N must be at least 2, got {n}"),
                    });
                }
                n
            }
            None => return Err(TensorFileError::MissingN),
        };
        let mut f = Rank3Tensor::new(n, Symmetry::Antisymmetric);
        let mut d = Rank3Tensor::new(n, Symmetry::Symmetric);
        let dim = n * n - 1;
        for (line, l) in lines {
            let err = |msg: String| TensorFileError::Syntax { line, msg };
            let fields: Vec<&str> = l.split_whitespace().collect();
            if fields.len() != 5 {
                return Err(err(format!("expected 5 fields, found {}", fields.len())));
            }
            let mut idx = [0usize; 3];
            for (slot, field) in idx.iter_mut().zip(&fields[1..4]) {
                let v: usize = field.parse().map_err(|_| err(format!("bad index '{field}'")))?;
                if v == 0 || v > dim {
                    return Err(err(format!("index {v} outside 1..={dim}")));
                }
                *slot = v - 1;
            }
            let value: f64 = fields[4]
                .parse()
                .map_err(|_| err(format!("bad value '{}'", fields[4])))?;
            if !value.is_finite() {
                return Err(err("non-finite value".into()));
            }
            let [a, b, c] = idx;
            let (target, ordered) = match fields[0] {
                "f" => (&mut f, a < b && b < c),
                "d" => (&mut d, a <= b && b <= c),
                other => return Err(err(format!("unknown tensor tag '{other}'"))),
            };
            if !ordered {
                return Err(err(format!("indices {} {} {} not in canonical order", a + 1, b + 1, c + 1)));
            }
            target.insert_canonical(idx, value);
        }
        Ok(Self { f, d })
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Entry {
            a: usize,
            b: usize,
            c: usize,
            value: f64,
        }
        let list = |t: &Rank3Tensor| -> Vec<Entry> {
            t.entries()
                .map(|([a, b, c], value)| Entry {
                    a: a + 1,
                    b: b + 1,
                    c: c + 1,
                    value,
                })
                .collect()
        };
        serde_json::json!({
            "format": HEADER,
            "n": self.n(),
            "f": list(&self.f),
            "d": list(&self.d),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_basis, extract_d, extract_f};

    fn set(n: usize) -> TensorSet {
        let b = build_basis(n).unwrap();
        TensorSet::new(extract_f(&b).unwrap(), extract_d(&b).unwrap()).unwrap()
    }

    #[test]
    fn su2_file_contents() {
        let text = set(2).to_text();
        assert_eq!(text, "sun-tensors v1\nN 2\nf 1 2 3 1.0\n");
    }

    #[test]
    fn su3_contains_known_entries() {
        let text = set(3).to_text();
        assert!(text.contains("f 1 2 3 1.0\n"));
        assert!(text.contains("d 1 1 8 0.57735026918962573\n"), "{text}");
    }

    #[test]
    fn d118_is_the_correctly_rounded_inverse_sqrt3() {
        let s = set(3);
        let stored = s.d.get(0, 0, 7);
        // 17-digit decimal of 1/sqrt(3); it rounds to the same double.
        let reference: f64 = "0.57735026918962576".parse().unwrap();
        assert_eq!(stored.to_bits(), reference.to_bits());
    }

    #[test]
    fn round_trip_is_bit_exact() {
        for n in 2..=6 {
            let s = set(n);
            let back = TensorSet::parse(&s.to_text()).unwrap();
            assert_eq!(back, s);
            for (x, y) in s.d.entries().zip(back.d.entries()) {
                assert_eq!(x.1.to_bits(), y.1.to_bits());
            }
        }
    }

    #[test]
    fn parse_errors() {
        assert_eq!(TensorSet::parse("N 3\n"), Err(TensorFileError::MissingHeader));
        assert_eq!(TensorSet::parse("sun-tensors v1\n"), Err(TensorFileError::MissingN));
        assert!(matches!(
            TensorSet::parse("sun-tensors v1\nN 2\nf 2 1 3 1.0\n"),
            Err(TensorFileError::Syntax { line: 3, .. })
        ));
        assert!(matches!(
            TensorSet::parse("sun-tensors v1\nN 2\nf 1 2 4 1.0\n"),
            Err(TensorFileError::Syntax { .. })
        ));
        assert!(matches!(
            TensorSet::parse("sun-tensors v1\nN 2\nx 1 2 3 1.0\n"),
            Err(TensorFileError::Syntax { .. })
        ));
    }

    #[test]
    fn json_rendering() {
        let v = set(2).to_json();
        assert_eq!(v["n"], 2);
        assert_eq!(v["f"][0]["a"], 1);
        assert_eq!(v["f"][0]["value"], 1.0);
        assert_eq!(v["d"].as_array().unwrap().len(), 0);
    }
}
