//! Shared fixtures: closed-form identities as `lhs - rhs` strings and a
//! seeded generator of well-formed random expressions.

#![allow(dead_code)]

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Identities whose difference must simplify to exactly zero.
pub const EXACT: &[(&str, &str, &str)] = &[
    ("sandwich trace", "Tr[T(a)T(b)T(a)T(c)]", "-1/(4*NN)*delta(b,c)"),
    ("triple trace", "Tr[T(a)T(b)T(c)]", "1/4*d(a,b,c) + i/4*f(a,b,c)"),
    ("ff bubble", "f(a,b,c)*f(a,b,d)", "NN*delta(c,d)"),
    ("dd bubble", "d(a,b,c)*d(a,b,d)", "(NN^2-4)/NN*delta(c,d)"),
    ("fd bubble", "f(a,b,c)*d(a,b,d)", "0"),
    ("Tr F", "TrAdj[F(a)]", "0"),
    ("Tr D", "TrAdj[D(a)]", "0"),
    ("Tr FD", "TrAdj[F(a)D(b)]", "0"),
    ("Tr FF", "TrAdj[F(a)F(b)]", "NN*delta(a,b)"),
    ("Tr DD", "TrAdj[D(a)D(b)]", "(NN^2-4)/NN*delta(a,b)"),
    ("Tr FFF", "TrAdj[F(a)F(b)F(c)]", "i*NN/2*f(a,b,c)"),
    ("Tr DFF", "TrAdj[D(a)F(b)F(c)]", "NN/2*d(a,b,c)"),
    ("Tr DDF", "TrAdj[D(a)D(b)F(c)]", "i*(NN^2-4)/(2*NN)*f(a,b,c)"),
    ("Tr DDD", "TrAdj[D(a)D(b)D(c)]", "(NN^2-12)/(2*NN)*d(a,b,c)"),
    ("Tr FaFbFaFc", "TrAdj[F(a)F(b)F(a)F(c)]", "NN^2/2*delta(b,c)"),
];

/// Four-matrix adjoint traces in both closed forms, as `lhs - rhs`.
pub const FOUR_TRACES: &[(&str, &str)] = &[
    (
        "FFFF",
        "TrAdj[F(a)F(b)F(c)F(d)] - delta(a,d)*delta(b,c) - 1/2*delta(a,b)*delta(c,d) - 1/2*delta(a,c)*delta(b,d) - NN/4*f(a,d,e)*f(b,c,e) - NN/4*d(a,d,e)*d(b,c,e)",
    ),
    (
        "FFFD",
        "TrAdj[F(a)F(b)F(c)D(d)] - i*NN/4*d(a,d,e)*f(b,c,e) + i*NN/4*f(a,d,e)*d(b,c,e)",
    ),
    (
        "FFDD",
        "TrAdj[F(a)F(b)D(c)D(d)] - 1/2*delta(a,b)*delta(c,d) + 1/2*delta(a,c)*delta(b,d) - (NN^2-8)/(4*NN)*f(a,d,e)*f(b,c,e) - NN/4*d(a,d,e)*d(b,c,e)",
    ),
    (
        "FDFD",
        "TrAdj[F(a)D(b)F(c)D(d)] + 1/2*delta(a,b)*delta(c,d) - 1/2*delta(a,c)*delta(b,d) - NN/4*f(a,d,e)*f(b,c,e) - NN/4*d(a,d,e)*d(b,c,e)",
    ),
    (
        "FDDD",
        "TrAdj[F(a)D(b)D(c)D(d)] - 2*i/NN*f(a,d,e)*d(b,c,e) - i*(NN^2-8)/(4*NN)*f(a,b,e)*d(c,d,e) - i*NN/4*d(a,b,e)*f(c,d,e)",
    ),
    (
        "DDDD",
        "TrAdj[D(a)D(b)D(c)D(d)] - (NN^2-4)/NN^2*delta(a,d)*delta(b,c) - (NN^2-8)/(2*NN^2)*delta(a,b)*delta(c,d) - 1/2*delta(a,c)*delta(b,d) - NN/4*f(a,d,e)*f(b,c,e) - (NN^2-16)/(4*NN)*d(a,d,e)*d(b,c,e) + 4/NN*d(a,b,e)*d(c,d,e)",
    ),
    (
        "FFFF alternative",
        "TrAdj[F(a)F(b)F(c)F(d)] - delta(a,b)*delta(c,d) - delta(a,d)*delta(b,c) - NN/4*d(a,b,e)*d(c,d,e) + NN/4*d(a,c,e)*d(b,d,e) - NN/4*d(a,d,e)*d(b,c,e)",
    ),
    (
        "FFFD alternative",
        "TrAdj[F(a)F(b)F(c)D(d)] - i*NN/4*d(a,b,e)*f(c,d,e) - i*NN/4*f(a,b,e)*d(c,d,e)",
    ),
    (
        "FFDD alternative",
        "TrAdj[F(a)F(b)D(c)D(d)] - (NN^2-4)/NN^2*delta(a,b)*delta(c,d) + (NN^2-4)/NN^2*delta(a,c)*delta(b,d) - (NN^2-8)/(4*NN)*d(a,b,e)*d(c,d,e) + (NN^2-8)/(4*NN)*d(a,c,e)*d(b,d,e) - NN/4*d(a,d,e)*d(b,c,e)",
    ),
    (
        "FDFD alternative",
        "TrAdj[F(a)D(b)F(c)D(d)] - NN/4*d(a,b,e)*d(c,d,e) + NN/4*d(a,c,e)*d(b,d,e) - NN/4*d(a,d,e)*d(b,c,e)",
    ),
    (
        "FDDD alternative",
        "TrAdj[F(a)D(b)D(c)D(d)] - i*(NN^2-12)/(4*NN)*f(a,b,e)*d(c,d,e) - i/NN*f(a,d,e)*d(b,c,e) + i/NN*f(a,c,e)*d(b,d,e) - i*NN/4*d(a,b,e)*f(c,d,e)",
    ),
    (
        "DDDD alternative",
        "TrAdj[D(a)D(b)D(c)D(d)] - (NN^2-4)/NN^2*delta(a,b)*delta(c,d) - (NN^2-4)/NN^2*delta(a,d)*delta(b,c) - (NN^2-16)/(4*NN)*d(a,b,e)*d(c,d,e) - (NN^2-16)/(4*NN)*d(a,d,e)*d(b,c,e) + NN/4*d(a,c,e)*d(b,d,e)",
    ),
];

const FREE: [&str; 3] = ["a", "b", "c"];
const BOUND: [&str; 3] = ["x", "y", "z"];
const FUND: [&str; 9] = ["i", "j", "k", "l", "m", "n", "p", "q", "r"];
const COEFFS: [&str; 9] = ["1", "2", "-1", "1/2", "-3/4", "NN", "i", "1/NN", "(NN^2-1)"];

/// Factor templates by number of adjoint slots: `?` is an adjoint slot and
/// `#k` the k-th fundamental label local to the template.
const BY_SLOTS: [&[&str]; 3] = [
    &[
        "delta(?,?)",
        "TrAdj[F(?)F(?)]",
        "TrAdj[D(?)D(?)]",
        "Tr[T(?)T(?)]",
        "T(?;#0,#1)*T(?;#1,#0)",
    ],
    &[
        "f(?,?,?)",
        "d(?,?,?)",
        "F(?;?,?)",
        "D(?;?,?)",
        "TrAdj[F(?)F(?)F(?)]",
        "TrAdj[D(?)F(?)D(?)]",
        "Tr[T(?)T(?)T(?)]",
        "T(?;#0,#1)*T(?;#1,#2)*T(?;#2,#0)",
    ],
    &[
        "TrAdj[F(?)D(?)F(?)D(?)]",
        "TrAdj[F(?)F(?)D(?)D(?)]",
        "Tr[T(?)T(?)T(?)T(?)]",
        "T(?;#0,#1)*T(?;#1,#2)*T(?;#2,#3)*T(?;#3,#0)",
    ],
];

fn fill(template: &str, adj: &[&str], fund: &[&str]) -> String {
    let mut out = String::new();
    let mut adj = adj.iter();
    let mut chars = template.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '?' => out += adj.next().expect("enough labels"),
            '#' => {
                let k = chars.next().and_then(|d| d.to_digit(10)).expect("digit") as usize;
                out += fund[k];
            }
            _ => out.push(c),
        }
    }
    out
}

fn self_contracted(adj: &[&str], sizes: &[usize]) -> bool {
    let mut at = 0;
    for &k in sizes {
        let block = &adj[at..at + k];
        if (0..k).any(|i| block[i + 1..].contains(&block[i])) {
            return true;
        }
        at += k;
    }
    false
}

fn random_term(rng: &mut impl Rng, free: &[&str]) -> String {
    let mut bound = rng.random_range(0..=BOUND.len());
    if free.len() + 2 * bound == 1 {
        bound = 1;
    }
    let mut remaining = free.len() + 2 * bound;
    let coeff = COEFFS.choose(rng).unwrap();
    if remaining == 0 {
        return coeff.to_string();
    }
    // Split the slots into factors of 2, 3 or 4 slots.
    let mut templates = Vec::new();
    while remaining > 0 {
        let sizes: Vec<usize> = (2..=4).filter(|k| *k == remaining || (*k < remaining && remaining - k >= 2)).collect();
        let k = *sizes.choose(rng).expect("a size always fits");
        templates.push(*BY_SLOTS[k - 2].choose(rng).unwrap());
        remaining -= k;
    }
    let mut adj: Vec<&str> = free.to_vec();
    for b in &BOUND[..bound] {
        adj.extend([*b, *b]);
    }
    // Prefer layouts where no factor contracts with itself, which would
    // mostly produce trivial zeros.
    let sizes: Vec<usize> = templates.iter().map(|t| t.matches('?').count()).collect();
    for _ in 0..20 {
        adj.shuffle(rng);
        if !self_contracted(&adj, &sizes) {
            break;
        }
    }
    let (mut ai, mut fi) = (0, 0);
    let mut factors = Vec::new();
    for t in templates {
        let na = t.matches('?').count();
        factors.push(fill(t, &adj[ai..ai + na], &FUND[fi..]));
        ai += na;
        fi += (0..4).filter(|k| t.contains(&format!("#{k}"))).count();
    }
    format!("{coeff}*{}", factors.join("*"))
}

/// A random well-formed expression: up to three terms sharing zero, two or
/// three free adjoint labels, each with at most three summed adjoint labels.
pub fn random_expr(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // A single free adjoint index would make every term vanish by invariance.
    let free = &FREE[..*[0, 2, 2, 3].choose(&mut rng).unwrap()];
    let terms = rng.random_range(1..=3);
    let mut out = String::new();
    for k in 0..terms {
        let t = random_term(&mut rng, free);
        match (k, t.strip_prefix('-')) {
            (0, _) => out += &t,
            (_, Some(rest)) => out += &format!(" - {rest}"),
            (_, None) => out += &format!(" + {t}"),
        }
    }
    out
}

pub fn corpus(count: usize) -> Vec<String> {
    (0..count as u64).map(random_expr).collect()
}
