//! Exact Laurent polynomials in `N` with Gaussian-rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// `re + im·i` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        Self::new(Rational::one(), Rational::zero())
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn real(re: Rational) -> Self {
        Self::new(re, Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Self::new(&self.re / &norm, -(&self.im / &norm)))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Add for &GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &GaussRational) -> GaussRational {
        GaussRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-self.re.clone(), -self.im.clone())
    }
}

/// `Σ_k c_k N^k`, `k` possibly negative. No zero coefficients are stored,
/// so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NPoly {
    terms: BTreeMap<i32, GaussRational>,
}

impl NPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(power: i32, c: GaussRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(power, c);
        }
        Self { terms }
    }

    /// The symbol `N`.
    pub fn n() -> Self {
        Self::monomial(1, GaussRational::one())
    }

    pub fn int(v: i64) -> Self {
        Self::constant(GaussRational::real(ratio(v, 1)))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Self::constant(GaussRational::real(ratio(num, den)))
    }

    /// `i · num/den`.
    pub fn imag(num: i64, den: i64) -> Self {
        Self::constant(GaussRational::new(Rational::zero(), ratio(num, den)))
    }

    /// Sum of real monomials `(power, num, den)`.
    pub fn from_real(monomials: &[(i32, i64, i64)]) -> Self {
        monomials
            .iter()
            .map(|&(p, num, den)| Self::monomial(p, GaussRational::real(ratio(num, den))))
            .fold(Self::zero(), |acc, m| acc + m)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &GaussRational)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    /// `Some((power, coefficient))` when there is exactly one monomial.
    pub fn as_monomial(&self) -> Option<(i32, &GaussRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(&k, c)| (k, c))
        } else {
            None
        }
    }

    fn add_monomial(&mut self, power: i32, c: &GaussRational) {
        let entry = self.terms.entry(power).or_insert_with(GaussRational::zero);
        *entry = &*entry + c;
        if entry.is_zero() {
            self.terms.remove(&power);
        }
    }

    /// Inverse of a single monomial; `None` for zero or multi-term values.
    pub fn inverse(&self) -> Option<Self> {
        let (k, c) = self.as_monomial()?;
        Some(Self::monomial(-k, c.inverse()?))
    }

    pub fn pow(&self, exp: i32) -> Option<Self> {
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * &base;
        }
        Some(acc)
    }

    pub fn eval(&self, n: i64) -> GaussRational {
        let nr = ratio(n, 1);
        let mut acc = GaussRational::zero();
        for (&k, c) in &self.terms {
            let p = num_traits::pow::Pow::pow(&nr, k);
            acc = &acc + &(c * &GaussRational::real(p));
        }
        acc
    }

    pub fn eval_complex(&self, n: i64) -> Complex64 {
        self.eval(n).to_complex()
    }

    /// True when the printed form would start with a minus sign.
    pub fn leading_is_negative(&self) -> bool {
        match self.terms.iter().next_back() {
            Some((_, c)) if !c.re.is_zero() => c.re.is_negative(),
            Some((_, c)) => c.im.is_negative(),
            None => false,
        }
    }

    /// Renders the value in the coefficient grammar.
    pub(crate) fn render(&self) -> Rendered {
        if self.is_zero() {
            return Rendered {
                text: "0".into(),
                monomials: 1,
                has_denominator: false,
            };
        }
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.re.denom());
            lcm = lcm.lcm(c.im.denom());
        }
        let min_power = *self.terms.keys().next().expect("nonempty");
        let shift = if min_power < 0 { -min_power } else { 0 };
        let lcm_r = Rational::from_integer(lcm.clone());

        let mut pieces: Vec<(BigInt, bool, i32)> = Vec::new();
        for (&k, c) in self.terms.iter().rev() {
            for (part, imag) in [(&c.re, false), (&c.im, true)] {
                if !part.is_zero() {
                    let scaled = part * &lcm_r;
                    debug_assert!(scaled.is_integer());
                    pieces.push((scaled.to_integer(), imag, k + shift));
                }
            }
        }
        let mut text = String::new();
        for (idx, (coeff, imag, power)) in pieces.iter().enumerate() {
            let neg = coeff.is_negative();
            if idx == 0 {
                if neg {
                    text.push('-');
                }
            } else {
                text.push(if neg { '-' } else { '+' });
            }
            text.push_str(&monomial_text(&coeff.abs(), *imag, *power));
        }

        let mut den_parts = Vec::new();
        if !lcm.is_one() {
            den_parts.push(lcm.to_string());
        }
        if shift > 0 {
            den_parts.push(power_text(shift));
        }
        if den_parts.is_empty() {
            return Rendered {
                text,
                monomials: pieces.len(),
                has_denominator: false,
            };
        }
        let num = if pieces.len() > 1 { format!("({text})") } else { text };
        let den = if den_parts.len() > 1 {
            format!("({})", den_parts.join("*"))
        } else {
            den_parts.remove(0)
        };
        Rendered {
            text: format!("{num}/{den}"),
            monomials: pieces.len(),
            has_denominator: true,
        }
    }
}

pub(crate) struct Rendered {
    pub text: String,
    pub monomials: usize,
    pub has_denominator: bool,
}

fn power_text(p: i32) -> String {
    if p == 1 {
        "NN".into()
    } else {
        format!("NN^{p}")
    }
}

fn monomial_text(mag: &BigInt, imag: bool, power: i32) -> String {
    let mut parts = Vec::new();
    if !mag.is_one() || (!imag && power == 0) {
        parts.push(mag.to_string());
    }
    if imag {
        parts.push("i".into());
    }
    if power != 0 {
        parts.push(power_text(power));
    }
    parts.join("*")
}

impl fmt::Display for NPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render().text)
    }
}

impl fmt::Debug for NPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NPoly({self})")
    }
}

impl Add for &NPoly {
    type Output = NPoly;
    fn add(self, rhs: &NPoly) -> NPoly {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_monomial(k, c);
        }
        out
    }
}

impl Add for NPoly {
    type Output = NPoly;
    fn add(self, rhs: NPoly) -> NPoly {
        &self + &rhs
    }
}

impl Sub for &NPoly {
    type Output = NPoly;
    fn sub(self, rhs: &NPoly) -> NPoly {
        self + &(-rhs)
    }
}

impl Sub for NPoly {
    type Output = NPoly;
    fn sub(self, rhs: NPoly) -> NPoly {
        &self - &rhs
    }
}

impl Mul for &NPoly {
    type Output = NPoly;
    fn mul(self, rhs: &NPoly) -> NPoly {
        let mut out = NPoly::zero();
        for (&k1, c1) in &self.terms {
            for (&k2, c2) in &rhs.terms {
                out.add_monomial(k1 + k2, &(c1 * c2));
            }
        }
        out
    }
}

impl Mul for NPoly {
    type Output = NPoly;
    fn mul(self, rhs: NPoly) -> NPoly {
        &self * &rhs
    }
}

impl Neg for &NPoly {
    type Output = NPoly;
    fn neg(self) -> NPoly {
        NPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl Neg for NPoly {
    type Output = NPoly;
    fn neg(self) -> NPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rendering() {
        let n = NPoly::n();
        let two = NPoly::int(2);
        assert_eq!(n.to_string(), "NN");
        assert_eq!(NPoly::from_real(&[(1, 1, 1), (-1, -4, 1)]).to_string(), "(NN^2-4)/NN");
        assert_eq!(NPoly::from_real(&[(2, 1, 2), (0, -1, 2)]).to_string(), "(NN^2-1)/2");
        assert_eq!((&NPoly::imag(1, 2) * &n).to_string(), "i*NN/2");
        assert_eq!(NPoly::from_real(&[(-1, -1, 4)]).to_string(), "-1/(4*NN)");
        assert_eq!(NPoly::from_real(&[(1, 1, 2), (-1, -6, 1)]).to_string(), "(NN^2-12)/(2*NN)");
        assert_eq!(NPoly::imag(3, 1).to_string(), "3*i");
        assert_eq!((&two * &n).to_string(), "2*NN");
        assert_eq!((NPoly::int(1) + NPoly::imag(1, 1)).to_string(), "1+i");
        assert_eq!(NPoly::zero().to_string(), "0");
    }

    #[test]
    fn casimir_evaluates_exactly() {
        // (N^2 - 1)/(2N) at N = 3
        let cf = NPoly::from_real(&[(1, 1, 2), (-1, -1, 2)]);
        assert_eq!(cf.eval(3), GaussRational::real(ratio(4, 3)));
    }

    #[test]
    fn inverse_only_for_monomials() {
        let m = NPoly::from_real(&[(2, 3, 1)]);
        assert_eq!(&m * &m.inverse().unwrap(), NPoly::one());
        assert!(NPoly::from_real(&[(2, 1, 1), (0, -4, 1)]).inverse().is_none());
        assert!(NPoly::zero().inverse().is_none());
        assert_eq!(NPoly::imag(1, 1).pow(2).unwrap(), NPoly::int(-1));
        assert_eq!(NPoly::n().pow(-2).unwrap(), NPoly::from_real(&[(-2, 1, 1)]));
    }

    fn small_poly() -> impl Strategy<Value = NPoly> {
        proptest::collection::vec(((-3i32..=3), (-5i64..=5), (1i64..=4), (-5i64..=5), (1i64..=4)), 0..4).prop_map(
            |ms| {
                ms.into_iter()
                    .map(|(k, a, b, c, d)| NPoly::monomial(k, GaussRational::new(ratio(a, b), ratio(c, d))))
                    .fold(NPoly::zero(), |acc, m| acc + m)
            },
        )
    }

    proptest! {
        #[test]
        fn ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn eval_is_a_homomorphism(a in small_poly(), b in small_poly(), n in 2i64..9) {
            prop_assert_eq!((&a * &b).eval(n), &a.eval(n) * &b.eval(n));
            prop_assert_eq!((&a + &b).eval(n), &a.eval(n) + &b.eval(n));
        }
    }
}
