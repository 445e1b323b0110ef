//! Generalized Gell-Mann basis of the defining representation, the `f` and
//! `d` tensors extracted from it, and the defining-representation Casimirs.

mod tensor;
pub mod tensor_file;

pub use tensor::{DenseTensor, Rank3Tensor, Symmetry};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use thiserror::Error;

use crate::linalg::{CMatrix, LinalgError};

/// Tolerance used for the structural assertions made while building and
/// extracting (hermiticity, normalization, symmetry of `f`/`d`).
pub const INTEGRITY_TOL: f64 = 1e-10;

/// Tensor entries with magnitude below this are treated as exact zeros.
pub const PRUNE_THRESHOLD: f64 = 1e-13;

#[derive(Debug, Error)]
pub enum BasisError {
    #[error("SU(N) requires N >= 2, got {0}")]
    InvalidN(usize),
    #[error("integrity check failed: {what} (residual {residual:.3e})")]
    Integrity { what: String, residual: f64 },
    #[error("tensor belongs to SU({tensor}) but basis is SU({basis})")]
    RankMismatch { basis: usize, tensor: usize },
    #[error("expected a {expected:?} tensor")]
    WrongSymmetry { expected: Symmetry },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Where a generator came from in the construction.
///
/// Indices are 0-based matrix rows/columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorLabel {
    /// Entries 1/2 at `(i, j)` and `(j, i)`.
    Symmetric { i: usize, j: usize },
    /// Entries -i/2 at `(i, j)` and +i/2 at `(j, i)`.
    Antisymmetric { i: usize, j: usize },
    /// `diag(1, .., 1, -k, 0, ..) / sqrt(2k(k+1))` with `k` leading ones.
    Diagonal { k: usize },
}

/// The `N^2 - 1` generators `T^a` of the defining representation,
/// normalized to `Tr(T^a T^b) = δ_ab / 2`.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    n: usize,
    generators: Vec<CMatrix>,
    labels: Vec<GeneratorLabel>,
}

impl GeneratorBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of generators, `N^2 - 1`.
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// Generator `a` (0-based).
    pub fn generator(&self, a: usize) -> &CMatrix {
        &self.generators[a]
    }

    pub fn labels(&self) -> &[GeneratorLabel] {
        &self.labels
    }
}

/// Constructs the generalized Gell-Mann basis.
///
/// Generators are ordered column by column: for each `j = 1..N` the pairs
/// `(i, j)` with `i < j` contribute a symmetric then an antisymmetric
/// generator, followed by the diagonal generator with `k = j`. This gives
/// `σ^a/2` for `N = 2` and `λ^a/2` in Gell-Mann order for `N = 3`.
pub fn build_basis(n: usize) -> Result<GeneratorBasis, BasisError> {
    if n < 2 {
        return Err(BasisError::InvalidN(n));
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut generators = Vec::with_capacity(n * n - 1);
    let mut labels = Vec::with_capacity(n * n - 1);
    for j in 1..n {
        for i in 0..j {
            let mut sym = CMatrix::zeros(n, n);
            sym[(i, j)] = Complex64::new(0.5, 0.0);
            sym[(j, i)] = Complex64::new(0.5, 0.0);
            generators.push(sym);
            labels.push(GeneratorLabel::Symmetric { i, j });

            let mut anti = CMatrix::zeros(n, n);
            anti[(i, j)] = Complex64::new(0.0, -0.5);
            anti[(j, i)] = Complex64::new(0.0, 0.5);
            generators.push(anti);
            labels.push(GeneratorLabel::Antisymmetric { i, j });
        }
        let k = j;
        let norm = (1.0 / (2 * k * (k + 1)) as f64).sqrt();
        let diag = CMatrix::from_fn(n, n, |r, c| {
            if r != c {
                zero
            } else if r < k {
                Complex64::new(norm, 0.0)
            } else if r == k {
                Complex64::new(-(k as f64) * norm, 0.0)
            } else {
                zero
            }
        });
        generators.push(diag);
        labels.push(GeneratorLabel::Diagonal { k });
    }
    let basis = GeneratorBasis {
        n,
        generators,
        labels,
    };
    check_basis(&basis)?;
    Ok(basis)
}

fn check_basis(basis: &GeneratorBasis) -> Result<(), BasisError> {
    let dim = basis.dim();
    if dim != basis.n * basis.n - 1 {
        return Err(BasisError::Integrity {
            what: format!("expected {} generators, built {dim}", basis.n * basis.n - 1),
            residual: f64::INFINITY,
        });
    }
    for (a, t) in basis.generators.iter().enumerate() {
        let herm = t.max_abs_diff(&t.dagger())?;
        if herm > INTEGRITY_TOL {
            return Err(BasisError::Integrity {
                what: format!("generator {} is not hermitian", a + 1),
                residual: herm,
            });
        }
        let tr = t.trace()?.norm();
        if tr > INTEGRITY_TOL {
            return Err(BasisError::Integrity {
                what: format!("generator {} is not traceless", a + 1),
                residual: tr,
            });
        }
    }
    for a in 0..dim {
        for b in a..dim {
            let expected = if a == b { 0.5 } else { 0.0 };
            let got = basis.generators[a].trace_of_product(&basis.generators[b])?;
            let residual = (got - Complex64::new(expected, 0.0)).norm();
            if residual > INTEGRITY_TOL {
                return Err(BasisError::Integrity {
                    what: format!("Tr(T^{} T^{}) normalization", a + 1, b + 1),
                    residual,
                });
            }
        }
    }
    Ok(())
}

/// `f_abc = -2i Tr([T^a, T^b] T^c)`.
pub fn extract_f(basis: &GeneratorBasis) -> Result<Rank3Tensor, BasisError> {
    extract(basis, Symmetry::Antisymmetric)
}

/// `d_abc = 2 Tr({T^a, T^b} T^c)`.
pub fn extract_d(basis: &GeneratorBasis) -> Result<Rank3Tensor, BasisError> {
    extract(basis, Symmetry::Symmetric)
}

fn extract(basis: &GeneratorBasis, symmetry: Symmetry) -> Result<Rank3Tensor, BasisError> {
    let m = basis.dim();
    let gens = basis.generators();
    let mut dense = DenseTensor::zeros(m);
    for a in 0..m {
        for b in 0..m {
            let (bracket, scale) = match symmetry {
                Symmetry::Antisymmetric => (gens[a].commutator(&gens[b])?, Complex64::new(0.0, -2.0)),
                Symmetry::Symmetric => (gens[a].anticommutator(&gens[b])?, Complex64::new(2.0, 0.0)),
            };
            for (c, tc) in gens.iter().enumerate() {
                let value = scale * bracket.trace_of_product(tc)?;
                if value.im.abs() > INTEGRITY_TOL * (1.0 + value.re.abs()) {
                    return Err(BasisError::Integrity {
                        what: format!("{symmetry:?} tensor entry ({}, {}, {}) is not real", a + 1, b + 1, c + 1),
                        residual: value.im.abs(),
                    });
                }
                dense.set(a, b, c, value.re);
            }
        }
    }

    let sign = match symmetry {
        Symmetry::Antisymmetric => -1.0,
        Symmetry::Symmetric => 1.0,
    };
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                let v = dense.get(a, b, c);
                let swap_ab = (v - sign * dense.get(b, a, c)).abs();
                let swap_bc = (v - sign * dense.get(a, c, b)).abs();
                let residual = swap_ab.max(swap_bc);
                if residual > INTEGRITY_TOL {
                    return Err(BasisError::Integrity {
                        what: format!("{symmetry:?} tensor permutation symmetry at ({}, {}, {})", a + 1, b + 1, c + 1),
                        residual,
                    });
                }
            }
        }
    }

    let mut tensor = Rank3Tensor::new(basis.n(), symmetry);
    for a in 0..m {
        for b in a..m {
            for c in b..m {
                if symmetry == Symmetry::Antisymmetric && (a == b || b == c) {
                    continue;
                }
                let v = dense.get(a, b, c);
                if v.abs() >= PRUNE_THRESHOLD {
                    tensor.insert_canonical([a, b, c], v);
                }
            }
        }
    }
    Ok(tensor)
}

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().expect("rational fits in f64")
}

/// `C_F = (N^2 - 1) / (2N)`.
pub fn casimir_fundamental(n: usize) -> BigRational {
    let n = n as i64;
    rational(n * n - 1, 2 * n)
}

/// `C_3F = (N^2 - 1)(N^2 - 4) / (4N^2)`.
pub fn cubic_casimir_fundamental(n: usize) -> BigRational {
    let n = n as i64;
    rational((n * n - 1) * (n * n - 4), 4 * n * n)
}

fn check_proportional(m: &CMatrix, scalar: &BigRational, what: &str) -> Result<(), BasisError> {
    let expected = CMatrix::identity(m.rows()).scale_real(to_f64(scalar));
    if !m.approx_eq(&expected, INTEGRITY_TOL) {
        return Err(BasisError::Integrity {
            what: what.to_string(),
            residual: m.max_abs_diff(&expected)?,
        });
    }
    Ok(())
}

/// Returns `Σ_a T^a T^a` together with `C_F`, after checking that the
/// former equals `C_F · 1`.
pub fn casimir2_defining(basis: &GeneratorBasis) -> Result<(CMatrix, BigRational), BasisError> {
    let n = basis.n();
    let mut sum = CMatrix::zeros(n, n);
    for t in basis.generators() {
        sum += &t.matmul(t)?;
    }
    let cf = casimir_fundamental(n);
    check_proportional(&sum, &cf, "T^a T^a proportional to C_F")?;
    Ok((sum, cf))
}

/// Returns `Σ d_abc T^a T^b T^c` together with `C_3F`, after checking
/// proportionality to the identity.
pub fn casimir3_defining(basis: &GeneratorBasis, d: &Rank3Tensor) -> Result<(CMatrix, BigRational), BasisError> {
    if d.n() != basis.n() {
        return Err(BasisError::RankMismatch {
            basis: basis.n(),
            tensor: d.n(),
        });
    }
    if d.symmetry() != Symmetry::Symmetric {
        return Err(BasisError::WrongSymmetry {
            expected: Symmetry::Symmetric,
        });
    }
    let n = basis.n();
    let m = basis.dim();
    let gens = basis.generators();
    let dense = d.to_dense();
    let mut sum = CMatrix::zeros(n, n);
    for a in 0..m {
        for b in 0..m {
            let mut contracted = CMatrix::zeros(n, n);
            let mut any = false;
            for (c, tc) in gens.iter().enumerate() {
                let v = dense.get(a, b, c);
                if v != 0.0 {
                    contracted.axpy(Complex64::new(v, 0.0), tc);
                    any = true;
                }
            }
            if any {
                sum += &gens[a].mul_unchecked(&gens[b]).mul_unchecked(&contracted);
            }
        }
    }
    let c3 = cubic_casimir_fundamental(n);
    check_proportional(&sum, &c3, "d_abc T^a T^b T^c proportional to C_3F")?;
    Ok((sum, c3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn su2_is_half_pauli() {
        let basis = build_basis(2).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let sigma = [
            CMatrix::from_vec(2, 2, vec![zero, one, one, zero]).unwrap(),
            CMatrix::from_vec(2, 2, vec![zero, -i, i, zero]).unwrap(),
            CMatrix::from_vec(2, 2, vec![one, zero, zero, -one]).unwrap(),
        ];
        for (t, s) in basis.generators().iter().zip(&sigma) {
            assert_eq!(*t, s.scale_real(0.5));
        }
    }

    #[test]
    fn su3_eighth_generator() {
        let basis = build_basis(3).unwrap();
        let t8 = basis.generator(7);
        let s = 1.0 / (2.0 * 3f64.sqrt());
        assert_abs_diff_eq!(t8[(0, 0)].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(t8[(1, 1)].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(t8[(2, 2)].re, -2.0 * s, epsilon = 1e-15);
        let norm = t8.trace_of_product(t8).unwrap();
        assert_abs_diff_eq!(norm.re, 0.5, epsilon = 1e-15);
        assert_eq!(basis.labels()[7], GeneratorLabel::Diagonal { k: 2 });
    }

    #[test]
    fn rejects_n_below_two() {
        assert!(matches!(build_basis(1), Err(BasisError::InvalidN(1))));
        assert!(matches!(build_basis(0), Err(BasisError::InvalidN(0))));
    }

    #[test]
    fn generator_count() {
        for n in 2..=6 {
            assert_eq!(build_basis(n).unwrap().dim(), n * n - 1);
        }
    }

    #[test]
    fn su2_structure_constants_are_levi_civita() {
        let basis = build_basis(2).unwrap();
        let f = extract_f(&basis).unwrap();
        assert_eq!(f.nnz(), 1);
        assert_abs_diff_eq!(f.get(0, 1, 2), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.get(1, 0, 2), -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.get(2, 0, 1), 1.0, epsilon = 1e-15);
        assert_eq!(f.get(0, 0, 1), 0.0);
        let d = extract_d(&basis).unwrap();
        assert_eq!(d.nnz(), 0);
    }

    /// Explicit Gell-Mann matrices, independent of `build_basis`.
    fn gell_mann_half(a: usize) -> CMatrix {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let r3 = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        let data = match a {
            1 => vec![z, o, z, o, z, z, z, z, z],
            2 => vec![z, -i, z, i, z, z, z, z, z],
            3 => vec![o, z, z, z, -o, z, z, z, z],
            8 => vec![r3, z, z, z, r3, z, z, z, -r3 - r3],
            _ => unreachable!(),
        };
        CMatrix::from_vec(3, 3, data).unwrap().scale_real(0.5)
    }

    #[test]
    fn su3_f123_and_d118_match_explicit_traces() {
        let (l1, l2, l3, l8) = (gell_mann_half(1), gell_mann_half(2), gell_mann_half(3), gell_mann_half(8));
        let f123 = Complex64::new(0.0, -2.0) * l1.commutator(&l2).unwrap().trace_of_product(&l3).unwrap();
        let d118 = 2.0 * l1.anticommutator(&l1).unwrap().trace_of_product(&l8).unwrap();

        let basis = build_basis(3).unwrap();
        let f = extract_f(&basis).unwrap();
        let d = extract_d(&basis).unwrap();
        assert_abs_diff_eq!(f.get(0, 1, 2), f123.re, epsilon = 1e-14);
        assert_abs_diff_eq!(f.get(0, 1, 2), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.get(0, 0, 7), d118.re, epsilon = 1e-14);
        assert_abs_diff_eq!(d.get(0, 0, 7), 1.0 / 3f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn antisymmetric_tensor_vanishes_on_repeats_and_d_is_traceless() {
        for n in 2..=5 {
            let basis = build_basis(n).unwrap();
            let f = extract_f(&basis).unwrap();
            let d = extract_d(&basis).unwrap();
            let m = basis.dim();
            for a in 0..m {
                for b in 0..m {
                    assert_eq!(f.get(a, a, b), 0.0);
                    assert_eq!(f.get(a, b, a), 0.0);
                }
            }
            for c in 0..m {
                let tr: f64 = (0..m).map(|a| d.get(a, a, c)).sum();
                assert!(tr.abs() < 1e-12, "N={n} c={c} sum d_aac = {tr}");
            }
        }
    }

    #[test]
    fn quadratic_casimir_values() {
        let (m, cf) = casimir2_defining(&build_basis(3).unwrap()).unwrap();
        assert_eq!(cf, rational(4, 3));
        assert!(m.approx_eq(&CMatrix::identity(3).scale_real(4.0 / 3.0), 1e-12));
        let (_, cf2) = casimir2_defining(&build_basis(2).unwrap()).unwrap();
        assert_eq!(cf2, rational(3, 4));
    }

    #[test]
    fn cubic_casimir_values() {
        for (n, expected) in [(2, rational(0, 1)), (3, rational(10, 9)), (4, rational(45, 16))] {
            let basis = build_basis(n).unwrap();
            let d = extract_d(&basis).unwrap();
            let (m, c3) = casimir3_defining(&basis, &d).unwrap();
            assert_eq!(c3, expected);
            assert!(m.approx_eq(&CMatrix::identity(n).scale_real(to_f64(&expected)), 1e-12));
        }
    }

    #[test]
    fn cubic_casimir_rejects_foreign_tensor() {
        let b3 = build_basis(3).unwrap();
        let d4 = extract_d(&build_basis(4).unwrap()).unwrap();
        assert!(matches!(
            casimir3_defining(&b3, &d4),
            Err(BasisError::RankMismatch { basis: 3, tensor: 4 })
        ));
        let f3 = extract_f(&b3).unwrap();
        assert!(matches!(casimir3_defining(&b3, &f3), Err(BasisError::WrongSymmetry { .. })));
    }
}
