//! Adjoint-representation matrices `(F^a)_bc = -i f_abc` and the symmetric
//! companions `(D^a)_bc = d_abc`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::basis::{Rank3Tensor, Symmetry, INTEGRITY_TOL};
use crate::linalg::CMatrix;

#[derive(Debug, Error)]
pub enum AdjointError {
    #[error("f is SU({f}) but d is SU({d})")]
    RankMismatch { f: usize, d: usize },
    #[error("expected {expected:?} tensor for {which}")]
    WrongSymmetry { which: &'static str, expected: Symmetry },
    #[error("integrity check failed: {what} (residual {residual:.3e})")]
    Integrity { what: String, residual: f64 },
}

#[derive(Debug, Clone)]
pub struct AdjointSet {
    n: usize,
    f_mats: Vec<CMatrix>,
    d_mats: Vec<CMatrix>,
}

impl AdjointSet {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Matrix size and number of matrices, `N^2 - 1`.
    pub fn dim(&self) -> usize {
        self.f_mats.len()
    }

    pub fn f(&self, a: usize) -> &CMatrix {
        &self.f_mats[a]
    }

    pub fn d(&self, a: usize) -> &CMatrix {
        &self.d_mats[a]
    }

    pub fn f_all(&self) -> &[CMatrix] {
        &self.f_mats
    }

    pub fn d_all(&self) -> &[CMatrix] {
        &self.d_mats
    }
}

pub fn build_adjoint(f: &Rank3Tensor, d: &Rank3Tensor) -> Result<AdjointSet, AdjointError> {
    if f.n() != d.n() {
        return Err(AdjointError::RankMismatch { f: f.n(), d: d.n() });
    }
    if f.symmetry() != Symmetry::Antisymmetric {
        return Err(AdjointError::WrongSymmetry {
            which: "f",
            expected: Symmetry::Antisymmetric,
        });
    }
    if d.symmetry() != Symmetry::Symmetric {
        return Err(AdjointError::WrongSymmetry {
            which: "d",
            expected: Symmetry::Symmetric,
        });
    }
    let m = f.dim();
    let fd = f.to_dense();
    let dd = d.to_dense();
    let f_mats: Vec<CMatrix> = (0..m)
        .map(|a| CMatrix::from_fn(m, m, |b, c| Complex64::new(0.0, -fd.get(a, b, c))))
        .collect();
    let d_mats: Vec<CMatrix> = (0..m)
        .map(|a| CMatrix::from_fn(m, m, |b, c| Complex64::new(dd.get(a, b, c), 0.0)))
        .collect();

    for a in 0..m {
        let fa = &f_mats[a];
        let real_part = fa.as_slice().iter().map(|z| z.re.abs()).fold(0.0, f64::max);
        let herm = fa.max_abs_diff(&fa.dagger()).expect("square");
        if real_part > INTEGRITY_TOL || herm > INTEGRITY_TOL {
            return Err(AdjointError::Integrity {
                what: format!("F^{} is not imaginary hermitian", a + 1),
                residual: real_part.max(herm),
            });
        }
        let da = &d_mats[a];
        let sym = da.max_abs_diff(&da.transpose()).expect("square");
        let tr = da.trace().expect("square").norm();
        if sym > INTEGRITY_TOL || tr > INTEGRITY_TOL {
            return Err(AdjointError::Integrity {
                what: format!("D^{} is not symmetric traceless", a + 1),
                residual: sym.max(tr),
            });
        }
    }
    Ok(AdjointSet {
        n: f.n(),
        f_mats,
        d_mats,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdjointCasimirs {
    /// `C_A`, with `F^a F^a = C_A I`.
    pub c_a: BigRational,
    /// The scalar in `D^a D^a = ((N^2 - 4)/N) I`.
    pub dd_scalar: BigRational,
    /// Max-abs entry of `F^a D^a`, which vanishes identically.
    pub fd_residual: f64,
}

/// Checks `F^a F^a = N I`, `D^a D^a = (N^2-4)/N I` and `F^a D^a = 0`.
pub fn adjoint_casimirs(adj: &AdjointSet) -> Result<AdjointCasimirs, AdjointError> {
    let m = adj.dim();
    let n = adj.n() as i64;
    let mut ff = CMatrix::zeros(m, m);
    let mut dd = CMatrix::zeros(m, m);
    let mut fd = CMatrix::zeros(m, m);
    for a in 0..m {
        ff += &adj.f(a).mul_unchecked(adj.f(a));
        dd += &adj.d(a).mul_unchecked(adj.d(a));
        fd += &adj.f(a).mul_unchecked(adj.d(a));
    }
    let c_a = BigRational::from_integer(BigInt::from(n));
    let dd_scalar = BigRational::new(BigInt::from(n * n - 4), BigInt::from(n));
    for (mat, scalar, what) in [(&ff, &c_a, "F^a F^a = C_A I"), (&dd, &dd_scalar, "D^a D^a = (N^2-4)/N I")] {
        let expected = CMatrix::identity(m).scale_real(scalar.to_f64().expect("finite"));
        if !mat.approx_eq(&expected, INTEGRITY_TOL) {
            return Err(AdjointError::Integrity {
                what: what.to_string(),
                residual: mat.max_abs_diff(&expected).expect("same shape"),
            });
        }
    }
    let fd_residual = fd.max_abs();
    if fd_residual > INTEGRITY_TOL {
        return Err(AdjointError::Integrity {
            what: "F^a D^a = 0".into(),
            residual: fd_residual,
        });
    }
    Ok(AdjointCasimirs {
        c_a,
        dd_scalar,
        fd_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_basis, extract_d, extract_f};
    use approx::assert_abs_diff_eq;

    fn adjoint(n: usize) -> AdjointSet {
        let b = build_basis(n).unwrap();
        build_adjoint(&extract_f(&b).unwrap(), &extract_d(&b).unwrap()).unwrap()
    }

    #[test]
    fn su2_adjoint_is_spin_one() {
        let adj = adjoint(2);
        // (F^a)_bc = -i ε_abc
        let eps = |a: usize, b: usize, c: usize| -> f64 {
            let p = [a, b, c];
            if p[0] == p[1] || p[1] == p[2] || p[0] == p[2] {
                return 0.0;
            }
            if [[0, 1, 2], [1, 2, 0], [2, 0, 1]].contains(&p) {
                1.0
            } else {
                -1.0
            }
        };
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    assert_abs_diff_eq!(adj.f(a)[(b, c)].im, -eps(a, b, c), epsilon = 1e-15);
                }
            }
            assert_eq!(adj.d(a).max_abs(), 0.0);
        }
    }

    #[test]
    fn su3_trace_ff() {
        let adj = adjoint(3);
        let t = adj.f(0).trace_of_product(adj.f(0)).unwrap();
        assert_abs_diff_eq!(t.re, 3.0, epsilon = 1e-13);
    }

    #[test]
    fn trace_fd_vanishes() {
        for n in 2..=4 {
            let adj = adjoint(n);
            for a in 0..adj.dim() {
                for b in 0..adj.dim() {
                    assert!(adj.f(a).trace_of_product(adj.d(b)).unwrap().norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn casimirs() {
        let c3 = adjoint_casimirs(&adjoint(3)).unwrap();
        assert_eq!(c3.c_a, BigRational::from_integer(3.into()));
        assert_eq!(c3.dd_scalar, BigRational::new(5.into(), 3.into()));
        assert!(c3.fd_residual < 1e-12);
        let c2 = adjoint_casimirs(&adjoint(2)).unwrap();
        assert_eq!(c2.dd_scalar, BigRational::from_integer(0.into()));
    }

    #[test]
    fn mismatched_tensors_rejected() {
        let f2 = extract_f(&build_basis(2).unwrap()).unwrap();
        let d3 = extract_d(&build_basis(3).unwrap()).unwrap();
        assert!(matches!(build_adjoint(&f2, &d3), Err(AdjointError::RankMismatch { f: 2, d: 3 })));
        assert!(matches!(build_adjoint(&d3, &d3), Err(AdjointError::WrongSymmetry { .. })));
    }
}
