//! Numeric helpers shared by the identity checks.

use num_complex::Complex64;

use crate::algebra::Algebra;
use crate::basis::DenseTensor;
use crate::linalg::{CMatrix, SparseMatrix};

/// Which adjoint-size matrix family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Kind {
    F,
    D,
}

/// One algebra plus sparse copies of its adjoint matrices.
pub(crate) struct Ctx<'a> {
    pub alg: &'a Algebra,
    pub n: usize,
    pub nf: f64,
    pub dim: usize,
    fs: Vec<SparseMatrix>,
    ds: Vec<SparseMatrix>,
}

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub(crate) fn ci(im: f64) -> Complex64 {
    Complex64::new(0.0, im)
}

pub(crate) fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

impl<'a> Ctx<'a> {
    pub(crate) fn new(alg: &'a Algebra) -> Self {
        Ctx {
            alg,
            n: alg.n(),
            nf: alg.n() as f64,
            dim: alg.dim(),
            fs: alg.adjoint.f_all().iter().map(SparseMatrix::from_dense).collect(),
            ds: alg.adjoint.d_all().iter().map(SparseMatrix::from_dense).collect(),
        }
    }

    pub(crate) fn t(&self, a: usize) -> &CMatrix {
        self.alg.basis.generator(a)
    }

    pub(crate) fn f(&self, a: usize, b: usize, c: usize) -> f64 {
        self.alg.f_dense.get(a, b, c)
    }

    pub(crate) fn d(&self, a: usize, b: usize, c: usize) -> f64 {
        self.alg.d_dense.get(a, b, c)
    }

    pub(crate) fn tensor(&self, k: Kind) -> &DenseTensor {
        match k {
            Kind::F => &self.alg.f_dense,
            Kind::D => &self.alg.d_dense,
        }
    }

    pub(crate) fn mat(&self, k: Kind, a: usize) -> &CMatrix {
        match k {
            Kind::F => self.alg.adjoint.f(a),
            Kind::D => self.alg.adjoint.d(a),
        }
    }

    pub(crate) fn sparse(&self, k: Kind, a: usize) -> &SparseMatrix {
        match k {
            Kind::F => &self.fs[a],
            Kind::D => &self.ds[a],
        }
    }

    /// `Σ_e x_{pqe} y_{rse}`.
    pub(crate) fn con(&self, x: Kind, p: usize, q: usize, y: Kind, r: usize, s: usize) -> f64 {
        let u = self.tensor(x).fiber(p, q);
        let v = self.tensor(y).fiber(r, s);
        u.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// `X^a Y^b` as a dense matrix.
    pub(crate) fn prod2(&self, x: Kind, a: usize, y: Kind, b: usize) -> CMatrix {
        self.sparse(x, a).mul_dense(self.mat(y, b))
    }

    /// `Tr(X^a Y^b Z^c W^d)`.
    pub(crate) fn tr4(&self, k: [Kind; 4], i: [usize; 4]) -> Complex64 {
        let dim = self.dim;
        let mut ab = vec![Complex64::new(0.0, 0.0); dim * dim];
        let mut cd = vec![Complex64::new(0.0, 0.0); dim * dim];
        self.sparse(k[0], i[0]).mul_sparse_into(self.sparse(k[1], i[1]), &mut ab);
        self.sparse(k[2], i[2]).mul_sparse_into(self.sparse(k[3], i[3]), &mut cd);
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..dim {
            for q in 0..dim {
                acc += ab[p * dim + q] * cd[q * dim + p];
            }
        }
        acc
    }

    /// `Σ_{b,c} t_abc X^b Y^c`.
    pub(crate) fn contract_pair(&self, t: Kind, a: usize, x: Kind, y: Kind) -> CMatrix {
        let dim = self.dim;
        let mut out = CMatrix::zeros(dim, dim);
        for b in 0..dim {
            let mut s = CMatrix::zeros(dim, dim);
            let mut any = false;
            for (cc, &v) in self.tensor(t).fiber(a, b).iter().enumerate() {
                if v != 0.0 {
                    s.axpy(c(v), self.mat(y, cc));
                    any = true;
                }
            }
            if any {
                out += &self.sparse(x, b).mul_dense(&s);
            }
        }
        out
    }

    /// `Σ_c t_abc M^c` for a family of matrices.
    pub(crate) fn combine(&self, t: Kind, a: usize, b: usize, family: &[CMatrix], scale: Complex64) -> CMatrix {
        let size = family[0].rows();
        let mut out = CMatrix::zeros(size, size);
        for (cc, &v) in self.tensor(t).fiber(a, b).iter().enumerate() {
            if v != 0.0 {
                out.axpy(scale * v, &family[cc]);
            }
        }
        out
    }

    pub(crate) fn identity(&self, size: usize, s: Complex64) -> CMatrix {
        CMatrix::identity(size).scale(s)
    }
}
