//! Everything numeric about one SU(N), built once and shared read-only.

use crate::adjoint::{build_adjoint, AdjointError, AdjointSet};
use crate::basis::{build_basis, extract_d, extract_f, BasisError, DenseTensor, GeneratorBasis, Rank3Tensor};

#[derive(Debug, thiserror::Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Adjoint(#[from] AdjointError),
}

/// Generators, tensors (sparse and dense) and adjoint matrices of SU(N).
#[derive(Debug, Clone)]
pub struct Algebra {
    pub basis: GeneratorBasis,
    pub f: Rank3Tensor,
    pub d: Rank3Tensor,
    pub f_dense: DenseTensor,
    pub d_dense: DenseTensor,
    pub adjoint: AdjointSet,
}

impl Algebra {
    pub fn new(n: usize) -> Result<Self, AlgebraError> {
        let basis = build_basis(n)?;
        let f = extract_f(&basis)?;
        let d = extract_d(&basis)?;
        let adjoint = build_adjoint(&f, &d)?;
        Ok(Self {
            f_dense: f.to_dense(),
            d_dense: d.to_dense(),
            basis,
            f,
            d,
            adjoint,
        })
    }

    pub fn n(&self) -> usize {
        self.basis.n()
    }

    /// Adjoint dimension `N^2 - 1`.
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}
