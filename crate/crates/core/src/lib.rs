//! Computational toolkit for the SU(N) Lie algebra.
//!
//! * [`basis`] builds the generalized Gell-Mann generators `T^a` and
//!   extracts the structure constants `f_abc` and the symmetric `d_abc`.
//! * [`adjoint`] materializes `(F^a)_bc = -i f_abc` and `(D^a)_bc = d_abc`.
//! * [`verify`] checks a registry of trace, contraction and commutator
//!   identities numerically for a concrete `N`.
//! * [`expr`], [`rewrite`] and [`oracle`] form a small color-algebra system:
//!   parse expressions such as `TrAdj[F(a)F(b)F(c)]`, simplify them to
//!   coefficients that are exact Laurent polynomials in `N`, and cross-check
//!   every simplification against brute-force numerical evaluation.

pub mod adjoint;
pub mod algebra;
pub mod basis;
pub mod expr;
pub mod linalg;
pub mod numfmt;
pub mod oracle;
pub mod rewrite;
pub mod verify;

pub use adjoint::{adjoint_casimirs, build_adjoint, AdjointCasimirs, AdjointSet};
pub use algebra::Algebra;
pub use basis::tensor_file::TensorSet;
pub use basis::{
    build_basis, casimir2_defining, casimir3_defining, extract_d, extract_f, GeneratorBasis, Rank3Tensor, Symmetry,
};
pub use expr::{canonicalize, parse, ColorExpr, NPoly};
pub use linalg::CMatrix;
pub use oracle::Oracle;
pub use rewrite::{simplify, SimplifyOptions};
pub use verify::{check_one, run_suite, IdentityReport, Status};
