//! Numerical verification of the identity catalogue at a concrete `N`.
//!
//! Residuals are normalized per tuple as `|lhs - rhs| / (1 + max(|lhs|, |rhs|))`
//! (matrix-valued tuples use the largest entry). Four-index adjoint traces are
//! checked on every quadruple for `N <= 3` and on `budget` random quadruples
//! otherwise.

mod context;
mod registry;

use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError};
use context::Ctx;
use registry::{registry as all_checks, Acc, Body};

pub use registry::IdentityCheck;

/// Largest `N` for which sampled checks still run on every quadruple.
pub const EXHAUSTIVE_MAX_N: usize = 3;

/// Default number of random quadruples for sampled checks.
pub const DEFAULT_BUDGET: usize = 20_000;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("N must be at least 2, got {0}")]
    InvalidN(usize),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("sample budget must be at least 1")]
    InvalidBudget,
    #[error("unknown identity id {0:?}")]
    UnknownId(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Applicability {
    AllN,
    /// Identities special to SU(3).
    OnlyN3,
}

impl Applicability {
    pub fn applies(self, n: usize) -> bool {
        match self {
            Applicability::AllN => true,
            Applicability::OnlyN3 => n == 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CostClass {
    Exhaustive,
    /// Four-index checks that fall back to random sampling at large `N`.
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped(N≠3)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    pub max_residual: f64,
    pub tuples_checked: u64,
    pub seconds: f64,
}

/// Outcome of a full suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub format: String,
    pub n: usize,
    pub tolerance: f64,
    pub budget: usize,
    pub seed: u64,
    pub results: Vec<CheckResult>,
}

pub const REPORT_FORMAT: &str = "report v1";

impl IdentityReport {
    pub fn count(&self, status: Status) -> usize {
        self.results.iter().filter(|r| r.status == status).count()
    }

    pub fn all_passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.results.iter().find(|r| r.id == id)
    }

    /// The same report with wall-clock times zeroed, for comparisons.
    pub fn without_timing(&self) -> IdentityReport {
        let mut r = self.clone();
        r.results.iter_mut().for_each(|c| c.seconds = 0.0);
        r
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{REPORT_FORMAT} n={} tolerance={:e} budget={} seed={}\n",
            self.n, self.tolerance, self.budget, self.seed
        );
        for r in &self.results {
            s += &format!(
                "{} {} {:.3e} {} {:.3}\n",
                r.id, r.status, r.max_residual, r.tuples_checked, r.seconds
            );
        }
        s += &format!(
            "summary pass={} fail={} skipped={}\n",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        );
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Every registered identity in report order.
pub fn registry() -> Vec<IdentityCheck> {
    all_checks()
}

fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

enum Plan {
    Exhaustive,
    Sample { budget: usize, seed: u64 },
}

fn evaluate(ctx: &Ctx, check: &IdentityCheck, plan: Plan) -> Acc {
    let mut acc = Acc::default();
    match check.body {
        Body::Whole(f) => f(ctx, &mut acc),
        Body::Quad(f) => {
            let dim = ctx.dim;
            let one = |i: [usize; 4], acc: &mut Acc| {
                let (l, r) = f(ctx, i);
                acc.scalar(l, r);
            };
            match plan {
                Plan::Exhaustive => {
                    acc = (0..dim)
                        .into_par_iter()
                        .map(|a| {
                            let mut part = Acc::default();
                            for b in 0..dim {
                                for c in 0..dim {
                                    for d in 0..dim {
                                        let (l, r) = f(ctx, [a, b, c, d]);
                                        part.scalar(l, r);
                                    }
                                }
                            }
                            part
                        })
                        .reduce(Acc::default, |mut x, y| {
                            x.merge(y);
                            x
                        });
                }
                Plan::Sample { budget, seed } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(check.id));
                    for _ in 0..budget {
                        let i = [(); 4].map(|_| rng.random_range(0..dim));
                        one(i, &mut acc);
                    }
                }
            }
        }
    }
    acc
}

fn judge(acc: Acc, tolerance: f64) -> Status {
    if acc.max <= tolerance {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn validate(n: usize, tolerance: f64) -> Result<(), VerifyError> {
    if n < 2 {
        return Err(VerifyError::InvalidN(n));
    }
    if !(tolerance > 0.0) {
        return Err(VerifyError::InvalidTolerance(tolerance));
    }
    Ok(())
}

/// Runs every applicable check for SU(`n`).
pub fn run_suite(n: usize, tolerance: f64, budget: usize, seed: u64) -> Result<IdentityReport, VerifyError> {
    validate(n, tolerance)?;
    if budget == 0 {
        return Err(VerifyError::InvalidBudget);
    }
    let alg = Algebra::new(n)?;
    let ctx = Ctx::new(&alg);
    let results = all_checks()
        .par_iter()
        .map(|check| {
            if !check.applicability.applies(n) {
                return CheckResult {
                    id: check.id.to_string(),
                    status: Status::Skipped,
                    max_residual: 0.0,
                    tuples_checked: 0,
                    seconds: 0.0,
                };
            }
            let plan = match check.cost_class {
                CostClass::Sampled if n > EXHAUSTIVE_MAX_N => Plan::Sample { budget, seed },
                _ => Plan::Exhaustive,
            };
            let start = Instant::now();
            let acc = evaluate(&ctx, check, plan);
            CheckResult {
                id: check.id.to_string(),
                status: judge(acc, tolerance),
                max_residual: acc.max,
                tuples_checked: acc.tuples,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect();
    Ok(IdentityReport {
        format: REPORT_FORMAT.to_string(),
        n,
        tolerance,
        budget,
        seed,
        results,
    })
}

/// Runs one check on every tuple regardless of its cost class. Checks that
/// do not apply at `n` report [`Status::Skipped`].
pub fn check_one(id: &str, n: usize, tolerance: f64) -> Result<(Status, f64), VerifyError> {
    validate(n, tolerance)?;
    let check = all_checks()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| VerifyError::UnknownId(id.to_string()))?;
    if !check.applicability.applies(n) {
        return Ok((Status::Skipped, 0.0));
    }
    let alg = Algebra::new(n)?;
    let acc = evaluate(&Ctx::new(&alg), &check, Plan::Exhaustive);
    Ok((judge(acc, tolerance), acc.max))
}

/// Known misprints of two identities, kept as regression targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regression {
    /// `T^a T^b T^a` with `-T^a/(2N)` on the right instead of `-T^b/(2N)`.
    SandwichWithTa,
    /// `Tr(F^a D^b D^c D^d)` with `1/2` instead of `1/4` on `iN d_abe f_cde`.
    FdddHalf,
}

/// Worst normalized residual of a misprinted identity over all tuples.
pub fn regression_residual(which: Regression, n: usize) -> Result<f64, VerifyError> {
    validate(n, 1.0)?;
    let alg = Algebra::new(n)?;
    let ctx = Ctx::new(&alg);
    let mut acc = Acc::default();
    match which {
        Regression::SandwichWithTa => {
            // Σ_a T^a T^b T^a against -T^a/(2N) with a fixed, i.e. the
            // unsummed reading of the misprint.
            let g = alg.basis.generators();
            for a in 0..ctx.dim {
                for b in 0..ctx.dim {
                    let mut s = crate::linalg::CMatrix::zeros(n, n);
                    for e in 0..ctx.dim {
                        s += &g[e].matmul(&g[b]).and_then(|m| m.matmul(&g[e])).expect("square");
                    }
                    acc.matrix(&s, &g[a].scale(Complex64::new(-1.0 / (2.0 * ctx.nf), 0.0)));
                }
            }
        }
        Regression::FdddHalf => {
            let dim = ctx.dim;
            for a in 0..dim {
                for b in 0..dim {
                    for c in 0..dim {
                        for d in 0..dim {
                            let i = [a, b, c, d];
                            let l = ctx.tr4([context::Kind::F, context::Kind::D, context::Kind::D, context::Kind::D], i);
                            acc.scalar(l, registry::rhs_fddd_with(&ctx, i, 0.5));
                        }
                    }
                }
            }
        }
    }
    Ok(acc.max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_large_and_ids_are_unique() {
        let r = registry();
        assert!(r.len() >= 55, "{}", r.len());
        let mut ids: Vec<&str> = r.iter().map(|c| c.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), r.len());
    }

    #[test]
    fn suite_passes_at_two_and_three() {
        for n in [2, 3] {
            let rep = run_suite(n, 1e-10, 100, 0).unwrap();
            let bad: Vec<_> = rep.results.iter().filter(|r| r.status == Status::Fail).collect();
            assert!(bad.is_empty(), "N={n}: {bad:?}");
            let skipped = rep.count(Status::Skipped);
            assert_eq!(skipped == 0, n == 3);
        }
    }

    #[test]
    fn examples() {
        let (s, r) = check_one("EQ14-TbTc-trace", 3, 1e-10).unwrap();
        assert_eq!(s, Status::Pass);
        assert!(r < 1e-14);
        assert_eq!(check_one("EQ66-FDDD", 3, 1e-10).unwrap().0, Status::Pass);
        assert_eq!(check_one("S5-a1", 4, 1e-10).unwrap().0, Status::Skipped);
        assert!(matches!(check_one("nope", 3, 1e-10), Err(VerifyError::UnknownId(_))));
        assert!(matches!(run_suite(1, 1e-10, 1, 0), Err(VerifyError::InvalidN(1))));
    }

    #[test]
    fn misprints_fail() {
        assert!(regression_residual(Regression::SandwichWithTa, 3).unwrap() > 0.01);
        assert!(regression_residual(Regression::FdddHalf, 3).unwrap() > 0.01);
    }

    #[test]
    fn tiny_tolerance_fails() {
        let rep = run_suite(2, 1e-30, 10, 0).unwrap();
        assert!(!rep.all_passed());
    }

    #[test]
    fn report_formats() {
        let rep = run_suite(2, 1e-10, 10, 0).unwrap();
        let text = rep.to_text();
        assert!(text.starts_with("report v1 n=2"));
        assert_eq!(text.lines().count(), rep.results.len() + 2);
        let back: IdentityReport = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(back, rep);
    }
}
