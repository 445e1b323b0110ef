//! The identity catalogue. Indices are 0-based internally; formulas are
//! quoted with the usual summation convention.

use num_complex::Complex64;

use super::context::{c, ci, delta, Ctx, Kind};
use super::{Applicability, CostClass};
use crate::linalg::CMatrix;

use Kind::{D, F};

/// Worst normalized residual over the tuples checked so far.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Acc {
    pub max: f64,
    pub tuples: u64,
}

fn normalized(diff: f64, l: f64, r: f64) -> f64 {
    let v = diff / (1.0 + l.max(r));
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

impl Acc {
    pub(crate) fn scalar(&mut self, l: Complex64, r: Complex64) {
        self.max = self.max.max(normalized((l - r).norm(), l.norm(), r.norm()));
        self.tuples += 1;
    }

    /// One tuple whose value is a whole matrix.
    pub(crate) fn matrix(&mut self, l: &CMatrix, r: &CMatrix) {
        let diff = l.max_abs_diff(r).unwrap_or(f64::INFINITY);
        self.max = self.max.max(normalized(diff, l.max_abs(), r.max_abs()));
        self.tuples += 1;
    }

    /// Every matrix entry is its own tuple.
    pub(crate) fn entries(&mut self, l: &CMatrix, r: &CMatrix) {
        for i in 0..l.rows() {
            for j in 0..l.cols() {
                self.scalar(l[(i, j)], r[(i, j)]);
            }
        }
    }

    pub(crate) fn merge(&mut self, other: Acc) {
        self.max = self.max.max(other.max);
        self.tuples += other.tuples;
    }
}

pub(crate) type QuadFn = fn(&Ctx, [usize; 4]) -> (Complex64, Complex64);

#[derive(Clone, Copy)]
pub(crate) enum Body {
    /// Runs its own loops.
    Whole(fn(&Ctx, &mut Acc)),
    /// Evaluated per index quadruple by the driver.
    Quad(QuadFn),
}

/// One registered identity.
#[derive(Clone, Copy)]
pub struct IdentityCheck {
    pub id: &'static str,
    /// The identity in words and symbols.
    pub anchor: &'static str,
    pub applicability: Applicability,
    pub cost_class: CostClass,
    pub(crate) body: Body,
}

const fn whole(id: &'static str, anchor: &'static str, f: fn(&Ctx, &mut Acc)) -> IdentityCheck {
    IdentityCheck {
        id,
        anchor,
        applicability: Applicability::AllN,
        cost_class: CostClass::Exhaustive,
        body: Body::Whole(f),
    }
}

const fn quad(id: &'static str, anchor: &'static str, f: QuadFn) -> IdentityCheck {
    IdentityCheck {
        id,
        anchor,
        applicability: Applicability::AllN,
        cost_class: CostClass::Exhaustive,
        body: Body::Quad(f),
    }
}

const fn sampled(id: &'static str, anchor: &'static str, f: QuadFn) -> IdentityCheck {
    IdentityCheck {
        cost_class: CostClass::Sampled,
        ..quad(id, anchor, f)
    }
}

const fn only_n3(check: IdentityCheck) -> IdentityCheck {
    IdentityCheck {
        applicability: Applicability::OnlyN3,
        ..check
    }
}

fn commutator(x: &CMatrix, y: &CMatrix) -> CMatrix {
    x.commutator(y).expect("square matrices of equal size")
}

fn anticommutator(x: &CMatrix, y: &CMatrix) -> CMatrix {
    x.anticommutator(y).expect("square matrices of equal size")
}

fn mul(x: &CMatrix, y: &CMatrix) -> CMatrix {
    x.matmul(y).expect("square matrices of equal size")
}

fn gens<'a>(ctx: &Ctx<'a>) -> &'a [CMatrix] {
    ctx.alg.basis.generators()
}

fn adj<'a>(ctx: &Ctx<'a>, k: Kind) -> &'a [CMatrix] {
    match k {
        F => ctx.alg.adjoint.f_all(),
        D => ctx.alg.adjoint.d_all(),
    }
}

fn tr(m: &CMatrix) -> Complex64 {
    m.trace().expect("square matrix")
}

fn casimir_f(n: f64) -> f64 {
    (n * n - 1.0) / (2.0 * n)
}

fn casimir_3f(n: f64) -> f64 {
    (n * n - 1.0) * (n * n - 4.0) / (4.0 * n * n)
}

/// `Σ_a T^a M T^a` style sandwich over the defining generators.
fn sandwich(ctx: &Ctx, m: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(ctx.n, ctx.n);
    for t in gens(ctx) {
        out += &mul(&mul(t, m), t);
    }
    out
}

/// `Σ_{abc} t_abc X^a Y^b Z^c` for defining generators.
fn cubic_defining(ctx: &Ctx, t: Kind) -> CMatrix {
    let g = gens(ctx);
    let mut out = CMatrix::zeros(ctx.n, ctx.n);
    for cc in 0..ctx.dim {
        let mut s = CMatrix::zeros(ctx.n, ctx.n);
        for a in 0..ctx.dim {
            for b in 0..ctx.dim {
                let v = ctx.tensor(t).get(a, b, cc);
                if v != 0.0 {
                    s.axpy(c(v), &mul(&g[a], &g[b]));
                }
            }
        }
        out += &mul(&s, &g[cc]);
    }
    out
}

/// `Σ_{abc} t_abc X^a Y^b Z^c` for adjoint matrices.
fn cubic_adjoint(ctx: &Ctx, t: Kind, x: Kind, y: Kind, z: Kind) -> CMatrix {
    // Σ_a X^a (Σ_bc t_abc Y^b Z^c)
    let mut out = CMatrix::zeros(ctx.dim, ctx.dim);
    for a in 0..ctx.dim {
        out += &ctx.sparse(x, a).mul_dense(&ctx.contract_pair(t, a, y, z));
    }
    out
}

/// `Σ_{bc} t_abc X^b Y^c = s · W^a` for every `a`.
fn pair_check(ctx: &Ctx, acc: &mut Acc, t: Kind, x: Kind, y: Kind, s: Complex64, w: Kind) {
    for a in 0..ctx.dim {
        acc.matrix(&ctx.contract_pair(t, a, x, y), &ctx.mat(w, a).scale(s));
    }
}

fn scalar_cubic(ctx: &Ctx, acc: &mut Acc, t: Kind, x: Kind, y: Kind, z: Kind, s: Complex64) {
    acc.matrix(&cubic_adjoint(ctx, t, x, y, z), &ctx.identity(ctx.dim, s));
}

/// Matrix identity over adjoint pairs `(a, b)` checked entry by entry.
fn pair_entries(ctx: &Ctx, acc: &mut Acc, lhs: impl Fn(usize, usize) -> CMatrix, rhs: impl Fn(usize, usize, usize, usize) -> Complex64) {
    for a in 0..ctx.dim {
        for b in 0..ctx.dim {
            let l = lhs(a, b);
            let r = CMatrix::from_fn(ctx.dim, ctx.dim, |p, q| rhs(a, b, p, q));
            acc.entries(&l, &r);
        }
    }
}

// --- four-index right-hand sides ----------------------------------------

fn ff(x: &Ctx, p: usize, q: usize, r: usize, s: usize) -> f64 {
    x.con(F, p, q, F, r, s)
}
fn dd(x: &Ctx, p: usize, q: usize, r: usize, s: usize) -> f64 {
    x.con(D, p, q, D, r, s)
}
fn fd(x: &Ctx, p: usize, q: usize, r: usize, s: usize) -> f64 {
    x.con(F, p, q, D, r, s)
}
fn df(x: &Ctx, p: usize, q: usize, r: usize, s: usize) -> f64 {
    x.con(D, p, q, F, r, s)
}

pub(crate) fn rhs_ffff(x: &Ctx, [a, b, cc, d]: [usize; 4]) -> Complex64 {
    let n = x.nf;
    c(delta(a, d) * delta(b, cc)
        + 0.5 * (delta(a, b) * delta(cc, d) + delta(a, cc) * delta(b, d))
        + 0.25 * n * (ff(x, a, d, b, cc) + dd(x, a, d, b, cc)))
}

pub(crate) fn rhs_fffd(x: &Ctx, [a, b, cc, d]: [usize; 4]) -> Complex64 {
    ci(0.25 * x.nf * (df(x, a, d, b, cc) - fd(x, a, d, b, cc)))
}

pub(crate) fn rhs_ffdd(x: &Ctx, [a, b, cc, d]: [usize; 4]) -> Complex64 {
    let n = x.nf;
    c(0.5 * (delta(a, b) * delta(cc, d) - delta(a, cc) * delta(b, d))
        + (n * n - 8.0) / (4.0 * n) * ff(x, a, d, b, cc)
        + 0.25 * n * dd(x, a, d, b, cc))
}

pub(crate) fn rhs_fdfd(x: &Ctx, [a, b, cc, d]: [usize; 4]) -> Complex64 {
    c(-0.5 * (delta(a, b) * delta(cc, d) - delta(a, cc) * delta(b, d))
        + 0.25 * x.nf * (ff(x, a, d, b, cc) + dd(x, a, d, b, cc)))
}

/// `Tr(F^a D^b D^c D^d)`; `k` is the coefficient of `iN d_abe f_cde`.
pub(crate) fn rhs_fddd_with(x: &Ctx, [a, b, cc, d]: [usize; 4], k: f64) -> Complex64 {
    let n = x.nf;
    ci(2.0 / n * fd(x, a, d, b, cc) + (n * n - 8.0) / (4.0 * n) * fd(x, a, b, cc, d) + k * n * df(x, a, b, cc, d))
}

pub(crate) fn rhs_fddd(x: &Ctx, i: [usize; 4]) -> Complex64 {
    rhs_fddd_with(x, i, 0.25)
}

pub(crate) fn rhs_dddd(x: &Ctx, [a, b, cc, d]: [usize; 4]) -> Complex64 {
    let n = x.nf;
    c((n * n - 4.0) / (n * n) * delta(a, d) * delta(b, cc)
        + (n * n - 8.0) / (2.0 * n * n) * delta(a, b) * delta(cc, d)
        + 0.5 * delta(a, cc) * delta(b, d)
        + 0.25 * n * ff(x, a, d, b, cc)
        + (n * n - 16.0) / (4.0 * n) * dd(x, a, d, b, cc)
        - 4.0 / n * dd(x, a, b, cc, d))
}

fn alt_ffff(x: &Ctx, [a, b, cc, d]: [usize; 4]) -> Complex64 {
    c(delta(a, b) * delta(cc, d)
        + delta(a, d) * delta(b, cc)
        + 0.25 * x.nf * (dd(x, a, b, cc, d) - dd(x, a, cc, b, d) + dd(x, a, d, b, cc)))
}

fn alt_fffd(x: &Ctx, [a, b, cc, d]: [usize; 4]) -> Complex64 {
    ci(0.25 * x.nf * (df(x, a, b, cc, d) + fd(x, a, b, cc, d)))
}

fn alt_ffdd(x: &Ctx, [a, b, cc, d]: [usize; 4]) -> Complex64 {
    let n = x.nf;
    c((n * n - 4.0) / (n * n) * (delta(a, b) * delta(cc, d) - delta(a, cc) * delta(b, d))
        + (n * n - 8.0) / (4.0 * n) * (dd(x, a, b, cc, d) - dd(x, a, cc, b, d))
        + 0.25 * n * dd(x, a, d, b, cc))
}

fn alt_fdfd(x: &Ctx, [a, b, cc, d]: [usize; 4]) -> Complex64 {
    c(0.25 * x.nf * (dd(x, a, b, cc, d) - dd(x, a, cc, b, d) + dd(x, a, d, b, cc)))
}

fn alt_fddd(x: &Ctx, [a, b, cc, d]: [usize; 4]) -> Complex64 {
    let n = x.nf;
    ci((n * n - 12.0) / (4.0 * n) * fd(x, a, b, cc, d)
        + 1.0 / n * (fd(x, a, d, b, cc) - fd(x, a, cc, b, d))
        + 0.25 * n * df(x, a, b, cc, d))
}

fn alt_dddd(x: &Ctx, [a, b, cc, d]: [usize; 4]) -> Complex64 {
    let n = x.nf;
    c((n * n - 4.0) / (n * n) * (delta(a, b) * delta(cc, d) + delta(a, d) * delta(b, cc))
        + (n * n - 16.0) / (4.0 * n) * (dd(x, a, b, cc, d) + dd(x, a, d, b, cc))
        - 0.25 * n * dd(x, a, cc, b, d))
}

fn four_t_raw(x: &Ctx, [a, b, cc, d]: [usize; 4]) -> Complex64 {
    let n = x.nf;
    c(delta(a, b) * delta(cc, d) / (4.0 * n))
        + c(dd(x, a, b, cc, d) - ff(x, a, b, cc, d)) * 0.125
        + ci(fd(x, a, b, cc, d) + fd(x, cc, d, a, b)) * 0.125
}

fn four_t_sym(x: &Ctx, [a, b, cc, d]: [usize; 4]) -> Complex64 {
    let n = x.nf;
    c((delta(a, b) * delta(cc, d) - delta(a, cc) * delta(b, d) + delta(a, d) * delta(b, cc)) / (4.0 * n)
        + 0.125 * (dd(x, a, b, cc, d) - dd(x, a, cc, b, d) + dd(x, a, d, b, cc)))
        + ci(0.125 * (df(x, a, b, cc, d) + df(x, a, cc, b, d) + df(x, a, d, b, cc)))
}

fn tr4_defining(x: &Ctx, [a, b, cc, d]: [usize; 4]) -> Complex64 {
    let ab = mul(x.t(a), x.t(b));
    let cd = mul(x.t(cc), x.t(d));
    tr(&mul(&ab, &cd))
}

/// The full catalogue in report order.
pub(crate) fn registry() -> Vec<IdentityCheck> {
    vec![
        // --- defining representation -----------------------------------
        whole("EQ1-commutator", "[T^a,T^b] = i f_abc T^c", |x, acc| {
            let g = gens(x);
            for a in 0..x.dim {
                for b in 0..x.dim {
                    acc.matrix(&commutator(&g[a], &g[b]), &x.combine(F, a, b, g, ci(1.0)));
                }
            }
        }),
        whole("EQ2-traceless", "Tr T^a = 0", |x, acc| {
            for t in gens(x) {
                acc.scalar(tr(t), c(0.0));
            }
        }),
        whole("EQ3-normalization", "Tr(T^a T^b) = δ_ab/2", |x, acc| {
            let g = gens(x);
            for a in 0..x.dim {
                for b in 0..x.dim {
                    acc.scalar(tr(&mul(&g[a], &g[b])), c(0.5 * delta(a, b)));
                }
            }
        }),
        whole("EQ5-casimir-CF", "T^a T^a = C_F 1 with C_F = (N^2-1)/(2N)", |x, acc| {
            let mut s = CMatrix::zeros(x.n, x.n);
            for t in gens(x) {
                s += &mul(t, t);
            }
            acc.matrix(&s, &x.identity(x.n, c(casimir_f(x.nf))));
        }),
        whole("EQ7-fierz", "T^a_ij T^a_kl = (δ_il δ_jk - δ_ij δ_kl / N)/2", |x, acc| {
            let n = x.n;
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let lhs: Complex64 = gens(x).iter().map(|t| t[(i, j)] * t[(k, l)]).sum();
                            let rhs = 0.5 * (delta(i, l) * delta(j, k) - delta(i, j) * delta(k, l) / x.nf);
                            acc.scalar(lhs, c(rhs));
                        }
                    }
                }
            }
        }),
        whole("EQ10-completeness", "M = (Tr M/N) 1 + 2 Tr(M T^a) T^a for any complex M", |x, acc| {
            let n = x.n;
            for seed in 0..4u32 {
                let m = CMatrix::from_fn(n, n, |i, j| {
                    let h = (seed * 131 + (i * n + j) as u32 * 31 + 7) as f64;
                    Complex64::new((h * 0.7).sin(), (h * 1.3).cos())
                });
                let mut rhs = x.identity(n, tr(&m) / x.nf);
                for t in gens(x) {
                    rhs.axpy(2.0 * tr(&mul(&m, t)), t);
                }
                acc.matrix(&m, &rhs);
            }
        }),
        whole("EQ13-TaTbTa", "T^a T^b T^a = -T^b/(2N)", |x, acc| {
            for t in gens(x) {
                acc.matrix(&sandwich(x, t), &t.scale(c(-1.0 / (2.0 * x.nf))));
            }
        }),
        whole("EQ14-TbTc-trace", "Tr(T^a T^b T^a T^c) = -δ_bc/(4N)", |x, acc| {
            let g = gens(x);
            for b in 0..x.dim {
                let s = sandwich(x, &g[b]);
                for cc in 0..x.dim {
                    acc.scalar(tr(&mul(&s, &g[cc])), c(-delta(b, cc) / (4.0 * x.nf)));
                }
            }
        }),
        whole("EQ15-product", "T^a T^b = [δ_ab 1/N + (d_abc + i f_abc) T^c]/2", |x, acc| {
            let g = gens(x);
            for a in 0..x.dim {
                for b in 0..x.dim {
                    let mut rhs = x.identity(x.n, c(delta(a, b) / (2.0 * x.nf)));
                    rhs += &x.combine(D, a, b, g, c(0.5));
                    rhs += &x.combine(F, a, b, g, ci(0.5));
                    acc.matrix(&mul(&g[a], &g[b]), &rhs);
                }
            }
        }),
        whole("EQ16-anticommutator", "{T^a,T^b} = δ_ab 1/N + d_abc T^c", |x, acc| {
            let g = gens(x);
            for a in 0..x.dim {
                for b in 0..x.dim {
                    let mut rhs = x.identity(x.n, c(delta(a, b) / x.nf));
                    rhs += &x.combine(D, a, b, g, c(1.0));
                    acc.matrix(&anticommutator(&g[a], &g[b]), &rhs);
                }
            }
        }),
        whole("EQ17-d-definition", "d_abc = 2 Tr({T^a,T^b} T^c)", |x, acc| {
            let g = gens(x);
            for a in 0..x.dim {
                for b in 0..x.dim {
                    let ab = anticommutator(&g[a], &g[b]);
                    for cc in 0..x.dim {
                        acc.scalar(2.0 * tr(&mul(&ab, &g[cc])), c(x.d(a, b, cc)));
                    }
                }
            }
        }),
        whole("EQ17-d-trace", "d_aac = 0", |x, acc| {
            for cc in 0..x.dim {
                acc.scalar(c((0..x.dim).map(|a| x.d(a, a, cc)).sum()), c(0.0));
            }
        }),
        whole("EQ18-triple-trace", "Tr(T^a T^b T^c) = (d_abc + i f_abc)/4", |x, acc| {
            let g = gens(x);
            for a in 0..x.dim {
                for b in 0..x.dim {
                    let ab = mul(&g[a], &g[b]);
                    for cc in 0..x.dim {
                        acc.scalar(tr(&mul(&ab, &g[cc])), Complex64::new(x.d(a, b, cc), x.f(a, b, cc)) * 0.25);
                    }
                }
            }
        }),
        whole("EQ19-fttt", "f_abd Tr(T^a T^b T^c) = i f_abc f_abd / 4", |x, acc| {
            triple_contraction(x, acc, F, |x, cc, d| ci(0.25 * pair_sum(x, F, cc, d)));
        }),
        whole("EQ19-dttt", "d_abd Tr(T^a T^b T^c) = d_abc d_abd / 4", |x, acc| {
            triple_contraction(x, acc, D, |x, cc, d| c(0.25 * pair_sum(x, D, cc, d)));
        }),
        whole("EQ20-fd", "f_abc d_abd = 0", |x, acc| {
            for cc in 0..x.dim {
                for d in 0..x.dim {
                    acc.scalar(c(pair_sum_mixed(x, cc, d)), c(0.0));
                }
            }
        }),
        whole("EQ24-ftr", "f_abd Tr(T^a T^b T^c) = i N δ_cd / 4", |x, acc| {
            triple_contraction(x, acc, F, |x, cc, d| ci(0.25 * x.nf * delta(cc, d)));
        }),
        whole("EQ25-dtr", "d_abd Tr(T^a T^b T^c) = (N^2-4)/(4N) δ_cd", |x, acc| {
            triple_contraction(x, acc, D, |x, cc, d| c((x.nf * x.nf - 4.0) / (4.0 * x.nf) * delta(cc, d)));
        }),
        whole("EQ26-ff", "f_abc f_abd = N δ_cd", |x, acc| {
            for cc in 0..x.dim {
                for d in 0..x.dim {
                    acc.scalar(c(pair_sum(x, F, cc, d)), c(x.nf * delta(cc, d)));
                }
            }
        }),
        whole("EQ27-dd", "d_abc d_abd = (N^2-4)/N δ_cd", |x, acc| {
            for cc in 0..x.dim {
                for d in 0..x.dim {
                    acc.scalar(c(pair_sum(x, D, cc, d)), c((x.nf * x.nf - 4.0) / x.nf * delta(cc, d)));
                }
            }
        }),
        whole("EQ28-C3F", "d_abc T^a T^b T^c = C_3F 1 with C_3F = (N^2-1)(N^2-4)/(4N^2)", |x, acc| {
            acc.matrix(&cubic_defining(x, D), &x.identity(x.n, c(casimir_3f(x.nf))));
        }),
        whole("EQ29-dTT", "d_abc T^a T^b = (N^2-4)/(2N) T^c", |x, acc| {
            defining_pair(x, acc, D, c((x.nf * x.nf - 4.0) / (2.0 * x.nf)));
        }),
        whole("EQ29-fTT", "f_abc T^a T^b = i N T^c / 2", |x, acc| {
            defining_pair(x, acc, F, ci(0.5 * x.nf));
        }),
        whole("EQ30-dcubic", "d_abc T^a T^b T^c = (N^2-4)/(2N) C_F 1", |x, acc| {
            let s = (x.nf * x.nf - 4.0) / (2.0 * x.nf) * casimir_f(x.nf);
            acc.matrix(&cubic_defining(x, D), &x.identity(x.n, c(s)));
        }),
        whole("EQ31-fTTT", "f_abc T^a T^b T^c = i (N^2-1)/4 1", |x, acc| {
            acc.matrix(&cubic_defining(x, F), &x.identity(x.n, ci((x.nf * x.nf - 1.0) / 4.0)));
        }),
        whole("EQ32-fRRR-T", "f_abc R^a R^b R^c = i N C_2 / 2 for R = T", |x, acc| {
            let mut c2 = CMatrix::zeros(x.n, x.n);
            for t in gens(x) {
                c2 += &mul(t, t);
            }
            acc.matrix(&cubic_defining(x, F), &c2.scale(ci(0.5 * x.nf)));
        }),
        whole("EQ32-fRRR-F", "f_abc R^a R^b R^c = i N C_2 / 2 for R = F", |x, acc| {
            let mut c2 = CMatrix::zeros(x.dim, x.dim);
            for m in adj(x, F) {
                c2 += &mul(m, m);
            }
            acc.matrix(&cubic_adjoint(x, F, F, F, F), &c2.scale(ci(0.5 * x.nf)));
        }),
        // --- adjoint matrices --------------------------------------------
        whole("ADJ-F-elements", "(F^a)_bc = -i f_abc", |x, acc| {
            for a in 0..x.dim {
                let r = CMatrix::from_fn(x.dim, x.dim, |b, cc| ci(-x.f(a, b, cc)));
                acc.entries(x.mat(F, a), &r);
            }
        }),
        whole("ADJ-D-elements", "(D^a)_bc = d_abc", |x, acc| {
            for a in 0..x.dim {
                let r = CMatrix::from_fn(x.dim, x.dim, |b, cc| c(x.d(a, b, cc)));
                acc.entries(x.mat(D, a), &r);
            }
        }),
        whole("EQ35-Fcomm", "[F^a,F^b] = i f_abc F^c", |x, acc| {
            adjoint_commutators(x, acc, F, F, F);
        }),
        quad("EQ36-jacobi", "f_abe f_ecd + f_cbe f_aed + f_dbe f_ace = 0", |x, [a, b, cc, d]| {
            (c(ff(x, a, b, cc, d) - ff(x, cc, b, a, d) + ff(x, d, b, a, cc)), c(0.0))
        }),
        whole("EQ37-FD-comm", "[F^a,D^b] = [D^a,F^b] = i f_abc D^c", |x, acc| {
            adjoint_commutators(x, acc, F, D, D);
            adjoint_commutators(x, acc, D, F, D);
        }),
        quad("EQ38-fd-cyclic", "f_abe d_cde + f_ace d_bde + f_ade d_bce = 0", |x, [a, b, cc, d]| {
            (c(fd(x, a, b, cc, d) + fd(x, a, cc, b, d) + fd(x, a, d, b, cc)), c(0.0))
        }),
        quad("EQ39-fd-cyclic", "f_abe d_cde + f_cbe d_ade + f_dbe d_ace = 0", |x, [a, b, cc, d]| {
            (c(fd(x, a, b, cc, d) + fd(x, cc, b, a, d) + fd(x, d, b, a, cc)), c(0.0))
        }),
        whole("EQ40-FD-sym", "F^a D^b + F^b D^a = D^a F^b + D^b F^a = d_abc F^c", |x, acc| {
            for a in 0..x.dim {
                for b in 0..x.dim {
                    let rhs = x.combine(D, a, b, adj(x, F), c(1.0));
                    let l1 = &x.prod2(F, a, D, b) + &x.prod2(F, b, D, a);
                    let l2 = &x.prod2(D, a, F, b) + &x.prod2(D, b, F, a);
                    acc.matrix(&l1, &rhs);
                    acc.matrix(&l2, &rhs);
                }
            }
        }),
        whole("EQ41-FD-mixed", "F^a D^b + D^a F^b = d_abc F^c + i f_abc D^c", |x, acc| {
            for a in 0..x.dim {
                for b in 0..x.dim {
                    let rhs = &x.combine(D, a, b, adj(x, F), c(1.0)) + &x.combine(F, a, b, adj(x, D), ci(1.0));
                    acc.matrix(&(&x.prod2(F, a, D, b) + &x.prod2(D, a, F, b)), &rhs);
                }
            }
        }),
        whole("EQ42-Dcomm", "[D^a,D^b]_cd = i f_abe (F^e)_cd - 2/N (δ_ac δ_bd - δ_ad δ_bc)", |x, acc| {
            pair_entries(
                x,
                acc,
                |a, b| commutator(x.mat(D, a), x.mat(D, b)),
                |a, b, cc, d| c(ff(x, a, b, cc, d) - 2.0 / x.nf * (delta(a, cc) * delta(b, d) - delta(a, d) * delta(b, cc))),
            );
        }),
        quad("EQ43-ffid", "f_abe f_cde = 2/N (δ_ac δ_bd - δ_ad δ_bc) + d_ace d_bde - d_bce d_ade", |x, [a, b, cc, d]| {
            let r = 2.0 / x.nf * (delta(a, cc) * delta(b, d) - delta(a, d) * delta(b, cc)) + dd(x, a, cc, b, d)
                - dd(x, b, cc, a, d);
            (c(ff(x, a, b, cc, d)), c(r))
        }),
        whole(
            "EQ44-ffpdd",
            "(F^a F^b + D^a D^b)_cd = 2/N (δ_ab δ_cd - δ_ac δ_bd) + d_abe (D^e)_cd + i f_abe (F^e)_cd",
            |x, acc| {
                pair_entries(
                    x,
                    acc,
                    |a, b| &x.prod2(F, a, F, b) + &x.prod2(D, a, D, b),
                    |a, b, cc, d| {
                        c(2.0 / x.nf * (delta(a, b) * delta(cc, d) - delta(a, cc) * delta(b, d))
                            + dd(x, a, b, cc, d)
                            + ff(x, a, b, cc, d))
                    },
                );
            },
        ),
        quad(
            "EQ44-ffdd-tensor",
            "f_ace f_bde - f_abe f_cde = 2/N (δ_ab δ_cd - δ_ac δ_bd) + d_abe d_cde - d_ace d_bde",
            |x, [a, b, cc, d]| {
                let l = ff(x, a, cc, b, d) - ff(x, a, b, cc, d);
                let r = 2.0 / x.nf * (delta(a, b) * delta(cc, d) - delta(a, cc) * delta(b, d)) + dd(x, a, b, cc, d)
                    - dd(x, a, cc, b, d);
                (c(l), c(r))
            },
        ),
        whole("EQ45-CA", "F^a F^a = C_A I with C_A = N", |x, acc| {
            let mut s = CMatrix::zeros(x.dim, x.dim);
            for m in adj(x, F) {
                s += &mul(m, m);
            }
            acc.matrix(&s, &x.identity(x.dim, c(x.nf)));
        }),
        whole("EQ47-DD", "D^a D^a = (N^2-4)/N I", |x, acc| {
            let mut s = CMatrix::zeros(x.dim, x.dim);
            for m in adj(x, D) {
                s += &mul(m, m);
            }
            acc.matrix(&s, &x.identity(x.dim, c((x.nf * x.nf - 4.0) / x.nf)));
        }),
        whole("EQ47-FD", "F^a D^a = 0", |x, acc| {
            let mut s = CMatrix::zeros(x.dim, x.dim);
            for a in 0..x.dim {
                s += &x.prod2(F, a, D, a);
            }
            acc.matrix(&s, &CMatrix::zeros(x.dim, x.dim));
        }),
        // --- cubic contractions ------------------------------------------
        whole("CUB-fFF", "f_abc F^b F^c = i N F^a / 2", |x, acc| {
            pair_check(x, acc, F, F, F, ci(0.5 * x.nf), F);
        }),
        whole("CUB-fFD", "f_abc F^b D^c = i N D^a / 2", |x, acc| {
            pair_check(x, acc, F, F, D, ci(0.5 * x.nf), D);
        }),
        whole("CUB-fDD", "f_abc D^b D^c = i (N^2-4)/(2N) F^a", |x, acc| {
            pair_check(x, acc, F, D, D, ci((x.nf * x.nf - 4.0) / (2.0 * x.nf)), F);
        }),
        whole("SCAL-fFFF", "f_abc F^a F^b F^c = i N^2 I / 2", |x, acc| {
            scalar_cubic(x, acc, F, F, F, F, ci(0.5 * x.nf * x.nf));
        }),
        whole("SCAL-fDFF", "f_abc D^a F^b F^c = 0", |x, acc| {
            scalar_cubic(x, acc, F, D, F, F, c(0.0));
        }),
        whole("SCAL-fDDF", "f_abc D^a D^b F^c = i (N^2-4)/2 I", |x, acc| {
            scalar_cubic(x, acc, F, D, D, F, ci(0.5 * (x.nf * x.nf - 4.0)));
        }),
        whole("SCAL-fDDD", "f_abc D^a D^b D^c = 0", |x, acc| {
            scalar_cubic(x, acc, F, D, D, D, c(0.0));
        }),
        whole("P1-dFF", "d_abc F^b F^c = N D^a / 2", |x, acc| {
            pair_check(x, acc, D, F, F, c(0.5 * x.nf), D);
        }),
        whole("P2-dFD", "d_abc F^b D^c = (N^2-4)/(2N) F^a", |x, acc| {
            pair_check(x, acc, D, F, D, c((x.nf * x.nf - 4.0) / (2.0 * x.nf)), F);
        }),
        whole("P3-dDD", "d_abc D^b D^c = (N^2-12)/(2N) D^a", |x, acc| {
            pair_check(x, acc, D, D, D, c((x.nf * x.nf - 12.0) / (2.0 * x.nf)), D);
        }),
        whole("SCAL-dFFF", "d_abc F^a F^b F^c = 0", |x, acc| {
            scalar_cubic(x, acc, D, F, F, F, c(0.0));
        }),
        whole("SCAL-dDFF", "d_abc D^a F^b F^c = (N^2-4)/2 I", |x, acc| {
            scalar_cubic(x, acc, D, D, F, F, c(0.5 * (x.nf * x.nf - 4.0)));
        }),
        whole("SCAL-dDDF", "d_abc D^a D^b F^c = 0", |x, acc| {
            scalar_cubic(x, acc, D, D, D, F, c(0.0));
        }),
        whole("SCAL-dDDD", "d_abc D^a D^b D^c = (N^2-4)(N^2-12)/(2N^2) I", |x, acc| {
            let n2 = x.nf * x.nf;
            scalar_cubic(x, acc, D, D, D, D, c((n2 - 4.0) * (n2 - 12.0) / (2.0 * n2)));
        }),
        // --- adjoint traces ----------------------------------------------
        whole("T1-single", "Tr F^a = Tr D^a = 0", |x, acc| {
            for a in 0..x.dim {
                acc.scalar(tr(x.mat(F, a)), c(0.0));
                acc.scalar(tr(x.mat(D, a)), c(0.0));
            }
        }),
        whole("T1-FD", "Tr(F^a D^b) = 0", |x, acc| {
            for a in 0..x.dim {
                for b in 0..x.dim {
                    acc.scalar(x.sparse(D, b).trace_with(x.mat(F, a)), c(0.0));
                }
            }
        }),
        whole("T2-FF", "Tr(F^a F^b) = N δ_ab", |x, acc| {
            for a in 0..x.dim {
                for b in 0..x.dim {
                    acc.scalar(x.sparse(F, b).trace_with(x.mat(F, a)), c(x.nf * delta(a, b)));
                }
            }
        }),
        whole("T2-DD", "Tr(D^a D^b) = (N^2-4)/N δ_ab", |x, acc| {
            for a in 0..x.dim {
                for b in 0..x.dim {
                    let r = (x.nf * x.nf - 4.0) / x.nf * delta(a, b);
                    acc.scalar(x.sparse(D, b).trace_with(x.mat(D, a)), c(r));
                }
            }
        }),
        whole("T3-FFF", "Tr(F^a F^b F^c) = i N f_abc / 2", |x, acc| {
            triple_trace(x, acc, [F, F, F], |x, a, b, cc| ci(0.5 * x.nf * x.f(a, b, cc)));
        }),
        whole("T3-DFF", "Tr(D^a F^b F^c) = N d_abc / 2", |x, acc| {
            triple_trace(x, acc, [D, F, F], |x, a, b, cc| c(0.5 * x.nf * x.d(a, b, cc)));
        }),
        whole("T4-DDF", "Tr(D^a D^b F^c) = i (N^2-4)/(2N) f_abc", |x, acc| {
            triple_trace(x, acc, [D, D, F], |x, a, b, cc| ci((x.nf * x.nf - 4.0) / (2.0 * x.nf) * x.f(a, b, cc)));
        }),
        whole("T4-DDD", "Tr(D^a D^b D^c) = (N^2-12)/(2N) d_abc", |x, acc| {
            triple_trace(x, acc, [D, D, D], |x, a, b, cc| c((x.nf * x.nf - 12.0) / (2.0 * x.nf) * x.d(a, b, cc)));
        }),
        sampled(
            "EQ62-FFFF",
            "Tr(F^a F^b F^c F^d) = δ_ad δ_bc + (δ_ab δ_cd + δ_ac δ_bd)/2 + N/4 (f_ade f_bce + d_ade d_bce)",
            |x, i| (x.tr4([F, F, F, F], i), rhs_ffff(x, i)),
        ),
        sampled("EQ63-FFFD", "Tr(F^a F^b F^c D^d) = i N/4 (d_ade f_bce - f_ade d_bce)", |x, i| {
            (x.tr4([F, F, F, D], i), rhs_fffd(x, i))
        }),
        sampled(
            "EQ64-FFDD",
            "Tr(F^a F^b D^c D^d) = (δ_ab δ_cd - δ_ac δ_bd)/2 + (N^2-8)/(4N) f_ade f_bce + N/4 d_ade d_bce",
            |x, i| (x.tr4([F, F, D, D], i), rhs_ffdd(x, i)),
        ),
        sampled(
            "EQ65-FDFD",
            "Tr(F^a D^b F^c D^d) = -(δ_ab δ_cd - δ_ac δ_bd)/2 + N/4 (f_ade f_bce + d_ade d_bce)",
            |x, i| (x.tr4([F, D, F, D], i), rhs_fdfd(x, i)),
        ),
        sampled(
            "EQ66-FDDD",
            "Tr(F^a D^b D^c D^d) = 2i/N f_ade d_bce + i (N^2-8)/(4N) f_abe d_cde + i N/4 d_abe f_cde",
            |x, i| (x.tr4([F, D, D, D], i), rhs_fddd(x, i)),
        ),
        sampled(
            "EQ67-DDDD",
            "Tr(D^a D^b D^c D^d) = (N^2-4)/N^2 δ_ad δ_bc + (N^2-8)/(2N^2) δ_ab δ_cd + δ_ac δ_bd/2 + N/4 f_ade f_bce + (N^2-16)/(4N) d_ade d_bce - 4/N d_abe d_cde",
            |x, i| (x.tr4([D, D, D, D], i), rhs_dddd(x, i)),
        ),
        whole("EQ-f4", "Tr(F^a F^b F^a F^c) = N^2 δ_bc / 2", |x, acc| {
            for b in 0..x.dim {
                let mut s = CMatrix::zeros(x.dim, x.dim);
                for a in 0..x.dim {
                    s += &x.sparse(F, a).mul_dense(&x.prod2(F, b, F, a));
                }
                for cc in 0..x.dim {
                    acc.scalar(x.sparse(F, cc).trace_with(&s), c(0.5 * x.nf * x.nf * delta(b, cc)));
                }
            }
        }),
        // --- special to N = 3 --------------------------------------------
        only_n3(whole(
            "S5-a1",
            "{F^a,F^b}_cd = 3 d_abe (D^e)_cd + δ_ab δ_cd - δ_ac δ_bd - δ_ad δ_bc",
            |x, acc| {
                pair_entries(
                    x,
                    acc,
                    |a, b| anticommutator(x.mat(F, a), x.mat(F, b)),
                    |a, b, cc, d| c(3.0 * dd(x, a, b, cc, d) + deltas(a, b, cc, d, [1.0, -1.0, -1.0])),
                );
            },
        )),
        only_n3(whole(
            "S5-a2",
            "{D^a,D^b}_cd = -d_abe (D^e)_cd + (δ_ab δ_cd + δ_ac δ_bd + δ_ad δ_bc)/3",
            |x, acc| {
                pair_entries(
                    x,
                    acc,
                    |a, b| anticommutator(x.mat(D, a), x.mat(D, b)),
                    |a, b, cc, d| c(-dd(x, a, b, cc, d) + deltas(a, b, cc, d, [1.0, 1.0, 1.0]) / 3.0),
                );
            },
        )),
        only_n3(quad(
            "S5-a1-tensor",
            "3 d_abe d_cde - f_ace f_bde - f_ade f_bce = δ_ac δ_bd + δ_ad δ_bc - δ_ab δ_cd",
            |x, [a, b, cc, d]| {
                let l = 3.0 * dd(x, a, b, cc, d) - ff(x, a, cc, b, d) - ff(x, a, d, b, cc);
                (c(l), c(deltas(a, b, cc, d, [-1.0, 1.0, 1.0])))
            },
        )),
        only_n3(quad(
            "S5-a2-tensor",
            "d_abe d_cde + d_ace d_bde + d_ade d_bce = (δ_ab δ_cd + δ_ac δ_bd + δ_ad δ_bc)/3",
            |x, [a, b, cc, d]| {
                let l = dd(x, a, b, cc, d) + dd(x, a, cc, b, d) + dd(x, a, d, b, cc);
                (c(l), c(deltas(a, b, cc, d, [1.0, 1.0, 1.0]) / 3.0))
            },
        )),
        only_n3(whole(
            "S5-a3",
            "(F^a F^b)_cd = i f_abe (F^e)_cd / 2 + 3 d_abe (D^e)_cd / 2 + (δ_ab δ_cd - δ_ac δ_bd - δ_ad δ_bc)/2",
            |x, acc| {
                pair_entries(
                    x,
                    acc,
                    |a, b| x.prod2(F, a, F, b),
                    |a, b, cc, d| {
                        c(0.5 * ff(x, a, b, cc, d) + 1.5 * dd(x, a, b, cc, d) + 0.5 * deltas(a, b, cc, d, [1.0, -1.0, -1.0]))
                    },
                );
            },
        )),
        only_n3(whole(
            "S5-a4",
            "(D^a D^b)_cd = i f_abe (F^e)_cd / 2 - d_abe (D^e)_cd / 2 + (δ_ab δ_cd - δ_ac δ_bd)/6 + δ_ad δ_bc / 2",
            |x, acc| {
                pair_entries(
                    x,
                    acc,
                    |a, b| x.prod2(D, a, D, b),
                    |a, b, cc, d| {
                        c(0.5 * ff(x, a, b, cc, d) - 0.5 * dd(x, a, b, cc, d)
                            + (delta(a, b) * delta(cc, d) - delta(a, cc) * delta(b, d)) / 6.0
                            + 0.5 * delta(a, d) * delta(b, cc))
                    },
                );
            },
        )),
        // --- four defining generators --------------------------------------
        quad(
            "A0-fourT-raw",
            "Tr(T^a T^b T^c T^d) = δ_ab δ_cd/(4N) + (d_abe d_cde - f_abe f_cde + i f_abe d_cde + i f_cde d_abe)/8",
            |x, i| (tr4_defining(x, i), four_t_raw(x, i)),
        ),
        quad(
            "A1-fourT",
            "Tr(T^a T^b T^c T^d) = (δ_ab δ_cd - δ_ac δ_bd + δ_ad δ_bc)/(4N) + (d_abe d_cde - d_ace d_bde + d_ade d_bce)/8 + i (d_abe f_cde + d_ace f_bde + d_ade f_bce)/8",
            |x, i| (tr4_defining(x, i), four_t_sym(x, i)),
        ),
        whole("A1-fourT-ac", "the symmetric four-generator trace summed over a = c gives -δ_bd/(4N)", |x, acc| {
            for b in 0..x.dim {
                for d in 0..x.dim {
                    let s: Complex64 = (0..x.dim).map(|a| four_t_sym(x, [a, b, a, d])).sum();
                    acc.scalar(s, c(-delta(b, d) / (4.0 * x.nf)));
                }
            }
        }),
        // --- three-matrix traces as contractions -------------------------
        whole("B1-DFF", "Tr(D^a F^b F^c) = d_ade (F^d F^e)_bc", |x, acc| {
            trace_as_contraction(x, acc, [D, F, F], F, F, false);
        }),
        whole("B2-DDF", "Tr(D^a D^b F^c) = d_ade (F^d D^e)_cb", |x, acc| {
            trace_as_contraction(x, acc, [D, D, F], F, D, true);
        }),
        whole("B3-DDD", "Tr(D^a D^b D^c) = d_ade (D^d D^e)_bc", |x, acc| {
            trace_as_contraction(x, acc, [D, D, D], D, D, false);
        }),
        whole("B4-FFD", "Tr(F^e F^a D^b) = N d_abe / 2", |x, acc| {
            triple_trace(x, acc, [F, F, D], |x, e, a, b| c(0.5 * x.nf * x.d(a, b, e)));
        }),
        whole("B5-FDD", "Tr(F^a D^b D^e) = i (N^2-4)/(2N) f_abe", |x, acc| {
            triple_trace(x, acc, [F, D, D], |x, a, b, e| ci((x.nf * x.nf - 4.0) / (2.0 * x.nf) * x.f(a, b, e)));
        }),
        whole("B6-FFD-DDD", "Tr(F^a F^b D^f + D^a D^b D^f) = (N^2-6)/N d_abf", |x, acc| {
            for a in 0..x.dim {
                for b in 0..x.dim {
                    let ff_ = x.prod2(F, a, F, b);
                    let dd_ = x.prod2(D, a, D, b);
                    for f in 0..x.dim {
                        let l = x.sparse(D, f).trace_with(&ff_) + x.sparse(D, f).trace_with(&dd_);
                        acc.scalar(l, c((x.nf * x.nf - 6.0) / x.nf * x.d(a, b, f)));
                    }
                }
            }
        }),
        whole("B7-DDD", "Tr(D^a D^b D^f) = (N^2-12)/(2N) d_abf", |x, acc| {
            triple_trace(x, acc, [D, D, D], |x, a, b, f| c((x.nf * x.nf - 12.0) / (2.0 * x.nf) * x.d(a, b, f)));
        }),
        // --- alternative four-matrix trace forms ---------------------------
        sampled(
            "C-FFFF-alt",
            "Tr(F^a F^b F^c F^d) = δ_ab δ_cd + δ_ad δ_bc + N/4 (d_abe d_cde - d_ace d_bde + d_ade d_bce)",
            |x, i| (x.tr4([F, F, F, F], i), alt_ffff(x, i)),
        ),
        sampled("C-FFFD-alt", "Tr(F^a F^b F^c D^d) = i N/4 (d_abe f_cde + f_abe d_cde)", |x, i| {
            (x.tr4([F, F, F, D], i), alt_fffd(x, i))
        }),
        sampled(
            "C-FFDD-alt",
            "Tr(F^a F^b D^c D^d) = (N^2-4)/N^2 (δ_ab δ_cd - δ_ac δ_bd) + (N^2-8)/(4N) (d_abe d_cde - d_ace d_bde) + N/4 d_ade d_bce",
            |x, i| (x.tr4([F, F, D, D], i), alt_ffdd(x, i)),
        ),
        sampled(
            "C-FDFD-alt",
            "Tr(F^a D^b F^c D^d) = N/4 (d_abe d_cde - d_ace d_bde + d_ade d_bce)",
            |x, i| (x.tr4([F, D, F, D], i), alt_fdfd(x, i)),
        ),
        sampled(
            "C-FDDD-alt",
            "Tr(F^a D^b D^c D^d) = i (N^2-12)/(4N) f_abe d_cde + i/N (f_ade d_bce - f_ace d_bde) + i N/4 d_abe f_cde",
            |x, i| (x.tr4([F, D, D, D], i), alt_fddd(x, i)),
        ),
        sampled(
            "C-DDDD-alt",
            "Tr(D^a D^b D^c D^d) = (N^2-4)/N^2 (δ_ab δ_cd + δ_ad δ_bc) + (N^2-16)/(4N) (d_abe d_cde + d_ade d_bce) - N/4 d_ace d_bde",
            |x, i| (x.tr4([D, D, D, D], i), alt_dddd(x, i)),
        ),
        sampled("C-FFFF-consistency", "both closed forms of Tr(F^a F^b F^c F^d) agree", |x, i| {
            (rhs_ffff(x, i), alt_ffff(x, i))
        }),
        sampled("C-FFFD-consistency", "both closed forms of Tr(F^a F^b F^c D^d) agree", |x, i| {
            (rhs_fffd(x, i), alt_fffd(x, i))
        }),
        sampled("C-FFDD-consistency", "both closed forms of Tr(F^a F^b D^c D^d) agree", |x, i| {
            (rhs_ffdd(x, i), alt_ffdd(x, i))
        }),
        sampled("C-FDFD-consistency", "both closed forms of Tr(F^a D^b F^c D^d) agree", |x, i| {
            (rhs_fdfd(x, i), alt_fdfd(x, i))
        }),
        sampled("C-FDDD-consistency", "both closed forms of Tr(F^a D^b D^c D^d) agree", |x, i| {
            (rhs_fddd(x, i), alt_fddd(x, i))
        }),
        sampled("C-DDDD-consistency", "both closed forms of Tr(D^a D^b D^c D^d) agree", |x, i| {
            (rhs_dddd(x, i), alt_dddd(x, i))
        }),
    ]
}

/// `s0 δ_ab δ_cd + s1 δ_ac δ_bd + s2 δ_ad δ_bc`.
fn deltas(a: usize, b: usize, cc: usize, d: usize, s: [f64; 3]) -> f64 {
    s[0] * delta(a, b) * delta(cc, d) + s[1] * delta(a, cc) * delta(b, d) + s[2] * delta(a, d) * delta(b, cc)
}

/// `Σ_ab t_abc t_abd`.
fn pair_sum(x: &Ctx, t: Kind, cc: usize, d: usize) -> f64 {
    let mut s = 0.0;
    for a in 0..x.dim {
        for b in 0..x.dim {
            s += x.tensor(t).get(a, b, cc) * x.tensor(t).get(a, b, d);
        }
    }
    s
}

/// `Σ_ab f_abc d_abd`.
fn pair_sum_mixed(x: &Ctx, cc: usize, d: usize) -> f64 {
    let mut s = 0.0;
    for a in 0..x.dim {
        for b in 0..x.dim {
            s += x.f(a, b, cc) * x.d(a, b, d);
        }
    }
    s
}

/// `Σ_ab t_abd Tr(T^a T^b T^c)` against `rhs(c, d)`.
fn triple_contraction(x: &Ctx, acc: &mut Acc, t: Kind, rhs: impl Fn(&Ctx, usize, usize) -> Complex64) {
    let g = gens(x);
    for d in 0..x.dim {
        // Σ_ab t_abd T^a T^b, then the trace against each T^c
        let mut s = CMatrix::zeros(x.n, x.n);
        for a in 0..x.dim {
            for b in 0..x.dim {
                let v = x.tensor(t).get(a, b, d);
                if v != 0.0 {
                    s.axpy(c(v), &mul(&g[a], &g[b]));
                }
            }
        }
        for cc in 0..x.dim {
            acc.scalar(tr(&mul(&s, &g[cc])), rhs(x, cc, d));
        }
    }
}

/// `Σ_ab t_abc T^a T^b = s T^c`.
fn defining_pair(x: &Ctx, acc: &mut Acc, t: Kind, s: Complex64) {
    let g = gens(x);
    for cc in 0..x.dim {
        let mut l = CMatrix::zeros(x.n, x.n);
        for a in 0..x.dim {
            for b in 0..x.dim {
                let v = x.tensor(t).get(a, b, cc);
                if v != 0.0 {
                    l.axpy(c(v), &mul(&g[a], &g[b]));
                }
            }
        }
        acc.matrix(&l, &g[cc].scale(s));
    }
}

/// `[X^a, Y^b] = i f_abc Z^c`.
fn adjoint_commutators(x: &Ctx, acc: &mut Acc, xk: Kind, yk: Kind, zk: Kind) {
    for a in 0..x.dim {
        for b in 0..x.dim {
            let l = commutator(x.mat(xk, a), x.mat(yk, b));
            acc.matrix(&l, &x.combine(F, a, b, adj(x, zk), ci(1.0)));
        }
    }
}

fn triple_trace(x: &Ctx, acc: &mut Acc, k: [Kind; 3], rhs: impl Fn(&Ctx, usize, usize, usize) -> Complex64) {
    for a in 0..x.dim {
        for b in 0..x.dim {
            let p = x.prod2(k[0], a, k[1], b);
            for cc in 0..x.dim {
                acc.scalar(x.sparse(k[2], cc).trace_with(&p), rhs(x, a, b, cc));
            }
        }
    }
}

/// `Tr(X^a Y^b Z^c) = d_ade (P^d Q^e)_bc`, or `_cb` when `transposed`.
fn trace_as_contraction(x: &Ctx, acc: &mut Acc, k: [Kind; 3], p: Kind, q: Kind, transposed: bool) {
    for a in 0..x.dim {
        let m = x.contract_pair(D, a, p, q);
        for b in 0..x.dim {
            let pr = x.prod2(k[0], a, k[1], b);
            for cc in 0..x.dim {
                let r = if transposed { m[(cc, b)] } else { m[(b, cc)] };
                acc.scalar(x.sparse(k[2], cc).trace_with(&pr), r);
            }
        }
    }
}
