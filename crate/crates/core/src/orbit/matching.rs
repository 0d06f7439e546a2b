//! Recovering (ζ, η) and the free parameters from δ by solving
//! e^{iδ} = e^ζ (1 + Σ_{k>0} (1/k!)(−i)^k (ad N₀)^k g_k) degree by degree in
//! the relY-weight.

use serde::Serialize;

use super::split::{split_orbit, SplitOrbit};
use crate::error::{Error, Result};
use crate::linalg::{kernel, solve_linear, ExactMatrix, Rational, Subspace, Vector, GR};
use crate::mhs::{deligne_bigrading, gl_bigrading, joint_frame, Frame, GlBigrading, MixedHodgeData};
use crate::series::{
    integrate_h, matching_factor, phi_recursion, psi_recursion, FreeParameters, GSeries, HomSl2Series, HomUSeries, ModuleKind,
    NahmSystem,
};

/// Newton steps allowed per degree before the degree counts as failed.
const STEPS_PER_DEGREE: usize = 4;

/// Everything derived from the input orbit that the matching and the
/// expansion share.
#[derive(Clone, Debug)]
pub struct OrbitContext {
    pub data: MixedHodgeData,
    pub split: SplitOrbit,
    pub sys: NahmSystem,
    /// gl bigrading of (F̂, relW).
    pub gl_hat: GlBigrading,
    /// Common eigenframe of relY and Y, labels (relY-weight, Y-weight).
    pub joint: Frame,
    /// Largest ad H eigenvalue.
    pub k_h: i32,
    /// Largest k with (ad N₀)^k ≠ 0; the matching factor is exact from here.
    pub k_match: u32,
}

impl OrbitContext {
    pub fn new(data: &MixedHodgeData) -> Result<Self> {
        let split = split_orbit(data)?;
        let gl = gl_bigrading(&deligne_bigrading(&split.f_o, &split.w)?);
        let sys = NahmSystem::new(&split.sl2.triple, gl)?;
        let gl_hat = gl_bigrading(&deligne_bigrading(&split.f_hat, &split.rel_w)?);
        let joint = joint_frame(&split.sl2.rel_y, &split.sl2.y)?;
        let k_h = crate::series::integrate::max_ad_weight(sys.h_frame());
        let n0 = &split.sl2.n0;
        let mut nu = 1;
        let mut p = n0.clone();
        while !p.is_zero() {
            p = &p * n0;
            nu += 1;
        }
        Ok(Self { data: data.clone(), split, sys, gl_hat, joint, k_h, k_match: 2 * nu - 2 })
    }

    pub fn dim(&self) -> usize {
        self.split.dim()
    }

    /// Largest relY-weight gap, the deepest degree δ can reach.
    pub fn max_degree(&self) -> i32 {
        let l = &self.joint.labels;
        let hi = l.iter().map(|x| x.0).max().unwrap_or(0);
        let lo = l.iter().map(|x| x.0).min().unwrap_or(0);
        hi - lo
    }

    /// Whether X ∈ Λ_{(F̂,relW)}.
    pub fn in_lambda(&self, x: &ExactMatrix) -> bool {
        self.gl_hat.frame.lies_in(x, |r, s| r < 0 && s < 0)
    }

    /// Real basis of X_{d,j}: elements of Lie(G) commuting with N₀ and
    /// N₋₂, lying in Λ_{(F̂,relW)}, of relY-weight −d and Y-weight j.
    pub fn x_space(&self, d: i32, j: i32) -> Vec<ExactMatrix> {
        let dim = self.dim();
        let cands = self.joint.basis_where(|a, b| a == -d && b == j);
        if cands.is_empty() {
            return Vec::new();
        }
        let n0 = &self.split.sl2.n0;
        let nm2 = &self.split.sl2.n_minus2;
        let y = &self.split.sl2.y;
        let constraints = |x: &ExactMatrix| -> Vector {
            let mut out = n0.commutator(x).to_vec();
            out.extend(nm2.commutator(x).to_vec());
            out.extend(self.gl_hat.frame.project(x, |r, s| !(r < 0 && s < 0)).to_vec());
            if j == 0 {
                for (k, e) in &y.eigenspaces {
                    for u in e.basis() {
                        let xu = x.apply(u);
                        for v in e.basis() {
                            let xv = x.apply(v);
                            out.push(self.data.q_form(*k, &xu, v) + self.data.q_form(*k, u, &xv));
                        }
                    }
                }
            }
            out
        };
        let a = ExactMatrix::from_columns(&cands.iter().map(&constraints).collect::<Vec<_>>());
        let combos: Vec<Vector> = kernel(&a)
            .into_iter()
            .map(|c| {
                cands.iter().zip(&c).fold(ExactMatrix::zeros(dim, dim), |acc, (m, x)| &acc + &m.scale(x)).to_vec()
            })
            .collect();
        let space = Subspace::span(dim * dim, combos);
        space
            .real_basis()
            .unwrap_or_else(|| space.basis().to_vec())
            .into_iter()
            .map(|v| ExactMatrix::from_vec(dim, dim, v))
            .collect()
    }

    /// The free parameters whose lowest weight parts add up to η: the
    /// (−d, 0) piece gives T_d and the (−d, −1) piece gives S_{d−1}.
    pub fn parameters(&self, eta: &ExactMatrix) -> Result<FreeParameters> {
        let mut params = FreeParameters::default();
        for (rel, yw) in self.joint.support(eta) {
            let piece = self.joint.component(eta, rel, yw);
            let d = -rel;
            match yw {
                0 if d >= 2 => {
                    params.t.insert(d as u32, self.sys.parameter_from_lowest(ModuleKind::Sl2, d as u32, &piece)?);
                }
                -1 if d >= 2 => {
                    params.s.insert(d as u32 - 1, self.sys.parameter_from_lowest(ModuleKind::U, d as u32 - 1, &piece)?);
                }
                _ => {
                    return Err(Error::invariant(format!("eta has a component of relY-weight {} and Y-weight {}", rel, yw)))
                }
            }
        }
        Ok(params)
    }

    /// Φ and Ψ to at least `min_order` and to the order integration to k
    /// needs, and the g-series.
    pub fn series(&self, params: &FreeParameters, k: u32, min_order: u32) -> Result<(HomSl2Series, HomUSeries, GSeries)> {
        let top = params.t.keys().chain(params.s.keys()).max().copied().unwrap_or(0);
        let order = (2 * k + self.k_h as u32).max(top).max(min_order);
        let phi = phi_recursion(&self.sys, &params.t, order)?;
        let psi = psi_recursion(&self.sys, &phi, &params.s, order)?;
        let gs = integrate_h(&phi, &psi, &self.sys.triple.h, self.sys.h_frame(), k)?;
        Ok((phi, psi, gs))
    }

    /// 1 + Σ (1/k!)(−i)^k (ad N₀)^k g_k for the parameters of η.
    pub fn matching_factor(&self, eta: &ExactMatrix) -> Result<ExactMatrix> {
        let params = self.parameters(eta)?;
        let (_, _, gs) = self.series(&params, self.k_match, 0)?;
        Ok(matching_factor(&gs, &self.split.sl2.n0))
    }
}

/// ζ, η and the parameters they determine.
#[derive(Clone, Debug, Serialize)]
pub struct Matching {
    pub zeta: ExactMatrix,
    pub eta: ExactMatrix,
    pub params: FreeParameters,
    /// Degrees at which the linear step had a kernel, with its dimension.
    pub ambiguous_degrees: Vec<(i32, usize)>,
}

fn split_re_im(m: &ExactMatrix) -> Vector {
    let e = m.entries();
    e.iter().map(|x| GR::real(x.re.clone())).chain(e.iter().map(|x| GR::real(x.im.clone()))).collect()
}

/// Real coefficients c with Σ c_i cols_i = target, and the kernel dimension.
fn real_solve(cols: &[ExactMatrix], target: &ExactMatrix) -> Option<(Vec<Rational>, usize)> {
    if cols.is_empty() {
        return target.is_zero().then(|| (Vec::new(), 0));
    }
    let a = ExactMatrix::from_columns(&cols.iter().map(split_re_im).collect::<Vec<_>>());
    let (sol, ker) = solve_linear(&a, &split_re_im(target));
    sol.map(|s| (s.into_iter().map(|x| x.re).collect(), ker.len()))
}

fn combine(basis: &[ExactMatrix], coeffs: &[Rational], dim: usize) -> ExactMatrix {
    basis.iter().zip(coeffs).fold(ExactMatrix::zeros(dim, dim), |acc, (m, c)| &acc + &m.scale_q(c))
}

/// log(e^{−ζ} e^{iδ} LHS(η)^{−1}).
fn residual(ctx: &OrbitContext, target: &ExactMatrix, zeta: &ExactMatrix, eta: &ExactMatrix) -> Result<ExactMatrix> {
    let lhs = ctx.matching_factor(eta)?;
    let inv = lhs.inverse().ok_or_else(|| Error::invariant("matching factor is not invertible"))?;
    Ok((&(&(-zeta).exp_nilpotent() * target) * &inv).log_unipotent())
}

/// Solves e^{iδ} = e^ζ LHS(η) with ζ ∈ X_{·,0} ⊕ X_{·,−1} ⊕ ℂX_{·,−2} and
/// η ∈ X_{·,0} ⊕ X_{·,−1}, using parameters of level at most `n_max`.
pub fn match_parameters(ctx: &OrbitContext, n_max: u32) -> Result<Matching> {
    let dim = ctx.dim();
    let target = ctx.split.delta.scale(&GR::i()).exp_nilpotent();
    let rel = ctx.split.sl2.rel_y.frame();
    let mut zeta = ExactMatrix::zeros(dim, dim);
    let mut eta = ExactMatrix::zeros(dim, dim);
    let mut ambiguous_degrees = Vec::new();
    let fail = |d: i32| Error::invariant(format!("no solution within n_max = {} (first failing degree {})", n_max, d));
    for d in 2..=ctx.max_degree() {
        let mut zc = ctx.x_space(d, 0);
        zc.extend(ctx.x_space(d, -1));
        let x2 = ctx.x_space(d, -2);
        zc.extend(x2.iter().map(|x| x.scale(&GR::i())));
        zc.extend(x2);
        let mut ec = Vec::new();
        if d as u32 <= n_max {
            ec.extend(ctx.x_space(d, 0));
        }
        if d as u32 - 1 <= n_max {
            ec.extend(ctx.x_space(d, -1));
        }
        let mut images = Vec::with_capacity(ec.len());
        for v in &ec {
            images.push(rel.ad_component(&ctx.matching_factor(v)?.log_unipotent(), -d));
        }
        let mut cols = zc.clone();
        cols.extend(images);
        for step in 0..=STEPS_PER_DEGREE {
            let r = residual(ctx, &target, &zeta, &eta)?;
            let rd = rel.ad_component(&r, -d);
            if rd.is_zero() {
                break;
            }
            if step == STEPS_PER_DEGREE {
                return Err(fail(d));
            }
            let (c, ker) = real_solve(&cols, &rd).ok_or_else(|| fail(d))?;
            if ker > 0 && step == 0 {
                ambiguous_degrees.push((d, ker));
            }
            let dz = combine(&zc, &c[..zc.len()], dim);
            let de = combine(&ec, &c[zc.len()..], dim);
            // e^{−ζ} e^{iδ} LHS^{−1} = e^{R}: adding the degree −d solution to
            // ζ and η removes R_{−d} up to terms of lower degree.
            zeta = &zeta + &dz;
            eta = &eta + &de;
        }
    }
    let check = &zeta.exp_nilpotent() * &ctx.matching_factor(&eta)?;
    if check != target {
        let r = residual(ctx, &target, &zeta, &eta)?;
        let d = rel.support(&r).into_iter().map(|(w, _)| -w).min().unwrap_or(0);
        return Err(fail(d));
    }
    let params = ctx.parameters(&eta)?;
    Ok(Matching { zeta, eta, params, ambiguous_degrees })
}
