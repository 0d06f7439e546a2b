//! Recursive solution of the generalized Nahm system
//!
//!   −8Φ′ = Q(Φ, Φ),   −2Ψ′ = Q(Φ, Ψ),
//!
//! with Φ = Σ Φ_n y^{−1−n/2} and Ψ = Σ Ψ_n y^{−1−n/2}. Order by order,
//!
//!   (1 + n/2)Φ_n − R_Φ Φ_n = Σ_{0<k<n} Q_o(Φ_k, Φ_{n−k}),
//!   (n + 2)Ψ_n − R_Ψ Ψ_n = Σ_{0<j≤n} Q(Φ_j, Ψ_{n−j}),
//!
//! where R_Φ T = Q_o(Φ₀,T) + Q_o(T,Φ₀), R_Ψ S = Q(Φ₀,S) and Q_o = Q/8. Both
//! operators are semisimple; their kernels at level n are
//! Hom(sl₂, g(n))^{−1} and Hom(U, g(n))^−, where the free data T_n and S_n
//! live.

use std::collections::BTreeMap;

use serde::Serialize;

use super::hom::{casimir_pairing, operator_matrix, HomMap, HomSpace, ModuleKind, Spectral};
use super::power::HalfPowerSeries;
use crate::error::{Error, Result};
use crate::linalg::{rat, solve_linear, ExactMatrix, Rational, Vector, GR};
use crate::mhs::{Frame, GlBigrading};
use crate::sl2::Sl2Triple;

/// Σ_n c_n y^{−1−n/2} with c_n ∈ Hom(M, gl(V)), known for n ≤ order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomSeries {
    pub kind: ModuleKind,
    pub dim: usize,
    pub terms: BTreeMap<u32, HomMap>,
    pub order: u32,
}

/// Φ: values on n₀, h, n₀⁺.
pub type HomSl2Series = HomSeries;
/// Ψ: values on e, f.
pub type HomUSeries = HomSeries;

impl HomSeries {
    pub fn zero(kind: ModuleKind, dim: usize, order: u32) -> Self {
        Self { kind, dim, terms: BTreeMap::new(), order }
    }

    pub fn term(&self, n: u32) -> HomMap {
        self.terms.get(&n).cloned().unwrap_or_else(|| HomMap::zero(self.kind, self.dim))
    }

    fn set(&mut self, n: u32, t: HomMap) {
        if t.is_zero() {
            self.terms.remove(&n);
        } else {
            self.terms.insert(n, t);
        }
    }

    /// The gl-valued series u ↦ Σ c_n(u) y^{−1−n/2} for u given by coordinates.
    pub fn value_series(&self, coords: &[GR]) -> HalfPowerSeries {
        let mut s = HalfPowerSeries::zero(self.dim, self.order as i32 + 2);
        for (n, t) in &self.terms {
            s.set(*n as i32 + 2, t.at(coords));
        }
        s
    }

    pub fn basis_series(&self, j: usize) -> HalfPowerSeries {
        let mut c = vec![GR::from_int(0); self.kind.rank()];
        c[j] = GR::from_int(1);
        self.value_series(&c)
    }
}

/// The free data of the recursions: T_n ∈ Hom(sl₂, g(n))^{−1} and
/// S_n ∈ Hom(U, g(n))^−.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FreeParameters {
    pub t: BTreeMap<u32, HomMap>,
    pub s: BTreeMap<u32, HomMap>,
}

impl FreeParameters {
    pub fn is_zero(&self) -> bool {
        self.t.values().chain(self.s.values()).all(|m| m.is_zero())
    }
}

/// Everything about Φ₀ = (N₀, H, N₀⁺) the recursions need, computed once.
#[derive(Clone, Debug)]
pub struct NahmSystem {
    pub triple: Sl2Triple,
    pub phi0: HomMap,
    /// gl bigrading of (F_o, W).
    pub gl: GlBigrading,
    pub sl2_space: HomSpace,
    pub u_space: HomSpace,
    phi_spec: Spectral,
    psi_spec: Spectral,
    h_frame: Frame,
    top: u32,
}

fn q_o(a: &HomMap, b: &HomMap) -> HomMap {
    casimir_pairing(a, b).scale(&GR::from_frac(1, 8))
}

impl NahmSystem {
    pub fn new(triple: &Sl2Triple, gl: GlBigrading) -> Result<Self> {
        let dim = triple.dim();
        let phi0 = HomMap::from_triple(triple);
        if q_o(&phi0, &phi0) != phi0 {
            return Err(Error::invariant("Phi_0 is not a fixed point of Q_o: the triple is not a representation"));
        }
        let sl2_space = HomSpace::new(ModuleKind::Sl2, triple)?;
        let u_space = HomSpace::new(ModuleKind::U, triple)?;
        let top = sl2_space.left.weights().into_iter().max().unwrap_or(0);
        // On Hom(M, g(r)) ∩ (diagonal weight w), Q(Φ₀,·) is
        // ½(r(r+2) − w(w+2) + Casimir(M)).
        let cands = |kind: ModuleKind, scale: Rational| {
            let mut out = Vec::new();
            for r in 0..=top as i64 {
                for w in (r - 2).max(0)..=r + 2 {
                    out.push(rat(r * (r + 2) - w * (w + 2) + kind.casimir(), 2) * &scale);
                }
            }
            out
        };
        let r_phi = operator_matrix(ModuleKind::Sl2, dim, |t| q_o(&phi0, t).add(&q_o(t, &phi0)));
        let phi_spec = Spectral::new(&r_phi, cands(ModuleKind::Sl2, rat(1, 4)))?;
        let r_psi = operator_matrix(ModuleKind::U, dim, |s| casimir_pairing(&phi0, s));
        let psi_spec = Spectral::new(&r_psi, cands(ModuleKind::U, rat(1, 1)))?;
        let h_frame = triple.h_grading()?.frame();
        Ok(Self { triple: triple.clone(), phi0, gl, sl2_space, u_space, phi_spec, psi_spec, h_frame, top })
    }

    pub fn dim(&self) -> usize {
        self.triple.dim()
    }

    /// Largest r with g(r) ≠ 0.
    pub fn top_weight(&self) -> u32 {
        self.top
    }

    /// The matrix of R_Ψ = Q(Φ₀,·) restricted to Hom(U, g(n)), with its
    /// eigenvalue multiplicities.
    pub fn psi_spectrum_on(&self, n: u32) -> Result<BTreeMap<Rational, usize>> {
        let basis = self.u_space.left.component(n).basis().to_vec();
        let dim = self.dim();
        let images: Vec<Vector> =
            basis.iter().map(|b| casimir_pairing(&self.phi0, &HomMap::from_vec(ModuleKind::U, dim, b)).to_vec()).collect();
        let m = basis.len();
        let mut restricted = ExactMatrix::zeros(m, m);
        for (j, img) in images.iter().enumerate() {
            let c = crate::linalg::Subspace::coefficients_in(&basis, img)
                .ok_or_else(|| Error::invariant("R does not preserve Hom(U, g(n))"))?;
            for i in 0..m {
                restricted[(i, j)] = c[i].clone();
            }
        }
        let n = n as i64;
        Ok(Spectral::new(&restricted, (-2 * n - 4..=2 * n + 4).map(|k| rat(k, 1)))?.multiplicities())
    }

    /// Hom(sl₂, g(n))^{−1}: the kernel of (1 + n/2) − R_Φ.
    pub fn t_space(&self, n: u32) -> crate::linalg::Subspace {
        self.phi_spec.eigenspace(&rat(n as i64 + 2, 2))
    }

    /// Hom(U, g(n))^−: the kernel of (n + 2) − R_Ψ.
    pub fn s_space(&self, n: u32) -> crate::linalg::Subspace {
        self.psi_spec.eigenspace(&rat(n as i64 + 2, 1))
    }

    /// Whether a map out of M is a morphism of Hodge structures into gl(V)
    /// with the bigrading at F_o.
    pub fn is_hodge_morphism(&self, t: &HomMap) -> bool {
        t.kind.hodge_basis().iter().all(|(c, (p, q))| self.gl.frame.lies_in(&t.at(c), |r, s| (r, s) == (*p, *q)))
    }

    /// The unique Hodge morphism T in Hom(sl₂, g(n))^{−1} (j = 0) or
    /// S in Hom(U, g(n))^− (j = −1) whose value on n₀, resp. f, has
    /// ad H-weight −n part equal to the lowest weight vector `eta`.
    pub fn parameter_from_lowest(&self, kind: ModuleKind, n: u32, eta: &ExactMatrix) -> Result<HomMap> {
        let dim = self.dim();
        let (space, w, probe) = match kind {
            ModuleKind::Sl2 => (&self.sl2_space, n.checked_sub(2), vec![GR::from_int(1), GR::from_int(0), GR::from_int(0)]),
            ModuleKind::U => (&self.u_space, n.checked_sub(1), vec![GR::from_int(0), GR::from_int(1)]),
        };
        let w = w.ok_or_else(|| Error::invariant(format!("no free parameter at level {}", n)))?;
        let proj = space.projector(n, w);
        let len = space.flat_len();
        let hb = kind.hodge_basis();
        let frame = &self.gl.frame;
        let linear = |x: &[GR]| -> Vector {
            let t = HomMap::from_vec(kind, dim, x);
            let mut out: Vector = crate::linalg::vec_sub(x, &proj.apply(x));
            for (c, (p, q)) in &hb {
                let v = frame.to_frame(&t.at(c));
                for i in 0..dim {
                    for j in 0..dim {
                        if frame.entry_type(i, j) != (*p, *q) {
                            out.push(v[(i, j)].clone());
                        }
                    }
                }
            }
            out.extend(self.h_frame.ad_component(&t.at(&probe), -(n as i32)).to_vec());
            out
        };
        let cols: Vec<Vector> = (0..len)
            .map(|i| {
                let mut v = vec![GR::from_int(0); len];
                v[i] = GR::from_int(1);
                linear(&v)
            })
            .collect();
        let a = ExactMatrix::from_columns(&cols);
        let mut rhs = vec![GR::from_int(0); a.rows() - dim * dim];
        rhs.extend(eta.to_vec());
        let (sol, ker) = solve_linear(&a, &rhs);
        let sol = sol.ok_or_else(|| Error::invariant(format!("no Hodge morphism at level {} has the given lowest weight part", n)))?;
        if !ker.is_empty() {
            return Err(Error::invariant(format!("the lowest weight part does not determine the parameter at level {}", n)));
        }
        Ok(HomMap::from_vec(kind, dim, &sol))
    }

    /// [T(n₀)]^{ad H}_{−n} or [S(f)]^{ad H}_{−n}.
    pub fn lowest_part(&self, t: &HomMap, n: u32) -> ExactMatrix {
        let v = match t.kind {
            ModuleKind::Sl2 => &t.values[0],
            ModuleKind::U => &t.values[1],
        };
        self.h_frame.ad_component(v, -(n as i32))
    }

    pub fn h_frame(&self) -> &Frame {
        &self.h_frame
    }
}

/// Φ_n for n ≤ n_max with Φ_n^{n,−1} = T_n.
pub fn phi_recursion(sys: &NahmSystem, t: &BTreeMap<u32, HomMap>, n_max: u32) -> Result<HomSl2Series> {
    let dim = sys.dim();
    let mut phi = HomSeries::zero(ModuleKind::Sl2, dim, n_max);
    phi.set(0, sys.phi0.clone());
    for n in 1..=n_max {
        let mut rhs = HomMap::zero(ModuleKind::Sl2, dim);
        for k in 1..n {
            rhs = rhs.add(&q_o(&phi.term(k), &phi.term(n - k)));
        }
        let c = rat(n as i64 + 2, 2);
        let (x, kpart) = sys.phi_spec.solve_shifted(&c, &rhs.to_vec());
        if !crate::linalg::vec_is_zero(&kpart) {
            return Err(Error::invariant(format!(
                "compatibility condition fails at order {}: the right side has a component in Hom(sl2, g({}))^-1",
                n, n
            )));
        }
        let mut phi_n = HomMap::from_vec(ModuleKind::Sl2, dim, &x);
        if let Some(tn) = t.get(&n) {
            if !sys.t_space(n).contains(&tn.to_vec()) {
                return Err(Error::invalid(format!("T_{} does not lie in Hom(sl2, g({}))^-1", n, n)));
            }
            phi_n = phi_n.add(tn);
        }
        phi.set(n, phi_n);
    }
    check_phi_shape(sys, &phi)?;
    Ok(phi)
}

fn check_phi_shape(sys: &NahmSystem, phi: &HomSeries) -> Result<()> {
    if !phi.term(1).is_zero() {
        return Err(Error::invariant("Phi_1 != 0"));
    }
    for (n, t) in phi.terms.range(1..) {
        for r in sys.sl2_space.left.weights() {
            let part = sys.sl2_space.project_left(r, t);
            if part.is_zero() {
                continue;
            }
            if r > *n || (n - r) % 2 != 0 {
                return Err(Error::invariant(format!("Phi_{} has a component in Hom(sl2, g({}))", n, r)));
            }
            if r == *n {
                for w in [*n, *n + 2] {
                    if !sys.sl2_space.project_map(r, w, t).is_zero() {
                        return Err(Error::invariant(format!("Phi_{} has a nonzero component of diagonal weight {}", n, w)));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Ψ_n for n ≤ n_max with Ψ⁻_{n,n} = S_n; Ψ₀ = 0.
pub fn psi_recursion(sys: &NahmSystem, phi: &HomSl2Series, s: &BTreeMap<u32, HomMap>, n_max: u32) -> Result<HomUSeries> {
    let dim = sys.dim();
    if phi.order < n_max {
        return Err(Error::invariant("Phi is not known to the requested order"));
    }
    let mut psi = HomSeries::zero(ModuleKind::U, dim, n_max);
    for n in 0..=n_max {
        let mut rhs = HomMap::zero(ModuleKind::U, dim);
        for j in 1..=n {
            rhs = rhs.add(&casimir_pairing(&phi.term(j), &psi.term(n - j)));
        }
        let c = rat(n as i64 + 2, 1);
        let (x, kpart) = sys.psi_spec.solve_shifted(&c, &rhs.to_vec());
        if !crate::linalg::vec_is_zero(&kpart) {
            return Err(Error::invariant(format!(
                "compatibility condition fails at order {}: the right side has a component in Hom(U, g({}))^-",
                n, n
            )));
        }
        let mut psi_n = HomMap::from_vec(ModuleKind::U, dim, &x);
        if let Some(sn) = s.get(&n) {
            if !sys.s_space(n).contains(&sn.to_vec()) {
                return Err(Error::invalid(format!("S_{} does not lie in Hom(U, g({}))^-", n, n)));
            }
            psi_n = psi_n.add(sn);
        }
        psi.set(n, psi_n);
    }
    if !psi.term(0).is_zero() {
        return Err(Error::invariant("Psi_0 != 0"));
    }
    for (n, t) in &psi.terms {
        for r in sys.u_space.left.weights() {
            let part = sys.u_space.project_left(r, t);
            if part.is_zero() {
                continue;
            }
            if r > *n || (n - r) % 2 != 0 {
                return Err(Error::invariant(format!("Psi_{} has a component in Hom(U, g({}))", n, r)));
            }
            if r == *n && !sys.u_space.project_map(r, r + 1, t).is_zero() {
                return Err(Error::invariant(format!("Psi_{} has a nonzero + component at the top", n)));
            }
        }
    }
    Ok(psi)
}

/// Coefficients of −8Φ′ − Q(Φ,Φ) (index n: coefficient of y^{−2−n/2}),
/// for the orders where every contributing term is known.
pub fn phi_residual(phi: &HomSl2Series) -> BTreeMap<u32, HomMap> {
    let mut out = BTreeMap::new();
    for n in 0..=phi.order {
        let mut r = phi.term(n).scale(&GR::real(rat(8 * (n as i64 + 2), 2)));
        for k in 0..=n {
            r = r.add(&casimir_pairing(&phi.term(k), &phi.term(n - k)).scale(&GR::from_int(-1)));
        }
        out.insert(n, r);
    }
    out
}

/// Coefficients of −2Ψ′ − Q(Φ,Ψ).
pub fn psi_residual(phi: &HomSl2Series, psi: &HomUSeries) -> BTreeMap<u32, HomMap> {
    let mut out = BTreeMap::new();
    for n in 0..=psi.order.min(phi.order) {
        let mut r = psi.term(n).scale(&GR::from_int(n as i64 + 2));
        for k in 0..=n {
            r = r.add(&casimir_pairing(&phi.term(k), &psi.term(n - k)).scale(&GR::from_int(-1)));
        }
        out.insert(n, r);
    }
    out
}

/// Minimal D with ‖Ψ_n‖ ≤ Dⁿ (max_k ‖S_k‖)ⁿ over the computed range.
pub fn majorant(psi: &HomUSeries, s: &BTreeMap<u32, HomMap>) -> f64 {
    let m = s.values().map(|x| x.norm_f64()).fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    psi.terms
        .iter()
        .filter(|(n, _)| **n > 0)
        .map(|(n, t)| (t.norm_f64() / m.powi(*n as i32)).powf(1.0 / *n as f64))
        .fold(0.0, f64::max)
}
