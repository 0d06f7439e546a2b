//! Archimedean height asymptotics for variations with weights 0, −1, −2:
//! the slope μ with h(s) = −μ log|s| + O(1), its dependence on the
//! exponents of a test curve, and detection of height jumping.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::filtrations::{monodromy_weight_filtration, MonodromyCone};
use crate::linalg::{rat, rat_to_f64, solve_linear, vec_is_zero, ExactMatrix, Rational, Subspace, Vector, GR};
use crate::mhs::{delta_splitting, mixed_hodge_metric, Grading, IncreasingFiltration, MixedHodgeData};

/// W with Gr₀ = ⟨1⟩, Gr₋₂ = ⟨1′⟩, and the cone spanned by the nilpotents.
#[derive(Clone, Debug)]
pub struct HeightProblem {
    pub data: MixedHodgeData,
    pub w: IncreasingFiltration,
    pub cone: MonodromyCone,
    pub gen_one: Vector,
    pub gen_one_prime: Vector,
    pub tag: Option<String>,
    /// Grading of W by the declared weight basis.
    base_grading: Grading,
}

impl HeightProblem {
    pub fn from_data(data: &MixedHodgeData) -> Result<Self> {
        let hb = data.height.as_ref().ok_or_else(|| Error::invalid("problem has no height block"))?;
        let weights = data.w.weights();
        if weights.iter().any(|k| !(-2..=0).contains(k)) {
            return Err(Error::unsupported(format!("height problems need weights in {{0, -1, -2}}, found {:?}", weights)));
        }
        for k in [0, -2] {
            if data.w.gr_dim(k) != 1 {
                return Err(Error::invalid(format!("Gr^W_{} must be one-dimensional", k)));
            }
        }
        if !data.w.get(0).contains(&hb.gen_one) || data.w.get(-1).contains(&hb.gen_one) {
            return Err(Error::invalid("gen_one must lie in W_0 and not in W_-1"));
        }
        let w2 = data.w.get(-2);
        if !w2.contains(&hb.gen_one_prime) || vec_is_zero(&hb.gen_one_prime) {
            return Err(Error::invalid("gen_one_prime must span W_-2"));
        }
        let cone = MonodromyCone::new(data.nilpotents.iter().map(|n| n.matrix.clone()).collect())?;
        let base_grading = Grading::from_eigenvectors(data.dim, data.weight_basis.clone());
        Ok(Self {
            data: data.clone(),
            w: data.w.clone(),
            cone,
            gen_one: hb.gen_one.clone(),
            gen_one_prime: hb.gen_one_prime.clone(),
            tag: hb.tag.clone(),
            base_grading,
        })
    }

    pub fn rank(&self) -> usize {
        self.cone.generators().len()
    }

    pub fn dim(&self) -> usize {
        self.data.dim
    }

    /// Σ a_j N_j.
    pub fn monodromy(&self, a: &[i64]) -> Result<ExactMatrix> {
        self.cone.element(&a.iter().map(|x| rat(*x, 1)).collect::<Vec<_>>())
    }

    /// x with X(1) = x·1′, if X(1) ∈ ⟨1′⟩.
    fn coefficient_on_one_prime(&self, x: &ExactMatrix) -> Result<Rational> {
        let img = x.apply(&self.gen_one);
        let c = Subspace::coefficients_in(&[self.gen_one_prime.clone()], &img)
            .ok_or_else(|| Error::invariant("image of 1 does not lie in W_-2"))?;
        if !c[0].is_real() {
            return Err(Error::invariant("mu is not real"));
        }
        Ok(c[0].re.clone())
    }
}

/// Gradings Y′ = Y₀ + α, α ∈ Lie₋₁(W), with [Y′, N_j] lowering W by 2 for
/// every N_j given: a particular solution and directions of freedom.
pub fn good_gradings(p: &HeightProblem, ns: &[ExactMatrix]) -> Option<(ExactMatrix, Vec<ExactMatrix>)> {
    let dim = p.dim();
    let y0 = &p.base_grading.y;
    let frame = p.base_grading.frame();
    let lie_minus_one = frame.basis_where(|r, _| r <= -1);
    // Components of [Y′, N] of W-degree above −2 must vanish.
    let high = |x: &ExactMatrix| frame.project(x, |r, _| r > -2).to_vec();
    let cols: Vec<Vector> = lie_minus_one.iter().map(|a| ns.iter().flat_map(|n| high(&a.commutator(n))).collect()).collect();
    let rhs: Vector = ns.iter().flat_map(|n| high(&y0.commutator(n))).map(|x| -x).collect();
    if lie_minus_one.is_empty() {
        return vec_is_zero(&rhs).then(|| (y0.clone(), Vec::new()));
    }
    let (sol, ker) = solve_linear(&ExactMatrix::from_columns(&cols), &rhs);
    let combine = |c: &[GR]| lie_minus_one.iter().zip(c).fold(ExactMatrix::zeros(dim, dim), |acc, (m, x)| &acc + &m.scale(x));
    let sol = sol?;
    Some((y0 + &combine(&sol), ker.iter().map(|k| combine(k)).collect()))
}

/// μ with (−½[Y′,N])(1) = μ·1′ for a grading Y′ such that [Y′,N] lowers W
/// by 2. The value is checked to be the same along every direction of
/// freedom in Y′.
pub fn mu_single(p: &HeightProblem, n: &ExactMatrix) -> Result<Rational> {
    let (y, freedom) =
        good_gradings(p, std::slice::from_ref(n)).ok_or_else(|| Error::invariant("no grading Y' with [Y',N] lowering W by 2"))?;
    let half = rat(-1, 2);
    let mu = p.coefficient_on_one_prime(&y.commutator(n).scale_q(&half))?;
    for dir in &freedom {
        let other = &y + dir;
        if p.coefficient_on_one_prime(&other.commutator(n).scale_q(&half))? != mu {
            return Err(Error::invariant("mu depends on the choice of grading Y'"));
        }
    }
    Ok(mu)
}

/// μ along the curve s_j = t^{a_j} f_j(t), a_j > 0. Falls back to the
/// Deligne grading of the orbit when no good grading is found, and checks
/// μ_{2a} = 2μ_a.
pub fn mu_curve(p: &HeightProblem, a: &[i64]) -> Result<Rational> {
    if a.len() != p.rank() {
        return Err(Error::invalid(format!("expected {} exponents, got {}", p.rank(), a.len())));
    }
    if a.iter().any(|x| *x <= 0) {
        return Err(Error::invalid("exponents must be positive"));
    }
    let n = p.monodromy(a)?;
    let mu = match mu_single(p, &n) {
        Ok(mu) => mu,
        Err(_) => mu_from_orbit(p, a)?,
    };
    let doubled: Vec<i64> = a.iter().map(|x| 2 * x).collect();
    if mu_single(p, &p.monodromy(&doubled)?)? != &mu * rat(2, 1) {
        return Err(Error::invariant("mu is not homogeneous of degree one"));
    }
    Ok(mu)
}

/// μ from N₋₂ of the sl₂-data of the orbit with monodromy Σ a_j N_j.
fn mu_from_orbit(p: &HeightProblem, a: &[i64]) -> Result<Rational> {
    let mut d = p.data.clone();
    for (nil, x) in d.nilpotents.iter_mut().zip(a) {
        nil.matrix = nil.matrix.scale(&GR::from_int(*x));
    }
    let s = crate::orbit::split_orbit(&d)?;
    p.coefficient_on_one_prime(&s.sl2.n_minus2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum JumpVerdict {
    Jumps,
    NoJumps,
    Inconclusive,
}

impl std::fmt::Display for JumpVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            JumpVerdict::Jumps => "jumps",
            JumpVerdict::NoJumps => "no-jumps",
            JumpVerdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MuSample {
    pub a: Vec<i64>,
    #[serde(serialize_with = "crate::linalg::ser_rational")]
    pub mu: Rational,
    /// Σ a_j μ(e_j).
    #[serde(serialize_with = "crate::linalg::ser_rational")]
    pub linear: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct JumpReport {
    /// dim Gr^{W′}_k of the monodromy filtration of Σ N_j on Gr^W₋₁,
    /// centered at 0.
    pub w_prime_dims: BTreeMap<i32, usize>,
    /// dim Gr^{W′}₋₁ = dim Gr^{W′}₋₃.
    pub balanced: bool,
    /// N′ : Gr^{W′}₋₁ → Gr^{W′}₋₃ injective.
    pub injective: bool,
    /// Σ N_j acts trivially on Gr^W₋₁.
    pub trivial_graded_monodromy: bool,
    /// A single grading Y with [Y, N_j](W₀) ⊆ W₋₂ for all j.
    pub certificate: Option<ExactMatrix>,
    pub samples: Vec<MuSample>,
    pub linear_on_samples: bool,
    /// With a certificate: μ_a = −½[Y, Σ a_j N_j](1_Y)/1′ on every sample.
    pub certificate_agrees: Option<bool>,
    /// The sufficient criteria never claim "no jumps" when the samples jump.
    pub criteria_consistent: bool,
    pub verdict: JumpVerdict,
    pub note: String,
}

/// W₀/W₋₂ coordinates of v: its Gr₀ and Gr₋₁ components.
fn mod_w_minus2(data: &MixedHodgeData, v: &[GR]) -> Vector {
    let mut c = data.gr_coords(0, v);
    c.extend(data.gr_coords(-1, v));
    c
}

/// A grading Y of W with [Y, N_j](W₀) ⊆ W₋₂ for every j. Since Y acts by
/// scalars on Gr^W, the condition only needs checking on a lift of 1.
pub fn common_grading(p: &HeightProblem) -> Result<Option<ExactMatrix>> {
    let dim = p.dim();
    let y0 = &p.base_grading.y;
    let alphas = p.base_grading.frame().basis_where(|r, _| r <= -1);
    let gens = p.cone.generators();
    let at_one = |x: &ExactMatrix| -> Vector {
        gens.iter().flat_map(|n| mod_w_minus2(&p.data, &x.commutator(n).apply(&p.gen_one))).collect()
    };
    let rhs: Vector = at_one(y0).into_iter().map(|x| -x).collect();
    if vec_is_zero(&rhs) {
        return Ok(Some(y0.clone()));
    }
    if alphas.is_empty() {
        return Ok(None);
    }
    let cols: Vec<Vector> = alphas.iter().map(at_one).collect();
    let Some(sol) = solve_linear(&ExactMatrix::from_columns(&cols), &rhs).0 else { return Ok(None) };
    let alpha = alphas.iter().zip(&sol).fold(ExactMatrix::zeros(dim, dim), |acc, (m, x)| &acc + &m.scale(x));
    Ok(Some(y0 + &alpha))
}

/// −½[Y, N](1_Y)/1′, with 1_Y the lift of 1 in the 0-eigenspace of Y.
pub fn mu_from_grading(p: &HeightProblem, y: &ExactMatrix, n: &ExactMatrix) -> Result<Rational> {
    let g = Grading::from_matrix(y, [0, -1, -2])?;
    let e0 = g.eigenspace(0);
    let u = e0.basis().first().ok_or_else(|| Error::invariant("grading has no weight 0 part"))?;
    let scale = p.data.gr_coords(0, &p.gen_one)[0].clone() / p.data.gr_coords(0, u)[0].clone();
    let lift: Vector = u.iter().map(|x| x * &scale).collect();
    let img = y.commutator(n).scale_q(&rat(-1, 2)).apply(&lift);
    let c = Subspace::coefficients_in(&[p.gen_one_prime.clone()], &img)
        .ok_or_else(|| Error::invariant("image of 1 does not lie in W_-2"))?;
    if !c[0].is_real() {
        return Err(Error::invariant("mu is not real"));
    }
    Ok(c[0].re.clone())
}

fn graded_matrix(data: &MixedHodgeData, n: &ExactMatrix, k: i32) -> ExactMatrix {
    let basis = data.weight_basis.get(&k).cloned().unwrap_or_default();
    let cols: Vec<Vector> = basis.iter().map(|v| data.gr_coords(k, &n.apply(v))).collect();
    ExactMatrix::from_columns(&cols)
}

/// Whether N maps Gr^M_{−1} → Gr^M_{−3} injectively.
fn injective_on_minus_one(n: &ExactMatrix, m: &IncreasingFiltration) -> Result<bool> {
    let target = m.get(-4);
    let pre = Subspace::preimage(n, &target).intersect(&m.get(-1))?;
    Ok(pre.is_subspace_of(&m.get(-2)))
}

fn sample_exponents(r: usize) -> Vec<Vec<i64>> {
    let unit = |i: usize| (0..r).map(|j| (i == j) as i64).collect::<Vec<_>>();
    let mut out: Vec<Vec<i64>> = (0..r).map(unit).collect();
    for i in 0..r {
        for j in i + 1..r {
            let s: Vec<i64> = (0..r).map(|k| (k == i || k == j) as i64).collect();
            out.push(s);
        }
    }
    for i in 0..r {
        for j in 0..r {
            let s: Vec<i64> = (0..r).map(|k| (k == i) as i64 + (k == j) as i64).collect();
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

pub fn jump_detect(p: &HeightProblem) -> Result<JumpReport> {
    let r = p.rank();
    let total = p.monodromy(&vec![1; r])?;
    let n_gr = graded_matrix(&p.data, &total, -1);
    let (w_prime_dims, injective) = if n_gr.rows() == 0 {
        (BTreeMap::new(), true)
    } else {
        let m = monodromy_weight_filtration(&n_gr, 0)?;
        let dims = m.weights().into_iter().map(|k| (k, m.gr_dim(k))).filter(|(_, d)| *d > 0).collect();
        (dims, injective_on_minus_one(&n_gr, &m)?)
    };
    let gr = |k: i32| w_prime_dims.get(&k).copied().unwrap_or(0);
    let balanced = gr(-1) == gr(-3);
    let trivial_graded_monodromy = n_gr.is_zero();
    let certificate = common_grading(p)?;

    let units: Vec<Rational> = (0..r)
        .map(|i| mu_single(p, &p.cone.generators()[i].clone()))
        .collect::<Result<_>>()?;
    let mut samples = Vec::new();
    for a in sample_exponents(r) {
        let mu = mu_single(p, &p.monodromy(&a)?)?;
        let linear = a.iter().zip(&units).fold(rat(0, 1), |acc, (x, m)| acc + m * rat(*x, 1));
        samples.push(MuSample { a, mu, linear });
    }
    let linear_on_samples = samples.iter().all(|s| s.mu == s.linear);
    let certificate_agrees = match &certificate {
        Some(y) => {
            let mut ok = true;
            for s in &samples {
                ok &= mu_from_grading(p, y, &p.monodromy(&s.a)?)? == s.mu;
            }
            Some(ok)
        }
        None => None,
    };
    let claims_no_jumps = balanced || injective || trivial_graded_monodromy;
    let criteria_consistent = !(claims_no_jumps && !linear_on_samples);
    let verdict = if !linear_on_samples {
        JumpVerdict::Jumps
    } else if certificate.is_some() {
        JumpVerdict::NoJumps
    } else {
        JumpVerdict::Inconclusive
    };
    Ok(JumpReport {
        w_prime_dims,
        balanced,
        injective,
        trivial_graded_monodromy,
        certificate,
        samples,
        linear_on_samples,
        certificate_agrees,
        criteria_consistent,
        verdict,
        note: "dim Gr^W'_-1 = dim Gr^W'_-3 is used as a sufficient condition for a common good grading, \
               hence for the absence of jumps"
            .to_string(),
    })
}

/// Squared height 4π²‖δ‖² of a single mixed Hodge structure, with ‖δ‖
/// measured in its own mixed Hodge metric.
#[derive(Clone, Debug, Serialize)]
pub struct MhsHeight {
    #[serde(serialize_with = "crate::linalg::ser_rational")]
    pub delta_norm_sq: Rational,
    /// h(M)²/π² = 4‖δ‖².
    #[serde(serialize_with = "crate::linalg::ser_rational")]
    pub height_sq_over_pi_sq: Rational,
    pub height: f64,
}

pub fn height_of_mhs(data: &MixedHodgeData) -> Result<MhsHeight> {
    let split = delta_splitting(&data.f, &data.w)?;
    let metric = mixed_hodge_metric(data, &data.f)?;
    let delta_norm_sq = metric.gl_norm_sq(&split.delta);
    let height_sq_over_pi_sq = &delta_norm_sq * rat(4, 1);
    let height = std::f64::consts::PI * rat_to_f64(&height_sq_over_pi_sq).sqrt();
    Ok(MhsHeight { delta_norm_sq, height_sq_over_pi_sq, height })
}

/// The two-parameter height ((log|s₁/s₂|)² − (log|s₁s₂|)²)/log|s₁s₂| of
/// the fixture tagged "example538", from l_j = log|s_j|.
pub fn closed_form_538(l1: f64, l2: f64) -> f64 {
    ((l1 - l2).powi(2) - (l1 + l2).powi(2)) / (l1 + l2)
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoteRow {
    pub s: f64,
    /// −μ log|s|.
    pub asymptote: f64,
    /// Exact height along s_j = s^{a_j} when the problem has a closed form.
    pub closed_form: Option<f64>,
}

/// Rows (|s|, −μ_a log|s|) along s_j = s^{a_j}.
pub fn asymptote_table(p: &HeightProblem, a: &[i64], s_samples: &[f64]) -> Result<Vec<AsymptoteRow>> {
    let mu = rat_to_f64(&mu_curve(p, a)?);
    let closed = p.tag.as_deref() == Some("example538") && a.len() == 2;
    s_samples
        .iter()
        .map(|&s| {
            if !(s > 0.0 && s < 1.0) {
                return Err(Error::invalid(format!("sample |s| = {} is outside (0, 1)", s)));
            }
            let l = s.ln();
            Ok(AsymptoteRow {
                s,
                asymptote: -mu * l,
                closed_form: closed.then(|| closed_form_538(a[0] as f64 * l, a[1] as f64 * l)),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::load;

    fn problem(name: &str) -> HeightProblem {
        HeightProblem::from_data(&load(name).unwrap()).unwrap()
    }

    #[test]
    fn example538_mu_is_harmonic() {
        let p = problem("example538");
        for (a1, a2) in [(1, 1), (1, 2), (2, 3)] {
            assert_eq!(mu_curve(&p, &[a1, a2]).unwrap(), rat(4 * a1 * a2, a1 + a2));
        }
    }

    #[test]
    fn example540_mu_is_linear() {
        let p = problem("example540");
        for (a1, a2) in [(1, 1), (1, 2), (2, 3)] {
            assert_eq!(mu_curve(&p, &[a1, a2]).unwrap(), rat(a1 + a2, 1));
        }
    }

    #[test]
    fn zero_monodromy_has_zero_mu() {
        let p = problem("example538");
        assert_eq!(mu_single(&p, &ExactMatrix::zeros(4, 4)).unwrap(), rat(0, 1));
    }

    #[test]
    fn jump_verdicts() {
        let j = jump_detect(&problem("example538")).unwrap();
        assert_eq!(j.verdict, JumpVerdict::Jumps);
        assert!(j.certificate.is_none() && !j.balanced && !j.injective);
        let j = jump_detect(&problem("example540")).unwrap();
        assert_eq!(j.verdict, JumpVerdict::NoJumps);
        assert_eq!(j.certificate_agrees, Some(true));
    }

    #[test]
    fn exponents_must_be_positive() {
        assert!(mu_curve(&problem("example538"), &[0, 1]).is_err());
    }

    #[test]
    fn split_mhs_has_zero_height() {
        let h = height_of_mhs(&load("split").unwrap()).unwrap();
        assert_eq!(h.delta_norm_sq, rat(0, 1));
    }

    #[test]
    fn closed_form_along_the_diagonal() {
        let p = problem("example538");
        for row in asymptote_table(&p, &[1, 1], &[1e-2, 1e-4, 1e-6]).unwrap() {
            assert!((row.closed_form.unwrap() - row.asymptote).abs() < 1e-9);
        }
    }

    #[test]
    fn trivial_graded_monodromy_has_no_jumps() {
        let mut d = load("example538").unwrap();
        for (i, nil) in d.nilpotents.iter_mut().enumerate() {
            nil.matrix = ExactMatrix::e(4, 3, 0).scale(&GR::from_int(i as i64 + 1));
        }
        let j = jump_detect(&HeightProblem::from_data(&d).unwrap()).unwrap();
        assert!(j.trivial_graded_monodromy && j.linear_on_samples);
        assert_eq!(j.verdict, JumpVerdict::NoJumps);
        assert!(j.criteria_consistent);
    }

    #[test]
    fn hodge_tate_height_is_positive() {
        let h = height_of_mhs(&load("hodge_tate").unwrap()).unwrap();
        assert!(h.delta_norm_sq > rat(0, 1) && h.height > 0.0);
    }
}
