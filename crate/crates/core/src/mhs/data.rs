//! Graded-polarized mixed Hodge data with nilpotent endomorphisms.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::bigrading::{deligne_bigrading, Bigrading};
use super::filtration::{DecreasingFiltration, IncreasingFiltration};
use crate::error::{Error, Result};
use crate::linalg::{ExactMatrix, Rational, Subspace, Vector, GR};

/// Shape of the weight filtration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TypeTag {
    /// One weight.
    Pure,
    /// Two adjacent weights k, k−1.
    I,
    /// Weights 2k, 2k−1, 2k−2 with Tate outer pieces.
    II,
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeTag::Pure => write!(f, "pure"),
            TypeTag::I => write!(f, "I"),
            TypeTag::II => write!(f, "II"),
        }
    }
}

impl std::str::FromStr for TypeTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "pure" | "Pure" => Ok(TypeTag::Pure),
            "I" | "1" | "i" => Ok(TypeTag::I),
            "II" | "2" | "ii" => Ok(TypeTag::II),
            other => Err(Error::unsupported(format!("type tag '{}'", other))),
        }
    }
}

/// Forms Q_k on Gr^W_k, each written in the graded basis of weight k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPolarization {
    pub forms: BTreeMap<i32, ExactMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nilpotent {
    pub name: String,
    pub matrix: ExactMatrix,
}

/// Lift of the generator of Gr^W_0 and a spanning vector of W₋₂.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightBlock {
    pub gen_one: Vector,
    pub gen_one_prime: Vector,
    pub tag: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedHodgeData {
    pub name: String,
    pub labels: Vec<String>,
    pub dim: usize,
    /// Vectors whose classes form a basis of each Gr^W_k.
    pub weight_basis: BTreeMap<i32, Vec<Vector>>,
    pub w: IncreasingFiltration,
    pub f: DecreasingFiltration,
    pub q: GradedPolarization,
    pub nilpotents: Vec<Nilpotent>,
    pub type_tag: Option<TypeTag>,
    pub height: Option<HeightBlock>,
    adapted_inv: ExactMatrix,
}

impl MixedHodgeData {
    pub fn new(
        name: impl Into<String>,
        weight_basis: BTreeMap<i32, Vec<Vector>>,
        f: DecreasingFiltration,
        q: BTreeMap<i32, ExactMatrix>,
        nilpotents: Vec<Nilpotent>,
    ) -> Result<Self> {
        let dim = f.dim();
        let w = IncreasingFiltration::from_graded(dim, &weight_basis)?;
        let cols: Vec<Vector> = weight_basis.values().flatten().cloned().collect();
        let adapted_inv = ExactMatrix::from_columns(&cols)
            .inverse()
            .ok_or_else(|| Error::invalid("graded weight basis vectors are linearly dependent"))?;
        for (k, m) in &q {
            let d = weight_basis.get(k).map_or(0, |v| v.len());
            if m.rows() != d || m.cols() != d {
                return Err(Error::invalid(format!("Q_{} must be {}x{}", k, d, d)));
            }
        }
        for nil in &nilpotents {
            if nil.matrix.rows() != dim || nil.matrix.cols() != dim {
                return Err(Error::invalid(format!("nilpotent {} has wrong size", nil.name)));
            }
        }
        Ok(Self {
            name: name.into(),
            labels: (0..dim).map(|i| format!("v{}", i)).collect(),
            dim,
            weight_basis,
            w,
            f,
            q: GradedPolarization { forms: q },
            nilpotents,
            type_tag: None,
            height: None,
            adapted_inv,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        if labels.len() == self.dim {
            self.labels = labels;
        }
        self
    }

    pub fn with_type(mut self, tag: Option<TypeTag>) -> Self {
        self.type_tag = tag;
        self
    }

    pub fn with_height(mut self, h: Option<HeightBlock>) -> Self {
        self.height = h;
        self
    }

    /// Same data with a different Hodge filtration.
    pub fn with_f(&self, f: DecreasingFiltration) -> Self {
        let mut d = self.clone();
        d.f = f;
        d
    }

    /// Sum of all nilpotents, the monodromy logarithm of the orbit.
    pub fn combined_n(&self) -> ExactMatrix {
        self.nilpotents
            .iter()
            .fold(ExactMatrix::zeros(self.dim, self.dim), |acc, n| &acc + &n.matrix)
    }

    /// Coordinates of the class of v ∈ W_k in the graded basis of Gr_k.
    pub fn gr_coords(&self, k: i32, v: &[GR]) -> Vector {
        let c = self.adapted_inv.apply(v);
        let mut offset = 0;
        for (j, vs) in &self.weight_basis {
            if *j == k {
                return c[offset..offset + vs.len()].to_vec();
            }
            offset += vs.len();
        }
        Vec::new()
    }

    /// Q_k([u], [v]), bilinear.
    pub fn q_form(&self, k: i32, u: &[GR], v: &[GR]) -> GR {
        let Some(m) = self.q.forms.get(&k) else { return GR::zero() };
        let cu = self.gr_coords(k, u);
        let cv = self.gr_coords(k, v);
        let mv = m.apply(&cv);
        cu.iter().zip(&mv).fold(GR::zero(), |s, (a, b)| s + a * b)
    }

    /// Shape detected from W and the Hodge numbers of (F, W).
    pub fn detect_type(&self, bg: &Bigrading) -> Option<TypeTag> {
        let ws = self.w.weights();
        match ws.as_slice() {
            [_] => Some(TypeTag::Pure),
            [a, b] if b - a == 1 => Some(TypeTag::I),
            [lo, .., hi] if hi - lo == 2 && hi % 2 == 0 => {
                let k = hi / 2;
                let tate = |wt: i32, p: i32| {
                    bg.parts().iter().all(|((a, b), _)| a + b != wt || (*a == p && *b == p))
                };
                (tate(*hi, k) && tate(*lo, k - 1)).then_some(TypeTag::II)
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub is_mhs: bool,
    pub hodge_numbers: Vec<((i32, i32), usize)>,
    pub parity_ok: bool,
    pub nondegenerate_ok: bool,
    pub first_relation_ok: bool,
    pub positivity_ok: bool,
    pub horizontal_ok: bool,
    pub preserves_w_ok: bool,
    pub commuting_ok: bool,
    pub nilpotent_ok: bool,
    pub detected_type: Option<TypeTag>,
    pub declared_type: Option<TypeTag>,
    /// Point e^{iyN}F at which the Hodge conditions were checked (y = 0 means F itself).
    pub checked_at_y: Option<String>,
    pub errors: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Leading principal minors of a Hermitian Gaussian-rational matrix are real;
/// all positive iff the form is positive definite.
pub fn is_positive_definite(h: &ExactMatrix) -> bool {
    let n = h.rows();
    for k in 1..=n {
        let mut m = ExactMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = h[(i, j)].clone();
            }
        }
        let d = determinant(&m);
        if !d.im.is_zero() || !d.re.is_positive() {
            return false;
        }
    }
    true
}

pub fn determinant(m: &ExactMatrix) -> GR {
    let n = m.rows();
    let mut a = m.clone();
    let mut det = GR::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
            return GR::zero();
        };
        if p != c {
            for j in 0..n {
                let t = a[(p, j)].clone();
                a[(p, j)] = a[(c, j)].clone();
                a[(c, j)] = t;
            }
            det = -det;
        }
        let piv = a[(c, c)].clone();
        det = &det * &piv;
        for r in c + 1..n {
            if a[(r, c)].is_zero() {
                continue;
            }
            let f = &a[(r, c)] / &piv;
            for j in c..n {
                let t = &f * &a[(c, j)];
                a[(r, j)] -= &t;
            }
        }
    }
    det
}

/// Hodge-theoretic checks on (F, W, Q) at the filtration `f`.
fn hodge_checks(data: &MixedHodgeData, f: &DecreasingFiltration, report: &mut ValidationReport) -> Option<Bigrading> {
    let bg = match deligne_bigrading(f, &data.w) {
        Ok(bg) => bg,
        Err(e) => {
            report.is_mhs = false;
            report.errors.push(e.to_string());
            return None;
        }
    };
    // First bilinear relation on each graded piece: Q_k(F^a, F^{k−a+1}) = 0.
    for k in data.w.weights() {
        let wk = data.w.get(k);
        let (pmin, pmax) = (f.min_index().unwrap_or(0), f.max_index().unwrap_or(0));
        for a in pmin..=pmax + 1 {
            let fa = f.get(a).intersect(&wk).unwrap_or_else(|_| Subspace::zero(data.dim));
            let fb = f.get(k - a + 1).intersect(&wk).unwrap_or_else(|_| Subspace::zero(data.dim));
            for u in fa.basis() {
                for v in fb.basis() {
                    if !data.q_form(k, u, v).is_zero() {
                        report.first_relation_ok = false;
                        report.errors.push(format!("Q_{}(F^{}, F^{}) is not zero", k, a, k - a + 1));
                    }
                }
            }
        }
    }
    // Positivity on graded I^{p,q}: i^{p−q} Q_k(v, conj v) positive definite.
    for ((p, q), s) in bg.parts() {
        let k = p + q;
        let b = s.basis();
        let mut h = ExactMatrix::zeros(b.len(), b.len());
        for (i, u) in b.iter().enumerate() {
            for (j, v) in b.iter().enumerate() {
                let vbar: Vector = v.iter().map(|x| x.conj()).collect();
                h[(j, i)] = &GR::i_pow((p - q) as i64) * &data.q_form(k, u, &vbar);
            }
        }
        if !is_positive_definite(&h) {
            report.positivity_ok = false;
            report.errors.push(format!("positivity fails on I^{{{},{}}}", p, q));
        }
    }
    Some(bg)
}

/// Validates data: MHS property, polarization parity, bilinear relations and
/// positivity, and the conditions on the nilpotents. When nilpotents are
/// present the Hodge conditions are checked at the orbit point e^{iyN}F for the
/// first y in {1, 2, 4, …, 2^12} where they hold.
pub fn validate(data: &MixedHodgeData) -> ValidationReport {
    let mut report = ValidationReport {
        is_mhs: true,
        hodge_numbers: Vec::new(),
        parity_ok: true,
        nondegenerate_ok: true,
        first_relation_ok: true,
        positivity_ok: true,
        horizontal_ok: true,
        preserves_w_ok: true,
        commuting_ok: true,
        nilpotent_ok: true,
        detected_type: None,
        declared_type: data.type_tag,
        checked_at_y: None,
        errors: Vec::new(),
    };
    for (k, m) in &data.q.forms {
        let sign = if k.rem_euclid(2) == 0 { GR::one() } else { -GR::one() };
        if m.transpose() != m.scale(&sign) {
            report.parity_ok = false;
            report.errors.push(format!("Q_{} does not have parity (-1)^{}", k, k));
        }
        if m.inverse().is_none() {
            report.nondegenerate_ok = false;
            report.errors.push(format!("Q_{} is degenerate", k));
        }
    }
    for k in data.w.weights() {
        if !data.q.forms.contains_key(&k) {
            report.nondegenerate_ok = false;
            report.errors.push(format!("missing polarization Q_{}", k));
        }
    }
    for nil in &data.nilpotents {
        if !nil.matrix.is_nilpotent() {
            report.nilpotent_ok = false;
            report.errors.push(format!("{} is not nilpotent", nil.name));
        }
        if !data.w.is_preserved_by(&nil.matrix) {
            report.preserves_w_ok = false;
            report.errors.push(format!("{} does not preserve W", nil.name));
        }
        if !data.f.is_shifted_by(&nil.matrix, -1) {
            report.horizontal_ok = false;
            report.errors.push(format!("{} is not horizontal: N(F^p) is not in F^(p-1)", nil.name));
        }
    }
    for (a, na) in data.nilpotents.iter().enumerate() {
        for nb in &data.nilpotents[a + 1..] {
            if !na.matrix.commutator(&nb.matrix).is_zero() {
                report.commuting_ok = false;
                report.errors.push(format!("{} and {} do not commute", na.name, nb.name));
            }
        }
    }
    if !report.errors.is_empty() {
        report.is_mhs = deligne_bigrading(&data.f, &data.w).is_ok();
        return report;
    }

    let bg = if data.nilpotents.is_empty() {
        hodge_checks(data, &data.f, &mut report)
    } else {
        let n = data.combined_n();
        let mut found = None;
        let mut last = ValidationReport { errors: Vec::new(), ..report.clone() };
        for e in 0..=12 {
            let y = Rational::from_integer((1i64 << e).into());
            let g = n.scale(&GR::imag(y.clone())).exp_nilpotent();
            let fy = data.f.transform(&g);
            let mut trial = ValidationReport { errors: Vec::new(), ..report.clone() };
            if let Some(bg) = hodge_checks(data, &fy, &mut trial) {
                if trial.errors.is_empty() {
                    trial.checked_at_y = Some(y.to_string());
                    found = Some((bg, trial));
                    break;
                }
            }
            last = trial;
        }
        match found {
            Some((bg, trial)) => {
                report = trial;
                Some(bg)
            }
            None => {
                report = last;
                None
            }
        }
    };
    if let Some(bg) = &bg {
        report.hodge_numbers = bg.hodge_numbers().into_iter().collect();
        report.detected_type = data.detect_type(bg);
        if let (Some(declared), Some(detected)) = (data.type_tag, report.detected_type) {
            if declared != detected {
                report.errors.push(format!("declared type {} but the data has shape {}", declared, detected));
            }
        }
    }
    report
}
