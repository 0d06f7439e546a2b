//! Command implementations. Each builds one report value and renders it.

use std::cmp::Ordering;
use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};
use sl2orbit::filtrations::check_admissible_orbit;
use sl2orbit::heights::{asymptote_table, height_of_mhs, jump_detect, mu_curve, HeightProblem};
use sl2orbit::linalg::{rat, rat_to_f64, ExactMatrix, Rational, GR};
use sl2orbit::mhs::{deligne_bigrading, delta_splitting, validate, DecreasingFiltration, IncreasingFiltration, MixedHodgeData};
use sl2orbit::orbit::{
    default_norm_samples, expand_orbit, limiting_curvature, limiting_grading, limiting_grading_gap, split_orbit, verify_norm_estimates,
};
use sl2orbit::problem::parse_problem;
use sl2orbit::Error;

use crate::output::{basis, decreasing, increasing, mat, q, render, to_value};
use crate::{Command, Common};

/// An error, with whatever report was produced before it.
pub struct Failure {
    pub report: Option<String>,
    pub error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { report: None, error }
    }
}

type Outcome = Result<String, Failure>;

fn load(path: &Path) -> Result<MixedHodgeData, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {}: {}", path.display(), e)))?;
    parse_problem(&text)
}

fn parse_rationals(xs: &[String]) -> Result<Vec<Rational>, Error> {
    xs.iter()
        .map(|s| {
            let g: GR = s.trim().parse().map_err(|_| Error::invalid(format!("sample '{}' is not a rational number", s)))?;
            if !g.is_real() || g.re <= rat(0, 1) {
                return Err(Error::invalid(format!("sample '{}' must be a positive rational", s)));
            }
            Ok(g.re)
        })
        .collect()
}

fn samples_or(xs: &[String], default: &[i64]) -> Result<Vec<Rational>, Error> {
    if xs.is_empty() {
        Ok(default.iter().map(|y| rat(*y, 1)).collect())
    } else {
        parse_rationals(xs)
    }
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), Error> {
    let io = |e: csv::Error| Error::invalid(format!("cannot write {}: {}", path.display(), e));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush().map_err(|e| Error::invalid(format!("cannot write {}: {}", path.display(), e)))
}

fn header(data: &MixedHodgeData) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("name".into(), json!(data.name));
    m.insert("dimension".into(), json!(data.dim));
    m.insert("labels".into(), json!(data.labels));
    m
}

pub fn run(cmd: &Command) -> Outcome {
    match cmd {
        Command::Validate(c) => cmd_validate(c),
        Command::Bigrade(c) => cmd_bigrade(c),
        Command::Split(c) => cmd_split(c),
        Command::Sl2(c) => cmd_sl2(c),
        Command::Orbit { common, order, samples, csv, tolerance } => cmd_orbit(common, *order, samples, csv.as_deref(), *tolerance),
        Command::Norms { common, order, samples, csv } => cmd_norms(common, *order, samples, csv.as_deref()),
        Command::Curvature(c) => cmd_curvature(c),
        Command::Height { common, exponents, curve_samples, csv } => cmd_height(common, exponents, curve_samples, csv.as_deref()),
        Command::GradingLimit { common, samples, csv, tolerance } => cmd_grading_limit(common, samples, csv.as_deref(), *tolerance),
    }
}

fn cmd_validate(c: &Common) -> Outcome {
    let data = load(&c.path)?;
    let r = validate(&data);
    let a = check_admissible_orbit(&data);
    let valid = r.is_valid() && a.is_admissible();
    let mut m = header(&data);
    m.insert("valid".into(), json!(valid));
    m.insert("type".into(), json!(r.detected_type.map(|t| t.to_string())));
    m.insert("validation".into(), to_value(&r));
    m.insert("admissibility".into(), to_value(&a));
    if let Some(rel) = &a.relative {
        m.insert("relative_weight".into(), increasing(rel));
    }
    let out = render(&Value::Object(m), c.json);
    if valid {
        Ok(out)
    } else {
        let errors: Vec<String> = r.errors.iter().chain(&a.errors).cloned().collect();
        Err(Failure { report: Some(out), error: Error::invalid(errors.join("; ")) })
    }
}

fn bigrading_value(f: &DecreasingFiltration, w: &IncreasingFiltration) -> Result<Value, Error> {
    let bg = deligne_bigrading(f, w)?;
    let split = delta_splitting(f, w)?;
    let mut m = Map::new();
    let numbers: Vec<Value> = bg.hodge_numbers().iter().map(|((p, q), d)| json!({"p": p, "q": q, "dim": d})).collect();
    m.insert("hodge_numbers".into(), Value::Array(numbers));
    let mut parts = Map::new();
    for ((p, q), s) in bg.parts() {
        parts.insert(format!("I^({},{})", p, q), basis(s));
    }
    m.insert("bigrading".into(), Value::Object(parts));
    m.insert("split_over_R".into(), json!(bg.is_split()));
    m.insert("Y".into(), mat(&bg.grading().y));
    m.insert("delta".into(), mat(&split.delta));
    m.insert("F_hat".into(), decreasing(&split.f_hat));
    Ok(Value::Object(m))
}

/// Bigrading of (F, W) when it is a mixed Hodge structure, and of the limit
/// (F, relW) when the relative weight filtration exists.
fn cmd_bigrade(c: &Common) -> Outcome {
    let data = load(&c.path)?;
    let mut m = header(&data);
    let own = bigrading_value(&data.f, &data.w);
    let limit = check_admissible_orbit(&data).relative.map(|rel| bigrading_value(&data.f, &rel));
    match (&own, &limit) {
        (Err(e), None | Some(Err(_))) => return Err(e.clone().into()),
        _ => {}
    }
    m.insert("F_W".into(), own.unwrap_or_else(|e| json!(format!("not a mixed Hodge structure: {}", e))));
    if let Some(l) = limit {
        m.insert("F_relW".into(), l.unwrap_or_else(|e| json!(format!("not a mixed Hodge structure: {}", e))));
    }
    Ok(render(&Value::Object(m), c.json))
}

fn cmd_split(c: &Common) -> Outcome {
    let data = load(&c.path)?;
    let s = split_orbit(&data)?;
    let mut m = header(&data);
    m.insert("type".into(), json!(s.type_tag.to_string()));
    m.insert("N".into(), mat(&s.n));
    m.insert("relative_weight".into(), increasing(&s.rel_w));
    m.insert("delta".into(), mat(&s.delta));
    m.insert("F_hat".into(), decreasing(&s.f_hat));
    m.insert("F_o".into(), decreasing(&s.f_o));
    Ok(render(&Value::Object(m), c.json))
}

fn cmd_sl2(c: &Common) -> Outcome {
    let data = load(&c.path)?;
    let s = split_orbit(&data)?;
    let mut m = header(&data);
    m.insert("type".into(), json!(s.type_tag.to_string()));
    m.insert("N0".into(), mat(&s.sl2.n0));
    m.insert("H".into(), mat(&s.sl2.triple.h));
    m.insert("N0+".into(), mat(&s.sl2.triple.n0_plus));
    m.insert("N_-2".into(), mat(&s.sl2.n_minus2));
    m.insert("relY".into(), mat(&s.sl2.rel_y.y));
    m.insert("Y".into(), mat(&s.sl2.y.y));
    Ok(render(&Value::Object(m), c.json))
}

fn cmd_orbit(c: &Common, order: u32, samples: &[String], csv: Option<&Path>, tolerance: f64) -> Outcome {
    let data = load(&c.path)?;
    let extra = parse_rationals(samples)?;
    let exp = expand_orbit(&data, order)?;
    let r = &exp.residual_report;
    let trivial = exp.zeta.is_zero() && exp.g.g.iter().skip(1).all(|x| x.is_zero());

    let mut m = header(&data);
    m.insert("type".into(), json!(exp.ctx.split.type_tag.to_string()));
    m.insert("order".into(), json!(order));
    m.insert("delta".into(), mat(&exp.delta));
    m.insert("zeta".into(), mat(&exp.zeta));
    m.insert("eta".into(), mat(&exp.eta));
    m.insert("N0".into(), mat(&exp.sl2.n0));
    m.insert("H".into(), mat(&exp.sl2.triple.h));
    m.insert("N0+".into(), mat(&exp.sl2.triple.n0_plus));
    m.insert("N_-2".into(), mat(&exp.sl2.n_minus2));
    m.insert("g(y)".into(), json!(if trivial { "1" } else { "e^zeta (1 + sum_k g_k y^-k)" }));
    m.insert("g_inf".into(), mat(&exp.g_inf()));
    let coeffs = |xs: &[ExactMatrix]| -> Value {
        let mut o = Map::new();
        for (k, x) in xs.iter().enumerate().skip(1) {
            o.insert(format!("{}", k), if x.is_zero() { json!("0") } else { mat(x) });
        }
        Value::Object(o)
    };
    m.insert("g_k".into(), coeffs(&exp.g.g));
    m.insert("f_k".into(), coeffs(&exp.g.f));
    let mut beta = Map::new();
    for (e, x) in exp.beta.terms() {
        if !x.is_zero() {
            beta.insert(format!("y^(-{}/2)", e), mat(x));
        }
    }
    m.insert("beta".into(), Value::Object(beta));
    m.insert("residual_report".into(), to_value(r));

    let mut all = r.claim_a.clone();
    if !extra.is_empty() {
        let more = exp.claim_a_residuals(&extra)?;
        m.insert("extra_residual_samples".into(), to_value(&more));
        all.extend(more);
    }
    all.sort_by(|a, b| a.y.total_cmp(&b.y));
    if let Some(last) = all.last() {
        m.insert("residual_f64_at_largest_y".into(), json!(last.residual));
        m.insert("within_tolerance".into(), json!(last.residual <= tolerance));
    }
    if let Some(p) = csv {
        let rows: Vec<Vec<String>> = all.iter().map(|s| vec![s.y.to_string(), s.residual.to_string(), s.exact_zero.to_string()]).collect();
        write_csv(p, &["y", "residual", "exact_zero"], &rows)?;
    }
    let out = render(&Value::Object(m), c.json);
    if r.exact_ok() {
        Ok(out)
    } else {
        let mut failed = r.kernel_failures.clone();
        for (ok, what) in [
            (r.reconstruction_exact, "e^zeta g(y) e^{iyN}.F_hat does not reproduce e^{iyN}.F"),
            (r.zeta_invariants, "zeta does not commute with N0 and N_-2"),
            (r.eta_correspondence, "eta is not the lowest component of beta"),
            (r.phi_residual_zero, "Phi recursion residual is nonzero"),
            (r.psi_residual_zero, "Psi recursion residual is nonzero"),
            (r.beta.lax_zero, "Lax residual of beta is nonzero"),
            (r.beta.nahm_zero, "Nahm residual of beta is nonzero"),
        ] {
            if !ok {
                failed.push(what.into());
            }
        }
        Err(Failure { report: Some(out), error: Error::invariant(failed.join("; ")) })
    }
}

fn cmd_norms(c: &Common, order: u32, samples: &[String], csv: Option<&Path>) -> Outcome {
    let data = load(&c.path)?;
    let ys = if samples.is_empty() { default_norm_samples() } else { parse_rationals(samples)? };
    let exp = expand_orbit(&data, order)?;
    let r = verify_norm_estimates(&exp, &ys)?;
    let mut m = header(&data);
    m.insert("norms".into(), to_value(&r));
    if let Some(p) = csv {
        let mut rows = Vec::new();
        for e in &r.entries {
            for (y, ratio) in r.y_samples.iter().zip(&e.ratios) {
                rows.push(vec![e.k.to_string(), format!("({})", e.vector.join(" ")), y.to_string(), ratio.map(|x| x.to_string()).unwrap_or_default()]);
            }
        }
        write_csv(p, &["k", "vector", "y", "ratio"], &rows)?;
    }
    Ok(render(&Value::Object(m), c.json))
}

fn cmd_curvature(c: &Common) -> Outcome {
    let data = load(&c.path)?;
    let s = split_orbit(&data)?;
    let k = limiting_curvature(&data, &s)?;
    let mut m = header(&data);
    m.insert("type".into(), json!(s.type_tag.to_string()));
    m.insert("direction".into(), json!(k.direction));
    let zero = rat(0, 1);
    let sign = match k.curvature.value.cmp(&zero) {
        Ordering::Less => "negative",
        Ordering::Equal => "zero",
        Ordering::Greater => "positive",
    };
    m.insert("curvature".into(), q(&k.curvature.value));
    m.insert("sign".into(), json!(sign));
    m.insert("bracket_form".into(), q(&k.curvature.bracket_form));
    m.insert("agrees".into(), json!(k.curvature.agrees));
    m.insert("curvature_f64".into(), json!(k.curvature.value_f64));
    let out = render(&Value::Object(m), c.json);
    if k.curvature.agrees {
        Ok(out)
    } else {
        Err(Failure { report: Some(out), error: Error::invariant("sectional curvature differs from -h([u*,u],[u*,u])/h(u,u)^2") })
    }
}

fn cmd_height(c: &Common, exponents: &[i64], curve_samples: &[f64], csv: Option<&Path>) -> Outcome {
    let data = load(&c.path)?;
    let p = HeightProblem::from_data(&data)?;
    let a = if exponents.is_empty() { vec![1; p.rank()] } else { exponents.to_vec() };
    let mu = mu_curve(&p, &a)?;
    let jumps = jump_detect(&p)?;
    let mut m = header(&data);
    m.insert("exponents".into(), json!(a));
    m.insert("mu".into(), q(&mu));
    m.insert("mu_f64".into(), json!(rat_to_f64(&mu)));
    m.insert("verdict".into(), json!(jumps.verdict.to_string()));
    m.insert("jump_report".into(), to_value(&jumps));
    if let Ok(h) = height_of_mhs(&data) {
        m.insert("fiber_height".into(), to_value(&h));
    }
    let ss: Vec<f64> = if curve_samples.is_empty() { vec![1e-2, 1e-4, 1e-6] } else { curve_samples.to_vec() };
    let table = asymptote_table(&p, &a, &ss)?;
    m.insert("asymptotes".into(), to_value(&table));
    if let Some(path) = csv {
        let rows: Vec<Vec<String>> = table
            .iter()
            .map(|r| vec![r.s.to_string(), r.asymptote.to_string(), r.closed_form.map(|x| x.to_string()).unwrap_or_default()])
            .collect();
        write_csv(path, &["s", "asymptote", "closed_form"], &rows)?;
    }
    Ok(render(&Value::Object(m), c.json))
}

fn cmd_grading_limit(c: &Common, samples: &[String], csv: Option<&Path>, tolerance: f64) -> Outcome {
    let data = load(&c.path)?;
    let ys = samples_or(samples, &[100, 1000, 10_000])?;
    let exp = expand_orbit(&data, 2)?;
    let y_inf = limiting_grading(&exp);
    let mut m = header(&data);
    m.insert("Y".into(), mat(&exp.sl2.y.y));
    m.insert("Y_inf".into(), mat(&y_inf.y));
    m.insert("Y_inf_grades_W".into(), json!(y_inf.grades(&data.w)));
    let mut rows = Vec::new();
    let mut gaps = Vec::new();
    for y in &ys {
        let g = limiting_grading_gap(&exp, y)?;
        gaps.push(json!({"y": rat_to_f64(y), "gap_f64": g}));
        rows.push(vec![rat_to_f64(y).to_string(), g.to_string()]);
    }
    let last = rows.last().map(|r| r[1].parse::<f64>().unwrap_or(f64::INFINITY));
    m.insert("gaps".into(), Value::Array(gaps));
    if let Some(g) = last {
        m.insert("within_tolerance".into(), json!(g <= tolerance));
    }
    if let Some(p) = csv {
        write_csv(p, &["y", "gap"], &rows)?;
    }
    Ok(render(&Value::Object(m), c.json))
}
