use std::collections::BTreeMap;

use proptest::prelude::*;
use sl2orbit::filtrations::{is_monodromy_filtration, is_relative_weight_filtration, monodromy_weight_filtration, relative_weight_filtration};
use sl2orbit::fixtures::{load, NAMES};
use sl2orbit::heights::{closed_form_538, mu_curve, HeightProblem};
use sl2orbit::linalg::{eigen_projection, rat, ExactMatrix, Rational, Subspace, Vector, GR};
use sl2orbit::mhs::{deligne_bigrading, delta_splitting, mixed_hodge_metric, DecreasingFiltration, IncreasingFiltration, MixedHodgeData, Nilpotent};
use sl2orbit::orbit::{expand_orbit, split_orbit};
use sl2orbit::problem::{dump_problem, parse_problem};

fn small() -> impl Strategy<Value = i64> {
    -3i64..=3
}

fn gaussian() -> impl Strategy<Value = GR> {
    (small(), small(), 1i64..=3).prop_map(|(a, b, d)| GR::new(rat(a, d), rat(b, d)))
}

fn vector(n: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(gaussian(), n)
}

fn subspace(n: usize) -> impl Strategy<Value = Subspace> {
    prop::collection::vec(vector(n), 0..=n).prop_map(move |vs| Subspace::span(n, vs))
}

/// L·U with unit diagonals: invertible with determinant 1.
fn unimodular(n: usize) -> impl Strategy<Value = ExactMatrix> {
    (prop::collection::vec(small(), n * n), prop::collection::vec(small(), n * n)).prop_map(move |(l, u)| {
        let mut lo = ExactMatrix::identity(n);
        let mut up = ExactMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                if i > j {
                    lo[(i, j)] = GR::from_int(l[i * n + j]);
                } else if i < j {
                    up[(i, j)] = GR::from_int(u[i * n + j]);
                }
            }
        }
        &lo * &up
    })
}

fn inverse(b: &ExactMatrix) -> ExactMatrix {
    b.inverse().expect("unimodular")
}

/// Strictly lower triangular, conjugated by a unimodular matrix.
fn nilpotent(n: usize) -> impl Strategy<Value = ExactMatrix> {
    (prop::collection::vec(-2i64..=2, n * n), unimodular(n)).prop_map(move |(e, b)| {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..i {
                m[(i, j)] = GR::from_int(e[i * n + j]);
            }
        }
        &(&b * &m) * &inverse(&b)
    })
}

/// The same problem written in the basis b·(old basis).
fn change_basis(d: &MixedHodgeData, b: &ExactMatrix) -> MixedHodgeData {
    let b_inv = inverse(b);
    let wb: BTreeMap<i32, Vec<Vector>> = d.weight_basis.iter().map(|(k, vs)| (*k, vs.iter().map(|v| b.apply(v)).collect())).collect();
    let nil = d
        .nilpotents
        .iter()
        .map(|x| Nilpotent { name: x.name.clone(), matrix: &(b * &x.matrix) * &b_inv })
        .collect();
    let out = MixedHodgeData::new(d.name.clone(), wb, d.f.transform(b), d.q.forms.clone(), nil).unwrap().with_type(d.type_tag);
    out.with_height(d.height.clone().map(|mut h| {
        h.gen_one = b.apply(&h.gen_one);
        h.gen_one_prime = b.apply(&h.gen_one_prime);
        h
    }))
}

/// A Hodge filtration making (F, W) a mixed Hodge structure: F itself, or
/// e^{iyN}F for the first power of two y that works.
fn mhs_filtration(d: &MixedHodgeData) -> DecreasingFiltration {
    if deligne_bigrading(&d.f, &d.w).is_ok() {
        return d.f.clone();
    }
    let n = d.combined_n();
    (0..=12)
        .map(|e| d.f.transform(&n.scale(&GR::imag(rat(1 << e, 1))).exp_nilpotent()))
        .find(|f| deligne_bigrading(f, &d.w).is_ok())
        .expect("some point of the orbit is a mixed Hodge structure")
}

const MHS_FIXTURES: [&str; 4] = ["hodge_tate", "split", "example538", "example540"];

fn permutations3() -> Vec<[usize; 3]> {
    vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

fn permutation_matrix(p: &[usize]) -> ExactMatrix {
    let n = p.len();
    let mut m = ExactMatrix::zeros(n, n);
    for (j, &i) in p.iter().enumerate() {
        m[(i, j)] = GR::from_int(1);
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn modular_law(a in subspace(3), b in subspace(3), c in subspace(3)) {
        // With B ⊆ A' = A + B: A' ∩ (B + C) = B + (A' ∩ C).
        let a = a.sum(&b).unwrap();
        let lhs = a.intersect(&b.sum(&c).unwrap()).unwrap();
        let rhs = b.sum(&a.intersect(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn span_is_canonical_under_reordering(vs in prop::collection::vec(vector(3), 0..4)) {
        let mut rev = vs.clone();
        rev.reverse();
        prop_assert_eq!(Subspace::span(3, vs), Subspace::span(3, rev));
    }

    #[test]
    fn eigen_projections_resolve_identity(b in unimodular(3), d in prop::collection::vec(-2i64..=2, 3)) {
        let diag: Vec<GR> = d.iter().map(|x| GR::from_int(*x)).collect();
        let s = &(&b * &ExactMatrix::diag(&diag)) * &inverse(&b);
        let spec: Vec<i64> = (-2..=2).collect();
        let ps: Vec<ExactMatrix> = spec.iter().map(|l| eigen_projection(&s, &spec, *l).unwrap()).collect();
        let mut total = ExactMatrix::zeros(3, 3);
        for (i, p) in ps.iter().enumerate() {
            prop_assert_eq!(&(p * p), p);
            for (j, r) in ps.iter().enumerate() {
                if i != j {
                    prop_assert!((p * r).is_zero());
                }
            }
            total = &total + p;
        }
        prop_assert_eq!(total, ExactMatrix::identity(3));
    }

    #[test]
    fn bigrading_is_functorial(idx in 0..MHS_FIXTURES.len(), seed in unimodular(4)) {
        let d = load(MHS_FIXTURES[idx]).unwrap();
        let n = d.dim;
        let b = if n == 4 { seed } else { ExactMatrix::from_rows((0..n).map(|i| seed.row(i)[..n].to_vec()).collect()) };
        prop_assume!(b.inverse().is_some());
        let f = mhs_filtration(&d);
        let bg = deligne_bigrading(&f, &d.w).unwrap();
        let moved = deligne_bigrading(&f.transform(&b), &d.w.transform(&b)).unwrap();
        prop_assert_eq!(moved, bg.transform(&b));
    }

    #[test]
    fn delta_is_functorial_under_real_changes(idx in 0..MHS_FIXTURES.len(), seed in unimodular(4)) {
        let d = load(MHS_FIXTURES[idx]).unwrap();
        let n = d.dim;
        let b = if n == 4 { seed } else { ExactMatrix::from_rows((0..n).map(|i| seed.row(i)[..n].to_vec()).collect()) };
        prop_assume!(b.inverse().is_some());
        let f = mhs_filtration(&d);
        let delta = delta_splitting(&f, &d.w).unwrap().delta;
        let moved = delta_splitting(&f.transform(&b), &d.w.transform(&b)).unwrap().delta;
        prop_assert_eq!(moved, &(&b * &delta) * &inverse(&b));
    }

    #[test]
    fn monodromy_filtration_axioms(n in nilpotent(4), center in -2i32..=2) {
        let m = monodromy_weight_filtration(&n, center).unwrap();
        prop_assert!(is_monodromy_filtration(&n, &m, center));
    }

    #[test]
    fn pure_relative_is_monodromy(n in nilpotent(4), k in -2i32..=2) {
        let w = IncreasingFiltration::pure(4, k);
        let rel = relative_weight_filtration(&n, &w).unwrap().expect("pure filtrations always admit relW");
        prop_assert!(is_relative_weight_filtration(&n, &w, &rel));
        prop_assert_eq!(rel, monodromy_weight_filtration(&n, k).unwrap());
    }

    #[test]
    fn mu_is_homogeneous(a1 in 1i64..8, a2 in 1i64..8, k in 2i64..5) {
        for name in ["example538", "example540"] {
            let p = HeightProblem::from_data(&load(name).unwrap()).unwrap();
            let mu = mu_curve(&p, &[a1, a2]).unwrap();
            prop_assert_eq!(mu_curve(&p, &[k * a1, k * a2]).unwrap(), &mu * rat(k, 1));
        }
        let p = HeightProblem::from_data(&load("example538").unwrap()).unwrap();
        prop_assert_eq!(mu_curve(&p, &[a1, a2]).unwrap(), rat(4 * a1 * a2, a1 + a2));
    }

    #[test]
    fn height_discrepancy_is_bounded(sigma in 0.01f64..1.0) {
        // Along (s, σs) the slope is μ(1,1) = 2; the remainder stays bounded.
        let bound = 4.0 * sigma.ln().abs() + 1.0;
        for e in [3, 6, 9, 12] {
            let s = 10f64.powi(-e);
            let h = closed_form_538(s.ln(), (sigma * s).ln());
            prop_assert!((h - (-2.0 * s.ln())).abs() <= bound);
        }
    }

    #[test]
    fn problem_files_round_trip(idx in 0..NAMES.len(), b in unimodular(4)) {
        let d = load(NAMES[idx]).unwrap();
        prop_assert_eq!(&parse_problem(&dump_problem(&d)).unwrap(), &d);
        let b = ExactMatrix::from_rows((0..d.dim).map(|i| b.row(i)[..d.dim].to_vec()).collect());
        prop_assume!(b.inverse().is_some());
        let moved = change_basis(&d, &b);
        prop_assert_eq!(parse_problem(&dump_problem(&moved)).unwrap(), moved);
    }

    #[test]
    fn lie_minus_two_acts_by_isometries(t in (-4i64..=4, 1i64..=3), x in prop::collection::vec(small(), 16), y in prop::collection::vec(small(), 16)) {
        for name in ["hodge_tate", "example538"] {
            let d = load(name).unwrap();
            let n = d.dim;
            let lam = ExactMatrix::e(n, n - 1, 0).scale(&GR::real(rat(t.0, t.1)));
            let g = lam.exp_nilpotent();
            let g_inv = (-&lam).exp_nilpotent();
            let f = mhs_filtration(&d);
            let f2 = f.transform(&g);
            let h1 = mixed_hodge_metric(&d, &f).unwrap();
            let h2 = mixed_hodge_metric(&d.with_f(f2.clone()), &f2).unwrap();
            let u = ExactMatrix::from_ints(n, n, &x[..n * n]);
            let v = ExactMatrix::from_ints(n, n, &y[..n * n]);
            let (gu, gv) = (u.conjugate_by(&g, &g_inv), v.conjugate_by(&g, &g_inv));
            prop_assert_eq!(h2.gl_inner(&gu, &gv), h1.gl_inner(&u, &v));
            let bg = deligne_bigrading(&f, &d.w).unwrap();
            prop_assert_eq!(deligne_bigrading(&f2, &d.w).unwrap(), bg.transform(&g));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn matching_is_basis_independent(p in prop::sample::select(permutations3()), name in prop::sample::select(vec!["example82", "perturbed", "type_i"])) {
        let d = load(name).unwrap();
        let b = permutation_matrix(&p);
        let b_inv = inverse(&b);
        let e = expand_orbit(&d, 4).unwrap();
        let moved = expand_orbit(&change_basis(&d, &b), 4).unwrap();
        prop_assert_eq!(moved.zeta, e.zeta.conjugate_by(&b, &b_inv));
        prop_assert_eq!(moved.eta, e.eta.conjugate_by(&b, &b_inv));
        for (gm, g) in moved.g.g.iter().zip(&e.g.g) {
            prop_assert_eq!(gm, &g.conjugate_by(&b, &b_inv));
        }
    }
}

/// Properties of the sl₂-data on every fixture.
#[test]
fn sl2_data_structure() {
    for name in NAMES {
        let d = load(name).unwrap();
        let s = split_orbit(&d).unwrap();
        let t = &s.sl2.triple;
        let nm2 = &s.sl2.n_minus2;
        // N₋₂ is a highest weight vector of weight 0, commuting with the triple.
        assert!(t.n0_plus.commutator(nm2).is_zero(), "{}", name);
        assert!(t.h.commutator(nm2).is_zero(), "{}", name);
        assert!(t.n0.commutator(nm2).is_zero(), "{}", name);
        // Y preserves F̂.
        let y = &s.sl2.y.y;
        for p in s.f_hat.indices() {
            let fp = s.f_hat.get(p);
            assert!(fp.basis().iter().all(|v| fp.contains(&y.apply(v))), "{} F^{}", name, p);
        }
    }
}

#[test]
fn rational_samples_of_the_limit_grading_converge() {
    // The approach of e^{-iyN}.Y_(F(iy),W) to Y_inf is O(1/y) on the
    // non-split type I fixtures: y·gap stays bounded and settles.
    for name in ["example82", "perturbed"] {
        let e = expand_orbit(&load(name).unwrap(), 2).unwrap();
        let scaled: Vec<f64> = [100i64, 1000, 10_000]
            .iter()
            .map(|y| *y as f64 * sl2orbit::orbit::limiting_grading_gap(&e, &Rational::from_integer((*y).into())).unwrap())
            .collect();
        assert!(scaled.iter().all(|s| *s > 0.1 && *s < 10.0), "{}: {:?}", name, scaled);
        assert!((scaled[2] - scaled[1]).abs() <= (scaled[1] - scaled[0]).abs(), "{}: {:?}", name, scaled);
    }
}
