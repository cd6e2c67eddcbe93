use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use skein_torus_core::embed::SigmaTable;
use skein_torus_core::exactalg::{Cyclo, CycloField};
use skein_torus_core::qtorus::QTElem;
use skein_torus_core::repbuild::*;
use skein_torus_core::sausage::{CurveKind, SausageGraph, ZERO_E};

fn setup(genus: u32, closed: bool) -> (Arc<SausageGraph>, Arc<CycloField>, SigmaTable) {
    let g = Arc::new(SausageGraph::build(genus, closed).unwrap());
    let f = CycloField::new(3).unwrap();
    let t = SigmaTable::build(&g).unwrap();
    (g, f, t)
}

fn int(f: &Arc<CycloField>, c: i64) -> Cyclo {
    Cyclo::from_int(f, c)
}

fn rat(f: &Arc<CycloField>, n: i64, d: i64) -> Cyclo {
    Cyclo::from_rational(f, BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn params(g: &SausageGraph, f: &Arc<CycloField>, y: &[i64], boundary: i64) -> RepParams {
    let mut p = RepParams::standard(g, f);
    for (slot, &v) in p.y.iter_mut().zip(y) {
        *slot = int(f, v);
    }
    p.boundary = int(f, boundary);
    p
}

fn inverse_diag(m: &CMatrix) -> CMatrix {
    CMatrix::diagonal(m.field(), m.diagonal_entries().iter().map(|c| c.inv().unwrap()).collect())
}

#[test]
fn genericity_spec_examples() {
    let (g, f, _) = setup(2, true);
    let one = Cyclo::one(&f);
    let xs = [2, 5, 3].map(|c| int(&f, c));
    let ok = genericity_check(&xs, &one, &g, 3).unwrap();
    assert!(ok.pass, "{:?}", ok.failures);

    let xs = [2, 1, 3].map(|c| int(&f, c));
    let bad = genericity_check(&xs, &one, &g, 3).unwrap();
    assert!(!bad.pass);
    assert!(bad.failures.iter().any(|s| s == "eqG2[a1]"));

    let (g, f, _) = setup(2, false);
    let one = Cyclo::one(&f);
    let idx = |n: &str| g.edge_index(n).unwrap();
    let mut xs = vec![int(&f, 5); g.n_internal()];
    xs[idx("c1")] = int(&f, 2);
    xs[idx("a1")] = int(&f, 3);
    xs[idx("b1")] = rat(&f, 1, 6);
    let bad = genericity_check(&xs, &one, &g, 3).unwrap();
    assert!(!bad.pass);
    assert!(bad.failures.iter().all(|s| s.starts_with("eqG1[c1,a1,b1,")), "{:?}", bad.failures);
}

#[test]
fn build_rejects_bad_parameters() {
    let (g, f, _) = setup(2, true);
    let mut p = RepParams::standard(&g, &f);
    p.x[0] = int(&f, 1);
    assert!(matches!(build_rep(&g, &f, &p), Err(RepError::NotGeneric(_))));
    let mut p = RepParams::standard(&g, &f);
    p.x[2] = Cyclo::zero(&f);
    assert!(matches!(build_rep(&g, &f, &p), Err(RepError::ZeroParameter(_))));
    let mut p = RepParams::standard(&g, &f);
    p.y.pop();
    assert!(matches!(build_rep(&g, &f, &p), Err(RepError::ParamCount { .. })));
}

#[test]
fn generator_relations_at_a_squared() {
    let (g, f, _) = setup(2, false);
    let r = build_rep(&g, &f, &params(&g, &f, &[2, 3, 5, 7], 3)).unwrap();
    let a2 = Cyclo::a_pow(&f, 2);
    let e = |pairs: &[(usize, i16)]| {
        let mut k = ZERO_E;
        for &(i, v) in pairs {
            k[i] = v;
        }
        r.e_matrix(&k).unwrap()
    };
    let (a0, a, b, c) = (0, 1, 2, 3);
    let q2 = r.q_matrix(a0).pow(2);
    assert_eq!(q2.mul(&e(&[(a0, 1)])), e(&[(a0, 1)]).mul(&q2).scale(&a2));
    let qab = r.q_matrix(a).mul(&r.q_matrix(b));
    let eab = e(&[(a, 1), (b, 1)]);
    assert_eq!(qab.mul(&eab), eab.mul(&qab).scale(&a2));
    let eabm = e(&[(a, 1), (b, -1)]);
    assert_eq!(qab.mul(&eabm), eabm.mul(&qab));
    let qc = r.q_matrix(c);
    let ec2 = e(&[(c, 2)]);
    assert_eq!(qc.mul(&ec2), ec2.mul(&qc).scale(&a2));
}

#[test]
fn pants_image_eigenvalues() {
    let (g, f, t) = setup(2, true);
    let r = build_rep(&g, &f, &RepParams::standard(&g, &f)).unwrap();
    for e in g.internal_edges() {
        let m = eval_element(&t.sigma(&g.alpha(e).unwrap()).unwrap(), &r).unwrap();
        assert!(m.is_diagonal());
        let x = &r.x()[e];
        let xm = x.inv().unwrap();
        for (i, d) in m.diagonal_entries().iter().enumerate() {
            let k = r.digits(i)[e] as i64;
            let want = x.mul(x).mul(&Cyclo::a_pow(&f, 2 * k + 2)).add(&xm.mul(&xm).mul(&Cyclo::a_pow(&f, -2 * k - 2))).neg();
            assert_eq!(d, &want);
        }
        let q = r.q_matrix(e);
        let qi = inverse_diag(&q);
        let formula = q.mul(&q).scale(&Cyclo::a_pow(&f, 2)).add(&qi.mul(&qi).scale(&Cyclo::a_pow(&f, -2))).neg();
        assert_eq!(m, formula);
        let tp = chebyshev_t(3, &m).as_scalar().unwrap();
        assert_eq!(tp, x.pow(6).unwrap().add(&x.pow(-6).unwrap()).neg());
        assert_eq!(classical_shadow(&g.alpha(e).unwrap(), &r, &t).unwrap(), tp.neg());
    }
}

#[test]
fn chebyshev_small_orders() {
    let f = CycloField::new(3).unwrap();
    let mut m = CMatrix::zero(&f, 3);
    m.set(0, 1, int(&f, 2));
    m.set(1, 2, Cyclo::a_pow(&f, 1));
    m.set(2, 0, int(&f, -1));
    m.set(1, 1, int(&f, 3));
    assert_eq!(chebyshev_t(0, &m), CMatrix::scalar(&f, 3, &int(&f, 2)));
    assert_eq!(chebyshev_t(1, &m), m);
    let three = m.scale(&int(&f, 3));
    assert_eq!(chebyshev_t(3, &m), m.pow(3).sub(&three));
    assert_eq!(chebyshev_t(2, &m), m.mul(&m).sub(&CMatrix::scalar(&f, 3, &int(&f, 2))));
}

#[test]
fn shadows_are_scalar_for_every_catalogued_curve() {
    for (genus, closed) in [(2, true), (2, false)] {
        let (g, f, t) = setup(genus, closed);
        let r = build_rep(&g, &f, &params(&g, &f, &[2, 3, 5, 7], 3)).unwrap();
        for c in g.catalogue() {
            classical_shadow(&c, &r, &t).unwrap_or_else(|e| panic!("{}: {e}", c.label));
        }
    }
}

#[test]
fn twisted_one_cycle_shadows_are_scalar() {
    let (g, f, t) = setup(1, false);
    let r = build_rep(&g, &f, &params(&g, &f, &[2], 3)).unwrap();
    let beta = g.beta(1).unwrap();
    let CurveKind::OneCycle { e, .. } = beta.kind else { panic!("beta is a one-cycle") };
    for s in [1, -1] {
        classical_shadow(&beta.twisted(e, s), &r, &t).unwrap();
    }
}

fn failing(report: &skein_torus_core::embed::SuiteReport) -> Vec<String> {
    report.identities.iter().filter(|i| !i.pass).map(|i| i.id.clone()).collect()
}

#[test]
fn one_cycle_central_power() {
    let (g, f, t) = setup(1, false);
    let r = build_rep(&g, &f, &RepParams::standard(&g, &f)).unwrap();
    let report = verify_cshadow(&r, &t).unwrap();
    let ids: Vec<&str> = report.identities.iter().map(|i| i.id.as_str()).collect();
    assert!(ids.contains(&"one_cycle_solved[beta[1]]"));
    assert_eq!(failing(&report), ["one_cycle_statement[beta[1]]"]);

    // Independent scalar oracle: y = 1, x = 2, p = 3 gives r_gamma = 2 and r_t = 64 + 1/64.
    let beta = g.beta(1).unwrap();
    let rg = classical_shadow(&beta, &r, &t).unwrap().neg();
    let rt = classical_shadow(&beta.twisted(0, 1), &r, &t).unwrap().neg();
    assert_eq!(rg, int(&f, 2));
    assert_eq!(rt, rat(&f, 4097, 64));
    let printed = rg.mul(&rat(&f, 1, 64)).add(&rt).div(&rat(&f, 4095, 64)).unwrap();
    assert_eq!(printed, rat(&f, 4099, 4095));
}

#[test]
fn two_cycle_and_separating_central_powers() {
    let (g, f, t) = setup(2, false);
    let r = build_rep(&g, &f, &params(&g, &f, &[2, 3, 4, 5], 3)).unwrap();
    let report = verify_cshadow(&r, &t).unwrap();
    assert!(report.identities.iter().any(|i| i.id.starts_with("two_cycle_statement_pm")));
    assert!(failing(&report).iter().all(|id| id.starts_with("one_cycle_statement")), "{:?}", failing(&report));

    let (g, f, t) = setup(2, true);
    let r = build_rep(&g, &f, &params(&g, &f, &[2, 3, 5], 1)).unwrap();
    let report = verify_cshadow(&r, &t).unwrap();
    assert!(report.identities.iter().any(|i| i.id.starts_with("separating_statement") && i.pass));
    assert!(failing(&report).iter().all(|id| id.starts_with("one_cycle_statement")), "{:?}", failing(&report));
}

#[test]
fn commutant_dimensions() {
    let (g, f, t) = setup(2, true);
    let r = build_rep(&g, &f, &RepParams::standard(&g, &f)).unwrap();
    assert_eq!(irreducibility_commutant(&r, &t).unwrap(), 1);
    let pants: Vec<_> = g.internal_edges().map(|e| g.alpha(e).unwrap()).collect();
    assert_eq!(commutant_dimension(&r, &t, &pants).unwrap(), 27);
    assert_eq!(commutant_dimension(&r, &t, &pants[..1]).unwrap(), 3 * 9 * 9);

    let (g, f, t) = setup(2, false);
    let r = build_rep(&g, &f, &params(&g, &f, &[2, 3, 4, 5], 3)).unwrap();
    assert_eq!(irreducibility_commutant(&r, &t).unwrap(), 1);
}

#[test]
fn intertwiners() {
    let (g, f, t) = setup(2, true);
    let base = params(&g, &f, &[2, 3, 5], 1);
    let r1 = build_rep(&g, &f, &base).unwrap();
    let same = find_intertwiner(&r1, &r1, &t).unwrap().unwrap();
    assert!(same.as_scalar().is_some_and(|c| !c.is_zero()));

    let mut shifted = base.clone();
    let minus_a = Cyclo::a_pow(&f, 1).neg();
    for (e, (x, y)) in shifted.x.iter_mut().zip(shifted.y.iter_mut()).enumerate() {
        *x = x.mul(&minus_a.pow(e as i64 + 1).unwrap());
        *y = y.mul(&Cyclo::a_pow(&f, 2 * (e as i64 + 2)));
    }
    let r2 = build_rep(&g, &f, &shifted).unwrap();
    assert_ne!(r1.x(), r2.x());
    let tm = find_intertwiner(&r1, &r2, &t).unwrap().expect("gauge-equivalent representations");
    for c in g.catalogue() {
        let s = t.sigma(&c).unwrap();
        assert_eq!(tm.mul(&eval_element(&s, &r1).unwrap()), eval_element(&s, &r2).unwrap().mul(&tm));
    }

    let mut other = base.clone();
    other.y[0] = int(&f, 7);
    let r3 = build_rep(&g, &f, &other).unwrap();
    assert!(find_intertwiner(&r1, &r3, &t).unwrap().is_none());
}

#[test]
fn outside_even_subalgebra_is_rejected() {
    let (g, f, _) = setup(2, true);
    let r = build_rep(&g, &f, &RepParams::standard(&g, &f)).unwrap();
    let x = QTElem::e_edge(&g, g.edge_index("c1").unwrap(), 1);
    assert!(matches!(eval_element(&x, &r), Err(RepError::NotInSubalgebra(_))));
    assert_eq!(eval_element(&QTElem::one(&g), &r).unwrap(), CMatrix::identity(&f, 27));
}

fn genus2() -> &'static (Arc<SausageGraph>, Arc<CycloField>, SigmaTable, Rep) {
    static CELL: std::sync::OnceLock<(Arc<SausageGraph>, Arc<CycloField>, SigmaTable, Rep)> =
        std::sync::OnceLock::new();
    CELL.get_or_init(|| {
        let (g, f, t) = setup(2, true);
        let r = build_rep(&g, &f, &params(&g, &f, &[2, 3, 5], 1)).unwrap();
        (g, f, t, r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eval_is_multiplicative(i in 0usize..64, j in 0usize..64, ci in -3i64..=3, cj in 1i64..=3) {
        let (g, _, t, r) = genus2();
        let cat = g.catalogue();
        let x = t.sigma(&cat[i % cat.len()]).unwrap().add(&QTElem::from_int(g, ci));
        let y = t.sigma(&cat[j % cat.len()]).unwrap().scale_int(cj);
        let lhs = eval_element(&x.mul(&y), r).unwrap();
        let rhs = eval_element(&x, r).unwrap().mul(&eval_element(&y, r).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
