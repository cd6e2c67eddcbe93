use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use skein_torus_core::embed::{
    expand_support_check, linear_independence_check, run_identity_suite, twist_image, EmbedError, SigmaTable, SuiteId,
    SuiteOptions,
};
use skein_torus_core::qtorus::{commutator_a, QTElem};
use skein_torus_core::sausage::{CurveKind, SausageGraph};

fn graph(genus: u32, closed: bool) -> Arc<SausageGraph> {
    Arc::new(SausageGraph::build(genus, closed).unwrap())
}

fn assert_suite(suite: SuiteId, genus: u32, closed: bool) {
    let g = graph(genus, closed);
    let r = run_identity_suite(suite, &g, SuiteOptions::default()).unwrap();
    let fails: Vec<&str> = r.failures().map(|f| f.id.as_str()).collect();
    assert!(r.passed(), "{suite} at genus {genus}: {fails:?}");
}

fn assert_mutation_caught(suite: SuiteId, genus: u32, closed: bool) {
    let g = graph(genus, closed);
    let r = run_identity_suite(suite, &g, SuiteOptions { mutate: true }).unwrap();
    assert!(r.mutated);
    assert!(!r.passed(), "{suite} mutation went unnoticed");
    assert!(r.failures().all(|f| f.residual_terms() > 0));
}

#[test]
fn one_cycle_suites() {
    for (genus, closed) in [(1, false), (2, true)] {
        for s in [SuiteId::S1, SuiteId::S2, SuiteId::S3] {
            assert_suite(s, genus, closed);
        }
    }
}

#[test]
fn two_cycle_suites() {
    for (genus, closed) in [(2, false), (3, true)] {
        assert_suite(SuiteId::S4, genus, closed);
        assert_suite(SuiteId::S5, genus, closed);
    }
}

#[test]
fn separating_suites() {
    for s in [SuiteId::S6, SuiteId::S7, SuiteId::S8, SuiteId::S11] {
        assert_suite(s, 2, true);
        assert_suite(s, 2, false);
    }
}

#[test]
fn edge_square_suites() {
    assert_suite(SuiteId::S9, 2, true);
    assert_suite(SuiteId::S10, 3, true);
}

#[test]
fn mutations_are_caught() {
    for s in [SuiteId::S1, SuiteId::S2, SuiteId::S3] {
        assert_mutation_caught(s, 2, true);
    }
    assert_mutation_caught(SuiteId::S4, 2, false);
    assert_mutation_caught(SuiteId::S5, 2, false);
    for s in [SuiteId::S6, SuiteId::S7, SuiteId::S8, SuiteId::S9, SuiteId::S11] {
        assert_mutation_caught(s, 2, true);
    }
    assert_mutation_caught(SuiteId::S10, 3, true);
}

#[test]
fn missing_configuration_is_reported() {
    let g = graph(2, true);
    for s in [SuiteId::S4, SuiteId::S10] {
        assert!(matches!(
            run_identity_suite(s, &g, SuiteOptions::default()),
            Err(EmbedError::ConfigTooSmall { .. })
        ));
    }
}

#[test]
fn support_parity_extremal_membership_fracdehn() {
    for (genus, closed) in [(1, false), (2, true), (2, false), (3, true)] {
        let t = SigmaTable::build(&graph(genus, closed)).unwrap();
        let r = expand_support_check(&t).unwrap();
        let fails: Vec<&str> = r.failures().map(|f| f.id.as_str()).collect();
        assert!(r.passed(), "genus {genus}: {fails:?}");
        assert!(r.identities.iter().any(|i| i.id.starts_with("fracdehn[")));
    }
}

#[test]
fn images_linearly_independent() {
    for (genus, closed) in [(1, false), (2, true), (2, false)] {
        let t = SigmaTable::build(&graph(genus, closed)).unwrap();
        assert!(linear_independence_check(&t, 3).unwrap());
    }
}

#[test]
fn disjoint_twist_leaves_image() {
    let g = graph(2, true);
    let t = SigmaTable::build(&g).unwrap();
    let beta = g.beta(1).unwrap();
    let e = g.internal_edges().find(|&e| g.intersection(&beta, e) == 0).unwrap();
    let same = t.sigma(&beta.twisted(e, 1)).unwrap();
    assert_eq!(same, t.sigma(&beta).unwrap());
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn u(x: &BigRational) -> BigRational {
    x - x.recip()
}

fn pw(x: &BigRational, k: i32) -> BigRational {
    if k >= 0 {
        num_traits::pow(x.clone(), k as usize)
    } else {
        num_traits::pow(x.recip(), (-k) as usize)
    }
}

#[test]
fn y_product_closed_form_at_rational_point() {
    let a = rat(2, 3);
    let qs = [rat(5, 7), rat(3, 2), rat(7, 4), rat(4, 9), rat(11, 5)];
    let (q1, q2, q3, q4, qc) = (&qs[0], &qs[1], &qs[2], &qs[3], &qs[4]);
    let d = |q: &BigRational| -(pw(&a, 2) * pw(q, 2) + pw(&a, -2) * pw(q, -2));
    let (d1, d2, d3, d4) = (d(q1), d(q2), d(q3), d(q4));
    let delta1 = &d1 * &d3 + &d2 * &d4;
    let delta2 = &d1 * &d2 + &d3 * &d4;
    let delta3 = &d1 * &d4 + &d2 * &d3;
    let big = &d1 * &d1 + &d2 * &d2 + &d3 * &d3 + &d4 * &d4 + &d1 * &d2 * &d3 * &d4;
    let g2_hat = -(u(&(pw(&a, 2) * q1 * q4 / qc)) * u(&(pw(&a, 2) * q2 * q3 / qc)));
    let gm2 = -(u(&(pw(&a, 2) * q1 * q4 * qc))
        * u(&(q1 * qc / q4))
        * u(&(q4 * qc / q1))
        * u(&(pw(&a, 2) * q2 * q3 * qc))
        * u(&(q2 * qc / q3))
        * u(&(q3 * qc / q2)))
        / (u(&(pw(&a, -2) * pw(qc, 2))) * u(&pw(qc, 2)) * u(&pw(qc, 2)) * u(&(pw(&a, 2) * pw(qc, 2))));
    let lhs = pw(&a, 2) * u(&(pw(&a, -2) * pw(qc, 2))) * g2_hat * u(&(pw(&a, 2) * pw(qc, 2))) * gm2;
    let t = pw(qc, 2) + pw(qc, -2);
    let four = rat(4, 1);
    let p = -pw(&t, 4) + &delta3 * pw(&t, 3) + (rat(8, 1) - &big) * pw(&t, 2)
        + (&delta1 * &delta2 - &four * &delta3) * &t
        + (&four * &big - rat(16, 1) - &delta1 * &delta1 - &delta2 * &delta2);
    let rhs = -pw(&a, 2) * p / pw(&u(&pw(qc, 2)), 2);
    assert_eq!(lhs, rhs);
    assert_eq!(pw(&u(&pw(qc, 2)), 2), &t * &t - four);
    assert!(!lhs.is_zero() && !lhs.is_one());
}

struct HandleData {
    beta: QTElem,
    t1: QTElem,
    t4: QTElem,
    t41: QTElem,
    phi: QTElem,
    psi: QTElem,
    e1: QTElem,
    e4: QTElem,
    c: QTElem,
}

fn handle_data(g: &Arc<SausageGraph>, t: &SigmaTable) -> HandleData {
    let gamma = g.gamma(2).unwrap();
    let CurveKind::Separating { c, d } = gamma.kind else { unreachable!() };
    let (d1, d4) = (d[0], d[3]);
    let beta_id = g
        .catalogue()
        .into_iter()
        .find(|x| matches!(x.kind, CurveKind::TwoCycle { b, c, .. } if b == d1 && c == d4))
        .unwrap();
    let x = t.sigma(&gamma).unwrap();
    HandleData {
        beta: t.sigma(&beta_id).unwrap(),
        t1: t.sigma(&beta_id.twisted(d1, 1)).unwrap(),
        t4: t.sigma(&beta_id.twisted(d4, 1)).unwrap(),
        t41: t.sigma(&beta_id.twisted(d1, 1).twisted(d4, 1)).unwrap(),
        phi: x.sub(&twist_image(&x, &gamma, c, 1, t).unwrap()),
        psi: t.sigma(&g.tau(c, true).unwrap()).unwrap().sub(&t.sigma(&g.tau(c, false).unwrap()).unwrap()),
        e1: t.pants(d1).unwrap(),
        e4: t.pants(d4).unwrap(),
        c: t.pants(c).unwrap(),
    }
}

fn c000(h: &HandleData, with_d1: bool) -> QTElem {
    let br = |x: &QTElem, y: &QTElem| commutator_a(x, y).unwrap();
    let first = br(&h.psi, &h.t4);
    let first = if with_d1 { first.mul(&h.e1) } else { first };
    let items = [
        first.neg(),
        br(&h.psi, &h.t41).mul_a(-1),
        br(&h.beta, &h.phi).mul_a(-1),
        br(&h.beta, &h.psi).mul(&h.c).mul_a(1).neg(),
        br(&h.psi, &h.beta).mul(&h.e1).mul(&h.e4).mul_a(1),
        br(&h.psi, &h.t1).mul(&h.e4).neg(),
    ];
    QTElem::sum(h.beta.graph(), items.iter())
}

#[test]
fn c000_needs_the_d1_factor() {
    let g = graph(3, true);
    let t = SigmaTable::build(&g).unwrap();
    let h = handle_data(&g, &t);
    assert!(c000(&h, true).is_zero());
    assert!(!c000(&h, false).is_zero());
}

#[test]
fn c_tau_relation_uses_gamma() {
    let g = graph(3, true);
    let t = SigmaTable::build(&g).unwrap();
    let s = t.scalars();
    for &c in g.separating_edges() {
        let gamma = t.sigma(&g.gamma_at(c).unwrap()).unwrap();
        let tau = t.sigma(&g.tau(c, false).unwrap()).unwrap();
        let cc = t.pants(c).unwrap();
        let sc = t.sep_scalars(c).unwrap();
        let tail = s.elem(sc.delta2.mul(&s.uf(2, &[])).mul(&s.monof(-1, 2, &[])));
        let with = |x: &QTElem| {
            let items = [tau.mul(&cc).mul_a(4), x.mul_frac(&s.uf(4, &[])).mul_a(2).neg(), tail.clone()];
            QTElem::sum(&g, items.iter())
        };
        assert_eq!(cc.mul(&tau), with(&gamma));
        assert_ne!(cc.mul(&tau), with(&cc));
    }
}
