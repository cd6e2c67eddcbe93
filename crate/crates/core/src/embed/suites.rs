use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::formulas::{one_cycle_f, two_cycle_d, two_cycle_f, Scalars};
use super::{twist_image, EmbedError, Mutation, SigmaTable};
use crate::exactalg::Frac;
use crate::qtorus::{commutator_a, QTElem};
use crate::sausage::{CurveId, CurveKind, EExps, EdgeRole, SausageGraph, ZERO_E};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SuiteId {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    S8,
    S9,
    S10,
    S11,
}

impl SuiteId {
    pub const ALL: [SuiteId; 11] = [
        SuiteId::S1,
        SuiteId::S2,
        SuiteId::S3,
        SuiteId::S4,
        SuiteId::S5,
        SuiteId::S6,
        SuiteId::S7,
        SuiteId::S8,
        SuiteId::S9,
        SuiteId::S10,
        SuiteId::S11,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::S1 => "S1",
            SuiteId::S2 => "S2",
            SuiteId::S3 => "S3",
            SuiteId::S4 => "S4",
            SuiteId::S5 => "S5",
            SuiteId::S6 => "S6",
            SuiteId::S7 => "S7",
            SuiteId::S8 => "S8",
            SuiteId::S9 => "S9",
            SuiteId::S10 => "S10",
            SuiteId::S11 => "S11",
        }
    }

    pub fn parse(s: &str) -> Option<SuiteId> {
        SuiteId::ALL.into_iter().find(|id| id.name().eq_ignore_ascii_case(s.trim()))
    }

    pub fn description(self) -> &'static str {
        match self {
            SuiteId::S1 => "pants images and torus relations",
            SuiteId::S2 => "one-cycle lifts",
            SuiteId::S3 => "one-cycle product identity",
            SuiteId::S4 => "two-cycle lifts",
            SuiteId::S5 => "two-cycle inverse products and commutation",
            SuiteId::S6 => "separating lifts and tau relations",
            SuiteId::S7 => "Y2 Y-2 closed form",
            SuiteId::S8 => "gamma tau and phi c reductions",
            SuiteId::S9 => "edge square versus one-cycle commutators",
            SuiteId::S10 => "edge square versus two-cycle commutators",
            SuiteId::S11 => "intersection-one and tau-bar products",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Perturb one coefficient (`A -> A^2`) of the suite's main curve.
    pub mutate: bool,
}

#[derive(Clone, Debug)]
pub struct IdentityResult {
    pub id: String,
    pub pass: bool,
    /// `lhs - rhs` when nonzero.
    pub residual: Option<QTElem>,
    /// Free-form values for checks whose residual is not a torus element.
    pub detail: Option<String>,
}

impl IdentityResult {
    pub fn residual_terms(&self) -> usize {
        self.residual.as_ref().map(|r| r.terms().len()).unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub genus: u32,
    pub closed: bool,
    pub mutated: bool,
    pub identities: Vec<IdentityResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.identities.is_empty() && self.identities.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityResult> {
        self.identities.iter().filter(|r| !r.pass)
    }
}

struct Rec<'a> {
    s: &'a Scalars,
    out: Vec<IdentityResult>,
}

impl Rec<'_> {
    fn eq(&mut self, id: String, lhs: &QTElem, rhs: &QTElem) {
        let r = lhs.sub(rhs);
        let pass = r.is_zero();
        self.out.push(IdentityResult { id, pass, residual: if pass { None } else { Some(r) }, detail: None });
    }

    fn zero(&mut self, id: String, x: &QTElem) {
        let pass = x.is_zero();
        self.out.push(IdentityResult { id, pass, residual: if pass { None } else { Some(x.clone()) }, detail: None });
    }

    fn eqf(&mut self, id: String, lhs: &Frac, rhs: &Frac) {
        let (l, r) = (self.s.elem(lhs.clone()), self.s.elem(rhs.clone()));
        self.eq(id, &l, &r);
    }
}

fn curves_of(g: &SausageGraph, pred: impl Fn(&CurveKind) -> bool) -> Vec<CurveId> {
    g.catalogue().into_iter().filter(|c| pred(&c.kind)).collect()
}

fn one_cycles(g: &SausageGraph) -> Vec<CurveId> {
    curves_of(g, |k| matches!(k, CurveKind::OneCycle { .. }))
}

fn two_cycles(g: &SausageGraph) -> Vec<CurveId> {
    curves_of(g, |k| matches!(k, CurveKind::TwoCycle { .. }))
}

fn separating(g: &SausageGraph) -> Vec<CurveId> {
    curves_of(g, |k| matches!(k, CurveKind::Separating { .. }))
}

/// A separating curve with a loop `e` on one side and the one-cycle `beta` at that loop.
struct LoopConfig {
    gamma: CurveId,
    c: usize,
    e: usize,
    beta: CurveId,
}

fn loop_configs(g: &SausageGraph) -> Vec<LoopConfig> {
    let mut out = Vec::new();
    for gamma in separating(g) {
        let CurveKind::Separating { c, d } = gamma.kind else { continue };
        for (x, y) in [(d[0], d[3]), (d[1], d[2])] {
            if x != y || g.role(x) != EdgeRole::Loop {
                continue;
            }
            if let Some(beta) = one_cycles(g).into_iter().find(|b| matches!(b.kind, CurveKind::OneCycle { e, .. } if e == x)) {
                out.push(LoopConfig { gamma: gamma.clone(), c, e: x, beta });
            }
        }
    }
    out
}

/// A separating curve with a handle `(d1, d4)` on one side and the two-cycle through it.
struct HandleConfig {
    gamma: CurveId,
    c: usize,
    d1: usize,
    d4: usize,
    beta: CurveId,
}

fn handle_configs(g: &SausageGraph) -> Vec<HandleConfig> {
    let mut out = Vec::new();
    for gamma in separating(g) {
        let CurveKind::Separating { c, d } = gamma.kind else { continue };
        for (x, y) in [(d[0], d[3]), (d[1], d[2])] {
            if x == y {
                continue;
            }
            let found = two_cycles(g)
                .into_iter()
                .find(|b| matches!(b.kind, CurveKind::TwoCycle { b, c, .. } if b == x && c == y));
            if let Some(beta) = found {
                out.push(HandleConfig { gamma: gamma.clone(), c, d1: x, d4: y, beta });
            }
        }
    }
    out
}

fn key_of(ks: &[(usize, i16)]) -> EExps {
    let mut k = ZERO_E;
    for &(e, x) in ks {
        k[e] += x;
    }
    k
}

fn mutation_target(suite: SuiteId, g: &SausageGraph) -> Option<Mutation> {
    let first = |v: Vec<CurveId>| v.into_iter().next();
    match suite {
        SuiteId::S1 => Some(Mutation { curve: g.alpha(0).ok()?, key: key_of(&[]) }),
        SuiteId::S2 | SuiteId::S3 => {
            let beta = first(one_cycles(g))?;
            let CurveKind::OneCycle { e, .. } = beta.kind else { return None };
            Some(Mutation { curve: beta, key: key_of(&[(e, -1)]) })
        }
        SuiteId::S4 | SuiteId::S5 => {
            let beta = first(two_cycles(g))?;
            let CurveKind::TwoCycle { b, c, .. } = beta.kind else { return None };
            Some(Mutation { curve: beta, key: key_of(&[(b, -1), (c, -1)]) })
        }
        SuiteId::S11 => Some(Mutation { curve: first(separating(g))?, key: key_of(&[]) }),
        SuiteId::S6 | SuiteId::S7 | SuiteId::S8 => {
            let gamma = first(separating(g))?;
            let CurveKind::Separating { c, .. } = gamma.kind else { return None };
            Some(Mutation { curve: gamma, key: key_of(&[(c, -2)]) })
        }
        SuiteId::S9 => {
            let cfg = loop_configs(g).into_iter().next()?;
            Some(Mutation { curve: cfg.beta, key: key_of(&[(cfg.e, -1)]) })
        }
        SuiteId::S10 => {
            let cfg = handle_configs(g).into_iter().next()?;
            Some(Mutation { curve: cfg.beta, key: key_of(&[(cfg.d1, -1), (cfg.d4, -1)]) })
        }
    }
}

fn has_config(suite: SuiteId, g: &SausageGraph) -> bool {
    match suite {
        SuiteId::S1 => true,
        SuiteId::S2 | SuiteId::S3 => !one_cycles(g).is_empty(),
        SuiteId::S4 | SuiteId::S5 => !two_cycles(g).is_empty(),
        SuiteId::S6 | SuiteId::S7 | SuiteId::S8 | SuiteId::S11 => !separating(g).is_empty(),
        SuiteId::S9 => !loop_configs(g).is_empty(),
        SuiteId::S10 => !handle_configs(g).is_empty(),
    }
}

/// Builds the table (mutated if requested) and checks every identity of the suite.
pub fn run_identity_suite(
    suite: SuiteId,
    graph: &Arc<SausageGraph>,
    opts: SuiteOptions,
) -> Result<SuiteReport, EmbedError> {
    if !has_config(suite, graph) {
        return Err(EmbedError::ConfigTooSmall { suite: String::from(suite.name()), graph: format!("{graph}") });
    }
    let mutation = if opts.mutate { mutation_target(suite, graph) } else { None };
    let table = SigmaTable::build_with(graph, mutation)?;
    run_suite_on(suite, &table)
}

/// Checks a suite against an existing table.
pub fn run_suite_on(suite: SuiteId, table: &SigmaTable) -> Result<SuiteReport, EmbedError> {
    let g = table.graph();
    if !has_config(suite, g) {
        return Err(EmbedError::ConfigTooSmall { suite: String::from(suite.name()), graph: format!("{g}") });
    }
    let mut rec = Rec { s: table.scalars(), out: Vec::new() };
    match suite {
        SuiteId::S1 => s1(table, &mut rec)?,
        SuiteId::S2 => s2(table, &mut rec)?,
        SuiteId::S3 => s3(table, &mut rec)?,
        SuiteId::S4 => s4(table, &mut rec)?,
        SuiteId::S5 => s5(table, &mut rec)?,
        SuiteId::S6 => s6(table, &mut rec)?,
        SuiteId::S7 => s7(table, &mut rec)?,
        SuiteId::S8 => s8(table, &mut rec)?,
        SuiteId::S9 => s9(table, &mut rec)?,
        SuiteId::S10 => s10(table, &mut rec)?,
        SuiteId::S11 => s11(table, &mut rec)?,
    }
    Ok(SuiteReport {
        suite: String::from(suite.name()),
        genus: g.genus(),
        closed: g.closed(),
        mutated: table.mutation().is_some(),
        identities: rec.out,
    })
}

fn s1(t: &SigmaTable, rec: &mut Rec) -> Result<(), EmbedError> {
    let g = t.graph();
    let s = t.scalars();
    for e in g.internal_edges() {
        let name = g.edge_name(e);
        let q = s.elem(s.monof(1, 0, &[(e, 1)]));
        for f in g.internal_edges() {
            let ef = s.term(&[(f, 1)], s.int(1));
            let rhs = if e == f { ef.mul(&q).mul_a(1) } else { ef.mul(&q) };
            rec.eq(format!("torus[{name},{}]", g.edge_name(f)), &q.mul(&ef), &rhs);
        }
        let form = s.elem(Frac::from_poly(s.mono(-1, 2, &[(e, 2)]).add(&s.mono(-1, -2, &[(e, -2)]))));
        rec.eq(format!("alpha_form[{name}]"), &t.pants(e)?, &form);
    }
    Ok(())
}

struct OneCycleData {
    label: String,
    e: usize,
    f: usize,
    x: QTElem,
    te: QTElem,
    inner1: QTElem,
    inner2: QTElem,
}

fn one_cycle_data(t: &SigmaTable) -> Result<Vec<OneCycleData>, EmbedError> {
    let s = t.scalars();
    let mut out = Vec::new();
    for beta in one_cycles(t.graph()) {
        let CurveKind::OneCycle { e, f } = beta.kind else { continue };
        let x = t.sigma(&beta)?;
        let te = t.sigma(&beta.twisted(e, 1))?;
        let inner1 = te.add(&x.mul_frac(&s.monof(1, -1, &[(e, -2)])));
        let inner2 = x.mul_frac(&s.monof(1, 3, &[(e, 2)])).add(&te);
        out.push(OneCycleData { label: beta.label.clone(), e, f, x, te, inner1, inner2 });
    }
    Ok(out)
}

fn s2(t: &SigmaTable, rec: &mut Rec) -> Result<(), EmbedError> {
    let s = t.scalars();
    for d in one_cycle_data(t)? {
        let e = d.e;
        let f_coef = one_cycle_f(s, e, d.f);
        let u = s.uf(2, &[(e, 2)]);
        let rhs1 = d.inner1.mul_frac(&s.monof(-1, -1, &[]).div(&u)?);
        rec.eq(format!("lift_e[{}]", d.label), &s.term(&[(e, 1)], s.int(1)), &rhs1);
        let rhs2 = d.inner2.mul_frac(&s.monof(1, -1, &[]).div(&u)?.div(&f_coef)?);
        rec.eq(format!("lift_e_inv[{}]", d.label), &s.term(&[(e, -1)], s.int(1)), &rhs2);
        let form = s.term(&[(e, 1)], s.int(1)).add(&s.term(&[(e, -1)], f_coef.clone()));
        rec.eq(format!("sigma_form[{}]", d.label), &d.x, &form);
        let twisted = s
            .term(&[(e, 1)], s.monof(-1, 3, &[(e, 2)]))
            .add(&s.term(&[(e, -1)], s.monof(-1, -1, &[(e, -2)]).mul(&f_coef)));
        rec.eq(format!("twist_form[{}]", d.label), &d.te, &twisted);
    }
    Ok(())
}

fn s3(t: &SigmaTable, rec: &mut Rec) -> Result<(), EmbedError> {
    let s = t.scalars();
    for d in one_cycle_data(t)? {
        let e = d.e;
        let rhs = s.mono(1, 2, &[(e, 4)]).add(&s.mono(1, -2, &[(e, -4)])).add(&s.pants(d.f)).mul(&s.mono(-1, 2, &[]));
        let rhs = Frac::from_poly(rhs);
        rec.eq(format!("pic[{}]", d.label), &d.inner1.mul(&d.inner2), &s.elem(rhs.clone()));
        let norm = s.monof(-1, 2, &[]).mul(&s.uf(0, &[(e, 2)])).mul(&s.uf(2, &[(e, 2)])).mul(&one_cycle_f(s, e, d.f));
        rec.eqf(format!("pic_normalization[{}]", d.label), &norm, &rhs);
    }
    Ok(())
}

struct TwoCycleData {
    label: String,
    b: usize,
    c: usize,
    a: usize,
    a2: usize,
    x: QTElem,
    /// `X_{1,1}, X_{1,-1}, X_{-1,1}, X_{-1,-1}`.
    xs: [QTElem; 4],
}

fn two_cycle_data(t: &SigmaTable) -> Result<Vec<TwoCycleData>, EmbedError> {
    let s = t.scalars();
    let mut out = Vec::new();
    for beta in two_cycles(t.graph()) {
        let CurveKind::TwoCycle { b, c, a, a2 } = beta.kind else { continue };
        let x = t.sigma(&beta)?;
        let tb = t.sigma(&beta.twisted(b, 1))?;
        let tc = t.sigma(&beta.twisted(c, 1))?;
        let tbtc = t.sigma(&beta.twisted(c, 1).twisted(b, 1))?;
        let bracket = |gq: (i32, i32, i32), bq: (i32, i32), cq: (i32, i32)| {
            let items = [
                x.mul_frac(&s.monof(1, gq.0, &[(b, gq.1), (c, gq.2)])),
                tb.mul_frac(&s.monof(1, bq.0, &[(c, bq.1)])),
                tc.mul_frac(&s.monof(1, cq.0, &[(b, cq.1)])),
                tbtc.clone(),
            ];
            QTElem::sum(&s.graph, items.iter())
        };
        let x11 = bracket((-2, -2, -2), (-1, -2), (-1, -2));
        let x1m = bracket((2, -2, 2), (3, 2), (-1, -2)).neg();
        let xm1 = bracket((2, 2, -2), (-1, -2), (3, 2)).neg();
        let xmm = bracket((6, 2, 2), (3, 2), (3, 2));
        out.push(TwoCycleData { label: beta.label.clone(), b, c, a, a2, x, xs: [x11, x1m, xm1, xmm] });
    }
    Ok(out)
}

fn s4(t: &SigmaTable, rec: &mut Rec) -> Result<(), EmbedError> {
    let s = t.scalars();
    for d in two_cycle_data(t)? {
        let (b, c) = (d.b, d.c);
        let [f_pm, f_mp, f_mm] = two_cycle_f(s, b, c, d.a, d.a2);
        let dinv = s.inv(&two_cycle_d(s, b, c));
        let lhs = [
            s.term(&[(b, 1), (c, 1)], s.int(1)),
            s.term(&[(b, 1), (c, -1)], f_pm.clone()),
            s.term(&[(b, -1), (c, 1)], f_mp.clone()),
            s.term(&[(b, -1), (c, -1)], f_mm.clone()),
        ];
        for (i, (l, xx)) in lhs.iter().zip(d.xs.iter()).enumerate() {
            rec.eq(format!("lift{}[{}]", i + 1, d.label), l, &xx.mul_frac(&dinv));
        }
        rec.eq(format!("sigma_form[{}]", d.label), &d.x, &QTElem::sum(&s.graph, lhs.iter()));
    }
    Ok(())
}

fn s5(t: &SigmaTable, rec: &mut Rec) -> Result<(), EmbedError> {
    let s = t.scalars();
    for d in two_cycle_data(t)? {
        let (b, c) = (d.b, d.c);
        let [f_pm, f_mp, f_mm] = two_cycle_f(s, b, c, d.a, d.a2);
        let dd = two_cycle_d(s, b, c);
        let [x11, x1m, xm1, xmm] = &d.xs;
        for (eps, lhs_pair, direct) in [
            (1i32, (x11, xmm), (s.term(&[(b, 1), (c, 1)], dd.clone()), s.term(&[(b, -1), (c, -1)], dd.mul(&f_mm)))),
            (
                -1,
                (x1m, xm1),
                (s.term(&[(b, 1), (c, -1)], dd.mul(&f_pm)), s.term(&[(b, -1), (c, 1)], dd.mul(&f_mp))),
            ),
        ] {
            let prod = lhs_pair.0.mul(lhs_pair.1);
            let m = s.mono(1, 2 * eps, &[(b, 2), (c, 2 * eps)]).add(&s.mono(1, -2 * eps, &[(b, -2), (c, -2 * eps)]));
            let closed = s
                .mono(1, 4, &[])
                .mul(&m.add(&s.pants(d.a)))
                .mul(&m.add(&s.pants(d.a2)));
            rec.eq(format!("x_product[{eps},{}]", d.label), &prod, &s.elem(Frac::from_poly(closed)));
            rec.eq(format!("x_product_direct[{eps},{}]", d.label), &prod, &direct.0.mul(&direct.1));
        }
        rec.eq(format!("x_commute[{}]", d.label), &x11.mul(x1m), &x1m.mul(x11));
    }
    Ok(())
}

struct SepData {
    label: String,
    c: usize,
    x: QTElem,
    tau: QTElem,
    tau_bar: QTElem,
    cc: QTElem,
    y2: QTElem,
    ym2: QTElem,
}

fn sep_data(t: &SigmaTable, gamma: &CurveId) -> Result<SepData, EmbedError> {
    let s = t.scalars();
    let g = t.graph();
    let CurveKind::Separating { c, .. } = gamma.kind else {
        return Err(EmbedError::NotAGenerator(gamma.label.clone()));
    };
    let sc = t.sep_scalars(c)?;
    let x = t.sigma(gamma)?;
    let tau = t.sigma(&g.tau(c, false)?)?;
    let tau_bar = t.sigma(&g.tau(c, true)?)?;
    let cc = t.pants(c)?;
    let k1 = sc
        .delta1
        .mul(&s.monof(1, -2, &[(c, -2)]))
        .sub(&sc.delta2.mul(&s.monof(1, 2, &[])))
        .div(&s.uf(4, &[(c, 2)]))?;
    let y2 = x.mul_frac(&s.monof(1, 0, &[(c, -2)])).add(&tau).sub(&s.elem(k1)).neg();
    let k2 = sc.delta1.mul(&s.monof(1, 0, &[(c, 2)])).sub(&sc.delta2).div(&s.uf(0, &[(c, 2)]))?;
    let ym2 = x.mul_frac(&s.monof(1, 2, &[(c, 2)])).add(&tau.mul_a(-2)).add(&s.elem(k2));
    Ok(SepData { label: gamma.label.clone(), c, x, tau, tau_bar, cc, y2, ym2 })
}

fn s6(t: &SigmaTable, rec: &mut Rec) -> Result<(), EmbedError> {
    let s = t.scalars();
    for gamma in separating(t.graph()) {
        let d = sep_data(t, &gamma)?;
        let sc = t.sep_scalars(d.c)?;
        let c = d.c;
        let (x, tau, cc) = (&d.x, &d.tau, &d.cc);
        let lhs = cc.mul(x).mul_a(2).sub(&x.mul(cc).mul_a(-2));
        let rhs = tau.mul_frac(&s.uf(4, &[])).add(&s.elem(sc.delta1.mul(&s.uf(2, &[]))));
        rec.eq(format!("tau_relation[{}]", d.label), &lhs, &rhs);
        let rhs2 = QTElem::sum(
            &s.graph,
            [
                tau.mul(cc).mul_a(4),
                x.mul_frac(&s.uf(4, &[])).mul_a(2).neg(),
                s.elem(sc.delta2.mul(&s.uf(2, &[])).mul(&s.monof(-1, 2, &[]))),
            ]
            .iter(),
        );
        rec.eq(format!("tau_second_relation[{}]", d.label), &cc.mul(tau), &rhs2);
        let lift1 = d.y2.mul_frac(&s.monof(1, -2, &[]).div(&s.uf(2, &[(c, 2)]))?);
        rec.eq(format!("sep_lift1[{}]", d.label), &s.term(&[(c, 2)], sc.g2.clone()), &lift1);
        let lift2 = d.ym2.mul_frac(&s.inv(&s.uf(2, &[(c, 2)])));
        rec.eq(format!("sep_lift2[{}]", d.label), &s.term(&[(c, -2)], sc.gm2.clone()), &lift2);
        let expansion = QTElem::sum(
            &s.graph,
            [
                s.term(&[(c, 2)], sc.g2.mul(&s.monof(1, 8, &[(c, 4)]))),
                s.term(&[], sc.g0.clone()),
                s.term(&[(c, -2)], sc.gm2.mul(&s.monof(1, 0, &[(c, -4)]))),
            ]
            .iter(),
        );
        rec.eq(format!("twist_expansion[{}]", d.label), &t.sigma(&gamma.twisted(c, 1))?, &expansion);
    }
    Ok(())
}

fn p_of_t(s: &Scalars, sc: &super::SepScalars, c: usize) -> Frac {
    let tt = s.monof(1, 0, &[(c, 2)]).add(&s.monof(1, 0, &[(c, -2)]));
    let t2 = tt.mul(&tt);
    let t3 = t2.mul(&tt);
    let t4 = t3.mul(&tt);
    let items = [
        t4.neg(),
        sc.delta3.mul(&t3),
        s.int(8).sub(&sc.big_delta).mul(&t2),
        sc.delta1.mul(&sc.delta2).sub(&sc.delta3.scale_int(&4.into())).mul(&tt),
        sc.big_delta
            .scale_int(&4.into())
            .sub(&s.int(16))
            .sub(&sc.delta1.mul(&sc.delta1))
            .sub(&sc.delta2.mul(&sc.delta2)),
    ];
    Frac::sum(s.n(), items.iter())
}

fn s7(t: &SigmaTable, rec: &mut Rec) -> Result<(), EmbedError> {
    let s = t.scalars();
    for gamma in separating(t.graph()) {
        let d = sep_data(t, &gamma)?;
        let sc = t.sep_scalars(d.c)?;
        let c = d.c;
        let p = p_of_t(s, sc, c);
        let u0 = s.uf(0, &[(c, 2)]);
        let rhs = s.monof(1, 2, &[]).mul(&p).div(&u0.mul(&u0))?;
        let prod = d.y2.mul(&d.ym2);
        rec.eq(format!("y_product[{}]", d.label), &prod.neg(), &s.elem(rhs.clone()));
        let closed = s
            .monof(1, 2, &[])
            .mul(&s.uf(-2, &[(c, 2)]))
            .mul(&sc.g2_hat)
            .mul(&s.uf(2, &[(c, 2)]))
            .mul(&sc.gm2);
        rec.eqf(format!("closed_form[{}]", d.label), &closed, &rhs.neg());
        rec.eq(format!("y_inverse[{}]", d.label), &prod, &s.elem(closed));
        let tt = s.monof(1, 0, &[(c, 2)]).add(&s.monof(1, 0, &[(c, -2)]));
        rec.eqf(format!("u_square[{}]", d.label), &u0.mul(&u0), &tt.mul(&tt).sub(&s.int(4)));
    }
    Ok(())
}

fn s8(t: &SigmaTable, rec: &mut Rec) -> Result<(), EmbedError> {
    let s = t.scalars();
    for gamma in separating(t.graph()) {
        let d = sep_data(t, &gamma)?;
        let sc = t.sep_scalars(d.c)?;
        let c = d.c;
        let (x, tau, cc) = (&d.x, &d.tau, &d.cc);
        let d3 = s.elem(sc.delta3.clone());
        let xt = x.mul(tau);
        let tx = tau.mul(x);
        let phi = xt.sub(&cc.mul_a(2)).sub(&d3).mul_a(2);
        let rhs = QTElem::sum(&s.graph, [cc.mul_a(-2), d3.clone(), phi.mul_a(2)].iter());
        rec.eq(format!("tau_gamma[{}]", d.label), &tx, &rhs);
        let tt = s.monof(1, 0, &[(c, 2)]).add(&s.monof(1, 0, &[(c, -2)]));
        let lhs = xt.mul_frac(&s.monof(1, 0, &[(c, -2)])).add(&tx.mul_frac(&s.monof(1, 0, &[(c, 2)])));
        let coef = s.monof(1, -2, &[(c, 2)]).add(&s.monof(1, 2, &[(c, -2)]));
        let rhs = cc.mul_frac(&coef).add(&s.elem(sc.delta3.mul(&tt))).sub(&phi.mul(cc));
        rec.eq(format!("reduction[{}]", d.label), &lhs, &rhs);
        let a2p = s.monof(1, 2, &[]).add(&s.monof(1, -2, &[]));
        let items = [
            s.elem(sc.big_delta.sub(&a2p.mul(&a2p))),
            x.mul(x).mul_a(4),
            x.mul_frac(&sc.delta2).mul_a(2),
            tau.mul_frac(&sc.delta1).mul_a(-2),
            tau.mul(tau).mul_a(-4),
        ];
        rec.eq(format!("phi_c[{}]", d.label), &phi.mul(cc), &QTElem::sum(&s.graph, items.iter()));
    }
    Ok(())
}

fn br(x: &QTElem, y: &QTElem) -> QTElem {
    commutator_a(x, y).expect("same graph")
}

fn s9(t: &SigmaTable, rec: &mut Rec) -> Result<(), EmbedError> {
    let s = t.scalars();
    let g = t.graph();
    for cfg in loop_configs(g) {
        let d = sep_data(t, &cfg.gamma)?;
        let sc = t.sep_scalars(cfg.c)?;
        let (c, e) = (cfg.c, cfg.e);
        let tag = format!("{},{}", d.label, g.edge_name(e));
        let beta = t.sigma(&cfg.beta)?;
        let teb = t.sigma(&cfg.beta.twisted(e, 1))?;
        let phi = d.x.sub(&twist_image(&d.x, &cfg.gamma, c, 1, t)?);
        let psi = d.tau_bar.sub(&d.tau);
        let ee = t.pants(e)?;
        let cc = &d.cc;
        let a = |x: QTElem, k: i32| x.mul_a(k);
        let c1 = QTElem::sum(
            &s.graph,
            [a(br(&teb, &psi), 5).neg(), a(br(&phi, &teb), 3).neg(), a(br(&phi, &beta).mul(&ee), 4)].iter(),
        );
        let c2 = QTElem::sum(
            &s.graph,
            [
                a(br(&teb, &phi), 1),
                a(br(&teb, &psi).mul(cc), 3).neg(),
                a(br(&psi, &teb), 3).neg(),
                a(br(&psi, &beta).mul(&ee), 4),
            ]
            .iter(),
        );
        let c3 = QTElem::sum(
            &s.graph,
            [
                a(br(&beta, &psi), 4).neg(),
                a(br(&phi, &teb).mul(&ee), 1).neg(),
                a(br(&phi, &beta).mul(&ee).mul(&ee), 2),
                a(br(&phi, &beta), 2).neg(),
            ]
            .iter(),
        );
        let c4 = QTElem::sum(
            &s.graph,
            [
                br(&beta, &phi),
                a(br(&beta, &psi).mul(cc), 2).neg(),
                a(br(&psi, &teb).mul(&ee), 1).neg(),
                a(br(&psi, &beta).mul(&ee).mul(&ee), 2),
                a(br(&psi, &beta), 2).neg(),
            ]
            .iter(),
        );
        for (i, ci) in [c1, c2, c3, c4].iter().enumerate() {
            rec.zero(format!("C{}[{tag}]", i + 1), ci);
        }
        let y2p = phi.add(&psi.mul_frac(&s.monof(1, 0, &[(c, -2)])));
        let scale = s.monof(-1, -2, &[]).div(&s.uf(4, &[(c, 2)]).mul(&s.uf(2, &[(c, 2)])))?;
        rec.eq(format!("y2_prime_lift[{tag}]"), &s.term(&[(c, 2)], sc.g2.clone()), &y2p.mul_frac(&scale));
        let x1 = teb.add(&beta.mul_frac(&s.monof(1, -1, &[(e, -2)])));
        let total = br(&x1, &y2p)
            .mul_frac(&s.monof(1, 1, &[(e, 2)]))
            .add(&br(&y2p, &x1).mul_frac(&s.monof(1, -1, &[(e, -2), (c, 2)])));
        rec.zero(format!("expression[{tag}]"), &total);
    }
    Ok(())
}

fn s10(t: &SigmaTable, rec: &mut Rec) -> Result<(), EmbedError> {
    let s = t.scalars();
    let g = t.graph();
    for cfg in handle_configs(g) {
        let d = sep_data(t, &cfg.gamma)?;
        let (c, d1, d4) = (cfg.c, cfg.d1, cfg.d4);
        let tag = format!("{},{}", d.label, cfg.beta.label);
        let beta = t.sigma(&cfg.beta)?;
        let t1 = t.sigma(&cfg.beta.twisted(d1, 1))?;
        let t4 = t.sigma(&cfg.beta.twisted(d4, 1))?;
        let t41 = t.sigma(&cfg.beta.twisted(d1, 1).twisted(d4, 1))?;
        let t14 = t.sigma(&cfg.beta.twisted(d4, 1).twisted(d1, 1))?;
        rec.eq(format!("twists_commute[{tag}]"), &t41, &t14);
        let phi = d.x.sub(&twist_image(&d.x, &cfg.gamma, c, 1, t)?);
        let psi = d.tau_bar.sub(&d.tau);
        let (e1, e4) = (t.pants(d1)?, t.pants(d4)?);
        let cc = &d.cc;
        let a = |x: QTElem, k: i32| x.mul_a(k);
        let sum = |items: &[QTElem]| QTElem::sum(&s.graph, items.iter());
        let c111 = sum(&[a(br(&t41, &psi), 5).neg(), a(br(&phi, &beta), 5)]);
        let c110 = sum(&[a(br(&psi, &beta), 5), a(br(&t41, &psi).mul(cc), 3).neg(), a(br(&t41, &phi), 1)]);
        let c101 = sum(&[a(br(&phi, &t4), 2).neg(), a(br(&phi, &beta).mul(&e4), 3), a(br(&t1, &psi), 4).neg()]);
        let c011 = sum(&[a(br(&phi, &t1), 2).neg(), a(br(&phi, &beta).mul(&e1), 3), a(br(&t4, &psi), 4).neg()]);
        let c001 = sum(&[
            a(br(&beta, &psi), 3).neg(),
            br(&phi, &t1).mul(&e4).neg(),
            a(br(&phi, &beta).mul(&e1).mul(&e4), 1),
            a(br(&phi, &t41), -1),
            br(&phi, &t4).mul(&e1).neg(),
        ]);
        let c010 = sum(&[
            a(br(&psi, &beta).mul(&e1), 3),
            br(&t4, &phi),
            a(br(&t4, &psi).mul(cc), 2).neg(),
            a(br(&psi, &t1), 2).neg(),
        ]);
        let c100 = sum(&[
            a(br(&t1, &psi).mul(cc), 2).neg(),
            br(&t1, &phi),
            a(br(&psi, &t4), 2).neg(),
            a(br(&psi, &beta).mul(&e4), 3),
        ]);
        let c000 = sum(&[
            br(&psi, &t4).mul(&e1).neg(),
            a(br(&psi, &t41), -1),
            a(br(&beta, &phi), -1),
            a(br(&beta, &psi).mul(cc), 1).neg(),
            a(br(&psi, &beta).mul(&e1).mul(&e4), 1),
            br(&psi, &t1).mul(&e4).neg(),
        ]);
        let d111 = sum(&[a(br(&phi, &beta).mul(&e4), 5), a(br(&t1, &psi), 6).neg(), a(br(&phi, &t4), 4).neg()]);
        let d110 = sum(&[
            a(br(&psi, &beta).mul(&e4), 5),
            a(br(&t1, &phi), 2),
            a(br(&t1, &psi).mul(cc), 4).neg(),
            a(br(&psi, &t4), 4).neg(),
        ]);
        let d101 = sum(&[a(br(&phi, &beta), 3), a(br(&t14, &psi), 3).neg()]);
        let d011 = sum(&[
            a(br(&phi, &t1).mul(&e4), 2).neg(),
            a(br(&phi, &beta).mul(&e1).mul(&e4), 3),
            a(br(&beta, &psi), 5).neg(),
            a(br(&phi, &t41), 1),
            a(br(&phi, &t4).mul(&e1), 2).neg(),
        ]);
        let d001 = sum(&[br(&phi, &t1).neg(), a(br(&phi, &beta).mul(&e1), 1), a(br(&t4, &psi), 2).neg()]);
        let d010 = sum(&[
            a(br(&psi, &t1).mul(&e4), 2).neg(),
            a(br(&beta, &psi).mul(cc), 3).neg(),
            a(br(&beta, &phi), 1),
            a(br(&psi, &beta).mul(&e1).mul(&e4), 3),
            a(br(&psi, &t14), 1),
            a(br(&psi, &t4).mul(&e1), 2).neg(),
        ]);
        let d100 = sum(&[a(br(&psi, &beta), 3), a(br(&t14, &phi), -1), a(br(&t14, &psi).mul(cc), 1).neg()]);
        let d000 = sum(&[
            a(br(&psi, &beta).mul(&e1), 1),
            br(&psi, &t1).neg(),
            br(&t4, &psi).mul(cc).neg(),
            a(br(&t4, &phi), -2),
        ]);
        let cs = [
            ("111", &c111),
            ("110", &c110),
            ("101", &c101),
            ("011", &c011),
            ("001", &c001),
            ("010", &c010),
            ("100", &c100),
            ("000", &c000),
        ];
        for (name, ci) in cs {
            rec.zero(format!("C{name}[{tag}]"), ci);
        }
        let ds = [
            ("111", &d111, &c101, 2),
            ("110", &d110, &c100, 2),
            ("101", &d101, &c111, -2),
            ("011", &d011, &c001, 2),
            ("001", &d001, &c011, -2),
            ("010", &d010, &c000, 2),
            ("100", &d100, &c110, -2),
            ("000", &d000, &c010, -2),
        ];
        for (name, di, ci, k) in ds {
            rec.eq(format!("D{name}[{tag}]"), di, &ci.mul_a(k));
        }
    }
    Ok(())
}

fn s11(t: &SigmaTable, rec: &mut Rec) -> Result<(), EmbedError> {
    let s = t.scalars();
    let g = t.graph();
    for curve in g.catalogue() {
        if !matches!(curve.kind, CurveKind::OneCycle { .. } | CurveKind::TwoCycle { .. }) {
            continue;
        }
        let x = t.sigma(&curve)?;
        for e in g.internal_edges().filter(|&e| g.intersection(&curve, e) == 1) {
            let tag = format!("{},{}", g.edge_name(e), curve.label);
            let plus = x.twist_automorphism(e, 1);
            let minus = x.twist_automorphism(e, -1);
            let rhs = plus.mul_a(1).add(&minus.mul_a(-1));
            rec.eq(format!("ab[{tag}]"), &t.pants(e)?.mul(&x), &rhs);
            rec.eq(format!("route_plus[{tag}]"), &t.sigma(&curve.twisted(e, 1))?, &plus);
            rec.eq(format!("route_minus[{tag}]"), &t.sigma(&curve.twisted(e, -1))?, &minus);
        }
    }
    for gamma in separating(g) {
        let d = sep_data(t, &gamma)?;
        let sc = t.sep_scalars(d.c)?;
        let inv = t.sigma(&gamma.twisted(d.c, -1))?;
        let rhs = QTElem::sum(&s.graph, [inv.mul_a(2), s.elem(sc.delta2.clone()), d.x.mul_a(-2)].iter());
        rec.eq(format!("taubar_c[{}]", d.label), &d.tau_bar.mul(&d.cc), &rhs);
    }
    Ok(())
}
