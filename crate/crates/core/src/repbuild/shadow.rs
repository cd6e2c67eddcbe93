use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::HashMap;

use super::cmatrix::CMatrix;
use super::linalg::{rank_of, Echelon, SparseRow};
use super::rep::{eval_element, Rep};
use super::RepError;
use crate::embed::{IdentityResult, SigmaTable, SuiteReport};
use crate::exactalg::Cyclo;
use crate::qtorus::QTElem;
use crate::sausage::{CurveId, CurveKind, ZERO_E};

/// `T_k(M)` with `T_0 = 2 Id`, `T_1 = M`, `T_{k+1} = M T_k - T_{k-1}`.
pub fn chebyshev_t(k: u32, m: &CMatrix) -> CMatrix {
    let two = Cyclo::from_int(m.field(), 2);
    let mut prev = CMatrix::scalar(m.field(), m.dim(), &two);
    if k == 0 {
        return prev;
    }
    let mut cur = m.clone();
    for _ in 1..k {
        let next = m.mul(&cur).sub(&prev);
        prev = core::mem::replace(&mut cur, next);
    }
    cur
}

/// The scalar `T_p(rho(c))`, i.e. `-Tr r(c)`.
fn r_value(curve: &CurveId, r: &Rep, t: &SigmaTable) -> Result<Cyclo, RepError> {
    let m = eval_element(&t.sigma(curve)?, r)?;
    chebyshev_t(r.p(), &m).as_scalar().ok_or_else(|| RepError::NotScalar(t.graph().curve_text(curve)))
}

/// `Tr r(c)`: minus the scalar `T_p(rho(c))`.
pub fn classical_shadow(curve: &CurveId, r: &Rep, t: &SigmaTable) -> Result<Cyclo, RepError> {
    Ok(r_value(curve, r, t)?.neg())
}

struct Checks<'a> {
    r: &'a Rep,
    out: Vec<IdentityResult>,
}

impl Checks<'_> {
    fn eq(&mut self, id: String, lhs: &Cyclo, rhs: &Cyclo) {
        let pass = lhs == rhs;
        let detail = (!pass).then(|| format!("lhs = {lhs}, rhs = {rhs}"));
        self.out.push(IdentityResult { id, pass, residual: None, detail });
    }

    fn scalar_eq(&mut self, id: String, m: &CMatrix, rhs: &Cyclo) {
        match m.as_scalar() {
            Some(s) => self.eq(id, &s, rhs),
            None => self.out.push(IdentityResult {
                id,
                pass: false,
                residual: None,
                detail: Some(String::from("not a scalar matrix")),
            }),
        }
    }

    fn mat_eq(&mut self, id: String, lhs: &CMatrix, rhs: &CMatrix) {
        let pass = lhs == rhs;
        let detail = (!pass).then(|| format!("{} differing entries", lhs.sub(rhs).nnz()));
        self.out.push(IdentityResult { id, pass, residual: None, detail });
    }

    fn pow_of(&self, x: &QTElem) -> Result<CMatrix, RepError> {
        Ok(eval_element(x, self.r)?.pow(self.r.p()))
    }

    fn scalar(&self, m: &CMatrix, what: &str) -> Result<Cyclo, RepError> {
        m.as_scalar().ok_or_else(|| RepError::NotScalar(String::from(what)))
    }
}

/// `prod_k U((-A)^k z)` over `k = 0..p-1`.
fn u_product(r: &Rep, z: &Cyclo) -> Result<Cyclo, RepError> {
    let minus_a = Cyclo::a_pow(r.field(), 1).neg();
    let mut acc = Cyclo::one(r.field());
    for k in 0..r.p() as i64 {
        let w = minus_a.pow(k)?.mul(z);
        acc = acc.mul(&w.sub(&w.inv()?));
    }
    Ok(acc)
}

/// Central `p`-th power scalars against the closed formulas built from
/// classical shadows of the generator curves and their twists.
pub fn verify_cshadow(r: &Rep, t: &SigmaTable) -> Result<SuiteReport, RepError> {
    let g = t.graph().clone();
    let field = r.field().clone();
    let p = r.p() as i64;
    let n = r.dim();
    let id = |c: &Cyclo| CMatrix::scalar(&field, n, c);
    let mut ck = Checks { r, out: Vec::new() };
    let xp = |e: usize, k: i64| r.edge_value(e).pow(k * p);
    let yp = |e: usize, k: i64| r.y()[e].pow(k * p);
    for curve in g.catalogue() {
        let label = curve.label.clone();
        match curve.kind {
            CurveKind::OneCycle { e, .. } => {
                let sigma = t.sigma(&curve)?;
                let q2p = eval_element(&QTElem::q_mono(&g, 1, 0, &[(e, 2 * p as i32)]), r)?;
                ck.scalar_eq(format!("q_power[{label}]"), &q2p, &xp(e, 2)?);
                let mut k = ZERO_E;
                k[e] = p as i16;
                let ep = eval_element(&QTElem::e_pow(&g, k), r)?;
                ck.scalar_eq(format!("e_power[{label}]"), &ep, &yp(e, 1)?);
                let rg = r_value(&curve, r, t)?;
                let rt = r_value(&curve.twisted(e, 1), r, t)?;
                let (x2, xm2) = (xp(e, 2)?, xp(e, -2)?);
                let formula = rg.mul(&xm2).add(&rt).div(&x2.sub(&xm2))?;
                ck.eq(format!("one_cycle_statement[{label}]"), &yp(e, 1)?, &formula);
                let solved = rt.sub(&rg.mul(&xm2)).div(&x2.sub(&xm2))?;
                ck.eq(format!("one_cycle_solved[{label}]"), &yp(e, 1)?, &solved);
                let mut km = ZERO_E;
                km[e] = -1;
                let tail = ck.pow_of(&QTElem::term(&g, km, sigma.coeff(&km)))?;
                let big = ck.scalar(&tail, "one-cycle tail power")?;
                let head = yp(e, 1)?;
                ck.eq(format!("one_cycle_system_1[{label}]"), &rg, &head.add(&big));
                ck.eq(
                    format!("one_cycle_system_2[{label}]"),
                    &rt,
                    &head.mul(&x2).add(&big.mul(&xm2)),
                );
            }
            CurveKind::TwoCycle { b, c, a, a2 } => {
                let sigma = t.sigma(&curve)?;
                let qq = |sc: i32| eval_element(&QTElem::q_mono(&g, 1, 0, &[(b, p as i32), (c, sc * p as i32)]), r);
                ck.scalar_eq(format!("q_power_plus[{label}]"), &qq(1)?, &xp(b, 1)?.mul(&xp(c, 1)?));
                ck.scalar_eq(format!("q_power_minus[{label}]"), &qq(-1)?, &xp(b, 1)?.mul(&xp(c, -1)?));
                let rg = r_value(&curve, r, t)?;
                let rb = r_value(&curve.twisted(b, 1), r, t)?;
                let rc = r_value(&curve.twisted(c, 1), r, t)?;
                let rbc = r_value(&curve.twisted(b, 1).twisted(c, 1), r, t)?;
                let (xb2, xbm2, xc2, xcm2) = (xp(b, 2)?, xp(b, -2)?, xp(c, 2)?, xp(c, -2)?);
                let den = xb2.sub(&xbm2).mul(&xc2.sub(&xcm2));
                let pp = rg.mul(&xbm2).mul(&xcm2).sub(&rb.mul(&xcm2)).sub(&rc.mul(&xbm2)).add(&rbc).div(&den)?;
                let ybc = yp(b, 1)?.mul(&yp(c, 1)?);
                ck.eq(format!("two_cycle_statement_pp[{label}]"), &ybc, &pp);
                let ratio = |z: &Cyclo| -> Result<Cyclo, RepError> {
                    let w = z.mul(r.edge_value(c)).div(r.edge_value(b))?;
                    u_product(r, &w)
                };
                let xc_sq = r.edge_value(c).mul(r.edge_value(c));
                let omega = ratio(r.edge_value(a2))?
                    .mul(&ratio(r.edge_value(a))?)
                    .div(&u_product(r, &xc_sq)?.pow(2)?)?
                    .neg();
                let pm = rg
                    .mul(&xbm2)
                    .mul(&xc2)
                    .neg()
                    .add(&rb.mul(&xc2))
                    .add(&rc.mul(&xbm2))
                    .sub(&rbc)
                    .div(&den.mul(&omega))?;
                let ybcm = yp(b, 1)?.mul(&yp(c, -1)?);
                ck.eq(format!("two_cycle_statement_pm[{label}]"), &ybcm, &pm);
                let mut xs: BTreeMap<(i16, i16), Cyclo> = BTreeMap::new();
                for (e1, e2) in [(1i16, 1i16), (1, -1), (-1, 1), (-1, -1)] {
                    let mut k = ZERO_E;
                    k[b] = e1;
                    k[c] = e2;
                    let m = ck.pow_of(&QTElem::term(&g, k, sigma.coeff(&k)))?;
                    xs.insert((e1, e2), ck.scalar(&m, "two-cycle term power")?);
                }
                ck.eq(format!("two_cycle_omega[{label}]"), &xs[&(1, -1)], &ybcm.mul(&omega));
                ck.eq(format!("two_cycle_head[{label}]"), &xs[&(1, 1)], &ybc);
                let weighted = |wb: [&Cyclo; 2], wc: [&Cyclo; 2]| {
                    let mut acc = Cyclo::zero(&field);
                    for (&(e1, e2), v) in &xs {
                        let fb = if e1 > 0 { wb[0] } else { wb[1] };
                        let fc = if e2 > 0 { wc[0] } else { wc[1] };
                        acc = acc.add(&v.mul(fb).mul(fc));
                    }
                    acc
                };
                let one = Cyclo::one(&field);
                ck.eq(format!("two_cycle_system_1[{label}]"), &rg, &weighted([&one, &one], [&one, &one]));
                ck.eq(format!("two_cycle_system_b[{label}]"), &rb, &weighted([&xb2, &xbm2], [&one, &one]));
                ck.eq(format!("two_cycle_system_c[{label}]"), &rc, &weighted([&one, &one], [&xc2, &xcm2]));
                ck.eq(format!("two_cycle_system_bc[{label}]"), &rbc, &weighted([&xb2, &xbm2], [&xc2, &xcm2]));
            }
            CurveKind::Separating { c, d } => {
                let sigma = t.sigma(&curve)?;
                let qp = eval_element(&QTElem::q_mono(&g, 1, 0, &[(c, p as i32)]), r)?;
                ck.scalar_eq(format!("q_power[{label}]"), &qp, &xp(c, 1)?);
                let rg = r_value(&curve, r, t)?;
                let rt = r_value(&curve.twisted(c, 1), r, t)?;
                let rtm = r_value(&curve.twisted(c, -1), r, t)?;
                let rcc = r_value(&g.alpha(c)?, r, t)?;
                let (x2, xm2) = (xp(c, 2)?, xp(c, -2)?);
                let pair = |i: usize, j: usize| -> Result<Cyclo, RepError> {
                    let w = r.edge_value(d[i]).mul(r.edge_value(d[j])).div(r.edge_value(c))?;
                    u_product(r, &w)
                };
                let omega_p = pair(0, 3)?.mul(&pair(1, 2)?);
                let num = rtm.mul(&xm2).add(&rg.mul(&rcc)).add(&rt.mul(&x2));
                let formula = num.div(&x2.sub(&xm2).pow(2)?.mul(&rcc).mul(&omega_p))?;
                let y2p = yp(c, 2)?;
                ck.eq(format!("separating_statement[{label}]"), &y2p, &formula);
                let mut k2 = ZERO_E;
                k2[c] = 2;
                let mut km2 = ZERO_E;
                km2[c] = -2;
                let head = ck.pow_of(&QTElem::term(&g, k2, sigma.coeff(&k2)))?;
                let tail = ck.pow_of(&QTElem::term(&g, km2, sigma.coeff(&km2)))?;
                let tp = chebyshev_t(r.p(), &eval_element(&sigma, r)?);
                let h = tp.sub(&head).sub(&tail);
                let (x4, xm4) = (xp(c, 4)?, xp(c, -4)?);
                ck.mat_eq(
                    format!("separating_system_minus[{label}]"),
                    &id(&rtm),
                    &head.scale(&xm4).add(&h).add(&tail.scale(&x4)),
                );
                ck.mat_eq(
                    format!("separating_system_plus[{label}]"),
                    &id(&rt),
                    &head.scale(&x4).add(&h).add(&tail.scale(&xm4)),
                );
                let solved = rtm
                    .mul(&xm2)
                    .sub(&rg.mul(&x2.add(&xm2)))
                    .add(&rt.mul(&x2))
                    .div(&x2.sub(&xm2).pow(2)?.mul(&x2.add(&xm2)))?;
                ck.scalar_eq(format!("separating_solved[{label}]"), &head, &solved);
                ck.scalar_eq(format!("separating_omega[{label}]"), &head, &y2p.mul(&omega_p).neg());
            }
            _ => {}
        }
    }
    Ok(SuiteReport {
        suite: String::from("cshadow"),
        genus: g.genus(),
        closed: g.closed(),
        mutated: false,
        identities: ck.out,
    })
}

fn transpose(m: &CMatrix) -> Vec<Vec<(usize, Cyclo)>> {
    let mut cols: Vec<Vec<(usize, Cyclo)>> = alloc::vec![Vec::new(); m.dim()];
    for (i, row) in m.rows().iter().enumerate() {
        for (&j, v) in row {
            cols[j].push((i, v.clone()));
        }
    }
    cols
}

/// Basis of `{T : T m1[i] = m2[i] T for all i}`.
///
/// Diagonal pairs restrict the support of `T` to matching joint eigenvalues;
/// the remaining pairs give sparse linear equations.
pub fn intertwiner_space(m1: &[CMatrix], m2: &[CMatrix]) -> Vec<CMatrix> {
    assert_eq!(m1.len(), m2.len(), "generator count mismatch");
    let Some(first) = m1.first() else { return Vec::new() };
    let field = first.field().clone();
    let n = first.dim();
    let diag: Vec<usize> = (0..m1.len()).filter(|&i| m1[i].is_diagonal() && m2[i].is_diagonal()).collect();
    let sig = |m: &[CMatrix], u: usize| -> Vec<Cyclo> { diag.iter().map(|&i| m[i].get(u, u)).collect() };
    let mut by_sig: HashMap<Vec<Cyclo>, Vec<usize>> = HashMap::new();
    for v in 0..n {
        by_sig.entry(sig(m1, v)).or_default().push(v);
    }
    let mut unknowns: Vec<(usize, usize)> = Vec::new();
    for u in 0..n {
        if let Some(vs) = by_sig.get(&sig(m2, u)) {
            unknowns.extend(vs.iter().map(|&v| (u, v)));
        }
    }
    let col_of: HashMap<(usize, usize), usize> = unknowns.iter().enumerate().map(|(i, &uv)| (uv, i)).collect();
    let mut ech = Echelon::new(&field);
    for i in (0..m1.len()).filter(|i| !diag.contains(i)) {
        let m2t = transpose(&m2[i]);
        let mut eqs: BTreeMap<(usize, usize), SparseRow> = BTreeMap::new();
        for (col, &(u, v)) in unknowns.iter().enumerate() {
            for (&w, c) in &m1[i].rows()[v] {
                add_coeff(eqs.entry((u, w)).or_default(), col, c);
            }
            for (rr, c) in &m2t[u] {
                add_coeff(eqs.entry((*rr, v)).or_default(), col, &c.neg());
            }
        }
        for (_, row) in eqs {
            ech.insert(row);
        }
    }
    ech.nullspace(unknowns.len())
        .into_iter()
        .map(|v| {
            let mut t = CMatrix::zero(&field, n);
            for (&(u, w), &col) in &col_of {
                t.set(u, w, v[col].clone());
            }
            t
        })
        .collect()
}

fn add_coeff(row: &mut SparseRow, col: usize, c: &Cyclo) {
    let v = match row.get(&col) {
        Some(old) => old.add(c),
        None => c.clone(),
    };
    if v.is_zero() {
        row.remove(&col);
    } else {
        row.insert(col, v);
    }
}

fn images(r: &Rep, t: &SigmaTable, curves: &[CurveId]) -> Result<Vec<CMatrix>, RepError> {
    curves.iter().map(|c| eval_element(&t.sigma(c)?, r)).collect()
}

/// Dimension of the commutant of the images of `curves`.
pub fn commutant_dimension(r: &Rep, t: &SigmaTable, curves: &[CurveId]) -> Result<usize, RepError> {
    let ms = images(r, t, curves)?;
    if ms.is_empty() {
        return Ok(r.dim() * r.dim());
    }
    Ok(intertwiner_space(&ms, &ms).len())
}

/// Commutant dimension over every catalogued curve.
pub fn irreducibility_commutant(r: &Rep, t: &SigmaTable) -> Result<usize, RepError> {
    commutant_dimension(r, t, &t.graph().catalogue())
}

fn invertible(m: &CMatrix) -> bool {
    rank_of(m.field(), m.rows().iter().cloned()) == m.dim()
}

/// An invertible `T` with `T rho_1(sigma(c)) = rho_2(sigma(c)) T` for every catalogued curve, if any.
pub fn find_intertwiner(r1: &Rep, r2: &Rep, t: &SigmaTable) -> Result<Option<CMatrix>, RepError> {
    if r1.graph().as_ref() != r2.graph().as_ref() || r1.p() != r2.p() {
        return Err(RepError::GraphMismatch);
    }
    let curves = t.graph().catalogue();
    let space = intertwiner_space(&images(r1, t, &curves)?, &images(r2, t, &curves)?);
    match space.len() {
        0 => Ok(None),
        1 if invertible(&space[0]) => Ok(space.into_iter().next()),
        k => Err(RepError::Reducible(k)),
    }
}
