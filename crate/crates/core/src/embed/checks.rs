use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::suites::{IdentityResult, SuiteReport};
use super::{EmbedError, SigmaTable};
use crate::exactalg::{Exps, Factor, Frac, LPoly};
use crate::qtorus::{a0_membership, QTElem};
use crate::sausage::{CurveId, CurveKind, EExps};

/// `-A^{2 eps + w} Q_e^{2 eps}`, the scaling of an extremal coefficient under a fractional twist.
fn extremal_factor(table: &SigmaTable, e: usize, eps: i32, w: i32) -> Frac {
    table.scalars().monof(-1, 2 * eps + w, &[(e, 2 * eps)])
}

fn scales(from: &QTElem, to: &QTElem, e: usize, w: i16, table: &SigmaTable, inverse: bool) -> bool {
    let extremal: Vec<&EExps> = from.terms().keys().filter(|k| k[e].abs() == w).collect();
    if extremal.is_empty() {
        return false;
    }
    extremal.into_iter().all(|k| {
        let eps = k[e].signum() as i32;
        let mut factor = extremal_factor(table, e, eps, w as i32);
        if inverse {
            factor = factor.inv().expect("monomial");
        }
        to.coeff(k).equals(&from.coeff(k).mul(&factor))
    })
}

/// Extremal-coefficient scaling under twists along every edge the curve crosses.
///
/// Intersection-one edges are checked for both twist directions; a separating
/// edge is checked along the half-twist chain `tau_bar -> gamma -> tau -> t_c(gamma)`.
pub fn fracdehn_check(curve: &CurveId, table: &SigmaTable) -> Result<bool, EmbedError> {
    let g = table.graph();
    let base = curve.base();
    match base.kind {
        CurveKind::Pants { .. } => Ok(true),
        CurveKind::OneCycle { .. } | CurveKind::TwoCycle { .. } => {
            let x = table.sigma(&base)?;
            for e in g.internal_edges().filter(|&e| g.intersection(&base, e) == 1) {
                for sign in [1i8, -1] {
                    let y = table.sigma(&base.twisted(e, sign))?;
                    if y.terms().len() != x.terms().len() || !scales(&x, &y, e, 1, table, sign < 0) {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        CurveKind::Separating { c, .. } | CurveKind::Tau { c } | CurveKind::TauBar { c } => {
            let gamma = g.gamma_at(c)?;
            let chain = [
                table.sigma(&g.tau(c, true)?)?,
                table.sigma(&gamma)?,
                table.sigma(&g.tau(c, false)?)?,
                table.sigma(&gamma.twisted(c, 1))?,
            ];
            Ok(chain.windows(2).all(|w| scales(&w[0], &w[1], c, 2, table, false)))
        }
    }
}

fn extremal_keys(table: &SigmaTable, curve: &CurveId) -> Vec<EExps> {
    let g = table.graph();
    let mut keys = vec![[0i16; crate::exactalg::MAX_VARS]];
    for e in g.internal_edges() {
        let i = g.intersection(curve, e) as i16;
        if i == 0 {
            continue;
        }
        keys = keys
            .into_iter()
            .flat_map(|k| {
                let mut p = k;
                let mut m = k;
                p[e] = i;
                m[e] = -i;
                [p, m]
            })
            .collect();
    }
    keys
}

fn push(out: &mut Vec<IdentityResult>, id: String, pass: bool, residual: Option<QTElem>) {
    out.push(IdentityResult { id, pass, residual: if pass { None } else { residual }, detail: None });
}

/// Support bound, parity, extremal non-vanishing and even-subalgebra membership
/// for every catalogued image and its twists along crossed pants curves.
pub fn expand_support_check(table: &SigmaTable) -> Result<SuiteReport, EmbedError> {
    let g = table.graph();
    let mut out = Vec::new();
    for curve in g.catalogue() {
        let mut variants = vec![curve.clone()];
        for e in g.internal_edges().filter(|&e| g.intersection(&curve, e) > 0) {
            variants.push(curve.twisted(e, 1));
            variants.push(curve.twisted(e, -1));
        }
        for v in variants {
            let x = table.sigma(&v)?;
            let name = g.curve_text(&v);
            let bad_support: Vec<&EExps> = x
                .terms()
                .keys()
                .filter(|k| g.internal_edges().any(|e| k[e].unsigned_abs() as u32 > g.intersection(&curve, e)))
                .collect();
            let offending = |ks: &[&EExps]| {
                QTElem::sum(g, ks.iter().map(|k| QTElem::term(g, **k, x.coeff(k))).collect::<Vec<_>>().iter())
            };
            push(&mut out, format!("support[{name}]"), bad_support.is_empty(), Some(offending(&bad_support)));
            let bad_parity: Vec<&EExps> = x
                .terms()
                .keys()
                .filter(|k| g.internal_edges().any(|e| (k[e] as i32 - g.intersection(&curve, e) as i32) % 2 != 0))
                .collect();
            push(&mut out, format!("parity[{name}]"), bad_parity.is_empty(), Some(offending(&bad_parity)));
            let extremal_ok = extremal_keys(table, &curve).iter().all(|k| !x.coeff(k).is_zero());
            push(&mut out, format!("extremal[{name}]"), extremal_ok, None);
            push(&mut out, format!("membership[{name}]"), a0_membership(&x), Some(x.clone()));
        }
        let dehn = fracdehn_check(&curve, table)?;
        push(&mut out, format!("fracdehn[{}]", curve.label), dehn, None);
    }
    Ok(SuiteReport {
        suite: String::from("support"),
        genus: g.genus(),
        closed: g.closed(),
        mutated: table.mutation().is_some(),
        identities: out,
    })
}

/// Lowest common multiple of the denominators of all coefficients, as a polynomial.
fn common_denominator(nvars: usize, fracs: &[&Frac]) -> LPoly {
    let mut dc = BigInt::one();
    let mut factors: Vec<(Factor, u32)> = Vec::new();
    for f in fracs {
        dc = dc.lcm(f.den_const());
        for (fac, m) in f.den_factors() {
            match factors.iter_mut().find(|(x, _)| x == fac) {
                Some((_, k)) => *k = (*k).max(*m),
                None => factors.push((fac.clone(), *m)),
            }
        }
    }
    let mut d = LPoly::constant(nvars, dc);
    for (fac, m) in factors {
        d = d.mul(&fac.expand(nvars).pow(m));
    }
    d
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][col].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = &rows[i][col] / &pivot;
                for j in col..ncols {
                    let v = &rows[r][j] * &f;
                    rows[i][j] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Whether `1` and the images of the distinct catalogued curves are linearly
/// independent over `Q(A)`, tested after specializing `A` to `a_value`.
///
/// A positive answer is conclusive; a negative one may come from an unlucky value.
pub fn linear_independence_check(table: &SigmaTable, a_value: i64) -> Result<bool, EmbedError> {
    let g = table.graph();
    let n = g.nvars();
    let mut elems = vec![QTElem::one(g)];
    for curve in g.catalogue() {
        elems.push(table.sigma(&curve)?);
    }
    let fracs: Vec<&Frac> = elems.iter().flat_map(|x| x.terms().values()).collect();
    let d = common_denominator(n, &fracs);
    let a = BigRational::from_integer(BigInt::from(a_value));
    let mut columns: BTreeMap<(EExps, Exps), usize> = BTreeMap::new();
    let mut sparse: Vec<BTreeMap<usize, BigRational>> = Vec::new();
    for x in &elems {
        let mut row: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (k, f) in x.terms() {
            let p = f.mul_poly(&d);
            if !p.is_poly() {
                return Err(EmbedError::Alg(crate::exactalg::AlgError::DivisionByZero));
            }
            for (e, c) in p.num().terms() {
                let mut q = *e;
                q[0] = 0;
                let next = columns.len();
                let col = *columns.entry((*k, q)).or_insert(next);
                let pw = if e[0] >= 0 {
                    num_traits::pow(a.clone(), e[0] as usize)
                } else {
                    num_traits::pow(a.recip(), e[0].unsigned_abs() as usize)
                };
                let v = BigRational::from_integer(c.clone()) * pw;
                *row.entry(col).or_insert_with(BigRational::zero) += v;
            }
        }
        sparse.push(row);
    }
    let ncols = columns.len();
    let rows: Vec<Vec<BigRational>> = sparse
        .into_iter()
        .map(|r| {
            let mut v = vec![BigRational::zero(); ncols];
            for (i, x) in r {
                v[i] = x;
            }
            v
        })
        .collect();
    Ok(rank(rows) == elems.len())
}
