//! The localized quantum torus: elements `sum_k E^k F_k` with `E` kept on the left.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use thiserror::Error;

use crate::exactalg::{AlgError, Exps, Factor, Frac, LPoly, MAX_VARS, ZERO_EXPS};
use crate::sausage::{EExps, EdgeRole, SausageGraph, ZERO_E};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QtError {
    #[error("elements live over different sausage graphs")]
    ContextMismatch,
    #[error("edge `{0}` is not a separating edge")]
    WrongRole(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

/// Default bound on `|n|` for denominator factors `A^n Q^2 - A^-n Q^-2`.
pub const MEMBERSHIP_BOUND: i32 = 8;

#[derive(Clone, Debug)]
pub struct QTElem {
    graph: Arc<SausageGraph>,
    terms: BTreeMap<EExps, Frac>,
}

impl PartialEq for QTElem {
    fn eq(&self, other: &Self) -> bool {
        same_graph(&self.graph, &other.graph)
            && self.terms.len() == other.terms.len()
            && self.terms.iter().all(|(k, f)| other.terms.get(k).map(|g| f.equals(g)).unwrap_or(false))
    }
}

fn same_graph(a: &Arc<SausageGraph>, b: &Arc<SausageGraph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn e_add(a: &EExps, b: &EExps) -> EExps {
    let mut r = ZERO_E;
    for i in 0..MAX_VARS {
        r[i] = a[i] + b[i];
    }
    r
}

impl QTElem {
    pub fn zero(graph: &Arc<SausageGraph>) -> Self {
        QTElem { graph: graph.clone(), terms: BTreeMap::new() }
    }

    pub fn one(graph: &Arc<SausageGraph>) -> Self {
        QTElem::scalar(graph, Frac::one(graph.nvars()))
    }

    pub fn scalar(graph: &Arc<SausageGraph>, f: Frac) -> Self {
        QTElem::term(graph, ZERO_E, f)
    }

    pub fn from_int(graph: &Arc<SausageGraph>, c: i64) -> Self {
        QTElem::scalar(graph, Frac::from_int(graph.nvars(), c))
    }

    pub fn from_poly(graph: &Arc<SausageGraph>, p: LPoly) -> Self {
        QTElem::scalar(graph, Frac::from_poly(p))
    }

    /// `E^k F`.
    pub fn term(graph: &Arc<SausageGraph>, k: EExps, f: Frac) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(k, f);
        }
        QTElem { graph: graph.clone(), terms }
    }

    /// `E^k` alone.
    pub fn e_pow(graph: &Arc<SausageGraph>, k: EExps) -> Self {
        QTElem::term(graph, k, Frac::one(graph.nvars()))
    }

    /// `E_e^k` for a single internal edge.
    pub fn e_edge(graph: &Arc<SausageGraph>, e: usize, k: i16) -> Self {
        let mut v = ZERO_E;
        v[e] = k;
        QTElem::e_pow(graph, v)
    }

    /// The monomial `c * A^a * prod Q_e^{k_e}` given as `(edge, exponent)` pairs.
    pub fn q_mono(graph: &Arc<SausageGraph>, c: i64, a: i32, qs: &[(usize, i32)]) -> Self {
        QTElem::from_poly(graph, q_poly(graph, c, a, qs))
    }

    pub fn graph(&self) -> &Arc<SausageGraph> {
        &self.graph
    }

    pub fn nvars(&self) -> usize {
        self.graph.nvars()
    }

    pub fn terms(&self) -> &BTreeMap<EExps, Frac> {
        &self.terms
    }

    pub fn coeff(&self, k: &EExps) -> Frac {
        self.terms.get(k).cloned().unwrap_or_else(|| Frac::zero(self.nvars()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient when the element has no `E` part.
    pub fn as_scalar(&self) -> Option<Frac> {
        match self.terms.len() {
            0 => Some(Frac::zero(self.nvars())),
            1 => self.terms.get(&ZERO_E).cloned(),
            _ => None,
        }
    }

    pub fn check_ctx(&self, other: &QTElem) -> Result<(), QtError> {
        if same_graph(&self.graph, &other.graph) {
            Ok(())
        } else {
            Err(QtError::ContextMismatch)
        }
    }

    fn from_groups(graph: &Arc<SausageGraph>, groups: BTreeMap<EExps, Vec<Frac>>) -> QTElem {
        let n = graph.nvars();
        let mut terms = BTreeMap::new();
        for (k, fs) in groups {
            let s = if fs.len() == 1 { fs.into_iter().next().unwrap() } else { Frac::sum(n, fs.iter()) };
            if !s.is_zero() {
                terms.insert(k, s);
            }
        }
        QTElem { graph: graph.clone(), terms }
    }

    pub fn add(&self, other: &QTElem) -> QTElem {
        QTElem::sum(&self.graph, [self, other])
    }

    pub fn sub(&self, other: &QTElem) -> QTElem {
        QTElem::sum(&self.graph, [self, &other.neg()])
    }

    pub fn sum<'a>(graph: &Arc<SausageGraph>, items: impl IntoIterator<Item = &'a QTElem>) -> QTElem {
        let mut groups: BTreeMap<EExps, Vec<Frac>> = BTreeMap::new();
        for x in items {
            assert!(same_graph(graph, &x.graph), "context mismatch");
            for (k, f) in &x.terms {
                groups.entry(*k).or_default().push(f.clone());
            }
        }
        QTElem::from_groups(graph, groups)
    }

    pub fn neg(&self) -> QTElem {
        QTElem { graph: self.graph.clone(), terms: self.terms.iter().map(|(k, f)| (*k, f.neg())).collect() }
    }

    fn shift_vec(&self, l: &EExps) -> Vec<i32> {
        let mut s = vec![0i32; self.nvars()];
        for e in self.graph.internal_edges() {
            s[self.graph.var(e)] = l[e] as i32;
        }
        s
    }

    /// `(sum E^k R_k)(sum E^l S_l) = sum E^{k+l} R_k(A^l Q) S_l`.
    pub fn mul(&self, other: &QTElem) -> QTElem {
        assert!(same_graph(&self.graph, &other.graph), "context mismatch");
        let mut groups: BTreeMap<EExps, Vec<Frac>> = BTreeMap::new();
        for (l, s) in &other.terms {
            let sv = self.shift_vec(l);
            for (k, r) in &self.terms {
                groups.entry(e_add(k, l)).or_default().push(r.shift(&sv).mul(s));
            }
        }
        QTElem::from_groups(&self.graph, groups)
    }

    /// Right multiplication by a scalar: `x * F`.
    pub fn mul_frac(&self, f: &Frac) -> QTElem {
        let terms = self
            .terms
            .iter()
            .map(|(k, r)| (*k, r.mul(f)))
            .filter(|(_, r)| !r.is_zero())
            .collect();
        QTElem { graph: self.graph.clone(), terms }
    }

    /// Left multiplication by a scalar: `F * x`.
    pub fn frac_mul(&self, f: &Frac) -> QTElem {
        let terms = self
            .terms
            .iter()
            .map(|(k, r)| (*k, f.shift(&self.shift_vec(k)).mul(r)))
            .filter(|(_, r)| !r.is_zero())
            .collect();
        QTElem { graph: self.graph.clone(), terms }
    }

    pub fn mul_poly(&self, p: &LPoly) -> QTElem {
        self.mul_frac(&Frac::from_poly(p.clone()))
    }

    pub fn scale_int(&self, c: i64) -> QTElem {
        let c = BigInt::from(c);
        let terms =
            self.terms.iter().map(|(k, r)| (*k, r.scale_int(&c))).filter(|(_, r)| !r.is_zero()).collect();
        QTElem { graph: self.graph.clone(), terms }
    }

    /// Multiplication by `A^a`, which is central.
    pub fn mul_a(&self, a: i32) -> QTElem {
        let mut e = ZERO_EXPS;
        e[0] = a as i16;
        let terms = self.terms.iter().map(|(k, r)| (*k, r.mul_mono(&e))).collect();
        QTElem { graph: self.graph.clone(), terms }
    }

    pub fn pow(&self, k: u32) -> QTElem {
        let mut r = QTElem::one(&self.graph);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Inverse of an element with a single term `E^k F`.
    pub fn inv_monomial(&self) -> Result<QTElem, QtError> {
        if self.terms.len() != 1 {
            return Err(AlgError::DivisionByZero.into());
        }
        let (k, f) = self.terms.iter().next().unwrap();
        let mut nk = ZERO_E;
        for i in 0..MAX_VARS {
            nk[i] = -k[i];
        }
        // (E^k F)^-1 = F^-1 E^-k = E^-k F^-1(A^-k Q).
        let finv = f.inv()?;
        let s = self.shift_vec(&nk);
        Ok(QTElem::term(&self.graph, nk, finv.shift(&s)))
    }

    /// Applies `A -> A^k` to every coefficient (not a ring map; used for mutation checks).
    pub fn a_power_subst(&self, k: i32) -> QTElem {
        let terms = self.terms.iter().map(|(e, f)| (*e, f.a_power_subst(k))).collect();
        QTElem { graph: self.graph.clone(), terms }
    }

    /// The twist automorphism along internal edge `e`: `E_e^k -> (-A)^{s((k+1)^2-1)} E_e^k Q_e^{2sk}`.
    pub fn twist_automorphism(&self, e: usize, sign: i32) -> QTElem {
        let n = self.nvars();
        let v = self.graph.var(e);
        let mut terms = BTreeMap::new();
        for (k, f) in &self.terms {
            let ke = k[e] as i32;
            if ke == 0 {
                terms.insert(*k, f.clone());
                continue;
            }
            let ex = sign * (ke * ke + 2 * ke);
            let mut m = ZERO_EXPS;
            m[0] = ex as i16;
            m[v] = (2 * sign * ke) as i16;
            let c = if ex.rem_euclid(2) == 1 { -1 } else { 1 };
            let g = f.mul(&Frac::monomial(n, m, c));
            terms.insert(*k, g);
        }
        QTElem { graph: self.graph.clone(), terms }
    }

    pub fn to_text(&self) -> String {
        let names = self.graph.var_names();
        if self.terms.is_empty() {
            return String::from("0");
        }
        if let Some(f) = self.as_scalar() {
            return f.to_text(&names);
        }
        let mut parts = Vec::new();
        for (k, f) in &self.terms {
            let inner = f.to_text(&names);
            if *k == ZERO_E {
                parts.push(alloc::format!("({inner})"));
            } else {
                parts.push(alloc::format!("{} * ({inner})", self.e_text(k)));
            }
        }
        parts.join(" + ")
    }

    pub fn e_text(&self, k: &EExps) -> String {
        let items: Vec<String> = self
            .graph
            .internal_edges()
            .filter(|&e| k[e] != 0)
            .map(|e| alloc::format!("{}:{}", self.graph.edge_name(e), k[e]))
            .collect();
        alloc::format!("E[{}]", items.join(", "))
    }
}

/// `c * A^a * prod Q_e^{k_e}` as a Laurent polynomial.
pub fn q_poly(graph: &SausageGraph, c: i64, a: i32, qs: &[(usize, i32)]) -> LPoly {
    let mut e = ZERO_EXPS;
    e[0] = a as i16;
    for &(edge, k) in qs {
        e[graph.var(edge)] += k as i16;
    }
    LPoly::monomial(graph.nvars(), e, c)
}

pub fn qt_mul(x: &QTElem, y: &QTElem) -> Result<QTElem, QtError> {
    x.check_ctx(y)?;
    Ok(x.mul(y))
}

pub fn qt_add(x: &QTElem, y: &QTElem) -> Result<QTElem, QtError> {
    x.check_ctx(y)?;
    Ok(x.add(y))
}

/// `[x, y]_A = A x y - A^-1 y x`.
pub fn commutator_a(x: &QTElem, y: &QTElem) -> Result<QTElem, QtError> {
    x.check_ctx(y)?;
    Ok(x.mul(y).mul_a(1).sub(&y.mul(x).mul_a(-1)))
}

/// The automorphism `E_c -> (-A)^3 E_c Q_c^2` (or its inverse for `sign = -1`) at a separating edge.
pub fn automorphism_tau_c(x: &QTElem, c: usize, sign: i32) -> Result<QTElem, QtError> {
    let g = x.graph();
    if c >= g.n_internal() || g.role(c) != EdgeRole::Separating {
        let name = if c < g.edges().len() { String::from(g.edge_name(c)) } else { alloc::format!("#{c}") };
        return Err(QtError::WrongRole(name));
    }
    Ok(x.twist_automorphism(c, sign))
}

pub fn a0_membership(x: &QTElem) -> bool {
    a0_membership_bounded(x, MEMBERSHIP_BOUND)
}

pub fn a0_membership_bounded(x: &QTElem, bound: i32) -> bool {
    let g = x.graph();
    x.terms().iter().all(|(k, f)| g.lambda_member(k) && coeff_in_r0(g, f, bound))
}

/// Whether `f = V / W` with `V` in the even Q-lattice ring and `W` a product of `A^n Q^2 - A^-n Q^-2`.
fn coeff_in_r0(g: &SausageGraph, f: &Frac, bound: i32) -> bool {
    if *f.den_const() != BigInt::from(1) {
        return false;
    }
    let n = g.nvars();
    let mut v = f.num().clone();
    for (factor, mult) in f.den_factors() {
        let Factor::Cyc { x0, d } = factor else { return false };
        let (s, t, _) = match single_q(g, x0) {
            Some(x) => x,
            None => return false,
        };
        let t = t.unsigned_abs() as i32;
        if 4 % t != 0 {
            return false;
        }
        let m = 4 / t;
        if m as u32 % d != 0 || (s * m) % 2 != 0 || (s * m / 2).abs() > bound {
            return false;
        }
        // Complete Phi_d(X0) to X0^m - 1.
        let mut full = LPoly::zero(n);
        full = full.add(&LPoly::monomial(n, crate::exactalg::exps_scale(x0, m), 1));
        full = full.sub(&LPoly::one(n));
        let cof = full.div_exact_in_monomial(x0, &crate::exactalg::cyclotomic(*d)).expect("Phi_d divides X^m - 1");
        v = v.mul(&cof.pow(*mult));
    }
    v.terms().iter().all(|(e, _)| g.q_member(e))
}

/// Decomposes `x0 = A^s Q_v^t` for a single internal-edge variable `v`.
fn single_q(g: &SausageGraph, x0: &Exps) -> Option<(i32, i32, usize)> {
    let mut found = None;
    for (i, &x) in x0.iter().enumerate().skip(1) {
        if x != 0 {
            if found.is_some() {
                return None;
            }
            found = Some((i, x as i32));
        }
    }
    let (v, t) = found?;
    if v - 1 >= g.n_internal() {
        return None;
    }
    Some((x0[0] as i32, t, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g2() -> Arc<SausageGraph> {
        Arc::new(SausageGraph::build(2, true).unwrap())
    }

    #[test]
    fn q_e_commutation() {
        let g = g2();
        let q = QTElem::q_mono(&g, 1, 0, &[(0, 1)]);
        let e = QTElem::e_edge(&g, 0, 1);
        let lhs = q.mul(&e);
        let rhs = e.mul(&q).mul_a(1);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, QTElem::term(&g, e.terms().keys().next().copied().unwrap(), Frac::from_poly(q_poly(&g, 1, 1, &[(0, 1)]))));
    }

    #[test]
    fn shifted_product_example() {
        let g = g2();
        let x = QTElem::e_edge(&g, 0, 2).mul_poly(&q_poly(&g, 1, 0, &[(0, 1)]));
        let y = QTElem::e_edge(&g, 0, 3).mul_poly(&q_poly(&g, 1, 0, &[(0, 2)]));
        let expect = QTElem::e_edge(&g, 0, 5).mul_poly(&q_poly(&g, 1, 3, &[(0, 3)]));
        assert_eq!(x.mul(&y), expect);
    }

    #[test]
    fn twist_automorphism_powers() {
        let g = g2();
        let c = 2;
        let e2 = QTElem::e_edge(&g, c, 2);
        let img = automorphism_tau_c(&e2, c, 1).unwrap();
        assert_eq!(img, e2.mul_poly(&q_poly(&g, 1, 8, &[(c, 4)])));
        assert!(automorphism_tau_c(&e2, 0, 1).is_err());
        let q = QTElem::q_mono(&g, 1, 0, &[(c, 1)]);
        assert_eq!(automorphism_tau_c(&q, c, 1).unwrap(), q);
    }

    #[test]
    fn membership_examples() {
        let g = g2();
        let alpha = QTElem::q_mono(&g, -1, 2, &[(0, 2)]).add(&QTElem::q_mono(&g, -1, -2, &[(0, -2)]));
        assert!(a0_membership(&alpha));
        assert!(!a0_membership(&QTElem::e_edge(&g, 2, 1)));
        assert!(!a0_membership(&QTElem::q_mono(&g, 1, 0, &[(0, 1)])));
        let u = q_poly(&g, 1, 2, &[(0, 2)]).sub(&q_poly(&g, 1, -2, &[(0, -2)]));
        let inv = QTElem::scalar(&g, Frac::from_poly(u).inv().unwrap());
        assert!(a0_membership(&inv));
        let a4 = q_poly(&g, 1, 4, &[]).sub(&q_poly(&g, 1, -4, &[]));
        assert!(!a0_membership(&QTElem::scalar(&g, Frac::from_poly(a4).inv().unwrap())));
    }

    #[test]
    fn text_form() {
        let g = g2();
        let x = QTElem::e_edge(&g, 0, 1).add(&QTElem::e_edge(&g, 2, -2).mul_poly(&q_poly(&g, 1, 0, &[(0, 2)])));
        assert_eq!(x.to_text(), "E[c1:-2] * (Q[a0]^2) + E[a0:1] * (1)");
        let alpha = QTElem::q_mono(&g, -1, 2, &[(0, 2)]).add(&QTElem::q_mono(&g, -1, -2, &[(0, -2)]));
        assert_eq!(alpha.to_text(), "(-1)*A^2*Q[a0]^2 + (-1)*A^-2*Q[a0]^-2");
    }
}
