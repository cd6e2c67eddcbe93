use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::cmatrix::CMatrix;
use super::RepError;
use crate::exactalg::{specialize_cyclotomic, Cyclo, CycloField, Frac};
use crate::qtorus::{a0_membership, QTElem};
use crate::sausage::{EExps, SausageGraph};

/// Outcome of the genericity conditions on shadow parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Genericity {
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Parameters of a representation before construction.
#[derive(Clone, Debug)]
pub struct RepParams {
    pub p: u32,
    pub x: Vec<Cyclo>,
    pub y: Vec<Cyclo>,
    pub boundary: Cyclo,
}

impl RepParams {
    /// Default desk-scale parameters: small distinct rationals, unit gauge and boundary scalar.
    pub fn standard(graph: &SausageGraph, field: &Arc<CycloField>) -> Self {
        const XS: [i64; 8] = [2, 5, 3, 7, 11, 13, 17, 19];
        let n = graph.n_internal();
        RepParams {
            p: field.p(),
            x: (0..n).map(|i| Cyclo::from_int(field, XS[i % XS.len()] + (i / XS.len()) as i64 * 23)).collect(),
            y: vec![Cyclo::one(field); n],
            boundary: Cyclo::one(field),
        }
    }
}

fn signs3() -> impl Iterator<Item = [i64; 3]> {
    (0..8).map(|m| [if m & 1 == 0 { 1 } else { -1 }, if m & 2 == 0 { 1 } else { -1 }, if m & 4 == 0 { 1 } else { -1 }])
}

/// Genericity of the shadow parameters `x` (one per internal edge) at order `p`.
///
/// Per edge `x_e^{4p} != 1`; per vertex and sign pattern
/// `x_1^{p e_1} x_2^{p e_2} x_3^{p e_3} != x_1^{-p e_1} x_2^{-p e_2} x_3^{-p e_3}`.
/// Vertices meeting the boundary edge carry central data only and are not constrained.
pub fn genericity_check(x: &[Cyclo], boundary: &Cyclo, g: &SausageGraph, p: u32) -> Result<Genericity, RepError> {
    if x.len() != g.n_internal() {
        return Err(RepError::ParamCount { expected: g.n_internal(), got: x.len() });
    }
    let mut failures = Vec::new();
    for (e, xe) in x.iter().enumerate() {
        if xe.is_zero() {
            return Err(RepError::ZeroParameter(String::from(g.edge_name(e))));
        }
        if xe.pow(4 * p as i64)?.is_one() {
            failures.push(format!("eqG2[{}]", g.edge_name(e)));
        }
    }
    if boundary.is_zero() {
        return Err(RepError::ZeroParameter(String::from("boundary")));
    }
    for v in g.vertices().iter().filter(|v| v.iter().all(|&e| g.is_internal(e))) {
        for eps in signs3() {
            let mut z = Cyclo::one(x[0].field());
            for (k, &e) in v.iter().enumerate() {
                z = z.mul(&x[e].pow(eps[k] * p as i64)?);
            }
            if z.mul(&z).is_one() {
                let names: Vec<&str> = v.iter().map(|&e| g.edge_name(e)).collect();
                failures.push(format!("eqG1[{},{:?}]", names.join(","), eps));
            }
        }
    }
    Ok(Genericity { pass: failures.is_empty(), failures })
}

/// Root-of-unity representation: per internal edge a `p`-dimensional factor with
/// `Q_e = x_e diag((-A)^k)` and `E_e = y_e * (k -> k+1)`.
#[derive(Clone, Debug)]
pub struct Rep {
    p: u32,
    field: Arc<CycloField>,
    graph: Arc<SausageGraph>,
    x: Vec<Cyclo>,
    y: Vec<Cyclo>,
    boundary: Cyclo,
    dim: usize,
}

pub fn build_rep(graph: &Arc<SausageGraph>, field: &Arc<CycloField>, params: &RepParams) -> Result<Rep, RepError> {
    if params.p != field.p() {
        return Err(RepError::FieldMismatch { rep: params.p, field: field.p() });
    }
    let n = graph.n_internal();
    if params.y.len() != n {
        return Err(RepError::ParamCount { expected: n, got: params.y.len() });
    }
    if let Some(e) = params.y.iter().position(|y| y.is_zero()) {
        return Err(RepError::ZeroParameter(format!("y[{}]", graph.edge_name(e))));
    }
    let gen = genericity_check(&params.x, &params.boundary, graph, params.p)?;
    if !gen.pass {
        return Err(RepError::NotGeneric(gen.failures));
    }
    let dim = (params.p as usize).pow(n as u32);
    Ok(Rep {
        p: params.p,
        field: field.clone(),
        graph: graph.clone(),
        x: params.x.clone(),
        y: params.y.clone(),
        boundary: params.boundary.clone(),
        dim,
    })
}

impl Rep {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn graph(&self) -> &Arc<SausageGraph> {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn x(&self) -> &[Cyclo] {
        &self.x
    }

    pub fn y(&self) -> &[Cyclo] {
        &self.y
    }

    pub fn boundary(&self) -> &Cyclo {
        &self.boundary
    }

    /// The parameter attached to any edge: `x_e` when internal, the boundary scalar otherwise.
    pub fn edge_value(&self, e: usize) -> &Cyclo {
        if self.graph.is_internal(e) {
            &self.x[e]
        } else {
            &self.boundary
        }
    }

    /// Per-edge digits of a basis index.
    pub fn digits(&self, idx: usize) -> Vec<usize> {
        let p = self.p as usize;
        let mut r = idx;
        (0..self.graph.n_internal())
            .map(|_| {
                let d = r % p;
                r /= p;
                d
            })
            .collect()
    }

    fn index(&self, digits: &[usize]) -> usize {
        let p = self.p as usize;
        digits.iter().rev().fold(0, |acc, &d| acc * p + d)
    }

    /// Variable values at basis vector `idx`: `A`, then `x_e (-A)^{k_e}`, then boundary scalars.
    fn values_at(&self, idx: usize) -> Vec<Cyclo> {
        let minus_a = Cyclo::a_pow(&self.field, 1).neg();
        let mut vals = vec![Cyclo::a_pow(&self.field, 1)];
        for (e, k) in self.digits(idx).into_iter().enumerate() {
            vals.push(self.x[e].mul(&minus_a.pow(k as i64).expect("unit")));
        }
        for _ in self.graph.n_internal()..self.graph.edges().len() {
            vals.push(self.boundary.clone());
        }
        vals
    }

    /// `Q_e` on its factor, tensored with identities.
    pub fn q_matrix(&self, e: usize) -> CMatrix {
        let d = (0..self.dim).map(|i| self.values_at(i)[self.graph.var(e)].clone()).collect();
        CMatrix::diagonal(&self.field, d)
    }

    /// `E^k` for an exponent vector over internal edges.
    pub fn e_matrix(&self, k: &EExps) -> Result<CMatrix, RepError> {
        let mut m = CMatrix::zero(&self.field, self.dim);
        let scalar = self.e_scalar(k)?;
        for j in 0..self.dim {
            m.set(self.shift(j, k), j, scalar.clone());
        }
        Ok(m)
    }

    fn e_scalar(&self, k: &EExps) -> Result<Cyclo, RepError> {
        let mut s = Cyclo::one(&self.field);
        for (e, y) in self.y.iter().enumerate() {
            if k[e] != 0 {
                s = s.mul(&y.pow(k[e] as i64)?);
            }
        }
        Ok(s)
    }

    fn shift(&self, j: usize, k: &EExps) -> usize {
        let p = self.p as i64;
        let d: Vec<usize> = self
            .digits(j)
            .into_iter()
            .enumerate()
            .map(|(e, x)| (x as i64 + k[e] as i64).rem_euclid(p) as usize)
            .collect();
        self.index(&d)
    }
}

/// `rho(x)`: each term `E^k F_k` becomes the shift by `k` times the diagonal of `F_k` values.
pub fn eval_element(x: &QTElem, r: &Rep) -> Result<CMatrix, RepError> {
    if x.graph().as_ref() != r.graph.as_ref() {
        return Err(RepError::GraphMismatch);
    }
    if !a0_membership(x) {
        return Err(RepError::NotInSubalgebra(x.to_text()));
    }
    let values: Vec<Vec<Cyclo>> = (0..r.dim).map(|i| r.values_at(i)).collect();
    let mut m = CMatrix::zero(&r.field, r.dim);
    for (k, f) in x.terms() {
        let scalar = r.e_scalar(k)?;
        for (j, vals) in values.iter().enumerate() {
            let v = specialize_frac(f, r, vals)?;
            m.add_at(r.shift(j, k), j, &v.mul(&scalar));
        }
    }
    Ok(m)
}

fn specialize_frac(f: &Frac, r: &Rep, vals: &[Cyclo]) -> Result<Cyclo, RepError> {
    specialize_cyclotomic(f, &r.field, vals).map_err(|e| RepError::Singular(format!("{e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sausage::ZERO_E;

    fn setup(genus: u32, closed: bool) -> Rep {
        let g = Arc::new(SausageGraph::build(genus, closed).unwrap());
        let f = CycloField::new(3).unwrap();
        build_rep(&g, &f, &RepParams::standard(&g, &f)).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(setup(2, true).dim(), 27);
        assert_eq!(setup(2, false).dim(), 81);
        assert_eq!(setup(1, false).dim(), 3);
    }

    #[test]
    fn clock_shift_relation() {
        let r = setup(2, true);
        let minus_a = Cyclo::a_pow(r.field(), 1).neg();
        for e in r.graph().internal_edges() {
            let mut k = ZERO_E;
            k[e] = 1;
            let q = r.q_matrix(e);
            let em = r.e_matrix(&k).unwrap();
            assert_eq!(q.mul(&em), em.mul(&q).scale(&minus_a));
            let p = r.p() as i64;
            assert_eq!(em.pow(r.p()), CMatrix::scalar(r.field(), r.dim(), &r.y()[e].pow(p).unwrap()));
            let x2p = r.x()[e].pow(2 * p).unwrap();
            assert_eq!(q.pow(2 * r.p()), CMatrix::scalar(r.field(), r.dim(), &x2p));
        }
    }

    #[test]
    fn distinct_edges_commute() {
        let r = setup(2, true);
        let mut k = ZERO_E;
        k[0] = 1;
        let e0 = r.e_matrix(&k).unwrap();
        let q1 = r.q_matrix(1);
        assert_eq!(e0.mul(&q1), q1.mul(&e0));
    }

    #[test]
    fn genericity_examples() {
        let g = SausageGraph::build(2, true).unwrap();
        let f = CycloField::new(3).unwrap();
        let one = Cyclo::one(&f);
        let xs = |v: &[i64]| v.iter().map(|&c| Cyclo::from_int(&f, c)).collect::<Vec<_>>();
        assert!(genericity_check(&xs(&[2, 5, 3]), &one, &g, 3).unwrap().pass);
        let bad = genericity_check(&xs(&[1, 5, 3]), &one, &g, 3).unwrap();
        assert!(bad.failures.iter().any(|s| s.starts_with("eqG2[a0]")));
    }
}
