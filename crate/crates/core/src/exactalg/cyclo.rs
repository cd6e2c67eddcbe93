use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::frac::Frac;
use super::lpoly::{cyclotomic, LPoly};
use super::AlgError;

/// The field `Q[A] / Phi_{2p}(A)` for odd `p >= 3`; `A` is a primitive `2p`-th root of unity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloField {
    p: u32,
    modulus: Vec<i64>,
}

impl CycloField {
    pub fn new(p: u32) -> Result<Arc<Self>, AlgError> {
        if p < 3 || p % 2 == 0 {
            return Err(AlgError::BadOrder(p));
        }
        Ok(Arc::new(CycloField { p, modulus: cyclotomic(2 * p) }))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Degree of the field over Q.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

#[derive(Clone)]
pub struct Cyclo {
    field: Arc<CycloField>,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo(p={}, {})", self.field.p, self)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.field.p == other.field.p && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclo {}

impl core::hash::Hash for Cyclo {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.field.p.hash(state);
        for c in &self.coeffs {
            c.numer().hash(state);
            c.denom().hash(state);
        }
    }
}

fn reduce_mod(mut v: Vec<BigRational>, m: &[i64]) -> Vec<BigRational> {
    let n = m.len() - 1;
    for j in (n..v.len()).rev() {
        let lead = core::mem::take(&mut v[j]);
        if lead.is_zero() {
            continue;
        }
        for k in 0..n {
            if m[k] != 0 {
                v[j - n + k] -= &lead * BigRational::from_integer(BigInt::from(m[k]));
            }
        }
    }
    v.truncate(n);
    v.resize(n, BigRational::zero());
    v
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

/// Division with remainder in Q[x]; `b` must be nonzero and trimmed.
fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len() - db];
    for j in (db..r.len()).rev() {
        let c = &r[j] / &lb;
        if c.is_zero() {
            continue;
        }
        for k in 0..=db {
            let t = &c * &b[k];
            r[j - db + k] -= t;
        }
        q[j - db] = c;
    }
    trim(&mut r);
    (q, r)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(&mut out);
    out
}

impl Cyclo {
    pub fn zero(field: &Arc<CycloField>) -> Self {
        Cyclo { field: field.clone(), coeffs: vec![BigRational::zero(); field.degree()] }
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Cyclo::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<CycloField>, c: impl Into<BigInt>) -> Self {
        Cyclo::from_rational(field, BigRational::from_integer(c.into()))
    }

    pub fn from_rational(field: &Arc<CycloField>, c: BigRational) -> Self {
        let mut z = Cyclo::zero(field);
        z.coeffs[0] = c;
        z
    }

    /// Builds from coefficients of `1, A, A^2, ...` of any length.
    pub fn from_coeffs(field: &Arc<CycloField>, coeffs: Vec<BigRational>) -> Self {
        Cyclo { field: field.clone(), coeffs: reduce_mod(coeffs, &field.modulus) }
    }

    /// `A^k` for any integer `k`.
    pub fn a_pow(field: &Arc<CycloField>, k: i64) -> Self {
        let order = 2 * field.p as i64;
        let k = k.rem_euclid(order) as usize;
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = BigRational::one();
        Cyclo::from_coeffs(field, v)
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn same_field(&self, other: &Cyclo) {
        assert_eq!(self.field.p, other.field.p, "cyclotomic field mismatch");
    }

    pub fn add(&self, other: &Cyclo) -> Cyclo {
        self.same_field(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Cyclo { field: self.field.clone(), coeffs }
    }

    pub fn sub(&self, other: &Cyclo) -> Cyclo {
        self.same_field(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Cyclo { field: self.field.clone(), coeffs }
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Cyclo) -> Cyclo {
        self.same_field(other);
        if let Some(r) = other.as_rational() {
            return self.scale(r);
        }
        if let Some(r) = self.as_rational() {
            return other.scale(r);
        }
        Cyclo::from_coeffs(&self.field, poly_mul(&self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, r: &BigRational) -> Cyclo {
        Cyclo { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn inv(&self) -> Result<Cyclo, AlgError> {
        if self.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Cyclo::from_rational(&self.field, r.recip()));
        }
        // Extended Euclid: s * self + t * m = g with g constant.
        let m: Vec<BigRational> =
            self.field.modulus.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        let mut a = self.coeffs.clone();
        trim(&mut a);
        let (mut r0, mut r1) = (m, a);
        let (mut s0, mut s1): (Vec<BigRational>, Vec<BigRational>) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s2);
        }
        assert_eq!(r0.len(), 1, "modulus is irreducible");
        let g = r0[0].clone();
        let s: Vec<BigRational> = s0.iter().map(|c| c / &g).collect();
        Ok(Cyclo::from_coeffs(&self.field, s))
    }

    pub fn div(&self, other: &Cyclo) -> Result<Cyclo, AlgError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Cyclo, AlgError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut result = Cyclo::one(&self.field);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(result)
    }
}

/// Evaluates a Laurent polynomial with `A` mapped to the field generator and
/// variable `i >= 1` mapped to `values[i]`.
pub fn specialize_poly(p: &LPoly, field: &Arc<CycloField>, values: &[Cyclo]) -> Result<Cyclo, AlgError> {
    let mut cache: HashMap<(usize, i16), Cyclo> = HashMap::new();
    let mut acc = Cyclo::zero(field);
    for (e, c) in p.terms() {
        let mut t = Cyclo::a_pow(field, e[0] as i64);
        for i in 1..p.nvars() {
            if e[i] == 0 {
                continue;
            }
            let key = (i, e[i]);
            if !cache.contains_key(&key) {
                let v = values.get(i).ok_or(AlgError::MissingValue(i))?;
                cache.insert(key, v.pow(e[i] as i64)?);
            }
            t = t.mul(&cache[&key]);
        }
        acc = acc.add(&t.scale(&BigRational::from_integer(c.clone())));
    }
    Ok(acc)
}

/// Image of a fraction under `A -> zeta_{2p}` and the given variable values.
pub fn specialize_cyclotomic(a: &Frac, field: &Arc<CycloField>, values: &[Cyclo]) -> Result<Cyclo, AlgError> {
    let num = specialize_poly(a.num(), field, values)?;
    if num.is_zero() {
        return Ok(num);
    }
    let n = a.nvars();
    let mut den = Cyclo::from_int(field, a.den_const().clone());
    for (f, k) in a.den_factors() {
        let v = specialize_poly(&f.expand(n), field, values)?;
        if v.is_zero() {
            return Err(AlgError::ZeroDenominator(format!("{}", f.expand(n).debug_text())));
        }
        den = den.mul(&v.pow(*k as i64)?);
    }
    num.div(&den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::lpoly::ZERO_EXPS;

    #[test]
    fn a_to_the_p() {
        for p in [3u32, 5, 7] {
            let f = CycloField::new(p).unwrap();
            assert_eq!(f.degree(), super::super::lpoly::euler_phi(p) as usize);
            let ap = Cyclo::a_pow(&f, p as i64);
            assert_eq!(ap, Cyclo::from_int(&f, -1));
            let minus_a = Cyclo::a_pow(&f, 1).neg();
            assert!(minus_a.pow(p as i64).unwrap().is_one());
            assert!(Cyclo::a_pow(&f, 2 * p as i64).is_one());
        }
    }

    #[test]
    fn quantum_integer_at_p_vanishes() {
        let f = CycloField::new(3).unwrap();
        let mut e1 = ZERO_EXPS;
        e1[0] = 6;
        let mut e2 = ZERO_EXPS;
        e2[0] = -6;
        let q = LPoly::monomial(1, e1, 1).sub(&LPoly::monomial(1, e2, 1));
        assert!(specialize_poly(&q, &f, &[]).unwrap().is_zero());
    }

    #[test]
    fn inverse_round_trip() {
        let f = CycloField::new(5).unwrap();
        let x = Cyclo::from_coeffs(
            &f,
            vec![
                BigRational::from_integer(3.into()),
                BigRational::from_integer((-2).into()),
                BigRational::new(1.into(), 7.into()),
            ],
        );
        assert!(x.mul(&x.inv().unwrap()).is_one());
    }

    #[test]
    fn rejects_even_order() {
        assert!(CycloField::new(4).is_err());
        assert!(CycloField::new(1).is_err());
    }
}
