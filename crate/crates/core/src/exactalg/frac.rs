use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::lpoly::{cyclotomic, euler_phi, exps_neg, exps_scale, exps_sub, Exps, LPoly, MAX_VARS, ZERO_EXPS};
use super::AlgError;

/// An irreducible-or-opaque denominator factor.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Factor {
    /// `Phi_d(X)` with `X` the primitive monomial `x0` whose first nonzero exponent is positive.
    Cyc { x0: Exps, d: u32 },
    /// A polynomial factor with no monomial content, unit content and positive leading coefficient.
    Poly(LPoly),
}

impl Factor {
    pub fn expand(&self, nvars: usize) -> LPoly {
        match self {
            Factor::Cyc { x0, d } => {
                let coeffs = cyclotomic(*d);
                LPoly::from_terms(
                    nvars,
                    coeffs
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| **c != 0)
                        .map(|(k, c)| (exps_scale(x0, k as i32), BigInt::from(*c))),
                )
            }
            Factor::Poly(p) => p.clone(),
        }
    }

    fn divide(&self, p: &LPoly) -> Option<LPoly> {
        match self {
            Factor::Cyc { x0, d } => p.div_exact_in_monomial(x0, &cyclotomic(*d)),
            Factor::Poly(f) => p.div_exact(f),
        }
    }

    /// Applies `v_i -> A^{s_i} v_i`; returns the new factor and the unit `u` with
    /// `old = u * new` (as `(sign, monomial)`).
    fn shift(&self, s: &[i32], nvars: usize) -> (Factor, bool, Exps) {
        match self {
            Factor::Cyc { x0, d } => {
                let mut y = *x0;
                let mut a = x0[0] as i32;
                for (i, &si) in s.iter().enumerate().skip(1) {
                    a += si * x0[i] as i32;
                }
                y[0] = i16::try_from(a).expect("exponent overflow");
                let first = y.iter().find(|&&v| v != 0).copied().unwrap_or(0);
                if first > 0 {
                    return (Factor::Cyc { x0: y, d: *d }, false, ZERO_EXPS);
                }
                // Phi_d(Y^-1) = Y^-phi(d) Phi_d(Y) for d >= 2 and -Y^-1 (Y - 1) for d = 1.
                let y = exps_neg(&y);
                let f = Factor::Cyc { x0: y, d: *d };
                if *d == 1 {
                    (f, true, exps_neg(&y))
                } else {
                    (f, false, exps_scale(&y, -(euler_phi(*d) as i32)))
                }
            }
            Factor::Poly(p) => {
                let q = p.shift_a(s);
                let (c, m, n) = normalize_poly(q);
                debug_assert!(c.abs().is_one());
                let _ = nvars;
                (Factor::Poly(n), c.is_negative(), m)
            }
        }
    }
}

/// Splits `p = c * x^m * n` with `n` free of monomial content, primitive, and with positive leading coefficient.
fn normalize_poly(p: LPoly) -> (BigInt, Exps, LPoly) {
    let mut c = p.content();
    if p.leading().map(|t| t.1.is_negative()).unwrap_or(false) {
        c = -c;
    }
    let m = p.min_exps();
    let n = p.mul_mono(&exps_neg(&m)).div_int(&c);
    (c, m, n)
}

fn primitive_direction(v: &Exps) -> Option<(Exps, i32)> {
    let mut g = 0i32;
    for &x in v.iter() {
        g = g.gcd(&(x as i32));
    }
    if g == 0 {
        return None;
    }
    let mut x0 = ZERO_EXPS;
    for i in 0..MAX_VARS {
        x0[i] = (v[i] as i32 / g) as i16;
    }
    let first = *x0.iter().find(|&&x| x != 0).unwrap();
    if first < 0 {
        Some((exps_neg(&x0), -g))
    } else {
        Some((x0, g))
    }
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

const TRIAL_TERM_LIMIT: usize = 24;
const TRIAL_DEGREE_LIMIT: i32 = 32;

/// Factors `p = c * x^m * prod f_i^{e_i}` splitting off cyclotomic-in-monomial factors where possible.
fn split_factors(p: &LPoly) -> (BigInt, Exps, Vec<(Factor, u32)>) {
    assert!(!p.is_zero());
    let nvars = p.nvars();
    let (mut c, mut m, q) = normalize_poly(p.clone());
    let mut out: Vec<(Factor, u32)> = Vec::new();
    let mut work = alloc::vec![q];
    while let Some(q) = work.pop() {
        if q.is_monomial() {
            let (e, k) = &q.terms()[0];
            c *= k;
            m = super::lpoly::exps_add(&m, e);
            continue;
        }
        match trial_cyclotomic(&q) {
            Some((f, rest)) => {
                push_factor(&mut out, f, 1);
                work.push(rest);
            }
            None => {
                let (k, e, n) = normalize_poly(q);
                c *= k;
                m = super::lpoly::exps_add(&m, &e);
                push_factor(&mut out, Factor::Poly(n), 1);
            }
        }
    }
    let _ = nvars;
    out.sort();
    (c, m, out)
}

fn trial_cyclotomic(q: &LPoly) -> Option<(Factor, LPoly)> {
    let terms = q.terms();
    if terms.len() > TRIAL_TERM_LIMIT {
        return None;
    }
    let mut tried: Vec<(Exps, u32)> = Vec::new();
    for i in 0..terms.len() {
        for j in 0..i {
            let v = exps_sub(&terms[i].0, &terms[j].0);
            let Some((x0, g)) = primitive_direction(&v) else { continue };
            let g = g.unsigned_abs();
            if g as i32 > TRIAL_DEGREE_LIMIT {
                continue;
            }
            for d in divisors(2 * g) {
                if tried.contains(&(x0, d)) {
                    continue;
                }
                tried.push((x0, d));
                if let Some(r) = q.div_exact_in_monomial(&x0, &cyclotomic(d)) {
                    return Some((Factor::Cyc { x0, d }, r));
                }
            }
        }
    }
    None
}

fn push_factor(list: &mut Vec<(Factor, u32)>, f: Factor, k: u32) {
    if let Some(entry) = list.iter_mut().find(|(g, _)| *g == f) {
        entry.1 += k;
    } else {
        list.push((f, k));
    }
}

/// An element of the fraction field: `num / (dc * prod factor^mult)`.
#[derive(Clone, Debug)]
pub struct Frac {
    num: LPoly,
    dc: BigInt,
    den: Vec<(Factor, u32)>,
}

impl Frac {
    pub fn zero(nvars: usize) -> Self {
        Frac { num: LPoly::zero(nvars), dc: BigInt::one(), den: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Frac::from_poly(LPoly::one(nvars))
    }

    pub fn from_poly(p: LPoly) -> Self {
        Frac { num: p, dc: BigInt::one(), den: Vec::new() }
    }

    pub fn from_int(nvars: usize, c: impl Into<BigInt>) -> Self {
        Frac::from_poly(LPoly::constant(nvars, c))
    }

    pub fn monomial(nvars: usize, e: Exps, c: impl Into<BigInt>) -> Self {
        Frac::from_poly(LPoly::monomial(nvars, e, c))
    }

    /// `num / den` with the denominator split into factors.
    pub fn from_num_den(num: LPoly, den: &LPoly) -> Result<Self, AlgError> {
        num.check_ctx(den)?;
        if den.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        let (c, m, factors) = split_factors(den);
        let mut num = num.mul_mono(&exps_neg(&m));
        if c.is_negative() {
            num = num.neg();
        }
        let mut f = Frac { num, dc: c.abs(), den: factors };
        f.reduce();
        Ok(f)
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &LPoly {
        &self.num
    }

    pub fn den_const(&self) -> &BigInt {
        &self.dc
    }

    pub fn den_factors(&self) -> &[(Factor, u32)] {
        &self.den
    }

    /// The expanded denominator including its integer content.
    pub fn den_poly(&self) -> LPoly {
        let n = self.nvars();
        let mut d = LPoly::constant(n, self.dc.clone());
        for (f, k) in &self.den {
            d = d.mul(&f.expand(n).pow(*k));
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.dc.is_one() && self.num.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_empty() && self.dc.is_one()
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.dc = BigInt::one();
            self.den.clear();
            return;
        }
        let mut kept: Vec<(Factor, u32)> = Vec::with_capacity(self.den.len());
        for (f, k) in core::mem::take(&mut self.den) {
            let mut k = k;
            while k > 0 {
                match f.divide(&self.num) {
                    Some(q) => {
                        self.num = q;
                        k -= 1;
                    }
                    None => break,
                }
            }
            if k > 0 {
                kept.push((f, k));
            }
        }
        self.den = kept;
        self.reduce_content();
    }

    fn reduce_content(&mut self) {
        if self.dc.is_one() {
            return;
        }
        let g = self.num.content().gcd(&self.dc);
        if !g.is_one() {
            self.num = self.num.div_int(&g);
            self.dc = &self.dc / &g;
        }
    }

    pub fn neg(&self) -> Frac {
        Frac { num: self.num.neg(), dc: self.dc.clone(), den: self.den.clone() }
    }

    pub fn scale_int(&self, k: &BigInt) -> Frac {
        let mut f = Frac { num: self.num.scale(k), dc: self.dc.clone(), den: self.den.clone() };
        f.reduce_content();
        if f.num.is_zero() {
            return Frac::zero(self.nvars());
        }
        f
    }

    pub fn mul_mono(&self, e: &Exps) -> Frac {
        Frac { num: self.num.mul_mono(e), dc: self.dc.clone(), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &LPoly) -> Frac {
        self.mul(&Frac::from_poly(p.clone()))
    }

    /// Cancels as much of `num` as possible against the factors in `den`, removing them from `den`.
    fn cancel_into(num: &mut LPoly, den: &mut Vec<(Factor, u32)>) {
        for entry in den.iter_mut() {
            while entry.1 > 0 {
                match entry.0.divide(num) {
                    Some(q) => {
                        *num = q;
                        entry.1 -= 1;
                    }
                    None => break,
                }
            }
        }
        den.retain(|(_, k)| *k > 0);
    }

    pub fn mul(&self, other: &Frac) -> Frac {
        assert_eq!(self.nvars(), other.nvars(), "variable context mismatch");
        if self.is_zero() || other.is_zero() {
            return Frac::zero(self.nvars());
        }
        let mut na = self.num.clone();
        let mut nb = other.num.clone();
        let mut da = self.den.clone();
        let mut db = other.den.clone();
        if !db.is_empty() && !na.is_monomial() {
            Self::cancel_into(&mut na, &mut db);
        }
        if !da.is_empty() && !nb.is_monomial() {
            Self::cancel_into(&mut nb, &mut da);
        }
        let ga = na.content().gcd(&other.dc);
        let gb = nb.content().gcd(&self.dc);
        if !ga.is_one() {
            na = na.div_int(&ga);
        }
        if !gb.is_one() {
            nb = nb.div_int(&gb);
        }
        let dc = (&self.dc / &gb) * (&other.dc / &ga);
        let mut den = da;
        for (f, k) in db {
            push_factor(&mut den, f, k);
        }
        den.sort();
        Frac { num: na.mul(&nb), dc, den }
    }

    pub fn inv(&self) -> Result<Frac, AlgError> {
        if self.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        let n = self.nvars();
        let (c, m, factors) = split_factors(&self.num);
        let mut num = LPoly::constant(n, self.dc.clone()).mul_mono(&exps_neg(&m));
        for (f, k) in &self.den {
            num = num.mul(&f.expand(n).pow(*k));
        }
        if c.is_negative() {
            num = num.neg();
        }
        let mut f = Frac { num, dc: c.abs(), den: factors };
        f.reduce();
        Ok(f)
    }

    pub fn div(&self, other: &Frac) -> Result<Frac, AlgError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn add(&self, other: &Frac) -> Frac {
        Frac::sum(self.nvars(), [self, other])
    }

    pub fn sub(&self, other: &Frac) -> Frac {
        Frac::sum(self.nvars(), [self, &other.neg()])
    }

    /// Sums many fractions over a single common denominator.
    pub fn sum<'a>(nvars: usize, items: impl IntoIterator<Item = &'a Frac>) -> Frac {
        let items: Vec<&Frac> = items.into_iter().filter(|f| !f.is_zero()).collect();
        match items.len() {
            0 => return Frac::zero(nvars),
            1 => return items[0].clone(),
            _ => {}
        }
        let n = nvars;
        let mut lcm_f: Vec<(Factor, u32)> = Vec::new();
        let mut lcm_c = BigInt::one();
        for f in &items {
            assert_eq!(f.nvars(), n, "variable context mismatch");
            lcm_c = lcm_c.lcm(&f.dc);
            for (g, k) in &f.den {
                match lcm_f.iter_mut().find(|(h, _)| h == g) {
                    Some(e) => e.1 = e.1.max(*k),
                    None => lcm_f.push((g.clone(), *k)),
                }
            }
        }
        lcm_f.sort();
        let mut cache: Vec<LPoly> = Vec::new();
        let mut acc = LPoly::zero(n);
        for f in &items {
            let mut t = f.num.scale(&(&lcm_c / &f.dc));
            for (idx, (g, k)) in lcm_f.iter().enumerate() {
                let have = f.den.iter().find(|(h, _)| h == g).map(|e| e.1).unwrap_or(0);
                if have < *k {
                    if cache.len() <= idx {
                        cache.resize(idx + 1, LPoly::zero(n));
                    }
                    if cache[idx].is_zero() {
                        cache[idx] = g.expand(n);
                    }
                    t = t.mul(&cache[idx].pow(k - have));
                }
            }
            acc = acc.add(&t);
        }
        let mut out = Frac { num: acc, dc: lcm_c, den: lcm_f };
        out.reduce();
        out
    }

    /// Substitutes `v_i -> A^{s_i} v_i` for every variable index `i >= 1`.
    pub fn shift(&self, s: &[i32]) -> Frac {
        if s.iter().skip(1).all(|&x| x == 0) || self.is_zero() {
            return self.clone();
        }
        let n = self.nvars();
        let mut num = self.num.shift_a(s);
        let mut den: Vec<(Factor, u32)> = Vec::with_capacity(self.den.len());
        let mut neg = false;
        let mut mono = ZERO_EXPS;
        for (f, k) in &self.den {
            let (g, sign, m) = f.shift(s, n);
            if sign && k % 2 == 1 {
                neg = !neg;
            }
            mono = super::lpoly::exps_add(&mono, &exps_scale(&m, *k as i32));
            push_factor(&mut den, g, *k);
        }
        den.sort();
        // num / (u * f') = num u^-1 / f'
        num = num.mul_mono(&exps_neg(&mono));
        if neg {
            num = num.neg();
        }
        Frac { num, dc: self.dc.clone(), den }
    }

    /// Replaces `A` by `A^k`.
    pub fn a_power_subst(&self, k: i32) -> Frac {
        let num = self.num.a_power_subst(k);
        let den = self.den_poly().a_power_subst(k);
        Frac::from_num_den(num, &den).expect("nonzero denominator")
    }

    pub fn equals(&self, other: &Frac) -> bool {
        if self.dc == other.dc && self.den == other.den {
            return self.num == other.num;
        }
        self.sub(other).is_zero()
    }

    /// Numerator and denominator in display normal form: the denominator has zero
    /// minimal exponents and a positive leading coefficient.
    pub fn normal_parts(&self) -> (LPoly, LPoly) {
        let d = self.den_poly();
        let m = d.min_exps();
        let mut d = d.mul_mono(&exps_neg(&m));
        let mut n = self.num.mul_mono(&exps_neg(&m));
        if d.leading().map(|t| t.1.is_negative()).unwrap_or(false) {
            d = d.neg();
            n = n.neg();
        }
        (n, d)
    }

    pub fn to_text(&self, names: &[String]) -> String {
        let (n, d) = self.normal_parts();
        let mut s = String::new();
        let wrap = |p: &LPoly, s: &mut String| {
            if p.len() > 1 {
                s.push('(');
                p.write_with(names, s);
                s.push(')');
            } else {
                p.write_with(names, s);
            }
        };
        if d.is_one() {
            n.write_with(names, &mut s);
            return s;
        }
        wrap(&n, &mut s);
        s.push_str(" / ");
        wrap(&d, &mut s);
        s
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.normal_parts();
        if d.is_one() {
            write!(f, "{}", n.debug_text())
        } else {
            write!(f, "({}) / ({})", n.debug_text(), d.debug_text())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FracOp {
    Add,
    Mul,
    Inv,
    Neg,
}

pub fn frac_arith(op: FracOp, a: &Frac, b: &Frac) -> Result<Frac, AlgError> {
    a.num.check_ctx(&b.num)?;
    match op {
        FracOp::Add => Ok(a.add(b)),
        FracOp::Mul => Ok(a.mul(b)),
        FracOp::Inv => a.inv(),
        FracOp::Neg => Ok(a.neg()),
    }
}

pub fn frac_equal(a: &Frac, b: &Frac) -> bool {
    a.equals(b)
}

/// `P(A^{l_1} Q_1, ..., A^{l_n} Q_n, C)` where `l` is indexed by variable (entry 0 unused).
pub fn shift_substitute(p: &Frac, l: &[i32]) -> Frac {
    p.shift(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: usize = 3;

    fn v(a: i32, q1: i32, q2: i32) -> Exps {
        let mut e = ZERO_EXPS;
        e[0] = a as i16;
        e[1] = q1 as i16;
        e[2] = q2 as i16;
        e
    }

    fn mono(a: i32, q1: i32, q2: i32) -> LPoly {
        LPoly::monomial(N, v(a, q1, q2), 1)
    }

    fn u(a: i32, q1: i32, q2: i32) -> LPoly {
        mono(a, q1, q2).sub(&mono(-a, -q1, -q2))
    }

    #[test]
    fn inverse_of_u() {
        let f = Frac::from_poly(u(0, 2, 0)).inv().unwrap();
        let (n, d) = f.normal_parts();
        assert_eq!(n, mono(0, 2, 0));
        assert_eq!(d, mono(0, 4, 0).sub(&LPoly::one(N)));
        assert!(f.mul(&Frac::from_poly(u(0, 2, 0))).is_one());
    }

    #[test]
    fn u_times_inverse() {
        let x = Frac::from_poly(u(2, 2, 0));
        assert!(x.mul(&x.inv().unwrap()).is_one());
    }

    #[test]
    fn u_square_over_u() {
        let f = Frac::from_poly(u(2, 2, 0)).div(&Frac::from_poly(u(1, 1, 0))).unwrap();
        assert!(f.is_poly());
        assert_eq!(f.num(), &mono(1, 1, 0).add(&mono(-1, -1, 0)));
    }

    #[test]
    fn shift_examples() {
        let p = Frac::from_poly(mono(0, 1, 0));
        assert_eq!(p.shift(&[0, 3, 0]).num(), &mono(3, 1, 0));
        let p = Frac::from_poly(mono(0, 1, -1));
        assert_eq!(p.shift(&[0, 1, 1]).num(), &mono(0, 1, -1));
        let c = Frac::from_int(N, 7);
        assert!(c.shift(&[0, 1, 1]).equals(&c));
    }

    #[test]
    fn shift_flips_orientation() {
        // 1/U(A Q1^-1) shifted by Q1 -> A^3 Q1 flips the sign of the A-exponent.
        let f = Frac::from_poly(u(1, -1, 0)).inv().unwrap();
        let g = f.shift(&[0, 3, 0]);
        let expect = Frac::from_poly(u(-2, -1, 0)).inv().unwrap();
        assert!(g.equals(&expect));
        assert!(g.mul(&Frac::from_poly(u(-2, -1, 0))).is_one());
    }

    #[test]
    fn equality_examples() {
        let a = Frac::from_poly(u(2, 2, 0)).div(&Frac::from_poly(u(1, 1, 0))).unwrap();
        let b = Frac::from_poly(mono(1, 1, 0).add(&mono(-1, -1, 0)));
        assert!(frac_equal(&a, &b));
        let z = Frac::from_poly(LPoly::zero(N)).div(&Frac::from_poly(u(0, 2, 0))).unwrap();
        assert!(frac_equal(&Frac::zero(N), &z));
        assert!(!frac_equal(&Frac::from_poly(mono(0, 1, 0)), &Frac::from_poly(mono(0, -1, 0))));
    }

    #[test]
    fn split_products_of_u() {
        let p = u(2, 2, 1).mul(&u(0, 2, -1));
        let (c, m, fs) = split_factors(&p);
        let mut back = LPoly::monomial(N, m, c);
        for (f, k) in &fs {
            back = back.mul(&f.expand(N).pow(*k));
        }
        assert_eq!(back, p);
        assert!(fs.iter().all(|(f, _)| matches!(f, Factor::Cyc { .. })));
    }

    #[test]
    fn sums_cancel() {
        let a = Frac::from_poly(mono(1, 0, 0)).div(&Frac::from_poly(u(2, 0, 0))).unwrap();
        let b = Frac::from_poly(mono(-1, 0, 0)).div(&Frac::from_poly(u(2, 0, 0))).unwrap();
        let s = a.sub(&b);
        let expect = Frac::from_poly(u(1, 0, 0)).div(&Frac::from_poly(u(2, 0, 0))).unwrap();
        assert!(s.equals(&expect));
        let w = Frac::from_poly(mono(1, 0, 0).add(&mono(-1, 0, 0))).inv().unwrap();
        assert!(s.equals(&w));
    }

    #[test]
    fn text_form() {
        let names: Vec<String> = ["A", "Q[a0]", "Q[c1]"].iter().map(|s| String::from(*s)).collect();
        let f = Frac::from_poly(u(0, 2, 0)).inv().unwrap();
        assert_eq!(f.to_text(&names), "Q[a0]^2 / (Q[a0]^4 + (-1))");
    }
}
