use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write;

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::AlgError;

/// Upper bound on the number of variables (A, one Q per internal edge, one C per univalent edge).
pub const MAX_VARS: usize = 16;

/// Exponent vector. Index 0 is `A`; unused slots stay zero.
pub type Exps = [i16; MAX_VARS];

pub const ZERO_EXPS: Exps = [0; MAX_VARS];

pub fn degree(e: &Exps) -> i32 {
    e.iter().map(|&x| x as i32).sum()
}

/// Graded lexicographic order, later variables more significant.
pub fn grlex_cmp(a: &Exps, b: &Exps) -> Ordering {
    degree(a).cmp(&degree(b)).then_with(|| {
        for i in (0..MAX_VARS).rev() {
            match a[i].cmp(&b[i]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

pub fn exps_add(a: &Exps, b: &Exps) -> Exps {
    let mut r = ZERO_EXPS;
    for i in 0..MAX_VARS {
        r[i] = a[i].checked_add(b[i]).expect("exponent overflow");
    }
    r
}

pub fn exps_sub(a: &Exps, b: &Exps) -> Exps {
    let mut r = ZERO_EXPS;
    for i in 0..MAX_VARS {
        r[i] = a[i].checked_sub(b[i]).expect("exponent overflow");
    }
    r
}

pub fn exps_scale(a: &Exps, k: i32) -> Exps {
    let mut r = ZERO_EXPS;
    for i in 0..MAX_VARS {
        let v = a[i] as i32 * k;
        r[i] = i16::try_from(v).expect("exponent overflow");
    }
    r
}

pub fn exps_neg(a: &Exps) -> Exps {
    exps_scale(a, -1)
}

/// Multivariate Laurent polynomial with big-integer coefficients.
///
/// Terms are kept sorted ascending in [`grlex_cmp`] with no zero coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LPoly {
    nvars: usize,
    terms: Vec<(Exps, BigInt)>,
}

impl LPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars >= 1 && nvars <= MAX_VARS, "unsupported variable count {nvars}");
        LPoly { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(nvars, ZERO_EXPS, c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn monomial(nvars: usize, e: Exps, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut p = Self::zero(nvars);
        debug_assert!(e[nvars..].iter().all(|&x| x == 0));
        if !c.is_zero() {
            p.terms.push((e, c));
        }
        p
    }

    /// The monomial `var^pow`.
    pub fn var_pow(nvars: usize, var: usize, pow: i32) -> Self {
        assert!(var < nvars);
        let mut e = ZERO_EXPS;
        e[var] = i16::try_from(pow).expect("exponent overflow");
        Self::monomial(nvars, e, 1)
    }

    /// `A^a * v^k` for a single non-A variable `v`.
    pub fn a_var(nvars: usize, a: i32, var: usize, k: i32) -> Self {
        let mut e = ZERO_EXPS;
        e[0] = a as i16;
        e[var] += k as i16;
        Self::monomial(nvars, e, 1)
    }

    /// Builds from an arbitrary list of terms, merging duplicates.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exps, BigInt)>) -> Self {
        let mut acc: HashMap<Exps, BigInt> = HashMap::new();
        for (e, c) in terms {
            debug_assert!(e[nvars..].iter().all(|&x| x == 0));
            *acc.entry(e).or_insert_with(BigInt::zero) += c;
        }
        Self::from_map(nvars, acc)
    }

    fn from_map(nvars: usize, acc: HashMap<Exps, BigInt>) -> Self {
        let mut terms: Vec<(Exps, BigInt)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| grlex_cmp(&a.0, &b.0));
        LPoly { nvars, terms }
    }

    fn from_sorted(nvars: usize, terms: Vec<(Exps, BigInt)>) -> Self {
        LPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Exps, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == ZERO_EXPS && self.terms[0].1.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Returns the constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(e, c)] if *e == ZERO_EXPS => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Exps, BigInt)> {
        self.terms.last()
    }

    pub fn check_ctx(&self, other: &LPoly) -> Result<(), AlgError> {
        if self.nvars != other.nvars {
            return Err(AlgError::ContextMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &LPoly) -> LPoly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &LPoly) -> LPoly {
        self.merge(other, true)
    }

    fn merge(&self, other: &LPoly, negate: bool) -> LPoly {
        assert_eq!(self.nvars, other.nvars, "variable context mismatch");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match grlex_cmp(&a[i].0, &b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0, c));
        }
        LPoly::from_sorted(self.nvars, out)
    }

    pub fn neg(&self) -> LPoly {
        let terms = self.terms.iter().map(|(e, c)| (*e, -c)).collect();
        LPoly::from_sorted(self.nvars, terms)
    }

    pub fn scale(&self, k: &BigInt) -> LPoly {
        if k.is_zero() {
            return LPoly::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(e, c)| (*e, c * k)).collect();
        LPoly::from_sorted(self.nvars, terms)
    }

    /// Multiplies by `c * x^e`; monomial multiplication preserves the term order.
    pub fn mul_term(&self, e: &Exps, c: &BigInt) -> LPoly {
        if c.is_zero() {
            return LPoly::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(f, d)| (exps_add(e, f), d * c)).collect();
        LPoly::from_sorted(self.nvars, terms)
    }

    pub fn mul_mono(&self, e: &Exps) -> LPoly {
        let terms = self.terms.iter().map(|(f, d)| (exps_add(e, f), d.clone())).collect();
        LPoly::from_sorted(self.nvars, terms)
    }

    pub fn mul(&self, other: &LPoly) -> LPoly {
        assert_eq!(self.nvars, other.nvars, "variable context mismatch");
        if self.is_zero() || other.is_zero() {
            return LPoly::zero(self.nvars);
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return other.mul_term(e, c);
        }
        if other.terms.len() == 1 {
            let (e, c) = &other.terms[0];
            return self.mul_term(e, c);
        }
        let mut acc: HashMap<Exps, BigInt> =
            HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = exps_add(ea, eb);
                match acc.get_mut(&e) {
                    Some(v) => *v += ca * cb,
                    None => {
                        acc.insert(e, ca * cb);
                    }
                }
            }
        }
        LPoly::from_map(self.nvars, acc)
    }

    pub fn pow(&self, k: u32) -> LPoly {
        let mut result = LPoly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Substitutes `v_i -> A^{s_i} v_i` for every variable `i` (entry 0 is ignored).
    pub fn shift_a(&self, s: &[i32]) -> LPoly {
        if s.iter().skip(1).all(|&x| x == 0) {
            return self.clone();
        }
        let mut terms: Vec<(Exps, BigInt)> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut f = *e;
                let mut a = f[0] as i32;
                for (i, &si) in s.iter().enumerate().skip(1) {
                    a += si * e[i] as i32;
                }
                f[0] = i16::try_from(a).expect("exponent overflow");
                (f, c.clone())
            })
            .collect();
        terms.sort_unstable_by(|a, b| grlex_cmp(&a.0, &b.0));
        LPoly::from_sorted(self.nvars, terms)
    }

    /// Applies an invertible linear change of exponents `e -> f(e)`.
    pub fn map_exps(&self, f: impl Fn(&Exps) -> Exps) -> LPoly {
        let mut terms: Vec<(Exps, BigInt)> = self.terms.iter().map(|(e, c)| (f(e), c.clone())).collect();
        terms.sort_unstable_by(|a, b| grlex_cmp(&a.0, &b.0));
        for w in terms.windows(2) {
            assert!(w[0].0 != w[1].0, "map_exps must be injective");
        }
        LPoly::from_sorted(self.nvars, terms)
    }

    /// Replaces `A` by `A^k`.
    pub fn a_power_subst(&self, k: i32) -> LPoly {
        self.map_exps(|e| {
            let mut f = *e;
            f[0] = i16::try_from(e[0] as i32 * k).expect("exponent overflow");
            f
        })
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Exact division by an integer; panics when inexact.
    pub fn div_int(&self, k: &BigInt) -> LPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let (q, r) = c.div_rem(k);
                assert!(r.is_zero(), "inexact integer division");
                (*e, q)
            })
            .collect();
        LPoly::from_sorted(self.nvars, terms)
    }

    pub fn min_exps(&self) -> Exps {
        let mut m = ZERO_EXPS;
        if let Some((first, _)) = self.terms.first() {
            m = *first;
        }
        for (e, _) in &self.terms {
            for i in 0..MAX_VARS {
                m[i] = m[i].min(e[i]);
            }
        }
        m
    }

    pub fn max_exps(&self) -> Exps {
        let mut m = ZERO_EXPS;
        if let Some((first, _)) = self.terms.first() {
            m = *first;
        }
        for (e, _) in &self.terms {
            for i in 0..MAX_VARS {
                m[i] = m[i].max(e[i]);
            }
        }
        m
    }

    /// Exact division by `f(X)` where `X = x^x0` is a monomial, `x0` has a positive
    /// first nonzero entry and `f` is monic with coefficients listed from degree 0.
    pub fn div_exact_in_monomial(&self, x0: &Exps, f: &[i64]) -> Option<LPoly> {
        let n = f.len() - 1;
        debug_assert_eq!(f[n], 1);
        if self.is_zero() {
            return Some(self.clone());
        }
        if n == 0 {
            return Some(self.clone());
        }
        let piv = x0.iter().position(|&v| v != 0).expect("zero monomial");
        let step = x0[piv] as i32;
        debug_assert!(step > 0);
        let mut lines: HashMap<Exps, Vec<(i32, &BigInt)>> = HashMap::new();
        for (e, c) in &self.terms {
            let t = (e[piv] as i32).div_euclid(step);
            let base = exps_sub(e, &exps_scale(x0, t));
            lines.entry(base).or_default().push((t, c));
        }
        let mut out: Vec<(Exps, BigInt)> = Vec::with_capacity(self.terms.len());
        for (base, pts) in lines {
            let tmin = pts.iter().map(|p| p.0).min().unwrap();
            let tmax = pts.iter().map(|p| p.0).max().unwrap();
            let len = (tmax - tmin + 1) as usize;
            if len <= n {
                return None;
            }
            let mut g: Vec<BigInt> = vec![BigInt::zero(); len];
            for (t, c) in pts {
                g[(t - tmin) as usize] = c.clone();
            }
            let mut q: Vec<BigInt> = vec![BigInt::zero(); len - n];
            for j in (n..len).rev() {
                let lead = core::mem::take(&mut g[j]);
                if lead.is_zero() {
                    continue;
                }
                for k in 0..n {
                    if f[k] != 0 {
                        g[j - n + k] -= &lead * f[k];
                    }
                }
                q[j - n] = lead;
            }
            if g[..n].iter().any(|c| !c.is_zero()) {
                return None;
            }
            for (i, c) in q.into_iter().enumerate() {
                if !c.is_zero() {
                    let t = tmin + i as i32;
                    out.push((exps_add(&base, &exps_scale(x0, t)), c));
                }
            }
        }
        out.sort_unstable_by(|a, b| grlex_cmp(&a.0, &b.0));
        Some(LPoly::from_sorted(self.nvars, out))
    }

    /// Exact division by an arbitrary nonzero polynomial; `None` when the division is inexact.
    pub fn div_exact(&self, d: &LPoly) -> Option<LPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(self.clone());
        }
        if d.terms.len() == 1 {
            let (e, c) = &d.terms[0];
            let mut terms = Vec::with_capacity(self.terms.len());
            for (f, a) in &self.terms {
                let (q, r) = a.div_rem(c);
                if !r.is_zero() {
                    return None;
                }
                terms.push((exps_sub(f, e), q));
            }
            return Some(LPoly::from_sorted(self.nvars, terms));
        }
        // Shift both to honest polynomials so monomial divisibility is meaningful.
        let dmin = d.min_exps();
        let dd = d.mul_mono(&exps_neg(&dmin));
        let nmin = self.min_exps();
        let nn = self.mul_mono(&exps_neg(&nmin));
        let (lde, ldc) = dd.terms.last().unwrap().clone();
        let mut rem: alloc::collections::BTreeMap<GrlexKey, BigInt> =
            nn.terms.iter().map(|(e, c)| (GrlexKey(*e), c.clone())).collect();
        let mut quot: Vec<(Exps, BigInt)> = Vec::new();
        while let Some((GrlexKey(le), lc)) = rem.pop_last() {
            if (0..MAX_VARS).any(|i| le[i] < lde[i]) {
                return None;
            }
            let (qc, r) = lc.div_rem(&ldc);
            if !r.is_zero() {
                return None;
            }
            let qe = exps_sub(&le, &lde);
            for (e, c) in dd.terms.iter().rev().skip(1) {
                let key = GrlexKey(exps_add(&qe, e));
                let delta = &qc * c;
                match rem.get_mut(&key) {
                    Some(v) => {
                        *v -= delta;
                        if v.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -delta);
                    }
                }
            }
            quot.push((qe, qc));
        }
        let shift = exps_sub(&nmin, &dmin);
        let mut terms: Vec<(Exps, BigInt)> = quot.into_iter().map(|(e, c)| (exps_add(&e, &shift), c)).collect();
        terms.sort_unstable_by(|a, b| grlex_cmp(&a.0, &b.0));
        Some(LPoly::from_sorted(self.nvars, terms))
    }

    /// Writes the canonical text form, largest term first.
    pub fn write_with(&self, names: &[String], out: &mut String) {
        if self.terms.is_empty() {
            out.push('0');
            return;
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            if idx > 0 {
                out.push_str(" + ");
            }
            let mut parts: Vec<String> = Vec::new();
            let is_const = *e == ZERO_EXPS;
            if c.is_negative() {
                parts.push(alloc::format!("({c})"));
            } else if !c.is_one() || is_const {
                parts.push(alloc::format!("{c}"));
            }
            for (i, &k) in e.iter().enumerate().take(self.nvars) {
                if k == 0 {
                    continue;
                }
                if k == 1 {
                    parts.push(names[i].clone());
                } else {
                    parts.push(alloc::format!("{}^{}", names[i], k));
                }
            }
            out.push_str(&parts.join("*"));
        }
    }

    pub fn to_text(&self, names: &[String]) -> String {
        let mut s = String::new();
        self.write_with(names, &mut s);
        s
    }

    /// Debug rendering with generic names `A, x1, x2, ...`.
    pub fn debug_text(&self) -> String {
        let mut names = Vec::new();
        names.push(String::from("A"));
        for i in 1..self.nvars {
            let mut s = String::new();
            let _ = write!(s, "x{i}");
            names.push(s);
        }
        self.to_text(&names)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct GrlexKey(Exps);

impl PartialOrd for GrlexKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GrlexKey {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex_cmp(&self.0, &other.0)
    }
}

/// Checked ring operation on two polynomials of the same context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    Neg,
}

pub fn poly_arith(op: PolyOp, a: &LPoly, b: &LPoly) -> Result<LPoly, AlgError> {
    a.check_ctx(b)?;
    Ok(match op {
        PolyOp::Add => a.add(b),
        PolyOp::Mul => a.mul(b),
        PolyOp::Neg => a.neg(),
    })
}

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    let mut p: Vec<i64> = vec![1];
    let mut divide_by: Vec<u32> = Vec::new();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        match moebius(n / d) {
            1 => {
                let mut q = vec![0i64; p.len() + d as usize];
                for (i, &c) in p.iter().enumerate() {
                    q[i] -= c;
                    q[i + d as usize] += c;
                }
                p = q;
            }
            -1 => divide_by.push(d),
            _ => {}
        }
    }
    for d in divide_by {
        let mut b = vec![0i64; d as usize + 1];
        b[0] = -1;
        b[d as usize] = 1;
        p = univariate_div_monic(&p, &b);
    }
    p
}

fn moebius(n: u32) -> i32 {
    let mut m = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if m > 1 {
        result = -result;
    }
    result
}

fn univariate_div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let n = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![0i64; a.len() - n];
    for j in (n..a.len()).rev() {
        let lead = r[j];
        if lead == 0 {
            continue;
        }
        for k in 0..=n {
            r[j - n + k] -= lead * b[k];
        }
        q[j - n] = lead;
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

pub fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}
