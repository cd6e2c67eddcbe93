//! Text forms of cyclotomic scalars: rationals, `c*A^k` sums and coefficient vectors.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use skein_torus_core::exactalg::{Cyclo, CycloField};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad scalar `{text}`: {reason}")]
pub struct ScalarError {
    pub text: String,
    pub reason: String,
}

fn err(text: &str, reason: impl Into<String>) -> ScalarError {
    ScalarError { text: text.to_string(), reason: reason.into() }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Parses `3`, `-1/6`, `2*A^2 - A`, `-A^-1` or a power-basis vector `[1, 0, 2/3]`.
pub fn parse_cyclo(text: &str, field: &Arc<CycloField>) -> Result<Cyclo, ScalarError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(err(text, "empty"));
    }
    if let Some(inner) = s.strip_prefix('[') {
        let inner = inner.strip_suffix(']').ok_or_else(|| err(text, "unclosed `[`"))?;
        let coeffs = inner
            .split(',')
            .map(|c| parse_rational(c).ok_or_else(|| err(text, format!("`{}` is not a rational", c.trim()))))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.len() > field.degree() {
            return Err(err(text, format!("at most {} coefficients for p = {}", field.degree(), field.p())));
        }
        return Ok(Cyclo::from_coeffs(field, coeffs));
    }
    let mut total = Cyclo::zero(field);
    let mut rest = s;
    let mut first = true;
    while !rest.trim().is_empty() {
        let t = rest.trim_start();
        let (neg, body) = match t.chars().next() {
            Some('+') if !first => (false, &t[1..]),
            Some('-') => (true, &t[1..]),
            _ if first => (false, t),
            _ => return Err(err(text, "expected `+` or `-` between terms")),
        };
        first = false;
        let body = body.trim_start();
        let end = body
            .char_indices()
            .skip(1)
            .find(|&(i, c)| (c == '+' || c == '-') && !body[..i].trim_end().ends_with('^'))
            .map(|(i, _)| i)
            .unwrap_or(body.len());
        let term = parse_term(body[..end].trim(), field).ok_or_else(|| err(text, format!("bad term `{}`", body[..end].trim())))?;
        total = if neg { total.sub(&term) } else { total.add(&term) };
        rest = &body[end..];
    }
    Ok(total)
}

fn parse_term(t: &str, field: &Arc<CycloField>) -> Option<Cyclo> {
    let (coef, apart) = match t.find('A') {
        Some(i) => {
            let c = t[..i].trim().trim_end_matches('*').trim();
            (c, Some(t[i + 1..].trim()))
        }
        None => (t, None),
    };
    let c = if coef.is_empty() { BigRational::one() } else { parse_rational(coef)? };
    let k: i64 = match apart {
        None => return Some(Cyclo::from_rational(field, c)),
        Some("") => 1,
        Some(a) => a.strip_prefix('^')?.trim().parse().ok()?,
    };
    Some(Cyclo::a_pow(field, k).mul(&Cyclo::from_rational(field, c)))
}

/// Canonical text: the power-basis coefficient vector.
pub fn cyclo_text(c: &Cyclo) -> String {
    c.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        let f = CycloField::new(3).unwrap();
        assert_eq!(parse_cyclo("2", &f).unwrap(), Cyclo::from_int(&f, 2));
        let sixth = parse_cyclo("1/6", &f).unwrap();
        assert_eq!(sixth.mul(&Cyclo::from_int(&f, 6)), Cyclo::one(&f));
        let a = Cyclo::a_pow(&f, 1);
        assert_eq!(parse_cyclo("-A", &f).unwrap(), a.neg());
        assert_eq!(parse_cyclo("2*A^-1 + 3", &f).unwrap(), Cyclo::a_pow(&f, -1).mul(&Cyclo::from_int(&f, 2)).add(&Cyclo::from_int(&f, 3)));
        let x = parse_cyclo("5/2*A^2 - 1/3", &f).unwrap();
        assert_eq!(parse_cyclo(&cyclo_text(&x), &f).unwrap(), x);
        assert!(parse_cyclo("2x", &f).is_err());
        assert!(parse_cyclo("1/0", &f).is_err());
    }
}
