//! Polynomial text format: `coeff*x0^a*x1^b` terms joined by `+`, with
//! rational coefficients written `p/q`. Terms are emitted in descending
//! graded-lex order; exponent 1 is written without `^1` and a coefficient of
//! 1 is written explicitly. The parser also accepts `-` separators, omitted
//! coefficients and whitespace.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::monomial::Monomial;
use crate::poly::mpoly::MPoly;
use crate::scalar::{format_rational, parse_rational, Rational};

pub fn format_poly(p: &MPoly<Rational>) -> String {
    let names: Vec<String> = (0..p.nvars()).map(|i| format!("x{i}")).collect();
    format_poly_named(p, &names)
}

/// Same layout as [`format_poly`] with custom variable names.
pub fn format_poly_named(p: &MPoly<Rational>, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let terms: Vec<String> = p
        .terms()
        .map(|(m, c)| {
            let mut s = format_rational(c);
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => s.push_str(&format!("*{}", names[i])),
                    _ => s.push_str(&format!("*{}^{e}", names[i])),
                }
            }
            s
        })
        .collect();
    terms.join("+")
}

/// Parses a polynomial in `nvars` variables.
pub fn parse_poly(text: &str, nvars: usize) -> Result<MPoly<Rational>> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    // Split into signed terms. A '-' directly after '^' or '/' is not a
    // separator, and neither is one right after a '+'.
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    let mut prev: Option<char> = None;
    for ch in cleaned.chars() {
        match ch {
            '+' => {
                if !cur.is_empty() {
                    terms.push(std::mem::take(&mut cur));
                }
            }
            '-' if !matches!(prev, None | Some('+') | Some('^') | Some('/') | Some('*')) => {
                terms.push(std::mem::take(&mut cur));
                cur.push('-');
            }
            _ => cur.push(ch),
        }
        prev = Some(ch);
    }
    if !cur.is_empty() {
        terms.push(cur);
    }
    let mut p = MPoly::zero(nvars);
    for t in terms {
        let (m, c) = parse_term(&t, nvars)?;
        p.add_term(m, c);
    }
    Ok(p)
}

fn parse_term(t: &str, nvars: usize) -> Result<(Monomial, Rational)> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let mut coeff = Rational::one();
    let mut exps = vec![0u32; nvars];
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in `{t}`")));
        }
        if let Some(var) = factor.strip_prefix('x') {
            let (idx, exp) = match var.split_once('^') {
                Some((i, e)) => (i, e),
                None => (var, "1"),
            };
            let idx: usize = idx
                .parse()
                .map_err(|_| Error::Parse(format!("bad variable `{factor}`")))?;
            let exp: u32 = exp
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent `{factor}`")))?;
            if idx >= nvars {
                return Err(Error::VariableIndex { index: idx, nvars });
            }
            exps[idx] += exp;
        } else {
            let c = parse_rational(factor)
                .ok_or_else(|| Error::Parse(format!("bad coefficient `{factor}`")))?;
            coeff *= c;
        }
    }
    if neg {
        coeff = -coeff;
    }
    if coeff.is_zero() {
        return Ok((Monomial::new(exps), Rational::zero()));
    }
    Ok((Monomial::new(exps), coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qf};

    #[test]
    fn formats_in_graded_lex_order() {
        let p = MPoly::from_terms(
            3,
            [
                (Monomial::new(vec![0, 0, 3]), q(-1)),
                (Monomial::new(vec![1, 2, 0]), q(1)),
                (Monomial::new(vec![1, 0, 2]), qf(3, 2)),
            ],
        );
        assert_eq!(format_poly(&p), "1*x0*x1^2+3/2*x0*x2^2+-1*x2^3");
        assert_eq!(parse_poly(&format_poly(&p), 3).unwrap(), p);
    }

    #[test]
    fn accepts_loose_syntax() {
        let p = parse_poly("x0*x1^2 - x2^3 + x0*x2^2", 3).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.coeff(&Monomial::new(vec![0, 0, 3])), q(-1));
        let r = parse_poly("-1/3*x0^2 + 2", 2).unwrap();
        assert_eq!(r.coeff(&Monomial::new(vec![2, 0])), qf(-1, 3));
        assert_eq!(r.coeff(&Monomial::new(vec![0, 0])), q(2));
        assert_eq!(format_poly(&MPoly::zero(2)), "0");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_poly("x5", 2).is_err());
        assert!(parse_poly("3*y0", 2).is_err());
        assert!(parse_poly("", 2).is_err());
    }
}
