//! Text format for polynomial symbols.
//!
//! Terms look like `coeff*z^[a1,..,an]*zbar^[b1,..,bn]`, joined by ` + `.
//! A factor with zero exponent vector is omitted, a constant term is its bare
//! coefficient, and complex coefficients print parenthesized as `(re+imi)`.
//! `1*z^[1]*zbar^[1] + 1` is a typical rendering. Parsing is whitespace
//! tolerant and round-trips the canonical rendering exactly.

use num_complex::Complex64;

use super::{Poly, PolySymbol};
use crate::error::{Result, WickError};
use crate::fock::MultiIndex;

/// Parse a symbol, inferring the dimension from the first exponent list.
pub fn parse_poly(text: &str) -> Result<PolySymbol> {
    parse_poly_with_dim(text, None)
}

/// Parse a symbol with an optionally pinned dimension (required when the
/// text is a bare constant).
pub fn parse_poly_with_dim(text: &str, n: Option<usize>) -> Result<PolySymbol> {
    let terms = split_top_level(text, '+');
    let mut parsed: Vec<(Complex64, Option<Vec<u32>>, Option<Vec<u32>>)> = Vec::new();
    let mut dim = n;
    for term in &terms {
        let term = term.trim();
        if term.is_empty() {
            return Err(WickError::SymbolParse(format!("empty term in `{text}`")));
        }
        let (coeff, alpha, beta) = parse_term(term)?;
        for exps in [&alpha, &beta].into_iter().flatten() {
            match dim {
                None => dim = Some(exps.len()),
                Some(d) if d != exps.len() => {
                    return Err(WickError::SymbolParse(format!(
                        "inconsistent dimensions: {d} vs {} in `{term}`",
                        exps.len()
                    )));
                }
                _ => {}
            }
        }
        parsed.push((coeff, alpha, beta));
    }
    let Some(dim) = dim else {
        return Err(WickError::SymbolParse(
            "cannot infer dimension from a constant symbol; pass the dimension explicitly".into(),
        ));
    };
    let mut poly = Poly::zero(dim);
    for (coeff, alpha, beta) in parsed {
        let alpha = MultiIndex::new(alpha.unwrap_or_else(|| vec![0; dim]));
        let beta = MultiIndex::new(beta.unwrap_or_else(|| vec![0; dim]));
        if alpha.dim() != dim || beta.dim() != dim {
            return Err(WickError::SymbolParse(format!(
                "exponent list length mismatch in `{text}`"
            )));
        }
        poly.add_term(alpha, beta, coeff);
    }
    Ok(poly)
}

type TermParts = (Complex64, Option<Vec<u32>>, Option<Vec<u32>>);

fn parse_term(term: &str) -> Result<TermParts> {
    let mut coeff = Complex64::new(1.0, 0.0);
    let mut saw_coeff = false;
    let mut alpha: Option<Vec<u32>> = None;
    let mut beta: Option<Vec<u32>> = None;
    for factor in split_top_level(term, '*') {
        let factor = factor.trim();
        if let Some(rest) = factor.strip_prefix("zbar^") {
            if beta.is_some() {
                return Err(WickError::SymbolParse(format!(
                    "repeated zbar factor in `{term}`"
                )));
            }
            beta = Some(parse_exponents(rest)?);
        } else if let Some(rest) = factor.strip_prefix("z^") {
            if alpha.is_some() {
                return Err(WickError::SymbolParse(format!(
                    "repeated z factor in `{term}`"
                )));
            }
            alpha = Some(parse_exponents(rest)?);
        } else {
            if saw_coeff {
                return Err(WickError::SymbolParse(format!(
                    "more than one coefficient in `{term}`"
                )));
            }
            coeff = parse_complex(factor)?;
            saw_coeff = true;
        }
    }
    Ok((coeff, alpha, beta))
}

fn parse_exponents(text: &str) -> Result<Vec<u32>> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| WickError::SymbolParse(format!("expected [exponents], got `{text}`")))?;
    inner
        .split(',')
        .map(|piece| {
            piece
                .trim()
                .parse::<u32>()
                .map_err(|_| WickError::SymbolParse(format!("bad exponent `{piece}`")))
        })
        .collect()
}

/// Parse a comma-separated list of complex literals like `0.3+0.2i,-1.5`.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>> {
    text.split(',').map(parse_complex).collect()
}

pub(crate) fn parse_complex(text: &str) -> Result<Complex64> {
    let text = text.trim();
    if let Some(inner) = text.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        return parse_complex(inner);
    }
    if let Some(im_text) = text.strip_suffix('i') {
        // forms: `bi`, `a+bi`, `a-bi`
        if let Some(split) = find_middle_sign(im_text) {
            let (re_part, im_part) = im_text.split_at(split);
            let re = parse_f64(re_part)?;
            let im = parse_f64(im_part)?;
            return Ok(Complex64::new(re, im));
        }
        let im = match im_text.trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => parse_f64(other)?,
        };
        return Ok(Complex64::new(0.0, im));
    }
    Ok(Complex64::new(parse_f64(text)?, 0.0))
}

/// Offset of a '+'/'-' that separates the real part from the imaginary part
/// (skipping a leading sign and exponent signs like `1e-3`).
fn find_middle_sign(text: &str) -> Option<usize> {
    let bytes = text.as_bytes();
    for i in (1..bytes.len()).rev() {
        let c = bytes[i];
        if (c == b'+' || c == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            return Some(i);
        }
    }
    None
}

fn parse_f64(text: &str) -> Result<f64> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    cleaned
        .parse::<f64>()
        .map_err(|_| WickError::SymbolParse(format!("bad number `{text}`")))
}

/// Split on `sep` outside of any bracket/paren nesting.
fn split_top_level(text: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    let mut prev: Option<char> = None;
    for ch in text.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        let exponent_sign =
            sep == '+' && ch == '+' && matches!(prev, Some('e') | Some('E'));
        if ch == sep && depth == 0 && !exponent_sign {
            out.push(std::mem::take(&mut current));
        } else {
            current.push(ch);
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    out.push(current);
    out
}

/// Canonical rendering of a coefficient: bare shortest-round-trip real, or
/// `(re+imi)` when the imaginary part is nonzero.
pub fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.im < 0.0 {
        format!("({}-{}i)", c.re, -c.im)
    } else {
        format!("({}+{}i)", c.re, c.im)
    }
}

impl std::fmt::Display for PolySymbol {
    /// Highest-degree terms first; `0` for the zero polynomial.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .terms()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .map(|(alpha, beta, coeff)| {
                let mut piece = format_complex(*coeff);
                if alpha.degree() > 0 {
                    piece.push_str(&format!("*z^{alpha}"));
                }
                if beta.degree() > 0 {
                    piece.push_str(&format!("*zbar^{beta}"));
                }
                piece
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::wick_transform;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn parses_spec_style_terms() {
        let p = parse_poly("1.0 * z^[2,0] * zbar^[0,1]").unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(
            p.coefficient(&mi(&[2, 0]), &mi(&[0, 1])),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn canonical_rendering_matches_cli_example() {
        let p = parse_poly("1*z^[1]*zbar^[1]").unwrap();
        let wick = wick_transform(&p);
        assert_eq!(wick.to_string(), "1*z^[1]*zbar^[1] + 1");
    }

    #[test]
    fn round_trips_exactly() {
        let cases = [
            "1*z^[1]*zbar^[1] + 1",
            "0.5*z^[2,0] + (0.25-1.5i)*z^[1,1]*zbar^[0,2] + -3",
            "(0.1+0.2i)*zbar^[3]",
            "0.0000152587890625*z^[4]",
        ];
        for case in cases {
            let p = parse_poly(case).unwrap();
            let rendered = p.to_string();
            let reparsed = parse_poly(&rendered).unwrap();
            assert_eq!(p, reparsed, "case `{case}` → `{rendered}`");
            assert_eq!(rendered, parse_poly(&rendered).unwrap().to_string());
        }
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("(1+2i)").unwrap(), Complex64::new(1.0, 2.0));
        assert_eq!(parse_complex("(1-2i)").unwrap(), Complex64::new(1.0, -2.0));
        assert_eq!(parse_complex("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("-1.5e-2").unwrap(), Complex64::new(-0.015, 0.0));
        assert_eq!(parse_complex("(1e-3+2e-4i)").unwrap(), Complex64::new(1e-3, 2e-4));
    }

    #[test]
    fn scientific_notation_survives_term_split() {
        let p = parse_poly("1e+2*z^[1] + 3*zbar^[1]").unwrap();
        assert_eq!(p.coefficient(&mi(&[1]), &mi(&[0])), Complex64::new(100.0, 0.0));
        assert_eq!(p.coefficient(&mi(&[0]), &mi(&[1])), Complex64::new(3.0, 0.0));
    }

    #[test]
    fn constant_needs_dimension() {
        assert!(parse_poly("2.5").is_err());
        let p = parse_poly_with_dim("2.5", Some(3)).unwrap();
        assert_eq!(p.dim(), 3);
        assert_eq!(
            p.coefficient(&MultiIndex::zero(3), &MultiIndex::zero(3)),
            Complex64::new(2.5, 0.0)
        );
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_poly("z^[1").is_err());
        assert!(parse_poly("1*z^[1] + ").is_err());
        assert!(parse_poly("1*z^[1]*z^[2]").is_err());
        assert!(parse_poly("1*z^[1,2] + 1*z^[1]").is_err());
        assert!(parse_poly("abc*z^[1]").is_err());
    }
}
