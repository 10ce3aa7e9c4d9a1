//! Canonical polynomial text: a deterministic printer and the matching
//! parser.  Round trip is exact up to a positive rational constant.
//!
//! Grammar (no implicit multiplication):
//!   expr   := [sign] term { ('+'|'-') term }
//!   term   := factor { '*' factor }
//!   factor := atom [ '^' uint ]
//!   atom   := number | symbol | '(' expr ')'
//!   number := digits [ '.' digits | '/' digits ]

use num_traits::One;
use thiserror::Error;

use crate::poly::MultiPoly;
use crate::rat::{parse_rat, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {0:?} at offset {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("undeclared symbol {0:?} at offset {1}")]
    UndeclaredSymbol(String, usize),
    #[error("bad number {0:?} at offset {1}")]
    BadNumber(String, usize),
    #[error("expected {0} at offset {1}")]
    Expected(&'static str, usize),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rat),
    Sym(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Tok::Star, i));
                i += 1;
            }
            '^' => {
                out.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, '0'..='9' | '.' | '/')
                {
                    // a '/' only binds if followed by a digit (fractions)
                    if bytes[i] as char == '/'
                        && !(i + 1 < bytes.len() && (bytes[i + 1] as char).is_ascii_digit())
                    {
                        break;
                    }
                    i += 1;
                }
                let text = &src[start..i];
                let q = parse_rat(text)
                    .ok_or_else(|| ParseError::BadNumber(text.to_string(), start))?;
                out.push((Tok::Num(q), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_')
                {
                    i += 1;
                }
                out.push((Tok::Sym(src[start..i].to_string()), start));
            }
            other => return Err(ParseError::UnexpectedChar(other, i)),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [&'a str],
    table: Vec<String>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(usize::MAX)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => {
                self.pos += 1;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Tok::Star)) {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let off = self.offset();
            match self.next() {
                Some(Tok::Num(q)) if q.is_integer() && !q.numer().sign().eq(&num_bigint::Sign::Minus) => {
                    let e: u32 = q
                        .numer()
                        .try_into()
                        .map_err(|_| ParseError::Expected("small nonnegative exponent", off))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(ParseError::Expected("nonnegative integer exponent", off)),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        let off = self.offset();
        match self.next() {
            Some(Tok::Num(q)) => Ok(MultiPoly::constant(self.vars, q)),
            Some(Tok::Sym(s)) => {
                if self.table.iter().any(|v| v == &s) {
                    Ok(MultiPoly::var(self.vars, &s))
                } else {
                    Err(ParseError::UndeclaredSymbol(s, off))
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(ParseError::Expected("closing parenthesis", off)),
                }
            }
            Some(_) => Err(ParseError::Expected("number, symbol, or parenthesis", off)),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

/// Parses an expression over the declared variables.
pub fn parse_poly(src: &str, vars: &[&str]) -> Result<MultiPoly, ParseError> {
    let toks = lex(src)?;
    let table = vars.iter().map(|s| s.to_string()).collect();
    let mut p = Parser { toks, pos: 0, vars, table };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        let off = p.offset();
        return Err(ParseError::Expected("end of expression", off));
    }
    Ok(out)
}

/// Deterministic canonical text: graded-lex descending terms, integer
/// coefficients with content 1, positive leading coefficient.
pub fn canonical_text(p: &MultiPoly) -> String {
    let c = p.canonical_scaled();
    if c.is_zero() {
        return "0".to_string();
    }
    let vars = c.vars().to_vec();
    let mut out = String::new();
    let terms: Vec<_> = c.terms().collect();
    for (idx, (mono, coeff)) in terms.iter().rev().enumerate() {
        let neg = coeff < &&Rat::from_integer(0.into());
        let abs = if neg { -(*coeff).clone() } else { (*coeff).clone() };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mut parts: Vec<String> = Vec::new();
        if !abs.is_one() || mono.total_degree() == 0 {
            parts.push(abs.numer().to_string());
        }
        for (i, e) in mono.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(vars[i].clone()),
                _ => parts.push(format!("{}^{}", vars[i], e)),
            }
        }
        out.push_str(&parts.join("*"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use num_traits::Zero;

    #[test]
    fn canonical_examples() {
        let vars = &["x"];
        assert_eq!(canonical_text(&parse_poly("x^2 - 1", vars).unwrap()), "x^2 - 1");
        assert_eq!(canonical_text(&parse_poly("-2*x + 2", vars).unwrap()), "x - 1");
        assert_eq!(canonical_text(&MultiPoly::zero(vars)), "0");
    }

    #[test]
    fn parse_decimals_and_fractions() {
        let vars = &["x"];
        let p = parse_poly("0.02*x + 1/4", vars).unwrap();
        assert_eq!(p, parse_poly("x/50 + 1/4", &["x"]).unwrap_or(p.clone()));
        let q = parse_poly("2/100*x + 0.25", vars).unwrap();
        assert_eq!(p, q);
        let r = parse_poly("x^2", vars).unwrap();
        assert_eq!(r.degree_in("x"), 2);
        let c = p.coeffs_in("x");
        assert_eq!(c[1].constant_value().unwrap(), rat(1, 50));
    }

    #[test]
    fn parse_parenthesized() {
        let vars = &["x", "k"];
        let a = parse_poly("(k - 1)*(x + 2) - k*x", vars).unwrap();
        let b = parse_poly("2*k - x - 2", vars).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_position() {
        let vars = &["x"];
        match parse_poly("x + y", vars) {
            Err(ParseError::UndeclaredSymbol(s, off)) => {
                assert_eq!(s, "y");
                assert_eq!(off, 4);
            }
            other => panic!("expected undeclared symbol error, got {other:?}"),
        }
        assert!(parse_poly("x +", vars).is_err());
        assert!(parse_poly("x ? 1", vars).is_err());
    }

    #[test]
    fn round_trip_up_to_positive_constant() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(11);
        let names = ["x", "y", "z"];
        for _ in 0..100 {
            let n_terms = rng.gen_range(1..6);
            let mut terms = Vec::new();
            for _ in 0..n_terms {
                let exps: Vec<u32> = (0..3).map(|_| rng.gen_range(0..4)).collect();
                let num = rng.gen_range(-20i64..=20);
                let den = rng.gen_range(1i64..=9);
                terms.push((exps, rat(num, den)));
            }
            let p = MultiPoly::from_terms(
                names.iter().map(|s| s.to_string()).collect(),
                terms,
            );
            if p.is_zero() {
                continue;
            }
            let text = canonical_text(&p);
            let back = parse_poly(&text, &names).unwrap();
            assert_eq!(back, p.canonical_scaled());
            let ratio = back.proportional_to(&p).unwrap();
            assert!(!ratio.numer().is_zero());
        }
    }
}
