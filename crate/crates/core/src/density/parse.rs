//! Recursive-descent parser for polynomial densities.
//!
//! ```text
//! density := ['+' | '-'] term {('+' | '-') term}
//! term    := number ['*' factor {'*' factor}] | factor {'*' factor}
//! factor  := ('u' | 'ux') ['^' integer]
//! ```

use super::{Density, Monomial, MAX_EXPONENT};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    Int(u64),
    U,
    Ux,
    Plus,
    Minus,
    Star,
    Caret,
    End,
}

impl Tok {
    fn describe(&self) -> &'static str {
        match self {
            Tok::Num(_) | Tok::Int(_) => "number",
            Tok::U => "`u`",
            Tok::Ux => "`ux`",
            Tok::Plus => "`+`",
            Tok::Minus => "`-`",
            Tok::Star => "`*`",
            Tok::Caret => "`^`",
            Tok::End => "end of input",
        }
    }
}

fn err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'u' => {
                if bytes.get(i + 1) == Some(&b'x') {
                    i += 1;
                    out.push((Tok::Ux, start));
                } else {
                    out.push((Tok::U, start));
                }
            }
            b'0'..=b'9' | b'.' => {
                let mut integral = true;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    integral = false;
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    integral = false;
                    i += 1;
                    if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                        i += 1;
                    }
                    let digits = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if digits == i {
                        return Err(err(i, "expected exponent digits"));
                    }
                }
                let text = &src[start..i];
                let tok = if integral {
                    text.parse::<u64>()
                        .map(Tok::Int)
                        .or_else(|_| text.parse::<f64>().map(Tok::Num))
                } else {
                    text.parse::<f64>().map(Tok::Num)
                }
                .map_err(|_| err(start, format!("malformed number `{text}`")))?;
                out.push((tok, start));
                continue;
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(err(start, format!("unexpected character `{ch}`")));
            }
        }
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Tok {
        self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expected(&self, what: &str) -> Error {
        err(
            self.offset(),
            format!("expected {what}, found {}", self.peek().describe()),
        )
    }

    fn density(&mut self) -> Result<Vec<Monomial>> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -1.0
            }
            Tok::Plus => {
                self.bump();
                1.0
            }
            _ => 1.0,
        };
        loop {
            let mut m = self.term()?;
            m.coeff *= sign;
            terms.push(m);
            sign = match self.peek() {
                Tok::Plus => 1.0,
                Tok::Minus => -1.0,
                Tok::End => return Ok(terms),
                _ => return Err(self.expected("`+`, `-`, `*` or end of input")),
            };
            self.bump();
        }
    }

    fn term(&mut self) -> Result<Monomial> {
        let mut m = Monomial {
            coeff: 1.0,
            p: 0,
            q: 0,
        };
        match self.peek() {
            Tok::Num(v) => {
                self.bump();
                m.coeff = v;
            }
            Tok::Int(v) => {
                self.bump();
                m.coeff = v as f64;
            }
            Tok::U | Tok::Ux => self.factor(&mut m)?,
            _ => return Err(self.expected("number, `u` or `ux`")),
        }
        while self.peek() == Tok::Star {
            self.bump();
            self.factor(&mut m)?;
        }
        Ok(m)
    }

    fn factor(&mut self, m: &mut Monomial) -> Result<()> {
        let start = self.offset();
        let is_u = match self.peek() {
            Tok::U => true,
            Tok::Ux => false,
            _ => return Err(self.expected("`u` or `ux`")),
        };
        self.bump();
        let mut k = 1u64;
        if self.peek() == Tok::Caret {
            self.bump();
            let at = self.offset();
            k = match self.bump() {
                Tok::Int(k) => k,
                _ => {
                    self.pos -= 1;
                    return Err(self.expected("non-negative integer exponent"));
                }
            };
            if k > MAX_EXPONENT as u64 {
                return Err(err(at, format!("exponent {k} exceeds {MAX_EXPONENT}")));
            }
        }
        let slot = if is_u { &mut m.p } else { &mut m.q };
        let total = *slot as u64 + k;
        if total > MAX_EXPONENT as u64 {
            return Err(err(
                start,
                format!("total exponent {total} exceeds {MAX_EXPONENT}"),
            ));
        }
        *slot = total as u32;
        Ok(())
    }
}

pub fn parse_density(expr: &str) -> Result<Density> {
    let mut parser = Parser {
        toks: lex(expr)?,
        pos: 0,
    };
    let terms = parser.density()?;
    Density::from_terms(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms(e: &str) -> Vec<(f64, u32, u32)> {
        parse_density(e)
            .unwrap()
            .terms()
            .iter()
            .map(|m| (m.coeff, m.p, m.q))
            .collect()
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(terms("u^2"), vec![(1.0, 2, 0)]);
        assert_eq!(terms("u*ux"), vec![(1.0, 1, 1)]);
        assert_eq!(terms("0.5*ux^2 + u^3"), vec![(0.5, 0, 2), (1.0, 3, 0)]);
        assert_eq!(terms("  u  *  u ^ 2 "), vec![(1.0, 3, 0)]);
        assert_eq!(terms("-2*u + 3"), vec![(3.0, 0, 0), (-2.0, 1, 0)]);
        assert_eq!(terms("u - u"), vec![]);
        assert_eq!(terms("1.5e-3*ux"), vec![(1.5e-3, 0, 1)]);
        assert_eq!(terms("u^0"), vec![(1.0, 0, 0)]);
    }

    fn offset_of(e: &str) -> usize {
        match parse_density(e) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("{e}: {other:?}"),
        }
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(offset_of(""), 0);
        assert_eq!(offset_of("u +"), 3);
        assert_eq!(offset_of("u^13"), 2);
        assert_eq!(offset_of("u^7*u^6"), 4);
        assert_eq!(offset_of("u^1.5"), 2);
        assert_eq!(offset_of("2*3"), 2);
        assert_eq!(offset_of("u v"), 2);
        assert_eq!(offset_of("u u"), 2);
        assert_eq!(offset_of("sin(u)"), 0);
        assert_eq!(offset_of("1e"), 2);
    }
}
