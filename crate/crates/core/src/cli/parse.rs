//! Text formats for complex numbers, maps, vector fields and parameter paths.
//!
//! Complex numbers are written `a+bi` or `a-bi`; a bare real `a` or a bare
//! imaginary `bi` is also accepted. Positions in parse errors are byte
//! offsets into the full input string.

use num_complex::Complex64;

use crate::numerics::{MapSpec, Polynomial};
use crate::perturbation::VectorFieldSpec;
use crate::{Error, Result};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    base: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, base: usize) -> Self {
        Cursor { text, pos: 0, base }
    }

    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { position: self.base + self.pos, message: message.into() }
    }

    fn sign(&mut self) -> f64 {
        if self.eat(b'-') {
            -1.0
        } else {
            self.eat(b'+');
            1.0
        }
    }

    /// An unsigned decimal literal, if one starts here.
    fn number(&mut self) -> Result<Option<f64>> {
        let bytes = self.text.as_bytes();
        let start = self.pos;
        let mut end = start;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        if end == start {
            return Ok(None);
        }
        if end < bytes.len() && matches!(bytes[end], b'e' | b'E') {
            let mut k = end + 1;
            if k < bytes.len() && matches!(bytes[k], b'+' | b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        let value = self.text[start..end]
            .parse::<f64>()
            .map_err(|_| self.error(format!("malformed number '{}'", &self.text[start..end])))?;
        self.pos = end;
        Ok(Some(value))
    }

    fn unsigned_int(&mut self) -> Result<usize> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        self.text[start..self.pos].parse().map_err(|_| Error::Parse {
            position: self.base + start,
            message: "integer out of range".into(),
        })
    }

    /// `a`, `bi`, `i`, `a+bi`, `a-bi` and `a+i`, each with an optional
    /// leading sign.
    fn complex(&mut self) -> Result<Complex64> {
        self.skip_ws();
        let s = self.sign();
        let first = self.number()?;
        if self.eat(b'i') {
            return Ok(Complex64::new(0.0, s * first.unwrap_or(1.0)));
        }
        let re = s * first.ok_or_else(|| self.error("expected a number"))?;
        self.skip_ws();
        match self.peek() {
            Some(b'+') | Some(b'-') => {
                let s = self.sign();
                self.skip_ws();
                let im = self.number()?.unwrap_or(1.0);
                if !self.eat(b'i') {
                    return Err(self.error("expected 'i' after the imaginary part"));
                }
                Ok(Complex64::new(re, s * im))
            }
            _ => Ok(Complex64::new(re, 0.0)),
        }
    }

    fn finish(&mut self) -> Result<()> {
        self.skip_ws();
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected '{}'", &self.text[self.pos..])))
        }
    }
}

pub fn parse_complex(text: &str) -> Result<Complex64> {
    parse_complex_at(text, 0)
}

fn parse_complex_at(text: &str, base: usize) -> Result<Complex64> {
    let mut cur = Cursor::new(text, base);
    let z = cur.complex()?;
    cur.finish()?;
    Ok(z)
}

fn parse_list_at(text: &str, sep: char, base: usize) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split(sep) {
        if piece.trim().is_empty() {
            return Err(Error::Parse { position: base + offset, message: "empty entry".into() });
        }
        out.push(parse_complex_at(piece, base + offset)?);
        offset += piece.len() + sep.len_utf8();
    }
    Ok(out)
}

/// Comma-separated complex coefficients, lowest degree first.
pub fn parse_coefficients(text: &str) -> Result<Polynomial> {
    Ok(Polynomial::new(parse_list_at(text, ',', 0)?))
}

/// Semicolon-separated complex values, as used for parameter paths.
pub fn parse_path(text: &str) -> Result<Vec<Complex64>> {
    parse_list_at(text, ';', 0)
}

/// Parses `unicritical:d,c`, `polynomial:a0,a1,...` or
/// `rational:a0,a1,.../b0,b1,...`.
pub fn parse_map(text: &str) -> Result<MapSpec> {
    let Some((kind, body)) = text.split_once(':') else {
        return Err(Error::Parse { position: 0, message: "expected '<kind>:' prefix".into() });
    };
    let base = kind.len() + 1;
    match kind.trim() {
        "unicritical" => {
            let Some((d_text, c_text)) = body.split_once(',') else {
                return Err(Error::Parse { position: base, message: "expected 'd,c'".into() });
            };
            let mut cur = Cursor::new(d_text, base);
            cur.skip_ws();
            let d = cur.unsigned_int()?;
            cur.finish()?;
            let d = u32::try_from(d)
                .map_err(|_| Error::Parse { position: base, message: "degree out of range".into() })?;
            let c = parse_complex_at(c_text, base + d_text.len() + 1)?;
            MapSpec::unicritical(d, c)
        }
        "polynomial" => MapSpec::polynomial(Polynomial::new(parse_list_at(body, ',', base)?)),
        "rational" => {
            let Some((num, den)) = body.split_once('/') else {
                return Err(Error::Parse { position: base, message: "expected 'numerator/denominator'".into() });
            };
            let numerator = Polynomial::new(parse_list_at(num, ',', base)?);
            let denominator = Polynomial::new(parse_list_at(den, ',', base + num.len() + 1)?);
            MapSpec::rational(numerator, denominator)
        }
        other => Err(Error::Parse { position: 0, message: format!("unknown map kind '{other}'") }),
    }
}

/// Parses a polynomial field written as a sum of monomials `c*z^j`.
///
/// Coefficients are reals, imaginary literals (`2i`, `i`) or parenthesized
/// complex numbers (`(1-2i)*z^2`); the `*` is optional and `z` alone means
/// `z^1`. Repeated powers add up.
pub fn parse_field(text: &str) -> Result<VectorFieldSpec> {
    let mut cur = Cursor::new(text, 0);
    let mut coeffs: Vec<Complex64> = Vec::new();
    cur.skip_ws();
    if cur.at_end() {
        return Err(cur.error("empty field"));
    }
    let mut first = true;
    while !cur.at_end() {
        let sign = match cur.peek() {
            Some(b'+') | Some(b'-') => cur.sign(),
            _ if first => 1.0,
            _ => return Err(cur.error("expected '+' or '-' between terms")),
        };
        first = false;
        cur.skip_ws();
        let (coeff, power) = monomial(&mut cur)?;
        if coeffs.len() <= power {
            coeffs.resize(power + 1, Complex64::new(0.0, 0.0));
        }
        coeffs[power] += sign * coeff;
        cur.skip_ws();
    }
    Ok(VectorFieldSpec::polynomial(Polynomial::new(coeffs)))
}

fn monomial(cur: &mut Cursor) -> Result<(Complex64, usize)> {
    let start = cur.pos;
    let coeff = if cur.eat(b'(') {
        let z = cur.complex()?;
        cur.skip_ws();
        if !cur.eat(b')') {
            return Err(cur.error("expected ')'"));
        }
        Some(z)
    } else if let Some(x) = cur.number()? {
        if cur.eat(b'i') {
            Some(Complex64::new(0.0, x))
        } else {
            Some(Complex64::new(x, 0.0))
        }
    } else if cur.eat(b'i') {
        Some(Complex64::new(0.0, 1.0))
    } else {
        None
    };
    cur.skip_ws();
    if coeff.is_some() && cur.eat(b'*') {
        cur.skip_ws();
        if cur.peek() != Some(b'z') {
            return Err(cur.error("expected 'z' after '*'"));
        }
    }
    let power = if cur.eat(b'z') {
        cur.skip_ws();
        if cur.eat(b'^') {
            cur.skip_ws();
            cur.unsigned_int()?
        } else {
            1
        }
    } else if coeff.is_some() {
        0
    } else {
        return Err(Error::Parse { position: cur.base + start, message: "expected a term".into() });
    };
    Ok((coeff.unwrap_or(Complex64::new(1.0, 0.0)), power))
}
