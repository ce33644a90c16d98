use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::{Monomial, Var};
use super::poly::Polynomial;
use super::Rational;
use crate::error::{Error, Result};

/// Parses the canonical polynomial text grammar (and any reordering of it):
/// a signed sum of terms, each term a `*`-separated product of rational
/// constants `p` or `p/q` and powers `t^e`, `x[i]^e`, `a[i,j]^e`.
pub fn parse_polynomial(text: &str, n: usize) -> Result<Polynomial> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, n };
    let poly = p.polynomial()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(poly)
}

/// Parses `p` or `p/q`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, n: 0 };
    p.skip_ws();
    let neg = p.eat(b'-');
    let r = p.rational()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(if neg { -r } else { r })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", b as char)))
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("ascii digits parse"))
    }

    fn small(&mut self) -> Result<usize> {
        let v = self.digits()?;
        usize::try_from(v).map_err(|_| self.err("index too large"))
    }

    fn rational(&mut self) -> Result<Rational> {
        let num = self.digits()?;
        if self.eat(b'/') {
            let den = self.digits()?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn polynomial(&mut self) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.n);
        let mut negative = self.eat(b'-');
        if !negative {
            self.eat(b'+');
        }
        loop {
            let (c, m) = self.term()?;
            out.add_term(m, if negative { -c } else { c });
            if self.eat(b'+') {
                negative = false;
            } else if self.eat(b'-') {
                negative = true;
            } else {
                break;
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Rational, Monomial)> {
        let mut c = Rational::one();
        let mut m = Monomial::one(self.n);
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_digit() => c *= self.rational()?,
                Some(b't') | Some(b'x') | Some(b'a') => {
                    let v = self.var()?;
                    let e = if self.eat(b'^') { self.small()? as u32 } else { 1 };
                    let f = Monomial::from_powers(self.n, [(v, e)]).map_err(|e| self.err(&e.to_string()))?;
                    m = m.mul(&f)?;
                }
                _ => return Err(self.err("expected a coefficient or a variable")),
            }
            if !self.eat(b'*') {
                return Ok((c, m));
            }
        }
    }

    fn var(&mut self) -> Result<Var> {
        let b = self.peek().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        let v = match b {
            b't' => Var::T,
            b'x' => {
                self.expect(b'[')?;
                let i = self.small()?;
                self.expect(b']')?;
                Var::X(i)
            }
            b'a' => {
                self.expect(b'[')?;
                let i = self.small()?;
                self.expect(b',')?;
                let j = self.small()?;
                self.expect(b']')?;
                Var::A(i, j)
            }
            _ => return Err(self.err("unknown variable")),
        };
        if v.slot(self.n).is_none() {
            return Err(self.err(&format!("variable {v} outside ambient n={}", self.n)));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_output() {
        let n = 2;
        for text in [
            "-1 * a[1,1]^2 - 1 * a[2,1]*a[2,2]",
            "1 - t*a[1,1] - t*a[2,2]",
            "0",
            "-3/2 + 2/7 * x[1]^3*t",
        ] {
            let p = parse_polynomial(text, n).unwrap();
            assert_eq!(parse_polynomial(&p.to_string(), n).unwrap(), p);
        }
        assert_eq!(parse_polynomial("1 * a[1,1]", n).unwrap(), Polynomial::a(n, 1, 1));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_polynomial("a[3,1]", 2).is_err());
        assert!(parse_polynomial("1 +", 2).is_err());
        assert!(parse_polynomial("1/0", 2).is_err());
        assert!(parse_polynomial("y", 2).is_err());
        assert!(parse_rational("2/").is_err());
        assert_eq!(parse_rational("-4/6").unwrap(), Rational::new((-2).into(), 3.into()));
    }
}
