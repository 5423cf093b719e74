//! Canonical text form, e.g. `h(-1)^3 - 1/4*h(-1)` or `3*h(-1)^2 - 1/4`.
//! Terms are printed by descending weight, then descending parts.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};

use super::{FockState, Monomial};
use crate::error::{Error, Result};
use crate::exact_arith::{parse_rational, Rational};

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.parts.len() {
            let p = self.parts[i];
            let run = self.parts[i..].iter().take_while(|&&x| x == p).count();
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "h(-{p})")?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_vacuum() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {c:?}")))
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn number(&mut self) -> Result<Rational> {
        let num = self.digits()?;
        if self.eat('/') {
            let den = self.digits()?;
            parse_rational(&format!("{num}/{den}"))
        } else {
            parse_rational(num)
        }
    }

    /// `h(-n)` with an optional `^e`.
    fn factor(&mut self, parts: &mut Vec<u32>) -> Result<()> {
        self.expect('h')?;
        self.expect('(')?;
        self.expect('-')?;
        let n: u32 = self
            .digits()?
            .parse()
            .map_err(|_| self.err("mode index too large"))?;
        if n == 0 {
            return Err(self.err("creation modes are h(-n) with n >= 1"));
        }
        self.expect(')')?;
        let e: usize = if self.eat('^') {
            self.digits()?
                .parse()
                .map_err(|_| self.err("exponent too large"))?
        } else {
            1
        };
        parts.extend(std::iter::repeat(n).take(e));
        Ok(())
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        self.skip_ws();
        let mut coeff = Rational::one();
        let mut parts = Vec::new();
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coeff = self.number()?;
            if !self.eat('*') {
                return Ok((Monomial::vacuum(), coeff));
            }
        }
        self.factor(&mut parts)?;
        while self.eat('*') {
            self.factor(&mut parts)?;
        }
        Ok((Monomial::new(parts)?, coeff))
    }

    fn state(&mut self) -> Result<FockState> {
        let mut out = FockState::zero();
        let mut sign = if self.eat('-') {
            -Rational::one()
        } else {
            Rational::one()
        };
        loop {
            let (m, c) = self.term()?;
            out.add_term(m, c * &sign);
            if self.eat('+') {
                sign = Rational::one();
            } else if self.eat('-') {
                sign = -Rational::one();
            } else {
                break;
            }
        }
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(self.err("trailing input"));
        }
        Ok(out)
    }
}

impl FromStr for FockState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "0" {
            return Ok(FockState::zero());
        }
        Parser { src: s, pos: 0 }.state()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{rat, ratio};
    use crate::heisenberg_fock::{h1_power_closed, v_state_round};

    #[test]
    fn renders_canonically() {
        assert_eq!(
            h1_power_closed(3).unwrap().to_string(),
            "h(-1)^3 - 1/4*h(-1)"
        );
        let s = FockState::from_terms([
            (Monomial::new(vec![1, 1]).unwrap(), rat(3)),
            (Monomial::vacuum(), ratio(-1, 4)),
        ]);
        assert_eq!(s.to_string(), "3*h(-1)^2 - 1/4");
        assert_eq!(FockState::zero().to_string(), "0");
        assert_eq!(
            v_state_round(3, 1).unwrap().to_string(),
            "2*h(-3)*h(-1) + 3*h(-2)*h(-1) + h(-1)^2 + 1/120"
        );
    }

    #[test]
    fn parses_what_it_prints() {
        for s in [
            v_state_round(5, 3).unwrap(),
            h1_power_closed(7).unwrap(),
            FockState::vacuum().scale(&ratio(-3, 7)),
            FockState::zero(),
        ] {
            assert_eq!(s.to_string().parse::<FockState>().unwrap(), s);
        }
    }

    #[test]
    fn parse_accepts_loose_spacing_and_repeats() {
        let s: FockState = "-h(-1)*h(-1) +2 * h(-2)   - 1/12".parse().unwrap();
        let expected = FockState::from_terms([
            (Monomial::new(vec![1, 1]).unwrap(), rat(-1)),
            (Monomial::new(vec![2]).unwrap(), rat(2)),
            (Monomial::vacuum(), ratio(-1, 12)),
        ]);
        assert_eq!(s, expected);
        assert!("h(1)".parse::<FockState>().is_err());
        assert!("h(-0)".parse::<FockState>().is_err());
        assert!("2*".parse::<FockState>().is_err());
        assert!("h(-1) h(-2)".parse::<FockState>().is_err());
    }

    #[test]
    fn zero_coefficients_drop_out() {
        let s: FockState = "h(-1) - h(-1)".parse().unwrap();
        assert!(s.is_zero());
    }
}
