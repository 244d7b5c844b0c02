//! Textual operator specs shared by the zoo generator, the harness and the
//! CLI.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr := term { "(+)" term }
//! term := "shift(" int ")"
//!       | "wshift(" "[" [float {"," float}] "]" ";" float ")"
//!       | "iso(k=" int ",m=" int ",seed=" int ")"
//!       | "unitary(m=" int ",seed=" int ")"
//!       | "adj(" term ")"
//! ```
//!
//! `(+)` builds direct sums left-associatively (collected into one flat
//! component list).

use crate::kernel::operator::Operator;
use crate::scalar::{cpx, Real};
use crate::zoo;

/// Parse failure with the byte position it occurred at.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "parse error at position {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parse an operator spec string.
pub fn parse<F: Real>(input: &str) -> Result<Operator<F>, ParseError> {
    let mut p = Parser { input: input.as_bytes(), pos: 0 };
    let op = p.expr()?;
    p.skip_ws();
    if p.pos < p.input.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(op)
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.input[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.input[start..self.pos]).expect("ascii digits");
        text.parse::<i64>().map_err(|_| ParseError { pos: start, message: "expected an integer".into() })
    }

    fn seed(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.input[start..self.pos]).expect("ascii digits");
        text.parse::<u64>()
            .map_err(|_| ParseError { pos: start, message: "expected an unsigned seed".into() })
    }

    fn float(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || matches!(c, b'+' | b'-' | b'.' | b'e' | b'E')) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.input[start..self.pos]).expect("ascii float chars");
        text.parse::<f64>()
            .map_err(|_| ParseError { pos: start, message: format!("expected a float, got `{text}`") })
    }

    fn expr<F: Real>(&mut self) -> Result<Operator<F>, ParseError> {
        let mut parts = vec![self.term()?];
        loop {
            self.skip_ws();
            if self.eat("(+)") {
                parts.push(self.term()?);
            } else {
                break;
            }
        }
        if parts.len() == 1 {
            Ok(parts.pop().expect("one part"))
        } else {
            Ok(Operator::direct_sum(parts))
        }
    }

    fn term<F: Real>(&mut self) -> Result<Operator<F>, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.eat("shift(") {
            let k = self.int()?;
            self.expect(")")?;
            Ok(zoo::shift_power(k))
        } else if self.eat("wshift(") {
            self.expect("[")?;
            let mut weights = Vec::new();
            self.skip_ws();
            if !self.eat("]") {
                loop {
                    weights.push(self.float()?);
                    if self.eat("]") {
                        break;
                    }
                    self.expect(",")?;
                }
            }
            self.expect(";")?;
            let tail = self.float()?;
            self.expect(")")?;
            let prefix: Vec<_> = weights.into_iter().map(|w| cpx::<F>(w, 0.0)).collect();
            zoo::weighted_shift(&prefix, cpx(tail, 0.0))
                .map_err(|e| ParseError { pos: start, message: e.to_string() })
        } else if self.eat("iso(") {
            self.expect("k=")?;
            let k = self.int()?;
            self.expect(",")?;
            self.expect("m=")?;
            let m = self.int()?;
            self.expect(",")?;
            self.expect("seed=")?;
            let seed = self.seed()?;
            self.expect(")")?;
            if k < 1 || m < 0 {
                return Err(ParseError { pos: start, message: "iso needs k >= 1 and m >= 0".into() });
            }
            Ok(zoo::sandwich_isometry(k as usize, m as usize, seed))
        } else if self.eat("unitary(") {
            self.expect("m=")?;
            let m = self.int()?;
            self.expect(",")?;
            self.expect("seed=")?;
            let seed = self.seed()?;
            self.expect(")")?;
            if m < 1 {
                return Err(ParseError { pos: start, message: "unitary needs m >= 1".into() });
            }
            Ok(zoo::unitary_embed_random(m as usize, seed))
        } else if self.eat("adj(") {
            let inner: Operator<F> = self.term()?;
            self.expect(")")?;
            Ok(inner.adjoint())
        } else {
            Err(self.error("expected a term: shift(...), wshift(...), iso(...), unitary(...) or adj(...)"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_shift_and_direct_sum() {
        let op: Operator<f64> = parse("shift(-2) (+) shift(1)").unwrap();
        assert_eq!(op.num_components(), 2);
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a: Operator<f64> = parse("  adj( shift( 1 ) )  (+)   shift(1)").unwrap();
        let b: Operator<f64> = parse("adj(shift(1))(+)shift(1)").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parses_weighted_shift() {
        let op: Operator<f64> = parse("wshift([0.5, 0.25]; 1)").unwrap();
        assert_eq!(op.entry(0, 1, 0).re, 0.5);
        assert_eq!(op.entry(0, 2, 1).re, 0.25);
        assert_eq!(op.entry(0, 3, 2).re, 1.0);
    }

    #[test]
    fn error_carries_position() {
        let err = parse::<f64>("shift(1) (+) blip(3)").unwrap_err();
        assert_eq!(err.pos, 13);
    }

    #[test]
    fn rejects_trailing_input() {
        assert!(parse::<f64>("shift(1) shift(2)").is_err());
    }

    #[test]
    fn constructor_failures_become_parse_errors() {
        let err = parse::<f64>("wshift([1.2];1.0)").unwrap_err();
        assert!(err.message.contains("not a contraction"), "{}", err.message);
    }

    #[test]
    fn adjoint_nests() {
        let a: Operator<f64> = parse("adj(adj(shift(3)))").unwrap();
        let b: Operator<f64> = parse("shift(3)").unwrap();
        assert_eq!(a, b);
    }
}
