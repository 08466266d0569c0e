//! Parser for exact scalar expressions.
//!
//! Accepts the grammar
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | primary
//! primary := NUMBER | 'sqrt' '(' expr ')' | '(' expr ')'
//! NUMBER  := digits ['.' digits]
//! ```
//!
//! and evaluates it exactly to a [`Quadratic`] (purely rational input yields
//! a rational-valued one). `sqrt` requires a nonnegative integer argument,
//! and all radicals in one expression must agree after squarefree reduction;
//! otherwise parsing fails with [`Error::MixedRadicals`]. This is the
//! round-trip partner of the `Display` forms `"p/q"` and `"a+b*sqrt(d)"`.

use num_traits::{Signed, ToPrimitive, Zero};

use super::{Quadratic, Rational, Scalar};
use crate::error::{Error, Result};

/// Parses an exact scalar expression such as `"(3-sqrt(5))/2"`.
///
/// # Errors
///
/// [`Error::ParseScalar`] for malformed input, [`Error::MixedRadicals`] if
/// two different squarefree radicands meet.
pub fn parse_scalar(input: &str) -> Result<Quadratic> {
    let tokens = tokenize(input)?;
    let mut p = Parser { tokens, pos: 0 };
    let value = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::ParseScalar(format!(
            "unexpected trailing input at token {:?}",
            p.tokens[p.pos]
        )));
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rational),
    Sqrt,
    Plus,
    Minus,
    Star,
    Slash,
    Open,
    Close,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            '(' => {
                tokens.push(Token::Open);
                i += 1;
            }
            ')' => {
                tokens.push(Token::Close);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let whole = &input[start..i];
                let mut value: Rational = whole
                    .parse::<num_bigint::BigInt>()
                    .map(Rational::from_integer)
                    .map_err(|e| Error::ParseScalar(format!("{whole:?}: {e}")))?;
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    let fstart = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == fstart {
                        return Err(Error::ParseScalar(format!(
                            "digits required after decimal point in {input:?}"
                        )));
                    }
                    let frac = &input[fstart..i];
                    let numer = frac
                        .parse::<num_bigint::BigInt>()
                        .map_err(|e| Error::ParseScalar(format!("{frac:?}: {e}")))?;
                    let denom = num_bigint::BigInt::from(10u32).pow(frac.len() as u32);
                    value += Rational::new(numer, denom);
                }
                tokens.push(Token::Num(value));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphabetic() {
                    i += 1;
                }
                let word = &input[start..i];
                if word == "sqrt" {
                    tokens.push(Token::Sqrt);
                } else {
                    return Err(Error::ParseScalar(format!("unknown name {word:?}")));
                }
            }
            other => {
                return Err(Error::ParseScalar(format!(
                    "unexpected character {other:?} at byte {i}"
                )));
            }
        }
    }
    if tokens.is_empty() {
        return Err(Error::ParseScalar("empty expression".to_string()));
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

/// Combines two quadratic values, rejecting incompatible radicands before
/// the arithmetic operators (which would panic) ever see them.
fn combine(
    x: Quadratic,
    y: Quadratic,
    op: impl FnOnce(Quadratic, Quadratic) -> Quadratic,
) -> Result<Quadratic> {
    let (dl, dr) = (x.radicand(), y.radicand());
    if dl != 0 && dr != 0 && dl != dr {
        return Err(Error::MixedRadicals { left: dl, right: dr });
    }
    Ok(op(x, y))
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<Token> {
        let t = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::ParseScalar("unexpected end of expression".to_string()))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        let got = self.next()?;
        if got == want {
            Ok(())
        } else {
            Err(Error::ParseScalar(format!("expected {want:?}, found {got:?}")))
        }
    }

    fn expr(&mut self) -> Result<Quadratic> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Plus => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = combine(acc, rhs, |a, b| a + b)?;
                }
                Token::Minus => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = combine(acc, rhs, |a, b| a - b)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Quadratic> {
        let mut acc = self.factor()?;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Star => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = combine(acc, rhs, |a, b| a * b)?;
                }
                Token::Slash => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    if rhs.is_zero() {
                        return Err(Error::ParseScalar("division by zero".to_string()));
                    }
                    acc = combine(acc, rhs, |a, b| a / b)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Quadratic> {
        if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            return Ok(-self.factor()?);
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Quadratic> {
        match self.next()? {
            Token::Num(r) => Ok(Quadratic::from_rational(r)),
            Token::Open => {
                let inner = self.expr()?;
                self.expect(Token::Close)?;
                Ok(inner)
            }
            Token::Sqrt => {
                self.expect(Token::Open)?;
                let inner = self.expr()?;
                self.expect(Token::Close)?;
                let d = inner
                    .as_rational()
                    .filter(|r| r.is_integer() && !r.is_negative())
                    .and_then(|r| r.to_integer().to_u64())
                    .ok_or_else(|| {
                        Error::ParseScalar(format!(
                            "sqrt argument must be a nonnegative integer, got {inner}"
                        ))
                    })?;
                Ok(Quadratic::sqrt_of(d))
            }
            other => Err(Error::ParseScalar(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        <Rational as Scalar>::from_ratio(n, d)
    }

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(parse_scalar("3/4").unwrap().as_rational().unwrap(), rat(3, 4));
        assert_eq!(parse_scalar("0.25").unwrap().as_rational().unwrap(), rat(1, 4));
        assert_eq!(parse_scalar("-1/6").unwrap().as_rational().unwrap(), rat(-1, 6));
        assert_eq!(parse_scalar(" 2 * 3 + 1 ").unwrap().as_rational().unwrap(), rat(7, 1));
    }

    #[test]
    fn parses_quadratic_expressions() {
        let x = parse_scalar("(3-sqrt(5))/2").unwrap();
        assert_eq!(x, Quadratic::new(rat(3, 2), rat(-1, 2), 5));
        let y = parse_scalar("1/2+1/2*sqrt(5)").unwrap();
        assert_eq!(y, Quadratic::new(rat(1, 2), rat(1, 2), 5));
        // Radicand reduction happens during evaluation.
        let z = parse_scalar("sqrt(12)").unwrap();
        assert_eq!(z.radicand(), 3);
        assert_eq!(*z.radical_part(), rat(2, 1));
    }

    #[test]
    fn display_round_trips() {
        let samples = [
            Quadratic::new(rat(3, 2), rat(-1, 2), 5),
            Quadratic::new(rat(0, 1), rat(7, 3), 2),
            Quadratic::new(rat(-4, 7), rat(1, 1), 13),
            Quadratic::from_rational(rat(22, 7)),
            -Quadratic::sqrt_of(5),
        ];
        for q in samples {
            assert_eq!(parse_scalar(&q.to_string()).unwrap(), q, "{q}");
        }
    }

    #[test]
    fn rejects_mixed_radicals() {
        match parse_scalar("sqrt(2)+sqrt(5)") {
            Err(Error::MixedRadicals { left: 2, right: 5 }) => {}
            other => panic!("expected mixed-radical rejection, got {other:?}"),
        }
        // Same field after reduction is fine: √8 = 2√2.
        assert!(parse_scalar("sqrt(2)+sqrt(8)").is_ok());
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_scalar("").is_err());
        assert!(parse_scalar("1 +").is_err());
        assert!(parse_scalar("sqrt(-4)").is_err());
        assert!(parse_scalar("sqrt(1/2)").is_err());
        assert!(parse_scalar("(1").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("foo(3)").is_err());
        assert!(parse_scalar("1 2").is_err());
    }
}
