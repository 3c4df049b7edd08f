//! Tiny expression syntax for series literals: signed complex literals,
//! generators `x<k>` with powers `x1^3`, products and sums, e.g.
//! `1 - x1 + 2*x1*x2` or `(1+2i)*x3^2`.

use vage_core::monoid::{MultiIndex, TruncationSpec};
use vage_core::series::Series;
use vage_core::Complex64;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Imaginary, // bare `i`
    Generator(u32),
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn tokenize(input: &str) -> Result<Vec<Token>, CliError> {
    let bytes = input.as_bytes();
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => pos += 1,
            '+' => {
                tokens.push(Token::Plus);
                pos += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                pos += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                pos += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                pos += 1;
            }
            '(' => {
                tokens.push(Token::Open);
                pos += 1;
            }
            ')' => {
                tokens.push(Token::Close);
                pos += 1;
            }
            'i' => {
                tokens.push(Token::Imaginary);
                pos += 1;
            }
            'x' => {
                let start = pos + 1;
                let mut end = start;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                if end == start {
                    return Err(CliError::usage("generator syntax is x<k>, e.g. x1"));
                }
                let idx: u32 = input[start..end]
                    .parse()
                    .map_err(|_| CliError::usage("generator index out of range"))?;
                if idx == 0 {
                    return Err(CliError::usage("generator indices start at x1"));
                }
                tokens.push(Token::Generator(idx));
                pos = end;
            }
            '0'..='9' | '.' => {
                let start = pos;
                let mut end = pos;
                while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
                    end += 1;
                }
                // scientific exponent
                if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                    let mut probe = end + 1;
                    if probe < bytes.len() && (bytes[probe] == b'+' || bytes[probe] == b'-') {
                        probe += 1;
                    }
                    if probe < bytes.len() && bytes[probe].is_ascii_digit() {
                        end = probe;
                        while end < bytes.len() && bytes[end].is_ascii_digit() {
                            end += 1;
                        }
                    }
                }
                let value: f64 = input[start..end]
                    .parse()
                    .map_err(|_| CliError::usage(format!("bad number '{}'", &input[start..end])))?;
                if !value.is_finite() {
                    return Err(CliError::usage(format!(
                        "number '{}' is out of the finite range",
                        &input[start..end]
                    )));
                }
                tokens.push(Token::Number(value));
                pos = end;
            }
            other => {
                return Err(CliError::usage(format!(
                    "unexpected character '{other}' in expression"
                )))
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    window: TruncationSpec,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Series, CliError> {
        let mut negate = false;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Plus => {
                    self.pos += 1;
                }
                Token::Minus => {
                    negate = !negate;
                    self.pos += 1;
                }
                _ => break,
            }
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.scale(Complex64::new(-1.0, 0.0));
        }
        while let Some(tok) = self.peek() {
            let minus = match tok {
                Token::Plus => false,
                Token::Minus => true,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            let sign = if minus {
                Complex64::new(-1.0, 0.0)
            } else {
                Complex64::new(1.0, 0.0)
            };
            acc = Series::linear_combine(Complex64::new(1.0, 0.0), &acc, sign, &rhs)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Series, CliError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = acc.convolve(&rhs)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Series, CliError> {
        match self.bump() {
            Some(Token::Number(v)) => {
                // `2i` reads as an imaginary literal
                if matches!(self.peek(), Some(Token::Imaginary)) {
                    self.pos += 1;
                    Ok(Series::constant(Complex64::new(0.0, v), self.window))
                } else {
                    Ok(Series::constant(Complex64::new(v, 0.0), self.window))
                }
            }
            Some(Token::Imaginary) => Ok(Series::constant(Complex64::new(0.0, 1.0), self.window)),
            Some(Token::Generator(g)) => {
                let exponent = if matches!(self.peek(), Some(Token::Caret)) {
                    self.pos += 1;
                    match self.bump() {
                        Some(Token::Number(v)) if v.fract() == 0.0 && v >= 1.0 => v as u32,
                        _ => {
                            return Err(CliError::usage(
                                "exponent after ^ must be a positive integer",
                            ))
                        }
                    }
                } else {
                    1
                };
                Ok(Series::monomial(
                    MultiIndex::single(g, exponent),
                    Complex64::new(1.0, 0.0),
                    self.window,
                )?)
            }
            Some(Token::Open) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err(CliError::usage("missing closing parenthesis")),
                }
            }
            other => Err(CliError::usage(format!(
                "expected a number, generator or parenthesis, found {other:?}"
            ))),
        }
    }
}

/// Parses a series literal over the given window.
pub fn parse_series(input: &str, window: TruncationSpec) -> Result<Series, CliError> {
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err(CliError::usage("empty series expression"));
    }
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        window,
    };
    let series = parser.expr()?;
    if parser.pos != tokens.len() {
        return Err(CliError::usage("trailing input after expression"));
    }
    Ok(series)
}

/// Parses a single complex literal such as `1.5`, `2i`, `1+2i` or `-i`.
pub fn parse_complex(input: &str) -> Result<Complex64, CliError> {
    let window = TruncationSpec::new(1, 0);
    let series = parse_series(input, window)
        .map_err(|e| CliError::usage(format!("bad complex literal '{input}': {}", e.message)))?;
    Ok(series.expectation())
}
