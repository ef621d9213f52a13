use num_traits::Zero;
use thiserror::Error;

use super::{Expr, Exponent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    /// Byte offset into the source text.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty expression")]
    Empty,
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("unexpected {found}, expected {expected}")]
    Unexpected { found: String, expected: &'static str },
    #[error("unknown identifier '{0}'")]
    UnknownIdentifier(String),
    #[error("invalid number '{0}'")]
    InvalidNumber(String),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("root index must be an integer >= 2")]
    InvalidRootIndex,
    #[error("division by a literal zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(s) => format!("number '{s}'"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '0'..='9' | '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // Scientific notation only when digits follow the marker.
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                out.push((Tok::Num(src[start..i].to_string()), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            other => {
                let ch = src[i..].chars().next().unwrap_or(other);
                return Err(ParseError { position: i, kind: ParseErrorKind::UnexpectedChar(ch) });
            }
        };
        out.push((tok, start));
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
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError {
            position: self.offset(),
            kind: ParseErrorKind::Unexpected { found: self.peek().describe(), expected },
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::mul(lhs, self.unary()?);
                }
                Tok::Slash => {
                    let at = self.offset();
                    self.bump();
                    let rhs = self.unary()?;
                    if rhs.is_literal_zero() {
                        return Err(ParseError { position: at, kind: ParseErrorKind::DivisionByZero });
                    }
                    lhs = Expr::div(lhs, rhs);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let r = self.rational()?;
            return Ok(Expr::Pow(Box::new(base), r));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Num(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn rational(&mut self) -> Result<Exponent, ParseError> {
        let at = self.offset();
        let parenthesized = *self.peek() == Tok::LParen;
        if parenthesized {
            self.bump();
        }
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let num = self.number()?;
        let mut r = decimal_to_ratio(&num)
            .ok_or(ParseError { position: at, kind: ParseErrorKind::InvalidExponent(num.clone()) })?;
        if parenthesized {
            if *self.peek() == Tok::Slash {
                self.bump();
                let den_text = self.number()?;
                let den = decimal_to_ratio(&den_text).ok_or(ParseError {
                    position: at,
                    kind: ParseErrorKind::InvalidExponent(den_text.clone()),
                })?;
                if den.is_zero() {
                    return Err(ParseError {
                        position: at,
                        kind: ParseErrorKind::InvalidExponent("zero denominator".into()),
                    });
                }
                r /= den;
            }
            self.expect(Tok::RParen, "')' closing the exponent")?;
        }
        Ok(if negative { -r } else { r })
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        let tok = self.peek().clone();
        if !matches!(tok, Tok::Num(_) | Tok::LParen | Tok::Ident(_)) {
            return Err(self.unexpected("a number, 'x', 'pi', '(' or a function"));
        }
        self.bump();
        match tok {
            Tok::Num(s) => {
                let v: f64 = s
                    .parse()
                    .map_err(|_| ParseError { position: at, kind: ParseErrorKind::InvalidNumber(s.clone()) })?;
                if !v.is_finite() {
                    return Err(ParseError { position: at, kind: ParseErrorKind::InvalidNumber(s) });
                }
                Ok(Expr::Const(v))
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Expr::X),
                "pi" => Ok(Expr::Pi),
                "exp" | "log" | "sqrt" | "abs" | "sin" | "cos" => {
                    let arg = self.call_argument()?;
                    Ok(match name.as_str() {
                        "exp" => Expr::exp(arg),
                        "log" => Expr::log(arg),
                        "sqrt" => Expr::root(2, arg),
                        "abs" => Expr::abs(arg),
                        "sin" => Expr::sin(arg),
                        _ => Expr::cos(arg),
                    })
                }
                "root" => {
                    self.expect(Tok::LBracket, "'[' after root")?;
                    let idx_at = self.offset();
                    let n = self.number()?;
                    let n: u32 = n
                        .parse()
                        .ok()
                        .filter(|n| *n >= 2)
                        .ok_or(ParseError { position: idx_at, kind: ParseErrorKind::InvalidRootIndex })?;
                    self.expect(Tok::RBracket, "']'")?;
                    let arg = self.call_argument()?;
                    Ok(Expr::root(n, arg))
                }
                _ => Err(ParseError { position: at, kind: ParseErrorKind::UnknownIdentifier(name) }),
            },
            _ => unreachable!(),
        }
    }

    fn call_argument(&mut self) -> Result<Expr, ParseError> {
        self.expect(Tok::LParen, "'(' after function name")?;
        let e = self.expr()?;
        self.expect(Tok::RParen, "')' closing the function call")?;
        Ok(e)
    }
}

/// Converts a decimal literal (optionally in scientific notation) to an
/// exact ratio, when it fits.
fn decimal_to_ratio(text: &str) -> Option<Exponent> {
    let (mantissa, exp10) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if frac_part.contains('.') || (int_part.is_empty() && frac_part.is_empty()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: i64 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let scale = exp10 - frac_part.len() as i32;
    let pow10 = |k: u32| 10i64.checked_pow(k);
    if scale >= 0 {
        Some(Exponent::from_integer(numer.checked_mul(pow10(scale as u32)?)?))
    } else {
        Some(Exponent::new(numer, pow10((-scale) as u32)?))
    }
}

/// Parses generator text into an [`Expr`].
pub fn parse(source: &str) -> Result<Expr, ParseError> {
    let toks = lex(source)?;
    if toks.len() == 1 {
        return Err(ParseError { position: 0, kind: ParseErrorKind::Empty });
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(e)
}
