use thiserror::Error;

use super::{ComplexScalar, ExprNode, Func};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unsupported function or identifier `{name}` at byte {offset}")]
    UnsupportedFunction { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnsupportedFunction { offset, .. } => *offset,
        }
    }

    fn syntax(offset: usize, message: impl Into<String>) -> Self {
        ParseError::Syntax { offset, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Imag(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(x) => format!("number {x}"),
            Tok::Imag(x) => format!("imaginary literal {x}i"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, start));
            pos += 1;
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'.' {
                pos += 1;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
            }
            // Exponent part only if digits actually follow.
            if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
                let mut look = pos + 1;
                if look < bytes.len() && (bytes[look] == b'+' || bytes[look] == b'-') {
                    look += 1;
                }
                if look < bytes.len() && bytes[look].is_ascii_digit() {
                    pos = look;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                }
            }
            let literal = &text[start..pos];
            let value: f64 =
                literal.parse().map_err(|_| ParseError::syntax(start, format!("malformed number `{literal}`")))?;
            if !value.is_finite() {
                return Err(ParseError::syntax(start, format!("literal `{literal}` is not finite")));
            }
            let imaginary =
                pos < bytes.len() && bytes[pos] == b'i' && !(pos + 1 < bytes.len() && is_ident_char(bytes[pos + 1]));
            if imaginary {
                pos += 1;
                out.push((Tok::Imag(value), start));
            } else {
                out.push((Tok::Num(value), start));
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while pos < bytes.len() && is_ident_char(bytes[pos]) {
                pos += 1;
            }
            out.push((Tok::Ident(text[start..pos].to_string()), start));
            continue;
        }
        let ch = text[start..].chars().next().unwrap_or('?');
        return Err(ParseError::syntax(start, format!("unexpected character `{ch}`")));
    }
    out.push((Tok::End, text.len()));
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

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self) -> ParseError {
        ParseError::syntax(self.offset(), format!("unexpected {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::syntax(
                self.offset(),
                format!("expected {}, found {}", tok.describe(), self.peek().describe()),
            ))
        }
    }

    fn expr(&mut self) -> Result<ExprNode, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = ExprNode::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = ExprNode::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprNode, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = ExprNode::mul(lhs, self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = ExprNode::div(lhs, self.unary()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<ExprNode, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(ExprNode::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprNode, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let k = self.exponent()?;
        Ok(ExprNode::powi(base, k))
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let at = self.offset();
        let mut negate = false;
        while *self.peek() == Tok::Minus {
            self.bump();
            negate = !negate;
        }
        let e = self.power()?;
        let not_integer = || ParseError::syntax(at, "exponent must be an integer constant");
        if !e.is_constant() {
            return Err(not_integer());
        }
        let v = e.eval(ComplexScalar::new(0.0, 0.0)).map_err(|_| not_integer())?;
        if v.im != 0.0 || v.re.fract() != 0.0 || v.re.abs() > i32::MAX as f64 {
            return Err(not_integer());
        }
        let k = v.re as i32;
        Ok(if negate { -k } else { k })
    }

    fn primary(&mut self) -> Result<ExprNode, ParseError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Num(x) => Ok(ExprNode::constant(x, 0.0)),
            Tok::Imag(y) => Ok(ExprNode::constant(0.0, y)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "z" => Ok(ExprNode::Var),
                "i" => Ok(ExprNode::constant(0.0, 1.0)),
                _ => match Func::from_name(&name) {
                    Some(func) => {
                        self.expect(Tok::LParen)?;
                        let arg = self.expr()?;
                        self.expect(Tok::RParen)?;
                        Ok(ExprNode::call(func, arg))
                    }
                    None => Err(ParseError::UnsupportedFunction { name, offset: at }),
                },
            },
            other => Err(ParseError::syntax(at, format!("unexpected {}", other.describe()))),
        }
    }
}

/// Parse an expression in `z`. See the module docs for the grammar.
pub fn parse(text: &str) -> Result<ExprNode, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    if *p.peek() == Tok::End {
        return Err(ParseError::syntax(0, "empty expression"));
    }
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected());
    }
    Ok(e)
}
