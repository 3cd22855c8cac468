//! Expression grammar for closed-form fields in config files:
//! coordinates x y z t, numbers, pi, + - * / ^, and the elementary
//! functions exp ln sin cos tan sinh cosh tanh sqrt.

use crate::error::{Error, Result};
use crate::field::{Field, UnOp};
use crate::point::Axis;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == '.') {
                    i += 1;
                }
                // scientific notation
                if i < bytes.len() && (bytes[i] == 'e' || bytes[i] == 'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == '+' || bytes[j] == '-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = bytes[start..i].iter().collect();
                let v: f64 = text
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad number `{text}`")))?;
                toks.push(Tok::Num(v));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(bytes[start..i].iter().collect()));
            }
            _ => return Err(Error::Parse(format!("unexpected character `{c}`"))),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(got) if got == t => Ok(()),
            got => Err(Error::Parse(format!("expected {t:?}, found {got:?}"))),
        }
    }

    fn expr(&mut self) -> Result<Field> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Field> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc * self.factor()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = acc / self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // unary minus binds looser than ^, so -x^2 is -(x^2)
    fn factor(&mut self) -> Result<Field> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            return Ok(-self.factor()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Field> {
        let base = self.primary()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let exp = self.factor()?; // right-associative
            return match exp.as_const() {
                Some(k) => Ok(base.powc(k)),
                // variable exponent: b^e = exp(e ln b), positive base required
                None => Ok((exp * base.ln()).exp()),
            };
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Field> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(Field::constant(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" => Ok(Field::coord(Axis::X)),
                "y" => Ok(Field::coord(Axis::Y)),
                "z" => Ok(Field::coord(Axis::Z)),
                "t" => Ok(Field::coord(Axis::T)),
                "pi" => Ok(Field::constant(std::f64::consts::PI)),
                _ => {
                    let op = match name.as_str() {
                        "exp" => UnOp::Exp,
                        "ln" => UnOp::Ln,
                        "sin" => UnOp::Sin,
                        "cos" => UnOp::Cos,
                        "tan" => UnOp::Tan,
                        "sinh" => UnOp::Sinh,
                        "cosh" => UnOp::Cosh,
                        "tanh" => UnOp::Tanh,
                        "sqrt" => UnOp::Sqrt,
                        _ => return Err(Error::Parse(format!("unknown identifier `{name}`"))),
                    };
                    self.expect(Tok::LParen)?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(arg.un(op))
                }
            },
            got => Err(Error::Parse(format!("unexpected token {got:?}"))),
        }
    }
}

/// Parse a closed-form field from the config expression grammar.
pub fn parse_field(src: &str) -> Result<Field> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".to_string()));
    }
    let mut p = Parser { toks, pos: 0 };
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input after expression: {:?}",
            &p.toks[p.pos..]
        )));
    }
    Ok(f)
}
