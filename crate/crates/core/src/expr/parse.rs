use num_complex::Complex64;

use super::Expr;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { text: String, imag: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let single = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, offset: start });
            i += 1;
            continue;
        }
        if b.is_ascii_digit() || b == b'.' {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
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
            let num = &text[start..i];
            if num == "." {
                return Err(syntax(start, "malformed number"));
            }
            let imag = i < bytes.len()
                && bytes[i] == b'i'
                && !bytes
                    .get(i + 1)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_');
            if imag {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Num {
                    text: num.to_string(),
                    imag,
                },
                offset: start,
            });
            continue;
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(text[start..i].to_string()),
                offset: start,
            });
            continue;
        }
        let ch = text[start..].chars().next().unwrap_or('?');
        return Err(syntax(start, format!("unexpected character `{ch}`")));
    }
    out.push(Token {
        tok: Tok::End,
        offset: text.len(),
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token> {
        let t = self.bump();
        if t.tok == tok {
            Ok(t)
        } else {
            Err(syntax(t.offset, format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            let t = self.bump();
            let n = match &t.tok {
                Tok::Num { text, imag: false } if text.bytes().all(|b| b.is_ascii_digit()) => {
                    text.parse::<u32>()
                        .map_err(|_| syntax(t.offset, "exponent too large"))?
                }
                _ => return Err(syntax(t.offset, "expected unsigned integer exponent")),
            };
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.bump();
        match t.tok {
            Tok::Num { text, imag } => {
                let v: f64 = text
                    .parse()
                    .map_err(|_| syntax(t.offset, format!("malformed number `{text}`")))?;
                Ok(Expr::Const(if imag {
                    Complex64::new(0.0, v)
                } else {
                    Complex64::new(v, 0.0)
                }))
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "z" => Ok(Expr::Var),
                "i" => Ok(Expr::Const(Complex64::new(0.0, 1.0))),
                "exp" | "log" | "mobius" | "complex" => self.call(name, t.offset),
                _ => Err(Error::UnknownIdentifier {
                    name,
                    offset: t.offset,
                }),
            },
            Tok::End => Err(syntax(t.offset, "unexpected end of input")),
            other => Err(syntax(t.offset, format!("unexpected token {other:?}"))),
        }
    }

    fn call(&mut self, name: String, offset: usize) -> Result<Expr> {
        self.expect(Tok::LParen, "`(` after function name")?;
        let mut args = Vec::new();
        if self.peek().tok != Tok::RParen {
            loop {
                let at = self.peek().offset;
                args.push((self.expr()?, at));
                if self.peek().tok == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "`)` closing argument list")?;
        let arity = |expected: &str| Error::Arity {
            name: name.clone(),
            offset,
            expected: expected.to_string(),
            found: args.len(),
        };
        match name.as_str() {
            "exp" | "log" => {
                if args.len() != 1 {
                    return Err(arity("1"));
                }
                let (a, _) = args.pop().unwrap();
                Ok(if name == "exp" {
                    Expr::Exp(Box::new(a))
                } else {
                    Expr::Log(Box::new(a))
                })
            }
            "mobius" => {
                if args.is_empty() || args.len() > 2 {
                    return Err(arity("1 or 2"));
                }
                let mut it = args.into_iter();
                let (a, at) = it.next().unwrap();
                let a = constant_arg(&a, at)?;
                if a.norm() >= 1.0 {
                    return Err(syntax(at, "mobius parameter must satisfy |a| < 1"));
                }
                let inner = it.next().map(|(w, _)| w).unwrap_or(Expr::Var);
                Ok(Expr::Mobius(a, Box::new(inner)))
            }
            "complex" => {
                if args.len() != 2 {
                    return Err(arity("2"));
                }
                let re = real_arg(&args[0].0, args[0].1)?;
                let im = real_arg(&args[1].0, args[1].1)?;
                Ok(Expr::Const(Complex64::new(re, im)))
            }
            _ => unreachable!("call() only sees known identifiers"),
        }
    }
}

fn constant_arg(e: &Expr, at: usize) -> Result<Complex64> {
    e.const_value()
        .ok_or_else(|| syntax(at, "argument must be a constant (no `z`)"))
}

fn real_arg(e: &Expr, at: usize) -> Result<f64> {
    let c = constant_arg(e, at)?;
    if c.im != 0.0 {
        return Err(syntax(at, "complex() arguments must be real"));
    }
    Ok(c.re)
}

/// Parses an expression in `z`.
pub fn parse(text: &str) -> Result<Expr> {
    if text.trim().is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(syntax(t.offset, "trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }
    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    #[test]
    fn simple_division() {
        assert_eq!(parse("z/2").unwrap(), Expr::Div(b(Expr::Var), b(Expr::real(2.0))));
    }

    #[test]
    fn mobius_literal() {
        assert_eq!(parse("mobius(0.5)").unwrap(), Expr::mobius(c(0.5, 0.0)));
    }

    #[test]
    fn log_test_function() {
        let want = Expr::Log(b(Expr::Div(
            b(Expr::real(2.0)),
            b(Expr::Sub(
                b(Expr::real(1.0)),
                b(Expr::Mul(b(Expr::real(0.9)), b(Expr::Var))),
            )),
        )));
        assert_eq!(parse("log(2/(1-0.9*z))").unwrap(), want);
    }

    #[test]
    fn precedence() {
        // power binds tighter than unary minus
        assert_eq!(
            parse("-z^2").unwrap(),
            Expr::Neg(b(Expr::Pow(b(Expr::Var), 2)))
        );
        // left associativity
        assert_eq!(
            parse("z-1-2").unwrap(),
            Expr::Sub(
                b(Expr::Sub(b(Expr::Var), b(Expr::real(1.0)))),
                b(Expr::real(2.0))
            )
        );
        assert_eq!(
            parse("z/2*3").unwrap(),
            Expr::Mul(
                b(Expr::Div(b(Expr::Var), b(Expr::real(2.0)))),
                b(Expr::real(3.0))
            )
        );
    }

    #[test]
    fn complex_literals() {
        let e = parse("1+2i").unwrap();
        assert_eq!(e.eval(c(0.0, 0.0)), c(1.0, 2.0));
        assert_eq!(parse("complex(1,-2)").unwrap(), Expr::Const(c(1.0, -2.0)));
        assert_eq!(parse("i").unwrap(), Expr::Const(c(0.0, 1.0)));
        assert_eq!(parse("2.5e-1").unwrap(), Expr::real(0.25));
    }

    #[test]
    fn errors_carry_offsets() {
        match parse("z + * 2") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        match parse("sin(z)") {
            Err(Error::UnknownIdentifier { name, offset }) => {
                assert_eq!(name, "sin");
                assert_eq!(offset, 0);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("exp(z, 1)"), Err(Error::Arity { .. })));
        assert!(matches!(parse("complex(1)"), Err(Error::Arity { .. })));
        assert!(matches!(parse("mobius(z)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("mobius(1.5)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("z^-1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("z^1.5"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("(z"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse("z $"), Err(Error::Syntax { offset: 2, .. })));
    }
}
