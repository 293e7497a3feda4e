//! Recursive-descent parser. Precedence from loosest to tightest:
//! `->`, `⊗`, `+ -`, `* /` (and juxtaposition), unary `-`, `^`.

use crate::ast::{Exponent, Expr, Kind, Op, Span, Stmt};
use crate::diag::Diagnostic;
use crate::lexer::{lex, Tok};

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> Diagnostic {
        Diagnostic::new(self.span(), format!("unexpected {}", self.peek())).expecting(expected)
    }

    fn expect(&mut self, t: Tok, name: &str) -> Result<Span, Diagnostic> {
        if *self.peek() == t {
            Ok(self.next().1)
        } else {
            Err(self.unexpected(&[name]))
        }
    }

    fn stmt(&mut self) -> Result<Stmt, Diagnostic> {
        if matches!(self.peek(), Tok::Ident(s) if s == "let") && matches!(self.peek2(), Tok::Ident(_)) {
            self.next();
            let Tok::Ident(name) = self.next().0 else { unreachable!() };
            self.expect(Tok::Eq, "`=`")?;
            let e = self.expr()?;
            self.expect(Tok::Eof, "end of input")?;
            return Ok(Stmt::Let(name, e));
        }
        let e = self.expr()?;
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected(&["operator", "end of input"]));
        }
        Ok(Stmt::Expr(e))
    }

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        if let (Tok::Ident(v), Tok::Arrow) = (self.peek().clone(), self.peek2()) {
            let span = self.next().1;
            self.next();
            let body = self.expr()?;
            return Ok(Expr::new(Kind::Lambda(v, Box::new(body)), span));
        }
        self.tensor()
    }

    fn binary(
        &mut self,
        ops: &[(Tok, Op)],
        sub: fn(&mut Parser) -> Result<Expr, Diagnostic>,
    ) -> Result<Expr, Diagnostic> {
        let mut l = sub(self)?;
        loop {
            let Some(op) = ops.iter().find(|(t, _)| t == self.peek()).map(|(_, o)| *o) else {
                return Ok(l);
            };
            let span = self.next().1;
            let r = sub(self)?;
            l = Expr::new(Kind::Bin(op, Box::new(l), Box::new(r)), span);
        }
    }

    fn tensor(&mut self) -> Result<Expr, Diagnostic> {
        self.binary(&[(Tok::Tensor, Op::Tensor)], Parser::additive)
    }

    fn additive(&mut self) -> Result<Expr, Diagnostic> {
        self.binary(&[(Tok::Plus, Op::Add), (Tok::Minus, Op::Sub)], Parser::multiplicative)
    }

    fn multiplicative(&mut self) -> Result<Expr, Diagnostic> {
        let mut l = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => Op::Mul,
                Tok::Slash => Op::Div,
                // juxtaposition, as in `2x^2`
                Tok::Num(_) | Tok::Ident(_) | Tok::LParen => {
                    let span = self.span();
                    let r = self.unary()?;
                    l = Expr::new(Kind::Bin(Op::Mul, Box::new(l), Box::new(r)), span);
                    continue;
                }
                _ => return Ok(l),
            };
            let span = self.next().1;
            let r = self.unary()?;
            l = Expr::new(Kind::Bin(op, Box::new(l), Box::new(r)), span);
        }
    }

    fn unary(&mut self) -> Result<Expr, Diagnostic> {
        if *self.peek() == Tok::Minus {
            let span = self.next().1;
            let e = self.unary()?;
            return Ok(Expr::new(Kind::Neg(Box::new(e)), span));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, Diagnostic> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let span = self.next().1;
        let e = self.exponent()?;
        Ok(Expr::new(Kind::Pow(Box::new(base), e), span))
    }

    fn int(&mut self) -> Result<i64, Diagnostic> {
        let span = self.span();
        match self.next().0 {
            Tok::Num(n) => n.parse().map_err(|_| Diagnostic::new(span, format!("exponent {n} is too large"))),
            _ => {
                self.pos -= 1;
                Err(self.unexpected(&["number"]))
            }
        }
    }

    fn exponent(&mut self) -> Result<Exponent, Diagnostic> {
        let paren = *self.peek() == Tok::LParen;
        if paren {
            self.next();
        }
        let neg = *self.peek() == Tok::Minus;
        if neg {
            self.next();
        }
        let mut num = self.int()?;
        let mut den = 1;
        if paren {
            if *self.peek() == Tok::Slash {
                self.next();
                let span = self.span();
                den = self.int()?;
                if den == 0 {
                    return Err(Diagnostic::new(span, "zero denominator in exponent"));
                }
            }
            self.expect(Tok::RParen, "`)`")?;
        }
        if neg {
            num = -num;
        }
        let g = gcd(num, den).max(1);
        Ok(Exponent { num: num / g, den: den / g })
    }

    fn primary(&mut self) -> Result<Expr, Diagnostic> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.next();
                Ok(Expr::new(Kind::Num(n.trim_start_matches('0').to_string()).normalize_num(), span))
            }
            Tok::Str(s) => {
                self.next();
                Ok(Expr::new(Kind::Str(s), span))
            }
            Tok::Ident(name) => {
                self.next();
                if *self.peek() != Tok::LParen {
                    return Ok(Expr::new(Kind::Ident(name), span));
                }
                self.next();
                let mut groups = vec![Vec::new()];
                if *self.peek() != Tok::RParen {
                    loop {
                        groups.last_mut().expect("a group").push(self.expr()?);
                        match self.peek() {
                            Tok::Comma => {
                                self.next();
                            }
                            Tok::Semi => {
                                self.next();
                                groups.push(Vec::new());
                            }
                            Tok::RParen => break,
                            _ => return Err(self.unexpected(&["`,`", "`;`", "`)`"])),
                        }
                    }
                }
                self.next();
                if groups.len() == 1 && groups[0].is_empty() {
                    groups.clear();
                }
                Ok(Expr::new(Kind::Call(name, groups), span))
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::LBracket => {
                self.next();
                let mut items = Vec::new();
                if *self.peek() != Tok::RBracket {
                    loop {
                        items.push(self.expr()?);
                        match self.peek() {
                            Tok::Comma => {
                                self.next();
                            }
                            Tok::RBracket => break,
                            _ => return Err(self.unexpected(&["`,`", "`]`"])),
                        }
                    }
                }
                self.next();
                Ok(Expr::new(Kind::List(items), span))
            }
            _ => Err(self.unexpected(&["number", "identifier", "string", "`(`", "`[`", "`-`"])),
        }
    }
}

trait NormalizeNum {
    fn normalize_num(self) -> Kind;
}

impl NormalizeNum for Kind {
    fn normalize_num(self) -> Kind {
        match self {
            Kind::Num(s) if s.is_empty() => Kind::Num("0".into()),
            k => k,
        }
    }
}

pub fn parse_stmt(src: &str) -> Result<Stmt, Diagnostic> {
    let toks = lex(src)?;
    Parser { toks, pos: 0 }.stmt()
}

pub fn parse(src: &str) -> Result<Expr, Diagnostic> {
    match parse_stmt(src)? {
        Stmt::Expr(e) => Ok(e),
        Stmt::Let(..) => Err(Diagnostic::new(Span { line: 1, col: 1 }, "expected an expression, found a binding")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round(s: &str) -> String {
        parse(s).unwrap().to_string()
    }

    #[test]
    fn precedence() {
        assert_eq!(round("1 + 2 * 3"), "1 + 2 * 3");
        assert_eq!(round("(1 + 2) * 3"), "(1 + 2) * 3");
        assert_eq!(round("-x^2"), "-x^2");
        assert_eq!(round("(-x)^2"), "(-x)^2");
        assert_eq!(round("a - (b - c)"), "a - (b - c)");
        assert_eq!(round("a ⊗ b + c"), "a ⊗ b + c");
        assert_eq!(round("(a ⊗ b) * c"), "(a ⊗ b) * c");
        assert_eq!(round("2x^2"), "2 * x^2");
        assert_eq!(round("x^(2/4)"), "x^(1/2)");
        assert_eq!(round("(1 - x)^-1"), "(1 - x)^-1");
        assert_eq!(round("sum(grid(x; x), n -> 1)"), "sum(grid(x; x), n -> 1)");
        assert_eq!(round("007"), "7");
    }

    #[test]
    fn inversion_node() {
        let e = parse("(1 - x)^-1").unwrap();
        assert!(matches!(e.kind, Kind::Pow(_, Exponent { num: -1, den: 1 })));
        let p = parse("pair(e0 - 2*e3, ones)").unwrap();
        assert!(matches!(&p.kind, Kind::Call(n, g) if n == "pair" && g[0].len() == 2));
    }

    #[test]
    fn diagnostics_carry_positions() {
        let d = parse("1 +\n  * 2").unwrap_err();
        assert_eq!((d.span.line, d.span.col), (2, 3));
        assert!(!d.expected.is_empty());
        assert!(parse("f(1, 2").is_err());
        assert!(parse("x^y").is_err());
    }

    #[test]
    fn bindings() {
        assert_eq!(parse_stmt("let f = 1 - x").unwrap().to_string(), "let f = 1 - x");
    }
}
