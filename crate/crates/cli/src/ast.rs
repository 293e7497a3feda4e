//! Syntax tree and canonical printing.

use std::fmt;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Tensor,
}

impl Op {
    fn prec(self) -> u8 {
        match self {
            Op::Tensor => 1,
            Op::Add | Op::Sub => 2,
            Op::Mul | Op::Div => 3,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Op::Add => "+",
            Op::Sub => "-",
            Op::Mul => "*",
            Op::Div => "/",
            Op::Tensor => "⊗",
        }
    }
}

const UNARY: u8 = 4;
const ATOM: u8 = 6;

/// Rational exponent `num/den`, `den > 0`, in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exponent {
    pub num: i64,
    pub den: i64,
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}/{})", self.num, self.den)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    /// Decimal digits of a natural number.
    Num(String),
    Ident(String),
    Str(String),
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Exponent),
    /// Arguments in groups separated by `;`.
    Call(String, Vec<Vec<Expr>>),
    List(Vec<Expr>),
    Lambda(String, Box<Expr>),
}

/// Equality ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: Kind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: Kind, span: Span) -> Expr {
        Expr { kind, span }
    }

    fn prec(&self) -> u8 {
        match &self.kind {
            Kind::Lambda(..) => 0,
            Kind::Bin(op, ..) => op.prec(),
            Kind::Neg(_) => UNARY,
            Kind::Pow(..) => 5,
            _ => ATOM,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let paren = self.prec() < ctx;
        if paren {
            f.write_str("(")?;
        }
        match &self.kind {
            Kind::Num(n) => f.write_str(n)?,
            Kind::Ident(s) => f.write_str(s)?,
            Kind::Str(s) => write!(f, "\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))?,
            Kind::Neg(e) => {
                f.write_str("-")?;
                e.write(f, UNARY)?;
            }
            Kind::Bin(op, l, r) => {
                l.write(f, op.prec())?;
                write!(f, " {} ", op.symbol())?;
                r.write(f, op.prec() + 1)?;
            }
            Kind::Pow(b, e) => {
                b.write(f, ATOM)?;
                write!(f, "^{e}")?;
            }
            Kind::Call(name, groups) => {
                write!(f, "{name}(")?;
                for (g, args) in groups.iter().enumerate() {
                    if g > 0 {
                        f.write_str("; ")?;
                    }
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        a.write(f, 0)?;
                    }
                }
                f.write_str(")")?;
            }
            Kind::List(items) => {
                f.write_str("[")?;
                for (i, a) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    a.write(f, 0)?;
                }
                f.write_str("]")?;
            }
            Kind::Lambda(v, body) => {
                write!(f, "{v} -> ")?;
                body.write(f, 0)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// A line of input: a binding or an expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Let(String, Expr),
    Expr(Expr),
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Let(n, e) => write!(f, "let {n} = {e}"),
            Stmt::Expr(e) => write!(f, "{e}"),
        }
    }
}
