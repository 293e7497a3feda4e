//! Static types of expressions. Every node gets a type before evaluation.

use std::collections::BTreeMap;
use std::fmt;

use crate::ast::{Expr, Kind, Op, Span};
use crate::diag::Diagnostic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ty {
    Scalar,
    Series,
    Family,
    Map,
    Bornology,
    Verdict,
    Derivation,
    Generator,
    Report,
    Str,
    List(Box<Ty>),
    Lambda(Box<Ty>),
    /// Element type of the empty list.
    Any,
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Scalar => f.write_str("scalar"),
            Ty::Series => f.write_str("series"),
            Ty::Family => f.write_str("family"),
            Ty::Map => f.write_str("map"),
            Ty::Bornology => f.write_str("bornology"),
            Ty::Verdict => f.write_str("verdict"),
            Ty::Derivation => f.write_str("derivation"),
            Ty::Generator => f.write_str("generator"),
            Ty::Report => f.write_str("report"),
            Ty::Str => f.write_str("string"),
            Ty::List(t) => write!(f, "list({t})"),
            Ty::Lambda(t) => write!(f, "lambda({t})"),
            Ty::Any => f.write_str("any"),
        }
    }
}

/// A node with its type and the annotated children.
#[derive(Clone, Debug, PartialEq)]
pub struct Typed {
    pub ty: Ty,
    pub span: Span,
    pub children: Vec<Typed>,
}

/// Names visible to the checker.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub names: BTreeMap<String, Ty>,
    /// Generators of the default monomial space.
    pub generators: Vec<String>,
}

pub const BORNOLOGY_NAMES: [&str; 5] = ["finite", "all", "wo", "revwo", "wo_omega"];
pub const DERIVATION_NAMES: [&str; 2] = ["euler", "ddx"];

/// `eN` names the unit vector at `N` on ℕ.
pub fn unit_index(name: &str) -> Option<i64> {
    let digits = name.strip_prefix('e')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn err(span: Span, msg: impl Into<String>) -> Diagnostic {
    Diagnostic::new(span, msg)
}

fn is_numeric(t: &Ty) -> bool {
    matches!(t, Ty::Scalar | Ty::Series)
}

impl Scope {
    pub fn lookup(&self, name: &str) -> Option<Ty> {
        if let Some(t) = self.names.get(name) {
            return Some(t.clone());
        }
        if BORNOLOGY_NAMES.contains(&name) {
            return Some(Ty::Bornology);
        }
        if DERIVATION_NAMES.contains(&name) {
            return Some(Ty::Derivation);
        }
        if name == "ones" || unit_index(name).is_some() || self.generators.iter().any(|g| g == name) {
            return Some(Ty::Series);
        }
        None
    }

    fn bind(&self, name: &str, ty: Ty) -> Scope {
        let mut s = self.clone();
        s.names.insert(name.to_string(), ty);
        s
    }
}

pub fn check(e: &Expr, scope: &Scope) -> Result<Typed, Diagnostic> {
    let node = |ty, children| Ok(Typed { ty, span: e.span, children });
    match &e.kind {
        Kind::Num(_) => node(Ty::Scalar, vec![]),
        Kind::Str(_) => node(Ty::Str, vec![]),
        Kind::Ident(name) => match scope.lookup(name) {
            Some(t) => node(t, vec![]),
            None => Err(err(e.span, format!("unknown name `{name}`"))),
        },
        Kind::Neg(a) => {
            let a = check(a, scope)?;
            if !is_numeric(&a.ty) {
                return Err(err(e.span, format!("cannot negate a {}", a.ty)));
            }
            node(a.ty.clone(), vec![a])
        }
        Kind::Bin(op, l, r) => {
            let (l, r) = (check(l, scope)?, check(r, scope)?);
            let ty = binary(*op, &l.ty, &r.ty)
                .ok_or_else(|| err(e.span, format!("`{}` is not defined on {} and {}", op.symbol(), l.ty, r.ty)))?;
            node(ty, vec![l, r])
        }
        Kind::Pow(b, x) => {
            let b = check(b, scope)?;
            let ty = match b.ty {
                Ty::Scalar if x.den == 1 => Ty::Scalar,
                Ty::Scalar => return Err(err(e.span, "fractional powers of scalars are not exact")),
                Ty::Series => Ty::Series,
                ref t => return Err(err(e.span, format!("cannot raise a {t} to a power"))),
            };
            node(ty, vec![b])
        }
        Kind::List(items) => {
            let items = items.iter().map(|i| check(i, scope)).collect::<Result<Vec<_>, _>>()?;
            let mut elem = Ty::Any;
            for it in &items {
                elem = unify(&elem, &it.ty).ok_or_else(|| err(it.span, format!("list mixes {elem} and {}", it.ty)))?;
            }
            node(Ty::List(Box::new(elem)), items)
        }
        Kind::Lambda(v, body) => {
            let b = check(body, &scope.bind(v, Ty::Scalar))?;
            node(Ty::Lambda(Box::new(b.ty.clone())), vec![b])
        }
        Kind::Call(name, groups) => {
            let mut typed = Vec::new();
            let mut tys = Vec::new();
            for g in groups {
                let mut row = Vec::new();
                for a in g {
                    let t = check(a, scope)?;
                    row.push(t.ty.clone());
                    typed.push(t);
                }
                tys.push(row);
            }
            let ty = call(name, &tys).map_err(|m| err(e.span, m))?;
            node(ty, typed)
        }
    }
}

fn unify(a: &Ty, b: &Ty) -> Option<Ty> {
    match (a, b) {
        (Ty::Any, t) | (t, Ty::Any) => Some(t.clone()),
        (x, y) if x == y => Some(x.clone()),
        (Ty::Series, Ty::Generator) | (Ty::Generator, Ty::Series) => Some(Ty::Generator),
        _ => None,
    }
}

fn binary(op: Op, l: &Ty, r: &Ty) -> Option<Ty> {
    use Ty::*;
    Some(match (op, l, r) {
        (Op::Add | Op::Sub | Op::Mul | Op::Div, Scalar, Scalar) => Scalar,
        (Op::Add | Op::Sub | Op::Mul | Op::Div, a, b) if is_numeric(a) && is_numeric(b) => Series,
        (Op::Mul, Map, Map) => Map,
        (Op::Mul, Scalar, Family) => Family,
        (Op::Tensor, Series, Series) => Series,
        (Op::Tensor, Map, Map) => Map,
        (Op::Tensor, Family, Family) => Family,
        _ => return None,
    })
}

/// What an argument position accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Want {
    Scalar,
    Series,
    Str,
    Map,
    Family,
    Born,
    Deriv,
    MapOrDeriv,
    /// A scalar or a scalar-valued lambda.
    Weights,
    Generators,
    SeriesList,
}

impl Want {
    fn accepts(self, got: &Ty) -> bool {
        let list_of = |t: &Ty, ok: &dyn Fn(&Ty) -> bool| matches!(t, Ty::List(e) if ok(e));
        match self {
            Want::Scalar => *got == Ty::Scalar,
            Want::Series => *got == Ty::Series,
            Want::Str => *got == Ty::Str,
            Want::Map => *got == Ty::Map,
            Want::Family => *got == Ty::Family,
            Want::Born => *got == Ty::Bornology,
            Want::Deriv => *got == Ty::Derivation,
            Want::MapOrDeriv => matches!(got, Ty::Map | Ty::Derivation),
            Want::Weights => *got == Ty::Scalar || *got == Ty::Lambda(Box::new(Ty::Scalar)),
            Want::Generators => list_of(got, &|e| matches!(e, Ty::Any | Ty::Series | Ty::Generator)),
            Want::SeriesList => list_of(got, &|e| matches!(e, Ty::Any | Ty::Series)),
        }
    }

    fn describe(self) -> &'static str {
        match self {
            Want::Scalar => "scalar",
            Want::Series => "series",
            Want::Str => "string",
            Want::Map => "map",
            Want::Family => "family",
            Want::Born => "bornology",
            Want::Deriv => "derivation",
            Want::MapOrDeriv => "map or derivation",
            Want::Weights => "scalar or lambda(scalar)",
            Want::Generators => "list(generator)",
            Want::SeriesList => "list(series)",
        }
    }
}

struct Sig {
    args: &'static [Want],
    required: usize,
    ret: Ty,
}

fn signature(name: &str) -> Option<Sig> {
    use Want as W;
    let sig = |args: &'static [Want], required, ret| Some(Sig { args, required, ret });
    match name {
        "sum" => sig(&[W::Family, W::Weights], 1, Ty::Series),
        "pair" => sig(&[W::Series, W::Series], 2, Ty::Scalar),
        "apply" => sig(&[W::MapOrDeriv, W::Series], 2, Ty::Series),
        "derive" => sig(&[W::Deriv, W::Series], 2, Ty::Series),
        "truncate" => sig(&[W::Series, W::Series], 2, Ty::Series),
        "coeff" => sig(&[W::Series, W::Series], 2, Ty::Scalar),
        "deg" => sig(&[W::Series], 1, Ty::Scalar),
        "perp" => sig(&[W::Born], 1, Ty::Bornology),
        "product" | "hom" => sig(&[W::Born, W::Born], 2, Ty::Bornology),
        "bounded" => sig(&[W::Born, W::Str], 2, Ty::Verdict),
        "dual" => sig(&[W::Map], 1, Ty::Map),
        "compose" => sig(&[W::Map, W::Map], 2, Ty::Map),
        "basis" => sig(&[W::SeriesList, W::Scalar], 2, Ty::Report),
        "sigmaspan" => sig(&[W::Generators, W::Series, W::Scalar], 2, Ty::Verdict),
        "monomials" => sig(&[W::Str], 1, Ty::Family),
        "translates" => sig(&[W::Series, W::Str], 2, Ty::Family),
        "pattern" => sig(&[W::Series, W::Str], 2, Ty::Generator),
        "shift" => sig(&[W::Series], 1, Ty::Map),
        "banded" => sig(&[W::Scalar, W::Scalar, W::Scalar, W::Born], 3, Ty::Map),
        "functional" => sig(&[W::Series], 1, Ty::Map),
        "check" => sig(&[W::Family], 1, Ty::Verdict),
        n if BORNOLOGY_NAMES.contains(&n) => sig(&[W::Str], 1, Ty::Bornology),
        _ => None,
    }
}

fn call(name: &str, groups: &[Vec<Ty>]) -> Result<Ty, String> {
    if name == "grid" {
        // grid(ε; g₁, …, g_m)
        let ok = groups.len() == 2
            && groups[0] == [Ty::Series]
            && !groups[1].is_empty()
            && groups[1].iter().all(|t| *t == Ty::Series);
        return if ok {
            Ok(Ty::Family)
        } else {
            Err("grid takes a series, `;`, then one or more generator monomials".into())
        };
    }
    let sig = signature(name).ok_or_else(|| format!("unknown function `{name}`"))?;
    if groups.len() > 1 {
        return Err(format!("`{name}` takes a single argument group"));
    }
    let args: &[Ty] = groups.first().map(|g| g.as_slice()).unwrap_or(&[]);
    if args.len() < sig.required || args.len() > sig.args.len() {
        return Err(if sig.required == sig.args.len() {
            format!("`{name}` takes {} argument(s), found {}", sig.required, args.len())
        } else {
            format!("`{name}` takes {} to {} arguments, found {}", sig.required, sig.args.len(), args.len())
        });
    }
    for (i, (want, got)) in sig.args.iter().zip(args).enumerate() {
        if !want.accepts(got) {
            return Err(format!("argument {} of `{name}` must be {}, found {got}", i + 1, want.describe()));
        }
    }
    Ok(sig.ret)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn ty(s: &str) -> Result<Ty, Diagnostic> {
        let scope = Scope { generators: vec!["x".into()], ..Scope::default() };
        check(&parse(s).unwrap(), &scope).map(|t| t.ty)
    }

    #[test]
    fn annotations() {
        assert_eq!(ty("1 + 2").unwrap(), Ty::Scalar);
        assert_eq!(ty("(1 - x)^-1").unwrap(), Ty::Series);
        assert_eq!(ty("pair(e0 - 2*e3, ones)").unwrap(), Ty::Scalar);
        assert_eq!(ty("sum(grid(x; x), n -> 1)").unwrap(), Ty::Series);
        assert_eq!(ty("perp(wo)").unwrap(), Ty::Bornology);
        assert_eq!(ty("[e0, pattern(e0, \"prog(0; 2)\")]").unwrap(), Ty::List(Box::new(Ty::Generator)));
        assert_eq!(ty("bounded(wo, \"[0, 1]\")").unwrap(), Ty::Verdict);
    }

    #[test]
    fn every_node_is_annotated() {
        let scope = Scope { generators: vec!["x".into()], ..Scope::default() };
        let t = check(&parse("truncate((1 - x - x^2)^-1, x^5)").unwrap(), &scope).unwrap();
        fn count(t: &Typed) -> usize {
            1 + t.children.iter().map(count).sum::<usize>()
        }
        // truncate, pow, sub, sub, 1, x, pow, x, pow, x
        assert_eq!(count(&t), 10);
    }

    #[test]
    fn type_errors() {
        assert!(ty("y").is_err());
        assert!(ty("pair(e0)").is_err());
        assert!(ty("perp(e0)").is_err());
        assert!(ty("2^(1/2)").is_err());
        assert!(ty("wo + 1").is_err());
        assert!(ty("sum(grid(x; x), n -> x)").is_err());
        assert!(ty("nope(1)").is_err());
    }
}
