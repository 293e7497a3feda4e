//! Evaluation of checked expressions.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use sigma_core::bornology::{Domain, Universe};
use sigma_core::closure::{dual_basis_construction, FunctionalFamily, Generator, Step};
use sigma_core::hahn::{cauchy_product, invert_unit, powers, GridCertificate, HahnSeries};
use sigma_core::mono::Q;
use sigma_core::series::family::{unit_weights, Weights};
use sigma_core::series::pairing;
use sigma_core::slalg::{extend_derivation, Algebra, Derivation, MonomialAction};
use sigma_core::{Bornology, DescribedSet, Error, Field, Mono, Result, Scalar, Series, StrongLinearMap, SummableFamily};

use crate::ast::{Expr, Kind, Op, Stmt};
use crate::config::{Config, Format};
use crate::diag::Diagnostic;
use crate::types::{self, unit_index, Scope, Ty};

#[derive(Clone)]
pub enum Value {
    Scalar(Scalar),
    Series(Series),
    Family(SummableFamily),
    Map(StrongLinearMap),
    Bornology(Bornology),
    Verdict(String),
    Derivation(Derivation),
    Generator(Generator),
    Report(String),
    Str(String),
    List(Vec<Value>),
    Lambda(Arc<Closure>),
}

pub struct Closure {
    pub var: String,
    pub body: Expr,
    env: Env,
    locals: Locals,
}

type Locals = Vec<(String, Value)>;

impl Value {
    pub fn ty(&self) -> Ty {
        match self {
            Value::Scalar(_) => Ty::Scalar,
            Value::Series(_) => Ty::Series,
            Value::Family(_) => Ty::Family,
            Value::Map(_) => Ty::Map,
            Value::Bornology(_) => Ty::Bornology,
            Value::Verdict(_) => Ty::Verdict,
            Value::Derivation(_) => Ty::Derivation,
            Value::Generator(_) => Ty::Generator,
            Value::Report(_) => Ty::Report,
            Value::Str(_) => Ty::Str,
            Value::List(v) => {
                let mut t = Ty::Any;
                for x in v {
                    t = match (t, x.ty()) {
                        (Ty::Any, u) => u,
                        (Ty::Series, Ty::Generator) | (Ty::Generator, Ty::Series) => Ty::Generator,
                        (t, _) => t,
                    };
                }
                Ty::List(Box::new(t))
            }
            Value::Lambda(_) => Ty::Lambda(Box::new(Ty::Scalar)),
        }
    }
}

/// Evaluation context: defaults from the configuration plus bindings.
#[derive(Clone)]
pub struct Env {
    pub field: Field,
    pub window: usize,
    pub seed: u64,
    pub format: Format,
    /// Space of the generator names, e.g. `x`.
    pub space: Bornology,
    pub bindings: BTreeMap<String, Value>,
    pub bornologies: BTreeMap<String, Bornology>,
    pub derivations: BTreeMap<String, Derivation>,
}

fn bornology_of_kind(kind: &str, u: Universe) -> Result<Bornology> {
    Ok(match kind {
        "finite" => Bornology::finite(u),
        "all" => Bornology::all(u),
        "wo" => Bornology::wo(u),
        "revwo" => Bornology::rev_wo(u),
        "wo_omega" => Bornology::wo_omega(u),
        other => return Err(Error::Parse(format!("unknown bornology `{other}`"))),
    })
}

/// `KIND` on `default`, or `KIND(UNIVERSE)`.
pub fn parse_bornology(spec: &str, default: &Universe) -> Result<Bornology> {
    let spec = spec.trim();
    match spec.split_once('(') {
        Some((kind, rest)) => {
            let u = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("bad bornology `{spec}`")))?
                .parse()?;
            bornology_of_kind(kind.trim(), u)
        }
        None => bornology_of_kind(spec, default.clone()),
    }
}

fn generator_index(u: &Universe, name: &str) -> Option<usize> {
    match u {
        Universe::Lattice { names: Some(names), .. } => names.iter().position(|n| n == name),
        _ => None,
    }
}

fn derivation(kind: &str, space: &Bornology, var: usize) -> Result<Derivation> {
    let alg = Algebra::over(space.clone())?;
    let action = match kind {
        "euler" => MonomialAction::euler(space, var),
        "ddx" => MonomialAction::ddx(space, var),
        other => return Err(Error::Parse(format!("unknown derivation kind `{other}`"))),
    };
    extend_derivation(action, &alg)
}

impl Env {
    pub fn new(cfg: &Config) -> Result<Env> {
        let space = parse_bornology(&cfg.bornology, &cfg.universe)?;
        let mut bornologies = BTreeMap::new();
        for (name, spec) in &cfg.bornologies {
            bornologies.insert(name.clone(), parse_bornology(spec, &cfg.universe)?);
        }
        let mut derivations = BTreeMap::new();
        for (name, spec) in &cfg.derivations {
            let var = generator_index(space.universe(), &spec.var)
                .ok_or_else(|| Error::Parse(format!("`{}` is not a generator of {}", spec.var, space.universe())))?;
            derivations.insert(name.clone(), derivation(&spec.kind, &space, var)?);
        }
        Ok(Env {
            field: cfg.field,
            window: cfg.window,
            seed: cfg.seed,
            format: cfg.format,
            space,
            bindings: BTreeMap::new(),
            bornologies,
            derivations,
        })
    }

    pub fn scope(&self) -> Scope {
        let mut names = BTreeMap::new();
        for n in self.bornologies.keys() {
            names.insert(n.clone(), Ty::Bornology);
        }
        for n in self.derivations.keys() {
            names.insert(n.clone(), Ty::Derivation);
        }
        for (n, v) in &self.bindings {
            names.insert(n.clone(), v.ty());
        }
        let generators = match self.space.universe() {
            Universe::Lattice { names: Some(g), .. } => g.to_vec(),
            _ => vec![],
        };
        Scope { names, generators }
    }

    /// Type-checks, then evaluates `e`.
    pub fn eval(&self, e: &Expr) -> std::result::Result<Value, Diagnostic> {
        types::check(e, &self.scope())?;
        self.eval_in(e, &Vec::new())
    }

    /// Runs one statement, binding `let` names. Returns the value of an
    /// expression statement.
    pub fn run(&mut self, stmt: &Stmt) -> std::result::Result<Option<Value>, Diagnostic> {
        match stmt {
            Stmt::Let(name, e) => {
                let v = self.eval(e)?;
                self.bindings.insert(name.clone(), v);
                Ok(None)
            }
            Stmt::Expr(e) => self.eval(e).map(Some),
        }
    }

    fn eval_in(&self, e: &Expr, locals: &Locals) -> std::result::Result<Value, Diagnostic> {
        let r = self.eval_node(e, locals);
        match r {
            Ok(v) => Ok(v),
            Err(Fault::Diag(d)) => Err(d),
            Err(Fault::Core(err)) => Err(Diagnostic::new(e.span, err.to_string())),
        }
    }

    fn eval_node(&self, e: &Expr, locals: &Locals) -> std::result::Result<Value, Fault> {
        Ok(match &e.kind {
            Kind::Num(n) => Value::Scalar(self.field.parse_scalar(n)?),
            Kind::Str(s) => Value::Str(s.clone()),
            Kind::Ident(name) => self.ident(name, locals)?,
            Kind::Neg(a) => match self.eval_in(a, locals)? {
                Value::Scalar(s) => Value::Scalar(-s),
                Value::Series(s) => Value::Series(s.neg()),
                _ => unreachable!("checked"),
            },
            Kind::Bin(op, l, r) => {
                let (l, r) = (self.eval_in(l, locals)?, self.eval_in(r, locals)?);
                self.binary(*op, l, r)?
            }
            Kind::Pow(b, x) => match self.eval_in(b, locals)? {
                Value::Scalar(s) => {
                    let p = s.pow(x.num.unsigned_abs());
                    if x.num < 0 {
                        Value::Scalar(p.inv().ok_or_else(|| Error::NotInvertible("zero to a negative power".into()))?)
                    } else {
                        Value::Scalar(p)
                    }
                }
                Value::Series(s) => Value::Series(power(&s, x.num, x.den)?),
                _ => unreachable!("checked"),
            },
            Kind::List(items) => {
                Value::List(items.iter().map(|i| self.eval_in(i, locals)).collect::<std::result::Result<_, _>>()?)
            }
            Kind::Lambda(v, body) => Value::Lambda(Arc::new(Closure {
                var: v.clone(),
                body: (**body).clone(),
                env: self.clone(),
                locals: locals.clone(),
            })),
            Kind::Call(name, groups) => {
                let mut args = Vec::new();
                for g in groups {
                    let mut row = Vec::new();
                    for a in g {
                        row.push(self.eval_in(a, locals)?);
                    }
                    args.push(row);
                }
                self.call(name, args)?
            }
        })
    }

    fn ident(&self, name: &str, locals: &Locals) -> Result<Value> {
        if let Some((_, v)) = locals.iter().rev().find(|(n, _)| n == name) {
            return Ok(v.clone());
        }
        if let Some(v) = self.bindings.get(name) {
            return Ok(v.clone());
        }
        if let Some(b) = self.bornologies.get(name) {
            return Ok(Value::Bornology(b.clone()));
        }
        if let Some(d) = self.derivations.get(name) {
            return Ok(Value::Derivation(d.clone()));
        }
        if types::BORNOLOGY_NAMES.contains(&name) {
            return Ok(Value::Bornology(bornology_of_kind(name, self.space.universe().clone())?));
        }
        if types::DERIVATION_NAMES.contains(&name) {
            if self.space.universe().arity() != 1 {
                return Err(Error::Unsupported(format!(
                    "`{name}` needs a one-variable space; declare a named derivation instead"
                )));
            }
            return Ok(Value::Derivation(derivation(name, &self.space, 0)?));
        }
        if name == "ones" {
            return Ok(Value::Series(sigma_core::closure::span::ones(&Bornology::all(Universe::nat()))?));
        }
        if let Some(n) = unit_index(name) {
            return Ok(Value::Series(Series::delta(Bornology::finite(Universe::nat()), Mono::int(n))?));
        }
        if let Some(i) = generator_index(self.space.universe(), name) {
            let mut exps = vec![0i64; self.space.universe().arity()];
            exps[i] = 1;
            return Ok(Value::Series(Series::monomial(self.space.clone(), Mono::ints(&exps), self.field.one())?));
        }
        Err(Error::Parse(format!("unknown name `{name}`")))
    }

    fn binary(&self, op: Op, l: Value, r: Value) -> Result<Value> {
        use Value as V;
        Ok(match (op, l, r) {
            (Op::Add, V::Scalar(a), V::Scalar(b)) => V::Scalar(a + b),
            (Op::Sub, V::Scalar(a), V::Scalar(b)) => V::Scalar(a - b),
            (Op::Mul, V::Scalar(a), V::Scalar(b)) => V::Scalar(a * b),
            (Op::Div, V::Scalar(a), V::Scalar(b)) => {
                V::Scalar(&a * &b.inv().ok_or_else(|| Error::NotInvertible("division by zero".into()))?)
            }
            (Op::Mul, V::Scalar(c), V::Series(s)) | (Op::Mul, V::Series(s), V::Scalar(c)) => V::Series(s.scale(&c)),
            (Op::Div, V::Series(s), V::Scalar(c)) => {
                V::Series(s.scale(&c.inv().ok_or_else(|| Error::NotInvertible("division by zero".into()))?))
            }
            (op @ (Op::Add | Op::Sub | Op::Div), V::Scalar(c), V::Series(s)) => {
                self.binary(op, V::Series(constant(s.bornology(), c)?), V::Series(s))?
            }
            (op @ (Op::Add | Op::Sub), V::Series(s), V::Scalar(c)) => {
                let k = constant(s.bornology(), c)?;
                self.binary(op, V::Series(s), V::Series(k))?
            }
            (op, V::Series(a), V::Series(b)) if op != Op::Tensor => {
                let (a, b) = align(&a, &b)?;
                V::Series(match op {
                    Op::Add => a.add(&b)?,
                    Op::Sub => a.sub(&b)?,
                    Op::Mul => cauchy_product(&HahnSeries::new(a)?, &HahnSeries::new(b)?)?.into_series(),
                    _ => {
                        let inv = invert_unit(&HahnSeries::new(b)?)?;
                        cauchy_product(&HahnSeries::new(a)?, &inv)?.into_series()
                    }
                })
            }
            (Op::Tensor, V::Series(a), V::Series(b)) => V::Series(a.tensor(&b)),
            (Op::Tensor, V::Map(a), V::Map(b)) => V::Map(StrongLinearMap::tensor(&a, &b)?),
            (Op::Tensor, V::Family(a), V::Family(b)) => V::Family(a.tensor(&b)?),
            (Op::Mul, V::Map(a), V::Map(b)) => V::Map(StrongLinearMap::compose(&a, &b)?),
            (Op::Mul, V::Scalar(c), V::Family(f)) => V::Family(f.rescale(Arc::new(move |_| c.clone()))),
            _ => unreachable!("checked"),
        })
    }

    fn call(&self, name: &str, groups: Vec<Vec<Value>>) -> Result<Value> {
        if name == "grid" {
            let eps = series(&groups[0][0]);
            let gens = groups[1].iter().map(|v| single_monomial(series(v))).collect::<Result<Vec<_>>>()?;
            return Ok(Value::Family(grid_powers(eps, gens)?));
        }
        let args = groups.into_iter().next().unwrap_or_default();
        let a = |i: usize| &args[i];
        let w = self.window;
        Ok(match name {
            "sum" => {
                let fam = family(a(0));
                let weights = match args.get(1) {
                    None => unit_weights(),
                    Some(Value::Scalar(c)) => {
                        let c = c.clone();
                        Arc::new(move |_: &Mono| c.clone())
                    }
                    Some(Value::Lambda(l)) => lambda_weights(l.clone(), fam, w)?,
                    _ => unreachable!("checked"),
                };
                Value::Series(fam.sum_checked(&weights, w)?)
            }
            "pair" => {
                let (f, g) = (series(a(0)), series(a(1)));
                Value::Scalar(pairing(f, g)?)
            }
            "apply" | "derive" => {
                let f = series(a(1));
                match a(0) {
                    Value::Map(m) => Value::Series(m.apply(&coerce(f, m.source())?)?),
                    Value::Derivation(d) => Value::Series(d.apply(&coerce(f, d.algebra().bornology())?)?),
                    _ => unreachable!("checked"),
                }
            }
            "truncate" => {
                let f = series(a(0));
                let bound = single_monomial(series(a(1)))?;
                f.universe().check(&bound)?;
                Value::Series(HahnSeries::new(f.clone())?.truncate(&bound)?)
            }
            "coeff" => {
                let m = single_monomial(series(a(1)))?;
                Value::Scalar(series(a(0)).coeff(&m)?)
            }
            "deg" => {
                let f = series(a(0));
                let (m, _) = HahnSeries::new(f.clone())?
                    .leading_term_within(w)?
                    .ok_or_else(|| Error::Unsupported("the zero series has no degree".into()))?;
                match m.coords() {
                    [q] => Value::Scalar(scalar_of_q(*q)),
                    _ => return Err(Error::Unsupported("degree needs a one-variable space".into())),
                }
            }
            "perp" => Value::Bornology(born(a(0)).perp()),
            "product" => Value::Bornology(Bornology::product(born(a(0)), born(a(1)))),
            "hom" => Value::Bornology(Bornology::hom(born(a(0)), born(a(1)))),
            "bounded" => {
                let b = born(a(0));
                let s = DescribedSet::parse(string(a(1)), b.universe())?;
                Value::Verdict(b.is_bounded(&s)?.to_string())
            }
            "dual" => Value::Map(map(a(0)).dual()),
            "compose" => Value::Map(StrongLinearMap::compose(map(a(0)), map(a(1)))?),
            "basis" => {
                let rows: Vec<Series> = list(a(0)).iter().map(|v| series(v).clone()).collect();
                let depth = small_int(scalar(a(1)), "depth")?;
                Value::Report(basis_report(&rows, depth)?)
            }
            "sigmaspan" => {
                let gens: Vec<Generator> = list(a(0))
                    .iter()
                    .map(|v| match v {
                        Value::Series(s) => Generator::Single(s.clone()),
                        Value::Generator(g) => g.clone(),
                        _ => unreachable!("checked"),
                    })
                    .collect();
                let cand = series(a(1));
                let window = match args.get(2) {
                    Some(v) => small_int(scalar(v), "window")?,
                    None => w,
                };
                let gens = gens
                    .into_iter()
                    .map(on_line)
                    .collect::<Result<Vec<_>>>()?;
                let cand = coerce(cand, &Bornology::all(Universe::nat()))?;
                let v = sigma_core::closure::sigma_span_window(&gens, &cand, window)?;
                Value::Verdict(v.label().to_string())
            }
            "monomials" => {
                let s = DescribedSet::parse(string(a(0)), self.space.universe())?;
                Value::Family(SummableFamily::monomials(self.space.clone(), s)?)
            }
            "translates" => {
                let t = series(a(0));
                let s = DescribedSet::parse(string(a(1)), t.universe())?;
                Value::Family(SummableFamily::translates(t, s)?)
            }
            "pattern" => {
                let t = series(a(0));
                let s = DescribedSet::parse(string(a(1)), t.universe())?;
                Value::Generator(Generator::pattern(t.clone(), s))
            }
            "shift" => {
                let m = series(a(0));
                Value::Map(StrongLinearMap::shift(m.bornology(), single_monomial(m)?)?)
            }
            "banded" => {
                let seed = small_int(scalar(a(0)), "seed")? as u64;
                let width = small_int(scalar(a(1)), "width")? as i64;
                let range = small_int(scalar(a(2)), "range")? as i64;
                let b = match args.get(3) {
                    Some(v) => born(v).clone(),
                    None => Bornology::finite(Universe::nat()),
                };
                Value::Map(StrongLinearMap::banded(&b, seed, width, range)?)
            }
            "functional" => {
                let g = series(a(0));
                Value::Map(StrongLinearMap::series_to_functional(g, &g.bornology().perp())?)
            }
            "check" => Value::Verdict(family(a(0)).check_summable(w).verdict.to_string()),
            kind => Value::Bornology(bornology_of_kind(kind, string(a(0)).parse()?)?),
        })
    }
}

/// Internal error carrier: core errors get the span of the failing node.
enum Fault {
    Diag(Diagnostic),
    Core(Error),
}

impl From<Diagnostic> for Fault {
    fn from(d: Diagnostic) -> Fault {
        Fault::Diag(d)
    }
}

impl From<Error> for Fault {
    fn from(e: Error) -> Fault {
        Fault::Core(e)
    }
}

fn series(v: &Value) -> &Series {
    match v {
        Value::Series(s) => s,
        _ => unreachable!("checked"),
    }
}

fn scalar(v: &Value) -> &Scalar {
    match v {
        Value::Scalar(s) => s,
        _ => unreachable!("checked"),
    }
}

fn family(v: &Value) -> &SummableFamily {
    match v {
        Value::Family(f) => f,
        _ => unreachable!("checked"),
    }
}

fn map(v: &Value) -> &StrongLinearMap {
    match v {
        Value::Map(m) => m,
        _ => unreachable!("checked"),
    }
}

fn born(v: &Value) -> &Bornology {
    match v {
        Value::Bornology(b) => b,
        _ => unreachable!("checked"),
    }
}

fn string(v: &Value) -> &str {
    match v {
        Value::Str(s) => s,
        _ => unreachable!("checked"),
    }
}

fn list(v: &Value) -> &[Value] {
    match v {
        Value::List(l) => l,
        _ => unreachable!("checked"),
    }
}

fn scalar_of_q(q: Q) -> Scalar {
    Scalar::ratio(*q.numer(), *q.denom())
}

fn small_int(s: &Scalar, what: &str) -> Result<usize> {
    let bad = || Error::Parse(format!("{what} must be a small natural number, found {s}"));
    let r = s.as_rational().ok_or_else(bad)?;
    if !r.is_integer() {
        return Err(bad());
    }
    usize::try_from(r.numer()).ok().filter(|n| *n <= 1 << 20).ok_or_else(bad)
}

/// `c` times the unit monomial.
fn constant(born: &Bornology, c: Scalar) -> Result<Series> {
    if c.is_zero() {
        return Ok(Series::zero(born.clone()));
    }
    let unit = born
        .universe()
        .unit()
        .ok_or_else(|| Error::Unsupported(format!("{} has no unit monomial for constants", born.universe())))?;
    Series::monomial(born.clone(), unit, c)
}

/// Brings two series into one space; a finite side adopts the other's
/// bornology.
fn align(a: &Series, b: &Series) -> Result<(Series, Series)> {
    if a.bornology() == b.bornology() {
        return Ok((a.clone(), b.clone()));
    }
    if a.is_finite() {
        return Ok((a.with_bornology(b.bornology())?, b.clone()));
    }
    if b.is_finite() {
        return Ok((a.clone(), b.with_bornology(a.bornology())?));
    }
    Err(Error::BornologyMismatch(format!("{} and {} differ", a.bornology(), b.bornology())))
}

fn coerce(f: &Series, target: &Bornology) -> Result<Series> {
    if f.bornology() == target {
        Ok(f.clone())
    } else {
        f.with_bornology(target)
    }
}

fn on_line(g: Generator) -> Result<Generator> {
    let all = Bornology::all(Universe::nat());
    Ok(match g {
        Generator::Single(s) => Generator::Single(coerce(&s, &all)?),
        Generator::Pattern { template, offsets } => Generator::Pattern { template: coerce(&template, &all)?, offsets },
    })
}

/// The monomial of a one-term series.
fn single_monomial(s: &Series) -> Result<Mono> {
    match s.terms() {
        Some(t) if t.len() == 1 => Ok(t.keys().next().expect("one term").clone()),
        _ => Err(Error::Unsupported(format!("expected a single monomial, found {}", s.display(4)?))),
    }
}

fn power(s: &Series, num: i64, den: i64) -> Result<Series> {
    if let Some(t) = s.terms().filter(|t| t.len() == 1) {
        let (m, c) = t.iter().next().expect("one term");
        let c = if den == 1 {
            let p = c.pow(num.unsigned_abs());
            if num < 0 {
                p.inv().ok_or_else(|| Error::NotInvertible("zero coefficient".into()))?
            } else {
                p
            }
        } else if c.is_one() {
            c.clone()
        } else {
            return Err(Error::Unsupported("fractional powers need a unit coefficient".into()));
        };
        let m = m.scale(Q::new(num, den));
        s.universe().check(&m)?;
        return Series::monomial(s.bornology().clone(), m, c);
    }
    if den != 1 {
        return Err(Error::Unsupported("fractional powers are defined on single monomials only".into()));
    }
    let h = HahnSeries::new(s.clone())?;
    let base = if num < 0 { invert_unit(&h)? } else { h };
    Ok(base.pow(num.unsigned_abs())?.into_series())
}

/// `(εⁿ)_n` with the certificate `grid(g₁…g_m; g₁…g_m)`, i.e. products of
/// at least one generator.
fn grid_powers(eps: &Series, gens: Vec<Mono>) -> Result<SummableFamily> {
    let grid = GridCertificate::new(gens.clone(), gens)?;
    let support = eps.terms().ok_or_else(|| Error::Unsupported("grid needs a finite series".into()))?;
    if let Some(m) = support.keys().find(|m| !grid.contains(m)) {
        return Err(Error::Certificate(format!(
            "{} lies outside {}",
            eps.universe().format_elem(m),
            grid.to_set().format(eps.universe())
        )));
    }
    powers(&HahnSeries::with_grid(eps.clone(), grid)?)
}

fn lambda_weights(l: Arc<Closure>, fam: &SummableFamily, window: usize) -> Result<Weights> {
    let arg = |i: &Mono| -> Result<Scalar> {
        match i.coords() {
            [q] => Ok(scalar_of_q(*q)),
            _ => Err(Error::Unsupported("lambda weights need a one-dimensional index".into())),
        }
    };
    let call = move |l: &Closure, i: &Mono| -> Result<Scalar> {
        let mut locals = l.locals.clone();
        locals.push((l.var.clone(), Value::Scalar(arg(i)?)));
        match l.env.eval_in(&l.body, &locals) {
            Ok(Value::Scalar(s)) => Ok(l.env.field.coerce(&s)),
            Ok(_) => Err(Error::Parse("weight is not a scalar".into())),
            Err(d) => Err(Error::Parse(d.to_string())),
        }
    };
    // Surface errors on the window before handing out a total function.
    let memo: Arc<Mutex<HashMap<Mono, Scalar>>> = Arc::default();
    for i in fam.index_window(window)? {
        let v = call(&l, &i)?;
        memo.lock().expect("weights memo").insert(i, v);
    }
    Ok(Arc::new(move |i: &Mono| {
        if let Some(v) = memo.lock().expect("weights memo").get(i) {
            return v.clone();
        }
        let v = call(&l, i).unwrap_or_else(|_| Scalar::zero());
        memo.lock().expect("weights memo").insert(i.clone(), v.clone());
        v
    }))
}

fn basis_report(rows: &[Series], depth: usize) -> Result<String> {
    let h = FunctionalFamily::from_series(depth, rows)?;
    let b = dual_basis_construction(&h, depth);
    let line = Universe::nat();
    let born = Bornology::finite(line.clone());
    let vec_series = |v: &[Scalar]| -> Result<String> {
        let s = Series::finite(born.clone(), v.iter().enumerate().map(|(i, c)| (Mono::int(i as i64), c.clone())))?;
        Ok(render_series(&s, depth))
    };
    let mut out = format!("basis of depth {depth}: {} vectors", b.vectors.len());
    for (k, (v, step)) in b.vectors.iter().zip(&b.steps).enumerate() {
        let from = match step {
            Step::Row(m) => format!("row {m}"),
            Step::Coordinate(m) => format!("coordinate {m}"),
        };
        write!(out, "\nb{k} = {} ({from})", vec_series(v)?).expect("string write");
    }
    for (m, rec) in b.recoveries.iter().enumerate() {
        let Some(rec) = rec else { continue };
        let terms: Vec<String> = rec
            .coeffs
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| format!("{}·d{j}", render_scalar(c)))
            .collect();
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        let dep = if rec.dependent { ", dependent" } else { "" };
        write!(out, "\nxi{m} = {body} (vanishes from b{}{dep})", rec.bound).expect("string write");
    }
    Ok(out)
}

fn render_scalar(c: &Scalar) -> String {
    c.to_string()
}

fn wrap_coeff(c: &Scalar) -> String {
    let s = c.to_string();
    if s.contains('/') {
        format!("({s})")
    } else {
        s
    }
}

/// Canonical text of a series: `1 + x + 2x^2`, `(1/2)x`, `2e3` on ℕ, and
/// a trailing `+ O(>last)` for lazy series.
pub fn render_series(s: &Series, window: usize) -> String {
    let u = s.universe();
    let nat_line = matches!(u, Universe::Lattice { domain: Domain::Nat, arity: 1, names: None });
    let point = matches!(u, Universe::Finite(n) if n.len() == 1);
    let terms = match s.snapshot(window) {
        Ok(t) => t,
        Err(e) => return format!("<{e}>"),
    };
    let mut out = String::new();
    for (m, c) in &terms {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = if neg { -c } else { c.clone() };
        let body = if point {
            mag.to_string()
        } else if nat_line {
            let e = format!("e{}", u.format_elem(m));
            if mag.is_one() { e } else { format!("{}{e}", wrap_coeff(&mag)) }
        } else if matches!(u, Universe::Lattice { names: Some(_), .. }) {
            if m.is_zero() {
                mag.to_string()
            } else if mag.is_one() {
                u.format_elem(m)
            } else {
                format!("{}{}", wrap_coeff(&mag), u.format_elem(m))
            }
        } else {
            let e = format!("[{}]", u.format_elem(m));
            if mag.is_one() { e } else { format!("{}{e}", wrap_coeff(&mag)) }
        };
        match (out.is_empty(), neg) {
            (true, true) => out.push_str(&format!("-{body}")),
            (true, false) => out.push_str(&body),
            (false, true) => out.push_str(&format!(" - {body}")),
            (false, false) => out.push_str(&format!(" + {body}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    if !s.is_finite() {
        if let Some(last) = s.window(window).ok().and_then(|w| w.last().cloned()) {
            let e = if nat_line { format!("e{}", u.format_elem(&last)) } else { u.format_elem(&last) };
            out.push_str(&format!(" + O(>{e})"));
        }
    }
    out
}

/// Text form of a value.
pub fn render(v: &Value, window: usize) -> String {
    match v {
        Value::Scalar(s) => s.to_string(),
        Value::Series(s) => render_series(s, window),
        Value::Family(f) => {
            let iu = f.index_universe();
            let idx = f.index_set().format(iu);
            format!("family indexed by {idx} in {} on {}", f.bornology(), f.bornology().universe())
        }
        Value::Map(m) => format!("map {} : {} -> {}", m.describe(), m.source(), m.target()),
        Value::Bornology(b) => format!("{b} on {}", b.universe()),
        Value::Verdict(s) | Value::Report(s) => s.clone(),
        Value::Derivation(d) => format!("derivation {} of {}", d.name(), d.algebra()),
        Value::Generator(g) => g.describe(),
        Value::Str(s) => format!("{s:?}"),
        Value::List(items) => {
            format!("[{}]", items.iter().map(|i| render(i, window)).collect::<Vec<_>>().join(", "))
        }
        Value::Lambda(l) => format!("{} -> {}", l.var, l.body),
    }
}

/// JSON record of a value, schema `sigma/1`.
pub fn to_json(v: &Value, window: usize) -> serde_json::Value {
    use serde_json::json;
    let mut rec = json!({
        "schema": crate::SCHEMA,
        "type": v.ty().to_string(),
        "text": render(v, window),
    });
    match v {
        Value::Series(s) => {
            if let Ok(j) = s.to_json(window) {
                rec["series"] = j;
            }
        }
        Value::Bornology(b) => rec["bornology"] = b.to_json(),
        Value::Map(m) => {
            if let Ok(j) = m.to_json(window.min(8)) {
                rec["map"] = j;
            }
        }
        _ => {}
    }
    rec
}

pub fn error_json(d: &Diagnostic) -> serde_json::Value {
    serde_json::json!({
        "schema": crate::SCHEMA,
        "error": {
            "line": d.span.line,
            "col": d.span.col,
            "message": d.message,
            "expected": d.expected,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn run(src: &str) -> String {
        let env = Env::new(&Config::default()).unwrap();
        match env.eval(&parse(src).unwrap()) {
            Ok(v) => render(&v, 8),
            Err(d) => format!("error: {d}"),
        }
    }

    #[test]
    fn documented_evaluations() {
        assert_eq!(run("truncate((1-x-x^2)^-1, x^5)"), "1 + x + 2x^2 + 3x^3 + 5x^4 + 8x^5");
        assert_eq!(run("0 + 0"), "0");
        assert_eq!(run("pair(e0, e0)"), "1");
        assert_eq!(run("pair(e0 - 2*e3, ones)"), "-1");
    }

    #[test]
    fn geometric_sum_matches_inverse() {
        let a = run("sum(grid(x; x), n -> 1)");
        assert_eq!(a, "1 + x + x^2 + x^3 + x^4 + x^5 + x^6 + x^7 + O(>x^7)");
        assert_eq!(run("(1 - x)^-1"), a);
    }

    #[test]
    fn fractional_exponents_and_coefficients() {
        assert_eq!(run("x^(1/2) * x^(1/2)"), "x");
        assert_eq!(run("x/2 + 3"), "3 + (1/2)x");
        assert_eq!(run("2e3 + e0"), "e0 + 2e3");
    }

    #[test]
    fn errors_carry_spans() {
        assert!(run("1/0").starts_with("error: 1:2"));
        assert!(run("truncate(x, 1 + x)").starts_with("error: 1:1"));
        assert!(run("e0 + x").starts_with("error:"));
    }

    #[test]
    fn bindings_persist() {
        let mut env = Env::new(&Config::default()).unwrap();
        env.run(&crate::parser::parse_stmt("let f = 1 - x").unwrap()).unwrap();
        let v = env.run(&crate::parser::parse_stmt("truncate(f^-1, x^3)").unwrap()).unwrap().unwrap();
        assert_eq!(render(&v, 8), "1 + x + x^2 + x^3");
    }
}
