//! Elaboration and evaluation of parsed expressions on a model variety.

use std::fmt;

use chern_core::exactnum::{Field, Prime, Rational};
use chern_core::kchow::{r_class, todd_class, ChowElt, KCohElt, KHomElt, ModelVariety, VirtualBundle};
use chern_core::steenrod::{to_mod_p, Steenrod};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value as JsonValue};

use crate::parser::{Expr, ExprKind, Func};

/// Which groups an expression may live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Context {
    Chow,
    K,
}

/// Static type of a subexpression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Int,
    Chow,
    Bundle,
    KCoh,
    KHom,
    /// Homological Chern character split by dimension.
    Graded,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Int => "integer",
            Kind::Chow => "chow",
            Kind::Bundle => "bundle",
            Kind::KCoh => "k0",
            Kind::KHom => "k0-prime",
            Kind::Graded => "graded-chow",
        }
    }

    fn is_k(self) -> bool {
        matches!(self, Kind::Bundle | Kind::KCoh | Kind::KHom)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for EvalError {}

fn err<T>(e: &Expr, message: impl Into<String>) -> Result<T, EvalError> {
    Err(EvalError { offset: e.offset, message: message.into() })
}

fn core<T>(e: &Expr, r: chern_core::Result<T>) -> Result<T, EvalError> {
    r.map_err(|x| EvalError { offset: e.offset, message: x.to_string() })
}

/// Common kind of two operands of `+`, `-` or `*`.
fn unify(e: &Expr, a: Kind, b: Kind) -> Result<Kind, EvalError> {
    use Kind::*;
    match (a, b) {
        (Graded, _) | (_, Graded) => err(e, "graded Chern characters support no arithmetic"),
        (Int, k) | (k, Int) => Ok(k),
        (Chow, Chow) => Ok(Chow),
        (Chow, _) | (_, Chow) => err(e, format!("cannot combine a {} and a {} value", a.name(), b.name())),
        (KHom, _) | (_, KHom) => Ok(KHom),
        (KCoh, _) | (_, KCoh) => Ok(KCoh),
        (Bundle, Bundle) => Ok(Bundle),
    }
}

fn check_index(e: &Expr, x: &ModelVariety, what: &str, v: &[i64], bounded: bool) -> Result<(), EvalError> {
    if v.len() != x.num_factors() {
        return err(e, format!("{what} takes {} arguments on {x}, got {}", x.num_factors(), v.len()));
    }
    if bounded {
        for (j, (&i, &n)) in v.iter().zip(x.factors()).enumerate() {
            if i < 0 || i > n as i64 {
                return err(e, format!("{what}: argument {} must lie in 0..={n}, got {i}", j + 1));
            }
        }
    }
    Ok(())
}

/// Type-check `e` on `x` without evaluating it.
pub fn elaborate(e: &Expr, x: &ModelVariety) -> Result<Kind, EvalError> {
    match &e.kind {
        ExprKind::Int(_) => Ok(Kind::Int),
        ExprKind::Hyperplane(j) => {
            if *j == 0 || *j as usize > x.num_factors() {
                return err(e, format!("h{j} is not a hyperplane class of {x}"));
            }
            Ok(Kind::Chow)
        }
        ExprKind::Line(a) => check_index(e, x, "O", a, false).map(|_| Kind::Bundle),
        ExprKind::Cycle(a) => check_index(e, x, "L", a, true).map(|_| Kind::Chow),
        ExprKind::KCycle(a) => check_index(e, x, "OL", a, true).map(|_| Kind::KHom),
        ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) => {
            let (ka, kb) = (elaborate(a, x)?, elaborate(b, x)?);
            unify(e, ka, kb)
        }
        ExprKind::Pow(a, _) => match elaborate(a, x)? {
            Kind::Graded => err(e, "graded Chern characters support no arithmetic"),
            k => Ok(k),
        },
        ExprKind::Call(f, args) => {
            if args.len() != f.arity() {
                return err(e, format!("{} expects {} argument(s), got {}", f.signature(), f.arity(), args.len()));
            }
            let kinds = args.iter().map(|a| elaborate(a, x)).collect::<Result<Vec<_>, _>>()?;
            let last = *kinds.last().expect("arity >= 1");
            let last_expr = args.last().expect("arity >= 1");
            if f.arity() == 2 && kinds[0] != Kind::Int {
                return err(&args[0], format!("{}: first argument must be an integer", f.signature()));
            }
            let want_bundle = || -> Result<(), EvalError> {
                if matches!(last, Kind::Bundle | Kind::Int) {
                    Ok(())
                } else {
                    err(last_expr, format!("{}: expected a bundle, got a {} value", f.signature(), last.name()))
                }
            };
            let want_k = || -> Result<(), EvalError> {
                if last.is_k() || last == Kind::Int {
                    Ok(())
                } else {
                    err(last_expr, format!("{}: expected a K-class, got a {} value", f.signature(), last.name()))
                }
            };
            let want_chow = || -> Result<(), EvalError> {
                if matches!(last, Kind::Chow | Kind::Int) {
                    Ok(())
                } else {
                    err(last_expr, format!("{}: expected a Chow class, got a {} value", f.signature(), last.name()))
                }
            };
            match f {
                Func::Todd | Func::R => want_bundle().map(|_| Kind::Chow),
                Func::Theta => want_bundle().map(|_| Kind::KCoh),
                Func::Ch => want_k().map(|_| Kind::Chow),
                Func::ChHom => want_k().map(|_| Kind::Graded),
                Func::Psi => want_k().map(|_| if last == Kind::Int { Kind::KCoh } else { last }),
                Func::T | Func::Tc | Func::S | Func::TPrime => want_chow().map(|_| Kind::Chow),
            }
        }
    }
}

/// Type-check and enforce the requested context.
pub fn elaborate_in(e: &Expr, x: &ModelVariety, context: Option<Context>) -> Result<Kind, EvalError> {
    let kind = elaborate(e, x)?;
    match (context, kind) {
        (Some(Context::Chow), k) if k.is_k() => err(e, format!("a {} value in a Chow context", k.name())),
        (Some(Context::K), Kind::Chow | Kind::Graded) => err(e, format!("a {} value in a K context", kind.name())),
        _ => Ok(kind),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(BigInt),
    Chow(ChowElt),
    Bundle(VirtualBundle),
    KCoh(KCohElt),
    KHom(KHomElt),
    /// `ch_i` for `i = 0..=dim`.
    Graded(Vec<ChowElt>),
}

impl Value {
    pub fn kind(&self) -> Kind {
        match self {
            Value::Int(_) => Kind::Int,
            Value::Chow(_) => Kind::Chow,
            Value::Bundle(_) => Kind::Bundle,
            Value::KCoh(_) => Kind::KCoh,
            Value::KHom(_) => Kind::KHom,
            Value::Graded(_) => Kind::Graded,
        }
    }

    pub fn field(&self) -> Option<Field> {
        match self {
            Value::Chow(c) => Some(c.field()),
            Value::Graded(v) => v.first().map(ChowElt::field),
            _ => None,
        }
    }

    pub fn to_json(&self) -> JsonValue {
        match self {
            Value::Int(n) => json!(n.to_string()),
            Value::Chow(c) => c.to_json(),
            Value::Bundle(b) => {
                let terms: Vec<_> = b.terms().map(|(a, m)| json!({"twist": a, "mult": m})).collect();
                json!({"variety": b.variety().to_string(), "terms": terms})
            }
            Value::KCoh(k) => k.to_json(),
            Value::KHom(k) => k.to_json(),
            Value::Graded(v) => {
                json!(v.iter().enumerate().rev().map(|(i, c)| json!({"dim": i, "value": c.to_json()})).collect::<Vec<_>>())
            }
        }
    }

    /// Rows of `(label, monomial, coefficient)`; the label is the dimension
    /// for graded values and empty otherwise.
    pub fn csv_rows(&self) -> Vec<(String, String, String)> {
        let chow_rows = |label: String, c: &ChowElt| -> Vec<(String, String, String)> {
            c.sorted_terms()
                .into_iter()
                .map(|(e, k)| {
                    let m = chern_core::render::monomial("h", &e);
                    (label.clone(), if m.is_empty() { "1".into() } else { m }, k.to_string())
                })
                .collect()
        };
        match self {
            Value::Int(n) => vec![(String::new(), "1".into(), n.to_string())],
            Value::Chow(c) => chow_rows(String::new(), c),
            Value::Graded(v) => v.iter().enumerate().rev().flat_map(|(i, c)| chow_rows(i.to_string(), c)).collect(),
            Value::Bundle(b) => b
                .terms()
                .map(|(a, m)| {
                    let args: Vec<String> = a.iter().map(i64::to_string).collect();
                    (String::new(), format!("O({})", args.join(",")), m.to_string())
                })
                .collect(),
            Value::KHom(k) => {
                let mut rows: Vec<_> = k
                    .terms()
                    .map(|(i, c)| {
                        let args: Vec<String> = i.iter().map(u32::to_string).collect();
                        (String::new(), format!("OL({})", args.join(",")), c.to_string())
                    })
                    .collect();
                rows.sort();
                rows
            }
            Value::KCoh(k) => k
                .t_expansion()
                .terms()
                .map(|(e, c)| {
                    let m = chern_core::render::monomial("t", &e);
                    (String::new(), if m.is_empty() { "1".into() } else { m }, c.to_string())
                })
                .collect(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Chow(c) => write!(f, "{c}"),
            Value::Bundle(b) => write!(f, "{b}"),
            Value::KCoh(k) => write!(f, "{k}"),
            Value::KHom(k) => write!(f, "{k}"),
            Value::Graded(v) => {
                for (k, (i, c)) in v.iter().enumerate().rev().enumerate() {
                    if k > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "ch_{i} = {c}")?;
                }
                Ok(())
            }
        }
    }
}

/// Evaluation environment: the variety and the optional coefficient prime
/// for the mod-p operations.
pub struct Evaluator {
    variety: ModelVariety,
    modulus: Option<Prime>,
    steenrod: Option<Steenrod>,
}

impl Evaluator {
    pub fn new(variety: &ModelVariety, modulus: Option<Prime>) -> chern_core::Result<Self> {
        let steenrod = modulus.map(|p| Steenrod::new(variety, p)).transpose()?;
        Ok(Evaluator { variety: variety.clone(), modulus, steenrod })
    }

    /// Elaborate, evaluate, and reduce the result mod p when a modulus is set.
    pub fn run(&self, e: &Expr, context: Option<Context>) -> Result<Value, EvalError> {
        elaborate_in(e, &self.variety, context)?;
        let v = self.eval(e)?;
        match (self.modulus, v) {
            (None, v) => Ok(v),
            (Some(p), Value::Int(n)) => Ok(Value::Chow(self.reduce(
                e,
                ChowElt::constant(&self.variety, Field::Rational, &Rational::from_integer(n)),
                p,
            )?)),
            (Some(p), Value::Chow(c)) => Ok(Value::Chow(self.reduce(e, c, p)?)),
            (Some(p), Value::Graded(v)) => {
                Ok(Value::Graded(v.into_iter().map(|c| self.reduce(e, c, p)).collect::<Result<_, _>>()?))
            }
            (Some(_), v) => err(e, format!("--mod applies to Chow classes, not to a {} value", v.kind().name())),
        }
    }

    fn reduce(&self, e: &Expr, c: ChowElt, p: Prime) -> Result<ChowElt, EvalError> {
        core(e, to_mod_p(&c, p))
    }

    fn steenrod(&self, e: &Expr, f: Func) -> Result<&Steenrod, EvalError> {
        match &self.steenrod {
            Some(s) => Ok(s),
            None => err(e, format!("{} needs a prime: pass --mod <p>", f.signature())),
        }
    }

    fn int_arg<T: TryFrom<i64>>(&self, e: &Expr, what: &str) -> Result<T, EvalError> {
        match self.eval(e)? {
            Value::Int(n) => {
                n.to_i64().and_then(|v| T::try_from(v).ok()).map_or_else(|| err(e, format!("{what} out of range: {n}")), Ok)
            }
            v => err(e, format!("{what} must be an integer, got a {} value", v.kind().name())),
        }
    }

    fn eval(&self, e: &Expr) -> Result<Value, EvalError> {
        let x = &self.variety;
        Ok(match &e.kind {
            ExprKind::Int(n) => Value::Int(n.clone()),
            ExprKind::Hyperplane(j) => Value::Chow(ChowElt::h(x, Field::Rational, *j as usize - 1)),
            ExprKind::Line(a) => Value::Bundle(core(e, VirtualBundle::line(x, a))?),
            ExprKind::Cycle(a) => {
                let dims: Vec<u32> = a.iter().map(|&i| i as u32).collect();
                Value::Chow(core(e, ChowElt::linear_class(x, Field::Rational, &dims))?)
            }
            ExprKind::KCycle(a) => {
                let dims: Vec<u32> = a.iter().map(|&i| i as u32).collect();
                Value::KHom(core(e, KHomElt::basis(x, &dims))?)
            }
            ExprKind::Add(a, b) => self.binary(e, a, b, Op::Add)?,
            ExprKind::Sub(a, b) => self.binary(e, a, b, Op::Sub)?,
            ExprKind::Mul(a, b) => self.binary(e, a, b, Op::Mul)?,
            ExprKind::Pow(a, n) => self.power(e, self.eval(a)?, *n)?,
            ExprKind::Call(f, args) => self.call(e, *f, args)?,
        })
    }

    fn power(&self, e: &Expr, v: Value, n: u32) -> Result<Value, EvalError> {
        Ok(match v {
            Value::Int(k) => Value::Int(num_traits::pow(k, n as usize)),
            Value::Chow(c) => Value::Chow(core(e, c.pow(n))?),
            Value::KCoh(k) => Value::KCoh(core(e, k.pow(n))?),
            Value::KHom(k) => Value::KHom(KHomElt::from_coh(&core(e, k.to_coh().pow(n))?)),
            Value::Bundle(b) => {
                let mut acc = VirtualBundle::trivial(&self.variety, 1);
                for _ in 0..n {
                    acc = core(e, acc.mul(&b))?;
                }
                Value::Bundle(acc)
            }
            Value::Graded(_) => return err(e, "graded Chern characters support no arithmetic"),
        })
    }

    fn coerce(&self, e: &Expr, v: Value, to: Kind, field: Field) -> Result<Value, EvalError> {
        let x = &self.variety;
        let from = v.kind();
        Ok(match (v, to) {
            (v, k) if v.kind() == k => match v {
                Value::Chow(c) if c.field() != field => Value::Chow(self.to_field(e, c, field)?),
                v => v,
            },
            (Value::Int(n), Kind::Chow) => Value::Chow(ChowElt::constant(x, field, &field_value(e, &n, field)?)),
            (Value::Int(n), Kind::Bundle) => {
                let m = n.to_i64().map_or_else(|| err(e, format!("multiplicity out of range: {n}")), Ok)?;
                Value::Bundle(VirtualBundle::trivial(x, m))
            }
            (Value::Int(n), Kind::KCoh) => Value::KCoh(KCohElt::constant(x, &Rational::from_integer(n))),
            (Value::Int(n), Kind::KHom) => {
                Value::KHom(KHomElt::from_coh(&KCohElt::constant(x, &Rational::from_integer(n))))
            }
            (Value::Bundle(b), Kind::KCoh) => Value::KCoh(core(e, b.to_kcoh())?),
            (Value::Bundle(b), Kind::KHom) => Value::KHom(KHomElt::from_coh(&core(e, b.to_kcoh())?)),
            (Value::KCoh(k), Kind::KHom) => Value::KHom(KHomElt::from_coh(&k)),
            _ => return err(e, format!("cannot convert a {} value to {}", from.name(), to.name())),
        })
    }

    /// Rational classes meet mod-p classes after reduction.
    fn to_field(&self, e: &Expr, c: ChowElt, field: Field) -> Result<ChowElt, EvalError> {
        match (c.field(), field) {
            (Field::Rational, Field::ModP(p)) => core(e, to_mod_p(&c, p)),
            _ => Ok(c),
        }
    }

    fn binary(&self, e: &Expr, a: &Expr, b: &Expr, op: Op) -> Result<Value, EvalError> {
        let (va, vb) = (self.eval(a)?, self.eval(b)?);
        let kind = unify(e, va.kind(), vb.kind())?;
        if kind == Kind::Int {
            let (Value::Int(m), Value::Int(n)) = (va, vb) else { unreachable!("both integers") };
            return Ok(Value::Int(match op {
                Op::Add => m + n,
                Op::Sub => m - n,
                Op::Mul => m * n,
            }));
        }
        if op == Op::Mul && kind == Kind::Bundle {
            if let (Value::Int(n), v) | (v, Value::Int(n)) = (va.clone(), vb.clone()) {
                let Value::Bundle(b) = v else { unreachable!("bundle operand") };
                let m = n.to_i64().map_or_else(|| err(e, format!("multiplicity out of range: {n}")), Ok)?;
                return Ok(Value::Bundle(b.scale(m)));
            }
        }
        let field = match (va.field(), vb.field()) {
            (Some(Field::ModP(p)), _) | (_, Some(Field::ModP(p))) => Field::ModP(p),
            _ => Field::Rational,
        };
        if let (Some(Field::ModP(p)), Some(Field::ModP(q))) = (va.field(), vb.field()) {
            if p != q {
                return err(e, format!("cannot combine classes mod {p} and mod {q}"));
            }
        }
        let va = self.coerce(a, va, kind, field)?;
        let vb = self.coerce(b, vb, kind, field)?;
        Ok(match (va, vb) {
            (Value::Chow(x), Value::Chow(y)) => Value::Chow(core(e, op.chow(&x, &y))?),
            (Value::Bundle(x), Value::Bundle(y)) => Value::Bundle(core(
                e,
                match op {
                    Op::Add => x.add(&y),
                    Op::Sub => x.sub(&y),
                    Op::Mul => x.mul(&y),
                },
            )?),
            (Value::KCoh(x), Value::KCoh(y)) => Value::KCoh(core(
                e,
                match op {
                    Op::Add => x.add(&y),
                    Op::Sub => x.sub(&y),
                    Op::Mul => x.mul(&y),
                },
            )?),
            (Value::KHom(x), Value::KHom(y)) => Value::KHom(match op {
                Op::Add => core(e, x.add(&y))?,
                Op::Sub => core(e, x.sub(&y))?,
                Op::Mul => KHomElt::from_coh(&core(e, x.to_coh().mul(&y.to_coh()))?),
            }),
            _ => unreachable!("operands coerced to a common kind"),
        })
    }

    fn bundle_arg(&self, e: &Expr) -> Result<VirtualBundle, EvalError> {
        match self.coerce(e, self.eval(e)?, Kind::Bundle, Field::Rational)? {
            Value::Bundle(b) => Ok(b),
            _ => unreachable!("coerced to a bundle"),
        }
    }

    fn chow_arg(&self, e: &Expr, p: Prime) -> Result<ChowElt, EvalError> {
        match self.coerce(e, self.eval(e)?, Kind::Chow, Field::ModP(p))? {
            Value::Chow(c) => self.reduce(e, c, p),
            _ => unreachable!("coerced to a Chow class"),
        }
    }

    fn call(&self, e: &Expr, f: Func, args: &[Expr]) -> Result<Value, EvalError> {
        let last = args.last().expect("arity checked");
        Ok(match f {
            Func::Todd => Value::Chow(core(e, todd_class(&self.bundle_arg(last)?))?),
            Func::R => {
                let p: u64 = self.int_arg(&args[0], "p")?;
                let p = core(&args[0], Prime::new(p))?;
                Value::Chow(core(e, r_class(p, &self.bundle_arg(last)?))?)
            }
            Func::Theta => {
                let l: i64 = self.int_arg(&args[0], "l")?;
                Value::KCoh(core(e, self.bundle_arg(last)?.theta(l))?)
            }
            Func::Ch | Func::ChHom => {
                let v = self.eval(last)?;
                let v = match v.kind() {
                    Kind::Int => self.coerce(last, v, Kind::KCoh, Field::Rational)?,
                    _ => v,
                };
                let target = if f == Func::Ch { Kind::KCoh } else { Kind::KHom };
                let v = if f == Func::Ch && v.kind() == Kind::KHom {
                    let Value::KHom(k) = v else { unreachable!("k0-prime value") };
                    Value::KCoh(k.to_coh())
                } else {
                    self.coerce(last, v, target, Field::Rational)?
                };
                match v {
                    Value::KCoh(k) => Value::Chow(core(e, k.ch())?),
                    Value::KHom(k) => Value::Graded(core(e, k.ch())?),
                    _ => unreachable!("coerced to a K-class"),
                }
            }
            Func::Psi => {
                let l: i64 = self.int_arg(&args[0], "l")?;
                match self.eval(last)? {
                    Value::Bundle(b) => Value::Bundle(core(e, b.adams(l))?),
                    Value::KCoh(k) => Value::KCoh(core(e, k.adams(l))?),
                    Value::KHom(k) => Value::KHom(core(e, k.adams(l))?),
                    Value::Int(n) => Value::KCoh(core(e, KCohElt::constant(&self.variety, &Rational::from_integer(n)).adams(l))?),
                    v => return err(last, format!("psi: expected a K-class, got a {} value", v.kind().name())),
                }
            }
            Func::T | Func::Tc => {
                let st = self.steenrod(e, f)?;
                let i: u32 = self.int_arg(&args[0], "i")?;
                let c = self.chow_arg(last, st.prime())?;
                Value::Chow(core(e, if f == Func::T { st.t_hom(i, &c) } else { st.t_coh(i, &c) })?)
            }
            Func::S | Func::TPrime => {
                let st = self.steenrod(e, f)?;
                let c = self.chow_arg(last, st.prime())?;
                Value::Chow(core(e, if f == Func::S { st.total_s(&c) } else { st.total_t_prime(&c) })?)
            }
        })
    }
}

fn field_value(e: &Expr, n: &BigInt, field: Field) -> Result<Rational, EvalError> {
    let q = Rational::from_integer(n.clone());
    core(e, field.reduce(&q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Add,
    Sub,
    Mul,
}

impl Op {
    fn chow(self, x: &ChowElt, y: &ChowElt) -> chern_core::Result<ChowElt> {
        match self {
            Op::Add => x.add(y),
            Op::Sub => x.sub(y),
            Op::Mul => x.mul(y),
        }
    }
}
