//! Exact symbolic expressions.
//!
//! [`Expr`] is an immutable tree with structural equality. Constructors do
//! cheap local normalization only: nested sums and products are flattened and
//! numeric subterms are folded. Two mathematically equal trees are therefore
//! not `==` in general; canonical forms and equivalence checking live in
//! [`simplify`] and are backed by the rational normal form of [`poly`].

pub mod diff;
pub mod eval;
pub mod parse;
pub mod poly;
pub mod print;
pub mod simplify;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// Rational scalar used for every numeric coefficient.
pub type Q = num_rational::BigRational;

/// Exact integer rational.
pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Exact ratio of two integers. Panics when `d == 0`.
pub fn q_rat(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Name shared by symbols and differentiation indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

/// Coordinate of jet space: a dependent variable together with the sorted
/// multiset of symbols it has been differentiated by. An empty multiset is
/// the variable itself.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct JetVar {
    pub base: Symbol,
    pub derivs: Vec<Symbol>,
}

impl JetVar {
    pub fn new(base: Symbol, mut derivs: Vec<Symbol>) -> Self {
        derivs.sort();
        JetVar { base, derivs }
    }

    pub fn order(&self) -> usize {
        self.derivs.len()
    }

    /// One more derivative by `x`, keeping the multiset sorted.
    pub fn extend(&self, x: &Symbol) -> JetVar {
        let mut d = self.derivs.clone();
        let pos = d.partition_point(|s| s <= x);
        d.insert(pos, x.clone());
        JetVar {
            base: self.base.clone(),
            derivs: d,
        }
    }

    pub fn count(&self, x: &Symbol) -> usize {
        self.derivs.iter().filter(|s| *s == x).count()
    }
}

/// Irrational constants kept exact.
///
/// `Sqrt(n)` holds a squarefree integer `n >= 2` (squarefree up to a trial
/// division bound; see `poly`). The invariant is maintained by the
/// simplifier, which extracts perfect square parts before building one.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Irr {
    Sqrt(BigInt),
    Pi,
}

/// Elementary functions understood by differentiation and evaluation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Erf,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Erf => "erf",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "erf" => Func::Erf,
            _ => return None,
        })
    }
}

/// Immutable expression tree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Expr {
    Num(Q),
    Irr(Irr),
    Sym(Symbol),
    Jet(JetVar),
    Sum(Arc<Vec<Expr>>),
    Prod(Arc<Vec<Expr>>),
    Pow(Arc<(Expr, Expr)>),
    Call(Func, Arc<Vec<Expr>>),
}

/// Subtree replacement table; keys are matched by structural equality.
pub type SubstMap = BTreeMap<Expr, Expr>;

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Num(q_int(n))
    }

    pub fn rat(n: i64, d: i64) -> Expr {
        Expr::Num(q_rat(n, d))
    }

    pub fn num(q: Q) -> Expr {
        Expr::Num(q)
    }

    pub fn sym(name: &str) -> Expr {
        Expr::Sym(Symbol::new(name))
    }

    pub fn jet(base: &str, derivs: &[&str]) -> Expr {
        Expr::Jet(JetVar::new(
            Symbol::new(base),
            derivs.iter().map(|d| Symbol::new(d)).collect(),
        ))
    }

    pub fn jet_var(v: JetVar) -> Expr {
        Expr::Jet(v)
    }

    pub fn pi() -> Expr {
        Expr::Irr(Irr::Pi)
    }

    /// Flattens nested sums and folds numeric terms. Empty input is 0.
    pub fn sum(items: Vec<Expr>) -> Expr {
        let mut acc = Q::zero();
        let mut out: Vec<Expr> = Vec::with_capacity(items.len());
        let push = |e: Expr, acc: &mut Q, out: &mut Vec<Expr>| match e {
            Expr::Num(q) => *acc += q,
            other => out.push(other),
        };
        for it in items {
            match it {
                Expr::Sum(children) => {
                    for c in children.iter() {
                        push(c.clone(), &mut acc, &mut out);
                    }
                }
                other => push(other, &mut acc, &mut out),
            }
        }
        if !acc.is_zero() {
            out.push(Expr::Num(acc));
        }
        match out.len() {
            0 => Expr::int(0),
            1 => out.pop().unwrap(),
            _ => Expr::Sum(Arc::new(out)),
        }
    }

    /// Flattens nested products and folds numeric factors, which end up as a
    /// single leading coefficient. A zero factor collapses the product.
    pub fn prod(items: Vec<Expr>) -> Expr {
        let mut coef = q_int(1);
        let mut out: Vec<Expr> = Vec::with_capacity(items.len() + 1);
        let push = |e: Expr, coef: &mut Q, out: &mut Vec<Expr>| match e {
            Expr::Num(q) => *coef *= q,
            other => out.push(other),
        };
        for it in items {
            match it {
                Expr::Prod(children) => {
                    for c in children.iter() {
                        push(c.clone(), &mut coef, &mut out);
                    }
                }
                other => push(other, &mut coef, &mut out),
            }
        }
        if coef.is_zero() {
            return Expr::int(0);
        }
        if out.is_empty() {
            return Expr::Num(coef);
        }
        if !coef.is_one_q() {
            out.insert(0, Expr::Num(coef));
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Expr::Prod(Arc::new(out))
        }
    }

    /// Power with light folds: `e^0 = 1`, `e^1 = e`, and numeric bases raised
    /// to small integer exponents. `0^n` with `n < 0` is kept unevaluated.
    pub fn pow(base: Expr, exp: Expr) -> Expr {
        if let Expr::Num(e) = &exp {
            if e.is_zero() {
                return Expr::int(1);
            }
            if e.is_integer() && e.to_integer() == BigInt::from(1) {
                return base;
            }
            if let Expr::Num(b) = &base {
                if e.is_integer() {
                    if let Some(k) = e.to_integer().to_i32() {
                        if k.unsigned_abs() <= 4096 && !(b.is_zero() && k < 0) {
                            return Expr::Num(b.pow(k));
                        }
                    }
                }
            }
        }
        Expr::Pow(Arc::new((base, exp)))
    }

    pub fn powi(base: Expr, k: i64) -> Expr {
        Expr::pow(base, Expr::int(k))
    }

    pub fn call(f: Func, args: Vec<Expr>) -> Expr {
        Expr::Call(f, Arc::new(args))
    }

    pub fn sqrt(e: Expr) -> Expr {
        Expr::call(Func::Sqrt, vec![e])
    }

    pub fn exp(e: Expr) -> Expr {
        Expr::call(Func::Exp, vec![e])
    }

    pub fn log(e: Expr) -> Expr {
        Expr::call(Func::Log, vec![e])
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::prod(vec![Expr::int(-1), e])
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Num(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Num(q) if q.is_one_q())
    }

    pub fn as_num(&self) -> Option<&Q> {
        match self {
            Expr::Num(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Expr::Num(q) if q.is_integer() => q.to_integer().to_i64(),
            _ => None,
        }
    }

    /// Replaces every subtree equal to a key of `map`. Keys are usually
    /// symbols or jet coordinates; replacement happens before recursion, so a
    /// key matching an inner node shadows rules for its children.
    pub fn subst(&self, map: &SubstMap) -> Expr {
        if let Some(r) = map.get(self) {
            return r.clone();
        }
        match self {
            Expr::Num(_) | Expr::Irr(_) | Expr::Sym(_) | Expr::Jet(_) => self.clone(),
            Expr::Sum(items) => Expr::sum(items.iter().map(|e| e.subst(map)).collect()),
            Expr::Prod(items) => Expr::prod(items.iter().map(|e| e.subst(map)).collect()),
            Expr::Pow(be) => Expr::pow(be.0.subst(map), be.1.subst(map)),
            Expr::Call(f, args) => {
                Expr::call(*f, args.iter().map(|e| e.subst(map)).collect())
            }
        }
    }

    /// All symbols appearing as leaves. Jet bases and indices do not count.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let Expr::Sym(s) = e {
                out.insert(s.clone());
            }
        });
        out
    }

    /// All jet coordinates appearing anywhere.
    pub fn jets(&self) -> BTreeSet<JetVar> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let Expr::Jet(j) = e {
                out.insert(j.clone());
            }
        });
        out
    }

    pub fn walk(&self, f: &mut dyn FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Num(_) | Expr::Irr(_) | Expr::Sym(_) | Expr::Jet(_) => {}
            Expr::Sum(items) | Expr::Prod(items) => {
                for e in items.iter() {
                    e.walk(f);
                }
            }
            Expr::Pow(be) => {
                be.0.walk(f);
                be.1.walk(f);
            }
            Expr::Call(_, args) => {
                for e in args.iter() {
                    e.walk(f);
                }
            }
        }
    }

    /// Node count; used as a structural tiebreaker.
    pub fn size(&self) -> u64 {
        let mut n = 0u64;
        self.walk(&mut |_| n += 1);
        n
    }

    /// Canonical form through the rational normal form.
    pub fn simplify(&self) -> Expr {
        simplify::simplify(self)
    }
}

trait QOne {
    fn is_one_q(&self) -> bool;
}

impl QOne for Q {
    fn is_one_q(&self) -> bool {
        self.is_integer() && self.to_integer() == BigInt::from(1)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $build:expr) => {
        impl std::ops::$trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $build;
                f(self.clone(), rhs.clone())
            }
        }
        impl std::ops::$trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $build;
                f(self.clone(), rhs)
            }
        }
        impl std::ops::$trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $build;
                f(self, rhs.clone())
            }
        }
        impl std::ops::$trait<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $build;
                f(self, rhs)
            }
        }
    };
}

impl_binop!(Add, add, |a, b| Expr::sum(vec![a, b]));
impl_binop!(Sub, sub, |a, b| Expr::sum(vec![a, Expr::neg(b)]));
impl_binop!(Mul, mul, |a, b| Expr::prod(vec![a, b]));
impl_binop!(Div, div, |a, b| Expr::prod(
    vec![a, Expr::pow(b, Expr::int(-1))]
));

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self.clone())
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

pub(crate) fn q_is_one(q: &Q) -> bool {
    q.is_one_q()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_flatten_and_fold() {
        let x = Expr::sym("x");
        let e = &x + Expr::int(2) + Expr::int(3);
        match &e {
            Expr::Sum(items) => {
                assert_eq!(items.len(), 2);
                assert_eq!(items[1], Expr::int(5));
            }
            other => panic!("expected sum, got {other:?}"),
        }
        assert_eq!(Expr::int(2) * Expr::int(3), Expr::int(6));
        assert_eq!(Expr::int(0) * &x, Expr::int(0));
        assert_eq!(Expr::sum(vec![]), Expr::int(0));
        assert_eq!(Expr::prod(vec![]), Expr::int(1));
    }

    #[test]
    fn pow_folds_small_numeric_cases() {
        let x = Expr::sym("x");
        assert_eq!(Expr::pow(x.clone(), Expr::int(0)), Expr::int(1));
        assert_eq!(Expr::pow(x.clone(), Expr::int(1)), x);
        assert_eq!(Expr::pow(Expr::int(2), Expr::int(10)), Expr::int(1024));
        assert_eq!(Expr::pow(Expr::int(2), Expr::int(-2)), Expr::rat(1, 4));
        // 0^-1 must stay symbolic, not panic.
        assert!(matches!(
            Expr::pow(Expr::int(0), Expr::int(-1)),
            Expr::Pow(_)
        ));
    }

    #[test]
    fn jet_derivs_stay_sorted() {
        let j = JetVar::new(
            Symbol::new("u"),
            vec![Symbol::new("z"), Symbol::new("x")],
        );
        assert_eq!(j.derivs, vec![Symbol::new("x"), Symbol::new("z")]);
        let j2 = j.extend(&Symbol::new("a"));
        assert_eq!(j2.derivs[0], Symbol::new("a"));
        assert_eq!(j2.order(), 3);
        assert_eq!(j2.count(&Symbol::new("x")), 1);
    }

    #[test]
    fn subst_replaces_whole_subtrees() {
        let u = Expr::jet("u", &[]);
        let x = Expr::sym("x");
        let mut map = SubstMap::new();
        map.insert(u.clone(), -&x);
        let e = &u * &u + Expr::sym("z");
        let got = e.subst(&map);
        let want = &x * &x + Expr::sym("z");
        assert!(crate::expr::simplify::equivalent(&got, &want));
    }

    #[test]
    fn symbol_and_jet_collection() {
        let e = Expr::jet("u", &["x", "x"]) * Expr::sym("eps") + Expr::sym("z");
        let syms = e.symbols();
        assert!(syms.contains(&Symbol::new("eps")));
        assert!(syms.contains(&Symbol::new("z")));
        let jets = e.jets();
        assert_eq!(jets.len(), 1);
    }
}
