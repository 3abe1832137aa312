//! Canonical forms via the rational normal form.
//!
//! `simplify` rewrites an expression through [`RatFunc`] and back; the result
//! is a fixed point, so structural equality of simplified expressions is
//! semantic equality modulo the documented atom independence caveats.
//! Fractional powers are normalized to denominator-free root atoms:
//! `(P/D)^(1/q)` becomes `(P*D^(q-1))^(1/q) / D`, and perfect q-th power
//! parts of rational constants are extracted, so `sqrt(8)` is `2*sqrt(2)`.

use super::poly::{extract_qth_power, int_pow, Atom, Monomial, Poly, RatFunc};
use super::{q_int, Expr, Func, Irr, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Canonical form. Idempotent.
pub fn simplify(e: &Expr) -> Expr {
    rat_to_expr(&expr_to_rat(e))
}

/// Semantic equality test: the difference reduces to the zero normal form.
pub fn equivalent(a: &Expr, b: &Expr) -> bool {
    expr_to_rat(&(a - b)).is_zero()
}

/// Convenience zero test through the normal form.
pub fn is_zero_expr(e: &Expr) -> bool {
    expr_to_rat(e).is_zero()
}

/// Rational normal form of an expression tree.
pub fn expr_to_rat(e: &Expr) -> RatFunc {
    match e {
        Expr::Num(q) => RatFunc::from_q(q.clone()),
        Expr::Irr(i) => RatFunc::from_atom(Atom::Irr(i.clone())),
        Expr::Sym(s) => RatFunc::from_atom(Atom::Sym(s.clone())),
        Expr::Jet(j) => RatFunc::from_atom(Atom::Jet(j.clone())),
        Expr::Sum(items) => {
            let mut acc = RatFunc::zero();
            for it in items.iter() {
                acc = acc.add(&expr_to_rat(it));
            }
            acc
        }
        Expr::Prod(items) => {
            let mut acc = RatFunc::one();
            for it in items.iter() {
                acc = acc.mul(&expr_to_rat(it));
            }
            acc
        }
        Expr::Pow(be) => {
            let base = expr_to_rat(&be.0);
            let erat = expr_to_rat(&be.1);
            match erat.as_constant() {
                Some(q) if q.is_integer() => {
                    let k = q
                        .to_integer()
                        .to_i64()
                        .filter(|k| k.unsigned_abs() <= 4096)
                        .expect("integer exponent too large");
                    if base.is_zero() && k < 0 {
                        // Undefined power kept as an opaque atom so that
                        // symbolic manipulation stays total.
                        return RatFunc::from_atom(Atom::Opaque(
                            Box::new(Expr::int(0)),
                            Box::new(Expr::int(k)),
                        ));
                    }
                    base.pow_int(k)
                }
                Some(q) => {
                    let p = q.numer().to_i64().expect("fractional exponent too large");
                    let den = q.denom().to_u32().expect("root index too large");
                    assert!(den <= 64, "root index too large");
                    frac_pow(&base, p, den)
                }
                None => RatFunc::from_atom(Atom::Opaque(
                    Box::new(rat_to_expr(&base)),
                    Box::new(rat_to_expr(&erat)),
                )),
            }
        }
        Expr::Call(f, args) => {
            let simple: Vec<Expr> = args.iter().map(|a| simplify(a)).collect();
            if *f == Func::Sqrt {
                return frac_pow(&expr_to_rat(&simple[0]), 1, 2);
            }
            if let Some(c) = constant_fold(*f, &simple) {
                return c;
            }
            RatFunc::from_atom(Atom::Call(*f, simple))
        }
    }
}

fn constant_fold(f: Func, args: &[Expr]) -> Option<RatFunc> {
    let a = args.first()?;
    let zero = a.is_zero();
    let one = a.is_one();
    let c = match f {
        Func::Exp if zero => 1,
        Func::Log if one => 0,
        Func::Sin if zero => 0,
        Func::Cos if zero => 1,
        Func::Sinh if zero => 0,
        Func::Cosh if zero => 1,
        Func::Tanh if zero => 0,
        Func::Erf if zero => 0,
        _ => return None,
    };
    Some(RatFunc::from_q(q_int(c)))
}

/// `base^(p/q)` with `gcd(|p|, q) = 1` and `q >= 2`.
fn frac_pow(base: &RatFunc, p: i64, q: u32) -> RatFunc {
    debug_assert!(q >= 2 && p != 0);
    if base.is_zero() {
        if p > 0 {
            return RatFunc::zero();
        }
        return RatFunc::from_atom(Atom::Opaque(
            Box::new(Expr::int(0)),
            Box::new(Expr::Num(Q::new(BigInt::from(p), BigInt::from(q)))),
        ));
    }
    if let Some(c) = base.as_constant() {
        return const_frac_pow(&c, p, q);
    }
    // Denominator-free base: (N/D)^(p/q) = (c * N'/D)^(p/q) with N' the
    // unsigned-primitive part of N; the sign stays inside the root.
    let num = base.num();
    let den = base.den();
    let mut content = num.content_unit();
    if content.is_negative() {
        content = -content;
    }
    let n1 = num.scale(&content.recip());
    let b = n1.mul(&den.pow(q - 1));
    let c_part = const_frac_pow(&content, p, q);
    let root = Atom::Root(b, q);
    let piece = if p > 0 {
        RatFunc::new(
            Poly::term(q_int(1), vec![(root, p as u32)]),
            den.pow(p as u32),
        )
    } else {
        let m = (-p) as u32;
        RatFunc::new(den.pow(m), Poly::term(q_int(1), vec![(root, m)]))
    };
    c_part.mul(&piece)
}

/// Rational constant to the power `p/q`, with q-th power part extraction.
fn const_frac_pow(c: &Q, p: i64, q: u32) -> RatFunc {
    debug_assert!(!c.is_zero());
    if c.is_negative() {
        if q % 2 == 1 {
            let sign = if p % 2 == 0 { 1 } else { -1 };
            return const_frac_pow(&-c.clone(), p, q).scale(&q_int(sign));
        }
        // Even root of a negative rational: undefined over the reals, kept
        // opaque.
        return RatFunc::from_atom(Atom::Opaque(
            Box::new(Expr::Num(c.clone())),
            Box::new(Expr::Num(Q::new(BigInt::from(p), BigInt::from(q)))),
        ));
    }
    let u = c.numer().clone();
    let v = c.denom().clone();
    let m = &u * int_pow(&v, q - 1);
    let (t, rest) = extract_qth_power(&m, q);
    let rat = Q::new(t, v).pow(i32::try_from(p).expect("exponent too large"));
    if rest.is_one() {
        return RatFunc::from_q(rat);
    }
    let surd = if q == 2 {
        Atom::Irr(Irr::Sqrt(rest))
    } else {
        Atom::Root(Poly::from_q(Q::from_integer(rest)), q)
    };
    let piece = if p > 0 {
        RatFunc::from_poly(Poly::term(q_int(1), vec![(surd, p as u32)]))
    } else {
        RatFunc::new(Poly::one(), Poly::term(q_int(1), vec![(surd, (-p) as u32)]))
    };
    piece.scale(&rat)
}

/// Expression tree of a normal form; `rat_to_expr` then `expr_to_rat` is the
/// identity on normal forms.
pub fn rat_to_expr(r: &RatFunc) -> Expr {
    let num = poly_to_expr(r.num());
    if let Some(c) = r.den().as_constant() {
        debug_assert!(c.is_one(), "denominator normalized");
        return num;
    }
    let den = poly_to_expr(r.den());
    Expr::prod(vec![num, Expr::pow(den, Expr::int(-1))])
}

/// Terms in descending monomial order, leading term first.
pub fn poly_to_expr(p: &Poly) -> Expr {
    if p.is_zero() {
        return Expr::int(0);
    }
    let mut parts = Vec::with_capacity(p.term_count());
    for (m, c) in p.terms().collect::<Vec<_>>().into_iter().rev() {
        if m.is_one() {
            parts.push(Expr::Num(c.clone()));
            continue;
        }
        let mut factors = Vec::with_capacity(m.0.len() + 1);
        factors.push(Expr::Num(c.clone()));
        for (a, e) in &m.0 {
            factors.push(atom_to_expr(a, *e));
        }
        parts.push(Expr::prod(factors));
    }
    Expr::sum(parts)
}

fn atom_to_expr(a: &Atom, e: u32) -> Expr {
    let wrap = |x: Expr, e: u32| {
        if e == 1 {
            x
        } else {
            Expr::pow(x, Expr::int(e as i64))
        }
    };
    match a {
        Atom::Irr(i) => wrap(Expr::Irr(i.clone()), e),
        Atom::Sym(s) => wrap(Expr::Sym(s.clone()), e),
        Atom::Jet(j) => wrap(Expr::Jet(j.clone()), e),
        Atom::Call(f, args) => wrap(Expr::call(*f, args.to_vec()), e),
        Atom::Root(b, q) => {
            let base = poly_to_expr(b);
            if *q == 2 && e == 1 {
                Expr::sqrt(base)
            } else {
                Expr::pow(base, Expr::Num(Q::new(BigInt::from(e), BigInt::from(*q))))
            }
        }
        Atom::Opaque(b, ex) => wrap(Expr::pow((**b).clone(), (**ex).clone()), e),
    }
}

/// Normal-form monomial of an expression, if it is a single term.
pub fn as_monomial(e: &Expr) -> Option<(Q, Monomial)> {
    let r = expr_to_rat(e);
    let p = r.as_poly()?;
    if p.term_count() != 1 {
        return None;
    }
    let (m, c) = p.terms().next().unwrap();
    Some((c.clone(), m.clone()))
}
