//! Canonical text rendering. `parse(e.to_string())` recovers the tree for
//! constructor-normalized expressions (with a context that declares the same
//! variables), and printing a simplified expression is deterministic.

use super::poly::{Poly, RatFunc};
use super::simplify::{poly_to_expr, rat_to_expr};
use super::{q_is_one, Expr, Func, Irr, JetVar, Symbol};
use num_traits::Signed;
use std::fmt;

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        if !self.derivs.is_empty() {
            write!(f, "_")?;
            for d in &self.derivs {
                write!(f, "{d}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Irr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Irr::Sqrt(n) => write!(f, "sqrt({n})"),
            Irr::Pi => write!(f, "pi"),
        }
    }
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        w(self, 0, f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", poly_to_expr(self))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", rat_to_expr(self))
    }
}

/// Effective precedence for parenthesization: sums 1, products 2, powers 3,
/// leaves 4. Negative and fractional numbers act like composites.
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Sum(_) => 1,
        Expr::Prod(_) => 2,
        Expr::Pow(_) => 3,
        Expr::Num(q) => {
            if q.is_negative() || !q.is_integer() {
                2
            } else {
                4
            }
        }
        _ => 4,
    }
}

/// Splits a leading minus off a term for sum rendering.
fn neg_split(e: &Expr) -> Option<Expr> {
    match e {
        Expr::Num(q) if q.is_negative() => Some(Expr::Num(-q.clone())),
        Expr::Prod(items) => match items.first() {
            Some(Expr::Num(q)) if q.is_negative() => {
                let mut rest: Vec<Expr> = items.iter().cloned().collect();
                rest[0] = Expr::Num(-q.clone());
                Some(Expr::prod(rest))
            }
            _ => None,
        },
        _ => None,
    }
}

fn w(e: &Expr, parent: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let p = prec(e);
    let parens = p < parent;
    if parens {
        write!(f, "(")?;
    }
    match e {
        Expr::Num(q) => write!(f, "{q}")?,
        Expr::Irr(i) => write!(f, "{i}")?,
        Expr::Sym(s) => write!(f, "{s}")?,
        Expr::Jet(j) => write!(f, "{j}")?,
        Expr::Sum(items) => {
            for (i, t) in items.iter().enumerate() {
                if i == 0 {
                    w(t, 1, f)?;
                } else if let Some(abs) = neg_split(t) {
                    write!(f, " - ")?;
                    w(&abs, 2, f)?;
                } else {
                    write!(f, " + ")?;
                    w(t, 2, f)?;
                }
            }
        }
        Expr::Prod(items) => write_product(items, f)?,
        Expr::Pow(be) => {
            w(&be.0, 4, f)?;
            write!(f, "^")?;
            match &be.1 {
                Expr::Num(q) if q.is_integer() => write!(f, "{q}")?,
                other => w(other, 4, f)?,
            }
        }
        Expr::Call(func, args) => {
            write!(f, "{func}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                w(a, 0, f)?;
            }
            write!(f, ")")?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

/// Coefficient first, then factors joined by `*`; factors with negative
/// integer exponents render as trailing divisions.
fn write_product(items: &[Expr], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut coef: Option<&Expr> = None;
    let mut num_factors: Vec<&Expr> = Vec::new();
    let mut den_factors: Vec<Expr> = Vec::new();
    for it in items {
        match it {
            Expr::Num(_) => coef = Some(it),
            Expr::Pow(be) => match be.1.as_num() {
                Some(q) if q.is_integer() && q.is_negative() => {
                    let k = -q.clone();
                    den_factors.push(Expr::pow(be.0.clone(), Expr::Num(k)));
                }
                _ => num_factors.push(it),
            },
            _ => num_factors.push(it),
        }
    }
    let mut wrote_head = false;
    if let Some(Expr::Num(q)) = coef {
        if q_is_one(&q.abs()) {
            if q.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{q}")?;
            wrote_head = true;
        }
    }
    for nf in &num_factors {
        if wrote_head {
            write!(f, "*")?;
        }
        w(nf, 3, f)?;
        wrote_head = true;
    }
    if !wrote_head {
        write!(f, "1")?;
    }
    for df in &den_factors {
        write!(f, "/")?;
        // `^` binds tighter than `/`, so a bare power needs no parens here.
        w(df, 3, f)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::parse::{parse, parse_with, ParseContext};
    use super::*;

    #[test]
    fn basic_forms() {
        assert_eq!(Expr::sym("x").to_string(), "x");
        assert_eq!(Expr::jet("u", &["x", "x"]).to_string(), "u_xx");
        assert_eq!(Expr::rat(-3, 2).to_string(), "-3/2");
        assert_eq!(Expr::pi().to_string(), "pi");
        let e = Expr::pow(Expr::sym("x"), Expr::int(-2));
        assert_eq!(e.to_string(), "x^-2");
    }

    #[test]
    fn sums_render_subtraction() {
        let e = Expr::sym("x") - Expr::sym("y") - Expr::int(1);
        assert_eq!(e.to_string(), "x - y - 1");
    }

    #[test]
    fn products_and_quotients() {
        let x = Expr::sym("x");
        let y = Expr::sym("y");
        assert_eq!((Expr::rat(3, 2) * &x).to_string(), "3/2*x");
        assert_eq!((-(&x * &y)).to_string(), "-x*y");
        assert_eq!((&x / &y).to_string(), "x/y");
        let e = &x / (&y * &y);
        // x * (y*y)^-1
        assert_eq!(e.to_string(), "x/(y*y)");
        let e2 = &x / Expr::pow(y.clone(), Expr::int(2));
        assert_eq!(e2.to_string(), "x/y^2");
    }

    #[test]
    fn parens_where_needed() {
        let x = Expr::sym("x");
        let y = Expr::sym("y");
        let e = (&x + &y) * &x;
        assert_eq!(e.to_string(), "(x + y)*x");
        let p = Expr::pow(&x + &y, Expr::int(2));
        assert_eq!(p.to_string(), "(x + y)^2");
        let fr = Expr::pow(x.clone(), Expr::rat(1, 2));
        assert_eq!(fr.to_string(), "x^(1/2)");
        let nb = Expr::pow(Expr::int(-2), Expr::sym("k"));
        assert_eq!(nb.to_string(), "(-2)^k");
    }

    #[test]
    fn round_trip_through_parser() {
        let ctx = ParseContext::new(&["x", "z", "eps"], &["u"]);
        let samples = [
            "u_x^2 + eps*u",
            "x - y - 1",
            "3/2*x",
            "x/(y + 1)",
            "cosh(x)^-2",
            "sqrt(2)*pi + exp(-x^2)",
            "u_xx*u_z - eps*u*u_x",
            "x^(1/2)",
        ];
        for s in samples {
            let e = parse_with(s, &ctx).unwrap();
            let printed = e.to_string();
            let back = parse_with(&printed, &ctx).unwrap();
            assert_eq!(e, back, "round trip failed for {s}: printed {printed}");
        }
    }

    #[test]
    fn simplified_output_round_trips_exactly() {
        let ctx = ParseContext::new(&["x", "z", "eps"], &["u"]);
        let e = parse_with("(u_x + u)^2 - u_x^2", &ctx).unwrap().simplify();
        let printed = e.to_string();
        let back = parse_with(&printed, &ctx).unwrap();
        assert_eq!(back.simplify(), e);
        let _ = parse("1").unwrap();
    }
}
