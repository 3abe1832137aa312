//! Differentiation on expression trees.
//!
//! Two entry points: [`diff`] is the partial derivative with respect to one
//! coordinate (a symbol or a jet variable, all others held fixed), and
//! [`total_derivative_syntactic`] is the total derivative along an
//! independent variable, extending the jets of every declared dependent by
//! the chain rule. Both share the same recursion and differ only in how a
//! leaf differentiates.

use super::{Expr, Func, Symbol};

/// Partial derivative with respect to the coordinate `v`, which must be a
/// `Sym` or `Jet` leaf. Every other coordinate is held fixed; in particular
/// `diff(u_x, u) = 0`, as jet coordinates are independent.
pub fn diff(e: &Expr, v: &Expr) -> Expr {
    debug_assert!(
        matches!(v, Expr::Sym(_) | Expr::Jet(_)),
        "can only differentiate by a symbol or jet coordinate"
    );
    derive(e, &|leaf| {
        if leaf == v {
            Expr::int(1)
        } else {
            Expr::int(0)
        }
    })
}

/// Total derivative along `x`: symbols differentiate as usual and every jet
/// of a base listed in `deps` picks up one more `x` index. With an empty
/// `deps` this is the plain partial derivative by the symbol `x`.
pub fn total_derivative_syntactic(e: &Expr, x: &Symbol, deps: &[Symbol]) -> Expr {
    derive(e, &|leaf| match leaf {
        Expr::Sym(s) => {
            if s == x {
                Expr::int(1)
            } else {
                Expr::int(0)
            }
        }
        Expr::Jet(j) => {
            if deps.contains(&j.base) {
                Expr::Jet(j.extend(x))
            } else {
                Expr::int(0)
            }
        }
        _ => Expr::int(0),
    })
}

fn derive(e: &Expr, leaf: &dyn Fn(&Expr) -> Expr) -> Expr {
    match e {
        Expr::Num(_) | Expr::Irr(_) => Expr::int(0),
        Expr::Sym(_) | Expr::Jet(_) => leaf(e),
        Expr::Sum(items) => Expr::sum(items.iter().map(|t| derive(t, leaf)).collect()),
        Expr::Prod(items) => {
            let mut parts = Vec::new();
            for (i, f) in items.iter().enumerate() {
                let df = derive(f, leaf);
                if df.is_zero() {
                    continue;
                }
                let mut fs: Vec<Expr> = items.iter().cloned().collect();
                fs[i] = df;
                parts.push(Expr::prod(fs));
            }
            Expr::sum(parts)
        }
        Expr::Pow(be) => {
            let (b, ex) = (&be.0, &be.1);
            let db = derive(b, leaf);
            let dex = derive(ex, leaf);
            if dex.is_zero() {
                if db.is_zero() {
                    return Expr::int(0);
                }
                Expr::prod(vec![
                    ex.clone(),
                    Expr::pow(b.clone(), ex - Expr::int(1)),
                    db,
                ])
            } else {
                // b^ex * (ex' log b + ex b'/b)
                let t1 = &dex * Expr::log(b.clone());
                let t2 = Expr::prod(vec![ex.clone(), db, Expr::pow(b.clone(), Expr::int(-1))]);
                e.clone() * (t1 + t2)
            }
        }
        Expr::Call(f, args) => {
            let a = &args[0];
            let da = derive(a, leaf);
            if da.is_zero() {
                return Expr::int(0);
            }
            let outer = match f {
                Func::Exp => Expr::exp(a.clone()),
                Func::Log => Expr::pow(a.clone(), Expr::int(-1)),
                Func::Sqrt => Expr::prod(vec![
                    Expr::rat(1, 2),
                    Expr::pow(Expr::sqrt(a.clone()), Expr::int(-1)),
                ]),
                Func::Sin => Expr::call(Func::Cos, vec![a.clone()]),
                Func::Cos => -Expr::call(Func::Sin, vec![a.clone()]),
                Func::Sinh => Expr::call(Func::Cosh, vec![a.clone()]),
                Func::Cosh => Expr::call(Func::Sinh, vec![a.clone()]),
                Func::Tanh => {
                    let t = Expr::call(Func::Tanh, vec![a.clone()]);
                    Expr::int(1) - &t * &t
                }
                Func::Erf => Expr::prod(vec![
                    Expr::int(2),
                    Expr::pow(Expr::pi(), Expr::rat(-1, 2)),
                    Expr::exp(-(a * a)),
                ]),
            };
            outer * da
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::simplify::equivalent;

    #[test]
    fn partial_derivatives_treat_jets_as_coordinates() {
        let eps = Expr::sym("eps");
        let u = Expr::jet("u", &[]);
        let ux = Expr::jet("u", &["x"]);
        let e = &eps * &u * &ux;
        assert!(equivalent(&diff(&e, &ux), &(&eps * &u)));
        assert!(equivalent(&diff(&e, &u), &(&eps * &ux)));
        assert!(diff(&e, &Expr::sym("x")).is_zero());
    }

    #[test]
    fn chain_rule_through_sqrt() {
        let x = Expr::sym("x");
        let e = Expr::sqrt(&x * &x + Expr::int(1));
        let d = diff(&e, &x);
        let want = &x / Expr::sqrt(&x * &x + Expr::int(1));
        assert!(equivalent(&d, &want));
    }

    #[test]
    fn power_rule_with_negative_exponent() {
        let x = Expr::sym("x");
        let e = Expr::pow(x.clone(), Expr::int(-2));
        let d = diff(&e, &x);
        let want = Expr::int(-2) * Expr::pow(x, Expr::int(-3));
        assert!(equivalent(&d, &want));
    }

    #[test]
    fn total_derivative_extends_jets() {
        let z = Symbol::new("z");
        let deps = [Symbol::new("u")];
        // D_z(x - eps*u*z) = -eps*u - eps*z*u_z
        let e = Expr::sym("x") - Expr::sym("eps") * Expr::jet("u", &[]) * Expr::sym("z");
        let d = total_derivative_syntactic(&e, &z, &deps);
        let want = -(Expr::sym("eps") * Expr::jet("u", &[]))
            - Expr::sym("eps") * Expr::sym("z") * Expr::jet("u", &["z"]);
        assert!(equivalent(&d, &want));
    }

    #[test]
    fn total_derivative_chain_through_products() {
        let x = Symbol::new("x");
        let deps = [Symbol::new("u")];
        let u = Expr::jet("u", &[]);
        let d = total_derivative_syntactic(&(&u * &u), &x, &deps);
        let want = Expr::int(2) * &u * Expr::jet("u", &["x"]);
        assert!(equivalent(&d, &want));
    }

    #[test]
    fn erf_derivative_is_gaussian() {
        let x = Expr::sym("x");
        let d = diff(&Expr::call(Func::Erf, vec![x.clone()]), &x);
        let want = Expr::int(2)
            * Expr::pow(Expr::pi(), Expr::rat(-1, 2))
            * Expr::exp(-(&x * &x));
        assert!(equivalent(&d, &want));
    }

    #[test]
    fn symbolic_exponent_uses_logarithmic_rule() {
        let x = Expr::sym("x");
        let y = Expr::sym("y");
        let e = Expr::pow(x.clone(), y.clone());
        let d = diff(&e, &y);
        let want = Expr::pow(x.clone(), y) * Expr::log(x);
        assert!(equivalent(&d, &want));
    }
}
