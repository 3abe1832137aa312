//! Finite group transformations generated by a point generator.
//!
//! [`lie_series`] expands `exp(a X) e` as a Lie series; for nilpotent
//! actions the series terminates and the finite transformation is exact.
//! [`flow_point`] integrates the characteristic system numerically for
//! cross-checks of the symbolic transformations and of the group law.

use super::prolong::apply;
use super::Generator;
use crate::expr::eval::{eval, Env, EvalError};
use crate::expr::{q_int, Expr, Symbol};
use crate::jet::ModelSystem;
use std::collections::BTreeMap;

/// Truncated Lie series `sum_k a^k/k! X^k e` up to `order`.
pub fn lie_series(
    gen: &Generator,
    sys: &ModelSystem,
    e: &Expr,
    param: &Expr,
    order: u32,
) -> Expr {
    let mut total = e.clone();
    let mut term = e.clone();
    let mut fact = q_int(1);
    for k in 1..=order {
        term = apply(gen, sys, &term).simplify();
        if term.is_zero() {
            break;
        }
        fact = fact * q_int(k as i64);
        let coef = Expr::num(q_int(1) / fact.clone());
        total = total + coef * Expr::powi(param.clone(), k as i64) * &term;
    }
    total.simplify()
}

/// Lie series when it terminates within `cap` applications; `None` when the
/// action is not nilpotent on `e` up to that cap.
pub fn lie_series_exact(
    gen: &Generator,
    sys: &ModelSystem,
    e: &Expr,
    param: &Expr,
    cap: u32,
) -> Option<Expr> {
    let mut probe = e.clone();
    for _ in 0..=cap {
        probe = apply(gen, sys, &probe).simplify();
        if probe.is_zero() {
            return Some(lie_series(gen, sys, e, param, cap));
        }
    }
    None
}

/// Integrates the point flow `d(state)/da = (xi, eta)(state)` from `state`
/// over parameter length `a` with `steps` classical Runge-Kutta steps. The
/// state maps every independent and dependent to a value.
pub fn flow_point(
    gen: &Generator,
    sys: &ModelSystem,
    state: &BTreeMap<Symbol, f64>,
    a: f64,
    steps: usize,
) -> Result<BTreeMap<Symbol, f64>, EvalError> {
    let vars: Vec<(Symbol, bool, Expr)> = sys
        .independents
        .iter()
        .map(|s| (s.clone(), true, gen.xi(s)))
        .chain(sys.dependents.iter().map(|s| (s.clone(), false, gen.eta(s))))
        .collect();
    let mut y: Vec<f64> = vars
        .iter()
        .map(|(s, _, _)| {
            *state
                .get(s)
                .unwrap_or_else(|| panic!("flow state is missing {s}"))
        })
        .collect();
    let env_of = |y: &[f64]| {
        let mut env = Env::new();
        for ((s, indep, _), v) in vars.iter().zip(y.iter()) {
            if *indep {
                env.set_sym(s.name(), *v);
            } else {
                env.set_jet(s.name(), &[], *v);
            }
        }
        env
    };
    let rhs = |y: &[f64]| -> Result<Vec<f64>, EvalError> {
        let env = env_of(y);
        vars.iter().map(|(_, _, e)| eval(e, &env)).collect()
    };
    let h = a / steps as f64;
    for _ in 0..steps {
        let k1 = rhs(&y)?;
        let k2 = rhs(&axpy(&y, h / 2.0, &k1))?;
        let k3 = rhs(&axpy(&y, h / 2.0, &k2))?;
        let k4 = rhs(&axpy(&y, h, &k3))?;
        for i in 0..y.len() {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    Ok(vars
        .iter()
        .map(|(s, _, _)| s.clone())
        .zip(y.iter().copied())
        .collect())
}

fn axpy(y: &[f64], h: f64, k: &[f64]) -> Vec<f64> {
    y.iter().zip(k.iter()).map(|(a, b)| a + h * b).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::simplify::equivalent;

    fn hopf() -> ModelSystem {
        ModelSystem::new("hopf", &["z", "x", "eps"], &["u"])
            .with_frame("u_z", "-eps*u*u_x")
    }

    #[test]
    fn nilpotent_series_gives_the_exact_shift() {
        // X = z*u d_x + d_eps: x' = x + a z u, eps' = eps + a, z and u fixed.
        let sys = hopf();
        let g = Generator::parsed("R", &sys, &[("x", "z*u"), ("eps", "1")]);
        let a = Expr::sym("a");
        let x1 = lie_series_exact(&g, &sys, &sys.parse("x").unwrap(), &a, 4).unwrap();
        assert!(equivalent(&x1, &sys.parse("x + a*z*u").unwrap()), "got {x1}");
        let e1 = lie_series_exact(&g, &sys, &sys.parse("eps").unwrap(), &a, 4).unwrap();
        assert!(equivalent(&e1, &sys.parse("eps + a").unwrap()));
        for inv in ["z", "u"] {
            let v = lie_series_exact(&g, &sys, &sys.parse(inv).unwrap(), &a, 4).unwrap();
            assert!(equivalent(&v, &sys.parse(inv).unwrap()));
        }
    }

    #[test]
    fn scaling_series_is_not_nilpotent_but_converges() {
        let sys = hopf();
        let g = Generator::parsed("S", &sys, &[("x", "x")]);
        let a = Expr::sym("a");
        assert!(lie_series_exact(&g, &sys, &sys.parse("x").unwrap(), &a, 8).is_none());
        // Truncated series matches exp(a)*x numerically at small a.
        let s = lie_series(&g, &sys, &sys.parse("x").unwrap(), &a, 12);
        let env = Env::from_syms(&[("a", 0.3), ("x", 1.7)]);
        let got = eval(&s, &env).unwrap();
        assert!((got - 0.3f64.exp() * 1.7).abs() < 1e-12);
    }

    #[test]
    fn numeric_flow_matches_the_exact_shift_and_group_law() {
        let sys = hopf();
        let g = Generator::parsed("R", &sys, &[("x", "z*u"), ("eps", "1")]);
        let mut s0 = BTreeMap::new();
        s0.insert(Symbol::new("z"), 0.8);
        s0.insert(Symbol::new("x"), 1.1);
        s0.insert(Symbol::new("eps"), 0.2);
        s0.insert(Symbol::new("u"), -0.6);
        let a = 0.45;
        let s1 = flow_point(&g, &sys, &s0, a, 64).unwrap();
        assert!((s1[&Symbol::new("x")] - (1.1 + a * 0.8 * -0.6)).abs() < 1e-12);
        assert!((s1[&Symbol::new("eps")] - (0.2 + a)).abs() < 1e-12);
        // Composition in two legs lands at the same point.
        let b = 0.3;
        let s2 = flow_point(&g, &sys, &s1, b, 64).unwrap();
        let direct = flow_point(&g, &sys, &s0, a + b, 64).unwrap();
        for k in s2.keys() {
            assert!((s2[k] - direct[k]).abs() < 1e-12, "{k}");
        }
    }
}
