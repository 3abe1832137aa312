//! Solutions defined implicitly by group invariants.
//!
//! A renormgroup symmetry of a boundary value problem determines the
//! solution through an algebraic relation between invariants, typically of
//! the shape `u - U(invariant) = 0` with `U` the boundary data. The relation
//! rarely resolves in closed form, so evaluation is a bracketed root solve
//! in the unknown with everything else bound.

use crate::expr::eval::{eval, Env};
use crate::expr::simplify::is_zero_expr;
use crate::expr::Expr;
use crate::jet::ModelSystem;
use crate::numerics::root::{brent, RootError};
use crate::symmetry::invariance::is_invariant;
use crate::symmetry::Generator;

#[derive(Clone, Debug)]
pub struct ImplicitSolution {
    /// Relation that vanishes on the solution manifold.
    pub relation: Expr,
    /// The coordinate solved for, a symbol or an order-zero jet.
    pub unknown: Expr,
}

impl ImplicitSolution {
    pub fn new(relation: Expr, unknown: Expr) -> Self {
        ImplicitSolution { relation, unknown }
    }

    /// Confirms the relation is built from invariants of `gen`: the series
    /// of the relation along the generator flow is stationary.
    pub fn is_invariant_relation(&self, gen: &Generator, sys: &ModelSystem) -> bool {
        is_invariant(gen, sys, &self.relation)
    }

    /// Residual with the unknown bound to `value` and the rest taken from
    /// `env`.
    pub fn residual(&self, env: &Env, value: f64) -> Result<f64, String> {
        let mut env = env.clone();
        self.bind(&mut env, value);
        eval(&self.relation, &env).map_err(|e| e.to_string())
    }

    /// Solves the relation for the unknown over the bracket `[lo, hi]`.
    pub fn solve(&self, env: &Env, lo: f64, hi: f64, xtol: f64) -> Result<f64, RootError> {
        let f = |v: f64| {
            let mut env = env.clone();
            self.bind(&mut env, v);
            eval(&self.relation, &env).unwrap_or(f64::NAN)
        };
        brent(f, lo, hi, xtol)
    }

    fn bind(&self, env: &mut Env, value: f64) {
        match &self.unknown {
            Expr::Sym(s) => {
                env.set_sym(s.name(), value);
            }
            Expr::Jet(j) => {
                env.set_jet_var(j.clone(), value);
            }
            other => panic!("unknown must be a symbol or jet, got {other}"),
        }
    }
}

/// Residual of a candidate solution substituted into an equation residual:
/// zero when `subst` maps every frame jet consistently.
pub fn verify_on_equations(sys: &ModelSystem, subst: &crate::expr::SubstMap) -> bool {
    sys.residuals()
        .iter()
        .all(|f| is_zero_expr(&f.subst(subst)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::SubstMap;

    fn hopf() -> ModelSystem {
        ModelSystem::new("hopf", &["z", "x", "eps"], &["u"])
            .with_frame("u_z", "-eps*u*u_x")
    }

    #[test]
    fn linear_data_solves_in_closed_form_and_matches_the_root_solve() {
        // u = U(x - eps u z) with U(s) = -s resolves to u = -x/(1 - eps z).
        let sys = hopf();
        let rel = sys.parse("u + (x - eps*u*z)").unwrap();
        let sol = ImplicitSolution::new(rel, sys.parse("u").unwrap());
        let g = Generator::parsed("R3", &sys, &[("x", "z*u"), ("eps", "1")]);
        assert!(sol.is_invariant_relation(&g, &sys));
        let env = Env::from_syms(&[("z", 0.7), ("x", 0.9), ("eps", 0.5)]);
        let got = sol.solve(&env, -10.0, 10.0, 1e-14).unwrap();
        let want = -0.9 / (1.0 - 0.5 * 0.7);
        assert!((got - want).abs() < 1e-12);
        assert!(sol.residual(&env, got).unwrap().abs() < 1e-12);
    }

    #[test]
    fn closed_form_substitution_satisfies_the_equation() {
        // u = -x/(1 - eps z): check u_z and u_x against the frame.
        let sys = hopf();
        let u = sys.parse("-x/(1 - eps*z)").unwrap();
        let uz = crate::expr::diff::diff(&u, &Expr::sym("z"));
        let ux = crate::expr::diff::diff(&u, &Expr::sym("x"));
        let mut map = SubstMap::new();
        map.insert(sys.parse("u_z").unwrap(), uz);
        map.insert(sys.parse("u_x").unwrap(), ux);
        map.insert(sys.parse("u").unwrap(), u);
        assert!(verify_on_equations(&sys, &map));
    }
}
