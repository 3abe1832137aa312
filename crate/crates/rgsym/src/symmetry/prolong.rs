//! Prolongation of point generators onto jet coordinates.
//!
//! The prolonged coefficient for the jet coordinate `u^a_J` is computed two
//! ways: the classical recursion
//! `zeta^a_{J,i} = D_i zeta^a_J - u^a_{J,j} D_i xi^j`
//! and the canonical route
//! `zeta^a_J = D_J kappa^a + xi^j u^a_{J,j}`
//! with `kappa^a = eta^a - xi^i u^a_i`. They agree identically, which the
//! tests exploit as a cross-check of the total-derivative machinery.

use super::Generator;
use crate::expr::diff::diff;
use crate::expr::{Expr, JetVar};
use crate::jet::ModelSystem;
use std::collections::HashMap;

/// Prolonged coefficient of `d/d(u^a_J)` via the classical recursion.
pub fn zeta(gen: &Generator, sys: &ModelSystem, jet: &JetVar) -> Expr {
    let mut memo = HashMap::new();
    zeta_memo(gen, sys, jet, &mut memo)
}

fn zeta_memo(
    gen: &Generator,
    sys: &ModelSystem,
    jet: &JetVar,
    memo: &mut HashMap<JetVar, Expr>,
) -> Expr {
    if jet.derivs.is_empty() {
        return gen.eta(&jet.base);
    }
    if let Some(e) = memo.get(jet) {
        return e.clone();
    }
    // Peel the last index; mixed partials commute, so the split is arbitrary.
    let mut parent_derivs = jet.derivs.clone();
    let i = parent_derivs.pop().expect("non-empty");
    let parent = JetVar {
        base: jet.base.clone(),
        derivs: parent_derivs,
    };
    let zp = zeta_memo(gen, sys, &parent, memo);
    let mut out = sys.total_derivative(&zp, &i);
    for j in &sys.independents {
        let xi = gen.xi(j);
        if xi.is_zero() {
            continue;
        }
        out = out - Expr::jet_var(parent.extend(j)) * sys.total_derivative(&xi, &i);
    }
    let out = out.simplify();
    memo.insert(jet.clone(), out.clone());
    out
}

/// Prolonged coefficient via the canonical coordinate.
pub fn zeta_canonical(gen: &Generator, sys: &ModelSystem, jet: &JetVar) -> Expr {
    let mut d = gen.canonical_coordinate(sys, &jet.base);
    for i in &jet.derivs {
        d = sys.total_derivative(&d, i);
    }
    for j in &sys.independents {
        let xi = gen.xi(j);
        if xi.is_zero() {
            continue;
        }
        d = d + xi * Expr::jet_var(jet.extend(j));
    }
    d
}

/// Action of the prolonged generator on an expression over jet space:
/// `X e = xi^i de/dx^i + zeta^a_J de/du^a_J`, partial derivatives taken with
/// jets as independent coordinates.
pub fn apply(gen: &Generator, sys: &ModelSystem, e: &Expr) -> Expr {
    let mut out = Expr::int(0);
    for i in &sys.independents {
        let xi = gen.xi(i);
        if xi.is_zero() {
            continue;
        }
        let de = diff(e, &Expr::Sym(i.clone()));
        if !de.is_zero() {
            out = out + xi * de;
        }
    }
    let mut memo = HashMap::new();
    for j in e.jets() {
        if !sys.dependents.contains(&j.base) {
            continue;
        }
        let de = diff(e, &Expr::Jet(j.clone()));
        if de.is_zero() {
            continue;
        }
        let z = zeta_memo(gen, sys, &j, &mut memo);
        if !z.is_zero() {
            out = out + z * de;
        }
    }
    out
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
    fn first_prolongation_of_a_scaling() {
        // X = x d_x on (x, u) space: zeta_x = -u_x.
        let sys = ModelSystem::new("s", &["x"], &["u"]);
        let g = Generator::parsed("X", &sys, &[("x", "x")]);
        let jx = JetVar::new("u".into(), vec!["x".into()]);
        let got = zeta(&g, &sys, &jx);
        let want = sys.parse("-u_x").unwrap();
        assert!(equivalent(&got, &want), "got {got}");
    }

    #[test]
    fn galilean_style_prolongation_with_u_dependent_shift() {
        // X = d_z + eps*u d_x on the extended Hopf space.
        let sys = hopf();
        let g = Generator::parsed("X1", &sys, &[("z", "1"), ("x", "eps*u")]);
        let jz = JetVar::new("u".into(), vec!["z".into()]);
        let jx = JetVar::new("u".into(), vec!["x".into()]);
        let zz = zeta(&g, &sys, &jz);
        let zx = zeta(&g, &sys, &jx);
        assert!(equivalent(&zz, &sys.parse("-eps*u_z*u_x").unwrap()), "zeta_z {zz}");
        assert!(equivalent(&zx, &sys.parse("-eps*u_x^2").unwrap()), "zeta_x {zx}");
    }

    #[test]
    fn canonical_and_recursive_routes_agree() {
        let sys = hopf();
        // Coordinates depending on several base variables to exercise the
        // recursion properly.
        let g = Generator::parsed(
            "G",
            &sys,
            &[("z", "z*u"), ("x", "x - eps*u*z"), ("eps", "eps*u"), ("u", "u^2 + x")],
        );
        for derivs in [
            vec!["x"],
            vec!["z"],
            vec!["eps"],
            vec!["x", "x"],
            vec!["x", "z"],
            vec!["x", "x", "z"],
            vec!["eps", "x", "z"],
        ] {
            let jv = JetVar::new("u".into(), derivs.iter().map(|s| (*s).into()).collect());
            let a = zeta(&g, &sys, &jv);
            let b = zeta_canonical(&g, &sys, &jv);
            assert!(equivalent(&a, &b), "mismatch at {jv}");
        }
    }

    #[test]
    fn apply_differentiates_explicit_and_jet_parts() {
        let sys = hopf();
        let g = Generator::parsed("X4", &sys, &[("eps", "eps"), ("x", "x")]);
        // X4 annihilates the equation residual on all of jet space.
        let f = sys.parse("u_z + eps*u*u_x").unwrap();
        let got = apply(&g, &sys, &f).simplify();
        assert!(got.is_zero(), "got {got}");
    }
}
