//! Infinitesimal invariance of a system under a point generator.
//!
//! The criterion is `X F_j = 0` on the frame, one residual per frame entry.
//! Residuals are reduced modulo the frame and simplified to a canonical
//! rational form, then additionally sampled at random points of jet space as
//! a guard against a wrong symbolic zero (and to size a genuinely nonzero
//! residual). Sampling draws from [0.4, 1.6] so rational coordinates such as
//! a 1/x source term stay away from their poles.

use super::prolong::apply;
use super::Generator;
use crate::expr::eval::{eval, Env};
use crate::expr::poly::Atom;
use crate::expr::simplify::{expr_to_rat, rat_to_expr};
use crate::expr::{Expr, Symbol};
use crate::jet::ModelSystem;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct InvarianceReport {
    /// Frame-reduced, simplified residuals `X F_j` on the frame.
    pub residuals: Vec<Expr>,
    /// Largest |residual| over the random sample points.
    pub max_sampled: f64,
    pub ok: bool,
}

/// Checks `X F = 0` on the frame for every frame entry of `sys`.
pub fn check_invariance(gen: &Generator, sys: &ModelSystem, seed: u64) -> InvarianceReport {
    let mut residuals = Vec::new();
    let mut raw = Vec::new();
    for f in sys.residuals() {
        let r = sys.frame_reduce(&apply(gen, sys, &f));
        residuals.push(r.simplify());
        raw.push(r);
    }
    let symbolic_zero = residuals.iter().all(|r| r.is_zero());
    let max_sampled = sample_magnitude(&raw, seed);
    // The sampled value must agree with the symbolic verdict; a canonical
    // zero that evaluates away from zero would mean the simplifier lied.
    let ok = symbolic_zero && max_sampled < 1e-9;
    InvarianceReport {
        residuals,
        max_sampled,
        ok,
    }
}

/// Largest magnitude of the raw (pre-simplification) residuals over seeded
/// random points. NaN when no point could be evaluated.
fn sample_magnitude(raw: &[Expr], seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max = 0.0f64;
    for e in raw {
        let syms = e.symbols();
        let jets = e.jets();
        let mut done = 0;
        let mut attempts = 0;
        while done < 5 && attempts < 40 {
            attempts += 1;
            let mut env = Env::new();
            for s in &syms {
                env.set_sym(s.name(), rng.gen_range(0.4..1.6));
            }
            for j in &jets {
                env.set_jet_var(j.clone(), rng.gen_range(0.4..1.6));
            }
            match eval(e, &env) {
                Ok(v) => {
                    max = max.max(v.abs());
                    done += 1;
                }
                Err(_) => continue,
            }
        }
        if done == 0 && !e.is_zero() {
            return f64::NAN;
        }
    }
    max
}

/// Symbolic invariance of a scalar expression: `X J = 0` identically (no
/// frame reduction), the defining property of a group invariant.
pub fn is_invariant(gen: &Generator, sys: &ModelSystem, j: &Expr) -> bool {
    apply(gen, sys, j).simplify().is_zero()
}

/// Solves for one unknown generator coordinate `eta^dep` from the invariance
/// conditions, assuming the dependent `dep` enters every frame residual only
/// algebraically (never differentiated). The unknown is then an ordinary
/// linear unknown of the reduced residuals.
///
/// Returns the solved coordinate; fails when the unknown does not occur,
/// occurs nonlinearly, or the solved value leaves some residual nonzero.
pub fn solve_unknown_eta(
    gen: &Generator,
    sys: &ModelSystem,
    dep: &str,
) -> Result<Expr, String> {
    let marker = Symbol::new("__unknown_eta");
    let marker_atom = Atom::Sym(marker.clone());
    let mut g = gen.clone();
    g.set_eta(Symbol::new(dep), Expr::Sym(marker.clone()));

    let mut solution: Option<Expr> = None;
    for f in sys.residuals() {
        let r = sys.frame_reduce(&apply(&g, sys, &f));
        let rat = expr_to_rat(&r);
        if rat.den().has_atom(&marker_atom) {
            return Err("unknown coordinate appears in a denominator".into());
        }
        let num = rat.num();
        match num.degree_in(&marker_atom) {
            0 => continue,
            1 => {}
            d => return Err(format!("unknown coordinate occurs at degree {d}")),
        }
        let p1 = num.coeff_of(&marker_atom, 1);
        let p0 = num.coeff_of(&marker_atom, 0);
        let sol = rat_to_expr(
            &crate::expr::poly::RatFunc::new(p0.neg(), p1),
        );
        if let Some(prev) = &solution {
            if !crate::expr::simplify::equivalent(prev, &sol) {
                return Err("inconsistent invariance conditions".into());
            }
        } else {
            solution = Some(sol);
        }
    }
    let sol = solution.ok_or_else(|| "unknown coordinate does not occur".to_string())?;

    // Re-check the full system with the solved coordinate in place.
    g.set_eta(Symbol::new(dep), sol.clone());
    let report = check_invariance(&g, sys, 0x5eed);
    if !report.ok {
        return Err(format!(
            "solved coordinate leaves a nonzero residual: {}",
            report.residuals[0]
        ));
    }
    Ok(sol)
}
