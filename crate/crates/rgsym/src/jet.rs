//! Systems of differential equations as frames on jet space.
//!
//! A [`ModelSystem`] declares independent and dependent variables and a
//! *frame*: the system solved for a set of leading derivatives, one entry per
//! equation, `u_J = rhs` with the right side free of the solved direction.
//! [`ModelSystem::frame_reduce`] rewrites any expression modulo the frame by
//! substituting solved jets (and their derivative extensions) until none
//! remain, which is how "evaluated on the frame" is meant throughout.

use crate::expr::diff::total_derivative_syntactic;
use crate::expr::parse::{parse_with, ParseContext, ParseError};
use crate::expr::{Expr, JetVar, SubstMap, Symbol};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct ModelSystem {
    pub name: String,
    pub independents: Vec<Symbol>,
    pub dependents: Vec<Symbol>,
    frame: BTreeMap<JetVar, Expr>,
}

impl ModelSystem {
    pub fn new(name: &str, independents: &[&str], dependents: &[&str]) -> Self {
        ModelSystem {
            name: name.to_string(),
            independents: independents.iter().map(|s| Symbol::new(s)).collect(),
            dependents: dependents.iter().map(|s| Symbol::new(s)).collect(),
            frame: BTreeMap::new(),
        }
    }

    pub fn parse_ctx(&self) -> ParseContext {
        ParseContext {
            independents: self.independents.clone(),
            dependents: self.dependents.clone(),
        }
    }

    /// Parses in this system's variable context.
    pub fn parse(&self, src: &str) -> Result<Expr, ParseError> {
        parse_with(src, &self.parse_ctx())
    }

    /// Adds a frame entry `lhs = rhs`, both given as source text. The left
    /// side must be a single jet coordinate of a declared dependent whose
    /// right side does not contain the solved jet again.
    pub fn with_frame(mut self, lhs: &str, rhs: &str) -> Self {
        let l = self.parse(lhs).expect("frame lhs parses");
        let r = self.parse(rhs).expect("frame rhs parses");
        let jv = match l {
            Expr::Jet(jv) => jv,
            other => panic!("frame lhs must be a jet coordinate, got {other}"),
        };
        assert!(
            self.dependents.contains(&jv.base),
            "frame lhs base must be a dependent"
        );
        self.frame.insert(jv, r);
        self
    }

    pub fn frame(&self) -> &BTreeMap<JetVar, Expr> {
        &self.frame
    }

    /// Residuals `u_J - rhs`, one per frame entry; zero on solutions.
    pub fn residuals(&self) -> Vec<Expr> {
        self.frame
            .iter()
            .map(|(k, v)| Expr::Jet(k.clone()) - v)
            .collect()
    }

    /// Total derivative along `x`, treating declared dependents as functions
    /// of the independents. Purely syntactic: no frame substitution.
    pub fn total_derivative(&self, e: &Expr, x: &Symbol) -> Expr {
        total_derivative_syntactic(e, x, &self.dependents)
    }

    /// Finds the frame entry whose solved jet divides `j` (same base, deriv
    /// multiset contained in `j`'s) and returns it with the leftover indices.
    fn reducible_by(&self, j: &JetVar) -> Option<(&JetVar, &Expr, Vec<Symbol>)> {
        for (k, v) in &self.frame {
            if k.base != j.base {
                continue;
            }
            if let Some(extra) = multiset_diff(&j.derivs, &k.derivs) {
                return Some((k, v, extra));
            }
        }
        None
    }

    /// Rewrites `e` modulo the frame: every jet that extends a solved jet is
    /// replaced by the corresponding total derivative of the frame right side
    /// until no reducible jet remains. Terminates because each substitution
    /// strictly lowers the count of solved-direction indices.
    pub fn frame_reduce(&self, e: &Expr) -> Expr {
        let mut cur = e.clone();
        loop {
            let jets = cur.jets();
            let mut target = None;
            for j in &jets {
                if let Some((_, v, extra)) = self.reducible_by(j) {
                    target = Some((j.clone(), v.clone(), extra));
                    break;
                }
            }
            let Some((j, v, extra)) = target else {
                return cur;
            };
            let mut repl = v;
            for x in &extra {
                repl = self.total_derivative(&repl, x);
            }
            let mut map = SubstMap::new();
            map.insert(Expr::Jet(j), repl);
            cur = cur.subst(&map);
        }
    }

    /// Frame reduction followed by canonical simplification.
    pub fn frame_reduce_simplified(&self, e: &Expr) -> Expr {
        self.frame_reduce(e).simplify()
    }
}

/// `a` minus `b` as sorted multisets; `None` when `b` is not contained.
fn multiset_diff(a: &[Symbol], b: &[Symbol]) -> Option<Vec<Symbol>> {
    let mut out = Vec::new();
    let mut bi = b.iter().peekable();
    for s in a {
        match bi.peek() {
            Some(t) if *t == s => {
                bi.next();
            }
            _ => out.push(s.clone()),
        }
    }
    if bi.next().is_none() {
        Some(out)
    } else {
        None
    }
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
    fn frame_reduce_first_order() {
        let sys = hopf();
        let e = sys.parse("u_z + eps*u*u_x").unwrap();
        assert!(sys.frame_reduce_simplified(&e).is_zero());
    }

    #[test]
    fn frame_reduce_second_order_in_the_solved_direction() {
        let sys = hopf();
        // u_zz on the frame: eps^2 * (2 u u_x^2 + u^2 u_xx)
        let e = sys.parse("u_zz").unwrap();
        let got = sys.frame_reduce_simplified(&e);
        let want = sys
            .parse("eps^2*(2*u*u_x^2 + u^2*u_xx)")
            .unwrap();
        assert!(equivalent(&got, &want), "got {got}");
    }

    #[test]
    fn frame_reduce_mixed_derivatives() {
        let sys = hopf();
        let e = sys.parse("u_xz").unwrap();
        let got = sys.frame_reduce_simplified(&e);
        let want = sys.parse("-eps*(u_x^2 + u*u_xx)").unwrap();
        assert!(equivalent(&got, &want), "got {got}");
    }

    #[test]
    fn frame_reduce_leaves_free_jets_alone() {
        let sys = hopf();
        let e = sys.parse("u_xx + u_x*u + x").unwrap();
        assert_eq!(sys.frame_reduce(&e), e);
    }

    #[test]
    fn parameter_direction_reduces_too() {
        let sys = hopf();
        // u_zeps = D_eps(-eps u u_x) = -u u_x - eps*(u_eps u_x + u u_xeps)
        let e = sys.parse("u_zeps").unwrap();
        let got = sys.frame_reduce_simplified(&e);
        let want = sys
            .parse("-u*u_x - eps*(u_eps*u_x + u*u_xeps)")
            .unwrap();
        assert!(equivalent(&got, &want), "got {got}");
    }

    #[test]
    fn dependent_field_with_zero_frame_entry() {
        // A dependent declared function of fewer variables: E_v = 0 on the
        // frame kills every extension.
        let sys = ModelSystem::new("vlasov-like", &["t", "x", "v"], &["f", "E"])
            .with_frame("E_v", "0");
        let e = sys.parse("E_vvx + E_v*f").unwrap();
        assert!(sys.frame_reduce_simplified(&e).is_zero());
        let keep = sys.parse("E_x").unwrap();
        assert_eq!(sys.frame_reduce(&keep), keep);
    }

    #[test]
    fn total_derivative_of_invariant_candidate() {
        let sys = hopf();
        let z = Symbol::new("z");
        // D_z(x - eps*u*z) = -eps*u - eps*z*u_z; on the frame this is
        // -eps*u + eps^2*z*u*u_x.
        let e = sys.parse("x - eps*u*z").unwrap();
        let d = sys.total_derivative(&e, &z);
        let want = sys.parse("-eps*u - eps*z*u_z").unwrap();
        assert!(equivalent(&d, &want));
        let on_frame = sys.frame_reduce_simplified(&d);
        let want2 = sys.parse("-eps*u + eps^2*z*u*u_x").unwrap();
        assert!(equivalent(&on_frame, &want2));
    }

    #[test]
    fn residuals_reproduce_the_equations() {
        let sys = hopf();
        let rs = sys.residuals();
        assert_eq!(rs.len(), 1);
        let want = sys.parse("u_z + eps*u*u_x").unwrap();
        assert!(equivalent(&rs[0], &want));
    }
}
