//! Restriction of an admitted algebra on a particular solution of a
//! boundary value problem.
//!
//! The boundary data picks out the subalgebra whose canonical coordinates
//! vanish on the boundary manifold. Members whose coordinates vanish there
//! identically pass through; the rest are tied by one linear relation per
//! dependent, solved against a pivot member and prolonged off the boundary
//! by rewriting the relation in terms of invariants that restrict to the
//! boundary variables.

use super::Generator;
use crate::expr::diff::diff;
use crate::expr::simplify::equivalent;
use crate::expr::{Expr, SubstMap, Symbol};
use crate::jet::ModelSystem;
use std::collections::BTreeMap;

/// Boundary manifold `var = at` together with the solution data on it.
#[derive(Clone, Debug)]
pub struct BoundaryProfile {
    pub var: Symbol,
    pub at: Expr,
    /// Dependent profiles on the boundary, expressions in the remaining
    /// independents.
    pub profiles: BTreeMap<Symbol, Expr>,
    /// Directions in which the boundary data is flat: any jet carrying one
    /// of these indices vanishes on the boundary (an appended parameter the
    /// data does not depend on).
    pub flat: Vec<Symbol>,
    /// Prolongation off the boundary: boundary variables replaced by the
    /// invariants that restrict to them.
    pub invariant_subst: SubstMap,
}

impl BoundaryProfile {
    pub fn new(sys: &ModelSystem, var: &str, at: &str) -> Self {
        BoundaryProfile {
            var: Symbol::new(var),
            at: sys.parse(at).expect("boundary value parses"),
            profiles: BTreeMap::new(),
            flat: Vec::new(),
            invariant_subst: SubstMap::new(),
        }
    }

    pub fn with_profile(mut self, sys: &ModelSystem, dep: &str, expr: &str) -> Self {
        self.profiles
            .insert(Symbol::new(dep), sys.parse(expr).expect("profile parses"));
        self
    }

    pub fn with_flat(mut self, dir: &str) -> Self {
        self.flat.push(Symbol::new(dir));
        self
    }

    pub fn with_invariant(mut self, sys: &ModelSystem, var: &str, expr: &str) -> Self {
        self.invariant_subst.insert(
            Expr::sym(var),
            sys.parse(expr).expect("invariant parses"),
        );
        self
    }

    /// Value of `e` on the boundary manifold: frame reduction first (the
    /// equations hold up to the boundary), then jets are read off the
    /// profiles, flat directions vanish, and the boundary variable is fixed.
    pub fn eval_on_boundary(&self, sys: &ModelSystem, e: &Expr) -> Expr {
        let r = sys.frame_reduce(e);
        let mut map = SubstMap::new();
        for j in r.jets() {
            if !sys.dependents.contains(&j.base) {
                continue;
            }
            assert!(
                j.count(&self.var) == 0,
                "frame reduction left a {}-derivative in {j}",
                self.var
            );
            let v = if j.derivs.iter().any(|d| self.flat.contains(d)) {
                Expr::int(0)
            } else {
                let prof = self
                    .profiles
                    .get(&j.base)
                    .unwrap_or_else(|| panic!("no boundary profile for {}", j.base));
                let mut p = prof.clone();
                for d in &j.derivs {
                    p = diff(&p, &Expr::Sym(d.clone()));
                }
                p
            };
            map.insert(Expr::Jet(j), v);
        }
        map.insert(Expr::Sym(self.var.clone()), self.at.clone());
        r.subst(&map).simplify()
    }
}

#[derive(Clone, Debug)]
pub struct Restriction {
    /// Members whose canonical coordinates vanish on the boundary as they
    /// stand.
    pub passthrough: Vec<Generator>,
    /// Pivot combinations `X_j + c_j X_p` with the relation coefficient
    /// `c_j` prolonged off the boundary.
    pub combined: Vec<Generator>,
}

impl Restriction {
    pub fn members(&self) -> Vec<Generator> {
        self.passthrough
            .iter()
            .chain(self.combined.iter())
            .cloned()
            .collect()
    }
}

/// Restricts the span of `gens` on the solution described by `profile`.
/// `pivot` names the member eliminated into the others; defaults to the last
/// member with a nonvanishing boundary coordinate.
pub fn restrict_on_solution(
    gens: &[Generator],
    sys: &ModelSystem,
    profile: &BoundaryProfile,
    pivot: Option<&str>,
) -> Result<Restriction, String> {
    let mut passthrough = Vec::new();
    let mut active: Vec<(Generator, Vec<Expr>)> = Vec::new();
    for g in gens {
        let row: Vec<Expr> = sys
            .dependents
            .iter()
            .map(|d| profile.eval_on_boundary(sys, &g.canonical_coordinate(sys, d)))
            .collect();
        if row.iter().all(|b| b.is_zero()) {
            passthrough.push(g.clone());
        } else {
            active.push((g.clone(), row));
        }
    }
    if active.is_empty() {
        return Ok(Restriction {
            passthrough,
            combined: Vec::new(),
        });
    }
    let pidx = match pivot {
        Some(label) => active
            .iter()
            .position(|(g, _)| g.label == label)
            .ok_or_else(|| format!("pivot {label} has no boundary coordinate to solve against"))?,
        None => active.len() - 1,
    };
    let (pg, prow) = active[pidx].clone();
    let mut combined = Vec::new();
    for (j, (g, row)) in active.iter().enumerate() {
        if j == pidx {
            continue;
        }
        let mut ratio: Option<Expr> = None;
        for (b, bp) in row.iter().zip(prow.iter()) {
            match (b.is_zero(), bp.is_zero()) {
                (true, true) => continue,
                (false, true) => {
                    return Err(format!(
                        "{} cannot be solved against pivot {}: pivot coordinate vanishes",
                        g.label, pg.label
                    ))
                }
                _ => {}
            }
            let r = (-b / bp).simplify();
            if let Some(prev) = &ratio {
                if !equivalent(prev, &r) {
                    return Err(format!(
                        "{}: boundary relations disagree between dependents",
                        g.label
                    ));
                }
            } else {
                ratio = Some(r);
            }
        }
        let ratio = ratio.expect("active row has a nonzero entry");
        let prolonged = ratio.subst(&profile.invariant_subst).simplify();
        let r = g
            .add(&pg.scale(&prolonged))
            .relabel(&format!("{}~{}", g.label, pg.label));
        combined.push(r);
    }
    Ok(Restriction {
        passthrough,
        combined,
    })
}
