//! Lie point symmetry machinery: generators, prolongation, determining
//! equations, restriction on a particular solution, and prolongation onto
//! boundary functionals.

pub mod determining;
pub mod flow;
pub mod functional;
pub mod invariance;
pub mod invariant_solution;
pub mod linalg;
pub mod prolong;
pub mod restrict;

use crate::expr::{Expr, SubstMap, Symbol};
use crate::jet::ModelSystem;
use std::collections::BTreeMap;
use std::fmt;

/// Point symmetry generator `X = xi^i d_i + eta^a d_a`. Coordinates absent
/// from the maps are zero. Coordinate expressions may depend on any base
/// variable (independents and order-zero jets of dependents).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    xi: BTreeMap<Symbol, Expr>,
    eta: BTreeMap<Symbol, Expr>,
}

impl Generator {
    pub fn new(label: &str) -> Self {
        Generator {
            label: label.to_string(),
            xi: BTreeMap::new(),
            eta: BTreeMap::new(),
        }
    }

    /// Builds a generator from `(coordinate variable, expression)` pairs,
    /// parsed in the system's context. Each variable must be a declared
    /// independent or dependent of `sys`.
    pub fn parsed(label: &str, sys: &ModelSystem, coords: &[(&str, &str)]) -> Self {
        let mut g = Generator::new(label);
        for (var, src) in coords {
            let e = sys.parse(src).unwrap_or_else(|err| {
                panic!("coordinate {var} of {label}: {err}")
            });
            let s = Symbol::new(var);
            if sys.independents.contains(&s) {
                g.xi.insert(s, e);
            } else if sys.dependents.contains(&s) {
                g.eta.insert(s, e);
            } else {
                panic!("coordinate {var} of {label} is not a variable of {}", sys.name);
            }
        }
        g
    }

    pub fn with_xi(mut self, var: &str, e: Expr) -> Self {
        self.xi.insert(Symbol::new(var), e);
        self
    }

    pub fn with_eta(mut self, var: &str, e: Expr) -> Self {
        self.eta.insert(Symbol::new(var), e);
        self
    }

    pub fn set_xi(&mut self, var: Symbol, e: Expr) {
        self.xi.insert(var, e);
    }

    pub fn set_eta(&mut self, var: Symbol, e: Expr) {
        self.eta.insert(var, e);
    }

    pub fn xi(&self, s: &Symbol) -> Expr {
        self.xi.get(s).cloned().unwrap_or_else(|| Expr::int(0))
    }

    pub fn eta(&self, s: &Symbol) -> Expr {
        self.eta.get(s).cloned().unwrap_or_else(|| Expr::int(0))
    }

    pub fn xi_map(&self) -> &BTreeMap<Symbol, Expr> {
        &self.xi
    }

    pub fn eta_map(&self) -> &BTreeMap<Symbol, Expr> {
        &self.eta
    }

    /// Canonical coordinate `kappa^a = eta^a - xi^i u^a_i` of the dependent
    /// `dep`; the generator in characteristic form is `kappa^a d_a` plus its
    /// prolongation.
    pub fn canonical_coordinate(&self, sys: &ModelSystem, dep: &Symbol) -> Expr {
        let mut k = self.eta(dep);
        for i in &sys.independents {
            let xi = self.xi(i);
            if xi.is_zero() {
                continue;
            }
            let ui = crate::expr::JetVar::new(dep.clone(), vec![i.clone()]);
            k = k - xi * Expr::jet_var(ui);
        }
        k
    }

    pub fn is_zero(&self) -> bool {
        self.xi.values().all(|e| e.simplify().is_zero())
            && self.eta.values().all(|e| e.simplify().is_zero())
    }

    pub fn scale(&self, c: &Expr) -> Generator {
        self.map(|e| (c * e).simplify())
    }

    pub fn add(&self, other: &Generator) -> Generator {
        let mut out = self.clone();
        for (s, e) in &other.xi {
            let cur = out.xi(s);
            out.xi.insert(s.clone(), (cur + e).simplify());
        }
        for (s, e) in &other.eta {
            let cur = out.eta(s);
            out.eta.insert(s.clone(), (cur + e).simplify());
        }
        out
    }

    pub fn subst(&self, map: &SubstMap) -> Generator {
        self.map(|e| e.subst(map))
    }

    pub fn simplified(&self) -> Generator {
        self.map(|e| e.simplify())
    }

    /// Applies `f` to every coordinate, dropping those that become zero.
    pub fn map<F: Fn(&Expr) -> Expr>(&self, f: F) -> Generator {
        let mut out = Generator::new(&self.label);
        for (s, e) in &self.xi {
            let v = f(e);
            if !v.is_zero() {
                out.xi.insert(s.clone(), v);
            }
        }
        for (s, e) in &self.eta {
            let v = f(e);
            if !v.is_zero() {
                out.eta.insert(s.clone(), v);
            }
        }
        out
    }

    pub fn relabel(mut self, label: &str) -> Generator {
        self.label = label.to_string();
        self
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (s, e) in self.xi.iter().chain(self.eta.iter()) {
            if e.is_zero() {
                continue;
            }
            if e.is_one() {
                parts.push(format!("d_{s}"));
            } else {
                parts.push(format!("({e}) d_{s}"));
            }
        }
        if parts.is_empty() {
            return write!(f, "{}: 0", self.label);
        }
        write!(f, "{}: {}", self.label, parts.join(" + "))
    }
}
