//! Prolongation of point generators onto boundary functionals.
//!
//! Quantities observed on a section of the solution manifold, such as an
//! on-axis intensity or a velocity moment, are functionals of the fields. A
//! point symmetry of the bulk system acts on them through total derivatives
//! of its canonical coordinates; rewriting that action in the functional's
//! own variables produces a generator for the reduced problem.
//!
//! Closing the rewrite needs structural facts about the section that do not
//! follow from the bulk equations alone: which jets *are* the declared
//! functionals, which vanish by parity of the data, and how the remaining
//! ones read in functional terms (a table derived from the equations on the
//! section). Moments close differently, by integration by parts in the
//! measure variable with decaying data assumed.

use super::Generator;
use crate::expr::poly::Atom;
use crate::expr::simplify::{expr_to_rat, poly_to_expr};
use crate::expr::{Expr, SubstMap, Symbol};
use crate::jet::ModelSystem;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug)]
pub enum FunctionalError {
    /// A jet on the section has no reading in functional terms.
    Unclosed(String),
    /// The prolonged coordinate is not a moment density.
    NotAMoment(String),
}

impl fmt::Display for FunctionalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionalError::Unclosed(j) => {
                write!(f, "no functional reading for {j} on the section")
            }
            FunctionalError::NotAMoment(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for FunctionalError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// A section `dropped = at` of the solution manifold carrying point-value
/// functionals `target(kept) = d^k(dep)/d(dropped)^k` on it.
#[derive(Clone, Debug)]
pub struct SectionSetup {
    pub kept: Vec<Symbol>,
    pub dropped: Symbol,
    pub at: Expr,
    defs: BTreeMap<(Symbol, usize), Symbol>,
    parity: BTreeMap<Symbol, Parity>,
    table: BTreeMap<(Symbol, usize), Expr>,
}

impl SectionSetup {
    pub fn new(sys: &ModelSystem, dropped: &str, at: &str) -> Self {
        let dropped = Symbol::new(dropped);
        let kept = sys
            .independents
            .iter()
            .filter(|s| **s != dropped)
            .cloned()
            .collect();
        SectionSetup {
            kept,
            dropped,
            at: sys.parse(at).expect("section value parses"),
            defs: BTreeMap::new(),
            parity: BTreeMap::new(),
            table: BTreeMap::new(),
        }
    }

    /// Declares the functional `target = d^order(dep)/d(dropped)^order` on
    /// the section.
    pub fn define(mut self, dep: &str, order: usize, target: &str) -> Self {
        self.defs
            .insert((Symbol::new(dep), order), Symbol::new(target));
        self
    }

    /// Declares `dep` odd or even in the dropped variable about the section,
    /// zeroing the jets the parity kills.
    pub fn with_parity(mut self, dep: &str, p: Parity) -> Self {
        self.parity.insert(Symbol::new(dep), p);
        self
    }

    /// Supplies the section value of `d^order(dep)/d(dropped)^order` as an
    /// expression in the functionals, parsed in the reduced system. Declare
    /// the functionals first.
    pub fn with_table(mut self, dep: &str, order: usize, src: &str) -> Self {
        let e = self
            .reduced_system("section")
            .parse(src)
            .expect("table entry parses");
        self.table.insert((Symbol::new(dep), order), e);
        self
    }

    /// The reduced problem: kept variables independent, functionals
    /// dependent, no frame.
    pub fn reduced_system(&self, name: &str) -> ModelSystem {
        let kept: Vec<&str> = self.kept.iter().map(|s| s.name()).collect();
        let deps: Vec<&str> = self.defs.values().map(|s| s.name()).collect();
        ModelSystem::new(name, &kept, &deps)
    }

    /// Rewrites a bulk expression on the section in functional terms.
    pub fn axis_map(&self, sys: &ModelSystem, e: &Expr) -> Result<Expr, FunctionalError> {
        let reduced = self.reduced_system("section");
        let mut map = SubstMap::new();
        for j in e.jets() {
            if !sys.dependents.contains(&j.base) {
                continue;
            }
            let k = j.count(&self.dropped);
            let kept_part: Vec<&Symbol> =
                j.derivs.iter().filter(|d| **d != self.dropped).collect();
            let key = (j.base.clone(), k);
            let v = if let Some(target) = self.defs.get(&key) {
                Expr::jet_var(crate::expr::JetVar::new(
                    target.clone(),
                    kept_part.iter().map(|s| (*s).clone()).collect(),
                ))
            } else if self.parity_kills(&j.base, k) {
                Expr::int(0)
            } else if let Some(t) = self.table.get(&key) {
                let mut v = t.clone();
                for d in kept_part {
                    v = reduced.total_derivative(&v, d);
                }
                v
            } else {
                return Err(FunctionalError::Unclosed(j.to_string()));
            };
            map.insert(Expr::Jet(j), v);
        }
        map.insert(Expr::Sym(self.dropped.clone()), self.at.clone());
        Ok(e.subst(&map).simplify())
    }

    fn parity_kills(&self, dep: &Symbol, dropped_order: usize) -> bool {
        match self.parity.get(dep) {
            Some(Parity::Odd) => dropped_order % 2 == 0,
            Some(Parity::Even) => dropped_order % 2 == 1,
            None => false,
        }
    }
}

/// Prolongs `gen` onto the section functionals: the canonical coordinate of
/// each source dependent is carried to the functional's derivative order,
/// read on the section, and de-canonicalized in the reduced variables.
pub fn prolong_to_section(
    gen: &Generator,
    sys: &ModelSystem,
    setup: &SectionSetup,
) -> Result<Generator, FunctionalError> {
    let mut out = Generator::new(&format!("{}^", gen.label));
    let mut kept_xi = BTreeMap::new();
    for i in &setup.kept {
        let xi = setup.axis_map(sys, &gen.xi(i))?;
        if !xi.is_zero() {
            out.set_xi(i.clone(), xi.clone());
        }
        kept_xi.insert(i.clone(), xi);
    }
    for ((dep, order), target) in &setup.defs {
        let kappa = gen.canonical_coordinate(sys, dep);
        let mut d = kappa;
        for _ in 0..*order {
            d = sys.total_derivative(&d, &setup.dropped);
        }
        let mut eta = setup.axis_map(sys, &d)?;
        for i in &setup.kept {
            let ti = Expr::jet_var(crate::expr::JetVar::new(
                target.clone(),
                vec![i.clone()],
            ));
            eta = eta + &kept_xi[i] * ti;
        }
        let eta = eta.simplify();
        if !eta.is_zero() {
            out.set_eta(target.clone(), eta);
        }
    }
    Ok(out)
}

/// A zeroth velocity moment `target(kept) = integral of source over the
/// measure variable`, with the distribution decaying at large measure.
#[derive(Clone, Debug)]
pub struct MomentSetup {
    pub measure: Symbol,
    pub source: Symbol,
    pub target: Symbol,
}

impl MomentSetup {
    pub fn new(measure: &str, source: &str, target: &str) -> Self {
        MomentSetup {
            measure: Symbol::new(measure),
            source: Symbol::new(source),
            target: Symbol::new(target),
        }
    }
}

/// Prolongs `gen` onto the moment: the canonical coordinate of the source,
/// linear in source jets, is integrated by parts in the measure variable
/// until no measure derivatives remain; coefficients must then be free of
/// the measure or the closure fails. De-canonicalization uses the kept part
/// of the generator, which must not involve the measure either.
pub fn prolong_to_moment(
    gen: &Generator,
    sys: &ModelSystem,
    setup: &MomentSetup,
) -> Result<Generator, FunctionalError> {
    // The coordinate is kept unreduced: `n_t` is the moment of `f_t`, so
    // the rewrite is a jet-space identity term by term.
    let kappa = gen.canonical_coordinate(sys, &setup.source);
    let rat = expr_to_rat(&kappa);
    let source_jet = |a: &Atom| matches!(a, Atom::Jet(j) if j.base == setup.source);
    for a in rat.den().atoms() {
        if source_jet(&a) {
            return Err(FunctionalError::NotAMoment(
                "source jets in a denominator".into(),
            ));
        }
    }
    let den = poly_to_expr(rat.den());
    let mut total = Expr::int(0);
    for (mon, coeff) in rat.num().split_by(source_jet) {
        if mon.is_one() {
            if !coeff.is_zero() {
                return Err(FunctionalError::NotAMoment(
                    "coordinate has a source-free part".into(),
                ));
            }
            continue;
        }
        let [(Atom::Jet(j), 1)] = &mon.0[..] else {
            return Err(FunctionalError::NotAMoment(
                "coordinate is not linear in the source".into(),
            ));
        };
        let m = j.count(&setup.measure);
        let rest: Vec<Symbol> = j
            .derivs
            .iter()
            .filter(|d| **d != setup.measure)
            .cloned()
            .collect();
        // integral of c * f_{v^m, rest} dv = (-1)^m integral of (d^m c/dv^m) f_rest
        let mut c = poly_to_expr(&coeff) / &den;
        for _ in 0..m {
            c = sys.frame_reduce(&sys.total_derivative(&c, &setup.measure));
        }
        if m % 2 == 1 {
            c = -c;
        }
        let c = c.simplify();
        if depends_on_measure(&c, &setup.measure) {
            return Err(FunctionalError::NotAMoment(format!(
                "moment closure needs a higher moment: coefficient {c} keeps the measure"
            )));
        }
        total = total + c * Expr::jet_var(crate::expr::JetVar::new(setup.target.clone(), rest));
    }
    // De-canonicalize on the kept independents.
    let mut out = Generator::new(&format!("{}^", gen.label));
    let mut eta = total;
    for i in sys.independents.iter().filter(|i| **i != setup.measure) {
        let xi = gen.xi(i);
        if depends_on_measure(&xi, &setup.measure) {
            return Err(FunctionalError::NotAMoment(format!(
                "kept coordinate for {i} involves the measure"
            )));
        }
        if !xi.is_zero() {
            out.set_xi(i.clone(), xi.clone());
            eta = eta
                + xi * Expr::jet_var(crate::expr::JetVar::new(
                    setup.target.clone(),
                    vec![i.clone()],
                ));
        }
    }
    let eta = eta.simplify();
    if !eta.is_zero() {
        out.set_eta(setup.target.clone(), eta);
    }
    Ok(out)
}

fn depends_on_measure(e: &Expr, v: &Symbol) -> bool {
    e.symbols().contains(v) || e.jets().iter().any(|j| j.count(v) > 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::simplify::equivalent;

    fn gen_eq(a: &Generator, b: &Generator, vars: &[&str], deps: &[&str]) -> bool {
        vars.iter()
            .map(|s| (a.xi(&Symbol::new(s)), b.xi(&Symbol::new(s))))
            .chain(
                deps.iter()
                    .map(|s| (a.eta(&Symbol::new(s)), b.eta(&Symbol::new(s)))),
            )
            .all(|(x, y)| equivalent(&x, &y))
    }

    #[test]
    fn hopf_slope_functional() {
        // u_x(z, 0) for linear data: z u d_x + d_eps prolongs to
        // d_eps - z (w)^2 d_w on {z, eps, w}, the jet u_epsx cancelling
        // between the canonical coordinate and de-canonicalization.
        let sys = ModelSystem::new("hopf", &["z", "x", "eps"], &["u"])
            .with_frame("u_z", "-eps*u*u_x");
        let g = Generator::parsed("R3", &sys, &[("x", "z*u"), ("eps", "1")]);
        let setup = SectionSetup::new(&sys, "x", "0")
            .define("u", 1, "w")
            .with_parity("u", Parity::Odd);
        let got = prolong_to_section(&g, &sys, &setup).unwrap();
        let red = setup.reduced_system("r");
        let want = Generator::parsed("R4", &red, &[("eps", "1"), ("w", "-z*w^2")]);
        assert!(
            gen_eq(&got, &want, &["z", "eps"], &["w"]),
            "got {got}"
        );
    }

    #[test]
    fn section_table_closes_higher_jets() {
        // Even data with a known second derivative on the section:
        // u_xx(z, 0) = q(z)^2 closes u_xxz via the reduced total derivative.
        let sys = ModelSystem::new("m", &["z", "x"], &["u"]);
        let setup = SectionSetup::new(&sys, "x", "0")
            .define("u", 0, "q")
            .with_parity("u", Parity::Even)
            .with_table("u", 2, "q^2");
        let e = sys.parse("u_x + u_xx*x + u_xxz + u*u_z").unwrap();
        let got = setup.axis_map(&sys, &e).unwrap();
        // u_x drops by parity, u_xx*x drops with x = 0, u_xxz maps to
        // D_z(q^2) = 2 q q_z, and u u_z maps to q q_z.
        let red = setup.reduced_system("r");
        let want = red.parse("2*q*q_z + q*q_z").unwrap();
        assert!(equivalent(&got, &want), "got {got}");
    }

    #[test]
    fn unclosed_jet_is_reported() {
        let sys = ModelSystem::new("m", &["z", "x"], &["u"]);
        let setup = SectionSetup::new(&sys, "x", "0").define("u", 0, "q");
        let e = sys.parse("u_x").unwrap();
        assert!(matches!(
            setup.axis_map(&sys, &e),
            Err(FunctionalError::Unclosed(_))
        ));
    }

    #[test]
    fn density_moment_of_a_phase_space_rotation() {
        // Kinetic free motion with a linear force field: the projective
        // generator prolongs onto the density with coordinate -W^2 t n.
        let sys = ModelSystem::new(
            "kin",
            &["t", "x", "v"],
            &["f", "E"],
        )
        .with_frame("f_t", "-v*f_x - E*f_v")
        .with_frame("E_v", "0");
        let g = Generator::parsed(
            "R6",
            &sys,
            &[
                ("t", "1 + W^2*t^2"),
                ("x", "W^2*t*x"),
                ("v", "W^2*(x - v*t)"),
                ("E", "-3*W^2*t*E"),
            ],
        );
        let setup = MomentSetup::new("v", "f", "n");
        let got = prolong_to_moment(&g, &sys, &setup).unwrap();
        let red = ModelSystem::new("moments", &["t", "x"], &["n"]);
        let want = Generator::parsed(
            "R7",
            &red,
            &[("t", "1 + W^2*t^2"), ("x", "W^2*t*x"), ("n", "-W^2*t*n")],
        );
        assert!(gen_eq(&got, &want, &["t", "x"], &["n"]), "got {got}");
    }

    #[test]
    fn moment_closure_failure_is_detected() {
        // A v-quadratic velocity coordinate leaves v in the coefficient
        // after one integration by parts: needs a higher moment.
        let sys = ModelSystem::new("kin", &["t", "x", "v"], &["f"])
            .with_frame("f_t", "-v*f_x");
        let g = Generator::parsed("B", &sys, &[("v", "v^2")]);
        let setup = MomentSetup::new("v", "f", "n");
        assert!(matches!(
            prolong_to_moment(&g, &sys, &setup),
            Err(FunctionalError::NotAMoment(_))
        ));
    }
}
