//! Determining equations for Lie point symmetries.
//!
//! The invariance criterion `X F = 0` on the frame, with polynomial ansatz
//! coordinates, splits by monomials in the jet-space variables into a
//! homogeneous linear system for the ansatz coefficients. The admitted
//! algebra inside the ansatz is the null space of that system.
//!
//! Coefficients live in the field Q(params): symbols listed as parameters
//! (and exact irrational constants) are never split over, so systems whose
//! equations carry free constants are solved once for generic values.

use super::linalg;
use super::prolong::apply;
use super::Generator;
use crate::expr::poly::{Atom, Monomial, Poly, RatFunc};
use crate::expr::simplify::{expr_to_rat, rat_to_expr};
use crate::expr::{Expr, Symbol};
use crate::jet::ModelSystem;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Polynomial ansatz for one generator coordinate: all monomials of total
/// degree at most `degree` in `vars`.
#[derive(Clone, Debug)]
pub struct AnsatzSpec {
    pub vars: Vec<Expr>,
    pub degree: u32,
}

impl AnsatzSpec {
    pub fn new(sys: &ModelSystem, vars: &[&str], degree: u32) -> Self {
        let vars = vars
            .iter()
            .map(|v| sys.parse(v).expect("ansatz variable parses"))
            .collect();
        AnsatzSpec { vars, degree }
    }

    pub fn constant() -> Self {
        AnsatzSpec {
            vars: Vec::new(),
            degree: 0,
        }
    }

    /// Monomial basis, the constant 1 first.
    pub fn monomials(&self) -> Vec<Expr> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.vars.len()];
        enumerate(&mut out, &self.vars, &mut exps, 0, self.degree);
        out
    }
}

fn enumerate(out: &mut Vec<Expr>, vars: &[Expr], exps: &mut Vec<u32>, at: usize, budget: u32) {
    if at == vars.len() {
        let mut m = Expr::int(1);
        for (v, &e) in vars.iter().zip(exps.iter()) {
            if e > 0 {
                m = m * Expr::pow(v.clone(), Expr::int(e as i64));
            }
        }
        out.push(m);
        return;
    }
    for e in 0..=budget {
        exps[at] = e;
        enumerate(out, vars, exps, at + 1, budget - e);
        exps[at] = 0;
    }
}

#[derive(Clone, Debug)]
pub struct DeterminingSolution {
    pub basis: Vec<Generator>,
    /// Number of ansatz coefficients.
    pub unknowns: usize,
    /// Rank of the split determining system.
    pub independent_conditions: usize,
}

impl DeterminingSolution {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Solves the determining system inside the given per-coordinate ansatz.
/// `ansatz` pairs a coordinate variable of `sys` with its spec; coordinates
/// not listed are identically zero. `params` are field constants.
pub fn solve_determining(
    sys: &ModelSystem,
    ansatz: &[(&str, AnsatzSpec)],
    params: &[&str],
) -> DeterminingSolution {
    let params: BTreeSet<Symbol> = params.iter().map(|p| Symbol::new(p)).collect();
    let mut unknowns: Vec<Symbol> = Vec::new();
    let mut layout: Vec<(Symbol, Vec<Expr>, usize)> = Vec::new();
    let mut gen = Generator::new("ansatz");
    for (var, spec) in ansatz {
        let s = Symbol::new(var);
        let mons = spec.monomials();
        let offset = unknowns.len();
        let mut acc = Expr::int(0);
        for m in &mons {
            let c = Symbol::new(&format!("c{}", unknowns.len()));
            acc = acc + Expr::Sym(c.clone()) * m;
            unknowns.push(c);
        }
        if sys.independents.contains(&s) {
            gen.set_xi(s.clone(), acc);
        } else if sys.dependents.contains(&s) {
            gen.set_eta(s.clone(), acc);
        } else {
            panic!("ansatz coordinate {var} is not a variable of {}", sys.name);
        }
        layout.push((s, mons, offset));
    }
    let unknown_set: BTreeSet<Symbol> = unknowns.iter().cloned().collect();

    let mut rows = Vec::new();
    for f in sys.residuals() {
        let r = sys.frame_reduce(&apply(&gen, sys, &f));
        let rat = expr_to_rat(&r);
        for a in rat.den().atoms() {
            if let Atom::Sym(s) = &a {
                assert!(
                    !unknown_set.contains(s),
                    "ansatz coefficient in a denominator"
                );
            }
        }
        let split = rat.num().split_by(|a| is_jet_space_atom(a, &unknown_set, &params));
        for (_, coeff) in split {
            rows.push(linear_row(&coeff, &unknowns, &unknown_set));
        }
    }

    let ns = linalg::null_space(&rows, unknowns.len());
    let independent_conditions = unknowns.len() - ns.len();
    let mut basis = Vec::new();
    for (k, v) in ns.iter().enumerate() {
        let v = normalize_vector(v);
        let mut g = Generator::new(&format!("G{}", k + 1));
        for (var, mons, offset) in &layout {
            let mut acc = Expr::int(0);
            for (i, m) in mons.iter().enumerate() {
                let c = &v[offset + i];
                if c.is_zero() {
                    continue;
                }
                acc = acc + rat_to_expr(c) * m;
            }
            let acc = acc.simplify();
            if acc.is_zero() {
                continue;
            }
            if sys.independents.contains(var) {
                g.set_xi(var.clone(), acc);
            } else {
                g.set_eta(var.clone(), acc);
            }
        }
        basis.push(g);
    }
    DeterminingSolution {
        basis,
        unknowns: unknowns.len(),
        independent_conditions,
    }
}

/// Atoms the residual is split over: jet coordinates and any symbol that is
/// neither an ansatz coefficient nor a declared parameter. Parameters and
/// exact irrational constants stay in the coefficient field.
fn is_jet_space_atom(a: &Atom, unknowns: &BTreeSet<Symbol>, params: &BTreeSet<Symbol>) -> bool {
    match a {
        Atom::Sym(s) => !unknowns.contains(s) && !params.contains(s),
        Atom::Irr(_) => false,
        _ => true,
    }
}

/// Reads one split coefficient, linear homogeneous in the unknowns, into a
/// row over Q(params).
fn linear_row(p: &Poly, unknowns: &[Symbol], unknown_set: &BTreeSet<Symbol>) -> Vec<RatFunc> {
    let index: BTreeMap<&Symbol, usize> =
        unknowns.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut row = vec![RatFunc::zero(); unknowns.len()];
    let parts = p.split_by(|a| match a {
        Atom::Sym(s) => unknown_set.contains(s),
        _ => false,
    });
    for (mon, coeff) in parts {
        if mon.is_one() {
            panic!("determining condition is not homogeneous: {coeff}");
        }
        match &mon.0[..] {
            [(Atom::Sym(s), 1)] => {
                let i = index[s];
                row[i] = RatFunc::from_poly(coeff);
            }
            _ => panic!("determining condition is not linear in the ansatz"),
        }
    }
    row
}

/// Scales an all-rational vector to primitive integers, leaving vectors with
/// parameter-dependent entries as produced by elimination.
fn normalize_vector(v: &[RatFunc]) -> Vec<RatFunc> {
    let mut consts = Vec::new();
    for e in v {
        match e.as_constant() {
            Some(q) => consts.push(q),
            None => return v.to_vec(),
        }
    }
    let mut den_lcm = num_bigint::BigInt::one();
    let mut num_gcd = num_bigint::BigInt::from(0);
    for q in consts.iter().filter(|q| !q.numer().is_zero()) {
        den_lcm = den_lcm.lcm(q.denom());
        num_gcd = num_gcd.gcd(&q.numer().abs());
    }
    if num_gcd.is_zero() {
        return v.to_vec();
    }
    let scale = crate::expr::Q::new(den_lcm, num_gcd);
    v.iter().map(|e| e.scale(&scale)).collect()
}

/// Flattens generators with polynomial coordinates to coefficient vectors
/// over a shared (coordinate, monomial) basis, for span comparisons.
fn component_maps(
    gens: &[&Generator],
    sys: &ModelSystem,
    params: &BTreeSet<Symbol>,
) -> Vec<BTreeMap<(Symbol, Monomial), RatFunc>> {
    let vars: Vec<Symbol> = sys
        .independents
        .iter()
        .chain(sys.dependents.iter())
        .cloned()
        .collect();
    let mut out = Vec::new();
    for g in gens {
        let mut comp = BTreeMap::new();
        for var in &vars {
            let e = if sys.independents.contains(var) {
                g.xi(var)
            } else {
                g.eta(var)
            };
            if e.is_zero() {
                continue;
            }
            let rat = expr_to_rat(&e);
            for a in rat.den().atoms() {
                assert!(
                    !is_jet_space_atom(&a, &BTreeSet::new(), params),
                    "{}: coordinate {var} has a non-parameter denominator",
                    g.label
                );
            }
            let split = rat
                .num()
                .split_by(|a| is_jet_space_atom(a, &BTreeSet::new(), params));
            for (mon, coeff) in split {
                let c = RatFunc::new(coeff, rat.den().clone());
                comp.insert((var.clone(), mon), c);
            }
        }
        out.push(comp);
    }
    out
}

fn to_rows(
    maps: &[BTreeMap<(Symbol, Monomial), RatFunc>],
    columns: &BTreeMap<(Symbol, Monomial), usize>,
) -> Vec<Vec<RatFunc>> {
    maps.iter()
        .map(|m| {
            let mut row = vec![RatFunc::zero(); columns.len()];
            for (k, c) in m {
                row[columns[k]] = c.clone();
            }
            row
        })
        .collect()
}

fn column_index(
    maps: &[BTreeMap<(Symbol, Monomial), RatFunc>],
) -> BTreeMap<(Symbol, Monomial), usize> {
    let mut cols = BTreeMap::new();
    for m in maps {
        for k in m.keys() {
            let n = cols.len();
            cols.entry(k.clone()).or_insert(n);
        }
    }
    cols
}

/// Whether two generator sets span the same linear space over Q(params).
pub fn same_generator_span(
    a: &[Generator],
    b: &[Generator],
    sys: &ModelSystem,
    params: &[&str],
) -> bool {
    let params: BTreeSet<Symbol> = params.iter().map(|p| Symbol::new(p)).collect();
    let refs: Vec<&Generator> = a.iter().chain(b.iter()).collect();
    let maps = component_maps(&refs, sys, &params);
    let cols = column_index(&maps);
    let rows = to_rows(&maps, &cols);
    linalg::same_span(&rows[..a.len()], &rows[a.len()..])
}

/// Whether `g` is a linear combination of `basis` over Q(params).
pub fn generator_in_span(
    g: &Generator,
    basis: &[Generator],
    sys: &ModelSystem,
    params: &[&str],
) -> bool {
    let params: BTreeSet<Symbol> = params.iter().map(|p| Symbol::new(p)).collect();
    let mut refs: Vec<&Generator> = basis.iter().collect();
    refs.push(g);
    let maps = component_maps(&refs, sys, &params);
    let cols = column_index(&maps);
    let rows = to_rows(&maps, &cols);
    let (v, base) = rows.split_last().expect("nonempty");
    linalg::in_span(base, v)
}
