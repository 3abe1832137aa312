//! Rational normal form: multivariate polynomials and reduced fractions over
//! opaque atoms, with exact rational coefficients.
//!
//! Monomials keep three folding invariants:
//!   * an integer square root never appears squared; `sqrt(n)^2` collapses
//!     into the coefficient,
//!   * a root atom `Root(B, q)` never reaches power `q`; overflow collapses
//!     into copies of the base polynomial `B`,
//!   * the exponent of a root atom stays coprime to its index, so
//!     `Root(B, 4)^2` renormalizes to `Root(B, 2)`.
//!
//! Every constructor restores the invariants, so `Poly` equality is equality
//! of normal forms. Roots of the same base with *different* indices created
//! explicitly (say `x^(1/2)` and `x^(1/3)`) are treated as independent atoms;
//! the simplifier may fail to identify expressions equal only through such
//! relations, but it never claims a false zero is nonzero in the other
//! direction: independence can only make fewer things equal, never more.
//!
//! The gcd is a primitive pseudo-remainder sequence. The main variable at
//! each level is chosen by a rank that places every root atom above all atoms
//! of its base polynomial; this keeps coefficient arithmetic closed (no fold
//! can inject the main variable into a coefficient) and makes the recursion
//! sound over the quotient ring the folds define.

use super::{q_int, q_is_one, Expr, Func, Irr, JetVar, Q, Symbol};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Indivisible factor of a monomial.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    Irr(Irr),
    Sym(Symbol),
    Jet(JetVar),
    /// Opaque function call; arguments are in canonical form.
    Call(Func, Vec<Expr>),
    /// `B^(1/q)` for an integer-primitive base polynomial `B` and `q >= 2`.
    Root(Poly, u32),
    /// `b^e` with a non-rational exponent, or an undefined power such as
    /// `0^-1`. Never folded.
    Opaque(Box<Expr>, Box<Expr>),
}

/// Sorted atom powers; the empty product is 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(pub Vec<(Atom, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn exp_of(&self, a: &Atom) -> u32 {
        self.0
            .binary_search_by(|(x, _)| x.cmp(a))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    fn without(&self, a: &Atom) -> Monomial {
        Monomial(self.0.iter().filter(|(x, _)| x != a).cloned().collect())
    }

    fn merge(&self, other: &Monomial) -> Vec<(Atom, u32)> {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        out
    }

    /// Atom-wise exponent minimum. Root atoms of the same base but different
    /// index compare unequal and contribute nothing, consistent with the
    /// independence policy above.
    fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1.min(other.0[j].1)));
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial(out)
    }
}

/// Multivariate polynomial in normal form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::from_q(q_int(1))
    }

    pub fn from_q(c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn from_int(n: i64) -> Self {
        Poly::from_q(q_int(n))
    }

    pub fn atom(a: Atom) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial(vec![(a, 1)]), q_int(1));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.is_one() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Builds `c * prod(atoms^exp)` and restores the monomial invariants.
    /// Returns a full polynomial because folds may expand into base
    /// polynomials.
    pub fn term(c: Q, atoms: Vec<(Atom, u32)>) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coef = c;
        let mut keep: Vec<(Atom, u32)> = Vec::with_capacity(atoms.len());
        let mut extras: Vec<Poly> = Vec::new();
        for (a, e) in atoms {
            if e == 0 {
                continue;
            }
            match a {
                Atom::Irr(Irr::Sqrt(n)) if e >= 2 => {
                    coef *= Q::from_integer(int_pow(&n, e / 2));
                    if e % 2 == 1 {
                        keep.push((Atom::Irr(Irr::Sqrt(n)), 1));
                    }
                }
                Atom::Root(b, q) => {
                    let mut e = e;
                    if e >= q {
                        extras.push(b.pow(e / q));
                        e %= q;
                    }
                    if e > 0 {
                        let g = gcd_u32(e, q);
                        if g == q {
                            unreachable!("e < q");
                        }
                        if g > 1 {
                            keep.push((Atom::Root(b, q / g), e / g));
                        } else {
                            keep.push((Atom::Root(b, q), e));
                        }
                    }
                }
                other => keep.push((other, e)),
            }
        }
        keep.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out = Poly::zero();
        out.add_term(Monomial(keep), coef);
        for ex in extras {
            out = out.mul(&ex);
        }
        out
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut out = Poly::zero();
        for (m, k) in &self.terms {
            out.add_term(m.clone(), k * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let t = Poly::term(ca * cb, ma.merge(mb));
                out = out.add(&t);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (a, _) in &m.0 {
                out.insert(a.clone());
            }
        }
        out
    }

    pub fn has_atom(&self, a: &Atom) -> bool {
        self.terms.keys().any(|m| m.exp_of(a) > 0)
    }

    pub fn degree_in(&self, a: &Atom) -> u32 {
        self.terms.keys().map(|m| m.exp_of(a)).max().unwrap_or(0)
    }

    /// Terms whose exponent of `a` equals `k`, with `a` removed.
    pub fn coeff_of(&self, a: &Atom, k: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.exp_of(a) == k {
                out.add_term(m.without(a), c.clone());
            }
        }
        out
    }

    fn exponents_of(&self, a: &Atom) -> BTreeSet<u32> {
        self.terms.keys().map(|m| m.exp_of(a)).collect()
    }

    /// Groups terms by the sub-monomial of atoms selected by `pick`; values
    /// are the cofactor polynomials over the remaining atoms.
    pub fn split_by<F: Fn(&Atom) -> bool>(&self, pick: F) -> BTreeMap<Monomial, Poly> {
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut key = Vec::new();
            let mut rest = Vec::new();
            for (a, e) in &m.0 {
                if pick(a) {
                    key.push((a.clone(), *e));
                } else {
                    rest.push((a.clone(), *e));
                }
            }
            out.entry(Monomial(key))
                .or_default()
                .add_term(Monomial(rest), c.clone());
        }
        out
    }

    /// Leading coefficient for the maximal monomial in the storage order.
    fn leading_coeff(&self) -> Option<&Q> {
        self.terms.iter().next_back().map(|(_, c)| c)
    }

    /// Rational `u` such that `self / u` has integer coefficients with
    /// content 1 and a positive leading coefficient. Zero maps to 1.
    pub fn content_unit(&self) -> Q {
        if self.is_zero() {
            return q_int(1);
        }
        let mut lcm_den = BigInt::one();
        for c in self.terms.values() {
            lcm_den = lcm_den.lcm(c.denom());
        }
        let mut gcd_num = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&lcm_den / c.denom());
            gcd_num = gcd_num.gcd(&scaled);
        }
        let mut u = Q::new(gcd_num, lcm_den);
        if !self.leading_coeff().unwrap().is_positive() {
            u = -u;
        }
        u
    }

    /// Integer-primitive positive-leading associate; zero stays zero.
    pub fn normalize_unit(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let u = self.content_unit();
        self.scale(&u.recip())
    }

    /// Largest monomial dividing every term; 1 for the zero polynomial.
    fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    /// Exact quotient by a monomial dividing every term.
    fn div_monomial(&self, m: &Monomial) -> Poly {
        if m.is_one() {
            return self.clone();
        }
        let strip = |mon: &Monomial| -> Vec<(Atom, u32)> {
            mon.0
                .iter()
                .filter_map(|(a, e)| {
                    let e = e - m.exp_of(a);
                    (e > 0).then(|| (a.clone(), e))
                })
                .collect()
        };
        if m.0.iter().any(|(a, _)| matches!(a, Atom::Root(..))) {
            // Lowering a root exponent can break the index-coprimality
            // invariant; rebuild through the normalizing constructor.
            let mut out = Poly::zero();
            for (mon, c) in &self.terms {
                out = out.add(&Poly::term(c.clone(), strip(mon)));
            }
            return out;
        }
        // Plain atoms carry no exponent invariants and stripping the same
        // monomial from every term is injective, so keys stay distinct.
        let mut out = Poly::zero();
        for (mon, c) in &self.terms {
            out.add_term(Monomial(strip(mon)), c.clone());
        }
        out
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let mut atoms = self.atoms();
        atoms.extend(d.atoms());
        let t = choose_main(&atoms).expect("non-constant divisor has atoms");
        if !d.has_atom(&t) {
            // The top atom lives only in the dividend: divide coefficientwise.
            let mut out = Poly::zero();
            for k in self.exponents_of(&t) {
                let q = self.coeff_of(&t, k).div_exact(d)?;
                out = out.add(&q.mul(&Poly::term(q_int(1), vec![(t.clone(), k)])));
            }
            return Some(out);
        }
        let dd = d.degree_in(&t);
        let ld = d.coeff_of(&t, dd);
        let mut r = self.clone();
        let mut q = Poly::zero();
        while !r.is_zero() {
            let dr = r.degree_in(&t);
            if dr < dd {
                return None;
            }
            let lr = r.coeff_of(&t, dr);
            let qt = lr.div_exact(&ld)?;
            let term = qt.mul(&Poly::term(q_int(1), vec![(t.clone(), dr - dd)]));
            q = q.add(&term);
            r = r.sub(&term.mul(d));
            if !r.is_zero() && r.degree_in(&t) >= dr {
                return None;
            }
        }
        Some(q)
    }
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

pub(crate) fn int_pow(n: &BigInt, e: u32) -> BigInt {
    let mut out = BigInt::one();
    let mut base = n.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            out = &out * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    out
}

fn atom_class(a: &Atom) -> u8 {
    match a {
        Atom::Irr(_) => 0,
        Atom::Sym(_) => 1,
        Atom::Jet(_) => 2,
        Atom::Call(..) | Atom::Opaque(..) => 3,
        Atom::Root(..) => 4,
    }
}

fn poly_size(p: &Poly) -> u64 {
    p.terms()
        .map(|(m, _)| 1 + m.0.iter().map(|(a, _)| atom_size(a)).sum::<u64>())
        .sum()
}

fn atom_size(a: &Atom) -> u64 {
    match a {
        Atom::Irr(_) | Atom::Sym(_) | Atom::Jet(_) => 1,
        Atom::Call(_, args) => 1 + args.iter().map(|e| e.size()).sum::<u64>(),
        Atom::Opaque(b, e) => 1 + b.size() + e.size(),
        Atom::Root(b, _) => 1 + poly_size(b),
    }
}

/// Main-variable choice for the recursive algorithms. The rank places a root
/// atom strictly above every atom of its base (class, then structural size,
/// then the derived order), which keeps folds out of coefficient arithmetic.
pub(crate) fn choose_main(atoms: &BTreeSet<Atom>) -> Option<Atom> {
    atoms
        .iter()
        .max_by(|a, b| {
            (atom_class(a), atom_size(a), *a).cmp(&(atom_class(b), atom_size(b), *b))
        })
        .cloned()
}

/// Pseudo-remainder of `a` by `b` in the atom `x`; `b` must contain `x`.
fn pseudo_rem(a: &Poly, b: &Poly, x: &Atom) -> Poly {
    let db = b.degree_in(x);
    debug_assert!(db > 0, "pseudo_rem: divisor free of main atom");
    let lb = b.coeff_of(x, db);
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let dr = r.degree_in(x);
        if dr < db {
            return r;
        }
        let lr = r.coeff_of(x, dr);
        let shift = Poly::term(q_int(1), vec![(x.clone(), dr - db)]);
        r = lb.mul(&r).sub(&lr.mul(&shift).mul(b));
        debug_assert!(r.is_zero() || r.degree_in(x) < dr);
    }
}

/// Gcd of the coefficients of `p` viewed as univariate in `x`.
fn content_wrt(p: &Poly, x: &Atom) -> Poly {
    let mut g = Poly::zero();
    for k in p.exponents_of(x) {
        g = gcd(&g, &p.coeff_of(x, k));
        if g.as_constant().is_some() && !g.is_zero() {
            break;
        }
    }
    g
}

fn primitive_wrt(p: &Poly, x: &Atom) -> Poly {
    let c = content_wrt(p, x);
    p.div_exact(&c).expect("content divides")
}

/// Greatest common divisor, normalized integer-primitive with a positive
/// leading coefficient. `gcd(0, p)` is the normalized `p`; constants are
/// units, so any constant operand gives 1.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.normalize_unit();
    }
    if b.is_zero() {
        return a.normalize_unit();
    }
    // Atom factors come off by exponent minima before anything recursive
    // runs. Atoms are pairwise independent, so the split is a factorization
    // into coprime parts and a monomial operand short-circuits through the
    // constant test below instead of driving a content cascade over every
    // atom of the other side. Fractions whose denominators are powers of a
    // single variable reduce in one pass this way.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    if !ma.is_one() || !mb.is_one() {
        let g = gcd(&a.div_monomial(&ma), &b.div_monomial(&mb));
        return g
            .mul(&Poly::term(q_int(1), ma.gcd(&mb).0))
            .normalize_unit();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Poly::one();
    }
    let mut atoms = a.atoms();
    atoms.extend(b.atoms());
    let x = choose_main(&atoms).expect("non-constant operands");
    match (a.has_atom(&x), b.has_atom(&x)) {
        (true, false) => return gcd(&content_wrt(a, &x), b),
        (false, true) => return gcd(a, &content_wrt(b, &x)),
        (false, false) => unreachable!("main atom chosen from the union"),
        (true, true) => {}
    }
    let ca = content_wrt(a, &x);
    let cb = content_wrt(b, &x);
    let c = gcd(&ca, &cb);
    let mut f = a.div_exact(&ca).expect("content divides");
    let mut g = b.div_exact(&cb).expect("content divides");
    if f.degree_in(&x) < g.degree_in(&x) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        let r = pseudo_rem(&f, &g, &x);
        if r.is_zero() {
            break;
        }
        if !r.has_atom(&x) {
            // Primitive operands with an x-free remainder are coprime in x.
            g = Poly::one();
            break;
        }
        f = g;
        g = primitive_wrt(&r, &x);
    }
    c.mul(&g).normalize_unit()
}

/// Reduced fraction of polynomials. Invariants: `gcd(num, den) = 1` and the
/// denominator is integer-primitive with a positive leading coefficient
/// (hence exactly 1 for constants); zero is `0/1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatFunc { num, den };
        r.reduce();
        r
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn from_q(c: Q) -> Self {
        RatFunc::from_poly(Poly::from_q(c))
    }

    pub fn from_atom(a: Atom) -> Self {
        RatFunc::from_poly(Poly::atom(a))
    }

    pub fn zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        if q_is_one(&self.den.as_constant()?) {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Q> {
        let d = self.den.as_constant()?;
        debug_assert!(q_is_one(&d), "denominator normalized");
        self.num.as_constant()
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        let g = gcd(&self.num, &self.den);
        self.num = self.num.div_exact(&g).expect("gcd divides numerator");
        self.den = self.den.div_exact(&g).expect("gcd divides denominator");
        let u = self.den.content_unit();
        let ru = u.recip();
        self.num = self.num.scale(&ru);
        self.den = self.den.scale(&ru);
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            return RatFunc::new(self.num.add(&other.num), self.den.clone());
        }
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &RatFunc) -> RatFunc {
        assert!(!other.is_zero(), "division by zero rational function");
        RatFunc::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn recip(&self) -> RatFunc {
        assert!(!self.is_zero(), "reciprocal of zero");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// Integer power; negative exponents require a nonzero value.
    pub fn pow_int(&self, k: i64) -> RatFunc {
        assert!(k.unsigned_abs() <= 4096, "exponent too large");
        if k == 0 {
            return RatFunc::one();
        }
        let e = k.unsigned_abs() as u32;
        if k > 0 {
            RatFunc::new(self.num.pow(e), self.den.pow(e))
        } else {
            self.recip().pow_int(e as i64)
        }
    }

    pub fn scale(&self, c: &Q) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone())
    }
}

/// Square part extraction helper: returns `(t, rest)` with `m = t^q * rest`
/// and `rest` free of q-th powers, up to a trial division bound of 1e5 (a
/// q-th power of a single prime beyond the bound is still detected).
pub(crate) fn extract_qth_power(m: &BigInt, q: u32) -> (BigInt, BigInt) {
    debug_assert!(m.is_positive() && q >= 2);
    let mut t = BigInt::one();
    let mut rest = BigInt::one();
    let mut m = m.clone();
    let mut d = BigInt::from(2);
    let bound = BigInt::from(100_000u32);
    while &d * &d <= m && d <= bound {
        if m.is_multiple_of(&d) {
            let mut k = 0u32;
            while m.is_multiple_of(&d) {
                m /= &d;
                k += 1;
            }
            t *= int_pow(&d, k / q);
            rest *= int_pow(&d, k % q);
        }
        d += if d == BigInt::from(2) { 1 } else { 2 };
    }
    if m > BigInt::one() {
        let r = m.nth_root(q);
        if int_pow(&r, q) == m {
            t *= r;
        } else {
            rest *= m;
        }
    }
    (t, rest)
}
