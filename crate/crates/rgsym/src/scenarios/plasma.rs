//! Collisionless quasi-neutral expansion of a hot-electron-driven plasma
//! slab. Each population follows the Vlasov equation
//!
//! ```text
//! f_t = -v f_x - (e/m) E f_v
//! ```
//!
//! in units where the elementary charge, the proton mass, and the cold
//! electron temperature are one. The admitted projective group transports
//! everything along `chi = x / (L0 gamma(t))` with
//! `gamma = sqrt(1 + Omega^2 t^2)`, so a self-similar family is fixed by
//! one potential profile: writing `U = Omega x / gamma` and letting
//! `script E(U)` solve the quasi-neutrality relation
//!
//! ```text
//! sum_q Z_q n_q0 exp[(1 + Z_q/T_q) scrE - (m_q + Z_q m_e) U^2/(2 T_q)]
//!   = n_c0 + n_h0 exp[(1 - 1/T_h) scrE]
//! ```
//!
//! the electrostatic potential is `Phi0(chi) = -scrE(U) + m_e U^2/2` and
//! every population takes the Maxwell-Boltzmann-like form
//!
//! ```text
//! f^s = n_s0 sqrt(m_s/(2 pi T_s)) exp(-m_s J4/(2 T_s) - e_s Phi0(chi)/T_s)
//! ```
//!
//! with the kinetic invariant `J4 = v^2 + Omega^2 (x - v t)^2`. Densities
//! follow as `n^s = (n_s0/gamma) N_s(chi)` with the shape factors
//! `N_q = exp[Z_q scrE/T_q - (m_q + Z_q m_e) U^2/(2 T_q)]` for ions,
//! `exp(-scrE)` for cold and `exp(-scrE/T_h)` for hot electrons, and the
//! field is `E = -Phi0'(chi)/(L0 gamma^3)`.
//!
//! The cold-electron coefficient is not free: `scrE(0) = 0` forces global
//! neutrality `n_c0 = sum_q Z_q n_q0 - n_h0` at the slab center.

use crate::expr::Expr;
use crate::jet::ModelSystem;
use crate::numerics::{quad, root};
use crate::scenarios::file::{ScnError, ScnFile};
use crate::symmetry::Generator;

#[derive(Clone, Debug)]
pub struct IonSpecies {
    pub name: String,
    /// Charge state Z, in elementary charges.
    pub charge: f64,
    /// Mass in proton masses.
    pub mass: f64,
    /// Central density coefficient.
    pub n0: f64,
    /// Temperature over the cold electron temperature.
    pub temp: f64,
}

#[derive(Clone, Debug)]
pub struct PlasmaScenario {
    pub omega: f64,
    pub l0: f64,
    pub ions: Vec<IonSpecies>,
    /// Hot electron temperature over the cold one.
    pub th: f64,
    pub nh0: f64,
    /// Derived: total ion charge minus the hot coefficient.
    pub nc0: f64,
    /// Electron mass in proton masses.
    pub me: f64,
}

/// Names one population of a scenario.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PopId {
    Ion(usize),
    Cold,
    Hot,
}

/// `(n0, mass, temperature, signed charge)` of one population.
#[derive(Clone, Copy, Debug)]
pub struct PopParams {
    pub n0: f64,
    pub mass: f64,
    pub temp: f64,
    pub charge: f64,
}

/// Exponential with the argument capped so that far-from-root probes of the
/// neutrality relation saturate instead of overflowing; the cap never
/// binds at a root, where every term is of order one.
fn cexp(x: f64) -> f64 {
    x.min(700.0).exp()
}

impl PlasmaScenario {
    pub fn new(
        omega: f64,
        l0: f64,
        th: f64,
        nh0_fraction: f64,
        me: f64,
        ions: Vec<IonSpecies>,
    ) -> Result<Self, ScnError> {
        if !(omega > 0.0) || !(l0 > 0.0) || !(me > 0.0) {
            return Err(ScnError::general(
                "plasma: Omega, L0 and the electron mass must be positive",
            ));
        }
        if !(th > 1.0) {
            return Err(ScnError::general(format!(
                "plasma: hot electrons must be hotter than cold ones, got Th = {th}"
            )));
        }
        if ions.is_empty() {
            return Err(ScnError::general("plasma: no ion species"));
        }
        for q in &ions {
            if !(q.charge > 0.0) || !(q.mass > 0.0) || !(q.n0 > 0.0) || !(q.temp > 0.0) {
                return Err(ScnError::general(format!(
                    "plasma: species `{}` needs positive charge, mass, n0 and temperature",
                    q.name
                )));
            }
        }
        let lead = ions[0].charge * ions[0].n0;
        let nh0 = nh0_fraction * lead;
        let total: f64 = ions.iter().map(|q| q.charge * q.n0).sum();
        let nc0 = total - nh0;
        if !(nh0 > 0.0) || !(nc0 > 0.0) {
            return Err(ScnError::general(format!(
                "plasma: hot fraction {nh0_fraction} leaves no room for cold electrons"
            )));
        }
        Ok(PlasmaScenario {
            omega,
            l0,
            ions,
            th,
            nh0,
            nc0,
            me,
        })
    }

    pub fn from_file(f: &ScnFile) -> Result<Self, ScnError> {
        let sec = f.require_section("plasma")?;
        let omega = sec.number("Omega")?;
        let l0 = sec.number_or("L0", 1.0)?;
        let th = sec.number("Th_over_Tc")?;
        let frac = sec.number("nh0_fraction")?;
        let me = sec.number("me_over_mp")?;
        let mut ions = Vec::new();
        for s in f.with_prefix("species.") {
            ions.push(IonSpecies {
                name: s.suffix().to_string(),
                charge: s.number("charge")?,
                mass: s.number("mass")?,
                n0: s.number("n0")?,
                temp: s.number("T_over_Tc")?,
            });
        }
        PlasmaScenario::new(omega, l0, th, frac, me, ions)
    }

    pub fn params(&self, p: PopId) -> PopParams {
        match p {
            PopId::Ion(i) => {
                let q = &self.ions[i];
                PopParams {
                    n0: q.n0,
                    mass: q.mass,
                    temp: q.temp,
                    charge: q.charge,
                }
            }
            PopId::Cold => PopParams {
                n0: self.nc0,
                mass: self.me,
                temp: 1.0,
                charge: -1.0,
            },
            PopId::Hot => PopParams {
                n0: self.nh0,
                mass: self.me,
                temp: self.th,
                charge: -1.0,
            },
        }
    }

    pub fn populations(&self) -> Vec<PopId> {
        let mut v: Vec<PopId> = (0..self.ions.len()).map(PopId::Ion).collect();
        v.push(PopId::Cold);
        v.push(PopId::Hot);
        v
    }

    pub fn gamma(&self, t: f64) -> f64 {
        (1.0 + self.omega * self.omega * t * t).sqrt()
    }

    pub fn chi(&self, t: f64, x: f64) -> f64 {
        x / (self.l0 * self.gamma(t))
    }

    /// Mean drift shared by every population, `Omega^2 t x / gamma^2`.
    pub fn vbar(&self, t: f64, x: f64) -> f64 {
        let g2 = 1.0 + self.omega * self.omega * t * t;
        self.omega * self.omega * t * x / g2
    }

    /// Residual of the quasi-neutrality relation at fixed `U`, written with
    /// the cold term constant: positive once the ion side dominates.
    fn neutrality(&self, scre: f64, u: f64) -> f64 {
        let mut s = -self.nc0 - self.nh0 * cexp((1.0 - 1.0 / self.th) * scre);
        for q in &self.ions {
            let a = (1.0 + q.charge / q.temp) * scre
                - (q.mass + q.charge * self.me) * u * u / (2.0 * q.temp);
            s += q.charge * q.n0 * cexp(a);
        }
        s
    }

    /// Solves the neutrality relation for `scrE(U)`. The residual has
    /// exactly one root: wherever it crosses zero the ion side, equal there
    /// to the electron side, carries the larger exponent coefficient
    /// `1 + Z_q/T_q > 1 - 1/T_h`, so the crossing is strictly upward.
    pub fn script_e(&self, u: f64) -> f64 {
        let g = |e: f64| self.neutrality(e, u);
        let mut lo = -1.0;
        let mut hi = 1.0;
        let mut grew = 0;
        while g(hi) < 0.0 {
            hi *= 2.0;
            grew += 1;
            assert!(grew < 200, "neutrality root escaped upward at U = {u}");
        }
        while g(lo) > 0.0 {
            lo *= 2.0;
            grew += 1;
            assert!(grew < 400, "neutrality root escaped downward at U = {u}");
        }
        root::brent(g, lo, hi, 1e-14).expect("bracketed root")
    }

    /// `d scrE/dU` by implicit differentiation of the neutrality relation.
    pub fn script_e_prime(&self, u: f64) -> f64 {
        let e = self.script_e(u);
        let mut ge = -self.nh0 * (1.0 - 1.0 / self.th) * cexp((1.0 - 1.0 / self.th) * e);
        let mut gu = 0.0;
        for q in &self.ions {
            let c = (q.mass + q.charge * self.me) / (2.0 * q.temp);
            let term = q.charge * q.n0 * cexp((1.0 + q.charge / q.temp) * e - c * u * u);
            ge += (1.0 + q.charge / q.temp) * term;
            gu += -2.0 * c * u * term;
        }
        -gu / ge
    }

    /// Potential profile in the similarity variable.
    pub fn phi0(&self, chi: f64) -> f64 {
        let u = self.omega * self.l0 * chi;
        -self.script_e(u) + self.me * u * u / 2.0
    }

    /// The field every population sees: `-Phi0'(chi)/(L0 gamma^3)`.
    pub fn e_field(&self, t: f64, x: f64) -> f64 {
        let u = self.omega * x / self.gamma(t);
        let dphi_du = -self.script_e_prime(u) + self.me * u;
        -self.omega * dphi_du / self.gamma(t).powi(3)
    }

    /// Density shape factor: `gamma n^s / n_s0` as a function of `chi`.
    pub fn shape(&self, p: PopId, chi: f64) -> f64 {
        let u = self.omega * self.l0 * chi;
        let e = self.script_e(u);
        match p {
            PopId::Ion(i) => {
                let q = &self.ions[i];
                cexp(q.charge * e / q.temp
                    - (q.mass + q.charge * self.me) * u * u / (2.0 * q.temp))
            }
            PopId::Cold => cexp(-e),
            PopId::Hot => cexp(-e / self.th),
        }
    }

    pub fn density_closed(&self, p: PopId, t: f64, x: f64) -> f64 {
        let pp = self.params(p);
        pp.n0 / self.gamma(t) * self.shape(p, self.chi(t, x))
    }

    /// Phase-space density of one population.
    pub fn distribution(&self, p: PopId, t: f64, x: f64, v: f64) -> f64 {
        let pp = self.params(p);
        let j4 = v * v + self.omega * self.omega * (x - v * t) * (x - v * t);
        let phi = self.phi0(self.chi(t, x));
        pp.n0 * (pp.mass / (2.0 * std::f64::consts::PI * pp.temp)).sqrt()
            * (-pp.mass * j4 / (2.0 * pp.temp) - pp.charge * phi / pp.temp).exp()
    }

    /// Thermal width in `v` at fixed `(t, x)`; the distribution is a
    /// Gaussian of this width around [`Self::vbar`].
    pub fn sigma_v(&self, p: PopId, t: f64) -> f64 {
        let pp = self.params(p);
        (pp.temp / pp.mass).sqrt() / self.gamma(t)
    }

    /// Density by velocity quadrature over a `12 sigma` window. The
    /// closed form only calibrates the absolute tolerance; the value is
    /// entirely the quadrature's.
    pub fn density_quadrature(&self, p: PopId, t: f64, x: f64) -> f64 {
        let vb = self.vbar(t, x);
        let s = self.sigma_v(p, t);
        let tol = (1e-11 * self.density_closed(p, t, x)).max(1e-280);
        let q = quad::integrate(
            |v| self.distribution(p, t, x, v),
            vb - 12.0 * s,
            vb + 12.0 * s,
            tol,
        );
        q.value
    }

    /// Charge imbalance at `(t, x)` with every density done by quadrature;
    /// quasi-neutrality keeps this at quadrature noise.
    pub fn charge_residual(&self, t: f64, x: f64) -> f64 {
        self.populations()
            .iter()
            .map(|&p| self.params(p).charge * self.density_quadrature(p, t, x))
            .sum()
    }

    /// Current minus `vbar` times charge, both by quadrature; vanishes with
    /// the charge imbalance since every population drifts with `vbar`.
    pub fn current_residual(&self, t: f64, x: f64) -> f64 {
        let mut cur = 0.0;
        for &p in &self.populations() {
            let vb = self.vbar(t, x);
            let s = self.sigma_v(p, t);
            let tol = (1e-11 * (vb.abs() + s) * self.density_closed(p, t, x)).max(1e-280);
            let q = quad::integrate(
                |v| v * self.distribution(p, t, x, v),
                vb - 12.0 * s,
                vb + 12.0 * s,
                tol,
            );
            cur += self.params(p).charge * q.value;
        }
        cur - self.vbar(t, x) * self.charge_residual(t, x)
    }

    /// Kinetic equation residual by central differences, relative to the
    /// largest participating term.
    pub fn kinetic_residual(&self, p: PopId, t: f64, x: f64, v: f64) -> f64 {
        let pp = self.params(p);
        // The distribution varies in x both on the thermal ridge width
        // sqrt(T/m) gamma/(Omega^2 t) and on the potential scale L0 gamma;
        // the step must resolve the sharper of the two.
        let ridge = if t != 0.0 {
            (pp.temp / pp.mass).sqrt() * self.gamma(t) / (self.omega * self.omega * t.abs())
        } else {
            f64::INFINITY
        };
        let (ht, hx, hv) = (
            1e-6 * (1.0 + t.abs()),
            1e-5 * ridge.min(self.l0 * self.gamma(t)),
            1e-5 * self.sigma_v(p, t),
        );
        let f = |t: f64, x: f64, v: f64| self.distribution(p, t, x, v);
        let ft = (f(t + ht, x, v) - f(t - ht, x, v)) / (2.0 * ht);
        let fx = (f(t, x + hx, v) - f(t, x - hx, v)) / (2.0 * hx);
        let fv = (f(t, x, v + hv) - f(t, x, v - hv)) / (2.0 * hv);
        let force = pp.charge / pp.mass * self.e_field(t, x);
        let terms = [ft, v * fx, force * fv];
        let scale = terms.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        (ft + v * fx + force * fv).abs() / scale
    }

    /// Energy spectrum per unit length of one population at energy `eps`:
    /// `(1/(m v)) integral dx [f(v) + f(-v)]` with `v = sqrt(2 eps/m)`,
    /// the two mirror terms equal by the `x -> -x` symmetry. The forward
    /// population concentrates where the drift matches `v`, in a Gaussian
    /// of width `sigma_x = sqrt(T/m) gamma / (Omega^2 t)`.
    pub fn spectrum(&self, p: PopId, t: f64, eps: f64) -> f64 {
        let pp = self.params(p);
        let v = (2.0 * eps / pp.mass).sqrt();
        let g2 = 1.0 + self.omega * self.omega * t * t;
        let xc = v * g2 / (self.omega * self.omega * t);
        let sx = (pp.temp / pp.mass).sqrt() * g2.sqrt() / (self.omega * self.omega * t);
        let est = pp.n0 * self.shape(p, v / (self.omega * self.l0)) * sx;
        let q = quad::integrate(
            |x| self.distribution(p, t, x, v),
            xc - 12.0 * sx,
            xc + 12.0 * sx,
            (1e-9 * est).max(1e-280),
        );
        2.0 / (pp.mass * v) * q.value
    }

    /// Late-time limit of the spectrum: the drift-matching point sits at
    /// `U = v`, and the `x` integration contributes `sqrt(2 pi T/m)/Omega`
    /// per mirror term.
    pub fn spectrum_asymptote(&self, p: PopId, eps: f64) -> f64 {
        let pp = self.params(p);
        let v = (2.0 * eps / pp.mass).sqrt();
        let chi = v / (self.omega * self.l0);
        (2.0 / (pp.mass * eps)).sqrt() * pp.n0 / self.omega * self.shape(p, chi)
    }

    /// Kinetic model with symbolic charge, mass and trap frequency; the
    /// field is a dependent constrained off the velocity direction.
    pub fn vlasov_system() -> ModelSystem {
        ModelSystem::new("vlasov", &["t", "x", "v"], &["f", "E"])
            .with_frame("f_t", "-v*f_x - (e/m)*E*f_v")
            .with_frame("E_v", "0")
    }

    /// The projective transport group admitted for every `(e, m)` at once;
    /// the field coordinate is forced, see [`Self::derived_field_eta`].
    pub fn kinetic_generator() -> Generator {
        let sys = Self::vlasov_system();
        Generator::parsed(
            "R6",
            &sys,
            &[
                ("t", "1 + Omega^2*t^2"),
                ("x", "Omega^2*t*x"),
                ("v", "Omega^2*(x - v*t)"),
                ("E", "-3*Omega^2*t*E"),
            ],
        )
    }

    /// Solves the invariance of the kinetic equation for the one unknown
    /// coordinate `eta^E`, given the transport part.
    pub fn derived_field_eta() -> Result<Expr, String> {
        let sys = Self::vlasov_system();
        let partial = Generator::parsed(
            "R6?",
            &sys,
            &[
                ("t", "1 + Omega^2*t^2"),
                ("x", "Omega^2*t*x"),
                ("v", "Omega^2*(x - v*t)"),
            ],
        );
        crate::symmetry::invariance::solve_unknown_eta(&partial, &sys, "E")
    }

    /// Invariants of the transport group, squared where the natural form
    /// carries a square root: the similarity variable and the kinetic
    /// energy variable.
    pub fn kinetic_invariants() -> Vec<(&'static str, Expr)> {
        let sys = Self::vlasov_system();
        vec![
            (
                "chi^2",
                sys.parse("x^2/(1 + Omega^2*t^2)").expect("parses"),
            ),
            (
                "J4",
                sys.parse("v^2 + Omega^2*(x - v*t)^2").expect("parses"),
            ),
        ]
    }

    /// What the kinetic group becomes on the density moment `n = int f dv`.
    pub fn moment_expected() -> (ModelSystem, Generator) {
        let red = ModelSystem::new("fluid", &["t", "x"], &["n"]);
        let gen = Generator::parsed(
            "R7",
            &red,
            &[
                ("t", "1 + Omega^2*t^2"),
                ("x", "Omega^2*t*x"),
                ("n", "-Omega^2*t*n"),
            ],
        );
        (red, gen)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::simplify::equivalent;
    use crate::expr::Symbol;
    use crate::symmetry::functional::{prolong_to_moment, MomentSetup};
    use crate::symmetry::invariance::{check_invariance, is_invariant};

    const FIG3_SCN: &str = "\
[plasma]
Omega = 1
L0 = 1
Th_over_Tc = 1000
nh0_fraction = 1/2000
me_over_mp = 1/1836

[species.carbon]
charge = 6
mass = 12
n0 = 1/6
T_over_Tc = 1/10

[species.proton]
charge = 1
mass = 1
n0 = 1/10
T_over_Tc = 1/10
";

    fn fig3() -> PlasmaScenario {
        PlasmaScenario::from_file(&ScnFile::parse(FIG3_SCN).unwrap()).unwrap()
    }

    #[test]
    fn loads_and_derives_the_cold_coefficient() {
        let s = fig3();
        assert_eq!(s.ions.len(), 2);
        assert_eq!(s.ions[0].name, "carbon");
        assert!((s.nh0 - 5e-4).abs() < 1e-18);
        assert!((s.nc0 - 1.0995).abs() < 1e-12);
        let bad = FIG3_SCN.replace("nh0_fraction = 1/2000", "nh0_fraction = 2");
        assert!(PlasmaScenario::from_file(&ScnFile::parse(&bad).unwrap()).is_err());
    }

    #[test]
    fn potential_matches_the_frozen_scan_oracle() {
        // Values from an independent coarse-scan-plus-bisection solver for
        // the fig3 parameter set.
        let s = fig3();
        let oracle = [
            (0.0, 0.0),
            (0.5, 0.2400872168349638),
            (1.0, 0.6728231036921519),
            (2.0, 2.03743719037782),
            (3.0, 4.314112311573085),
            (12.0_f64.sqrt(), 5.686847221847158),
        ];
        for (u, want) in oracle {
            let got = s.script_e(u);
            assert!((got - want).abs() < 1e-11, "scrE({u}) = {got}, want {want}");
        }
    }

    #[test]
    fn closed_form_densities_balance_charge_exactly() {
        let s = fig3();
        for &chi in &[0.0, 0.3, 1.1, 2.4, 3.4] {
            let mut rho = 0.0;
            for &p in &s.populations() {
                rho += s.params(p).charge * s.params(p).n0 * s.shape(p, chi);
            }
            assert!(rho.abs() < 1e-11 * s.nc0, "rho({chi}) = {rho}");
        }
    }

    #[test]
    fn field_matches_potential_differences() {
        let s = fig3();
        for &(t, x) in &[(0.0, 0.4), (1.0, 1.3), (7.0, 10.0)] {
            let h = 1e-5;
            let chi = s.chi(t, x);
            let fd = (s.phi0(chi + h) - s.phi0(chi - h)) / (2.0 * h);
            let want = -fd / (s.l0 * s.gamma(t).powi(3));
            let got = s.e_field(t, x);
            assert!(
                (got - want).abs() < 1e-8 * (want.abs() + 1e-3),
                "E({t},{x}) = {got} vs {want}"
            );
        }
    }

    #[test]
    fn quadrature_densities_collapse_onto_the_shape() {
        let s = fig3();
        for &wt in &[0.0, 1.0, 10.0, 100.0] {
            let t = wt / s.omega;
            for &chi in &[0.0, 0.7, 1.9] {
                let x = chi * s.l0 * s.gamma(t);
                for &p in &s.populations() {
                    let n = s.density_quadrature(p, t, x);
                    let want = s.params(p).n0 / s.gamma(t) * s.shape(p, chi);
                    assert!(
                        (n - want).abs() <= 1e-8 * want,
                        "pop {p:?} at wt={wt}, chi={chi}: {n} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn distributions_solve_the_kinetic_equation() {
        let s = fig3();
        for &wt in &[0.5, 3.0, 20.0] {
            let t = wt / s.omega;
            for &chi in &[0.1, 0.9, 2.2] {
                let x = chi * s.l0 * s.gamma(t);
                for &p in &s.populations() {
                    let v = s.vbar(t, x) + 1.3 * s.sigma_v(p, t);
                    let r = s.kinetic_residual(p, t, x, v);
                    assert!(r < 1e-6, "pop {p:?} at wt={wt}, chi={chi}: residual {r}");
                }
            }
        }
    }

    #[test]
    fn quadrature_charge_and_current_stay_neutral() {
        let s = fig3();
        for &(wt, chi) in &[(0.0, 0.5), (1.0, 1.5), (30.0, 2.5)] {
            let t = wt / s.omega;
            let x = chi * s.l0 * s.gamma(t);
            let rho = s.charge_residual(t, x);
            assert!(rho.abs() < 1e-10 * s.nc0, "rho at wt={wt}: {rho}");
            let j = s.current_residual(t, x);
            let scale = s.nc0 * (s.vbar(t, x).abs() + 1.0);
            assert!(j.abs() < 1e-10 * scale, "current at wt={wt}: {j}");
        }
    }

    #[test]
    fn shapes_show_the_light_ion_bump_and_heavy_ion_cutoff() {
        let s = fig3();
        let proton = PopId::Ion(1);
        let carbon = PopId::Ion(0);
        // The proton shape rises to a maximum near U = 1 before decaying.
        let p_half = s.shape(proton, 0.5);
        assert!((p_half - 3.159).abs() < 5e-3, "proton shape at 0.5: {p_half}");
        assert!(s.shape(proton, 1.0) > p_half);
        assert!(s.shape(proton, 1.0) > s.shape(proton, 1.8));
        // The carbon shape decays from the start and cuts off faster than
        // the proton one at every tail point.
        let mut prev = s.shape(carbon, 0.0);
        for k in 1..=12 {
            let chi = 0.25 * k as f64;
            let cur = s.shape(carbon, chi);
            assert!(cur < prev, "carbon shape rises at chi={chi}");
            prev = cur;
        }
        for k in 4..=12 {
            let chi = 0.25 * k as f64;
            assert!(s.shape(carbon, chi) < s.shape(proton, chi));
        }
        // Electron shapes track the potential monotonically.
        for k in 1..=12 {
            let chi = 0.25 * k as f64;
            assert!(s.shape(PopId::Cold, chi) < s.shape(PopId::Cold, chi - 0.25));
        }
    }

    #[test]
    fn spectrum_approaches_the_laplace_asymptote() {
        let s = fig3();
        let t = 300.0 / s.omega;
        for &(p, epss) in &[
            (PopId::Ion(1), [0.05, 0.2, 0.45]),
            (PopId::Ion(0), [0.6, 1.8, 2.4]),
        ] {
            for &eps in &epss {
                let got = s.spectrum(p, t, eps);
                let want = s.spectrum_asymptote(p, eps);
                assert!(
                    (got - want).abs() < 0.02 * want,
                    "pop {p:?} at eps={eps}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn kinetic_group_is_admitted_with_the_forced_field_coordinate() {
        let sys = PlasmaScenario::vlasov_system();
        let rep = check_invariance(&PlasmaScenario::kinetic_generator(), &sys, 7);
        assert!(rep.ok, "{:?}", rep.residuals);
        let eta = PlasmaScenario::derived_field_eta().unwrap();
        let want = sys.parse("-3*Omega^2*t*E").unwrap();
        assert!(equivalent(&eta, &want), "derived eta^E = {eta}");
    }

    #[test]
    fn transport_invariants_are_annihilated() {
        let sys = PlasmaScenario::vlasov_system();
        let gen = PlasmaScenario::kinetic_generator();
        for (name, j) in PlasmaScenario::kinetic_invariants() {
            assert!(is_invariant(&gen, &sys, &j), "{name} moves");
        }
    }

    #[test]
    fn density_moment_reduces_to_the_fluid_transport_group() {
        let sys = PlasmaScenario::vlasov_system();
        let got = prolong_to_moment(
            &PlasmaScenario::kinetic_generator(),
            &sys,
            &MomentSetup::new("v", "f", "n"),
        )
        .unwrap();
        let (red, want) = PlasmaScenario::moment_expected();
        for i in ["t", "x"] {
            let si = Symbol::new(i);
            assert!(equivalent(&got.xi(&si), &want.xi(&si)), "xi {i}");
        }
        let sn = Symbol::new("n");
        assert!(equivalent(&got.eta(&sn), &want.eta(&sn)), "eta n: {}", got.eta(&sn));
        // gamma^2 n^2 is carried along the reduced flow.
        let j = red.parse("(1 + Omega^2*t^2)*n^2").unwrap();
        assert!(is_invariant(&want, &red, &j));
    }
}
