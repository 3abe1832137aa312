//! Riemann simple-wave problem: `u_z + eps u u_x = 0` with `u = U(x)` on
//! `z = 0`. The amplitude `eps` rides along as an extra independent
//! variable so the group machinery can move it; the boundary data does not
//! depend on it.
//!
//! The exact solution is carried implicitly, `x - eps z u = H(u)` with `H`
//! the inverse of the boundary profile. For the shipped linear profile
//! `U = -x` this is `u = -x/(1 - eps z)`, steepening into a gradient
//! catastrophe at `z = 1/eps`.

use crate::expr::eval::{Env, eval};
use crate::expr::simplify::equivalent;
use crate::expr::{Expr, SubstMap};
use crate::jet::ModelSystem;
use crate::numerics::root::{self, RootError};
use crate::scenarios::file::{DetqConfig, ScnError, ScnFile};
use crate::symmetry::functional::{Parity, SectionSetup};
use crate::symmetry::restrict::{BoundaryProfile, Restriction, restrict_on_solution};
use crate::symmetry::Generator;
use std::fmt;

#[derive(Clone, Debug)]
pub enum HopfError {
    /// Characteristics have crossed: the implicit relation has several
    /// roots at this (z, x).
    Multivalued { z: f64, x: f64 },
    /// No root of the implicit relation inside any expanded bracket.
    NoRoot { z: f64, x: f64, detail: RootError },
    /// The inverse profile ran out of bracket.
    ProfileRange { u: f64 },
}

impl fmt::Display for HopfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HopfError::Multivalued { z, x } => {
                write!(f, "solution multivalued at z={z}, x={x}")
            }
            HopfError::NoRoot { z, x, detail } => {
                write!(f, "no root of the implicit relation at z={z}, x={x}: {detail:?}")
            }
            HopfError::ProfileRange { u } => {
                write!(f, "boundary profile never reaches u={u}")
            }
        }
    }
}

impl std::error::Error for HopfError {}

#[derive(Clone, Debug)]
pub struct HopfScenario {
    pub eps: f64,
    /// Boundary profile U as an expression in x.
    pub profile: Expr,
    pub profile_src: String,
    /// Monotonicity is certified on this window; root brackets may expand
    /// beyond it when characteristics carry data outward.
    pub x_min: f64,
    pub x_max: f64,
    pub detq: Option<DetqConfig>,
    /// First characteristic crossing, located at construction.
    z_break: Option<f64>,
}

impl HopfScenario {
    pub fn new(eps: f64, profile_src: &str, x_min: f64, x_max: f64) -> Result<Self, ScnError> {
        if !(x_min < x_max) {
            return Err(ScnError::general("hopf: empty x-range"));
        }
        if !eps.is_finite() || eps < 0.0 {
            return Err(ScnError::general(format!("hopf: bad eps {eps}")));
        }
        let profile = Self::system()
            .parse(profile_src)
            .map_err(|e| ScnError::general(format!("hopf profile: {e}")))?;
        for j in profile.jets() {
            return Err(ScnError::general(format!(
                "hopf profile must be an expression in x alone, found {j}"
            )));
        }
        let mut s = HopfScenario {
            eps,
            profile,
            profile_src: profile_src.to_string(),
            x_min,
            x_max,
            detq: None,
            z_break: None,
        };
        // Invertibility on the configured window: the slope keeps one
        // strict sign.
        let mut sign = 0.0;
        for k in 0..=256 {
            let x = x_min + (x_max - x_min) * k as f64 / 256.0;
            let d = s.profile_slope(x);
            if !d.is_finite() || d == 0.0 {
                return Err(ScnError::general(format!(
                    "hopf profile is not invertible: U'({x}) = {d}"
                )));
            }
            if sign == 0.0 {
                sign = d.signum();
            } else if sign != d.signum() {
                return Err(ScnError::general(format!(
                    "hopf profile is not monotone near x = {x}"
                )));
            }
        }
        s.z_break = s.locate_breaking();
        Ok(s)
    }

    pub fn from_file(f: &ScnFile) -> Result<Self, ScnError> {
        let sec = f.require_section("hopf")?;
        let eps = sec.number("eps")?;
        let profile = sec.require("profile")?;
        let x_min = sec.number_or("x_min", -2.0)?;
        let x_max = sec.number_or("x_max", 2.0)?;
        let mut s = HopfScenario::new(eps, profile, x_min, x_max)?;
        if let Some(d) = f.section("detq") {
            s.detq = Some(DetqConfig::from_section(d)?);
        }
        Ok(s)
    }

    /// The equation solved for the z-derivative, with eps appended as an
    /// independent variable.
    pub fn system() -> ModelSystem {
        ModelSystem::new("hopf", &["z", "x", "eps"], &["u"]).with_frame("u_z", "-eps*u*u_x")
    }

    /// The four admitted families with constant multipliers: translation
    /// along characteristics, x-translation, the (x, u) scaling, and the
    /// (eps, x) dilation.
    pub fn point_generators() -> Vec<Generator> {
        let sys = Self::system();
        vec![
            Generator::parsed("X1", &sys, &[("z", "1"), ("x", "eps*u")]),
            Generator::parsed("X2", &sys, &[("x", "1")]),
            Generator::parsed("X3", &sys, &[("x", "x"), ("u", "u")]),
            Generator::parsed("X4", &sys, &[("eps", "eps"), ("x", "x")]),
        ]
    }

    /// Boundary manifold z = 0 carrying the profile; eps is a flat
    /// direction, and x prolongs off the boundary as the characteristic
    /// invariant x - eps u z.
    pub fn boundary(&self) -> BoundaryProfile {
        let sys = Self::system();
        BoundaryProfile::new(&sys, "z", "0")
            .with_profile(&sys, "u", &self.profile_src)
            .with_flat("eps")
            .with_invariant(&sys, "x", "x - eps*u*z")
    }

    /// Restriction of the admitted span on the boundary data, eliminating
    /// the x-translation pivot.
    pub fn restriction(&self) -> Result<Restriction, String> {
        let sys = Self::system();
        restrict_on_solution(&Self::point_generators(), &sys, &self.boundary(), Some("X2"))
    }

    /// The group that moves the solution along itself and shifts eps; the
    /// restriction member eps(z u d_x + d_eps) divided by its overall eps
    /// (multipliers may depend on eps, so this rescaling stays admitted).
    pub fn rg_generator() -> Generator {
        let sys = Self::system();
        Generator::parsed("rg", &sys, &[("x", "z*u"), ("eps", "1")])
    }

    /// Section x = 0 carrying the on-axis slope functional u0x = u_x(z, 0).
    /// Requires odd boundary data, which keeps u odd in x for all z.
    pub fn axis_section(&self) -> Result<SectionSetup, ScnError> {
        if !self.profile_is_odd() {
            return Err(ScnError::general(
                "hopf axis section needs an odd boundary profile",
            ));
        }
        let sys = Self::system();
        Ok(SectionSetup::new(&sys, "x", "0")
            .define("u", 1, "u0x")
            .with_parity("u", Parity::Odd))
    }

    fn profile_is_odd(&self) -> bool {
        let mut m = SubstMap::new();
        m.insert(Expr::sym("x"), -Expr::sym("x"));
        let reflected = self.profile.subst(&m);
        equivalent(&reflected, &(-self.profile.clone()))
    }

    /// The invariant eps z - 1/u0x of the prolonged group, parsed in the
    /// reduced section variables.
    pub fn reduced_invariant() -> Expr {
        Self::reduced_system().parse("eps*z - 1/u0x").expect("parses")
    }

    /// What the axis-slope prolongation must produce.
    pub fn reduced_rg_expected() -> Generator {
        let red = Self::reduced_system();
        Generator::parsed("rg^", &red, &[("eps", "1"), ("u0x", "-z*u0x^2")])
    }

    pub fn reduced_system() -> ModelSystem {
        ModelSystem::new("section", &["z", "eps"], &["u0x"])
    }

    pub fn profile_value(&self, x: f64) -> f64 {
        eval(&self.profile, Env::new().set_sym("x", x)).expect("profile evaluates")
    }

    pub fn profile_slope(&self, x: f64) -> f64 {
        let d = crate::expr::diff::diff(&self.profile, &Expr::sym("x"));
        eval(&d, Env::new().set_sym("x", x)).expect("slope evaluates")
    }

    /// Inverse profile H: the boundary coordinate where U takes the value
    /// u. The bracket starts at the configured window and doubles outward.
    pub fn inverse_profile(&self, u: f64) -> Result<f64, HopfError> {
        let g = |x: f64| self.profile_value(x) - u;
        let (mut a, mut b) = (self.x_min, self.x_max);
        for _ in 0..60 {
            if g(a) == 0.0 {
                return Ok(a);
            }
            if g(b) == 0.0 {
                return Ok(b);
            }
            if g(a).signum() != g(b).signum() {
                return root::brent(g, a, b, 1e-14).map_err(|_| HopfError::ProfileRange { u });
            }
            let w = b - a;
            a -= w;
            b += w;
        }
        Err(HopfError::ProfileRange { u })
    }

    /// Single-valued branch of the implicit relation x - eps z u = H(u),
    /// solved in u. Detects characteristic crossing by counting sign
    /// changes across the bracket.
    pub fn exact(&self, z: f64, x: f64) -> Result<f64, HopfError> {
        // Past the breaking distance the single-valued branch is gone. The
        // bracket scan below catches generic crossings; linear data focus
        // every characteristic through one point and leave a spurious
        // unique root behind it, so the distance itself is the guard.
        if let Some(zb) = self.z_break {
            if z >= zb {
                return Err(HopfError::Multivalued { z, x });
            }
        }
        let phi = |u: f64| match self.inverse_profile(u) {
            Ok(h) => x - self.eps * z * u - h,
            // Past the profile range the relation keeps the sign of its
            // linear part; saturate so bracket expansion can continue.
            Err(_) => f64::NAN,
        };
        let r0 = 1.0 + self.profile_value(self.x_min).abs().max(self.profile_value(self.x_max).abs());
        let (mut lo, mut hi) = (-r0, r0);
        let mut bracketed = None;
        for _ in 0..60 {
            let (flo, fhi) = (phi(lo), phi(hi));
            if flo.is_finite() && fhi.is_finite() && flo.signum() != fhi.signum() {
                bracketed = Some((lo, hi));
                break;
            }
            lo *= 2.0;
            hi *= 2.0;
        }
        let Some((lo, hi)) = bracketed else {
            return Err(HopfError::NoRoot {
                z,
                x,
                detail: RootError::NoBracket {
                    fa: phi(lo),
                    fb: phi(hi),
                },
            });
        };
        // One branch only: more than one sign change means the
        // characteristics have crossed.
        let mut changes = 0;
        let mut prev = phi(lo);
        for k in 1..=512 {
            let u = lo + (hi - lo) * k as f64 / 512.0;
            let cur = phi(u);
            if prev.is_finite() && cur.is_finite() && prev.signum() != cur.signum() {
                changes += 1;
            }
            if cur.is_finite() {
                prev = cur;
            }
        }
        if changes > 1 {
            return Err(HopfError::Multivalued { z, x });
        }
        root::brent(phi, lo, hi, 1e-13).map_err(|detail| HopfError::NoRoot { z, x, detail })
    }

    /// Residual of the equation at (z, x) by central differences of the
    /// implicit solution.
    pub fn fd_residual(&self, z: f64, x: f64, h: f64) -> Result<f64, HopfError> {
        let uz = (self.exact(z + h, x)? - self.exact(z - h, x)?) / (2.0 * h);
        let ux = (self.exact(z, x + h)? - self.exact(z, x - h)?) / (2.0 * h);
        let u = self.exact(z, x)?;
        Ok(uz + self.eps * u * ux)
    }

    /// First characteristic crossing, located at construction: the most
    /// negative profile slope on the window breaks first, at
    /// z = -1/(eps min U'). None when the wave never steepens (slope
    /// nonnegative or eps = 0).
    pub fn singularity_z(&self) -> Option<f64> {
        self.z_break
    }

    fn locate_breaking(&self) -> Option<f64> {
        let n = 4096;
        let mut best_x = self.x_min;
        let mut best = f64::INFINITY;
        for k in 0..=n {
            let x = self.x_min + (self.x_max - self.x_min) * k as f64 / n as f64;
            let d = self.profile_slope(x);
            if d < best {
                best = d;
                best_x = x;
            }
        }
        // Ternary refinement on the sampled neighborhood; a flat minimum
        // (linear profile) leaves best unchanged, which is exact anyway.
        let h = (self.x_max - self.x_min) / n as f64;
        let (mut a, mut b) = (
            (best_x - h).max(self.x_min),
            (best_x + h).min(self.x_max),
        );
        for _ in 0..200 {
            let m1 = a + (b - a) / 3.0;
            let m2 = b - (b - a) / 3.0;
            if self.profile_slope(m1) < self.profile_slope(m2) {
                b = m2;
            } else {
                a = m1;
            }
        }
        let min_slope = best.min(self.profile_slope(0.5 * (a + b)));
        if min_slope >= 0.0 || self.eps == 0.0 {
            return None;
        }
        Some(-1.0 / (self.eps * min_slope))
    }
}
