//! Characteristics of the dissipationless transport equation
//! `u_z = -eps u u_x`: the value of `u` is carried unchanged along straight
//! rays `x = s + eps z U(s)` leaving the foot point `s` on the boundary.
//! Solving for the foot point gives the solution without touching the
//! inverse profile, so this route is independent of the one in
//! [`crate::scenarios::HopfScenario::exact`] and serves as its cross-check.

use crate::numerics::root;
use crate::scenarios::hopf::{HopfError, HopfScenario};

/// Solves `s + eps z U(s) = x` for the foot point of the ray through
/// `(z, x)`. Errors when rays cross (several foot points) or once `z`
/// reaches the breaking distance.
pub fn foot_point(scn: &HopfScenario, z: f64, x: f64) -> Result<f64, HopfError> {
    if let Some(zb) = scn.singularity_z() {
        if z >= zb {
            return Err(HopfError::Multivalued { z, x });
        }
    }
    let g = |s: f64| s + scn.eps * z * scn.profile_value(s) - x;
    // Scan an expanding window around x for sign-change cells instead of
    // relying on the endpoint signs: a steep profile tail can flip the
    // orientation at large |s| even when a clean crossing sits inside.
    let mut r = 1.0 + x.abs();
    let n = 512;
    for _ in 0..60 {
        let (lo, hi) = (x - r, x + r);
        let mut cells: Vec<(f64, f64)> = Vec::new();
        let mut prev_s = lo;
        let mut prev_g = g(lo);
        let mut exact: Option<f64> = None;
        for k in 1..=n {
            let s = lo + (hi - lo) * k as f64 / n as f64;
            let cur = g(s);
            if prev_g == 0.0 {
                exact = Some(prev_s);
            } else if cur != 0.0 && cur.signum() != prev_g.signum() {
                cells.push((prev_s, s));
            }
            prev_s = s;
            prev_g = cur;
        }
        if prev_g == 0.0 {
            exact = Some(prev_s);
        }
        match (exact, cells.len()) {
            (Some(s), 0) => return Ok(s),
            (None, 1) => {
                let (a, b) = cells[0];
                return root::brent(g, a, b, 1e-14)
                    .map_err(|e| HopfError::NoRoot { z, x, detail: e });
            }
            (None, 0) => r *= 2.0,
            _ => return Err(HopfError::Multivalued { z, x }),
        }
    }
    Err(HopfError::Multivalued { z, x })
}

/// `u(z, x)` transported along the ray.
pub fn value(scn: &HopfScenario, z: f64, x: f64) -> Result<f64, HopfError> {
    Ok(scn.profile_value(foot_point(scn, z, x)?))
}

/// `u_x(z, x)` from differentiating the ray construction:
/// `u_x = U'(s) / (1 + eps z U'(s))`. The denominator reaching zero is the
/// caustic, reported as a crossing.
pub fn slope(scn: &HopfScenario, z: f64, x: f64) -> Result<f64, HopfError> {
    let s = foot_point(scn, z, x)?;
    let d = scn.profile_slope(s);
    let den = 1.0 + scn.eps * z * d;
    if den.abs() < 1e-12 {
        return Err(HopfError::Multivalued { z, x });
    }
    Ok(d / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear() -> HopfScenario {
        HopfScenario::new(0.1, "-x", -2.0, 2.0).unwrap()
    }

    #[test]
    fn linear_profile_reproduces_the_focusing_closed_form() {
        let s = linear();
        for k in 0..40 {
            let z = 9.0 * k as f64 / 39.0;
            for j in 0..9 {
                let x = -2.0 + 0.5 * j as f64;
                let u = value(&s, z, x).unwrap();
                let want = -x / (1.0 - 0.1 * z);
                assert!((u - want).abs() < 1e-10, "u({z},{x}) = {u}, want {want}");
                let ux = slope(&s, z, x).unwrap();
                let want_x = -1.0 / (1.0 - 0.1 * z);
                assert!((ux - want_x).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn agrees_with_the_inverse_profile_route() {
        // Breaking distance for this profile over the certified window is
        // z = 1/(0.2 * 5) = 1; stay below it.
        let s = HopfScenario::new(0.2, "-x - x^3/3", -2.0, 2.0).unwrap();
        for &(z, x) in &[(0.3, 0.3), (0.5, -1.2), (0.8, 1.9), (0.95, -0.7)] {
            let a = value(&s, z, x).unwrap();
            let b = s.exact(z, x).unwrap();
            assert!((a - b).abs() < 1e-11, "({z},{x}): {a} vs {b}");
        }
    }

    #[test]
    fn slope_matches_finite_differences() {
        let s = HopfScenario::new(0.2, "-x - x^3/3", -2.0, 2.0).unwrap();
        let (z, x, h) = (0.6, 0.4, 1e-6);
        let fd = (value(&s, z, x + h).unwrap() - value(&s, z, x - h).unwrap()) / (2.0 * h);
        let an = slope(&s, z, x).unwrap();
        assert!((fd - an).abs() < 1e-8, "{fd} vs {an}");
    }

    #[test]
    fn crossing_rays_are_reported() {
        let s = linear();
        assert!(matches!(
            value(&s, 10.5, 0.3),
            Err(HopfError::Multivalued { .. })
        ));
    }
}
