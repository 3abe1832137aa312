//! Method-of-lines solver for the one-dimensional beam transport system
//!
//! ```text
//! v_z + (v^2/2 - alpha*I)_x = 0
//! I_z + (I*v)_x + nu*I*v/x = 0
//! ```
//!
//! For `alpha > 0` the flux Jacobian has eigenvalues `v ± i sqrt(alpha I)`:
//! the initial value problem is elliptic in z, and a mode of wavenumber k
//! grows like `exp(sqrt(alpha I) k z)`. Plain upwind or central-upwind
//! differencing is useless here; its numerical dissipation (~ a k^2 dx)
//! loses to the physical growth (~ s k) for every k below ~ 2/dx, so the
//! scheme diverges faster the finer the grid. The well-posed statement of
//! the problem is for analytic boundary profiles, whose spectra decay
//! exponentially, so the solvable formulation is band-limited: we advance
//! centered second-order flux differences with classical Runge-Kutta in z
//! and project both fields onto wavenumbers `|k| <= filter_cutoff` after
//! every step. The cutoff is held fixed in physical k while the grid is
//! refined, which restores ordinary second-order convergence; the growth of
//! anything below the cutoff is bounded by `exp(s_max k_c z)` and stays at
//! the roundoff floor for the beams treated here.
//!
//! The band-limited formulation requires analytic profiles. A profile
//! truncated to vacuum carries an edge kink whose spectrum decays only
//! algebraically; the focusing dynamics amplifies that content at every
//! resolved wavenumber and the run breaks down before deep focusing, at
//! any resolution. That is a property of the equations, not of the
//! scheme.
//!
//! With `alpha = 0` the velocity component decouples into an inviscid
//! Burgers equation, which gives an independent cross-check against the
//! method of characteristics.

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::error::Error;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
pub enum GridError {
    /// The intensity dropped significantly below zero: scheme breakdown,
    /// usually past the focusing singularity.
    NegativeIntensity { z: f64, x: f64, value: f64 },
    /// A field stopped being finite.
    NotFinite { z: f64 },
    /// The CFL step fell below machine resolution relative to z.
    StepUnderflow { z: f64 },
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::NegativeIntensity { z, x, value } => {
                write!(f, "negative intensity {value:e} at z={z}, x={x}")
            }
            GridError::NotFinite { z } => write!(f, "non-finite field at z={z}"),
            GridError::StepUnderflow { z } => write!(f, "step underflow at z={z}"),
        }
    }
}

impl Error for GridError {}

#[derive(Clone, Debug)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    /// Node count including both endpoints; the domain is treated as
    /// periodic with `nodes - 1` distinct points, so an odd count puts a
    /// node exactly on the axis of a symmetric domain.
    pub nodes: usize,
    pub cfl: f64,
    /// Spectral low-pass cutoff in physical wavenumber (rad per unit x).
    pub filter_cutoff: f64,
}

impl GridSpec {
    /// Symmetric domain `[-half_width, half_width]`, CFL number 0.45,
    /// cutoff 35: analytic beam profiles of width ~1 sit over ten orders
    /// of magnitude below that in spectrum even near the focus, while the
    /// cutoff caps the elliptic roundoff growth at ~1e-6 over a focusing
    /// length.
    pub fn symmetric(half_width: f64, nodes: usize) -> Self {
        assert!(nodes >= 64, "grid too coarse");
        GridSpec {
            x_min: -half_width,
            x_max: half_width,
            nodes,
            cfl: 0.45,
            filter_cutoff: 35.0,
        }
    }

    /// Distinct periodic points.
    pub fn points(&self) -> usize {
        self.nodes - 1
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.points() as f64
    }

    pub fn coords(&self) -> Vec<f64> {
        let w = self.x_max - self.x_min;
        let m = self.points();
        (0..m).map(|j| self.x_min + w * j as f64 / m as f64).collect()
    }
}

#[derive(Clone, Debug)]
pub struct GridRun {
    pub x: Vec<f64>,
    /// Accepted step coordinates, starting at 0.
    pub z: Vec<f64>,
    /// `I(z, 0)` per accepted step.
    pub axis_intensity: Vec<f64>,
    /// `v_x(z, 0)` per accepted step, one-sided fourth-order stencil.
    pub axis_slope: Vec<f64>,
    /// Final velocity field.
    pub v: Vec<f64>,
    /// Final intensity field.
    pub intensity: Vec<f64>,
    pub steps: usize,
}

fn wave_speed(alpha: f64, v: f64, i: f64) -> f64 {
    v.abs() + (alpha * i.abs()).sqrt()
}

/// Fourth-order one-sided first derivative at node `j0` using `j0..j0+4`.
fn one_sided_slope(u: &[f64], j0: usize, dx: f64) -> f64 {
    (-25.0 * u[j0] + 48.0 * u[j0 + 1] - 36.0 * u[j0 + 2] + 16.0 * u[j0 + 3] - 3.0 * u[j0 + 4])
        / (12.0 * dx)
}

struct Filter {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// 1 for kept wavenumbers, 0 above the cutoff.
    mask: Vec<f64>,
    buf: Vec<Complex<f64>>,
}

impl Filter {
    fn new(m: usize, length: f64, cutoff: f64) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(m);
        let inv = planner.plan_fft_inverse(m);
        let dk = 2.0 * std::f64::consts::PI / length;
        let mask = (0..m)
            .map(|j| {
                let mode = if 2 * j <= m { j } else { m - j } as f64;
                if mode * dk <= cutoff {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        Filter {
            fwd,
            inv,
            mask,
            buf: vec![Complex::new(0.0, 0.0); m],
        }
    }

    /// Sharp, idempotent projection onto the kept band.
    fn apply(&mut self, u: &mut [f64]) {
        let m = u.len();
        for (b, &x) in self.buf.iter_mut().zip(u.iter()) {
            *b = Complex::new(x, 0.0);
        }
        self.fwd.process(&mut self.buf);
        for (b, &w) in self.buf.iter_mut().zip(self.mask.iter()) {
            *b *= w;
        }
        self.inv.process(&mut self.buf);
        let scale = 1.0 / m as f64;
        for (x, b) in u.iter_mut().zip(self.buf.iter()) {
            *x = b.re * scale;
        }
    }
}

/// Semi-discrete right side: centered conservative differences plus the
/// geometric source. On axisymmetric data v is odd in x, so the axis limit
/// of v/x is the centered v_x.
fn rhs(
    alpha: f64,
    nu: f64,
    dx: f64,
    x: &[f64],
    axis: Option<usize>,
    v: &[f64],
    w: &[f64],
    dv: &mut [f64],
    dw: &mut [f64],
) {
    let m = v.len();
    for j in 0..m {
        let jl = if j == 0 { m - 1 } else { j - 1 };
        let jr = if j == m - 1 { 0 } else { j + 1 };
        let fv_l = 0.5 * v[jl] * v[jl] - alpha * w[jl];
        let fv_r = 0.5 * v[jr] * v[jr] - alpha * w[jr];
        let fi_l = w[jl] * v[jl];
        let fi_r = w[jr] * v[jr];
        dv[j] = -(fv_r - fv_l) / (2.0 * dx);
        dw[j] = -(fi_r - fi_l) / (2.0 * dx);
        if nu != 0.0 {
            let ratio = if axis == Some(j) {
                (v[jr] - v[jl]) / (2.0 * dx)
            } else {
                v[j] / x[j]
            };
            dw[j] -= nu * w[j] * ratio;
        }
    }
}

/// Advances the beam system from the boundary profiles at `z = 0` to
/// `z_end`, recording the on-axis intensity and velocity slope after every
/// accepted step. Profiles must have decayed (or be vacuum) at the domain
/// ends, which the periodic wrap then leaves undisturbed.
pub fn solve_beam<FI, FV>(
    alpha: f64,
    nu: f64,
    init_intensity: FI,
    init_velocity: FV,
    z_end: f64,
    spec: &GridSpec,
) -> Result<GridRun, GridError>
where
    FI: Fn(f64) -> f64,
    FV: Fn(f64) -> f64,
{
    let m = spec.points();
    let dx = spec.dx();
    let x = spec.coords();
    let axis_j = x
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(j, _)| j)
        .unwrap();
    let source_axis = (x[axis_j].abs() < 1e-12 * dx.max(1.0)).then_some(axis_j);
    let mut filter = Filter::new(m, spec.x_max - spec.x_min, spec.filter_cutoff);

    let mut v: Vec<f64> = x.iter().map(|&xi| init_velocity(xi)).collect();
    let mut w: Vec<f64> = x.iter().map(|&xi| init_intensity(xi)).collect();

    let mut k1v = vec![0.0; m];
    let mut k1w = vec![0.0; m];
    let mut k2v = vec![0.0; m];
    let mut k2w = vec![0.0; m];
    let mut k3v = vec![0.0; m];
    let mut k3w = vec![0.0; m];
    let mut k4v = vec![0.0; m];
    let mut k4w = vec![0.0; m];
    let mut sv = vec![0.0; m];
    let mut sw = vec![0.0; m];

    let mut run = GridRun {
        x: x.clone(),
        z: vec![0.0],
        axis_intensity: vec![w[axis_j]],
        axis_slope: vec![one_sided_slope(&v, axis_j, dx)],
        v: Vec::new(),
        intensity: Vec::new(),
        steps: 0,
    };

    let mut z = 0.0;
    while z < z_end {
        let mut a_max: f64 = 0.0;
        for j in 0..m {
            a_max = a_max.max(wave_speed(alpha, v[j], w[j]));
        }
        let mut dz = if a_max > 1e-14 {
            spec.cfl * dx / a_max
        } else {
            spec.cfl * dx
        };
        if z + dz > z_end {
            dz = z_end - z;
        }
        if dz < f64::EPSILON * z.max(1.0) {
            return Err(GridError::StepUnderflow { z });
        }

        rhs(alpha, nu, dx, &x, source_axis, &v, &w, &mut k1v, &mut k1w);
        for j in 0..m {
            sv[j] = v[j] + 0.5 * dz * k1v[j];
            sw[j] = w[j] + 0.5 * dz * k1w[j];
        }
        rhs(alpha, nu, dx, &x, source_axis, &sv, &sw, &mut k2v, &mut k2w);
        for j in 0..m {
            sv[j] = v[j] + 0.5 * dz * k2v[j];
            sw[j] = w[j] + 0.5 * dz * k2w[j];
        }
        rhs(alpha, nu, dx, &x, source_axis, &sv, &sw, &mut k3v, &mut k3w);
        for j in 0..m {
            sv[j] = v[j] + dz * k3v[j];
            sw[j] = w[j] + dz * k3w[j];
        }
        rhs(alpha, nu, dx, &x, source_axis, &sv, &sw, &mut k4v, &mut k4w);
        for j in 0..m {
            v[j] += dz / 6.0 * (k1v[j] + 2.0 * k2v[j] + 2.0 * k3v[j] + k4v[j]);
            w[j] += dz / 6.0 * (k1w[j] + 2.0 * k2w[j] + 2.0 * k3w[j] + k4w[j]);
        }
        filter.apply(&mut v);
        filter.apply(&mut w);

        let mut scale: f64 = 0.0;
        for &wi in w.iter() {
            scale = scale.max(wi.abs());
        }
        for j in 0..m {
            if !v[j].is_finite() || !w[j].is_finite() {
                return Err(GridError::NotFinite { z });
            }
            // band-limiting a vacuum-truncated profile rings at ~1e-3 of
            // the peak; anything past this threshold is a real breakdown
            if w[j] < -0.05 * (1.0 + scale) {
                return Err(GridError::NegativeIntensity {
                    z,
                    x: x[j],
                    value: w[j],
                });
            }
        }
        z += dz;
        run.steps += 1;
        run.z.push(z);
        run.axis_intensity.push(w[axis_j]);
        run.axis_slope.push(one_sided_slope(&v, axis_j, dx));
    }

    run.v = v;
    run.intensity = w;
    Ok(run)
}

/// Observed convergence order from errors at two refinements with the
/// step halved.
pub fn convergence_order(err_coarse: f64, err_fine: f64) -> f64 {
    (err_coarse / err_fine).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::root::brent;

    #[test]
    fn zero_refraction_and_zero_velocity_freeze_the_profile() {
        let spec = GridSpec::symmetric(8.0, 257);
        let run = solve_beam(0.0, 0.0, |x: f64| (-x * x).exp(), |_| 0.0, 1.0, &spec).unwrap();
        for (j, &xj) in run.x.iter().enumerate() {
            let i0 = (-xj * xj).exp();
            assert!((run.intensity[j] - i0).abs() < 1e-9);
            assert_eq!(run.v[j], 0.0);
        }
    }

    #[test]
    fn burgers_limit_matches_characteristics() {
        // alpha = 0 decouples v into u_z + u u_x = 0; the entropy solution
        // before crossing is u(z, x) = U(x0) with x0 + z U(x0) = x
        let profile = |x: f64| 0.5 * (-x * x).exp();
        let spec = GridSpec::symmetric(8.0, 1601);
        let z = 0.5;
        let run = solve_beam(0.0, 0.0, |_| 1.0, profile, z, &spec).unwrap();
        let mut worst: f64 = 0.0;
        for (j, &xj) in run.x.iter().enumerate() {
            if xj.abs() > 2.0 {
                continue;
            }
            let x0 = brent(|s| s + z * profile(s) - xj, -6.0, 6.0, 1e-13).unwrap();
            worst = worst.max((run.v[j] - profile(x0)).abs());
        }
        assert!(worst < 5e-3, "worst deviation {worst}");
    }

    /// Axis intensity of the focusing cosh^-2 beam from inverting
    /// z = sqrt(I-1)/(sqrt(alpha) I) on the branch I in [1, 2).
    fn soliton_axis(alpha: f64, z: f64) -> f64 {
        let a = alpha * z * z;
        (1.0 - (1.0 - 4.0 * a).sqrt()) / (2.0 * a)
    }

    #[test]
    fn soliton_beam_axis_intensity_tracks_the_implicit_law() {
        let alpha: f64 = 0.1;
        let zs = 1.0 / (2.0 * alpha.sqrt());
        let spec = GridSpec::symmetric(25.0, 2001);
        let run = solve_beam(alpha, 0.0, |x: f64| 1.0 / x.cosh().powi(2), |_| 0.0, 0.8 * zs, &spec)
            .unwrap();
        let z = *run.z.last().unwrap();
        let exact = soliton_axis(alpha, z);
        let got = *run.axis_intensity.last().unwrap();
        assert!(
            (got - exact).abs() / exact < 5e-3,
            "axis intensity {got} vs {exact}"
        );
    }

    #[test]
    fn axis_error_shrinks_at_second_order() {
        let alpha: f64 = 0.1;
        let zs = 1.0 / (2.0 * alpha.sqrt());
        let err = |nodes: usize| {
            let spec = GridSpec::symmetric(25.0, nodes);
            let run =
                solve_beam(alpha, 0.0, |x: f64| 1.0 / x.cosh().powi(2), |_| 0.0, 0.8 * zs, &spec)
                    .unwrap();
            let z = *run.z.last().unwrap();
            let exact = soliton_axis(alpha, z);
            (run.axis_intensity.last().unwrap() - exact).abs()
        };
        let order = convergence_order(err(1001), err(2001));
        assert!(
            (1.5..=2.5).contains(&order),
            "observed order {order} outside [1.5, 2.5]"
        );
    }

    /// A vacuum-truncated profile is not analytic at its edge, and the
    /// focusing system amplifies a mode of wavenumber k at rate
    /// sqrt(alpha I) k: the edge kink seeds every resolved wavenumber, so
    /// the run must break down before deep focusing no matter the
    /// resolution. The parabolic closed form is verified symbolically and
    /// through its invariants instead.
    #[test]
    fn vacuum_edge_breaks_down_before_deep_focus() {
        let alpha: f64 = 0.1;
        let zs = 1.0 / (2.0 * alpha).sqrt();
        let spec = GridSpec::symmetric(25.0, 2001);
        let out = solve_beam(
            alpha,
            1.0,
            |x: f64| if x.abs() < 1.0 { 1.0 - x * x } else { 0.0 },
            |_| 0.0,
            0.8 * zs,
            &spec,
        );
        assert!(
            matches!(out, Err(GridError::NegativeIntensity { .. })),
            "expected edge-instability breakdown, got {:?}",
            out.map(|r| r.steps)
        );
    }
}
