//! Adaptive explicit Runge-Kutta integration.
//!
//! Dormand-Prince 5(4): fifth-order solution with an embedded fourth-order
//! error estimate and a standard step controller. Integration can stop
//! early on solution blow-up or step underflow, both reported in the
//! outcome so callers can locate singular points.

#[derive(Clone, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; guessed from the first derivative when absent.
    pub h0: Option<f64>,
    pub max_steps: usize,
    /// Stop once any |y_i| exceeds this.
    pub blowup: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            h0: None,
            max_steps: 10_000_000,
            blowup: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Completed,
    /// A component exceeded the blow-up threshold; holds the last time.
    Blowup(f64),
    /// The controller pushed the step below machine resolution; holds the
    /// last time. Happens when integrating into a singularity.
    StepUnderflow(f64),
    MaxStepsExceeded(f64),
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub t: f64,
    pub y: Vec<f64>,
    pub outcome: Outcome,
    pub steps: usize,
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// embedded 4th order weights
const E1: f64 = 5179.0 / 57600.0;
const E3: f64 = 7571.0 / 16695.0;
const E4: f64 = 393.0 / 640.0;
const E5: f64 = -92097.0 / 339200.0;
const E6: f64 = 187.0 / 2100.0;
const E7: f64 = 1.0 / 40.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

/// Integrates `y' = f(t, y)` from `t0` to `t_end` (either direction).
pub fn integrate<F: FnMut(f64, &[f64], &mut [f64])>(
    mut f: F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    opts: &OdeOptions,
) -> Solution {
    let n = y0.len();
    let dir = (t_end - t0).signum();
    let mut t = t0;
    let mut y = y0.to_vec();
    if dir == 0.0 {
        return Solution {
            t,
            y,
            outcome: Outcome::Completed,
            steps: 0,
        };
    }
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut stage = vec![0.0; n];
    let mut ynew = vec![0.0; n];

    let mut h = opts.h0.unwrap_or_else(|| {
        f(t, &y, &mut k1);
        let d0 = l2(&y);
        let d1 = l2(&k1);
        let guess = if d0 > 1e-5 && d1 > 1e-5 { 0.01 * d0 / d1 } else { 1e-6 };
        guess.min((t_end - t0).abs())
    }) * dir;

    let mut steps = 0;
    loop {
        if steps >= opts.max_steps {
            return Solution {
                t,
                y,
                outcome: Outcome::MaxStepsExceeded(t),
                steps,
            };
        }
        if (t - t_end) * dir >= 0.0 {
            return Solution {
                t,
                y,
                outcome: Outcome::Completed,
                steps,
            };
        }
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }
        if h.abs() < f64::EPSILON * t.abs().max(1e-3) {
            return Solution {
                t,
                y,
                outcome: Outcome::StepUnderflow(t),
                steps,
            };
        }

        f(t, &y, &mut k1);
        for i in 0..n {
            stage[i] = y[i] + h * A21 * k1[i];
        }
        f(t + C2 * h, &stage, &mut k2);
        for i in 0..n {
            stage[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        f(t + C3 * h, &stage, &mut k3);
        for i in 0..n {
            stage[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        f(t + C4 * h, &stage, &mut k4);
        for i in 0..n {
            stage[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f(t + C5 * h, &stage, &mut k5);
        for i in 0..n {
            stage[i] = y[i]
                + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        f(t + h, &stage, &mut k6);
        for i in 0..n {
            ynew[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        f(t + h, &ynew, &mut k7);

        let mut err: f64 = 0.0;
        let mut finite = true;
        for i in 0..n {
            let e4 = y[i]
                + h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                    + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * ynew[i].abs().max(y[i].abs());
            let d = (ynew[i] - e4) / sc;
            if !d.is_finite() {
                finite = false;
                break;
            }
            err += d * d;
        }
        let err = if finite { (err / n as f64).sqrt() } else { f64::INFINITY };

        if err <= 1.0 {
            t += h;
            y.copy_from_slice(&ynew);
            steps += 1;
            if let Some(cap) = opts.blowup {
                if y.iter().any(|v| v.abs() > cap) {
                    return Solution {
                        t,
                        y,
                        outcome: Outcome::Blowup(t),
                        steps,
                    };
                }
            }
            let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= grow;
        } else {
            let shrink = if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.1
            };
            h *= shrink;
        }
    }
}

/// Integrates through the ordered sample times, recording the state at each.
/// Stops early on a non-completed outcome; the returned rows cover the
/// samples actually reached.
pub fn sample_path<F: FnMut(f64, &[f64], &mut [f64])>(
    mut f: F,
    t0: f64,
    y0: &[f64],
    ts: &[f64],
    opts: &OdeOptions,
) -> (Vec<Vec<f64>>, Outcome) {
    let mut rows = Vec::with_capacity(ts.len());
    let mut t = t0;
    let mut y = y0.to_vec();
    for &target in ts {
        if target == t {
            rows.push(y.clone());
            continue;
        }
        let sol = integrate(&mut f, t, &y, target, opts);
        if sol.outcome != Outcome::Completed {
            return (rows, sol.outcome);
        }
        t = sol.t;
        y = sol.y;
        rows.push(y.clone());
    }
    (rows, Outcome::Completed)
}

fn l2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_to_tight_tolerance() {
        let sol = integrate(
            |_, y, dy| dy[0] = -y[0],
            0.0,
            &[1.0],
            5.0,
            &OdeOptions::default(),
        );
        assert_eq!(sol.outcome, Outcome::Completed);
        assert!((sol.y[0] - (-5.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn harmonic_oscillator_keeps_energy() {
        let sol = integrate(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            &[1.0, 0.0],
            20.0 * std::f64::consts::PI,
            &OdeOptions::default(),
        );
        assert_eq!(sol.outcome, Outcome::Completed);
        let e = sol.y[0] * sol.y[0] + sol.y[1] * sol.y[1];
        assert!((e - 1.0).abs() < 1e-8, "energy drift {e}");
        assert!((sol.y[0] - 1.0).abs() < 1e-7);
    }

    #[test]
    fn blowup_of_a_riccati_equation_is_located() {
        // y' = 1 + y^2 from 0: y = tan(t), singular at pi/2.
        let opts = OdeOptions {
            blowup: Some(1e12),
            ..OdeOptions::default()
        };
        let sol = integrate(|_, y, dy| dy[0] = 1.0 + y[0] * y[0], 0.0, &[0.0], 3.0, &opts);
        match sol.outcome {
            Outcome::Blowup(t) => {
                assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-6, "stopped at {t}")
            }
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn sampling_hits_requested_points() {
        let ts = [0.5, 1.0, 2.0];
        let (rows, outcome) = sample_path(
            |_, y, dy| dy[0] = y[0],
            0.0,
            &[1.0],
            &ts,
            &OdeOptions::default(),
        );
        assert_eq!(outcome, Outcome::Completed);
        for (row, t) in rows.iter().zip(ts.iter()) {
            assert!((row[0] - t.exp()).abs() < 1e-9);
        }
    }

    #[test]
    fn integrates_backwards() {
        let sol = integrate(
            |_, y, dy| dy[0] = -y[0],
            1.0,
            &[(-1.0f64).exp()],
            0.0,
            &OdeOptions::default(),
        );
        assert_eq!(sol.outcome, Outcome::Completed);
        assert!((sol.y[0] - 1.0).abs() < 1e-10);
    }
}
