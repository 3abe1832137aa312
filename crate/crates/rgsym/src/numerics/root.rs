//! Bracketed scalar root finding.

use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum RootError {
    /// No sign change over the bracket.
    NoBracket { fa: f64, fb: f64 },
    /// NaN from the function.
    NotANumber,
    TooManyIterations,
}

impl fmt::Display for RootError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootError::NoBracket { fa, fb } => {
                write!(f, "no sign change over bracket: f(a)={fa}, f(b)={fb}")
            }
            RootError::NotANumber => write!(f, "function returned NaN"),
            RootError::TooManyIterations => write!(f, "iteration limit reached"),
        }
    }
}

impl std::error::Error for RootError {}

fn sign_ok(v: f64) -> Result<f64, RootError> {
    if v.is_nan() {
        Err(RootError::NotANumber)
    } else {
        Ok(v)
    }
}

/// Plain bisection. Infinite function values are acceptable as long as their
/// sign is defined, which matters for stiffly overflowing integrands: the
/// bracket keeps shrinking on sign information alone.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    xtol: f64,
) -> Result<f64, RootError> {
    let mut fa = sign_ok(f(a))?;
    let fb = sign_ok(f(b))?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NoBracket { fa, fb });
    }
    for _ in 0..400 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= xtol + f64::EPSILON * m.abs() {
            return Ok(m);
        }
        let fm = sign_ok(f(m))?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Err(RootError::TooManyIterations)
}

/// Brent's method: inverse quadratic interpolation with secant and bisection
/// safeguards. Converges superlinearly on smooth functions while never
/// leaving the bracket.
pub fn brent<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    xtol: f64,
) -> Result<f64, RootError> {
    let mut fa = sign_ok(f(a))?;
    let mut fb = sign_ok(f(b))?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NoBracket { fa, fb });
    }
    if !fa.is_finite() || !fb.is_finite() {
        // fall back to the sign-only method
        return bisect(f, a, b, xtol);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.abs() > fc.abs() {
            // b is the best guess; keep it that way
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                // secant
                (2.0 * xm * s, 1.0 - s)
            } else {
                // inverse quadratic
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 {
            d
        } else {
            tol1.copysign(xm)
        };
        fb = sign_ok(f(b))?;
        if !fb.is_finite() {
            return bisect(f, a.min(c), a.max(c), xtol);
        }
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    Err(RootError::TooManyIterations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_a_polynomial_root_to_machine_accuracy() {
        let r = brent(|x| x * x * x - 2.0, 1.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.powf(1.0 / 3.0)).abs() < 1e-14);
        assert!((r * r * r - 2.0).abs() < 1e-13);
    }

    #[test]
    fn transcendental_root() {
        let r = brent(|x| x.cos() - x, 0.0, 1.0, 1e-15).unwrap();
        assert!((r.cos() - r).abs() < 1e-14);
    }

    #[test]
    fn bisection_survives_overflowing_values() {
        // exp(600 x) - 10 overflows to +inf on most of the bracket.
        let r = bisect(|x| (600.0 * x).exp() - 10.0, -2.0, 2.0, 1e-13).unwrap();
        assert!((r - 10f64.ln() / 600.0).abs() < 1e-12);
    }

    #[test]
    fn missing_bracket_is_reported() {
        assert!(matches!(
            brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(RootError::NoBracket { .. })
        ));
    }
}
