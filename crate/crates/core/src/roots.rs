//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// Finds a root of `f` inside `[lo, hi]` by bisection followed by secant
/// refinement. The bracket must contain a sign change.
///
/// Converges to `|hi - lo| <= rtol * |root|`; the secant steps are accepted
/// only while they stay inside the current bracket.
pub fn bisect_secant<F>(f: F, lo: f64, hi: f64, rtol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracketing { lo: a, hi: b });
    }

    // coarse bisection: shrink to ~1e-4 relative before switching to secant
    for _ in 0..200 {
        if (b - a) <= 1e-4 * a.abs().max(b.abs()) {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }

    for _ in 0..200 {
        let scale = a.abs().max(b.abs());
        if (b - a) <= rtol * scale {
            break;
        }
        let secant = b - fb * (b - a) / (fb - fa);
        let mid = 0.5 * (a + b);
        let trial = if secant.is_finite() && secant > a && secant < b {
            secant
        } else {
            mid
        };
        let ft = f(trial)?;
        if ft == 0.0 {
            return Ok(trial);
        }
        if ft.signum() == fa.signum() {
            a = trial;
            fa = ft;
        } else {
            b = trial;
            fb = ft;
        }
        // a secant step that only moves one end stalls; force a bisection
        let shrink_scale = a.abs().max(b.abs());
        if (b - a) > rtol * shrink_scale {
            let m = 0.5 * (a + b);
            let fm = f(m)?;
            if fm == 0.0 {
                return Ok(m);
            }
            if fm.signum() == fa.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
        }
    }
    // interpolate inside the final bracket
    let root = if fb != fa {
        b - fb * (b - a) / (fb - fa)
    } else {
        0.5 * (a + b)
    };
    Ok(root.clamp(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root_of_two() {
        let r = bisect_secant(|x| Ok(x * x * x - 2.0), 0.5, 3.0, 1e-14).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn reversed_bracket() {
        let r = bisect_secant(|x| Ok(x.cos()), 3.0, 0.0, 1e-14).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn no_sign_change_is_error() {
        let e = bisect_secant(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(e, Error::Bracketing { .. }));
    }
}
