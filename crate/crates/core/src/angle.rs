//! Maximization of a quadrature figure of merit over the measurement angle.

use std::f64::consts::PI;

use crate::error::Result;

/// Uniform samples on `[0, π)` before refinement.
pub const GRID_POINTS: usize = 720;
/// Bracket width at which golden-section refinement stops.
pub const ANGLE_TOL: f64 = 1e-10;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Maximize a π-periodic `f` over `[0, π)`.
///
/// The best grid sample wins ties (smallest angle first); refinement only
/// replaces it when it finds a strictly larger value. Returns `(θ*, f(θ*))`.
pub fn maximize<F>(f: F) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let h = PI / GRID_POINTS as f64;
    let mut best = (0.0, f(0.0)?);
    for i in 1..GRID_POINTS {
        let th = i as f64 * h;
        let v = f(th)?;
        if v > best.1 {
            best = (th, v);
        }
    }

    let (mut a, mut b) = (best.0 - h, best.0 + h);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > ANGLE_TOL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid)?;
    if fm > best.1 {
        let th = mid.rem_euclid(PI);
        // reduce without losing the maximum to wrap-around rounding
        let v = f(th)?;
        if v >= fm || (v - fm).abs() <= 1e-15 * fm.abs() {
            best = (th, v.max(fm));
        } else {
            best = (mid, fm);
        }
    }
    Ok(best)
}

/// Unwrap a sequence of π-periodic angles into a continuous trace.
pub fn unwrap_pi(angles: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len());
    let mut offset = 0.0;
    for (i, &a) in angles.iter().enumerate() {
        if i > 0 {
            let prev = angles[i - 1];
            let jump = a - prev;
            if jump > PI / 2.0 {
                offset -= PI;
            } else if jump < -PI / 2.0 {
                offset += PI;
            }
        }
        out.push(a + offset);
    }
    out
}
