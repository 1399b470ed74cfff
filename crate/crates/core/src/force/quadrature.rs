//! Adaptive Simpson quadrature with Richardson correction.

use crate::error::{Error, Result};

pub const MAX_DEPTH: u32 = 60;

struct Panel {
    a: f64,
    c: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
}

fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    panel: Panel,
    tol: f64,
    floor: f64,
    depth: u32,
    a0: f64,
    b0: f64,
) -> Result<f64> {
    let Panel { a, c, fa, fb, fc, whole } = panel;
    let b = 0.5 * (a + c);
    let d = 0.5 * (a + b);
    let e = 0.5 * (b + c);
    let (fd, fe) = (f(d), f(e));
    let h = c - a;
    let left = h * (fa + 4.0 * fd + fb) / 12.0;
    let right = h * (fb + 4.0 * fe + fc) / 12.0;
    let split = left + right;
    let err = split - whole;
    // Accept at the requested tolerance, or at the roundoff floor: the error
    // estimate bottoms out near eps times the magnitude of the integral, and
    // below that level subdividing only amplifies noise.
    if err.abs() <= 15.0 * tol || err.abs() <= floor {
        return Ok(split + err / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::QuadratureFailure { a: a0, b: b0, max_depth: MAX_DEPTH });
    }
    let l = recurse(
        f,
        Panel { a, c: b, fa, fb: fd, fc: fb, whole: left },
        0.5 * tol,
        floor,
        depth + 1,
        a0,
        b0,
    )?;
    let r = recurse(
        f,
        Panel { a: b, c, fa: fb, fb: fe, fc, whole: right },
        0.5 * tol,
        floor,
        depth + 1,
        a0,
        b0,
    )?;
    Ok(l + r)
}

/// Integrates `f` over `[a, b]` (either order) to absolute tolerance `tol`,
/// or to the roundoff floor of the integral's magnitude when `tol` lies
/// below what f64 arithmetic can resolve.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return Ok(-adaptive_simpson(f, b, a, tol)?);
    }
    let m = 0.5 * (a + b);
    let (fa, fb, fc) = (f(a), f(m), f(b));
    let whole = (b - a) * (fa + 4.0 * fb + fc) / 6.0;
    // Coarse Riemann estimate of the integral of |f|, setting the magnitude
    // below which error estimates are pure floating-point noise.
    let mut mag = 0.0;
    for i in 0..=8 {
        mag += f(a + (b - a) * i as f64 / 8.0).abs();
    }
    let floor = 30.0 * f64::EPSILON * (b - a) * mag / 9.0;
    recurse(f, Panel { a, c: b, fa, fb, fc, whole }, tol, floor, 0, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_is_nearly_exact() {
        let v = adaptive_simpson(&|x: f64| 5000.0 * x * x * x, 0.0, 0.1, 1e-12).unwrap();
        assert!((v - 0.125).abs() < 1e-13);
    }

    #[test]
    fn transcendental_to_tolerance() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, 2.0, 1e-12).unwrap();
        assert!((v - (1.0 - 2.0f64.cos())).abs() < 1e-11);
    }

    #[test]
    fn reversed_interval_negates() {
        let a = adaptive_simpson(&|x: f64| x.exp(), 0.0, 1.0, 1e-12).unwrap();
        let b = adaptive_simpson(&|x: f64| x.exp(), 1.0, 0.0, 1e-12).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn endpoint_singularity_exhausts_depth() {
        assert!(matches!(
            adaptive_simpson(&|x: f64| x.abs().powf(-0.9), 0.0, 1.0, 1e-12),
            Err(Error::QuadratureFailure { .. })
        ));
    }
}
