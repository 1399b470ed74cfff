//! Static force and stiffness laws of the general spring model (GSM).
//!
//! The GSM is a vertical spring of stiffness `K1` in parallel with a pair of
//! oblique springs of stiffness `K2` mounted on rigid rods of length `L`.
//! With `B = 0` it degenerates to a plain linear spring of net stiffness
//! `K1 - 2*K2`, which may be negative, zero or positive.

use crate::error::{Error, Result};

/// Relative tolerance used to flag the quasi-zero-stiffness tuning `K1 = 2*K2`.
pub const QZS_REL_TOL: f64 = 1e-9;

/// Physical parameters of the general spring model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GsmParams {
    /// Vertical spring stiffness K1 [N/m].
    pub k_vertical: f64,
    /// Oblique spring stiffness K2 [N/m].
    pub k_oblique: f64,
    /// Half gap B between the inner spring ends at equilibrium [m].
    pub half_gap: f64,
    /// Rod length L [m]; the roller locks at |Y| = L.
    pub rod_length: f64,
}

impl GsmParams {
    pub fn new(k_vertical: f64, k_oblique: f64, half_gap: f64, rod_length: f64) -> Result<Self> {
        if !rod_length.is_finite() || rod_length <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "rod length must be positive, got {rod_length}"
            )));
        }
        if !half_gap.is_finite() || half_gap < 0.0 || half_gap >= rod_length {
            return Err(Error::InvalidParams(format!(
                "half gap must satisfy 0 <= B < L, got B = {half_gap}, L = {rod_length}"
            )));
        }
        if !k_vertical.is_finite() || !k_oblique.is_finite() {
            return Err(Error::InvalidParams("stiffness must be finite".into()));
        }
        Ok(Self { k_vertical, k_oblique, half_gap, rod_length })
    }

    /// True when the linear (`B = 0`) tuning yields quasi-zero net stiffness.
    pub fn is_quasi_zero(&self) -> bool {
        self.half_gap == 0.0
            && (self.k_vertical - 2.0 * self.k_oblique).abs() <= QZS_REL_TOL * self.k_vertical.abs()
    }
}

/// A GSM reduced to its linear `B = 0` form with nonzero net stiffness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearGsm {
    stiffness: f64,
    travel_limit: f64,
}

impl LinearGsm {
    pub fn new(stiffness: f64, travel_limit: f64) -> Result<Self> {
        if !travel_limit.is_finite() || travel_limit <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "travel limit must be positive, got {travel_limit}"
            )));
        }
        if !stiffness.is_finite() || stiffness == 0.0 {
            return Err(Error::ZeroStiffness);
        }
        Ok(Self { stiffness, travel_limit })
    }

    pub fn stiffness(&self) -> f64 {
        self.stiffness
    }

    pub fn travel_limit(&self) -> f64 {
        self.travel_limit
    }
}

/// Result of collapsing a `B = 0` GSM to its net linear stiffness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinearStiffness {
    Spring(LinearGsm),
    /// `K1 = 2*K2`: valid statics, but unusable by the inverse design.
    Zero { travel_limit: f64 },
}

impl LinearStiffness {
    pub fn value(&self) -> f64 {
        match self {
            LinearStiffness::Spring(s) => s.stiffness(),
            LinearStiffness::Zero { .. } => 0.0,
        }
    }
}

fn check_range(params: &GsmParams, y: f64) -> Result<()> {
    if y.abs() >= params.rod_length {
        return Err(Error::LockedRange { y, rod_length: params.rod_length });
    }
    Ok(())
}

/// Applied force needed to hold the roller at displacement `y`:
/// `K1*y - 2*K2*(1 - B/sqrt(L^2 - y^2))*y`.
pub fn gsm_force(params: &GsmParams, y: f64) -> Result<f64> {
    check_range(params, y)?;
    let l2 = params.rod_length * params.rod_length;
    let geom = 1.0 - params.half_gap / (l2 - y * y).sqrt();
    Ok(params.k_vertical * y - 2.0 * params.k_oblique * geom * y)
}

/// Tangent stiffness at displacement `y`:
/// `K1 - 2*K2 + 2*K2*B*L^2 / (L^2 - y^2)^(3/2)`.
pub fn gsm_stiffness(params: &GsmParams, y: f64) -> Result<f64> {
    check_range(params, y)?;
    let l2 = params.rod_length * params.rod_length;
    let denom = (l2 - y * y).powf(1.5);
    Ok(params.k_vertical - 2.0 * params.k_oblique
        + 2.0 * params.k_oblique * params.half_gap * l2 / denom)
}

/// Net stiffness `K1 - 2*K2` of the linear `B = 0` case.
pub fn linear_stiffness(params: &GsmParams) -> Result<LinearStiffness> {
    if params.half_gap != 0.0 {
        return Err(Error::NotLinear { half_gap: params.half_gap });
    }
    let k = params.k_vertical - 2.0 * params.k_oblique;
    if params.is_quasi_zero() {
        Ok(LinearStiffness::Zero { travel_limit: params.rod_length })
    } else {
        Ok(LinearStiffness::Spring(LinearGsm::new(k, params.rod_length)?))
    }
}
