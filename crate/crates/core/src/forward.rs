//! Forward statics of the mass-track-spring mechanism: given a track profile
//! Y(X) riding on a linear spring of stiffness K, compute spring force,
//! restoring force, potential energy, and effective stiffness.

use crate::error::{Error, Result};
use crate::gsm::LinearGsm;
use crate::inverse::TrackBranch;
use crate::spline::CubicSpline;

/// How a track's profile Y(X) is evaluated.
#[derive(Debug, Clone)]
pub enum Profile {
    /// Closed-form square-root branch from the inverse design.
    Branch(TrackBranch),
    /// Natural cubic spline through sampled (X, Y) points.
    Spline(CubicSpline),
}

/// A roller track coupled to a linear spring, valid on an open X-interval.
#[derive(Debug, Clone)]
pub struct Track {
    profile: Profile,
    gsm: LinearGsm,
    preload: f64,
    domain: (f64, f64),
}

impl Track {
    pub(crate) fn new(profile: Profile, gsm: LinearGsm, preload: f64, domain: (f64, f64)) -> Result<Self> {
        if preload.abs() >= gsm.travel_limit() {
            return Err(Error::TravelExceeded { y: preload, limit: gsm.travel_limit() });
        }
        if !(domain.0 < domain.1) {
            return Err(Error::InvalidParams(format!(
                "empty track domain ({}, {})",
                domain.0, domain.1
            )));
        }
        let track = Self { profile, gsm, preload, domain };
        let y0 = track.y_raw(0.0)?;
        if (y0 - preload).abs() >= 1e-9 * (1.0 + preload.abs()) {
            return Err(Error::InvalidParams(format!(
                "profile height at X = 0 is {y0}, expected preload {preload}"
            )));
        }
        Ok(track)
    }

    pub fn gsm(&self) -> &LinearGsm {
        &self.gsm
    }

    pub fn stiffness(&self) -> f64 {
        self.gsm.stiffness()
    }

    pub fn preload(&self) -> f64 {
        self.preload
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.domain.0 < x && x < self.domain.1)
            || (x == 0.0 && matches!(self.profile, Profile::Branch(_)))
    }

    fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { x, lo: self.domain.0, hi: self.domain.1 })
        }
    }

    fn y_raw(&self, x: f64) -> Result<f64> {
        match &self.profile {
            Profile::Branch(b) => b.eval_unchecked(x),
            Profile::Spline(s) => s.eval(x),
        }
    }

    /// Track height Y(x).
    pub fn y(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        self.y_raw(x)
    }

    /// Track slope dY/dX.
    pub fn dy(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        match &self.profile {
            Profile::Branch(b) => b.derivative_unchecked(x),
            Profile::Spline(s) => s.deriv(x),
        }
    }
}

/// Spring force in the transverse direction: `-K * Y(x)`.
pub fn spring_force(track: &Track, x: f64) -> Result<f64> {
    Ok(-track.stiffness() * track.y(x)?)
}

/// Restoring force along the motion direction: `-K * Y(x) * Y'(x)`.
///
/// For branch-backed tracks the product `Y * Y'` stays finite where Y
/// vanishes (it equals `-F/K` there), so the root of a zero-preload branch
/// is evaluated through that limit instead of the singular slope.
pub fn restoring_force(track: &Track, x: f64) -> Result<f64> {
    track.check(x)?;
    let k = track.stiffness();
    match &track.profile {
        Profile::Branch(b) => {
            let y = b.eval_unchecked(x)?;
            match b.derivative_unchecked(x) {
                Ok(dy) => Ok(-k * (y * dy)),
                Err(Error::RootSingularity { .. }) => Ok(-k * b.height_slope_product(x)?),
                Err(e) => Err(e),
            }
        }
        Profile::Spline(s) => Ok(-k * s.eval(x)? * s.deriv(x)?),
    }
}

/// Potential energy `(K/2) * (Y^2 - preload^2)`, normalized to zero at X = 0.
pub fn potential_energy(track: &Track, x: f64) -> Result<f64> {
    let y = track.y(x)?;
    let d = track.preload();
    Ok(0.5 * track.stiffness() * (y * y - d * d))
}

/// Negative slope of the restoring force, `K * (Y'^2 + Y * Y'')`, so a
/// positive value means a stabilizing (restoring) slope.
pub fn effective_stiffness(track: &Track, x: f64) -> Result<f64> {
    track.check(x)?;
    match &track.profile {
        // For a branch the restoring force equals the target F, so the
        // reported stiffness is -F'(x); this stays finite at Y = 0.
        Profile::Branch(b) => Ok(-b.force().derivative(x)?),
        Profile::Spline(s) => {
            let k = track.stiffness();
            Ok(k * (s.deriv(x)?.powi(2) + s.eval(x)? * s.deriv2(x)?))
        }
    }
}

/// Fits a natural cubic spline track through sampled (X, Y) points.
pub fn fit_track(samples: &[(f64, f64)], gsm: LinearGsm) -> Result<Track> {
    for &(_, y) in samples {
        if y.abs() >= gsm.travel_limit() {
            return Err(Error::TravelExceeded { y, limit: gsm.travel_limit() });
        }
    }
    let xs: Vec<f64> = samples.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = samples.iter().map(|p| p.1).collect();
    let spline = CubicSpline::new(xs, ys)?;
    if spline.x_min() > 0.0 || spline.x_max() < 0.0 {
        return Err(Error::InvalidParams(
            "track samples must bracket X = 0 (the preload is read there)".into(),
        ));
    }
    let preload = spline.eval(0.0)?;
    let domain = (spline.x_min(), spline.x_max());
    Track::new(Profile::Spline(spline), gsm, preload, domain)
}
