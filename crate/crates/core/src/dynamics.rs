//! Conservative time integration of the track equation of motion
//! `M * Xdd = -K * Y(X) * Y'(X)` and of reference systems `M * Xdd = F(X)`,
//! with lock detection, energy monitoring, and trajectory comparison.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::force::{ForceSpec, IntegralCache};
use crate::forward::{potential_energy, restoring_force, Track};

/// Lock guard default as a fraction of the travel limit.
pub const DEFAULT_LOCK_GUARD_FRACTION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    VelocityVerlet,
    Rk4,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::VelocityVerlet => "verlet",
            Method::Rk4 => "rk4",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "verlet" => Some(Method::VelocityVerlet),
            "rk4" => Some(Method::Rk4),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SimConfig {
    pub mass: f64,
    pub dt: f64,
    pub t_end: f64,
    pub method: Method,
    /// Lock guard [m]; `None` means `1e-6 * travel_limit`.
    pub lock_guard: Option<f64>,
    /// Record every n-th step (the initial and final states are always kept).
    pub record_stride: usize,
}

impl SimConfig {
    pub fn new(mass: f64, dt: f64, t_end: f64) -> Result<Self> {
        if !(mass > 0.0) || !(dt > 0.0) || !(t_end > 0.0) {
            return Err(Error::InvalidParams(format!(
                "mass, dt and t_end must be positive (got {mass}, {dt}, {t_end})"
            )));
        }
        Ok(Self {
            mass,
            dt,
            t_end,
            method: Method::VelocityVerlet,
            lock_guard: None,
            record_stride: 1,
        })
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_stride(mut self, stride: usize) -> Result<Self> {
        if stride == 0 {
            return Err(Error::InvalidParams("record stride must be at least 1".into()));
        }
        self.record_stride = stride;
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub v: f64,
    pub e: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    Completed,
    Locked { t: f64, x: f64 },
    DomainExit { t: f64, x: f64 },
    NonFinite { t: f64 },
}

#[derive(Debug, Clone)]
pub struct SimResult {
    pub samples: Vec<Sample>,
    pub termination: Termination,
    pub dt: f64,
    pub steps: usize,
}

/// Why a step could not be completed.
enum StepFault {
    OutOfDomain { x: f64 },
    NonFinite,
}

/// One integration step of `(x, v)` under acceleration `accel`; `accel`
/// returns `Err(StepFault)` to abort the step.
fn step<F: Fn(f64) -> std::result::Result<f64, StepFault>>(
    method: Method,
    accel: &F,
    x: f64,
    v: f64,
    a: f64,
    dt: f64,
) -> std::result::Result<(f64, f64, f64), StepFault> {
    match method {
        Method::VelocityVerlet => {
            let x1 = x + v * dt + 0.5 * a * dt * dt;
            let a1 = accel(x1)?;
            let v1 = v + 0.5 * (a + a1) * dt;
            Ok((x1, v1, a1))
        }
        Method::Rk4 => {
            let k1x = v;
            let k1v = a;
            let k2x = v + 0.5 * dt * k1v;
            let k2v = accel(x + 0.5 * dt * k1x)?;
            let k3x = v + 0.5 * dt * k2v;
            let k3v = accel(x + 0.5 * dt * k2x)?;
            let k4x = v + dt * k3v;
            let k4v = accel(x + dt * k3x)?;
            let x1 = x + dt * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0;
            let v1 = v + dt * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0;
            let a1 = accel(x1)?;
            Ok((x1, v1, a1))
        }
    }
}

fn run<A, E>(config: &SimConfig, x0: f64, v0: f64, accel: A, energy: E, lock: Option<(&Track, f64)>) -> Result<SimResult>
where
    A: Fn(f64) -> std::result::Result<f64, StepFault>,
    E: Fn(f64, f64) -> Result<f64>,
{
    let n_steps = (config.t_end / config.dt).ceil() as usize;
    let mut samples = Vec::with_capacity(n_steps / config.record_stride + 2);
    let mut x = x0;
    let mut v = v0;
    let mut a = match accel(x) {
        Ok(a) => a,
        Err(StepFault::OutOfDomain { x }) => {
            return Err(Error::InvalidInitialState(format!("x0 = {x} is outside the track domain")))
        }
        Err(StepFault::NonFinite) => {
            return Err(Error::InvalidInitialState("non-finite initial acceleration".into()))
        }
    };
    samples.push(Sample { t: 0.0, x, v, e: energy(x, v)? });
    let mut termination = Termination::Completed;
    let mut steps = 0usize;
    for i in 1..=n_steps {
        let t = i as f64 * config.dt;
        match step(config.method, &accel, x, v, a, config.dt) {
            Ok((x1, v1, a1)) => {
                if !(x1.is_finite() && v1.is_finite()) {
                    termination = Termination::NonFinite { t };
                    break;
                }
                x = x1;
                v = v1;
                a = a1;
                steps = i;
                let locked = match lock {
                    Some((track, guard)) => {
                        track.y(x).map(|y| y.abs() >= track.gsm().travel_limit() - guard).unwrap_or(true)
                    }
                    None => false,
                };
                if locked {
                    samples.push(Sample { t, x, v, e: energy(x, v)? });
                    termination = Termination::Locked { t, x };
                    break;
                }
                if i % config.record_stride == 0 || i == n_steps {
                    samples.push(Sample { t, x, v, e: energy(x, v)? });
                }
            }
            Err(StepFault::OutOfDomain { x: x_exit }) => {
                // The terminal recorded state is the last in-domain one.
                termination = Termination::DomainExit { t, x: x_exit };
                break;
            }
            Err(StepFault::NonFinite) => {
                termination = Termination::NonFinite { t };
                break;
            }
        }
    }
    if samples.last().map(|s| s.t) != Some(steps as f64 * config.dt) && steps > 0 {
        samples.push(Sample { t: steps as f64 * config.dt, x, v, e: energy(x, v)? });
    }
    Ok(SimResult { samples, termination, dt: config.dt, steps })
}

/// Integrates `M * Xdd = restoring_force(track, X)` until `t_end`, lock,
/// domain exit, or a non-finite state.
pub fn simulate_track(track: &Track, config: &SimConfig, x0: f64, v0: f64) -> Result<SimResult> {
    let limit = track.gsm().travel_limit();
    let guard = config.lock_guard.unwrap_or(DEFAULT_LOCK_GUARD_FRACTION * limit);
    if !track.contains(x0) {
        return Err(Error::InvalidInitialState(format!("x0 = {x0} is outside the track domain")));
    }
    let y0 = track.y(x0)?;
    if y0.abs() >= limit - guard {
        return Err(Error::InvalidInitialState(format!(
            "initial track height |Y(x0)| = {} is inside the lock guard band",
            y0.abs()
        )));
    }
    let mass = config.mass;
    let accel = |x: f64| -> std::result::Result<f64, StepFault> {
        match restoring_force(track, x) {
            Ok(f) => {
                if f.is_finite() {
                    Ok(f / mass)
                } else {
                    Err(StepFault::NonFinite)
                }
            }
            Err(Error::OutOfDomain { x, .. }) => Err(StepFault::OutOfDomain { x }),
            Err(_) => Err(StepFault::NonFinite),
        }
    };
    let energy = |x: f64, v: f64| -> Result<f64> {
        Ok(0.5 * mass * v * v + potential_energy(track, x)?)
    };
    run(config, x0, v0, accel, energy, Some((track, guard)))
}

/// Integrates the reference system `M * Xdd = F(X)` with the same stepper;
/// the energy uses `-I(X)` as potential.
pub fn simulate_reference(
    force: &Arc<ForceSpec>,
    config: &SimConfig,
    x0: f64,
    v0: f64,
) -> Result<SimResult> {
    let cache = IntegralCache::new(force.clone(), crate::force::DEFAULT_QUAD_TOL);
    let mass = config.mass;
    let accel = |x: f64| -> std::result::Result<f64, StepFault> {
        match force.eval(x) {
            Ok(f) if f.is_finite() => Ok(f / mass),
            Ok(_) => Err(StepFault::NonFinite),
            Err(Error::OutOfTable { x, .. }) => Err(StepFault::OutOfDomain { x }),
            Err(_) => Err(StepFault::NonFinite),
        }
    };
    let energy = |x: f64, v: f64| -> Result<f64> {
        Ok(0.5 * mass * v * v - cache.integral(x)?)
    };
    run(config, x0, v0, accel, energy, None)
}

/// Relative energy spread `(max E - min E) / (|E(0)| + eps)`.
pub fn energy_drift(result: &SimResult) -> Result<f64> {
    if result.samples.len() < 2 {
        return Err(Error::InvalidParams("energy drift needs at least 2 samples".into()));
    }
    let e0 = result.samples[0].e;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in &result.samples {
        lo = lo.min(s.e);
        hi = hi.max(s.e);
    }
    Ok((hi - lo) / (e0.abs() + f64::EPSILON))
}

/// Sup-norm of `|X_a - X_b|` over the common time span, interpolating `b`
/// linearly at the sample times of `a`.
pub fn compare_trajectories(a: &SimResult, b: &SimResult) -> Result<f64> {
    let (a0, a1) = (a.samples.first(), a.samples.last());
    let (b0, b1) = (b.samples.first(), b.samples.last());
    let (a0, a1, b0, b1) = match (a0, a1, b0, b1) {
        (Some(a0), Some(a1), Some(b0), Some(b1)) => (a0, a1, b0, b1),
        _ => return Err(Error::NoOverlap),
    };
    let t_lo = a0.t.max(b0.t);
    let t_hi = a1.t.min(b1.t);
    if !(t_lo <= t_hi) {
        return Err(Error::NoOverlap);
    }
    let mut sup = 0.0f64;
    let mut any = false;
    for s in &a.samples {
        if s.t < t_lo || s.t > t_hi {
            continue;
        }
        let xb = interp_x(&b.samples, s.t);
        sup = sup.max((s.x - xb).abs());
        any = true;
    }
    if !any {
        return Err(Error::NoOverlap);
    }
    Ok(sup)
}

fn interp_x(samples: &[Sample], t: f64) -> f64 {
    let idx = samples.partition_point(|s| s.t < t);
    if idx == 0 {
        return samples[0].x;
    }
    if idx >= samples.len() {
        return samples[samples.len() - 1].x;
    }
    let (s0, s1) = (&samples[idx - 1], &samples[idx]);
    if s1.t == s0.t {
        return s1.x;
    }
    let w = (t - s0.t) / (s1.t - s0.t);
    s0.x + w * (s1.x - s0.x)
}
