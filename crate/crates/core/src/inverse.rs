//! Inverse design: enumerate every square-root branch
//! `Y(X) = s * sqrt(d^2 - (2/K) * I(X))`, `I(X) = integral of F from 0 to X`,
//! that realizes a target restoring force F(X) on a linear spring of
//! stiffness K, together with each branch's maximal admissible open
//! X-interval `d^2 - L^2 < (2/K) I(X) < d^2`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::force::{ForceSpec, IntegralCache, DEFAULT_QUAD_TOL};
use crate::forward::{Profile, Track};
use crate::gsm::LinearGsm;

/// Default absolute tolerance [m] for locating domain boundaries.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-10;

/// Default search window half-width as a multiple of the travel limit.
pub const DEFAULT_WINDOW_FACTOR: f64 = 10.0;

/// Outward-march resolution: the search window is cut into this many steps.
const MARCH_STEPS: usize = 1024;

/// One design task: target force, signed stiffness, preload, travel limit,
/// and the numerical tolerances of the search.
#[derive(Debug, Clone)]
pub struct DesignProblem {
    pub force: Arc<ForceSpec>,
    /// Signed spring stiffness K [N/m]; the enumeration also uses its negation.
    pub stiffness: f64,
    /// Signed preload d [m]; branches carry +|d| or -|d| via their sign.
    pub preload: f64,
    /// Travel limit L [m].
    pub travel_limit: f64,
    /// Half-width of the X search window [m].
    pub search_window: f64,
    /// Absolute tolerance [m] for domain boundaries.
    pub boundary_tol: f64,
    /// Absolute quadrature tolerance [N*m].
    pub quad_tol: f64,
}

impl DesignProblem {
    pub fn new(force: Arc<ForceSpec>, stiffness: f64, preload: f64, travel_limit: f64) -> Result<Self> {
        let window = DEFAULT_WINDOW_FACTOR * travel_limit;
        Self::with_options(force, stiffness, preload, travel_limit, window, DEFAULT_BOUNDARY_TOL, DEFAULT_QUAD_TOL)
    }

    pub fn with_options(
        force: Arc<ForceSpec>,
        stiffness: f64,
        preload: f64,
        travel_limit: f64,
        search_window: f64,
        boundary_tol: f64,
        quad_tol: f64,
    ) -> Result<Self> {
        if !stiffness.is_finite() || stiffness == 0.0 {
            return Err(Error::ZeroStiffness);
        }
        if !travel_limit.is_finite() || travel_limit <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "travel limit must be positive, got {travel_limit}"
            )));
        }
        if !preload.is_finite() || preload.abs() >= travel_limit {
            return Err(Error::InvalidParams(format!(
                "preload must satisfy |d| < L, got d = {preload}, L = {travel_limit}"
            )));
        }
        if !search_window.is_finite() || search_window <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "search window must be positive, got {search_window}"
            )));
        }
        if !(boundary_tol > 0.0) || !(quad_tol > 0.0) {
            return Err(Error::InvalidParams("tolerances must be positive".into()));
        }
        Ok(Self { force, stiffness, preload, travel_limit, search_window, boundary_tol, quad_tol })
    }
}

/// Branch labels. The first index is the square-root sign (1: +, 2: -); the
/// second encodes stiffness sign and preload class: 1 = K > 0 with preload,
/// 2 = K < 0 with preload, 3 = K > 0 zero-preload, 4 = K < 0 zero-preload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchLabel {
    Y11,
    Y21,
    Y12,
    Y22,
    Y13,
    Y23,
    Y14,
    Y24,
}

impl BranchLabel {
    /// Fixed report order.
    pub const ALL: [BranchLabel; 8] = [
        BranchLabel::Y11,
        BranchLabel::Y21,
        BranchLabel::Y12,
        BranchLabel::Y22,
        BranchLabel::Y13,
        BranchLabel::Y23,
        BranchLabel::Y14,
        BranchLabel::Y24,
    ];

    pub fn sign(self) -> f64 {
        match self {
            BranchLabel::Y11 | BranchLabel::Y12 | BranchLabel::Y13 | BranchLabel::Y14 => 1.0,
            _ => -1.0,
        }
    }

    pub fn stiffness_positive(self) -> bool {
        matches!(self, BranchLabel::Y11 | BranchLabel::Y21 | BranchLabel::Y13 | BranchLabel::Y23)
    }

    pub fn zero_preload(self) -> bool {
        matches!(self, BranchLabel::Y13 | BranchLabel::Y23 | BranchLabel::Y14 | BranchLabel::Y24)
    }

    pub fn name(self) -> &'static str {
        match self {
            BranchLabel::Y11 => "Y11",
            BranchLabel::Y21 => "Y21",
            BranchLabel::Y12 => "Y12",
            BranchLabel::Y22 => "Y22",
            BranchLabel::Y13 => "Y13",
            BranchLabel::Y23 => "Y23",
            BranchLabel::Y14 => "Y14",
            BranchLabel::Y24 => "Y24",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        BranchLabel::ALL.into_iter().find(|l| l.name() == name)
    }
}

impl std::fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// What terminates a branch domain at one end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// Y -> 0: the radicand reaches its upper bound d^2.
    RootTouch,
    /// |Y| -> L: the radicand reaches its lower bound d^2 - L^2.
    TravelLimit,
    /// |X| reached the search window without a violation.
    SearchTruncated,
}

impl BoundaryKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::RootTouch => "RootTouch",
            BoundaryKind::TravelLimit => "TravelLimit",
            BoundaryKind::SearchTruncated => "SearchTruncated",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "RootTouch" => Some(BoundaryKind::RootTouch),
            "TravelLimit" => Some(BoundaryKind::TravelLimit),
            "SearchTruncated" => Some(BoundaryKind::SearchTruncated),
            _ => None,
        }
    }
}

/// Maximal open admissible interval of one branch. `x_lo = 0` or `x_hi = 0`
/// marks a one-sided domain (possible only for zero-preload branches).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchDomain {
    pub x_lo: f64,
    pub x_hi: f64,
    pub lo_kind: BoundaryKind,
    pub hi_kind: BoundaryKind,
}

/// One signed square-root solution with its admissible interval.
#[derive(Debug, Clone)]
pub struct TrackBranch {
    pub label: BranchLabel,
    /// The +/- of the square root; also the sign of the realized preload.
    pub sign: f64,
    /// Signed stiffness of this branch [N/m].
    pub stiffness: f64,
    /// Preload magnitude |d| used in the radicand (0 for zero-preload labels).
    pub preload_abs: f64,
    pub travel_limit: f64,
    pub domain: BranchDomain,
    pub boundary_tol: f64,
    cache: Arc<IntegralCache>,
}

/// Sup/RMS reconstruction error of `-K * Y * Y'` against the target force,
/// absolute and relative to `1 + max |F|` over the sampled domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub sup_abs: f64,
    pub rms_abs: f64,
    pub sup_rel: f64,
    pub rms_rel: f64,
    pub samples: usize,
}

impl TrackBranch {
    pub fn force(&self) -> &ForceSpec {
        self.cache.spec()
    }

    /// Signed preload this branch realizes at X = 0.
    pub fn preload(&self) -> f64 {
        self.sign * self.preload_abs
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.domain.x_lo < x && x < self.domain.x_hi) || x == 0.0
    }

    fn radicand(&self, x: f64) -> Result<f64> {
        let i = self.cache.integral(x)?;
        Ok(self.preload_abs * self.preload_abs - 2.0 * i / self.stiffness)
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> Result<f64> {
        // The strict domain condition keeps the radicand positive; clamp the
        // round-off negatives that appear within a tolerance of a root-touch
        // boundary.
        let rad = self.radicand(x)?.max(0.0);
        Ok(self.sign * rad.sqrt())
    }

    /// Branch height Y(x).
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        self.eval_unchecked(x)
    }

    pub(crate) fn derivative_unchecked(&self, x: f64) -> Result<f64> {
        let y = self.eval_unchecked(x)?;
        if y.abs() < self.boundary_tol {
            return Err(Error::RootSingularity { x });
        }
        let f = self.force().eval(x)?;
        Ok(-f / (self.stiffness * y))
    }

    /// Branch slope `Y'(x) = -F(x) / (K * Y(x))`, exact on the branch.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        self.derivative_unchecked(x)
    }

    /// The finite product `Y * Y' = -F / K`, defined even where Y vanishes.
    pub fn height_slope_product(&self, x: f64) -> Result<f64> {
        Ok(-self.force().eval(x)? / self.stiffness)
    }

    fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { x, lo: self.domain.x_lo, hi: self.domain.x_hi })
        }
    }

    /// Samples `-K * Y * Y'` against F at Chebyshev points of the domain
    /// shrunk by the boundary tolerance.
    pub fn reconstruction_residual(&self, n_samples: usize) -> Result<ResidualReport> {
        if n_samples < 3 {
            return Err(Error::InvalidParams("need at least 3 residual samples".into()));
        }
        let a = self.domain.x_lo + self.boundary_tol;
        let b = self.domain.x_hi - self.boundary_tol;
        if !(a < b) {
            return Err(Error::EmptyDomain);
        }
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut sup = 0.0f64;
        let mut sum_sq = 0.0f64;
        let mut f_max = 0.0f64;
        for i in 0..n_samples {
            let theta = std::f64::consts::PI * (2.0 * i as f64 + 1.0) / (2.0 * n_samples as f64);
            let x = mid + half * theta.cos();
            let f = self.force().eval(x)?;
            let recon = match self.derivative_unchecked(x) {
                Ok(dy) => -self.stiffness * self.eval_unchecked(x)? * dy,
                // Unbounded slope at a vanishing height: the product itself
                // tends to zero only if F does; report the raw gap.
                Err(Error::RootSingularity { .. }) => 0.0,
                Err(e) => return Err(e),
            };
            let r = (recon - f).abs();
            sup = sup.max(r);
            sum_sq += r * r;
            f_max = f_max.max(f.abs());
        }
        let rms = (sum_sq / n_samples as f64).sqrt();
        let scale = 1.0 + f_max;
        Ok(ResidualReport {
            sup_abs: sup,
            rms_abs: rms,
            sup_rel: sup / scale,
            rms_rel: rms / scale,
            samples: n_samples,
        })
    }

    /// Wraps the branch as a forward-model track.
    pub fn to_track(&self) -> Result<Track> {
        let gsm = LinearGsm::new(self.stiffness, self.travel_limit)?;
        let preload = self.preload();
        let domain = (self.domain.x_lo, self.domain.x_hi);
        Track::new(Profile::Branch(self.clone()), gsm, preload, domain)
    }

    pub fn into_track(self) -> Result<Track> {
        let gsm = LinearGsm::new(self.stiffness, self.travel_limit)?;
        let preload = self.preload();
        let domain = (self.domain.x_lo, self.domain.x_hi);
        Track::new(Profile::Branch(self), gsm, preload, domain)
    }
}

/// A branch ruled out by the domain condition, with the failed inequality.
#[derive(Debug, Clone)]
pub struct ExistenceNote {
    pub label: BranchLabel,
    pub reason: String,
}

/// All valid branches of one problem, in fixed label order, plus notes for
/// the candidates that were ruled out.
#[derive(Debug, Clone)]
pub struct BranchSet {
    pub problem: DesignProblem,
    pub branches: Vec<TrackBranch>,
    pub existence_notes: Vec<ExistenceNote>,
}

impl BranchSet {
    pub fn branch(&self, label: BranchLabel) -> Option<&TrackBranch> {
        self.branches.iter().find(|b| b.label == label)
    }
}

/// Outcome of the domain search for one (stiffness sign, preload class) pair.
#[derive(Debug, Clone)]
enum ClassDomain {
    Valid(BranchDomain),
    Empty { reason: String },
}

/// Enumerates all candidate branches (both stiffness signs, both preload
/// signs via the branch sign, and the zero-preload class) and computes each
/// maximal admissible open interval around 0.
pub fn design_branches(problem: &DesignProblem) -> Result<BranchSet> {
    let k_abs = problem.stiffness.abs();
    let d_abs = problem.preload.abs();
    let step = problem.search_window / MARCH_STEPS as f64;

    // Per-side search limits, clamped to the table range for sampled forces.
    let (mut lim_neg, mut lim_pos) = (problem.search_window, problem.search_window);
    if let Some((lo, hi)) = problem.force.range() {
        if lo > 0.0 || hi < 0.0 {
            return Err(Error::OutOfTable { x: 0.0, lo, hi });
        }
        lim_neg = lim_neg.min(-lo);
        lim_pos = lim_pos.min(hi);
    }
    if lim_neg < step && lim_pos < step {
        return Err(Error::SearchWindowEmpty);
    }

    // Continuity is only spot-checked: finite values over the window.
    if matches!(problem.force.as_ref(), ForceSpec::Expression { .. }) {
        for i in 0..=1024 {
            let x = -lim_neg + (lim_neg + lim_pos) * i as f64 / 1024.0;
            let v = problem.force.eval(x)?;
            if !v.is_finite() {
                return Err(Error::NonFiniteForce { x });
            }
        }
    }

    // (stiffness sign positive?, zero-preload class?) in report order.
    let classes = [(true, false), (false, false), (true, true), (false, true)];
    let domains: Vec<ClassDomain> = classes
        .par_iter()
        .map(|&(k_pos, zero_preload)| {
            let k = if k_pos { k_abs } else { -k_abs };
            let d = if zero_preload { 0.0 } else { d_abs };
            let cache = IntegralCache::new(problem.force.clone(), problem.quad_tol);
            class_domain(&cache, k, d, problem, step, lim_neg, lim_pos)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut branches = Vec::new();
    let mut existence_notes = Vec::new();
    for label in BranchLabel::ALL {
        let class_idx = match (label.stiffness_positive(), label.zero_preload()) {
            (true, false) => 0,
            (false, false) => 1,
            (true, true) => 2,
            (false, true) => 3,
        };
        match &domains[class_idx] {
            ClassDomain::Valid(domain) => {
                branches.push(TrackBranch {
                    label,
                    sign: label.sign(),
                    stiffness: if label.stiffness_positive() { k_abs } else { -k_abs },
                    preload_abs: if label.zero_preload() { 0.0 } else { d_abs },
                    travel_limit: problem.travel_limit,
                    domain: *domain,
                    boundary_tol: problem.boundary_tol,
                    cache: Arc::new(IntegralCache::new(problem.force.clone(), problem.quad_tol)),
                });
            }
            ClassDomain::Empty { reason } => {
                existence_notes.push(ExistenceNote { label, reason: reason.clone() });
            }
        }
    }
    Ok(BranchSet { problem: problem.clone(), branches, existence_notes })
}

/// Domain search for one candidate class: outward march from 0 in fixed
/// steps, then bisection to the boundary tolerance on the first violated
/// inequality.
fn class_domain(
    cache: &IntegralCache,
    k: f64,
    d: f64,
    problem: &DesignProblem,
    step: f64,
    lim_neg: f64,
    lim_pos: f64,
) -> Result<ClassDomain> {
    let l = problem.travel_limit;
    let lo_bound = d * d - l * l;
    let hi_bound = d * d;
    let g = |x: f64| -> Result<f64> { Ok(2.0 * cache.integral(x)? / k) };
    let valid = |x: f64| -> Result<bool> {
        let v = g(x)?;
        Ok(lo_bound < v && v < hi_bound)
    };

    let side = |dir: f64, lim: f64| -> Result<Option<(f64, BoundaryKind)>> {
        if lim < problem.boundary_tol {
            return Ok(Some((0.0, BoundaryKind::SearchTruncated)));
        }
        // Seed point: 0 itself is strictly valid when d != 0; for the
        // zero-preload class probe geometrically toward 0.
        let mut last_valid = if d != 0.0 {
            0.0
        } else {
            let mut seed = None;
            let mut t = step.min(lim);
            while t > problem.boundary_tol {
                if valid(dir * t)? {
                    seed = Some(t);
                    break;
                }
                t *= 0.25;
            }
            match seed {
                Some(t) => t,
                None => return Ok(None), // condition fails everywhere adjacent to 0
            }
        };

        let mut j = (last_valid / step).floor() as usize + 1;
        loop {
            let t = (j as f64 * step).min(lim);
            if valid(dir * t)? {
                last_valid = t;
                if t >= lim {
                    return Ok(Some((lim, BoundaryKind::SearchTruncated)));
                }
                j += 1;
                continue;
            }
            // Bracketed: bisect [last_valid, t] down to the tolerance.
            let (mut a, mut b) = (last_valid, t);
            while b - a > problem.boundary_tol {
                let m = 0.5 * (a + b);
                if valid(dir * m)? {
                    a = m;
                } else {
                    b = m;
                }
            }
            let kind = if g(dir * b)? >= hi_bound {
                BoundaryKind::RootTouch
            } else {
                BoundaryKind::TravelLimit
            };
            return Ok(Some((a, kind)));
        }
    };

    let neg = side(-1.0, lim_neg)?;
    let pos = side(1.0, lim_pos)?;
    let describe = |dir_name: &str, t: f64| -> Result<String> {
        let v = g(t)?;
        Ok(if v >= hi_bound {
            format!("(2/K) I(X) >= d^2 {dir_name} of 0")
        } else {
            format!("(2/K) I(X) <= d^2 - L^2 {dir_name} of 0")
        })
    };
    match (neg, pos) {
        (None, None) => {
            let r1 = describe("left", -step.min(lim_neg))?;
            let r2 = describe("right", step.min(lim_pos))?;
            Ok(ClassDomain::Empty { reason: format!("{r1}; {r2}") })
        }
        (Some((neg_ext, lo_kind)), None) if neg_ext > 0.0 => Ok(ClassDomain::Valid(BranchDomain {
            x_lo: -neg_ext,
            x_hi: 0.0,
            lo_kind,
            hi_kind: BoundaryKind::RootTouch,
        })),
        (None, Some((pos_ext, hi_kind))) if pos_ext > 0.0 => Ok(ClassDomain::Valid(BranchDomain {
            x_lo: 0.0,
            x_hi: pos_ext,
            lo_kind: BoundaryKind::RootTouch,
            hi_kind,
        })),
        (Some((neg_ext, lo_kind)), Some((pos_ext, hi_kind))) if neg_ext > 0.0 || pos_ext > 0.0 => {
            Ok(ClassDomain::Valid(BranchDomain { x_lo: -neg_ext, x_hi: pos_ext, lo_kind, hi_kind }))
        }
        _ => Ok(ClassDomain::Empty {
            reason: "admissible interval around 0 degenerates to a point".into(),
        }),
    }
}
