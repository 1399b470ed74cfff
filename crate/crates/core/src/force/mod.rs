//! Target restoring forces F(X): polynomial, parsed expression, or sampled
//! table, with evaluation, differentiation, and definite integration from 0.

pub mod parser;
pub mod quadrature;

use std::path::Path;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::spline::CubicSpline;
use parser::{format_polynomial, parse_expr, Expr};
use quadrature::adaptive_simpson;

/// Default absolute quadrature tolerance [N*m]. Branch domains are located by
/// root finding on the running integral, so this sits well below the domain
/// boundary tolerance.
pub const DEFAULT_QUAD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    Linear,
    Cubic,
}

#[derive(Debug, Clone)]
pub struct SampledForce {
    xs: Vec<f64>,
    fs: Vec<f64>,
    interpolation: Interpolation,
    spline: CubicSpline,
}

impl SampledForce {
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.fs.iter().copied())
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }
}

#[derive(Debug, Clone)]
pub enum ForceSpec {
    /// Coefficients in ascending degree: `coeffs[k]` multiplies `X^k`.
    Polynomial(Vec<f64>),
    Expression { text: String, ast: Expr },
    Sampled(SampledForce),
}

impl ForceSpec {
    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParams("polynomial needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParams("polynomial coefficients must be finite".into()));
        }
        Ok(ForceSpec::Polynomial(coeffs))
    }

    /// Parses expression text; pure polynomials in `X` are normalized into
    /// the `Polynomial` variant with trailing zeros trimmed.
    pub fn parse(text: &str) -> Result<Self> {
        let ast = parse_expr(text)?;
        if let Some(mut coeffs) = ast.as_polynomial() {
            while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
                coeffs.pop();
            }
            return ForceSpec::polynomial(coeffs);
        }
        Ok(ForceSpec::Expression { text: text.to_owned(), ast })
    }

    pub fn sampled(points: Vec<(f64, f64)>, interpolation: Interpolation) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidParams("sampled force needs at least 2 points".into()));
        }
        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let fs: Vec<f64> = points.iter().map(|p| p.1).collect();
        let spline = match interpolation {
            Interpolation::Linear => CubicSpline::linear(xs.clone(), fs.clone())?,
            Interpolation::Cubic => CubicSpline::new(xs.clone(), fs.clone())?,
        };
        Ok(ForceSpec::Sampled(SampledForce { xs, fs, interpolation, spline }))
    }

    /// Loads a 2-column CSV (`X,F`; header optional).
    pub fn from_csv(path: &Path, interpolation: Interpolation) -> Result<Self> {
        let points = read_two_column_csv(path)?;
        ForceSpec::sampled(points, interpolation)
    }

    /// Canonical text form: the original expression, or formatted
    /// polynomial coefficients.
    pub fn text(&self) -> String {
        match self {
            ForceSpec::Polynomial(coeffs) => format_polynomial(coeffs),
            ForceSpec::Expression { text, .. } => text.clone(),
            ForceSpec::Sampled(s) => format!("<sampled table, {} points>", s.xs.len()),
        }
    }

    pub fn coefficients(&self) -> Option<&[f64]> {
        match self {
            ForceSpec::Polynomial(coeffs) => Some(coeffs),
            _ => None,
        }
    }

    /// Table range for sampled forces, unbounded otherwise.
    pub fn range(&self) -> Option<(f64, f64)> {
        match self {
            ForceSpec::Sampled(s) => Some((s.xs[0], *s.xs.last().unwrap())),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            ForceSpec::Polynomial(coeffs) => Ok(horner(coeffs, x)),
            ForceSpec::Expression { ast, .. } => Ok(ast.eval(x)),
            ForceSpec::Sampled(s) => s.spline.eval(x),
        }
    }

    /// dF/dX. Polynomials are exact; expressions use a central difference.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        match self {
            ForceSpec::Polynomial(coeffs) => {
                let d: Vec<f64> = coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, c)| k as f64 * c)
                    .collect();
                if d.is_empty() {
                    Ok(0.0)
                } else {
                    Ok(horner(&d, x))
                }
            }
            ForceSpec::Expression { ast, .. } => {
                let h = 1e-6 * (1.0 + x.abs());
                Ok((ast.eval(x + h) - ast.eval(x - h)) / (2.0 * h))
            }
            ForceSpec::Sampled(s) => s.spline.deriv(x),
        }
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Running integral I(x) = definite integral of F from 0 to x, with exact
/// antiderivatives where available and memoized adaptive Simpson otherwise.
#[derive(Debug)]
pub struct IntegralCache {
    spec: Arc<ForceSpec>,
    tolerance: f64,
    /// Checkpoints (x, I(x)) kept sorted by x; used only on the quadrature
    /// path. Readers may race with an appending writer; the vector is only
    /// ever mutated under the write lock.
    memo: RwLock<Vec<(f64, f64)>>,
}

impl IntegralCache {
    pub fn new(spec: Arc<ForceSpec>, tolerance: f64) -> Self {
        Self { spec, tolerance, memo: RwLock::new(Vec::new()) }
    }

    pub fn spec(&self) -> &Arc<ForceSpec> {
        &self.spec
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn integral(&self, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Ok(0.0);
        }
        match self.spec.as_ref() {
            ForceSpec::Polynomial(coeffs) => {
                // Antiderivative with zero constant term, evaluated by Horner.
                let anti: Vec<f64> = std::iter::once(0.0)
                    .chain(coeffs.iter().enumerate().map(|(k, c)| c / (k as f64 + 1.0)))
                    .collect();
                Ok(horner(&anti, x))
            }
            ForceSpec::Sampled(s) => {
                let lo = s.xs[0];
                let hi = *s.xs.last().unwrap();
                if x < lo || x > hi || 0.0 < lo || 0.0 > hi {
                    let bad = if x < lo || x > hi { x } else { 0.0 };
                    return Err(Error::OutOfTable { x: bad, lo, hi });
                }
                s.spline.integral(0.0, x)
            }
            ForceSpec::Expression { ast, .. } => {
                let f = |t: f64| ast.eval(t);
                // Start from the memoized checkpoint nearest to x on the
                // segment between 0 and x.
                let (x0, i0) = {
                    let memo = self.memo.read().unwrap();
                    best_checkpoint(&memo, x)
                };
                let value = i0 + adaptive_simpson(&f, x0, x, self.tolerance)?;
                let mut memo = self.memo.write().unwrap();
                match memo.binary_search_by(|(cx, _)| cx.partial_cmp(&x).unwrap()) {
                    Ok(_) => {}
                    Err(pos) => memo.insert(pos, (x, value)),
                }
                Ok(value)
            }
        }
    }
}

/// Closest stored checkpoint lying between 0 and `x` (inclusive of 0).
fn best_checkpoint(memo: &[(f64, f64)], x: f64) -> (f64, f64) {
    let mut best = (0.0, 0.0);
    for &(cx, ci) in memo {
        let between = if x > 0.0 { cx > 0.0 && cx <= x } else { cx < 0.0 && cx >= x };
        if between && (x - cx).abs() < (x - best.0).abs() {
            best = (cx, ci);
        }
    }
    best
}

/// Reads a 2-column numeric CSV with an optional header line.
pub fn read_two_column_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path)?;
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let (a, b) = match (cols.next(), cols.next()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::InvalidParams(format!(
                    "line {}: expected two comma-separated columns",
                    lineno + 1
                )))
            }
        };
        match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(x), Ok(y)) => points.push((x, y)),
            _ if lineno == 0 => {} // optional header
            _ => {
                return Err(Error::InvalidParams(format!(
                    "line {}: could not parse numbers", lineno + 1
                )))
            }
        }
    }
    Ok(points)
}
