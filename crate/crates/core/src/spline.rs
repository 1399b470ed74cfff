//! Natural cubic spline interpolation with derivative and exact piecewise
//! integration. Two knots degenerate to the linear interpolant.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots (zero at both ends).
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidParams("x and y lengths differ".into()));
        }
        if xs.len() < 2 {
            return Err(Error::InvalidParams("need at least 2 knots".into()));
        }
        for i in 1..xs.len() {
            if !(xs[i] > xs[i - 1]) {
                return Err(Error::NonMonotoneX { index: i });
            }
        }
        let n = xs.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Thomas algorithm on the natural-spline tridiagonal system.
            let mut sub = vec![0.0; n - 2];
            let mut diag = vec![0.0; n - 2];
            let mut sup = vec![0.0; n - 2];
            let mut rhs = vec![0.0; n - 2];
            for i in 1..n - 1 {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                sub[i - 1] = h0;
                diag[i - 1] = 2.0 * (h0 + h1);
                sup[i - 1] = h1;
                rhs[i - 1] =
                    6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
            }
            for i in 1..n - 2 {
                let w = sub[i] / diag[i - 1];
                diag[i] -= w * sup[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m[n - 2] = rhs[n - 3] / diag[n - 3];
            for i in (1..n - 2).rev() {
                m[i] = (rhs[i - 1] - sup[i - 1] * m[i + 1]) / diag[i - 1];
            }
        }
        Ok(Self { xs, ys, m })
    }

    /// Piecewise-linear interpolant in spline form (all curvatures zero).
    pub fn linear(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let mut s = Self::new(xs, ys)?;
        s.m.iter_mut().for_each(|v| *v = 0.0);
        Ok(s)
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x_max(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.ys)
    }

    fn segment(&self, x: f64) -> Result<usize> {
        if x < self.x_min() || x > self.x_max() {
            return Err(Error::OutOfTable { x, lo: self.x_min(), hi: self.x_max() });
        }
        let i = match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        Ok(i.min(self.xs.len() - 2))
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let i = self.segment(x)?;
        let h = self.xs[i + 1] - self.xs[i];
        let a = self.xs[i + 1] - x;
        let b = x - self.xs[i];
        Ok(self.m[i] * a * a * a / (6.0 * h)
            + self.m[i + 1] * b * b * b / (6.0 * h)
            + (self.ys[i] / h - self.m[i] * h / 6.0) * a
            + (self.ys[i + 1] / h - self.m[i + 1] * h / 6.0) * b)
    }

    pub fn deriv(&self, x: f64) -> Result<f64> {
        let i = self.segment(x)?;
        let h = self.xs[i + 1] - self.xs[i];
        let a = self.xs[i + 1] - x;
        let b = x - self.xs[i];
        Ok(-self.m[i] * a * a / (2.0 * h)
            + self.m[i + 1] * b * b / (2.0 * h)
            - (self.ys[i] / h - self.m[i] * h / 6.0)
            + (self.ys[i + 1] / h - self.m[i + 1] * h / 6.0))
    }

    pub fn deriv2(&self, x: f64) -> Result<f64> {
        let i = self.segment(x)?;
        let h = self.xs[i + 1] - self.xs[i];
        Ok(self.m[i] * (self.xs[i + 1] - x) / h + self.m[i + 1] * (x - self.xs[i]) / h)
    }

    /// Antiderivative restricted to segment `i`, evaluated at `x`.
    fn segment_antideriv(&self, i: usize, x: f64) -> f64 {
        let h = self.xs[i + 1] - self.xs[i];
        let a = self.xs[i + 1] - x;
        let b = x - self.xs[i];
        -self.m[i] * a * a * a * a / (24.0 * h)
            + self.m[i + 1] * b * b * b * b / (24.0 * h)
            - (self.ys[i] / h - self.m[i] * h / 6.0) * a * a / 2.0
            + (self.ys[i + 1] / h - self.m[i + 1] * h / 6.0) * b * b / 2.0
    }

    /// Exact integral of the spline over `[a, b]` (either order).
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        if b < a {
            return Ok(-self.integral(b, a)?);
        }
        let ia = self.segment(a)?;
        let ib = self.segment(b)?;
        if ia == ib {
            return Ok(self.segment_antideriv(ia, b) - self.segment_antideriv(ia, a));
        }
        let mut total = self.segment_antideriv(ia, self.xs[ia + 1]) - self.segment_antideriv(ia, a);
        for i in ia + 1..ib {
            total += self.segment_antideriv(i, self.xs[i + 1]) - self.segment_antideriv(i, self.xs[i]);
        }
        total += self.segment_antideriv(ib, b) - self.segment_antideriv(ib, self.xs[ib]);
        Ok(total)
    }
}
