//! Machine-readable design report: a JSON document that echoes the problem,
//! lists every valid branch with its domain, residuals and a sampled profile,
//! and round-trips losslessly through serialization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inverse::{BranchSet, TrackBranch};

/// Alternative label sometimes used for the zero-preload, K < 0 pair.
fn alias(label: &str) -> Option<String> {
    match label {
        "Y14" => Some("Y13".into()),
        "Y24" => Some("Y23".into()),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub tool_version: String,
    /// Wall-clock duration [ms]; omitted by default so that identical inputs
    /// produce byte-identical reports.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub duration_ms: Option<f64>,
    pub problem: ProblemEcho,
    pub branches: Vec<BranchRecord>,
    pub existence_notes: Vec<NoteRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemEcho {
    pub force: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coefficients: Option<Vec<f64>>,
    /// Stiffness magnitude |K| [N/m]; each branch carries its signed value.
    pub stiffness_abs: f64,
    /// Preload magnitude |d| [m].
    pub preload_abs: f64,
    pub travel_limit: f64,
    pub search_window: f64,
    pub boundary_tol: f64,
    pub quad_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchRecord {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alias: Option<String>,
    /// Square-root sign: +1 or -1.
    pub sign: f64,
    /// Signed stiffness [N/m] of this branch.
    pub stiffness: f64,
    /// Signed preload [m] realized at X = 0.
    pub preload: f64,
    pub x_lo: f64,
    pub x_hi: f64,
    pub lo_kind: String,
    pub hi_kind: String,
    pub residual_sup_abs: f64,
    pub residual_rms_abs: f64,
    pub residual_sup_rel: f64,
    pub residual_rms_rel: f64,
    pub residual_samples: usize,
    /// Sampled profile on the tolerance-shrunk domain, as (X, Y) pairs.
    pub track: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoteRecord {
    pub label: String,
    pub reason: String,
}

/// Samples a branch profile at `n` evenly spaced points of the domain shrunk
/// by the boundary tolerance.
pub fn sample_branch(branch: &TrackBranch, n: usize) -> Result<Vec<(f64, f64)>> {
    if n < 2 {
        return Err(Error::InvalidParams("need at least 2 profile samples".into()));
    }
    let a = branch.domain.x_lo + branch.boundary_tol;
    let b = branch.domain.x_hi - branch.boundary_tol;
    if !(a < b) {
        return Err(Error::EmptyDomain);
    }
    (0..n)
        .map(|i| {
            let x = a + (b - a) * i as f64 / (n - 1) as f64;
            Ok((x, branch.eval(x)?))
        })
        .collect()
}

impl DesignReport {
    /// Builds the report for a branch set, sampling each profile at
    /// `profile_samples` points and the residual at `residual_samples` points.
    pub fn new(set: &BranchSet, profile_samples: usize, residual_samples: usize) -> Result<Self> {
        let p = &set.problem;
        let mut branches = Vec::with_capacity(set.branches.len());
        for b in &set.branches {
            let residual = b.reconstruction_residual(residual_samples)?;
            let name = b.label.name().to_string();
            branches.push(BranchRecord {
                alias: alias(&name),
                label: name,
                sign: b.sign,
                stiffness: b.stiffness,
                preload: b.preload(),
                x_lo: b.domain.x_lo,
                x_hi: b.domain.x_hi,
                lo_kind: b.domain.lo_kind.name().into(),
                hi_kind: b.domain.hi_kind.name().into(),
                residual_sup_abs: residual.sup_abs,
                residual_rms_abs: residual.rms_abs,
                residual_sup_rel: residual.sup_rel,
                residual_rms_rel: residual.rms_rel,
                residual_samples: residual.samples,
                track: sample_branch(b, profile_samples)?,
            });
        }
        Ok(Self {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            duration_ms: None,
            problem: ProblemEcho {
                force: p.force.text(),
                coefficients: p.force.coefficients().map(|c| c.to_vec()),
                stiffness_abs: p.stiffness.abs(),
                preload_abs: p.preload.abs(),
                travel_limit: p.travel_limit,
                search_window: p.search_window,
                boundary_tol: p.boundary_tol,
                quad_tol: p.quad_tol,
            },
            branches,
            existence_notes: set
                .existence_notes
                .iter()
                .map(|n| NoteRecord { label: n.label.name().into(), reason: n.reason.clone() })
                .collect(),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidParams(format!("malformed design report: {e}")))
    }

    pub fn branch(&self, label: &str) -> Option<&BranchRecord> {
        self.branches.iter().find(|b| b.label == label)
    }
}
