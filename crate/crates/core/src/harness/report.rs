use serde::{Deserialize, Serialize};

use crate::dynamics::Variant;
use crate::error::{QqmError, Result};
use crate::grid::GridSpec;

/// Residual of one identity over a trajectory (or a single state).
///
/// Only the fields listed in the JSON contract are serialized; `dx`,
/// `details` and `diagnostics` stay in memory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub identity: String,
    pub variant: Variant,
    pub grid_n: usize,
    pub dt: f64,
    pub max_residual: f64,
    pub l2_residual: f64,
    pub pass: bool,
    pub tolerance: f64,
    #[serde(skip)]
    pub dx: f64,
    /// Per time sample residual (max over space for field identities).
    #[serde(skip)]
    pub details: Vec<f64>,
    /// Named side values, e.g. the size of a breakdown term.
    #[serde(skip)]
    pub diagnostics: Vec<(String, f64)>,
}

impl ResidualReport {
    /// Report for a scalar residual series. `l2_residual` is the RMS of the
    /// series.
    pub fn from_series(
        identity: impl Into<String>,
        variant: Variant,
        grid: &GridSpec,
        dt: f64,
        residuals: Vec<f64>,
        tolerance: f64,
    ) -> Self {
        let abs: Vec<f64> = residuals.into_iter().map(f64::abs).collect();
        let l2 = rms(&abs);
        Self::assemble(identity.into(), variant, grid, dt, abs, l2, tolerance)
    }

    /// Report for a space-time residual field given as one row per time
    /// sample. `details` holds the per-row max, `l2_residual` the RMS over
    /// rows of the spatial L² norm.
    pub fn from_fields(
        identity: impl Into<String>,
        variant: Variant,
        grid: &GridSpec,
        dt: f64,
        rows: &[Vec<f64>],
        tolerance: f64,
    ) -> Self {
        let details: Vec<f64> = rows
            .iter()
            .map(|r| r.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
            .collect();
        let norms: Vec<f64> = rows
            .iter()
            .map(|r| (r.iter().map(|v| v * v).sum::<f64>() * grid.dx()).sqrt())
            .collect();
        let l2 = rms(&norms);
        Self::assemble(identity.into(), variant, grid, dt, details, l2, tolerance)
    }

    fn assemble(
        identity: String,
        variant: Variant,
        grid: &GridSpec,
        dt: f64,
        details: Vec<f64>,
        l2_residual: f64,
        tolerance: f64,
    ) -> Self {
        let max_residual = if details.iter().any(|v| !v.is_finite()) {
            f64::INFINITY
        } else {
            details.iter().fold(0.0_f64, |m, &v| m.max(v))
        };
        let l2_residual = if l2_residual.is_finite() {
            l2_residual
        } else {
            f64::INFINITY
        };
        Self {
            identity,
            variant,
            grid_n: grid.n(),
            dt,
            max_residual,
            l2_residual,
            pass: max_residual <= tolerance,
            tolerance,
            dx: grid.dx(),
            details,
            diagnostics: Vec::new(),
        }
    }

    pub fn with_diagnostic(mut self, name: impl Into<String>, value: f64) -> Self {
        self.diagnostics.push((name.into(), value));
        self
    }

    pub fn diagnostic(&self, name: &str) -> Option<f64> {
        self.diagnostics.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    /// Re-judges the residual against a new tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.max_residual <= tolerance;
        self
    }

    pub fn renamed(mut self, identity: impl Into<String>) -> Self {
        self.identity = identity.into();
        self
    }
}

fn rms(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitParameter {
    Dx,
    Dt,
}

impl std::fmt::Display for FitParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FitParameter::Dx => "dx",
            FitParameter::Dt => "dt",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceFit {
    pub parameter: FitParameter,
    /// `(parameter, residual)`, parameter strictly decreasing.
    pub samples: Vec<(f64, f64)>,
    pub fitted_order: f64,
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// Least-squares slope of `log(max_residual)` against `log(dx)` or `log(dt)`,
/// whichever one varies across the reports.
pub fn fit_convergence(reports: &[ResidualReport]) -> Result<ConvergenceFit> {
    if reports.len() < 3 {
        return Err(QqmError::DegenerateVariation(format!(
            "need at least 3 reports, got {}",
            reports.len()
        )));
    }
    let first = &reports[0];
    let dx_varies = reports.iter().any(|r| !same(r.dx, first.dx));
    let dt_varies = reports.iter().any(|r| !same(r.dt, first.dt));
    let parameter = match (dx_varies, dt_varies) {
        (true, false) => FitParameter::Dx,
        (false, true) => FitParameter::Dt,
        (true, true) => {
            return Err(QqmError::DegenerateVariation("both dx and dt vary".into()));
        }
        (false, false) => {
            return Err(QqmError::DegenerateVariation("neither dx nor dt varies".into()));
        }
    };
    let mut samples: Vec<(f64, f64)> = reports
        .iter()
        .map(|r| {
            let p = match parameter {
                FitParameter::Dx => r.dx,
                FitParameter::Dt => r.dt,
            };
            (p, r.max_residual)
        })
        .collect();
    samples.sort_by(|a, b| b.0.total_cmp(&a.0));
    if samples.windows(2).any(|w| same(w[0].0, w[1].0)) {
        return Err(QqmError::DegenerateVariation(format!("repeated {parameter} value")));
    }
    if samples
        .iter()
        .any(|&(p, r)| !(p > 0.0 && r > 0.0 && p.is_finite() && r.is_finite()))
    {
        return Err(QqmError::DegenerateVariation(
            "parameters and residuals must be positive and finite".into(),
        ));
    }
    if samples.iter().all(|&(_, r)| same(r, samples[0].1)) {
        return Err(QqmError::DegenerateVariation("residuals do not change".into()));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(p, r)| (p.ln(), r.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(ConvergenceFit {
        parameter,
        samples,
        fitted_order: sxy / sxx,
    })
}
