//! Conversions to and from the complex reference solver, and the
//! differential comparison against it.

use num_complex::Complex64;
use qqm_oracle::{CField, CTrajectory, OracleConfig, OracleGrid};

use crate::dynamics::{SimulationConfig, Trajectory, Variant};
use crate::error::{QqmError, Result};
use crate::grid::{GridSpec, QField};
use crate::harness::ResidualReport;
use crate::potential::PotentialSpec;
use crate::quaternion::Quaternion;

impl From<qqm_oracle::OracleError> for QqmError {
    fn from(e: qqm_oracle::OracleError) -> Self {
        QqmError::ShapeMismatch(e.to_string())
    }
}

fn oracle_grid(grid: &GridSpec) -> Result<OracleGrid> {
    Ok(OracleGrid::new(grid.n(), grid.length())?)
}

/// The complex slice of `psi`; fails if any j or k component is nonzero.
pub fn to_complex(psi: &QField) -> Result<CField> {
    if let Some(m) = psi.values().iter().position(|q| q.x2 != 0.0 || q.x3 != 0.0) {
        return Err(QqmError::InvalidConfig(format!(
            "state has a j/k component at grid index {m}; the reference solver is complex"
        )));
    }
    let values = psi.values().iter().map(|q| Complex64::new(q.x0, q.x1)).collect();
    Ok(CField::new(oracle_grid(psi.grid())?, values)?)
}

pub fn from_complex(grid: GridSpec, f: &CField) -> Result<QField> {
    QField::new(grid, f.values().iter().map(|&z| Quaternion::from_complex(z)).collect())
}

/// Runs the reference solver with the settings of a quaternionic run.
/// Requires the complex reduction (`β = 0`, `V1 = 0`) and LCWE.
pub fn run_oracle(
    psi0: &QField,
    pot: &PotentialSpec,
    cfg: &SimulationConfig,
    sample_every: usize,
) -> Result<CTrajectory> {
    if cfg.variant != Variant::Lcwe || !pot.is_complex_reduction() {
        return Err(QqmError::PotentialNotAllowed(
            "the reference comparison needs LCWE with beta = 0 and V1 = 0".into(),
        ));
    }
    pot.grid().ensure_same(psi0.grid())?;
    let ocfg = OracleConfig {
        hbar: cfg.hbar,
        mass: cfg.mass,
        dt: cfg.dt,
        steps: cfg.steps,
        sample_every,
    };
    Ok(qqm_oracle::evolve_complex(
        &to_complex(psi0)?,
        &pot.v0,
        &pot.alpha,
        &ocfg,
    )?)
}

/// Per-sample L² distance between the two trajectories, treating the
/// complex field as a quaternionic one with zero j and k parts.
pub fn compare(qtraj: &Trajectory, ctraj: &CTrajectory, variant: Variant, tolerance: f64) -> Result<ResidualReport> {
    if qtraj.len() != ctraj.states.len() {
        return Err(QqmError::ShapeMismatch(format!(
            "{} quaternionic samples vs {} complex samples",
            qtraj.len(),
            ctraj.states.len()
        )));
    }
    let grid = *qtraj.grid();
    let mut distances = Vec::with_capacity(qtraj.len());
    for (k, (q, c)) in qtraj.states.iter().zip(&ctraj.states).enumerate() {
        let cg = c.grid();
        if cg.n() != grid.n() || cg.length() != grid.length() {
            return Err(QqmError::ShapeMismatch(format!(
                "sample {k}: grid n={} L={} vs n={} L={}",
                grid.n(),
                grid.length(),
                cg.n(),
                cg.length()
            )));
        }
        let tq = qtraj.times[k];
        let tc = ctraj.times[k];
        if (tq - tc).abs() > 1e-12 * tq.abs().max(1.0) {
            return Err(QqmError::ShapeMismatch(format!("sample {k}: time {tq} vs {tc}")));
        }
        distances.push(q.l2_distance(&from_complex(grid, c)?)?);
    }
    Ok(ResidualReport::from_series(
        "oracle_compare",
        variant,
        &grid,
        qtraj.dt,
        distances,
        tolerance,
    ))
}

/// Largest j/k component over the whole trajectory.
pub fn check_reduction_jk(traj: &Trajectory, variant: Variant, tolerance: f64) -> ResidualReport {
    let series = traj.states.iter().map(|s| s.max_jk()).collect();
    ResidualReport::from_series("reduction_jk", variant, traj.grid(), traj.dt, series, tolerance)
}
