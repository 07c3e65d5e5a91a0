use super::{centered_rates, expectation_series, ResidualReport, Tolerances};
use crate::dynamics::{SimulationConfig, Trajectory, Variant};
use crate::error::Result;
use crate::operator::Operator;
use crate::potential::PotentialSpec;

/// The monitored combinations: four for LCWE, `O` itself for RCWE.
pub fn stationarity_combinations(op: &Operator, variant: Variant) -> Vec<(&'static str, Operator)> {
    let o = || op.clone();
    match variant {
        Variant::Lcwe => vec![
            ("o_minus_ioi", o().minus(o().sandwich_i())),
            ("oi_plus_io", o().then_i().plus(o().left_i())),
            ("o_plus_ioi", o().plus(o().sandwich_i())),
            ("oi_minus_io", o().then_i().minus(o().left_i())),
        ],
        Variant::Rcwe => vec![("o", o())],
    }
}

/// Drift rates of the monitored combinations. The report passes, i.e. the
/// trajectory is classified stationary, only when every combination stays
/// below `tol.stationarity` at every interior sample.
pub fn check_stationarity(
    traj: &Trajectory,
    pot: &PotentialSpec,
    cfg: &SimulationConfig,
    op: &Operator,
    tol: &Tolerances,
) -> Result<ResidualReport> {
    traj.require_samples(3)?;
    pot.grid().ensure_same(traj.grid())?;
    let mut worst = vec![0.0_f64; traj.len() - 2];
    let mut drifts = Vec::new();
    for (name, combo) in stationarity_combinations(op, cfg.variant) {
        let rates = centered_rates(&expectation_series(traj, &combo, cfg.variant)?, traj.sample_interval());
        let mut drift = 0.0_f64;
        for (w, r) in worst.iter_mut().zip(&rates) {
            *w = w.max(r.abs());
            drift = drift.max(r.abs());
        }
        drifts.push((format!("drift/{name}"), drift));
    }
    let mut report = ResidualReport::from_series(
        "stationarity",
        cfg.variant,
        traj.grid(),
        traj.dt,
        worst,
        tol.stationarity,
    );
    report.diagnostics = drifts;
    Ok(report)
}
