use super::{centered_rates, ResidualReport, Tolerances};
use crate::dynamics::{SimulationConfig, Trajectory};
use crate::error::Result;
use crate::grid::gradient_real;
use crate::observables::{current, density, source};
use crate::potential::PotentialSpec;

/// `r = ∂tρ + ∂xJ - g` at every interior sample, one row per sample.
///
/// `∂tρ` is the centered difference over neighbouring samples and `∂xJ` the
/// central-difference stencil applied to the current.
pub fn continuity_residual(traj: &Trajectory, pot: &PotentialSpec, cfg: &SimulationConfig) -> Result<Vec<Vec<f64>>> {
    traj.require_samples(3)?;
    pot.grid().ensure_same(traj.grid())?;
    let grid = *traj.grid();
    let tau = traj.sample_interval();
    let rho: Vec<Vec<f64>> = traj.states.iter().map(density).collect();
    (1..traj.len() - 1)
        .map(|k| {
            let psi = &traj.states[k];
            let div_j = gradient_real(&grid, &current(psi, pot, cfg)?);
            let g = source(psi, pot, cfg)?;
            Ok((0..grid.n())
                .map(|m| (rho[k + 1][m] - rho[k - 1][m]) / (2.0 * tau) + div_j[m] - g[m])
                .collect())
        })
        .collect()
}

/// Pointwise continuity residual over the interior samples.
pub fn check_continuity(
    traj: &Trajectory,
    pot: &PotentialSpec,
    cfg: &SimulationConfig,
    tol: &Tolerances,
) -> Result<ResidualReport> {
    let rows = continuity_residual(traj, pot, cfg)?;
    Ok(ResidualReport::from_fields(
        "continuity",
        cfg.variant,
        traj.grid(),
        traj.dt,
        &rows,
        tol.continuity_pointwise,
    ))
}

/// `|dN/dt - ∫g dx|` at every interior sample.
pub fn check_global_balance(
    traj: &Trajectory,
    pot: &PotentialSpec,
    cfg: &SimulationConfig,
    tol: &Tolerances,
) -> Result<ResidualReport> {
    traj.require_samples(3)?;
    pot.grid().ensure_same(traj.grid())?;
    let dx = traj.grid().dx();
    let norms: Vec<f64> = traj.states.iter().map(|s| s.norm_sq()).collect();
    let rates = centered_rates(&norms, traj.sample_interval());
    let mut max_source = 0.0_f64;
    let residuals = rates
        .iter()
        .enumerate()
        .map(|(k, rate)| {
            let g = source(&traj.states[k + 1], pot, cfg)?;
            let total = g.iter().sum::<f64>() * dx;
            max_source = max_source.max(total.abs());
            Ok(rate - total)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ResidualReport::from_series(
        "continuity_global_balance",
        cfg.variant,
        traj.grid(),
        traj.dt,
        residuals,
        tol.dynamical,
    )
    .with_diagnostic("max_abs_source_integral", max_source))
}
