use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use qqm_core::dynamics::evolve;
use qqm_core::harness::check_continuity;
use qqm_core::states::{gaussian_packet, plane_wave};
use qqm_core::{
    fit_convergence, FitParameter, GridSpec, PotentialSpec, Quaternion, ResidualReport, SimulationConfig, Tolerances,
    Variant,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::runner::{run_scenario, write_atomic, RunOutcome};
use crate::scenario::Scenario;

pub const BUNDLED: &[(&str, &str)] = &[
    (
        "absorber_breakdown",
        include_str!("../scenarios/absorber_breakdown.json"),
    ),
    (
        "absorber_breakdown_rcwe",
        include_str!("../scenarios/absorber_breakdown_rcwe.json"),
    ),
    (
        "complex_v_momentum",
        include_str!("../scenarios/complex_v_momentum.json"),
    ),
    (
        "harmonic_ehrenfest",
        include_str!("../scenarios/harmonic_ehrenfest.json"),
    ),
    (
        "harmonic_ehrenfest_rcwe",
        include_str!("../scenarios/harmonic_ehrenfest_rcwe.json"),
    ),
    (
        "hermitian_identities",
        include_str!("../scenarios/hermitian_identities.json"),
    ),
    (
        "hermitian_identities_rcwe",
        include_str!("../scenarios/hermitian_identities_rcwe.json"),
    ),
    (
        "j_potential_attribution",
        include_str!("../scenarios/j_potential_attribution.json"),
    ),
    (
        "real_v_conservation",
        include_str!("../scenarios/real_v_conservation.json"),
    ),
    (
        "real_v_conservation_rcwe",
        include_str!("../scenarios/real_v_conservation_rcwe.json"),
    ),
    ("reduction_oracle", include_str!("../scenarios/reduction_oracle.json")),
    (
        "stationary_plane_wave",
        include_str!("../scenarios/stationary_plane_wave.json"),
    ),
];

pub fn bundled_source(name: &str) -> Result<&'static str, CliError> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, src)| *src)
        .ok_or_else(|| CliError::UnknownScenario(name.to_string()))
}

pub fn bundled_scenarios() -> Result<Vec<Scenario>, CliError> {
    BUNDLED
        .iter()
        .map(|(name, src)| Scenario::from_json(src, &format!("<bundled {name}>")))
        .collect()
}

/// Every `*.json` file in `dir`, in file-name order.
pub fn scenarios_in(dir: &Path) -> Result<Vec<Scenario>, CliError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .map(|entry| entry.map(|e| e.path()).map_err(|e| CliError::io(dir, e)))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| Scenario::from_path(p)).collect()
}

/// A fitted convergence order judged against its expected value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitOutcome {
    pub name: String,
    pub variant: Variant,
    pub parameter: FitParameter,
    /// `(parameter, max residual)` pairs, parameter decreasing.
    pub samples: Vec<(f64, f64)>,
    pub fitted_order: f64,
    pub expected_order: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl FitOutcome {
    fn judge(
        name: &str,
        variant: Variant,
        reports: &[ResidualReport],
        expected: f64,
        tolerance: f64,
    ) -> Result<Self, CliError> {
        let fit = fit_convergence(reports)?;
        let deviation = (fit.fitted_order - expected).abs();
        Ok(Self {
            name: name.to_string(),
            variant,
            parameter: fit.parameter,
            samples: fit.samples,
            fitted_order: fit.fitted_order,
            expected_order: expected,
            tolerance,
            pass: deviation <= tolerance,
        })
    }

    pub fn deviation(&self) -> f64 {
        (self.fitted_order - self.expected_order).abs()
    }
}

pub const DX_ORDER: (f64, f64) = (2.0, 0.2);
pub const DT_ORDER: (f64, f64) = (4.0, 0.3);

/// Pointwise continuity residual of a free moving packet at n = 128, 256, 512.
pub fn continuity_dx_fit(variant: Variant, tol_scale: f64) -> Result<FitOutcome, CliError> {
    let reports = [128, 256, 512]
        .iter()
        .map(|&n| {
            let grid = GridSpec::new(n, 20.0)?;
            let pot = PotentialSpec::free(grid);
            let cfg = SimulationConfig::new(variant, 1e-4, 20);
            let psi = gaussian_packet(grid, 0.0, 1.0, 1.0, Quaternion::new(0.5, 0.5, 0.5, 0.5));
            let traj = evolve(&psi, &pot, &cfg, 5)?;
            check_continuity(&traj, &pot, &cfg, &Tolerances::default())
        })
        .collect::<qqm_core::Result<Vec<_>>>()?;
    FitOutcome::judge("continuity_dx", variant, &reports, DX_ORDER.0, DX_ORDER.1 * tol_scale)
}

/// Trajectory error of a free plane wave against its exact discrete phase
/// after unit time, for dt = 2e-3, 1e-3, 5e-4.
pub fn trajectory_dt_fit(variant: Variant, tol_scale: f64) -> Result<FitOutcome, CliError> {
    let grid = GridSpec::new(64, 10.0)?;
    let k_index = 10;
    let mix = Quaternion::new(0.5, -0.5, 0.5, 0.5);
    let psi = plane_wave(grid, k_index, mix);
    let k = grid.wavenumber(k_index);
    let energy = (1.0 - (k * grid.dx()).cos()) / (grid.dx() * grid.dx());
    let phase = Quaternion::new(energy.cos(), -energy.sin(), 0.0, 0.0);
    let exact = match variant {
        Variant::Lcwe => psi.left_mul(phase),
        Variant::Rcwe => psi.right_mul(phase),
    };
    let reports = [2e-3, 1e-3, 5e-4]
        .iter()
        .map(|&dt: &f64| {
            let steps = (1.0 / dt).round() as usize;
            let cfg = SimulationConfig::new(variant, dt, steps);
            let traj = evolve(&psi, &PotentialSpec::free(grid), &cfg, steps)?;
            let err = traj.last().l2_distance(&exact)?;
            Ok(ResidualReport::from_series(
                "trajectory_error",
                variant,
                &grid,
                dt,
                vec![err],
                f64::INFINITY,
            ))
        })
        .collect::<qqm_core::Result<Vec<_>>>()?;
    FitOutcome::judge("trajectory_dt", variant, &reports, DT_ORDER.0, DT_ORDER.1 * tol_scale)
}

pub fn convergence_fits(tol_scale: f64) -> Result<Vec<FitOutcome>, CliError> {
    let jobs: Vec<(bool, Variant)> = [Variant::Lcwe, Variant::Rcwe]
        .into_iter()
        .flat_map(|v| [(true, v), (false, v)])
        .collect();
    jobs.par_iter()
        .map(|&(dx, v)| {
            if dx {
                continuity_dx_fit(v, tol_scale)
            } else {
                trajectory_dt_fit(v, tol_scale)
            }
        })
        .collect()
}

/// Result of `verify`: every scenario outcome plus the convergence fits.
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub runs: Vec<RunOutcome>,
    pub fits: Vec<FitOutcome>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.runs.iter().all(RunOutcome::passed) && self.fits.iter().all(|f| f.pass)
    }

    /// `scenario: identity` for every failing report and fit.
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .runs
            .iter()
            .flat_map(|run| run.failures().map(move |r| format!("{}: {}", run.name, r.identity)))
            .collect();
        out.extend(
            self.fits
                .iter()
                .filter(|f| !f.pass)
                .map(|f| format!("convergence: {}/{}", f.name, f.variant)),
        );
        out
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        for run in &self.runs {
            run.write(dir)?;
        }
        let mut json = serde_json::to_vec_pretty(&self.fits).expect("fits serialize");
        json.push(b'\n');
        write_atomic(&dir.join("convergence.json"), &json)
    }

    pub fn table(&self) -> String {
        let mut s = String::new();
        for run in &self.runs {
            s.push_str(&report_table(&run.name, &run.reports));
        }
        for f in &self.fits {
            let _ = writeln!(
                s,
                "{:<4}  {:<26} {:<58} {:>12.4} {:>12.3e}",
                status(f.pass),
                "convergence",
                format!(
                    "{}/{} (order {} in {})",
                    f.name, f.variant, f.expected_order, f.parameter
                ),
                f.fitted_order,
                f.tolerance
            );
        }
        s
    }
}

fn status(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// One line per report: status, scenario, identity, max residual, tolerance.
pub fn report_table(scenario: &str, reports: &[ResidualReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let _ = writeln!(
            s,
            "{:<4}  {:<26} {:<58} {:>12.3e} {:>12.3e}",
            status(r.pass),
            scenario,
            r.identity,
            r.max_residual,
            r.tolerance
        );
    }
    s
}

/// Runs the scenarios in parallel (results kept in input order) and the
/// convergence fits.
pub fn verify(scenarios: &[Scenario], tol_scale: f64) -> Result<SuiteOutcome, CliError> {
    let runs = scenarios
        .par_iter()
        .map(|s| run_scenario(s, tol_scale))
        .collect::<Result<Vec<_>, _>>()?;
    let fits = convergence_fits(tol_scale)?;
    Ok(SuiteOutcome { runs, fits })
}
