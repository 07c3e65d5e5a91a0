use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use qqm_core::dynamics::{evolve, Trajectory};
use qqm_core::harness::{
    check_continuity, check_ehrenfest_momentum, check_ehrenfest_position, check_evolution_identities,
    check_global_balance, check_hermitian_identities, check_stationarity,
};
use qqm_core::observables::{
    canonical_momentum, density, expectation, momentum_operator, position_breakdown_term, source,
};
use qqm_core::oracle_bridge::{check_reduction_jk, compare, run_oracle};
use qqm_core::{Operator, QqmError, Quaternion, ResidualReport, Tolerances};
use serde::Serialize;

use crate::error::CliError;
use crate::scenario::{Check, Observable, Prepared, Scenario};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObservableRow {
    pub time: f64,
    pub name: &'static str,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldRow {
    pub time: f64,
    pub x: f64,
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub density: f64,
}

/// Everything one scenario run produces.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub name: String,
    pub reports: Vec<ResidualReport>,
    pub observables: Vec<ObservableRow>,
    pub fields: Option<Vec<FieldRow>>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ResidualReport> {
        self.reports.iter().filter(|r| !r.pass)
    }

    /// Writes `<name>_observables.csv`, `<name>_reports.json` and, when
    /// requested, `<name>_fields.csv` into `dir`, each atomically.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let mut written = Vec::new();

        let path = dir.join(format!("{}_observables.csv", self.name));
        write_atomic(&path, &csv_bytes(&self.observables, &path)?)?;
        written.push(path);

        let path = dir.join(format!("{}_reports.json", self.name));
        let mut json = serde_json::to_vec_pretty(&self.reports).expect("reports serialize");
        json.push(b'\n');
        write_atomic(&path, &json)?;
        written.push(path);

        if let Some(fields) = &self.fields {
            let path = dir.join(format!("{}_fields.csv", self.name));
            write_atomic(&path, &csv_bytes(fields, &path)?)?;
            written.push(path);
        }
        Ok(written)
    }
}

fn csv_bytes<T: Serialize>(rows: &[T], path: &Path) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| CliError::io(path, std::io::Error::other(e)))?;
    }
    w.into_inner()
        .map_err(|e| CliError::io(path, std::io::Error::other(e.to_string())))
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| CliError::io(&tmp, e))?;
    f.sync_all().map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

/// Evolves the scenario and evaluates every selected check.
pub fn run_scenario(scenario: &Scenario, tol_scale: f64) -> Result<RunOutcome, CliError> {
    let wrap = |source: QqmError| CliError::Run {
        scenario: scenario.name.clone(),
        source,
    };
    let prepared = scenario.prepare()?;
    let tol = scenario.tolerances.scaled(tol_scale);
    log::info!(
        "{}: evolving {} steps on n = {} ({})",
        scenario.name,
        scenario.time.steps,
        scenario.grid.n,
        scenario.variant
    );
    let traj = evolve(
        &prepared.psi0,
        &prepared.potential,
        &prepared.config,
        scenario.time.sample_every,
    )
    .map_err(wrap)?;

    let mut reports = Vec::new();
    for &check in &scenario.checks {
        log::debug!("{}: check {}", scenario.name, check.as_str());
        reports.extend(run_check(check, scenario, &prepared, &traj, &tol).map_err(wrap)?);
    }
    for r in &mut reports {
        if let Some(t) = scenario.tolerance_override(&r.identity) {
            *r = r.clone().with_tolerance(t * tol_scale);
        }
    }

    let observables = observable_rows(scenario, &prepared, &traj).map_err(wrap)?;
    let fields = scenario.outputs.dump_fields.then(|| field_rows(&traj));
    Ok(RunOutcome {
        name: scenario.name.clone(),
        reports,
        observables,
        fields,
    })
}

fn run_check(
    check: Check,
    scenario: &Scenario,
    p: &Prepared,
    traj: &Trajectory,
    tol: &Tolerances,
) -> qqm_core::Result<Vec<ResidualReport>> {
    let (pot, cfg) = (&p.potential, &p.config);
    let per_operator = |f: &dyn Fn(&Operator) -> qqm_core::Result<Vec<ResidualReport>>| {
        let mut out = Vec::new();
        for name in &scenario.operators {
            let prefix = format!("{}/{}", check.as_str(), name.as_str());
            for r in f(&name.build(cfg))? {
                let suffix = r.identity.strip_prefix(check.as_str()).unwrap_or("").to_string();
                let identity = format!("{prefix}{suffix}");
                out.push(r.renamed(identity));
            }
        }
        Ok(out)
    };
    match check {
        Check::Continuity => Ok(vec![
            check_continuity(traj, pot, cfg, tol)?,
            check_global_balance(traj, pot, cfg, tol)?,
        ]),
        Check::EhrenfestPosition => check_ehrenfest_position(traj, pot, cfg, tol),
        Check::EhrenfestMomentum => check_ehrenfest_momentum(traj, pot, cfg, tol),
        Check::HermitianIdentities => {
            per_operator(&|op| match check_hermitian_identities(pot, cfg, op, &p.psi0, tol) {
                Err(QqmError::NonHermitian {
                    defect,
                    relative,
                    tolerance,
                }) => {
                    log::warn!("{}: hermitian identities refused, defect {defect}", scenario.name);
                    let refused = ResidualReport::from_series(
                        "hermitian_identities/hermiticity",
                        cfg.variant,
                        &p.grid,
                        cfg.dt,
                        vec![relative],
                        tolerance,
                    )
                    .with_diagnostic("defect_norm", defect.norm());
                    Ok(vec![refused])
                }
                other => other,
            })
        }
        Check::EvolutionIdentities => per_operator(&|op| check_evolution_identities(traj, pot, cfg, op, tol)),
        Check::Stationarity => per_operator(&|op| Ok(vec![check_stationarity(traj, pot, cfg, op, tol)?])),
        Check::OracleCompare => {
            let reference = run_oracle(&p.psi0, pot, cfg, scenario.time.sample_every)?;
            Ok(vec![
                compare(traj, &reference, cfg.variant, tol.oracle)?,
                check_reduction_jk(traj, cfg.variant, tol.algebraic),
            ])
        }
    }
}

fn observable_rows(scenario: &Scenario, p: &Prepared, traj: &Trajectory) -> qqm_core::Result<Vec<ObservableRow>> {
    let (pot, cfg) = (&p.potential, &p.config);
    let variant = cfg.variant;
    let dx = p.grid.dx();
    let momentum = momentum_operator(cfg);
    let j_derivative = Operator::MultiplyByConst(Quaternion::J).after(Operator::Derivative);
    let k_derivative = Operator::MultiplyByConst(Quaternion::K).after(Operator::Derivative);
    let mut rows = Vec::with_capacity(traj.len() * scenario.outputs.observables.len());
    for (&time, psi) in traj.times.iter().zip(&traj.states) {
        for &obs in &scenario.outputs.observables {
            let value = match obs {
                Observable::Norm => psi.norm_sq(),
                Observable::Position => expectation(&Operator::Position, psi, variant)?,
                Observable::Momentum => expectation(&momentum, psi, variant)?,
                Observable::CanonicalMomentum => canonical_momentum(psi, pot, cfg)?,
                Observable::MaxAbsSource => source(psi, pot, cfg)?.iter().fold(0.0_f64, |m, g| m.max(g.abs())),
                Observable::SourceIntegral => source(psi, pot, cfg)?.iter().sum::<f64>() * dx,
                Observable::PositionBreakdown => position_breakdown_term(psi, pot, cfg)?,
                Observable::MaxJk => psi.max_jk(),
                Observable::JDerivative => expectation(&j_derivative, psi, variant)?,
                Observable::KDerivative => expectation(&k_derivative, psi, variant)?,
            };
            rows.push(ObservableRow {
                time,
                name: obs.as_str(),
                value,
            });
        }
    }
    Ok(rows)
}

fn field_rows(traj: &Trajectory) -> Vec<FieldRow> {
    let grid = traj.grid();
    let mut rows = Vec::with_capacity(traj.len() * grid.n());
    for (&time, psi) in traj.times.iter().zip(&traj.states) {
        for (m, (q, rho)) in psi.values().iter().zip(density(psi)).enumerate() {
            rows.push(FieldRow {
                time,
                x: grid.x(m),
                x0: q.x0,
                x1: q.x1,
                x2: q.x2,
                x3: q.x3,
                density: rho,
            });
        }
    }
    rows
}
