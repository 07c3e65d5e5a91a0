//! The two quaternionic wave equations and their time integration.
//!
//! * LCWE: `iħ ∂tΨ = HΨ` with `H = (ħ²/2m) D∘D + V`, `D f = i(∂x f - Q f)`.
//! * RCWE: `ħ (∂tΨ) i = HΨ` with `H = -(ħ²/2m) E∘E + V`, `E f = ∂x f - Q f`.
//!
//! Expanding the compositions gives
//!
//! ```text
//! D∘D f = -f'' + (Qf)' - (iQi) f' + (iQi) Q f
//! E∘E f =  f'' - (Qf)' - Q f'    + Q Q f
//! ```
//!
//! The `f''` term uses the compact three-point Laplacian; every first
//! derivative uses the central difference. `Q` and `V` always multiply from
//! the left.

use serde::{Deserialize, Serialize};

use crate::error::{QqmError, Result};
use crate::grid::{gradient, inner_product, laplacian, GridSpec, QField};
use crate::potential::PotentialSpec;
use crate::quaternion::Quaternion;

/// Which wave equation drives the evolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Lcwe,
    Rcwe,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Lcwe => "lcwe",
            Variant::Rcwe => "rcwe",
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const DEFAULT_SAFETY_FACTOR: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulationConfig {
    pub hbar: f64,
    pub mass: f64,
    pub dt: f64,
    pub steps: usize,
    pub variant: Variant,
    /// Advisory bound `dt ≤ c dx² m / ħ`.
    pub safety_factor: f64,
}

impl SimulationConfig {
    /// `ħ = m = 1` with the default safety factor.
    pub fn new(variant: Variant, dt: f64, steps: usize) -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            dt,
            steps,
            variant,
            safety_factor: DEFAULT_SAFETY_FACTOR,
        }
    }

    pub fn with_units(mut self, hbar: f64, mass: f64) -> Self {
        self.hbar = hbar;
        self.mass = mass;
        self
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.hbar) || !positive(self.mass) {
            return Err(QqmError::InvalidConfig("hbar and mass must be positive".into()));
        }
        if !positive(self.dt) {
            return Err(QqmError::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if self.steps == 0 {
            return Err(QqmError::InvalidConfig("steps must be at least 1".into()));
        }
        if !positive(self.safety_factor) {
            return Err(QqmError::InvalidConfig("safety factor must be positive".into()));
        }
        Ok(())
    }

    pub fn total_time(&self) -> f64 {
        self.dt * self.steps as f64
    }

    /// `c dx² m / ħ`.
    pub fn stability_limit(&self, grid: &GridSpec) -> f64 {
        self.safety_factor * grid.dx() * grid.dx() * self.mass / self.hbar
    }

    /// `ħ² / 2m`.
    pub fn kinetic_prefactor(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }
}

/// Assembled Hamiltonian for one potential, variant and unit system.
#[derive(Clone, Debug)]
pub struct Hamiltonian {
    grid: GridSpec,
    variant: Variant,
    hbar: f64,
    prefactor: f64,
    q: Vec<Quaternion>,
    v: Vec<Quaternion>,
    /// `i Q i` for LCWE, `Q` for RCWE: the coefficient of `f'`.
    first_order: Vec<Quaternion>,
    /// `(iQi) Q` for LCWE, `Q Q` for RCWE.
    zeroth_order: Vec<Quaternion>,
}

impl Hamiltonian {
    pub fn new(pot: &PotentialSpec, cfg: &SimulationConfig) -> Self {
        let grid = *pot.grid();
        let q: Vec<Quaternion> = (0..grid.n()).map(|m| pot.q_at(m)).collect();
        let v = (0..grid.n()).map(|m| pot.v_at(m)).collect();
        let (first_order, zeroth_order) = match cfg.variant {
            Variant::Lcwe => q
                .iter()
                .map(|&qm| {
                    let iqi = Quaternion::I * qm * Quaternion::I;
                    (iqi, iqi * qm)
                })
                .unzip(),
            Variant::Rcwe => q.iter().map(|&qm| (qm, qm * qm)).unzip(),
        };
        Self {
            grid,
            variant: cfg.variant,
            hbar: cfg.hbar,
            prefactor: cfg.kinetic_prefactor(),
            q,
            v,
            first_order,
            zeroth_order,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Kinetic part only (no `V`).
    pub fn apply_kinetic(&self, psi: &QField) -> Result<QField> {
        self.grid.ensure_same(psi.grid())?;
        let lap = laplacian(psi);
        let dpsi = gradient(psi);
        let qpsi: Vec<Quaternion> = self.q.iter().zip(psi.values()).map(|(&q, &p)| q * p).collect();
        let dqpsi = gradient(&QField::from_parts(self.grid, qpsi));
        let c = self.prefactor;
        let values = (0..self.grid.n())
            .map(|m| {
                let p = psi.values()[m];
                let lap = lap.values()[m];
                let d1 = dpsi.values()[m];
                let dq = dqpsi.values()[m];
                let a = self.first_order[m];
                let b = self.zeroth_order[m];
                match self.variant {
                    Variant::Lcwe => (-lap + dq - a * d1 + b * p) * c,
                    Variant::Rcwe => (lap - dq - a * d1 + b * p) * (-c),
                }
            })
            .collect();
        Ok(QField::from_parts(self.grid, values))
    }

    pub fn apply(&self, psi: &QField) -> Result<QField> {
        let kin = self.apply_kinetic(psi)?;
        Ok(QField::from_parts(
            self.grid,
            kin.values()
                .iter()
                .zip(&self.v)
                .zip(psi.values())
                .map(|((&k, &v), &p)| k + v * p)
                .collect(),
        ))
    }

    /// `∂tΨ`: `-(i/ħ) HΨ` for LCWE, `-(1/ħ) (HΨ) i` for RCWE.
    pub fn time_derivative(&self, psi: &QField) -> Result<QField> {
        let h = self.apply(psi)?;
        let s = -1.0 / self.hbar;
        Ok(match self.variant {
            Variant::Lcwe => h.map(|q| (Quaternion::I * q) * s),
            Variant::Rcwe => h.map(|q| (q * Quaternion::I) * s),
        })
    }

    /// One classical RK4 step of size `dt`.
    pub fn step_rk4(&self, psi: &QField, dt: f64) -> Result<QField> {
        let k1 = self.time_derivative(psi)?;
        let k2 = self.time_derivative(&psi.add_scaled(&k1, 0.5 * dt)?)?;
        let k3 = self.time_derivative(&psi.add_scaled(&k2, 0.5 * dt)?)?;
        let k4 = self.time_derivative(&psi.add_scaled(&k3, dt)?)?;
        let w = dt / 6.0;
        let values = (0..self.grid.n())
            .map(|m| psi.values()[m] + (k1.values()[m] + (k2.values()[m] + k3.values()[m]) * 2.0 + k4.values()[m]) * w)
            .collect();
        Ok(QField::from_parts(self.grid, values))
    }

    /// `⟨f, Hg⟩ - ⟨Hf, g⟩` with the quaternionic inner product.
    pub fn hermiticity_defect(&self, f: &QField, g: &QField) -> Result<Quaternion> {
        let hg = self.apply(g)?;
        let hf = self.apply(f)?;
        Ok(inner_product(f, &hg)? - inner_product(&hf, g)?)
    }
}

pub fn apply_h_lcwe(psi: &QField, pot: &PotentialSpec, cfg: &SimulationConfig) -> Result<QField> {
    Hamiltonian::new(pot, &cfg.with_variant(Variant::Lcwe)).apply(psi)
}

pub fn apply_h_rcwe(psi: &QField, pot: &PotentialSpec, cfg: &SimulationConfig) -> Result<QField> {
    Hamiltonian::new(pot, &cfg.with_variant(Variant::Rcwe)).apply(psi)
}

/// `HΨ` for the configured variant.
pub fn apply_h(psi: &QField, pot: &PotentialSpec, cfg: &SimulationConfig) -> Result<QField> {
    pot.grid().ensure_same(psi.grid())?;
    Hamiltonian::new(pot, cfg).apply(psi)
}

pub fn time_derivative(psi: &QField, pot: &PotentialSpec, cfg: &SimulationConfig) -> Result<QField> {
    pot.grid().ensure_same(psi.grid())?;
    Hamiltonian::new(pot, cfg).time_derivative(psi)
}

pub fn step_rk4(psi: &QField, pot: &PotentialSpec, cfg: &SimulationConfig) -> Result<QField> {
    pot.grid().ensure_same(psi.grid())?;
    Hamiltonian::new(pot, cfg).step_rk4(psi, cfg.dt)
}

pub fn hermiticity_defect(pot: &PotentialSpec, cfg: &SimulationConfig, f: &QField, g: &QField) -> Result<Quaternion> {
    pot.grid().ensure_same(f.grid())?;
    f.grid().ensure_same(g.grid())?;
    Hamiltonian::new(pot, cfg).hermiticity_defect(f, g)
}

/// Sampled states of one evolution.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<QField>,
    /// Integrator step.
    pub dt: f64,
    pub sample_every: usize,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn grid(&self) -> &GridSpec {
        self.states[0].grid()
    }

    /// Spacing between stored samples.
    pub fn sample_interval(&self) -> f64 {
        self.dt * self.sample_every as f64
    }

    pub fn last(&self) -> &QField {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn require_samples(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            Err(QqmError::TooFewSamples {
                needed,
                got: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// Integrates `cfg.steps` RK4 steps from `psi0`, keeping every
/// `sample_every`-th state (the initial state is always kept).
pub fn evolve(psi0: &QField, pot: &PotentialSpec, cfg: &SimulationConfig, sample_every: usize) -> Result<Trajectory> {
    cfg.validate()?;
    pot.grid().ensure_same(psi0.grid())?;
    if sample_every == 0 {
        return Err(QqmError::InvalidConfig("sample_every must be at least 1".into()));
    }
    let limit = cfg.stability_limit(psi0.grid());
    if cfg.dt > limit {
        log::warn!(
            "dt = {} exceeds the advisory stability bound {:.3e} (safety factor {})",
            cfg.dt,
            limit,
            cfg.safety_factor
        );
    }
    let h = Hamiltonian::new(pot, cfg);
    let mut times = vec![0.0];
    let mut states = vec![psi0.clone()];
    let mut psi = psi0.clone();
    for step in 1..=cfg.steps {
        psi = h.step_rk4(&psi, cfg.dt)?;
        if !psi.is_finite() {
            return Err(QqmError::NanDetected { step });
        }
        if step % sample_every == 0 {
            times.push(step as f64 * cfg.dt);
            states.push(psi.clone());
        }
    }
    Ok(Trajectory {
        times,
        states,
        dt: cfg.dt,
        sample_every,
    })
}
