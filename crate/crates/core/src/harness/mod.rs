//! Numerical checks of the identities satisfied by the two wave equations.
//!
//! Every check consumes a finished trajectory (or a single state) and
//! returns [`ResidualReport`]s. Time derivatives of sampled series use
//! centered differences at interior samples only.

mod continuity;
mod ehrenfest;
mod identities;
mod report;
mod stationarity;

use serde::{Deserialize, Serialize};

pub use continuity::{check_continuity, check_global_balance, continuity_residual};
pub use ehrenfest::{
    check_ehrenfest_momentum, check_ehrenfest_position, momentum_commutator_form, momentum_integral_form,
};
pub use identities::{
    check_evolution_identities, check_hermitian_identities, hermiticity_probe, relations, HermiticityProbe, Relation,
};
pub use report::{fit_convergence, ConvergenceFit, FitParameter, ResidualReport};
pub use stationarity::{check_stationarity, stationarity_combinations};

use crate::dynamics::{Trajectory, Variant};
use crate::error::Result;
use crate::observables::expectation;
use crate::operator::Operator;

/// Pass thresholds, each applied to a report's `max_residual`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Identities that hold exactly up to rounding.
    pub algebraic: f64,
    /// Ehrenfest relations and global balance.
    pub dynamical: f64,
    /// Pointwise continuity residual, dominated by the O(dx²) stencil gap.
    pub continuity_pointwise: f64,
    /// Agreement of the two forms of the momentum relation.
    pub momentum_forms: f64,
    /// Hermitian-Hamiltonian and total-derivative identities.
    pub identities: f64,
    /// Maximum drift rate for a stationary classification.
    pub stationarity: f64,
    /// Relative hermiticity defect accepted as hermitian.
    pub hermiticity: f64,
    /// L² distance to the complex reference solver.
    pub oracle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: 1e-12,
            dynamical: 1e-6,
            continuity_pointwise: 1e-3,
            momentum_forms: 1e-8,
            identities: 1e-7,
            stationarity: 1e-8,
            hermiticity: 1e-10,
            oracle: 1e-8,
        }
    }
}

impl Tolerances {
    /// Every threshold multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            algebraic: self.algebraic * factor,
            dynamical: self.dynamical * factor,
            continuity_pointwise: self.continuity_pointwise * factor,
            momentum_forms: self.momentum_forms * factor,
            identities: self.identities * factor,
            stationarity: self.stationarity * factor,
            hermiticity: self.hermiticity * factor,
            oracle: self.oracle * factor,
        }
    }
}

/// `(f[k+1] - f[k-1]) / 2τ` for every interior sample.
pub fn centered_rates(series: &[f64], tau: f64) -> Vec<f64> {
    series.windows(3).map(|w| (w[2] - w[0]) / (2.0 * tau)).collect()
}

/// `⟨O⟩` at every stored sample.
pub fn expectation_series(traj: &Trajectory, op: &Operator, variant: Variant) -> Result<Vec<f64>> {
    traj.states.iter().map(|psi| expectation(op, psi, variant)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_rates_are_exact_for_quadratics() {
        let tau = 0.1;
        let f: Vec<f64> = (0..6).map(|k| (k as f64 * tau).powi(2)).collect();
        let d = centered_rates(&f, tau);
        assert_eq!(d.len(), 4);
        for (k, v) in d.iter().enumerate() {
            assert!((v - 2.0 * (k + 1) as f64 * tau).abs() < 1e-12);
        }
    }

    #[test]
    fn scaling_tightens_everything() {
        let t = Tolerances::default().scaled(0.01);
        assert_eq!(t.dynamical, 1e-8);
        assert!((t.algebraic - 1e-14).abs() < 1e-30);
    }
}
