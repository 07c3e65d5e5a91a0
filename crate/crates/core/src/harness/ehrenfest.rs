use super::{centered_rates, expectation_series, ResidualReport, Tolerances};
use crate::dynamics::{SimulationConfig, Trajectory, Variant};
use crate::error::{QqmError, Result};
use crate::grid::{gradient, QField};
use crate::observables::{
    canonical_momentum, expectation, momentum_operator, position_breakdown_term, potential_times_position,
};
use crate::operator::Operator;
use crate::potential::PotentialSpec;
use crate::quaternion::Quaternion;

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Position relation: `d⟨x⟩/dt - ⟨Π⟩/m - b` where `b` is the
/// classicality-breaking term, plus the algebraic identity
/// `2⟨iVx⟩ = ⟨(iV - V*i)x⟩`. For LCWE with `Im V0 = 0` a third report
/// confirms that the breaking term vanishes.
pub fn check_ehrenfest_position(
    traj: &Trajectory,
    pot: &PotentialSpec,
    cfg: &SimulationConfig,
    tol: &Tolerances,
) -> Result<Vec<ResidualReport>> {
    traj.require_samples(3)?;
    pot.grid().ensure_same(traj.grid())?;
    let grid = traj.grid();
    let x = expectation_series(traj, &Operator::Position, cfg.variant)?;
    let pi = traj
        .states
        .iter()
        .map(|s| canonical_momentum(s, pot, cfg))
        .collect::<Result<Vec<f64>>>()?;
    let breaking = traj
        .states
        .iter()
        .map(|s| position_breakdown_term(s, pot, cfg))
        .collect::<Result<Vec<f64>>>()?;
    let rates = centered_rates(&x, traj.sample_interval());
    let residuals: Vec<f64> = rates
        .iter()
        .enumerate()
        .map(|(k, v)| v - pi[k + 1] / cfg.mass - breaking[k + 1])
        .collect();
    let mut reports = vec![ResidualReport::from_series(
        "ehrenfest_position",
        cfg.variant,
        grid,
        traj.dt,
        residuals,
        tol.dynamical,
    )
    .with_diagnostic("max_abs_breakdown_term", max_abs(&breaking))
    .with_diagnostic("max_abs_velocity", max_abs(&rates))];

    let v = pot.v_field();
    let combined = v.map(|q| Quaternion::I * q - q.conj() * Quaternion::I);
    let combined_op = Operator::MultiplyByField(combined).after(Operator::Position);
    let ivx = potential_times_position(pot).left_i();
    let gaps = traj
        .states
        .iter()
        .map(|s| Ok(2.0 * expectation(&ivx, s, cfg.variant)? - expectation(&combined_op, s, cfg.variant)?))
        .collect::<Result<Vec<f64>>>()?;
    reports.push(ResidualReport::from_series(
        "ehrenfest_position_breakdown_identity",
        cfg.variant,
        grid,
        traj.dt,
        gaps,
        tol.algebraic,
    ));

    if cfg.variant == Variant::Lcwe && pot.im_v0_is_zero() {
        reports.push(ResidualReport::from_series(
            "ehrenfest_position_breakdown_vanishes",
            cfg.variant,
            grid,
            traj.dt,
            breaking,
            tol.algebraic,
        ));
    }
    Ok(reports)
}

/// `2 Σ Re(Ψ* V* ∂xΨ) dx`, the rate of change of `⟨p⟩` written as a single
/// integral. Identical for both variants.
pub fn momentum_integral_form(psi: &QField, pot: &PotentialSpec) -> Result<f64> {
    pot.grid().ensure_same(psi.grid())?;
    let d = gradient(psi);
    let s: f64 = psi
        .values()
        .iter()
        .zip(d.values())
        .enumerate()
        .map(|(m, (&p, &dp))| (p.conj() * pot.v_at(m).conj() * dp).x0)
        .sum();
    Ok(2.0 * s * psi.grid().dx())
}

/// `∂x∘V - V∘∂x`, the derivative of the potential as an operator.
fn potential_derivative(pot: &PotentialSpec) -> Operator {
    let v = Operator::MultiplyByField(pot.v_field());
    Operator::Derivative
        .after(v.clone())
        .minus(v.after(Operator::Derivative))
}

/// `2⟨-∂xV⟩ + 2⟨-V∂x⟩` with `∂xV` the commutator `[∂x, V]`.
pub fn momentum_commutator_form(psi: &QField, pot: &PotentialSpec, variant: Variant) -> Result<f64> {
    let v = Operator::MultiplyByField(pot.v_field());
    let dv = expectation(&potential_derivative(pot), psi, variant)?;
    let vd = expectation(&v.after(Operator::Derivative), psi, variant)?;
    Ok(-2.0 * dv - 2.0 * vd)
}

/// Momentum relation with canonical `p` (requires `Q = 0`).
///
/// Reports `d⟨p⟩/dt` against the integral form, the agreement of the
/// integral and commutator forms, and for real `V` the collapse to
/// `-⟨∂xV⟩` together with the classical residual `d⟨p⟩/dt + ⟨∂xV⟩`.
pub fn check_ehrenfest_momentum(
    traj: &Trajectory,
    pot: &PotentialSpec,
    cfg: &SimulationConfig,
    tol: &Tolerances,
) -> Result<Vec<ResidualReport>> {
    if !pot.q_is_zero() {
        return Err(QqmError::PotentialNotAllowed(
            "the momentum relation uses canonical momentum and needs Q = 0".into(),
        ));
    }
    traj.require_samples(3)?;
    pot.grid().ensure_same(traj.grid())?;
    let grid = traj.grid();
    let p = expectation_series(traj, &momentum_operator(cfg), cfg.variant)?;
    let integral = traj
        .states
        .iter()
        .map(|s| momentum_integral_form(s, pot))
        .collect::<Result<Vec<f64>>>()?;
    let commutator = traj
        .states
        .iter()
        .map(|s| momentum_commutator_form(s, pot, cfg.variant))
        .collect::<Result<Vec<f64>>>()?;
    let rates = centered_rates(&p, traj.sample_interval());

    let residuals: Vec<f64> = rates.iter().enumerate().map(|(k, r)| r - integral[k + 1]).collect();
    // pointwise-gradient variant of -⟨∂xV⟩, kept as a diagnostic
    let v_grad = gradient(&pot.v_field());
    let pointwise_gap = rates
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let f = expectation(
                &Operator::MultiplyByField(v_grad.clone()),
                &traj.states[k + 1],
                cfg.variant,
            )?;
            Ok((r + f).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut reports = vec![ResidualReport::from_series(
        "ehrenfest_momentum",
        cfg.variant,
        grid,
        traj.dt,
        residuals,
        tol.dynamical,
    )
    .with_diagnostic("max_abs_rate", max_abs(&rates))
    .with_diagnostic("pointwise_gradient_gap", max_abs(&pointwise_gap))];

    let form_gaps: Vec<f64> = integral.iter().zip(&commutator).map(|(a, b)| a - b).collect();
    reports.push(ResidualReport::from_series(
        "ehrenfest_momentum_forms",
        cfg.variant,
        grid,
        traj.dt,
        form_gaps,
        tol.momentum_forms,
    ));

    if pot.v_is_real() {
        let dv_op = potential_derivative(pot);
        let dv = expectation_series(traj, &dv_op, cfg.variant)?;
        let collapse: Vec<f64> = commutator.iter().zip(&dv).map(|(c, d)| c + d).collect();
        reports.push(ResidualReport::from_series(
            "ehrenfest_momentum_real_v_collapse",
            cfg.variant,
            grid,
            traj.dt,
            collapse,
            tol.momentum_forms,
        ));
        let classical: Vec<f64> = rates.iter().enumerate().map(|(k, r)| r + dv[k + 1]).collect();
        reports.push(ResidualReport::from_series(
            "ehrenfest_momentum_classical",
            cfg.variant,
            grid,
            traj.dt,
            classical,
            tol.dynamical,
        ));
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve;
    use crate::grid::GridSpec;
    use crate::states::gaussian_packet;
    use num_complex::Complex64;

    #[test]
    fn momentum_check_rejects_vector_potential() {
        let g = GridSpec::new(64, 10.0).unwrap();
        let pot = PotentialSpec::free(g).with_alpha(|_| 0.1);
        let cfg = SimulationConfig::new(Variant::Lcwe, 1e-3, 2);
        let psi = gaussian_packet(g, 0.0, 1.0, 0.0, Quaternion::ONE);
        let traj = evolve(&psi, &pot, &cfg, 1).unwrap();
        assert!(matches!(
            check_ehrenfest_momentum(&traj, &pot, &cfg, &Tolerances::default()),
            Err(QqmError::PotentialNotAllowed(_))
        ));
    }

    #[test]
    fn forms_agree_on_a_single_state() {
        let g = GridSpec::new(128, 16.0).unwrap();
        let pot = PotentialSpec::scalar(g, |x| Complex64::new(0.3 * x * x, 0.2 * x.sin()))
            .with_v1(|x| Complex64::new(0.1, -0.05 * x));
        let psi = gaussian_packet(g, 0.5, 1.0, 0.8, Quaternion::new(0.5, 0.5, 0.5, 0.5));
        for v in [Variant::Lcwe, Variant::Rcwe] {
            let a = momentum_integral_form(&psi, &pot).unwrap();
            let b = momentum_commutator_form(&psi, &pot, v).unwrap();
            assert!((a - b).abs() < 1e-12, "{v}: {a} vs {b}");
        }
    }
}
