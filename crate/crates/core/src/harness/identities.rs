//! Identities that follow from a hermitian Hamiltonian.
//!
//! For symmetric `H` the LCWE gives `ħ d⟨A⟩/dt = ⟨H(iA)⟩ - ⟨(Ai)H⟩` and the
//! RCWE `ħ d⟨A⟩/dt = ⟨[H, (A|i)]⟩`. Substituting the four combinations of
//! `O`, `iO`, `Oi` and `iOi` yields the relations in [`relations`]. Every
//! operator is time independent, so explicit `⟨∂t O⟩` terms are zero.

use super::{centered_rates, expectation_series, ResidualReport, Tolerances};
use crate::dynamics::{Hamiltonian, SimulationConfig, Trajectory, Variant};
use crate::error::{QqmError, Result};
use crate::grid::{inner_product, GridSpec, QField};
use crate::observables::expectation_of_applied;
use crate::observables::EXPECTATION_RESIDUE_TOL;
use crate::operator::Operator;
use crate::potential::PotentialSpec;
use crate::quaternion::Quaternion;
use crate::states::gaussian_packet;

/// `⟨H∘left⟩ + sign·⟨right∘H⟩ = rate_sign · ħ d⟨rate_op⟩/dt`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: &'static str,
    pub left: Operator,
    pub right: Operator,
    pub sign: f64,
    pub rate_op: Operator,
    pub rate_sign: f64,
}

impl Relation {
    fn commutator(name: &'static str, x: Operator, rate_op: Operator, rate_sign: f64) -> Self {
        Self {
            name,
            left: x.clone(),
            right: x,
            sign: -1.0,
            rate_op,
            rate_sign,
        }
    }

    fn anticommutator(name: &'static str, x: Operator, rate_op: Operator, rate_sign: f64) -> Self {
        Self {
            name,
            left: x.clone(),
            right: x,
            sign: 1.0,
            rate_op,
            rate_sign,
        }
    }

    /// `⟨H∘left⟩ + sign·⟨right∘H⟩` on one state.
    pub fn lhs(&self, h: &Hamiltonian, psi: &QField) -> Result<f64> {
        let variant = h.variant();
        let a = h.apply(&self.left.apply(psi)?)?;
        let b = self.right.apply(&h.apply(psi)?)?;
        let ea = expectation_of_applied(psi, &a, variant, EXPECTATION_RESIDUE_TOL)?;
        let eb = expectation_of_applied(psi, &b, variant, EXPECTATION_RESIDUE_TOL)?;
        Ok(ea + self.sign * eb)
    }
}

/// The relations checked for `op` under `variant`.
pub fn relations(op: &Operator, variant: Variant) -> Vec<Relation> {
    let o = || op.clone();
    let o_minus_ioi = || o().minus(o().sandwich_i());
    let o_plus_ioi = || o().plus(o().sandwich_i());
    let oi_plus_io = || o().then_i().plus(o().left_i());
    let oi_minus_io = || o().then_i().minus(o().left_i());
    match variant {
        Variant::Lcwe => vec![
            Relation::commutator("commutator_o_minus_ioi", o_minus_ioi(), oi_plus_io(), -1.0),
            Relation::anticommutator("anticommutator_o_plus_ioi", o_plus_ioi(), oi_minus_io(), 1.0),
            Relation::commutator("commutator_oi_plus_io", oi_plus_io(), o_minus_ioi(), 1.0),
            Relation::anticommutator("anticommutator_oi_minus_io", oi_minus_io(), o_plus_ioi(), -1.0),
            Relation {
                name: "h_o_plus_ioi_h",
                left: o(),
                right: o().sandwich_i(),
                sign: 1.0,
                rate_op: o().left_i(),
                rate_sign: -1.0,
            },
        ],
        Variant::Rcwe => vec![
            Relation::commutator("commutator_o", o(), o().right_i(), -1.0),
            Relation::commutator("commutator_o_right_i", o().right_i(), o(), 1.0),
        ],
    }
}

/// Largest sampled hermiticity defect.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermiticityProbe {
    pub defect: Quaternion,
    /// `|defect| / (‖f‖‖Hg‖ + ‖Hf‖‖g‖)`.
    pub relative: f64,
}

fn probe_fields(psi: &QField) -> Vec<QField> {
    let g: GridSpec = *psi.grid();
    let l = g.length();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        psi.clone(),
        psi.left_mul(Quaternion::J),
        gaussian_packet(g, -l / 8.0, l / 12.0, g.wavenumber(3), Quaternion::new(h, 0.0, h, 0.0)),
        gaussian_packet(
            g,
            l / 10.0,
            l / 16.0,
            -g.wavenumber(2),
            Quaternion::new(0.5, 0.5, -0.5, 0.5),
        ),
    ]
}

/// Samples `⟨f, Hg⟩ - ⟨Hf, g⟩` over pairs drawn from `psi`, `j psi` and two
/// fixed Gaussian probes, returning the worst relative defect.
pub fn hermiticity_probe(h: &Hamiltonian, psi: &QField) -> Result<HermiticityProbe> {
    let fields = probe_fields(psi);
    let applied = fields.iter().map(|f| h.apply(f)).collect::<Result<Vec<_>>>()?;
    let mut worst = HermiticityProbe {
        defect: Quaternion::ZERO,
        relative: 0.0,
    };
    for a in 0..fields.len() {
        for b in a..fields.len() {
            let defect = inner_product(&fields[a], &applied[b])? - inner_product(&applied[a], &fields[b])?;
            let scale = fields[a].norm_sq().sqrt() * applied[b].norm_sq().sqrt()
                + applied[a].norm_sq().sqrt() * fields[b].norm_sq().sqrt();
            let relative = if scale > 0.0 { defect.norm() / scale } else { 0.0 };
            if relative > worst.relative {
                worst = HermiticityProbe { defect, relative };
            }
        }
    }
    Ok(worst)
}

/// Checks every relation for `op` on `psi`, taking the time derivatives from
/// a short five-point window evolved forwards and backwards by `cfg.dt`.
///
/// Fails with [`QqmError::NonHermitian`] when the sampled defect exceeds
/// `tol.hermiticity`.
pub fn check_hermitian_identities(
    pot: &PotentialSpec,
    cfg: &SimulationConfig,
    op: &Operator,
    psi: &QField,
    tol: &Tolerances,
) -> Result<Vec<ResidualReport>> {
    cfg.validate()?;
    pot.grid().ensure_same(psi.grid())?;
    let h = Hamiltonian::new(pot, cfg);
    let probe = hermiticity_probe(&h, psi)?;
    if probe.relative.is_nan() || probe.relative > tol.hermiticity {
        return Err(QqmError::NonHermitian {
            defect: probe.defect,
            relative: probe.relative,
            tolerance: tol.hermiticity,
        });
    }
    let tau = cfg.dt;
    let fwd1 = h.step_rk4(psi, tau)?;
    let fwd2 = h.step_rk4(&fwd1, tau)?;
    let back1 = h.step_rk4(psi, -tau)?;
    let back2 = h.step_rk4(&back1, -tau)?;
    let window = [back2, back1, fwd1, fwd2];
    relations(op, cfg.variant)
        .into_iter()
        .map(|rel| {
            let lhs = rel.lhs(&h, psi)?;
            let e =
                |f: &QField| expectation_of_applied(f, &rel.rate_op.apply(f)?, cfg.variant, EXPECTATION_RESIDUE_TOL);
            let rate = (e(&window[0])? - 8.0 * e(&window[1])? + 8.0 * e(&window[2])? - e(&window[3])?) / (12.0 * tau);
            let rhs = rel.rate_sign * cfg.hbar * rate;
            Ok(ResidualReport::from_series(
                format!("hermitian_identities/{}", rel.name),
                cfg.variant,
                psi.grid(),
                cfg.dt,
                vec![lhs - rhs],
                tol.identities,
            )
            .with_diagnostic("lhs", lhs)
            .with_diagnostic("rhs", rhs)
            .with_diagnostic("hermiticity_defect", probe.relative))
        })
        .collect()
}

/// The same relations evaluated along a trajectory, with the total time
/// derivative taken by centered differences between samples. No
/// hermiticity precondition: a non-hermitian `H` shows up as a residual.
pub fn check_evolution_identities(
    traj: &Trajectory,
    pot: &PotentialSpec,
    cfg: &SimulationConfig,
    op: &Operator,
    tol: &Tolerances,
) -> Result<Vec<ResidualReport>> {
    traj.require_samples(3)?;
    pot.grid().ensure_same(traj.grid())?;
    let h = Hamiltonian::new(pot, cfg);
    let interior = &traj.states[1..traj.len() - 1];
    relations(op, cfg.variant)
        .into_iter()
        .map(|rel| {
            let series = expectation_series(traj, &rel.rate_op, cfg.variant)?;
            let rates = centered_rates(&series, traj.sample_interval());
            let lhs = interior.iter().map(|s| rel.lhs(&h, s)).collect::<Result<Vec<f64>>>()?;
            let rhs: Vec<f64> = rates.iter().map(|r| rel.rate_sign * cfg.hbar * r).collect();
            let gaps = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
            let max_abs = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            Ok(ResidualReport::from_series(
                format!("evolution_identities/{}", rel.name),
                cfg.variant,
                traj.grid(),
                traj.dt,
                gaps,
                tol.identities,
            )
            .with_diagnostic("max_abs_lhs", max_abs(&lhs))
            .with_diagnostic("max_abs_rate", max_abs(&rhs)))
        })
        .collect()
}
