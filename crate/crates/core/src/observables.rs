//! Density, gauge-invariant momentum, current, source and expectation values.
//!
//! Expectation values are real for every operator: each integrand is a
//! quaternion plus its own conjugate. The imaginary residue is computed and
//! checked against a tolerance before it is dropped.

use crate::dynamics::{SimulationConfig, Variant};
use crate::error::{QqmError, Result};
use crate::grid::{gradient, QField};
use crate::operator::Operator;
use crate::potential::PotentialSpec;
use crate::quaternion::Quaternion;

/// Tolerance on the imaginary residue of quantities that are real by
/// construction.
pub const DEFAULT_REALITY_TOL: f64 = 1e-12;

/// Residue bound for symmetrized expectation integrals.
pub const EXPECTATION_RESIDUE_TOL: f64 = 1e-14;

/// One named real value at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableSample {
    pub time: f64,
    pub name: String,
    pub value: f64,
}

/// `ρ`, `J` and `g` on the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityCurrentSource {
    pub rho: Vec<f64>,
    pub current: Vec<f64>,
    pub source: Vec<f64>,
}

/// `ρ = Ψ*Ψ`.
pub fn density(psi: &QField) -> Vec<f64> {
    psi.values().iter().map(|q| (q.conj() * *q).x0).collect()
}

/// LCWE: `ΠΨ = -iħ(∂xΨ - QΨ)`; RCWE: `ΠΨ = -ħ(∂xΨ - QΨ) i`.
pub fn momentum_field(psi: &QField, pot: &PotentialSpec, cfg: &SimulationConfig) -> Result<QField> {
    pot.grid().ensure_same(psi.grid())?;
    let cov = gradient(psi).sub(&psi.left_mul_field(&pot.q_field())?)?;
    Ok(match cfg.variant {
        Variant::Lcwe => cov.left_mul(Quaternion::I).scale(-cfg.hbar),
        Variant::Rcwe => cov.right_mul(Quaternion::I).scale(-cfg.hbar),
    })
}

fn real_part_checked(q: Quaternion, context: &'static str, tol: f64) -> Result<f64> {
    let scale = q.abs_max().max(1.0);
    let residue = q.imag_abs_max();
    if residue > tol * scale {
        return Err(QqmError::ImaginaryResidue {
            context,
            residue,
            tolerance: tol * scale,
        });
    }
    Ok(q.x0)
}

/// Probability current. Real pointwise (a quaternion plus its conjugate).
pub fn current(psi: &QField, pot: &PotentialSpec, cfg: &SimulationConfig) -> Result<Vec<f64>> {
    let pi = momentum_field(psi, pot, cfg)?;
    let inv = 0.5 / cfg.mass;
    psi.values()
        .iter()
        .zip(pi.values())
        .map(|(&p, &pp)| {
            let s = match cfg.variant {
                Variant::Lcwe => p.conj() * pp + pp.conj() * p,
                Variant::Rcwe => pp * p.conj() + p * pp.conj(),
            };
            real_part_checked(s * inv, "probability current", DEFAULT_REALITY_TOL)
        })
        .collect()
}

/// Source term of the continuity equation.
///
/// LCWE: `g = Ψ* (V*i - iV) Ψ / ħ`; RCWE: `g = (Ψ i Ψ* V* - V Ψ i Ψ*) / ħ`.
pub fn source(psi: &QField, pot: &PotentialSpec, cfg: &SimulationConfig) -> Result<Vec<f64>> {
    pot.grid().ensure_same(psi.grid())?;
    let i = Quaternion::I;
    let inv = 1.0 / cfg.hbar;
    psi.values()
        .iter()
        .enumerate()
        .map(|(m, &p)| {
            let v = pot.v_at(m);
            let s = match cfg.variant {
                Variant::Lcwe => p.conj() * (v.conj() * i - i * v) * p,
                Variant::Rcwe => {
                    let w = p * i * p.conj();
                    w * v.conj() - v * w
                }
            };
            real_part_checked(s * inv, "source term", DEFAULT_REALITY_TOL)
        })
        .collect()
}

pub fn density_current_source(
    psi: &QField,
    pot: &PotentialSpec,
    cfg: &SimulationConfig,
) -> Result<DensityCurrentSource> {
    Ok(DensityCurrentSource {
        rho: density(psi),
        current: current(psi, pot, cfg)?,
        source: source(psi, pot, cfg)?,
    })
}

/// Symmetrized integral for an already-applied operator, returning the real
/// value and the discarded imaginary residue.
///
/// LCWE: `½∫[Ψ*(OΨ) + (Ψ*(OΨ))*]`; RCWE: `½∫[(OΨ)Ψ* + ((OΨ)Ψ*)*]`.
pub fn symmetrized_integral(psi: &QField, o_psi: &QField, variant: Variant) -> Result<(f64, f64)> {
    psi.grid().ensure_same(o_psi.grid())?;
    let s: Quaternion = psi
        .values()
        .iter()
        .zip(o_psi.values())
        .map(|(&p, &op)| {
            let a = match variant {
                Variant::Lcwe => p.conj() * op,
                Variant::Rcwe => op * p.conj(),
            };
            a + a.conj()
        })
        .sum();
    let s = s * (0.5 * psi.grid().dx());
    Ok((s.x0, s.imag_abs_max()))
}

/// Like [`symmetrized_integral`] but fails if the residue exceeds `tol`.
pub fn expectation_of_applied(psi: &QField, o_psi: &QField, variant: Variant, tol: f64) -> Result<f64> {
    let (value, residue) = symmetrized_integral(psi, o_psi, variant)?;
    if residue > tol {
        return Err(QqmError::ImaginaryResidue {
            context: "expectation value",
            residue,
            tolerance: tol,
        });
    }
    Ok(value)
}

/// `⟨O⟩` for either variant; real for any operator.
pub fn expectation(op: &Operator, psi: &QField, variant: Variant) -> Result<f64> {
    let o_psi = op.apply(psi)?;
    expectation_of_applied(psi, &o_psi, variant, EXPECTATION_RESIDUE_TOL)
}

/// `⟨Π⟩ = m ∫ J dx`.
pub fn canonical_momentum(psi: &QField, pot: &PotentialSpec, cfg: &SimulationConfig) -> Result<f64> {
    let j = current(psi, pot, cfg)?;
    Ok(cfg.mass * j.iter().sum::<f64>() * psi.grid().dx())
}

/// `-iħ∂x` (LCWE) or `-ħ(∂x|i)` (RCWE).
pub fn momentum_operator(cfg: &SimulationConfig) -> Operator {
    match cfg.variant {
        Variant::Lcwe => Operator::momentum_left(cfg.hbar),
        Variant::Rcwe => Operator::momentum_right(cfg.hbar),
    }
}

/// `V x` as a left multiplier.
pub fn potential_times_position(pot: &PotentialSpec) -> Operator {
    Operator::MultiplyByField(pot.v_field()).after(Operator::Position)
}

/// Classicality-breaking term of the position Ehrenfest relation:
/// `-(2/ħ)⟨iVx⟩` for LCWE, `-(2/ħ)⟨(Vx|i)⟩` for RCWE.
pub fn position_breakdown_term(psi: &QField, pot: &PotentialSpec, cfg: &SimulationConfig) -> Result<f64> {
    let vx = potential_times_position(pot);
    let op = match cfg.variant {
        Variant::Lcwe => vx.left_i(),
        Variant::Rcwe => vx.right_i(),
    };
    Ok(-2.0 / cfg.hbar * expectation(&op, psi, cfg.variant)?)
}
