//! A plain complex Schrödinger solver on a periodic 1-D grid.
//!
//! Solves `iħ ∂tψ = [-(ħ²/2m)(∂x - iA)² + V0] ψ` with the same stencils and
//! RK4 scheme as the quaternionic engine, but on its own code path: this
//! crate knows nothing about quaternions. Expanding the covariant square,
//!
//! ```text
//! -(∂x - iA)² ψ = -ψ'' + i(Aψ)' + iAψ' + A²ψ
//! ```
//!
//! where `ψ''` is the three-point Laplacian and `'` the central difference.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch")]
    GridMismatch,
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("non-finite state at step {step}")]
    NonFinite { step: usize },
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// Periodic grid, `x_m = -L/2 + m L/n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleGrid {
    n: usize,
    length: f64,
}

impl OracleGrid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 3 || !(length.is_finite() && length > 0.0) {
            return Err(OracleError::InvalidGrid(format!("n = {n}, L = {length}")));
        }
        Ok(Self { n, length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self, m: usize) -> f64 {
        -0.5 * self.length + m as f64 * self.dx()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CField {
    grid: OracleGrid,
    values: Vec<Complex64>,
}

impl CField {
    pub fn new(grid: OracleGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(OracleError::LengthMismatch {
                expected: grid.n,
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: OracleGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.n).map(|m| f(grid.x(m))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &OracleGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()
    }

    /// `∫ x |ψ|² dx`.
    pub fn position_moment(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(m, z)| self.grid.x(m) * z.norm_sqr())
            .sum::<f64>()
            * self.grid.dx()
    }

    pub fn l2_distance(&self, other: &CField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(OracleError::GridMismatch);
        }
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((s * self.grid.dx()).sqrt())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub hbar: f64,
    pub mass: f64,
    pub dt: f64,
    pub steps: usize,
    pub sample_every: usize,
}

#[derive(Clone, Debug)]
pub struct CTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<CField>,
}

struct Generator<'a> {
    grid: OracleGrid,
    v0: &'a [Complex64],
    a: &'a [f64],
    hbar: f64,
    prefactor: f64,
}

impl Generator<'_> {
    fn hamiltonian(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let n = self.grid.n;
        let dx = self.grid.dx();
        let i = Complex64::new(0.0, 1.0);
        let ap: Vec<Complex64> = psi.iter().zip(self.a).map(|(p, &a)| p * a).collect();
        (0..n)
            .map(|m| {
                let up = if m + 1 == n { 0 } else { m + 1 };
                let dn = if m == 0 { n - 1 } else { m - 1 };
                let lap = (psi[up] - psi[m] * 2.0 + psi[dn]) / (dx * dx);
                let d_ap = (ap[up] - ap[dn]) / (2.0 * dx);
                let d_p = (psi[up] - psi[dn]) / (2.0 * dx);
                let a = self.a[m];
                let kin = -lap + i * d_ap + i * a * d_p + psi[m] * (a * a);
                kin * self.prefactor + self.v0[m] * psi[m]
            })
            .collect()
    }

    fn rhs(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let f = Complex64::new(0.0, -1.0 / self.hbar);
        self.hamiltonian(psi).into_iter().map(|h| f * h).collect()
    }

    fn step(&self, psi: &[Complex64], dt: f64) -> Vec<Complex64> {
        let axpy = |y: &[Complex64], k: &[Complex64], s: f64| -> Vec<Complex64> {
            y.iter().zip(k).map(|(a, b)| a + b * s).collect()
        };
        let k1 = self.rhs(psi);
        let k2 = self.rhs(&axpy(psi, &k1, 0.5 * dt));
        let k3 = self.rhs(&axpy(psi, &k2, 0.5 * dt));
        let k4 = self.rhs(&axpy(psi, &k3, dt));
        (0..psi.len())
            .map(|m| psi[m] + (k1[m] + (k2[m] + k3[m]) * 2.0 + k4[m]) * (dt / 6.0))
            .collect()
    }
}

/// `Hψ` for the complex Hamiltonian with vector potential `A` and scalar `V0`.
pub fn apply_hamiltonian(psi: &CField, v0: &[Complex64], a: &[f64], hbar: f64, mass: f64) -> Result<CField> {
    check_lengths(psi, v0, a)?;
    let gen = Generator {
        grid: psi.grid,
        v0,
        a,
        hbar,
        prefactor: hbar * hbar / (2.0 * mass),
    };
    Ok(CField {
        grid: psi.grid,
        values: gen.hamiltonian(&psi.values),
    })
}

fn check_lengths(psi: &CField, v0: &[Complex64], a: &[f64]) -> Result<()> {
    for len in [v0.len(), a.len()] {
        if len != psi.grid.n {
            return Err(OracleError::LengthMismatch {
                expected: psi.grid.n,
                got: len,
            });
        }
    }
    Ok(())
}

/// RK4 evolution, keeping the initial state and every `sample_every`-th step.
pub fn evolve_complex(psi0: &CField, v0: &[Complex64], a: &[f64], cfg: &OracleConfig) -> Result<CTrajectory> {
    check_lengths(psi0, v0, a)?;
    if !(cfg.hbar > 0.0 && cfg.mass > 0.0 && cfg.dt.is_finite() && cfg.dt != 0.0) {
        return Err(OracleError::InvalidConfig(format!("{cfg:?}")));
    }
    if cfg.sample_every == 0 {
        return Err(OracleError::InvalidConfig("sample_every must be at least 1".into()));
    }
    let gen = Generator {
        grid: psi0.grid,
        v0,
        a,
        hbar: cfg.hbar,
        prefactor: cfg.hbar * cfg.hbar / (2.0 * cfg.mass),
    };
    let mut psi = psi0.values.clone();
    let mut times = vec![0.0];
    let mut states = vec![psi0.clone()];
    for step in 1..=cfg.steps {
        psi = gen.step(&psi, cfg.dt);
        if !psi.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(OracleError::NonFinite { step });
        }
        if step % cfg.sample_every == 0 {
            times.push(step as f64 * cfg.dt);
            states.push(CField {
                grid: psi0.grid,
                values: psi.clone(),
            });
        }
    }
    Ok(CTrajectory { times, states })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_plane_wave_is_eigenstate() {
        let g = OracleGrid::new(64, 10.0).unwrap();
        let k = 2.0 * std::f64::consts::PI * 5.0 / g.length();
        let psi = CField::from_fn(g, |x| Complex64::new(0.0, k * x).exp());
        let zeros = vec![Complex64::new(0.0, 0.0); 64];
        let h = apply_hamiltonian(&psi, &zeros, &[0.0; 64], 1.0, 1.0).unwrap();
        let e = (1.0 - (k * g.dx()).cos()) / (g.dx() * g.dx());
        for (a, b) in h.values().iter().zip(psi.values()) {
            assert!((a - b * e).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = OracleGrid::new(16, 1.0).unwrap();
        let psi = CField::from_fn(g, |_| Complex64::new(1.0, 0.0));
        let v = vec![Complex64::new(0.0, 0.0); 15];
        assert!(apply_hamiltonian(&psi, &v, &[0.0; 16], 1.0, 1.0).is_err());
        let v = vec![Complex64::new(0.0, 0.0); 16];
        let cfg = OracleConfig {
            hbar: 1.0,
            mass: 1.0,
            dt: 1e-3,
            steps: 1,
            sample_every: 0,
        };
        assert!(evolve_complex(&psi, &v, &[0.0; 16], &cfg).is_err());
        assert!(OracleGrid::new(2, 1.0).is_err());
    }
}
