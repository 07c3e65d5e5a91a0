//! Vector potential `Q = α i + β j` and scalar potential `V = V0 + V1 j`.

use num_complex::Complex64;

use crate::error::{QqmError, Result};
use crate::grid::{GridSpec, QField};
use crate::quaternion::Quaternion;

/// Sampled potentials. `alpha` is real, `beta`, `v0`, `v1` are complex.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialSpec {
    grid: GridSpec,
    pub alpha: Vec<f64>,
    pub beta: Vec<Complex64>,
    pub v0: Vec<Complex64>,
    pub v1: Vec<Complex64>,
}

impl PotentialSpec {
    pub fn new(
        grid: GridSpec,
        alpha: Vec<f64>,
        beta: Vec<Complex64>,
        v0: Vec<Complex64>,
        v1: Vec<Complex64>,
    ) -> Result<Self> {
        let n = grid.n();
        for len in [alpha.len(), beta.len(), v0.len(), v1.len()] {
            if len != n {
                return Err(QqmError::LengthMismatch { expected: n, got: len });
            }
        }
        let finite = alpha.iter().all(|a| a.is_finite())
            && [&beta, &v0, &v1]
                .iter()
                .all(|c| c.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        if !finite {
            return Err(QqmError::InvalidConfig("potential samples must be finite".into()));
        }
        Ok(Self {
            grid,
            alpha,
            beta,
            v0,
            v1,
        })
    }

    /// `Q = 0`, `V = 0`.
    pub fn free(grid: GridSpec) -> Self {
        let n = grid.n();
        Self {
            grid,
            alpha: vec![0.0; n],
            beta: vec![Complex64::new(0.0, 0.0); n],
            v0: vec![Complex64::new(0.0, 0.0); n],
            v1: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// `Q = 0` with `V0 = f(x)` and `V1 = 0`.
    pub fn scalar(grid: GridSpec, f: impl Fn(f64) -> Complex64) -> Self {
        let mut p = Self::free(grid);
        p.v0 = grid.points().map(f).collect();
        p
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn with_alpha(mut self, f: impl Fn(f64) -> f64) -> Self {
        self.alpha = self.grid.points().map(f).collect();
        self
    }

    pub fn with_beta(mut self, f: impl Fn(f64) -> Complex64) -> Self {
        self.beta = self.grid.points().map(f).collect();
        self
    }

    pub fn with_v0(mut self, f: impl Fn(f64) -> Complex64) -> Self {
        self.v0 = self.grid.points().map(f).collect();
        self
    }

    pub fn with_v1(mut self, f: impl Fn(f64) -> Complex64) -> Self {
        self.v1 = self.grid.points().map(f).collect();
        self
    }

    /// `Q(x_m) = α i + β j`, a pure-imaginary quaternion at every point.
    pub fn q_at(&self, m: usize) -> Quaternion {
        let b = self.beta[m];
        Quaternion::new(0.0, self.alpha[m], b.re, b.im)
    }

    /// `V(x_m) = V0 + V1 j`.
    pub fn v_at(&self, m: usize) -> Quaternion {
        let (a, b) = (self.v0[m], self.v1[m]);
        Quaternion::new(a.re, a.im, b.re, b.im)
    }

    pub fn q_field(&self) -> QField {
        QField::from_parts(self.grid, (0..self.grid.n()).map(|m| self.q_at(m)).collect())
    }

    pub fn v_field(&self) -> QField {
        QField::from_parts(self.grid, (0..self.grid.n()).map(|m| self.v_at(m)).collect())
    }

    pub fn q_is_zero(&self) -> bool {
        self.alpha.iter().all(|&a| a == 0.0) && self.beta.iter().all(|b| b.re == 0.0 && b.im == 0.0)
    }

    pub fn beta_is_zero(&self) -> bool {
        self.beta.iter().all(|b| b.re == 0.0 && b.im == 0.0)
    }

    pub fn v1_is_zero(&self) -> bool {
        self.v1.iter().all(|b| b.re == 0.0 && b.im == 0.0)
    }

    pub fn im_v0_is_zero(&self) -> bool {
        self.v0.iter().all(|z| z.im == 0.0)
    }

    /// `V` real: `V1 = 0` and `Im V0 = 0`.
    pub fn v_is_real(&self) -> bool {
        self.v1_is_zero() && self.im_v0_is_zero()
    }

    /// `β = 0` and `V1 = 0`: the complex subspace is invariant.
    pub fn is_complex_reduction(&self) -> bool {
        self.beta_is_zero() && self.v1_is_zero()
    }

    pub fn max_abs(&self) -> f64 {
        let mut m: f64 = 0.0;
        for k in 0..self.grid.n() {
            m = m.max(self.q_at(k).abs_max()).max(self.v_at(k).abs_max());
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assembled_q_is_pure_imaginary() {
        let g = GridSpec::new(16, 4.0).unwrap();
        let p = PotentialSpec::free(g)
            .with_alpha(|x| x)
            .with_beta(|x| Complex64::new(x.sin(), x.cos()));
        assert!(p.q_field().values().iter().all(|q| q.x0 == 0.0));
        let m = 3;
        let expect = Quaternion::I * p.alpha[m] + Quaternion::from_complex(p.beta[m]) * Quaternion::J;
        assert_eq!(p.q_at(m), expect);
    }

    #[test]
    fn assembled_v_is_v0_plus_v1_j() {
        let g = GridSpec::new(8, 4.0).unwrap();
        let p = PotentialSpec::free(g)
            .with_v0(|_| Complex64::new(1.0, -2.0))
            .with_v1(|_| Complex64::new(0.5, 3.0));
        let expect = Quaternion::new(1.0, -2.0, 0.0, 0.0) + Quaternion::new(0.5, 3.0, 0.0, 0.0) * Quaternion::J;
        assert_eq!(p.v_at(0), expect);
        assert!(!p.v_is_real());
        assert!(!p.is_complex_reduction());
    }

    #[test]
    fn rejects_wrong_lengths() {
        let g = GridSpec::new(8, 4.0).unwrap();
        let z = vec![Complex64::new(0.0, 0.0); 8];
        assert!(PotentialSpec::new(g, vec![0.0; 7], z.clone(), z.clone(), z).is_err());
    }
}
