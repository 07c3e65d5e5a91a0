//! Quaternion-valued fields on a uniform periodic 1-D grid.
//!
//! Grid points sit at `x_m = -L/2 + m dx`, `m = 0..n`, with `dx = L/n` and
//! index `n` identified with index `0`. All stencils wrap around.

use std::fmt;
use std::io::{self, Write};

use crate::error::{QqmError, Result};
use crate::quaternion::Quaternion;

/// Smallest grid accepted by [`GridSpec::new`].
pub const MIN_POINTS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    n: usize,
    length: f64,
    dx: f64,
}

impl GridSpec {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(QqmError::InvalidGrid(format!(
                "need at least {MIN_POINTS} points, got {n}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(QqmError::InvalidGrid(format!(
                "length must be finite and positive, got {length}"
            )));
        }
        Ok(Self {
            n,
            length,
            dx: length / n as f64,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    #[inline]
    pub fn x(&self, m: usize) -> f64 {
        -0.5 * self.length + m as f64 * self.dx
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |m| self.x(m))
    }

    /// Wavenumber `2π k_index / L` of a grid-commensurate plane wave.
    pub fn wavenumber(&self, k_index: i64) -> f64 {
        2.0 * std::f64::consts::PI * k_index as f64 / self.length
    }

    pub fn ensure_same(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(QqmError::GridMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "grid(n={}, L={})", self.n, self.length)
    }
}

/// A quaternion sampled at every point of a [`GridSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct QField {
    grid: GridSpec,
    values: Vec<Quaternion>,
}

impl QField {
    /// Builds a field, rejecting wrong lengths and non-finite samples.
    pub fn new(grid: GridSpec, values: Vec<Quaternion>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(QqmError::LengthMismatch {
                expected: grid.n(),
                got: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|q| !q.is_finite()) {
            return Err(QqmError::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    /// Internal constructor for values produced by stencils on valid fields.
    pub(crate) fn from_parts(grid: GridSpec, values: Vec<Quaternion>) -> Self {
        debug_assert_eq!(values.len(), grid.n());
        Self { grid, values }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self::constant(grid, Quaternion::ZERO)
    }

    pub fn constant(grid: GridSpec, q: Quaternion) -> Self {
        Self {
            grid,
            values: vec![q; grid.n()],
        }
    }

    /// Samples `f(x_m)` at every grid point.
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(f64) -> Quaternion) -> Self {
        let values = grid.points().map(&mut f).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Quaternion] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Quaternion> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|q| q.is_finite())
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> Self {
        Self::from_parts(self.grid, self.values.iter().map(|&q| f(q)).collect())
    }

    /// Pointwise map that also receives the grid coordinate.
    pub fn map_with_x(&self, f: impl Fn(f64, Quaternion) -> Quaternion) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(m, &q)| f(self.grid.x(m), q))
            .collect();
        Self::from_parts(self.grid, values)
    }

    pub fn zip_with(&self, other: &QField, f: impl Fn(Quaternion, Quaternion) -> Quaternion) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self::from_parts(self.grid, values))
    }

    pub fn add(&self, other: &QField) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &QField) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, other: &QField, s: f64) -> Result<Self> {
        self.zip_with(other, |a, b| a + b * s)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|q| q * s)
    }

    /// Multiplies every sample by `q` from the left.
    pub fn left_mul(&self, q: Quaternion) -> Self {
        self.map(|v| q * v)
    }

    /// Multiplies every sample by `q` from the right.
    pub fn right_mul(&self, q: Quaternion) -> Self {
        self.map(|v| v * q)
    }

    /// Pointwise `coeff[m] · self[m]`.
    pub fn left_mul_field(&self, coeff: &QField) -> Result<Self> {
        coeff.zip_with(self, |c, v| c * v)
    }

    /// Pointwise `self[m] · coeff[m]`.
    pub fn right_mul_field(&self, coeff: &QField) -> Result<Self> {
        self.zip_with(coeff, |v, c| v * c)
    }

    /// Cyclic shift by `k` points: `out[m] = self[m - k]`.
    pub fn roll(&self, k: isize) -> Self {
        let n = self.len() as isize;
        let values = (0..n).map(|m| self.values[(m - k).rem_euclid(n) as usize]).collect();
        Self::from_parts(self.grid, values)
    }

    /// `∫ |Ψ|² dx` as a Riemann sum.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|q| q.norm_sq()).sum::<f64>() * self.grid.dx()
    }

    /// Discrete L² distance `(Σ |a - b|² dx)^{1/2}`.
    pub fn l2_distance(&self, other: &QField) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| (a - b).norm_sq())
            .sum();
        Ok((s * self.grid.dx()).sqrt())
    }

    /// Largest absolute quaternion component anywhere on the grid.
    pub fn max_abs_component(&self) -> f64 {
        self.values.iter().map(|q| q.abs_max()).fold(0.0, f64::max)
    }

    /// Largest `|x2|` or `|x3|` anywhere on the grid (content outside ℂ).
    pub fn max_jk(&self) -> f64 {
        self.values
            .iter()
            .map(|q| q.x2.abs().max(q.x3.abs()))
            .fold(0.0, f64::max)
    }

    /// Writes `x,x0,x1,x2,x3`, one row per grid point.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "x,x0,x1,x2,x3")?;
        for (m, q) in self.values.iter().enumerate() {
            writeln!(w, "{},{},{},{},{}", self.grid.x(m), q.x0, q.x1, q.x2, q.x3)?;
        }
        Ok(())
    }
}

/// Central difference `(f[m+1] - f[m-1]) / 2dx`, periodic.
pub fn gradient(f: &QField) -> QField {
    let n = f.len();
    let inv = 0.5 / f.grid.dx();
    let v = &f.values;
    let values = (0..n)
        .map(|m| {
            let up = v[if m + 1 == n { 0 } else { m + 1 }];
            let down = v[if m == 0 { n - 1 } else { m - 1 }];
            (up - down) * inv
        })
        .collect();
    QField::from_parts(f.grid, values)
}

/// Three-point Laplacian `(f[m+1] - 2 f[m] + f[m-1]) / dx²`, periodic.
pub fn laplacian(f: &QField) -> QField {
    let n = f.len();
    let inv = 1.0 / (f.grid.dx() * f.grid.dx());
    let v = &f.values;
    let values = (0..n)
        .map(|m| {
            let up = v[if m + 1 == n { 0 } else { m + 1 }];
            let down = v[if m == 0 { n - 1 } else { m - 1 }];
            (up - v[m] * 2.0 + down) * inv
        })
        .collect();
    QField::from_parts(f.grid, values)
}

/// Quaternionic inner product `Σ conj(f[m]) g[m] dx`.
pub fn inner_product(f: &QField, g: &QField) -> Result<Quaternion> {
    f.grid.ensure_same(&g.grid)?;
    let s: Quaternion = f.values.iter().zip(&g.values).map(|(&a, &b)| a.conj() * b).sum();
    Ok(s * f.grid.dx())
}

/// Central-difference gradient of a real sampled function on the grid.
pub fn gradient_real(grid: &GridSpec, f: &[f64]) -> Vec<f64> {
    let n = grid.n();
    let inv = 0.5 / grid.dx();
    (0..n)
        .map(|m| {
            let up = f[if m + 1 == n { 0 } else { m + 1 }];
            let down = f[if m == 0 { n - 1 } else { m - 1 }];
            (up - down) * inv
        })
        .collect()
}
