//! Real quaternions `q = x0 + x1 i + x2 j + x3 k` with the Hamilton product
//! (`ij = -ji = k`, `ijk = -1`) and the symplectic view `q = z + ζ j`.
//!
//! Storage is always the four real components. The complex-pair view is a
//! conversion only, so every non-commutative product goes through [`qmul`].

use core::fmt;
use core::iter::Sum;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A quaternion `x0 + x1 i + x2 j + x3 k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { x0, x1, x2, x3 }
    }

    pub const fn real(x0: f64) -> Self {
        Self::new(x0, 0.0, 0.0, 0.0)
    }

    /// Embeds a complex number `a + b i` in the `{1, i}` slice.
    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z.re, z.im, 0.0, 0.0)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.x0, -self.x1, -self.x2, -self.x3)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// The vector (imaginary) part `x1 i + x2 j + x3 k`.
    pub fn imag(self) -> Self {
        Self::new(0.0, self.x1, self.x2, self.x3)
    }

    /// Largest absolute value among the three imaginary components.
    pub fn imag_abs_max(self) -> f64 {
        self.x1.abs().max(self.x2.abs()).max(self.x3.abs())
    }

    /// Largest absolute component.
    pub fn abs_max(self) -> f64 {
        self.x0.abs().max(self.imag_abs_max())
    }

    pub fn is_finite(self) -> bool {
        self.x0.is_finite() && self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }

    /// Componentwise comparison with an absolute tolerance.
    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        (self - other).abs_max() <= tol
    }

    /// `i q - q i`.
    pub fn commutator_i(self) -> Self {
        Self::I * self - self * Self::I
    }

    /// `i q + q i`.
    pub fn anticommutator_i(self) -> Self {
        Self::I * self + self * Self::I
    }

    pub fn to_symplectic(self) -> SymplecticPair {
        SymplecticPair {
            z: Complex64::new(self.x0, self.x1),
            zeta: Complex64::new(self.x2, self.x3),
        }
    }

    pub fn from_symplectic(p: SymplecticPair) -> Self {
        Self::new(p.z.re, p.z.im, p.zeta.re, p.zeta.im)
    }
}

/// Hamilton product with `i j = k`, `j k = i`, `k i = j`, `i² = j² = k² = -1`.
#[inline]
pub fn qmul(a: Quaternion, b: Quaternion) -> Quaternion {
    Quaternion {
        x0: a.x0 * b.x0 - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
        x1: a.x0 * b.x1 + a.x1 * b.x0 + a.x2 * b.x3 - a.x3 * b.x2,
        x2: a.x0 * b.x2 - a.x1 * b.x3 + a.x2 * b.x0 + a.x3 * b.x1,
        x3: a.x0 * b.x3 + a.x1 * b.x2 - a.x2 * b.x1 + a.x3 * b.x0,
    }
}

/// A quaternion written as `z + ζ j` with complex `z`, `ζ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymplecticPair {
    pub z: Complex64,
    pub zeta: Complex64,
}

impl SymplecticPair {
    pub fn new(z: Complex64, zeta: Complex64) -> Self {
        Self { z, zeta }
    }

    pub fn reconstruct(self) -> Quaternion {
        Quaternion::from_symplectic(self)
    }
}

impl From<SymplecticPair> for Quaternion {
    fn from(p: SymplecticPair) -> Self {
        Quaternion::from_symplectic(p)
    }
}

impl From<Quaternion> for SymplecticPair {
    fn from(q: Quaternion) -> Self {
        q.to_symplectic()
    }
}

impl From<f64> for Quaternion {
    fn from(x: f64) -> Self {
        Quaternion::real(x)
    }
}

impl From<Complex64> for Quaternion {
    fn from(z: Complex64) -> Self {
        Quaternion::from_complex(z)
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x0 + rhs.x0, self.x1 + rhs.x1, self.x2 + rhs.x2, self.x3 + rhs.x3)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x0 - rhs.x0, self.x1 - rhs.x1, self.x2 - rhs.x2, self.x3 - rhs.x3)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        qmul(self, rhs)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, rhs: Quaternion) -> Quaternion {
        rhs.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, rhs: f64) -> Self {
        Self::new(self.x0 / rhs, self.x1 / rhs, self.x2 / rhs, self.x3 / rhs)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign<f64> for Quaternion {
    fn mul_assign(&mut self, rhs: f64) {
        *self = self.scale(rhs);
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Quaternion::ZERO, Add::add)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.x0, self.x1, self.x2, self.x3)
    }
}
