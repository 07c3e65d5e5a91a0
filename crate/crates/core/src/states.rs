//! Initial-state families.

use std::f64::consts::PI;

use crate::grid::{GridSpec, QField};
use crate::quaternion::Quaternion;

/// `(2πσ²)^{-1/4} exp(-(x-c)²/4σ²) e^{i k0 x} · mix`.
///
/// `width` is the standard deviation σ of `|Ψ|²`. The complex phase sits on
/// the left and the quaternion `mix` on the right, so `|Ψ|² = |mix|² ×` the
/// normal density. Nothing is renormalized numerically.
pub fn gaussian_packet(grid: GridSpec, center: f64, width: f64, k0: f64, mix: Quaternion) -> QField {
    let amp = (2.0 * PI * width * width).powf(-0.25);
    QField::from_fn(grid, |x| {
        let env = amp * (-(x - center).powi(2) / (4.0 * width * width)).exp();
        let phase = Quaternion::new((k0 * x).cos(), (k0 * x).sin(), 0.0, 0.0);
        phase * mix * env
    })
}

/// `e^{i 2π k_index x / L} · mix / √L`, normalized on the periodic box.
pub fn plane_wave(grid: GridSpec, k_index: i64, mix: Quaternion) -> QField {
    let k = grid.wavenumber(k_index);
    let amp = grid.length().powf(-0.5);
    QField::from_fn(grid, |x| {
        Quaternion::new((k * x).cos(), (k * x).sin(), 0.0, 0.0) * mix * amp
    })
}
