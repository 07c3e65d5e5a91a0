#![allow(dead_code)]

use num_complex::Complex64;
use qqm_core::states::gaussian_packet;
use qqm_core::{GridSpec, PotentialSpec, QField, Quaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_quaternion(rng: &mut ChaCha8Rng) -> Quaternion {
    let q = Quaternion::new(
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.0..1.0),
    );
    q.scale(1.0 / q.norm())
}

/// Superposition of two smooth packets with independent quaternion mixes.
pub fn random_state(rng: &mut ChaCha8Rng, grid: GridSpec) -> QField {
    let l = grid.length();
    let packet = |rng: &mut ChaCha8Rng| {
        gaussian_packet(
            grid,
            rng.gen_range(-l / 6.0..l / 6.0),
            rng.gen_range(0.6..1.4),
            rng.gen_range(-2.0..2.0),
            unit_quaternion(rng),
        )
    };
    let a = packet(rng);
    let b = packet(rng);
    a.add(&b.scale(rng.gen_range(0.2..0.8))).unwrap()
}

fn smooth_real(rng: &mut ChaCha8Rng, grid: GridSpec, amp: f64) -> Vec<f64> {
    let c = rng.gen_range(-2.0..2.0);
    let h = rng.gen_range(-amp..amp);
    let w = rng.gen_range(0.5..2.0);
    let q = rng.gen_range(0.0..0.5);
    grid.points()
        .map(|x| q * x * x + h * (-(x - c).powi(2) / (2.0 * w * w)).exp())
        .collect()
}

fn smooth_complex(rng: &mut ChaCha8Rng, grid: GridSpec, amp: f64) -> Vec<Complex64> {
    let re = smooth_real(rng, grid, amp);
    let im = smooth_real(rng, grid, amp);
    re.into_iter()
        .zip(im)
        .map(|(a, b)| Complex64::new(a, 0.2 * b))
        .collect()
}

fn zeros(grid: GridSpec) -> Vec<Complex64> {
    vec![Complex64::new(0.0, 0.0); grid.n()]
}

/// Real `V0`, `V1 = 0`, `Q = 0`.
pub fn random_real_potential(rng: &mut ChaCha8Rng, grid: GridSpec) -> PotentialSpec {
    let v0 = smooth_real(rng, grid, 2.0)
        .into_iter()
        .map(|v| Complex64::new(v, 0.0))
        .collect();
    PotentialSpec::new(grid, vec![0.0; grid.n()], zeros(grid), v0, zeros(grid)).unwrap()
}

/// Complex `V0` and `V1`, `Q = 0`.
pub fn random_complex_potential(rng: &mut ChaCha8Rng, grid: GridSpec) -> PotentialSpec {
    let v0 = smooth_complex(rng, grid, 2.0);
    let v1 = smooth_complex(rng, grid, 1.0);
    PotentialSpec::new(grid, vec![0.0; grid.n()], zeros(grid), v0, v1).unwrap()
}

/// Smooth bounded vector potential with both `α` and `β` parts.
pub fn with_random_q(rng: &mut ChaCha8Rng, pot: PotentialSpec) -> PotentialSpec {
    let (a, b, c) = (
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-0.5..0.5),
        rng.gen_range(-0.5..0.5),
    );
    let l = pot.grid().length();
    let k = 2.0 * std::f64::consts::PI / l;
    pot.with_alpha(|x| a * (k * x).sin())
        .with_beta(|x| Complex64::new(b * (k * x).cos(), c * (2.0 * k * x).sin()))
}
