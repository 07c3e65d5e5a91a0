use num_complex::Complex64;
use qqm_oracle::{evolve_complex, CField, OracleConfig, OracleGrid};
use std::f64::consts::PI;

fn config(dt: f64, steps: usize, sample_every: usize) -> OracleConfig {
    OracleConfig {
        hbar: 1.0,
        mass: 1.0,
        dt,
        steps,
        sample_every,
    }
}

fn gaussian(grid: OracleGrid, center: f64, width: f64, k0: f64) -> CField {
    let norm = (2.0 * PI * width * width).powf(-0.25);
    CField::from_fn(grid, |x| {
        let d = x - center;
        Complex64::from_polar(norm * (-d * d / (4.0 * width * width)).exp(), k0 * x)
    })
}

#[test]
fn plane_wave_rotates_by_its_discrete_energy() {
    let grid = OracleGrid::new(64, 10.0).unwrap();
    let k = 2.0 * PI * 5.0 / grid.length();
    let psi = CField::from_fn(grid, |x| Complex64::from_polar(1.0, k * x));
    let e = (1.0 - (k * grid.dx()).cos()) / (grid.dx() * grid.dx());
    let v0 = vec![Complex64::new(0.0, 0.0); 64];
    let traj = evolve_complex(&psi, &v0, &[0.0; 64], &config(1e-3, 500, 500)).unwrap();
    let t = traj.times[1];
    let phase = Complex64::from_polar(1.0, -e * t);
    let expect = CField::new(grid, psi.values().iter().map(|z| z * phase).collect()).unwrap();
    assert!(traj.states[1].l2_distance(&expect).unwrap() < 1e-10);
}

#[test]
fn harmonic_packet_keeps_its_amplitude_over_one_period() {
    let grid = OracleGrid::new(512, 20.0).unwrap();
    let x0 = 2.0;
    let psi = gaussian(grid, x0, 0.5f64.sqrt(), 0.0);
    let v0: Vec<Complex64> = (0..512).map(|m| Complex64::new(0.5 * grid.x(m).powi(2), 0.0)).collect();
    let dt = 5e-4;
    let steps = (2.0 * PI / dt).round() as usize;
    let traj = evolve_complex(&psi, &v0, &[0.0; 512], &config(dt, steps, 1)).unwrap();
    let x: Vec<f64> = traj.states.iter().map(|s| s.position_moment()).collect();
    assert!((x[0] - x0).abs() < 1e-10);
    let trough = x.iter().cloned().fold(f64::INFINITY, f64::min);
    let peak = x[steps / 2..].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!((trough + x0).abs() < 1e-4, "trough {trough}");
    assert!((peak - x0).abs() < 1e-4, "peak {peak}");
}

#[test]
fn absorber_strictly_removes_norm() {
    let grid = OracleGrid::new(256, 20.0).unwrap();
    let psi = gaussian(grid, 0.0, 1.0, 1.5);
    let v0: Vec<Complex64> = (0..256)
        .map(|m| Complex64::new(0.0, -0.5 * (-(grid.x(m) - 3.0).powi(2) / 2.0).exp()))
        .collect();
    let traj = evolve_complex(&psi, &v0, &[0.0; 256], &config(1e-3, 2000, 50)).unwrap();
    let norms: Vec<f64> = traj.states.iter().map(|s| s.norm_sq()).collect();
    assert!(norms.windows(2).all(|w| w[1] < w[0]), "{norms:?}");
    assert!(norms[norms.len() - 1] < 0.9 * norms[0]);
}

#[test]
fn real_potential_with_vector_potential_conserves_norm() {
    let grid = OracleGrid::new(256, 20.0).unwrap();
    let psi = gaussian(grid, -1.0, 0.9, 0.8);
    let v0: Vec<Complex64> = (0..256).map(|m| Complex64::new(0.3 * grid.x(m).powi(2), 0.0)).collect();
    let a: Vec<f64> = (0..256).map(|m| 0.4 * (PI * grid.x(m) / 10.0).sin()).collect();
    let traj = evolve_complex(&psi, &v0, &a, &config(1e-4, 1000, 1000)).unwrap();
    let drift = (traj.states[1].norm_sq() - psi.norm_sq()).abs();
    assert!(drift <= 1e-8, "{drift:e}");
}

#[test]
fn sampling_is_inclusive_of_both_ends() {
    let grid = OracleGrid::new(16, 4.0).unwrap();
    let psi = gaussian(grid, 0.0, 0.5, 0.0);
    let v0 = vec![Complex64::new(0.0, 0.0); 16];
    let traj = evolve_complex(&psi, &v0, &[0.0; 16], &config(0.01, 10, 5)).unwrap();
    assert_eq!(traj.times.len(), 3);
    assert!((traj.times[2] - 0.1).abs() < 1e-15);
    assert_eq!(traj.states[0].values(), psi.values());
}
