mod common;

use num_complex::Complex64;
use qqm_core::dynamics::{apply_h, apply_h_lcwe, apply_h_rcwe, evolve, hermiticity_defect};
use qqm_core::oracle_bridge::to_complex;
use qqm_core::states::{gaussian_packet, plane_wave};
use qqm_core::{gradient, laplacian, GridSpec, PotentialSpec, QField, Quaternion, SimulationConfig, Variant};

/// `D∘D f` built literally from two applications of `D f = i(∂f - Qf)`.
fn literal_dd(f: &QField, q: &QField) -> QField {
    let d = |g: &QField| {
        gradient(g)
            .sub(&g.left_mul_field(q).unwrap())
            .unwrap()
            .left_mul(Quaternion::I)
    };
    d(&d(f))
}

/// `E∘E f` built literally from two applications of `E f = ∂f - Qf`.
fn literal_ee(f: &QField, q: &QField) -> QField {
    let e = |g: &QField| gradient(g).sub(&g.left_mul_field(q).unwrap()).unwrap();
    e(&e(f))
}

#[test]
fn kinetic_operators_match_literal_composition_up_to_the_laplacian() {
    // The engine uses the compact Laplacian where the literal composition
    // would apply the central difference twice; everything else is equal.
    let mut rng = common::rng(11);
    let g = GridSpec::new(128, 16.0).unwrap();
    for _ in 0..5 {
        let pot = common::with_random_q(&mut rng, PotentialSpec::free(g));
        let f = common::random_state(&mut rng, g);
        let cfg = SimulationConfig::new(Variant::Lcwe, 1e-4, 1).with_units(0.8, 1.3);
        let c = cfg.kinetic_prefactor();
        let q = pot.q_field();
        let stencil_gap = gradient(&gradient(&f)).sub(&laplacian(&f)).unwrap();

        let h = apply_h_lcwe(&f, &pot, &cfg).unwrap();
        let expect = literal_dd(&f, &q).add(&stencil_gap).unwrap().scale(c);
        assert!(h.l2_distance(&expect).unwrap() < 1e-10);

        let h = apply_h_rcwe(&f, &pot, &cfg).unwrap();
        let expect = literal_ee(&f, &q).sub(&stencil_gap).unwrap().scale(-c);
        assert!(h.l2_distance(&expect).unwrap() < 1e-10);
    }
}

#[test]
fn free_plane_wave_eigenvalue() {
    let g = GridSpec::new(64, 10.0).unwrap();
    for k_index in [1, 5, -7] {
        let psi = plane_wave(g, k_index, Quaternion::new(0.5, -0.5, 0.5, 0.5));
        let k = g.wavenumber(k_index);
        let e = (1.0 - (k * g.dx()).cos()) / (g.dx() * g.dx());
        for v in [Variant::Lcwe, Variant::Rcwe] {
            let h = apply_h(&psi, &PotentialSpec::free(g), &SimulationConfig::new(v, 1e-4, 1)).unwrap();
            assert!(h.l2_distance(&psi.scale(e)).unwrap() < 1e-11, "{v} k={k_index}");
        }
    }
}

#[test]
fn complex_reduction_matches_oracle_hamiltonian() {
    let g = GridSpec::new(128, 16.0).unwrap();
    let pot = PotentialSpec::scalar(g, |x| Complex64::new(0.5 * x * x, -0.2 * (-x * x).exp()))
        .with_alpha(|x| 0.4 * (0.3 * x).sin());
    let cfg = SimulationConfig::new(Variant::Lcwe, 1e-4, 1).with_units(1.1, 0.9);
    let psi = gaussian_packet(g, 0.5, 1.0, 1.2, Quaternion::new(0.6, 0.8, 0.0, 0.0));
    let h = apply_h_lcwe(&psi, &pot, &cfg).unwrap();
    let oracle =
        qqm_oracle::apply_hamiltonian(&to_complex(&psi).unwrap(), &pot.v0, &pot.alpha, cfg.hbar, cfg.mass).unwrap();
    let oracle = qqm_core::oracle_bridge::from_complex(g, &oracle).unwrap();
    assert!(h.l2_distance(&oracle).unwrap() < 1e-11);
    assert_eq!(h.max_jk(), 0.0);
}

#[test]
fn real_potential_conserves_norm_for_any_vector_potential() {
    let mut rng = common::rng(21);
    let g = GridSpec::new(256, 20.0).unwrap();
    for trial in 0..4 {
        let base = common::random_real_potential(&mut rng, g);
        let pot = if trial % 2 == 0 {
            base
        } else {
            common::with_random_q(&mut rng, base)
        };
        let psi = common::random_state(&mut rng, g);
        for v in [Variant::Lcwe, Variant::Rcwe] {
            let cfg = SimulationConfig::new(v, 1e-4, 1000);
            let traj = evolve(&psi, &pot, &cfg, 1000).unwrap();
            let drift = (traj.last().norm_sq() - psi.norm_sq()).abs();
            assert!(drift <= 1e-8, "trial {trial} {v}: drift {drift:e}");
        }
    }
}

#[test]
fn rk4_is_fourth_order_in_dt() {
    let g = GridSpec::new(64, 10.0).unwrap();
    let psi = plane_wave(g, 10, Quaternion::ONE);
    let k = g.wavenumber(10);
    let e = (1.0 - (k * g.dx()).cos()) / (g.dx() * g.dx());
    let exact = psi.left_mul(Quaternion::new(e.cos(), -e.sin(), 0.0, 0.0));
    let errs: Vec<f64> = [2e-3, 1e-3, 5e-4]
        .iter()
        .map(|&dt: &f64| {
            let cfg = SimulationConfig::new(Variant::Lcwe, dt, (1.0 / dt).round() as usize);
            evolve(&psi, &PotentialSpec::free(g), &cfg, cfg.steps)
                .unwrap()
                .last()
                .l2_distance(&exact)
                .unwrap()
        })
        .collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 4.0).abs() < 0.3, "{errs:?}");
    }
}

#[test]
fn variants_rotate_phase_on_opposite_sides() {
    // a right-j plane wave is an LCWE and RCWE eigenfield; only the side of
    // the phase factor differs
    let g = GridSpec::new(64, 10.0).unwrap();
    let psi = plane_wave(g, 3, Quaternion::J);
    let k = g.wavenumber(3);
    let e = (1.0 - (k * g.dx()).cos()) / (g.dx() * g.dx());
    let t = 0.05;
    let phase = Quaternion::new((e * t).cos(), -(e * t).sin(), 0.0, 0.0);
    let pot = PotentialSpec::free(g);
    let l = evolve(&psi, &pot, &SimulationConfig::new(Variant::Lcwe, 1e-4, 500), 500).unwrap();
    let r = evolve(&psi, &pot, &SimulationConfig::new(Variant::Rcwe, 1e-4, 500), 500).unwrap();
    assert!(l.last().l2_distance(&psi.left_mul(phase)).unwrap() < 1e-10);
    assert!(r.last().l2_distance(&psi.right_mul(phase)).unwrap() < 1e-10);
    assert!(l.last().l2_distance(r.last()).unwrap() > 0.1);
}

#[test]
fn hermiticity_defect_of_imaginary_potential() {
    // V = iΓ: ⟨f, Hg⟩ - ⟨Hf, g⟩ = Σ f*(iΓ)g dx - Σ (iΓf)* g dx = 2Γ Σ f* i g dx
    let g = GridSpec::new(128, 16.0).unwrap();
    let gamma = 0.35;
    let pot = PotentialSpec::scalar(g, |_| Complex64::new(0.0, gamma));
    let cfg = SimulationConfig::new(Variant::Lcwe, 1e-4, 1);
    let f = gaussian_packet(g, -1.0, 1.0, 0.5, Quaternion::ONE);
    let h = gaussian_packet(g, 1.0, 1.2, -0.3, Quaternion::new(0.6, 0.0, 0.8, 0.0));
    let defect = hermiticity_defect(&pot, &cfg, &f, &h).unwrap();
    let expect = qqm_core::inner_product(&f, &h.left_mul(Quaternion::I)).unwrap() * (2.0 * gamma);
    assert!(defect.approx_eq(expect, 1e-12));

    let real = PotentialSpec::scalar(g, |x| Complex64::new(0.5 * x * x, 0.0)).with_alpha(|x| 0.2 * x.cos());
    let d = hermiticity_defect(&real, &cfg, &f, &h).unwrap();
    assert!(d.abs_max() < 1e-12);
}
