mod common;

use proptest::prelude::*;
use qqm_core::{gradient, inner_product, laplacian, GridSpec, QField, QqmError, Quaternion};

fn smooth(g: GridSpec) -> QField {
    let k = 2.0 * std::f64::consts::PI / g.length();
    QField::from_fn(g, |x| {
        Quaternion::new(
            (k * x).sin(),
            (2.0 * k * x).cos(),
            0.5 * (3.0 * k * x).sin(),
            (k * x).cos().powi(2),
        )
    })
}

fn smooth_gradient(g: GridSpec) -> QField {
    let k = 2.0 * std::f64::consts::PI / g.length();
    QField::from_fn(g, |x| {
        Quaternion::new(
            k * (k * x).cos(),
            -2.0 * k * (2.0 * k * x).sin(),
            1.5 * k * (3.0 * k * x).cos(),
            -k * (2.0 * k * x).sin(),
        )
    })
}

fn smooth_laplacian(g: GridSpec) -> QField {
    let k = 2.0 * std::f64::consts::PI / g.length();
    QField::from_fn(g, |x| {
        Quaternion::new(
            -k * k * (k * x).sin(),
            -4.0 * k * k * (2.0 * k * x).cos(),
            -4.5 * k * k * (3.0 * k * x).sin(),
            -2.0 * k * k * (2.0 * k * x).cos(),
        )
    })
}

fn slope(ns: &[usize], errs: &[f64], length: f64) -> f64 {
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(errs)
        .map(|(&n, &e)| ((length / n as f64).ln(), e.ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn stencils_are_second_order() {
    let ns = [32, 64, 128, 256];
    let mut grad_err = Vec::new();
    let mut lap_err = Vec::new();
    for &n in &ns {
        let g = GridSpec::new(n, 6.0).unwrap();
        let f = smooth(g);
        grad_err.push(gradient(&f).l2_distance(&smooth_gradient(g)).unwrap());
        lap_err.push(laplacian(&f).l2_distance(&smooth_laplacian(g)).unwrap());
    }
    let sg = slope(&ns, &grad_err, 6.0);
    let sl = slope(&ns, &lap_err, 6.0);
    assert!((sg - 2.0).abs() <= 0.1, "gradient slope {sg}");
    assert!((sl - 2.0).abs() <= 0.1, "laplacian slope {sl}");
}

#[test]
fn constant_field_has_zero_derivatives() {
    let g = GridSpec::new(16, 3.0).unwrap();
    let f = QField::constant(g, Quaternion::new(1.0, -2.0, 3.0, 0.5));
    assert_eq!(gradient(&f).max_abs_component(), 0.0);
    assert_eq!(laplacian(&f).max_abs_component(), 0.0);
}

#[test]
fn grid_validation() {
    assert!(matches!(GridSpec::new(7, 1.0), Err(QqmError::InvalidGrid(_))));
    assert!(GridSpec::new(8, 0.0).is_err());
    assert!(GridSpec::new(8, f64::NAN).is_err());
    let g = GridSpec::new(8, 4.0).unwrap();
    assert_eq!(g.x(0), -2.0);
    assert_eq!(g.dx(), 0.5);
    assert!(QField::new(g, vec![Quaternion::ZERO; 7]).is_err());
    let mut bad = vec![Quaternion::ZERO; 8];
    bad[3].x2 = f64::INFINITY;
    assert!(matches!(QField::new(g, bad), Err(QqmError::NonFinite { index: 3 })));
}

fn field_strategy(n: usize) -> impl Strategy<Value = Vec<[f64; 4]>> {
    prop::collection::vec(prop::array::uniform4(-3.0f64..3.0), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn stencils_are_linear(a in field_strategy(16), b in field_strategy(16), s in -3.0f64..3.0) {
        let g = GridSpec::new(16, 5.0).unwrap();
        let fa = QField::new(g, a.into_iter().map(Quaternion::from_array).collect()).unwrap();
        let fb = QField::new(g, b.into_iter().map(Quaternion::from_array).collect()).unwrap();
        let combo = fa.add_scaled(&fb, s).unwrap();
        for op in [gradient, laplacian] {
            let lhs = op(&combo);
            let rhs = op(&fa).add_scaled(&op(&fb), s).unwrap();
            prop_assert!(lhs.l2_distance(&rhs).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn inner_product_is_conjugate_symmetric(a in field_strategy(12), b in field_strategy(12)) {
        let g = GridSpec::new(12, 2.0).unwrap();
        let fa = QField::new(g, a.into_iter().map(Quaternion::from_array).collect()).unwrap();
        let fb = QField::new(g, b.into_iter().map(Quaternion::from_array).collect()).unwrap();
        let ab = inner_product(&fa, &fb).unwrap();
        let ba = inner_product(&fb, &fa).unwrap();
        prop_assert!(ab.approx_eq(ba.conj(), 1e-12));
        let aa = inner_product(&fa, &fa).unwrap();
        prop_assert!(aa.imag_abs_max() <= 1e-12);
        prop_assert!((aa.x0 - fa.norm_sq()).abs() <= 1e-12 * (1.0 + aa.x0));
    }

    #[test]
    fn stencils_commute_with_shifts(a in field_strategy(10), k in -12isize..12) {
        let g = GridSpec::new(10, 1.0).unwrap();
        let f = QField::new(g, a.into_iter().map(Quaternion::from_array).collect()).unwrap();
        prop_assert_eq!(gradient(&f.roll(k)), gradient(&f).roll(k));
        prop_assert_eq!(laplacian(&f.roll(k)), laplacian(&f).roll(k));
    }

    #[test]
    fn gradient_is_antisymmetric(a in field_strategy(14), b in field_strategy(14)) {
        // ⟨f, ∂g⟩ = -⟨∂f, g⟩ on the periodic grid
        let g = GridSpec::new(14, 3.0).unwrap();
        let fa = QField::new(g, a.into_iter().map(Quaternion::from_array).collect()).unwrap();
        let fb = QField::new(g, b.into_iter().map(Quaternion::from_array).collect()).unwrap();
        let lhs = inner_product(&fa, &gradient(&fb)).unwrap();
        let rhs = inner_product(&gradient(&fa), &fb).unwrap();
        prop_assert!(lhs.approx_eq(-rhs, 1e-11));
    }
}

#[test]
fn mismatched_grids_are_rejected() {
    let a = QField::zeros(GridSpec::new(16, 1.0).unwrap());
    let b = QField::zeros(GridSpec::new(16, 2.0).unwrap());
    assert!(matches!(inner_product(&a, &b), Err(QqmError::GridMismatch { .. })));
    assert!(a.add(&b).is_err());
}
