mod common;

use common::random_image;
use proptest::prelude::*;
use shearlet::filters::{build_default_system, shearlet_count, ShearletSystem2D};
use shearlet::transform::{shear_adjoint, sheardec2d, shearrec2d, CoefficientStack};
use shearlet::{Complex64, ImageGrid};

/// Spatial filter from its centered spectrum by an explicit inverse DFT.
/// Entry `(r, c)` holds displacement `(r - rows/2, c - cols/2)`.
fn spatial_filter(spec: &shearlet::ComplexGrid) -> shearlet::ComplexGrid {
    let (m, n) = spec.shape();
    let tau = 2.0 * std::f64::consts::PI;
    shearlet::ComplexGrid::from_fn(m, n, |r, c| {
        let (d1, d2) = (r as f64 - (m / 2) as f64, c as f64 - (n / 2) as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        for k1 in 0..m {
            for k2 in 0..n {
                let (w1, w2) = (k1 as f64 - (m / 2) as f64, k2 as f64 - (n / 2) as f64);
                let phase = tau * (w1 * d1 / m as f64 + w2 * d2 / n as f64);
                acc += spec[(k1, k2)] * Complex64::from_polar(1.0, phase);
            }
        }
        acc / (m * n) as f64
    })
}

#[test]
fn decomposition_is_periodic_spatial_correlation() {
    let (m, n) = (16, 16);
    let sys = build_default_system(m, n, 2).unwrap();
    let f = random_image(m, n, 4);
    let c = sheardec2d(&f, &sys).unwrap();
    for (i, spec) in sys.filters().iter().enumerate() {
        let psi = spatial_filter(spec);
        for x1 in 0..m {
            for x2 in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..m {
                    for s in 0..n {
                        let (d1, d2) = (r as i64 - (m / 2) as i64, s as i64 - (n / 2) as i64);
                        let y1 = (x1 as i64 + d1).rem_euclid(m as i64) as usize;
                        let y2 = (x2 as i64 + d2).rem_euclid(n as i64) as usize;
                        acc += psi[(r, s)].conj() * f[(y1, y2)];
                    }
                }
                let got = c.slice(i)[x1 * n + x2];
                assert!((got - acc.re).abs() <= 1e-8, "slice {i} at ({x1},{x2}): {got} vs {}", acc.re);
                assert!(acc.im.abs() <= 1e-8);
            }
        }
    }
}

fn random_stack(sys: &ShearletSystem2D, seed: u64) -> CoefficientStack {
    let mut c = CoefficientStack::zeros_for(sys);
    let n = sys.rows() * sys.cols();
    for (i, slice) in c.slices_mut().enumerate() {
        slice.copy_from_slice(random_image(sys.rows(), sys.cols(), seed * 1000 + i as u64).data());
        assert_eq!(slice.len(), n);
    }
    c
}

#[test]
fn adjoint_identity_on_twenty_pairs() {
    let sys = build_default_system(32, 30, 2).unwrap();
    for k in 0..20u64 {
        let f = random_image(32, 30, k);
        let c = random_stack(&sys, k + 100);
        let lhs = sheardec2d(&f, &sys).unwrap().dot(&c);
        let rhs = f.dot(&shear_adjoint(&c, &sys).unwrap());
        let rel = (lhs - rhs).abs() / lhs.abs().max(rhs.abs());
        assert!(rel <= 1e-8, "pair {k}: {lhs} vs {rhs}");
    }
}

#[test]
fn frame_bounds_follow_weight_extremes() {
    let sys = build_default_system(64, 64, 3).unwrap();
    let w = sys.dual_frame_weights().data();
    let (lo, hi) = w.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(lo > 0.0);
    for seed in 0..5 {
        let f = random_image(64, 64, seed);
        let e = sheardec2d(&f, &sys).unwrap().norm().powi(2);
        let ef = f.norm().powi(2);
        assert!(e >= lo * ef * (1.0 - 1e-12) && e <= hi * ef * (1.0 + 1e-12));
    }
}

#[test]
fn roundtrip_across_shapes_and_scales() {
    for (m, n) in [(64, 64), (63, 65), (128, 128)] {
        for j in 1..=4 {
            let sys = build_default_system(m, n, j).unwrap();
            assert_eq!(sys.n_shearlets(), shearlet_count(j));
            let f = random_image(m, n, (m * 7 + j) as u64);
            let back = shearrec2d(&sheardec2d(&f, &sys).unwrap(), &sys).unwrap();
            let err = back.axpy(-1.0, &f).norm() / f.norm();
            assert!(err <= 1e-6, "{m}x{n} J={j}: {err:e}");
        }
    }
}

#[test]
fn lowpass_has_largest_rms_among_coarsest_filters() {
    let sys = build_default_system(128, 128, 4).unwrap();
    let low = sys.indices().iter().position(|i| i.lowpass).unwrap();
    for (i, idx) in sys.indices().iter().enumerate() {
        if idx.scale == 0 && !idx.lowpass {
            assert!(sys.rms()[low] > sys.rms()[i], "filter {i}: {:?}", idx);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reconstruction_inverts_decomposition(m in 8usize..40, n in 8usize..40, j in 1usize..3, seed in any::<u64>()) {
        prop_assume!(m.min(n) >= 1 << (j + 1));
        let sys = build_default_system(m, n, j).unwrap();
        let f = random_image(m, n, seed);
        let back = shearrec2d(&sheardec2d(&f, &sys).unwrap(), &sys).unwrap();
        prop_assert!(back.axpy(-1.0, &f).norm() <= 1e-9 * f.norm().max(1.0));
    }

    #[test]
    fn decomposition_is_linear(seed in any::<u64>(), a in -3.0f64..3.0) {
        let sys = build_default_system(16, 16, 1).unwrap();
        let (f, g) = (random_image(16, 16, seed), random_image(16, 16, seed ^ 1));
        let lhs = sheardec2d(&f.axpy(a, &g), &sys).unwrap();
        let (cf, cg) = (sheardec2d(&f, &sys).unwrap(), sheardec2d(&g, &sys).unwrap());
        for ((l, x), y) in lhs.data().iter().zip(cf.data()).zip(cg.data()) {
            prop_assert!((l - (x + a * y)).abs() <= 1e-10);
        }
    }
}

#[test]
fn sum_of_weights_is_not_a_placeholder() {
    let sys = build_default_system(32, 32, 2).unwrap();
    let direct = ImageGrid::from_fn(32, 32, |r, c| {
        sys.filters().iter().map(|f| f[(r, c)].norm_sqr()).sum::<f64>()
    });
    assert!(direct.axpy(-1.0, sys.dual_frame_weights()).norm() <= 1e-12 * direct.norm());
}
