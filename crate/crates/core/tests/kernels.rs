mod support;

use std::f64::consts::PI;

use krein_bem::kernels::{
    bessel_01, e3_closed_form, fundamental_gradient, fundamental_hessian, fundamental_solution,
    sqrt_upper, SpectralParameter,
};
use krein_bem::C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::{bessel_series_oracle, difference_ratios, envelope_line, kernel_envelopes, z};

#[test]
fn wronskian_and_series_oracle() {
    for x in [0.5, 1.0, 5.0, 20.0] {
        let p = bessel_01(C64::new(x, 0.0)).unwrap();
        // J0 Y0' - J0' Y0 with J0' = -J1, Y0' = -Y1.
        let w = -p.j0 * p.y1 + p.j1 * p.y0;
        assert!((w - 2.0 / (PI * x)).norm() <= 1e-9, "x={x}");

        let (j0, j1, y0, y1) = bessel_series_oracle(x);
        for (got, want) in [(p.j0, j0), (p.j1, j1), (p.y0, y0), (p.y1, y1)] {
            assert!((got - want).norm() <= 1e-8, "x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn e3_hankel_path_matches_closed_form() {
    let zs = [C64::new(2.0, 1.0), C64::new(4.0, 0.0), C64::new(-3.0, 0.5), C64::new(0.5, 5.0)];
    let mut count = 0;
    for zv in zs {
        let zz = SpectralParameter::new(zv);
        for i in 0..25 {
            let r = 0.05 + 0.2 * i as f64;
            let x = [0.48 * r, -0.6 * r, 0.64 * r];
            let a = fundamental_solution(3, &zz, &x).unwrap();
            let b = e3_closed_form(&zz, &x).unwrap();
            assert!((a - b).norm() <= 1e-12 * b.norm().max(1e-300), "z={zv} r={r}");
            count += 1;
        }
    }
    assert_eq!(count, 100);
}

#[test]
fn gradient_recursion_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let zz = SpectralParameter::new(C64::new(rng.gen_range(-5.0..10.0), rng.gen_range(0.0..5.0)));
        for n in [2usize, 3] {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let g = fundamental_gradient(n, &zz, &x).unwrap();
            let e = fundamental_solution(n + 2, &zz, &x).unwrap();
            for j in 0..n {
                let res = g[j] + 2.0 * PI * x[j] * e;
                assert!(res.norm() <= 1e-10 * (1.0 + g[j].norm()), "n={n} z={} x={x:?}", zz.z);
            }
        }
    }
}

#[test]
fn hessian_trace_is_minus_z_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let zz = SpectralParameter::new(C64::new(rng.gen_range(-5.0..10.0), rng.gen_range(0.0..5.0)));
        for n in [2usize, 3] {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let h = fundamental_hessian(n, &zz, &x).unwrap();
            let e = fundamental_solution(n, &zz, &x).unwrap();
            let tr: C64 = (0..n).map(|j| h[j][j]).sum();
            assert!((tr + zz.z * e).norm() <= 1e-8 * (zz.z * e).norm());
            assert_eq!(h[0][1], h[1][0]);
        }
    }
}

#[test]
fn exponential_decay_off_the_positive_axis() {
    let zz = z(-1.0, 0.0);
    let decay = zz.sqrt_z.im / 2.0;
    let value = |r: f64| fundamental_solution(2, &zz, &[r, 0.0]).unwrap().norm();
    let c = value(5.0) * (decay * 5.0).exp();
    for i in 0..=90 {
        let r = 5.0 + 0.5 * i as f64;
        assert!(value(r) <= c * (-decay * r).exp(), "r={r}");
    }
}

#[test]
fn difference_envelopes_hold() {
    for line in kernel_envelopes(&z(2.0, 1.0)) {
        assert!(line.holds(), "{line:?}");
    }
    // A too-tight envelope is detected: the n = 2 Hessian difference is not bounded.
    let ratios = difference_ratios(2, &z(2.0, 1.0), |_| 1.0);
    assert!(!envelope_line("n=2 hessian, bounded".into(), &ratios, 2).holds());
}

proptest! {
    #[test]
    fn sqrt_upper_branch(re in -50.0f64..50.0, im in -50.0f64..50.0) {
        let zv = C64::new(re, im);
        let w = sqrt_upper(zv);
        prop_assert!(w.im >= 0.0);
        prop_assert!((w * w - zv).norm() <= 1e-14 * zv.norm().max(1e-300));
    }

    #[test]
    fn kernels_are_even_with_odd_gradient(
        re in -5.0f64..10.0, im in 0.0f64..5.0,
        x0 in -2.0f64..2.0, x1 in -2.0f64..2.0, x2 in -2.0f64..2.0,
    ) {
        prop_assume!(x0.abs() + x1.abs() + x2.abs() > 1e-3);
        let zz = SpectralParameter::new(C64::new(re, im));
        for x in [vec![x0, x1], vec![x0, x1, x2]] {
            let n = x.len();
            let m: Vec<f64> = x.iter().map(|v| -v).collect();
            prop_assert_eq!(fundamental_solution(n, &zz, &x).unwrap(), fundamental_solution(n, &zz, &m).unwrap());
            let g = fundamental_gradient(n, &zz, &x).unwrap();
            let gm = fundamental_gradient(n, &zz, &m).unwrap();
            for j in 0..n {
                prop_assert!((g[j] + gm[j]).norm() <= 1e-14 * g[j].norm().max(1e-300));
            }
        }
    }
}
