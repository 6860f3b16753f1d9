mod support;

use std::f64::consts::PI;

use krein_bem::geometry::DomainSpec;
use krein_bem::kernels::SpectralParameter;
use krein_bem::volume::{newton_boundary_traces, newton_potential, SourceField};
use krein_bem::{Error, C64};
use proptest::prelude::*;
use support::z;

#[test]
fn newton_potential_solves_the_pde() {
    let d = DomainSpec::disk(1.0, 64);
    let grid = d.interior_grid(0.01, 0.0).unwrap();
    let f = SourceField::gaussian([0.0, 0.0], 0.1, 1.0);
    let zz = z(2.0, 1.0);
    let delta = 0.01;
    let checkpoints = [[0.0, 0.0], [0.05, 0.0], [0.1, 0.1], [0.0, -0.15], [0.2, 0.05], [0.004, 0.003]];
    let mut targets = Vec::new();
    for c in checkpoints {
        targets.push(c);
        targets.push([c[0] + delta, c[1]]);
        targets.push([c[0] - delta, c[1]]);
        targets.push([c[0], c[1] + delta]);
        targets.push([c[0], c[1] - delta]);
    }
    let w = newton_potential(&grid, &f, &zz, &targets).unwrap();
    for (k, c) in checkpoints.iter().enumerate() {
        let v = &w[5 * k..5 * k + 5];
        let lap = (v[1] + v[2] + v[3] + v[4] - 4.0 * v[0]) / (delta * delta);
        let res = (-lap - zz.z * v[0] - f.eval(*c)).norm();
        assert!(res <= 2e-2, "{c:?}: {res}");
    }
}

#[test]
fn near_point_mass_reproduces_the_kernel() {
    // Only the support has to be covered by the lattice.
    let grid = DomainSpec::disk(0.15, 64).interior_grid(0.0025, 0.0).unwrap();
    let f = SourceField::unit_mass([0.0, 0.0], 0.02);
    let targets: Vec<[f64; 2]> = (0..7).map(|i| [0.3 + 0.05 * i as f64, 0.0]).collect();
    let w = newton_potential(&grid, &f, &SpectralParameter::real(0.0), &targets).unwrap();
    for (t, v) in targets.iter().zip(&w) {
        let want = -t[0].ln() / (2.0 * PI);
        assert!((v - want).norm() <= 1e-2 * want.abs(), "{t:?}: {v} vs {want}");
    }
}

#[test]
fn radial_source_has_constant_traces() {
    let d = DomainSpec::disk(1.0, 128);
    let mesh = d.build_mesh().unwrap();
    let grid = d.interior_grid(0.0125, 0.0).unwrap();
    let f = SourceField::gaussian([0.0, 0.0], 0.1, 1.0);
    let (dir, neu) = newton_boundary_traces(&grid, &f, &SpectralParameter::real(0.0), &mesh).unwrap();
    let flux = -f.mass() / (2.0 * PI);
    for v in &neu {
        assert!((v - flux).norm() <= 1e-3 * flux.abs(), "{v} vs {flux}");
    }
    let spread = dir.iter().map(|v| (v - dir[0]).norm()).fold(0.0, f64::max);
    assert!(spread <= 1e-3 * dir[0].norm().max(1e-3));
}

#[test]
fn zero_source_and_preconditions() {
    let d = DomainSpec::disk(1.0, 64);
    let mesh = d.build_mesh().unwrap();
    let grid = d.interior_grid(0.02, 0.0).unwrap();
    let zero = SourceField::gaussian([0.0, 0.0], 0.2, 0.0);
    let w = newton_potential(&grid, &zero, &z(2.0, 1.0), &[[0.1, 0.1]]).unwrap();
    assert_eq!(w[0], C64::new(0.0, 0.0));
    let (a, b) = newton_boundary_traces(&grid, &zero, &z(2.0, 1.0), &mesh).unwrap();
    assert!(a.iter().chain(&b).all(|v| v.norm() == 0.0));

    let narrow = SourceField::gaussian([0.0, 0.0], 0.1, 1.0);
    assert!(matches!(
        newton_potential(&grid, &narrow, &z(2.0, 1.0), &[[0.1, 0.1]]),
        Err(Error::GridTooCoarse { .. })
    ));
    let edge = SourceField::gaussian([0.7, 0.0], 0.2, 1.0);
    assert!(matches!(
        newton_boundary_traces(&grid, &edge, &z(2.0, 1.0), &mesh),
        Err(Error::SupportTooWide { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn linear_and_conjugation_symmetric(
        a in -3.0f64..3.0, re in -4.0f64..8.0, im in 0.1f64..3.0,
        tx in -0.5f64..0.5, ty in -0.5f64..0.5,
    ) {
        let grid = DomainSpec::disk(1.0, 32).interior_grid(0.04, 0.0).unwrap();
        let zz = z(re, im);
        let f1 = SourceField::gaussian([0.1, 0.0], 0.32, 1.0);
        let fa = SourceField::gaussian([0.1, 0.0], 0.32, a);
        let t = [[tx, ty]];
        let w1 = newton_potential(&grid, &f1, &zz, &t).unwrap()[0];
        let wa = newton_potential(&grid, &fa, &zz, &t).unwrap()[0];
        prop_assert!((w1 * a - wa).norm() <= 1e-13 * (1.0 + wa.norm()));
        let wc = newton_potential(&grid, &f1, &zz.conj(), &t).unwrap()[0];
        prop_assert!((wc - w1.conj()).norm() <= 1e-13 * (1.0 + w1.norm()));
    }
}
