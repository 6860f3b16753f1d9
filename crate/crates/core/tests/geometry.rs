use std::collections::BTreeMap;
use std::f64::consts::PI;

use krein_bem::geometry::DomainSpec;
use proptest::prelude::*;

fn domains() -> Vec<(DomainSpec, f64, f64)> {
    // (spec, perimeter, area)
    let star = BTreeMap::from([("0".to_string(), 1.0), ("3".to_string(), 0.1)]);
    vec![
        (DomainSpec::disk(1.0, 128), 2.0 * PI, PI),
        (DomainSpec::disk(0.5, 64), PI, PI / 4.0),
        (DomainSpec::square(2.0, 16), 8.0, 4.0),
        // ρ = 1 + 0.1 cos 3t: area π(1 + 0.01/2).
        (DomainSpec::Star { coeffs: star, panels: 256 }, f64::NAN, PI * 1.005),
        (
            DomainSpec::Polygon {
                vertices: vec![[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]],
                panels_per_edge: 12,
                grading: 2.0,
            },
            3.0 + 5f64.sqrt(),
            1.0,
        ),
    ]
}

#[test]
fn mesh_invariants() {
    for (spec, perimeter, area) in domains() {
        let mesh = spec.build_mesh().unwrap();
        let total: f64 = mesh.weights.iter().sum();
        if perimeter.is_finite() {
            assert!((total - perimeter).abs() <= 1e-3 * perimeter, "{spec:?}: {total}");
        }
        assert!(mesh.weights.iter().all(|&w| w > 0.0));
        let mut flux = [0.0; 2];
        let mut two_area = 0.0;
        for ((x, nu), w) in mesh.nodes.iter().zip(&mesh.normals).zip(&mesh.weights) {
            assert!((nu[0].hypot(nu[1]) - 1.0).abs() <= 1e-14);
            flux[0] += w * nu[0];
            flux[1] += w * nu[1];
            two_area += w * (x[0] * nu[0] + x[1] * nu[1]);
        }
        assert!(flux[0].hypot(flux[1]) <= 1e-10 * total, "{spec:?}: {flux:?}");
        assert!((two_area / 2.0 - area).abs() <= 1e-3 * area, "{spec:?}: {two_area}");
    }
}

#[test]
fn grid_invariants() {
    for (spec, _, area) in domains() {
        for margin in [0.0, 0.05] {
            let grid = spec.interior_grid(0.02, margin).unwrap();
            for &p in &grid.points {
                assert!(spec.contains(p) && spec.distance_to_boundary(p) >= margin);
            }
            if margin == 0.0 {
                let total: f64 = grid.cell_weights.iter().sum();
                assert!((total - area).abs() <= 1e-2 * area, "{spec:?}: {total}");
            }
        }
    }
}

#[test]
fn json_specs() {
    let spec = DomainSpec::from_json(r#"{"kind":"disk","radius":1.0,"panels":64}"#).unwrap();
    assert_eq!(spec, DomainSpec::disk(1.0, 64));
    let spec = DomainSpec::from_json(r#"{"kind":"star","coeffs":{"0":1.0,"-2":0.1},"panels":32}"#).unwrap();
    assert!(spec.build_mesh().is_ok());
    for bad in [
        r#"{"kind":"disk","radius":-1.0,"panels":64}"#,
        r#"{"kind":"disk","radius":1.0,"panels":0}"#,
        r#"{"kind":"star","coeffs":{"0":0.5,"1":0.6},"panels":32}"#,
        r#"{"kind":"polygon","vertices":[[0,0],[1,1],[1,0],[0,1]],"panels_per_edge":4}"#,
        r#"{"kind":"polygon","vertices":[[0,0],[1,0]],"panels_per_edge":4}"#,
        r#"{"kind":"disk","radius":1.0,"panels":64,"extra":1}"#,
    ] {
        assert!(DomainSpec::from_json(bad).is_err(), "{bad}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn star_meshes_are_outward(a in 0.0f64..0.3, b in -0.2f64..0.2, n in 16usize..96) {
        let coeffs = BTreeMap::from([("0".to_string(), 1.0), ("2".to_string(), a), ("-3".to_string(), b)]);
        let spec = DomainSpec::Star { coeffs, panels: n };
        let mesh = spec.build_mesh().unwrap();
        for (x, nu) in mesh.nodes.iter().zip(&mesh.normals) {
            // Outward: stepping along ν leaves the domain.
            prop_assert!(!spec.contains([x[0] + 1e-3 * nu[0], x[1] + 1e-3 * nu[1]]));
            prop_assert!(spec.contains([x[0] - 1e-3 * nu[0], x[1] - 1e-3 * nu[1]]));
        }
    }
}
