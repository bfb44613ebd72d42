//! Cross-module integration: the full library pipelines behind the two LMI
//! case studies, exercised through public APIs only.

use ncfree::domains::{disk_pencil, NCDomain};
use ncfree::elliptic::build_ellipse;
use ncfree::freecalc::{ampliation_check, properness_probe};
use ncfree::freeexpr::{
    identity_map, mobius, parse, series_from_samples, shift_matrix, FreeExpr, FreeMapHandle,
};
use ncfree::linalg::{CMatrix, MatrixTuple};
use ncfree::rng::SplitMix64;
use ncfree::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The nonexistence witness through the generic properness probe: turn the
/// sampled series of b into a free map, aim it along the nilpotent ray and
/// watch the codomain gap refuse to close.
#[test]
fn ellipse_series_map_fails_properness_along_nilpotent_ray() {
    let model = build_ellipse().unwrap();
    let coeffs = series_from_samples(|z| model.b1(z), 0.5, 6).unwrap();
    let b_map = FreeMapHandle::new(
        1,
        vec![FreeExpr::Series {
            coeffs,
            arg: Box::new(FreeExpr::Var(1)),
        }],
    )
    .unwrap();
    let dom = model.domain();
    let ray = MatrixTuple::new(vec![shift_matrix(4)]).unwrap();

    let probe = properness_probe(&b_map, &dom, &dom, &[ray], 20).unwrap();
    let ray_report = &probe.rays[0];
    assert!(ray_report.error.is_none());
    assert!(
        (ray_report.r_star - 1.00033).abs() <= 2e-4,
        "r* = {}",
        ray_report.r_star
    );
    // Domain gap closes, codomain gap stalls near 0.0115: the
    // boundary-to-boundary property fails.
    let last = ray_report.points.last().unwrap();
    assert!(last.domain_gap.abs() < 1e-5);
    assert!(
        (ray_report.terminal_codomain_gap - 0.0114903).abs() <= 5e-4,
        "terminal gap = {}",
        ray_report.terminal_codomain_gap
    );
}

#[test]
fn ellipse_pencil_is_positive_definite_strictly_inside() {
    // 𝓛(0.5·N) ≻ 0 both by Cholesky and by the eigenvalue oracle.
    let model = build_ellipse().unwrap();
    let x = MatrixTuple::new(vec![shift_matrix(4).scale(c(0.5, 0.0))]).unwrap();
    let defining = model.domain().defining_matrix(&x).unwrap();
    assert!(defining.cholesky_pd().unwrap());
    assert!(defining.min_hermitian_eigenvalue().unwrap() > 0.0);
}

#[test]
fn evaluate_map_componentwise_example() {
    // (x1+x2, x1·x2) at (I, I) is (2I, I).
    let f = FreeMapHandle::new(
        2,
        vec![parse("x1 + x2", 2).unwrap(), parse("x1*x2", 2).unwrap()],
    )
    .unwrap();
    let x = MatrixTuple::new(vec![CMatrix::identity(3), CMatrix::identity(3)]).unwrap();
    let y = f.evaluate_map(&x).unwrap();
    assert_eq!(y.arity(), 2);
    assert!((&y[0] - &CMatrix::identity(3).scale(c(2.0, 0.0))).frobenius_norm() < 1e-14);
    assert!((&y[1] - &CMatrix::identity(3)).frobenius_norm() < 1e-14);
}

#[test]
fn ampliation_of_identity_map_is_all_ones() {
    for g in [1usize, 2] {
        let f = identity_map(g);
        let report = ampliation_check(&f, 3, 1e-8).unwrap();
        assert!(report.pass);
        for &(re, im) in &report.level_n_spectrum {
            assert!((c(re, im) - c(1.0, 0.0)).norm() < 1e-8);
        }
    }
}

#[test]
fn mobius_images_of_members_stay_members() {
    let f = mobius(0.3);
    let dom = NCDomain::pencil(disk_pencil());
    let mut rng = SplitMix64::new(31);
    for i in 0..25 {
        let n = 1 + (i % 3);
        let x = dom.sample_member(n, &mut rng).unwrap();
        let image = f.evaluate_map(&x).unwrap();
        assert!(dom.is_member(&image).unwrap());
    }
}

#[test]
fn domain_files_round_trip_through_serialization() {
    // The ellipse pencil written as domain JSON and read back keeps its
    // boundary behavior bit-for-bit.
    let model = build_ellipse().unwrap();
    let dom = model.domain();
    let text = ncfree::report::to_json_string(&dom.to_json());
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    let back = NCDomain::from_json(&parsed).unwrap();
    let probe_point = MatrixTuple::new(vec![shift_matrix(4).scale(c(1.0003, 0.0))]).unwrap();
    assert_eq!(
        dom.boundary_distance(&probe_point).unwrap(),
        back.boundary_distance(&probe_point).unwrap()
    );
}
