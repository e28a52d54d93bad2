use slitmap::circular_aut::{
    aut_group_t, enumerate_automorphisms, is_rigid, Classification, ThreeConnectedCircular, DEFAULT_TOL,
};
use slitmap::mobius::{sphere_grid, uniform_action_distance};
use slitmap::{perpendicular_circle, Circle, CircularDomain, MobiusMap};

fn t(mu: f64, a: f64, r: f64) -> CircularDomain {
    CircularDomain::three_connected(mu, a, r).unwrap()
}

#[test]
fn tau_condition_failure_leaves_identity() {
    let g = aut_group_t(&ThreeConnectedCircular::new(0.2, 0.5, 0.25).unwrap()).unwrap();
    assert_eq!(g.order(), 1);
    let e = enumerate_automorphisms(&t(0.2, 0.5, 0.25), DEFAULT_TOL).unwrap();
    assert!(g.same_as(&e));
}

#[test]
fn small_perturbation_is_rigid() {
    assert!(!is_rigid(&t(3.0 / 16.0, 0.5, 0.25)).unwrap());
    assert!(is_rigid(&t(3.0 / 16.0, 0.5, 0.26)).unwrap());
    let g = enumerate_automorphisms(&t(3.0 / 16.0, 0.5, 0.26), DEFAULT_TOL).unwrap();
    assert_eq!(g.classification(), Classification::Rigid);
}

#[test]
fn asymmetric_four_connected_domain_is_rigid() {
    let mu = 3.0 / 16.0;
    let holes = vec![
        Circle::centered(0.0, 0.0, mu).unwrap(),
        perpendicular_circle(0.21, 0.29).unwrap(),
        perpendicular_circle(0.47, 0.83).unwrap(),
    ];
    let d = CircularDomain::from_outer_and_holes(Circle::centered(0.0, 0.0, 1.0).unwrap(), holes).unwrap();
    let g = enumerate_automorphisms(&d, DEFAULT_TOL).unwrap();
    assert_eq!(g.order(), 1);
}

#[test]
fn annulus_group_is_infinite() {
    assert!(enumerate_automorphisms(&CircularDomain::annulus(0.5).unwrap(), DEFAULT_TOL).is_err());
}

#[test]
fn group_is_invariant_under_mobius_conjugation() {
    let d = t(3.0 / 16.0, 0.5, 0.25);
    let m = MobiusMap::disk_automorphism(slitmap::Complex64::new(0.2, -0.1), 0.4).unwrap();
    let image = slitmap::mobius::push_forward(&m, &d).unwrap();
    let g = enumerate_automorphisms(&image, DEFAULT_TOL).unwrap();
    assert_eq!(g.order(), 2);
    let tau = MobiusMap::involution(3.0 / 16.0);
    let conjugated = m.compose(&tau).compose(&m.inverse());
    assert!(g.contains(&conjugated));
}

#[test]
fn automorphisms_converge_with_their_domains() {
    let grid = sphere_grid(200);
    let limit = MobiusMap::involution(3.0 / 16.0);
    let mut last = f64::INFINITY;
    for k in 1..=8 {
        let r = 0.25 + 0.02 * 0.5f64.powi(k);
        let a = 0.5;
        let mu = a * a - r * r;
        let g = enumerate_automorphisms(&t(mu, a, r), DEFAULT_TOL).unwrap();
        let tau_k = g.elements().iter().find(|e| !e.is_identity()).unwrap();
        let gap = uniform_action_distance(tau_k, &limit, &grid);
        assert!(gap < last);
        last = gap;
    }
    assert!(last < 0.01);
}
