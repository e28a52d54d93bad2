use slitmap::circular_aut::{enumerate_automorphisms, DEFAULT_TOL};
use slitmap::families::{
    biholomorphism_jump, counterexample_domain, counterexample_tau, flat_perturbation, general_counterexample_domain,
    smoothness_report, sweep_moduli, tilde_counterexample_domain, DomainFamily,
};
use slitmap::mobius::image_of_circle;
use slitmap::{hausdorff_distance, CircularDomain, Complex64};

const MU: f64 = 3.0 / 16.0;

#[test]
fn negative_branch_is_the_tau_image() {
    let tau = counterexample_tau();
    let d = counterexample_domain(-0.3).unwrap();
    let dt = tilde_counterexample_domain(-0.3).unwrap();
    for (src, img) in d.ordered().iter().zip(dt.circles()) {
        let expected = image_of_circle(&tau, src).circle().unwrap();
        assert!((expected.center - img.center).norm() < 1e-12);
        assert!((expected.radius - img.radius).abs() < 1e-12);
    }
}

#[test]
fn zero_branches_agree() {
    let a = counterexample_domain(0.0).unwrap().boundary_samples(128);
    let b = tilde_counterexample_domain(-0.0).unwrap().boundary_samples(128);
    let c = tilde_counterexample_domain(-0.2).unwrap().boundary_samples(128);
    assert!(hausdorff_distance(&a, &b).unwrap() < 1e-12);
    assert!(hausdorff_distance(&a, &c).unwrap() < 1e-3);
}

#[test]
fn family_is_hausdorff_continuous() {
    let samples = |l: f64| counterexample_domain(l).unwrap().boundary_samples(512);
    let pairs = [(0.5, 0.6), (0.8, 1.0), (-0.7, -0.75)];
    for (l1, l2) in pairs {
        let h = hausdorff_distance(&samples(l1), &samples(l2)).unwrap();
        let bound = (flat_perturbation(l1) - flat_perturbation(l2)).abs();
        assert!(h <= bound + 1e-4, "{l1} {l2}: {h} > {bound}");
    }
}

#[test]
fn general_family_symmetry_and_rigidity() {
    let rs = [0.25, 0.3, MU / 0.3, MU / 0.25];
    let symmetric = general_counterexample_domain(MU, &rs, 0.0).unwrap();
    assert_eq!(symmetric.connectivity(), 4);
    let g = enumerate_automorphisms(&symmetric, DEFAULT_TOL).unwrap();
    assert!(g.contains(&counterexample_tau()));
    let perturbed = general_counterexample_domain(MU, &rs, 0.01).unwrap();
    assert_eq!(enumerate_automorphisms(&perturbed, DEFAULT_TOL).unwrap().order(), 1);
}

#[test]
fn constant_family_has_flat_moduli() {
    let f = DomainFamily::constant(CircularDomain::annulus(0.4).unwrap(), (0.0, 1.0)).unwrap();
    let s = sweep_moduli(&f, &[0.0, 0.25, 0.5, 0.75, 1.0], 64).unwrap();
    assert!(s.records.iter().all(|r| (r.moduli.as_ref().unwrap().r2 - 0.4).abs() < 1e-12));
    let report = smoothness_report(&s, 1).unwrap();
    assert!(report.curves.iter().all(|c| c.max_abs < 1e-9 && c.jumps.is_empty()));
}

#[test]
fn linear_annulus_family_tracks_rho() {
    let f = DomainFamily::annulus_linear(0.2, 0.1, (-1.0, 1.0)).unwrap();
    let grid = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let s = sweep_moduli(&f, &grid, 128).unwrap();
    for r in &s.records {
        assert!((r.moduli.as_ref().unwrap().r2 - (0.2 + 0.1 * r.lambda)).abs() < 1e-6);
    }
}

#[test]
fn counterexample_moduli_are_even_and_continuous() {
    let f = DomainFamily::counterexample();
    let grid = [0.2, 0.4, 0.6, 0.8, 1.0];
    let pos = sweep_moduli(&f, &grid, 128).unwrap();
    let neg = sweep_moduli(&f, &grid.map(|l| -l).iter().rev().copied().collect::<Vec<_>>(), 128).unwrap();
    for (p, n) in pos.records.iter().zip(neg.records.iter().rev()) {
        let (a, b) = (p.moduli.as_ref().unwrap().record(), n.moduli.as_ref().unwrap().record());
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-8));
    }
    for (name, values) in pos.curves() {
        for w in values.windows(2) {
            let step = (w[1].unwrap() - w[0].unwrap()).abs();
            assert!(step < 0.5, "{name}: step {step}");
        }
    }
}

#[test]
fn jump_probe_inside_a_hole_is_rejected() {
    assert!(biholomorphism_jump(&[0.2], &[-0.2], Complex64::new(0.5, 0.0), 128).is_err());
}
