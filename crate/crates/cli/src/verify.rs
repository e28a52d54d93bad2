use crate::commands::{counterexample_probes, jump_failures, markings};
use crate::config::RunConfig;
use crate::fixtures::{Fixture, ANNULUS_FAMILY, DOMAINS};
use crate::Failure;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slitmap::circular_aut::{aut_group_t, enumerate_automorphisms, ThreeConnectedCircular, DEFAULT_TOL};
use slitmap::dirichlet::period_matrix;
use slitmap::families::{biholomorphism_jumps, smoothness_report, sweep_moduli};
use slitmap::io::{parse_input, InputSpec};
use slitmap::koebe::{canonical_map, SlitAnnulus};
use slitmap::mobius::{continuity_profile, push_forward, sphere_grid};
use slitmap::{Complex64, ExtendedPoint, MobiusMap};
use std::f64::consts::PI;
use std::sync::Arc;

struct Check {
    subject: String,
    name: &'static str,
    passed: bool,
    detail: String,
}

impl Check {
    fn new(subject: &str, name: &'static str, outcome: Result<(bool, String), Failure>) -> Self {
        let (passed, detail) = match outcome {
            Ok(r) => r,
            Err(Failure::Core(e)) => (false, e.to_string()),
            Err(Failure::Invariant(m) | Failure::Solver(m) | Failure::Io(m)) => (false, m),
        };
        Self {
            subject: subject.to_string(),
            name,
            passed,
            detail,
        }
    }
}

/// Relative gap between two sets of moduli: radii and slit widths.
pub fn moduli_gap(a: &SlitAnnulus, b: &SlitAnnulus) -> f64 {
    if a.slits.len() != b.slits.len() {
        return f64::INFINITY;
    }
    let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1e-300);
    a.slits
        .iter()
        .zip(&b.slits)
        .map(|(s, t)| rel(s.radius, t.radius).max(rel(s.width(), t.width())))
        .fold(rel(a.r2, b.r2), f64::max)
}

fn random_disk_map(rng: &mut ChaCha8Rng) -> MobiusMap {
    let p = Complex64::from_polar(0.4 * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI));
    let spin = MobiusMap::disk_automorphism(p, rng.gen_range(-PI..PI)).expect("|p| < 1");
    let k = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-PI..PI));
    let t = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    MobiusMap::affine(k, t).expect("nonzero scale").compose(&spin)
}

fn domain_checks(f: &Fixture, spec: &InputSpec, cfg: &RunConfig, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let loaded = match spec.domain(cfg.nodes) {
        Ok(l) => l,
        Err(e) => {
            out.push(Check::new(f.name, "spec", Err(e.into())));
            return out;
        }
    };
    let curves = match loaded.curves(cfg.nodes) {
        Ok(c) => Arc::new(c),
        Err(e) => {
            out.push(Check::new(f.name, "spec", Err(e.into())));
            return out;
        }
    };
    out.push(Check::new(f.name, "period-matrix", (|| {
        let p = period_matrix(&curves)?;
        let green = (0..p.full.len())
            .map(|l| p.full.iter().map(|row| row[l]).sum::<f64>().abs())
            .fold(0.0, f64::max);
        Ok((
            green <= 1e-9 && p.condition < 1e6 && p.determinant != 0.0,
            format!("green {green:.2e}, condition {:.3e}, det {:.4e}", p.condition, p.determinant),
        ))
    })()));
    let base = (|| {
        let (a1, a2) = markings(&loaded, &curves)?;
        let k = canonical_map(&curves, a1, a2)?;
        Ok::<_, Failure>((a1, a2, k))
    })();
    let (a1, a2, k) = match base {
        Ok(v) => v,
        Err(e) => {
            out.push(Check::new(f.name, "canonical-map", Err(e)));
            return out;
        }
    };
    let d = k.diagnostics();
    out.push(Check::new(
        f.name,
        "canonical-map",
        Ok((
            d.winding_min == 1 && d.winding_max == 1 && d.modulus_spread <= 1e-6 && d.period_leak <= 1e-8,
            format!(
                "spread {:.2e}, leak {:.2e}, winding [{}, {}]",
                d.modulus_spread, d.period_leak, d.winding_min, d.winding_max
            ),
        )),
    ));
    let Some(circ) = loaded.circular() else {
        return out;
    };
    out.push(Check::new(f.name, "moduli-invariance", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_disk_map(&mut rng);
        let image = push_forward(&m, circ)?;
        let moved = |z: Complex64| m.apply_finite(z).expect("marking away from the pole");
        let km = canonical_map(&Arc::new(image.to_curves(cfg.nodes)?), moved(a1), moved(a2))?;
        let gap = moduli_gap(km.moduli(), k.moduli());
        let tol = cfg.tol.unwrap_or(1e-5);
        Ok((gap <= tol, format!("relative gap {gap:.2e} (tol {tol:.0e})")))
    })()));
    if let Some(expected) = f.expected {
        out.push(Check::new(f.name, "automorphisms", (|| {
            let group = enumerate_automorphisms(circ, DEFAULT_TOL)?;
            let agrees = match ThreeConnectedCircular::recognize(circ) {
                Some(t) => aut_group_t(&t)?.same_as(&group),
                None => true,
            };
            Ok((
                group.classification() == expected && agrees,
                format!("{} (order {}), expected {expected}", group.classification(), group.order()),
            ))
        })()));
    }
    out
}

fn family_check(cfg: &RunConfig) -> Check {
    Check::new("annulus_family", "sweep", (|| {
        let family = parse_input(ANNULUS_FAMILY)?.family()?;
        let grid = [-1.0, -0.5, 0.0, 0.5, 1.0];
        let sweep = sweep_moduli(&family, &grid, cfg.nodes)?;
        let err = sweep
            .records
            .iter()
            .map(|r| match &r.moduli {
                Some(m) => (m.r2 - (0.2 + 0.1 * r.lambda)).abs(),
                None => f64::INFINITY,
            })
            .fold(0.0, f64::max);
        let report = smoothness_report(&sweep, 1)?;
        let q = report.curves[0]
            .quotients
            .iter()
            .map(|q| q.map_or(f64::INFINITY, |q| (q - 0.1).abs()))
            .fold(0.0, f64::max);
        Ok((
            err <= 1e-6 && q <= 1e-4,
            format!("max |r2 - rho| {err:.2e}, max |q - 0.1| {q:.2e}"),
        ))
    })())
}

fn continuity_check(seed: u64) -> Check {
    Check::new("mobius", "continuity", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut point = || Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let source = [point(), point(), point()].map(ExtendedPoint::new);
        let target = [point(), point(), point()];
        let dirs = [point(), point(), point()].map(|z| z / z.norm());
        let scales: Vec<f64> = (1..=6).map(|k| 10f64.powi(-k)).collect();
        let errors = continuity_profile(source, target, dirs, &scales, &sphere_grid(400))?;
        let ratios: Vec<[f64; 2]> = errors
            .windows(2)
            .map(|w| [w[0][0] / w[1][0], w[0][1] / w[1][1]])
            .collect();
        let linear = ratios
            .iter()
            .zip(&scales)
            .all(|(r, s)| r.iter().all(|r| (r - 10.0).abs() <= 100.0 * s));
        let lo = ratios.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        let last = ratios[ratios.len() - 1];
        Ok((
            linear,
            format!(
                "step ratios min {lo:.5}, finest {:.6} (map), {:.6} (inverse)",
                last[0], last[1]
            ),
        ))
    })())
}

fn jump_check(cfg: &RunConfig) -> Check {
    Check::new("counterexample", "jump", (|| {
        let reports = biholomorphism_jumps(&[0.1, 0.2], &[-0.1, -0.2], &counterexample_probes(), cfg.nodes)?;
        let failures = jump_failures(&reports, 1e-4);
        Ok((
            failures.is_empty(),
            format!(
                "jump {:.6} at {}, {:.2e} at {}",
                reports[0].jump, reports[0].probe, reports[1].jump, reports[1].probe
            ),
        ))
    })())
}

pub fn run_verify(cfg: &RunConfig) -> Result<(), Failure> {
    let mut checks = Vec::new();
    for (i, f) in DOMAINS.iter().enumerate() {
        let spec = parse_input(f.json)?;
        checks.extend(domain_checks(f, &spec, cfg, cfg.seed.wrapping_add(i as u64)));
    }
    if cfg.input.is_some() {
        let spec = cfg.spec()?;
        let user = Fixture {
            name: "input",
            json: "",
            expected: None,
        };
        checks.extend(domain_checks(&user, &spec, cfg, cfg.seed.wrapping_add(DOMAINS.len() as u64)));
    }
    checks.push(family_check(cfg));
    checks.push(continuity_check(cfg.seed));
    checks.push(jump_check(cfg));

    let width = checks.iter().map(|c| c.subject.len()).max().unwrap_or(0);
    for c in &checks {
        println!(
            "{}  {:<width$}  {:<18}  {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.subject,
            c.name,
            c.detail
        );
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} of {} checks passed", checks.len() - failed, checks.len());
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Invariant(format!("{failed} of {} checks failed", checks.len())))
    }
}
