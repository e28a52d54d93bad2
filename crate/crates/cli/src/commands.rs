use crate::config::RunConfig;
use crate::Failure;
use serde::Serialize;
use slitmap::circular_aut::{aut_group_t, enumerate_automorphisms, ThreeConnectedCircular, DEFAULT_TOL};
use slitmap::dirichlet::PeriodMatrix;
use slitmap::families::{
    biholomorphism_jumps, default_markings, smoothness_report, sweep_moduli, JumpReport,
    COUNTEREXAMPLE_MU,
};
use slitmap::io::{moduli_csv, render_svg, smoothness_text, sweep_csv, to_json, LoadedDomain};
use slitmap::koebe::{canonical_map, MapDiagnostics, SlitAnnulus};
use slitmap::{Complex64, Error, MultiplyConnectedDomain};
use std::sync::Arc;

#[derive(Serialize)]
struct MapReport<'a> {
    connectivity: usize,
    markings: [[f64; 2]; 2],
    labels: &'a [usize],
    record: Vec<f64>,
    moduli: &'a SlitAnnulus,
    diagnostics: MapDiagnostics,
    period_matrix: &'a PeriodMatrix,
}

pub fn markings(loaded: &LoadedDomain, curves: &MultiplyConnectedDomain) -> Result<(Complex64, Complex64), Failure> {
    if curves.holes().is_empty() {
        return Err(Error::Input("domain has no holes; nothing to map".into()).into());
    }
    Ok(match loaded.circular() {
        Some(c) => default_markings(c)?,
        None => (curves.outer().nodes()[0], curves.holes()[0].nodes()[0]),
    })
}

pub fn run_map(cfg: &RunConfig) -> Result<(), Failure> {
    let loaded = cfg.spec()?.domain(cfg.nodes)?;
    let curves = loaded.curves(cfg.nodes)?;
    let (a1, a2) = markings(&loaded, &curves)?;
    let curves = Arc::new(curves);
    let k = canonical_map(&curves, a1, a2)?;
    let m = k.moduli();
    let diag = k.diagnostics();
    let report = MapReport {
        connectivity: curves.connectivity(),
        markings: [[a1.re, a1.im], [a2.re, a2.im]],
        labels: k.labels(),
        record: m.record(),
        moduli: m,
        diagnostics: diag,
        period_matrix: k.period_matrix(),
    };
    cfg.write("moduli.json", &to_json(&report)?)?;
    cfg.write("moduli.csv", &moduli_csv(m))?;
    cfg.write("map.svg", &render_svg(&curves, m))?;

    println!("connectivity  {}", curves.connectivity());
    println!("r2            {:.12}", m.r2);
    for (j, s) in m.slits.iter().enumerate() {
        println!(
            "slit {:<3}      r = {:.12}  alpha = {:.12}  beta = {:.12}",
            j + 3,
            s.radius,
            s.alpha,
            s.beta
        );
    }
    println!("diagnostics");
    println!("  linear residual   {:.3e}", diag.linear_residual);
    println!("  condition         {:.3e}", diag.condition);
    println!("  resolution        {:.3e}", diag.resolution);
    println!("  modulus spread    {:.3e}", diag.modulus_spread);
    println!("  period leak       {:.3e}", diag.period_leak);
    println!("  winding range     [{}, {}]", diag.winding_min, diag.winding_max);
    println!(
        "  period matrix     det {:.6e}, condition {:.3e}",
        k.period_matrix().determinant,
        k.period_matrix().condition
    );
    println!("wrote moduli.json, moduli.csv, map.svg to {}", cfg.out_dir().display());
    Ok(())
}

pub fn run_aut(cfg: &RunConfig) -> Result<(), Failure> {
    let loaded = cfg.spec()?.domain(cfg.nodes)?;
    let Some(d) = loaded.circular() else {
        return Err(Error::Input(
            "aut needs a circular domain spec; use `map` first for a curve spec".into(),
        )
        .into());
    };
    let group = match ThreeConnectedCircular::recognize(d) {
        Some(t) if cfg.tol.is_none() => aut_group_t(&t)?,
        _ => enumerate_automorphisms(d, cfg.tol.unwrap_or(DEFAULT_TOL))?,
    };
    let export = group.export();
    cfg.write("aut.json", &to_json(&export)?)?;
    println!("classification  {}", export.classification);
    println!("order           {}", export.order);
    println!("generators      {}", export.generators.join(", "));
    println!("wrote aut.json to {}", cfg.out_dir().display());
    Ok(())
}

pub fn run_sweep(cfg: &RunConfig) -> Result<(), Failure> {
    let family = cfg.spec()?.family()?;
    let grid = cfg.grid.expect("validated").values();
    let sweep = sweep_moduli(&family, &grid, cfg.nodes)?;
    cfg.write("sweep.csv", &sweep_csv(&sweep))?;
    println!("family  {}", sweep.label);
    println!("points  {}, failures {}", sweep.records.len(), sweep.failures());
    for r in sweep.records.iter().filter(|r| r.error.is_some()) {
        println!("note: lambda = {}: {}", r.lambda, r.error.as_deref().unwrap_or(""));
    }
    if grid.len() >= 3 {
        let reports = [smoothness_report(&sweep, 1)?, smoothness_report(&sweep, 2)?];
        let text: String = reports.iter().map(smoothness_text).collect::<Vec<_>>().join("\n");
        cfg.write("smoothness.txt", &text)?;
        cfg.write("smoothness.json", &to_json(&reports)?)?;
        print!("{text}");
    }
    println!("wrote sweep.csv to {}", cfg.out_dir().display());
    if sweep.failures() * 10 > sweep.records.len() {
        return Err(Failure::Solver(format!(
            "{} of {} grid points failed",
            sweep.failures(),
            sweep.records.len()
        )));
    }
    Ok(())
}

/// Probes of the jump report: a generic point and the continuity point `-√μ`.
pub fn counterexample_probes() -> [Complex64; 2] {
    [Complex64::new(-0.9, 0.0), Complex64::new(-COUNTEREXAMPLE_MU.sqrt(), 0.0)]
}

pub fn counterexample_grid(cfg: &RunConfig) -> Result<(Vec<f64>, Vec<f64>), Failure> {
    let pos = match cfg.grid {
        Some(g) if g.start <= 0.0 => {
            return Err(Error::Input("counterexample --grid must start above 0".into()).into())
        }
        Some(g) => g.values(),
        None => vec![0.1, 0.2, 0.3, 0.4, 0.5],
    };
    let neg = pos.iter().map(|l| -l).collect();
    Ok((pos, neg))
}

pub fn jump_failures(reports: &[JumpReport], tol: f64) -> Vec<String> {
    let mut failures = Vec::new();
    let generic = &reports[0];
    let special = &reports[1];
    if generic.successive_positive >= tol || generic.successive_negative >= tol {
        failures.push(format!(
            "one-sided successive differences {:.3e}, {:.3e} not below {tol:.1e}",
            generic.successive_positive, generic.successive_negative
        ));
    }
    if !generic.discontinuous || generic.jump < 0.6 {
        failures.push(format!("jump {:.6} at probe {} not detected", generic.jump, generic.probe));
    }
    if special.jump > tol || special.discontinuous {
        failures.push(format!("jump {:.3e} at probe {} exceeds {tol:.1e}", special.jump, special.probe));
    }
    if !generic.permutation_stable {
        failures.push("component correspondence does not stabilize".into());
    }
    failures
}

pub fn run_counterexample(cfg: &RunConfig) -> Result<(), Failure> {
    let (pos, neg) = counterexample_grid(cfg)?;
    let reports = biholomorphism_jumps(&pos, &neg, &counterexample_probes(), cfg.nodes)?;
    let text = reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n\n") + "\n";
    cfg.write("jump.json", &to_json(&reports)?)?;
    cfg.write("jump.txt", &text)?;
    print!("{text}");
    println!("wrote jump.json, jump.txt to {}", cfg.out_dir().display());
    let failures = jump_failures(&reports, cfg.tol.unwrap_or(1e-4));
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(failures.join("; ")))
    }
}
