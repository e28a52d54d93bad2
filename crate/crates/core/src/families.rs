//! Parameterized domain families, moduli sweeps and the biholomorphism
//! discontinuity witness.

use crate::error::{Error, Result};
use crate::geometry::{perpendicular_circle, Circle, CircularDomain, ExtendedPoint};
use crate::koebe::{canonical_map, Biholomorphism, MapDiagnostics, SlitAnnulus, MODULI_MATCH_TOL};
use crate::mobius::{image_of_circle, MobiusMap};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

pub const COUNTEREXAMPLE_MU: f64 = 3.0 / 16.0;
pub const COUNTEREXAMPLE_A: f64 = 0.5;
pub const COUNTEREXAMPLE_R: f64 = 0.25;

/// Environment variable capping the worker threads of sweeps.
pub const THREADS_ENV: &str = "SLITMAP_THREADS";

/// `e^{-4/λ²}`, exactly zero at `λ = 0`.
pub fn flat_perturbation(lambda: f64) -> f64 {
    if lambda == 0.0 {
        0.0
    } else {
        (-4.0 / (lambda * lambda)).exp()
    }
}

fn check_unit_range(lambda: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("lambda = {lambda} outside [-1, 1]")))
    }
}

/// `D^λ = T(3/16, 1/2, 1/4 + e^{-4/λ²})`.
pub fn counterexample_domain(lambda: f64) -> Result<CircularDomain> {
    check_unit_range(lambda)?;
    CircularDomain::three_connected(
        COUNTEREXAMPLE_MU,
        COUNTEREXAMPLE_A,
        COUNTEREXAMPLE_R + flat_perturbation(lambda),
    )
}

/// `τ(z) = (3/16)/z`.
pub fn counterexample_tau() -> MobiusMap {
    MobiusMap::involution(COUNTEREXAMPLE_MU)
}

fn circle_image(m: &MobiusMap, c: &Circle) -> Result<Circle> {
    image_of_circle(m, c)
        .circle()
        .ok_or_else(|| Error::Internal("circle mapped onto a line".into()))
}

/// `D̃^λ`: equal to `D^λ` for `λ >= 0` and to `τ(D^λ)` for `λ < 0`, with
/// circles listed as the images of the unit circle, `S_μ` and the third
/// circle, in that order.
pub fn tilde_counterexample_domain(lambda: f64) -> Result<CircularDomain> {
    let d = counterexample_domain(lambda)?;
    if lambda >= 0.0 {
        return Ok(d);
    }
    let tau = counterexample_tau();
    let images = d
        .ordered()
        .iter()
        .map(|c| circle_image(&tau, c))
        .collect::<Result<Vec<_>>>()?;
    // τ sends the unit circle inside and S_μ onto the unit circle
    CircularDomain::new(images, 1)
}

/// Domain bounded by the unit circle, `S_μ(0)` and the circles
/// perpendicular to the real axis over consecutive pairs of
/// `(r_1 + ε, r_2 + ε², r_3, ..., r_n)`.
///
/// `rs` must be increasing in `(μ, 1)`, of even length, and symmetric under
/// `τ(x) = μ/x`: `rs[n - 1 - i] = μ / rs[i]`.
pub fn general_counterexample_domain(mu: f64, rs: &[f64], eps: f64) -> Result<CircularDomain> {
    let n = rs.len();
    if n < 2 || n % 2 != 0 {
        return Err(Error::Input(format!("need an even, positive number of radii, got {n}")));
    }
    if !(mu > 0.0 && mu < rs[0] && rs[n - 1] < 1.0) {
        return Err(Error::InvalidDomain(format!(
            "radii must lie strictly between mu = {mu} and 1"
        )));
    }
    if rs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidDomain("radii must be strictly increasing".into()));
    }
    for i in 0..n {
        let gap = (rs[n - 1 - i] - mu / rs[i]).abs();
        if gap > 1e-10 {
            return Err(Error::InvalidDomain(format!(
                "radii are not tau-symmetric: r[{}] - mu/r[{i}] = {gap:.3e}",
                n - 1 - i
            )));
        }
    }
    if !(eps >= 0.0) {
        return Err(Error::Input(format!("eps must be non-negative, got {eps}")));
    }
    let mut perturbed = rs.to_vec();
    perturbed[0] += eps;
    perturbed[1] += eps * eps;
    if !(perturbed[0] < perturbed[1] && (n == 2 || perturbed[1] < perturbed[2]) && perturbed[1] < 1.0) {
        return Err(Error::InvalidDomain(format!(
            "eps = {eps} breaks the ordering of the perturbed radii"
        )));
    }
    let mut circles = vec![Circle::centered(0.0, 0.0, 1.0)?, Circle::centered(0.0, 0.0, mu)?];
    for pair in perturbed.chunks(2) {
        circles.push(perpendicular_circle(pair[0], pair[1])?);
    }
    CircularDomain::new(circles, 0)
}

type Generator = dyn Fn(f64) -> Result<CircularDomain> + Send + Sync;

/// `λ ↦ D^λ` over a closed interval.
#[derive(Clone)]
pub struct DomainFamily {
    pub label: String,
    pub range: (f64, f64),
    generator: Arc<Generator>,
}

impl fmt::Debug for DomainFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DomainFamily")
            .field("label", &self.label)
            .field("range", &self.range)
            .finish()
    }
}

impl DomainFamily {
    pub fn new(
        label: impl Into<String>,
        range: (f64, f64),
        generator: impl Fn(f64) -> Result<CircularDomain> + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(range.0 <= range.1) {
            return Err(Error::Input(format!("empty family range {range:?}")));
        }
        Ok(Self {
            label: label.into(),
            range,
            generator: Arc::new(generator),
        })
    }

    pub fn counterexample() -> Self {
        Self::new("counterexample", (-1.0, 1.0), counterexample_domain).expect("valid range")
    }

    pub fn tilde_counterexample() -> Self {
        Self::new("tilde-counterexample", (-1.0, 1.0), tilde_counterexample_domain)
            .expect("valid range")
    }

    /// Annuli `A_{ρ(λ)}` with `ρ(λ) = base + slope λ`.
    pub fn annulus_linear(base: f64, slope: f64, range: (f64, f64)) -> Result<Self> {
        Self::new(format!("annulus {base} + {slope} lambda"), range, move |l| {
            CircularDomain::annulus(base + slope * l)
        })
    }

    /// The same domain for every `λ`.
    pub fn constant(d: CircularDomain, range: (f64, f64)) -> Result<Self> {
        Self::new("constant", range, move |_| Ok(d.clone()))
    }

    pub fn domain(&self, lambda: f64) -> Result<CircularDomain> {
        if lambda < self.range.0 || lambda > self.range.1 {
            return Err(Error::OutOfRange(format!(
                "lambda = {lambda} outside [{}, {}]",
                self.range.0, self.range.1
            )));
        }
        (self.generator)(lambda)
    }
}

/// Point of argument zero on a circle, relative to its center.
fn arg_zero_point(c: &Circle) -> Complex64 {
    c.center + c.radius
}

/// Arg-zero markings on the outer circle and the first hole.
pub fn default_markings(d: &CircularDomain) -> Result<(Complex64, Complex64)> {
    let holes = d.holes();
    let first = holes
        .first()
        .ok_or_else(|| Error::Input("domain has no holes".into()))?;
    Ok((arg_zero_point(d.outer()), arg_zero_point(first)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub lambda: f64,
    pub moduli: Option<SlitAnnulus>,
    pub diagnostics: Option<MapDiagnostics>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySweep {
    pub label: String,
    pub nodes: usize,
    pub records: Vec<SweepRecord>,
}

/// Runs `f` on a pool capped by `SLITMAP_THREADS` when set.
pub fn with_thread_limit<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let limit = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    match limit.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

fn check_grid(grid: &[f64], range: (f64, f64)) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Input("empty lambda grid".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Input("lambda grid must be strictly increasing".into()));
    }
    if grid[0] < range.0 || grid[grid.len() - 1] > range.1 {
        return Err(Error::OutOfRange(format!(
            "lambda grid leaves the family range [{}, {}]",
            range.0, range.1
        )));
    }
    Ok(())
}

/// Canonical moduli along a family with arg-zero markings; failures at
/// single grid points are recorded and the sweep continues.
pub fn sweep_moduli(f: &DomainFamily, grid: &[f64], nodes: usize) -> Result<FamilySweep> {
    check_grid(grid, f.range)?;
    let records = with_thread_limit(|| {
        grid.par_iter()
            .map(|&lambda| {
                let run = || -> Result<(SlitAnnulus, MapDiagnostics)> {
                    let d = f.domain(lambda)?;
                    let (a1, a2) = default_markings(&d)?;
                    let curves = Arc::new(d.to_curves(nodes)?);
                    let k = canonical_map(&curves, a1, a2)?;
                    Ok((k.moduli().clone(), k.diagnostics()))
                };
                match run() {
                    Ok((m, diag)) => SweepRecord {
                        lambda,
                        moduli: Some(m),
                        diagnostics: Some(diag),
                        error: None,
                    },
                    Err(e) => SweepRecord {
                        lambda,
                        moduli: None,
                        diagnostics: None,
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect::<Vec<_>>()
    });
    Ok(FamilySweep {
        label: f.label.clone(),
        nodes,
        records,
    })
}

impl FamilySweep {
    pub fn lambdas(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.lambda).collect()
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.moduli.is_none()).count()
    }

    pub fn max_slits(&self) -> usize {
        self.records
            .iter()
            .filter_map(|r| r.moduli.as_ref())
            .map(|m| m.slits.len())
            .max()
            .unwrap_or(0)
    }

    /// Named moduli curves `r2, r3, alpha3, beta3, ...`; `None` where a
    /// grid point failed or has fewer slits.
    pub fn curves(&self) -> Vec<(String, Vec<Option<f64>>)> {
        let mut out = vec![(
            "r2".to_string(),
            self.records
                .iter()
                .map(|r| r.moduli.as_ref().map(|m| m.r2))
                .collect(),
        )];
        for j in 0..self.max_slits() {
            let label = j + 3;
            let pick = |f: fn(&crate::koebe::Slit) -> f64| -> Vec<Option<f64>> {
                self.records
                    .iter()
                    .map(|r| r.moduli.as_ref().and_then(|m| m.slits.get(j)).map(f))
                    .collect()
            };
            out.push((format!("r{label}"), pick(|s| s.radius)));
            out.push((format!("alpha{label}"), pick(|s| s.alpha)));
            out.push((format!("beta{label}"), pick(|s| s.beta)));
        }
        out
    }
}

/// Finite-difference diagnostics of one moduli curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSmoothness {
    pub name: String,
    /// Central quotients at the interior grid points (`None` near failures).
    pub quotients: Vec<Option<f64>>,
    pub max_abs: f64,
    pub median_abs: f64,
    /// Grid indices flagged as discontinuity candidates.
    pub jumps: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub order: u32,
    pub step: f64,
    pub curves: Vec<CurveSmoothness>,
}

/// Quotients below this multiple of `step^-order` are treated as solver noise
/// when flagging jumps.
pub const NOISE_FLOOR: f64 = 1e-6;

/// Central difference quotients of order 1 or 2 of every moduli curve.
pub fn smoothness_report(s: &FamilySweep, order: u32) -> Result<SmoothnessReport> {
    if !(order == 1 || order == 2) {
        return Err(Error::Input(format!("difference order must be 1 or 2, got {order}")));
    }
    let lambdas = s.lambdas();
    if lambdas.len() < 3 {
        return Err(Error::NonUniformGrid("need at least three grid points".into()));
    }
    let step = lambdas[1] - lambdas[0];
    for w in lambdas.windows(2) {
        if ((w[1] - w[0]) - step).abs() > 1e-9 * step.abs().max(1.0) {
            return Err(Error::NonUniformGrid(format!(
                "spacing {} differs from {}",
                w[1] - w[0],
                step
            )));
        }
    }
    let curves = s
        .curves()
        .into_iter()
        .map(|(name, values)| {
            let quotients: Vec<Option<f64>> = (1..values.len() - 1)
                .map(|i| match (values[i - 1], values[i], values[i + 1]) {
                    (Some(a), Some(b), Some(c)) => Some(if order == 1 {
                        (c - a) / (2.0 * step)
                    } else {
                        (c - 2.0 * b + a) / (step * step)
                    }),
                    _ => None,
                })
                .collect();
            let mut mags: Vec<f64> = quotients.iter().flatten().map(|q| q.abs()).collect();
            mags.sort_by(f64::total_cmp);
            let median_abs = if mags.is_empty() { 0.0 } else { mags[mags.len() / 2] };
            let max_abs = mags.last().copied().unwrap_or(0.0);
            let threshold = (10.0 * median_abs).max(NOISE_FLOOR / step.powi(order as i32));
            let jumps = quotients
                .iter()
                .enumerate()
                .filter(|(_, q)| q.is_some_and(|q| q.abs() > threshold))
                .map(|(i, _)| i + 1)
                .collect();
            CurveSmoothness {
                name,
                quotients,
                max_abs,
                median_abs,
                jumps,
            }
        })
        .collect();
    Ok(SmoothnessReport {
        order,
        step,
        curves,
    })
}

/// One λ of a branch of the jump witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchSample {
    pub lambda: f64,
    /// `F^λ(probe)`.
    pub value: Complex64,
    /// Sup over the compact test grid of `|F^λ - expected|`, with the
    /// identity expected for `λ > 0` and `τ` for `λ < 0`.
    pub deviation: f64,
    /// Boundary-component correspondence of `F^λ`.
    pub permutation: Vec<usize>,
    pub mu: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpReport {
    pub probe: Complex64,
    pub positive: Vec<BranchSample>,
    pub negative: Vec<BranchSample>,
    /// `F^λ(probe)` at the grid point nearest to zero on each side.
    pub limit_positive: Complex64,
    pub limit_negative: Complex64,
    pub jump: f64,
    /// `|probe - τ(probe)|`.
    pub expected_jump: f64,
    /// Largest sup-grid difference between successive maps on each side.
    pub successive_positive: f64,
    pub successive_negative: f64,
    pub permutation_stable: bool,
    /// Whether the cross-zero jump exceeds 100 times the largest one-sided
    /// successive difference at the probe (at least [`JUMP_NOISE_FLOOR`]).
    pub discontinuous: bool,
}

/// Lower bound on the one-sided successive difference used by the jump
/// test, the accuracy of two independently discretized maps.
pub const JUMP_NOISE_FLOOR: f64 = 1e-8;

/// Compact grid inside every `D^λ`: points of `T(3/16, 1/2, 1/4)` with
/// clearance at least `margin`.
pub fn compact_test_grid(per_side: usize, margin: f64) -> Vec<Complex64> {
    let t = counterexample_domain(0.0).expect("lambda = 0 is valid");
    let mut out = Vec::new();
    for i in 0..per_side {
        for j in 0..per_side {
            let z = Complex64::new(
                -1.0 + 2.0 * (i as f64 + 0.5) / per_side as f64,
                -1.0 + 2.0 * (j as f64 + 0.5) / per_side as f64,
            );
            if t.clearance(z) > margin {
                out.push(z);
            }
        }
    }
    out
}

struct BranchMap {
    lambda: f64,
    map: Biholomorphism,
    grid_values: Vec<Complex64>,
}

fn branch_map(lambda: f64, nodes: usize, probes: &[Complex64], grid: &[Complex64]) -> Result<BranchMap> {
    let d = counterexample_domain(lambda)?;
    let dt = tilde_counterexample_domain(lambda)?;
    for dom in [&d, &dt] {
        if let Some(p) = probes.iter().find(|&&p| !dom.contains(p)) {
            return Err(Error::OutsideDomain { re: p.re, im: p.im });
        }
    }
    let marks = default_markings(&d)?;
    let marks_t = if lambda >= 0.0 {
        marks
    } else {
        let tau = counterexample_tau();
        let image = |z: Complex64| {
            tau.apply(ExtendedPoint::new(z))
                .finite()
                .ok_or_else(|| Error::Internal("marking mapped to infinity".into()))
        };
        (image(marks.0)?, image(marks.1)?)
    };
    let curves = Arc::new(d.to_curves(nodes)?);
    let curves_t = Arc::new(dt.to_curves(nodes)?);
    let k = Arc::new(canonical_map(&curves, marks.0, marks.1)?);
    let kt = Arc::new(canonical_map(&curves_t, marks_t.0, marks_t.1)?);
    let map = Biholomorphism::from_maps(k, kt, MODULI_MATCH_TOL)?;
    let grid_values = grid.iter().map(|&z| map.eval(z)).collect::<Result<Vec<_>>>()?;
    Ok(BranchMap {
        lambda,
        map,
        grid_values,
    })
}

/// Builds `F^λ: D^λ → D̃^λ` on both sides of `λ = 0` and measures the jump
/// of `F^λ(probe)` across zero.
pub fn biholomorphism_jump(
    grid_pos: &[f64],
    grid_neg: &[f64],
    probe: Complex64,
    nodes: usize,
) -> Result<JumpReport> {
    Ok(biholomorphism_jumps(grid_pos, grid_neg, &[probe], nodes)?.remove(0))
}

/// [`biholomorphism_jump`] for several probes sharing one set of maps.
pub fn biholomorphism_jumps(
    grid_pos: &[f64],
    grid_neg: &[f64],
    probes: &[Complex64],
    nodes: usize,
) -> Result<Vec<JumpReport>> {
    if grid_pos.is_empty() || grid_neg.is_empty() || probes.is_empty() {
        return Err(Error::Input("need at least one lambda per branch and one probe".into()));
    }
    if grid_pos.iter().any(|&l| !(l > 0.0 && l <= 1.0)) || grid_neg.iter().any(|&l| !(l < 0.0 && l >= -1.0)) {
        return Err(Error::OutOfRange(
            "positive grid must lie in (0, 1] and negative grid in [-1, 0)".into(),
        ));
    }
    let t0 = counterexample_domain(0.0)?;
    for &p in probes {
        if !t0.contains(p) {
            return Err(Error::OutsideDomain { re: p.re, im: p.im });
        }
    }
    let mut pos = grid_pos.to_vec();
    pos.sort_by(|a, b| a.total_cmp(b));
    let mut neg = grid_neg.to_vec();
    neg.sort_by(|a, b| b.total_cmp(a));
    let mut grid = compact_test_grid(14, 0.05);
    let first_probe = grid.len();
    grid.extend_from_slice(probes);
    let tau = counterexample_tau();

    let run = |lambdas: &[f64]| -> Result<Vec<BranchMap>> {
        with_thread_limit(|| {
            lambdas
                .par_iter()
                .map(|&l| branch_map(l, nodes, probes, &grid))
                .collect()
        })
    };
    let pos_maps = run(&pos)?;
    let neg_maps = run(&neg)?;

    let deviation = |b: &BranchMap| -> f64 {
        grid.iter()
            .zip(&b.grid_values)
            .map(|(&z, &f)| {
                let expected = if b.lambda > 0.0 {
                    z
                } else {
                    tau.apply_finite(z).unwrap_or(z)
                };
                (f - expected).norm()
            })
            .fold(0.0, f64::max)
    };
    let successive = |maps: &[BranchMap], range: std::ops::Range<usize>| -> f64 {
        maps.windows(2)
            .map(|w| {
                range
                    .clone()
                    .map(|k| (w[0].grid_values[k] - w[1].grid_values[k]).norm())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    };
    let all = 0..grid.len();
    let successive_positive = successive(&pos_maps, all.clone());
    let successive_negative = successive(&neg_maps, all);
    let samples = |maps: &[BranchMap], k: usize| -> Vec<BranchSample> {
        maps.iter()
            .map(|b| BranchSample {
                lambda: b.lambda,
                value: b.grid_values[k],
                deviation: deviation(b),
                permutation: b.map.permutation().to_vec(),
                mu: b.map.mu(),
            })
            .collect()
    };
    let stable = |s: &[BranchSample]| s.windows(2).all(|w| w[0].permutation == w[1].permutation);

    Ok(probes
        .iter()
        .enumerate()
        .map(|(i, &probe)| {
            let k = first_probe + i;
            let positive = samples(&pos_maps, k);
            let negative = samples(&neg_maps, k);
            let limit_positive = positive[0].value;
            let limit_negative = negative[0].value;
            let jump = (limit_positive - limit_negative).norm();
            let local = successive(&pos_maps, k..k + 1)
                .max(successive(&neg_maps, k..k + 1))
                .max(JUMP_NOISE_FLOOR);
            JumpReport {
                probe,
                limit_positive,
                limit_negative,
                jump,
                expected_jump: (probe - tau.apply_finite(probe).unwrap_or(probe)).norm(),
                successive_positive,
                successive_negative,
                permutation_stable: stable(&positive) && stable(&negative),
                discontinuous: jump > 100.0 * local,
                positive,
                negative,
            }
        })
        .collect())
}

impl fmt::Display for JumpReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "probe: {}", self.probe)?;
        for s in self.negative.iter().rev().chain(&self.positive) {
            writeln!(
                f,
                "lambda {:+.3}: F(probe) = {:.12}  sup|F - expected| = {:.3e}  components {:?}",
                s.lambda, s.value, s.deviation, s.permutation
            )?;
        }
        writeln!(f, "one-sided limit (lambda -> 0+): {:.12}", self.limit_positive)?;
        writeln!(f, "one-sided limit (lambda -> 0-): {:.12}", self.limit_negative)?;
        writeln!(f, "jump: {:.9e} (|probe - tau(probe)| = {:.9e})", self.jump, self.expected_jump)?;
        writeln!(
            f,
            "largest successive sup-difference: {:.3e} (lambda > 0), {:.3e} (lambda < 0)",
            self.successive_positive, self.successive_negative
        )?;
        writeln!(f, "component correspondence stable: {}", self.permutation_stable)?;
        write!(f, "discontinuous at lambda = 0: {}", self.discontinuous)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_radii() {
        let hole = |l: f64| counterexample_domain(l).unwrap().holes()[1].radius;
        assert_eq!(hole(0.0), 0.25);
        assert!((hole(1.0) - 0.268316).abs() < 1e-6);
        assert!((hole(0.5) - 0.250000113).abs() < 1e-9);
        assert!(counterexample_domain(1.5).is_err());
    }

    #[test]
    fn tilde_branches() {
        assert_eq!(tilde_counterexample_domain(0.3).unwrap(), counterexample_domain(0.3).unwrap());
        let d = tilde_counterexample_domain(-0.3).unwrap();
        let c = d.circles();
        assert!((c[0].center.norm() + (c[0].radius - 3.0 / 16.0).abs()) < 1e-12);
        assert!((c[1].center.norm() + (c[1].radius - 1.0).abs()) < 1e-12);
        assert_eq!(d.outer_index(), 1);
        let t = counterexample_domain(0.0).unwrap();
        let t0 = tilde_counterexample_domain(-1e-3).unwrap();
        let same = |x: &Circle, y: &Circle| (x.center - y.center).norm() + (x.radius - y.radius).abs() < 1e-12;
        for c in t0.circles() {
            assert!(t.circles().iter().any(|o| same(c, o)));
        }
    }

    #[test]
    fn general_family_validation() {
        let mu = 3.0 / 16.0;
        let rs = [0.25, 0.3, mu / 0.3, mu / 0.25];
        let d = general_counterexample_domain(mu, &rs, 0.0).unwrap();
        assert_eq!(d.connectivity(), 4);
        assert!(general_counterexample_domain(mu, &rs, 0.3).is_err());
        assert!(general_counterexample_domain(mu, &[0.25, 0.3, 0.6, 0.7], 0.0).is_err());
    }

    #[test]
    fn smoothness_rejects_bad_grids() {
        let f = DomainFamily::annulus_linear(0.2, 0.1, (0.0, 1.0)).unwrap();
        let s = sweep_moduli(&f, &[0.0, 0.1, 0.3], 32).unwrap();
        assert!(matches!(smoothness_report(&s, 1), Err(Error::NonUniformGrid(_))));
        assert!(smoothness_report(&s, 3).is_err());
        assert!(sweep_moduli(&f, &[0.2, 0.1], 32).is_err());
    }
}
