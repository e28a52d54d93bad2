//! Laplace Dirichlet problems on smooth multiply connected domains.
//!
//! The solution is represented as a double-layer potential on all boundary
//! curves plus one logarithmic source anchored inside every hole,
//!
//! ```text
//! u(z) = Re C[mu](z) + sum_k A_k log|z - s_k|,
//! C[mu](z) = (1/2 pi i) ∮ mu(w) dw / (w - z),
//! ```
//!
//! discretized with the periodic trapezoidal rule at the curve nodes
//! (Nyström). One mean-zero condition on the density of every hole removes
//! the null space of the double-layer operator, and the source strengths
//! carry the boundary fluxes exactly: the Cauchy integral `C[mu]` is
//! single-valued, so only the sources contribute to the conjugate periods.

use crate::error::{Error, Result};
use crate::geometry::MultiplyConnectedDomain;
use crate::spectral::{self, TrigInterpolant};
use nalgebra::{DMatrix, DVector, Dyn, LU};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// Nodes per component used when callers do not choose.
pub const DEFAULT_NODES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Condition estimates above this fail the solve.
    pub condition_limit: f64,
    /// Largest tolerated high-frequency tail of the density.
    pub resolution_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            condition_limit: 1e12,
            resolution_tol: 1e-6,
        }
    }
}

/// Dirichlet data sampled at the nodes of every component.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    values: Vec<Vec<f64>>,
}

impl BoundaryData {
    pub fn from_samples(d: &MultiplyConnectedDomain, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.len() != d.connectivity()
            || values.iter().zip(d.components()).any(|(v, c)| v.len() != c.len())
        {
            return Err(Error::Input(
                "boundary data must have one sample per node of every component".into(),
            ));
        }
        Ok(Self { values })
    }

    pub fn from_fn(d: &MultiplyConnectedDomain, f: impl Fn(Complex64) -> f64) -> Self {
        Self {
            values: d
                .components()
                .iter()
                .map(|c| c.nodes().iter().map(|&z| f(z)).collect())
                .collect(),
        }
    }

    /// Per-component constants.
    pub fn piecewise_constant(d: &MultiplyConnectedDomain, levels: &[f64]) -> Self {
        Self {
            values: d
                .components()
                .iter()
                .zip(levels)
                .map(|(c, &v)| vec![v; c.len()])
                .collect(),
        }
    }

    /// One on component `i`, zero elsewhere.
    pub fn indicator(d: &MultiplyConnectedDomain, i: usize) -> Self {
        let levels: Vec<f64> = (0..d.connectivity())
            .map(|k| if k == i { 1.0 } else { 0.0 })
            .collect();
        Self::piecewise_constant(d, &levels)
    }

    pub fn component(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    fn flat(&self) -> Vec<f64> {
        self.values.iter().flatten().copied().collect()
    }
}

/// A logarithmic source `strength * log|z - anchor|` inside a hole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogSource {
    pub anchor: Complex64,
    pub strength: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    /// `max |A x - b|` of the discrete system.
    pub linear_residual: f64,
    /// One-norm condition estimate of the Nyström matrix.
    pub condition: f64,
    /// Largest relative high-frequency tail of the density over components.
    pub resolution: f64,
}

/// Solved Dirichlet problem.
#[derive(Debug, Clone)]
pub struct HarmonicSolution {
    domain: Arc<MultiplyConnectedDomain>,
    offsets: Vec<usize>,
    density: Vec<f64>,
    sources: Vec<LogSource>,
    data: Vec<f64>,
    /// Boundary values of `C[mu]` from inside the domain.
    analytic: Vec<Complex64>,
    diagnostics: SolveDiagnostics,
}

/// Factored Nyström system of one domain, reusable for any data.
pub struct DirichletSolver {
    domain: Arc<MultiplyConnectedDomain>,
    anchors: Vec<Complex64>,
    matrix_size: usize,
    lu: LU<f64, Dyn, Dyn>,
    matrix: DMatrix<f64>,
    condition: f64,
    options: SolverOptions,
}

fn hole_anchor(d: &MultiplyConnectedDomain, k: usize) -> Result<Complex64> {
    let hole = d.component(k);
    let c = hole.centroid();
    if hole.winding_about(c) != 0 && hole.distance_to(c) > 0.5 * hole.resolution() {
        return Ok(c);
    }
    // non-convex hole: deepest point of a lattice over its bounding box
    let nodes = hole.nodes();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for z in nodes {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(z.im);
        y1 = y1.max(z.im);
    }
    let mut best: Option<(Complex64, f64)> = None;
    for i in 0..40 {
        for j in 0..40 {
            let z = Complex64::new(
                x0 + (x1 - x0) * (i as f64 + 0.5) / 40.0,
                y0 + (y1 - y0) * (j as f64 + 0.5) / 40.0,
            );
            if hole.winding_about(z) != 0 {
                let depth = hole.distance_to(z);
                if best.is_none_or(|b| depth > b.1) {
                    best = Some((z, depth));
                }
            }
        }
    }
    best.map(|b| b.0)
        .ok_or_else(|| Error::InvalidDomain(format!("cannot place a source inside hole {k}")))
}

/// One-norm condition estimate (Hager) from an LU factorization.
fn condition_estimate(a: &DMatrix<f64>, lu: &LU<f64, Dyn, Dyn>) -> f64 {
    let n = a.nrows();
    let norm_a = (0..n)
        .map(|j| a.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let l = lu.l();
    let u = lu.u();
    let p = lu.p();
    let solve_t = |b: &DVector<f64>| -> Option<DVector<f64>> {
        // P A = L U  =>  A^T = U^T L^T P
        let y = u.tr_solve_upper_triangular(b)?;
        let mut z = l.tr_solve_lower_triangular(&y)?;
        p.inv_permute_rows(&mut z);
        Some(z)
    };
    let mut x = DVector::from_element(n, 1.0 / n as f64);
    let mut estimate = 0.0;
    for _ in 0..5 {
        let Some(y) = lu.solve(&x) else {
            return f64::INFINITY;
        };
        estimate = y.iter().map(|v| v.abs()).sum::<f64>();
        let xi = y.map(|v| if v >= 0.0 { 1.0 } else { -1.0 });
        let Some(z) = solve_t(&xi) else {
            return f64::INFINITY;
        };
        let (jmax, zmax) = z
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |acc, (j, v)| if v.abs() > acc.1 { (j, v.abs()) } else { acc });
        if zmax <= z.dot(&x) {
            break;
        }
        x = DVector::zeros(n);
        x[jmax] = 1.0;
    }
    norm_a * estimate
}

impl DirichletSolver {
    pub fn new(domain: Arc<MultiplyConnectedDomain>, options: SolverOptions) -> Result<Self> {
        let m = domain.connectivity();
        let offsets = domain.offsets();
        let total = domain.total_nodes();
        let size = total + m - 1;
        let anchors = (1..m)
            .map(|k| hole_anchor(&domain, k))
            .collect::<Result<Vec<_>>>()?;

        let mut a = DMatrix::<f64>::zeros(size, size);
        let comps = domain.components();
        for (ci, curve_i) in comps.iter().enumerate() {
            for (ii, &zi) in curve_i.nodes().iter().enumerate() {
                let row = offsets[ci] + ii;
                for (cj, curve_j) in comps.iter().enumerate() {
                    let weight = curve_j.step() / (2.0 * PI);
                    let (nodes, d1, d2) = (curve_j.nodes(), curve_j.tangent(), curve_j.acceleration());
                    for jj in 0..curve_j.len() {
                        let col = offsets[cj] + jj;
                        let k = if ci == cj && ii == jj {
                            (d2[jj] / (2.0 * d1[jj])).im
                        } else {
                            (d1[jj] / (nodes[jj] - zi)).im
                        };
                        a[(row, col)] = weight * k;
                    }
                }
                a[(row, row)] += 0.5;
                for (k, &s) in anchors.iter().enumerate() {
                    a[(row, total + k)] = (zi - s).norm().ln();
                }
            }
        }
        for k in 1..m {
            let n = comps[k].len();
            for jj in 0..n {
                a[(total + k - 1, offsets[k] + jj)] = 1.0 / n as f64;
            }
        }
        let lu = a.clone().lu();
        let condition = condition_estimate(&a, &lu);
        if !(condition <= options.condition_limit) {
            return Err(Error::IllConditioned {
                condition,
                limit: options.condition_limit,
            });
        }
        Ok(Self {
            domain,
            anchors,
            matrix_size: size,
            lu,
            matrix: a,
            condition,
            options,
        })
    }

    pub fn domain(&self) -> &Arc<MultiplyConnectedDomain> {
        &self.domain
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn solve(&self, data: &BoundaryData) -> Result<HarmonicSolution> {
        let d = &self.domain;
        let total = d.total_nodes();
        let flat = data.flat();
        if flat.len() != total {
            return Err(Error::Input("boundary data size does not match the domain".into()));
        }
        let mut rhs = DVector::<f64>::zeros(self.matrix_size);
        rhs.rows_mut(0, total).copy_from_slice(&flat);
        let x = self
            .lu
            .solve(&rhs)
            .ok_or(Error::IllConditioned {
                condition: f64::INFINITY,
                limit: self.options.condition_limit,
            })?;
        let linear_residual = (&self.matrix * &x - &rhs).amax();
        let density: Vec<f64> = x.rows(0, total).iter().copied().collect();
        let sources: Vec<LogSource> = self
            .anchors
            .iter()
            .enumerate()
            .map(|(k, &anchor)| LogSource {
                anchor,
                strength: x[total + k],
            })
            .collect();
        let offsets = d.offsets();
        let scale = density
            .iter()
            .chain(&flat)
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        let resolution = (0..d.connectivity())
            .map(|c| TrigInterpolant::from_real(&density[offsets[c]..offsets[c + 1]]).tail() / scale)
            .fold(0.0, f64::max);
        if resolution > self.options.resolution_tol {
            return Err(Error::Resolution {
                residual: resolution,
                tolerance: self.options.resolution_tol,
            });
        }
        let analytic = cauchy_boundary_values(d, &offsets, &density);
        Ok(HarmonicSolution {
            domain: Arc::clone(d),
            offsets,
            density,
            sources,
            data: flat,
            analytic,
            diagnostics: SolveDiagnostics {
                linear_residual,
                condition: self.condition,
                resolution,
            },
        })
    }
}

/// Interior boundary values of `C[mu]`: the jump `mu/2`, the Hilbert
/// transform of the cotangent part of the self-interaction and trapezoidal
/// sums of the smooth remainder.
fn cauchy_boundary_values(
    d: &MultiplyConnectedDomain,
    offsets: &[usize],
    density: &[f64],
) -> Vec<Complex64> {
    let comps = d.components();
    let mut out = vec![Complex64::new(0.0, 0.0); density.len()];
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    for (ci, curve_i) in comps.iter().enumerate() {
        let mu_i = &density[offsets[ci]..offsets[ci + 1]];
        let hilbert = spectral::conjugate(mu_i);
        let n_i = curve_i.len();
        for (ii, &zi) in curve_i.nodes().iter().enumerate() {
            let mut acc = Complex64::new(-PI * hilbert[ii], 0.0);
            for (cj, curve_j) in comps.iter().enumerate() {
                let h = curve_j.step();
                let mu_j = &density[offsets[cj]..offsets[cj + 1]];
                let (nodes, d1, d2) = (curve_j.nodes(), curve_j.tangent(), curve_j.acceleration());
                for jj in 0..curve_j.len() {
                    let k = if ci == cj {
                        if ii == jj {
                            d2[jj] / (2.0 * d1[jj])
                        } else {
                            let dt = PI * (jj as f64 - ii as f64) / n_i as f64;
                            d1[jj] / (nodes[jj] - zi) - 0.5 / dt.tan()
                        }
                    } else {
                        d1[jj] / (nodes[jj] - zi)
                    };
                    acc += k * (h * mu_j[jj]);
                }
            }
            out[offsets[ci] + ii] = 0.5 * mu_i[ii] + acc / two_pi_i;
        }
    }
    out
}

/// Barycentric Cauchy evaluation of an analytic function from its boundary
/// values; returns the value and the discrete `∮ dw/(w - z)` weights sum.
pub(crate) fn cauchy_interior(
    d: &MultiplyConnectedDomain,
    boundary: &[Complex64],
    z: Complex64,
) -> (Complex64, Complex64) {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = Complex64::new(0.0, 0.0);
    let mut idx = 0;
    for c in d.components() {
        let h = c.step();
        for (w, dw) in c.nodes().iter().zip(c.tangent()) {
            let q = dw * h / (w - z);
            num += boundary[idx] * q;
            den += q;
            idx += 1;
        }
    }
    (num / den, den)
}

/// Value and derivative of an analytic function from its boundary values.
pub(crate) fn cauchy_interior_with_derivative(
    d: &MultiplyConnectedDomain,
    boundary: &[Complex64],
    z: Complex64,
) -> (Complex64, Complex64) {
    let (f, den) = cauchy_interior(d, boundary, z);
    let mut num = Complex64::new(0.0, 0.0);
    let mut idx = 0;
    for c in d.components() {
        let h = c.step();
        for (w, dw) in c.nodes().iter().zip(c.tangent()) {
            let r = (w - z).inv();
            num += (boundary[idx] - f) * dw * h * r * r;
            idx += 1;
        }
    }
    (f, num / den)
}

impl HarmonicSolution {
    pub fn domain(&self) -> &Arc<MultiplyConnectedDomain> {
        &self.domain
    }

    pub fn diagnostics(&self) -> SolveDiagnostics {
        self.diagnostics
    }

    pub fn sources(&self) -> &[LogSource] {
        &self.sources
    }

    /// Double-layer density on component `i`.
    pub fn density(&self, i: usize) -> &[f64] {
        &self.density[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Prescribed boundary values on component `i`.
    pub fn data(&self, i: usize) -> &[f64] {
        &self.data[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Boundary values of the single-valued analytic part `C[mu]` on component `i`.
    pub fn analytic_boundary(&self, i: usize) -> &[Complex64] {
        &self.analytic[self.offsets[i]..self.offsets[i + 1]]
    }

    pub(crate) fn analytic_all(&self) -> &[Complex64] {
        &self.analytic
    }

    /// `∮_{γ_i} ∂u/∂ν dσ` with `ν` the outward normal of the domain.
    ///
    /// The double layer has zero conjugate period, so a hole picks up
    /// `-2π A_k` from its own source and the outer curve the total `2π ΣA`.
    pub fn flux(&self, i: usize) -> f64 {
        if i == 0 {
            2.0 * PI * self.sources.iter().map(|s| s.strength).sum::<f64>()
        } else {
            -2.0 * PI * self.sources[i - 1].strength
        }
    }

    pub fn fluxes(&self) -> Vec<f64> {
        (0..self.domain.connectivity()).map(|i| self.flux(i)).collect()
    }

    /// Potential of the sources alone.
    pub(crate) fn source_potential(&self, z: Complex64) -> f64 {
        self.sources
            .iter()
            .map(|s| s.strength * (z - s.anchor).norm().ln())
            .sum()
    }

    /// Analytic part at an interior point, without position checks.
    pub(crate) fn analytic_at(&self, z: Complex64) -> Complex64 {
        cauchy_interior(&self.domain, &self.analytic, z).0
    }

    /// Interior value `u(z)`; `z` must lie inside with margin above the
    /// boundary resolution.
    pub fn eval_interior(&self, z: Complex64) -> Result<f64> {
        match self.domain.contains(z)? {
            true => Ok(self.analytic_at(z).re + self.source_potential(z)),
            false => Err(Error::OutsideDomain { re: z.re, im: z.im }),
        }
    }

    /// `Σ c_k u_k` for solutions on the same domain.
    pub fn combine(terms: &[(f64, &HarmonicSolution)]) -> Result<HarmonicSolution> {
        let first = terms
            .first()
            .ok_or_else(|| Error::Input("empty linear combination".into()))?
            .1;
        if terms.iter().any(|(_, s)| !Arc::ptr_eq(&s.domain, &first.domain)) {
            return Err(Error::Input("solutions live on different domains".into()));
        }
        let mut out = first.clone();
        out.density.iter_mut().for_each(|v| *v = 0.0);
        out.data.iter_mut().for_each(|v| *v = 0.0);
        out.analytic.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        out.sources.iter_mut().for_each(|s| s.strength = 0.0);
        let mut diag = SolveDiagnostics {
            linear_residual: 0.0,
            condition: first.diagnostics.condition,
            resolution: 0.0,
        };
        for &(c, s) in terms {
            for (o, v) in out.density.iter_mut().zip(&s.density) {
                *o += c * v;
            }
            for (o, v) in out.data.iter_mut().zip(&s.data) {
                *o += c * v;
            }
            for (o, v) in out.analytic.iter_mut().zip(&s.analytic) {
                *o += c * v;
            }
            for (o, v) in out.sources.iter_mut().zip(&s.sources) {
                o.strength += c * v.strength;
            }
            diag.linear_residual += c.abs() * s.diagnostics.linear_residual;
            diag.resolution = diag.resolution.max(s.diagnostics.resolution);
        }
        out.diagnostics = diag;
        Ok(out)
    }
}

/// Solves the Dirichlet problem with the default options.
pub fn solve_dirichlet(
    d: &Arc<MultiplyConnectedDomain>,
    data: &BoundaryData,
) -> Result<HarmonicSolution> {
    DirichletSolver::new(Arc::clone(d), SolverOptions::default())?.solve(data)
}

/// Harmonic measure of component `i`: one on `γ_i`, zero on the others.
pub fn harmonic_measure(d: &Arc<MultiplyConnectedDomain>, i: usize) -> Result<HarmonicSolution> {
    if i >= d.connectivity() {
        return Err(Error::Input(format!(
            "component {i} out of range for connectivity {}",
            d.connectivity()
        )));
    }
    solve_dirichlet(d, &BoundaryData::indicator(d, i))
}

/// Fluxes of the harmonic measures through the boundary components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodMatrix {
    /// `full[i][l]`: flux of the measure of component `l` through component `i`.
    pub full: Vec<Vec<f64>>,
    /// The block with `i, l >= 1` (all components except the first).
    pub entries: Vec<Vec<f64>>,
    pub determinant: f64,
    /// Two-norm condition number of `entries`.
    pub condition: f64,
}

/// Largest tolerated `|Σ_i flux_i|` of a solved measure.
pub const GREEN_TOL: f64 = 1e-9;

impl PeriodMatrix {
    /// Builds the table from harmonic measures listed in component order and
    /// checks the Green identity, the sign pattern and nonsingularity.
    pub fn from_measures(measures: &[HarmonicSolution]) -> Result<Self> {
        let m = measures.len();
        if m < 2 {
            return Err(Error::Input("period matrix needs connectivity >= 2".into()));
        }
        let full: Vec<Vec<f64>> = (0..m)
            .map(|i| measures.iter().map(|s| s.flux(i)).collect())
            .collect();
        Self::from_table(full)
    }

    pub(crate) fn from_table(full: Vec<Vec<f64>>) -> Result<Self> {
        let m = full.len();
        for l in 0..m {
            let sum: f64 = (0..m).map(|i| full[i][l]).sum();
            if sum.abs() > GREEN_TOL {
                return Err(Error::SignPattern(format!(
                    "Green identity violated for measure {l}: flux sum {sum:.3e}"
                )));
            }
            for i in 0..m {
                let v = full[i][l];
                if (i == l && !(v > 0.0)) || (i != l && !(v < 0.0)) {
                    return Err(Error::SignPattern(format!(
                        "flux of measure {l} through component {i} is {v:.6e}"
                    )));
                }
            }
        }
        let entries: Vec<Vec<f64>> = full[1..].iter().map(|row| row[1..].to_vec()).collect();
        let k = m - 1;
        let mat = DMatrix::from_fn(k, k, |i, j| entries[i][j]);
        let determinant = mat.clone().lu().determinant();
        let sv = mat.singular_values();
        let smax = sv.max();
        let smin = sv.min();
        let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        if !(condition < 1e12) || determinant == 0.0 {
            return Err(Error::SingularPeriodMatrix {
                det: determinant,
                condition,
            });
        }
        Ok(Self {
            full,
            entries,
            determinant,
            condition,
        })
    }
}

/// Period matrix of the domain with its own component order.
pub fn period_matrix(d: &Arc<MultiplyConnectedDomain>) -> Result<PeriodMatrix> {
    if d.connectivity() < 2 {
        return Err(Error::Input("period matrix needs connectivity >= 2".into()));
    }
    let solver = DirichletSolver::new(Arc::clone(d), SolverOptions::default())?;
    let measures = (0..d.connectivity())
        .map(|i| solver.solve(&BoundaryData::indicator(d, i)))
        .collect::<Result<Vec<_>>>()?;
    PeriodMatrix::from_measures(&measures)
}
