//! Canonical map `K = e^{u + iv}` of a multiply connected domain onto a
//! circular-slit annulus `{r2 < |w| < 1}` minus concentric arcs.
//!
//! `u` is the combination of harmonic measures that vanishes on the first
//! marked component, has flux `-2π` through the second and zero flux through
//! every other component. Its conjugate `v` is then single-valued modulo
//! `2π`, so `e^{u + iv}` is a single-valued analytic function. With the
//! double-layer-plus-sources representation this is explicit:
//!
//! ```text
//! u + iv = C[mu](z) + sum_k A_k log(z - s_k) + i const,
//! ```
//!
//! the `A_k` are integers, and `K = phase * exp(C[mu]) * prod (z - s_k)^{A_k}`.

use crate::dirichlet::{
    self, BoundaryData, DirichletSolver, HarmonicSolution, PeriodMatrix, SolverOptions,
};
use crate::error::{Error, Result};
use crate::geometry::MultiplyConnectedDomain;
use crate::spectral::TrigInterpolant;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// Tolerated deviation of the source strengths from integers.
pub const LEAK_TOL: f64 = 1e-8;
/// Newton target for [`CanonicalMap::invert`].
pub const INVERSION_TOL: f64 = 1e-10;
pub const MAX_NEWTON_STEPS: usize = 50;
/// Default relative tolerance when comparing moduli of two maps.
pub const MODULI_MATCH_TOL: f64 = 1e-5;

/// Concentric arc `{ r e^{iθ} : α <= θ <= β }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Slit {
    pub radius: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Slit {
    pub fn width(&self) -> f64 {
        self.beta - self.alpha
    }

    /// Whether `w` lies within `tol` of the arc.
    pub fn near(&self, w: Complex64, tol: f64) -> bool {
        let a = Complex64::from_polar(self.radius, self.alpha);
        let b = Complex64::from_polar(self.radius, self.beta);
        if (w - a).norm() < tol || (w - b).norm() < tol {
            return true;
        }
        let on_arc = (w.arg() - self.alpha).rem_euclid(2.0 * PI) <= self.width();
        on_arc && (w.norm() - self.radius).abs() < tol
    }

    /// Whether the segment from `a` to `b` meets the arc.
    pub fn crosses(&self, a: Complex64, b: Complex64) -> bool {
        let d = b - a;
        let qa = d.norm_sqr();
        let qb = 2.0 * (a * d.conj()).re;
        let qc = a.norm_sqr() - self.radius * self.radius;
        let disc = qb * qb - 4.0 * qa * qc;
        if qa == 0.0 || disc < 0.0 {
            return false;
        }
        [-1.0, 1.0].into_iter().any(|sign| {
            let t = (-qb + sign * disc.sqrt()) / (2.0 * qa);
            (0.0..=1.0).contains(&t) && (((a + d * t).arg() - self.alpha).rem_euclid(2.0 * PI) <= self.width())
        })
    }
}

/// Image domain `A(r2)` minus slits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlitAnnulus {
    pub r2: f64,
    pub slits: Vec<Slit>,
}

impl SlitAnnulus {
    pub fn connectivity(&self) -> usize {
        self.slits.len() + 2
    }

    /// Checks the structural invariants of a slit annulus.
    pub fn validate(&self) -> Result<()> {
        if !(self.r2 > 0.0 && self.r2 < 1.0) {
            return Err(Error::Internal(format!("inner radius {} outside (0, 1)", self.r2)));
        }
        for (j, s) in self.slits.iter().enumerate() {
            if !(s.radius > self.r2 && s.radius < 1.0) {
                return Err(Error::Internal(format!(
                    "slit {j} radius {} outside ({}, 1)",
                    s.radius, self.r2
                )));
            }
            if !(s.alpha < s.beta && s.beta < s.alpha + 2.0 * PI) {
                return Err(Error::SlitWrap {
                    component: j,
                    range: s.width(),
                });
            }
        }
        Ok(())
    }

    /// Export row: `m, r2, r3, alpha3, beta3, ...`.
    pub fn record(&self) -> Vec<f64> {
        let mut row = vec![self.connectivity() as f64, self.r2];
        for s in &self.slits {
            row.extend([s.radius, s.alpha, s.beta]);
        }
        row
    }
}

/// Reorders components as `[first, second, rest...]`.
fn label_order(m: usize, first: usize, second: usize) -> Vec<usize> {
    let mut labels = vec![first, second];
    labels.extend((0..m).filter(|&i| i != first && i != second));
    labels
}

/// Potential `u = Σ c_j ω_j` vanishing on `labels[0]` with flux `-2π` through
/// `labels[1]` and zero through the others; returns `(c, u, period matrix)`
/// with `c` in label order starting at `labels[1]`.
fn labeled_potential(
    measures: &[HarmonicSolution],
    labels: &[usize],
) -> Result<(Vec<f64>, HarmonicSolution, PeriodMatrix)> {
    let m = labels.len();
    let full: Vec<Vec<f64>> = labels
        .iter()
        .map(|&i| labels.iter().map(|&l| measures[l].flux(i)).collect())
        .collect();
    let period = PeriodMatrix::from_table(full)?;
    let k = m - 1;
    let p = DMatrix::from_fn(k, k, |i, j| period.entries[i][j]);
    let mut rhs = DVector::zeros(k);
    rhs[0] = -2.0 * PI;
    let c = p
        .lu()
        .solve(&rhs)
        .ok_or(Error::SingularPeriodMatrix {
            det: period.determinant,
            condition: period.condition,
        })?;
    let coefficients: Vec<f64> = c.iter().copied().collect();
    let terms: Vec<(f64, &HarmonicSolution)> = coefficients
        .iter()
        .zip(&labels[1..])
        .map(|(&c, &l)| (c, &measures[l]))
        .collect();
    let u = HarmonicSolution::combine(&terms)?;
    for (pos, &i) in labels.iter().enumerate() {
        let target = match pos {
            0 => 2.0 * PI,
            1 => -2.0 * PI,
            _ => 0.0,
        };
        let got = u.flux(i);
        if (got - target).abs() > 1e-8 {
            return Err(Error::Normalization(format!(
                "flux through component {i} is {got:.12} instead of {target:.12}"
            )));
        }
    }
    let (cmin, cmax) = coefficients
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &c| (a.min(c), b.max(c)));
    if !(cmax < 0.0) || cmin != coefficients[0] {
        return Err(Error::Normalization(format!(
            "boundary levels {coefficients:?} do not have their maximum 0 on the first \
             component and minimum on the second"
        )));
    }
    Ok((coefficients, u, period))
}

fn measures_of(d: &Arc<MultiplyConnectedDomain>) -> Result<Vec<HarmonicSolution>> {
    let solver = DirichletSolver::new(Arc::clone(d), SolverOptions::default())?;
    (0..d.connectivity())
        .map(|i| solver.solve(&BoundaryData::indicator(d, i)))
        .collect()
}

/// Coefficients `c_2..c_m` and the potential `u = Σ c_i ω_i` for the
/// component order of `d` (outer curve first, then holes).
pub fn koebe_coefficients(d: &Arc<MultiplyConnectedDomain>) -> Result<(Vec<f64>, HarmonicSolution)> {
    if d.connectivity() < 2 {
        return Err(Error::Input("canonical map needs connectivity >= 2".into()));
    }
    let measures = measures_of(d)?;
    let labels = label_order(d.connectivity(), 0, 1);
    let (c, u, _) = labeled_potential(&measures, &labels)?;
    Ok((c, u))
}

/// Increment of `Im log`-type continuation of `u + iv` once around
/// component `k`, computed node by node.
fn continuation_increment(u: &HarmonicSolution, k: usize) -> f64 {
    let curve = u.domain().component(k);
    let nodes = curve.nodes();
    let g = u.analytic_boundary(k);
    let n = nodes.len();
    let mut total = 0.0;
    for i in 0..n {
        let j = (i + 1) % n;
        total += g[j].im - g[i].im;
        for s in u.sources() {
            total += s.strength * ((nodes[j] - s.anchor) / (nodes[i] - s.anchor)).arg();
        }
    }
    total
}

fn leak(increment: f64) -> f64 {
    (Complex64::from_polar(1.0, increment) - 1.0).norm()
}

/// Conjugate `v` of a harmonic function, normalized by `v(a1) = 0` and
/// reported modulo `2π`.
#[derive(Debug, Clone)]
pub struct HarmonicConjugate {
    u: HarmonicSolution,
    base: f64,
    leaks: Vec<f64>,
}

fn raw_conjugate(u: &HarmonicSolution, z: Complex64) -> f64 {
    u.analytic_at(z).im + u.sources().iter().map(|s| s.strength * (z - s.anchor).arg()).sum::<f64>()
}

fn boundary_conjugate(u: &HarmonicSolution, component: usize, z: Complex64) -> f64 {
    let curve = u.domain().component(component);
    let t = curve.parameter_of(z);
    let g = TrigInterpolant::new(u.analytic_boundary(component)).eval(t);
    let w = curve.interpolant().eval(t);
    g.im + u.sources().iter().map(|s| s.strength * (w - s.anchor).arg()).sum::<f64>()
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Builds the conjugate of `u` with base point `a1`, which may lie on the
/// boundary. Fails if continuation around some hole does not return to its
/// starting value modulo `2π`.
pub fn harmonic_conjugate_data(u: &HarmonicSolution, a1: Complex64) -> Result<HarmonicConjugate> {
    let d = u.domain();
    let leaks: Vec<f64> = (1..d.connectivity())
        .map(|k| leak(continuation_increment(u, k)))
        .collect();
    if let Some((k, &l)) = leaks
        .iter()
        .enumerate()
        .find(|(_, &l)| l > LEAK_TOL)
    {
        return Err(Error::PeriodLeak {
            component: k + 1,
            leak: l,
        });
    }
    let base = match d.component_of(a1, d.resolution()) {
        Some(i) => boundary_conjugate(u, i, a1),
        None => match d.contains(a1)? {
            true => raw_conjugate(u, a1),
            false => return Err(Error::OutsideDomain { re: a1.re, im: a1.im }),
        },
    };
    Ok(HarmonicConjugate {
        u: u.clone(),
        base,
        leaks,
    })
}

impl HarmonicConjugate {
    /// `v(z)` in `(-π, π]`.
    pub fn eval(&self, z: Complex64) -> Result<f64> {
        match self.u.domain().contains(z)? {
            true => Ok(wrap(raw_conjugate(&self.u, z) - self.base)),
            false => Err(Error::OutsideDomain { re: z.re, im: z.im }),
        }
    }

    /// `|e^{i Δv} - 1|` for the continuation around each hole.
    pub fn leaks(&self) -> &[f64] {
        &self.leaks
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapDiagnostics {
    /// Largest standard deviation of `|K|` over the nodes of one component.
    pub modulus_spread: f64,
    /// Largest distance of a source strength from its integer value.
    pub period_leak: f64,
    pub condition: f64,
    pub linear_residual: f64,
    pub resolution: f64,
    /// Smallest and largest argument-principle count over the probe images.
    pub winding_min: i64,
    pub winding_max: i64,
}

/// Canonical slit-annulus map of a domain with two marked boundary points.
#[derive(Debug, Clone)]
pub struct CanonicalMap {
    domain: Arc<MultiplyConnectedDomain>,
    labels: Vec<usize>,
    coefficients: Vec<f64>,
    potential: HarmonicSolution,
    period: PeriodMatrix,
    /// `K` at every node, flattened in component order.
    boundary: Vec<Complex64>,
    a1: Complex64,
    a2: Complex64,
    moduli: SlitAnnulus,
    seeds: Vec<(Complex64, Complex64)>,
    diagnostics: MapDiagnostics,
}

/// Component of `d` carrying the marking `a`.
pub fn marked_component(d: &MultiplyConnectedDomain, a: Complex64) -> Result<usize> {
    let (i, distance) = d.boundary_distance(a);
    if distance <= d.resolution() {
        Ok(i)
    } else {
        Err(Error::Marking {
            component: i,
            re: a.re,
            im: a.im,
            distance,
        })
    }
}

/// Canonical map with `a1` on `γ_1` and `a2` on `γ_2`; the components are
/// read off the markings, so either may be a hole.
pub fn canonical_map(
    d: &Arc<MultiplyConnectedDomain>,
    a1: Complex64,
    a2: Complex64,
) -> Result<CanonicalMap> {
    let i1 = marked_component(d, a1)?;
    let i2 = marked_component(d, a2)?;
    CanonicalMap::build(d, (i1, a1), (i2, a2))
}

/// Canonical map with the markings required to lie on the given components.
pub fn canonical_map_on(
    d: &Arc<MultiplyConnectedDomain>,
    first: (usize, Complex64),
    second: (usize, Complex64),
) -> Result<CanonicalMap> {
    for &(i, a) in [&first, &second] {
        if i >= d.connectivity() {
            return Err(Error::Input(format!("component {i} out of range")));
        }
        let distance = d.component(i).distance_to(a);
        if distance > d.resolution() {
            return Err(Error::Marking {
                component: i,
                re: a.re,
                im: a.im,
                distance,
            });
        }
    }
    CanonicalMap::build(d, first, second)
}

fn std_dev(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    (values.map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Continuous branch of `arg` along a closed sequence.
fn unwrapped_arg(w: &[Complex64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(w.len());
    let mut acc = w[0].arg();
    out.push(acc);
    for k in 1..w.len() {
        acc += (w[k] / w[k - 1]).arg();
        out.push(acc);
    }
    out
}

/// Refines an extremum of a periodic interpolant by Newton on its derivative.
fn refine_extremum(p: &TrigInterpolant, t0: f64, step: f64) -> f64 {
    let mut t = t0;
    for _ in 0..30 {
        let [_, d1, d2] = p.eval_with_derivatives(t);
        if d2.re == 0.0 {
            break;
        }
        let dt = (d1.re / d2.re).clamp(-step, step);
        t -= dt;
        if dt.abs() < 1e-15 {
            break;
        }
    }
    if (t - t0).abs() > 2.0 * step {
        t0
    } else {
        t
    }
}

impl CanonicalMap {
    fn build(
        d: &Arc<MultiplyConnectedDomain>,
        (i1, a1): (usize, Complex64),
        (i2, a2): (usize, Complex64),
    ) -> Result<Self> {
        let m = d.connectivity();
        if m < 2 {
            return Err(Error::Input("canonical map needs connectivity >= 2".into()));
        }
        if i1 == i2 {
            return Err(Error::SameComponent(i1));
        }
        let measures = measures_of(d)?;
        let labels = label_order(m, i1, i2);
        let (coefficients, potential, period) = labeled_potential(&measures, &labels)?;

        let mut exponents = Vec::with_capacity(m - 1);
        let mut worst_leak = 0.0f64;
        for (k, s) in potential.sources().iter().enumerate() {
            let n = s.strength.round();
            let gap = (s.strength - n).abs();
            let continued = leak(continuation_increment(&potential, k + 1));
            worst_leak = worst_leak.max(gap);
            if gap > LEAK_TOL || continued > LEAK_TOL {
                return Err(Error::PeriodLeak {
                    component: k + 1,
                    leak: gap.max(continued),
                });
            }
            exponents.push(n as i32);
        }

        let offsets = d.offsets();
        let sources = potential.sources().to_vec();
        let raw: Vec<Complex64> = d
            .components()
            .iter()
            .flat_map(|c| c.nodes().iter().copied())
            .zip(potential.analytic_all())
            .map(|(z, g)| {
                sources
                    .iter()
                    .zip(&exponents)
                    .fold(g.exp(), |acc, (s, &n)| acc * (z - s.anchor).powi(n))
            })
            .collect();

        let curve1 = d.component(i1);
        let t1 = curve1.parameter_of(a1);
        let k_a1 = TrigInterpolant::new(&raw[offsets[i1]..offsets[i1 + 1]]).eval(t1);
        let phase = k_a1.conj() / k_a1.norm();
        let boundary: Vec<Complex64> = raw.iter().map(|w| w * phase).collect();

        let comp_values = |i: usize| &boundary[offsets[i]..offsets[i + 1]];
        let modulus_spread = (0..m)
            .map(|i| std_dev(comp_values(i).iter().map(|w| w.norm())))
            .fold(0.0, f64::max);
        let mean_modulus =
            |i: usize| comp_values(i).iter().map(|w| w.norm()).sum::<f64>() / d.component(i).len() as f64;
        let r2 = mean_modulus(i2);

        let mut slits = Vec::with_capacity(m - 2);
        for &j in &labels[2..] {
            let curve = d.component(j);
            let w = comp_values(j);
            let mut v = unwrapped_arg(w);
            let n = v.len();
            let closing = v[n - 1] + (w[0] / w[n - 1]).arg() - v[0];
            let (vmin, vmax) = v
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
            if closing.abs() > PI || vmax - vmin >= 2.0 * PI {
                return Err(Error::SlitWrap {
                    component: j,
                    range: (vmax - vmin).max(closing.abs()),
                });
            }
            let shift = v[0];
            v.iter_mut().for_each(|x| *x -= shift);
            let p = TrigInterpolant::from_real(&v);
            let kmin = (0..n).min_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap_or(0);
            let kmax = (0..n).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap_or(0);
            let h = curve.step();
            let tmin = refine_extremum(&p, kmin as f64 * h, h);
            let tmax = refine_extremum(&p, kmax as f64 * h, h);
            let lo = p.eval(tmin).re.min(v[kmin]) + shift;
            let hi = p.eval(tmax).re.max(v[kmax]) + shift;
            let alpha = wrap(lo);
            slits.push(Slit {
                radius: mean_modulus(j),
                alpha,
                beta: alpha + (hi - lo),
            });
        }
        let moduli = SlitAnnulus { r2, slits };
        moduli.validate()?;

        let diag = potential.diagnostics();
        let mut map = Self {
            domain: Arc::clone(d),
            labels,
            coefficients,
            potential,
            period,
            boundary,
            a1,
            a2,
            moduli,
            seeds: Vec::new(),
            diagnostics: MapDiagnostics {
                modulus_spread,
                period_leak: worst_leak,
                condition: diag.condition,
                linear_residual: diag.linear_residual,
                resolution: diag.resolution,
                winding_min: 1,
                winding_max: 1,
            },
        };
        map.seeds = map.seed_table();
        let (wmin, wmax) = map.injectivity_counts(20);
        map.diagnostics.winding_min = wmin;
        map.diagnostics.winding_max = wmax;
        if wmin != 1 || wmax != 1 {
            return Err(Error::Internal(format!(
                "argument principle counts {wmin}..{wmax} preimages; the map is not injective"
            )));
        }
        Ok(map)
    }

    fn seed_table(&self) -> Vec<(Complex64, Complex64)> {
        let d = &self.domain;
        let mut pts = d.interior_grid(64, 2.0);
        let res = d.resolution();
        for c in d.components() {
            for (k, (z, dz)) in c.nodes().iter().zip(c.tangent()).enumerate() {
                if k % 2 == 1 {
                    continue;
                }
                let inward = Complex64::i() * dz / dz.norm();
                for depth in [2.0, 5.0, 12.0] {
                    let p = z + inward * (depth * res);
                    if d.contains_unchecked(p) && d.boundary_distance(p).1 > res {
                        pts.push(p);
                    }
                }
            }
        }
        pts.into_iter().map(|z| (z, self.eval_unchecked(z))).collect()
    }

    /// Number of preimages of `K(z)` for `count` interior probes, from the
    /// total winding of the boundary image.
    fn injectivity_counts(&self, count: usize) -> (i64, i64) {
        let d = &self.domain;
        let offsets = d.offsets();
        let grid = d.interior_grid(12, 4.0);
        let stride = (grid.len() / count).max(1);
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for z in grid.iter().step_by(stride).take(count) {
            let w = self.eval_unchecked(*z);
            let total: i64 = (0..d.connectivity())
                .map(|i| crate::geometry::winding_number(&self.boundary[offsets[i]..offsets[i + 1]], w))
                .sum();
            lo = lo.min(total);
            hi = hi.max(total);
        }
        (lo, hi)
    }

    pub fn domain(&self) -> &Arc<MultiplyConnectedDomain> {
        &self.domain
    }

    /// Component indices in label order `γ_1, γ_2, γ_3, ...`.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// `c_2..c_m` in label order.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn potential(&self) -> &HarmonicSolution {
        &self.potential
    }

    pub fn period_matrix(&self) -> &PeriodMatrix {
        &self.period
    }

    pub fn markings(&self) -> (Complex64, Complex64) {
        (self.a1, self.a2)
    }

    pub fn moduli(&self) -> &SlitAnnulus {
        &self.moduli
    }

    pub fn diagnostics(&self) -> MapDiagnostics {
        self.diagnostics
    }

    /// Values of `K` at the nodes of component `i`.
    pub fn boundary_values(&self, i: usize) -> &[Complex64] {
        let offsets = self.domain.offsets();
        &self.boundary[offsets[i]..offsets[i + 1]]
    }

    /// Nodes of slit component `label` (>= 2) where `v` is smallest and largest.
    pub fn slit_endpoint_nodes(&self, label: usize) -> Option<(Complex64, Complex64)> {
        let j = *self.labels.get(label).filter(|_| label >= 2)?;
        let w = self.boundary_values(j);
        let v = unwrapped_arg(w);
        let nodes = self.domain.component(j).nodes();
        let kmin = (0..v.len()).min_by(|&a, &b| v[a].total_cmp(&v[b]))?;
        let kmax = (0..v.len()).max_by(|&a, &b| v[a].total_cmp(&v[b]))?;
        Some((nodes[kmin], nodes[kmax]))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        dirichlet::cauchy_interior(&self.domain, &self.boundary, z).0
    }

    fn eval_with_derivative_unchecked(&self, z: Complex64) -> (Complex64, Complex64) {
        dirichlet::cauchy_interior_with_derivative(&self.domain, &self.boundary, z)
    }

    /// `K(z)` for interior `z`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self.domain.contains(z)? {
            true => Ok(self.eval_unchecked(z)),
            false => Err(Error::OutsideDomain { re: z.re, im: z.im }),
        }
    }

    /// `K'(z)` for interior `z`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        match self.domain.contains(z)? {
            true => Ok(self.eval_with_derivative_unchecked(z).1),
            false => Err(Error::OutsideDomain { re: z.re, im: z.im }),
        }
    }

    /// `v(z) = arg K(z)`, normalized by `v(a1) = 0`.
    pub fn conjugate(&self, z: Complex64) -> Result<f64> {
        Ok(self.eval(z)?.arg())
    }

    /// Preimage of `w` by Newton's method from the nearest tabulated image.
    pub fn invert(&self, w: Complex64) -> Result<Complex64> {
        let fail = |reason: &str| Error::Inversion {
            re: w.re,
            im: w.im,
            reason: reason.to_string(),
        };
        let radius = w.norm();
        if !(radius < 1.0 && radius > self.moduli.r2) {
            return Err(fail("outside the image annulus"));
        }
        if self.moduli.slits.iter().any(|s| s.near(w, 1e-12)) {
            return Err(fail("on a slit"));
        }
        let mut ranked: Vec<&(Complex64, Complex64)> = self.seeds.iter().collect();
        ranked.sort_by(|a, b| (a.1 - w).norm().total_cmp(&(b.1 - w).norm()));
        ranked.sort_by_key(|s| self.moduli.slits.iter().any(|slit| slit.crosses(s.1, w)));
        for seed in ranked.iter().take(4) {
            if let Some(z) = self.newton(seed.0, w) {
                return Ok(z);
            }
        }
        for seed in ranked.iter().take(4) {
            if let Some(z) = self.continuation(seed.0, seed.1, w) {
                return Ok(z);
            }
        }
        Err(fail("Newton iteration did not converge; w is too close to the boundary or a slit"))
    }

    /// Tracks the preimage along the segment from `w0 = K(z0)` to `w`,
    /// halving the step where Newton stalls.
    fn continuation(&self, z0: Complex64, w0: Complex64, w: Complex64) -> Option<Complex64> {
        let (mut z, mut t, mut dt) = (z0, 0.0f64, 0.125f64);
        while t < 1.0 {
            let next = (t + dt).min(1.0);
            match self.newton(z, w0 + (w - w0) * next) {
                Some(zn) => {
                    z = zn;
                    t = next;
                    dt = (2.0 * dt).min(0.25);
                }
                None if dt > 1.0 / 4096.0 => dt *= 0.5,
                None => return None,
            }
        }
        Some(z)
    }

    fn newton(&self, z0: Complex64, w: Complex64) -> Option<Complex64> {
        let d = &self.domain;
        let mut z = z0;
        let (mut f, mut df) = self.eval_with_derivative_unchecked(z);
        for _ in 0..MAX_NEWTON_STEPS {
            let r = f - w;
            if r.norm() < INVERSION_TOL {
                return Some(z);
            }
            if df.norm() == 0.0 || !df.re.is_finite() {
                return None;
            }
            let mut step = r / df;
            let mut accepted = false;
            for _ in 0..30 {
                let trial = z - step;
                if d.contains_unchecked(trial) {
                    let (ft, dft) = self.eval_with_derivative_unchecked(trial);
                    if (ft - w).norm() < r.norm() || step.norm() < 1e-14 {
                        z = trial;
                        f = ft;
                        df = dft;
                        accepted = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !accepted {
                return None;
            }
        }
        ((f - w).norm() < INVERSION_TOL).then_some(z)
    }
}

/// How a conformal map between two domains was pinned down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alignment {
    /// `μ = 1`: the first markings correspond.
    Marking,
    /// `μ` rotates the slits of the source onto those of the target.
    Slits,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiholomorphismDiagnostics {
    /// Sup over an interior grid of `|K̃(F(z)) - μ K(z)|`.
    pub sup_mismatch: f64,
    /// Largest relative moduli difference after alignment.
    pub moduli_gap: f64,
    pub alignment: Alignment,
}

/// `F = K̃⁻¹ ∘ (μ K)` from the source domain onto the target domain.
#[derive(Debug, Clone)]
pub struct Biholomorphism {
    source: Arc<CanonicalMap>,
    target: Arc<CanonicalMap>,
    mu: Complex64,
    permutation: Vec<usize>,
    diagnostics: BiholomorphismDiagnostics,
}

fn angle_gap(a: f64, b: f64) -> f64 {
    wrap(a - b).abs()
}

/// Pairs source slits with target slits after rotating the source by
/// `theta`; returns the target index for each source slit and the largest
/// relative mismatch.
fn match_slits(src: &SlitAnnulus, dst: &SlitAnnulus, theta: f64, tol: f64) -> Option<(Vec<usize>, f64)> {
    let mut used = vec![false; dst.slits.len()];
    let mut assignment = Vec::with_capacity(src.slits.len());
    let mut worst = 0.0f64;
    for s in &src.slits {
        let mut best: Option<(usize, f64)> = None;
        for (j, t) in dst.slits.iter().enumerate() {
            if used[j] {
                continue;
            }
            let gap = ((s.radius - t.radius).abs() / t.radius)
                .max(angle_gap(s.alpha + theta, t.alpha) / (2.0 * PI))
                .max(angle_gap(s.beta + theta, t.beta) / (2.0 * PI))
                .max((s.width() - t.width()).abs() / t.width().max(1e-300));
            if gap <= tol && best.is_none_or(|b| gap < b.1) {
                best = Some((j, gap));
            }
        }
        let (j, gap) = best?;
        used[j] = true;
        assignment.push(j);
        worst = worst.max(gap);
    }
    Some((assignment, worst))
}

/// Biholomorphism between two domains with markings `(a1, a2)` and
/// `(ã1, ã2)`; `tol` is the relative moduli-match tolerance.
pub fn map_between(
    d: &Arc<MultiplyConnectedDomain>,
    marks: (Complex64, Complex64),
    dt: &Arc<MultiplyConnectedDomain>,
    marks_t: (Complex64, Complex64),
    tol: f64,
) -> Result<Biholomorphism> {
    let k = Arc::new(canonical_map(d, marks.0, marks.1)?);
    let kt = Arc::new(canonical_map(dt, marks_t.0, marks_t.1)?);
    Biholomorphism::from_maps(k, kt, tol)
}

impl Biholomorphism {
    pub fn from_maps(source: Arc<CanonicalMap>, target: Arc<CanonicalMap>, tol: f64) -> Result<Self> {
        let (ms, mt) = (source.moduli(), target.moduli());
        if ms.connectivity() != mt.connectivity() {
            return Err(Error::NotEquivalent(format!(
                "connectivities {} and {} differ",
                ms.connectivity(),
                mt.connectivity()
            )));
        }
        let r2_gap = (ms.r2 - mt.r2).abs() / mt.r2;
        if r2_gap > tol {
            return Err(Error::NotEquivalent(format!(
                "inner radii {:.12} and {:.12} differ by {:.3e} relative",
                ms.r2, mt.r2, r2_gap
            )));
        }
        let mut candidates = vec![(0.0, Alignment::Marking)];
        if let Some(first) = ms.slits.first() {
            candidates.extend(mt.slits.iter().map(|t| (t.alpha - first.alpha, Alignment::Slits)));
        }
        let (theta, alignment, assignment, gap) = candidates
            .into_iter()
            .find_map(|(theta, al)| match_slits(ms, mt, theta, tol).map(|(a, g)| (theta, al, a, g)))
            .ok_or_else(|| {
                Error::NotEquivalent(format!(
                    "no rotation matches the slits {:?} onto {:?}",
                    ms.slits, mt.slits
                ))
            })?;
        let m = source.domain().connectivity();
        let mut permutation = vec![0; m];
        let (ls, lt) = (source.labels(), target.labels());
        permutation[ls[0]] = lt[0];
        permutation[ls[1]] = lt[1];
        for (s, &t) in assignment.iter().enumerate() {
            permutation[ls[s + 2]] = lt[t + 2];
        }
        let mut f = Self {
            source,
            target,
            mu: Complex64::from_polar(1.0, theta),
            permutation,
            diagnostics: BiholomorphismDiagnostics {
                sup_mismatch: 0.0,
                moduli_gap: gap.max(r2_gap),
                alignment,
            },
        };
        let grid = f.source.domain().interior_grid(10, 4.0);
        let mut sup = 0.0f64;
        for z in grid {
            let w = f.mu * f.source.eval_unchecked(z);
            let fz = f.target.invert(w)?;
            sup = sup.max((f.target.eval_unchecked(fz) - w).norm());
        }
        f.diagnostics.sup_mismatch = sup;
        Ok(f)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let w = self.mu * self.source.eval(z)?;
        self.target.invert(w)
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    /// `permutation[i]`: target component met by source component `i`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn source(&self) -> &Arc<CanonicalMap> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CanonicalMap> {
        &self.target
    }

    pub fn diagnostics(&self) -> BiholomorphismDiagnostics {
        self.diagnostics
    }
}
