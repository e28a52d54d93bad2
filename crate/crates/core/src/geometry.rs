//! Extended-plane points, circles, sampled Jordan curves and the
//! multiply connected domains they bound.

use crate::error::{Error, Result};
use crate::spectral::{self, TrigInterpolant};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtendedPoint {
    Finite(Complex64),
    Infinity,
}

impl ExtendedPoint {
    /// Wraps a complex number; non-finite input becomes the point at infinity.
    pub fn new(z: Complex64) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            ExtendedPoint::Finite(z)
        } else {
            ExtendedPoint::Infinity
        }
    }

    pub fn real(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedPoint::Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            ExtendedPoint::Finite(z) => Some(z),
            ExtendedPoint::Infinity => None,
        }
    }

    /// The image under `z -> 1/z`.
    pub fn reciprocal(&self) -> Self {
        match *self {
            ExtendedPoint::Infinity => ExtendedPoint::Finite(Complex64::new(0.0, 0.0)),
            ExtendedPoint::Finite(z) if z == Complex64::new(0.0, 0.0) => ExtendedPoint::Infinity,
            ExtendedPoint::Finite(z) => ExtendedPoint::new(z.inv()),
        }
    }
}

impl From<Complex64> for ExtendedPoint {
    fn from(z: Complex64) -> Self {
        ExtendedPoint::new(z)
    }
}

impl From<f64> for ExtendedPoint {
    fn from(x: f64) -> Self {
        ExtendedPoint::real(x)
    }
}

impl fmt::Display for ExtendedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedPoint::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
            ExtendedPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Chordal distance on the Riemann sphere of diameter 2.
pub fn spherical_distance(z: ExtendedPoint, w: ExtendedPoint) -> f64 {
    match (z, w) {
        (ExtendedPoint::Infinity, ExtendedPoint::Infinity) => 0.0,
        (ExtendedPoint::Finite(z), ExtendedPoint::Infinity)
        | (ExtendedPoint::Infinity, ExtendedPoint::Finite(z)) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
        (ExtendedPoint::Finite(a), ExtendedPoint::Finite(b)) => {
            // inversion is an isometry; use it to keep large moduli well scaled
            let (a, b) = if a.norm() > 1.0 && b.norm() > 1.0 {
                (a.inv(), b.inv())
            } else {
                (a, b)
            };
            2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
        }
    }
}

/// A round circle `S_r(c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidCircle(format!("radius {radius} must be positive")));
        }
        if !(center.re.is_finite() && center.im.is_finite()) {
            return Err(Error::InvalidCircle("center must be finite".into()));
        }
        Ok(Self { center, radius })
    }

    pub fn centered(x: f64, y: f64, radius: f64) -> Result<Self> {
        Self::new(Complex64::new(x, y), radius)
    }

    pub fn point_at(&self, theta: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, theta)
    }

    /// Signed distance from `z` to the circle: negative inside the disk.
    pub fn signed_distance(&self, z: Complex64) -> f64 {
        (z - self.center).norm() - self.radius
    }

    /// Closed disk of `self` lies strictly inside the open disk of `other`.
    pub fn strictly_inside(&self, other: &Circle) -> bool {
        (self.center - other.center).norm() + self.radius < other.radius
    }

    /// Closed disks are disjoint.
    pub fn disjoint_from(&self, other: &Circle) -> bool {
        (self.center - other.center).norm() > self.radius + other.radius
    }
}

/// Circle through `x1 < x2` orthogonal to the real axis.
pub fn perpendicular_circle(x1: f64, x2: f64) -> Result<Circle> {
    if !(x1 < x2) {
        return Err(Error::InvalidInterval { x1, x2 });
    }
    Circle::new(Complex64::new(0.5 * (x1 + x2), 0.0), 0.5 * (x2 - x1))
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let directed = |x: &[Complex64], y: &[Complex64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Positive,
    Negative,
}

/// Closed curve sampled at `N` equispaced parameter values, with the
/// trigonometric interpolant through the nodes as its continuous model.
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    nodes: Vec<Complex64>,
    d1: Vec<Complex64>,
    d2: Vec<Complex64>,
    orientation: Orientation,
    interp: TrigInterpolant,
}

pub const MIN_NODES: usize = 16;

fn segments_cross(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let cross = |a: Complex64, b: Complex64| a.re * b.im - a.im * b.re;
    let d1 = cross(p2 - p1, q1 - p1);
    let d2 = cross(p2 - p1, q2 - p1);
    let d3 = cross(q2 - q1, p1 - q1);
    let d4 = cross(q2 - q1, p2 - q1);
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0) && d1 != 0.0 && d3 != 0.0
}

fn point_segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

fn polygon_signed_area(p: &[Complex64]) -> f64 {
    let n = p.len();
    (0..n)
        .map(|k| {
            let (a, b) = (p[k], p[(k + 1) % n]);
            a.re * b.im - b.re * a.im
        })
        .sum::<f64>()
        * 0.5
}

/// Winding number of a closed polyline about `z`.
pub fn winding_number(poly: &[Complex64], z: Complex64) -> i64 {
    let n = poly.len();
    let total: f64 = (0..n)
        .map(|k| ((poly[(k + 1) % n] - z) / (poly[k] - z)).arg())
        .sum();
    (total / (2.0 * PI)).round() as i64
}

impl BoundaryCurve {
    /// Builds a curve from equispaced samples; the orientation is read off
    /// the signed area of the node polygon.
    pub fn new(nodes: Vec<Complex64>) -> Result<Self> {
        let n = nodes.len();
        if n < MIN_NODES || n % 2 != 0 {
            return Err(Error::InvalidCurve(format!(
                "N = {n} nodes; need an even number >= {MIN_NODES}"
            )));
        }
        if nodes.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidCurve("non-finite node".into()));
        }
        let interp = TrigInterpolant::new(&nodes);
        let fine = interp.upsample(4);
        let m = fine.len();
        for i in 0..m {
            let (p1, p2) = (fine[i], fine[(i + 1) % m]);
            for j in (i + 2)..m {
                if i == 0 && j == m - 1 {
                    continue;
                }
                let (q1, q2) = (fine[j], fine[(j + 1) % m]);
                if segments_cross(p1, p2, q1, q2) {
                    return Err(Error::InvalidCurve(format!(
                        "interpolant self-intersects near nodes {} and {}",
                        i / 4,
                        j / 4
                    )));
                }
            }
        }
        let area = polygon_signed_area(&fine);
        if area == 0.0 {
            return Err(Error::InvalidCurve("zero enclosed area".into()));
        }
        let orientation = if area > 0.0 {
            Orientation::Positive
        } else {
            Orientation::Negative
        };
        let d1 = spectral::derivative(&nodes, 1);
        let d2 = spectral::derivative(&nodes, 2);
        Ok(Self {
            nodes,
            d1,
            d2,
            orientation,
            interp,
        })
    }

    /// Same point set traversed the other way, keeping node 0 in place.
    pub fn reversed(&self) -> Self {
        let n = self.nodes.len();
        let nodes: Vec<Complex64> = (0..n).map(|k| self.nodes[(n - k) % n]).collect();
        let d1 = spectral::derivative(&nodes, 1);
        let d2 = spectral::derivative(&nodes, 2);
        Self {
            interp: TrigInterpolant::new(&nodes),
            nodes,
            d1,
            d2,
            orientation: match self.orientation {
                Orientation::Positive => Orientation::Negative,
                Orientation::Negative => Orientation::Positive,
            },
        }
    }

    fn with_orientation(self, o: Orientation) -> Self {
        if self.orientation == o {
            self
        } else {
            self.reversed()
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    /// `dz/dt` at the nodes.
    pub fn tangent(&self) -> &[Complex64] {
        &self.d1
    }

    /// `d^2z/dt^2` at the nodes.
    pub fn acceleration(&self) -> &[Complex64] {
        &self.d2
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn interpolant(&self) -> &TrigInterpolant {
        &self.interp
    }

    /// Parameter step `2*pi/N`.
    pub fn step(&self) -> f64 {
        2.0 * PI / self.nodes.len() as f64
    }

    pub fn max_speed(&self) -> f64 {
        self.d1.iter().map(|d| d.norm()).fold(0.0, f64::max)
    }

    /// Spacing below which membership and evaluation are not meaningful.
    pub fn resolution(&self) -> f64 {
        self.step() * self.max_speed()
    }

    pub fn length(&self) -> f64 {
        self.d1.iter().map(|d| d.norm()).sum::<f64>() * self.step()
    }

    pub fn centroid(&self) -> Complex64 {
        self.nodes.iter().sum::<Complex64>() / self.nodes.len() as f64
    }

    /// Distance from `z` to the node polyline.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        let n = self.nodes.len();
        (0..n)
            .map(|k| point_segment_distance(z, self.nodes[k], self.nodes[(k + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn winding_about(&self, z: Complex64) -> i64 {
        winding_number(&self.nodes, z)
    }

    /// Parameter of the point of the interpolant closest to `z`, refined by
    /// Newton's method from the nearest node.
    pub fn parameter_of(&self, z: Complex64) -> f64 {
        let n = self.nodes.len();
        let k0 = (0..n)
            .min_by(|&a, &b| {
                (self.nodes[a] - z)
                    .norm()
                    .partial_cmp(&(self.nodes[b] - z).norm())
                    .unwrap()
            })
            .unwrap_or(0);
        let mut t = spectral::node_parameter(k0, n);
        for _ in 0..30 {
            let [w, dw, ddw] = self.interp.eval_with_derivatives(t);
            // minimize |w(t) - z|^2
            let g = ((w - z).conj() * dw).re;
            let h = dw.norm_sqr() + ((w - z).conj() * ddw).re;
            if h <= 0.0 {
                break;
            }
            let step = (g / h).clamp(-self.step(), self.step());
            t -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        t.rem_euclid(2.0 * PI)
    }

    /// Polyline distance from this curve to another.
    pub fn distance_to_curve(&self, other: &BoundaryCurve) -> f64 {
        self.nodes
            .iter()
            .map(|&z| other.distance_to(z))
            .fold(f64::INFINITY, f64::min)
            .min(
                other
                    .nodes
                    .iter()
                    .map(|&z| self.distance_to(z))
                    .fold(f64::INFINITY, f64::min),
            )
    }
}

/// Bounded domain with one outer curve and `m - 1` holes.
///
/// Component 0 is the outer curve (positively oriented); components
/// `1..m` are the holes, oriented negatively so the domain lies on the left
/// of every boundary curve.
#[derive(Debug, Clone)]
pub struct MultiplyConnectedDomain {
    components: Vec<BoundaryCurve>,
}

impl MultiplyConnectedDomain {
    pub fn new(outer: BoundaryCurve, holes: Vec<BoundaryCurve>) -> Result<Self> {
        let mut components = Vec::with_capacity(holes.len() + 1);
        components.push(outer.with_orientation(Orientation::Positive));
        components.extend(holes.into_iter().map(|h| h.with_orientation(Orientation::Negative)));
        for (k, hole) in components.iter().enumerate().skip(1) {
            let probe = hole.nodes()[0];
            if components[0].winding_about(probe) != 1 {
                return Err(Error::InvalidDomain(format!(
                    "hole {k} does not lie inside the outer curve"
                )));
            }
        }
        for i in 0..components.len() {
            for j in (i + 1)..components.len() {
                let d = components[i].distance_to_curve(&components[j]);
                if !(d > 0.0) {
                    return Err(Error::InvalidDomain(format!(
                        "components {i} and {j} are not disjoint"
                    )));
                }
                if i > 0
                    && (components[i].winding_about(components[j].nodes()[0]) != 0
                        || components[j].winding_about(components[i].nodes()[0]) != 0)
                {
                    return Err(Error::InvalidDomain(format!("holes {i} and {j} are nested")));
                }
            }
        }
        Ok(Self { components })
    }

    /// Connectivity `m`.
    pub fn connectivity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[BoundaryCurve] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &BoundaryCurve {
        &self.components[i]
    }

    pub fn outer(&self) -> &BoundaryCurve {
        &self.components[0]
    }

    pub fn holes(&self) -> &[BoundaryCurve] {
        &self.components[1..]
    }

    pub fn total_nodes(&self) -> usize {
        self.components.iter().map(|c| c.len()).sum()
    }

    /// Offsets of each component inside the concatenated node list.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.components.len() + 1);
        let mut acc = 0;
        out.push(0);
        for c in &self.components {
            acc += c.len();
            out.push(acc);
        }
        out
    }

    /// Proximity threshold `2*pi*max|z'|/N` over all components.
    pub fn resolution(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.resolution())
            .fold(0.0, f64::max)
    }

    /// Distance to the nearest boundary polyline and the component it belongs to.
    pub fn boundary_distance(&self, z: Complex64) -> (usize, f64) {
        self.components
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.distance_to(z)))
            .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
    }

    /// Membership test; points closer to the boundary than the sampling
    /// resolution are reported as indeterminate.
    pub fn contains(&self, z: Complex64) -> Result<bool> {
        self.contains_with_margin(z, 1.0)
    }

    pub(crate) fn contains_with_margin(&self, z: Complex64, factor: f64) -> Result<bool> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Ok(false);
        }
        for c in &self.components {
            let resolution = c.resolution() * factor;
            let distance = c.distance_to(z);
            if distance < resolution {
                return Err(Error::BoundaryProximity {
                    re: z.re,
                    im: z.im,
                    distance,
                    resolution,
                });
            }
        }
        Ok(self.contains_unchecked(z))
    }

    /// Winding-number membership without the proximity guard.
    pub fn contains_unchecked(&self, z: Complex64) -> bool {
        self.components[0].winding_about(z) == 1
            && self.components[1..].iter().all(|h| h.winding_about(z) == 0)
    }

    /// Component whose polyline passes within `tol` of `z`.
    pub fn component_of(&self, z: Complex64, tol: f64) -> Option<usize> {
        let (i, d) = self.boundary_distance(z);
        (d <= tol).then_some(i)
    }

    /// Every node of every component.
    pub fn all_nodes(&self) -> Vec<Complex64> {
        self.components
            .iter()
            .flat_map(|c| c.nodes().iter().copied())
            .collect()
    }

    /// Interior points on a rectangular lattice clipped to the domain with
    /// the given multiple of the resolution as margin.
    pub fn interior_grid(&self, per_side: usize, margin: f64) -> Vec<Complex64> {
        let outer = self.outer().nodes();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for z in outer {
            x0 = x0.min(z.re);
            x1 = x1.max(z.re);
            y0 = y0.min(z.im);
            y1 = y1.max(z.im);
        }
        let mut out = Vec::new();
        for i in 0..per_side {
            for j in 0..per_side {
                let x = x0 + (x1 - x0) * (i as f64 + 0.5) / per_side as f64;
                let y = y0 + (y1 - y0) * (j as f64 + 0.5) / per_side as f64;
                let z = Complex64::new(x, y);
                if let Ok(true) = self.contains_with_margin(z, margin) {
                    out.push(z);
                }
            }
        }
        out
    }
}

/// Domain bounded by `m` round circles, one of which encloses the others.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircularDomain {
    circles: Vec<Circle>,
    outer: usize,
}

impl CircularDomain {
    pub fn new(circles: Vec<Circle>, outer: usize) -> Result<Self> {
        if outer >= circles.len() {
            return Err(Error::InvalidDomain(format!(
                "outer index {outer} out of range for {} circles",
                circles.len()
            )));
        }
        for (i, c) in circles.iter().enumerate() {
            Circle::new(c.center, c.radius)?;
            if i != outer && !c.strictly_inside(&circles[outer]) {
                return Err(Error::InvalidDomain(format!(
                    "circle {i} is not strictly inside the outer circle"
                )));
            }
        }
        for i in 0..circles.len() {
            for j in (i + 1)..circles.len() {
                if i != outer && j != outer && !circles[i].disjoint_from(&circles[j]) {
                    return Err(Error::InvalidDomain(format!(
                        "closed disks of circles {i} and {j} intersect"
                    )));
                }
            }
        }
        Ok(Self { circles, outer })
    }

    /// Outer circle followed by the holes.
    pub fn from_outer_and_holes(outer: Circle, holes: Vec<Circle>) -> Result<Self> {
        let mut circles = vec![outer];
        circles.extend(holes);
        Self::new(circles, 0)
    }

    /// `T(mu, a, r)`: the unit disk minus the closed disks `D_mu(0)` and `D_r(a)`.
    pub fn three_connected(mu: f64, a: f64, r: f64) -> Result<Self> {
        Self::from_outer_and_holes(
            Circle::centered(0.0, 0.0, 1.0)?,
            vec![Circle::centered(0.0, 0.0, mu)?, Circle::centered(a, 0.0, r)?],
        )
    }

    pub fn annulus(rho: f64) -> Result<Self> {
        Self::from_outer_and_holes(
            Circle::centered(0.0, 0.0, 1.0)?,
            vec![Circle::centered(0.0, 0.0, rho)?],
        )
    }

    pub fn circles(&self) -> &[Circle] {
        &self.circles
    }

    pub fn outer_index(&self) -> usize {
        self.outer
    }

    pub fn outer(&self) -> &Circle {
        &self.circles[self.outer]
    }

    /// Holes in list order.
    pub fn holes(&self) -> Vec<Circle> {
        self.circles
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.outer)
            .map(|(_, c)| *c)
            .collect()
    }

    /// Circles in component order: outer first, then the holes.
    pub fn ordered(&self) -> Vec<Circle> {
        let mut v = vec![*self.outer()];
        v.extend(self.holes());
        v
    }

    pub fn connectivity(&self) -> usize {
        self.circles.len()
    }

    /// Exact membership for finite points.
    pub fn contains(&self, z: Complex64) -> bool {
        self.circles.iter().enumerate().all(|(i, c)| {
            if i == self.outer {
                c.signed_distance(z) < 0.0
            } else {
                c.signed_distance(z) > 0.0
            }
        })
    }

    /// Signed clearance: positive inside the domain, the distance to the
    /// nearest boundary circle.
    pub fn clearance(&self, z: Complex64) -> f64 {
        self.circles
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == self.outer {
                    -c.signed_distance(z)
                } else {
                    c.signed_distance(z)
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// A point of the domain with clearance close to the largest available
    /// on a coarse search.
    pub fn interior_probe(&self) -> Complex64 {
        let o = self.outer();
        let mut best = (o.center, f64::NEG_INFINITY);
        for i in 1..40 {
            let rr = o.radius * i as f64 / 40.0;
            for k in 0..48 {
                let z = o.center + Complex64::from_polar(rr, 2.0 * PI * (k as f64 + 0.31) / 48.0);
                let c = self.clearance(z);
                if c > best.1 {
                    best = (z, c);
                }
            }
        }
        best.0
    }

    /// Boundary samples: `per_circle` points on every circle.
    pub fn boundary_samples(&self, per_circle: usize) -> Vec<Complex64> {
        self.circles
            .iter()
            .flat_map(|c| (0..per_circle).map(move |k| c.point_at(2.0 * PI * k as f64 / per_circle as f64)))
            .collect()
    }

    /// Samples every circle at `n` equispaced angles starting at angle 0.
    pub fn to_curves(&self, n: usize) -> Result<MultiplyConnectedDomain> {
        circular_to_curves(self, n)
    }
}

/// Samples each circle of a circular domain at `n` equispaced angles; node 0
/// of every component is the point `center + radius`.
pub fn circular_to_curves(c: &CircularDomain, n: usize) -> Result<MultiplyConnectedDomain> {
    if n < MIN_NODES || n % 2 != 0 {
        return Err(Error::InvalidCurve(format!(
            "N = {n} nodes; need an even number >= {MIN_NODES}"
        )));
    }
    let sample = |circle: &Circle, sign: f64| -> Result<BoundaryCurve> {
        let nodes = (0..n)
            .map(|k| circle.point_at(sign * spectral::node_parameter(k, n)))
            .collect();
        BoundaryCurve::new(nodes)
    };
    let outer = sample(c.outer(), 1.0)?;
    let holes = c
        .holes()
        .iter()
        .map(|h| sample(h, -1.0))
        .collect::<Result<Vec<_>>>()?;
    MultiplyConnectedDomain::new(outer, holes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn spherical_distance_examples() {
        let zero = ExtendedPoint::real(0.0);
        assert_eq!(spherical_distance(zero, zero), 0.0);
        assert!((spherical_distance(zero, ExtendedPoint::Infinity) - 2.0).abs() < 1e-15);
        assert!((spherical_distance(1.0.into(), (-1.0).into()) - 2.0).abs() < 1e-15);
        let z = ExtendedPoint::new(c(3.0, 4.0));
        assert!((spherical_distance(z, ExtendedPoint::Infinity) - 2.0 / 26f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn perpendicular_circle_examples() {
        let k = perpendicular_circle(-1.0, 1.0).unwrap();
        assert_eq!((k.center, k.radius), (c(0.0, 0.0), 1.0));
        let k = perpendicular_circle(0.25, 0.75).unwrap();
        assert_eq!((k.center, k.radius), (c(0.5, 0.0), 0.25));
        let k = perpendicular_circle(0.1, 0.4).unwrap();
        assert!((k.center.re - 0.25).abs() < 1e-15 && (k.radius - 0.15).abs() < 1e-15);
        assert!(matches!(perpendicular_circle(0.4, 0.4), Err(Error::InvalidInterval { .. })));
    }

    #[test]
    fn hausdorff_examples() {
        let d = hausdorff_distance(&[c(0.0, 0.0)], &[c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert_eq!(d, 4.0);
        let unit = Circle::centered(0.0, 0.0, 1.0).unwrap();
        let small = Circle::centered(0.0, 0.0, 0.9).unwrap();
        let sa: Vec<_> = (0..512).map(|k| unit.point_at(2.0 * PI * k as f64 / 512.0)).collect();
        let sb: Vec<_> = (0..512).map(|k| small.point_at(2.0 * PI * k as f64 / 512.0)).collect();
        assert_eq!(hausdorff_distance(&sa, &sa).unwrap(), 0.0);
        assert!((hausdorff_distance(&sa, &sb).unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(hausdorff_distance(&[], &sa), Err(Error::EmptySet));
    }

    #[test]
    fn contains_annulus() {
        let d = CircularDomain::annulus(0.25).unwrap().to_curves(256).unwrap();
        assert_eq!(d.contains(c(0.6, 0.0)), Ok(true));
        assert_eq!(d.contains(c(0.1, 0.0)), Ok(false));
        assert_eq!(d.contains(c(2.0, 0.0)), Ok(false));
        assert!(matches!(
            d.contains(c(0.25 + 1e-4, 0.0)),
            Err(Error::BoundaryProximity { .. })
        ));
    }

    #[test]
    fn circular_to_curves_conventions() {
        let d = CircularDomain::annulus(0.25).unwrap().to_curves(64).unwrap();
        assert_eq!(d.outer().nodes()[0], c(1.0, 0.0));
        assert_eq!(d.outer().orientation(), Orientation::Positive);
        assert_eq!(d.component(1).orientation(), Orientation::Negative);
        assert_eq!(d.component(1).nodes()[0], c(0.25, 0.0));
        let t = CircularDomain::three_connected(3.0 / 16.0, 0.5, 0.25).unwrap();
        assert_eq!(t.to_curves(128).unwrap().connectivity(), 3);
        assert!(matches!(
            CircularDomain::annulus(0.25).unwrap().to_curves(10),
            Err(Error::InvalidCurve(_))
        ));
    }

    #[test]
    fn circular_domain_invariants() {
        let outer = Circle::centered(0.0, 0.0, 1.0).unwrap();
        let a = Circle::centered(0.5, 0.0, 0.2).unwrap();
        let b = Circle::centered(0.2, 0.0, 0.2).unwrap();
        assert!(CircularDomain::from_outer_and_holes(outer, vec![a, b]).is_err());
        let big = Circle::centered(0.5, 0.0, 0.6).unwrap();
        assert!(CircularDomain::from_outer_and_holes(outer, vec![big]).is_err());
        assert!(Circle::centered(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn self_intersecting_curve_rejected() {
        // figure-eight: x = sin t, y = sin 2t
        let n = 64;
        let nodes = (0..n)
            .map(|k| {
                let t = spectral::node_parameter(k, n);
                c(t.sin(), (2.0 * t).sin() * 0.5)
            })
            .collect();
        assert!(matches!(BoundaryCurve::new(nodes), Err(Error::InvalidCurve(_))));
    }

    #[test]
    fn interpolant_reproduces_circle() {
        let circle = Circle::centered(0.3, -0.2, 0.7).unwrap();
        let d = CircularDomain::from_outer_and_holes(circle, vec![]).unwrap();
        let curves = d.to_curves(32).unwrap();
        let p = curves.outer().interpolant();
        for k in 0..50 {
            let t = 0.123 + k as f64 * 0.11;
            assert!((p.eval(t) - circle.point_at(t)).norm() < 1e-14);
        }
        let speeds: Vec<f64> = curves.outer().tangent().iter().map(|d| d.norm()).collect();
        assert!(speeds.iter().all(|s| (s - 0.7).abs() < 1e-14));
    }
}
