//! Fractional-linear maps of the Riemann sphere and symmetric points with
//! respect to circles.

use crate::error::{Error, Result};
use crate::geometry::{spherical_distance, Circle, CircularDomain, ExtendedPoint};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Reference points used to compare maps by their action.
const REFERENCE_POINTS: [Complex64; 3] = [
    Complex64::new(0.137, 0.291),
    Complex64::new(-0.613, 0.442),
    Complex64::new(0.389, -0.857),
];

/// Spherical-distance threshold for action equality.
pub const ACTION_TOL: f64 = 1e-9;

/// `z -> (a z + b) / (c z + d)` with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusMap {
    /// Normalizes the coefficients so that the determinant is one.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if !(det.norm() > 1e-300) || !(det.norm() > 1e-28 * scale * scale) {
            return Err(Error::DegenerateConfiguration(
                "Mobius coefficients with vanishing determinant".into(),
            ));
        }
        let k = det.sqrt().inv();
        Ok(Self {
            a: a * k,
            b: b * k,
            c: c * k,
            d: d * k,
        })
    }

    pub fn identity() -> Self {
        Self {
            a: ONE,
            b: ZERO,
            c: ZERO,
            d: ONE,
        }
    }

    /// `z -> mu / z`.
    pub fn involution(mu: f64) -> Self {
        Self::new(ZERO, Complex64::new(mu, 0.0), ONE, ZERO).expect("mu != 0")
    }

    /// `z -> k z + t`.
    pub fn affine(k: Complex64, t: Complex64) -> Result<Self> {
        Self::new(k, t, ZERO, ONE)
    }

    /// Disk automorphism `z -> e^{i theta} (z - p) / (1 - conj(p) z)`, `|p| < 1`.
    pub fn disk_automorphism(p: Complex64, theta: f64) -> Result<Self> {
        if !(p.norm() < 1.0) {
            return Err(Error::OutOfRange(format!("|p| = {} must be < 1", p.norm())));
        }
        let rot = Complex64::from_polar(1.0, theta);
        Self::new(rot, -rot * p, -p.conj(), ONE)
    }

    /// The map sending `0, 1, inf` to `a, b, c`, built from
    /// `q = (b - c)/(b - a)` with the limiting forms when one point is infinite.
    pub fn from_triple(a: ExtendedPoint, b: ExtendedPoint, c: ExtendedPoint) -> Result<Self> {
        let pts = [a, b, c];
        for i in 0..3 {
            for j in (i + 1)..3 {
                if spherical_distance(pts[i], pts[j]) < 1e-14 {
                    return Err(Error::DegenerateTriple(i, j));
                }
            }
        }
        use ExtendedPoint::{Finite, Infinity};
        match (a, b, c) {
            // a = inf: 1/phi = (z - q)/(c z - a q) with a q -> c - b and q -> 0
            (Infinity, Finite(b), Finite(c)) => Self::new(c, b - c, ONE, ZERO),
            // b = inf: q -> 1
            (Finite(a), Infinity, Finite(c)) => Self::new(c, -a, ONE, -ONE),
            // c = inf: phi(z) = (z - a q/c)/(z/c - q/c) with q/c -> 1/(a - b)
            (Finite(a), Finite(b), Infinity) => Self::new(b - a, a, ZERO, ONE),
            (Finite(a), Finite(b), Finite(c)) => {
                let q = (b - c) / (b - a);
                Self::new(c, -a * q, ONE, -q)
            }
            _ => unreachable!("distinctness excludes two infinite points"),
        }
    }

    /// Map sending `p1, p2, p3` to `q1, q2, q3`.
    pub fn from_point_triples(p: [ExtendedPoint; 3], q: [ExtendedPoint; 3]) -> Result<Self> {
        let source = Self::from_triple(p[0], p[1], p[2])?;
        let target = Self::from_triple(q[0], q[1], q[2])?;
        Ok(target.compose(&source.inverse()))
    }

    pub fn apply(&self, z: ExtendedPoint) -> ExtendedPoint {
        match z {
            ExtendedPoint::Infinity => {
                if self.c == ZERO {
                    ExtendedPoint::Infinity
                } else {
                    ExtendedPoint::new(self.a / self.c)
                }
            }
            ExtendedPoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den == ZERO {
                    ExtendedPoint::Infinity
                } else {
                    ExtendedPoint::new((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// Finite evaluation; returns `None` at the pole.
    pub fn apply_finite(&self, z: Complex64) -> Option<Complex64> {
        self.apply(ExtendedPoint::Finite(z)).finite()
    }

    /// Complex derivative `1/(cz + d)^2`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        (den * den).inv()
    }

    /// Preimage of infinity.
    pub fn pole(&self) -> ExtendedPoint {
        if self.c == ZERO {
            ExtendedPoint::Infinity
        } else {
            ExtendedPoint::new(-self.d / self.c)
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let m = Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        };
        // renormalize to keep the determinant at one after rounding
        Self::new(m.a, m.b, m.c, m.d).unwrap_or(m)
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// Images of the three reference points.
    pub fn fingerprint(&self) -> [ExtendedPoint; 3] {
        REFERENCE_POINTS.map(|z| self.apply(ExtendedPoint::Finite(z)))
    }

    /// Largest spherical discrepancy of the two actions on the reference points.
    pub fn action_distance(&self, other: &Self) -> f64 {
        self.fingerprint()
            .iter()
            .zip(other.fingerprint().iter())
            .map(|(&p, &q)| spherical_distance(p, q))
            .fold(0.0, f64::max)
    }

    /// Equality of actions; coefficients are only defined up to sign.
    pub fn same_action(&self, other: &Self) -> bool {
        self.action_distance(other) < ACTION_TOL
    }

    pub fn is_identity(&self) -> bool {
        self.same_action(&Self::identity())
    }

    /// Coefficients scaled so that the first nonzero entry has positive real
    /// part (or is positive imaginary), removing the sign ambiguity.
    pub fn canonical_coefficients(&self) -> [Complex64; 4] {
        let coeffs = [self.a, self.b, self.c, self.d];
        let lead = coeffs.iter().find(|z| z.norm() > 1e-12).copied().unwrap_or(ONE);
        let flip = lead.re < -1e-14 || (lead.re.abs() <= 1e-14 && lead.im < 0.0);
        if flip {
            coeffs.map(|z| -z)
        } else {
            coeffs
        }
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) z + ({}) / ({}) z + ({})", self.a, self.b, self.c, self.d)
    }
}

/// Image of a circle under a Mobius map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleImage {
    Circle(Circle),
    /// Straight line through `point` with unit `direction`.
    Line { point: Complex64, direction: Complex64 },
}

impl CircleImage {
    pub fn circle(&self) -> Option<Circle> {
        match *self {
            CircleImage::Circle(c) => Some(c),
            CircleImage::Line { .. } => None,
        }
    }
}

fn circumcircle(p: Complex64, q: Complex64, r: Complex64) -> Option<Circle> {
    let (b, c) = (q - p, r - p);
    let den = 2.0 * (b.re * c.im - b.im * c.re);
    if den == 0.0 {
        return None;
    }
    let (bb, cc) = (b.norm_sqr(), c.norm_sqr());
    let ux = (c.im * bb - b.im * cc) / den;
    let uy = (b.re * cc - c.re * bb) / den;
    let center = p + Complex64::new(ux, uy);
    Circle::new(center, Complex64::new(ux, uy).norm()).ok()
}

/// Image circle (or line) of `c` under `m`, fitted through three image
/// points and verified on twenty more.
pub fn image_of_circle(m: &MobiusMap, c: &Circle) -> CircleImage {
    let pole = m.pole();
    if let ExtendedPoint::Finite(p) = pole {
        if (c.signed_distance(p)).abs() <= 1e-13 * c.radius.max(1.0) {
            let samples: Vec<Complex64> = [0.3, 2.4]
                .iter()
                .filter_map(|&t| m.apply_finite(c.point_at(t)))
                .collect();
            let dir = samples[1] - samples[0];
            return CircleImage::Line {
                point: samples[0],
                direction: dir / dir.norm(),
            };
        }
    }
    let image = |t: f64| m.apply_finite(c.point_at(t));
    let fit = match (image(0.0), image(2.0 * PI / 3.0), image(4.0 * PI / 3.0)) {
        (Some(p), Some(q), Some(r)) => circumcircle(p, q, r),
        _ => None,
    };
    let residual = |k: &Circle| {
        (0..20)
            .filter_map(|j| image(0.1 + 2.0 * PI * j as f64 / 20.0))
            .map(|w| (k.signed_distance(w)).abs())
            .fold(0.0, f64::max)
            / k.radius.max(1.0)
    };
    match fit {
        Some(k) if residual(&k) <= 1e-10 => CircleImage::Circle(k),
        _ => symmetric_image(m, c),
    }
}

// exact construction: the point symmetric to the pole maps to the image center
fn symmetric_image(m: &MobiusMap, c: &Circle) -> CircleImage {
    let center_pre = symmetric_point(c, m.pole());
    let center = m.apply(center_pre);
    match center {
        ExtendedPoint::Finite(w) => {
            let on = m.apply_finite(c.point_at(0.7)).unwrap_or(w);
            match Circle::new(w, (on - w).norm()) {
                Ok(k) => CircleImage::Circle(k),
                Err(_) => CircleImage::Line {
                    point: w,
                    direction: ONE,
                },
            }
        }
        ExtendedPoint::Infinity => {
            let p = m.apply_finite(c.point_at(0.3)).unwrap_or(ZERO);
            let q = m.apply_finite(c.point_at(2.4)).unwrap_or(ONE);
            let dir = q - p;
            CircleImage::Line {
                point: p,
                direction: dir / dir.norm(),
            }
        }
    }
}

/// Reflection of `z` in the circle: `center + r^2 / conj(z - center)`.
pub fn symmetric_point(c: &Circle, z: ExtendedPoint) -> ExtendedPoint {
    match z {
        ExtendedPoint::Infinity => ExtendedPoint::Finite(c.center),
        ExtendedPoint::Finite(z) => {
            let d = z - c.center;
            if d == ZERO {
                ExtendedPoint::Infinity
            } else {
                ExtendedPoint::new(c.center + c.radius * c.radius / d.conj())
            }
        }
    }
}

/// Unordered pair of points symmetric with respect to two boundary circles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetricPair {
    pub p: ExtendedPoint,
    pub q: ExtendedPoint,
    pub circle_indices: (usize, usize),
}

impl SymmetricPair {
    pub fn points(&self) -> [ExtendedPoint; 2] {
        [self.p, self.q]
    }

    /// Largest spherical residual of the two symmetry relations.
    pub fn residual(&self, c1: &Circle, c2: &Circle) -> f64 {
        [c1, c2]
            .iter()
            .map(|c| spherical_distance(symmetric_point(c, self.p), self.q))
            .fold(0.0, f64::max)
    }
}

/// The pair of points symmetric with respect to both circles; the circles
/// must be disjoint or strictly nested.
pub fn common_symmetric_pair(c1: &Circle, c2: &Circle) -> Result<SymmetricPair> {
    pair_for(c1, c2, (0, 1))
}

fn pair_for(c1: &Circle, c2: &Circle, idx: (usize, usize)) -> Result<SymmetricPair> {
    let offset = c2.center - c1.center;
    let d = offset.norm();
    let (r1, r2) = (c1.radius, c2.radius);
    let disjoint = d > r1 + r2;
    let nested = d < (r1 - r2).abs();
    if !(disjoint || nested) {
        return Err(Error::NoCommonPair(idx.0, idx.1));
    }
    if d <= 1e-15 * r1.max(r2) {
        return Ok(SymmetricPair {
            p: ExtendedPoint::Finite(c1.center),
            q: ExtendedPoint::Infinity,
            circle_indices: idx,
        });
    }
    // along the center line: x y = r1^2 and (x - d)(y - d) = r2^2
    let unit = offset / d;
    let s = (r1 * r1 + d * d - r2 * r2) / d;
    let p = r1 * r1;
    let disc = s * s - 4.0 * p;
    if !(disc > 0.0) {
        return Err(Error::NoCommonPair(idx.0, idx.1));
    }
    let big = 0.5 * (s + s.signum() * disc.sqrt());
    let small = p / big;
    let (x, y) = if small < big { (small, big) } else { (big, small) };
    Ok(SymmetricPair {
        p: ExtendedPoint::new(c1.center + unit * x),
        q: ExtendedPoint::new(c1.center + unit * y),
        circle_indices: idx,
    })
}

/// Index of the complementary component (circle index) containing `z`;
/// the outer circle owns everything outside it, including infinity.
fn complementary_component(d: &CircularDomain, z: ExtendedPoint) -> Option<usize> {
    match z {
        ExtendedPoint::Infinity => Some(d.outer_index()),
        ExtendedPoint::Finite(z) => d.circles().iter().enumerate().position(|(i, c)| {
            if i == d.outer_index() {
                c.signed_distance(z) > 0.0
            } else {
                c.signed_distance(z) < 0.0
            }
        }),
    }
}

/// One symmetric pair per unordered pair of boundary circles.
pub fn symmetric_pairs(d: &CircularDomain) -> Result<Vec<SymmetricPair>> {
    let circles = d.circles();
    let mut out = Vec::new();
    for i in 0..circles.len() {
        for j in (i + 1)..circles.len() {
            let pair = pair_for(&circles[i], &circles[j], (i, j))?;
            let (ci, cj) = (
                complementary_component(d, pair.p),
                complementary_component(d, pair.q),
            );
            let separated = matches!((ci, cj), (Some(a), Some(b)) if (a, b) == (i, j) || (a, b) == (j, i));
            if !separated {
                return Err(Error::DegenerateConfiguration(format!(
                    "symmetric pair of circles {i}, {j} is not separated by them"
                )));
            }
            let res = pair.residual(&circles[i], &circles[j]);
            if res > 1e-10 {
                return Err(Error::DegenerateConfiguration(format!(
                    "symmetric pair of circles {i}, {j} has residual {res:.3e}"
                )));
            }
            out.push(pair);
        }
    }
    let points: Vec<ExtendedPoint> = out.iter().flat_map(|p| p.points()).collect();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if spherical_distance(points[i], points[j]) <= 1e-8 {
                return Err(Error::DegenerateConfiguration(format!(
                    "symmetric points {i} and {j} coincide"
                )));
            }
        }
    }
    Ok(out)
}

/// Image `m(d)` of a circular domain; the pole of `m` must lie outside the
/// closure of `d`. Circles keep their list order.
pub fn push_forward(m: &MobiusMap, d: &CircularDomain) -> Result<CircularDomain> {
    let circles = d.circles();
    let outer = match m.pole() {
        ExtendedPoint::Infinity => d.outer_index(),
        ExtendedPoint::Finite(p) => {
            if d.contains(p) || circles.iter().any(|c| c.signed_distance(p).abs() <= 1e-12 * c.radius) {
                return Err(Error::DegenerateConfiguration(
                    "pole of the map lies in the closure of the domain".into(),
                ));
            }
            if d.outer().signed_distance(p) > 0.0 {
                d.outer_index()
            } else {
                (0..circles.len())
                    .find(|&i| i != d.outer_index() && circles[i].signed_distance(p) < 0.0)
                    .ok_or_else(|| Error::Internal("pole outside every component".into()))?
            }
        }
    };
    let images = circles
        .iter()
        .map(|c| {
            image_of_circle(m, c)
                .circle()
                .ok_or_else(|| Error::Internal("boundary circle mapped onto a line".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    CircularDomain::new(images, outer)
}

/// Near-uniform points on the sphere (Fibonacci lattice), projected to the
/// plane; the north pole is included as infinity.
pub fn sphere_grid(n: usize) -> Vec<ExtendedPoint> {
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut out = vec![ExtendedPoint::Infinity];
    for k in 1..n {
        let zc = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
        let rho = (1.0 - zc * zc).sqrt();
        let phi = golden * k as f64;
        // stereographic projection from the north pole of the unit sphere
        let w = Complex64::from_polar(rho / (1.0 - zc), phi);
        out.push(ExtendedPoint::new(w));
    }
    out
}

/// Largest spherical discrepancy of two maps over a point set.
pub fn uniform_action_distance(m1: &MobiusMap, m2: &MobiusMap, grid: &[ExtendedPoint]) -> f64 {
    grid.iter()
        .map(|&z| spherical_distance(m1.apply(z), m2.apply(z)))
        .fold(0.0, f64::max)
}

/// Uniform sphere-grid errors of `φ` and `φ⁻¹` when the target triple of
/// `φ: source → target` is moved by `scale * directions[i]`, one entry per
/// scale.
pub fn continuity_profile(
    source: [ExtendedPoint; 3],
    target: [Complex64; 3],
    directions: [Complex64; 3],
    scales: &[f64],
    grid: &[ExtendedPoint],
) -> Result<Vec<[f64; 2]>> {
    let exact = MobiusMap::from_point_triples(source, target.map(ExtendedPoint::new))?;
    let exact_inv = exact.inverse();
    scales
        .iter()
        .map(|&s| {
            let moved = [0, 1, 2].map(|i| ExtendedPoint::new(target[i] + directions[i] * s));
            let m = MobiusMap::from_point_triples(source, moved)?;
            Ok([
                uniform_action_distance(&exact, &m, grid),
                uniform_action_distance(&exact_inv, &m.inverse(), grid),
            ])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_forward_tracks_outer_circle() {
        let t = CircularDomain::three_connected(3.0 / 16.0, 0.5, 0.25).unwrap();
        let tau = MobiusMap::involution(3.0 / 16.0);
        let image = push_forward(&tau, &t).unwrap();
        assert_eq!(image.outer_index(), 1);
        assert!((image.outer().radius - 1.0).abs() < 1e-12);
        let m = MobiusMap::disk_automorphism(Complex64::new(0.3, -0.2), 0.7).unwrap();
        let moved = push_forward(&m, &t).unwrap();
        assert_eq!(moved.outer_index(), t.outer_index());
        let probe = t.interior_probe();
        assert!(moved.contains(m.apply_finite(probe).unwrap()));
        let bad = MobiusMap::new(ONE, ZERO, ONE, Complex64::new(-0.9, 0.0)).unwrap();
        assert!(push_forward(&bad, &t).is_err());
    }

    fn ep(x: f64, y: f64) -> ExtendedPoint {
        ExtendedPoint::new(Complex64::new(x, y))
    }

    fn close(p: ExtendedPoint, q: ExtendedPoint) -> bool {
        spherical_distance(p, q) < 1e-12
    }

    #[test]
    fn from_triple_examples() {
        let inf = ExtendedPoint::Infinity;
        let id = MobiusMap::from_triple(ep(0.0, 0.0), ep(1.0, 0.0), inf).unwrap();
        assert!(id.is_identity());
        let flip = MobiusMap::from_triple(ep(1.0, 0.0), ep(0.0, 0.0), inf).unwrap();
        for z in sphere_grid(20) {
            let expect = z.finite().map(|z| ExtendedPoint::new(ONE - z)).unwrap_or(inf);
            assert!(close(flip.apply(z), expect));
        }
        let m = MobiusMap::from_triple(ep(0.0, 0.0), inf, ep(1.0, 0.0)).unwrap();
        assert!(close(m.apply(ep(0.0, 0.0)), ep(0.0, 0.0)));
        assert!(close(m.apply(ep(1.0, 0.0)), inf));
        assert!(close(m.apply(inf), ep(1.0, 0.0)));
        let z = Complex64::new(0.3, 0.8);
        assert!(close(m.apply(z.into()), (z / (z - 1.0)).into()));
        let m = MobiusMap::from_triple(inf, ep(2.0, 1.0), ep(-1.0, 0.5)).unwrap();
        assert!(close(m.apply(ep(0.0, 0.0)), inf));
        assert!(close(m.apply(ep(1.0, 0.0)), ep(2.0, 1.0)));
        assert!(close(m.apply(inf), ep(-1.0, 0.5)));
        assert_eq!(
            MobiusMap::from_triple(ep(1.0, 0.0), ep(1.0, 0.0), inf),
            Err(Error::DegenerateTriple(0, 1))
        );
    }

    #[test]
    fn apply_examples() {
        let tau = MobiusMap::involution(3.0 / 16.0);
        assert!(close(tau.apply(0.25.into()), 0.75.into()));
        assert_eq!(MobiusMap::identity().apply(ExtendedPoint::Infinity), ExtendedPoint::Infinity);
        let inv = MobiusMap::involution(1.0);
        assert_eq!(inv.apply(0.0.into()), ExtendedPoint::Infinity);
    }

    #[test]
    fn inverse_and_compose_examples() {
        let tau = MobiusMap::involution(3.0 / 16.0);
        assert!(tau.inverse().same_action(&tau));
        assert!(tau.compose(&tau).is_identity());
        assert!(MobiusMap::identity().inverse().is_identity());
        let flip = MobiusMap::affine(-ONE, ONE).unwrap();
        assert!(flip.inverse().same_action(&flip));
        assert!(MobiusMap::identity().compose(&flip).same_action(&flip));
        assert!((flip.determinant() - ONE).norm() < 1e-12);
    }

    #[test]
    fn symmetric_point_examples() {
        let unit = Circle::centered(0.0, 0.0, 1.0).unwrap();
        assert!(close(symmetric_point(&unit, 0.5.into()), 2.0.into()));
        let k = Circle::centered(1.0, 0.0, 2.0).unwrap();
        assert_eq!(symmetric_point(&k, 1.0.into()), ExtendedPoint::Infinity);
        assert!(close(symmetric_point(&k, 2.0.into()), 5.0.into()));
        assert!(close(symmetric_point(&k, ExtendedPoint::Infinity), 1.0.into()));
    }

    fn as_sorted_reals(p: &SymmetricPair) -> (f64, f64) {
        let (x, y) = (p.p.finite().unwrap().re, p.q.finite().unwrap().re);
        (x.min(y), x.max(y))
    }

    #[test]
    fn common_pair_examples() {
        let unit = Circle::centered(0.0, 0.0, 1.0).unwrap();
        let mu = Circle::centered(0.0, 0.0, 3.0 / 16.0).unwrap();
        let hole = Circle::centered(0.5, 0.0, 0.25).unwrap();
        let p = common_symmetric_pair(&unit, &mu).unwrap();
        assert_eq!(p.p, 0.0.into());
        assert_eq!(p.q, ExtendedPoint::Infinity);

        let p = common_symmetric_pair(&unit, &hole).unwrap();
        let (x, y) = as_sorted_reals(&p);
        let s = 105f64.sqrt();
        assert!((x - (19.0 - s) / 16.0).abs() < 1e-14);
        assert!((y - (19.0 + s) / 16.0).abs() < 1e-14);
        assert!(p.residual(&unit, &hole) < 1e-10);

        // x y = (3/16)^2 and (x - 1/2)(y - 1/2) = 1/16, solved independently
        let pp = (3.0f64 / 16.0).powi(2);
        let sum = (pp + 0.25 - 0.0625) / 0.5;
        let disc = (sum * sum - 4.0 * pp).sqrt();
        let p = common_symmetric_pair(&mu, &hole).unwrap();
        let (x, y) = as_sorted_reals(&p);
        assert!((x - (sum - disc) / 2.0).abs() < 1e-13);
        assert!((y - (sum + disc) / 2.0).abs() < 1e-13);
        assert!((x - 0.1026).abs() < 1e-4 && (y - 0.3427).abs() < 1e-4);

        let crossing = Circle::centered(0.9, 0.0, 0.3).unwrap();
        assert_eq!(common_symmetric_pair(&unit, &crossing), Err(Error::NoCommonPair(0, 1)));
    }

    #[test]
    fn symmetric_pair_counts() {
        let ann = CircularDomain::annulus(0.3).unwrap();
        assert_eq!(symmetric_pairs(&ann).unwrap().len(), 1);
        let t = CircularDomain::three_connected(3.0 / 16.0, 0.5, 0.25).unwrap();
        let pairs = symmetric_pairs(&t).unwrap();
        assert_eq!(pairs.len(), 3);
        let finite: Vec<_> = pairs.iter().flat_map(|p| p.points()).collect();
        assert_eq!(finite.len(), 6);
        assert!(finite
            .iter()
            .all(|z| z.finite().map(|z| z.im.abs() < 1e-15).unwrap_or(true)));
        let four = CircularDomain::from_outer_and_holes(
            Circle::centered(0.0, 0.0, 1.0).unwrap(),
            vec![
                Circle::centered(0.1, 0.05, 0.15).unwrap(),
                Circle::centered(0.5, -0.1, 0.2).unwrap(),
                Circle::centered(-0.4, 0.45, 0.17).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(symmetric_pairs(&four).unwrap().len(), 6);
    }

    #[test]
    fn image_of_circle_examples() {
        let tau = MobiusMap::involution(3.0 / 16.0);
        let hole = Circle::centered(0.5, 0.0, 0.25).unwrap();
        let img = image_of_circle(&tau, &hole).circle().unwrap();
        assert!((img.center - hole.center).norm() < 1e-12 && (img.radius - 0.25).abs() < 1e-12);
        let unit = Circle::centered(0.0, 0.0, 1.0).unwrap();
        let img = image_of_circle(&tau, &unit).circle().unwrap();
        assert!(img.center.norm() < 1e-12 && (img.radius - 3.0 / 16.0).abs() < 1e-12);
        let img = image_of_circle(&MobiusMap::involution(1.0), &unit).circle().unwrap();
        assert!(img.center.norm() < 1e-12 && (img.radius - 1.0).abs() < 1e-12);
        // the pole on the circle gives a line
        let through_pole = Circle::centered(1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            image_of_circle(&MobiusMap::involution(1.0), &through_pole),
            CircleImage::Line { .. }
        ));
    }
}
