//! Automorphism groups of circular domains.
//!
//! For the three-connected domains `T(μ, a, r)` the group is known in closed
//! form. For general circular domains every automorphism permutes the
//! points that are symmetric with respect to pairs of boundary circles, so
//! the group is found by a finite search over images of one triple of such
//! points.

use crate::error::{Error, Result};
use crate::geometry::{spherical_distance, Circle, CircularDomain, ExtendedPoint};
use crate::mobius::{image_of_circle, symmetric_pairs, MobiusMap};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Default circle-matching tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Tolerance of the closed-form parameter identities.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Parameters of `T(μ, a, r) = D \ (closed D_μ(0) ∪ closed D_r(a))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeConnectedCircular {
    pub mu: f64,
    pub a: f64,
    pub r: f64,
}

impl ThreeConnectedCircular {
    pub fn new(mu: f64, a: f64, r: f64) -> Result<Self> {
        if !(0.0 < mu && mu < a - r && a - r < a + r && a + r < 1.0) {
            return Err(Error::InvalidDomain(format!(
                "T(mu, a, r) needs 0 < mu < a - r < a + r < 1, got mu = {mu}, a = {a}, r = {r}"
            )));
        }
        Ok(Self { mu, a, r })
    }

    /// Reads `(μ, a, r)` off a domain of the form `T(μ, a, r)`, with holes
    /// in either order.
    pub fn recognize(d: &CircularDomain) -> Option<Self> {
        let o = d.outer();
        if d.connectivity() != 3 || o.center.norm() > 1e-14 || (o.radius - 1.0).abs() > 1e-14 {
            return None;
        }
        let holes = d.holes();
        let (inner, side) = if holes[0].center.norm() <= 1e-14 {
            (holes[0], holes[1])
        } else {
            (holes[1], holes[0])
        };
        if inner.center.norm() > 1e-14 || side.center.im.abs() > 1e-14 || side.center.re <= 0.0 {
            return None;
        }
        Self::new(inner.radius, side.center.re, side.radius).ok()
    }

    pub fn domain(&self) -> CircularDomain {
        CircularDomain::three_connected(self.mu, self.a, self.r)
            .expect("validated parameters give a circular domain")
    }

    /// `τ(z) = μ / z`.
    pub fn tau(&self) -> MobiusMap {
        MobiusMap::involution(self.mu)
    }

    /// `φ_b(z) = -(z - b) / (1 - b z)` with `b = ((a + r) - μ) / (1 - (a + r) μ)`.
    pub fn phi_b(&self) -> MobiusMap {
        let b = self.b();
        MobiusMap::new(
            Complex64::new(-1.0, 0.0),
            Complex64::new(b, 0.0),
            Complex64::new(-b, 0.0),
            Complex64::new(1.0, 0.0),
        )
        .expect("|b| < 1 keeps phi_b invertible")
    }

    pub fn b(&self) -> f64 {
        let s = self.a + self.r;
        (s - self.mu) / (1.0 - s * self.mu)
    }

    /// The second expression for `b`, from `φ_b(μ) = a - r`.
    pub fn b_alt(&self) -> f64 {
        let t = self.a - self.r;
        (t + self.mu) / (1.0 + self.mu * t)
    }
}

/// Whether `τ(z) = μ/z` preserves `T(μ, a, r)`.
pub fn tau_condition(t: &ThreeConnectedCircular) -> bool {
    (t.mu - (t.a * t.a - t.r * t.r)).abs() < IDENTITY_TOL
}

/// `m² - (1/r - 1) m + 1` with `m = a² - r²`.
pub fn rigidity_discriminant(a: f64, r: f64) -> f64 {
    let m = a * a - r * r;
    m * m - (1.0 / r - 1.0) * m + 1.0
}

/// `r + μ(a² - r²) - μ + r μ²`, which vanishes exactly when the two
/// expressions for `b` agree, i.e. when `φ_b` preserves `T(μ, a, r)`.
pub fn phi_b_discriminant(t: &ThreeConnectedCircular) -> f64 {
    let (mu, a, r) = (t.mu, t.a, t.r);
    r + mu * (a * a - r * r) - mu + r * mu * mu
}

/// Parameters `(m, a)` with `μ = m = a² - r²` for which the group has six
/// elements: the smaller root of `(1 + r) m² - m + r = 0`.
pub fn six_element_parameters(r: f64) -> Result<ThreeConnectedCircular> {
    let disc = 1.0 - 4.0 * r * (1.0 + r);
    if !(r > 0.0 && disc >= 0.0) {
        return Err(Error::OutOfRange(format!(
            "no six-element T(mu, a, {r}): need 0 < r <= (sqrt(2) - 1)/2"
        )));
    }
    let m = 2.0 * r / (1.0 + disc.sqrt());
    ThreeConnectedCircular::new(m, (m + r * r).sqrt(), r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Rigid,
    TauOnly,
    SixElement,
    Other,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Rigid => "rigid",
            Self::TauOnly => "tau-only",
            Self::SixElement => "six-element",
            Self::Other => "other",
        })
    }
}

/// Finite group of Möbius automorphisms.
#[derive(Debug, Clone, PartialEq)]
pub struct AutGroup {
    elements: Vec<MobiusMap>,
    generators: Vec<String>,
}

fn sort_key(m: &MobiusMap) -> [f64; 6] {
    let mut key = [0.0; 6];
    for (k, p) in m.fingerprint().iter().enumerate() {
        let (x, y) = match p {
            ExtendedPoint::Finite(z) => (z.re, z.im),
            ExtendedPoint::Infinity => (f64::MAX, f64::MAX),
        };
        key[2 * k] = x;
        key[2 * k + 1] = y;
    }
    key
}

fn compare(a: &MobiusMap, b: &MobiusMap) -> Ordering {
    let (ka, kb) = (sort_key(a), sort_key(b));
    ka.iter()
        .zip(&kb)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

impl AutGroup {
    /// Dedups by action, puts the identity first, sorts the rest and checks
    /// the group axioms.
    fn assemble(candidates: Vec<MobiusMap>, generators: Vec<String>) -> Result<Self> {
        let mut elements: Vec<MobiusMap> = vec![MobiusMap::identity()];
        for c in candidates {
            if !elements.iter().any(|e| e.same_action(&c)) {
                elements.push(c);
            }
        }
        elements[1..].sort_by(compare);
        let group = Self {
            elements,
            generators,
        };
        group.check_closure()?;
        Ok(group)
    }

    fn position(&self, m: &MobiusMap) -> Option<usize> {
        self.elements.iter().position(|e| e.same_action(m))
    }

    fn check_closure(&self) -> Result<()> {
        for g in &self.elements {
            if self.position(&g.inverse()).is_none() {
                return Err(Error::GroupClosure { tol: crate::mobius::ACTION_TOL });
            }
            for h in &self.elements {
                if self.position(&g.compose(h)).is_none() {
                    return Err(Error::GroupClosure { tol: crate::mobius::ACTION_TOL });
                }
            }
        }
        Ok(())
    }

    pub fn elements(&self) -> &[MobiusMap] {
        &self.elements
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &MobiusMap) -> bool {
        self.position(m).is_some()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements.iter().all(|g| {
            self.elements
                .iter()
                .all(|h| g.compose(h).same_action(&h.compose(g)))
        })
    }

    /// Same set of actions.
    pub fn same_as(&self, other: &AutGroup) -> bool {
        self.order() == other.order() && self.elements.iter().all(|g| other.contains(g))
    }

    pub fn classification(&self) -> Classification {
        match self.order() {
            1 => Classification::Rigid,
            2 => {
                let g = self.elements[1];
                let scale = g.b.norm().max(g.c.norm());
                if g.a.norm() < 1e-9 * scale && g.d.norm() < 1e-9 * scale {
                    Classification::TauOnly
                } else {
                    Classification::Other
                }
            }
            6 if !self.is_abelian() => Classification::SixElement,
            _ => Classification::Other,
        }
    }

    pub fn export(&self) -> AutGroupExport {
        AutGroupExport {
            classification: self.classification(),
            order: self.order(),
            generators: self.generators.clone(),
            elements: self
                .elements
                .iter()
                .map(|m| m.canonical_coefficients().map(|c| [c.re, c.im]))
                .collect(),
        }
    }
}

/// Serializable form of an [`AutGroup`]: normalized coefficient quadruples
/// `(a, b, c, d)` as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutGroupExport {
    pub classification: Classification,
    pub order: usize,
    pub generators: Vec<String>,
    pub elements: Vec<[[f64; 2]; 4]>,
}

fn circles_match(a: &Circle, b: &Circle, tol: f64) -> bool {
    (a.center - b.center).norm() <= tol && (a.radius - b.radius).abs() <= tol
}

/// Whether `m` maps every boundary circle onto a boundary circle (as a
/// permutation) and the interior probe into the domain.
pub fn preserves_domain(d: &CircularDomain, m: &MobiusMap, probe: Complex64, tol: f64) -> bool {
    let circles = d.circles();
    let mut hit = vec![false; circles.len()];
    for c in circles {
        let Some(img) = image_of_circle(m, c).circle() else {
            return false;
        };
        match circles
            .iter()
            .position(|t| circles_match(&img, t, tol))
        {
            Some(j) if !hit[j] => hit[j] = true,
            _ => return false,
        }
    }
    matches!(m.apply(ExtendedPoint::new(probe)), ExtendedPoint::Finite(w) if d.contains(w))
}

/// Closed-form automorphism group of `T(μ, a, r)`.
///
/// When `μ = a² - r²` the group is `{Id, τ}` or, if the two expressions for
/// `b` agree, the six-element group generated by `τ` and `φ_b`. Otherwise
/// every automorphism preserves the real axis and permutes the six real
/// boundary points `±1, ±μ, a ± r`, so the real Möbius maps realizing such
/// permutations are checked directly.
pub fn aut_group_t(t: &ThreeConnectedCircular) -> Result<AutGroup> {
    let d = t.domain();
    let probe = d.interior_probe();
    let (candidates, generators) = if tau_condition(t) {
        let tau = t.tau();
        if phi_b_discriminant(t).abs() > IDENTITY_TOL {
            (vec![tau], vec!["tau".to_string()])
        } else {
            let phi = t.phi_b();
            let elements = vec![
                tau,
                phi,
                tau.compose(&phi),
                phi.compose(&tau),
                tau.compose(&phi).compose(&tau),
            ];
            (elements, vec!["tau".to_string(), "phi_b".to_string()])
        }
    } else {
        (real_axis_candidates(t, &d, probe), vec!["real-axis".to_string()])
    };
    for m in &candidates {
        if !preserves_domain(&d, m, probe, DEFAULT_TOL) {
            return Err(Error::Internal(format!(
                "closed-form element {m} does not preserve T({}, {}, {})",
                t.mu, t.a, t.r
            )));
        }
    }
    AutGroup::assemble(candidates, generators)
}

/// Real Möbius maps sending the boundary points `±1, ±μ, a ± r` onto
/// themselves circle by circle and preserving the domain.
fn real_axis_candidates(
    t: &ThreeConnectedCircular,
    d: &CircularDomain,
    probe: Complex64,
) -> Vec<MobiusMap> {
    let ends = [(-1.0, 1.0), (-t.mu, t.mu), (t.a - t.r, t.a + t.r)];
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let p = |x: f64| ExtendedPoint::real(x);
    let mut out = Vec::new();
    for perm in perms {
        for flips in 0..8u32 {
            let img = |k: usize| {
                let (lo, hi) = ends[perm[k]];
                if flips >> k & 1 == 1 {
                    (hi, lo)
                } else {
                    (lo, hi)
                }
            };
            let Ok(m) = MobiusMap::from_point_triples(
                [p(ends[0].0), p(ends[0].1), p(ends[1].0)],
                [p(img(0).0), p(img(0).1), p(img(1).0)],
            ) else {
                continue;
            };
            let fits = (0..3).all(|k| {
                let (lo, hi) = ends[k];
                let (ilo, ihi) = img(k);
                spherical_distance(m.apply(p(lo)), p(ilo)) < IDENTITY_TOL * 1e3
                    && spherical_distance(m.apply(p(hi)), p(ihi)) < IDENTITY_TOL * 1e3
            });
            if fits && !m.is_identity() && preserves_domain(d, &m, probe, DEFAULT_TOL) {
                out.push(m);
            }
        }
    }
    out
}

/// Exhaustive search over Möbius maps permuting the symmetric points.
pub fn enumerate_automorphisms(d: &CircularDomain, tol: f64) -> Result<AutGroup> {
    match d.connectivity() {
        0 | 1 => return Err(Error::Input("automorphism search needs connectivity >= 3".into())),
        2 => return Err(Error::InfiniteGroup),
        _ => {}
    }
    if !(tol > 0.0) {
        return Err(Error::Input(format!("tolerance must be positive, got {tol}")));
    }
    let points: Vec<ExtendedPoint> = symmetric_pairs(d)?
        .iter()
        .flat_map(|p| p.points())
        .collect();
    let source = [points[0], points[1], points[2]];
    let base = MobiusMap::from_triple(source[0], source[1], source[2])?.inverse();
    let probe = d.interior_probe();
    let n = points.len();
    let found: Vec<MobiusMap> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let points = &points;
            (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k)))
                .filter(|&(i, j, k)| i != j && j != k && i != k)
                .filter_map(move |(i, j, k)| {
                    let m = MobiusMap::from_triple(points[i], points[j], points[k])
                        .ok()?
                        .compose(&base);
                    preserves_domain(d, &m, probe, tol).then_some(m)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    AutGroup::assemble(found, vec!["enumerated".to_string()])
}

/// Whether the only automorphism is the identity.
pub fn is_rigid(d: &CircularDomain) -> Result<bool> {
    Ok(enumerate_automorphisms(d, DEFAULT_TOL)?.order() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recognizes_t_form() {
        let d = CircularDomain::from_outer_and_holes(
            Circle::centered(0.0, 0.0, 1.0).unwrap(),
            vec![Circle::centered(0.5, 0.0, 0.25).unwrap(), Circle::centered(0.0, 0.0, 0.1875).unwrap()],
        )
        .unwrap();
        let t = ThreeConnectedCircular::recognize(&d).unwrap();
        assert_eq!((t.mu, t.a, t.r), (0.1875, 0.5, 0.25));
        let shifted = CircularDomain::from_outer_and_holes(
            Circle::centered(0.0, 0.0, 1.0).unwrap(),
            vec![Circle::centered(0.0, 0.5, 0.25).unwrap(), Circle::centered(0.0, 0.0, 0.1875).unwrap()],
        )
        .unwrap();
        assert!(ThreeConnectedCircular::recognize(&shifted).is_none());
    }

    fn six_params() -> ThreeConnectedCircular {
        six_element_parameters(0.1).unwrap()
    }

    fn discriminant_zero_params() -> ThreeConnectedCircular {
        let m = (3.0 - 5f64.sqrt()) / 2.0;
        ThreeConnectedCircular::new(m, (m + 1.0 / 16.0).sqrt(), 0.25).unwrap()
    }

    #[test]
    fn tau_condition_examples() {
        assert!(tau_condition(&ThreeConnectedCircular::new(3.0 / 16.0, 0.5, 0.25).unwrap()));
        assert!(!tau_condition(&ThreeConnectedCircular::new(0.2, 0.5, 0.25).unwrap()));
        let (a, r) = (0.6f64, 0.2f64);
        assert!(tau_condition(&ThreeConnectedCircular::new(a * a - r * r, a, r).unwrap()));
        assert!(ThreeConnectedCircular::new(0.3, 0.5, 0.25).is_err());
    }

    #[test]
    fn discriminant_examples() {
        assert!((rigidity_discriminant(0.5, 0.25) - 121.0 / 256.0).abs() < 1e-15);
        let t = discriminant_zero_params();
        assert!((t.a - 0.666683).abs() < 1e-6);
        assert!(rigidity_discriminant(t.a, t.r).abs() < 1e-12);
        assert!((rigidity_discriminant(0.6, 0.2) + 0.1776).abs() < 1e-12);
        // the b-identity fails there, and holds at the six-element parameters
        assert!((t.b() - t.b_alt()).abs() > 0.1);
        let t = six_params();
        assert!(tau_condition(&t));
        assert!(phi_b_discriminant(&t).abs() < 1e-14);
        assert!((t.b() - t.b_alt()).abs() < 1e-12);
        assert!(six_element_parameters(0.25).is_err());
    }

    #[test]
    fn closed_form_groups() {
        let g = aut_group_t(&ThreeConnectedCircular::new(3.0 / 16.0, 0.5, 0.25).unwrap()).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.classification(), Classification::TauOnly);
        let g = aut_group_t(&six_params()).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(g.classification(), Classification::SixElement);
        let g = aut_group_t(&ThreeConnectedCircular::new(0.2, 0.5, 0.25).unwrap()).unwrap();
        assert_eq!(g.order(), 1);
        let g = aut_group_t(&discriminant_zero_params()).unwrap();
        assert_eq!(g.classification(), Classification::TauOnly);
    }

    #[test]
    fn enumeration_matches_closed_form() {
        for t in [
            ThreeConnectedCircular::new(3.0 / 16.0, 0.5, 0.25).unwrap(),
            six_params(),
            discriminant_zero_params(),
        ] {
            let e = enumerate_automorphisms(&t.domain(), DEFAULT_TOL).unwrap();
            assert!(e.same_as(&aut_group_t(&t).unwrap()));
        }
        let d = CircularDomain::three_connected(3.0 / 16.0, 0.5, 0.26).unwrap();
        assert!(is_rigid(&d).unwrap());
        assert!(matches!(
            enumerate_automorphisms(&CircularDomain::annulus(0.3).unwrap(), DEFAULT_TOL),
            Err(Error::InfiniteGroup)
        ));
    }

    #[test]
    fn phi_b_only_group_when_tau_fails() {
        // a solves r + mu (a^2 - r^2) - mu + r mu^2 = 0 with mu != a^2 - r^2
        let (mu, r) = (0.3f64, 0.1f64);
        let a = (r * r + 1.0 - r / mu - r * mu).sqrt();
        let t = ThreeConnectedCircular::new(mu, a, r).unwrap();
        assert!(phi_b_discriminant(&t).abs() < 1e-14);
        assert!(!tau_condition(&t));
        let g = aut_group_t(&t).unwrap();
        assert_eq!(g.order(), 2);
        assert!(g.contains(&t.phi_b()));
        assert!(g.same_as(&enumerate_automorphisms(&t.domain(), DEFAULT_TOL).unwrap()));
    }
}
