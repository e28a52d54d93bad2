//! Domain-spec ingestion and the JSON, CSV and SVG emitters.

use crate::error::{Error, Result};
use crate::families::{DomainFamily, FamilySweep, SmoothnessReport};
use crate::geometry::{BoundaryCurve, Circle, CircularDomain, MultiplyConnectedDomain};
use crate::koebe::SlitAnnulus;
use crate::spectral::{node_parameter, TrigInterpolant};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleSpec {
    pub center: [f64; 2],
    pub radius: f64,
}

impl CircleSpec {
    pub fn to_circle(&self) -> Result<Circle> {
        Circle::centered(self.center[0], self.center[1], self.radius)
    }
}

impl From<&Circle> for CircleSpec {
    fn from(c: &Circle) -> Self {
        Self {
            center: [c.center.re, c.center.im],
            radius: c.radius,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub points: Vec<[f64; 2]>,
}

/// Contents of an input file.
///
/// Curve specs list the outer component first; each component is resampled
/// to the requested node count by trigonometric interpolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum InputSpec {
    Circular {
        outer: CircleSpec,
        holes: Vec<CircleSpec>,
    },
    Curves {
        components: Vec<ComponentSpec>,
    },
    /// Built-in family: `kind` is `annulus-linear` (with `base`, `slope`
    /// and optional `range`), `counterexample` or `tilde-counterexample`.
    Family {
        kind: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        slope: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        range: Option<[f64; 2]>,
    },
}

/// A validated domain in either representation.
#[derive(Debug, Clone)]
pub enum LoadedDomain {
    Circular(CircularDomain),
    Curves(MultiplyConnectedDomain),
}

impl LoadedDomain {
    pub fn circular(&self) -> Option<&CircularDomain> {
        match self {
            LoadedDomain::Circular(d) => Some(d),
            LoadedDomain::Curves(_) => None,
        }
    }

    pub fn curves(&self, nodes: usize) -> Result<MultiplyConnectedDomain> {
        match self {
            LoadedDomain::Circular(d) => d.to_curves(nodes),
            LoadedDomain::Curves(d) if d.outer().len() == nodes => Ok(d.clone()),
            LoadedDomain::Curves(d) => {
                let resample = |c: &BoundaryCurve| BoundaryCurve::new(resample(c.nodes(), nodes));
                MultiplyConnectedDomain::new(
                    resample(d.outer())?,
                    d.holes().iter().map(resample).collect::<Result<Vec<_>>>()?,
                )
            }
        }
    }
}

fn resample(points: &[Complex64], n: usize) -> Vec<Complex64> {
    if points.len() == n {
        return points.to_vec();
    }
    let interp = TrigInterpolant::new(points);
    (0..n).map(|k| interp.eval(node_parameter(k, n))).collect()
}

pub fn parse_input(text: &str) -> Result<InputSpec> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed spec: {e}")))
}

pub fn read_input(path: &Path) -> Result<InputSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_input(&text)
}

impl InputSpec {
    pub fn from_circular(d: &CircularDomain) -> Self {
        InputSpec::Circular {
            outer: d.outer().into(),
            holes: d.holes().iter().map(CircleSpec::from).collect(),
        }
    }

    /// Validates the spec into a domain; `nodes` is the sample count used
    /// for curve specs.
    pub fn domain(&self, nodes: usize) -> Result<LoadedDomain> {
        match self {
            InputSpec::Circular { outer, holes } => {
                let holes = holes.iter().map(CircleSpec::to_circle).collect::<Result<Vec<_>>>()?;
                Ok(LoadedDomain::Circular(CircularDomain::from_outer_and_holes(
                    outer.to_circle()?,
                    holes,
                )?))
            }
            InputSpec::Curves { components } => {
                if components.is_empty() {
                    return Err(Error::InvalidDomain("no boundary components".into()));
                }
                let curves = components
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        if c.points.len() < 3 {
                            return Err(Error::InvalidCurve(format!(
                                "component {i} has {} points",
                                c.points.len()
                            )));
                        }
                        let pts: Vec<Complex64> =
                            c.points.iter().map(|p| Complex64::new(p[0], p[1])).collect();
                        BoundaryCurve::new(resample(&pts, nodes))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut it = curves.into_iter();
                let outer = it.next().expect("non-empty");
                Ok(LoadedDomain::Curves(MultiplyConnectedDomain::new(outer, it.collect())?))
            }
            InputSpec::Family { .. } => Err(Error::Input(
                "family spec given where a single domain is expected".into(),
            )),
        }
    }

    pub fn family(&self) -> Result<DomainFamily> {
        let InputSpec::Family {
            kind,
            base,
            slope,
            range,
        } = self
        else {
            return Err(Error::Input("expected a spec with \"type\": \"family\"".into()));
        };
        let range = range.map(|r| (r[0], r[1]));
        let family = match kind.as_str() {
            "annulus-linear" => {
                let (Some(base), Some(slope)) = (base, slope) else {
                    return Err(Error::Input("annulus-linear needs base and slope".into()));
                };
                DomainFamily::annulus_linear(*base, *slope, range.unwrap_or((-1.0, 1.0)))?
            }
            "counterexample" => DomainFamily::counterexample(),
            "tilde-counterexample" => DomainFamily::tilde_counterexample(),
            other => return Err(Error::Input(format!("unknown family kind {other:?}"))),
        };
        match range {
            Some(r) if kind != "annulus-linear" => {
                if r.0 < family.range.0 || r.1 > family.range.1 {
                    return Err(Error::OutOfRange(format!("family range {r:?} exceeds [-1, 1]")));
                }
                let mut family = family;
                family.range = r;
                Ok(family)
            }
            _ => Ok(family),
        }
    }
}

/// Pretty JSON with every float written to 17 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value).map_err(|e| Error::Internal(format!("serialization: {e}")))?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                let _ = write!(out, "{:.16e}", n.as_f64().expect("f64"));
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.iter().all(|x| !x.is_array() && !x.is_object()) {
                out.push('[');
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, depth);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
    }
}

/// `x` to 9 significant digits, fixed-point for moderate magnitudes.
pub fn csv_number(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..9).contains(&exp) {
        format!("{:.*}", (8 - exp).max(0) as usize, x)
    } else {
        format!("{x:.8e}")
    }
}

fn moduli_header(slits: usize) -> Vec<String> {
    let mut h = vec!["r2".to_string()];
    for j in 0..slits {
        h.push(format!("r{}", j + 3));
        h.push(format!("alpha{}", j + 3));
        h.push(format!("beta{}", j + 3));
    }
    h
}

/// `m,r2,r3,alpha3,beta3,...` header and one row.
pub fn moduli_csv(m: &SlitAnnulus) -> String {
    let mut header = vec!["m".to_string()];
    header.extend(moduli_header(m.slits.len()));
    let row: Vec<String> = m
        .record()
        .iter()
        .enumerate()
        .map(|(i, &x)| if i == 0 { format!("{}", x as usize) } else { csv_number(x) })
        .collect();
    format!("{}\n{}\n", header.join(","), row.join(","))
}

/// `lambda,r2,r3,alpha3,beta3,...,residual`; cells of failed grid points are
/// left empty.
pub fn sweep_csv(s: &FamilySweep) -> String {
    let slits = s.max_slits();
    let mut header = vec!["lambda".to_string()];
    header.extend(moduli_header(slits));
    header.push("residual".into());
    let mut out = header.join(",");
    out.push('\n');
    for r in &s.records {
        let mut row = vec![csv_number(r.lambda)];
        match &r.moduli {
            Some(m) => {
                row.push(csv_number(m.r2));
                for j in 0..slits {
                    match m.slits.get(j) {
                        Some(sl) => row.extend([sl.radius, sl.alpha, sl.beta].map(csv_number)),
                        None => row.extend(std::iter::repeat_n(String::new(), 3)),
                    }
                }
            }
            None => row.extend(std::iter::repeat_n(String::new(), 1 + 3 * slits)),
        }
        row.push(
            r.diagnostics
                .map(|d| csv_number(d.linear_residual))
                .unwrap_or_default(),
        );
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn smoothness_text(r: &SmoothnessReport) -> String {
    let mut out = format!("difference order {}, step {}\n", r.order, csv_number(r.step));
    for c in &r.curves {
        let _ = writeln!(
            out,
            "{:<8} max |q| = {:<16} median |q| = {:<16} jumps at {:?}",
            c.name,
            csv_number(c.max_abs),
            csv_number(c.median_abs),
            c.jumps
        );
    }
    out
}

const PANEL: f64 = 400.0;
const MARGIN: f64 = 20.0;
const OUTLINE: &str = "#1f4e79";
const SLIT: &str = "#c0392b";

struct Frame {
    center: Complex64,
    scale: f64,
    offset_x: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = Complex64>, offset_x: f64) -> Self {
        let (mut lo, mut hi) = (Complex64::new(f64::MAX, f64::MAX), Complex64::new(f64::MIN, f64::MIN));
        for z in points {
            lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
        }
        let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-12);
        Self {
            center: (lo + hi) / 2.0,
            scale: (PANEL - 2.0 * MARGIN) / span,
            offset_x,
        }
    }

    fn map(&self, z: Complex64) -> (f64, f64) {
        let w = (z - self.center) * self.scale;
        (self.offset_x + PANEL / 2.0 + w.re, PANEL / 2.0 - w.im)
    }
}

fn polygon(out: &mut String, f: &Frame, pts: &[Complex64], color: &str) {
    let mut d = String::new();
    for (i, &z) in pts.iter().enumerate() {
        let (x, y) = f.map(z);
        let _ = write!(d, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" });
    }
    let _ = writeln!(
        out,
        r#"  <path d="{}Z" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
        d
    );
}

fn circle_element(out: &mut String, f: &Frame, radius: f64, color: &str) {
    let (x, y) = f.map(Complex64::new(0.0, 0.0));
    let _ = writeln!(
        out,
        r#"  <circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
        radius * f.scale
    );
}

/// Source boundary and image slit annulus side by side with a shared legend.
pub fn render_svg(source: &MultiplyConnectedDomain, image: &SlitAnnulus) -> String {
    let height = PANEL + 60.0;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {:.0} {height:.0}\">\n",
        2.0 * PANEL,
        2.0 * PANEL
    );
    out.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let src = Frame::fit(source.all_nodes().into_iter(), 0.0);
    for c in source.components() {
        polygon(&mut out, &src, c.nodes(), OUTLINE);
    }
    let img = Frame::fit(
        [Complex64::new(-1.0, -1.0), Complex64::new(1.0, 1.0)].into_iter(),
        PANEL,
    );
    circle_element(&mut out, &img, 1.0, OUTLINE);
    circle_element(&mut out, &img, image.r2, OUTLINE);
    for s in &image.slits {
        let (x0, y0) = img.map(Complex64::from_polar(s.radius, s.alpha));
        let (x1, y1) = img.map(Complex64::from_polar(s.radius, s.beta));
        let large = if s.width() > PI { 1 } else { 0 };
        let rad = s.radius * img.scale;
        let _ = writeln!(
            out,
            r#"  <path d="M{x0:.3},{y0:.3} A{rad:.3},{rad:.3} 0 {large} 0 {x1:.3},{y1:.3}" fill="none" stroke="{SLIT}" stroke-width="2.5"/>"#
        );
        for (x, y) in [(x0, y0), (x1, y1)] {
            let _ = writeln!(out, r#"  <circle cx="{x:.3}" cy="{y:.3}" r="3.5" fill="{SLIT}"/>"#);
        }
    }
    let ly = PANEL + 30.0;
    let _ = writeln!(
        out,
        r#"  <line x1="40" y1="{ly:.0}" x2="70" y2="{ly:.0}" stroke="{OUTLINE}" stroke-width="1.5"/>
  <text x="78" y="{:.0}" font-family="sans-serif" font-size="13">boundary circle / curve</text>
  <line x1="280" y1="{ly:.0}" x2="310" y2="{ly:.0}" stroke="{SLIT}" stroke-width="2.5"/>
  <text x="318" y="{:.0}" font-family="sans-serif" font-size="13">circular slit</text>
  <circle cx="470" cy="{ly:.0}" r="3.5" fill="{SLIT}"/>
  <text x="480" y="{:.0}" font-family="sans-serif" font-size="13">slit endpoint (r, alpha) / (r, beta)</text>
  <text x="{:.0}" y="16" font-family="sans-serif" font-size="13" text-anchor="middle">source domain</text>
  <text x="{:.0}" y="16" font-family="sans-serif" font-size="13" text-anchor="middle">image: slit annulus, r2 = {}</text>"#,
        ly + 4.0,
        ly + 4.0,
        ly + 4.0,
        PANEL / 2.0,
        1.5 * PANEL,
        csv_number(image.r2)
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::koebe::Slit;

    #[test]
    fn parses_circular_and_rejects_overlap() {
        let ok = r#"{"type":"circular","outer":{"center":[0,0],"radius":1},"holes":[{"center":[0,0],"radius":0.25}]}"#;
        let d = parse_input(ok).unwrap().domain(64).unwrap();
        assert_eq!(d.circular().unwrap().connectivity(), 2);
        let bad = r#"{"type":"circular","outer":{"center":[0,0],"radius":1},"holes":[{"center":[0.5,0],"radius":0.3},{"center":[0.6,0],"radius":0.2}]}"#;
        assert!(matches!(parse_input(bad).unwrap().domain(64), Err(Error::InvalidDomain(_))));
        assert!(matches!(parse_input("{\"type\":\"circular\""), Err(Error::Input(_))));
    }

    #[test]
    fn curves_spec_resamples() {
        let circle = |c: f64, r: f64, n: usize| ComponentSpec {
            points: (0..n)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / n as f64;
                    [c + r * t.cos(), r * t.sin()]
                })
                .collect(),
        };
        let spec = InputSpec::Curves {
            components: vec![circle(0.0, 1.0, 40), circle(0.1, 0.3, 40)],
        };
        let d = spec.domain(64).unwrap().curves(64).unwrap();
        assert_eq!(d.outer().len(), 64);
        assert!((d.outer().nodes()[16] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert!((d.holes()[0].nodes()[16] - Complex64::new(0.1, 0.3)).norm() < 1e-12 || (d.holes()[0].nodes()[48] - Complex64::new(0.1, 0.3)).norm() < 1e-12);
    }

    #[test]
    fn json_has_seventeen_digits_and_round_trips() {
        let x = [0.1f64, 1.0 / 3.0, 2.0];
        let s = to_json(&x).unwrap();
        assert!(s.contains("3.3333333333333331e-1"));
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn csv_formats() {
        assert_eq!(csv_number(0.25), "0.250000000");
        assert_eq!(csv_number(-1.2716144639514084), "-1.27161446");
        assert_eq!(csv_number(1.5e-20), "1.50000000e-20");
        let m = SlitAnnulus {
            r2: 0.25,
            slits: vec![Slit {
                radius: 0.5,
                alpha: -1.0,
                beta: 1.0,
            }],
        };
        assert_eq!(
            moduli_csv(&m),
            "m,r2,r3,alpha3,beta3\n3,0.250000000,0.500000000,-1.00000000,1.00000000\n"
        );
    }

    #[test]
    fn family_specs() {
        let f = parse_input(r#"{"type":"family","kind":"annulus-linear","base":0.2,"slope":0.1}"#)
            .unwrap()
            .family()
            .unwrap();
        assert_eq!(f.domain(0.5).unwrap().holes()[0].radius, 0.25);
        assert!(parse_input(r#"{"type":"family","kind":"spiral"}"#).unwrap().family().is_err());
    }
}
