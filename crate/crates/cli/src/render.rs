//! SVG rendering of curves, certificate regions, and marker points.
//!
//! A render is described by a JSON spec: canvas geometry plus an ordered
//! list of layers, each one of
//!
//! * `{"curve": k}` — the order-k broken line,
//! * `{"region": NAME}` — a certificate region by name,
//! * `{"point": NAME}` — a labeled marker.
//!
//! Region names follow a small grammar: the base names `A<m>`, `A~<m>`,
//! `B`, `W`, `S`, `S'`, `S''`, `T`, `T'` and the truncation `C<k>` (which
//! expands to all of its pieces), optionally wrapped in `f1(...)` or
//! `f2(...)` to draw an image under either similarity, nested as deep as
//! needed. Point names are `z0`, `alpha`, `p1`, `p2`, `p3`, `q`.
//!
//! Output is deterministic: fixed palette, coordinates printed to six
//! decimals, and a world→screen transform that fits everything into the
//! canvas (flipping y, since SVG grows downward).

use anyhow::{bail, ensure, Context, Result};
use dragonfold::geometry::{ConvexPolygon, Point};
use dragonfold::ifs::{curve, ModelParams, Similarity};
use dragonfold::regions::{build_ck, build_regions, region_a, region_a_tilde};
use serde::Deserialize;
use std::fmt::Write as _;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderSpec {
    #[serde(default = "one")]
    pub schema: u32,
    pub xi: Option<f64>,
    pub theta_deg: Option<f64>,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default = "default_height")]
    pub height: f64,
    /// Blank border, as a fraction of each canvas dimension.
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default = "default_stroke")]
    pub stroke_width: f64,
    pub layers: Vec<Layer>,
}

fn one() -> u32 {
    1
}
fn default_width() -> f64 {
    800.0
}
fn default_height() -> f64 {
    600.0
}
fn default_margin() -> f64 {
    0.06
}
fn default_stroke() -> f64 {
    1.5
}

/// One drawable layer; exactly one of `curve`/`region`/`point` must be set.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    pub curve: Option<u32>,
    pub region: Option<String>,
    pub point: Option<String>,
    pub color: Option<String>,
    pub fill: Option<String>,
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f",
];

enum Shape {
    Path { pts: Vec<Point>, color: String },
    Region { name: String, pts: Vec<Point>, color: String, fill: Option<String> },
    Marker { name: String, at: Point, color: String },
}

impl RenderSpec {
    pub fn params(&self) -> Result<ModelParams> {
        let p = match (self.theta_deg, self.xi) {
            (Some(t), None) => ModelParams::from_theta_deg(t)?,
            (None, Some(x)) => ModelParams::from_xi(x)?,
            (Some(_), Some(_)) => bail!("give either \"xi\" or \"theta_deg\", not both"),
            (None, None) => bail!("the spec must set \"xi\" or \"theta_deg\""),
        };
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        ensure!(self.schema == 1, "unsupported schema {}", self.schema);
        ensure!(
            self.width > 0.0 && self.height > 0.0 && self.width.is_finite() && self.height.is_finite(),
            "canvas dimensions must be positive"
        );
        ensure!(
            (0.0..0.45).contains(&self.margin),
            "margin must be a fraction in [0, 0.45)"
        );
        ensure!(self.stroke_width > 0.0, "stroke width must be positive");
        ensure!(!self.layers.is_empty(), "at least one layer is required");
        Ok(())
    }
}

/// Expand a region name into concretely named polygons.
fn region_polys(p: &ModelParams, name: &str) -> Result<Vec<(String, ConvexPolygon)>> {
    let name = name.trim();
    for (prefix, map) in [("f1(", p.f1()), ("f2(", p.f2())] {
        if let Some(inner) = name.strip_prefix(prefix).and_then(|s| s.strip_suffix(')')) {
            return Ok(mapped_polys(region_polys(p, inner)?, &prefix[..2], &map));
        }
    }
    let rs = || build_regions(p);
    let single = |lp: dragonfold::regions::LabeledPolygon| {
        vec![(lp.name().to_string(), lp.poly().clone())]
    };
    Ok(match name {
        "B" => single(rs()?.b),
        "W" => single(rs()?.w),
        "S" => single(rs()?.s),
        "S'" => single(rs()?.sp),
        "S''" => single(rs()?.spp),
        "T" => single(rs()?.t),
        "T'" => single(rs()?.tp),
        _ => {
            if let Some(m) = name.strip_prefix("A~").and_then(|s| s.parse::<i32>().ok()) {
                single(region_a_tilde(p, m)?)
            } else if let Some(m) = name.strip_prefix('A').and_then(|s| s.parse::<i32>().ok()) {
                single(region_a(p, m)?)
            } else if let Some(k) = name.strip_prefix('C').and_then(|s| s.parse::<u32>().ok()) {
                build_ck(p, k)?
                    .pieces()
                    .iter()
                    .map(|lp| (lp.name().to_string(), lp.poly().clone()))
                    .collect()
            } else {
                bail!("unknown region layer {name:?}");
            }
        }
    })
}

fn mapped_polys(
    polys: Vec<(String, ConvexPolygon)>,
    tag: &str,
    map: &Similarity,
) -> Vec<(String, ConvexPolygon)> {
    polys
        .into_iter()
        .map(|(n, poly)| (format!("{tag}({n})"), poly.map_linear(map.c, map.d)))
        .collect()
}

fn point_by_name(p: &ModelParams, name: &str) -> Result<Point> {
    if name == "alpha" {
        return Ok(p.alpha);
    }
    let rs = build_regions(p)?;
    Ok(match name {
        "z0" => rs.z0,
        "q" => rs.anchors.q,
        "p1" => rs.anchors.p1,
        "p2" => rs.anchors.p2,
        "p3" => rs.anchors.p3,
        _ => bail!("unknown point layer {name:?}"),
    })
}

fn build_shapes(spec: &RenderSpec, p: &ModelParams) -> Result<Vec<Shape>> {
    let mut shapes = Vec::new();
    for (i, layer) in spec.layers.iter().enumerate() {
        let color = layer
            .color
            .clone()
            .unwrap_or_else(|| PALETTE[i % PALETTE.len()].to_string());
        let picked =
            layer.curve.is_some() as u8 + layer.region.is_some() as u8 + layer.point.is_some() as u8;
        ensure!(
            picked == 1,
            "layer {i}: exactly one of \"curve\", \"region\", \"point\" must be set"
        );
        if let Some(k) = layer.curve {
            let poly = curve(p, k).with_context(|| format!("layer {i}: curve order {k}"))?;
            shapes.push(Shape::Path { pts: poly.vertices().to_vec(), color });
        } else if let Some(name) = &layer.region {
            for (piece_name, poly) in
                region_polys(p, name).with_context(|| format!("layer {i}"))?
            {
                shapes.push(Shape::Region {
                    name: piece_name,
                    pts: poly.vertices().to_vec(),
                    color: color.clone(),
                    fill: layer.fill.clone(),
                });
            }
        } else if let Some(name) = &layer.point {
            let at = point_by_name(p, name).with_context(|| format!("layer {i}"))?;
            shapes.push(Shape::Marker { name: name.clone(), at, color });
        }
    }
    Ok(shapes)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_svg(spec: &RenderSpec) -> Result<String> {
    spec.validate()?;
    let p = spec.params()?;
    let shapes = build_shapes(spec, &p)?;

    let mut min = Point::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut feed = |z: &Point| {
        min = Point::new(min.re.min(z.re), min.im.min(z.im));
        max = Point::new(max.re.max(z.re), max.im.max(z.im));
    };
    for s in &shapes {
        match s {
            Shape::Path { pts, .. } | Shape::Region { pts, .. } => pts.iter().for_each(&mut feed),
            Shape::Marker { at, .. } => feed(at),
        }
    }
    // Guard against degenerate extents (a single marker, a point-like curve).
    let dx = (max.re - min.re).max(1e-9);
    let dy = (max.im - min.im).max(1e-9);

    let avail_w = spec.width * (1.0 - 2.0 * spec.margin);
    let avail_h = spec.height * (1.0 - 2.0 * spec.margin);
    let s = (avail_w / dx).min(avail_h / dy);
    let ox = (spec.width - s * dx) / 2.0 - s * min.re;
    let oy = (spec.height - s * dy) / 2.0 - s * min.im;
    let tx = move |z: Point| (s * z.re + ox, spec.height - (s * z.im + oy));

    let fmt_pts = |pts: &[Point]| {
        let mut out = String::new();
        for (i, &z) in pts.iter().enumerate() {
            let (x, y) = tx(z);
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{x:.6},{y:.6}");
        }
        out
    };
    let centroid = |pts: &[Point]| {
        let c = pts.iter().sum::<Point>() / pts.len() as f64;
        tx(c)
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">",
        w = spec.width,
        h = spec.height
    );
    let _ = writeln!(svg, "<!-- dragonfold render, schema {} -->", spec.schema);
    for shape in &shapes {
        match shape {
            Shape::Path { pts, color } => {
                let _ = writeln!(
                    svg,
                    "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{:.3}\" stroke-linejoin=\"round\" points=\"{}\"/>",
                    xml_escape(color),
                    spec.stroke_width,
                    fmt_pts(pts)
                );
            }
            Shape::Region { name, pts, color, fill } => {
                let fill_attr = match fill {
                    Some(f) => format!("fill=\"{}\" fill-opacity=\"0.25\"", xml_escape(f)),
                    None => "fill=\"none\"".to_string(),
                };
                let _ = writeln!(
                    svg,
                    "<polygon {} stroke=\"{}\" stroke-width=\"{:.3}\" points=\"{}\"/>",
                    fill_attr,
                    xml_escape(color),
                    spec.stroke_width,
                    fmt_pts(pts)
                );
                let (cx, cy) = centroid(pts);
                let _ = writeln!(
                    svg,
                    "<text x=\"{cx:.6}\" y=\"{cy:.6}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\" fill=\"{}\">{}</text>",
                    xml_escape(color),
                    xml_escape(name)
                );
            }
            Shape::Marker { name, at, color } => {
                let (cx, cy) = tx(*at);
                let _ = writeln!(
                    svg,
                    "<circle cx=\"{cx:.6}\" cy=\"{cy:.6}\" r=\"3\" fill=\"{}\"/>",
                    xml_escape(color)
                );
                let _ = writeln!(
                    svg,
                    "<text x=\"{:.6}\" y=\"{:.6}\" font-family=\"monospace\" font-size=\"12\" fill=\"{}\">{}</text>",
                    cx + 5.0,
                    cy - 5.0,
                    xml_escape(color),
                    xml_escape(name)
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(json: &str) -> RenderSpec {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn curve_render_is_deterministic_and_wellformed() {
        let sp = spec(r#"{"theta_deg": 99.35, "layers": [{"curve": 8}]}"#);
        let a = render_svg(&sp).unwrap();
        let b = render_svg(&sp).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg "));
        assert!(a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<polyline").count(), 1);
    }

    #[test]
    fn truncation_layers_expand_to_pieces() {
        let sp = spec(
            r##"{"xi": 0.62, "layers": [
                {"region": "C5", "fill": "#ccccff"},
                {"region": "f1(C5)"},
                {"region": "f2(A2)"},
                {"point": "z0"},
                {"point": "alpha"}
            ]}"##,
        );
        let svg = render_svg(&sp).unwrap();
        // C5 has pieces A1..A4, B, f2(A1..A3): 8 polygons, again under f1.
        assert_eq!(svg.matches("<polygon").count(), 8 + 8 + 1);
        assert!(svg.contains(">f1(A1)<"));
        assert!(svg.contains(">f2(A2)<"));
        assert_eq!(svg.matches("<circle").count(), 2);
    }

    #[test]
    fn unknown_names_are_rejected() {
        for bad in [
            r#"{"xi": 0.6, "layers": [{"region": "Q3"}]}"#,
            r#"{"xi": 0.6, "layers": [{"point": "center"}]}"#,
            r#"{"xi": 0.6, "layers": [{"region": "f3(A1)"}]}"#,
        ] {
            assert!(render_svg(&spec(bad)).is_err(), "{bad}");
        }
    }

    #[test]
    fn layer_must_pick_exactly_one_kind() {
        let sp = spec(r#"{"xi": 0.6, "layers": [{"curve": 4, "region": "B"}]}"#);
        assert!(render_svg(&sp).is_err());
        let sp = spec(r##"{"xi": 0.6, "layers": [{"color": "#000000"}]}"##);
        assert!(render_svg(&sp).is_err());
    }

    #[test]
    fn angles_are_mutually_exclusive() {
        let sp = spec(r#"{"xi": 0.6, "theta_deg": 120.0, "layers": [{"curve": 2}]}"#);
        assert!(render_svg(&sp).is_err());
        let sp = spec(r#"{"layers": [{"curve": 2}]}"#);
        assert!(render_svg(&sp).is_err());
    }
}
