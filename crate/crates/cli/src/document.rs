//! Contour documents and their SVG and JSON renderings.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use depthkit::regions::CentralRegion;
use depthkit::{DataCloud, Pt};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// One central region, as closed rings (first vertex repeated at the end).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub alpha: f64,
    pub rings: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointMark {
    pub x: f64,
    pub y: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
}

/// Nested central regions of a bivariate cloud together with the data points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourDocument {
    pub title: String,
    pub depth: String,
    pub axis_labels: [String; 2],
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    /// Sorted by `alpha`, ascending.
    pub layers: Vec<Layer>,
    pub points: Vec<PointMark>,
}

fn close(ring: &[Pt]) -> Vec<[f64; 2]> {
    let mut out: Vec<[f64; 2]> = ring.iter().map(|p| [p.x, p.y]).collect();
    if let Some(&first) = out.first() {
        out.push(first);
    }
    out
}

impl ContourDocument {
    /// Builds the document of `regions` over the bivariate `cloud`. Axis ranges cover
    /// points and rings with a 5% margin.
    pub fn new(
        title: impl Into<String>,
        depth: impl Into<String>,
        axis_labels: [String; 2],
        cloud: &DataCloud,
        regions: &[(f64, CentralRegion)],
    ) -> CliResult<Self> {
        if cloud.dim() != 2 {
            return Err(CliError::Depth(depthkit::DepthError::DimensionMismatch {
                expected: 2,
                got: cloud.dim(),
            }));
        }
        let mut layers: Vec<Layer> = regions
            .iter()
            .map(|(alpha, r)| Layer {
                alpha: *alpha,
                rings: r.rings().iter().map(|ring| close(ring)).collect(),
            })
            .collect();
        layers.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
        let points: Vec<PointMark> = cloud
            .points()
            .enumerate()
            .map(|(i, p)| PointMark {
                x: p[0],
                y: p[1],
                label: cloud.label(i).map(str::to_string),
            })
            .collect();
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        let coords = points
            .iter()
            .map(|p| [p.x, p.y])
            .chain(layers.iter().flat_map(|l| l.rings.iter().flatten().copied()));
        for c in coords {
            for a in 0..2 {
                lo[a] = lo[a].min(c[a]);
                hi[a] = hi[a].max(c[a]);
            }
        }
        let range = |a: usize| {
            let pad = 0.05 * (hi[a] - lo[a]).max(1e-9 * lo[a].abs().max(1.0));
            [lo[a] - pad, hi[a] + pad]
        };
        Ok(Self {
            title: title.into(),
            depth: depth.into(),
            axis_labels,
            x_range: range(0),
            y_range: range(1),
            layers,
            points,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty() && self.points.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Standalone SVG 1.1 rendering: nested outlines, darkest innermost, data dots with
    /// labels, and an alpha legend.
    pub fn to_svg(&self) -> String {
        const W: f64 = 720.0;
        const H: f64 = 540.0;
        const LEFT: f64 = 70.0;
        const RIGHT: f64 = 590.0;
        const TOP: f64 = 40.0;
        const BOTTOM: f64 = 480.0;
        let [x0, x1] = self.x_range;
        let [y0, y1] = self.y_range;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * (RIGHT - LEFT);
        let sy = |y: f64| BOTTOM - (y - y0) / (y1 - y0) * (BOTTOM - TOP);

        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="Helvetica, Arial, sans-serif">"#
        );
        let _ = writeln!(s, r#"<title>{}</title>"#, escape(&self.title));
        let _ = writeln!(s, r##"<rect width="{W}" height="{H}" fill="#ffffff"/>"##);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="24" font-size="15" text-anchor="middle">{}</text>"#,
            (LEFT + RIGHT) / 2.0,
            escape(&self.title)
        );

        // frame and ticks
        let _ = writeln!(
            s,
            r##"<rect x="{LEFT}" y="{TOP}" width="{:.2}" height="{:.2}" fill="none" stroke="#000000" stroke-width="0.8"/>"##,
            RIGHT - LEFT,
            BOTTOM - TOP
        );
        for k in 0..=4 {
            let f = k as f64 / 4.0;
            let (x, y) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
            let _ = writeln!(
                s,
                r##"<line x1="{0:.2}" y1="{BOTTOM}" x2="{0:.2}" y2="{1:.2}" stroke="#000000" stroke-width="0.8"/><text x="{0:.2}" y="{2:.2}" font-size="10" text-anchor="middle">{3}</text>"##,
                sx(x),
                BOTTOM + 4.0,
                BOTTOM + 16.0,
                tick(x)
            );
            let _ = writeln!(
                s,
                r##"<line x1="{LEFT}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="#000000" stroke-width="0.8"/><text x="{2:.2}" y="{3:.2}" font-size="10" text-anchor="end">{4}</text>"##,
                sy(y),
                LEFT - 4.0,
                LEFT - 6.0,
                sy(y) + 3.5,
                tick(y)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
            (LEFT + RIGHT) / 2.0,
            BOTTOM + 36.0,
            escape(&self.axis_labels[0])
        );
        let _ = writeln!(
            s,
            r#"<text x="18" y="{0:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 18 {0:.2})">{1}</text>"#,
            (TOP + BOTTOM) / 2.0,
            escape(&self.axis_labels[1])
        );

        // outlines, outermost first so inner ones are drawn on top
        let m = self.layers.len();
        let _ = writeln!(s, r#"<g id="regions" fill="none" stroke-linejoin="round">"#);
        for (i, layer) in self.layers.iter().enumerate() {
            let color = shade(i, m);
            for ring in &layer.rings {
                let pts: Vec<String> = ring
                    .iter()
                    .map(|p| format!("{:.2},{:.2}", sx(p[0]), sy(p[1])))
                    .collect();
                let _ = writeln!(
                    s,
                    r#"<polygon data-alpha="{}" points="{}" stroke="{color}" stroke-width="1.4"/>"#,
                    layer.alpha,
                    pts.join(" ")
                );
            }
        }
        let _ = writeln!(s, "</g>");

        let _ = writeln!(s, r##"<g id="points" fill="#b2182b">"##);
        for p in &self.points {
            let _ = writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.6"/>"#,
                sx(p.x),
                sy(p.y)
            );
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, r##"<g id="labels" font-size="9" fill="#333333">"##);
        for p in self.points.iter().filter(|p| p.label.is_some()) {
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
                sx(p.x) + 4.0,
                sy(p.y) - 3.0,
                escape(p.label.as_deref().unwrap_or_default())
            );
        }
        let _ = writeln!(s, "</g>");

        let _ = writeln!(s, r#"<g id="legend" font-size="11">"#);
        let _ = writeln!(s, r#"<text x="{}" y="{TOP}">alpha</text>"#, RIGHT + 20.0);
        for (i, layer) in self.layers.iter().enumerate() {
            let y = TOP + 18.0 + 16.0 * i as f64;
            let _ = writeln!(
                s,
                r#"<line x1="{0}" y1="{1:.2}" x2="{2}" y2="{1:.2}" stroke="{3}" stroke-width="2"/><text x="{4}" y="{5:.2}">{6}</text>"#,
                RIGHT + 20.0,
                y,
                RIGHT + 42.0,
                shade(i, m),
                RIGHT + 48.0,
                y + 4.0,
                alpha_label(layer.alpha)
            );
        }
        let _ = writeln!(s, "</g>");
        s.push_str("</svg>\n");
        s
    }
}

/// Gray level of layer `i` of `m`: light for the outermost, black for the innermost.
fn shade(i: usize, m: usize) -> String {
    let f = if m > 1 { i as f64 / (m - 1) as f64 } else { 1.0 };
    let g = (190.0 * (1.0 - f)).round() as u8;
    format!("#{g:02x}{g:02x}{g:02x}")
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

fn alpha_label(a: f64) -> String {
    let s = format!("{a:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Writes `bytes` to `path` through a temporary file in the same directory and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes)
        .and_then(|_| tmp.flush())
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn export_region_svg(doc: &ContourDocument, path: &Path) -> CliResult<()> {
    if doc.is_empty() {
        return Err(CliError::Usage("nothing to draw: document has no layers and no points".into()));
    }
    write_atomic(path, doc.to_svg().as_bytes())
}

pub fn export_region_json(doc: &ContourDocument, path: &Path) -> CliResult<()> {
    let mut text = doc.to_json();
    text.push('\n');
    write_atomic(path, text.as_bytes())
}
