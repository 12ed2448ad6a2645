//! Standalone SVG figures.
//!
//! A figure is assembled as a list of items in data coordinates and then
//! written in one pass. Coordinates are printed with two decimals and items
//! keep their construction order, so the output is a pure function of the
//! figure request.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;

use num_complex::Complex64;

use kms_core::borderline::{b_curve, f_curve, trace_default};
use kms_core::classification::{bisector_outward, scan_path, Classifier};
use kms_core::matrix::{Dimension, EigType};
use kms_core::singularities::{find_cusps, parabola_model, Opening, PHASE_GRID};

use crate::{CliError, FigureArgs, FigureId};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 44.0;
const MARGIN_BOTTOM: f64 = 64.0;

/// What to draw and the parameters it needs.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureRequest {
    pub id: FigureId,
    pub n: Dimension,
    pub eig_type: EigType,
    /// Labelling raster for `Curves`.
    pub resolution: usize,
    /// `Bifurcation`: choose the cusp nearest this point.
    pub near: Option<Complex64>,
    /// `Bifurcation`: direction of travel; the outward bisector if absent.
    pub dir: Option<Complex64>,
    /// `Bifurcation`: the scan covers `d ∈ [-width, width]`.
    pub width: f64,
    pub steps: usize,
}

impl FigureRequest {
    pub fn new(id: FigureId, n: Dimension, eig_type: EigType) -> Self {
        FigureRequest { id, n, eig_type, resolution: 200, near: None, dir: None, width: 0.02, steps: 201 }
    }

    pub fn from_args(a: &FigureArgs) -> Self {
        FigureRequest {
            id: a.id,
            n: a.n,
            eig_type: a.eig_type,
            resolution: a.resolution as usize,
            near: a.near,
            dir: a.dir,
            width: a.width,
            steps: a.steps as usize,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stroke {
    Solid,
    Dashed,
    DotDash,
    Dotted,
}

impl Stroke {
    fn for_type(t: EigType) -> Self {
        match t {
            EigType::Type1 => Stroke::Solid,
            EigType::Type2 => Stroke::Dashed,
        }
    }

    fn dasharray(self) -> Option<&'static str> {
        match self {
            Stroke::Solid => None,
            Stroke::Dashed => Some("7 4"),
            Stroke::DotDash => Some("9 3 2 3"),
            Stroke::Dotted => Some("2 3"),
        }
    }
}

#[derive(Debug, Clone)]
enum Item {
    Line { points: Vec<(f64, f64)>, stroke: Stroke, class: String },
    Text { at: (f64, f64), text: String, class: &'static str },
    /// Vertical rule across the plot area at abscissa `x`.
    VRule { x: f64, stroke: Stroke, class: &'static str },
    /// Horizontal rule across the plot area at ordinate `y`.
    HRule { y: f64, stroke: Stroke, class: &'static str },
    Dot { at: (f64, f64), class: &'static str },
}

#[derive(Debug, Clone)]
struct Plot {
    title: String,
    x_label: &'static str,
    y_label: &'static str,
    equal_aspect: bool,
    items: Vec<Item>,
}

impl Plot {
    fn new(title: String, x_label: &'static str, y_label: &'static str, equal_aspect: bool) -> Self {
        Plot { title, x_label, y_label, equal_aspect, items: Vec::new() }
    }

    /// Data bounding box of every positioned item, padded by 6%.
    fn view(&self) -> (f64, f64, f64, f64) {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        let mut add = |x: f64, y: f64| {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        };
        for item in &self.items {
            match item {
                Item::Line { points, .. } => points.iter().for_each(|&(x, y)| add(x, y)),
                Item::Text { at, .. } | Item::Dot { at, .. } => add(at.0, at.1),
                Item::VRule { .. } | Item::HRule { .. } => {}
            }
        }
        let pad_x = 0.06 * (x1 - x0).max(1e-9);
        let pad_y = 0.06 * (y1 - y0).max(1e-9);
        let (mut x0, mut x1, mut y0, mut y1) = (x0 - pad_x, x1 + pad_x, y0 - pad_y, y1 + pad_y);
        if self.equal_aspect {
            let pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
            let ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
            let scale = ((x1 - x0) / pw).max((y1 - y0) / ph);
            let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
            x0 = cx - 0.5 * scale * pw;
            x1 = cx + 0.5 * scale * pw;
            y0 = cy - 0.5 * scale * ph;
            y1 = cy + 0.5 * scale * ph;
        }
        (x0, x1, y0, y1)
    }

    fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.view();
        let left = MARGIN_LEFT;
        let right = WIDTH - MARGIN_RIGHT;
        let top = MARGIN_TOP;
        let bottom = HEIGHT - MARGIN_BOTTOM;
        let px = |x: f64| left + (x - x0) / (x1 - x0) * (right - left);
        let py = |y: f64| bottom - (y - y0) / (y1 - y0) * (bottom - top);

        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="Helvetica, Arial, sans-serif">"#
        );
        let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(s, r#"<text class="title" x="{:.2}" y="26" font-size="15" text-anchor="middle">{}</text>"#, 0.5 * WIDTH, escape(&self.title));
        let _ = writeln!(s, r#"<defs><clipPath id="plot-area"><rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}"/></clipPath></defs>"#, right - left, bottom - top);

        // Axes: frame, ticks and labels.
        let _ = writeln!(s, r#"<g class="axes" stroke="black" stroke-width="1" fill="none">"#);
        let _ = writeln!(s, r#"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}"/>"#, right - left, bottom - top);
        for t in ticks(x0, x1) {
            let _ = writeln!(s, r#"<line x1="{0:.2}" y1="{bottom:.2}" x2="{0:.2}" y2="{1:.2}"/>"#, px(t), bottom - 6.0);
        }
        for t in ticks(y0, y1) {
            let _ = writeln!(s, r#"<line x1="{left:.2}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}"/>"#, py(t), left + 6.0);
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, r#"<g class="tick-labels" font-size="11" fill="black">"#);
        let xs = ticks(x0, x1);
        let xd = tick_decimals(&xs);
        for &t in &xs {
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, px(t), bottom + 16.0, tick_text(t, xd));
        }
        let ys = ticks(y0, y1);
        let yd = tick_decimals(&ys);
        for &t in &ys {
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, left - 6.0, py(t) + 4.0, tick_text(t, yd));
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, r#"<text class="x-label" x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#, 0.5 * (left + right), HEIGHT - 18.0, escape(self.x_label));
        let _ = writeln!(
            s,
            r#"<text class="y-label" x="20" y="{0:.2}" font-size="13" text-anchor="middle" transform="rotate(-90 20 {0:.2})">{1}</text>"#,
            0.5 * (top + bottom),
            escape(self.y_label)
        );

        let _ = writeln!(s, r#"<g clip-path="url(#plot-area)">"#);
        for item in &self.items {
            match item {
                Item::Line { points, stroke, class } => {
                    let pts: Vec<String> = points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
                    let _ = writeln!(
                        s,
                        r#"<polyline class="{class}" fill="none" stroke="black" stroke-width="1.3"{} points="{}"/>"#,
                        dash_attr(*stroke),
                        pts.join(" ")
                    );
                }
                Item::Text { at, text, class } => {
                    let _ = writeln!(
                        s,
                        r#"<text class="{class}" x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
                        px(at.0),
                        py(at.1) + 4.0,
                        escape(text)
                    );
                }
                Item::VRule { x, stroke, class } => {
                    let _ = writeln!(
                        s,
                        r#"<line class="{class}" x1="{0:.2}" y1="{top:.2}" x2="{0:.2}" y2="{bottom:.2}" stroke="gray" stroke-width="1"{1}/>"#,
                        px(*x),
                        dash_attr(*stroke)
                    );
                }
                Item::HRule { y, stroke, class } => {
                    let _ = writeln!(
                        s,
                        r#"<line class="{class}" x1="{left:.2}" y1="{0:.2}" x2="{right:.2}" y2="{0:.2}" stroke="gray" stroke-width="1"{1}/>"#,
                        py(*y),
                        dash_attr(*stroke)
                    );
                }
                Item::Dot { at, class } => {
                    let _ = writeln!(s, r#"<circle class="{class}" cx="{:.2}" cy="{:.2}" r="3" fill="black"/>"#, px(at.0), py(at.1));
                }
            }
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(s, "</svg>");
        s
    }
}

fn dash_attr(stroke: Stroke) -> String {
    stroke.dasharray().map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default()
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Tick positions at a 1-2-5 step giving roughly six ticks in `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].into_iter().map(|m| m * mag).find(|&s| s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_decimals(ticks: &[f64]) -> usize {
    match ticks {
        [a, b, ..] => (-(b - a).log10().floor()).max(0.0) as usize,
        _ => 2,
    }
}

fn tick_text(t: f64, decimals: usize) -> String {
    let s = format!("{t:.decimals$}");
    // Avoid "-0" and "-0.00".
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn points(z: impl Iterator<Item = Complex64>) -> Vec<(f64, f64)> {
    z.map(|z| (z.re, z.im)).collect()
}

/// Writes the figure described by `fig` as a standalone SVG document.
pub fn emit_figure<W: Write>(fig: &FigureRequest, mut sink: W) -> Result<(), CliError> {
    let plot = match fig.id {
        FigureId::Curves => curves_plot(fig)?,
        FigureId::Phase => phase_plot(fig)?,
        FigureId::Parabola => parabola_plot(fig)?,
        FigureId::Bifurcation => bifurcation_plot(fig)?,
    };
    sink.write_all(plot.render().as_bytes())?;
    Ok(())
}

fn curves_plot(fig: &FigureRequest) -> Result<Plot, CliError> {
    let n = fig.n;
    let classifier = Classifier::new(n)?;
    let mut plot = Plot::new(
        format!("Borderline curves, n = {n} (solid: type 1, dashed: type 2)"),
        "Re rho",
        "Im rho",
        true,
    );
    for t in EigType::BOTH {
        let curve = classifier.curve(t);
        let mut pts = points(curve.points());
        pts.push(pts[0]);
        plot.items.push(Item::Line { points: pts, stroke: Stroke::for_type(t), class: format!("curve type-{}", t.index()) });
    }
    for region in classifier.region_labels(fig.resolution)? {
        let [j1, j2] = region.label;
        plot.items.push(Item::Text {
            at: (region.rho.re(), region.rho.im()),
            text: format!("[{j1},{j2}]"),
            class: "region-label",
        });
    }
    Ok(plot)
}

/// Samples of `arg b(u)` over `(-pi, pi]` split into continuous pieces. The
/// returned jumps are those away from the real-axis crossings `u = 0, pi`,
/// where the borderline eigenvalue is real and the principal value flips
/// sign by symmetry alone.
pub fn phase_pieces(n: Dimension, t: EigType) -> Result<(Vec<Vec<(f64, f64)>>, Vec<f64>), CliError> {
    let m = PHASE_GRID.max(64 * n.get());
    let step = 2.0 * PI / m as f64;
    let mut pieces: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    let mut jumps = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 1..=m {
        let u = if k == m { PI } else { -PI + k as f64 * step };
        let a = b_curve(n, u, t)?.arg();
        if let Some((pu, pa)) = prev {
            if (a - pa).abs() > PI {
                let near_axis = [pu, u].iter().any(|&x| x.abs() < 0.5 * step || (PI - x.abs()) < 0.5 * step) || pu * u < 0.0;
                if !near_axis {
                    jumps.push(0.5 * (pu + u));
                }
                pieces.push(Vec::new());
            }
        }
        pieces.last_mut().expect("at least one piece").push((u, a));
        prev = Some((u, a));
    }
    Ok((pieces, jumps))
}

fn phase_plot(fig: &FigureRequest) -> Result<Plot, CliError> {
    let (n, t) = (fig.n, fig.eig_type);
    let (pieces, jumps) = phase_pieces(n, t)?;
    let mut plot = Plot::new(
        format!("Phase of the type-{} borderline eigenvalue, n = {n}", t.index()),
        "u",
        "arg lambda",
        false,
    );
    for p in pieces.into_iter().filter(|p| !p.is_empty()) {
        plot.items.push(Item::Line { points: p, stroke: Stroke::Solid, class: "phase".into() });
    }
    for u in jumps {
        plot.items.push(Item::VRule { x: u, stroke: Stroke::Dotted, class: "jump" });
    }
    Ok(plot)
}

fn parabola_plot(fig: &FigureRequest) -> Result<Plot, CliError> {
    let (n, t) = (fig.n, fig.eig_type);
    let model = parabola_model(n, t);
    let u_max = 0.6;
    let k = 300;
    let curve: Vec<Complex64> = (-k..=k).map(|j| f_curve(n, u_max * j as f64 / k as f64, t)).collect::<Result<_, _>>()?;
    let (lo, hi) = curve.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), z| (a.min(z.re), b.max(z.re)));
    let far = match model.opening {
        Opening::TowardMinusX => lo,
        Opening::TowardPlusX => hi,
    };
    let mut plot = Plot::new(
        format!(
            "Type-{} curve near rho = {:.4} and its parabola model, n = {n}",
            t.index(),
            model.vertex
        ),
        "Re rho",
        "Im rho",
        false,
    );
    plot.items.push(Item::Line { points: points(curve.into_iter()), stroke: Stroke::for_type(t), class: "curve".into() });
    let m = 200;
    let arm = |sign: f64| -> Vec<(f64, f64)> {
        (0..=m)
            .map(|j| {
                let x = model.vertex + (far - model.vertex) * j as f64 / m as f64;
                (x, sign * model.y_squared(x).max(0.0).sqrt())
            })
            .collect()
    };
    let mut outline = arm(1.0);
    outline.reverse();
    outline.extend(arm(-1.0).into_iter().skip(1));
    plot.items.push(Item::Line { points: outline, stroke: Stroke::DotDash, class: "parabola".into() });
    plot.items.push(Item::Dot { at: (model.vertex, 0.0), class: "vertex" });
    Ok(plot)
}

fn bifurcation_plot(fig: &FigureRequest) -> Result<Plot, CliError> {
    let (n, t) = (fig.n, fig.eig_type);
    let cusps = find_cusps(n, t)?;
    let cusp = match fig.near {
        Some(z) => cusps.iter().min_by(|a, b| (a.rho0.0 - z).norm().total_cmp(&(b.rho0.0 - z).norm())),
        None => cusps.iter().find(|c| c.u0 > 0.0),
    }
    .ok_or_else(|| CliError::Usage(format!("the type-{} curve for n = {n} has no cusps", t.index())))?;
    let dir = match fig.dir {
        Some(d) => d / d.norm(),
        None => bisector_outward(&trace_default(n, t)?, cusp)?,
    };
    let scan = scan_path(n, t, cusp.rho0.0, dir, (-fig.width, fig.width), fig.steps)?;
    let mut plot = Plot::new(
        format!(
            "Type-{} eigenvalue moduli near n = {n} through the cusp {:.5}{:+.5}i",
            t.index(),
            cusp.rho0.re(),
            cusp.rho0.im()
        ),
        "d",
        "|lambda|",
        false,
    );
    let lower = scan.distances.iter().zip(&scan.pair_magnitudes).map(|(&d, &(a, b))| (d, a.min(b))).collect();
    let upper = scan.distances.iter().zip(&scan.pair_magnitudes).map(|(&d, &(a, b))| (d, a.max(b))).collect();
    plot.items.push(Item::Line { points: lower, stroke: Stroke::Solid, class: "modulus lower".into() });
    plot.items.push(Item::Line { points: upper, stroke: Stroke::Dashed, class: "modulus upper".into() });
    plot.items.push(Item::HRule { y: n.as_f64(), stroke: Stroke::Dotted, class: "threshold" });
    plot.items.push(Item::VRule { x: 0.0, stroke: Stroke::Dotted, class: "cusp" });
    Ok(plot)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tick_steps() {
        assert_eq!(ticks(0.0, 6.0), vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let t = ticks(-2.1, 2.1);
        assert!(t.contains(&0.0) && t.len() >= 4);
        assert_eq!(tick_text(-0.0, 2), "0.00");
        assert_eq!(tick_decimals(&[0.0, 0.05]), 2);
    }

    #[test]
    fn escaping() {
        assert_eq!(escape("a<b & c>d"), "a&lt;b &amp; c&gt;d");
    }
}
