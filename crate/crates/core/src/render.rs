//! Deterministic SVG output. Elements are emitted in sorted vertex and edge
//! order with fixed-precision coordinates, so equal inputs give equal bytes.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::mechanism::Trajectory;
use crate::model::{Configuration, Edge, Framework, PinnedGraph, Point};
use crate::numeric::{Motion, SelfStress};
use crate::reciprocal::ReciprocalDiagram;

#[derive(Clone, Debug, PartialEq)]
pub struct Style {
    pub stroke: String,
    pub fill: String,
    pub width: f64,
    /// Circle radius for vertex styles.
    pub radius: f64,
}

impl Style {
    fn new(stroke: &str, fill: &str, width: f64, radius: f64) -> Self {
        Style { stroke: stroke.into(), fill: fill.into(), width, radius }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    pub width: u32,
    pub height: u32,
    pub margin: f64,
    pub inner: Style,
    pub pin: Style,
    pub bar: Style,
    pub driver: Style,
    pub reciprocal: Style,
    pub show_velocities: bool,
    /// Bar width by stress magnitude, color by sign.
    pub show_stress: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            width: 640,
            height: 480,
            margin: 24.0,
            inner: Style::new("#222222", "#ffffff", 1.5, 4.0),
            pin: Style::new("#222222", "#222222", 1.5, 5.0),
            bar: Style::new("#444444", "none", 2.0, 0.0),
            driver: Style::new("#d95f02", "none", 2.0, 0.0),
            reciprocal: Style::new("#1b9e77", "none", 1.5, 3.0),
            show_velocities: true,
            show_stress: true,
        }
    }
}

/// What to draw.
#[derive(Clone, Copy, Debug)]
pub enum Scene<'a> {
    Framework {
        framework: &'a Framework,
        stress: Option<&'a SelfStress>,
        motion: Option<&'a Motion>,
        driver: Option<&'a Edge>,
    },
    /// Framework and reciprocal side by side; partner edges share `data-edge`.
    Reciprocal { framework: &'a Framework, diagram: &'a ReciprocalDiagram },
    /// Sampled poses overlaid, the last one opaque.
    Trajectory { graph: &'a PinnedGraph, trajectory: &'a Trajectory, driver: Option<&'a Edge> },
}

/// Maps a bounding box into a pixel panel with `y` pointing up.
struct View {
    min: Point,
    scale: f64,
    x0: f64,
    y0: f64,
    panel_h: f64,
}

impl View {
    fn fit<'a>(points: impl Iterator<Item = &'a Point> + Clone, x0: f64, w: f64, h: f64, margin: f64) -> Result<View> {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min = min.inf(p);
            max = max.sup(p);
        }
        if !min.x.is_finite() {
            return Err(Error::EmptyGraph);
        }
        let span = (max - min).max().max(1e-12);
        let scale = ((w - 2.0 * margin).min(h - 2.0 * margin) / span).max(0.0);
        let used = (max - min) * scale;
        let x0 = x0 + margin + ((w - 2.0 * margin) - used.x) / 2.0;
        let y0 = margin + ((h - 2.0 * margin) - used.y) / 2.0;
        Ok(View { min, scale, x0, y0, panel_h: used.y })
    }

    fn map(&self, p: Point) -> (f64, f64) {
        let q = (p - self.min) * self.scale;
        (self.x0 + q.x, self.y0 + self.panel_h - q.y)
    }
}

fn line(out: &mut String, view: &View, a: Point, b: Point, style: &Style, width: f64, extra: &str) {
    let (x1, y1) = view.map(a);
    let (x2, y2) = view.map(b);
    let _ = writeln!(
        out,
        r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{}" stroke-width="{width:.3}"{extra}/>"#,
        style.stroke
    );
}

fn circle(out: &mut String, view: &View, p: Point, style: &Style, extra: &str) {
    let (x, y) = view.map(p);
    let _ = writeln!(
        out,
        r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}" stroke="{}" fill="{}" stroke-width="{:.3}"{extra}/>"#,
        style.radius, style.stroke, style.fill, style.width
    );
}

fn point(c: &Configuration, v: &crate::model::VertexId) -> Result<Point> {
    c.get(v).ok_or_else(|| Error::InvalidConfiguration(format!("vertex `{v}` has no position")))
}

fn bars(
    out: &mut String,
    view: &View,
    g: &PinnedGraph,
    c: &Configuration,
    spec: &RenderSpec,
    stress: Option<&SelfStress>,
    extra: &str,
) -> Result<()> {
    let max = stress.map(|s| s.max_abs()).unwrap_or(0.0);
    for e in g.edges() {
        let (a, b) = (point(c, e.first())?, point(c, e.second())?);
        let mut style = spec.bar.clone();
        let mut width = style.width;
        if let (Some(s), true) = (stress, spec.show_stress && max > 0.0) {
            let l = s.get(e);
            style.stroke = if l > 0.0 { "#c0392b".into() } else { "#2c7fb8".into() };
            width = style.width * (0.5 + 2.5 * l.abs() / max);
        }
        line(out, view, a, b, &style, width, &format!(r#" data-edge="{e}"{extra}"#));
    }
    Ok(())
}

fn vertices(out: &mut String, view: &View, g: &PinnedGraph, c: &Configuration, spec: &RenderSpec) -> Result<()> {
    for v in g.inner() {
        circle(out, view, point(c, v)?, &spec.inner, &format!(r#" data-vertex="{v}""#));
    }
    for v in g.pins() {
        circle(out, view, point(c, v)?, &spec.pin, &format!(r#" data-vertex="{v}" class="pin""#));
    }
    Ok(())
}

fn header(w: u32, h: u32) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    )
}

pub fn render_svg(scene: &Scene, spec: &RenderSpec) -> Result<String> {
    if spec.width == 0 || spec.height == 0 {
        return Err(Error::InvalidConfiguration("render size must be positive".into()));
    }
    let (w, h) = (spec.width as f64, spec.height as f64);
    let mut out = header(spec.width, spec.height);
    match *scene {
        Scene::Framework { framework, stress, motion, driver } => {
            let g = framework.graph();
            if g.vertices().is_empty() {
                return Err(Error::EmptyGraph);
            }
            let c = framework.config();
            let pts: Vec<Point> = c.iter().map(|(_, p)| *p).collect();
            let view = View::fit(pts.iter(), 0.0, w, h, spec.margin)?;
            bars(&mut out, &view, g, c, spec, stress, "")?;
            if let Some(d) = driver {
                let (a, b) = (point(c, d.first())?, point(c, d.second())?);
                line(&mut out, &view, a, b, &spec.driver, spec.driver.width, r#" stroke-dasharray="6 4" class="driver""#);
            }
            if let (Some(m), true) = (motion, spec.show_velocities) {
                let top = m.max_speed();
                let reach = 0.15 * crate::model::diameter(pts.iter()).max(1e-12);
                for v in g.inner() {
                    let p = point(c, v)?;
                    let vel = if top > 0.0 { m.get(v) * (reach / top) } else { Point::zeros() };
                    line(&mut out, &view, p, p + vel, &spec.driver, 1.0, r#" class="velocity""#);
                }
            }
            vertices(&mut out, &view, g, c, spec)?;
        }
        Scene::Reciprocal { framework, diagram } => {
            let g = framework.graph();
            let c = framework.config();
            let pts: Vec<Point> = c.iter().map(|(_, p)| *p).collect();
            let left = View::fit(pts.iter(), 0.0, w / 2.0, h, spec.margin)?;
            let right = View::fit(diagram.dual_points.iter(), w / 2.0, w / 2.0, h, spec.margin)?;
            out.push_str("<g id=\"primal\">\n");
            bars(&mut out, &left, g, c, spec, Some(&diagram.stress), "")?;
            vertices(&mut out, &left, g, c, spec)?;
            out.push_str("</g>\n<g id=\"reciprocal\">\n");
            for (k, e) in g.edges().iter().enumerate() {
                let (a, b) = diagram.segment(k);
                line(&mut out, &right, a, b, &spec.reciprocal, spec.reciprocal.width, &format!(r#" data-edge="{e}""#));
            }
            for (f, q) in diagram.dual_points.iter().enumerate() {
                circle(&mut out, &right, *q, &spec.reciprocal, &format!(r#" data-face="f{f}""#));
            }
            out.push_str("</g>\n");
        }
        Scene::Trajectory { graph, trajectory, driver } => {
            let samples = &trajectory.samples;
            if samples.is_empty() || graph.vertices().is_empty() {
                return Err(Error::EmptyGraph);
            }
            let all: Vec<Point> = samples.iter().flat_map(|s| s.config.iter().map(|(_, p)| *p)).collect();
            let view = View::fit(all.iter(), 0.0, w, h, spec.margin)?;
            let stride = samples.len().div_ceil(20).max(1);
            let last = samples.len() - 1;
            for (i, s) in samples.iter().enumerate() {
                if i % stride != 0 && i != last {
                    continue;
                }
                let opacity = if i == last { 1.0 } else { 0.25 };
                let _ = writeln!(out, r#"<g class="pose" data-sample="{i}" opacity="{opacity}">"#);
                bars(&mut out, &view, graph, &s.config, spec, None, "")?;
                if let Some(d) = driver {
                    let (a, b) = (point(&s.config, d.first())?, point(&s.config, d.second())?);
                    line(&mut out, &view, a, b, &spec.driver, spec.driver.width, r#" stroke-dasharray="6 4" class="driver""#);
                }
                vertices(&mut out, &view, graph, &s.config, spec)?;
                out.push_str("</g>\n");
            }
            for ev in &trajectory.events {
                if let Some(s) = samples.get(ev.index) {
                    for v in graph.inner() {
                        let mut mark = spec.driver.clone();
                        mark.fill = "none".into();
                        mark.radius = 8.0;
                        circle(&mut out, &view, point(&s.config, v)?, &mark, &format!(r#" class="event" data-kind="{:?}""#, ev.kind));
                    }
                }
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
