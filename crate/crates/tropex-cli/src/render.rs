//! Plane pictures as SVG. Targets are drawn solid, curves dashed on top, and cells that are
//! new relative to the target (bounded fiber cells, rays added by a subdivision) highlighted.

use std::fmt::Write;

use num_traits::ToPrimitive;
use thiserror::Error;

use tropex::complex::Cell;
use tropex::linalg::*;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("cannot draw {0}-dimensional data in the plane")]
    DimensionTooHigh(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Target,
    Highlight,
    Curve,
    Marked,
}

impl Style {
    fn stroke(self) -> &'static str {
        match self {
            Style::Target => "#333333",
            Style::Highlight => "#c0392b",
            Style::Curve => "#1f5fbf",
            Style::Marked => "#000000",
        }
    }

    fn fill(self) -> &'static str {
        match self {
            Style::Highlight => "#f5d5cf",
            _ => "#e8e8e8",
        }
    }
}

type P = (f64, f64);

enum Shape {
    Dot(P),
    Segment(P, P),
    Ray(P, P),
    Polygon(Vec<P>, Vec<P>),
}

/// Shapes collected in drawing order.
#[derive(Default)]
pub struct Scene {
    shapes: Vec<(Shape, Style)>,
}

fn f(x: &Q) -> f64 {
    x.to_f64().unwrap_or(0.0)
}

/// Points of `R^1` or `R^2` as plane points.
fn planar(v: &[Q]) -> Result<P, RenderError> {
    match v.len() {
        0 => Ok((0.0, 0.0)),
        1 => Ok((f(&v[0]), 0.0)),
        2 => Ok((f(&v[0]), f(&v[1]))),
        n => Err(RenderError::DimensionTooHigh(n)),
    }
}

fn cross(o: P, a: P, b: P) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn hull(mut pts: Vec<P>) -> Vec<P> {
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<P> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

impl Scene {
    pub fn dot(&mut self, p: &[Q], style: Style) -> Result<(), RenderError> {
        self.shapes.push((Shape::Dot(planar(p)?), style));
        Ok(())
    }

    pub fn segment(&mut self, a: &[Q], b: &[Q], style: Style) -> Result<(), RenderError> {
        self.shapes.push((Shape::Segment(planar(a)?, planar(b)?), style));
        Ok(())
    }

    pub fn ray(&mut self, from: &[Q], dir: &[Q], style: Style) -> Result<(), RenderError> {
        self.shapes.push((Shape::Ray(planar(from)?, planar(dir)?), style));
        Ok(())
    }

    /// A cell `conv(vertices) + cone(rays)` of dimension at most 2.
    pub fn cell(&mut self, c: &Cell, style: Style) -> Result<(), RenderError> {
        match c.dim() {
            0 => self.dot(&c.vertices[0], style),
            1 if c.rays.is_empty() => self.segment(&c.vertices[0], &c.vertices[c.vertices.len() - 1], style),
            1 => self.ray(&c.vertices[0], &c.rays[0], style),
            2 => {
                let vs = c.vertices.iter().map(|v| planar(v)).collect::<Result<Vec<_>, _>>()?;
                let rs = c.rays.iter().map(|r| planar(r)).collect::<Result<Vec<_>, _>>()?;
                self.shapes.push((Shape::Polygon(vs, rs), style));
                Ok(())
            }
            d => Err(RenderError::DimensionTooHigh(d)),
        }
    }

    /// Half-width of the view: the finite part of the picture with some room for rays.
    fn extent(&self) -> f64 {
        let mut m: f64 = 1.0;
        let mut see = |p: &P| m = m.max(p.0.abs()).max(p.1.abs());
        for (s, _) in &self.shapes {
            match s {
                Shape::Dot(p) | Shape::Ray(p, _) => see(p),
                Shape::Segment(a, b) => {
                    see(a);
                    see(b);
                }
                Shape::Polygon(vs, _) => vs.iter().for_each(&mut see),
            }
        }
        1.5 * m
    }

    pub fn to_svg(&self) -> String {
        let h = self.extent();
        let far = 4.0 * h;
        let w = h / 120.0;
        let out_to = |p: P, d: P| {
            let n = (d.0 * d.0 + d.1 * d.1).sqrt().max(f64::MIN_POSITIVE);
            (p.0 + far * d.0 / n, p.1 + far * d.1 / n)
        };
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="480" height="480" viewBox="{:.4} {:.4} {:.4} {:.4}">"#,
            -h,
            -h,
            2.0 * h,
            2.0 * h
        );
        let _ = writeln!(s, r#"<rect x="{:.4}" y="{:.4}" width="{:.4}" height="{:.4}" fill="white"/>"#, -h, -h, 2.0 * h, 2.0 * h);
        // SVG's y axis points down
        let xy = |p: P| (format!("{:.4}", p.0 + 0.0), format!("{:.4}", -p.1 + 0.0));
        let line = |s: &mut String, a: P, b: P, st: Style| {
            let dash = if st == Style::Curve { format!(r#" stroke-dasharray="{:.4} {:.4}""#, 4.0 * w, 2.5 * w) } else { String::new() };
            let width = if st == Style::Curve { 1.6 * w } else { w };
            let ((x1, y1), (x2, y2)) = (xy(a), xy(b));
            let _ = writeln!(s, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{}" stroke-width="{:.4}"{dash}/>"#, st.stroke(), width);
        };
        // fills first so that lines stay visible
        for (shape, st) in &self.shapes {
            if let Shape::Polygon(vs, rs) = shape {
                let mut pts = vs.clone();
                for &v in vs {
                    pts.extend(rs.iter().map(|&r| out_to(v, r)));
                }
                let poly: Vec<String> = hull(pts).into_iter().map(|p| { let (x, y) = xy(p); format!("{x},{y}") }).collect();
                let _ = writeln!(s, r#"<polygon points="{}" fill="{}" stroke="none"/>"#, poly.join(" "), st.fill());
            }
        }
        for (shape, st) in &self.shapes {
            match shape {
                Shape::Segment(a, b) => line(&mut s, *a, *b, *st),
                Shape::Ray(p, d) => line(&mut s, *p, out_to(*p, *d), *st),
                _ => {}
            }
        }
        for (shape, st) in &self.shapes {
            if let Shape::Dot(p) = shape {
                let (x, y) = xy(*p);
                let r = if *st == Style::Marked { 3.0 * w } else { 2.0 * w };
                let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="{r:.4}" fill="{}"/>"#, st.stroke());
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_a_square_with_an_inner_point() {
        let h = hull(vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.5, 0.5)]);
        assert_eq!(h.len(), 4);
    }

    #[test]
    fn three_dimensional_points_are_refused() {
        let mut s = Scene::default();
        assert!(matches!(s.dot(&qv(&[1, 2, 3]), Style::Target), Err(RenderError::DimensionTooHigh(3))));
    }

    #[test]
    fn curves_are_dashed() {
        let mut s = Scene::default();
        s.ray(&qv(&[0, 0]), &qv(&[1, 0]), Style::Target).unwrap();
        s.ray(&qv(&[0, 0]), &qv(&[0, 1]), Style::Curve).unwrap();
        let svg = s.to_svg();
        assert_eq!(svg.matches("<line").count(), 2);
        assert_eq!(svg.matches("stroke-dasharray").count(), 1);
        assert_eq!(svg, s.to_svg());
    }
}
