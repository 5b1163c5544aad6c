//! Rank-two pictures of the wall-avoidance bounds: the Weyl chamber,
//! `conv W(ρ − Θ)` and `conv W(c_α λ_α)` for every simple root, as SVG.

use std::fmt::Write;

use serde::Serialize;

use crate::checks::bounds::{bound_from, WallBound};
use crate::cone::in_convex_hull;
use crate::error::{Error, Result};
use crate::lie::RootSystem;
use crate::rational::{self as r, vec_to_f64, QVec, Q};

const COLORS: [&str; 3] = ["#2e8b57", "#e08a1e", "#8b5a2b"];

#[derive(Clone, Debug, Serialize)]
pub struct Hull {
    pub label: String,
    pub color: &'static str,
    #[serde(skip)]
    pub exact_vertices: Vec<QVec>,
    /// Plane coordinates, counterclockwise.
    pub vertices: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FigureGeometry {
    pub preset: String,
    /// Unit directions of the chamber walls in the plane.
    pub chamber: [[f64; 2]; 2],
    pub rho_minus_theta: Hull,
    /// One per simple root; `None` when `c_α λ_α = 0`.
    pub walls: Vec<Option<Hull>>,
    #[serde(skip)]
    pub bounds: Vec<WallBound>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FigureCheck {
    /// Per simple root: vertex sets of the wall hull and `conv W(ρ − Θ)`
    /// agree within `1e-9`.
    pub coincides: Vec<bool>,
    /// Per simple root: every wall hull vertex lies in `conv W(ρ − Θ)`,
    /// decided exactly and on the plane coordinates.
    pub inside: Vec<bool>,
    /// Per simple root: the wall hull has strictly smaller area.
    pub smaller: Vec<bool>,
}

/// Geometry for a rank-two preset with Property (T) data `ρ − Θ`.
pub fn figure_geometry(rs: &RootSystem) -> Result<FigureGeometry> {
    figure_geometry_from(rs, &r::sub(rs.rho(), rs.theta()))
}

/// As [`figure_geometry`] with an explicit `ρ − Θ`.
pub fn figure_geometry_from(rs: &RootSystem, rho_minus_theta: &[Q]) -> Result<FigureGeometry> {
    if rs.rank() != 2 {
        return Err(Error::Precondition(format!("figures need rank 2, {} has rank {}", rs.label(), rs.rank())));
    }
    let u = rs.gram().euclidean_factor();
    let plane = |v: &[f64]| -> [f64; 2] { [u[0][0] * v[0] + u[0][1] * v[1], u[1][0] * v[0] + u[1][1] * v[1]] };
    let w = rs.weyl_group()?;
    let hull = |p: &[Q], label: String, color: &'static str| -> Hull {
        let mut exact: Vec<QVec> = Vec::new();
        for q in w.orbit(rs, p) {
            if !exact.contains(&q) {
                exact.push(q);
            }
        }
        let mut pts: Vec<([f64; 2], QVec)> = exact.into_iter().map(|q| (plane(&vec_to_f64(&q)), q)).collect();
        pts.sort_by(|a, b| a.0[1].atan2(a.0[0]).total_cmp(&b.0[1].atan2(b.0[0])));
        Hull {
            label,
            color,
            vertices: pts.iter().map(|p| p.0).collect(),
            exact_vertices: pts.into_iter().map(|p| p.1).collect(),
        }
    };
    let chamber = {
        let rays: Vec<[f64; 2]> = rs.extremal_rays().iter().map(|v| plane(&vec_to_f64(v))).collect();
        let unit = |p: [f64; 2]| {
            let n = p[0].hypot(p[1]);
            [p[0] / n, p[1] / n]
        };
        [unit(rays[0]), unit(rays[1])]
    };
    let rmt = hull(rho_minus_theta, "conv W(ρ − Θ)".into(), COLORS[0]);
    let mut walls = Vec::new();
    let mut bounds = Vec::new();
    for a in 0..2 {
        let b = bound_from(rs, a, rho_minus_theta)?;
        let p = r::scale(&b.c, &b.lambda);
        walls.push((!r::is_zero_vec(&p)).then(|| {
            hull(&p, format!("conv W(c λ), λ = ω_α{0} + ιω_α{0}, c = {1}", a + 1, r::fmt_q(&b.c)), COLORS[a + 1])
        }));
        bounds.push(b);
    }
    Ok(FigureGeometry { preset: rs.label().to_string(), chamber, rho_minus_theta: rmt, walls, bounds })
}

fn area(v: &[[f64; 2]]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i][0] * v[(i + 1) % n][1] - v[(i + 1) % n][0] * v[i][1]).sum::<f64>() / 2.0
}

fn same_vertices(a: &[[f64; 2]], b: &[[f64; 2]], tol: f64) -> bool {
    let close = |p: &[f64; 2], q: &[f64; 2]| (p[0] - q[0]).abs() <= tol && (p[1] - q[1]).abs() <= tol;
    a.len() == b.len()
        && a.iter().all(|p| b.iter().any(|q| close(p, q)))
        && b.iter().all(|q| a.iter().any(|p| close(p, q)))
}

/// Point in a counterclockwise convex polygon, boundary included.
fn in_polygon(poly: &[[f64; 2]], p: [f64; 2], tol: f64) -> bool {
    let n = poly.len();
    if n < 3 {
        return same_vertices(poly, &[p], tol) || poly.is_empty();
    }
    (0..n).all(|i| {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
        cross >= -tol * (b[0] - a[0]).hypot(b[1] - a[1])
    })
}

pub fn check_figure(g: &FigureGeometry) -> FigureCheck {
    let base = &g.rho_minus_theta;
    let mut out = FigureCheck { coincides: Vec::new(), inside: Vec::new(), smaller: Vec::new() };
    for w in &g.walls {
        match w {
            Some(h) => {
                out.coincides.push(same_vertices(&h.vertices, &base.vertices, 1e-9));
                let exact = h.exact_vertices.iter().all(|v| in_convex_hull(&base.exact_vertices, v));
                let float = h.vertices.iter().all(|&v| in_polygon(&base.vertices, v, 1e-9));
                out.inside.push(exact && float);
                out.smaller.push(area(&h.vertices) < area(&base.vertices) - 1e-9);
            }
            None => {
                out.coincides.push(base.vertices.is_empty() || r::is_zero_vec(&base.exact_vertices[0]));
                out.inside.push(true);
                out.smaller.push(area(&base.vertices) > 1e-9);
            }
        }
    }
    out
}

const SIZE: f64 = 600.0;

/// Deterministic SVG: the same geometry always gives the same bytes.
pub fn render_svg(g: &FigureGeometry) -> String {
    let all = g.walls.iter().flatten().chain([&g.rho_minus_theta]).flat_map(|h| h.vertices.iter());
    let radius = all.map(|p| p[0].hypot(p[1])).fold(0.0, f64::max).max(1.0);
    let scale = 0.36 * SIZE / radius;
    let c = SIZE / 2.0;
    let pt = |p: [f64; 2]| format!("{:.4},{:.4}", c + scale * p[0], c - scale * p[1]);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(s, r#"<text x="{c}" y="24" text-anchor="middle" font-size="15">{}</text>"#, escape(&g.preset));
    // Chamber wedge out to 1.3 times the largest hull.
    let reach = 1.3 * radius;
    let [a, b] = g.chamber;
    let _ = writeln!(
        s,
        r##"<polygon points="{} {} {}" fill="#e8e8e8" stroke="none"/>"##,
        pt([0.0, 0.0]),
        pt([reach * a[0], reach * a[1]]),
        pt([reach * b[0], reach * b[1]])
    );
    let _ = writeln!(s, r##"<line x1="12" y1="{c}" x2="{}" y2="{c}" stroke="#999999"/>"##, SIZE - 12.0);
    let _ = writeln!(s, r##"<line x1="{c}" y1="40" x2="{c}" y2="{}" stroke="#999999"/>"##, SIZE - 12.0);
    let mut hulls = vec![&g.rho_minus_theta];
    // Larger hulls first so coinciding or nested ones stay visible.
    let mut walls: Vec<&Hull> = g.walls.iter().flatten().collect();
    walls.sort_by(|x, y| area(&y.vertices).total_cmp(&area(&x.vertices)));
    hulls.extend(walls);
    for (k, h) in hulls.iter().enumerate() {
        let pts: Vec<String> = h.vertices.iter().map(|&p| pt(p)).collect();
        let dash = if k == 0 { "" } else { r#" stroke-dasharray="6 3""# };
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{}" fill-opacity="0.25" stroke="{}" stroke-width="2"{dash}/>"#,
            pts.join(" "),
            h.color,
            h.color
        );
    }
    let legend: Vec<&Hull> = g.walls.iter().flatten().collect();
    for (k, h) in [&g.rho_minus_theta].into_iter().chain(legend).enumerate() {
        let y = SIZE - 70.0 + 18.0 * k as f64;
        let _ = writeln!(s, r#"<rect x="16" y="{}" width="12" height="12" fill="{}"/>"#, y - 10.0, h.color);
        let _ = writeln!(s, r#"<text x="34" y="{y}">{}</text>"#, escape(&h.label));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn so25_caption() {
        let rs = RootSystem::preset("so(2,5)").unwrap();
        let g = figure_geometry(&rs).unwrap();
        assert_eq!(g.rho_minus_theta.vertices.len(), 4);
        let chk = check_figure(&g);
        assert_eq!(chk.coincides, vec![false, true]);
        assert_eq!(chk.inside, vec![true, true]);
        assert_eq!(chk.smaller, vec![true, false]);
        let svg = render_svg(&g);
        assert_eq!(svg, render_svg(&figure_geometry(&rs).unwrap()));
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<polygon").count(), 4);
    }

    #[test]
    fn zero_bound_draws_one_hull() {
        let rs = RootSystem::preset("so(2,5)").unwrap();
        // Vanishes on the chamber ray (1, 1), so c = 0 for both roots.
        let g = figure_geometry_from(&rs, &[q(1), q(-1)]).unwrap();
        assert!(g.bounds.iter().all(|b| b.c == q(0)));
        assert!(g.walls.iter().all(Option::is_none));
        assert_eq!(render_svg(&g).matches("<polygon").count(), 2);
    }

    #[test]
    fn rank_three_is_rejected() {
        let rs = RootSystem::preset("b3").unwrap();
        assert!(figure_geometry(&rs).is_err());
    }
}
