//! Benchmark boundaries: single-corner droplet, equilateral triangle,
//! L-shape, open wedge, and a smooth circle, together with boundary frames.

use crate::{Error, Result, Vec2};

/// Analytic parametric curve behind an [`Arc`].
#[derive(Debug, Clone, Copy)]
pub enum Curve {
    /// a + u * dir for u in [0, len]; dir is a unit vector.
    Segment { a: Vec2, dir: Vec2 },
    /// center + radius (cos u, sin u), counterclockwise.
    Circle { center: Vec2, radius: f64 },
    /// sin(k u) (cos u, sin u) with k = pi / theta; u in [0, theta].
    Droplet { k: f64 },
}

impl Curve {
    pub fn point(&self, u: f64) -> Vec2 {
        match *self {
            Curve::Segment { a, dir } => a + dir * u,
            Curve::Circle { center, radius } => {
                center + Vec2::new(radius * u.cos(), radius * u.sin())
            }
            Curve::Droplet { k } => {
                let r = (k * u).sin();
                Vec2::new(r * u.cos(), r * u.sin())
            }
        }
    }

    pub fn deriv(&self, u: f64) -> Vec2 {
        match *self {
            Curve::Segment { dir, .. } => dir,
            Curve::Circle { radius, .. } => Vec2::new(-radius * u.sin(), radius * u.cos()),
            Curve::Droplet { k } => {
                let (s, c) = (k * u).sin_cos();
                Vec2::new(k * c * u.cos() - s * u.sin(), k * c * u.sin() + s * u.cos())
            }
        }
    }

    pub fn deriv2(&self, u: f64) -> Vec2 {
        match *self {
            Curve::Segment { .. } => Vec2::zeros(),
            Curve::Circle { radius, .. } => Vec2::new(-radius * u.cos(), -radius * u.sin()),
            Curve::Droplet { k } => {
                let (s, c) = (k * u).sin_cos();
                let radial = Vec2::new(u.cos(), u.sin());
                let angular = Vec2::new(-u.sin(), u.cos());
                radial * (-(k * k + 1.0) * s) + angular * (2.0 * k * c)
            }
        }
    }

    /// gamma(u1) - gamma(u2) in a cancellation-free form, so that nearby
    /// points on deeply refined panels keep full relative accuracy.
    pub fn diff(&self, u1: f64, u2: f64) -> Vec2 {
        match *self {
            Curve::Segment { dir, .. } => dir * (u1 - u2),
            Curve::Circle { radius, .. } => {
                let sm = 0.5 * (u1 + u2);
                let dh = 0.5 * (u1 - u2);
                Vec2::new(-sm.sin(), sm.cos()) * (2.0 * radius * dh.sin())
            }
            Curve::Droplet { k } => {
                // sin(k u1)(cos u1, sin u1) - sin(k u2)(cos u2, sin u2)
                // = [sin(k u1) - sin(k u2)] (cos u1, sin u1)
                //   + sin(k u2) [(cos u1 - cos u2), (sin u1 - sin u2)]
                let sm = 0.5 * (u1 + u2);
                let dh = 0.5 * (u1 - u2);
                let radial = Vec2::new(u1.cos(), u1.sin());
                let angular = Vec2::new(-sm.sin(), sm.cos());
                radial * (2.0 * (k * sm).cos() * (k * dh).sin())
                    + angular * ((k * u2).sin() * 2.0 * dh.sin())
            }
        }
    }
}

/// One smooth oriented boundary piece.
#[derive(Debug, Clone)]
pub struct Arc {
    pub curve: Curve,
    pub u0: f64,
    pub u1: f64,
    /// Corner ids at the ends (None on a smoothly closing arc).
    pub start_corner: Option<usize>,
    pub end_corner: Option<usize>,
    /// True when the arc closes onto itself smoothly (circle).
    pub closes_smoothly: bool,
}

impl Arc {
    pub fn point(&self, u: f64) -> Vec2 {
        self.curve.point(u)
    }

    /// Position relative to the given corner, evaluated without cancellation
    /// when the corner is one of this arc's own endpoints.
    pub fn point_rel(&self, u: f64, corner: usize, corners: &[Corner]) -> Vec2 {
        if self.start_corner == Some(corner) {
            self.curve.diff(u, self.u0)
        } else if self.end_corner == Some(corner) {
            self.curve.diff(u, self.u1)
        } else {
            self.point(u) - corners[corner].position
        }
    }
}

/// Oriented frame on the boundary.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryFrame {
    pub position: Vec2,
    pub tangent: Vec2,
    /// Outward normal (tau1, tau2) -> (tau2, -tau1).
    pub normal: Vec2,
    /// |gamma'(u)| with respect to the parameter the frame was taken in.
    pub jacobian: f64,
    /// Signed curvature, positive for counterclockwise convex traversal.
    pub curvature: f64,
    pub arc_id: usize,
}

/// Frame at parameter `u` of an arc.
pub fn frame_at(arc: &Arc, arc_id: usize, u: f64) -> BoundaryFrame {
    let d = arc.curve.deriv(u);
    let j = d.norm();
    let tangent = d / j;
    let normal = Vec2::new(tangent.y, -tangent.x);
    let dd = arc.curve.deriv2(u);
    let curvature = (d.x * dd.y - d.y * dd.x) / (j * j * j);
    BoundaryFrame { position: arc.point(u), tangent, normal, jacobian: j, curvature, arc_id }
}

/// A corner with its interior opening angle.
#[derive(Debug, Clone, Copy)]
pub struct Corner {
    pub position: Vec2,
    pub interior_angle: f64,
}

/// A piecewise-smooth boundary, counterclockwise, with its corner list.
#[derive(Debug, Clone)]
pub struct Shape {
    pub name: String,
    pub arcs: Vec<Arc>,
    pub corners: Vec<Corner>,
    /// False only for the open wedge.
    pub closed: bool,
}

impl Shape {
    /// Winding number of the boundary around `x` (0 outside, 1 inside for
    /// the closed counterclockwise shapes).
    pub fn winding_number(&self, x: Vec2) -> i32 {
        let mut total = 0.0;
        let n = 512;
        for arc in &self.arcs {
            let mut prev = arc.point(arc.u0) - x;
            for i in 1..=n {
                let u = arc.u0 + (arc.u1 - arc.u0) * i as f64 / n as f64;
                let cur = arc.point(u) - x;
                let cross = prev.x * cur.y - prev.y * cur.x;
                let dot = prev.dot(&cur);
                total += cross.atan2(dot);
                prev = cur;
            }
        }
        (total / (2.0 * std::f64::consts::PI)).round() as i32
    }

    pub fn contains(&self, x: Vec2) -> bool {
        self.closed && self.winding_number(x) == 1
    }

    /// Area centroid from the boundary via Green's theorem.
    pub fn centroid(&self) -> Vec2 {
        let rule = crate::quadrature::gauss_legendre(32).expect("static degree");
        let mut area = 0.0;
        let mut cx = 0.0;
        let mut cy = 0.0;
        for arc in &self.arcs {
            let mid = 0.5 * (arc.u0 + arc.u1);
            let half = 0.5 * (arc.u1 - arc.u0);
            for (&xi, &wi) in rule.nodes.iter().zip(&rule.weights) {
                let u = mid + half * xi;
                let p = arc.point(u);
                let d = arc.curve.deriv(u);
                let w = wi * half;
                area += 0.5 * w * (p.x * d.y - p.y * d.x);
                cx += w * p.x * p.x * d.y / 2.0;
                cy -= w * p.y * p.y * d.x / 2.0;
            }
        }
        Vec2::new(cx / area, cy / area)
    }

    /// Minimum distance from `x` to a dense boundary sampling.
    pub fn distance_to_boundary(&self, x: Vec2) -> f64 {
        let mut best = f64::INFINITY;
        for arc in &self.arcs {
            let n = 2048;
            for i in 0..=n {
                let u = arc.u0 + (arc.u1 - arc.u0) * i as f64 / n as f64;
                best = best.min((arc.point(u) - x).norm());
            }
        }
        best
    }

    /// Total boundary length by quadrature.
    pub fn perimeter(&self) -> f64 {
        let rule = crate::quadrature::gauss_legendre(48).expect("static degree");
        self.arcs
            .iter()
            .map(|arc| {
                let mid = 0.5 * (arc.u0 + arc.u1);
                let half = 0.5 * (arc.u1 - arc.u0);
                rule.nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&xi, &wi)| wi * half * arc.curve.deriv(mid + half * xi).norm())
                    .sum::<f64>()
            })
            .sum()
    }
}

/// Single closed analytic arc gamma(psi) = sin(pi psi / theta)(cos psi, sin psi)
/// with exactly one corner at the origin of interior angle `theta`.
///
/// At theta = pi the curve is smooth everywhere and the corner list is empty.
pub fn make_droplet(theta: f64) -> Result<Shape> {
    if !(theta > 0.0 && theta < 2.0 * std::f64::consts::PI) {
        return Err(Error::Domain(format!("droplet angle {theta} outside (0, 2 pi)")));
    }
    let k = std::f64::consts::PI / theta;
    let smooth = (theta - std::f64::consts::PI).abs() < 1e-14;
    let (corners, start, end) = if smooth {
        (vec![], None, None)
    } else {
        (vec![Corner { position: Vec2::zeros(), interior_angle: theta }], Some(0), Some(0))
    };
    Ok(Shape {
        name: format!("droplet({theta:.6})"),
        arcs: vec![Arc {
            curve: Curve::Droplet { k },
            u0: 0.0,
            u1: theta,
            start_corner: start,
            end_corner: end,
            closes_smoothly: smooth,
        }],
        corners,
        closed: true,
    })
}

fn polygon(name: &str, vertices: &[Vec2], angles: &[f64]) -> Shape {
    let n = vertices.len();
    let corners: Vec<Corner> = vertices
        .iter()
        .zip(angles)
        .map(|(&position, &interior_angle)| Corner { position, interior_angle })
        .collect();
    let arcs = (0..n)
        .map(|i| {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let len = (b - a).norm();
            Arc {
                curve: Curve::Segment { a, dir: (b - a) / len },
                u0: 0.0,
                u1: len,
                start_corner: Some(i),
                end_corner: Some((i + 1) % n),
                closes_smoothly: false,
            }
        })
        .collect();
    Shape { name: name.to_string(), arcs, corners, closed: true }
}

/// Equilateral triangle inscribed in the unit circle, first vertex on top.
pub fn make_triangle() -> Shape {
    let verts: Vec<Vec2> = (0..3)
        .map(|i| {
            let a = std::f64::consts::FRAC_PI_2 + i as f64 * 2.0 * std::f64::consts::PI / 3.0;
            Vec2::new(a.cos(), a.sin())
        })
        .collect();
    polygon("triangle", &verts, &[std::f64::consts::FRAC_PI_3; 3])
}

/// L-shaped hexagon with one re-entrant corner of angle 3 pi / 2 at (1, 1).
pub fn make_lshape() -> Shape {
    let v = [
        Vec2::new(0.0, 0.0),
        Vec2::new(2.0, 0.0),
        Vec2::new(2.0, 1.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(1.0, 2.0),
        Vec2::new(0.0, 2.0),
    ];
    let q = std::f64::consts::FRAC_PI_2;
    polygon("lshape", &v, &[q, q, q, 3.0 * q, q, q])
}

/// Smooth circle of radius `radius` centered at the origin (no corners).
pub fn make_circle(radius: f64) -> Shape {
    Shape {
        name: "circle".into(),
        arcs: vec![Arc {
            curve: Curve::Circle { center: Vec2::zeros(), radius },
            u0: 0.0,
            u1: 2.0 * std::f64::consts::PI,
            start_corner: None,
            end_corner: None,
            closes_smoothly: true,
        }],
        corners: vec![],
        closed: true,
    }
}

/// The open wedge of two unit edges meeting at the origin: edge OA along the
/// positive x axis and edge OB along direction (cos theta, sin theta).
/// Traversal runs B -> O -> A so the sector between the edges lies on the
/// left of the traversal.
pub fn make_wedge(theta: f64) -> Result<Shape> {
    if !(theta > 0.0 && theta < 2.0 * std::f64::consts::PI) {
        return Err(Error::Domain(format!("wedge angle {theta} outside (0, 2 pi)")));
    }
    let dir_ob = Vec2::new(theta.cos(), theta.sin());
    Ok(Shape {
        name: format!("wedge({theta:.6})"),
        arcs: vec![
            Arc {
                curve: Curve::Segment { a: dir_ob, dir: -dir_ob },
                u0: 0.0,
                u1: 1.0,
                start_corner: None,
                end_corner: Some(0),
                closes_smoothly: false,
            },
            Arc {
                curve: Curve::Segment { a: Vec2::zeros(), dir: Vec2::new(1.0, 0.0) },
                u0: 0.0,
                u1: 1.0,
                start_corner: Some(0),
                end_corner: None,
                closes_smoothly: false,
            },
        ],
        corners: vec![Corner { position: Vec2::zeros(), interior_angle: theta }],
        closed: false,
    })
}

/// Angle between the one-sided tangents at a corner, measured inside the
/// domain (counterclockwise from the outgoing edge back to the reversed
/// incoming one).
pub fn corner_angle_from_tangents(incoming: Vec2, outgoing: Vec2) -> f64 {
    let a = (-incoming).y.atan2((-incoming).x);
    let b = outgoing.y.atan2(outgoing.x);
    let mut ang = a - b;
    while ang < 0.0 {
        ang += 2.0 * std::f64::consts::PI;
    }
    while ang >= 2.0 * std::f64::consts::PI {
        ang -= 2.0 * std::f64::consts::PI;
    }
    ang
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn one_sided_corner_angle(shape: &Shape, corner: usize) -> f64 {
        let mut incoming = None;
        let mut outgoing = None;
        for arc in &shape.arcs {
            if arc.end_corner == Some(corner) {
                incoming = Some(arc.curve.deriv(arc.u1).normalize());
            }
            if arc.start_corner == Some(corner) {
                outgoing = Some(arc.curve.deriv(arc.u0).normalize());
            }
        }
        corner_angle_from_tangents(incoming.unwrap(), outgoing.unwrap())
    }

    #[test]
    fn droplet_corner_angles() {
        for theta in [PI / 2.0, 3.0 * PI / 2.0, 0.3, 5.9] {
            let s = make_droplet(theta).unwrap();
            assert_eq!(s.corners.len(), 1);
            let ang = one_sided_corner_angle(&s, 0);
            assert_abs_diff_eq!(ang, theta, epsilon = 1e-10);
        }
        assert!(make_droplet(0.0).is_err());
        assert!(make_droplet(2.0 * PI).is_err());
    }

    #[test]
    fn droplet_pi_is_smooth() {
        let s = make_droplet(PI).unwrap();
        assert!(s.corners.is_empty());
        assert!(s.arcs[0].closes_smoothly);
    }

    #[test]
    fn droplet_simple_positive_radius() {
        let s = make_droplet(3.0 * PI / 2.0).unwrap();
        let arc = &s.arcs[0];
        for i in 1..200 {
            let u = arc.u1 * i as f64 / 200.0;
            if u < arc.u1 {
                assert!(arc.point(u).norm() > 0.0);
            }
        }
    }

    #[test]
    fn droplet_winding_and_orientation() {
        let s = make_droplet(PI / 2.0).unwrap();
        let inside = Vec2::new(0.45, 0.45);
        assert_eq!(s.winding_number(inside), 1);
        assert_eq!(s.winding_number(Vec2::new(2.0, 2.0)), 0);
        let arc = &s.arcs[0];
        let f = frame_at(arc, 0, 0.7);
        assert!((f.position + f.normal * 1e-3 - inside).norm() > (f.position - inside).norm());
        assert_abs_diff_eq!(f.tangent.norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.tangent.dot(&f.normal), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn triangle_metrics() {
        let s = make_triangle();
        for c in &s.corners {
            assert_abs_diff_eq!(c.interior_angle, PI / 3.0, epsilon = 1e-15);
        }
        for i in 0..3 {
            assert_abs_diff_eq!(one_sided_corner_angle(&s, i), PI / 3.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(s.perimeter(), 3.0 * 3f64.sqrt(), epsilon = 1e-12);
        assert_eq!(s.winding_number(Vec2::zeros()), 1);
    }

    #[test]
    fn lshape_metrics() {
        let s = make_lshape();
        assert_abs_diff_eq!(s.corners[3].interior_angle, 3.0 * PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(one_sided_corner_angle(&s, 3), 3.0 * PI / 2.0, epsilon = 1e-12);
        assert!(s.contains(Vec2::new(0.5, 0.5)));
        assert!(!s.contains(Vec2::new(1.5, 1.5)));
    }

    #[test]
    fn wedge_geometry() {
        let theta = 2.2;
        let s = make_wedge(theta).unwrap();
        assert!(!s.closed);
        let b_end = s.arcs[0].point(0.0);
        assert_abs_diff_eq!(b_end.x, theta.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(b_end.y, theta.sin(), epsilon = 1e-15);
        let a_end = s.arcs[1].point(1.0);
        assert_abs_diff_eq!(a_end.x, 1.0, epsilon = 1e-15);
        for arc in &s.arcs {
            assert_abs_diff_eq!(arc.u1 - arc.u0, 1.0, epsilon = 1e-15);
        }
        let s = make_wedge(PI).unwrap();
        let d0 = s.arcs[0].curve.deriv(0.5);
        let d1 = s.arcs[1].curve.deriv(0.5);
        assert_abs_diff_eq!(d0.x * d1.y - d0.y * d1.x, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn circle_frame_is_radial() {
        let s = make_circle(1.0);
        let f = frame_at(&s.arcs[0], 0, 1.234);
        assert_abs_diff_eq!((f.normal - f.position).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(f.curvature, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn segment_zero_curvature() {
        let s = make_triangle();
        let f = frame_at(&s.arcs[0], 0, 0.3);
        assert_eq!(f.curvature, 0.0);
    }

    #[test]
    fn droplet_frame_orthogonality() {
        let s = make_droplet(PI / 2.0).unwrap();
        let f = frame_at(&s.arcs[0], 0, PI / 4.0);
        assert_abs_diff_eq!(f.tangent.norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(f.tangent.dot(&f.normal), 0.0, epsilon = 1e-12);
        let arc = &s.arcs[0];
        let h = 1e-6;
        let fd = (arc.point(PI / 4.0 + h) - arc.point(PI / 4.0 - h)) / (2.0 * h);
        assert_abs_diff_eq!((fd / fd.norm() - f.tangent).norm(), 0.0, epsilon = 1e-8);
    }

    #[test]
    fn stable_diff_matches_plain() {
        let shapes = [make_droplet(1.9).unwrap(), make_circle(1.3)];
        for s in &shapes {
            let arc = &s.arcs[0];
            // well-separated arguments: must agree with plain subtraction
            let (u1, u2) = (0.9, 0.4);
            let d = arc.curve.diff(u1, u2);
            let plain = arc.point(u1) - arc.point(u2);
            assert!((d - plain).norm() <= 1e-14 * d.norm());
            // nearly coincident arguments: must agree with the Taylor value,
            // where the plain subtraction has already lost digits
            let (u1, u2) = (0.9, 0.9 + 1e-9);
            let d = arc.curve.diff(u1, u2);
            let taylor = arc.curve.deriv(0.9 + 0.5e-9) * (u1 - u2);
            assert!((d - taylor).norm() <= 1e-10 * d.norm(), "{:?} vs {:?}", d, taylor);
        }
    }

    #[test]
    fn arcs_chain_closed() {
        for s in [make_triangle(), make_lshape()] {
            let n = s.arcs.len();
            for i in 0..n {
                let a = &s.arcs[i];
                let b = &s.arcs[(i + 1) % n];
                assert!((a.point(a.u1) - b.point(b.u0)).norm() <= 1e-14);
            }
        }
    }
}
