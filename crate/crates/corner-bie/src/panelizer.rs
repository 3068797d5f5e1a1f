//! Panel meshes: adaptive refinement driven by the multi-exponent
//! Legendre-tail indicator, uniform baselines, and explicitly graded
//! reference meshes.

use crate::geometry::{frame_at, BoundaryFrame, Shape};
use crate::quadrature::{gauss_legendre, singular_power_coeffs};
use crate::spectrum::CornerSpectrum;
use crate::{C64, Error, Result, Vec2};

/// Fixed panel count for arcs that carry no corner (smooth closed curves).
const CORNERLESS_PANELS: usize = 16;

/// One parameter panel on an arc.
#[derive(Debug, Clone)]
pub struct Panel {
    pub arc_id: usize,
    pub u0: f64,
    pub u1: f64,
    pub depth: usize,
    pub owner_corner: Option<usize>,
    /// Arclength from the owning corner to the panel edge nearer to it.
    pub s_near: f64,
    /// Panel arclength.
    pub arclen: f64,
    /// Arclength of the owning half-arc (the indicator's normalization).
    pub halfarc_len: f64,
    /// Physical endpoints (used by the near-field rule).
    pub end_a: Vec2,
    pub end_b: Vec2,
    /// Set when max_depth stopped refinement before the accept rule held.
    pub flagged: bool,
}

/// A quadrature node with its frame in panel-local scaling.
#[derive(Debug, Clone)]
pub struct Node {
    pub panel: usize,
    pub local_index: usize,
    /// Frame whose `jacobian` is |d gamma / d local|, local in [-1, 1].
    pub frame: BoundaryFrame,
    /// Gauss-Legendre weight on [-1, 1].
    pub weight: f64,
    /// Arc parameter of the node.
    pub u: f64,
    /// Position relative to the owning corner, cancellation-free.
    pub rel_to_owner: Option<Vec2>,
}

/// A panelized boundary with its node table.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub shape: Shape,
    pub panels: Vec<Panel>,
    pub degree: usize,
    pub eps_pan: f64,
    pub nodes: Vec<Node>,
}

impl Mesh {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Unknowns in the Nyström system (two displacement components per node).
    pub fn dofs(&self) -> usize {
        2 * self.nodes.len()
    }

    pub fn panel_nodes(&self, panel: usize) -> &[Node] {
        let p = self.degree;
        &self.nodes[panel * p..(panel + 1) * p]
    }
}

fn arclen(shape: &Shape, arc_id: usize, a: f64, b: f64) -> f64 {
    let rule = gauss_legendre(24).expect("static degree");
    let arc = &shape.arcs[arc_id];
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| w * half * arc.curve.deriv(mid + half * x).norm())
        .sum()
}

/// Multi-exponent Legendre-tail indicator
/// eta(I; p) = max_k ( sum_{j=p}^{2p-1} |alpha_j(z_k; I)|^2 )^{1/2}
/// of the normalized singular powers (t/L)^{z_k} on the panel's arclength
/// interval measured from its owning corner.
pub fn indicator(panel: &Panel, exponents: &[C64], p: usize) -> Result<f64> {
    if panel.owner_corner.is_none() {
        return Err(Error::Contract("indicator needs a corner-owned panel".into()));
    }
    let mut eta: f64 = 0.0;
    for &z in exponents {
        let coeffs = singular_power_coeffs(
            panel.s_near,
            panel.s_near + panel.arclen,
            z,
            panel.halfarc_len,
            2 * p,
        )?;
        let tail: f64 = coeffs[p..2 * p].iter().map(|c| c.norm_sqr()).sum();
        eta = eta.max(tail.sqrt());
    }
    Ok(eta)
}

/// Exponents a corner feeds to the indicator: every stored spectrum root with
/// 0 < Re z < p (integer roots are already excluded from the spectrum).
pub fn indicator_exponents(spectrum: &CornerSpectrum, p: usize) -> Vec<C64> {
    spectrum
        .roots
        .iter()
        .map(|r| r.z)
        .filter(|z| z.re > 0.0 && z.re < p as f64)
        .collect()
}

/// One maximal smooth piece with at most one owning corner.
struct OwnedSegment {
    arc_id: usize,
    u0: f64,
    u1: f64,
    owner: Option<usize>,
    /// True when the owning corner sits at u0.
    corner_at_start: bool,
    seg_len: f64,
}

fn split_into_segments(shape: &Shape) -> Vec<OwnedSegment> {
    let mut out = Vec::new();
    for (arc_id, arc) in shape.arcs.iter().enumerate() {
        let total = arclen(shape, arc_id, arc.u0, arc.u1);
        match (arc.start_corner, arc.end_corner) {
            (None, None) => out.push(OwnedSegment {
                arc_id,
                u0: arc.u0,
                u1: arc.u1,
                owner: None,
                corner_at_start: false,
                seg_len: total,
            }),
            (Some(c), None) => out.push(OwnedSegment {
                arc_id,
                u0: arc.u0,
                u1: arc.u1,
                owner: Some(c),
                corner_at_start: true,
                seg_len: total,
            }),
            (None, Some(c)) => out.push(OwnedSegment {
                arc_id,
                u0: arc.u0,
                u1: arc.u1,
                owner: Some(c),
                corner_at_start: false,
                seg_len: total,
            }),
            (Some(ca), Some(cb)) => {
                // split at the arclength midpoint; each half belongs to the
                // corner at its end
                let target = 0.5 * total;
                let mut lo = arc.u0;
                let mut hi = arc.u1;
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if arclen(shape, arc_id, arc.u0, mid) < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let u_mid = 0.5 * (lo + hi);
                let l0 = arclen(shape, arc_id, arc.u0, u_mid);
                out.push(OwnedSegment {
                    arc_id,
                    u0: arc.u0,
                    u1: u_mid,
                    owner: Some(ca),
                    corner_at_start: true,
                    seg_len: l0,
                });
                out.push(OwnedSegment {
                    arc_id,
                    u0: u_mid,
                    u1: arc.u1,
                    owner: Some(cb),
                    corner_at_start: false,
                    seg_len: total - l0,
                });
            }
        }
    }
    out
}

fn finish_mesh(shape: &Shape, mut panels: Vec<Panel>, p: usize, eps_pan: f64) -> Result<Mesh> {
    panels.sort_by(|a, b| (a.arc_id, a.u0).partial_cmp(&(b.arc_id, b.u0)).unwrap());
    let rule = gauss_legendre(p)?;
    let mut nodes = Vec::with_capacity(panels.len() * p);
    for (pi, panel) in panels.iter().enumerate() {
        let arc = &shape.arcs[panel.arc_id];
        let mid = 0.5 * (panel.u0 + panel.u1);
        let half = 0.5 * (panel.u1 - panel.u0);
        for (li, (&x, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let u = mid + half * x;
            let mut frame = frame_at(arc, panel.arc_id, u);
            frame.jacobian *= half;
            let rel_to_owner =
                panel.owner_corner.map(|c| arc.point_rel(u, c, &shape.corners));
            nodes.push(Node {
                panel: pi,
                local_index: li,
                frame,
                weight: w,
                u,
                rel_to_owner,
            });
        }
    }
    Ok(Mesh { shape: shape.clone(), panels, degree: p, eps_pan, nodes })
}

fn make_panel(
    shape: &Shape,
    seg: &OwnedSegment,
    u0: f64,
    u1: f64,
    depth: usize,
    s_lo: f64,
    len: f64,
    flagged: bool,
) -> Panel {
    let arc = &shape.arcs[seg.arc_id];
    Panel {
        arc_id: seg.arc_id,
        u0,
        u1,
        depth,
        owner_corner: seg.owner,
        s_near: s_lo,
        arclen: len,
        halfarc_len: seg.seg_len,
        end_a: arc.point(u0),
        end_b: arc.point(u1),
        flagged,
    }
}

/// Adaptive mesh: each owned half-arc starts as one panel and is recursively
/// bisected until every panel passes the accept rule eta <= eps_pan, or
/// max_depth is reached (such panels are flagged). Cornerless arcs get a
/// fixed uniform panelization.
pub fn refine(
    shape: &Shape,
    spectra: &[(usize, CornerSpectrum)],
    p: usize,
    eps_pan: f64,
    max_depth: usize,
) -> Result<Mesh> {
    if !(eps_pan > 0.0) {
        return Err(Error::Domain("eps_pan must be positive".into()));
    }
    let exps_of = |corner: usize| -> Result<Vec<C64>> {
        spectra
            .iter()
            .find(|(c, _)| *c == corner)
            .map(|(_, s)| indicator_exponents(s, p))
            .ok_or_else(|| Error::Domain(format!("no spectrum supplied for corner {corner}")))
    };
    let mut panels = Vec::new();
    for seg in split_into_segments(shape) {
        match seg.owner {
            None => {
                let n = CORNERLESS_PANELS;
                for i in 0..n {
                    let u0 = seg.u0 + (seg.u1 - seg.u0) * i as f64 / n as f64;
                    let u1 = seg.u0 + (seg.u1 - seg.u0) * (i + 1) as f64 / n as f64;
                    let len = arclen(shape, seg.arc_id, u0, u1);
                    panels.push(make_panel(shape, &seg, u0, u1, 0, 0.0, len, false));
                }
            }
            Some(corner) => {
                let exponents = exps_of(corner)?;
                // (u0, u1, depth, s_lo) with s measured from the corner
                let mut stack = vec![(seg.u0, seg.u1, 0usize, 0.0f64, seg.seg_len)];
                while let Some((u0, u1, depth, s_lo, len)) = stack.pop() {
                    let panel = make_panel(shape, &seg, u0, u1, depth, s_lo, len, false);
                    let eta =
                        if exponents.is_empty() { 0.0 } else { indicator(&panel, &exponents, p)? };
                    if eta <= eps_pan {
                        panels.push(panel);
                    } else if depth >= max_depth {
                        panels.push(Panel { flagged: true, ..panel });
                    } else {
                        let um = 0.5 * (u0 + u1);
                        let (near_u, far_u) = if seg.corner_at_start {
                            ((u0, um), (um, u1))
                        } else {
                            ((um, u1), (u0, um))
                        };
                        let near_len = arclen(shape, seg.arc_id, near_u.0, near_u.1);
                        stack.push((near_u.0, near_u.1, depth + 1, s_lo, near_len));
                        stack.push((far_u.0, far_u.1, depth + 1, s_lo + near_len, len - near_len));
                    }
                }
            }
        }
    }
    finish_mesh(shape, panels, p, eps_pan)
}

/// Uniform baseline: `panels_per_arc` equispaced-parameter panels on each
/// arc, no refinement, no corner ownership.
pub fn uniform_mesh(shape: &Shape, panels_per_arc: usize, p: usize) -> Result<Mesh> {
    if panels_per_arc == 0 {
        return Err(Error::Domain("need at least one panel per arc".into()));
    }
    let mut panels = Vec::new();
    for (arc_id, arc) in shape.arcs.iter().enumerate() {
        for i in 0..panels_per_arc {
            let u0 = arc.u0 + (arc.u1 - arc.u0) * i as f64 / panels_per_arc as f64;
            let u1 = arc.u0 + (arc.u1 - arc.u0) * (i + 1) as f64 / panels_per_arc as f64;
            let len = arclen(shape, arc_id, u0, u1);
            panels.push(Panel {
                arc_id,
                u0,
                u1,
                depth: 0,
                owner_corner: None,
                s_near: 0.0,
                arclen: len,
                halfarc_len: len,
                end_a: arc.point(u0),
                end_b: arc.point(u1),
                flagged: false,
            });
        }
    }
    finish_mesh(shape, panels, p, 0.0)
}

/// Geometrically graded reference mesh (ratio 1/2): each owned half-arc is
/// cut into `depth` dyadic levels toward its corner; cornerless arcs are
/// uniform.
pub fn graded_mesh(shape: &Shape, p: usize, depth: usize) -> Result<Mesh> {
    let mut panels = Vec::new();
    for seg in split_into_segments(shape) {
        match seg.owner {
            None => {
                let n = CORNERLESS_PANELS;
                for i in 0..n {
                    let u0 = seg.u0 + (seg.u1 - seg.u0) * i as f64 / n as f64;
                    let u1 = seg.u0 + (seg.u1 - seg.u0) * (i + 1) as f64 / n as f64;
                    let len = arclen(shape, seg.arc_id, u0, u1);
                    panels.push(make_panel(shape, &seg, u0, u1, 0, 0.0, len, false));
                }
            }
            Some(_) => {
                // dyadic parameter cuts toward the corner
                let mut cuts = vec![0.0f64];
                let mut frac = 1.0;
                for _ in 0..depth {
                    frac *= 0.5;
                    cuts.push(frac);
                }
                cuts.push(1.0);
                cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
                cuts.dedup();
                let to_u = |f: f64| {
                    if seg.corner_at_start {
                        seg.u0 + f * (seg.u1 - seg.u0)
                    } else {
                        seg.u1 - f * (seg.u1 - seg.u0)
                    }
                };
                let mut s_lo = 0.0;
                for w in cuts.windows(2) {
                    let (ua, ub) = (to_u(w[0]), to_u(w[1]));
                    let (u0, u1) = if ua < ub { (ua, ub) } else { (ub, ua) };
                    let len = arclen(shape, seg.arc_id, u0, u1);
                    let d = (1.0 / w[1].max(1e-300)).log2().round().max(0.0) as usize;
                    panels.push(make_panel(shape, &seg, u0, u1, d, s_lo, len, false));
                    s_lo += len;
                }
            }
        }
    }
    finish_mesh(shape, panels, p, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_circle, make_droplet, make_lshape, make_wedge};
    use crate::spectrum::corner_spectrum;
    use crate::ElasticParams;
    use std::f64::consts::PI;

    fn spectra_for(shape: &Shape, p: &ElasticParams) -> Vec<(usize, CornerSpectrum)> {
        shape
            .corners
            .iter()
            .enumerate()
            .map(|(i, c)| (i, corner_spectrum(c.interior_angle, p, 8.0, 8.0).unwrap()))
            .collect()
    }

    #[test]
    fn uniform_counts() {
        let m = uniform_mesh(&make_droplet(PI / 2.0).unwrap(), 10, 16).unwrap();
        assert_eq!(m.dofs(), 320);
        let m = uniform_mesh(&make_wedge(1.0).unwrap(), 1, 16).unwrap();
        assert_eq!(m.panels.len(), 2);
    }

    #[test]
    fn indicator_far_panel_negligible() {
        let shape = make_droplet(PI / 2.0).unwrap();
        let seg_len = 1.0;
        let panel = Panel {
            arc_id: 0,
            u0: 0.0,
            u1: 0.1,
            depth: 0,
            owner_corner: Some(0),
            s_near: 0.8 * seg_len,
            arclen: 0.1 * seg_len,
            halfarc_len: seg_len,
            end_a: shape.arcs[0].point(0.0),
            end_b: shape.arcs[0].point(0.1),
            flagged: false,
        };
        let eta = indicator(&panel, &[C64::new(0.5445, 0.0)], 16).unwrap();
        assert!(eta < 1e-12, "far panel eta = {eta}");
    }

    #[test]
    fn indicator_halving_scales_like_re_z() {
        let shape = make_droplet(PI / 2.0).unwrap();
        let mk = |h: f64| Panel {
            arc_id: 0,
            u0: 0.0,
            u1: h,
            depth: 0,
            owner_corner: Some(0),
            s_near: 0.0,
            arclen: h,
            halfarc_len: 1.0,
            end_a: shape.arcs[0].point(0.0),
            end_b: shape.arcs[0].point(h),
            flagged: false,
        };
        let z = C64::new(0.5445, 0.0);
        let e1 = indicator(&mk(0.25), &[z], 16).unwrap();
        let e2 = indicator(&mk(0.125), &[z], 16).unwrap();
        let ratio = e2 / e1;
        assert!(
            (ratio - 0.5f64.powf(0.5445)).abs() < 1e-3,
            "halving ratio {ratio} vs {}",
            0.5f64.powf(0.5445)
        );
    }

    #[test]
    fn indicator_integer_exponent_zero() {
        let shape = make_droplet(PI / 2.0).unwrap();
        let panel = Panel {
            arc_id: 0,
            u0: 0.0,
            u1: 0.3,
            depth: 0,
            owner_corner: Some(0),
            s_near: 0.0,
            arclen: 0.3,
            halfarc_len: 1.0,
            end_a: shape.arcs[0].point(0.0),
            end_b: shape.arcs[0].point(0.3),
            flagged: false,
        };
        let eta = indicator(&panel, &[C64::new(1.0, 0.0)], 16).unwrap();
        assert!(eta < 1e-14, "linear power is exactly represented: {eta}");
    }

    #[test]
    fn refine_accept_rule_postcondition() {
        let p = ElasticParams::benchmark();
        let shape = make_droplet(PI / 2.0).unwrap();
        let spectra = spectra_for(&shape, &p);
        let eps = 1e-6;
        let mesh = refine(&shape, &spectra, 16, eps, 40).unwrap();
        let exps = indicator_exponents(&spectra[0].1, 16);
        for panel in &mesh.panels {
            assert!(!panel.flagged);
            if panel.owner_corner.is_some() {
                let eta = indicator(panel, &exps, 16).unwrap();
                assert!(eta <= eps, "accepted panel has eta = {eta}");
            }
        }
        // deterministic
        let mesh2 = refine(&shape, &spectra, 16, eps, 40).unwrap();
        assert_eq!(mesh.panels.len(), mesh2.panels.len());
        for (a, b) in mesh.panels.iter().zip(&mesh2.panels) {
            assert_eq!((a.u0, a.u1), (b.u0, b.u1));
        }
    }

    #[test]
    fn refine_huge_tolerance_keeps_base_panels() {
        let p = ElasticParams::benchmark();
        let shape = make_droplet(PI / 2.0).unwrap();
        let spectra = spectra_for(&shape, &p);
        let mesh = refine(&shape, &spectra, 16, 1.0, 40).unwrap();
        // one panel per half-arc
        assert_eq!(mesh.panels.len(), 2);
    }

    #[test]
    fn refine_geometric_grading_emerges() {
        let p = ElasticParams::benchmark();
        let shape = make_droplet(PI / 2.0).unwrap();
        let spectra = spectra_for(&shape, &p);
        let mesh = refine(&shape, &spectra, 16, 1e-6, 40).unwrap();
        // collect corner-chain panels of the first half-arc ordered toward
        // the corner and check the length ratios
        let mut chain: Vec<&Panel> =
            mesh.panels.iter().filter(|p| p.owner_corner == Some(0) && p.u0 < 0.7).collect();
        chain.sort_by(|a, b| a.s_near.partial_cmp(&b.s_near).unwrap());
        for w in chain.windows(2) {
            if w[1].s_near > 0.0 && w[0].s_near > 0.0 {
                let ratio = w[0].arclen / w[1].arclen;
                assert!((0.3..=0.7).contains(&ratio), "grading ratio {ratio}");
            }
        }
    }

    #[test]
    fn lshape_deepest_refinement_follows_smallest_exponent() {
        // At equal tolerance the chain depth scales like 1/Re z_min; the
        // pi/2 corners (dominant 0.5445) refine at least as deep as the
        // re-entrant 3 pi/2 corner (dominant 0.6105).
        let p = ElasticParams::benchmark();
        let shape = make_lshape();
        let spectra = spectra_for(&shape, &p);
        let mesh = refine(&shape, &spectra, 16, 1e-10, 40).unwrap();
        let max_depth_of = |corner: usize| {
            mesh.panels
                .iter()
                .filter(|pp| pp.owner_corner == Some(corner))
                .map(|pp| pp.depth)
                .max()
                .unwrap()
        };
        let right_angle = max_depth_of(0);
        let reentrant = max_depth_of(3);
        assert!(
            right_angle >= reentrant,
            "pi/2 depth {right_angle} vs 3pi/2 depth {reentrant}"
        );
        assert!(reentrant >= 5, "re-entrant corner did refine: {reentrant}");
    }

    #[test]
    fn circle_refine_degenerates_to_uniform() {
        let shape = make_circle(1.0);
        let mesh = refine(&shape, &[], 16, 1e-9, 40).unwrap();
        assert_eq!(mesh.panels.len(), CORNERLESS_PANELS);
    }

    #[test]
    fn graded_mesh_depths() {
        let shape = make_droplet(PI / 2.0).unwrap();
        let mesh = graded_mesh(&shape, 16, 12).unwrap();
        // two half-arcs, each depth+1 panels
        assert_eq!(mesh.panels.len(), 2 * 13);
        let smallest = mesh
            .panels
            .iter()
            .map(|p| p.arclen)
            .fold(f64::INFINITY, f64::min);
        assert!(smallest < 1e-3);
    }
}
