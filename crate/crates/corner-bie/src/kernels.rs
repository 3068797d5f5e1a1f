//! Kelvin fundamental solution, the traction (double-layer) kernel, and its
//! splitting into a Cauchy part and a smooth remainder on one smooth arc.
//!
//! All functions here are pure; nothing is cached.

use crate::geometry::BoundaryFrame;
use crate::{rot_l, ElasticParams, Error, Mat2, Result, Vec2};

/// Kelvin matrix
/// G(x, y) = (1 / 4 pi mu) [ -((lambda+3mu)/(lambda+2mu)) ln r I
///                           + ((lambda+mu)/(lambda+2mu)) r (x) r / r^2 ].
pub fn kelvin(x: Vec2, y: Vec2, params: &ElasticParams) -> Result<Mat2> {
    let r = x - y;
    let r2 = r.norm_squared();
    if r2 == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let log_coef = -(params.lambda + 3.0 * params.mu) / (params.lambda + 2.0 * params.mu);
    let dyad_coef = params.c2;
    let pref = 1.0 / (4.0 * std::f64::consts::PI * params.mu);
    let lnr = 0.5 * r2.ln();
    let mut out = Mat2::identity() * (pref * log_coef * lnr);
    let d = pref * dyad_coef / r2;
    out[(0, 0)] += d * r.x * r.x;
    out[(0, 1)] += d * r.x * r.y;
    out[(1, 0)] += d * r.x * r.y;
    out[(1, 1)] += d * r.y * r.y;
    Ok(out)
}

/// Traction kernel
/// D(x, y) = (mu/(lambda+2mu)) [ (n(y).r)/(2 pi r^2) I + (tau(y).r)/(2 pi r^2) L ]
///           + ((lambda+mu)/(lambda+2mu)) (n(y).r) r (x) r / (pi r^4),
/// with r = x - y.
pub fn traction_kernel(x: Vec2, frame_y: &BoundaryFrame, params: &ElasticParams) -> Result<Mat2> {
    let r = x - frame_y.position;
    traction_kernel_r(r, frame_y, params)
}

/// Same as [`traction_kernel`] but with the displacement r = x - y supplied
/// by the caller (used with cancellation-free differences on refined meshes).
pub fn traction_kernel_r(r: Vec2, frame_y: &BoundaryFrame, params: &ElasticParams) -> Result<Mat2> {
    let r2 = r.norm_squared();
    if r2 == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let two_c1 = 2.0 * params.c1;
    let ndr = frame_y.normal.dot(&r);
    let tdr = frame_y.tangent.dot(&r);
    let pref = two_c1 / (2.0 * std::f64::consts::PI * r2);
    let mut out = Mat2::identity() * (pref * ndr) + rot_l() * (pref * tdr);
    let d = params.c2 * ndr / (std::f64::consts::PI * r2 * r2);
    out[(0, 0)] += d * r.x * r.x;
    out[(0, 1)] += d * r.x * r.y;
    out[(1, 0)] += d * r.x * r.y;
    out[(1, 1)] += d * r.y * r.y;
    Ok(out)
}

/// Kernel splitting D(t, s) = D1(t, s)/(t - s) + D2(t, s) on one smooth arc,
/// in the common local coordinate (t, s) of the frames:
///
///   D1(t, s) = (mu/(lambda+2mu)) (t-s) (tau(x).r) / (2 pi r^2) L,
///   D2(t, s) = D(t, s) - D1(t, s)/(t - s),
///
/// both finite on the diagonal. The frames' `jacobian` fields must be taken
/// with respect to the same local coordinate as `t` and `s`; they enter only
/// the diagonal limits
///
///   D1(t, t) = (mu/(lambda+2mu)) / (2 pi |gamma'(t)|) L,
///   D2(t, t) = -(kappa / 2 pi) (c1 I + c2 tau (x) tau).
pub fn split_kernel(
    frame_x: &BoundaryFrame,
    frame_y: &BoundaryFrame,
    t: f64,
    s: f64,
    params: &ElasticParams,
) -> Result<(Mat2, Mat2)> {
    let r = frame_x.position - frame_y.position;
    split_kernel_r(frame_x, frame_y, t, s, r, params)
}

/// [`split_kernel`] with the displacement supplied by the caller.
pub fn split_kernel_r(
    frame_x: &BoundaryFrame,
    frame_y: &BoundaryFrame,
    t: f64,
    s: f64,
    r: Vec2,
    params: &ElasticParams,
) -> Result<(Mat2, Mat2)> {
    if frame_x.arc_id != frame_y.arc_id {
        return Err(Error::Contract(format!(
            "kernel splitting needs frames on one arc, got {} and {}",
            frame_x.arc_id, frame_y.arc_id
        )));
    }
    let two_c1 = 2.0 * params.c1;
    if t == s {
        let d1 = rot_l() * (two_c1 / (2.0 * std::f64::consts::PI * frame_x.jacobian));
        let k = frame_x.curvature;
        let tau = frame_x.tangent;
        let mut d2 = Mat2::identity() * (-params.c1 * k / (2.0 * std::f64::consts::PI));
        let c = -params.c2 * k / (2.0 * std::f64::consts::PI);
        d2[(0, 0)] += c * tau.x * tau.x;
        d2[(0, 1)] += c * tau.x * tau.y;
        d2[(1, 0)] += c * tau.x * tau.y;
        d2[(1, 1)] += c * tau.y * tau.y;
        return Ok((d1, d2));
    }
    let r2 = r.norm_squared();
    if r2 == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let tdr_x = frame_x.tangent.dot(&r);
    let d1 = rot_l() * (two_c1 * (t - s) * tdr_x / (2.0 * std::f64::consts::PI * r2));
    let full = traction_kernel_r(r, frame_y, params)?;
    let d2 = full - d1 / (t - s);
    Ok((d1, d2))
}
