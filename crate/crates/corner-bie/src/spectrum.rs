//! Corner singular exponents: real roots of tan x = x, the four
//! transcendental branches H1..H4, complex root finding in boxes by the
//! argument principle with recursive subdivision, branch continuation in the
//! opening angle, and the Fredholm weight-line diagnostic.

use crate::params::ElasticParams;
use crate::{C64, Error, Result};

/// The four factors of the characteristic equation:
/// H1 = z sin t - sin((2pi - t) z),  H2 = z sin t + sin((2pi - t) z),
/// H3 = z sin t + c sin(t z),        H4 = z sin t - c sin(t z).
///
/// H1 H2 = z^2 sin^2 t - sin^2((2pi - t) z) and
/// -H3 H4 = c^2 sin^2(t z) - z^2 sin^2 t reproduce the two factors of the
/// characteristic equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchId {
    H1,
    H2,
    H3,
    H4,
}

impl BranchId {
    pub const ALL: [BranchId; 4] = [BranchId::H1, BranchId::H2, BranchId::H3, BranchId::H4];

    pub fn label(&self) -> &'static str {
        match self {
            BranchId::H1 => "H1",
            BranchId::H2 => "H2",
            BranchId::H3 => "H3",
            BranchId::H4 => "H4",
        }
    }
}

/// Value of the branch function at (z, theta); entire in z.
pub fn branch_residual(branch: BranchId, z: C64, theta: f64, params: &ElasticParams) -> C64 {
    branch_residual_c(branch, z, C64::new(theta, 0.0), params)
}

/// Branch function with a complex opening angle (used by the continuation
/// detours around real branch points).
pub fn branch_residual_c(branch: BranchId, z: C64, theta: C64, params: &ElasticParams) -> C64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let st = theta.sin();
    match branch {
        BranchId::H1 => z * st - ((two_pi - theta) * z).sin(),
        BranchId::H2 => z * st + ((two_pi - theta) * z).sin(),
        BranchId::H3 => z * st + params.c * (theta * z).sin(),
        BranchId::H4 => z * st - params.c * (theta * z).sin(),
    }
}

/// dH/dz at (z, theta).
pub fn branch_deriv_c(branch: BranchId, z: C64, theta: C64, params: &ElasticParams) -> C64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let st = theta.sin();
    match branch {
        BranchId::H1 => st - (two_pi - theta) * ((two_pi - theta) * z).cos(),
        BranchId::H2 => st + (two_pi - theta) * ((two_pi - theta) * z).cos(),
        BranchId::H3 => st + params.c * theta * (theta * z).cos(),
        BranchId::H4 => st - params.c * theta * (theta * z).cos(),
    }
}

/// j-th real root of tan x = x, indexed so that lambda_0 = 0 and
/// |j| pi + pi/4 < |lambda_j| < |j| pi + pi/2 with sign(lambda_j) = sign(j).
pub fn lambda_root(j: i64) -> f64 {
    if j == 0 {
        return 0.0;
    }
    let n = j.unsigned_abs() as f64;
    // roots of g(x) = sin x - x cos x, no tangent asymptotes involved
    let g = |x: f64| x.sin() - x * x.cos();
    let mut lo = n * std::f64::consts::PI + std::f64::consts::FRAC_PI_4;
    let mut hi = n * std::f64::consts::PI + std::f64::consts::FRAC_PI_2;
    let mut glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if (gm > 0.0) == (glo > 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..5 {
        // Newton on g; g'(x) = x sin x
        let step = g(x) / (x * x.sin());
        x -= step;
        if step.abs() < 1e-16 * x {
            break;
        }
    }
    if j > 0 { x } else { -x }
}

/// Point omega_j(y) = x_j(y) + i y on the level curve tan x / x = tanh y / y
/// through lambda_j. The j = 0 curve is the imaginary axis.
pub fn sinc_curve_point(j: i64, y: f64) -> C64 {
    if j == 0 {
        return C64::new(0.0, y);
    }
    if y == 0.0 {
        return C64::new(lambda_root(j), 0.0);
    }
    let target = if y.abs() < 1e-8 {
        1.0 - y * y / 3.0 // tanh y / y
    } else {
        y.tanh() / y
    };
    let n = j.unsigned_abs() as f64;
    // tan x / x is 0 at n pi and increases to 1 at lambda_n on (n pi, lambda_n)
    let mut lo = n * std::f64::consts::PI + 1e-12;
    let mut hi = lambda_root(j.abs());
    let f = |x: f64| x.tan() / x - target;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    let x = 0.5 * (lo + hi);
    C64::new(if j > 0 { x } else { -x }, y)
}

/// A rectangle in the complex plane.
#[derive(Debug, Clone, Copy)]
pub struct BoxRegion {
    pub re0: f64,
    pub re1: f64,
    pub im0: f64,
    pub im1: f64,
}

impl BoxRegion {
    pub fn new(re0: f64, re1: f64, im0: f64, im1: f64) -> Self {
        Self { re0, re1, im0, im1 }
    }

    fn contains(&self, z: C64, slack: f64) -> bool {
        z.re >= self.re0 - slack
            && z.re <= self.re1 + slack
            && z.im >= self.im0 - slack
            && z.im <= self.im1 + slack
    }

    fn center(&self) -> C64 {
        C64::new(0.5 * (self.re0 + self.re1), 0.5 * (self.im0 + self.im1))
    }

    fn diameter(&self) -> f64 {
        ((self.re1 - self.re0).powi(2) + (self.im1 - self.im0).powi(2)).sqrt()
    }
}

/// Winding number of f around the rectangle boundary by adaptive argument
/// tracking. `None` when the boundary passes too close to a zero.
pub fn winding_number_dbg<F: Fn(C64) -> C64>(f: &F, b: &BoxRegion, floor: f64) -> Option<i64> {
    let corners = [
        C64::new(b.re0, b.im0),
        C64::new(b.re1, b.im0),
        C64::new(b.re1, b.im1),
        C64::new(b.re0, b.im1),
        C64::new(b.re0, b.im0),
    ];
    let mut total = 0.0;
    for e in 0..4 {
        let a = corners[e];
        let c = corners[e + 1];
        let mut t = 0.0;
        let mut fa = f(a);
        if fa.norm() < floor {
            return None;
        }
        let mut step: f64 = 1.0 / 16.0;
        while t < 1.0 {
            let tn = (t + step).min(1.0);
            let zn = a + (c - a) * tn;
            let fn_ = f(zn);
            if fn_.norm() < floor {
                return None;
            }
            let dphi = (fn_ / fa).arg();
            if dphi.abs() > std::f64::consts::FRAC_PI_2 {
                if step <= 1e-10 {
                    // a zero sits on or next to the contour
                    return None;
                }
                step *= 0.5;
                continue;
            }
            total += dphi;
            t = tn;
            fa = fn_;
            if dphi.abs() < 0.2 {
                step = (step * 1.5).min(1.0 / 16.0);
            }
        }
    }
    let w = total / (2.0 * std::f64::consts::PI);
    if (w - w.round()).abs() > 0.25 {
        return None;
    }
    Some(w.round() as i64)
}

fn newton_polish<F: Fn(C64) -> C64, G: Fn(C64) -> C64>(
    f: &F,
    df: &G,
    start: C64,
    tol: impl Fn(C64) -> f64,
) -> Option<C64> {
    let mut z = start;
    let mut fz = f(z);
    for _ in 0..100 {
        if fz.norm() <= tol(z) {
            return Some(z);
        }
        let d = df(z);
        if d.norm() == 0.0 {
            return None;
        }
        let mut step = fz / d;
        let mut zn = z - step;
        let mut fzn = f(zn);
        let mut damp = 0;
        while fzn.norm() > fz.norm() && damp < 30 {
            step *= 0.5;
            zn = z - step;
            fzn = f(zn);
            damp += 1;
        }
        if damp == 30 {
            return None;
        }
        z = zn;
        fz = fzn;
    }
    if fz.norm() <= tol(z) { Some(z) } else { None }
}

/// All roots of the branch function inside `region`, each polished by damped
/// Newton to |H| <= 1e-12 (1 + |z|). The argument-principle count over the
/// (adaptively nudged) box boundary is the completeness certificate.
pub fn find_roots_in_box(
    branch: BranchId,
    theta: f64,
    params: &ElasticParams,
    region: BoxRegion,
    max_roots: usize,
) -> Result<Vec<C64>> {
    let f = |z: C64| branch_residual(branch, z, theta, params);
    let df = |z: C64| branch_deriv_c(branch, z, C64::new(theta, 0.0), params);
    let tol = |z: C64| 1e-12 * (1.0 + z.norm());
    let mut region = region;
    // nudge the outer boundary off any root
    let mut nudges = 0;
    let count = loop {
        match winding_number_dbg(&f, &region, 1e-8) {
            Some(c) => break c,
            None => {
                nudges += 1;
                if nudges > 12 {
                    return Err(Error::RootCount {
                        count: -1,
                        found: 0,
                        re0: region.re0,
                        re1: region.re1,
                        im0: region.im0,
                        im1: region.im1,
                    });
                }
                let d = 3.7e-3 * nudges as f64 * (1.0 + region.diameter());
                region = BoxRegion::new(
                    region.re0 - d,
                    region.re1 + d,
                    region.im0 - d,
                    region.im1 + d,
                );
            }
        }
    };
    if count == 0 {
        return Ok(vec![]);
    }
    if count as usize > max_roots {
        return Err(Error::RootCount {
            count,
            found: max_roots,
            re0: region.re0,
            re1: region.re1,
            im0: region.im0,
            im1: region.im1,
        });
    }
    let mut found: Vec<C64> = Vec::new();
    subdivide(&f, &df, &tol, region, count, &mut found, 0)?;
    found.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    Ok(found)
}

fn push_unique(found: &mut Vec<C64>, z: C64) -> bool {
    if found.iter().any(|r| (r - z).norm() < 1e-8) {
        false
    } else {
        found.push(z);
        true
    }
}

fn subdivide<F: Fn(C64) -> C64, G: Fn(C64) -> C64, T: Fn(C64) -> f64>(
    f: &F,
    df: &G,
    tol: &T,
    region: BoxRegion,
    count: i64,
    found: &mut Vec<C64>,
    depth: usize,
) -> Result<()> {
    if count == 0 {
        return Ok(());
    }
    let fail = || Error::RootCount {
        count,
        found: 0,
        re0: region.re0,
        re1: region.re1,
        im0: region.im0,
        im1: region.im1,
    };
    // small box or low count: try Newton from a few seeds
    if count <= 2 || region.diameter() < 1e-3 {
        let mut local: Vec<C64> = Vec::new();
        let seeds = [
            region.center(),
            C64::new(
                region.re0 + 0.27 * (region.re1 - region.re0),
                region.im0 + 0.31 * (region.im1 - region.im0),
            ),
            C64::new(
                region.re0 + 0.73 * (region.re1 - region.re0),
                region.im0 + 0.69 * (region.im1 - region.im0),
            ),
            C64::new(
                region.re0 + 0.52 * (region.re1 - region.re0),
                region.im0 + 0.12 * (region.im1 - region.im0),
            ),
        ];
        for seed in seeds {
            if let Some(z) = newton_polish(f, df, seed, tol) {
                if region.contains(z, 1e-7) && !local.iter().any(|r| (r - z).norm() < 1e-8) {
                    local.push(z);
                }
            }
            if local.len() == count as usize {
                break;
            }
        }
        if local.len() == count as usize {
            for z in local {
                push_unique(found, z);
            }
            return Ok(());
        }
        if region.diameter() < 1e-6 {
            // multiple root cluster: report the centre with its multiplicity
            // by pushing the same location (deduplicated upstream)
            if let Some(z) = newton_polish(f, df, region.center(), tol) {
                if region.contains(z, 1e-6) {
                    push_unique(found, z);
                    return Ok(());
                }
            }
            return Err(fail());
        }
    }
    if depth > 60 {
        return Err(fail());
    }
    // quadrisect with nudged split lines
    let mut mid_re = 0.5 * (region.re0 + region.re1) + 7.1e-3 * (region.re1 - region.re0);
    let mut mid_im = 0.5 * (region.im0 + region.im1) + 8.3e-3 * (region.im1 - region.im0);
    for attempt in 0..8 {
        let quads = [
            BoxRegion::new(region.re0, mid_re, region.im0, mid_im),
            BoxRegion::new(mid_re, region.re1, region.im0, mid_im),
            BoxRegion::new(region.re0, mid_re, mid_im, region.im1),
            BoxRegion::new(mid_re, region.re1, mid_im, region.im1),
        ];
        let counts: Vec<Option<i64>> =
            quads.iter().map(|q| winding_number_dbg(f, q, 1e-8)).collect();
        if counts.iter().all(|c| c.is_some()) {
            let total: i64 = counts.iter().map(|c| c.unwrap()).sum();
            if total == count {
                for (q, c) in quads.iter().zip(&counts) {
                    subdivide(f, df, tol, *q, c.unwrap(), found, depth + 1)?;
                }
                return Ok(());
            }
        }
        let d = 2.17e-2 * (attempt + 1) as f64;
        mid_re = 0.5 * (region.re0 + region.re1) - d * (region.re1 - region.re0);
        mid_im = 0.5 * (region.im0 + region.im1) + 1.31 * d * (region.im1 - region.im0);
    }
    Err(fail())
}

/// One deduplicated root of the corner characteristic equation.
#[derive(Debug, Clone)]
pub struct SpectrumRoot {
    /// Branches on which this root was found (merged when closer than 1e-8).
    pub branches: Vec<BranchId>,
    pub z: C64,
    /// max |H_branch(z, theta)| over the contributing branches.
    pub residual: f64,
}

/// Merged corner spectrum: all non-integer roots of the four branches with
/// 0 < Re z <= re_max, |Im z| <= im_max.
#[derive(Debug, Clone)]
pub struct CornerSpectrum {
    pub theta: f64,
    pub params: ElasticParams,
    pub roots: Vec<SpectrumRoot>,
    /// Index of the root with smallest positive real part (ties broken by
    /// smaller |Im z|); `None` when the set is empty.
    pub dominant: Option<usize>,
}

/// Merged, deduplicated spectrum of all four branches. Integer roots (which
/// give smooth powers) and z = 0 are excluded; the full per-branch sets are
/// available through [`find_roots_in_box`].
pub fn corner_spectrum(
    theta: f64,
    params: &ElasticParams,
    re_max: f64,
    im_max: f64,
) -> Result<CornerSpectrum> {
    if !(theta > 0.0 && theta < 2.0 * std::f64::consts::PI) {
        return Err(Error::Domain(format!("opening angle {theta} outside (0, 2 pi)")));
    }
    if re_max <= 0.0 {
        return Err(Error::Domain("re_max must be positive".into()));
    }
    let region = BoxRegion::new(1e-3, re_max, -im_max, im_max);
    let mut roots: Vec<SpectrumRoot> = Vec::new();
    for branch in BranchId::ALL {
        let zs = find_roots_in_box(branch, theta, params, region, 512)?;
        for z in zs {
            if z.re <= 0.0 || z.re > re_max + 1e-9 || z.im.abs() > im_max + 1e-9 {
                continue;
            }
            // integer powers are smooth; drop them from the refinement set
            if (z - C64::new(z.re.round(), 0.0)).norm() < 1e-6 {
                continue;
            }
            let res = branch_residual(branch, z, theta, params).norm();
            match roots.iter_mut().find(|r| (r.z - z).norm() < 1e-8) {
                Some(r) => {
                    if !r.branches.contains(&branch) {
                        r.branches.push(branch);
                    }
                    r.residual = r.residual.max(res);
                }
                None => roots.push(SpectrumRoot { branches: vec![branch], z, residual: res }),
            }
        }
    }
    roots.sort_by(|a, b| {
        (a.z.re, a.z.im, a.branches[0].label())
            .partial_cmp(&(b.z.re, b.z.im, b.branches[0].label()))
            .unwrap()
    });
    let dominant = roots
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            (a.z.re, a.z.im.abs())
                .partial_cmp(&(b.z.re, b.z.im.abs()))
                .unwrap()
        })
        .map(|(i, _)| i);
    Ok(CornerSpectrum { theta, params: *params, roots, dominant })
}

/// Continuation z(theta) of the branch anchored at z(pi) = anchor_n along a
/// path of real opening angles starting at pi. Newton steps with step
/// halving; stops with a branch-point error when |dH/dz| collapses.
pub fn track_branch(
    anchor_n: u64,
    branch: BranchId,
    theta_path: &[f64],
    params: &ElasticParams,
) -> Result<Vec<C64>> {
    if theta_path.is_empty() || (theta_path[0] - std::f64::consts::PI).abs() > 1e-12 {
        return Err(Error::Domain("continuation path must start at theta = pi".into()));
    }
    let mut out = Vec::with_capacity(theta_path.len());
    let mut z = C64::new(anchor_n as f64, 0.0);
    out.push(z);
    for w in theta_path.windows(2) {
        let (a, b) = (w[0], w[1]);
        z = continue_real_segment(branch, z, a, b, params)?;
        out.push(z);
    }
    Ok(out)
}

fn continue_real_segment(
    branch: BranchId,
    start: C64,
    th0: f64,
    th1: f64,
    params: &ElasticParams,
) -> Result<C64> {
    let mut z = start;
    let mut cur = th0;
    let mut step = th1 - th0;
    let mut guard = 0;
    while (cur - th1).abs() > 1e-15 && guard < 100_000 {
        guard += 1;
        let next = if (step > 0.0) == (cur + step <= th1) { cur + step } else { th1 };
        let theta = C64::new(next, 0.0);
        let f = |zz: C64| branch_residual_c(branch, zz, theta, params);
        let df = |zz: C64| branch_deriv_c(branch, zz, theta, params);
        let d = df(z);
        if d.norm() < 1e-6 * (1.0 + z.norm()) {
            return Err(Error::BranchPoint { theta: next, deriv: d.norm() });
        }
        match newton_polish(&f, &df, z, |zz| 1e-12 * (1.0 + zz.norm())) {
            Some(zn) if (zn - z).norm() < 0.5 * (1.0 + z.norm()) => {
                z = zn;
                cur = next;
                step = (step * 1.7).clamp(-0.05, 0.05);
                if step == 0.0 {
                    step = th1 - cur;
                }
            }
            _ => {
                step *= 0.5;
                if step.abs() < 1e-12 {
                    let d = branch_deriv_c(branch, z, C64::new(cur, 0.0), params).norm();
                    return Err(Error::BranchPoint { theta: cur, deriv: d });
                }
            }
        }
    }
    Ok(z)
}

/// Continuation to `theta_end` that detours around real branch points by
/// lifting the path into complex opening angles. The detour half-plane
/// follows the parity of the anchor: for H1/H2 the analytic domain in
/// alpha = 2 pi - theta has Im alpha <= 0 for even anchors, which maps to
/// Im theta >= 0, and the reverse for odd anchors; for H3/H4 alpha = theta
/// directly.
pub fn track_branch_detoured(
    anchor_n: u64,
    branch: BranchId,
    theta_end: f64,
    params: &ElasticParams,
) -> Result<C64> {
    let lift = match branch {
        BranchId::H1 | BranchId::H2 => {
            if anchor_n % 2 == 0 { 0.2 } else { -0.2 }
        }
        BranchId::H3 | BranchId::H4 => {
            if anchor_n % 2 == 0 { -0.2 } else { 0.2 }
        }
    };
    let start = C64::new(std::f64::consts::PI, 0.0);
    let mut z = C64::new(anchor_n as f64, 0.0);
    let legs = [
        C64::new(std::f64::consts::PI, lift),
        C64::new(theta_end, lift),
        C64::new(theta_end, 0.0),
    ];
    let mut cur = start;
    for leg in legs {
        z = continue_complex_segment(branch, z, cur, leg, params)?;
        cur = leg;
    }
    Ok(z)
}

fn continue_complex_segment(
    branch: BranchId,
    start: C64,
    th0: C64,
    th1: C64,
    params: &ElasticParams,
) -> Result<C64> {
    let mut z = start;
    let mut s = 0.0f64;
    let mut step = 0.05f64;
    let mut guard = 0;
    while s < 1.0 && guard < 100_000 {
        guard += 1;
        let sn = (s + step).min(1.0);
        let theta = th0 + (th1 - th0) * sn;
        let f = |zz: C64| branch_residual_c(branch, zz, theta, params);
        let df = |zz: C64| branch_deriv_c(branch, zz, theta, params);
        let d = df(z);
        if d.norm() < 1e-8 * (1.0 + z.norm()) {
            return Err(Error::BranchPoint { theta: theta.re, deriv: d.norm() });
        }
        match newton_polish(&f, &df, z, |zz| 1e-12 * (1.0 + zz.norm())) {
            Some(zn) if (zn - z).norm() < 0.35 * (1.0 + z.norm()) => {
                z = zn;
                s = sn;
                step = (step * 1.6).min(0.05);
            }
            _ => {
                step *= 0.5;
                if step < 1e-10 {
                    let d = branch_deriv_c(branch, z, th0 + (th1 - th0) * s, params).norm();
                    return Err(Error::BranchPoint { theta: theta.re, deriv: d });
                }
            }
        }
    }
    Ok(z)
}

/// Minimum distance from s - nu to {Re z} union the integers; a positive
/// value certifies the Fredholm exclusion condition.
pub fn weight_line_clearance(spectrum: &CornerSpectrum, s_minus_nu: f64) -> f64 {
    let to_int = (s_minus_nu - s_minus_nu.round()).abs();
    spectrum
        .roots
        .iter()
        .map(|r| (s_minus_nu - r.z.re).abs())
        .fold(to_int, f64::min)
}
