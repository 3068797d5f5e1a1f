//! Gauss-Legendre rules on [-1, 1], Legendre projections, principal-value
//! Cauchy moments of Legendre polynomials, and Legendre coefficients of
//! singular powers on panels.

use crate::{C64, Error, Result};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

/// A p-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub degree: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// proj[j][i] = (2j+1)/2 * w_i * P_j(x_i), the projection matrix onto
    /// Legendre coefficients 0..p-1 from samples at the nodes.
    proj: Vec<Vec<f64>>,
}

/// Evaluate P_0..P_{jmax}(x) by the three-term recurrence.
pub fn legendre_all(jmax: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(jmax + 1);
    p.push(1.0);
    if jmax == 0 {
        return p;
    }
    p.push(x);
    for j in 1..jmax {
        let jf = j as f64;
        p.push(((2.0 * jf + 1.0) * x * p[j] - jf * p[j - 1]) / (jf + 1.0));
    }
    p
}

fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 1..n {
        let jf = j as f64;
        let p2 = ((2.0 * jf + 1.0) * x * p1 - jf * p0) / (jf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn compute_rule(p: usize) -> GaussRule {
    let mut nodes = vec![0.0; p];
    let mut weights = vec![0.0; p];
    let n = p;
    for i in 0..(n + 1) / 2 {
        // Tricomi-style initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (pn, dpn) = legendre_with_deriv(n, x);
            let dx = pn / dpn;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dpn) = legendre_with_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dpn * dpn);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let mut proj = vec![vec![0.0; p]; p];
    for (i, (&x, &w)) in nodes.iter().zip(&weights).enumerate() {
        let pj = legendre_all(p - 1, x);
        for j in 0..p {
            proj[j][i] = (2.0 * j as f64 + 1.0) / 2.0 * w * pj[j];
        }
    }
    GaussRule { degree: p, nodes, weights, proj }
}

/// Gauss-Legendre rule of degree `p`, served from an immutable cache.
pub fn gauss_legendre(p: usize) -> Result<Arc<GaussRule>> {
    if !(1..=64).contains(&p) {
        return Err(Error::Domain(format!("Gauss-Legendre degree {p} outside 1..=64")));
    }
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(r) = cache.read().unwrap().get(&p) {
        return Ok(r.clone());
    }
    let rule = Arc::new(compute_rule(p));
    cache.write().unwrap().insert(p, rule.clone());
    Ok(rule)
}

impl GaussRule {
    /// Legendre coefficients a_0..a_{p-1} from samples at the rule's nodes.
    /// Exact for polynomials of degree <= p-1.
    pub fn project(&self, samples: &[f64]) -> Vec<f64> {
        assert_eq!(samples.len(), self.degree);
        self.proj
            .iter()
            .map(|row| row.iter().zip(samples).map(|(a, f)| a * f).sum())
            .collect()
    }

    /// Complex-sample variant of [`GaussRule::project`].
    pub fn project_complex(&self, samples: &[C64]) -> Vec<C64> {
        assert_eq!(samples.len(), self.degree);
        self.proj
            .iter()
            .map(|row| row.iter().zip(samples).map(|(&a, &f)| f * a).sum())
            .collect()
    }

    /// proj[j][i] factors, exposed for product-rule assembly.
    pub fn projection_row(&self, j: usize) -> &[f64] {
        &self.proj[j]
    }
}

/// Principal-value moments C_j(t) = p.v. int_{-1}^{1} P_j(s)/(t-s) ds for
/// j = 0..p-1, along with the plain moments I_j = 2 delta_{j0}.
#[derive(Debug, Clone)]
pub struct CauchyMoments {
    pub t: f64,
    pub values: Vec<f64>,
}

impl CauchyMoments {
    pub fn flank(&self, j: usize) -> f64 {
        if j == 0 { 2.0 } else { 0.0 }
    }
}

/// Cauchy moments by the three-term recurrence
/// `j C_j = (2j-1) t C_{j-1} - (j-1) C_{j-2}` seeded with
/// `C_0 = -ln|(t-1)/(t+1)|`, `C_1 = -2 + t C_0`.
///
/// The recurrence is run forward for |t| < 1 where both solutions stay O(1).
/// Outside the panel the forward direction is dominated by the Legendre-P
/// solution, so the moments (there proportional to Legendre-Q) are built by
/// a continued-fraction tail and backward recursion.
pub fn cauchy_moments(t: f64, p: usize) -> Result<CauchyMoments> {
    if (t - 1.0).abs() < 1e-8 || (t + 1.0).abs() < 1e-8 {
        return Err(Error::NearEndpoint(t));
    }
    let c0 = -((t - 1.0) / (t + 1.0)).abs().ln();
    if p == 0 {
        return Ok(CauchyMoments { t, values: vec![] });
    }
    let mut values = vec![0.0; p];
    values[0] = c0;
    if p == 1 {
        return Ok(CauchyMoments { t, values });
    }
    if t.abs() < 1.0 {
        values[1] = -2.0 + t * c0;
        for j in 2..p {
            let jf = j as f64;
            values[j] = ((2.0 * jf - 1.0) * t * values[j - 1] - (jf - 1.0) * values[j - 2]) / jf;
        }
    } else {
        // Here C_j is proportional to the minimal (Legendre-Q) solution, so
        // build the ratios r_j = C_{j+1}/C_j by one downward pass of the
        // continued fraction and normalize against C_0.
        let abs_t = t.abs();
        let rho = abs_t + (abs_t * abs_t - 1.0).sqrt();
        let depth = ((36.0 / rho.ln()).ceil() as usize).clamp(40, 400_000);
        let start = p + depth;
        let mut ratios = vec![0.0; p];
        let mut r = 0.0;
        for j in (1..=start).rev() {
            let jf = j as f64;
            r = jf / ((2.0 * jf + 1.0) * t - (jf + 1.0) * r);
            if j <= p - 1 {
                ratios[j - 1] = r;
            }
        }
        for j in 1..p {
            values[j] = values[j - 1] * ratios[j - 1];
        }
    }
    Ok(CauchyMoments { t, values })
}

/// First `m` Legendre coefficients on `[a, b]` (0 <= a < b) of the normalized
/// singular power `(t/scale)^z`, `Re z > 0`.
///
/// Computed by oversampled Gauss-Legendre quadrature with at least `4 m`
/// points and grid-doubling verification to 1e-13 relative. Corner-touching
/// panels (`a == 0`) are integrated after the substitution `t = b u^q`,
/// which removes the algebraic endpoint singularity.
pub fn singular_power_coeffs(a: f64, b: f64, z: C64, scale: f64, m: usize) -> Result<Vec<C64>> {
    if !(0.0 <= a && a < b) || !(scale > 0.0) {
        return Err(Error::Domain(format!("bad interval [{a}, {b}] or scale {scale}")));
    }
    if z.re <= 0.0 {
        return Err(Error::Domain(format!("singular power needs Re z > 0, got {z}")));
    }
    let mut n = (4 * m).max(64);
    if a == 0.0 {
        let q = (30.0 / (1.0 + z.re)).ceil().clamp(4.0, 64.0);
        n = n.max(48 + (2.0 * q * z.im.abs()).ceil() as usize);
        let mut prev = corner_coeffs(b, z, scale, m, q as i32, n)?;
        for _ in 0..6 {
            let next = corner_coeffs(b, z, scale, m, q as i32, 2 * n)?;
            if stable(&prev, &next) {
                return Ok(next);
            }
            n *= 2;
            prev = next;
        }
        return Err(Error::QuadratureTolerance { requested: 1e-13, achieved: f64::NAN });
    }
    let mut prev = interior_coeffs(a, b, z, scale, m, n)?;
    for _ in 0..6 {
        let next = interior_coeffs(a, b, z, scale, m, 2 * n)?;
        if stable(&prev, &next) {
            return Ok(next);
        }
        n *= 2;
        prev = next;
    }
    Err(Error::QuadratureTolerance { requested: 1e-13, achieved: f64::NAN })
}

fn stable(a: &[C64], b: &[C64]) -> bool {
    let norm = b.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= 1e-13 * norm)
}

/// Composite oversampling: `n` total points split over ceil(n/48) equal
/// subintervals of a degree-48 rule, so doubling `n` genuinely refines.
fn panels_for(n: usize) -> (usize, usize) {
    let per = 48.min(n);
    let count = n.div_ceil(per);
    (per, count)
}

fn interior_coeffs(a: f64, b: f64, z: C64, scale: f64, m: usize, n: usize) -> Result<Vec<C64>> {
    let (per, count) = panels_for(n);
    let rule = gauss_legendre(per)?;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = vec![C64::new(0.0, 0.0); m];
    for k in 0..count {
        let x0 = -1.0 + 2.0 * k as f64 / count as f64;
        let x1 = -1.0 + 2.0 * (k + 1) as f64 / count as f64;
        let xm = 0.5 * (x0 + x1);
        let xh = 0.5 * (x1 - x0);
        for (&xi, &wi) in rule.nodes.iter().zip(&rule.weights) {
            let x = xm + xh * xi;
            let t = mid + half * x;
            let f = C64::new(t / scale, 0.0).powc(z);
            let pj = legendre_all(m - 1, x);
            for (j, acc_j) in acc.iter_mut().enumerate() {
                *acc_j += f * (wi * xh * pj[j]);
            }
        }
    }
    for (j, acc_j) in acc.iter_mut().enumerate() {
        *acc_j *= (2.0 * j as f64 + 1.0) / 2.0;
    }
    Ok(acc)
}

fn corner_coeffs(b: f64, z: C64, scale: f64, m: usize, q: i32, n: usize) -> Result<Vec<C64>> {
    let (per, count) = panels_for(n);
    let rule = gauss_legendre(per)?;
    let mut acc = vec![C64::new(0.0, 0.0); m];
    // x = 2 (t/b) - 1 with t = b u^q, u in (0, 1]; dx = 2 q u^{q-1} du.
    for k in 0..count {
        let u0 = k as f64 / count as f64;
        let u1 = (k + 1) as f64 / count as f64;
        let um = 0.5 * (u0 + u1);
        let uh = 0.5 * (u1 - u0);
        for (&xi, &wi) in rule.nodes.iter().zip(&rule.weights) {
            let u = um + uh * xi;
            if u <= 0.0 {
                continue;
            }
            let uq = u.powi(q);
            let t = b * uq;
            let x = 2.0 * uq - 1.0;
            let f = C64::new(t / scale, 0.0).powc(z);
            let jac = 2.0 * q as f64 * u.powi(q - 1);
            let pj = legendre_all(m - 1, x);
            for (j, acc_j) in acc.iter_mut().enumerate() {
                *acc_j += f * (wi * uh * jac * pj[j]);
            }
        }
    }
    for (j, acc_j) in acc.iter_mut().enumerate() {
        *acc_j *= (2.0 * j as f64 + 1.0) / 2.0;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_point_rule() {
        let r = gauss_legendre(2).unwrap();
        assert_abs_diff_eq!(r.nodes[1], 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(r.nodes[0], -1.0 / 3f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(r.weights[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn weights_sum_and_symmetry() {
        for p in [1, 2, 3, 5, 8, 16, 31, 64] {
            let r = gauss_legendre(p).unwrap();
            let s: f64 = r.weights.iter().sum();
            assert_abs_diff_eq!(s, 2.0, epsilon = 1e-14);
            for i in 0..p {
                assert_abs_diff_eq!(r.nodes[i], -r.nodes[p - 1 - i], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn exactness_degree() {
        // p = 16 integrates x^30 exactly; int_{-1}^1 x^30 dx = 2/31.
        let r = gauss_legendre(16).unwrap();
        let v: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(30)).sum();
        assert_abs_diff_eq!(v, 2.0 / 31.0, epsilon = 1e-13);
    }

    #[test]
    fn exp_integral() {
        let r = gauss_legendre(16).unwrap();
        let v: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.exp()).sum();
        assert_abs_diff_eq!(v, std::f64::consts::E - 1.0 / std::f64::consts::E, epsilon = 1e-15);
    }

    #[test]
    fn degree_bounds() {
        assert!(gauss_legendre(0).is_err());
        assert!(gauss_legendre(65).is_err());
    }

    #[test]
    fn project_p3_and_const() {
        let r = gauss_legendre(8).unwrap();
        let samples: Vec<f64> = r.nodes.iter().map(|&x| legendre_all(3, x)[3]).collect();
        let a = r.project(&samples);
        for (j, &aj) in a.iter().enumerate() {
            let expect = if j == 3 { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(aj, expect, epsilon = 1e-14);
        }
        let ones = vec![1.0; 8];
        let a = r.project(&ones);
        assert_abs_diff_eq!(a[0], 1.0, epsilon = 1e-14);
        assert!(a[1..].iter().all(|&v| v.abs() < 1e-14));
    }

    #[test]
    fn project_x5_matches_analytic_expansion() {
        // x^5 = (8 P_5 + 28 P_3 + 27 P_1) / 63.
        let r = gauss_legendre(8).unwrap();
        let samples: Vec<f64> = r.nodes.iter().map(|&x| x.powi(5)).collect();
        let a = r.project(&samples);
        assert_abs_diff_eq!(a[1], 27.0 / 63.0, epsilon = 1e-14);
        assert_abs_diff_eq!(a[3], 28.0 / 63.0, epsilon = 1e-14);
        assert_abs_diff_eq!(a[5], 8.0 / 63.0, epsilon = 1e-14);
        assert!(a[0].abs() + a[2].abs() + a[4].abs() < 1e-13);
    }

    #[test]
    fn cauchy_seed_values() {
        let c = cauchy_moments(0.0, 3).unwrap();
        assert_abs_diff_eq!(c.values[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.values[1], -2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.values[2], 0.0, epsilon = 1e-15);
        let c = cauchy_moments(0.5, 1).unwrap();
        assert_abs_diff_eq!(c.values[0], 3f64.ln(), epsilon = 1e-14);
    }

    #[test]
    fn cauchy_parity() {
        let p = 12;
        for t in [0.05, 0.3, 0.7, 0.95, 1.3, 2.5] {
            let cp = cauchy_moments(t, p).unwrap();
            let cm = cauchy_moments(-t, p).unwrap();
            for j in 0..p {
                let sign = if (j + 1) % 2 == 0 { 1.0 } else { -1.0 };
                assert_abs_diff_eq!(cm.values[j], sign * cp.values[j], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn cauchy_near_endpoint_rejected() {
        assert!(cauchy_moments(1.0 + 1e-9, 4).is_err());
        assert!(cauchy_moments(-1.0, 4).is_err());
    }

    #[test]
    fn singular_power_linear_exact() {
        // z = 1 on [0, 1], scale 1: t = (1+x)/2 so a0 = a1 = 1/2, rest 0.
        let a = singular_power_coeffs(0.0, 1.0, C64::new(1.0, 0.0), 1.0, 6).unwrap();
        assert_abs_diff_eq!(a[0].re, 0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(a[1].re, 0.5, epsilon = 1e-13);
        for c in &a[2..] {
            assert!(c.norm() < 1e-13);
        }
    }

    #[test]
    fn singular_power_far_panel_tail_decays() {
        // Panel far from the corner: coefficients decay geometrically.
        let h = 0.01;
        let a0 = 10.0 * h;
        let a = singular_power_coeffs(a0, a0 + h, C64::new(0.5445, 0.0), 1.0, 20).unwrap();
        assert!(a[16..].iter().all(|c| c.norm() < 1e-12), "tail: {:?}", &a[16..]);
    }

    #[test]
    fn singular_power_corner_gamma_recurrence() {
        // On [0, 1] the coefficients of t^z obey
        // a_0 = 1/(z+1), a_{j+1}/a_j = (2j+3)/(2j+1) * (z-j)/(z+j+2).
        for z in [C64::new(0.5445, 0.0), C64::new(0.7, 1.3), C64::new(2.2, -0.4)] {
            let m = 24;
            let a = singular_power_coeffs(0.0, 1.0, z, 1.0, m).unwrap();
            let mut expect = C64::new(1.0, 0.0) / (z + 1.0);
            let scale = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
            for (j, aj) in a.iter().enumerate() {
                assert!(
                    (aj - expect).norm() < 1e-12 * scale,
                    "z={z} j={j}: {aj} vs {expect}"
                );
                let jf = j as f64;
                expect *= (2.0 * jf + 3.0) / (2.0 * jf + 1.0) * (z - jf) / (z + jf + 2.0);
            }
        }
    }

    #[test]
    fn singular_power_corner_scaling_in_h() {
        // |a_j| on [0, h] scales like h^{Re z} under h -> h/2.
        let z = C64::new(0.5445, 0.0);
        let m = 12;
        let a1 = singular_power_coeffs(0.0, 1.0, z, 1.0, m).unwrap();
        let a2 = singular_power_coeffs(0.0, 0.5, z, 1.0, m).unwrap();
        for j in 1..m {
            let ratio = a2[j].norm() / a1[j].norm();
            assert!((ratio - 0.5f64.powf(0.5445)).abs() < 1e-6, "j={j}: {ratio}");
        }
    }
}
