//! Closed-form Mellin-type singular integrals, the 4x4 wedge symbol
//! A(z, theta), its Taylor blocks F(k, z, theta), and the density-to-Taylor
//! mapping matrix B(theta).
//!
//! Series convention for the Stokes-case integral: the resolved form is
//!
//!   I2(z, theta, t) = a(z, theta) t^{z-3} + sum_{k>=0} F(k, z, theta) t^k,
//!
//! with F(k, z, theta) = -W_k(cos theta) / (pi (k + 3 - z)) and
//! W_k = sum_{j=0..k} U_j U_{k-j} (Chebyshev-U autocorrelation). The series
//! sign and the k = 0 starting index are fixed against the brute-force
//! quadrature oracle (see `oracle::quad_i1_i2` and the battery tests); the
//! alternative convention `- sum_{k>=1}` fails that comparison by O(1).
//! The Taylor blocks below are assembled from the same resolved series.

use crate::params::ElasticParams;
use crate::{C64, CMat4, CVec4, Error, Result};
use nalgebra::DMatrix;

/// Series truncation: relative term cutoff and hard cap.
const SERIES_REL_CUTOFF: f64 = 1e-16;
const SERIES_MAX_TERMS: usize = 2000;

/// How an integer-valued `z` is treated by the closed forms (the right-hand
/// sides extend continuously to integer z for fixed t).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegerZ {
    /// Evaluate the limiting value.
    Limit,
    /// Return an error instead.
    Reject,
}

fn nearest_nonneg_integer(z: C64) -> Option<i64> {
    let m = z.re.round();
    if m >= 0.0 && (z - C64::new(m, 0.0)).norm() < 1e-12 {
        Some(m as i64)
    } else {
        None
    }
}

fn powc(t: f64, z: C64) -> C64 {
    if t == 0.0 {
        if z.re > 0.0 {
            C64::new(0.0, 0.0)
        } else if z == C64::new(0.0, 0.0) {
            C64::new(1.0, 0.0)
        } else {
            C64::new(f64::INFINITY, 0.0)
        }
    } else {
        (z * t.ln()).exp()
    }
}

/// sin(pi z) with argument reduction sin(pi (m + w)) = (-1)^m sin(pi w),
/// which keeps full relative accuracy near integer z.
pub(crate) fn sin_pi(z: C64) -> C64 {
    let m = z.re.round();
    let w = C64::new(z.re - m, z.im);
    let s = (std::f64::consts::PI * w).sin();
    if (m as i64) % 2 == 0 { s } else { -s }
}

pub(crate) fn cos_pi(z: C64) -> C64 {
    let m = z.re.round();
    let w = C64::new(z.re - m, z.im);
    let c = (std::f64::consts::PI * w).cos();
    if (m as i64) % 2 == 0 { c } else { -c }
}

fn cot_pi(z: C64) -> C64 {
    cos_pi(z) / sin_pi(z)
}

fn csc_pi(z: C64) -> C64 {
    C64::new(1.0, 0.0) / sin_pi(z)
}

/// sin(x)/x, stable through x = 0, for complex x.
fn sinc_c(x: C64) -> C64 {
    if x.norm() < 1e-8 {
        C64::new(1.0, 0.0) - x * x / 6.0
    } else {
        x.sin() / x
    }
}

fn check_preconditions(z: C64, t: f64, theta: Option<f64>) -> Result<()> {
    if z.re <= -1.0 {
        return Err(Error::Domain(format!("need Re z > -1, got {z}")));
    }
    if !(0.0..1.0).contains(&t) {
        return Err(Error::Domain(format!("need 0 <= t < 1, got {t}")));
    }
    if let Some(th) = theta {
        if !(th > 0.0 && th < 2.0 * std::f64::consts::PI) {
            return Err(Error::Domain(format!("need theta in (0, 2 pi), got {th}")));
        }
    }
    Ok(())
}

/// Cauchy case: (1/pi) p.v. int_0^1 s^z / (s - t) ds
/// = -cot(pi z) t^z + (1/pi) sum_{k>=0} t^k / (z - k).
pub fn mellin_i0(z: C64, t: f64, mode: IntegerZ) -> Result<C64> {
    check_preconditions(z, t, None)?;
    if let Some(m) = nearest_nonneg_integer(z) {
        if mode == IntegerZ::Reject {
            return Err(Error::IntegerPole(m as f64));
        }
        // limit value: -(1/pi) t^m ln t + (1/pi) sum_{k != m} t^k / (m - k)
        if t == 0.0 && m == 0 {
            return Err(Error::Domain("I0 limit at z = 0, t = 0 diverges".into()));
        }
        let m = m as usize;
        let mut sum = if t == 0.0 {
            C64::new(0.0, 0.0)
        } else {
            C64::new(-t.powi(m as i32) * t.ln() / std::f64::consts::PI, 0.0)
        };
        let mut tk = 1.0;
        for k in 0..SERIES_MAX_TERMS {
            if k != m {
                let term = tk / (m as f64 - k as f64) / std::f64::consts::PI;
                sum += term;
                if k > m && tk < SERIES_REL_CUTOFF * sum.norm().max(1e-300) {
                    break;
                }
            }
            tk *= t;
            if tk == 0.0 && k >= m {
                break;
            }
        }
        return Ok(sum);
    }
    let mut sum = -cot_pi(z) * powc(t, z);
    let mut tk = 1.0;
    for k in 0..SERIES_MAX_TERMS {
        let term = tk / (z - k as f64) / std::f64::consts::PI;
        sum += term;
        if term.norm() < SERIES_REL_CUTOFF * sum.norm().max(1e-300) {
            break;
        }
        tk *= t;
        if tk == 0.0 {
            break;
        }
    }
    Ok(sum)
}

/// Laplace case: (1/pi) int_0^1 s^z / (s^2 + t^2 - 2 s t cos theta) ds
/// = sin((pi-theta) z) t^{z-1} / (sin(pi z) sin theta)
///   + (1/pi) sum_{k>=1} U_{k-1}(cos theta) t^{k-1} / (z - k),
/// where sin(k theta)/sin(theta) = U_{k-1}(cos theta) keeps the series stable
/// through theta = pi.
pub fn mellin_i1(z: C64, theta: f64, t: f64, mode: IntegerZ) -> Result<C64> {
    check_preconditions(z, t, Some(theta))?;
    if let Some(m) = nearest_nonneg_integer(z) {
        if mode == IntegerZ::Reject {
            return Err(Error::IntegerPole(m as f64));
        }
        return limit_in_z(|zz| mellin_i1(zz, theta, t, IntegerZ::Reject), z);
    }
    let x = theta.cos();
    // closed part: sin((pi-theta)z)/sin(theta) = z sinc((pi-theta)z)/sinc(pi-theta)
    let phi = std::f64::consts::PI - theta;
    let lead = z * sinc_c(C64::new(phi, 0.0) * z) / sinc_c(C64::new(phi, 0.0))
        * csc_pi(z)
        * powc(t, z - 1.0);
    let mut sum = lead;
    let mut u = vec![1.0, 2.0 * x]; // U_0, U_1, ...
    let mut tk = 1.0; // t^{k-1}
    for k in 1..SERIES_MAX_TERMS {
        while u.len() < k {
            let n = u.len();
            u.push(2.0 * x * u[n - 1] - u[n - 2]);
        }
        let term = u[k - 1] * tk / (z - k as f64) / std::f64::consts::PI;
        sum += term;
        if k > 2 && term.norm() < SERIES_REL_CUTOFF * sum.norm().max(1e-300) {
            break;
        }
        tk *= t;
        if tk == 0.0 {
            break;
        }
    }
    Ok(sum)
}

/// Stokes case with the resolved series convention (see module docs):
/// (1/pi) int_0^1 s^z / (s^2 + t^2 - 2 s t cos theta)^2 ds
/// = a(z, theta) t^{z-3} + sum_{k>=0} F(k, z, theta) t^k.
pub fn mellin_i2(z: C64, theta: f64, t: f64, mode: IntegerZ) -> Result<C64> {
    check_preconditions(z, t, Some(theta))?;
    if t == 0.0 {
        return Err(Error::Domain("I2 needs t > 0".into()));
    }
    if let Some(m) = nearest_nonneg_integer(z) {
        if mode == IntegerZ::Reject {
            return Err(Error::IntegerPole(m as f64));
        }
        return limit_in_z(|zz| mellin_i2(zz, theta, t, IntegerZ::Reject), z);
    }
    let lead = stokes_lead_coeff(z, theta) * powc(t, z - 3.0);
    let x = theta.cos();
    let mut u = vec![1.0, 2.0 * x];
    let mut sum = lead;
    let mut tk = 1.0;
    for k in 0..SERIES_MAX_TERMS {
        while u.len() <= k {
            let n = u.len();
            u.push(2.0 * x * u[n - 1] - u[n - 2]);
        }
        let wk: f64 = (0..=k).map(|j| u[j] * u[k - j]).sum();
        let term = -wk * tk / (std::f64::consts::PI * (k as f64 + 3.0 - z));
        sum += term;
        if k > 2 && term.norm() < SERIES_REL_CUTOFF * sum.norm().max(1e-300) {
            break;
        }
        tk *= t;
        if tk == 0.0 {
            break;
        }
    }
    Ok(sum)
}

/// a(z, theta): coefficient of t^{z-3} in the Stokes-case integral.
/// At theta = pi the printed quotient degenerates to 0/0; the limit is
/// z (z-1) (z-2) / (6 sin(pi z)).
fn stokes_lead_coeff(z: C64, theta: f64) -> C64 {
    let phi = std::f64::consts::PI - theta;
    if phi.abs() < 1e-9 {
        return z * (z - 1.0) * (z - 2.0) / (sin_pi(z) * 6.0);
    }
    let s = theta.sin();
    let num = z * (2.0 * theta).sin() * (C64::new(phi, 0.0) * z).cos()
        + 2.0 * (C64::new(phi, 0.0) * z).sin() * (C64::new(1.0, 0.0) - z * s * s);
    num / (sin_pi(z) * 4.0 * s * s * s)
}

/// Removable-singularity limit in z by symmetric evaluation and one
/// Richardson sweep; used for the integer-z limit branches of I1/I2.
fn limit_in_z(f: impl Fn(C64) -> Result<C64>, z: C64) -> Result<C64> {
    let eval = |d: f64| -> Result<C64> {
        let a = f(z + C64::new(d, 0.0))?;
        let b = f(z - C64::new(d, 0.0))?;
        Ok((a + b) * 0.5)
    };
    let v1 = eval(1e-4)?;
    let v2 = eval(5e-5)?;
    Ok((v2 * 4.0 - v1) / 3.0)
}

/// The 4x4 wedge Mellin symbol A(z, theta); `entries` column j carries the
/// response to the j-th density component of the power-law ansatz.
#[derive(Debug, Clone)]
pub struct WedgeSymbolA {
    pub z: C64,
    pub theta: f64,
    pub entries: CMat4,
}

/// Assemble A(z, theta). Meromorphic in z with simple poles at the integers
/// through cot(pi z) and csc(pi z); integer z is rejected.
pub fn assemble_a(z: C64, theta: f64, params: &ElasticParams) -> Result<WedgeSymbolA> {
    if !(theta > 0.0 && theta < 2.0 * std::f64::consts::PI) {
        return Err(Error::Domain(format!("theta {theta} outside (0, 2 pi)")));
    }
    if let Some(m) = nearest_nonneg_integer(z) {
        return Err(Error::IntegerPole(m as f64));
    }
    let c1 = params.c1;
    let c2 = params.c2;
    let pi = std::f64::consts::PI;
    let cot = cot_pi(z);
    let csc = csc_pi(z);
    let th = theta;
    let sz = (z * (pi - th)).sin();
    let cz = (z * (pi - th)).cos();
    let s_th = th.sin();
    let pz = pi * z;
    let half = C64::new(-0.5, 0.0);

    let a1 = [
        half,
        -c1 * cot,
        -c1 * csc * sz + 0.25 * c2 * csc * (-(z + 2.0) * sz + z * (pz - (z - 2.0) * th).sin()),
        -c1 * cz * csc + 0.5 * c2 * z * csc * s_th * (pz - (z - 1.0) * th).sin(),
    ];
    let a2 = [
        c1 * cot,
        half,
        c1 * cz * csc + 0.5 * c2 * z * csc * s_th * (pz - (z - 1.0) * th).sin(),
        -c1 * csc * sz + 0.25 * c2 * csc * ((z - 2.0) * sz - z * (pz - (z - 2.0) * th).sin()),
    ];
    let a3 = [
        -c1 * csc * sz + 0.25 * c2 * csc * ((z - 2.0) * sz - z * (pz - (z + 2.0) * th).sin()),
        c1 * cz * csc - 0.5 * c2 * z * csc * s_th * (pz - (z + 1.0) * th).sin(),
        half,
        c1 * cot,
    ];
    let a4 = [
        -c1 * cz * csc - 0.5 * c2 * z * csc * s_th * (pz - (z + 1.0) * th).sin(),
        -c1 * csc * sz + 0.25 * c2 * csc * (-(z + 2.0) * sz + z * (pz - (z + 2.0) * th).sin()),
        -c1 * cot,
        half,
    ];
    let mut entries = CMat4::zeros();
    for i in 0..4 {
        entries[(i, 0)] = a1[i];
        entries[(i, 1)] = a2[i];
        entries[(i, 2)] = a3[i];
        entries[(i, 3)] = a4[i];
    }
    Ok(WedgeSymbolA { z, theta, entries })
}

/// det A(z, theta); vanishes exactly on the root set of the characteristic
/// equation (z^2 sin^2 t - sin^2((2pi-t) z))(z^2 sin^2 t - c^2 sin^2(t z)) = 0.
pub fn det_a(z: C64, theta: f64, params: &ElasticParams) -> Result<C64> {
    Ok(assemble_a(z, theta, params)?.entries.determinant())
}

/// |det A| after normalizing each column to unit Euclidean norm.
pub fn det_a_normalized(z: C64, theta: f64, params: &ElasticParams) -> Result<f64> {
    let a = assemble_a(z, theta, params)?.entries;
    let mut prod = 1.0;
    for j in 0..4 {
        prod *= a.column(j).norm();
    }
    Ok(a.determinant().norm() / prod)
}

/// Kernel vector(s) of A at a characteristic root, with the singular-value
/// spectrum attached.
#[derive(Debug, Clone)]
pub struct KernelVectors {
    /// Unit-norm right singular vector of the smallest singular value, with
    /// its largest-magnitude entry rotated to the positive real axis.
    pub primary: CVec4,
    /// Second vector when the two smallest singular values are not separated
    /// (sigma_4 / sigma_3 > 0.1), e.g. in the two-dimensional theta -> pi
    /// limit kernel.
    pub secondary: Option<CVec4>,
    /// Singular values in decreasing order.
    pub sigma: [f64; 4],
}

/// Right singular vector of A(z, theta) for its smallest singular value.
/// `z` must be a characteristic root for the residual bound ||A p|| <= tol
/// to hold; the residual is the caller's check.
pub fn kernel_vector(z: C64, theta: f64, params: &ElasticParams) -> Result<KernelVectors> {
    let a = assemble_a(z, theta, params)?.entries;
    kernel_vectors_of(&a)
}

/// As [`kernel_vector`] but for an explicitly supplied matrix.
pub fn kernel_vectors_of(a: &CMat4) -> Result<KernelVectors> {
    let svd = nalgebra::SVD::new(*a, false, true);
    let vt = svd.v_t.as_ref().expect("requested right singular vectors");
    let sv = &svd.singular_values;
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| sv[j].partial_cmp(&sv[i]).unwrap());
    let sigma = [sv[order[0]], sv[order[1]], sv[order[2]], sv[order[3]]];
    let right_vec = |row: usize| -> CVec4 {
        CVec4::new(
            vt[(row, 0)].conj(),
            vt[(row, 1)].conj(),
            vt[(row, 2)].conj(),
            vt[(row, 3)].conj(),
        )
    };
    let normalize = |col: CVec4| -> CVec4 {
        let mut best = 0usize;
        for i in 1..4 {
            if col[i].norm() > col[best].norm() {
                best = i;
            }
        }
        let phase = col[best] / col[best].norm();
        col.map(|x| x / phase / C64::new(col.norm(), 0.0))
    };
    let primary = normalize(right_vec(order[3]));
    // sigma_3 at rounding level means the kernel is (at least) two-dimensional
    let tiny = 1e-13 * sigma[0].max(f64::MIN_POSITIVE);
    let separated = sigma[2] > tiny && sigma[3] / sigma[2] <= 0.1;
    let secondary = if separated { None } else { Some(normalize(right_vec(order[2]))) };
    Ok(KernelVectors { primary, secondary, sigma })
}

/// Scalar coefficients of the Taylor block F(k, z, theta) in terms of the
/// Chebyshev values U_j(cos theta) and their autocorrelation W_j.
struct FCoeffs {
    i0: C64,
    i3: C64,
    i4: C64,
    i11: C64,
    i12: C64,
    i22: C64,
    i11s: C64,
    i12s: C64,
    i22s: C64,
}

fn f_coeffs(k: usize, z: C64, theta: f64, u: &[f64], w: &[f64]) -> FCoeffs {
    let x = theta.cos();
    let s = theta.sin();
    let d = std::f64::consts::PI * (C64::new(k as f64, 0.0) - z);
    let uf = |n: i64| if n >= 0 { u[n as usize] } else { 0.0 };
    let wf = |n: i64| if n >= 0 { w[n as usize] } else { 0.0 };
    let ki = k as i64;
    FCoeffs {
        i0: -1.0 / d,
        i3: s * uf(ki - 1) / d,
        i4: (x * uf(ki - 1) - uf(ki)) / d,
        i11: s * (wf(ki - 3) - 2.0 * x * wf(ki - 2) + x * x * wf(ki - 1)) / d,
        i12: s * s * (-wf(ki - 2) + x * wf(ki - 1)) / d,
        i22: s * s * s * wf(ki - 1) / d,
        i11s: s * (x * x * wf(ki - 3) - 2.0 * x * wf(ki - 2) + wf(ki - 1)) / d,
        i12s: s * s * (x * wf(ki - 3) - wf(ki - 2)) / d,
        i22s: s * s * s * wf(ki - 3) / d,
    }
}

fn f_matrix_from(c: &FCoeffs, params: &ElasticParams) -> CMat4 {
    let c1 = params.c1;
    let c2 = params.c2;
    let mut g = CMat4::zeros();
    g[(0, 1)] = -c1 * c.i0;
    g[(0, 2)] = c1 * c.i3 + c2 * c.i11;
    g[(0, 3)] = c1 * c.i4 + c2 * c.i12;
    g[(1, 0)] = c1 * c.i0;
    g[(1, 2)] = -c1 * c.i4 + c2 * c.i12;
    g[(1, 3)] = c1 * c.i3 + c2 * c.i22;
    g[(2, 0)] = c1 * c.i3 + c2 * c.i11s;
    g[(2, 1)] = -c1 * c.i4 + c2 * c.i12s;
    g[(2, 3)] = c1 * c.i0;
    g[(3, 0)] = c1 * c.i4 + c2 * c.i12s;
    g[(3, 1)] = c1 * c.i3 + c2 * c.i22s;
    g[(3, 2)] = -c1 * c.i0;
    g
}

/// Chebyshev-U values U_0..U_n at cos(theta) and their autocorrelation
/// W_j = sum_i U_i U_{j-i}, j = 0..n.
fn chebyshev_tables(n: usize, theta: f64) -> (Vec<f64>, Vec<f64>) {
    let x = theta.cos();
    let mut u = Vec::with_capacity(n + 2);
    u.push(1.0);
    u.push(2.0 * x);
    while u.len() <= n + 1 {
        let m = u.len();
        u.push(2.0 * x * u[m - 1] - u[m - 2]);
    }
    let w: Vec<f64> = (0..=n).map(|j| (0..=j).map(|i| u[i] * u[j - i]).sum()).collect();
    (u, w)
}

/// Taylor block of order k in the wedge expansion.
#[derive(Debug, Clone)]
pub struct TaylorBlockF {
    pub k: usize,
    pub z: C64,
    pub theta: f64,
    pub entries: CMat4,
}

/// Assemble F(k, z, theta) from the resolved series convention. The block
/// has a simple pole at z = k; callers hitting it get a resonance error.
pub fn assemble_f(k: usize, z: C64, theta: f64, params: &ElasticParams) -> Result<TaylorBlockF> {
    if !(theta > 0.0 && theta < 2.0 * std::f64::consts::PI) {
        return Err(Error::Domain(format!("theta {theta} outside (0, 2 pi)")));
    }
    if (z - C64::new(k as f64, 0.0)).norm() < 1e-10 {
        return Err(Error::Resonance { z, k });
    }
    let (u, w) = chebyshev_tables(k, theta);
    let c = f_coeffs(k, z, theta, &u, &w);
    Ok(TaylorBlockF { k, z, theta, entries: f_matrix_from(&c, params) })
}

/// Density-to-Taylor mapping matrix B(theta) of order N: block (k, n) is
/// `[F(k, z_{n,1}) p^{n,1} | ... | F(k, z_{n,4}) p^{n,4}]` for Taylor rows
/// k = 0..N-1.
#[derive(Debug, Clone)]
pub struct MappingMatrixB {
    pub theta: f64,
    pub order: usize,
    /// 4N exponents, n-major: entries 4n..4n+4 hold the four branch roots
    /// assigned to block column n.
    pub exponents: Vec<C64>,
    pub kernel_vectors: Vec<CVec4>,
    pub matrix: DMatrix<C64>,
    pub condition_estimate: f64,
    /// Set when the condition estimate exceeds 1e12 (exceptional angle).
    pub exceptional: bool,
}

/// Build B(theta) from a corner spectrum: for each branch the non-resonant
/// roots are sorted by (Re, Im) and the n-th of branch j lands in block
/// column n. Roots within 1e-6 of an integer are resonant for some Taylor
/// row and are skipped in favor of the branch's next root.
pub fn mapping_b(
    theta: f64,
    order: usize,
    spectrum: &crate::spectrum::CornerSpectrum,
    params: &ElasticParams,
) -> Result<MappingMatrixB> {
    use crate::spectrum::BranchId;
    if order < 1 {
        return Err(Error::Domain("mapping matrix needs order >= 1".into()));
    }
    let mut exponents = vec![C64::new(0.0, 0.0); 4 * order];
    let mut vectors = vec![CVec4::zeros(); 4 * order];
    for (j, branch) in [BranchId::H1, BranchId::H2, BranchId::H3, BranchId::H4]
        .into_iter()
        .enumerate()
    {
        let mut roots: Vec<C64> = spectrum
            .roots
            .iter()
            .filter(|r| r.branches.contains(&branch))
            .map(|r| r.z)
            .filter(|z| (z - C64::new(z.re.round(), 0.0)).norm() >= 1e-6)
            .collect();
        roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        if roots.len() < order {
            return Err(Error::Domain(format!(
                "branch {branch:?} supplies {} non-resonant roots, need {order}; enlarge the spectrum box",
                roots.len()
            )));
        }
        for n in 0..order {
            let z = roots[n];
            let kv = kernel_vector(z, theta, params)?;
            exponents[4 * n + j] = z;
            vectors[4 * n + j] = kv.primary;
        }
    }
    let mut matrix = DMatrix::zeros(4 * order, 4 * order);
    for n in 0..order {
        for j in 0..4 {
            let z = exponents[4 * n + j];
            let p = vectors[4 * n + j];
            for k in 0..order {
                let f = assemble_f(k, z, theta, params)?;
                let col = f.entries * p;
                for r in 0..4 {
                    matrix[(4 * k + r, 4 * n + j)] = col[r];
                }
            }
        }
    }
    let condition_estimate = cond1_estimate(&matrix);
    let exceptional = !condition_estimate.is_finite() || condition_estimate > 1e12;
    Ok(MappingMatrixB {
        theta,
        order,
        exponents,
        kernel_vectors: vectors,
        matrix,
        condition_estimate,
        exceptional,
    })
}

fn norm1(m: &DMatrix<C64>) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn cond1_estimate(m: &DMatrix<C64>) -> f64 {
    match m.clone().try_inverse() {
        Some(inv) => norm1(m) * norm1(&inv),
        None => f64::INFINITY,
    }
}

/// Solve B alpha = beta with a residual postcondition of 1e-10 ||beta||.
pub fn solve_corner_coefficients(
    b: &MappingMatrixB,
    beta: &[C64],
) -> Result<Vec<C64>> {
    let n = b.matrix.nrows();
    if beta.len() != n {
        return Err(Error::Domain(format!("beta length {} != {}", beta.len(), n)));
    }
    let rhs = nalgebra::DVector::from_column_slice(beta);
    let lu = b.matrix.clone().lu();
    let alpha = lu
        .solve(&rhs)
        .ok_or_else(|| Error::ExceptionalAngle(b.condition_estimate))?;
    let resid = (&b.matrix * &alpha - &rhs).norm();
    let scale = rhs.norm();
    if scale > 0.0 && resid > 1e-10 * scale {
        return Err(Error::ExceptionalAngle(b.condition_estimate));
    }
    Ok(alpha.as_slice().to_vec())
}

/// Evaluate the wedge response
/// h~(t) = sum_{n,j} alpha_{n,j} [A(z) p t^z + sum_k F(k, z) p t^k]
/// at the given t values (0 < t < 1). For kernel vectors the A-term
/// vanishes up to the root residual and the output is a pure Taylor series.
pub fn wedge_h_series(
    alpha: &[C64],
    exponents: &[C64],
    vectors: &[CVec4],
    theta: f64,
    params: &ElasticParams,
    t_values: &[f64],
) -> Result<Vec<CVec4>> {
    if alpha.len() != exponents.len() || vectors.len() != exponents.len() {
        return Err(Error::Domain("alpha/exponents/vectors length mismatch".into()));
    }
    let n_terms: usize = SERIES_MAX_TERMS;
    let (u, w) = chebyshev_tables(n_terms + 3, theta);
    // Precompute A(z) p and the per-k F coefficients applied to p.
    let mut a_heads = Vec::with_capacity(exponents.len());
    for (idx, &z) in exponents.iter().enumerate() {
        let a = assemble_a(z, theta, params)?;
        a_heads.push(a.entries * vectors[idx]);
    }
    let mut out = Vec::with_capacity(t_values.len());
    for &t in t_values {
        if !(0.0 < t && t < 1.0) {
            return Err(Error::Domain(format!("wedge series needs 0 < t < 1, got {t}")));
        }
        let mut acc = CVec4::zeros();
        for (idx, &z) in exponents.iter().enumerate() {
            if alpha[idx] == C64::new(0.0, 0.0) {
                continue;
            }
            let p = vectors[idx];
            let mut local = a_heads[idx] * powc(t, z);
            let mut tk = C64::new(1.0, 0.0);
            for k in 0..n_terms {
                let c = f_coeffs(k, z, theta, &u, &w);
                let term = f_matrix_from(&c, params) * p * tk;
                local += term;
                if k > 2 && term.norm() < SERIES_REL_CUTOFF * local.norm().max(1e-300) {
                    break;
                }
                tk *= t;
            }
            acc += local * alpha[idx];
        }
        out.push(acc);
    }
    Ok(out)
}
