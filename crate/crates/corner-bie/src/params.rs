use crate::{Error, Result};

/// Lamé constants together with the derived kernel constants used throughout
/// the corner analysis.
///
/// Plane strain convention is fixed; there is no plane-stress switch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticParams {
    pub lambda: f64,
    pub mu: f64,
    /// mu / (2 (lambda + 2 mu)); coefficient of the Cauchy part of the
    /// traction kernel. Equals the Hilbert-transform constant `k0`.
    pub c1: f64,
    /// (lambda + mu) / (lambda + 2 mu); coefficient of the r (x) r part.
    pub c2: f64,
    /// (lambda + 3 mu) / (lambda + mu); ratio entering the H3/H4 branches.
    pub c: f64,
    /// Alias of `c1` kept under the spectral-theory name.
    pub k0: f64,
}

impl ElasticParams {
    /// Requires `mu > 0` and `lambda + mu > 0` (strong ellipticity).
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !(mu > 0.0) || !(lambda + mu > 0.0) || !lambda.is_finite() || !mu.is_finite() {
            return Err(Error::Domain(format!(
                "need mu > 0 and lambda + mu > 0, got lambda = {lambda}, mu = {mu}"
            )));
        }
        let c1 = mu / (2.0 * (lambda + 2.0 * mu));
        let c2 = (lambda + mu) / (lambda + 2.0 * mu);
        let c = (lambda + 3.0 * mu) / (lambda + mu);
        Ok(Self { lambda, mu, c1, c2, c, k0: c1 })
    }

    /// The benchmark material (lambda, mu) = (1, 2).
    pub fn benchmark() -> Self {
        Self::new(1.0, 2.0).expect("benchmark constants are admissible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_constants() {
        let p = ElasticParams::benchmark();
        assert_eq!(p.c1, 0.2);
        assert_eq!(p.c2, 0.6);
        assert!((p.c - 7.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.k0, p.c1);
    }

    #[test]
    fn invariant_ranges() {
        for (l, m) in [(1.0, 2.0), (-0.5, 1.0), (10.0, 0.3), (0.0, 5.0)] {
            let p = ElasticParams::new(l, m).unwrap();
            assert!(p.c1 > 0.0 && p.c1 < 0.5, "c1 out of range for {l},{m}");
            assert!(p.c2 > 0.0 && p.c2 < 1.0);
            assert!(p.c > 1.0);
        }
    }

    #[test]
    fn rejects_inadmissible() {
        assert!(ElasticParams::new(1.0, 0.0).is_err());
        assert!(ElasticParams::new(-3.0, 2.0).is_err());
    }
}
