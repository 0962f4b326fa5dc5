//! Polynomials stored by leading coefficient and roots.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::PolyError;

const RESCALE_HI: f64 = 1e100;
const RESCALE_LO: f64 = 1e-100;

/// `p(z) = lead · ∏ (z − z_j)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootPolynomial {
    pub lead: Complex64,
    pub roots: Vec<Complex64>,
}

/// `log|p(z)|` and `log|p'(z)|`, either of which may be `-∞`.
#[derive(Clone, Copy, Debug)]
pub struct LogPair {
    pub log_p: f64,
    pub log_dp: f64,
}

impl RootPolynomial {
    pub fn new(lead: Complex64, roots: Vec<Complex64>) -> Self {
        Self { lead, roots }
    }

    pub fn monic(roots: Vec<Complex64>) -> Self {
        Self::new(Complex64::new(1.0, 0.0), roots)
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn from_json(text: &str) -> Result<Self, PolyError> {
        serde_json::from_str(text).map_err(|e| PolyError::Parse(e.to_string()))
    }

    /// Image of the roots under `z ↦ scale·e^{i·rotation}·z + shift`.
    pub fn mapped(&self, scale: f64, rotation: f64, shift: Complex64) -> Self {
        let m = Complex64::from_polar(scale, rotation);
        Self::new(self.lead, self.roots.iter().map(|&r| m * r + shift).collect())
    }

    /// `p(z)`, accumulated as a log-magnitude and an angle so that large
    /// degrees neither overflow nor underflow before the final exponential.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let mut log_mag = self.lead.norm().ln();
        let mut angle = self.lead.arg();
        for &r in &self.roots {
            let d = z - r;
            log_mag += d.norm().ln();
            angle += d.arg();
        }
        Complex64::from_polar(log_mag.exp(), angle)
    }

    /// `log|p(z)|`.
    pub fn log_abs(&self, z: Complex64) -> f64 {
        let mut prod = self.lead;
        let mut scale = 0.0;
        for &r in &self.roots {
            prod *= z - r;
            let m = prod.norm_sqr();
            if m > RESCALE_HI || (m < RESCALE_LO && m > 0.0) {
                let n = m.sqrt();
                scale += n.ln();
                prod /= n;
            }
        }
        scale + prod.norm().ln()
    }

    /// `p'/p (z) = Σ 1/(z − z_j)`. Fails when `z` is within `1e-14·scale` of a root.
    pub fn log_derivative(&self, z: Complex64, scale: f64) -> Result<Complex64, PolyError> {
        let mut sum = Complex64::new(0.0, 0.0);
        for &r in &self.roots {
            let d = z - r;
            if d.norm() < 1e-14 * scale {
                return Err(PolyError::SingularPoint { re: z.re, im: z.im });
            }
            sum += d.inv();
        }
        Ok(sum)
    }

    /// `log|p|` and `log|p'|` at `z` in one pass over the roots.
    ///
    /// Away from the roots `p' = p · Σ 1/(z − z_j)`. At a root (or within
    /// `1e-12` of one, relative to `|z| + 1`) the product rule
    /// `p' = lead · Σ_k ∏_{j≠k} (z − z_j)` is summed instead.
    pub fn log_pair(&self, z: Complex64) -> LogPair {
        let mut prod = self.lead;
        let mut scale = 0.0;
        let mut sum = Complex64::new(0.0, 0.0);
        let near = 1e-12 * (1.0 + z.norm());
        let mut hit = false;
        for &r in &self.roots {
            let d = z - r;
            if d.norm() <= near {
                hit = true;
                break;
            }
            sum += d.inv();
            prod *= d;
            let m = prod.norm_sqr();
            if m > RESCALE_HI || (m < RESCALE_LO && m > 0.0) {
                let n = m.sqrt();
                scale += n.ln();
                prod /= n;
            }
        }
        if hit {
            return LogPair { log_p: self.log_abs(z), log_dp: self.log_abs_derivative_exact(z) };
        }
        let log_p = scale + prod.norm().ln();
        LogPair { log_p, log_dp: log_p + sum.norm().ln() }
    }

    /// `log|p'(z)|` by the product rule, summing terms in a common log scale.
    pub fn log_abs_derivative_exact(&self, z: Complex64) -> f64 {
        let n = self.roots.len();
        if n == 0 {
            return f64::NEG_INFINITY;
        }
        let mut terms: Vec<(Complex64, f64)> = Vec::with_capacity(n);
        for k in 0..n {
            let mut prod = self.lead;
            let mut scale = 0.0;
            for (j, &r) in self.roots.iter().enumerate() {
                if j == k {
                    continue;
                }
                prod *= z - r;
                let m = prod.norm_sqr();
                if m == 0.0 {
                    break;
                }
                if !(RESCALE_LO..=RESCALE_HI).contains(&m) {
                    let nn = m.sqrt();
                    scale += nn.ln();
                    prod /= nn;
                }
            }
            if prod.norm_sqr() > 0.0 {
                terms.push((prod, scale));
            }
        }
        let Some(top) = terms.iter().map(|t| t.1).reduce(f64::max) else {
            return f64::NEG_INFINITY;
        };
        let total: Complex64 = terms.iter().map(|(c, s)| c * (s - top).exp()).sum();
        top + total.norm().ln()
    }

    /// `p'(z)` as a complex number.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let near = 1e-12 * (1.0 + z.norm());
        if self.roots.iter().any(|&r| (z - r).norm() <= near) {
            let n = self.roots.len();
            return (0..n)
                .map(|k| {
                    self.roots
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .fold(self.lead, |acc, (_, &r)| acc * (z - r))
                })
                .sum();
        }
        let sum: Complex64 = self.roots.iter().map(|&r| (z - r).inv()).sum();
        self.evaluate(z) * sum
    }

    /// Monomial coefficients, lowest degree first.
    pub fn coefficients(&self) -> Vec<Complex64> {
        let mut c = vec![self.lead];
        for &r in &self.roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            c = next;
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    fn horner(coef: &[Complex64], z: Complex64) -> Complex64 {
        coef.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * z + a)
    }

    fn sample() -> RootPolynomial {
        RootPolynomial::new(c(2.0, -1.0), vec![c(0.3, 0.1), c(-0.5, 0.7), c(0.9, -0.2), c(0.0, 0.0)])
    }

    #[test]
    fn evaluate_matches_horner() {
        let p = sample();
        let coef = p.coefficients();
        for z in [c(1.1, 0.4), c(-0.3, -0.8), c(2.0, 2.0)] {
            let a = p.evaluate(z);
            let b = horner(&coef, z);
            assert_relative_eq!(a.re, b.re, max_relative = 1e-12);
            assert_relative_eq!(a.im, b.im, max_relative = 1e-12);
            assert_relative_eq!(p.log_abs(z), b.norm().ln(), epsilon = 1e-12);
        }
    }

    #[test]
    fn derivative_matches_coefficients() {
        let p = sample();
        let coef = p.coefficients();
        let dcoef: Vec<Complex64> =
            coef.iter().enumerate().skip(1).map(|(i, &a)| a * i as f64).collect();
        for z in [c(1.1, 0.4), c(0.3, 0.1), c(0.0, 0.0), c(-0.5, 0.7)] {
            let exact = horner(&dcoef, z);
            let lp = p.log_pair(z);
            assert_relative_eq!(lp.log_dp, exact.norm().ln(), epsilon = 1e-11);
            let d = p.derivative(z);
            assert_relative_eq!((d - exact).norm(), 0.0, epsilon = 1e-12 * exact.norm().max(1.0));
        }
    }

    #[test]
    fn double_root_has_zero_derivative() {
        let p = RootPolynomial::monic(vec![c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(p.log_pair(c(1.0, 0.0)).log_dp, f64::NEG_INFINITY);
    }

    #[test]
    fn log_derivative_is_singular_at_a_root() {
        let p = sample();
        assert!(matches!(p.log_derivative(c(0.3, 0.1), 1.0), Err(PolyError::SingularPoint { .. })));
        let v = p.log_derivative(c(1.0, 1.0), 1.0).unwrap();
        let direct = p.derivative(c(1.0, 1.0)) / p.evaluate(c(1.0, 1.0));
        assert_relative_eq!((v - direct).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn high_degree_stays_finite() {
        let p = RootPolynomial::monic(vec![c(0.0, 0.0); 600]);
        assert_relative_eq!(p.log_abs(c(10.0, 0.0)), 600.0 * 10f64.ln(), max_relative = 1e-13);
        let lp = p.log_pair(c(0.01, 0.0));
        assert_relative_eq!(lp.log_dp, 600f64.ln() + 599.0 * 0.01f64.ln(), max_relative = 1e-12);
    }

    #[test]
    fn json_format() {
        let p = RootPolynomial::from_json(r#"{"lead":[1,0],"roots":[[0.5,0],[0,0.5]]}"#).unwrap();
        assert_eq!(p.degree(), 2);
        assert!(RootPolynomial::from_json("{}").is_err());
    }
}
