//! Complex polynomials in ascending coefficient order, with roots from the
//! companion matrix.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// `p(x) = Σ coeffs[i] xⁱ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Poly { coeffs: vec![c] }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Degree after discarding leading coefficients that are negligible
    /// relative to the largest one; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return None;
        }
        self.coeffs.iter().rposition(|c| c.norm() > 1e-14 * scale)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    fn eval_with_derivative(&self, x: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    /// `x · self`.
    pub fn shift(&self) -> Poly {
        if self.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let at = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or_default();
        Poly {
            coeffs: (0..len).map(|i| at(self, i) + at(other, i)).collect(),
        }
    }

    /// All roots counted with multiplicity, as eigenvalues of the companion
    /// matrix of the monic polynomial, each polished by Newton steps on the
    /// original coefficients.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let degree = self
            .degree()
            .ok_or_else(|| Error::Numerical("roots of the zero polynomial are undefined".into()))?;
        if degree == 0 {
            return Ok(Vec::new());
        }
        let lead = self.coeffs[degree];
        let mut companion = DMatrix::<Complex64>::zeros(degree, degree);
        for i in 1..degree {
            companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..degree {
            companion[(i, degree - 1)] = -self.coeffs[i] / lead;
        }
        let eig = Schur::try_new(companion, f64::EPSILON, 10_000)
            .and_then(|s| s.eigenvalues())
            .ok_or_else(|| {
                Error::Numerical(format!("companion eigenvalues failed for degree {degree}"))
            })?;
        let trimmed = Poly::new(self.coeffs[..=degree].to_vec());
        Ok(eig.iter().map(|&r| trimmed.polish(r)).collect())
    }

    fn polish(&self, mut x: Complex64) -> Complex64 {
        let mut best = self.eval(x).norm();
        for _ in 0..3 {
            let (p, dp) = self.eval_with_derivative(x);
            if dp.norm() == 0.0 {
                break;
            }
            let next = x - p / dp;
            let val = self.eval(next).norm();
            if val.is_nan() || val >= best {
                break;
            }
            best = val;
            x = next;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn from_roots(roots: &[Complex64]) -> Poly {
        roots.iter().fold(Poly::constant(c(1.0, 0.0)), |p, &r| {
            p.shift().add(&p.scale(-r))
        })
    }

    #[test]
    fn recovers_known_roots() {
        let roots = [c(1.0, 0.0), c(-2.0, 0.5), c(0.3, -0.7), c(0.0, 3.0)];
        let p = from_roots(&roots).scale(c(2.0, -1.0));
        let mut found = p.roots().unwrap();
        assert_eq!(found.len(), 4);
        for r in roots {
            let (i, d) = found
                .iter()
                .enumerate()
                .map(|(i, f)| (i, (f - r).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(d < 1e-12, "root {r} missed by {d}");
            found.remove(i);
        }
    }

    #[test]
    fn linear_and_constant() {
        let p = Poly::new(vec![c(3.0, 0.0), c(2.0, 0.0)]);
        let r = p.roots().unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - c(-1.5, 0.0)).norm() < 1e-15);
        assert!(Poly::constant(c(1.0, 0.0)).roots().unwrap().is_empty());
        assert!(Poly::zero().roots().is_err());
    }

    #[test]
    fn negligible_leading_terms_are_dropped() {
        let p = Poly::new(vec![c(-1.0, 0.0), c(1.0, 0.0), c(1e-20, 0.0)]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.roots().unwrap().len(), 1);
    }

    #[test]
    fn double_root() {
        let p = from_roots(&[c(0.5, 0.5), c(0.5, 0.5), c(-1.0, 0.0)]);
        let r = p.roots().unwrap();
        assert_eq!(r.len(), 3);
        for x in r {
            assert!(p.eval(x).norm() < 1e-12);
        }
    }

    #[test]
    fn horner() {
        let p = Poly::new(vec![c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0)]);
        let x = c(0.5, -1.0);
        assert!((p.eval(x) - (c(1.0, 0.0) + c(0.0, 1.0) * x + 2.0 * x * x)).norm() < 1e-15);
    }
}
