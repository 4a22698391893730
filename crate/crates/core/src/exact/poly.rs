use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::scalar::{rat, to_fraction_string, ExactScalar};

/// Dense univariate polynomial over exact rationals, coefficients stored by
/// ascending degree with no trailing zeros (the zero polynomial stores an
/// empty vector and has degree `None`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPolynomial {
    coeffs: Vec<ExactScalar>,
}

impl ExactPolynomial {
    pub fn zero() -> Self {
        ExactPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        ExactPolynomial::constant(rat(1))
    }

    pub fn constant(c: ExactScalar) -> Self {
        ExactPolynomial { coeffs: vec![c] }.normalized()
    }

    /// The monomial x.
    pub fn x() -> Self {
        ExactPolynomial {
            coeffs: vec![rat(0), rat(1)],
        }
    }

    /// c * x^k.
    pub fn monomial(c: ExactScalar, k: usize) -> Self {
        let mut coeffs = vec![ExactScalar::zero(); k + 1];
        coeffs[k] = c;
        ExactPolynomial { coeffs }.normalized()
    }

    pub fn from_coeffs(coeffs: Vec<ExactScalar>) -> Self {
        ExactPolynomial { coeffs }.normalized()
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> ExactScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&ExactScalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return ExactPolynomial::zero();
        }
        ExactPolynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn evaluate(&self, x: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return ExactPolynomial::zero();
        }
        ExactPolynomial {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        }
        .normalized()
    }

    /// k-th derivative by repeated exact differentiation.
    pub fn derivative_n(&self, k: usize) -> Self {
        let mut p = self.clone();
        for _ in 0..k {
            if p.is_zero() {
                break;
            }
            p = p.derivative();
        }
        p
    }

    /// p(a*x + b): exact composition with an affine argument.
    pub fn compose_affine(&self, a: &ExactScalar, b: &ExactScalar) -> Self {
        let arg = ExactPolynomial::from_coeffs(vec![b.clone(), a.clone()]);
        let mut acc = ExactPolynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &arg) + &ExactPolynomial::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ExactPolynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficients as "num/den" strings by ascending degree (the CLI wire
    /// format for exact polynomials).
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(to_fraction_string).collect()
    }
}

impl Add for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn add(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + rhs.coeff(k));
        }
        ExactPolynomial { coeffs }.normalized()
    }
}

impl Sub for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn sub(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn neg(self) -> ExactPolynomial {
        ExactPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn mul(self, rhs: &ExactPolynomial) -> ExactPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return ExactPolynomial::zero();
        }
        let mut coeffs = vec![ExactScalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        ExactPolynomial { coeffs }.normalized()
    }
}

impl fmt::Display for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Unique interpolating polynomial of degree < points.len() through exact
/// points with pairwise distinct abscissae (Lagrange form).
pub fn interpolate(points: &[(ExactScalar, ExactScalar)]) -> ExactPolynomial {
    let mut acc = ExactPolynomial::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = ExactPolynomial::one();
        let mut denom = ExactScalar::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = &basis * &ExactPolynomial::from_coeffs(vec![-xj, rat(1)]);
            denom *= xi - xj;
        }
        acc = &acc + &basis.scale(&(yi / denom));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn arithmetic_and_degree() {
        let p = ExactPolynomial::from_coeffs(vec![rat(1), rat(2)]); // 1 + 2t
        let q = ExactPolynomial::from_coeffs(vec![rat(0), rat(0), rat(3)]); // 3t^2
        let sum = &p + &q;
        assert_eq!(sum.degree(), Some(2));
        let prod = &p * &q; // 3t^2 + 6t^3
        assert_eq!(prod.coeff(2), rat(3));
        assert_eq!(prod.coeff(3), rat(6));
        let diff = &sum - &q;
        assert_eq!(diff, p);
        assert!((&p - &p).is_zero());
        assert_eq!(ExactPolynomial::zero().degree(), None);
    }

    #[test]
    fn trailing_zeros_are_stripped() {
        let p = ExactPolynomial::from_coeffs(vec![rat(1), rat(0), rat(0)]);
        assert_eq!(p.degree(), Some(0));
        let q = ExactPolynomial::from_coeffs(vec![rat(1), rat(-1)]);
        let r = &q * &q; // 1 - 2t + t^2
        let s = &r - &ExactPolynomial::monomial(rat(1), 2);
        assert_eq!(s.degree(), Some(1));
    }

    #[test]
    fn evaluate_and_derivative() {
        // p = t^3 - t/2
        let p = ExactPolynomial::from_coeffs(vec![rat(0), ratio(-1, 2), rat(0), rat(1)]);
        assert_eq!(p.evaluate(&rat(2)), rat(7));
        let dp = p.derivative();
        assert_eq!(dp, ExactPolynomial::from_coeffs(vec![ratio(-1, 2), rat(0), rat(3)]));
        assert_eq!(p.derivative_n(3), ExactPolynomial::constant(rat(6)));
        assert!(p.derivative_n(4).is_zero());
    }

    #[test]
    fn affine_composition() {
        // p(m) = m^2, composed with m = (N-1)/2
        let p = ExactPolynomial::monomial(rat(1), 2);
        let q = p.compose_affine(&ratio(1, 2), &ratio(-1, 2));
        assert_eq!(q.evaluate(&rat(5)), rat(4));
        assert_eq!(q.coeff(2), ratio(1, 4));
    }

    #[test]
    fn interpolation_reconstructs_polynomial() {
        let p = ExactPolynomial::from_coeffs(vec![ratio(1, 3), rat(-2), rat(0), rat(5)]);
        let pts: Vec<_> = (0..4).map(|k| (rat(k), p.evaluate(&rat(k)))).collect();
        assert_eq!(interpolate(&pts), p);
    }
}
