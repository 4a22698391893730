//! Monic orthogonal polynomials for the three weight families.
//!
//! Gaussian and Laguerre weights use their three-term recurrences; the
//! Jacobi family is built by exact Gram-Schmidt on the weight moments, which
//! works verbatim for every admissible rational exponent pair. All inner
//! products are reported relative to the weight's transcendental unit, so
//! every quantity here is an exact rational.

use num_traits::{One, Zero};

use crate::ensemble::{EnsembleSpec, Weight};
use crate::exact::{factorial, rat, rising, ExactPolynomial, ExactScalar};

/// Monic polynomials of degree 0..=max_degree orthogonal under `weight`.
pub fn monic_family(weight: &Weight, max_degree: usize) -> Vec<ExactPolynomial> {
    match weight {
        Weight::Gaussian { scale } => {
            recurrence_family(max_degree, |_| ExactScalar::zero(), |j| rat(j as i64) / scale)
        }
        Weight::Laguerre { rate, gamma } => recurrence_family(
            max_degree,
            |j| (rat(2 * j as i64 + 1) + gamma) / rate,
            |j| rat(j as i64) * (rat(j as i64) + gamma) / (rate * rate),
        ),
        Weight::Jacobi { .. } => gram_schmidt_family(weight, max_degree),
    }
}

/// Monic polynomial of degree `degree` orthogonal under `weight`.
pub fn monic(weight: &Weight, degree: usize) -> ExactPolynomial {
    monic_family(weight, degree).pop().expect("family is never empty")
}

/// Monic orthogonal polynomial for the eigenvalue weight of `spec`.
pub fn ensemble_monic(spec: &EnsembleSpec, degree: usize) -> ExactPolynomial {
    monic(&spec.weight(), degree)
}

pub fn ensemble_monic_family(spec: &EnsembleSpec, max_degree: usize) -> Vec<ExactPolynomial> {
    monic_family(&spec.weight(), max_degree)
}

/// p_{j+1} = (x - a_j) p_j - b_j p_{j-1}, the monic three-term recurrence.
fn recurrence_family(
    max_degree: usize,
    a: impl Fn(usize) -> ExactScalar,
    b: impl Fn(usize) -> ExactScalar,
) -> Vec<ExactPolynomial> {
    let mut family = Vec::with_capacity(max_degree + 1);
    family.push(ExactPolynomial::one());
    for j in 0..max_degree {
        let shift = &ExactPolynomial::from_coeffs(vec![-a(j), ExactScalar::one()]);
        let mut next = shift * &family[j];
        if j > 0 {
            next = &next - &family[j - 1].scale(&b(j));
        }
        family.push(next);
    }
    family
}

fn gram_schmidt_family(weight: &Weight, max_degree: usize) -> Vec<ExactPolynomial> {
    let mut family: Vec<ExactPolynomial> = Vec::with_capacity(max_degree + 1);
    let mut norms: Vec<ExactScalar> = Vec::with_capacity(max_degree + 1);
    for deg in 0..=max_degree {
        let mut p = ExactPolynomial::monomial(ExactScalar::one(), deg);
        for (q, nq) in family.iter().zip(&norms) {
            let c = inner_product(weight, &p, q) / nq;
            p = &p - &q.scale(&c);
        }
        let norm = inner_product(weight, &p, &p);
        assert!(!norm.is_zero(), "weight moments must be positive definite");
        norms.push(norm);
        family.push(p);
    }
    family
}

/// <p, q> relative to the weight's unit, via the exact moment functional.
pub fn inner_product(weight: &Weight, p: &ExactPolynomial, q: &ExactPolynomial) -> ExactScalar {
    let mut acc = ExactScalar::zero();
    for (i, pi) in p.coeffs().iter().enumerate() {
        if pi.is_zero() {
            continue;
        }
        for (j, qj) in q.coeffs().iter().enumerate() {
            if qj.is_zero() {
                continue;
            }
            acc += pi * qj * weight.moment((i + j) as u32);
        }
    }
    acc
}

/// Squared norm of the degree-k monic polynomial in closed form, relative to
/// the weight's unit. Cross-checked against `inner_product` in tests.
pub fn norm_squared_closed(weight: &Weight, degree: usize) -> ExactScalar {
    let k = degree as u32;
    match weight {
        Weight::Gaussian { scale } => {
            ExactScalar::from_integer(factorial(k as u64)) / scale.pow(k as i32)
        }
        Weight::Laguerre { rate, gamma } => {
            ExactScalar::from_integer(factorial(k as u64)) * rising(&(gamma + rat(1)), k)
                / rate.pow(2 * k as i32)
        }
        Weight::Jacobi { gamma1, gamma2 } => {
            if k == 0 {
                return ExactScalar::one();
            }
            let s = gamma1 + gamma2;
            let numer = ExactScalar::from_integer(factorial(k as u64))
                * rising(&(gamma1 + rat(1)), k)
                * rising(&(gamma2 + rat(1)), k);
            let denom = (&s + rat(2 * k as i64 + 1))
                * rising(&(&s + rat(2)), k - 1)
                * rising(&(&s + rat(k as i64 + 1)), k).pow(2);
            numer / denom
        }
    }
}

/// Explicit hypergeometric form of the monic Jacobi polynomial on (0, 1),
/// used as an independent oracle for the Gram-Schmidt construction:
///   j_n(y) = n!/((n+s+1)_n) * sum_i C(n+g2, n-i) C(n+g1, i) (y-1)^i y^(n-i).
pub fn jacobi_explicit(degree: usize, gamma1: &ExactScalar, gamma2: &ExactScalar) -> ExactPolynomial {
    let n = degree as u32;
    if n == 0 {
        return ExactPolynomial::one();
    }
    let s = gamma1 + gamma2;
    let y_minus_one = ExactPolynomial::from_coeffs(vec![rat(-1), rat(1)]);
    let mut sum = ExactPolynomial::zero();
    for i in 0..=n {
        // C(n+g2, n-i) = (g2+i+1)_(n-i) / (n-i)!,  C(n+g1, i) = (n+g1-i+1)_i / i!.
        let c = rising(&(gamma2 + rat(i as i64 + 1)), n - i)
            / ExactScalar::from_integer(factorial((n - i) as u64))
            * rising(&(rat(n as i64 - i as i64) + gamma1 + rat(1)), i)
            / ExactScalar::from_integer(factorial(i as u64));
        let term = &y_minus_one.pow(i) * &ExactPolynomial::monomial(c, (n - i) as usize);
        sum = &sum + &term;
    }
    let prefactor = ExactScalar::from_integer(factorial(n as u64))
        / rising(&(&s + rat(n as i64 + 1)), n);
    sum.scale(&prefactor)
}

#[derive(Debug, Clone)]
pub struct OrthogonalityReport {
    pub unit: String,
    /// <p_k, p_k>/unit for k = 0..=max_degree.
    pub diagonal: Vec<ExactScalar>,
    /// Every off-diagonal Gram entry is exactly zero.
    pub off_diagonal_zero: bool,
    /// The diagonal matches `norm_squared_closed` exactly.
    pub diagonal_matches_closed: bool,
}

/// Build the monic family up to `max_degree` and verify its Gram matrix.
pub fn check_orthogonality(weight: &Weight, max_degree: usize) -> OrthogonalityReport {
    let family = monic_family(weight, max_degree);
    let mut off_diagonal_zero = true;
    let mut diagonal = Vec::with_capacity(max_degree + 1);
    for (i, p) in family.iter().enumerate() {
        for (j, q) in family.iter().enumerate().skip(i) {
            let g = inner_product(weight, p, q);
            if i == j {
                diagonal.push(g);
            } else if !g.is_zero() {
                off_diagonal_zero = false;
            }
        }
    }
    let diagonal_matches_closed = diagonal
        .iter()
        .enumerate()
        .all(|(k, d)| *d == norm_squared_closed(weight, k));
    OrthogonalityReport {
        unit: weight.unit_description(),
        diagonal,
        off_diagonal_zero,
        diagonal_matches_closed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn coeffs(p: &ExactPolynomial, want: &[i64]) -> bool {
        p.coeffs() == want.iter().map(|&c| rat(c)).collect::<Vec<_>>().as_slice()
    }

    #[test]
    fn hermite_scale_one_is_probabilist() {
        let fam = monic_family(&Weight::Gaussian { scale: rat(1) }, 4);
        assert!(coeffs(&fam[0], &[1]));
        assert!(coeffs(&fam[1], &[0, 1]));
        assert!(coeffs(&fam[2], &[-1, 0, 1]));
        assert!(coeffs(&fam[3], &[0, -3, 0, 1]));
        assert!(coeffs(&fam[4], &[3, 0, -6, 0, 1]));
    }

    #[test]
    fn hermite_scaled_second_degree() {
        // x^2 - 1/N under exp(-N x^2/2).
        let p = monic(&Weight::Gaussian { scale: rat(3) }, 2);
        assert_eq!(p.coeffs(), &[ratio(-1, 3), rat(0), rat(1)]);
    }

    #[test]
    fn laguerre_matches_classical_sum() {
        // Monic Laguerre (rate 1) equals (-1)^k k! L_k^(gamma) with
        // L_k^(gamma)(x) = sum_i (-1)^i C(k+gamma, k-i) x^i / i!.
        let gamma = ratio(1, 2);
        for k in 0..6usize {
            let monic_lag = monic(&Weight::Laguerre { rate: rat(1), gamma: gamma.clone() }, k);
            let mut classical = ExactPolynomial::zero();
            for i in 0..=k {
                let c = rising(&(&gamma + rat(i as i64 + 1)), (k - i) as u32)
                    / ExactScalar::from_integer(factorial((k - i) as u64))
                    / ExactScalar::from_integer(factorial(i as u64));
                let sign = if i % 2 == 0 { rat(1) } else { rat(-1) };
                classical = &classical + &ExactPolynomial::monomial(sign * c, i);
            }
            let sign = if k % 2 == 0 { rat(1) } else { rat(-1) };
            let expected = classical.scale(&(sign * ExactScalar::from_integer(factorial(k as u64))));
            assert_eq!(monic_lag, expected, "degree {k}");
        }
    }

    #[test]
    fn recurrences_agree_with_gram_schmidt() {
        let weights = [
            Weight::Gaussian { scale: rat(4) },
            Weight::Laguerre { rate: rat(6), gamma: ratio(1, 2) },
        ];
        for w in &weights {
            let rec = monic_family(w, 6);
            let gs = gram_schmidt_family(w, 6);
            assert_eq!(rec, gs, "{w:?}");
        }
    }

    #[test]
    fn jacobi_gram_schmidt_matches_explicit_form() {
        let params = [
            (rat(0), rat(0)),
            (ratio(1, 2), ratio(-1, 2)),
            (rat(1), rat(2)),
            (ratio(-1, 2), ratio(-1, 2)),
        ];
        for (g1, g2) in &params {
            let w = Weight::Jacobi { gamma1: g1.clone(), gamma2: g2.clone() };
            for k in 0..=5usize {
                assert_eq!(
                    monic(&w, k),
                    jacobi_explicit(k, g1, g2),
                    "gamma1={g1} gamma2={g2} degree={k}"
                );
            }
        }
    }

    #[test]
    fn legendre_on_unit_interval() {
        let w = Weight::Jacobi { gamma1: rat(0), gamma2: rat(0) };
        let fam = monic_family(&w, 2);
        assert_eq!(fam[1].coeffs(), &[ratio(-1, 2), rat(1)]);
        assert_eq!(fam[2].coeffs(), &[ratio(1, 6), rat(-1), rat(1)]);
        assert_eq!(norm_squared_closed(&w, 1), ratio(1, 12));
        assert_eq!(norm_squared_closed(&w, 2), ratio(1, 180));
    }

    #[test]
    fn orthogonality_reports_for_all_families() {
        let weights = [
            Weight::Gaussian { scale: rat(5) },
            Weight::Laguerre { rate: rat(10), gamma: ratio(3, 2) },
            Weight::Jacobi { gamma1: ratio(1, 2), gamma2: rat(1) },
            Weight::Jacobi { gamma1: ratio(-1, 2), gamma2: ratio(-1, 2) },
        ];
        for w in &weights {
            let report = check_orthogonality(w, 6);
            assert!(report.off_diagonal_zero, "{w:?}");
            assert!(report.diagonal_matches_closed, "{w:?}");
        }
    }

    #[test]
    fn ensemble_norms_match_derived_formulas() {
        // GUE: <h_n, h_n> = n!/N^n (times sqrt(2 pi/N)).
        let gue = EnsembleSpec::gue(3).unwrap().weight();
        assert_eq!(norm_squared_closed(&gue, 4), ratio(24, 81));
        // LUE: <l_n, l_n> = n! (gamma+1)_n / (2N)^(2n).
        let lue = EnsembleSpec::lue(2, rat(1)).unwrap().weight();
        assert_eq!(norm_squared_closed(&lue, 2), rat(2 * 6) / rat(256));
    }

    #[test]
    fn ensemble_monic_dispatch() {
        let spec = EnsembleSpec::gue(2).unwrap();
        let h2 = ensemble_monic(&spec, 2);
        assert_eq!(h2.coeffs(), &[ratio(-1, 2), rat(0), rat(1)]);
        let fam = ensemble_monic_family(&spec, 3);
        assert_eq!(fam.len(), 4);
        assert!(fam.iter().all(|p| p.is_monic()));
    }
}
