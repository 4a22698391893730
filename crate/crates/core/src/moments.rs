//! Finite-N moments and correlations of characteristic polynomials, through
//! several mutually checking routes:
//!   * the multivariate polynomial at the box partition (coincident points),
//!   * partition sums over the box with factorial-determinant weights,
//!   * a determinant of derivatives of the univariate monic polynomials,
//!   * closed forms at t = 0 and closed coefficient sums for the second
//!     moment.
//! Everything here is exact rational arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::{c_lambda, dim_v, BoxPartitionIterator, Partition};
use crate::ensemble::{Ensemble, EnsembleSpec};
use crate::error::{Error, Result};
use crate::exact::{factorial, rat, ratio, ExactPolynomial, ExactScalar};
use crate::expansions::{d_matrix, g_ratio, phi_eval, DKind};
use crate::ortho;

/// Default cap on the number of box partitions a single call may enumerate.
pub const DEFAULT_PARTITION_BUDGET: u64 = 1_000_000;

/// Which computation produced a moment value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    BoxPhi,
    PartitionSum,
    DerivativeDet,
    ClosedFormT0,
    AppendixB,
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::BoxPhi => "box-phi",
            Route::PartitionSum => "partition-sum",
            Route::DerivativeDet => "derivative-det",
            Route::ClosedFormT0 => "closed-form-t0",
            Route::AppendixB => "second-moment-sum",
        }
    }
}

#[derive(Debug, Clone)]
pub enum MomentValue {
    Polynomial(ExactPolynomial),
    Scalar(ExactScalar),
}

#[derive(Debug, Clone)]
pub struct MomentResult {
    pub spec: EnsembleSpec,
    pub p: u32,
    pub route: Route,
    pub value: MomentValue,
}

fn fact(a: u64) -> ExactScalar {
    ExactScalar::from_integer(factorial(a))
}

/// 1/a! extended by zero to negative arguments, the convention that makes
/// the closed coefficient sums below truncate themselves.
fn inv_fact(a: i64) -> ExactScalar {
    if a < 0 {
        ExactScalar::zero()
    } else {
        fact(a as u64).recip()
    }
}

fn check_budget(n: u32, p: usize, budget: u64) -> Result<()> {
    let count = BoxPartitionIterator::count_in_box(n, p);
    if count > BigInt::from(budget) {
        return Err(Error::Resource(format!(
            "box ({n}^{p}) holds {count} partitions, above the budget of {budget}"
        )));
    }
    Ok(())
}

/// E[prod_j det(t_j - M)] for p = points.len() characteristic polynomial
/// factors: the multivariate orthogonal polynomial of the full box (N^p).
pub fn correlation(spec: &EnsembleSpec, points: &[ExactScalar]) -> Result<ExactScalar> {
    correlation_with_budget(spec, points, DEFAULT_PARTITION_BUDGET)
}

pub fn correlation_with_budget(
    spec: &EnsembleSpec,
    points: &[ExactScalar],
    budget: u64,
) -> Result<ExactScalar> {
    if points.is_empty() {
        return Err(Error::Domain("correlation needs at least one point".into()));
    }
    check_budget(spec.n, points.len(), budget)?;
    let lambda = Partition::rect(spec.n, points.len());
    Ok(phi_eval(spec, &lambda, points))
}

/// The p-th moment at a single point via the coincident-point box polynomial.
pub fn moment_value_box_phi(spec: &EnsembleSpec, p: u32, t: &ExactScalar) -> Result<ExactScalar> {
    let points = vec![t.clone(); p as usize];
    correlation(spec, &points)
}

/// E[det(t - M)^p] as an exact polynomial in t via the partition sum over
/// the box (N^p). The generic version takes the matrix size and the weight
/// scale separately; they coincide for the ensembles themselves but differ
/// in the eigenvalue-density application below.
fn gue_moment_poly_weighted(size: u32, p: u32, weight_scale: u32) -> ExactPolynomial {
    let lambda = Partition::rect(size, p as usize);
    let c_lam = c_lambda(&lambda, p);
    let full = lambda.weight();
    let minus_inv_2n = ratio(-1, 2 * weight_scale as i64);
    let mut coeffs = vec![ExactScalar::zero(); (size as usize) * (p as usize) + 1];
    for nu in BoxPartitionIterator::new(size, p as usize) {
        let w = nu.weight();
        if (full - w) % 2 == 1 {
            continue;
        }
        let d = d_matrix(&DKind::Hermite, &lambda, &nu);
        if d.is_zero() {
            continue;
        }
        let term = &c_lam
            * minus_inv_2n.pow(((full - w) / 2) as i32)
            * ExactScalar::from_integer(dim_v(&nu))
            / fact(w)
            * d;
        coeffs[w as usize] += term;
    }
    ExactPolynomial::from_coeffs(coeffs)
}

pub fn moment_poly(spec: &EnsembleSpec, p: u32) -> Result<ExactPolynomial> {
    moment_poly_with_budget(spec, p, DEFAULT_PARTITION_BUDGET)
}

pub fn moment_poly_with_budget(
    spec: &EnsembleSpec,
    p: u32,
    budget: u64,
) -> Result<ExactPolynomial> {
    if p == 0 {
        return Err(Error::Domain("moment order must be >= 1".into()));
    }
    check_budget(spec.n, p as usize, budget)?;
    let n = spec.n;
    let lambda = Partition::rect(n, p as usize);
    let full = lambda.weight();
    match &spec.ensemble {
        Ensemble::Gue => Ok(gue_moment_poly_weighted(n, p, n)),
        Ensemble::Lue { gamma } => {
            // (-1/2N)^(Np) G_lam(p,g)/G_nu(p,g) C_lam(p) sum over nu of
            // (-2N)^(|nu|) dim V_nu / |nu|! D^(L).
            let c_lam = c_lambda(&lambda, p);
            let pre = ratio(-1, 2 * n as i64).pow(full as i32);
            let minus_2n = rat(-(2 * n as i64));
            let mut coeffs = vec![ExactScalar::zero(); (n as usize) * (p as usize) + 1];
            for nu in BoxPartitionIterator::new(n, p as usize) {
                let d = d_matrix(&DKind::Laguerre, &lambda, &nu);
                if d.is_zero() {
                    continue;
                }
                let w = nu.weight();
                let term = &pre
                    * minus_2n.pow(w as i32)
                    * g_ratio(&lambda, &nu, p, gamma)
                    * &c_lam
                    * ExactScalar::from_integer(dim_v(&nu))
                    / fact(w)
                    * d;
                coeffs[w as usize] += term;
            }
            Ok(ExactPolynomial::from_coeffs(coeffs))
        }
        Ensemble::Jue { gamma1, gamma2 } => {
            // (-1)^(Np+|nu|) G_lam(p,g1)/G_nu(p,g1) C_lam(p) dim V_nu/|nu|!
            // times the paired Jacobi-tilde determinant.
            let s = gamma1 + gamma2;
            let c_lam = c_lambda(&lambda, p);
            let num_sign = if full % 2 == 0 { rat(1) } else { rat(-1) };
            let mut coeffs = vec![ExactScalar::zero(); (n as usize) * (p as usize) + 1];
            for nu in BoxPartitionIterator::new(n, p as usize) {
                let kind = DKind::JacobiTilde { n_vars: p, s: s.clone() };
                let d = d_matrix(&kind, &lambda, &nu);
                if d.is_zero() {
                    continue;
                }
                let w = nu.weight();
                let sign = if w % 2 == 0 { rat(1) } else { rat(-1) };
                let term = &num_sign
                    * sign
                    * g_ratio(&lambda, &nu, p, gamma1)
                    * &c_lam
                    * ExactScalar::from_integer(dim_v(&nu))
                    / fact(w)
                    * d;
                coeffs[w as usize] += term;
            }
            Ok(ExactPolynomial::from_coeffs(coeffs))
        }
    }
}

/// E[det(t - M)^p] through the confluent determinant of derivatives of the
/// univariate monic polynomials of degrees N..N+p-1. The confluent limit of
/// the determinant ratio normalizes to det[phi^(i-1)_(N+j-1)] divided by
/// prod_{j=1..p} (j-1)!, with no sign.
pub fn moment_derivative_det(spec: &EnsembleSpec, p: u32, t: &ExactScalar) -> Result<ExactScalar> {
    if p == 0 {
        return Err(Error::Domain("moment order must be >= 1".into()));
    }
    let n = spec.n as usize;
    let p = p as usize;
    let family = ortho::ensemble_monic_family(spec, n + p - 1);
    let m = crate::exact::ExactMatrix::from_fn(p, p, |i, j| {
        family[n + j].derivative_n(i).evaluate(t)
    });
    let mut norm = ExactScalar::one();
    for j in 1..=p as u64 {
        norm *= fact(j - 1);
    }
    Ok(m.det().expect("square by construction") / norm)
}

/// The universal constant prod_{j=0..p-1} j!/(p+j)! appearing in the large-N
/// leading factor of the 2p-th moment.
pub fn gamma_p(p: u32) -> ExactScalar {
    let mut acc = ExactScalar::one();
    for j in 0..p as u64 {
        acc *= fact(j) / fact(p as u64 + j);
    }
    acc
}

/// Product form of C_((N^2p))(2p) * D_e or D_o, split by the parity of N.
pub fn gue_c_lambda_d_parity(n: u32, p: u32) -> ExactScalar {
    let p64 = p as u64;
    if n % 2 == 0 {
        let m = (n / 2) as u64;
        let mut acc = ExactScalar::one();
        for j in 0..p64 {
            acc *= fact(2 * m + j) * fact(2 * m + p64 + j) / (&fact(m + j) * &fact(m + j))
                * fact(j)
                / fact(p64 + j);
        }
        acc
    } else {
        let m = ((n - 1) / 2) as u64;
        let mut acc = fact(m) / fact(m + p64);
        if p % 2 == 1 {
            acc = -acc;
        }
        for j in 0..p64 {
            acc *= fact(2 * m + 1 + j) * fact(2 * m + 1 + p64 + j)
                / (&fact(m + j) * &fact(m + j))
                * fact(j)
                / fact(p64 + j);
        }
        acc
    }
}

/// E[det(M)^(2p)] for the GUE in closed form: (-1/2N)^(Np) times the parity
/// product above. Note p is the half-order here.
pub fn gue_moment_t0(n: u32, p: u32) -> ExactScalar {
    ratio(-1, 2 * n as i64).pow((n as u64 * p as u64) as i32) * gue_c_lambda_d_parity(n, p)
}

/// (-1/2N)^N C_((N,N))(2) D^(H) against the empty partition, the prefactor
/// of the closed second-moment coefficient sums.
pub fn second_moment_prefactor(n: u32) -> ExactScalar {
    let base = fact(n as u64) * fact(n as u64 + 1);
    let cd = if n % 2 == 0 {
        let h = (n / 2) as u64;
        base / (&fact(h) * &fact(h))
    } else {
        let lo = ((n - 1) / 2) as u64;
        -base / (&fact(lo) * &fact(lo + 1))
    };
    ratio(-1, 2 * n as i64).pow(n as i32) * cd
}

/// Coefficient of t^(2k) in E[det(t - M)^2] divided by
/// `second_moment_prefactor(N)`, via the closed j-sums; zero for k > N.
pub fn second_moment_coeff(n: u32, k: u32) -> ExactScalar {
    if k > n {
        return ExactScalar::zero();
    }
    let k = k as i64;
    let bracket = if n % 2 == 0 {
        let m = (n / 2) as i64;
        let mut acc = ExactScalar::zero();
        let mut j = 0i64;
        while 2 * j <= k - 1 {
            let inner = rat(2 * k + 1 - 4 * j) * inv_fact(2 * k + 1 - 2 * j) * inv_fact(2 * j)
                - rat(2 * k - 1 - 4 * j) * inv_fact(2 * k - 2 * j) * inv_fact(2 * j + 1);
            acc += inner * fact(m as u64) * fact(m as u64) * inv_fact(m - k + j) * inv_fact(m - j);
            j += 1;
        }
        if k % 2 == 0 {
            let half = inv_fact(m - k / 2);
            acc += inv_fact(k) * inv_fact(k + 1) * fact(m as u64) * fact(m as u64) * &half * &half;
        }
        acc
    } else {
        let m = ((n - 1) / 2) as i64;
        let mm = fact(m as u64) * fact(m as u64 + 1);
        let mut acc = ExactScalar::zero();
        let mut j = 0i64;
        while 2 * j <= k - 2 {
            let inner = -rat(2 * k - 1 - 4 * j) * inv_fact(2 * k - 2 * j) * inv_fact(2 * j + 1)
                + rat(2 * k - 3 - 4 * j) * inv_fact(2 * k - 2 * j - 1) * inv_fact(2 * j + 2);
            acc += inner * &mm * inv_fact(m + 1 - k + j) * inv_fact(m - j);
            j += 1;
        }
        acc += inv_fact(2 * k) * fact(m as u64) * inv_fact(m - k);
        if k % 2 == 1 {
            let half = inv_fact(m - (k - 1) / 2);
            acc -= inv_fact(k) * inv_fact(k + 1) * &mm * &half * &half;
        }
        acc
    };
    rat(-(2 * n as i64)).pow(k as i32) * bracket
}

/// Second moment of the characteristic polynomial assembled from the closed
/// coefficient sums, as a polynomial in t.
pub fn second_moment_poly(n: u32) -> ExactPolynomial {
    let pre = second_moment_prefactor(n);
    let mut coeffs = vec![ExactScalar::zero(); 2 * n as usize + 1];
    for k in 0..=n {
        coeffs[2 * k as usize] = &pre * second_moment_coeff(n, k);
    }
    ExactPolynomial::from_coeffs(coeffs)
}

/// The rational part of the one-point eigenvalue density, with the
/// transcendental factor carried symbolically in `unit`.
#[derive(Debug, Clone)]
pub struct OnePointDensity {
    pub n: u32,
    pub poly: ExactPolynomial,
    pub unit: String,
}

/// Eigenvalue density of the N x N GUE expressed through the second moment
/// of an (N-1)-variable ensemble that keeps the weight scale N:
///   R_1(t) = N^(N-1)/(N-1)! * E_(N-1 vars, weight N)[det(t-M)^2]
///            * sqrt(N/(2 pi)) * exp(-N t^2/2).
pub fn one_point_density(n: u32) -> Result<OnePointDensity> {
    if n < 2 {
        return Err(Error::Domain("density relation needs N >= 2".into()));
    }
    let inner = gue_moment_poly_weighted(n - 1, 2, n);
    let mut scale = ExactScalar::one();
    for _ in 0..(n - 1) {
        scale *= rat(n as i64);
    }
    scale /= fact(n as u64 - 1);
    Ok(OnePointDensity {
        n,
        poly: inner.scale(&scale),
        unit: format!("sqrt({n}/(2*pi)) * exp(-{n}*t^2/2)"),
    })
}

/// The polynomial part of the density evaluated at t.
pub fn one_point_density_relation(n: u32, t: &ExactScalar) -> Result<ExactScalar> {
    Ok(one_point_density(n)?.poly.evaluate(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::gaussian_moment;
    use crate::exact::rising;

    fn specs() -> Vec<EnsembleSpec> {
        vec![
            EnsembleSpec::gue(3).unwrap(),
            EnsembleSpec::lue(3, ratio(1, 2)).unwrap(),
            EnsembleSpec::jue(3, ratio(1, 2), ratio(3, 2)).unwrap(),
        ]
    }

    #[test]
    fn first_moment_is_the_monic_polynomial() {
        for spec in specs() {
            let m = moment_poly(&spec, 1).unwrap();
            let phi = ortho::ensemble_monic(&spec, spec.n as usize);
            assert_eq!(m, phi, "{spec}");
            // And through the correlation route at a point.
            let t = ratio(-3, 7);
            assert_eq!(
                correlation(&spec, &[t.clone()]).unwrap(),
                phi.evaluate(&t),
                "{spec}"
            );
        }
    }

    #[test]
    fn gue_small_moment_polynomials() {
        // Brute-force oracles: E[det(t-M)^2] = 3/4 + t^4 at N = 2 and
        // 1/3 + t^2 - t^4 + t^6 at N = 3.
        let n2 = moment_poly(&EnsembleSpec::gue(2).unwrap(), 2).unwrap();
        assert_eq!(
            n2.coeffs(),
            &[ratio(3, 4), rat(0), rat(0), rat(0), rat(1)]
        );
        let n3 = moment_poly(&EnsembleSpec::gue(3).unwrap(), 2).unwrap();
        assert_eq!(
            n3.coeffs(),
            &[ratio(1, 3), rat(0), rat(1), rat(0), rat(-1), rat(0), rat(1)]
        );
    }

    #[test]
    fn routes_agree_on_small_cases() {
        let all_specs: Vec<EnsembleSpec> = (1..=5)
            .flat_map(|n| {
                vec![
                    EnsembleSpec::gue(n).unwrap(),
                    EnsembleSpec::lue(n, ratio(1, 2)).unwrap(),
                    EnsembleSpec::jue(n, ratio(1, 2), ratio(3, 2)).unwrap(),
                ]
            })
            .collect();
        let ts = [rat(0), ratio(1, 2), ratio(-3, 7)];
        for spec in &all_specs {
            for p in 1..=3u32 {
                let poly = moment_poly(spec, p).unwrap();
                for t in &ts {
                    let via_poly = poly.evaluate(t);
                    let via_det = moment_derivative_det(spec, p, t).unwrap();
                    assert_eq!(via_poly, via_det, "{spec} p={p} t={t}");
                    let via_phi = moment_value_box_phi(spec, p, t).unwrap();
                    assert_eq!(via_poly, via_phi, "{spec} p={p} t={t}");
                }
            }
        }
    }

    #[test]
    fn moments_are_monic_of_full_degree() {
        for spec in specs() {
            for p in 1..=2u32 {
                let poly = moment_poly(&spec, p).unwrap();
                assert_eq!(poly.degree(), Some((spec.n * p) as usize), "{spec}");
                assert!(poly.is_monic(), "{spec} p={p}");
            }
        }
    }

    #[test]
    fn gue_parity_support() {
        for n in 2..=5u32 {
            for p in 1..=3u32 {
                let poly = moment_poly(&EnsembleSpec::gue(n).unwrap(), p).unwrap();
                for (k, c) in poly.coeffs().iter().enumerate() {
                    if (k as u64 % 2) != ((n as u64 * p as u64) % 2) {
                        assert!(c.is_zero(), "N={n} p={p} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn odd_size_determinant_mean_vanishes() {
        for n in [1u32, 3, 5] {
            let poly = moment_poly(&EnsembleSpec::gue(n).unwrap(), 1).unwrap();
            assert!(poly.coeff(0).is_zero(), "N={n}");
        }
    }

    #[test]
    fn t0_closed_form_examples() {
        assert_eq!(gue_moment_t0(2, 1), ratio(3, 4));
        for n in 1..=6u32 {
            for p in 1..=2u32 {
                let closed = gue_moment_t0(n, p);
                let poly = moment_poly(&EnsembleSpec::gue(n).unwrap(), 2 * p).unwrap();
                assert_eq!(closed, poly.coeff(0), "N={n} p={p}");
                assert!(closed > ExactScalar::zero(), "N={n} p={p}");
            }
        }
    }

    #[test]
    fn t0_product_matches_determinant() {
        // The factorial-ratio product equals C_lambda(2p) D^(H)_(lambda,0)
        // computed from the determinant, for both parities.
        for n in 1..=7u32 {
            for p in 1..=3u32 {
                let lam = Partition::rect(n, 2 * p as usize);
                let det_route = c_lambda(&lam, 2 * p)
                    * d_matrix(&DKind::Hermite, &lam, &Partition::empty());
                assert_eq!(gue_c_lambda_d_parity(n, p), det_route, "N={n} p={p}");
            }
        }
    }

    #[test]
    fn universal_constant_divides_out() {
        // Dividing the parity product by gamma_p = prod j!/(p+j)! leaves a
        // ratio of factorials: an integer times a parity-dependent sign for
        // these sizes.
        for n in 2..=5u32 {
            for p in 1..=3u32 {
                let ratio_of_factorials = gue_c_lambda_d_parity(n, p) / gamma_p(p);
                assert!(ratio_of_factorials.is_integer(), "N={n} p={p}");
            }
        }
    }

    #[test]
    fn second_moment_coeff_examples() {
        assert_eq!(second_moment_coeff(4, 0), rat(1));
        // Even N: the t^2 coefficient cancels.
        for n in [2u32, 4, 6, 8] {
            assert!(second_moment_coeff(n, 1).is_zero(), "N={n}");
        }
        assert!(second_moment_coeff(5, 6).is_zero(), "k > N vanishes");
    }

    #[test]
    fn second_moment_sums_match_partition_route() {
        for n in 1..=9u32 {
            let closed = second_moment_poly(n);
            let generic = moment_poly(&EnsembleSpec::gue(n).unwrap(), 2).unwrap();
            assert_eq!(closed, generic, "N={n}");
        }
    }

    #[test]
    fn bracket_polynomials_match_series_displays() {
        // Coefficients of t^2, t^4 in the 2p-th moment divided by the t=0
        // value: even N has no t^2 term; odd N gives Np; t^4 gives
        // N^3 p/6 (even) and N^2(p^2 - Np)/6 (odd).
        for n in 2..=7u32 {
            for p in 1..=3u32 {
                let poly = moment_poly(&EnsembleSpec::gue(n).unwrap(), 2 * p).unwrap();
                let t0 = poly.coeff(0);
                let b2 = poly.coeff(2) / &t0;
                let b4 = poly.coeff(4) / &t0;
                let (n64, p64) = (n as i64, p as i64);
                if n % 2 == 0 {
                    assert!(b2.is_zero(), "N={n} p={p}");
                    assert_eq!(b4, ratio(n64 * n64 * n64 * p64, 6), "N={n} p={p}");
                } else {
                    assert_eq!(b2, rat(n64 * p64), "N={n} p={p}");
                    assert_eq!(
                        b4,
                        rat(n64 * n64) * rat(p64 * p64 - n64 * p64) / rat(6),
                        "N={n} p={p}"
                    );
                }
            }
        }
    }

    #[test]
    fn d_ratio_table_reproduction() {
        // D^(H)_(lambda,nu)/D^(H)_(lambda,0) for lambda = (N^2p) and the
        // eight partitions nu with |nu| <= 4, as polynomials in m and p.
        let nu_list: [(&[u32], fn(i64, i64) -> ExactScalar, fn(i64, i64) -> ExactScalar); 8] = [
            (&[], |_, _| rat(1), |_, _| rat(1)),
            (&[2], |m, p| rat(m * p), |m, p| rat(m * p)),
            (&[1, 1], |m, p| rat(-m * p), |m, p| rat(-(m + 1) * p)),
            (
                &[4],
                |m, p| ratio(m * (m - 1) * p * (p + 1), 2),
                |m, p| ratio(m * (m - 1) * p * (p + 1), 2),
            ),
            (
                &[3, 1],
                |m, p| ratio(-m * (m - 1) * p * (p + 1), 2),
                |m, p| ratio(-m * (m + 1) * p * (p + 1), 2),
            ),
            (
                &[2, 2],
                |m, p| rat(m * m * p * p),
                |m, p| rat(m * (m + 1) * p * p),
            ),
            (
                &[2, 1, 1],
                |m, p| ratio(-m * (m + 1) * p * (p - 1), 2),
                |m, p| ratio(-m * (m + 1) * p * (p - 1), 2),
            ),
            (
                &[1, 1, 1, 1],
                |m, p| ratio(m * (m + 1) * p * (p - 1), 2),
                |m, p| ratio((m + 2) * (m + 1) * p * (p - 1), 2),
            ),
        ];
        for n in 4..=7u32 {
            for p in 1..=3u32 {
                let lam = Partition::rect(n, 2 * p as usize);
                let d0 = d_matrix(&DKind::Hermite, &lam, &Partition::empty());
                let m = if n % 2 == 0 { (n / 2) as i64 } else { ((n - 1) / 2) as i64 };
                for (parts, even_poly, odd_poly) in &nu_list {
                    let nu = Partition::new(parts.to_vec()).unwrap();
                    let got = d_matrix(&DKind::Hermite, &lam, &nu) / &d0;
                    let expected = if n % 2 == 0 {
                        even_poly(m, p as i64)
                    } else {
                        odd_poly(m, p as i64)
                    };
                    assert_eq!(got, expected, "N={n} p={p} nu={nu}");
                }
            }
        }
    }

    #[test]
    fn density_polynomial_integrates_to_n() {
        for n in 2..=6u32 {
            let density = one_point_density(n).unwrap();
            let var = ratio(1, n as i64);
            let mut total = ExactScalar::zero();
            for (k, c) in density.poly.coeffs().iter().enumerate() {
                total += c * gaussian_moment(k as u32, &var);
            }
            assert_eq!(total, rat(n as i64), "N={n}");
        }
    }

    #[test]
    fn density_small_case_shape() {
        let density = one_point_density(2).unwrap();
        assert_eq!(density.poly.degree(), Some(2));
        assert!(density.unit.contains("exp(-2*t^2/2)"));
        let at_zero = one_point_density_relation(2, &rat(0)).unwrap();
        assert_eq!(at_zero, density.poly.coeff(0));
    }

    #[test]
    fn budget_guardrail_refuses_large_boxes() {
        let spec = EnsembleSpec::gue(40).unwrap();
        let err = moment_poly_with_budget(&spec, 10, 1000).unwrap_err();
        match err {
            Error::Resource(msg) => assert!(msg.contains("budget")),
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn lue_jue_carry_gamma_dependence() {
        // gamma enters the constant term of the first moment:
        // l_N(0) = (-1)^N (gamma+1)_N/(2N)^N.
        let n = 3u32;
        let gamma = ratio(1, 2);
        let poly = moment_poly(&EnsembleSpec::lue(n, gamma.clone()).unwrap(), 1).unwrap();
        let expected = -rising(&(&gamma + rat(1)), n) / rat((2 * n as i64).pow(3));
        assert_eq!(poly.coeff(0), expected);
    }
}
