//! Statistics of secular coefficients.
//!
//! Writing det(tI - M) = sum_{r=0}^{N} (-1)^r sc_r(M) t^{N-r}, the r-th
//! secular coefficient sc_r(M) is the r-th elementary symmetric polynomial
//! e_r of the eigenvalues. Products of elementary symmetric polynomials
//! expand over Schur polynomials as e_lambda = sum_mu K_{mu', lambda} S_mu
//! (Kostka numbers), and each S_mu averages against the multivariate
//! orthogonal basis, leaving only its Phi_0-coefficient. That collapses
//! every average here to a finite combinatorial sum:
//!
//!   Gaussian:  E[prod_j sc_{lambda_j}] =
//!       sum_{mu |- |lambda|} (2N)^{-m} / m! * K_{mu', lambda}
//!         * chi^mu_{(2^m)} * C_mu(N),            m = |lambda|/2,
//!     zero for odd |lambda|; C_mu(N) = prod_{(i,j) in mu} (N - i + j).
//!   Laguerre:  E[prod_j sc_{lambda_j}] =
//!       (2N)^{-|lambda|} / |lambda|! * sum_mu K_{mu', lambda}
//!         * f^mu * G_mu(N, gamma) G_mu(N, 0) / (G_0(N, gamma) G_0(N, 0)),
//!     with f^mu = chi^mu at the identity class and G the Gamma-product.
//!
//! Single coefficients collapse further to closed products (only
//! mu = (1^r) survives), and the means assemble into the generating
//! identity sum_r (-1)^r E[sc_r] t^{N-r} = monic orthogonal polynomial of
//! degree N, which `secular_generating_check` verifies exactly against the
//! independently-built orthogonal family.

use num_traits::{One, Zero};

use crate::combinatorics::{c_lambda, character, dim_v, kostka, partitions_of, Partition};
use crate::ensemble::{Ensemble, EnsembleSpec};
use crate::error::{Error, Result};
use crate::exact::{factorial, rat, rising, ExactPolynomial, ExactScalar};
use crate::expansions::g_ratio;
use crate::ortho;

/// Largest matrix size accepted by [`secular_generating_check`]; keeps the
/// N + 1 exact means and the degree-N orthogonalization cheap.
pub const MAX_GENERATING_N: u32 = 12;

/// A product of secular coefficients prod_j sc_{lambda_j}(M) to average.
///
/// Any index above N makes the product vanish identically (e_r = 0 for
/// r > N variables), so such queries evaluate to zero rather than erroring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecularQuery {
    pub spec: EnsembleSpec,
    pub indices: Partition,
}

impl SecularQuery {
    /// The exact expectation of the queried product.
    ///
    /// Single indices use the closed-form means; longer products dispatch to
    /// [`secular_joint`] (unsupported for the Jacobi ensemble).
    pub fn evaluate(&self) -> Result<ExactScalar> {
        if self.indices.part(0) > self.spec.n {
            return Ok(ExactScalar::zero());
        }
        match self.indices.len() {
            0 => Ok(ExactScalar::one()),
            1 => Ok(secular_mean(&self.spec, self.indices.part(0))),
            _ => secular_joint(&self.spec, &self.indices),
        }
    }
}

/// E[sc_r(M)], the mean of a single secular coefficient; zero for r > N.
///
/// Gaussian: zero for odd r, (-1)^{r/2} (2N)^{-r/2} / (r/2)! * N!/(N-r)!
/// for even r. Laguerre: (2N)^{-r} / r! * N!/(N-r)! * (N-r+gamma+1)_r.
/// Jacobi: read off the explicit hypergeometric form of the degree-N monic
/// Jacobi polynomial, since the means are its coefficients up to sign.
pub fn secular_mean(spec: &EnsembleSpec, r: u32) -> ExactScalar {
    if r > spec.n {
        return ExactScalar::zero();
    }
    let n = spec.n;
    match &spec.ensemble {
        Ensemble::Gue => {
            if r % 2 == 1 {
                return ExactScalar::zero();
            }
            let half = r / 2;
            let sign = if half % 2 == 0 { 1 } else { -1 };
            rat(sign)
                * rat(2 * n as i64).pow(-(half as i32))
                * ExactScalar::from(factorial(n as u64))
                / ExactScalar::from(factorial(half as u64) * factorial((n - r) as u64))
        }
        Ensemble::Lue { gamma } => {
            rat(2 * n as i64).pow(-(r as i32))
                * ExactScalar::from(factorial(n as u64))
                / ExactScalar::from(factorial(r as u64) * factorial((n - r) as u64))
                * rising(&(rat((n - r) as i64 + 1) + gamma), r)
        }
        Ensemble::Jue { gamma1, gamma2 } => {
            let poly = ortho::jacobi_explicit(n as usize, gamma1, gamma2);
            let sign = if r % 2 == 0 { 1 } else { -1 };
            rat(sign) * poly.coeff((n - r) as usize)
        }
    }
}

/// E[sc_a(M) sc_b(M)] for the Gaussian ensemble, for arbitrary indices.
///
/// Zero for mixed parity and whenever an index exceeds N. Equal parities
/// reduce to single sums over the number of columns j shared by the two
/// column diagrams:
///   even a = 2r, b = 2s:
///     (-1/2N)^{r+s} sum_{j<=min(r,s)} 4^j / ((r-j)!(s-j)!)
///       * N!(N-2j)! / ((N-2r)!(N-2s)!),
///   odd a = 2r+1, b = 2s+1: the same sum with every factorial pair shifted
///     by one: (N-1)!(N-2j-1)! / ((N-2r-1)!(N-2s-1)!).
pub fn secular_pair_gue(n: u32, a: u32, b: u32) -> ExactScalar {
    if a % 2 != b % 2 || a > n || b > n {
        return ExactScalar::zero();
    }
    let (r, s) = ((a / 2) as u64, (b / 2) as u64);
    let n = n as u64;
    let odd = a % 2 == 1;
    let mut sum = ExactScalar::zero();
    for j in 0..=r.min(s) {
        let (top, mid, bot1, bot2) = if odd {
            (n - 1, n - 2 * j - 1, n - 2 * r - 1, n - 2 * s - 1)
        } else {
            (n, n - 2 * j, n - 2 * r, n - 2 * s)
        };
        sum += rat(4).pow(j as i32) * ExactScalar::from(factorial(top) * factorial(mid))
            / ExactScalar::from(
                factorial(r - j) * factorial(s - j) * factorial(bot1) * factorial(bot2),
            );
    }
    crate::exact::ratio(-1, 2 * n as i64).pow((r + s) as i32) * sum
}

/// E[prod_j sc_{lambda_j}(M)] via the Schur expansion of e_lambda.
///
/// Gaussian and Laguerre only; the Jacobi ensemble has no comparably
/// compact joint formula (its means are still available through
/// [`secular_mean`]). Sums run over partitions mu of |lambda|; terms with
/// more than N rows vanish automatically through C_mu(N) respectively the
/// gamma = 0 Gamma-ratio, and Gaussian terms skip any mu whose diagram has
/// no domino tiling (the character at the class (2^m) is then zero).
pub fn secular_joint(spec: &EnsembleSpec, lambda: &Partition) -> Result<ExactScalar> {
    if lambda.part(0) > spec.n {
        return Ok(ExactScalar::zero());
    }
    let w = lambda.weight();
    match &spec.ensemble {
        Ensemble::Gue => {
            if w % 2 == 1 {
                return Ok(ExactScalar::zero());
            }
            let m = w / 2;
            let class = Partition::rect(2, m as usize);
            let mut sum = ExactScalar::zero();
            for mu in partitions_of(w) {
                if !mu.has_empty_two_core() {
                    continue;
                }
                let k = kostka(&mu.conjugate(), lambda);
                if k.is_zero() {
                    continue;
                }
                let chi = character(&mu, &class).expect("|mu| = 2m by construction");
                if chi.is_zero() {
                    continue;
                }
                sum += ExactScalar::from(k * chi) * c_lambda(&mu, spec.n);
            }
            Ok(sum * rat(2 * spec.n as i64).pow(-(m as i32)) / ExactScalar::from(factorial(m)))
        }
        Ensemble::Lue { gamma } => {
            let empty = Partition::empty();
            let zero_g = ExactScalar::zero();
            let mut sum = ExactScalar::zero();
            for mu in partitions_of(w) {
                let k = kostka(&mu.conjugate(), lambda);
                if k.is_zero() {
                    continue;
                }
                sum += ExactScalar::from(k * dim_v(&mu))
                    * g_ratio(&mu, &empty, spec.n, gamma)
                    * g_ratio(&mu, &empty, spec.n, &zero_g);
            }
            Ok(sum * rat(2 * spec.n as i64).pow(-(w as i32)) / ExactScalar::from(factorial(w)))
        }
        Ensemble::Jue { .. } => Err(Error::Unsupported(
            "joint secular moments are implemented for the Gaussian and Laguerre ensembles \
             only; no closed Jacobi joint formula is available (means are, via secular_mean)"
                .into(),
        )),
    }
}

/// The generating polynomial of the means next to the monic orthogonal
/// polynomial it must equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingCheck {
    /// sum_{r=0}^{N} (-1)^r E[sc_r] t^{N-r}, assembled from `secular_mean`.
    pub generating: ExactPolynomial,
    /// The degree-N monic orthogonal polynomial of the ensemble weight.
    pub orthogonal: ExactPolynomial,
    /// Exact polynomial equality of the two.
    pub matches: bool,
}

/// Verifies E[det(tI - M)] = (monic orthogonal polynomial of degree N) as an
/// exact identity between the closed-form means and the recurrence/Gram
/// construction of the orthogonal family.
pub fn secular_generating_check(spec: &EnsembleSpec) -> Result<GeneratingCheck> {
    if spec.n > MAX_GENERATING_N {
        return Err(Error::Resource(format!(
            "generating-polynomial check is restricted to N <= {MAX_GENERATING_N}, got N = {}",
            spec.n
        )));
    }
    let n = spec.n as usize;
    let mut coeffs = vec![ExactScalar::zero(); n + 1];
    for (r, c) in coeffs.iter_mut().rev().enumerate() {
        let sign = if r % 2 == 0 { 1 } else { -1 };
        *c = rat(sign) * secular_mean(spec, r as u32);
    }
    let generating = ExactPolynomial::from_coeffs(coeffs);
    let orthogonal = ortho::ensemble_monic(spec, n);
    let matches = generating == orthogonal;
    Ok(GeneratingCheck { generating, orthogonal, matches })
}
