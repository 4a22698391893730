//! Change of basis between Schur polynomials and the multivariate orthogonal
//! families, plus evaluation of both.
//!
//! For each weight family the symmetric multivariate polynomials Phi_lambda
//! (leading Schur coefficient 1) relate to Schur polynomials through a pair
//! of unitriangular coefficient tables,
//!   S_lambda   = sum_{nu <= lambda} Psi_{lambda nu} Phi_nu,
//!   Phi_lambda = sum_{mu <= lambda} Upsilon_{lambda mu} S_mu,
//! whose entries are signed weight powers times factorial-ratio determinants.
//! The Jacobi tables carry Gamma functions of rational arguments; the row and
//! column prefactors are absorbed into the determinant entries here, pairing
//! each Gamma ratio into a rising factorial so that every computed entry is
//! an exact rational for every admissible rational exponent.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::{One, Zero};

use crate::combinatorics::{subpartitions, Partition};
use crate::ensemble::{Ensemble, EnsembleSpec};
use crate::error::{Error, Result};
use crate::exact::{factorial, rat, rising, ExactMatrix, ExactScalar};
use crate::ortho;

/// Complete homogeneous symmetric polynomials h_0..h_max at the given points.
pub fn complete_homogeneous(points: &[ExactScalar], max_degree: usize) -> Vec<ExactScalar> {
    let mut h = vec![ExactScalar::zero(); max_degree + 1];
    h[0] = ExactScalar::one();
    for x in points {
        for m in 1..=max_degree {
            let add = &h[m - 1] * x;
            h[m] += add;
        }
    }
    h
}

/// Schur polynomial at arbitrary (possibly coincident) points, by the
/// division-free determinant in complete homogeneous polynomials.
/// Returns 0 when the partition has more rows than there are points.
pub fn schur_eval(lambda: &Partition, points: &[ExactScalar]) -> ExactScalar {
    let l = lambda.len();
    if l > points.len() {
        return ExactScalar::zero();
    }
    if l == 0 {
        return ExactScalar::one();
    }
    let h = complete_homogeneous(points, lambda.part(0) as usize + l - 1);
    let m = ExactMatrix::from_fn(l, l, |j, k| {
        let idx = lambda.part(j) as i64 - j as i64 + k as i64;
        if idx < 0 {
            ExactScalar::zero()
        } else {
            h[idx as usize].clone()
        }
    });
    m.det().expect("square by construction")
}

/// Product of pairwise differences prod_{i<j} (x_i - x_j), the denominator of
/// the bialternant with decreasing powers.
pub fn vandermonde(points: &[ExactScalar]) -> ExactScalar {
    let mut acc = ExactScalar::one();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            acc *= &points[i] - &points[j];
        }
    }
    acc
}

/// Schur polynomial via the bialternant ratio; requires pairwise distinct
/// points. Used as an independent oracle for `schur_eval`.
pub fn schur_bialternant(lambda: &Partition, points: &[ExactScalar]) -> Result<ExactScalar> {
    let n = points.len();
    if lambda.len() > n {
        return Ok(ExactScalar::zero());
    }
    let delta = vandermonde(points);
    if delta.is_zero() {
        return Err(Error::Domain(
            "bialternant requires pairwise distinct points".into(),
        ));
    }
    let m = ExactMatrix::from_fn(n, n, |j, k| {
        let e = lambda.part(j) as usize + n - 1 - j;
        points[k].pow(e as i32)
    });
    Ok(m.det().expect("square by construction") / delta)
}

/// Which factorial-ratio determinant to build. For the two Jacobi kinds the
/// transcendental row/column prefactors of the coefficient formulas are
/// absorbed entry-wise (each Gamma ratio becomes a rising factorial), so the
/// determinant returned here is exactly the rational factor entering
/// Psi/Upsilon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DKind {
    Hermite,
    Laguerre,
    /// Entries 1/(d! (2 nu_k + 2n - 2k + s + 2)_d), size n_vars.
    Jacobi { n_vars: u32, s: ExactScalar },
    /// Entries 1/(d! (2n + lambda_j + nu_k - j - k + s + 1)_d), size n_vars.
    JacobiTilde { n_vars: u32, s: ExactScalar },
}

/// Determinant of the indicator/factorial matrix with offsets
/// d = lambda_j - nu_k - j + k.
pub fn d_matrix(kind: &DKind, lambda: &Partition, nu: &Partition) -> ExactScalar {
    // Padding rows beyond l(lambda) extend the matrix unitriangularly, so
    // any size >= max(l(lambda), l(nu)) gives the same value; in particular
    // the determinant vanishes whenever nu has more rows than lambda.
    let size = match kind {
        DKind::Hermite | DKind::Laguerre => lambda.len().max(nu.len()),
        DKind::Jacobi { n_vars, .. } | DKind::JacobiTilde { n_vars, .. } => *n_vars as usize,
    };
    let m = ExactMatrix::from_fn(size, size, |j, k| {
        // 1-indexed offset lambda_j - nu_k - j + k.
        let d = lambda.part(j) as i64 - nu.part(k) as i64 - j as i64 + k as i64;
        if d < 0 {
            return ExactScalar::zero();
        }
        let d = d as u32;
        match kind {
            DKind::Hermite => {
                if d % 2 == 1 {
                    ExactScalar::zero()
                } else {
                    ExactScalar::from_integer(factorial(d as u64 / 2)).recip()
                }
            }
            DKind::Laguerre => ExactScalar::from_integer(factorial(d as u64)).recip(),
            DKind::Jacobi { n_vars, s } => {
                let base = rat(2 * nu.part(k) as i64 + 2 * *n_vars as i64 - 2 * k as i64) + s;
                (ExactScalar::from_integer(factorial(d as u64)) * rising(&base, d)).recip()
            }
            DKind::JacobiTilde { n_vars, s } => {
                let base = rat(2 * *n_vars as i64 + lambda.part(j) as i64 + nu.part(k) as i64
                    - j as i64
                    - k as i64
                    - 1)
                    + s;
                (ExactScalar::from_integer(factorial(d as u64)) * rising(&base, d)).recip()
            }
        }
    });
    m.det().expect("square by construction")
}

/// prod_{j=1..n} (nu_j + n - j + gamma + 1)_(lambda_j - nu_j), the exact value
/// of G_lambda(n, gamma)/G_nu(n, gamma) for nu contained in lambda.
pub fn g_ratio(lambda: &Partition, nu: &Partition, n_vars: u32, gamma: &ExactScalar) -> ExactScalar {
    let mut acc = ExactScalar::one();
    for j in 0..lambda.len() {
        let base = rat(nu.part(j) as i64 + n_vars as i64 - j as i64) + gamma;
        acc *= rising(&base, lambda.part(j) - nu.part(j));
    }
    acc
}

/// Coefficient of Phi_nu in the Schur polynomial S_lambda expanded over
/// `n_vars` variables. Zero unless nu is contained in lambda and the parity
/// constraint of the family holds.
pub fn psi(spec: &EnsembleSpec, lambda: &Partition, nu: &Partition, n_vars: u32) -> ExactScalar {
    if !lambda.contains(nu) || lambda.len() > n_vars as usize {
        return ExactScalar::zero();
    }
    let w = lambda.weight() - nu.weight();
    let two_n = rat(2 * spec.n as i64);
    match &spec.ensemble {
        Ensemble::Gue => {
            if w % 2 == 1 {
                return ExactScalar::zero();
            }
            two_n.pow(-((w / 2) as i32))
                * g_ratio(lambda, nu, n_vars, &ExactScalar::zero())
                * d_matrix(&DKind::Hermite, lambda, nu)
        }
        Ensemble::Lue { gamma } => {
            two_n.pow(-(w as i32))
                * g_ratio(lambda, nu, n_vars, gamma)
                * g_ratio(lambda, nu, n_vars, &ExactScalar::zero())
                * d_matrix(&DKind::Laguerre, lambda, nu)
        }
        Ensemble::Jue { gamma1, gamma2 } => {
            let s = gamma1 + gamma2;
            g_ratio(lambda, nu, n_vars, gamma1)
                * g_ratio(lambda, nu, n_vars, &ExactScalar::zero())
                * d_matrix(&DKind::Jacobi { n_vars, s }, lambda, nu)
        }
    }
}

/// Coefficient of S_mu in Phi_lambda expanded over `n_vars` variables.
pub fn upsilon(spec: &EnsembleSpec, lambda: &Partition, mu: &Partition, n_vars: u32) -> ExactScalar {
    if !lambda.contains(mu) || lambda.len() > n_vars as usize {
        return ExactScalar::zero();
    }
    let w = lambda.weight() - mu.weight();
    let sign = if w % 2 == 0 { rat(1) } else { rat(-1) };
    match &spec.ensemble {
        // (-1/2N)^(w/2) versus psi's (1/2N)^(w/2): sign flips with w/2.
        Ensemble::Gue => {
            if w % 2 == 1 {
                return ExactScalar::zero();
            }
            let half_sign = if (w / 2) % 2 == 0 { rat(1) } else { rat(-1) };
            half_sign * psi(spec, lambda, mu, n_vars)
        }
        Ensemble::Lue { .. } => sign * psi(spec, lambda, mu, n_vars),
        Ensemble::Jue { gamma1, gamma2 } => {
            let s = gamma1 + gamma2;
            sign * g_ratio(lambda, mu, n_vars, gamma1)
                * g_ratio(lambda, mu, n_vars, &ExactScalar::zero())
                * d_matrix(&DKind::JacobiTilde { n_vars, s }, lambda, mu)
        }
    }
}

/// Phi_lambda at the given points, via the Upsilon-Schur expansion. Handles
/// coincident points; returns 0 when l(lambda) exceeds the point count.
pub fn phi_eval(spec: &EnsembleSpec, lambda: &Partition, points: &[ExactScalar]) -> ExactScalar {
    let n_vars = points.len() as u32;
    if lambda.len() > points.len() {
        return ExactScalar::zero();
    }
    let hermite_parity = matches!(spec.ensemble, Ensemble::Gue);
    let mut acc = ExactScalar::zero();
    for mu in subpartitions(lambda) {
        if hermite_parity && (lambda.weight() - mu.weight()) % 2 == 1 {
            continue;
        }
        let c = upsilon(spec, lambda, &mu, n_vars);
        if c.is_zero() {
            continue;
        }
        acc += c * schur_eval(&mu, points);
    }
    acc
}

/// Phi_lambda as the ratio det[phi_(lambda_j + n - j)(x_k)] / Delta(x) of the
/// monic univariate family; requires pairwise distinct points. Independent
/// oracle for `phi_eval`.
pub fn phi_eval_det(
    spec: &EnsembleSpec,
    lambda: &Partition,
    points: &[ExactScalar],
) -> Result<ExactScalar> {
    let n = points.len();
    if lambda.len() > n {
        return Ok(ExactScalar::zero());
    }
    let delta = vandermonde(points);
    if delta.is_zero() {
        return Err(Error::Domain(
            "determinant-ratio route requires pairwise distinct points".into(),
        ));
    }
    let max_degree = lambda.part(0) as usize + n - 1;
    let family = ortho::ensemble_monic_family(spec, max_degree);
    let m = ExactMatrix::from_fn(n, n, |j, k| {
        family[lambda.part(j) as usize + n - 1 - j].evaluate(&points[k])
    });
    Ok(m.det().expect("square by construction") / delta)
}

/// Direction of a coefficient table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Schur in terms of Phi.
    Psi,
    /// Phi in terms of Schur.
    Upsilon,
}

/// Memoized table of Psi or Upsilon coefficients over a bounding box.
/// Entries are computed lazily per index pair; recomputation is idempotent,
/// so a plain mutex around the map is enough for concurrent use.
pub struct ExpansionTable {
    pub spec: EnsembleSpec,
    pub direction: Direction,
    pub box_n: u32,
    pub box_p: usize,
    pub n_vars: u32,
    entries: Mutex<HashMap<(Vec<u32>, Vec<u32>), ExactScalar>>,
}

impl ExpansionTable {
    pub fn new(
        spec: EnsembleSpec,
        direction: Direction,
        box_n: u32,
        box_p: usize,
        n_vars: u32,
    ) -> Self {
        ExpansionTable {
            spec,
            direction,
            box_n,
            box_p,
            n_vars,
            entries: Mutex::new(HashMap::new()),
        }
    }

    pub fn get(&self, lambda: &Partition, nu: &Partition) -> ExactScalar {
        let key = (lambda.parts().to_vec(), nu.parts().to_vec());
        if let Some(v) = self.entries.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = match self.direction {
            Direction::Psi => psi(&self.spec, lambda, nu, self.n_vars),
            Direction::Upsilon => upsilon(&self.spec, lambda, nu, self.n_vars),
        };
        self.entries.lock().unwrap().insert(key, v.clone());
        v
    }

    /// Every (lambda, nu) pair with lambda inside the box and nu inside
    /// lambda, with values; the CLI renders this as CSV.
    pub fn rows(&self) -> Vec<(Partition, Partition, ExactScalar)> {
        let mut out = Vec::new();
        for lambda in crate::combinatorics::BoxPartitionIterator::new(self.box_n, self.box_p) {
            for nu in subpartitions(&lambda) {
                let v = self.get(&lambda, &nu);
                out.push((lambda.clone(), nu.clone(), v));
            }
        }
        out
    }
}
