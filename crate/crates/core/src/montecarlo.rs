//! Monte Carlo samplers and estimators for the three ensembles.
//!
//! Spectra are drawn from matrix models whose eigenvalue densities match the
//! exact modules' weights: a Hermitian Gaussian matrix scaled so the weight
//! is e^{-N x^2 / 2}, a complex Wishart matrix G G'/(2N) for the Laguerre
//! weight x^gamma e^{-2Nx}, and the matrix-variate beta construction
//! (A+B)^{-1/2} A (A+B)^{-1/2} of two Wisharts for the Jacobi weight
//! x^{gamma1} (1-x)^{gamma2} on (0,1). The matrix models force the Laguerre
//! and Jacobi exponents to be non-negative integers here, even though the
//! exact modules accept any rational exponent > -1.
//!
//! Estimates are reproducible by construction: sample i draws from stream i
//! of a counter-based generator keyed by the seed, chunks of 4096 samples
//! are summarized independently (in parallel), and the chunk summaries are
//! merged in fixed index order — so the worker count never changes a bit of
//! the output.

use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::combinatorics::Partition;
use crate::ensemble::{Ensemble, EnsembleSpec};
use crate::error::{Error, Result};
use crate::exact::ExactScalar;

/// Samples per independently-summarized chunk; the merge order of chunk
/// summaries is fixed by index, making estimates worker-count invariant.
const CHUNK: u64 = 4096;

/// Ensemble, sample count, seed, and parallelism for one estimation run.
#[derive(Debug, Clone, PartialEq)]
pub struct MCConfig {
    pub spec: EnsembleSpec,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

/// The scalar statistic of the spectrum averaged by [`estimate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Functional {
    /// det(tI - M)^p.
    Moment { p: u32, t: f64 },
    /// prod_k det(t_k I - M) over distinct evaluation points.
    Correlation { points: Vec<f64> },
    /// prod_j sc_{lambda_j}(M), a product of secular coefficients.
    SecularProduct { indices: Partition },
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functional::Moment { p, t } => write!(f, "moment(p={p}, t={t})"),
            Functional::Correlation { points } => write!(f, "correlation({points:?})"),
            Functional::SecularProduct { indices } => write!(f, "secular_product({indices})"),
        }
    }
}

/// Streaming sample mean with its standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct MCEstimate {
    pub functional: String,
    pub mean: f64,
    /// Sample standard deviation divided by sqrt(samples); 0 for one sample.
    pub stderr: f64,
    pub samples: u64,
    /// Set when any sample evaluated to a non-finite value (e.g. det
    /// products overflowing the double range); mean/stderr are then
    /// unreliable and typically non-finite themselves.
    pub overflow: bool,
}

fn integer_exponent(name: &str, g: &ExactScalar) -> Result<usize> {
    use num_traits::Signed;
    if !g.is_integer() || g.is_negative() {
        return Err(Error::Unsupported(format!(
            "Monte Carlo sampling builds {name} into matrix dimensions and needs a \
             non-negative integer, got {g} (the exact modules accept any rational > -1)"
        )));
    }
    usize::try_from(g.to_integer())
        .map_err(|_| Error::Resource(format!("{name} too large for a matrix dimension")))
}

fn standard_normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Real 2n x 2n symmetric embedding [[re, -im], [im, re]] of the Hermitian
/// matrix re + i*im; its spectrum is the Hermitian spectrum doubled.
fn embed(re: &DMatrix<f64>, im: &DMatrix<f64>) -> DMatrix<f64> {
    let n = re.nrows();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = re[(i, j)];
            out[(n + i, n + j)] = re[(i, j)];
            out[(i, n + j)] = -im[(i, j)];
            out[(n + i, j)] = im[(i, j)];
        }
    }
    out
}

/// Eigenvalues of a symmetric matrix with doubled spectrum, one per pair.
fn doubled_spectrum(m: DMatrix<f64>) -> Vec<f64> {
    let mut eig: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig.into_iter().step_by(2).collect()
}

fn hermitian_eigenvalues(re: &DMatrix<f64>, im: &DMatrix<f64>) -> Vec<f64> {
    doubled_spectrum(embed(re, im))
}

/// G G' for G an n x m matrix of standard complex Gaussians (unit-variance
/// complex entries: real and imaginary parts N(0, 1/2) each); returned as
/// (real part, imaginary part) of the Hermitian product.
fn complex_wishart(n: usize, m: usize, rng: &mut impl Rng) -> (DMatrix<f64>, DMatrix<f64>) {
    let sd = 0.5_f64.sqrt();
    let g_re = DMatrix::from_fn(n, m, |_, _| sd * standard_normal(rng));
    let g_im = DMatrix::from_fn(n, m, |_, _| sd * standard_normal(rng));
    let re = &g_re * g_re.transpose() + &g_im * g_im.transpose();
    let im = &g_im * g_re.transpose() - &g_re * g_im.transpose();
    (re, im)
}

/// One spectrum drawn from the ensemble's eigenvalue density.
///
/// Gaussian: Hermitian with diagonal variance 1/N and off-diagonal
/// real/imaginary variances 1/(2N), so the density is
/// proportional to e^{-N Tr M^2 / 2}. Laguerre: G G'/(2N) with G of shape
/// N x (N + gamma). Jacobi: (A+B)^{-1/2} A (A+B)^{-1/2} with Wishart
/// factors of widths N + gamma1 and N + gamma2.
pub fn sample_spectrum(spec: &EnsembleSpec, rng: &mut impl Rng) -> Result<Vec<f64>> {
    let n = spec.n as usize;
    match &spec.ensemble {
        Ensemble::Gue => {
            let diag_sd = (1.0 / n as f64).sqrt();
            let off_sd = (1.0 / (2.0 * n as f64)).sqrt();
            let mut re = DMatrix::zeros(n, n);
            let mut im = DMatrix::zeros(n, n);
            for i in 0..n {
                re[(i, i)] = diag_sd * standard_normal(rng);
                for j in i + 1..n {
                    let x = off_sd * standard_normal(rng);
                    let y = off_sd * standard_normal(rng);
                    re[(i, j)] = x;
                    re[(j, i)] = x;
                    im[(i, j)] = y;
                    im[(j, i)] = -y;
                }
            }
            Ok(hermitian_eigenvalues(&re, &im))
        }
        Ensemble::Lue { gamma } => {
            let g = integer_exponent("gamma", gamma)?;
            let (re, im) = complex_wishart(n, n + g, rng);
            let s = 1.0 / (2.0 * n as f64);
            Ok(hermitian_eigenvalues(&(re * s), &(im * s)))
        }
        Ensemble::Jue { gamma1, gamma2 } => {
            let g1 = integer_exponent("gamma1", gamma1)?;
            let g2 = integer_exponent("gamma2", gamma2)?;
            let (a_re, a_im) = complex_wishart(n, n + g1, rng);
            let (b_re, b_im) = complex_wishart(n, n + g2, rng);
            // (A+B)^{-1/2} through the spectral decomposition of the real
            // embedding (spectral calculus commutes with the embedding).
            let sum = embed(&(&a_re + &b_re), &(&a_im + &b_im));
            let eig = sum.symmetric_eigen();
            let mut d = eig.eigenvalues;
            for v in d.iter_mut() {
                *v = 1.0 / v.sqrt();
            }
            let inv_half = &eig.eigenvectors * DMatrix::from_diagonal(&d) * eig.eigenvectors.transpose();
            let j = &inv_half * embed(&a_re, &a_im) * &inv_half;
            let j = (&j + &j.transpose()) * 0.5;
            Ok(doubled_spectrum(j))
        }
    }
}

/// The functional evaluated on one spectrum. Determinant products
/// accumulate in log-magnitude + sign form, delaying overflow to the final
/// exponential; secular products use the elementary-symmetric recurrence.
fn evaluate(functional: &Functional, eigenvalues: &[f64]) -> f64 {
    match functional {
        Functional::Moment { p, t } => {
            let mut log_mag = 0.0;
            let mut neg = false;
            for &x in eigenvalues {
                let d = t - x;
                log_mag += d.abs().ln();
                neg ^= d < 0.0;
            }
            let sign = if neg && p % 2 == 1 { -1.0 } else { 1.0 };
            sign * (*p as f64 * log_mag).exp()
        }
        Functional::Correlation { points } => {
            let mut log_mag = 0.0;
            let mut neg = false;
            for &t in points {
                for &x in eigenvalues {
                    let d = t - x;
                    log_mag += d.abs().ln();
                    neg ^= d < 0.0;
                }
            }
            (if neg { -1.0 } else { 1.0 }) * log_mag.exp()
        }
        Functional::SecularProduct { indices } => {
            let top = indices.part(0) as usize;
            let mut e = vec![0.0; top + 1];
            e[0] = 1.0;
            for &x in eigenvalues {
                for j in (1..=top.min(eigenvalues.len())).rev() {
                    e[j] += x * e[j - 1];
                }
            }
            indices.parts().iter().map(|&r| e[r as usize]).product()
        }
    }
}

/// Welford running moments of one chunk; chunks merge exactly.
#[derive(Debug, Clone, Default)]
struct Accum {
    n: u64,
    mean: f64,
    m2: f64,
    overflow: bool,
}

impl Accum {
    fn push(&mut self, x: f64) {
        if !x.is_finite() {
            self.overflow = true;
        }
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(a: Accum, b: Accum) -> Accum {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let d = b.mean - a.mean;
        Accum {
            n,
            mean: a.mean + d * (b.n as f64 / n as f64),
            m2: a.m2 + b.m2 + d * d * (a.n as f64 * b.n as f64 / n as f64),
            overflow: a.overflow || b.overflow,
        }
    }

    fn stderr(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
    }
}

/// Streaming estimate of E[functional] over `config.samples` spectra.
///
/// Sample i draws from stream i of a generator keyed by `config.seed`;
/// identical configs give bit-identical estimates at any worker count.
pub fn estimate(config: &MCConfig, functional: &Functional) -> Result<MCEstimate> {
    if config.samples == 0 {
        return Err(Error::Domain("need at least one Monte Carlo sample".into()));
    }
    if config.workers == 0 {
        return Err(Error::Domain("need at least one worker".into()));
    }
    // Surface unsupported parameters before spending any samples.
    match &config.spec.ensemble {
        Ensemble::Gue => {}
        Ensemble::Lue { gamma } => {
            integer_exponent("gamma", gamma)?;
        }
        Ensemble::Jue { gamma1, gamma2 } => {
            integer_exponent("gamma1", gamma1)?;
            integer_exponent("gamma2", gamma2)?;
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Resource(format!("cannot build thread pool: {e}")))?;
    let chunks = config.samples.div_ceil(CHUNK);
    let summaries: Vec<Accum> = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = Accum::default();
                for idx in c * CHUNK..((c + 1) * CHUNK).min(config.samples) {
                    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                    rng.set_stream(idx);
                    let spectrum = sample_spectrum(&config.spec, &mut rng)
                        .expect("parameters validated before sampling");
                    acc.push(evaluate(functional, &spectrum));
                }
                acc
            })
            .collect()
    });
    let total = summaries.into_iter().fold(Accum::default(), Accum::merge);
    Ok(MCEstimate {
        functional: functional.to_string(),
        mean: total.mean,
        stderr: total.stderr(),
        samples: total.n,
        overflow: total.overflow,
    })
}
