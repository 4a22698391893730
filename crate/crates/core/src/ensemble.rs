//! Ensemble parameters and exact weight-moment functionals.
//!
//! The three ensembles are unitary-invariant with eigenvalue weights
//!   Gaussian:  exp(-N x^2 / 2)            on the real line,
//!   Laguerre:  x^gamma exp(-2 N x)        on the positive half line,
//!   Jacobi:    x^gamma1 (1-x)^gamma2      on (0, 1).
//! Weight moments factor as (exact rational) * (transcendental unit); the
//! unit is carried symbolically and cancels in every ratio the library
//! ultimately reports.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{double_factorial, rat, ExactScalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ensemble {
    Gue,
    Lue { gamma: ExactScalar },
    Jue { gamma1: ExactScalar, gamma2: ExactScalar },
}

/// An ensemble together with its matrix size N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub ensemble: Ensemble,
    pub n: u32,
}

fn check_exponent(name: &str, g: &ExactScalar) -> Result<()> {
    if *g <= rat(-1) {
        return Err(Error::Domain(format!(
            "{name} must be > -1 for an integrable weight, got {g}"
        )));
    }
    Ok(())
}

impl EnsembleSpec {
    pub fn gue(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("matrix size N must be >= 1".into()));
        }
        Ok(EnsembleSpec { ensemble: Ensemble::Gue, n })
    }

    pub fn lue(n: u32, gamma: ExactScalar) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("matrix size N must be >= 1".into()));
        }
        check_exponent("gamma", &gamma)?;
        Ok(EnsembleSpec { ensemble: Ensemble::Lue { gamma }, n })
    }

    pub fn jue(n: u32, gamma1: ExactScalar, gamma2: ExactScalar) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("matrix size N must be >= 1".into()));
        }
        check_exponent("gamma1", &gamma1)?;
        check_exponent("gamma2", &gamma2)?;
        Ok(EnsembleSpec { ensemble: Ensemble::Jue { gamma1, gamma2 }, n })
    }

    /// The eigenvalue weight of this ensemble.
    pub fn weight(&self) -> Weight {
        match &self.ensemble {
            Ensemble::Gue => Weight::Gaussian { scale: rat(self.n as i64) },
            Ensemble::Lue { gamma } => Weight::Laguerre {
                rate: rat(2 * self.n as i64),
                gamma: gamma.clone(),
            },
            Ensemble::Jue { gamma1, gamma2 } => Weight::Jacobi {
                gamma1: gamma1.clone(),
                gamma2: gamma2.clone(),
            },
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.ensemble {
            Ensemble::Gue => "gue",
            Ensemble::Lue { .. } => "lue",
            Ensemble::Jue { .. } => "jue",
        }
    }
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.ensemble {
            Ensemble::Gue => write!(f, "GUE(N={})", self.n),
            Ensemble::Lue { gamma } => write!(f, "LUE(N={}, gamma={gamma})", self.n),
            Ensemble::Jue { gamma1, gamma2 } => {
                write!(f, "JUE(N={}, gamma1={gamma1}, gamma2={gamma2})", self.n)
            }
        }
    }
}

/// A reference weight for orthogonality computations. `scale`/`rate` allow
/// both the ensemble-rescaled weights and the classical ones (scale = rate =
/// 1) to share the same machinery.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Weight {
    /// exp(-scale * x^2 / 2) on the real line.
    Gaussian { scale: ExactScalar },
    /// x^gamma exp(-rate * x) on the positive half line.
    Laguerre { rate: ExactScalar, gamma: ExactScalar },
    /// x^gamma1 (1-x)^gamma2 on (0, 1).
    Jacobi { gamma1: ExactScalar, gamma2: ExactScalar },
}

impl Weight {
    /// k-th moment of the weight divided by the transcendental unit of the
    /// family (see `unit_description`), always an exact rational.
    pub fn moment(&self, k: u32) -> ExactScalar {
        match self {
            Weight::Gaussian { scale } => {
                if k % 2 == 1 {
                    ExactScalar::zero()
                } else if k == 0 {
                    ExactScalar::one()
                } else {
                    let j = (k / 2) as i32;
                    ExactScalar::from_integer(double_factorial(k as u64 - 1)) * scale.pow(-j)
                }
            }
            Weight::Laguerre { rate, gamma } => {
                let mut acc = ExactScalar::one();
                for i in 1..=k as i64 {
                    acc *= gamma + rat(i);
                }
                acc / rate.pow(k as i32)
            }
            Weight::Jacobi { gamma1, gamma2 } => {
                let s = gamma1 + gamma2;
                let mut acc = ExactScalar::one();
                for i in 1..=k as i64 {
                    acc *= (gamma1 + rat(i)) / (&s + rat(1 + i));
                }
                acc
            }
        }
    }

    /// Human-readable description of the transcendental unit all moments of
    /// this weight are expressed in.
    pub fn unit_description(&self) -> String {
        match self {
            Weight::Gaussian { scale } => format!("sqrt(2*pi/({scale}))"),
            Weight::Laguerre { rate, gamma } => {
                format!("Gamma({})/({rate})^({})", gamma + rat(1), gamma + rat(1))
            }
            Weight::Jacobi { gamma1, gamma2 } => {
                format!("Beta({}, {})", gamma1 + rat(1), gamma2 + rat(1))
            }
        }
    }
}

/// Gaussian moment helper used by test oracles: E[x^k] under the normalized
/// density with variance v, i.e. (k-1)!! v^{k/2} for even k.
pub fn gaussian_moment(k: u32, variance: &ExactScalar) -> ExactScalar {
    if k % 2 == 1 {
        return ExactScalar::zero();
    }
    let j = k / 2;
    ExactScalar::from_integer(if k == 0 {
        BigInt::one()
    } else {
        double_factorial(k as u64 - 1)
    }) * variance.pow(j as i32)
}
