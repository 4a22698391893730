use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::scalar::ExactScalar;
use crate::error::{Error, Result};

/// Dense rational matrix; only the operations the expansion and moment
/// routes need (construction, exact determinant, linear solve).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(ExactMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, m: usize, mut f: impl FnMut(usize, usize) -> ExactScalar) -> Self {
        let mut data = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows: n, cols: m, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.data[i * self.cols + j]
    }

    /// Exact determinant via fraction-free Bareiss elimination. Rows are
    /// first cleared to integers (scaling tracked), which keeps every
    /// intermediate entry an integer of polynomially bounded size.
    pub fn det(&self) -> Result<ExactScalar> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(ExactScalar::one());
        }
        // Integer matrix: row i scaled by the lcm of its denominators.
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut lcm = BigInt::one();
            for j in 0..n {
                lcm = lcm.lcm(self.get(i, j).denom());
            }
            a.push(
                (0..n)
                    .map(|j| {
                        let x = self.get(i, j);
                        x.numer() * (&lcm / x.denom())
                    })
                    .collect(),
            );
            scale *= lcm;
        }

        let mut sign = 1i8;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(ExactScalar::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    a[i][j] = q;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let mut det = ExactScalar::new(a[n - 1][n - 1].clone(), scale);
        if sign < 0 {
            det = -det;
        }
        Ok(det)
    }

    /// Solves A x = b exactly by Gaussian elimination with exact pivoting.
    /// Returns `None` when A is singular.
    pub fn solve(&self, b: &[ExactScalar]) -> Result<Option<Vec<ExactScalar>>> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("solve needs a square matrix".into()));
        }
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("rhs length".into()));
        }
        let n = self.rows;
        let mut m: Vec<Vec<ExactScalar>> = (0..n)
            .map(|i| {
                let mut row: Vec<ExactScalar> =
                    (0..n).map(|j| self.get(i, j).clone()).collect();
                row.push(b[i].clone());
                row
            })
            .collect();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
                return Ok(None);
            };
            m.swap(k, p);
            let inv = m[k][k].clone();
            for j in k..=n {
                m[k][j] = &m[k][j] / &inv;
            }
            for i in 0..n {
                if i != k && !m[i][k].is_zero() {
                    let f = m[i][k].clone();
                    for j in k..=n {
                        let sub = &f * &m[k][j];
                        m[i][j] = &m[i][j] - &sub;
                    }
                }
            }
        }
        Ok(Some(m.into_iter().map(|row| row[n].clone()).collect()))
    }
}
