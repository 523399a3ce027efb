//! Dense linear solves over both scalar modes: exact Gaussian elimination and
//! partially pivoted LU with a reciprocal-condition estimate for floats.

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};

/// Float-mode Jacobians with a reciprocal condition estimate below this are
/// treated as singular.
pub const RCOND_CUTOFF: f64 = 1e-14;

/// Solve `A x = b`. Exact mode performs fraction-free-style Gaussian
/// elimination over `Q[i]` (a zero pivot column means a singular matrix);
/// float mode uses partially pivoted LU and rejects ill-conditioned systems.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Result<Vec<Scalar>> {
    let n = a.len();
    if n == 0 || a.iter().any(|row| row.len() != n) || b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    match mode_of(a) {
        Mode::Exact => solve_exact(a, b),
        Mode::Float => {
            let fa = to_complex_matrix(a);
            let fb: Vec<Complex64> = b.iter().map(|s| s.to_complex()).collect();
            let lu = LuDecomp::new(fa)?;
            if lu.rcond_estimate() < RCOND_CUTOFF {
                return Err(Error::SingularJacobian);
            }
            let x = lu.solve(&fb);
            Ok(x.into_iter().map(Scalar::Float).collect())
        }
    }
}

/// Full inverse of `A`.
pub fn invert(a: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let n = a.len();
    let mode = mode_of(a);
    let mut cols = Vec::with_capacity(n);
    match mode {
        Mode::Exact => {
            for j in 0..n {
                let mut e = vec![Scalar::zero(mode); n];
                e[j] = Scalar::one(mode);
                cols.push(solve_exact(a, &e)?);
            }
        }
        Mode::Float => {
            let lu = LuDecomp::new(to_complex_matrix(a))?;
            if lu.rcond_estimate() < RCOND_CUTOFF {
                return Err(Error::SingularJacobian);
            }
            for j in 0..n {
                let mut e = vec![Complex64::new(0.0, 0.0); n];
                e[j] = Complex64::new(1.0, 0.0);
                cols.push(lu.solve(&e).into_iter().map(Scalar::Float).collect());
            }
        }
    }
    // cols holds columns of the inverse; transpose into rows.
    let mut inv = vec![vec![Scalar::zero(mode); n]; n];
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            inv[i][j] = v.clone();
        }
    }
    Ok(inv)
}

/// Exact rank of a rational matrix (any shape).
pub fn exact_rank(a: &[Vec<Scalar>]) -> usize {
    let mut rows: Vec<Vec<Scalar>> = a.to_vec();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot_idx) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_idx);
        let pivot = rows[rank][col].clone();
        for i in (rank + 1)..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].div(&pivot).expect("nonzero pivot");
            for j in col..ncols {
                let sub = rows[rank][j].mul(&factor);
                rows[i][j] = rows[i][j].sub(&sub);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn mode_of(a: &[Vec<Scalar>]) -> Mode {
    a[0][0].mode()
}

fn to_complex_matrix(a: &[Vec<Scalar>]) -> Vec<Vec<Complex64>> {
    a.iter()
        .map(|row| row.iter().map(|s| s.to_complex()).collect())
        .collect()
}

fn solve_exact(a: &[Vec<Scalar>], b: &[Scalar]) -> Result<Vec<Scalar>> {
    let n = a.len();
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        // Pivot on the largest |re| + |im| entry to limit coefficient growth.
        let pivot_idx = (col..n)
            .filter(|&i| !m[i][col].is_zero())
            .max_by(|&i, &j| {
                m[i][col]
                    .abs_upper()
                    .cmp_real(&m[j][col].abs_upper())
            })
            .ok_or(Error::SingularJacobian)?;
        m.swap(col, pivot_idx);
        let pivot = m[col][col].clone();
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].div(&pivot)?;
            for j in col..=n {
                let sub = m[col][j].mul(&factor);
                m[i][j] = m[i][j].sub(&sub);
            }
        }
    }
    (0..n)
        .map(|i| {
            let pivot = m[i][i].clone();
            m[i][n].div(&pivot)
        })
        .collect()
}

/// Partially pivoted LU decomposition of a complex matrix.
pub struct LuDecomp {
    lu: Vec<Vec<Complex64>>,
    perm: Vec<usize>,
    norm1_a: f64,
    singular: bool,
}

impl LuDecomp {
    pub fn new(a: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = a.len();
        for row in &a {
            for v in row {
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::NonFiniteResult);
                }
            }
        }
        let norm1_a = matrix_norm1(&a);
        let mut lu = a;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut singular = false;
        for col in 0..n {
            let pivot_idx = (col..n)
                .max_by(|&i, &j| {
                    lu[i][col]
                        .norm_sqr()
                        .partial_cmp(&lu[j][col].norm_sqr())
                        .unwrap()
                })
                .unwrap();
            if lu[pivot_idx][col].norm_sqr() == 0.0 {
                singular = true;
                continue;
            }
            lu.swap(col, pivot_idx);
            perm.swap(col, pivot_idx);
            let pivot = lu[col][col];
            for i in (col + 1)..n {
                let factor = lu[i][col] / pivot;
                lu[i][col] = factor;
                for j in (col + 1)..n {
                    let sub = factor * lu[col][j];
                    lu[i][j] -= sub;
                }
            }
        }
        Ok(LuDecomp {
            lu,
            perm,
            norm1_a,
            singular,
        })
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = b.len();
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = b[self.perm[i]];
            for j in 0..i {
                acc -= self.lu[i][j] * y[j];
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in (i + 1)..n {
                acc -= self.lu[i][j] * y[j];
            }
            y[i] = acc / self.lu[i][i];
        }
        y
    }

    /// `1 / (||A||_1 * ||A^-1||_1)` with the inverse norm taken over the
    /// canonical basis solves. Small systems only, so the exact inverse is
    /// affordable.
    pub fn rcond_estimate(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        let n = self.lu.len();
        let mut norm1_inv: f64 = 0.0;
        for j in 0..n {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            let x = self.solve(&e);
            let col: f64 = x.iter().map(|v| v.norm()).sum();
            if !col.is_finite() {
                return 0.0;
            }
            norm1_inv = norm1_inv.max(col);
        }
        if self.norm1_a == 0.0 || norm1_inv == 0.0 {
            return 0.0;
        }
        1.0 / (self.norm1_a * norm1_inv)
    }
}

fn matrix_norm1(a: &[Vec<Complex64>]) -> f64 {
    let n = a.len();
    (0..n)
        .map(|j| a.iter().map(|row| row[j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}
