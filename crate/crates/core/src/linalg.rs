//! Dense complex matrices and a pivoted QR least-squares solver.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::real::Real;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<S>>,
}

impl<S: Real> CMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    /// Builds a matrix row by row; `fill(i, row)` writes row `i`.
    pub fn from_rows(rows: usize, cols: usize, mut fill: impl FnMut(usize, &mut [Complex<S>])) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, row) in m.data.chunks_mut(cols.max(1)).enumerate().take(rows) {
            fill(i, row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Complex<S>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &[Complex<S>]) -> Vec<Complex<S>> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Complex::zero(), |acc, (a, b)| acc + *a * *b)
            })
            .collect()
    }

    /// `A^H y`.
    pub fn adjoint_mul_vec(&self, y: &[Complex<S>]) -> Vec<Complex<S>> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![Complex::zero(); self.cols];
        for (i, yi) in y.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o = *o + a.conj() * *yi;
            }
        }
        out
    }
}

impl<S> Index<(usize, usize)> for CMatrix<S> {
    type Output = Complex<S>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<S> {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for CMatrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<S> {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of [`lstsq`].
#[derive(Debug, Clone)]
pub struct LstsqSolution<S> {
    pub x: Vec<Complex<S>>,
    /// Numerical rank detected by the pivoted factorization.
    pub rank: usize,
}

/// How [`lstsq`] treats a rank-deficient design.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankPolicy {
    /// Fail with `SingularDesign`.
    Strict,
    /// Zero the coefficients of the dependent pivoted columns.
    Truncate,
}

/// Minimizes `||A x - b||_2` by Householder QR with column pivoting.
///
/// Columns whose pivot falls below `rcond * |R[0][0]|` are treated as
/// dependent.
pub fn lstsq<S: Real>(a: &CMatrix<S>, b: &[Complex<S>], rcond: S, policy: RankPolicy) -> Result<LstsqSolution<S>> {
    let (m, n) = (a.rows, a.cols);
    if b.len() != m {
        return Err(Error::Config(format!("rhs has {} rows, design has {m}", b.len())));
    }
    if n == 0 {
        return Ok(LstsqSolution { x: vec![], rank: 0 });
    }
    if m < n && policy == RankPolicy::Strict {
        return Err(Error::SingularDesign(format!("{m} samples for {n} unknowns")));
    }
    if a.data.iter().chain(b).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Numerical("non-finite entry in least-squares problem".into()));
    }
    let mut cols: Vec<Vec<Complex<S>>> = (0..n).map(|j| (0..m).map(|i| a[(i, j)]).collect()).collect();
    let mut rhs = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut diag = vec![S::zero(); n];
    let steps = m.min(n);

    for k in 0..steps {
        let mut best = k;
        let mut best_norm = S::lit(-1.0);
        for (j, col) in cols.iter().enumerate().skip(k) {
            let s: S = col[k..].iter().map(|z| z.norm_sqr()).sum();
            if s > best_norm {
                best_norm = s;
                best = j;
            }
        }
        cols.swap(k, best);
        perm.swap(k, best);

        let xnorm = best_norm.sqrt();
        if xnorm == S::zero() {
            diag[k] = S::zero();
            continue;
        }
        let x0 = cols[k][k];
        let phase = if x0.norm() > S::zero() {
            x0 / x0.norm()
        } else {
            Complex::new(S::one(), S::zero())
        };
        let alpha = -phase * xnorm;
        let mut v: Vec<Complex<S>> = cols[k][k..].to_vec();
        v[0] = v[0] - alpha;
        let vnorm2: S = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 > S::zero() {
            let scale = S::lit(2.0) / vnorm2;
            for col in cols.iter_mut().skip(k + 1) {
                reflect(&v, &mut col[k..], scale);
            }
            reflect(&v, &mut rhs[k..], scale);
        }
        cols[k][k] = alpha;
        for z in cols[k][k + 1..].iter_mut() {
            *z = Complex::zero();
        }
        diag[k] = alpha.norm();
    }

    let lead = diag[0];
    let tol = rcond * lead;
    let rank = diag
        .iter()
        .take(steps)
        .take_while(|&&d| d > tol && d > S::zero())
        .count();
    if rank < n && policy == RankPolicy::Strict {
        return Err(Error::SingularDesign(format!("numerical rank {rank} < {n} columns")));
    }

    let mut y = vec![Complex::zero(); rank];
    for i in (0..rank).rev() {
        let mut acc = rhs[i];
        for j in i + 1..rank {
            acc = acc - cols[j][i] * y[j];
        }
        y[i] = acc / cols[i][i];
    }
    let mut x = vec![Complex::zero(); n];
    for (i, yi) in y.into_iter().enumerate() {
        x[perm[i]] = yi;
    }
    if x.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Numerical("least-squares solution is not finite".into()));
    }
    Ok(LstsqSolution { x, rank })
}

fn reflect<S: Real>(v: &[Complex<S>], c: &mut [Complex<S>], scale: S) {
    let dot = v
        .iter()
        .zip(c.iter())
        .fold(Complex::zero(), |acc, (vi, ci)| acc + vi.conj() * *ci)
        * scale;
    for (ci, vi) in c.iter_mut().zip(v) {
        *ci = *ci - *vi * dot;
    }
}
