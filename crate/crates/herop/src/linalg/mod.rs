//! Dense complex linear algebra primitives: matrices, orthonormal bases,
//! null spaces, spectra, point clustering and coordinate solves.
//!
//! Everything here is desk scale (dimensions up to a couple hundred) and
//! favors robustness over speed: rank decisions go through column-pivoted
//! Householder QR, eigenvalues through Hessenberg reduction plus shifted
//! QR iteration.

mod eig;
mod qr;

pub use eig::spectrum;
pub use qr::{coordinates_in_basis, null_space, QrPivoted};

use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};
use thiserror::Error;

/// Default relative residual tolerance for pass/fail decisions.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-9;
/// Default relative threshold for rank / invertibility decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("basis matrix is singular at tolerance {tol:e}")]
    SingularBasis { tol: f64 },
    #[error("non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("basis columns are not orthonormal (gram deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(LinalgError::Dimension(format!(
                    "row {i} has length {} but expected {c}",
                    row.len()
                )));
            }
        }
        let m = Matrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        };
        m.check_finite()?;
        Ok(m)
    }

    /// Test helper: build a matrix from real entries.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Matrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn from_columns(cols: &[Vec<Complex64>]) -> Result<Self, LinalgError> {
        let c = cols.len();
        let r = if c == 0 { 0 } else { cols[0].len() };
        for (j, col) in cols.iter().enumerate() {
            if col.len() != r {
                return Err(LinalgError::Dimension(format!(
                    "column {j} has length {} but expected {r}",
                    col.len()
                )));
            }
        }
        let m = Matrix::from_fn(r, c, |i, j| cols[j][i]);
        m.check_finite()?;
        Ok(m)
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn check_finite(&self) -> Result<(), LinalgError> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(LinalgError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_re(&self, c: f64) -> Matrix {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Matrix power by repeated multiplication; `pow(0)` is the identity.
    pub fn pow(&self, k: usize) -> Matrix {
        assert!(self.is_square(), "pow requires a square matrix");
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Complex64]) {
        assert_eq!(col.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = col[i];
        }
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        Matrix::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Horizontal concatenation.
    pub fn hstack(blocks: &[&Matrix]) -> Result<Matrix, LinalgError> {
        if blocks.is_empty() {
            return Ok(Matrix::zeros(0, 0));
        }
        let r = blocks[0].rows;
        for b in blocks {
            if b.rows != r {
                return Err(LinalgError::Dimension(
                    "hstack blocks must share row count".into(),
                ));
            }
        }
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(r, c);
        let mut off = 0;
        for b in blocks {
            for i in 0..r {
                for j in 0..b.cols {
                    m[(i, off + j)] = b[(i, j)];
                }
            }
            off += b.cols;
        }
        Ok(m)
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(r, c);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(ro + i, co + j)] = b[(i, j)];
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        m
    }

    /// Apply the matrix to a vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self[(i, j)] * v[j])
                    .sum::<Complex64>()
            })
            .collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale_re(-1.0)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Orthonormal list of column vectors spanning a subspace of C^n.
#[derive(Clone, Debug)]
pub struct Basis {
    mat: Matrix,
}

impl Basis {
    /// Maximum allowed entrywise deviation of the Gram matrix from the identity.
    pub const ORTHONORMALITY_TOL: f64 = 1e-10;

    pub fn empty(ambient_dim: usize) -> Self {
        Basis {
            mat: Matrix::zeros(ambient_dim, 0),
        }
    }

    /// Wrap a matrix whose columns are already orthonormal; verified.
    pub fn from_orthonormal_columns(mat: Matrix) -> Result<Self, LinalgError> {
        let gram = &mat.adjoint() * &mat;
        let mut dev: f64 = 0.0;
        for i in 0..gram.rows() {
            for j in 0..gram.cols() {
                let expect = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((gram[(i, j)] - Complex64::new(expect, 0.0)).norm());
            }
        }
        if dev > Self::ORTHONORMALITY_TOL {
            return Err(LinalgError::NotOrthonormal { deviation: dev });
        }
        Ok(Basis { mat })
    }

    pub fn ambient_dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn dim(&self) -> usize {
        self.mat.cols()
    }

    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        self.mat.column(i)
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn into_matrix(self) -> Matrix {
        self.mat
    }
}

/// One cluster of nearby points in C^d.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    /// Arithmetic mean of the members.
    pub mean: Vec<Complex64>,
    /// Indices into the input slice, ascending.
    pub members: Vec<usize>,
}

fn point_dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.re.partial_cmp(&y.re).unwrap() {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
        match x.im.partial_cmp(&y.im).unwrap() {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Single-linkage clustering: two points share a cluster when they are
/// connected by a chain of steps each of Euclidean length <= tol.
/// Output is ordered lexicographically by cluster mean (re then im,
/// coordinate-wise), so the partition is independent of input order.
pub fn cluster_points(points: &[Vec<Complex64>], tol: f64) -> Vec<Cluster> {
    assert!(tol > 0.0, "cluster tolerance must be positive");
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut i = i;
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if point_dist(&points[i], &points[j]) <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut clusters: Vec<Cluster> = groups
        .into_values()
        .map(|members| {
            let d = points[members[0]].len();
            let mut mean = vec![Complex64::new(0.0, 0.0); d];
            for &i in &members {
                for (m, p) in mean.iter_mut().zip(&points[i]) {
                    *m += p;
                }
            }
            let k = members.len() as f64;
            for m in mean.iter_mut() {
                *m /= k;
            }
            Cluster { mean, members }
        })
        .collect();
    clusters.sort_by(|a, b| lex_cmp(&a.mean, &b.mean));
    clusters
}

/// Convenience wrapper for scalar point sets.
pub fn cluster_scalars(points: &[Complex64], tol: f64) -> Vec<Cluster> {
    let pts: Vec<Vec<Complex64>> = points.iter().map(|&z| vec![z]).collect();
    cluster_points(&pts, tol)
}
