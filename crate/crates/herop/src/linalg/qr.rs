//! Column-pivoted Householder QR and the rank decisions built on it:
//! orthonormal null space bases and coordinate solves against a basis.

use super::{Basis, LinalgError, Matrix, DEFAULT_RANK_TOL};
use num_complex::Complex64;

/// Column-pivoted QR factorization `A * P = Q * R` with Q unitary
/// (square, rows x rows) and R upper triangular with non-increasing
/// diagonal moduli. `perm[k]` is the original column now at position k.
pub struct QrPivoted {
    pub q: Matrix,
    pub r: Matrix,
    pub perm: Vec<usize>,
}

fn apply_householder_left(m: &mut Matrix, v: &[Complex64], row0: usize, col0: usize) {
    // m <- (I - 2 v v^*) m on rows row0.., columns col0..
    let rows = m.rows();
    let cols = m.cols();
    for j in col0..cols {
        let mut dot = Complex64::new(0.0, 0.0);
        for i in row0..rows {
            dot += v[i - row0].conj() * m[(i, j)];
        }
        let dot = dot * 2.0;
        for i in row0..rows {
            let upd = v[i - row0] * dot;
            m[(i, j)] -= upd;
        }
    }
}

/// Householder vector (normalized) that maps x to a multiple of e1.
/// Returns None when x is already (numerically exactly) that multiple.
fn householder_vector(x: &[Complex64]) -> Option<Vec<Complex64>> {
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return None;
    }
    let phase = if x[0].norm() > 0.0 {
        x[0] / x[0].norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    // alpha = -phase * norm, v = x - alpha e1: no cancellation in v[0].
    let mut v = x.to_vec();
    v[0] += phase * norm;
    let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if vnorm == 0.0 {
        return None;
    }
    for z in v.iter_mut() {
        *z /= vnorm;
    }
    Some(v)
}

pub fn qr_pivoted(a: &Matrix) -> QrPivoted {
    let m = a.rows();
    let n = a.cols();
    let steps = m.min(n);
    let mut r = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut reflectors: Vec<(usize, Vec<Complex64>)> = Vec::new();

    for k in 0..steps {
        // Pivot: remaining column with the largest residual norm.
        let mut best = k;
        let mut best_norm = -1.0;
        for j in k..n {
            let nj: f64 = (k..m).map(|i| r[(i, j)].norm_sqr()).sum();
            if nj > best_norm {
                best_norm = nj;
                best = j;
            }
        }
        if best != k {
            for i in 0..m {
                let t = r[(i, k)];
                r[(i, k)] = r[(i, best)];
                r[(i, best)] = t;
            }
            perm.swap(k, best);
        }
        let x: Vec<Complex64> = (k..m).map(|i| r[(i, k)]).collect();
        if let Some(v) = householder_vector(&x) {
            apply_householder_left(&mut r, &v, k, k);
            // Clean the annihilated part exactly.
            for i in (k + 1)..m {
                r[(i, k)] = Complex64::new(0.0, 0.0);
            }
            reflectors.push((k, v));
        }
    }

    // Q = H_1 H_2 ... H_t (each H is Hermitian unitary).
    let mut q = Matrix::identity(m);
    for (k, v) in reflectors.iter().rev() {
        apply_householder_left(&mut q, v, *k, 0);
    }
    QrPivoted { q, r, perm }
}

/// Numerical rank of a pivoted R factor at the absolute threshold `thresh`.
fn rank_at(r: &Matrix, thresh: f64) -> usize {
    let steps = r.rows().min(r.cols());
    let mut rank = 0;
    for i in 0..steps {
        if r[(i, i)].norm() > thresh {
            rank += 1;
        } else {
            break;
        }
    }
    rank
}

/// Orthonormal basis of the kernel of `m` at the relative tolerance `tol`:
/// each returned vector v satisfies ||m v|| <~ tol * max(1, ||m||_F).
///
/// Computed from the pivoted QR of the adjoint: the trailing columns of Q
/// span the orthogonal complement of the row space.
pub fn null_space(m: &Matrix, tol: f64) -> Basis {
    assert!(tol > 0.0, "null_space tolerance must be positive");
    let n = m.cols();
    if n == 0 {
        return Basis::empty(0);
    }
    let thresh = tol * m.norm_fro().max(1.0);
    let f = qr_pivoted(&m.adjoint());
    let rank = rank_at(&f.r, thresh);
    let basis = f.q.submatrix(0, n, rank, n);
    Basis::from_orthonormal_columns(basis)
        .expect("Householder Q columns are orthonormal by construction")
}

/// Solve B X = target for a square basis matrix B. Errors with
/// `SingularBasis` when the smallest pivot falls below
/// DEFAULT_RANK_TOL times the largest.
pub fn coordinates_in_basis(b: &Matrix, target: &Matrix) -> Result<Matrix, LinalgError> {
    if !b.is_square() {
        return Err(LinalgError::Dimension(format!(
            "basis matrix must be square, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    if target.rows() != b.rows() {
        return Err(LinalgError::Dimension(format!(
            "target has {} rows but basis is {}x{}",
            target.rows(),
            b.rows(),
            b.cols()
        )));
    }
    let n = b.rows();
    if n == 0 {
        return Ok(Matrix::zeros(0, target.cols()));
    }
    let f = qr_pivoted(b);
    let dmax = (0..n).map(|i| f.r[(i, i)].norm()).fold(0.0, f64::max);
    let dmin = (0..n).map(|i| f.r[(i, i)].norm()).fold(f64::INFINITY, f64::min);
    if dmax == 0.0 || dmin <= DEFAULT_RANK_TOL * dmax {
        return Err(LinalgError::SingularBasis {
            tol: DEFAULT_RANK_TOL,
        });
    }
    // B P = Q R  =>  X = P y with R y = Q^* target.
    let rhs = &f.q.adjoint() * target;
    let mut y = Matrix::zeros(n, target.cols());
    for col in 0..target.cols() {
        for i in (0..n).rev() {
            let mut s = rhs[(i, col)];
            for j in (i + 1)..n {
                s -= f.r[(i, j)] * y[(j, col)];
            }
            y[(i, col)] = s / f.r[(i, i)];
        }
    }
    let mut x = Matrix::zeros(n, target.cols());
    for (k, &orig) in f.perm.iter().enumerate() {
        for col in 0..target.cols() {
            x[(orig, col)] = y[(k, col)];
        }
    }
    Ok(x)
}
