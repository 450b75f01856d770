//! Seeded generators for the example families: spherical unitaries,
//! upper-triangular 2-isometric blocks, (A,2)-isometries assembled from a
//! spherical A-isometry plus a compatible nilpotent part, and single-operator
//! Jordan-type strict isometries. Identical seed and parameters give
//! bit-identical output.

use crate::linalg::Matrix;
use crate::tuples::{CommutingTuple, TupleError};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Reproducibility handle for all generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Seed(pub u64);

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("alpha must lie on the unit sphere: |alpha|^2 = {0}, expected 1 within 1e-12")]
    AlphaNotOnSphere(f64),
    #[error("jordan eigenvalue {0} is not unimodular")]
    NotUnimodular(Complex64),
    #[error("invalid generator parameters: {0}")]
    BadParams(String),
    #[error("generation failed after 32 attempts")]
    GenerationFailed,
    #[error(transparent)]
    Tuple(#[from] TupleError),
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Uniform point on the unit sphere of C^d (normalized complex Gaussians).
pub fn unit_sphere_point(d: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Haar-distributed unitary: Gram-Schmidt of a complex Gaussian matrix with
/// the phase convention fixed by positive diagonal projections.
pub fn haar_unitary(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let g = gaussian_matrix(rng, n, n);
    let mut q = g;
    for j in 0..n {
        let mut col = q.column(j);
        for _ in 0..2 {
            for p in 0..j {
                let prev = q.column(p);
                let dot: Complex64 = prev.iter().zip(&col).map(|(a, b)| a.conj() * b).sum();
                for (c, &pv) in col.iter_mut().zip(prev.iter()) {
                    *c -= dot * pv;
                }
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for c in col.iter_mut() {
            *c /= norm;
        }
        q.set_column(j, &col);
    }
    q
}

/// Commuting normal tuple with joint eigenvalues on the unit sphere:
/// T_j = Q diag(lambda_j^(i)) Q^* for one shared random unitary Q and n
/// independent sphere points lambda^(i).
pub fn gen_spherical_unitary(d: usize, n: usize, seed: Seed) -> Result<CommutingTuple, GenError> {
    if d == 0 || n == 0 {
        return Err(GenError::BadParams(format!("d = {d}, n = {n}; both must be >= 1")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let points: Vec<Vec<Complex64>> = (0..n).map(|_| unit_sphere_point(d, &mut rng)).collect();
    let q = haar_unitary(n, &mut rng);
    let qh = q.adjoint();
    let ops: Vec<Matrix> = (0..d)
        .map(|j| {
            let diag = Matrix::diag(&points.iter().map(|p| p[j]).collect::<Vec<_>>());
            &(&q * &diag) * &qh
        })
        .collect();
    Ok(CommutingTuple::from_ops_unchecked(ops))
}

/// 2-isometric block tuple W_j = [[alpha_j I_n, V_j], [0, alpha_j I_m]]
/// with random V projected onto the constraint sum conj(alpha_j) V_j = 0.
/// For d = 1 the constraint forces V = 0.
pub fn gen_block_example(
    alpha: &[Complex64],
    n: usize,
    m: usize,
    seed: Seed,
) -> Result<CommutingTuple, GenError> {
    let d = alpha.len();
    if d == 0 || n == 0 || m == 0 {
        return Err(GenError::BadParams(format!(
            "d = {d}, n = {n}, m = {m}; all must be >= 1"
        )));
    }
    let norm_sqr: f64 = alpha.iter().map(|z| z.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > 1e-12 {
        return Err(GenError::AlphaNotOnSphere(norm_sqr));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let v: Vec<Matrix> = if d == 1 {
        vec![Matrix::zeros(n, m)]
    } else {
        let raw: Vec<Matrix> = (0..d).map(|_| gaussian_matrix(&mut rng, n, m)).collect();
        let mut k = Matrix::zeros(n, m);
        for (a, vj) in alpha.iter().zip(&raw) {
            k = &k + &vj.scale(a.conj());
        }
        raw.iter()
            .zip(alpha.iter())
            .map(|(vj, &a)| vj - &k.scale(a))
            .collect()
    };
    let ops: Vec<Matrix> = (0..d)
        .map(|j| {
            let top = Matrix::hstack(&[&Matrix::identity(n).scale(alpha[j]), &v[j]])
                .expect("row counts match");
            let bottom = Matrix::hstack(&[
                &Matrix::zeros(m, n),
                &Matrix::identity(m).scale(alpha[j]),
            ])
            .expect("row counts match");
            let mut w = Matrix::zeros(n + m, n + m);
            for i in 0..n {
                for c in 0..(n + m) {
                    w[(i, c)] = top[(i, c)];
                }
            }
            for i in 0..m {
                for c in 0..(n + m) {
                    w[(n + i, c)] = bottom[(i, c)];
                }
            }
            w
        })
        .collect();
    Ok(CommutingTuple::from_ops_unchecked(ops))
}

/// An (A,2)-isometry with its weight matrix, built so the split into a
/// spherical A-isometry S and an (A,2)-nilpotent N is known by construction.
pub struct A2Instance {
    pub t: CommutingTuple,
    pub a: Matrix,
}

fn try_gen_a2(d: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<A2Instance, GenError> {
    let alpha = unit_sphere_point(d, rng);
    // Optionally reserve a summand for a spherical-unitary part with a
    // commuting weight; the remainder carries the scalar-plus-nilpotent part.
    let n2 = if n >= 3 && rng.gen_bool(0.5) {
        rng.gen_range(1..=(n - 2))
    } else {
        0
    };
    let n1 = n - n2;
    let rank_deficient = rng.gen_bool(0.5);

    // Block 1: scalar alpha_j I plus strictly upper nilpotent coupling.
    let (nil_v, a1): (Option<(usize, usize, Vec<Matrix>)>, Matrix) = if n1 >= 2 {
        let p = rng.gen_range(1..n1);
        let q = n1 - p;
        if d == 1 {
            if rank_deficient {
                // A must annihilate the range of V: take V rank one and
                // build A as a Gram matrix vanishing on that direction.
                let w: Vec<Complex64> = {
                    let raw: Vec<Complex64> = (0..p).map(|_| gaussian(rng)).collect();
                    let nm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    raw.into_iter().map(|z| z / nm).collect()
                };
                let g: Vec<Complex64> = (0..q).map(|_| gaussian(rng)).collect();
                let v = Matrix::from_fn(p, q, |i, j| w[i] * g[j].conj());
                let mut w_full = vec![Complex64::new(0.0, 0.0); n1];
                w_full[..p].copy_from_slice(&w);
                let proj = Matrix::from_fn(n1, n1, |i, j| {
                    let delta = if i == j {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    delta - w_full[i] * w_full[j].conj()
                });
                let gmat = &gaussian_matrix(rng, n1, n1) * &proj;
                let a1 = &gmat.adjoint() * &gmat;
                (Some((p, q, vec![v])), a1)
            } else {
                // Full-rank A forces N = 0 in one variable.
                let gmat = gaussian_matrix(rng, n1, n1);
                (None, &gmat.adjoint() * &gmat)
            }
        } else {
            // d >= 2: project V onto sum conj(alpha_j) V_j = 0, then any
            // weight is compatible.
            let raw: Vec<Matrix> = (0..d).map(|_| gaussian_matrix(rng, p, q)).collect();
            let mut k = Matrix::zeros(p, q);
            for (a, vj) in alpha.iter().zip(&raw) {
                k = &k + &vj.scale(a.conj());
            }
            let v: Vec<Matrix> = raw
                .iter()
                .zip(alpha.iter())
                .map(|(vj, &a)| vj - &k.scale(a))
                .collect();
            let grows = if rank_deficient && n2 == 0 { n1 - 1 } else { n1 };
            let gmat = gaussian_matrix(rng, grows, n1);
            (Some((p, q, v)), &gmat.adjoint() * &gmat)
        }
    } else {
        // n1 == 1: no room for a nilpotent part; scalar weight.
        let w = if rank_deficient && n2 == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(gaussian(rng).norm_sqr(), 0.0)
        };
        (None, Matrix::diag(&vec![w; n1]))
    };

    // Block 2: spherical unitary sharing an eigenbasis with its weight.
    let (u_ops, a2) = if n2 > 0 {
        let q2 = haar_unitary(n2, rng);
        let q2h = q2.adjoint();
        let pts: Vec<Vec<Complex64>> = (0..n2).map(|_| unit_sphere_point(d, rng)).collect();
        let mut dvals: Vec<Complex64> = (0..n2)
            .map(|_| Complex64::new(gaussian(rng).norm_sqr(), 0.0))
            .collect();
        if rank_deficient {
            dvals[0] = Complex64::new(0.0, 0.0);
        }
        let a2 = &(&q2 * &Matrix::diag(&dvals)) * &q2h;
        let ops: Vec<Matrix> = (0..d)
            .map(|j| {
                let diag = Matrix::diag(&pts.iter().map(|p| p[j]).collect::<Vec<_>>());
                &(&q2 * &diag) * &q2h
            })
            .collect();
        (Some(ops), Some(a2))
    } else {
        (None, None)
    };

    let mut ops = Vec::with_capacity(d);
    for j in 0..d {
        let mut b1 = Matrix::identity(n1).scale(alpha[j]);
        if let Some((p, _q, v)) = &nil_v {
            let vj = if d == 1 { &v[0] } else { &v[j] };
            for r in 0..vj.rows() {
                for c in 0..vj.cols() {
                    b1[(r, p + c)] += vj[(r, c)];
                }
            }
        }
        let op = match &u_ops {
            Some(u) => Matrix::block_diag(&[&b1, &u[j]]),
            None => b1,
        };
        ops.push(op);
    }
    let a = match &a2 {
        Some(a2m) => Matrix::block_diag(&[&a1, a2m]),
        None => a1,
    };
    let t = CommutingTuple::with_commutation_tol(ops, 1e-10)?;
    Ok(A2Instance { t, a })
}

/// Seeded (A,2)-isometry generator. The weight A is positive semidefinite
/// with rank n or n-1, S is spherical A-isometric by construction, N is
/// nilpotent of order <= 2 commuting with S, and sum_l S_l^* A N_l = 0.
pub fn gen_a2_construction(d: usize, n: usize, seed: Seed) -> Result<A2Instance, GenError> {
    if d == 0 || n == 0 {
        return Err(GenError::BadParams(format!("d = {d}, n = {n}; both must be >= 1")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    for _ in 0..32 {
        match try_gen_a2(d, n, &mut rng) {
            Ok(inst) => {
                let scale = (1.0 + inst.t.max_op_norm()) * (1.0 + inst.a.norm_fro());
                let defect =
                    crate::tuples::m_isometry_defect(&inst.t, &inst.a, 2).map_err(GenError::Tuple)?;
                if defect <= 1e-10 * scale {
                    return Ok(inst);
                }
            }
            Err(GenError::Tuple(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GenError::GenerationFailed)
}

/// Single-operator tuple, block diagonal in a hidden unitary frame, with one
/// Jordan-type block lambda I + N_strict per requested (lambda, size).
/// The result is a strict (2 max_size - 1)-isometry.
pub fn gen_jordan_isometry(
    orders: &[(Complex64, usize)],
    seed: Seed,
) -> Result<CommutingTuple, GenError> {
    if orders.is_empty() || orders.iter().any(|&(_, k)| k == 0) {
        return Err(GenError::BadParams(
            "need at least one (lambda, size) with size >= 1".into(),
        ));
    }
    for &(lam, _) in orders {
        if (lam.norm() - 1.0).abs() > 1e-12 {
            return Err(GenError::NotUnimodular(lam));
        }
    }
    let blocks: Vec<Matrix> = orders
        .iter()
        .map(|&(lam, k)| {
            Matrix::from_fn(k, k, |i, j| {
                if i == j {
                    lam
                } else if j == i + 1 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        })
        .collect();
    let refs: Vec<&Matrix> = blocks.iter().collect();
    let w = Matrix::block_diag(&refs);
    let n = w.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let q = haar_unitary(n, &mut rng);
    let t = &(&q * &w) * &q.adjoint();
    Ok(CommutingTuple::from_ops_unchecked(vec![t]))
}
