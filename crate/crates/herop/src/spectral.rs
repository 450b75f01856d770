//! Joint generalized-eigenspace decomposition of commuting tuples, the
//! canonical projections E_lambda, the S + N split, and verification
//! pipelines for the decomposition theorem, radical inclusion, and the
//! generalized-eigenvector pairing identity.

use crate::hereditary::{self, compositions, HereditaryPolynomial, PolyError, PowerCache};
use crate::linalg::{
    cluster_scalars, coordinates_in_basis, null_space, spectrum, Basis, LinalgError, Matrix,
};
use crate::tuples::{
    check_a_m_isometric, check_a_n_nilpotent, check_spherical_a_isometry, CheckReport,
    CommutingTuple, TupleError,
};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use thiserror::Error;

/// Rank tolerance for generalized-eigenspace kernels.
const NULL_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error(
        "ill-conditioned decomposition: {0}; clusters were likely split too finely, \
         increase the clustering tolerance"
    )]
    IllConditioned(String),
    #[error("input is not an (A,{m})-isometry at tolerance {tol:e} (residual {residual:e})")]
    InputNotAmIsometry { m: u32, residual: f64, tol: f64 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Tuple(#[from] TupleError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Default clustering tolerance: 1e-8 * (1 + max_j ||T_j||_F).
pub fn default_cluster_tol(t: &CommutingTuple) -> f64 {
    1e-8 * (1.0 + t.max_op_norm())
}

/// Direct sum decomposition of C^n into joint generalized eigenspaces
/// H_lambda over the finite joint point set Lambda, with the (possibly
/// non-orthogonal) canonical projections E_lambda.
#[derive(Clone, Debug)]
pub struct JointSpectralDecomposition {
    pub d: usize,
    pub n: usize,
    /// Joint points lambda in C^d, lexicographic in construction order.
    pub points: Vec<Vec<Complex64>>,
    /// Orthonormal basis of each H_lambda, in ambient coordinates.
    pub blocks: Vec<Basis>,
    /// Canonical projections E_lambda onto H_lambda along the others.
    pub projections: Vec<Matrix>,
}

impl JointSpectralDecomposition {
    /// Semisimple part S_j = sum_lambda lambda_j E_lambda.
    pub fn semisimple_part(&self) -> CommutingTuple {
        let n = self.n;
        let ops: Vec<Matrix> = (0..self.d)
            .map(|j| {
                let mut s = Matrix::zeros(n, n);
                for (lam, e) in self.points.iter().zip(&self.projections) {
                    s = &s + &e.scale(lam[j]);
                }
                s
            })
            .collect();
        CommutingTuple::from_ops_unchecked(ops)
    }
}

fn recurse_blocks(
    ops: &[Matrix],
    ambient_basis: Matrix,
    prefix: Vec<Complex64>,
    cluster_tol: f64,
    out: &mut Vec<(Vec<Complex64>, Matrix)>,
) -> Result<(), SpectralError> {
    if ops.is_empty() {
        out.push((prefix, ambient_basis));
        return Ok(());
    }
    let k = ambient_basis.cols();
    if k == 0 {
        return Ok(());
    }
    let head = &ops[0];
    let eigs = spectrum(head)?;
    let clusters = cluster_scalars(&eigs, cluster_tol);
    for cluster in clusters {
        let a = cluster.mean[0];
        let mult = cluster.members.len();
        // Generalized eigenspace as ker((T - aI)^mult); the algebraic
        // multiplicity bounds the nilpotency index on the block, and small
        // powers keep the kernel numerically detectable.
        let shifted = head - &Matrix::identity(k).scale(a);
        let scale = shifted.norm_fro().max(1.0);
        let powered = shifted.scale_re(1.0 / scale).pow(mult);
        let kernel = null_space(&powered, NULL_TOL);
        if kernel.dim() == 0 {
            return Err(SpectralError::IllConditioned(format!(
                "empty generalized eigenspace for cluster at {a}"
            )));
        }
        let c = kernel.as_matrix();
        let new_ambient = &ambient_basis * c;
        let ch = c.adjoint();
        let restricted: Vec<Matrix> = ops[1..].iter().map(|op| &(&ch * op) * c).collect();
        let mut new_prefix = prefix.clone();
        new_prefix.push(a);
        recurse_blocks(&restricted, new_ambient, new_prefix, cluster_tol, out)?;
    }
    Ok(())
}

/// Recursive joint decomposition: cluster the spectrum of T_1, split into
/// generalized eigenspaces, restrict the remaining operators to each
/// invariant subspace, and recurse on T_2, ..., T_d.
pub fn joint_decomposition(
    t: &CommutingTuple,
    cluster_tol: f64,
) -> Result<JointSpectralDecomposition, SpectralError> {
    let n = t.dim();
    let mut raw: Vec<(Vec<Complex64>, Matrix)> = Vec::new();
    recurse_blocks(
        t.ops(),
        Matrix::identity(n),
        Vec::new(),
        cluster_tol,
        &mut raw,
    )?;
    let total: usize = raw.iter().map(|(_, b)| b.cols()).sum();
    if total != n {
        return Err(SpectralError::IllConditioned(format!(
            "block dimensions sum to {total}, expected {n}"
        )));
    }
    // Assemble the direct-sum basis and invert it once; the projections
    // are slices of that single factorization.
    let block_mats: Vec<&Matrix> = raw.iter().map(|(_, b)| b).collect();
    let full = Matrix::hstack(&block_mats)?;
    let inv = coordinates_in_basis(&full, &Matrix::identity(n)).map_err(|e| match e {
        LinalgError::SingularBasis { tol } => SpectralError::IllConditioned(format!(
            "assembled direct-sum basis is singular at tolerance {tol:e}"
        )),
        other => SpectralError::Linalg(other),
    })?;
    // A cluster split across a single generalized eigenspace (e.g. the
    // O(sqrt(eps)) eigenvalue scatter of a Jordan block) produces nearly
    // parallel basis columns. Healthy decompositions have modest condition,
    // so reject and let the caller retry with a coarser clustering tolerance.
    let cond_estimate = full.norm_fro() * inv.norm_fro();
    if cond_estimate > 1e6 {
        return Err(SpectralError::IllConditioned(format!(
            "assembled direct-sum basis condition estimate {cond_estimate:e}"
        )));
    }
    let mut points = Vec::with_capacity(raw.len());
    let mut blocks = Vec::with_capacity(raw.len());
    let mut projections = Vec::with_capacity(raw.len());
    let mut offset = 0;
    for (lam, bmat) in raw {
        let w = bmat.cols();
        let rows = inv.submatrix(offset, offset + w, 0, n);
        projections.push(&bmat * &rows);
        blocks.push(
            Basis::from_orthonormal_columns(bmat)
                .map_err(|e| SpectralError::IllConditioned(e.to_string()))?,
        );
        points.push(lam);
        offset += w;
    }
    Ok(JointSpectralDecomposition {
        d: t.d(),
        n,
        points,
        blocks,
        projections,
    })
}

/// joint_decomposition with geometric back-off on the clustering tolerance:
/// when the assembled basis is ill-conditioned the clusters were split too
/// finely, so retry with the tolerance scaled up (x10, up to 6 times).
pub fn joint_decomposition_auto(
    t: &CommutingTuple,
    cluster_tol: f64,
) -> Result<JointSpectralDecomposition, SpectralError> {
    let mut tol = cluster_tol;
    let mut last_err = None;
    for _ in 0..7 {
        match joint_decomposition(t, tol) {
            Ok(dec) => return Ok(dec),
            Err(SpectralError::IllConditioned(msg)) => {
                last_err = Some(SpectralError::IllConditioned(msg));
                tol *= 10.0;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap())
}

/// Residual diagnostics carried alongside an S + N split.
#[derive(Clone, Debug)]
pub struct SnDiagnostics {
    /// max_{j,k} ||S_j N_k - N_k S_j||_F.
    pub commutation_residual: f64,
    /// Least r with max_{|alpha|=r} ||N^alpha||_F below tolerance.
    pub nilpotency_order: u32,
    /// ||(S_j + N_j) - T_j||_F, worst over j (zero by construction).
    pub reconstruction_error: f64,
}

/// T = S + N with S semisimple (joint eigenvalues on Lambda) and N
/// nilpotent commuting with S.
#[derive(Clone, Debug)]
pub struct SnDecomposition {
    pub s: CommutingTuple,
    pub n: CommutingTuple,
    pub decomposition: JointSpectralDecomposition,
    pub diagnostics: SnDiagnostics,
}

fn nilpotency_order(n: &CommutingTuple, max_order: u32, tol_abs: f64) -> u32 {
    let mut cache = PowerCache::new(n.ops());
    for r in 1..=max_order {
        let worst = compositions(n.d(), r)
            .iter()
            .map(|alpha| cache.power(alpha).map(|p| p.norm_fro()).unwrap_or(f64::NAN))
            .fold(0.0f64, f64::max);
        if worst <= tol_abs {
            return r;
        }
    }
    max_order
}

/// Split T into its semisimple and nilpotent commuting parts,
/// S_j = sum_lambda lambda_j E_lambda and N = T - S.
pub fn split_sn(t: &CommutingTuple, cluster_tol: f64) -> Result<SnDecomposition, SpectralError> {
    let decomposition = joint_decomposition_auto(t, cluster_tol)?;
    let s = decomposition.semisimple_part();
    let n = t.sub(&s);
    let mut comm: f64 = 0.0;
    for j in 0..t.d() {
        for k in 0..t.d() {
            comm = comm.max(
                (&(s.op(j) * n.op(k)) - &(n.op(k) * s.op(j))).norm_fro(),
            );
        }
    }
    let max_block = decomposition
        .blocks
        .iter()
        .map(|b| b.dim())
        .max()
        .unwrap_or(1) as u32;
    let scale = 1.0 + t.max_op_norm();
    let order = nilpotency_order(&n, max_block.max(1), 1e-8 * scale);
    let diagnostics = SnDiagnostics {
        commutation_residual: comm,
        nilpotency_order: order,
        reconstruction_error: s
            .add(&n)
            .sub(t)
            .ops()
            .iter()
            .map(|m| m.norm_fro())
            .fold(0.0, f64::max),
    };
    Ok(SnDecomposition {
        s,
        n,
        decomposition,
        diagnostics,
    })
}

/// A named residual check inside a pipeline report.
#[derive(Clone, Debug)]
pub struct LabeledCheck {
    pub label: String,
    pub check: CheckReport,
}

/// Aggregate verification outcome.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<LabeledCheck>,
}

impl VerificationReport {
    fn from_checks(checks: Vec<LabeledCheck>) -> Self {
        VerificationReport {
            passed: checks.iter().all(|c| c.check.passed),
            checks,
        }
    }
}

/// End-to-end verification of the decomposition theorem: every
/// (A,m)-isometric tuple splits as a spherical A-isometry plus a commuting
/// nilpotent tuple. Returns the split alongside the residual evidence.
pub fn verify_decomposition_theorem(
    t: &CommutingTuple,
    a: &Matrix,
    m: u32,
    tol: f64,
) -> Result<(SnDecomposition, VerificationReport), SpectralError> {
    let pre = check_a_m_isometric(t, a, m, tol)?;
    if !pre.passed {
        return Err(SpectralError::InputNotAmIsometry {
            m,
            residual: pre.residual,
            tol,
        });
    }
    let sn = split_sn(t, default_cluster_tol(t))?;
    let scale = 1.0 + t.max_op_norm();
    let spherical = check_spherical_a_isometry(&sn.s, a, tol)?;
    let nilpotent = check_a_n_nilpotent(
        &sn.n,
        &Matrix::identity(t.dim()),
        sn.diagnostics.nilpotency_order,
        tol,
    )?;
    let commutation = CheckReport::from_residual(
        sn.diagnostics.commutation_residual / scale,
        tol,
        "max_{j,k} ||S_j N_k - N_k S_j||_F / (1 + max ||T_j||_F)",
    );
    let reconstruction = CheckReport::from_residual(
        sn.diagnostics.reconstruction_error / scale,
        tol,
        "worst ||S_j + N_j - T_j||_F / (1 + max ||T_j||_F)",
    );
    let report = VerificationReport::from_checks(vec![
        LabeledCheck {
            label: format!("input is (A,{m})-isometric"),
            check: pre,
        },
        LabeledCheck {
            label: "S is spherical A-isometric".into(),
            check: spherical,
        },
        LabeledCheck {
            label: format!(
                "N is nilpotent of order {}",
                sn.diagnostics.nilpotency_order
            ),
            check: nilpotent,
        },
        LabeledCheck {
            label: "S and N commute".into(),
            check: commutation,
        },
        LabeledCheck {
            label: "S + N reconstructs T".into(),
            check: reconstruction,
        },
    ]);
    Ok((sn, report))
}

/// Radical inclusion: when f^power annihilates under the calculus at
/// (A; T, T), f itself annihilates at (A; U, U) for the semisimple part U.
pub fn verify_radical_inclusion(
    f: &HereditaryPolynomial,
    a: &Matrix,
    t: &CommutingTuple,
    power: u32,
    tol: f64,
) -> Result<VerificationReport, SpectralError> {
    let scale = 1.0 + a.norm_fro();
    let fp = f.pow(power);
    let pre_defect = hereditary::evaluate(&fp, a, t.ops(), t.ops())?.norm_fro() / scale;
    if pre_defect > tol {
        return Err(SpectralError::PreconditionFailed(format!(
            "f^{power} does not annihilate at (A;T,T): residual {pre_defect:e} > {tol:e}"
        )));
    }
    let sn = split_sn(t, default_cluster_tol(t))?;
    let u = &sn.s;
    let u_defect = hereditary::evaluate(f, a, u.ops(), u.ops())?.norm_fro() / scale;
    Ok(VerificationReport::from_checks(vec![
        LabeledCheck {
            label: format!("f^{power} annihilates at (A;T,T)"),
            check: CheckReport::from_residual(pre_defect, tol, "precondition residual"),
        },
        LabeledCheck {
            label: "f annihilates at (A;U,U) on the semisimple part".into(),
            check: CheckReport::from_residual(u_defect, tol, "radical-inclusion residual"),
        },
    ]))
}

fn random_block_vector(rng: &mut ChaCha8Rng, basis: &Basis) -> Vec<Complex64> {
    let n = basis.ambient_dim();
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..basis.dim() {
        let coeff = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        for (out, &b) in v.iter_mut().zip(basis.vector(i).iter()) {
            *out += coeff * b;
        }
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
    v
}

/// Pairing identity for generalized eigenvectors: whenever some power of f
/// annihilates at (A; X, Y), every pair of joint generalized eigenvectors
/// u of X (at lambda) and v of Y (at omega) satisfies
/// f(conj(lambda), omega) <Av, u> = 0.
///
/// Checked on `trials` random pairs drawn from the decomposition blocks.
pub fn verify_pairing_vanishing(
    f: &HereditaryPolynomial,
    a: &Matrix,
    x: &CommutingTuple,
    y: &CommutingTuple,
    trials: u32,
    tol: f64,
    seed: u64,
) -> Result<VerificationReport, SpectralError> {
    let scale = 1.0 + a.norm_fro();
    // Precondition: some power of f (up to 8) annihilates at (A;X,Y).
    let mut fp = f.clone();
    let mut annihilating_power = None;
    for p in 1..=8u32 {
        let defect = hereditary::evaluate(&fp, a, x.ops(), y.ops())?.norm_fro() / scale;
        if defect <= tol.max(1e-8) {
            annihilating_power = Some(p);
            break;
        }
        fp = fp.mul(f)?;
    }
    let power = annihilating_power.ok_or_else(|| {
        SpectralError::PreconditionFailed(
            "no power of f up to 8 annihilates at (A;X,Y)".to_string(),
        )
    })?;
    let dx = joint_decomposition_auto(x, default_cluster_tol(x))?;
    let dy = joint_decomposition_auto(y, default_cluster_tol(y))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a_norm = a.norm_fro();
    let mut worst: f64 = 0.0;
    let mut detail_worst = String::new();
    for _ in 0..trials {
        let bi = rng.gen_range(0..dx.points.len());
        let bj = rng.gen_range(0..dy.points.len());
        let u = random_block_vector(&mut rng, &dx.blocks[bi]);
        let v = random_block_vector(&mut rng, &dy.blocks[bj]);
        let lam = &dx.points[bi];
        let om = &dy.points[bj];
        let lam_bar: Vec<Complex64> = lam.iter().map(|z| z.conj()).collect();
        let fval = f.eval_scalar(&lam_bar, om);
        let av = a.apply(&v);
        let pairing: Complex64 = av.iter().zip(&u).map(|(p, q)| q.conj() * p).sum();
        let u_norm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v_norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let bound = a_norm.max(f64::MIN_POSITIVE) * u_norm * v_norm * (1.0 + fval.norm());
        let ratio = (fval * pairing).norm() / bound.max(f64::MIN_POSITIVE);
        if ratio > worst {
            worst = ratio;
            detail_worst = format!(
                "worst pair lambda={lam:?} omega={om:?}, |f(conj(lambda),omega) <Av,u>| relative {ratio:e}"
            );
        }
    }
    Ok(VerificationReport::from_checks(vec![
        LabeledCheck {
            label: format!("f^{power} annihilates at (A;X,Y)"),
            check: CheckReport::from_residual(0.0, tol, "precondition satisfied"),
        },
        LabeledCheck {
            label: format!("pairing vanishes on {trials} random block pairs"),
            check: CheckReport::from_residual(worst, tol, detail_worst),
        },
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn richter_w() -> CommutingTuple {
        CommutingTuple::new(vec![
            Matrix::identity(2),
            Matrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]),
        ])
        .unwrap()
    }

    #[test]
    fn diagonal_joint_decomposition() {
        let t = CommutingTuple::new(vec![
            Matrix::diag(&[c(1.0, 0.0), c(2.0, 0.0)]),
            Matrix::diag(&[c(3.0, 0.0), c(4.0, 0.0)]),
        ])
        .unwrap();
        let dec = joint_decomposition(&t, 1e-8).unwrap();
        assert_eq!(dec.points.len(), 2);
        assert!((dec.points[0][0] - c(1.0, 0.0)).norm() < 1e-10);
        assert!((dec.points[0][1] - c(3.0, 0.0)).norm() < 1e-10);
        assert!((dec.points[1][0] - c(2.0, 0.0)).norm() < 1e-10);
        assert!((dec.points[1][1] - c(4.0, 0.0)).norm() < 1e-10);
        // Projections are the coordinate projections.
        let e0 = &dec.projections[0];
        assert!((e0 - &Matrix::diag(&[c(1.0, 0.0), c(0.0, 0.0)])).norm_fro() < 1e-10);
    }

    #[test]
    fn richter_block_is_single_joint_point() {
        let dec = joint_decomposition(&richter_w(), 1e-6).unwrap();
        assert_eq!(dec.points.len(), 1);
        assert!((dec.points[0][0] - c(1.0, 0.0)).norm() < 1e-6);
        assert!(dec.points[0][1].norm() < 1e-6);
        assert_eq!(dec.blocks[0].dim(), 2);
        assert!((&dec.projections[0] - &Matrix::identity(2)).norm_fro() < 1e-8);
    }

    #[test]
    fn block_diagonal_jordan_decomposition() {
        // d = 1: diag(Jordan(1, size 2), [2]) splits as dims (2, 1).
        let t = CommutingTuple::new(vec![Matrix::from_real(&[
            &[1.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 2.0],
        ])])
        .unwrap();
        let dec = joint_decomposition_auto(&t, default_cluster_tol(&t)).unwrap();
        assert_eq!(dec.points.len(), 2);
        let mut dims: Vec<usize> = dec.blocks.iter().map(|b| b.dim()).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
        // Idempotent resolution of the identity.
        let sum = dec
            .projections
            .iter()
            .fold(Matrix::zeros(3, 3), |acc, e| &acc + e);
        assert!((&sum - &Matrix::identity(3)).norm_fro() < 1e-8);
        for e in &dec.projections {
            assert!((&(e * e) - e).norm_fro() < 1e-8);
        }
        assert!((&dec.projections[0] * &dec.projections[1]).norm_fro() < 1e-8);
    }

    #[test]
    fn split_sn_diagonalizable_has_zero_n() {
        let t = CommutingTuple::new(vec![Matrix::diag(&[c(2.0, 0.0), c(3.0, 0.0)])]).unwrap();
        let sn = split_sn(&t, default_cluster_tol(&t)).unwrap();
        assert!(sn.n.op(0).norm_fro() < 1e-10);
        assert!((sn.s.op(0) - t.op(0)).norm_fro() < 1e-10);
    }

    #[test]
    fn split_sn_jordan_block() {
        let t = CommutingTuple::new(vec![Matrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]])]).unwrap();
        let sn = split_sn(&t, default_cluster_tol(&t)).unwrap();
        assert!((sn.s.op(0) - &Matrix::identity(2)).norm_fro() < 1e-8);
        assert!((sn.n.op(0) - &Matrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]])).norm_fro() < 1e-8);
        assert_eq!(sn.diagnostics.nilpotency_order, 2);
    }

    #[test]
    fn split_sn_richter_block() {
        let sn = split_sn(&richter_w(), default_cluster_tol(&richter_w())).unwrap();
        assert!((sn.s.op(0) - &Matrix::identity(2)).norm_fro() < 1e-8);
        assert!(sn.s.op(1).norm_fro() < 1e-8);
        assert!((sn.n.op(1) - &Matrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]])).norm_fro() < 1e-8);
    }

    #[test]
    fn split_sn_is_canonical() {
        let w = richter_w();
        let sn = split_sn(&w, default_cluster_tol(&w)).unwrap();
        let again = split_sn(&sn.s, default_cluster_tol(&sn.s)).unwrap();
        let scale = 1.0 + w.max_op_norm();
        for j in 0..w.d() {
            assert!(again.n.op(j).norm_fro() <= 1e-8 * scale);
        }
    }

    #[test]
    fn theorem_pipeline_on_spherical_isometry() {
        // A spherical A-isometry splits with N = 0.
        let t = CommutingTuple::new(vec![
            Matrix::diag(&[c(1.0, 0.0), c(0.0, 0.0)]),
            Matrix::diag(&[c(0.0, 0.0), c(0.0, 1.0)]),
        ])
        .unwrap();
        let (sn, rep) =
            verify_decomposition_theorem(&t, &Matrix::identity(2), 1, 1e-9).unwrap();
        assert!(rep.passed);
        for j in 0..2 {
            assert!(sn.n.op(j).norm_fro() < 1e-9);
        }
    }

    #[test]
    fn theorem_pipeline_on_richter_block() {
        let (sn, rep) =
            verify_decomposition_theorem(&richter_w(), &Matrix::identity(2), 2, 1e-9).unwrap();
        assert!(rep.passed);
        assert!((sn.s.op(0) - &Matrix::identity(2)).norm_fro() < 1e-8);
        assert!(sn.s.op(1).norm_fro() < 1e-8);
    }

    #[test]
    fn theorem_pipeline_rejects_non_isometry() {
        let t = CommutingTuple::new(vec![Matrix::identity(2).scale_re(2.0)]).unwrap();
        assert!(matches!(
            verify_decomposition_theorem(&t, &Matrix::identity(2), 2, 1e-9),
            Err(SpectralError::InputNotAmIsometry { m: 2, .. })
        ));
    }

    #[test]
    fn radical_inclusion_on_richter_block() {
        let f = crate::hereditary::m_isometry_polynomial(2, 1);
        let rep =
            verify_radical_inclusion(&f, &Matrix::identity(2), &richter_w(), 2, 1e-9).unwrap();
        assert!(rep.passed);
    }

    #[test]
    fn radical_inclusion_trivial_on_unitary() {
        let f = crate::hereditary::m_isometry_polynomial(1, 1);
        let t = CommutingTuple::new(vec![Matrix::diag(&[c(1.0, 0.0), c(0.0, 1.0)])]).unwrap();
        let rep = verify_radical_inclusion(&f, &Matrix::identity(2), &t, 1, 1e-9).unwrap();
        assert!(rep.passed);
    }

    #[test]
    fn radical_inclusion_precondition_failure() {
        let f = crate::hereditary::m_isometry_polynomial(1, 1);
        let t = CommutingTuple::new(vec![Matrix::identity(2).scale_re(2.0)]).unwrap();
        assert!(matches!(
            verify_radical_inclusion(&f, &Matrix::identity(2), &t, 1, 1e-9),
            Err(SpectralError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn pairing_vanishing_on_singular_weight() {
        // X = Y = diag(1,5), A = diag(1,0): the ideal contains xy - 1.
        let t = CommutingTuple::new(vec![Matrix::diag(&[c(1.0, 0.0), c(5.0, 0.0)])]).unwrap();
        let a = Matrix::diag(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let f = crate::hereditary::m_isometry_polynomial(1, 1);
        let rep = verify_pairing_vanishing(&f, &a, &t, &t, 40, 1e-8, 7).unwrap();
        assert!(rep.passed);
    }

    #[test]
    fn pairing_vanishing_vacuous_for_zero_weight() {
        let t = richter_w();
        let a = Matrix::zeros(2, 2);
        let f = crate::hereditary::m_isometry_polynomial(2, 2);
        let rep = verify_pairing_vanishing(&f, &a, &t, &t, 10, 1e-8, 1).unwrap();
        assert!(rep.passed);
    }

    #[test]
    fn pairing_vanishing_on_two_isometry() {
        let f = crate::hereditary::m_isometry_polynomial(2, 2);
        let rep = verify_pairing_vanishing(
            &f,
            &Matrix::identity(2),
            &richter_w(),
            &richter_w(),
            50,
            1e-8,
            3,
        )
        .unwrap();
        assert!(rep.passed);
    }
}
