//! Structure classification of 2-isometric tuples into a spherical-unitary
//! summand plus upper-triangular blocks [[alpha_j I, V_j], [0, alpha_j I]]
//! with sum conj(alpha_j) V_j = 0, and the weaker (A,2) split into a
//! spherical A-isometry plus an (A,2)-nilpotent part.

use crate::linalg::{null_space, spectrum, Basis, LinalgError, Matrix};
use crate::spectral::{
    default_cluster_tol, joint_decomposition_auto, split_sn, LabeledCheck, SnDecomposition,
    SpectralError, VerificationReport,
};
use crate::tuples::{
    check_a_m_isometric, check_a_n_nilpotent, check_spherical_a_isometry, CheckReport,
    CommutingTuple, TupleError,
};
use num_complex::Complex64;
use thiserror::Error;

/// Rank tolerance for the kernel intersection M = cap_j ker(N_j).
const KERNEL_TOL: f64 = 1e-8;
/// Hermitian / positivity slack for the weight matrix A, relative.
const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("input is not 2-isometric at tolerance {tol:e} (residual {residual:e})")]
    NotTwoIsometric { residual: f64, tol: f64 },
    #[error("input is not (A,2)-isometric at tolerance {tol:e} (residual {residual:e})")]
    NotA2Isometric { residual: f64, tol: f64 },
    #[error("weight matrix is not positive semidefinite: {0}")]
    ANotPositive(String),
    #[error(
        "structure violation: {0}; this contradicts the 2-isometry structure theorem \
         and signals numerical breakdown or a bad input"
    )]
    StructureViolation(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Tuple(#[from] TupleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One non-unitary summand: on M + Mperp the tuple acts as
/// [[alpha_j I, V_j], [0, alpha_j I]] with V_j mapping Mperp into M.
#[derive(Clone, Debug)]
pub struct TwoIsometryBlock {
    /// Point of the unit sphere in C^d.
    pub alpha: Vec<Complex64>,
    /// Orthonormal basis of M = cap_j ker(T_j|_H - alpha_j I), ambient coords.
    pub m_basis: Basis,
    /// Orthonormal basis of the complement of M inside the block.
    pub mperp_basis: Basis,
    /// V_j = m_basis^* T_j mperp_basis, one per coordinate.
    pub v: Vec<Matrix>,
}

impl TwoIsometryBlock {
    /// ||sum_j conj(alpha_j) V_j||_F, zero in exact arithmetic.
    pub fn constraint_residual(&self) -> f64 {
        let rows = self.m_basis.dim();
        let cols = self.mperp_basis.dim();
        let mut acc = Matrix::zeros(rows, cols);
        for (a, vj) in self.alpha.iter().zip(&self.v) {
            acc = &acc + &vj.scale(a.conj());
        }
        acc.norm_fro()
    }
}

/// Full structure: spherical-unitary summand plus blocks, with the unitary
/// change of basis from block coordinates back to the original space.
#[derive(Clone, Debug)]
pub struct TwoIsometryStructure {
    pub d: usize,
    pub n: usize,
    pub unitary_basis: Basis,
    /// The tuple restricted to the unitary summand (in its basis coords).
    pub unitary_tuple: CommutingTuple,
    pub blocks: Vec<TwoIsometryBlock>,
    /// Columns: unitary basis, then per block the M and Mperp bases.
    pub change_of_basis: Matrix,
}

/// Modified Gram-Schmidt with reorthogonalization; errors when a column is
/// numerically dependent on its predecessors.
fn orthonormalize(m: &Matrix) -> Result<Matrix, ClassifyError> {
    let k = m.cols();
    let mut q = m.clone();
    for j in 0..k {
        let mut col = q.column(j);
        for _pass in 0..2 {
            for p in 0..j {
                let prev = q.column(p);
                let dot: Complex64 = prev.iter().zip(&col).map(|(a, b)| a.conj() * b).sum();
                for (c, &pv) in col.iter_mut().zip(prev.iter()) {
                    *c -= dot * pv;
                }
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return Err(ClassifyError::StructureViolation(format!(
                "assembled basis column {j} of {k} is numerically dependent (norm {norm:e})"
            )));
        }
        for c in col.iter_mut() {
            *c /= norm;
        }
        q.set_column(j, &col);
    }
    Ok(q)
}

/// Classify a 2-isometric tuple (weight A = I) per the structure theorem:
/// joint eigenvalues lie on the unit sphere, the eigenspaces are pairwise
/// orthogonal and reducing, and each non-unitary block takes the
/// [[alpha I, V], [0, alpha I]] form with sum conj(alpha_j) V_j = 0.
pub fn classify_2_isometric(
    t: &CommutingTuple,
    tol: f64,
) -> Result<TwoIsometryStructure, ClassifyError> {
    let n = t.dim();
    let d = t.d();
    let a = Matrix::identity(n);
    let pre = check_a_m_isometric(t, &a, 2, tol)?;
    if !pre.passed {
        return Err(ClassifyError::NotTwoIsometric {
            residual: pre.residual,
            tol,
        });
    }
    let scale = 1.0 + t.max_op_norm();
    let dec = joint_decomposition_auto(t, default_cluster_tol(t))?;

    // Theorem-mandated sanity: unit-sphere eigenvalues, orthogonal blocks.
    for lam in &dec.points {
        let norm_sqr: f64 = lam.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > tol.max(1e-8) {
            return Err(ClassifyError::StructureViolation(format!(
                "joint eigenvalue {lam:?} has |lambda|^2 = {norm_sqr}, expected 1"
            )));
        }
    }
    for i in 0..dec.blocks.len() {
        for j in (i + 1)..dec.blocks.len() {
            let g = &dec.blocks[i].as_matrix().adjoint() * dec.blocks[j].as_matrix();
            if g.norm_fro() > tol.max(1e-7) {
                return Err(ClassifyError::StructureViolation(format!(
                    "eigenspace blocks {i} and {j} are not orthogonal (overlap {:e})",
                    g.norm_fro()
                )));
            }
        }
    }

    // Partition blocks into the unitary summand (N = 0) and genuine blocks;
    // within a genuine block split off M = cap_j ker(N_j).
    let mut unitary_cols: Vec<Matrix> = Vec::new();
    let mut raw_blocks: Vec<(Vec<Complex64>, Matrix, Matrix)> = Vec::new(); // (alpha, M cols, Mperp cols)
    for (lam, basis) in dec.points.iter().zip(&dec.blocks) {
        let b = basis.as_matrix();
        let k = basis.dim();
        let bh = b.adjoint();
        let restricted: Vec<Matrix> = (0..d).map(|j| &(&bh * t.op(j)) * b).collect();
        let nil: Vec<Matrix> = restricted
            .iter()
            .zip(lam.iter())
            .map(|(r, &l)| r - &Matrix::identity(k).scale(l))
            .collect();
        let worst = nil.iter().map(|m| m.norm_fro()).fold(0.0, f64::max);
        if worst <= tol.max(1e-9) * scale {
            unitary_cols.push(b.clone());
            continue;
        }
        let stacked_refs: Vec<&Matrix> = nil.iter().collect();
        let stacked = vstack(&stacked_refs);
        let m_local = null_space(&stacked, KERNEL_TOL); // k x p, local coords
        if m_local.dim() == 0 || m_local.dim() == k {
            return Err(ClassifyError::StructureViolation(format!(
                "nilpotent part on a block of dimension {k} has kernel of dimension {}, \
                 inconsistent with order-2 nilpotency",
                m_local.dim()
            )));
        }
        let mperp_local = null_space(&m_local.as_matrix().adjoint(), KERNEL_TOL);
        // Verify the block really is order-2: N maps everything into M,
        // i.e. the Mperp-to-Mperp corner of every N_j vanishes.
        for nj in &nil {
            let direct = (&(&mperp_local.as_matrix().adjoint() * nj)
                * mperp_local.as_matrix())
            .norm_fro();
            if direct > tol.max(1e-7) * scale {
                return Err(ClassifyError::StructureViolation(format!(
                    "nilpotent part does not vanish on the complement of its kernel \
                     (residual {direct:e})"
                )));
            }
        }
        raw_blocks.push((
            lam.clone(),
            b * m_local.as_matrix(),
            b * mperp_local.as_matrix(),
        ));
    }

    // Assemble the global change of basis and clean it to working-precision
    // unitarity with one orthonormalization sweep; all reported data is then
    // recomputed in the cleaned basis.
    let mut col_groups: Vec<Matrix> = Vec::new();
    let mut group_sizes: Vec<usize> = Vec::new();
    for u in &unitary_cols {
        group_sizes.push(u.cols());
        col_groups.push(u.clone());
    }
    for (_, mb, mp) in &raw_blocks {
        group_sizes.push(mb.cols());
        col_groups.push(mb.clone());
        group_sizes.push(mp.cols());
        col_groups.push(mp.clone());
    }
    let refs: Vec<&Matrix> = col_groups.iter().collect();
    let assembled = if refs.is_empty() {
        Matrix::identity(n)
    } else {
        Matrix::hstack(&refs)?
    };
    if assembled.cols() != n {
        return Err(ClassifyError::StructureViolation(format!(
            "classified subspaces span dimension {}, expected {n}",
            assembled.cols()
        )));
    }
    let q = orthonormalize(&assembled)?;

    // Re-slice the cleaned basis.
    let mut offset = 0usize;
    let mut take = |w: usize| {
        let s = q.submatrix(0, n, offset, offset + w);
        offset += w;
        s
    };
    let unitary_dim: usize = unitary_cols.iter().map(|u| u.cols()).sum();
    let u_mat = take(unitary_dim);
    let unitary_basis = Basis::from_orthonormal_columns(u_mat.clone())?;
    let uh = u_mat.adjoint();
    let unitary_tuple =
        CommutingTuple::from_ops_unchecked((0..d).map(|j| &(&uh * t.op(j)) * &u_mat).collect());

    let mut blocks = Vec::with_capacity(raw_blocks.len());
    for (lam, mb_raw, mp_raw) in &raw_blocks {
        let mb = take(mb_raw.cols());
        let mp = take(mp_raw.cols());
        let norm: f64 = lam.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let alpha: Vec<Complex64> = lam.iter().map(|z| z / norm).collect();
        let mbh = mb.adjoint();
        let v: Vec<Matrix> = (0..d).map(|j| &(&mbh * t.op(j)) * &mp).collect();
        let block = TwoIsometryBlock {
            alpha,
            m_basis: Basis::from_orthonormal_columns(mb)?,
            mperp_basis: Basis::from_orthonormal_columns(mp)?,
            v,
        };
        let cres = block.constraint_residual();
        if cres > tol.max(1e-8) * scale {
            return Err(ClassifyError::StructureViolation(format!(
                "block constraint sum conj(alpha_j) V_j has norm {cres:e}"
            )));
        }
        blocks.push(block);
    }

    Ok(TwoIsometryStructure {
        d,
        n,
        unitary_basis,
        unitary_tuple,
        blocks,
        change_of_basis: q,
    })
}

fn vstack(blocks: &[&Matrix]) -> Matrix {
    let cols = blocks[0].cols();
    let rows: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut out = Matrix::zeros(rows, cols);
    let mut r0 = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..cols {
                out[(r0 + i, j)] = (*b)[(i, j)];
            }
        }
        r0 += b.rows();
    }
    out
}

/// Rebuild the tuple from its classified structure: the unitary summand
/// plus, per block, alpha_j on both diagonal halves and V_j coupling
/// Mperp into M, all conjugated back by the change of basis.
pub fn reconstruct(structure: &TwoIsometryStructure) -> Result<CommutingTuple, ClassifyError> {
    let n = structure.n;
    let q = &structure.change_of_basis;
    let unit_dev = (&(&q.adjoint() * q) - &Matrix::identity(n)).norm_fro();
    if unit_dev > 1e-9 * (n as f64).sqrt().max(1.0) {
        return Err(ClassifyError::StructureViolation(format!(
            "change of basis deviates from unitary by {unit_dev:e}"
        )));
    }
    for block in &structure.blocks {
        let s: f64 = block.alpha.iter().map(|z| z.norm_sqr()).sum();
        if (s - 1.0).abs() > 1e-10 {
            return Err(ClassifyError::StructureViolation(format!(
                "block alpha has squared norm {s}, expected 1"
            )));
        }
    }
    let mut ops = Vec::with_capacity(structure.d);
    for j in 0..structure.d {
        let mut op = Matrix::zeros(n, n);
        if structure.unitary_basis.dim() > 0 {
            let u = structure.unitary_basis.as_matrix();
            op = &op + &(&(u * structure.unitary_tuple.op(j)) * &u.adjoint());
        }
        for block in &structure.blocks {
            let mb = block.m_basis.as_matrix();
            let mp = block.mperp_basis.as_matrix();
            let pm = mb * &mb.adjoint();
            let pp = mp * &mp.adjoint();
            op = &op + &(&pm + &pp).scale(block.alpha[j]);
            op = &op + &(&(mb * &block.v[j]) * &mp.adjoint());
        }
        ops.push(op);
    }
    Ok(CommutingTuple::from_ops_unchecked(ops))
}

/// (A,2) classification result: the S + N split with the residual evidence
/// for the three structural conclusions.
#[derive(Debug)]
pub struct A2Classification {
    pub s: CommutingTuple,
    pub n: CommutingTuple,
    pub sn: SnDecomposition,
    pub reports: VerificationReport,
}

fn check_psd(a: &Matrix) -> Result<(), ClassifyError> {
    if !a.is_square() {
        return Err(ClassifyError::ANotPositive(format!(
            "not square ({}x{})",
            a.rows(),
            a.cols()
        )));
    }
    let norm = a.norm_fro();
    let herm_dev = (&a.adjoint() - a).norm_fro();
    if herm_dev > PSD_TOL * (1.0 + norm) {
        return Err(ClassifyError::ANotPositive(format!(
            "not Hermitian (deviation {herm_dev:e})"
        )));
    }
    let eigs = spectrum(a)?;
    if let Some(bad) = eigs.iter().find(|e| e.re < -PSD_TOL * norm.max(1.0)) {
        return Err(ClassifyError::ANotPositive(format!(
            "negative eigenvalue {bad}"
        )));
    }
    Ok(())
}

/// Split an (A,2)-isometric tuple as T = S + N with S spherical
/// A-isometric and N (A,2)-nilpotent, verifying the cross conditions
/// sum_l S_l^* A N_l = 0 and A N_j N_l = 0.
pub fn classify_a2(
    t: &CommutingTuple,
    a: &Matrix,
    tol: f64,
) -> Result<A2Classification, ClassifyError> {
    check_psd(a)?;
    let pre = check_a_m_isometric(t, a, 2, tol)?;
    if !pre.passed {
        return Err(ClassifyError::NotA2Isometric {
            residual: pre.residual,
            tol,
        });
    }
    let sn = split_sn(t, default_cluster_tol(t))?;
    let scale = (1.0 + t.max_op_norm()) * (1.0 + a.norm_fro());
    let spherical = check_spherical_a_isometry(&sn.s, a, tol)?;
    let nilpotent = check_a_n_nilpotent(&sn.n, a, 2, tol)?;
    let mut cross = Matrix::zeros(t.dim(), t.dim());
    for l in 0..t.d() {
        cross = &cross + &(&(&sn.s.op(l).adjoint() * a) * sn.n.op(l));
    }
    let cross_check = CheckReport::from_residual(
        cross.norm_fro() / scale,
        tol,
        "||sum_l S_l^* A N_l||_F / scale",
    );
    let mut pairwise: f64 = 0.0;
    for j in 0..t.d() {
        for l in 0..t.d() {
            pairwise = pairwise.max((&(a * sn.n.op(j)) * sn.n.op(l)).norm_fro());
        }
    }
    let pairwise_check = CheckReport::from_residual(
        pairwise / scale,
        tol,
        "max_{j,l} ||A N_j N_l||_F / scale",
    );
    let reports = VerificationReport {
        passed: spherical.passed
            && nilpotent.passed
            && cross_check.passed
            && pairwise_check.passed,
        checks: vec![
            LabeledCheck {
                label: "S is spherical A-isometric".into(),
                check: spherical,
            },
            LabeledCheck {
                label: "N is (A,2)-nilpotent".into(),
                check: nilpotent,
            },
            LabeledCheck {
                label: "sum_l S_l^* A N_l = 0".into(),
                check: cross_check,
            },
            LabeledCheck {
                label: "A N_j N_l = 0 for all j, l".into(),
                check: pairwise_check,
            },
        ],
    };
    Ok(A2Classification {
        s: sn.s.clone(),
        n: sn.n.clone(),
        sn,
        reports,
    })
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
    fn spherical_unitary_has_no_blocks() {
        let t = CommutingTuple::new(vec![
            Matrix::diag(&[c(1.0, 0.0), c(0.0, 0.0)]),
            Matrix::diag(&[c(0.0, 0.0), c(0.0, 1.0)]),
        ])
        .unwrap();
        let s = classify_2_isometric(&t, 1e-9).unwrap();
        assert!(s.blocks.is_empty());
        assert_eq!(s.unitary_basis.dim(), 2);
        let r = reconstruct(&s).unwrap();
        for j in 0..2 {
            assert!((r.op(j) - t.op(j)).norm_fro() < 1e-9);
        }
    }

    #[test]
    fn richter_block_classification() {
        let s = classify_2_isometric(&richter_w(), 1e-9).unwrap();
        assert_eq!(s.unitary_basis.dim(), 0);
        assert_eq!(s.blocks.len(), 1);
        let b = &s.blocks[0];
        assert!((b.alpha[0] - c(1.0, 0.0)).norm() < 1e-8);
        assert!(b.alpha[1].norm() < 1e-8);
        assert_eq!(b.m_basis.dim(), 1);
        assert_eq!(b.mperp_basis.dim(), 1);
        // M = span e1 (kernel of N_2 = [[0,1],[0,0]]).
        let m0 = b.m_basis.vector(0);
        assert!(m0[1].norm() < 1e-8);
        assert!(b.v[0].norm_fro() < 1e-8);
        assert!((b.v[1].norm_fro() - 1.0).abs() < 1e-8);
        let r = reconstruct(&s).unwrap();
        for j in 0..2 {
            assert!((r.op(j) - richter_w().op(j)).norm_fro() < 1e-8);
        }
    }

    #[test]
    fn direct_sum_splits_into_unitary_and_block() {
        // diag joint point (0, i) (spherical unitary) + Richter block.
        let t = CommutingTuple::new(vec![
            Matrix::block_diag(&[&Matrix::diag(&[c(0.0, 0.0)]), &Matrix::identity(2)]),
            Matrix::block_diag(&[
                &Matrix::diag(&[c(0.0, 1.0)]),
                &Matrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]),
            ]),
        ])
        .unwrap();
        let s = classify_2_isometric(&t, 1e-9).unwrap();
        assert_eq!(s.unitary_basis.dim(), 1);
        assert_eq!(s.blocks.len(), 1);
        let r = reconstruct(&s).unwrap();
        for j in 0..2 {
            assert!((r.op(j) - t.op(j)).norm_fro() < 1e-8);
        }
        // Reconstruction is itself 2-isometric.
        let chk = check_a_m_isometric(&r, &Matrix::identity(3), 2, 1e-8).unwrap();
        assert!(chk.passed);
    }

    #[test]
    fn rejects_non_two_isometry() {
        let t = CommutingTuple::new(vec![Matrix::identity(2).scale_re(2.0)]).unwrap();
        assert!(matches!(
            classify_2_isometric(&t, 1e-9),
            Err(ClassifyError::NotTwoIsometric { .. })
        ));
    }

    #[test]
    fn classify_a2_on_richter_block_identity_weight() {
        let a = Matrix::identity(2);
        let r = classify_a2(&richter_w(), &a, 1e-8).unwrap();
        assert!(r.reports.passed);
        assert!((r.s.op(0) - &Matrix::identity(2)).norm_fro() < 1e-8);
        assert!(r.s.op(1).norm_fro() < 1e-8);
        assert!((r.n.op(1) - &Matrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]])).norm_fro() < 1e-8);
    }

    #[test]
    fn classify_a2_zero_weight_vacuous() {
        let a = Matrix::zeros(2, 2);
        // Any commuting tuple is (0,2)-isometric.
        let t = CommutingTuple::new(vec![Matrix::from_real(&[&[2.0, 1.0], &[0.0, 3.0]])]).unwrap();
        let r = classify_a2(&t, &a, 1e-8).unwrap();
        assert!(r.reports.passed);
    }

    #[test]
    fn classify_a2_rejects_non_psd_weight() {
        let a = Matrix::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert!(matches!(
            classify_a2(&richter_w(), &a, 1e-8),
            Err(ClassifyError::ANotPositive(_))
        ));
        let nh = Matrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            classify_a2(&richter_w(), &nh, 1e-8),
            Err(ClassifyError::ANotPositive(_))
        ));
    }

    #[test]
    fn classify_a2_rejects_non_isometry() {
        let t = CommutingTuple::new(vec![Matrix::identity(2).scale_re(2.0)]).unwrap();
        assert!(matches!(
            classify_a2(&t, &Matrix::identity(2), 1e-8),
            Err(ClassifyError::NotA2Isometric { .. })
        ));
    }

    #[test]
    fn reconstruct_rejects_bad_change_of_basis() {
        let t = richter_w();
        let mut s = classify_2_isometric(&t, 1e-9).unwrap();
        s.change_of_basis = s.change_of_basis.scale_re(2.0);
        assert!(matches!(
            reconstruct(&s),
            Err(ClassifyError::StructureViolation(_))
        ));
    }

    #[test]
    fn classification_is_unitarily_stable() {
        // Conjugate the Richter block by a fixed unitary; classification
        // round-trips through reconstruct.
        let th = 0.3f64;
        let q = Matrix::from_rows(&[
            vec![c(th.cos(), 0.0), c(-th.sin(), 0.0)],
            vec![c(th.sin(), 0.0), c(th.cos(), 0.0)],
        ])
        .unwrap();
        let t = richter_w().conjugated(&q);
        let s = classify_2_isometric(&t, 1e-8).unwrap();
        assert_eq!(s.blocks.len(), 1);
        let r = reconstruct(&s).unwrap();
        for j in 0..2 {
            assert!((r.op(j) - t.op(j)).norm_fro() < 1e-7);
        }
    }
}
