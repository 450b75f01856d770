//! Commuting operator tuples and the definitional checkers: (A,m)-isometric,
//! spherical A-isometric, (A,n)-nilpotent, toral, isosymmetric, and the
//! strict isometry order.

use crate::hereditary::{
    self, compositions, isosymmetry_polynomial, m_isometry_polynomial, toral_polynomials,
    MultiIndex, PolyError, PowerCache,
};
use crate::linalg::Matrix;
use thiserror::Error;

/// Commutator tolerance applied at construction.
pub const DEFAULT_COMMUTATION_TOL: f64 = 1e-10;
/// Default relative residual tolerance for checker pass/fail.
pub const DEFAULT_CHECK_TOL: f64 = 1e-9;
/// Largest m probed by isometry_order; binomial growth makes larger orders
/// numerically meaningless at double precision.
pub const MAX_ISOMETRY_ORDER: u32 = 25;

#[derive(Debug, Error)]
pub enum TupleError {
    #[error("a tuple needs at least one operator")]
    Empty,
    #[error("operator {index} is {rows}x{cols}, expected square of size {expected}")]
    BadShape {
        index: usize,
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error("operators {j} and {k} do not commute (residual {residual:e} > tol {tol:e})")]
    NotCommuting {
        j: usize,
        k: usize,
        residual: f64,
        tol: f64,
    },
    #[error("tuple has dimension {got}, expected {expected}")]
    WrongDimension { got: usize, expected: usize },
    #[error("A is {rows}x{cols} but the tuple acts on dimension {expected}")]
    WeightShape {
        rows: usize,
        cols: usize,
        expected: usize,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Ordered list of d pairwise commuting n x n matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutingTuple {
    d: usize,
    n: usize,
    ops: Vec<Matrix>,
}

impl CommutingTuple {
    /// Verify shapes and pairwise commutation at the default tolerance.
    pub fn new(ops: Vec<Matrix>) -> Result<Self, TupleError> {
        Self::with_commutation_tol(ops, DEFAULT_COMMUTATION_TOL)
    }

    /// The relative commutator bound is
    /// ||T_j T_k - T_k T_j||_F <= tol * (1 + ||T_j||_F)(1 + ||T_k||_F).
    pub fn with_commutation_tol(ops: Vec<Matrix>, tol: f64) -> Result<Self, TupleError> {
        if ops.is_empty() {
            return Err(TupleError::Empty);
        }
        let n = ops[0].rows();
        for (index, m) in ops.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(TupleError::BadShape {
                    index,
                    rows: m.rows(),
                    cols: m.cols(),
                    expected: n,
                });
            }
        }
        for j in 0..ops.len() {
            for k in (j + 1)..ops.len() {
                let comm = &(&ops[j] * &ops[k]) - &(&ops[k] * &ops[j]);
                let bound = tol * (1.0 + ops[j].norm_fro()) * (1.0 + ops[k].norm_fro());
                let residual = comm.norm_fro();
                if residual > bound {
                    return Err(TupleError::NotCommuting {
                        j,
                        k,
                        residual,
                        tol,
                    });
                }
            }
        }
        Ok(CommutingTuple {
            d: ops.len(),
            n,
            ops,
        })
    }

    pub fn identity(d: usize, n: usize) -> Self {
        CommutingTuple {
            d,
            n,
            ops: vec![Matrix::identity(n); d],
        }
    }

    pub fn zero(d: usize, n: usize) -> Self {
        CommutingTuple {
            d,
            n,
            ops: vec![Matrix::zeros(n, n); d],
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Ambient space dimension n.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn op(&self, j: usize) -> &Matrix {
        &self.ops[j]
    }

    pub fn ops(&self) -> &[Matrix] {
        &self.ops
    }

    pub fn max_op_norm(&self) -> f64 {
        self.ops.iter().map(|m| m.norm_fro()).fold(0.0, f64::max)
    }

    /// T^alpha = T_1^{a_1} ... T_d^{a_d}.
    pub fn power(&self, alpha: &MultiIndex) -> Result<Matrix, TupleError> {
        Ok(hereditary::monomial_power(&self.ops, alpha)?)
    }

    /// Q^* T Q for a unitary Q; skips the commutation re-check (unitary
    /// conjugation preserves commutators exactly up to rounding).
    pub fn conjugated(&self, q: &Matrix) -> CommutingTuple {
        let qh = q.adjoint();
        CommutingTuple {
            d: self.d,
            n: q.cols(),
            ops: self.ops.iter().map(|t| &(&qh * t) * q).collect(),
        }
    }

    /// Entrywise sum with another tuple (no commutation re-check).
    pub fn add(&self, other: &CommutingTuple) -> CommutingTuple {
        assert_eq!((self.d, self.n), (other.d, other.n));
        CommutingTuple {
            d: self.d,
            n: self.n,
            ops: self
                .ops
                .iter()
                .zip(&other.ops)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CommutingTuple) -> CommutingTuple {
        assert_eq!((self.d, self.n), (other.d, other.n));
        CommutingTuple {
            d: self.d,
            n: self.n,
            ops: self
                .ops
                .iter()
                .zip(&other.ops)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Construct without re-verifying commutation; for internal use where
    /// commutation holds by construction.
    pub(crate) fn from_ops_unchecked(ops: Vec<Matrix>) -> CommutingTuple {
        let n = ops[0].rows();
        CommutingTuple {
            d: ops.len(),
            n,
            ops,
        }
    }
}

/// Outcome of a single residual check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub passed: bool,
    pub residual: f64,
    pub tolerance_used: f64,
    pub detail: String,
}

impl CheckReport {
    pub fn from_residual(residual: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        CheckReport {
            passed: residual <= tolerance,
            residual,
            tolerance_used: tolerance,
            detail: detail.into(),
        }
    }
}

fn check_weight(t: &CommutingTuple, a: &Matrix) -> Result<(), TupleError> {
    if a.rows() != t.dim() || a.cols() != t.dim() {
        return Err(TupleError::WeightShape {
            rows: a.rows(),
            cols: a.cols(),
            expected: t.dim(),
        });
    }
    Ok(())
}

/// Unnormalized residual ||p_m(A; T, T)||_F.
pub fn m_isometry_defect(t: &CommutingTuple, a: &Matrix, m: u32) -> Result<f64, TupleError> {
    check_weight(t, a)?;
    let p = m_isometry_polynomial(t.d(), m);
    Ok(hereditary::evaluate(&p, a, t.ops(), t.ops())?.norm_fro())
}

/// (A,m)-isometry check: residual = ||p_m(A; T, T)||_F / (1 + ||A||_F).
/// With A = I this is the plain m-isometry check.
pub fn check_a_m_isometric(
    t: &CommutingTuple,
    a: &Matrix,
    m: u32,
    tol: f64,
) -> Result<CheckReport, TupleError> {
    let defect = m_isometry_defect(t, a, m)?;
    let residual = defect / (1.0 + a.norm_fro());
    Ok(CheckReport::from_residual(
        residual,
        tol,
        format!("(A,{m})-isometry defect ||p_{m}(A;T,T)||_F = {defect:e}"),
    ))
}

/// Spherical A-isometry: residual = ||sum_j T_j* A T_j - A||_F / (1 + ||A||_F).
pub fn check_spherical_a_isometry(
    t: &CommutingTuple,
    a: &Matrix,
    tol: f64,
) -> Result<CheckReport, TupleError> {
    check_weight(t, a)?;
    let mut acc = Matrix::zeros(t.dim(), t.dim());
    for op in t.ops() {
        acc = &acc + &(&(&op.adjoint() * a) * op);
    }
    let defect = (&acc - a).norm_fro();
    let residual = defect / (1.0 + a.norm_fro());
    Ok(CheckReport::from_residual(
        residual,
        tol,
        format!("spherical A-isometry defect ||sum T_j* A T_j - A||_F = {defect:e}"),
    ))
}

/// (A,n)-nilpotency: residual = max over |alpha| = n of ||A N^alpha||_F,
/// normalized by (1 + ||A||_F). With A = I this is plain nilpotency of
/// order n.
pub fn check_a_n_nilpotent(
    t: &CommutingTuple,
    a: &Matrix,
    n: u32,
    tol: f64,
) -> Result<CheckReport, TupleError> {
    check_weight(t, a)?;
    let mut cache = PowerCache::new(t.ops());
    let mut worst: f64 = 0.0;
    for alpha in compositions(t.d(), n) {
        let p = cache.power(&alpha).map_err(TupleError::Poly)?;
        worst = worst.max((a * p).norm_fro());
    }
    let residual = worst / (1.0 + a.norm_fro());
    Ok(CheckReport::from_residual(
        residual,
        tol,
        format!("(A,{n})-nilpotency defect max ||A N^alpha||_F = {worst:e}"),
    ))
}

/// Least m <= m_max (capped at MAX_ISOMETRY_ORDER) at which the
/// (A,m)-isometry check passes, or None.
pub fn isometry_order(
    t: &CommutingTuple,
    a: &Matrix,
    m_max: u32,
    tol: f64,
) -> Result<Option<u32>, TupleError> {
    let cap = m_max.min(MAX_ISOMETRY_ORDER);
    for m in 1..=cap {
        if check_a_m_isometric(t, a, m, tol)?.passed {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Toral (A,m)-isometry: the residual is the worst evaluation residual over
/// the full toral polynomial family for the order m.
pub fn check_toral(
    t: &CommutingTuple,
    a: &Matrix,
    m: u32,
    tol: f64,
) -> Result<CheckReport, TupleError> {
    check_weight(t, a)?;
    let mut worst: f64 = 0.0;
    for p in toral_polynomials(t.d(), m) {
        let r = hereditary::evaluate(&p, a, t.ops(), t.ops())?.norm_fro();
        worst = worst.max(r);
    }
    let residual = worst / (1.0 + a.norm_fro());
    Ok(CheckReport::from_residual(
        residual,
        tol,
        format!("toral order-{m} defect (worst over family) = {worst:e}"),
    ))
}

/// (m,n)-isosymmetry of a single operator (d = 1), with A = I.
pub fn check_isosymmetric(
    t: &CommutingTuple,
    m: u32,
    n: u32,
    tol: f64,
) -> Result<CheckReport, TupleError> {
    if t.d() != 1 {
        return Err(TupleError::WrongDimension {
            got: t.d(),
            expected: 1,
        });
    }
    let p = isosymmetry_polynomial(m, n);
    let eye = Matrix::identity(t.dim());
    let defect = hereditary::evaluate(&p, &eye, t.ops(), t.ops())?.norm_fro();
    let residual = defect / (1.0 + eye.norm_fro());
    Ok(CheckReport::from_residual(
        residual,
        tol,
        format!("({m},{n})-isosymmetry defect = {defect:e}"),
    ))
}
