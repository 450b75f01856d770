//! Two-group polynomial algebra over C[x, y] in d commuting variables per
//! group, and the hereditary evaluation f(A; X, Y) = sum c_{a,b} (X^a)* A Y^b
//! that places all adjoints on the left.

use crate::linalg::{LinalgError, Matrix};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Coefficients with modulus at or below this are dropped.
pub const COEFF_PRUNE_TOL: f64 = 1e-14;
/// Guard for factorial computations.
pub const MAX_FACTORIAL_WEIGHT: u32 = 20;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("polynomial dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("multi-index has length {0} but polynomial dimension is {1}")]
    IndexLength(usize, usize),
    #[error("multi-index weight {0} exceeds the factorial guard {MAX_FACTORIAL_WEIGHT}")]
    WeightOverflow(u32),
    #[error("polynomial is not {0}-only")]
    NotSingleGroup(&'static str),
    #[error("parse error at term {term}: {msg}")]
    Parse { term: usize, msg: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("operator tuples must have matching dimensions: {0}")]
    OperatorDimension(String),
}

/// Multi-index of non-negative integer exponents, one per variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Self {
        MultiIndex(components)
    }

    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    pub fn unit(d: usize, j: usize) -> Self {
        let mut v = vec![0; d];
        v[j] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// alpha! = prod alpha_j!, guarded against overflow.
    pub fn factorial(&self) -> Result<f64, PolyError> {
        let w = self.weight();
        if w > MAX_FACTORIAL_WEIGHT {
            return Err(PolyError::WeightOverflow(w));
        }
        let mut f = 1.0f64;
        for &a in &self.0 {
            for k in 2..=a {
                f *= k as f64;
            }
        }
        Ok(f)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// First coordinate with a positive exponent, if any.
    pub fn first_positive(&self) -> Option<usize> {
        self.0.iter().position(|&a| a > 0)
    }

    pub fn decrement(&self, j: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[j] -= 1;
        MultiIndex(v)
    }
}

/// All multi-indices of length d with |alpha| = weight, lexicographic.
pub fn compositions(d: usize, weight: u32) -> Vec<MultiIndex> {
    fn rec(d: usize, weight: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if d == 1 {
            prefix.push(weight);
            out.push(MultiIndex::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in 0..=weight {
            prefix.push(a);
            rec(d - 1, weight - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    rec(d, weight, &mut Vec::new(), &mut out);
    out
}

/// Finitely supported polynomial in the two variable groups x, y, stored as
/// a map from exponent pairs (alpha, beta) to complex coefficients in
/// canonical lexicographic order.
#[derive(Clone, PartialEq, Debug)]
pub struct HereditaryPolynomial {
    dim: usize,
    terms: BTreeMap<(MultiIndex, MultiIndex), Complex64>,
}

impl HereditaryPolynomial {
    pub fn zero(dim: usize) -> Self {
        HereditaryPolynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(MultiIndex::zero(dim), MultiIndex::zero(dim), c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(dim: usize, alpha: MultiIndex, beta: MultiIndex, c: Complex64) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(alpha, beta, c);
        p
    }

    /// The variable x_j.
    pub fn var_x(dim: usize, j: usize) -> Self {
        Self::monomial(
            dim,
            MultiIndex::unit(dim, j),
            MultiIndex::zero(dim),
            Complex64::new(1.0, 0.0),
        )
    }

    /// The variable y_j.
    pub fn var_y(dim: usize, j: usize) -> Self {
        Self::monomial(
            dim,
            MultiIndex::zero(dim),
            MultiIndex::unit(dim, j),
            Complex64::new(1.0, 0.0),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(MultiIndex, MultiIndex), &Complex64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Complex64 {
        self.terms
            .get(&(alpha.clone(), beta.clone()))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    fn add_term(&mut self, alpha: MultiIndex, beta: MultiIndex, c: Complex64) {
        debug_assert_eq!(alpha.len(), self.dim);
        debug_assert_eq!(beta.len(), self.dim);
        let key = (alpha, beta);
        let entry = self.terms.entry(key.clone()).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() <= COEFF_PRUNE_TOL {
            self.terms.remove(&key);
        }
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() > COEFF_PRUNE_TOL);
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.dim != other.dim {
            return Err(PolyError::DimensionMismatch(self.dim, other.dim));
        }
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            let e = out
                .terms
                .entry((a.clone(), b.clone()))
                .or_insert(Complex64::new(0.0, 0.0));
            *e += c;
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = HereditaryPolynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        };
        out.prune();
        out
    }

    /// Coefficient-wise convolution product.
    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        if self.dim != other.dim {
            return Err(PolyError::DimensionMismatch(self.dim, other.dim));
        }
        let mut out = HereditaryPolynomial::zero(self.dim);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                let key = (a1.add(a2), b1.add(b2));
                let e = out.terms.entry(key).or_insert(Complex64::new(0.0, 0.0));
                *e += c1 * c2;
            }
        }
        out.prune();
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = HereditaryPolynomial::one(self.dim);
        for _ in 0..k {
            acc = acc.mul(self).expect("same dimension");
        }
        acc
    }

    pub fn is_x_only(&self) -> bool {
        self.terms.keys().all(|(_, b)| b.is_zero())
    }

    pub fn is_y_only(&self) -> bool {
        self.terms.keys().all(|(a, _)| a.is_zero())
    }

    /// For a y-only polynomial f(y) = sum c_a y^a, the polynomial
    /// f-bar(x) = sum conj(c_a) x^a.
    pub fn conjugate_to_x(&self) -> Result<Self, PolyError> {
        if !self.is_y_only() {
            return Err(PolyError::NotSingleGroup("y"));
        }
        let mut out = HereditaryPolynomial::zero(self.dim);
        for ((_, b), c) in &self.terms {
            out.add_term(b.clone(), MultiIndex::zero(self.dim), c.conj());
        }
        Ok(out)
    }

    /// Scalar evaluation f(x, y) at points x, y in C^d.
    pub fn eval_scalar(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for ((a, b), c) in &self.terms {
            let mut t = *c;
            for (j, &e) in a.components().iter().enumerate() {
                t *= x[j].powu(e);
            }
            for (j, &e) in b.components().iter().enumerate() {
                t *= y[j].powu(e);
            }
            acc += t;
        }
        acc
    }

    /// Largest |alpha| + |beta| over the support.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(a, b)| a.weight() + b.weight())
            .max()
            .unwrap_or(0)
    }
}

/// p_m(x, y) = (sum_j x_j y_j - 1)^m; hereditary roots of p_m are exactly
/// the (A,m)-isometric tuples.
pub fn m_isometry_polynomial(d: usize, m: u32) -> HereditaryPolynomial {
    assert!(d >= 1 && m >= 1);
    let mut p1 = HereditaryPolynomial::constant(d, Complex64::new(-1.0, 0.0));
    for j in 0..d {
        p1 = p1
            .add(&HereditaryPolynomial::monomial(
                d,
                MultiIndex::unit(d, j),
                MultiIndex::unit(d, j),
                Complex64::new(1.0, 0.0),
            ))
            .unwrap();
    }
    p1.pow(m)
}

/// The toral family: one polynomial (1 - x_1 y_1)^{m_1} ... (1 - x_d y_d)^{m_d}
/// per composition (m_1, ..., m_d) of m, ordered lexicographically by the
/// composition.
pub fn toral_polynomials(d: usize, m: u32) -> Vec<HereditaryPolynomial> {
    assert!(d >= 1 && m >= 1);
    let factors: Vec<HereditaryPolynomial> = (0..d)
        .map(|j| {
            HereditaryPolynomial::one(d)
                .sub(&HereditaryPolynomial::monomial(
                    d,
                    MultiIndex::unit(d, j),
                    MultiIndex::unit(d, j),
                    Complex64::new(1.0, 0.0),
                ))
                .unwrap()
        })
        .collect();
    compositions(d, m)
        .into_iter()
        .map(|mi| {
            let mut p = HereditaryPolynomial::one(d);
            for (j, &mj) in mi.components().iter().enumerate() {
                p = p.mul(&factors[j].pow(mj)).unwrap();
            }
            p
        })
        .collect()
}

/// Single-variable (m, n)-isosymmetry polynomial (xy - 1)^m (x - y)^n.
pub fn isosymmetry_polynomial(m: u32, n: u32) -> HereditaryPolynomial {
    assert!(m + n >= 1);
    let xy1 = HereditaryPolynomial::monomial(
        1,
        MultiIndex::new(vec![1]),
        MultiIndex::new(vec![1]),
        Complex64::new(1.0, 0.0),
    )
    .sub(&HereditaryPolynomial::one(1))
    .unwrap();
    let xmy = HereditaryPolynomial::var_x(1, 0)
        .sub(&HereditaryPolynomial::var_y(1, 0))
        .unwrap();
    xy1.pow(m).mul(&xmy.pow(n)).unwrap()
}

/// Memoized monomial powers X^alpha = X_1^{a_1} ... X_d^{a_d} of a
/// commuting family of matrices.
pub struct PowerCache<'a> {
    ops: &'a [Matrix],
    n: usize,
    cache: BTreeMap<MultiIndex, Matrix>,
}

impl<'a> PowerCache<'a> {
    pub fn new(ops: &'a [Matrix]) -> Self {
        let n = ops.first().map(|m| m.rows()).unwrap_or(0);
        PowerCache {
            ops,
            n,
            cache: BTreeMap::new(),
        }
    }

    pub fn power(&mut self, alpha: &MultiIndex) -> Result<&Matrix, PolyError> {
        if alpha.len() != self.ops.len() {
            return Err(PolyError::IndexLength(alpha.len(), self.ops.len()));
        }
        if !self.cache.contains_key(alpha) {
            let value = match alpha.first_positive() {
                None => Matrix::identity(self.n),
                Some(j) => {
                    let pred = alpha.decrement(j);
                    let prev = self.power(&pred)?.clone();
                    &prev * &self.ops[j]
                }
            };
            self.cache.insert(alpha.clone(), value);
        }
        Ok(self.cache.get(alpha).unwrap())
    }
}

/// Monomial power without a shared cache.
pub fn monomial_power(ops: &[Matrix], alpha: &MultiIndex) -> Result<Matrix, PolyError> {
    let mut cache = PowerCache::new(ops);
    Ok(cache.power(alpha)?.clone())
}

/// Hereditary evaluation f(A; X, Y) = sum c_{a,b} (X^a)* A Y^b.
///
/// `x_ops` and `y_ops` must each be commuting families (the CommutingTuple
/// type enforces this for callers going through tuples); the two families
/// need not commute with each other.
pub fn evaluate(
    f: &HereditaryPolynomial,
    a: &Matrix,
    x_ops: &[Matrix],
    y_ops: &[Matrix],
) -> Result<Matrix, PolyError> {
    if x_ops.len() != f.dim() || y_ops.len() != f.dim() {
        return Err(PolyError::OperatorDimension(format!(
            "polynomial dimension {} but tuples have {} and {} operators",
            f.dim(),
            x_ops.len(),
            y_ops.len()
        )));
    }
    let n = a.rows();
    if !a.is_square() {
        return Err(PolyError::OperatorDimension(format!(
            "A must be square, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    for (j, m) in x_ops.iter().chain(y_ops.iter()).enumerate() {
        if m.rows() != n || m.cols() != n {
            return Err(PolyError::OperatorDimension(format!(
                "operator {j} is {}x{} but A is {n}x{n}",
                m.rows(),
                m.cols()
            )));
        }
    }
    let mut xc = PowerCache::new(x_ops);
    let mut yc = PowerCache::new(y_ops);
    let mut acc = Matrix::zeros(n, n);
    for ((alpha, beta), c) in f.terms() {
        let xa = xc.power(alpha)?.clone();
        let yb = yc.power(beta)?;
        let term = &(&xa.adjoint() * a) * yb;
        acc = &acc + &term.scale(*c);
    }
    Ok(acc)
}

fn fmt_complex(c: Complex64) -> String {
    if c.im >= 0.0 || c.im.is_nan() {
        format!("({}+{}i)", c.re, c.im)
    } else {
        format!("({}-{}i)", c.re, -c.im)
    }
}

impl fmt::Display for HereditaryPolynomial {
    /// Canonical text form: terms `(a+bi) x^[alpha] y^[beta]` in
    /// lexicographic (alpha, beta) order, joined by " + ". Round-trips
    /// exactly through FromStr.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| {
                let ac: Vec<String> = a.components().iter().map(|x| x.to_string()).collect();
                let bc: Vec<String> = b.components().iter().map(|x| x.to_string()).collect();
                format!(
                    "{} x^[{}] y^[{}]",
                    fmt_complex(*c),
                    ac.join(","),
                    bc.join(",")
                )
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

fn parse_complex(s: &str, term: usize) -> Result<Complex64, PolyError> {
    let err = |msg: String| PolyError::Parse { term, msg };
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix("i)"))
        .ok_or_else(|| err(format!("expected (re+imi), got {s:?}")))?;
    // Split re and im at the last '+'/'-' that is not an exponent sign and
    // not the leading sign.
    let bytes = inner.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        let c = bytes[k] as char;
        if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
            split = Some(k);
            break;
        }
    }
    let k = split.ok_or_else(|| err(format!("no imaginary part in {s:?}")))?;
    let re: f64 = inner[..k]
        .parse()
        .map_err(|e| err(format!("bad real part: {e}")))?;
    let im_str = &inner[k..];
    let im: f64 = if let Some(rest) = im_str.strip_prefix('+') {
        rest.parse().map_err(|e| err(format!("bad imag part: {e}")))?
    } else {
        im_str.parse().map_err(|e| err(format!("bad imag part: {e}")))?
    };
    Ok(Complex64::new(re, im))
}

fn parse_index(s: &str, term: usize) -> Result<MultiIndex, PolyError> {
    let err = |msg: String| PolyError::Parse { term, msg };
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| err(format!("expected [..], got {s:?}")))?;
    let comps: Result<Vec<u32>, _> = inner.split(',').map(|t| t.trim().parse()).collect();
    Ok(MultiIndex::new(comps.map_err(|e| {
        err(format!("bad exponent: {e}"))
    })?))
}

impl FromStr for HereditaryPolynomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, PolyError> {
        let s = s.trim();
        if s == "0" {
            // Dimension of the zero polynomial is not recoverable from text;
            // callers that need it should avoid serializing bare zero.
            return Ok(HereditaryPolynomial::zero(0));
        }
        let mut poly: Option<HereditaryPolynomial> = None;
        for (ti, termstr) in s.split(" + ").enumerate() {
            let err = |msg: String| PolyError::Parse { term: ti, msg };
            let parts: Vec<&str> = termstr.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(err(format!("expected 3 fields, got {}", parts.len())));
            }
            let c = parse_complex(parts[0], ti)?;
            let alpha = parse_index(
                parts[1]
                    .strip_prefix("x^")
                    .ok_or_else(|| err("missing x^ prefix".into()))?,
                ti,
            )?;
            let beta = parse_index(
                parts[2]
                    .strip_prefix("y^")
                    .ok_or_else(|| err("missing y^ prefix".into()))?,
                ti,
            )?;
            if alpha.len() != beta.len() {
                return Err(err("alpha and beta lengths differ".into()));
            }
            let d = alpha.len();
            let p = poly.get_or_insert_with(|| HereditaryPolynomial::zero(d));
            if p.dim() != d {
                return Err(err("inconsistent dimensions across terms".into()));
            }
            p.add_term(alpha, beta, c);
        }
        Ok(poly.unwrap_or_else(|| HereditaryPolynomial::zero(0)))
    }
}
