//! Property suites: the multiplicative identity of the calculus, the ideal
//! and positivity properties, linearity, the y-only Horner oracle, and
//! invariants of the linear-algebra layer.

use herop::gen::haar_unitary;
use herop::hereditary::{self, HereditaryPolynomial, MultiIndex};
use herop::linalg::{
    cluster_points, coordinates_in_basis, null_space, spectrum, Matrix,
};
use herop::tuples::CommutingTuple;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn complex_entry() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| c(re, im))
}

fn matrix(n: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(complex_entry(), n * n).prop_map(move |entries| {
        Matrix::from_fn(n, n, |i, j| entries[i * n + j])
    })
}

/// Commuting d-tuple: low-degree polynomials in one shared base matrix.
fn commuting_tuple(d: usize, n: usize) -> impl Strategy<Value = CommutingTuple> {
    (
        matrix(n),
        proptest::collection::vec((complex_entry(), complex_entry(), complex_entry()), d),
    )
        .prop_map(move |(base, coeffs)| {
            let b2 = &base * &base;
            let ops: Vec<Matrix> = coeffs
                .iter()
                .map(|&(c0, c1, c2)| {
                    &(&Matrix::identity(n).scale(c0) + &base.scale(c1)) + &b2.scale(c2)
                })
                .collect();
            CommutingTuple::with_commutation_tol(ops, 1e-6)
                .expect("polynomials in one matrix commute")
        })
}

/// Sparse polynomial in x and y with small exponents.
fn hereditary_poly(d: usize, max_terms: usize) -> impl Strategy<Value = HereditaryPolynomial> {
    proptest::collection::vec(
        (
            proptest::collection::vec(0u32..3, d),
            proptest::collection::vec(0u32..3, d),
            complex_entry(),
        ),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        let mut f = HereditaryPolynomial::zero(d);
        for (alpha, beta, coeff) in terms {
            f = f
                .add(&HereditaryPolynomial::monomial(
                    d,
                    MultiIndex::new(alpha),
                    MultiIndex::new(beta),
                    coeff,
                ))
                .unwrap();
        }
        f
    })
}

/// x-only polynomial.
fn x_only_poly(d: usize) -> impl Strategy<Value = HereditaryPolynomial> {
    proptest::collection::vec(
        (proptest::collection::vec(0u32..3, d), complex_entry()),
        1..=3,
    )
    .prop_map(move |terms| {
        let mut f = HereditaryPolynomial::zero(d);
        for (alpha, coeff) in terms {
            f = f
                .add(&HereditaryPolynomial::monomial(
                    d,
                    MultiIndex::new(alpha),
                    MultiIndex::zero(d),
                    coeff,
                ))
                .unwrap();
        }
        f
    })
}

/// y-only polynomial.
fn y_only_poly(d: usize) -> impl Strategy<Value = HereditaryPolynomial> {
    proptest::collection::vec(
        (proptest::collection::vec(0u32..3, d), complex_entry()),
        1..=3,
    )
    .prop_map(move |terms| {
        let mut f = HereditaryPolynomial::zero(d);
        for (beta, coeff) in terms {
            f = f
                .add(&HereditaryPolynomial::monomial(
                    d,
                    MultiIndex::zero(d),
                    MultiIndex::new(beta),
                    coeff,
                ))
                .unwrap();
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Multiplicative identity: (g f h)(A;X,Y) = g(X*) f(A;X,Y) h(Y)
    /// for g depending only on x and h only on y.
    #[test]
    fn multiplicative_property(
        g in x_only_poly(2),
        f in hereditary_poly(2, 4),
        h in y_only_poly(2),
        a in matrix(4),
        x in commuting_tuple(2, 4),
        y in commuting_tuple(2, 4),
    ) {
        let gfh = g.mul(&f).unwrap().mul(&h).unwrap();
        let lhs = hereditary::evaluate(&gfh, &a, x.ops(), y.ops()).unwrap();
        let gx = hereditary::evaluate(&g, &Matrix::identity(4), x.ops(), x.ops()).unwrap();
        let fv = hereditary::evaluate(&f, &a, x.ops(), y.ops()).unwrap();
        let hy = hereditary::evaluate(&h, &Matrix::identity(4), y.ops(), y.ops()).unwrap();
        let rhs = &(&gx * &fv) * &hy;
        let scale = 1.0
            + lhs.norm_fro().max(rhs.norm_fro())
            + gx.norm_fro() * fv.norm_fro() * hy.norm_fro();
        prop_assert!((&lhs - &rhs).norm_fro() <= 1e-9 * scale);
    }

    /// Ideal property: multiplying an annihilated polynomial by a monomial
    /// x^alpha y^beta keeps the evaluation bounded by
    /// ||(X^alpha)*|| ||f(A;X,Y)|| ||Y^beta|| plus rounding.
    #[test]
    fn ideal_property(
        f in hereditary_poly(2, 4),
        alpha in proptest::collection::vec(0u32..3, 2),
        beta in proptest::collection::vec(0u32..3, 2),
        a in matrix(3),
        x in commuting_tuple(2, 3),
        y in commuting_tuple(2, 3),
    ) {
        let fv = hereditary::evaluate(&f, &a, x.ops(), y.ops()).unwrap();
        let eps = fv.norm_fro();
        let g = HereditaryPolynomial::monomial(
            2,
            MultiIndex::new(alpha.clone()),
            MultiIndex::new(beta.clone()),
            c(1.0, 0.0),
        );
        let gf = g.mul(&f).unwrap();
        let gfv = hereditary::evaluate(&gf, &a, x.ops(), y.ops()).unwrap();
        let xa = x.power(&MultiIndex::new(alpha)).unwrap();
        let yb = y.power(&MultiIndex::new(beta)).unwrap();
        let scale = 1.0 + a.norm_fro() * xa.norm_fro() * yb.norm_fro();
        // ||(X^alpha)* f(A;X,Y) Y^beta|| <= ||X^alpha|| eps ||Y^beta||.
        prop_assert!(gfv.norm_fro() <= xa.norm_fro() * eps * yb.norm_fro() + 1e-9 * scale);
    }

    /// Linearity of evaluation.
    #[test]
    fn evaluation_is_linear(
        f in hereditary_poly(1, 4),
        g in hereditary_poly(1, 4),
        coeff in complex_entry(),
        a in matrix(3),
        x in commuting_tuple(1, 3),
        y in commuting_tuple(1, 3),
    ) {
        let combo = f.scale(coeff).add(&g).unwrap();
        let lhs = hereditary::evaluate(&combo, &a, x.ops(), y.ops()).unwrap();
        let fv = hereditary::evaluate(&f, &a, x.ops(), y.ops()).unwrap();
        let gv = hereditary::evaluate(&g, &a, x.ops(), y.ops()).unwrap();
        let rhs = &fv.scale(coeff) + &gv;
        let scale = 1.0 + fv.norm_fro() + gv.norm_fro();
        prop_assert!((&lhs - &rhs).norm_fro() <= 1e-11 * scale);
    }

    /// y-only evaluation with A = I agrees with direct Horner-style matrix
    /// polynomial evaluation.
    #[test]
    fn y_only_matches_horner(
        coeffs in proptest::collection::vec(complex_entry(), 1..6),
        x in commuting_tuple(1, 4),
    ) {
        let d1 = 1usize;
        let mut f = HereditaryPolynomial::zero(d1);
        for (k, &ck) in coeffs.iter().enumerate() {
            f = f
                .add(&HereditaryPolynomial::monomial(
                    d1,
                    MultiIndex::zero(d1),
                    MultiIndex::new(vec![k as u32]),
                    ck,
                ))
                .unwrap();
        }
        let via_calculus =
            hereditary::evaluate(&f, &Matrix::identity(4), x.ops(), x.ops()).unwrap();
        // Horner: (((c_k T + c_{k-1}) T + ...) + c_0 I).
        let t = x.op(0);
        let mut horner = Matrix::zeros(4, 4);
        for &ck in coeffs.iter().rev() {
            horner = &(&horner * t) + &Matrix::identity(4).scale(ck);
        }
        let scale = 1.0 + horner.norm_fro();
        prop_assert!((&via_calculus - &horner).norm_fro() <= 1e-10 * scale);
    }

    /// Text round-trip of polynomials is exact.
    #[test]
    fn polynomial_text_round_trip(f in hereditary_poly(2, 5)) {
        let text = f.to_string();
        let parsed: HereditaryPolynomial = text.parse().unwrap();
        prop_assert_eq!(parsed, f);
    }

    /// Clustering is invariant under permutation of the input points.
    #[test]
    fn clustering_permutation_invariant(
        points in proptest::collection::vec(
            proptest::collection::vec(complex_entry(), 2), 1..8),
        rot in 0usize..8,
    ) {
        let mut permuted = points.clone();
        let len = permuted.len().max(1);
        permuted.rotate_left(rot % len);
        let a = cluster_points(&points, 0.3);
        let b = cluster_points(&permuted, 0.3);
        prop_assert_eq!(a.len(), b.len());
        for (ca, cb) in a.iter().zip(&b) {
            prop_assert_eq!(ca.members.len(), cb.members.len());
            for (ma, mb) in ca.mean.iter().zip(&cb.mean) {
                prop_assert!((ma - mb).norm() < 1e-12);
            }
        }
    }

    /// Null-space vectors are genuine kernel vectors and orthonormal.
    #[test]
    fn null_space_invariants(m in matrix(5), zero_cols in 1usize..3) {
        // Force rank deficiency by zeroing columns.
        let mut m = m;
        for j in 0..zero_cols {
            m.set_column(j, &[c(0.0, 0.0); 5]);
        }
        let b = null_space(&m, 1e-10);
        prop_assert!(b.dim() >= zero_cols);
        let bm = b.as_matrix();
        let residual = (&m * bm).norm_fro();
        prop_assert!(residual <= 1e-9 * m.norm_fro().max(1.0) * (b.dim() as f64).sqrt());
        let gram_dev = (&(&bm.adjoint() * bm) - &Matrix::identity(b.dim())).norm_fro();
        prop_assert!(gram_dev <= 1e-10);
    }

    /// Coordinate solves invert the basis action.
    #[test]
    fn coordinates_solve_round_trip(target in matrix(4), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Well-conditioned basis: unitary plus a small perturbation.
        let q = haar_unitary(4, &mut rng);
        let b = &q + &Matrix::identity(4).scale_re(0.1);
        if let Ok(x) = coordinates_in_basis(&b, &target) {
            let err = (&(&b * &x) - &target).norm_fro();
            prop_assert!(err <= 1e-8 * (1.0 + target.norm_fro()));
        }
    }

    /// Spectrum is invariant under unitary conjugation.
    #[test]
    fn spectrum_unitary_invariance(m in matrix(4), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = haar_unitary(4, &mut rng);
        let conj = &(&q * &m) * &q.adjoint();
        let mut e1 = spectrum(&m).unwrap();
        let mut e2 = spectrum(&conj).unwrap();
        let key = |z: &Complex64| (z.re, z.im);
        e1.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        e2.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        let scale = 1.0 + m.norm_fro();
        // Greedy matching of sorted lists is adequate at this looseness.
        for (a, b) in e1.iter().zip(&e2) {
            prop_assert!((a - b).norm() <= 1e-5 * scale);
        }
    }
}

/// Positivity property on a constructed family: A = P*P supported on a
/// subset of joint eigenvectors of a normal tuple Y, and y-only polynomials
/// f_j vanishing at the supported joint eigenvalues. The hypothesis
/// sum_j conj(f_j) f_j in J(A;Y,Y) then forces A f_j(Y) = 0.
#[test]
fn positivity_property_suite() {
    let d = 2usize;
    let n = 4usize;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = haar_unitary(n, &mut rng);
        let qh = q.adjoint();
        // Joint eigenvalues with well-separated first coordinates.
        let mus: Vec<Vec<Complex64>> = (0..n)
            .map(|i| {
                vec![
                    c(1.0 + i as f64, 0.3 * i as f64),
                    c(-(i as f64), 1.0 - 0.2 * i as f64),
                ]
            })
            .collect();
        let y_ops: Vec<Matrix> = (0..d)
            .map(|l| {
                let diag = Matrix::diag(&mus.iter().map(|m| m[l]).collect::<Vec<_>>());
                &(&q * &diag) * &qh
            })
            .collect();
        // Support A on the first two eigenvectors.
        let masked = [0usize, 1];
        let g = Matrix::from_fn(n, n, |i, j| {
            if masked.contains(&j) {
                c(
                    ((seed as usize * 31 + i * 7 + j) % 5) as f64 - 2.0,
                    ((i * 3 + j) % 4) as f64 - 1.5,
                )
            } else {
                c(0.0, 0.0)
            }
        });
        let p = &g * &qh;
        let a = &p.adjoint() * &p;
        // f_j = (random small y-polynomial) * prod_{i in masked} (y_1 - mu_1^(i)).
        let mut vanishing = HereditaryPolynomial::one(d);
        for &i in &masked {
            let factor = HereditaryPolynomial::var_y(d, 0)
                .sub(&HereditaryPolynomial::constant(d, mus[i][0]))
                .unwrap();
            vanishing = vanishing.mul(&factor).unwrap();
        }
        let fs: Vec<HereditaryPolynomial> = (0..2)
            .map(|j| {
                let g_j = HereditaryPolynomial::constant(d, c(1.0, 0.5 * j as f64))
                    .add(&HereditaryPolynomial::var_y(d, 1).scale(c(0.3, -0.1 * j as f64)))
                    .unwrap();
                g_j.mul(&vanishing).unwrap()
            })
            .collect();
        // Hypothesis: sum_j conj(f_j) f_j evaluates to zero at (A;Y,Y).
        let mut sum = HereditaryPolynomial::zero(d);
        for f in &fs {
            sum = sum
                .add(&f.conjugate_to_x().unwrap().mul(f).unwrap())
                .unwrap();
        }
        let hyp = hereditary::evaluate(&sum, &a, &y_ops, &y_ops)
            .unwrap()
            .norm_fro();
        let scale = (1.0 + a.norm_fro())
            * (1.0 + y_ops.iter().map(|o| o.norm_fro()).fold(0.0, f64::max)).powi(6);
        assert!(hyp <= 1e-10 * scale, "seed {seed}: hypothesis residual {hyp:e}");
        // Conclusion: A f_j(Y) = 0 for each j.
        for (j, f) in fs.iter().enumerate() {
            let fy = hereditary::evaluate(f, &Matrix::identity(n), &y_ops, &y_ops).unwrap();
            let res = (&a * &fy).norm_fro();
            assert!(
                res <= 1e-8 * scale,
                "seed {seed}, f_{j}: ||A f(Y)|| = {res:e}"
            );
        }
        // Negative control: a polynomial not vanishing on the support of A
        // is not annihilated (the construction is not vacuous).
        let control = HereditaryPolynomial::var_y(d, 0);
        let cy = hereditary::evaluate(&control, &Matrix::identity(n), &y_ops, &y_ops).unwrap();
        assert!((&a * &cy).norm_fro() > 1e-4, "seed {seed}: vacuous instance");
    }
}

/// Ideal property on annihilated instances: p_2 annihilates the block
/// tuple, so any polynomial multiple of p_2 annihilates it too.
#[test]
fn ideal_property_on_annihilated_instances() {
    for seed in 0..100u64 {
        let alpha = {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            herop::gen::unit_sphere_point(2, &mut rng)
        };
        let t = herop::gen::gen_block_example(&alpha, 2, 2, herop::gen::Seed(seed)).unwrap();
        let eye = Matrix::identity(4);
        let p2 = hereditary::m_isometry_polynomial(2, 2);
        // Multiply by a seed-dependent monomial on each side.
        let g = HereditaryPolynomial::monomial(
            2,
            MultiIndex::new(vec![(seed % 3) as u32, ((seed / 3) % 2) as u32]),
            MultiIndex::new(vec![((seed / 7) % 2) as u32, (seed % 2) as u32]),
            c(1.0, 0.25),
        );
        let gf = g.mul(&p2).unwrap();
        let res = hereditary::evaluate(&gf, &eye, t.ops(), t.ops())
            .unwrap()
            .norm_fro();
        let scale = (1.0 + t.max_op_norm()).powi(8);
        assert!(res <= 1e-9 * scale, "seed {seed}: residual {res:e}");
    }
}
