use lowensim_core::encoding::unitary_dilation;
use lowensim_core::linalg::{self, c, CMatrix};
use lowensim_core::operator::{exact_evolution, Operator, StateVector};
use lowensim_core::poly::chebyshev::ChebPoly;
use lowensim_core::poly::{jacobi_anger_normalized, low_energy_evolution_polys, TrigKind};
use lowensim_core::random;
use lowensim_core::svt::AMPLIFICATION_FACTOR;
use lowensim_core::zoo::GroverGaFamily;
use lowensim_core::*;
use proptest::prelude::*;

/// `f(A) = U f(S) V^dagger` for odd `f`, or `V f(S) V^dagger` for even `f`
/// including the kernel, straight from nalgebra's SVD.
fn svd_oracle(a: &CMatrix, f: impl Fn(f64) -> f64, odd: bool) -> CMatrix {
    let (m, n) = a.shape();
    if odd {
        let svd = a.clone().svd(true, true);
        let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
        let k = svd.singular_values.len();
        let mut out = CMatrix::zeros(m, n);
        for j in 0..k {
            out += u.column(j) * vt.row(j) * c(f(svd.singular_values[j]));
        }
        out
    } else {
        let (vals, vecs) = linalg::hermitian_eigen(&linalg::matmul(&a.adjoint(), a));
        let mut out = CMatrix::zeros(n, n);
        for (j, &v) in vals.iter().enumerate() {
            out += vecs.column(j) * vecs.column(j).adjoint() * c(f(v.max(0.0).sqrt()));
        }
        out
    }
}

#[test]
fn t2_of_hermitian_block() {
    let mut r = random::rng(5);
    let h = random::hermitian(6, &mut r);
    let h = &h * c(0.9 / linalg::spectral_norm(&h));
    let be = unitary_dilation(&h).unwrap();
    let (out, ledger) = apply_svt(&be, &ChebPoly::basis(2)).unwrap();
    let want = linalg::matmul(&h, &h) * c(2.0) - CMatrix::identity(6, 6);
    assert!(linalg::max_abs_diff(&out, &want) < 1e-12);
    assert_eq!(ledger.encoding_uses, 2);
}

#[test]
fn odd_polynomial_on_rectangular_block() {
    let mut r = random::rng(8);
    let a = random::with_singular_values(5, 3, &[0.95, 0.5, 0.1], &mut r);
    let be = unitary_dilation(&a).unwrap();
    let p = ChebPoly::basis(3);
    let (out, _) = apply_svt(&be, &p).unwrap();
    let want = svd_oracle(&a, |s| 4.0 * s.powi(3) - 3.0 * s, true);
    assert!(linalg::max_abs_diff(&out, &want) < 1e-12);
    let (out, _) = apply_svt(&be, &ChebPoly::basis(4)).unwrap();
    let want = svd_oracle(&a, |s| 8.0 * s.powi(4) - 8.0 * s * s + 1.0, false);
    assert!(linalg::max_abs_diff(&out, &want) < 1e-12);
}

#[test]
fn walk_matches_chebyshev_up_to_32() {
    let mut r = random::rng(21);
    for dim in [2, 5, 8] {
        let h = random::hermitian(dim, &mut r);
        let h = &h * c(0.97 / linalg::spectral_norm(&h));
        let be = unitary_dilation(&h).unwrap();
        let ctx = SvtContext::from_encoding(&be);
        for k in [0, 1, 2, 7, 16, 31, 32] {
            let walked = walk_chebyshev(&be, k).unwrap();
            let parity = if k % 2 == 0 { lowensim_core::poly::Parity::Even } else { lowensim_core::poly::Parity::Odd };
            let tk = ctx.apply_unchecked(&ChebPoly::basis(k).coeffs, parity);
            assert!(linalg::max_abs_diff(&walked, &tk) <= 1e-9);
        }
    }
}

#[test]
fn walk_rejects_non_self_inverse() {
    let u = random::haar_unitary(4, &mut random::rng(3));
    let be = BlockEncoding::leading(u, 2, 2, 1.0).unwrap();
    assert!(matches!(walk_chebyshev(&be, 3), Err(Error::NotSelfInverse { .. })));
}

#[test]
fn grover_cos_part_through_sga() {
    let n = 16;
    let fam = GroverGaFamily::new(n, vec![3]).unwrap();
    let lambda = fam.factor_lambda();
    let v = unitary_dilation(&fam.factor_a(0)).unwrap();
    let w = sga_block_encoding(&v).unwrap();
    let (t, gamma, eps) = (std::f64::consts::PI * 4.0, 0.25, 1e-3);
    let polys = low_energy_evolution_polys(t, lambda, gamma, eps).unwrap();
    let (pc, lc) = apply_svt(&w, &polys.cos.poly).unwrap();
    let (ps, ls) = apply_svt(&w, &polys.sin.poly).unwrap();
    let h = fam.to_gap_amp().unwrap().h;
    let s = StateVector::uniform(n);
    let exact = exact_evolution(&h, t).unwrap();
    let cos_h = (exact.matrix() + exact.matrix().adjoint()) * c(0.5);
    let got = pc.view((0, 0), (n, n)).into_owned() * s.amplitudes();
    assert!((got - &cos_h * s.amplitudes()).norm() <= 2.0 * eps);
    // combined operator within 4 eps on the low-energy state
    let (u, ledger) = lcu_combine_evolution(&pc, &ps, &lc, &ls).unwrap();
    let got = u.view((0, 0), (n, n)).into_owned() * s.amplitudes();
    assert!((got - exact.apply(&s)).norm() <= 4.0 * eps);
    assert_eq!(ledger.encoding_uses, AMPLIFICATION_FACTOR * (polys.cos.poly.degree() + polys.sin.poly.degree()));
}

#[test]
fn qsp_cos_sin_of_hermitian_block() {
    let mut r = random::rng(13);
    let h = random::hermitian(8, &mut r);
    let h = &h * c(1.0 / linalg::spectral_norm(&h));
    let be = unitary_dilation(&h).unwrap();
    let tl = 30.0;
    let eps = 1e-4;
    let pc = jacobi_anger_normalized(tl, 0.5 * eps, TrigKind::Cos).unwrap();
    let ps = jacobi_anger_normalized(tl, 0.5 * eps, TrigKind::Sin).unwrap();
    let (uc, lc) = apply_svt(&be, &pc).unwrap();
    let (us, ls) = apply_svt(&be, &ps).unwrap();
    let (u, _) = lcu_combine_evolution(&uc, &us, &lc, &ls).unwrap();
    let exact = exact_evolution(&Operator::hermitian(h).unwrap(), tl).unwrap();
    assert!(linalg::spectral_norm(&(u - exact.matrix())) <= 2.0 * eps);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn svt_is_linear_in_the_polynomial(seed in 0u64..500, k1 in 0usize..6, k2 in 0usize..6) {
        let (k1, k2) = (2 * k1 + 1, 2 * k2 + 1);
        let mut r = random::rng(seed);
        let a = random::with_singular_values(4, 3, &[0.9, 0.6, 0.2], &mut r);
        let be = unitary_dilation(&a).unwrap();
        let p = ChebPoly::basis(k1).scaled(0.5).add(&ChebPoly::basis(k2).scaled(0.5));
        let (sum, _) = apply_svt(&be, &p).unwrap();
        let (a1, _) = apply_svt(&be, &ChebPoly::basis(k1)).unwrap();
        let (a2, _) = apply_svt(&be, &ChebPoly::basis(k2)).unwrap();
        prop_assert!(linalg::max_abs_diff(&sum, &((a1 + a2) * c(0.5))) < 1e-12);
    }

    #[test]
    fn chebyshev_values_stay_bounded(seed in 0u64..500, k in 0usize..40) {
        let mut r = random::rng(seed);
        let a = random::with_singular_values(3, 3, &[0.99, 0.3, 0.0], &mut r);
        let be = unitary_dilation(&a).unwrap();
        let (out, ledger) = apply_svt(&be, &ChebPoly::basis(k)).unwrap();
        prop_assert!(linalg::spectral_norm(&out) <= 1.0 + 1e-10);
        prop_assert_eq!(ledger.encoding_uses, k);
    }
}
