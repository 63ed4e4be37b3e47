mod common;

use approx::assert_relative_eq;
use common::{random_density, random_hermitian, random_matrix, random_pure, rng};
use qsl_core::hermitian::{
    bures_fidelity, eig_hermitian, embed_qubit_operator, is_psd_by_coefficients, norms, pauli, positivity_coefficients,
    sqrt_psd, superfidelity_bound, tensor, ComplexMatrix, DensityMatrix, C64,
};
use qsl_core::Error;

/// det(A − xI) by Gaussian elimination with partial pivoting.
fn shifted_det(a: &ComplexMatrix, x: f64) -> f64 {
    let d = a.dim();
    let mut m: Vec<Vec<C64>> = (0..d).map(|i| (0..d).map(|j| a[(i, j)] - if i == j { x } else { 0.0 }).collect()).collect();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..d {
        let piv = (col..d).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())).unwrap();
        if m[piv][col].norm() == 0.0 {
            return 0.0;
        }
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..d {
            let f = m[r][col] / m[col][col];
            for c in col..d {
                let v = m[col][c];
                m[r][c] -= f * v;
            }
        }
    }
    det.re
}

/// Eigenvalues as sign changes of the characteristic polynomial, refined by bisection.
fn charpoly_roots(a: &ComplexMatrix) -> Vec<f64> {
    let bound = a.frobenius_norm() + 1.0;
    let n = 20_000;
    let mut roots = Vec::new();
    let mut prev_x = -bound;
    let mut prev = shifted_det(a, prev_x);
    for i in 1..=n {
        let x = -bound + 2.0 * bound * i as f64 / n as f64;
        let cur = shifted_det(a, x);
        if prev.signum() != cur.signum() {
            let (mut lo, mut hi, flo) = (prev_x, x, prev);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if shifted_det(a, mid).signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_x = x;
        prev = cur;
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    roots
}

#[test]
fn eigenvalues_match_characteristic_polynomial() {
    let mut r = rng(1);
    for dim in [2, 3, 4, 8] {
        for _ in 0..5 {
            let a = random_hermitian(&mut r, dim);
            let es = eig_hermitian(&a).unwrap();
            let oracle = charpoly_roots(&a);
            assert_eq!(oracle.len(), dim);
            for (x, y) in es.values.iter().zip(&oracle) {
                assert!((x - y).abs() < 1e-9, "{x} vs {y}");
            }
        }
    }
}

#[test]
fn eigenvectors_reconstruct_and_are_orthonormal() {
    let mut r = rng(2);
    for dim in [2, 4, 16] {
        let a = random_hermitian(&mut r, dim);
        let es = eig_hermitian(&a).unwrap();
        assert!(es.reconstruct().max_abs_diff(&a) < 1e-12);
        let gram = &es.vectors.adjoint() * &es.vectors;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(dim)) < 1e-12);
        assert!(es.values.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn degenerate_spectrum_is_resolved() {
    let a = ComplexMatrix::identity(4).scale_real(0.25);
    let es = eig_hermitian(&a).unwrap();
    assert!(es.values.iter().all(|&x| (x - 0.25).abs() < 1e-15));
    let p = tensor(&pauli::z(), &pauli::z());
    let es = eig_hermitian(&p).unwrap();
    assert_eq!(es.values, vec![1.0, 1.0, -1.0, -1.0]);
}

#[test]
fn non_hermitian_input_is_rejected() {
    let m = random_matrix(&mut rng(3), 3);
    assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian(_))));
}

#[test]
fn trace_norm_matches_hermitian_dilation() {
    // The dilation [[0, M], [M†, 0]] has eigenvalues ±σ_i.
    let mut r = rng(4);
    for dim in [2, 4, 8] {
        let m = random_matrix(&mut r, dim);
        let dil = ComplexMatrix::from_fn(2 * dim, |i, j| match (i < dim, j < dim) {
            (true, false) => m[(i, j - dim)],
            (false, true) => m[(j, i - dim)].conj(),
            _ => C64::new(0.0, 0.0),
        });
        let sv: f64 = eig_hermitian(&dil).unwrap().values.iter().filter(|&&x| x > 0.0).sum();
        let top = eig_hermitian(&dil).unwrap().values[0];
        let n = norms(&m);
        assert_relative_eq!(n.tr, sv, max_relative = 1e-11);
        assert_relative_eq!(n.op, top, max_relative = 1e-11);
        assert_relative_eq!(n.hs, m.frobenius_norm(), max_relative = 1e-12);
    }
}

#[test]
fn norm_ordering_holds() {
    let mut r = rng(5);
    for _ in 0..50 {
        let m = random_matrix(&mut r, 4);
        let n = norms(&m);
        assert!(n.op <= n.hs * (1.0 + 1e-12) && n.hs <= n.tr * (1.0 + 1e-12));
    }
}

#[test]
fn square_root_squares_back() {
    let mut r = rng(6);
    for n in 1..=3 {
        let rho = random_density(&mut r, n);
        let s = sqrt_psd(rho.matrix()).unwrap();
        assert!((&s * &s).max_abs_diff(rho.matrix()) < 1e-12);
        assert!(s.is_hermitian(1e-13));
    }
    let neg = ComplexMatrix::diagonal(&[1.0, -0.1]);
    assert!(matches!(sqrt_psd(&neg), Err(Error::NotPsd(_))));
}

#[test]
fn qubit_superfidelity_equals_uhlmann_fidelity() {
    let mut r = rng(7);
    for _ in 0..200 {
        let a = random_density(&mut r, 1);
        let b = random_density(&mut r, 1);
        let f = bures_fidelity(&a, &b).unwrap();
        let g = superfidelity_bound(&a, &b).unwrap();
        assert!((f - g).abs() < 1e-10, "{f} vs {g}");
    }
}

#[test]
fn superfidelity_bounds_fidelity_on_two_qubits() {
    let mut r = rng(8);
    for _ in 0..100 {
        let a = random_density(&mut r, 2);
        let b = random_density(&mut r, 2);
        let f = bures_fidelity(&a, &b).unwrap();
        assert!(f <= superfidelity_bound(&a, &b).unwrap() + 1e-12);
        assert!((f - bures_fidelity(&b, &a).unwrap()).abs() < 1e-10);
        assert!((0.0..=1.0).contains(&f));
    }
}

#[test]
fn pure_state_fidelity_is_the_overlap() {
    let mut r = rng(9);
    let a = random_pure(&mut r, 2);
    let b = random_density(&mut r, 2);
    let overlap = a.matrix().trace_product(b.matrix()).re;
    assert_relative_eq!(bures_fidelity(&a, &b).unwrap(), overlap, max_relative = 1e-12);
    assert_relative_eq!(bures_fidelity(&a, &a).unwrap(), 1.0, epsilon = 1e-12);
}

#[test]
fn tensor_and_embedding_agree() {
    let mut r = rng(10);
    let op = random_matrix(&mut r, 2);
    let e = embed_qubit_operator(&op, 1, 3);
    let direct = tensor(&tensor(&ComplexMatrix::identity(2), &op), &ComplexMatrix::identity(2));
    assert_eq!(e.dim(), 8);
    assert!(e.max_abs_diff(&direct) < 1e-15);

    let rho = random_density(&mut r, 3);
    let m = rho.matrix();
    assert!(m.local_left(&op, 1).max_abs_diff(&(&e * m)) < 1e-14);
    assert!(m.local_right(&op, 1).max_abs_diff(&(m * &e)) < 1e-14);
    assert!(m.local_conjugate(&op, 2).max_abs_diff(&m.conjugate_by(&embed_qubit_operator(&op, 2, 3))) < 1e-14);
}

#[test]
fn positivity_coefficients_are_elementary_symmetric_polynomials() {
    let mut r = rng(11);
    let a = random_hermitian(&mut r, 4);
    let lam = eig_hermitian(&a).unwrap().values;
    let b = positivity_coefficients(&a);
    let e1: f64 = lam.iter().sum();
    let e4: f64 = lam.iter().product();
    let mut e2 = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            e2 += lam[i] * lam[j];
        }
    }
    assert_relative_eq!(b[0], 1.0);
    assert_relative_eq!(b[1], e1, epsilon = 1e-12);
    assert_relative_eq!(b[2], e2, epsilon = 1e-12);
    assert_relative_eq!(b[4], e4, epsilon = 1e-12);

    assert!(is_psd_by_coefficients(random_density(&mut r, 2).matrix()));
    assert!(!is_psd_by_coefficients(&ComplexMatrix::diagonal(&[0.6, 0.5, -0.1, 0.0])));
}

#[test]
fn density_matrix_validation() {
    assert!(matches!(DensityMatrix::new(ComplexMatrix::diagonal(&[0.6, 0.6])), Err(Error::InvalidTrace(_))));
    assert!(matches!(DensityMatrix::new(ComplexMatrix::diagonal(&[1.2, -0.2])), Err(Error::NotPsd(_))));
    assert!(matches!(DensityMatrix::new(ComplexMatrix::identity(3)), Err(Error::DimensionMismatch { .. })));
    let mut m = ComplexMatrix::diagonal(&[0.5, 0.5]);
    m[(0, 1)] = C64::new(0.1, 0.0);
    assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian(_))));
    let mixed = DensityMatrix::maximally_mixed(2);
    assert_relative_eq!(mixed.purity(), 0.25);
    assert!(!mixed.is_pure());
}

#[test]
fn raw_purity_deficit_agrees_with_purity() {
    let mut r = rng(12);
    for n in 1..=3 {
        let rho = random_density(&mut r, n);
        assert_relative_eq!(rho.raw_purity_deficit(), 1.0 - rho.purity(), epsilon = 1e-14);
    }
    // Close to |0⟩⟨0| the direct form keeps relative precision.
    let eps = 1e-9;
    let m = ComplexMatrix::from_real_rows(&[&[1.0 - eps * eps, 0.5 * eps], &[0.5 * eps, eps * eps]]).unwrap();
    let rho = DensityMatrix::new(m).unwrap();
    assert_relative_eq!(rho.raw_purity_deficit(), 2.0 * (eps * eps * (1.0 - eps * eps) - 0.25 * eps * eps), max_relative = 1e-12);
}
