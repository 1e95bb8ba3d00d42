mod common;

use common::*;
use qphase::initializer::{apply_initializer, gram_schmidt_unitary, householder_unitary};
use qphase::Complex64;

#[test]
fn columns_are_orthonormal() {
    let mut r = rng(300);
    for n in 1..=3 {
        for _ in 0..50 {
            let phi = random_phi(n, &mut r);
            for u in [householder_unitary(&phi).unwrap(), gram_schmidt_unitary(&phi).unwrap()] {
                assert!(u.unitarity_deviation() <= 1e-12);
                let dim = 1 << n;
                for mu in 0..dim {
                    let a = u.column(mu).unwrap();
                    for nu in 0..dim {
                        let b = u.column(nu).unwrap();
                        let ip: Complex64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
                        let want = if mu == nu { 1.0 } else { 0.0 };
                        assert!((ip - want).norm() <= 1e-12);
                    }
                }
                assert!(max_dev(&u.column(0).unwrap(), &phi) <= 1e-12);
            }
        }
    }
}

#[test]
fn completions_share_column_zero() {
    let mut r = rng(301);
    for _ in 0..20 {
        let phi = random_phi(3, &mut r);
        let h = householder_unitary(&phi).unwrap();
        let g = gram_schmidt_unitary(&phi).unwrap();
        assert!(max_dev(&h.column(0).unwrap(), &g.column(0).unwrap()) <= 1e-12);
    }
}

#[test]
fn adjoint_inverts_forward() {
    let mut r = rng(302);
    for _ in 0..20 {
        let phi = random_phi(2, &mut r);
        let s = random_state(4, &mut r);
        for u in [householder_unitary(&phi).unwrap(), gram_schmidt_unitary(&phi).unwrap()] {
            let reg = [3, 1];
            let fwd = apply_initializer(&s, &u, &reg, false).unwrap();
            assert!((fwd.norm() - 1.0).abs() <= 1e-12);
            let back = apply_initializer(&fwd, &u, &reg, true).unwrap();
            assert!(max_dev(back.amplitudes(), s.amplitudes()) <= 1e-12);
        }
    }
}
