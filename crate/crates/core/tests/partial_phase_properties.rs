mod common;

use common::*;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use qphase::partial_phase::{apply_partial_phase_direct, dense_operator};
use qphase::{Complex64, OperatorSource, PartialPhaseCircuit, RegisterLayout, StateVector};
use rand::Rng;

#[test]
fn circuit_and_direct_dense_operators_agree() {
    let mut r = rng(200);
    for n in 1..=3 {
        for _ in 0..20 {
            let delta = r.random_range(-8.0..8.0);
            let direct = dense_operator(n, delta, OperatorSource::Direct).unwrap();
            let circuit = dense_operator(n, delta, OperatorSource::Circuit).unwrap();
            assert!(direct.max_deviation(&circuit) <= 1e-12);
            assert!(circuit.unitarity_deviation() <= 1e-12);
            assert_eq!(PartialPhaseCircuit::new(n, delta).unwrap().gate_count(), 2 * n + 1);
            // identity limit: the largest deviation from I is |e^{iΔ} − 1|
            let id = DMatrix::<Complex64>::identity(direct.dim(), direct.dim());
            let dev = max_abs(&(direct.matrix() - id));
            assert!((dev - 2.0 * (delta / 2.0).sin().abs()).abs() <= 1e-12);
        }
    }
}

#[test]
fn dense_operator_matches_definition() {
    for n in 1..=3 {
        let op = dense_operator(n, 1.234, OperatorSource::Circuit).unwrap();
        assert!(max_abs(&(op.matrix() - partial_phase_from_definition(n, 1.234))) <= 1e-12);
    }
}

#[test]
fn swap_symmetry() {
    for n in 1..=3 {
        let dim = 1usize << n;
        let op = dense_operator(n, 0.77, OperatorSource::Circuit).unwrap();
        let swap = DMatrix::<Complex64>::from_fn(dim * dim, dim * dim, |r, c| {
            let (x, y) = (c / dim, c % dim);
            if r == y * dim + x { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
        });
        let conj = &swap * op.matrix() * swap.transpose();
        assert!(max_abs(&(conj - op.matrix())) <= 1e-12);
    }
}

#[test]
fn circuit_matches_direct_on_random_states() {
    let mut r = rng(201);
    for n in 1..=3 {
        let layout = RegisterLayout::standard(n).unwrap();
        for _ in 0..50 {
            let s = random_state(2 * n, &mut r);
            let delta = r.random_range(-8.0..8.0);
            let circuit = PartialPhaseCircuit::new(n, delta).unwrap();
            let a = circuit.apply(&s).unwrap();
            let b = apply_partial_phase_direct(&s, &layout, delta).unwrap();
            assert!(max_dev(a.amplitudes(), b.amplitudes()) <= 1e-12);
        }
    }
}

#[test]
fn custom_layout_circuit_matches_direct() {
    let layout = RegisterLayout::new(vec![1, 3, 5], vec![0, 4, 2]).unwrap();
    let circuit = PartialPhaseCircuit::for_layout(&layout, 0.9).unwrap();
    let mut r = rng(202);
    let s = random_state(6, &mut r);
    let a = circuit.apply(&s).unwrap();
    let b = apply_partial_phase_direct(&s, &layout, 0.9).unwrap();
    assert!(max_dev(a.amplitudes(), b.amplitudes()) <= 1e-12);
}

#[test]
fn uniform_and_linear_states_against_dense_64x64() {
    let psi = uniform(3);
    let phi = StateVector::from_amplitudes(linear(3)).unwrap();
    let s = StateVector::product(&psi, &phi);
    let layout = RegisterLayout::standard(3).unwrap();
    let got = apply_partial_phase_direct(&s, &layout, 0.05).unwrap();
    let want = partial_phase_from_definition(3, 0.05) * DVector::from_column_slice(s.amplitudes());
    assert!(max_dev(got.amplitudes(), want.as_slice()) <= 1e-12);
    let circ = PartialPhaseCircuit::new(3, 0.05).unwrap().apply(&s).unwrap();
    assert!(max_dev(circ.amplitudes(), want.as_slice()) <= 1e-12);
}

#[test]
fn zero_delta_is_identity_on_any_state() {
    let mut r = rng(203);
    let s = random_state(4, &mut r);
    let layout = RegisterLayout::standard(2).unwrap();
    let out = apply_partial_phase_direct(&s, &layout, 0.0).unwrap();
    assert_eq!(out.amplitudes(), s.amplitudes());
}

proptest! {
    #[test]
    fn phases_compose(seed in any::<u64>(), d1 in -8.0f64..8.0, d2 in -8.0f64..8.0) {
        let mut r = rng(seed);
        let s = random_state(4, &mut r);
        let layout = RegisterLayout::standard(2).unwrap();
        let two = apply_partial_phase_direct(&apply_partial_phase_direct(&s, &layout, d1).unwrap(), &layout, d2).unwrap();
        let one = PartialPhaseCircuit::new(2, d1 + d2).unwrap().apply(&s).unwrap();
        prop_assert!(max_dev(two.amplitudes(), one.amplitudes()) <= 1e-12);
    }
}
