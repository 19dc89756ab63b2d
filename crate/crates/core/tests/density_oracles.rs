use bbdqc1::dqc1::{bb_dqc1_exact, dqc1_exact};
use bbdqc1::qsim::random::{
    random_density, random_unitary, random_unitary_with_eigenbasis, random_weights,
};
use bbdqc1::qsim::{
    build_tau_bb, build_tau_ctrl, control_coherence, kron, max_abs_diff, tau_bb_block_formula,
    DensityMatrix, Matrix, UnitarySpec, C64,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Block formula with `ρ⊗σ` in the top-left block instead of `UρU†⊗σ`.
fn literal_formula(u: &Matrix, rho: &Matrix, sigma: &Matrix) -> Matrix {
    let spec = UnitarySpec::dense(u.clone()).unwrap();
    let rho_d = DensityMatrix::new(rho.clone()).unwrap();
    let sigma_d = DensityMatrix::new(sigma.clone()).unwrap();
    let mut m = tau_bb_block_formula(&spec, &rho_d, &sigma_d).unwrap();
    let k = rho.nrows() * rho.nrows();
    m.view_mut((0, 0), (k, k))
        .copy_from(&(kron(rho, sigma).unwrap() * C64::new(0.5, 0.0)));
    m
}

#[test]
fn eigen_diagonal_inputs_match_controlled_udag_u() {
    let mut r = rng(10);
    for d in 1..=4 {
        for _ in 0..10 {
            let (u, w, _) = random_unitary_with_eigenbasis(d, &mut r);
            let rho = DensityMatrix::diagonal_in_basis(&w, &random_weights(d, &mut r)).unwrap();
            let sigma = DensityMatrix::diagonal_in_basis(&w, &random_weights(d, &mut r)).unwrap();
            let tau = build_tau_bb(&UnitarySpec::dense(u.clone()).unwrap(), &rho, &sigma).unwrap();
            let v = kron(&u.adjoint(), &u).unwrap();
            let ctrl = build_tau_ctrl(&v, &rho.tensor(&sigma).unwrap()).unwrap();
            assert!(max_abs_diff(tau.matrix(), ctrl.matrix()) < 1e-12);
            // the literal top-left block is right whenever ρ commutes with U
            let lit = literal_formula(&u, rho.matrix(), sigma.matrix());
            assert!(max_abs_diff(tau.matrix(), &lit) < 1e-12);
        }
    }
}

#[test]
fn u_tensor_udag_conjugates_the_coherence() {
    // with ρ, σ eigenstates of U the two orderings differ exactly by conjugating
    // the off-diagonal block
    let mut r = rng(11);
    let (u, w, _) = random_unitary_with_eigenbasis(2, &mut r);
    let rho = DensityMatrix::diagonal_in_basis(&w, &[1.0, 0.0]).unwrap();
    let sigma = DensityMatrix::diagonal_in_basis(&w, &[0.0, 1.0]).unwrap();
    let spec = UnitarySpec::dense(u.clone()).unwrap();
    let bb = control_coherence(&build_tau_bb(&spec, &rho, &sigma).unwrap()).unwrap();
    let v = kron(&u, &u.adjoint()).unwrap();
    let other =
        control_coherence(&build_tau_ctrl(&v, &rho.tensor(&sigma).unwrap()).unwrap()).unwrap();
    assert!((bb - other.conj()).norm() < 1e-12);
    assert!((bb - other).norm() > 1e-3);
}

#[test]
fn generic_inputs_break_the_equivalence() {
    let mut r = rng(12);
    let u = random_unitary(2, &mut r);
    let rho = random_density(2, &mut r);
    let sigma = random_density(2, &mut r);
    let tau = build_tau_bb(&UnitarySpec::dense(u.clone()).unwrap(), &rho, &sigma).unwrap();
    for v in [
        kron(&u.adjoint(), &u).unwrap(),
        kron(&u, &u.adjoint()).unwrap(),
    ] {
        let ctrl = build_tau_ctrl(&v, &rho.tensor(&sigma).unwrap()).unwrap();
        assert!(max_abs_diff(tau.matrix(), ctrl.matrix()) > 1e-3);
    }
    // and the literal block formula is not the circuit's state
    let lit = literal_formula(&u, rho.matrix(), sigma.matrix());
    assert!(max_abs_diff(tau.matrix(), &lit) > 1e-3);
}

#[test]
fn coherence_is_product_of_traces() {
    let mut r = rng(13);
    for d in 1..=4 {
        let u = random_unitary(d, &mut r);
        let rho = random_density(d, &mut r);
        let sigma = random_density(d, &mut r);
        let z = control_coherence(
            &build_tau_bb(&UnitarySpec::dense(u.clone()).unwrap(), &rho, &sigma).unwrap(),
        )
        .unwrap();
        let want = (&u * rho.matrix()).trace() * (sigma.matrix() * u.adjoint()).trace();
        assert!((z - want).norm() < 1e-12);
    }
}

#[test]
fn bb_matches_standard_on_product_operator() {
    let mut r = rng(14);
    for d in 1..=8 {
        let u = UnitarySpec::dense(random_unitary(d, &mut r)).unwrap();
        let v = u.tensor_with_adjoint().unwrap();
        assert!((C64::new(bb_dqc1_exact(&u), 0.0) - dqc1_exact(&v)).norm() < 1e-12);
        assert!((bb_dqc1_exact(&u) - dqc1_exact(&u).norm_sqr()).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn bb_value_in_unit_interval(seed in any::<u64>(), d in 1usize..=8) {
        let u = UnitarySpec::dense(random_unitary(d, &mut rng(seed))).unwrap();
        let v = bb_dqc1_exact(&u);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
    }

    #[test]
    fn bb_is_one_iff_scalar(phases in prop::collection::vec(-3.0f64..3.0, 1..8), theta in -3.0f64..3.0) {
        let scalar = UnitarySpec::diagonal(vec![theta; phases.len()]).unwrap();
        prop_assert!((bb_dqc1_exact(&scalar) - 1.0).abs() < 1e-12);
        let spread = phases.iter().any(|p| (p - phases[0]).abs() > 1e-3);
        let u = UnitarySpec::diagonal(phases).unwrap();
        if spread {
            prop_assert!(bb_dqc1_exact(&u) < 1.0 - 1e-9);
        }
    }

    #[test]
    fn global_phase_never_changes_bb_state(seed in any::<u64>(), theta in -3.2f64..3.2) {
        let mut r = rng(seed);
        let u = UnitarySpec::dense(random_unitary(2, &mut r)).unwrap();
        let rho = random_density(2, &mut r);
        let sigma = random_density(2, &mut r);
        let a = build_tau_bb(&u, &rho, &sigma).unwrap();
        let b = build_tau_bb(&u.clone().with_global_phase(theta), &rho, &sigma).unwrap();
        prop_assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-12);
    }
}
