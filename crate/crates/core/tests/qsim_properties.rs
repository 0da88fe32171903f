mod common;

use cffqnn::circuit::Circuit;
use cffqnn::qsim::{GateOp, StateVector};
use common::{branch_circuit, branch_oracle, random_circuit};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_state(seed: u64, n: usize) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = StateVector::new_zero_state(n).unwrap();
    for _ in 0..40 {
        s.apply_gate(&common::random_gate(&mut rng, n)).unwrap();
    }
    s
}

fn distance(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn random_circuits_preserve_norm(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_circuit(&mut rng, 6, 200);
        let s = c.run().unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        for q in 0..c.num_qubits() {
            let e = s.expectation_z(q).unwrap();
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&e));
        }
    }

    #[test]
    fn ry_angles_add(seed in any::<u64>(), a in -7.0f64..7.0, b in -7.0f64..7.0, n in 1usize..5) {
        let target = (seed % n as u64) as usize;
        let mut split = random_state(seed, n);
        split.apply_gate(&GateOp::Ry { target, angle: a }).unwrap();
        split.apply_gate(&GateOp::Ry { target, angle: b }).unwrap();
        let mut joined = random_state(seed, n);
        joined.apply_gate(&GateOp::Ry { target, angle: a + b }).unwrap();
        prop_assert!(distance(&split, &joined) < 1e-12);
    }

    #[test]
    fn cry_onto_one_target_commute(seed in any::<u64>(), a in -7.0f64..7.0, b in -7.0f64..7.0) {
        let first = GateOp::Cry { control: 0, target: 2, angle: a };
        let second = GateOp::Cry { control: 1, target: 2, angle: b };
        let mut ab = random_state(seed, 3);
        ab.apply_gate(&first).unwrap();
        ab.apply_gate(&second).unwrap();
        let mut ba = random_state(seed, 3);
        ba.apply_gate(&second).unwrap();
        ba.apply_gate(&first).unwrap();
        prop_assert!(distance(&ab, &ba) < 1e-12);
        // same control: angles add
        let mut twice = random_state(seed, 3);
        twice.apply_gate(&GateOp::Cry { control: 0, target: 2, angle: a }).unwrap();
        twice.apply_gate(&GateOp::Cry { control: 0, target: 2, angle: b }).unwrap();
        let mut once = random_state(seed, 3);
        once.apply_gate(&GateOp::Cry { control: 0, target: 2, angle: a + b }).unwrap();
        prop_assert!(distance(&twice, &once) < 1e-12);
    }

    #[test]
    fn node_output_matches_branch_enumeration(
        z in prop::collection::vec(-7.0f64..7.0, 1..=3),
        bias in -7.0f64..7.0,
        theta in prop::collection::vec(-7.0f64..7.0, 3),
    ) {
        let theta = &theta[..z.len()];
        let s = branch_circuit(&z, bias, theta).run().unwrap();
        let e = s.expectation_z(z.len()).unwrap();
        prop_assert!((e - branch_oracle(&z, bias, theta)).abs() < 1e-12);
    }

    #[test]
    fn circuit_text_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_circuit(&mut rng, 5, 30);
        prop_assert_eq!(Circuit::parse_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn depth_bounded_by_gate_count(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_circuit(&mut rng, 5, 60);
        prop_assert!(c.depth() <= c.len());
        prop_assert_eq!(c.depth() == 0, c.is_empty());
    }
}

#[test]
fn hadamard_pair_is_identity_on_random_state() {
    let mut s = random_state(3, 4);
    let before = s.clone();
    for _ in 0..2 {
        s.apply_gate(&GateOp::H { target: 2 }).unwrap();
    }
    assert!(distance(&s, &before) < 1e-12);
}

#[test]
fn parity_of_product_state_factorizes() {
    // independent qubits: <Z_a Z_b> = <Z_a><Z_b>
    let mut c = Circuit::new(3).unwrap();
    for (q, a) in [(0, 0.3), (1, 1.1), (2, -2.0)] {
        c.push(GateOp::Ry { target: q, angle: a }).unwrap();
    }
    let s = c.run().unwrap();
    let joint = s.expectation_z_product(&[0, 2]).unwrap();
    let split = s.expectation_z(0).unwrap() * s.expectation_z(2).unwrap();
    assert!((joint - split).abs() < 1e-12);
    assert!((joint - 0.3f64.cos() * (-2.0f64).cos()).abs() < 1e-12);
}
