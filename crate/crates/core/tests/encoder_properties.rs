use binpack_qubo::encoder::{
    bits_to_spins, build_layout, build_qubo, decode_bits, encode_assignment, hamiltonian_terms,
    qubo_to_ising, PenaltyWeights, QuboModel, VariableLayout,
};
use binpack_qubo::problem::{validate_assignment, Assignment, ProblemInstance};
use proptest::prelude::*;

/// Small instances, including ones with a minimum-fill block.
fn instance_strategy() -> impl Strategy<Value = ProblemInstance> {
    (1usize..=5, 1usize..=3, 1u64..=9)
        .prop_flat_map(|(n, m, p_max)| {
            (
                Just(m),
                prop::collection::vec(1..=p_max, n),
                Just(p_max),
                1usize..=n,
            )
        })
        .prop_map(|(m, p, p_max, n_min)| ProblemInstance::new("prop", m, p, p_max, n_min).unwrap())
}

fn with_bits() -> impl Strategy<Value = (ProblemInstance, Vec<u8>)> {
    instance_strategy().prop_flat_map(|inst| {
        let d = build_layout(&inst).dim;
        (Just(inst), prop::collection::vec(0u8..=1, d))
    })
}

/// Bitstring after relabeling canisters `j -> perm[j]`.
fn permute_bits(layout: &VariableLayout, z: &[u8], perm: &[usize]) -> Vec<u8> {
    let mut out = vec![0u8; z.len()];
    for j in 0..layout.m {
        let t = perm[j];
        for i in 0..layout.n {
            out[layout.x(i, t)] = z[layout.x(i, j)];
        }
        out[layout.y(t)] = z[layout.y(j)];
        for l in 0..layout.s {
            out[layout.a(l, t)] = z[layout.a(l, j)];
        }
        for l in 0..layout.k {
            out[layout.b(l, t)] = z[layout.b(l, j)];
        }
    }
    out
}

proptest! {
    #[test]
    fn matrix_energy_matches_direct_terms((inst, z) in with_bits(), a in 1u32..4, b in 1u32..9) {
        let w = PenaltyWeights::new(a as f64, b as f64).unwrap();
        let model = build_qubo(&inst, w);
        let terms = hamiltonian_terms(&inst, &build_layout(&inst), &z).unwrap();
        prop_assert_eq!(model.energy(&z).unwrap(), terms.energy(&w));
    }

    #[test]
    fn fractional_weights_agree_closely((inst, z) in with_bits(), a in 0.1f64..3.0, b in 0.1f64..9.0) {
        let w = PenaltyWeights::new(a, b).unwrap();
        let model = build_qubo(&inst, w);
        let terms = hamiltonian_terms(&inst, &build_layout(&inst), &z).unwrap();
        let e = model.energy(&z).unwrap();
        prop_assert!((e - terms.energy(&w)).abs() <= 1e-9 * e.abs().max(1.0));
    }

    #[test]
    fn ising_energy_matches((inst, z) in with_bits()) {
        let model = build_qubo(&inst, PenaltyWeights::default_for(&inst));
        let ising = qubo_to_ising(&model);
        prop_assert_eq!(ising.energy(&bits_to_spins(&z)).unwrap(), model.energy(&z).unwrap());
    }

    #[test]
    fn penalty_is_zero_or_at_least_b((inst, z) in with_bits()) {
        let w = PenaltyWeights::default_for(&inst);
        let model = build_qubo(&inst, w);
        let pen = model.penalty(&z).unwrap();
        let feasible_decode = decode_bits(&build_layout(&inst), &z)
            .ok()
            .map(|asg| validate_assignment(&inst, &asg).unwrap().feasible)
            .unwrap_or(false);
        prop_assert!(pen == 0.0 || pen >= w.b_weight);
        if !feasible_decode {
            prop_assert!(pen >= w.b_weight);
        }
    }

    #[test]
    fn canister_relabeling_preserves_energy((inst, z) in with_bits(), rot in 0usize..3) {
        let layout = build_layout(&inst);
        let model = build_qubo(&inst, PenaltyWeights::default_for(&inst));
        let perm: Vec<usize> = (0..layout.m).map(|j| (j + rot) % layout.m).collect();
        let zp = permute_bits(&layout, &z, &perm);
        prop_assert_eq!(model.energy(&zp).unwrap(), model.energy(&z).unwrap());
    }

    #[test]
    fn feasible_assignments_encode_to_objective(inst in instance_strategy(), seed in any::<u64>()) {
        let layout = build_layout(&inst);
        let canister_of: Vec<usize> = (0..inst.n())
            .map(|i| ((seed >> (i * 2)) as usize) % inst.m())
            .collect();
        let asg = Assignment::new(canister_of).unwrap();
        let report = validate_assignment(&inst, &asg).unwrap();
        let w = PenaltyWeights::default_for(&inst);
        let model = build_qubo(&inst, w);
        match encode_assignment(&inst, &layout, &asg) {
            Ok(z) => {
                prop_assert!(report.feasible);
                prop_assert_eq!(model.penalty(&z).unwrap(), 0.0);
                prop_assert_eq!(model.energy(&z).unwrap(), w.a_weight * report.objective_m as f64);
                prop_assert_eq!(decode_bits(&layout, &z).unwrap(), asg);
            }
            Err(_) => prop_assert!(!report.feasible),
        }
    }
}

#[test]
fn size_identity_against_table() {
    // (n, m, p_max) -> D
    let rows = [
        (2, 2, 3, 10),
        (3, 3, 7, 21),
        (4, 3, 7, 24),
        (5, 3, 7, 27),
        (6, 3, 15, 33),
        (7, 3, 15, 36),
        (8, 3, 15, 39),
        (9, 3, 15, 42),
        (10, 3, 15, 45),
    ];
    for (n, m, p_max, d) in rows {
        let inst = ProblemInstance::new("row", m, vec![1; n], p_max, 1).unwrap();
        assert_eq!(build_layout(&inst).dim, d);
        assert_eq!(build_qubo(&inst, PenaltyWeights::default_for(&inst)).dim(), d);
    }
}

#[test]
fn idle_canister_flag_costs_exactly_a() {
    let inst = ProblemInstance::new("t", 3, vec![3, 4, 5], 15, 1).unwrap();
    let layout = build_layout(&inst);
    let w = PenaltyWeights::new(1.0, 6.0).unwrap();
    let model = build_qubo(&inst, w);
    let asg = Assignment::new(vec![0, 0, 0]).unwrap();
    let z = encode_assignment(&inst, &layout, &asg).unwrap();
    for j in [1, 2] {
        let mut flipped = z.clone();
        flipped[layout.y(j)] = 1;
        // capacity and binding terms do not involve an idle canister's flag
        assert_eq!(
            model.energy(&flipped).unwrap() - model.energy(&z).unwrap(),
            w.a_weight
        );
    }
}

#[test]
fn idle_canister_flag_with_min_fill() {
    let inst = ProblemInstance::new("t", 3, vec![1, 1, 1, 1], 7, 2).unwrap();
    let layout = build_layout(&inst);
    let w = PenaltyWeights::new(1.0, 6.0).unwrap();
    let model = build_qubo(&inst, w);
    let asg = Assignment::new(vec![0, 0, 1, 1]).unwrap();
    let z = encode_assignment(&inst, &layout, &asg).unwrap();
    let mut flipped = z.clone();
    flipped[layout.y(2)] = 1;
    // H3 for canister 2 becomes (0 − 0 − 2·1)² = 4
    assert_eq!(
        model.energy(&flipped).unwrap() - model.energy(&z).unwrap(),
        w.a_weight + w.b_weight * 4.0
    );
}

#[test]
fn ising_exhaustive_six_variables() {
    let upper: Vec<(usize, usize, f64)> = (0..6)
        .flat_map(|i| (i..6).map(move |j| (i, j, ((i * 7 + j * 3) % 11) as f64 - 5.0)))
        .collect();
    let model = QuboModel::from_upper(6, &upper, 2.5).unwrap();
    let ising = qubo_to_ising(&model);
    for code in 0u32..64 {
        let z: Vec<u8> = (0..6).map(|b| ((code >> b) & 1) as u8).collect();
        assert_eq!(
            ising.energy(&bits_to_spins(&z)).unwrap(),
            model.energy(&z).unwrap()
        );
    }
}
