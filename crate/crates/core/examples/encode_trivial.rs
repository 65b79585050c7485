//! Build the QUBO for the smallest instance and look inside it.
//!
//! Two unit-heat elements, two canisters of capacity 3. The layout has
//! D = m(1 + n + s) = 10 variables; packing both elements together costs
//! exactly A (one canister), and breaking any constraint costs at least B.
//!
//! ```bash
//! cargo run --example encode_trivial
//! ```

use binpack_qubo::encoder::{
    build_layout, build_qubo, decode_bits, encode_assignment, export_qubo, hamiltonian_terms,
    PenaltyWeights,
};
use binpack_qubo::problem::{Assignment, ProblemInstance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = ProblemInstance::new("trivial", 2, vec![1, 1], 3, 1)?;
    let layout = build_layout(&inst);
    let weights = PenaltyWeights::default_for(&inst);
    let model = build_qubo(&inst, weights);

    println!(
        "n = {}, m = {}, s = {}, k = {}  →  D = {}",
        layout.n, layout.m, layout.s, layout.k, layout.dim
    );
    println!("A = {}, B = {}\n", weights.a_weight, weights.b_weight);

    for canister_of in [vec![0, 0], vec![0, 1]] {
        let asg = Assignment::for_instance(&inst, canister_of)?;
        let z = encode_assignment(&inst, &layout, &asg)?;
        let bits: String = z.iter().map(|b| char::from(b'0' + b)).collect();
        println!(
            "{asg}: z = {bits}  energy {}  penalty {}  decodes back: {}",
            model.energy(&z)?,
            model.penalty(&z)?,
            decode_bits(&layout, &z)? == asg
        );
    }

    // an element left out: the one-hot term fires
    let mut z = encode_assignment(&inst, &layout, &Assignment::new(vec![0, 0])?)?;
    z[layout.x(1, 0)] = 0;
    let terms = hamiltonian_terms(&inst, &layout, &z)?;
    println!(
        "\nelement 1 removed: capacity {}, one-hot {}, binding {}  →  energy {}",
        terms.capacity,
        terms.one_hot,
        terms.binding,
        model.energy(&z)?
    );
    println!("decode: {}", decode_bits(&layout, &z).unwrap_err());

    println!("\nexchange format (upper triangle, `i j value`):\n{}", export_qubo(&model));
    Ok(())
}
