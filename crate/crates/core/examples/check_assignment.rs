//! Feasibility reports for hand-written packings.
//!
//! ```bash
//! cargo run --example check_assignment
//! ```

use binpack_qubo::problem::{validate_assignment, Assignment, ProblemInstance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // at least two elements in every canister that is used
    let inst = ProblemInstance::new("demo", 3, vec![2, 3, 1, 4], 5, 2)?;
    println!("p = {:?}, p_max = {}, n_min = {}\n", inst.p(), inst.p_max(), inst.n_min());

    for canister_of in [vec![0, 0, 1, 1], vec![0, 1, 0, 1], vec![0, 0, 0, 1], vec![0, 0, 2, 2]] {
        let asg = Assignment::for_instance(&inst, canister_of)?;
        println!("{asg}\n{}", validate_assignment(&inst, &asg)?);
    }
    Ok(())
}
