use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::layout::VariableLayout;
use crate::error::{Error, Result};
use crate::problem::{validate_assignment, Assignment, ProblemInstance};

/// Why a bitstring has no assignment reading.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum DecodeFailure {
    #[error("bitstring has length {got}, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("element {element} is in no canister")]
    Unassigned { element: usize },
    #[error("element {element} is in canisters {canisters:?}")]
    MultiplyAssigned { element: usize, canisters: Vec<usize> },
}

/// Bitstring for a feasible assignment with every penalty term at zero.
///
/// `y_j` marks exactly the used canisters. The capacity slack of canister
/// `j` holds `p_max − load(j)` (so `p_max` for idle canisters) and the
/// minimum-fill slack holds `count(j) − n_min·y_j`.
pub fn encode_assignment(
    inst: &ProblemInstance,
    layout: &VariableLayout,
    asg: &Assignment,
) -> Result<Vec<u8>> {
    let report = validate_assignment(inst, asg)?;
    if !report.feasible {
        return Err(Error::input(format!(
            "cannot encode infeasible assignment {asg}: slack would not fit its bit budget"
        )));
    }
    if layout.n != inst.n() || layout.m != inst.m() {
        return Err(Error::input("layout does not match the instance"));
    }

    let mut z = vec![0u8; layout.dim];
    for (i, &j) in asg.canister_of().iter().enumerate() {
        z[layout.x(i, j)] = 1;
    }
    let (heat, count) = asg.loads(inst);
    for j in 0..layout.m {
        let used = count[j] > 0;
        z[layout.y(j)] = used as u8;

        let slack = inst.p_max() - heat[j];
        write_binary(&mut z[layout.a_start(j)..layout.a_start(j) + layout.s], slack)?;

        if layout.has_min_fill {
            let surplus = if used { count[j] - inst.n_min() } else { 0 };
            write_binary(
                &mut z[layout.b_start(j)..layout.b_start(j) + layout.k],
                surplus as u64,
            )?;
        }
    }
    Ok(z)
}

fn write_binary(bits: &mut [u8], value: u64) -> Result<()> {
    if bits.len() < 64 && value >> bits.len() != 0 {
        return Err(Error::input(format!(
            "slack {value} does not fit in {} bits",
            bits.len()
        )));
    }
    for (l, b) in bits.iter_mut().enumerate() {
        *b = ((value >> l) & 1) as u8;
    }
    Ok(())
}

/// Reads the placement block only; `y` and slack bits are ignored and the used
/// set is rederived from `x`.
pub fn decode_bits(layout: &VariableLayout, z: &[u8]) -> std::result::Result<Assignment, DecodeFailure> {
    if z.len() != layout.dim {
        return Err(DecodeFailure::WrongLength {
            got: z.len(),
            expected: layout.dim,
        });
    }
    let mut canister_of = Vec::with_capacity(layout.n);
    for i in 0..layout.n {
        let canisters: Vec<usize> = (0..layout.m).filter(|&j| z[layout.x(i, j)] == 1).collect();
        match canisters.as_slice() {
            [] => return Err(DecodeFailure::Unassigned { element: i }),
            [j] => canister_of.push(*j),
            _ => return Err(DecodeFailure::MultiplyAssigned { element: i, canisters }),
        }
    }
    Ok(Assignment::new(canister_of).expect("n >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::{build_layout, build_qubo, PenaltyWeights};

    fn trivial() -> ProblemInstance {
        ProblemInstance::new("trivial", 2, vec![1, 1], 3, 1).unwrap()
    }

    #[test]
    fn encode_trivial_optimum() {
        let inst = trivial();
        let layout = build_layout(&inst);
        let asg = Assignment::new(vec![0, 0]).unwrap();
        let z = encode_assignment(&inst, &layout, &asg).unwrap();

        assert_eq!(z[layout.x(0, 0)], 1);
        assert_eq!(z[layout.x(1, 0)], 1);
        assert_eq!(z[layout.x(0, 1)] + z[layout.x(1, 1)], 0);
        assert_eq!((z[layout.y(0)], z[layout.y(1)]), (1, 0));
        // slack 1 on canister 0, 3 on canister 1
        assert_eq!((z[layout.a(0, 0)], z[layout.a(1, 0)]), (1, 0));
        assert_eq!((z[layout.a(0, 1)], z[layout.a(1, 1)]), (1, 1));

        let w = PenaltyWeights::new(1.0, 4.0).unwrap();
        let model = build_qubo(&inst, w);
        assert_eq!(model.penalty(&z).unwrap(), 0.0);
        assert_eq!(model.energy(&z).unwrap(), 1.0);
    }

    #[test]
    fn encode_rejects_overload() {
        let inst = ProblemInstance::new("t", 3, vec![2, 2, 2], 3, 1).unwrap();
        let layout = build_layout(&inst);
        let asg = Assignment::new(vec![0, 0, 1]).unwrap();
        assert!(encode_assignment(&inst, &layout, &asg).is_err());
    }

    #[test]
    fn decode_round_trip() {
        let inst = ProblemInstance::new("t", 3, vec![1, 2, 1, 1], 5, 2).unwrap();
        let layout = build_layout(&inst);
        let asg = Assignment::new(vec![2, 2, 0, 0]).unwrap();
        let z = encode_assignment(&inst, &layout, &asg).unwrap();
        assert_eq!(decode_bits(&layout, &z).unwrap(), asg);
    }

    #[test]
    fn decode_failures() {
        let layout = build_layout(&trivial());
        assert_eq!(
            decode_bits(&layout, &[0; 10]),
            Err(DecodeFailure::Unassigned { element: 0 })
        );
        let mut z = vec![0u8; 10];
        z[layout.x(0, 0)] = 1;
        z[layout.x(0, 1)] = 1;
        z[layout.x(1, 0)] = 1;
        assert_eq!(
            decode_bits(&layout, &z),
            Err(DecodeFailure::MultiplyAssigned {
                element: 0,
                canisters: vec![0, 1]
            })
        );
        assert!(matches!(
            decode_bits(&layout, &[0; 3]),
            Err(DecodeFailure::WrongLength { .. })
        ));
    }
}
