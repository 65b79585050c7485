//! Canister-filling instances, assignments and the exact feasibility check.
//!
//! An instance places `n` fuel elements with integer heat outputs `p[i]` into
//! at most `m` canisters. A used canister must carry a total heat of at most
//! `p_max` and hold at least `n_min` elements. The objective is the number of
//! used canisters.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One canister-filling task.
///
/// Construction goes through [`ProblemInstance::new`] (or deserialization,
/// which routes through the same checks), so every value in hand satisfies
/// the instance invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct ProblemInstance {
    name: String,
    m: usize,
    p: Vec<u64>,
    p_max: u64,
    n_min: usize,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    name: String,
    n: usize,
    m: usize,
    p: Vec<u64>,
    p_max: u64,
    n_min: usize,
}

impl TryFrom<RawInstance> for ProblemInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        if raw.n != raw.p.len() {
            return Err(Error::invariant(format!(
                "n = {} but p has {} entries",
                raw.n,
                raw.p.len()
            )));
        }
        ProblemInstance::new(raw.name, raw.m, raw.p, raw.p_max, raw.n_min)
    }
}

impl From<ProblemInstance> for RawInstance {
    fn from(inst: ProblemInstance) -> Self {
        RawInstance {
            n: inst.p.len(),
            name: inst.name,
            m: inst.m,
            p: inst.p,
            p_max: inst.p_max,
            n_min: inst.n_min,
        }
    }
}

impl ProblemInstance {
    pub fn new(
        name: impl Into<String>,
        m: usize,
        p: Vec<u64>,
        p_max: u64,
        n_min: usize,
    ) -> Result<Self> {
        let name = name.into();
        let n = p.len();
        if n == 0 {
            return Err(Error::invariant("instance needs at least one element"));
        }
        if m == 0 {
            return Err(Error::invariant("instance needs at least one canister"));
        }
        if let Some(i) = p.iter().position(|&pi| pi == 0) {
            return Err(Error::invariant(format!("heat output p[{i}] must be positive")));
        }
        let max_p = *p.iter().max().expect("n >= 1");
        if p_max < max_p {
            return Err(Error::invariant(format!(
                "p_max = {p_max} is below the largest heat output {max_p}"
            )));
        }
        if n_min == 0 || n_min > n {
            return Err(Error::invariant(format!("n_min = {n_min} must lie in 1..={n}")));
        }
        Ok(ProblemInstance {
            name,
            m,
            p,
            p_max,
            n_min,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of fuel elements.
    pub fn n(&self) -> usize {
        self.p.len()
    }

    /// Number of available canisters.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Heat outputs, one per element.
    pub fn p(&self) -> &[u64] {
        &self.p
    }

    pub fn p_max(&self) -> u64 {
        self.p_max
    }

    pub fn n_min(&self) -> usize {
        self.n_min
    }

    pub fn total_heat(&self) -> u64 {
        self.p.iter().sum()
    }

    /// Same instance under a different name.
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        ProblemInstance {
            name: name.into(),
            ..self.clone()
        }
    }

    /// Copy with a different capacity; fails if it drops below `max(p)`.
    pub fn with_p_max(&self, p_max: u64) -> Result<Self> {
        ProblemInstance::new(self.name.clone(), self.m, self.p.clone(), p_max, self.n_min)
    }

    pub fn from_json_str(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serialization is infallible")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text).map_err(|e| Error::parse(path, e))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut text = self.to_json_string();
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Element-to-canister placement.
///
/// Each element sits in exactly one canister by construction; the used set
/// is always derived from the placement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Assignment {
    canister_of: Vec<usize>,
    used: BTreeSet<usize>,
}

impl TryFrom<Vec<usize>> for Assignment {
    type Error = Error;

    fn try_from(canister_of: Vec<usize>) -> Result<Self> {
        Assignment::new(canister_of)
    }
}

impl From<Assignment> for Vec<usize> {
    fn from(asg: Assignment) -> Self {
        asg.canister_of
    }
}

impl Assignment {
    /// Builds an assignment; the empty placement is rejected.
    pub fn new(canister_of: Vec<usize>) -> Result<Self> {
        if canister_of.is_empty() {
            return Err(Error::input("assignment must place at least one element"));
        }
        let used = canister_of.iter().copied().collect();
        Ok(Assignment { canister_of, used })
    }

    /// Builds an assignment and checks it against an instance's shape.
    pub fn for_instance(inst: &ProblemInstance, canister_of: Vec<usize>) -> Result<Self> {
        let asg = Assignment::new(canister_of)?;
        asg.check_shape(inst)?;
        Ok(asg)
    }

    pub fn canister_of(&self) -> &[usize] {
        &self.canister_of
    }

    pub fn used(&self) -> &BTreeSet<usize> {
        &self.used
    }

    pub fn len(&self) -> usize {
        self.canister_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canister_of.is_empty()
    }

    /// Applies a canister relabeling `j -> perm[j]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        let mapped = self
            .canister_of
            .iter()
            .map(|&j| {
                perm.get(j)
                    .copied()
                    .ok_or_else(|| Error::input(format!("permutation has no image for canister {j}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Assignment::new(mapped)
    }

    fn check_shape(&self, inst: &ProblemInstance) -> Result<()> {
        if self.canister_of.len() != inst.n() {
            return Err(Error::input(format!(
                "assignment places {} elements but the instance has {}",
                self.canister_of.len(),
                inst.n()
            )));
        }
        if let Some((i, &j)) = self
            .canister_of
            .iter()
            .enumerate()
            .find(|(_, &j)| j >= inst.m())
        {
            return Err(Error::input(format!(
                "element {i} assigned to canister {j}, but only {} exist",
                inst.m()
            )));
        }
        Ok(())
    }

    /// Per-canister heat load and element count, indexed by canister.
    pub fn loads(&self, inst: &ProblemInstance) -> (Vec<u64>, Vec<usize>) {
        let mut heat = vec![0u64; inst.m()];
        let mut count = vec![0usize; inst.m()];
        for (&j, &pi) in self.canister_of.iter().zip(inst.p()) {
            heat[j] += pi;
            count[j] += 1;
        }
        (heat, count)
    }
}

impl std::fmt::Display for Assignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, j) in self.canister_of.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityViolation {
    pub canister: usize,
    pub load: u64,
    pub p_max: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnderfillViolation {
    pub canister: usize,
    pub count: usize,
    pub n_min: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub capacity_violations: Vec<CapacityViolation>,
    pub underfill_violations: Vec<UnderfillViolation>,
    pub objective_m: usize,
}

impl std::fmt::Display for FeasibilityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "feasible: {}  (M = {})",
            if self.feasible { "yes" } else { "no" },
            self.objective_m
        )?;
        for v in &self.capacity_violations {
            writeln!(
                f,
                "  capacity: canister {} carries {} > p_max {}",
                v.canister, v.load, v.p_max
            )?;
        }
        for v in &self.underfill_violations {
            writeln!(
                f,
                "  underfill: canister {} holds {} < n_min {}",
                v.canister, v.count, v.n_min
            )?;
        }
        Ok(())
    }
}

/// Checks an assignment against the capacity and minimum-fill constraints.
pub fn validate_assignment(inst: &ProblemInstance, asg: &Assignment) -> Result<FeasibilityReport> {
    asg.check_shape(inst)?;
    let (heat, count) = asg.loads(inst);

    let capacity_violations: Vec<_> = heat
        .iter()
        .enumerate()
        .filter(|(_, &load)| load > inst.p_max())
        .map(|(canister, &load)| CapacityViolation {
            canister,
            load,
            p_max: inst.p_max(),
        })
        .collect();

    let underfill_violations: Vec<_> = count
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0 && c < inst.n_min())
        .map(|(canister, &count)| UnderfillViolation {
            canister,
            count,
            n_min: inst.n_min(),
        })
        .collect();

    Ok(FeasibilityReport {
        feasible: capacity_violations.is_empty() && underfill_violations.is_empty(),
        capacity_violations,
        underfill_violations,
        objective_m: objective(asg),
    })
}

/// Number of used canisters.
pub fn objective(asg: &Assignment) -> usize {
    asg.used.len()
}
