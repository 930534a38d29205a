//! EM deciders and the parity problems built on top of them.

pub mod algebraic;
pub mod poly;

use serde::{Deserialize, Serialize};

use crate::enumerate::EnumerationBudget;
use crate::error::Result;
use crate::graph::EmInstance;
use crate::oracles::brute_em;

pub use algebraic::{
    algebraic_em_decide, find_bipartition, sample_isolation_weights, symbolic_determinant, AlgebraicOutcome,
    Bipartition, Side, WeightAssignment, DEFAULT_TRIALS,
};
pub use poly::RedPolynomial;

/// A decision. `ProbablyNo` carries an upper bound on the chance that the true answer is yes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Answer {
    Yes,
    No,
    ProbablyNo { error_bound: f64 },
}

impl Answer {
    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }

    pub fn error_bound(self) -> f64 {
        match self {
            Answer::ProbablyNo { error_bound } => error_bound,
            _ => 0.0,
        }
    }
}

pub trait EmDecider {
    fn decide(&self, inst: &EmInstance) -> Result<Answer>;
}

/// Exhaustive enumeration.
#[derive(Debug, Clone, Copy, Default)]
pub struct BruteEm {
    pub budget: EnumerationBudget,
}

impl EmDecider for BruteEm {
    fn decide(&self, inst: &EmInstance) -> Result<Answer> {
        Ok(match brute_em(inst, self.budget)? {
            Some(_) => Answer::Yes,
            None => Answer::No,
        })
    }
}

/// [`algebraic_em_decide`] with fixed trial count and seed; bipartite graphs only.
#[derive(Debug, Clone, Copy)]
pub struct AlgebraicEm {
    pub trials: u32,
    pub seed: u64,
}

impl Default for AlgebraicEm {
    fn default() -> Self {
        AlgebraicEm {
            trials: DEFAULT_TRIALS,
            seed: 0,
        }
    }
}

impl EmDecider for AlgebraicEm {
    fn decide(&self, inst: &EmInstance) -> Result<Answer> {
        Ok(algebraic_em_decide(inst, self.trials, self.seed)?.answer)
    }
}

/// Asks `decider` about each target in turn; yes on the first yes.
/// A no accumulates the error bounds of the randomized answers (union bound).
fn any_target(
    inst: &EmInstance,
    targets: impl Iterator<Item = usize>,
    decider: &impl EmDecider,
) -> Result<Answer> {
    let mut error = 0.0;
    for target in targets {
        let query = EmInstance::new(inst.graph.clone(), target);
        match decider.decide(&query)? {
            Answer::Yes => return Ok(Answer::Yes),
            Answer::No => {}
            Answer::ProbablyNo { error_bound } => error += error_bound,
        }
    }
    Ok(if error > 0.0 {
        Answer::ProbablyNo {
            error_bound: error.min(1.0),
        }
    } else {
        Answer::No
    })
}

/// CPM: is there a perfect matching whose red count has the parity of `k`?
pub fn cpm_via_em(inst: &EmInstance, decider: &impl EmDecider) -> Result<Answer> {
    let half = inst.graph.vertex_count() / 2;
    any_target(inst, (inst.k % 2..=half).step_by(2), decider)
}

/// BCPM: as CPM, but the red count must also be at most `k`.
pub fn bcpm_via_em(inst: &EmInstance, decider: &impl EmDecider) -> Result<Answer> {
    let top = inst.k.min(inst.graph.vertex_count() / 2);
    any_target(inst, (inst.k % 2..=top).step_by(2), decider)
}
