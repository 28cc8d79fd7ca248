//! Walk-step cost accounting. One application of the controlled walk
//! operator is the runtime unit; phase estimation with t ancilla bits
//! charges exactly 2^t steps.

use serde::Serialize;

/// Which stage of an algorithm a charge belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    FindEta,
    Interval,
    Sampling,
    Refinement,
}

/// Nondecreasing counter of charged controlled-walk applications, broken
/// down by algorithm phase.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CostLedger {
    pub find_eta: u64,
    pub interval: u64,
    pub sampling: u64,
    pub refinement: u64,
}

impl CostLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge(&mut self, phase: Phase, steps: u64) {
        match phase {
            Phase::FindEta => self.find_eta += steps,
            Phase::Interval => self.interval += steps,
            Phase::Sampling => self.sampling += steps,
            Phase::Refinement => self.refinement += steps,
        }
    }

    pub fn total(&self) -> u64 {
        self.find_eta + self.interval + self.sampling + self.refinement
    }

    pub fn merge(&mut self, other: &CostLedger) {
        self.find_eta += other.find_eta;
        self.interval += other.interval;
        self.sampling += other.sampling;
        self.refinement += other.refinement;
    }
}
