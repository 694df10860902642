use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::SensorNode;

/// Rotation bookkeeping for LEACH.
///
/// A node is eligible (a member of G) until it serves as head, and every
/// node becomes eligible again at the start of each epoch of `floor(1/P)`
/// rounds.
#[derive(Clone, Debug, PartialEq)]
pub struct LeachState {
    p: f64,
    round: usize,
    eligible: Vec<bool>,
}

impl LeachState {
    /// `p` must lie in `(0, 1)`.
    pub fn new(p: f64, node_count: usize) -> Self {
        Self {
            p,
            round: 0,
            eligible: vec![true; node_count],
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn epoch_len(&self) -> usize {
        // 1/P for P = 0.1 etc. must not floor to 9 through rounding.
        (libm::floor(1.0 / self.p + 1e-9) as usize).max(1)
    }

    pub fn is_eligible(&self, id: usize) -> bool {
        self.eligible[id]
    }

    pub fn set_eligible(&mut self, id: usize, eligible: bool) {
        self.eligible[id] = eligible;
    }

    /// Moves to `round`, restoring everyone's eligibility on epoch boundaries.
    pub fn begin_round(&mut self, round: usize) {
        self.round = round;
        if round.is_multiple_of(self.epoch_len()) {
            self.eligible.iter_mut().for_each(|e| *e = true);
        }
    }

    /// `T(n) = P / (1 - P * (r mod 1/P))` for eligible nodes, 0 otherwise.
    pub fn threshold(&self, id: usize) -> f64 {
        if !self.eligible[id] {
            return 0.0;
        }
        let phase = (self.round % self.epoch_len()) as f64;
        self.p / (1.0 - self.p * phase)
    }
}

/// Every alive node draws `u ~ U[0, 1)` and becomes head iff `u < T(n)`.
/// Heads lose eligibility. Returns head ids in ascending order; may be empty.
pub fn leach_elect<R: Rng + ?Sized>(
    nodes: &[SensorNode],
    state: &mut LeachState,
    rng: &mut R,
) -> Vec<usize> {
    let mut heads = Vec::new();
    for node in nodes.iter().filter(|n| n.alive) {
        let u: f64 = rng.gen();
        if u < state.threshold(node.id) {
            state.set_eligible(node.id, false);
            heads.push(node.id);
        }
    }
    heads
}
