use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::Rng;

use super::SensorNode;
use crate::fuzzy::FuzzySystem;
use crate::geometry::Point;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FcaParams {
    /// Probability of becoming a tentative head, in `(0, 1)`.
    pub t: f64,
    /// Maximum competition radius, meters.
    pub r_max: f64,
    /// Largest possible node-to-base-station distance, meters.
    pub d_max: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TentativeHead {
    pub id: usize,
    /// Competition radius, meters.
    pub r_comp: f64,
    pub residual_energy: f64,
    pub quit: bool,
}

/// Every alive node draws `mu ~ U[0, 1)`; those with `mu < T` become
/// tentative heads with a fuzzy competition radius from their normalized
/// distance to the base station and normalized residual energy.
pub fn fca_select_tentatives<R: Rng + ?Sized>(
    nodes: &[SensorNode],
    params: &FcaParams,
    initial_energy: f64,
    fuzzy: &FuzzySystem,
    rng: &mut R,
) -> Vec<TentativeHead> {
    let mut tentatives = Vec::new();
    for node in nodes.iter().filter(|n| n.alive) {
        let mu: f64 = rng.gen();
        if mu < params.t {
            let r_comp = fuzzy
                .compute_radius(
                    node.distance_to_bs / params.d_max,
                    node.residual_energy / initial_energy,
                    params.r_max,
                )
                .expect("a complete rule base covers every input");
            tentatives.push(TentativeHead {
                id: node.id,
                r_comp,
                residual_energy: node.residual_energy,
                quit: false,
            });
        }
    }
    tentatives
}

/// Energy-based competition among tentative heads.
///
/// Candidates are swept strongest first (higher residual energy, then lower
/// id); a candidate quits when an already-surviving candidate lies within
/// the larger of their two radii. Sets `quit` on the losers and returns the
/// surviving ids in ascending order.
pub fn fca_compete(tentatives: &mut [TentativeHead], positions: &[Point]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..tentatives.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&tentatives[i], &tentatives[j]);
        b.residual_energy
            .total_cmp(&a.residual_energy)
            .then(a.id.cmp(&b.id))
    });

    let mut survivors: Vec<usize> = Vec::new();
    for &i in &order {
        let me = tentatives[i];
        let covered = survivors.iter().any(|&j| {
            let other = &tentatives[j];
            let reach = me.r_comp.max(other.r_comp);
            positions[me.id].distance(positions[other.id]) <= reach
        });
        tentatives[i].quit = covered;
        if !covered {
            survivors.push(i);
        }
    }

    let mut ids: Vec<usize> = survivors.into_iter().map(|i| tentatives[i].id).collect();
    ids.sort_unstable();
    ids
}

/// True when `a` beats `b` in the competition ordering.
pub fn stronger(a: &TentativeHead, b: &TentativeHead) -> bool {
    match a.residual_energy.total_cmp(&b.residual_energy) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => a.id < b.id,
    }
}
