//! Per-round clustering: LEACH and fuzzy competition-radius clustering (FCA).

mod cluster;
mod fca;
mod leach;
mod round;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use cluster::{form_clusters, ClusterAssignment, ReachPolicy};
pub use fca::{fca_compete, fca_select_tentatives, stronger, FcaParams, TentativeHead};
pub use leach::{leach_elect, LeachState};
pub use round::{run_round, ProtocolParams, RoundMetrics, RoundOutcome};

use crate::geometry::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Protocol {
    Leach,
    Fca,
}

impl Protocol {
    pub const ALL: [Protocol; 2] = [Protocol::Leach, Protocol::Fca];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Leach => "leach",
            Protocol::Fca => "fca",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "leach" => Ok(Protocol::Leach),
            "fca" => Ok(Protocol::Fca),
            _ => Err(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Member,
    TentativeHead,
    Head,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SensorNode {
    pub id: usize,
    pub position: Point,
    pub residual_energy: f64,
    pub alive: bool,
    pub role: Role,
    /// Fixed for the whole run; nodes never move.
    pub distance_to_bs: f64,
}

impl SensorNode {
    pub fn new(id: usize, position: Point, energy: f64, base_station: Point) -> Self {
        Self {
            id,
            position,
            residual_energy: energy,
            alive: energy > 0.0,
            role: Role::Member,
            distance_to_bs: position.distance(base_station),
        }
    }
}

/// The mutable world a trial evolves one round at a time.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkState {
    nodes: Vec<SensorNode>,
    base_station: Point,
    area: (f64, f64),
    initial_energy: f64,
    round: usize,
    leach: LeachState,
}

impl NetworkState {
    /// Node ids must equal their index.
    pub fn new(
        nodes: Vec<SensorNode>,
        base_station: Point,
        area: (f64, f64),
        initial_energy: f64,
        leach_p: f64,
    ) -> Self {
        debug_assert!(nodes.iter().enumerate().all(|(i, n)| n.id == i));
        let leach = LeachState::new(leach_p, nodes.len());
        Self {
            nodes,
            base_station,
            area,
            initial_energy,
            round: 0,
            leach,
        }
    }

    pub fn nodes(&self) -> &[SensorNode] {
        &self.nodes
    }

    pub fn base_station(&self) -> Point {
        self.base_station
    }

    pub fn area(&self) -> (f64, f64) {
        self.area
    }

    pub fn initial_energy(&self) -> f64 {
        self.initial_energy
    }

    /// Index of the next round to run.
    pub fn round(&self) -> usize {
        self.round
    }

    pub fn leach(&self) -> &LeachState {
        &self.leach
    }

    pub fn alive_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.alive).count()
    }

    pub fn total_energy(&self) -> f64 {
        self.nodes.iter().map(|n| n.residual_energy).sum()
    }

    pub fn positions(&self) -> Vec<Point> {
        self.nodes.iter().map(|n| n.position).collect()
    }

    /// Largest distance from any corner of the area to the base station.
    pub fn d_max(&self) -> f64 {
        let (w, h) = self.area;
        [
            Point::new(0.0, 0.0),
            Point::new(w, 0.0),
            Point::new(0.0, h),
            Point::new(w, h),
        ]
        .into_iter()
        .map(|c| c.distance(self.base_station))
        .fold(0.0, f64::max)
    }
}
