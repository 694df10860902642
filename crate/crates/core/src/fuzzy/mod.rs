//! Mamdani inference for the competition-radius controller.
//!
//! Min for AND and implication, max for aggregation, centroid defuzzification.

mod inference;
mod membership;
mod rules;
mod system;
mod variable;

pub use inference::{infer, AggregatedOutput};
pub use membership::MembershipFunction;
pub use rules::{DistanceTerm, EnergyTerm, FuzzyRule, RadiusTerm, RuleBase};
pub use system::{FuzzySystem, DEFAULT_RESOLUTION};
pub use variable::LinguisticVariable;
