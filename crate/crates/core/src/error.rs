use alloc::string::String;
use core::fmt;

use crate::fuzzy::{DistanceTerm, EnergyTerm};

#[derive(Clone, Debug, PartialEq)]
pub enum FuzzyError {
    UnorderedBreakpoints {
        points: [f64; 4],
        count: usize,
    },
    BreakpointCount(usize),
    InvalidUniverse {
        variable: String,
        lo: f64,
        hi: f64,
    },
    TermOutsideUniverse {
        variable: String,
        term: String,
    },
    DuplicateTerm {
        variable: String,
        term: String,
    },
    CoverageGap {
        variable: String,
        at: f64,
    },
    MissingTerm {
        variable: String,
        term: &'static str,
    },
    UnknownTerm(String),
    DuplicateRule {
        distance: DistanceTerm,
        energy: EnergyTerm,
    },
    MissingRule {
        distance: DistanceTerm,
        energy: EnergyTerm,
    },
    InvalidResolution,
    /// Every clip level was zero. Unreachable with a complete rule base.
    EmptyAggregate,
}

impl fmt::Display for FuzzyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnorderedBreakpoints { points, count } => {
                write!(
                    f,
                    "breakpoints {:?} must be finite and non-decreasing",
                    &points[..*count]
                )
            }
            Self::BreakpointCount(n) => {
                write!(
                    f,
                    "expected 3 (triangle) or 4 (trapezoid) breakpoints, got {n}"
                )
            }
            Self::InvalidUniverse { variable, lo, hi } => {
                write!(f, "variable `{variable}`: invalid universe [{lo}, {hi}]")
            }
            Self::TermOutsideUniverse { variable, term } => {
                write!(
                    f,
                    "variable `{variable}`: term `{term}` leaves the universe"
                )
            }
            Self::DuplicateTerm { variable, term } => {
                write!(f, "variable `{variable}`: term `{term}` defined twice")
            }
            Self::CoverageGap { variable, at } => {
                write!(f, "variable `{variable}`: no term covers {at}")
            }
            Self::MissingTerm { variable, term } => {
                write!(f, "variable `{variable}`: missing term `{term}`")
            }
            Self::UnknownTerm(term) => write!(f, "unknown term `{term}`"),
            Self::DuplicateRule { distance, energy } => {
                write!(f, "more than one rule for ({distance}, {energy})")
            }
            Self::MissingRule { distance, energy } => {
                write!(f, "no rule for ({distance}, {energy})")
            }
            Self::InvalidResolution => f.write_str("defuzzification resolution must be positive"),
            Self::EmptyAggregate => f.write_str("no rule fired; aggregate output is empty"),
        }
    }
}

/// A scenario parameter outside its valid range. `key` is the config key
/// (`section.name`) holding the bad value.
#[derive(Clone, Debug, PartialEq)]
pub struct InvalidParameter {
    pub key: &'static str,
    pub reason: String,
}

impl fmt::Display for InvalidParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`: {}", self.key, self.reason)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesError {
    Empty,
    /// The alive count went up at this round.
    Increasing {
        round: usize,
    },
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Empty => f.write_str("empty round series"),
            Self::Increasing { round } => write!(f, "alive count increases at round {round}"),
        }
    }
}

impl core::error::Error for FuzzyError {}
impl core::error::Error for InvalidParameter {}
impl core::error::Error for SeriesError {}
