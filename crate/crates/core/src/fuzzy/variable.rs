use alloc::string::String;
use alloc::vec::Vec;

use super::MembershipFunction;
use crate::error::FuzzyError;

/// A named fuzzy variable: a closed universe partitioned by labelled terms.
///
/// Construction enforces that every term lies inside the universe and that
/// the terms jointly cover it, so fuzzification never yields all-zero degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct LinguisticVariable {
    name: String,
    universe: (f64, f64),
    terms: Vec<(String, MembershipFunction)>,
}

impl LinguisticVariable {
    pub fn new(
        name: impl Into<String>,
        universe: (f64, f64),
        terms: Vec<(String, MembershipFunction)>,
    ) -> Result<Self, FuzzyError> {
        let name = name.into();
        let (lo, hi) = universe;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(FuzzyError::InvalidUniverse {
                variable: name,
                lo,
                hi,
            });
        }
        for (i, (label, mf)) in terms.iter().enumerate() {
            if terms[..i].iter().any(|(other, _)| other == label) {
                return Err(FuzzyError::DuplicateTerm {
                    variable: name,
                    term: label.clone(),
                });
            }
            let (first, last) = mf.support();
            if first < lo || last > hi {
                return Err(FuzzyError::TermOutsideUniverse {
                    variable: name,
                    term: label.clone(),
                });
            }
        }
        if let Some(at) = first_uncovered_point(lo, hi, &terms) {
            return Err(FuzzyError::CoverageGap { variable: name, at });
        }
        Ok(Self {
            name,
            universe,
            terms,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> (f64, f64) {
        self.universe
    }

    pub fn terms(&self) -> &[(String, MembershipFunction)] {
        &self.terms
    }

    pub fn term(&self, label: &str) -> Option<&MembershipFunction> {
        self.terms
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, mf)| mf)
    }

    pub fn clamp(&self, x: f64) -> f64 {
        let (lo, hi) = self.universe;
        if x.is_nan() {
            lo
        } else {
            x.clamp(lo, hi)
        }
    }

    /// Degree of `x` in every term, in term order. `x` is clamped into the universe.
    pub fn fuzzify(&self, x: f64) -> Vec<(&str, f64)> {
        let x = self.clamp(x);
        self.terms
            .iter()
            .map(|(label, mf)| (label.as_str(), mf.degree(x)))
            .collect()
    }
}

/// Region of the universe where a term has strictly positive degree.
#[derive(Clone, Copy, Debug)]
struct Positive {
    lo: f64,
    lo_closed: bool,
    hi: f64,
    hi_closed: bool,
}

fn positive_region(mf: &MembershipFunction) -> Positive {
    let (a, b, c, d) = match *mf {
        MembershipFunction::Triangular { a, b, c } => (a, b, b, c),
        MembershipFunction::Trapezoidal { a, b, c, d } => (a, b, c, d),
    };
    Positive {
        lo: a,
        lo_closed: a == b,
        hi: d,
        hi_closed: c == d,
    }
}

/// Greedy sweep over the positive regions; returns the first point of
/// `[lo, hi]` that no term covers.
fn first_uncovered_point(lo: f64, hi: f64, terms: &[(String, MembershipFunction)]) -> Option<f64> {
    let regions: Vec<Positive> = terms.iter().map(|(_, mf)| positive_region(mf)).collect();
    // Everything below `point` is covered; `point` itself is covered iff `point_covered`.
    let mut point = lo;
    let mut point_covered = false;
    while point < hi || (point == hi && !point_covered) {
        let mut best: Option<(f64, bool)> = None;
        for r in &regions {
            let starts_in_time = r.lo < point || (r.lo == point && (point_covered || r.lo_closed));
            let extends = r.hi > point || (!point_covered && r.hi == point && r.hi_closed);
            if starts_in_time && extends {
                let better = match best {
                    None => true,
                    Some((h, closed)) => r.hi > h || (r.hi == h && r.hi_closed && !closed),
                };
                if better {
                    best = Some((r.hi, r.hi_closed));
                }
            }
        }
        let Some((reach, closed)) = best else {
            return Some(point);
        };
        if reach > point {
            point = reach;
            point_covered = closed;
        } else {
            point_covered = true;
        }
    }
    None
}
