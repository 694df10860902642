use alloc::string::String;
use alloc::vec::Vec;

use super::{
    infer, AggregatedOutput, DistanceTerm, EnergyTerm, LinguisticVariable, MembershipFunction,
    RadiusTerm, RuleBase,
};
use crate::error::FuzzyError;

pub const DEFAULT_RESOLUTION: usize = 10_000;

/// The two-input, one-output competition-radius controller.
///
/// Inputs are the node's distance to the base station and its residual
/// energy, both normalized to `[0, 1]`; the output is a fraction of the
/// maximum competition radius.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzySystem {
    distance: LinguisticVariable,
    energy: LinguisticVariable,
    radius: LinguisticVariable,
    distance_terms: [MembershipFunction; 3],
    energy_terms: [MembershipFunction; 3],
    radius_terms: [MembershipFunction; 5],
    rules: RuleBase,
    resolution: usize,
}

fn canonical<const N: usize>(
    var: &LinguisticVariable,
    labels: [&'static str; N],
) -> Result<[MembershipFunction; N], FuzzyError> {
    if let Some((extra, _)) = var
        .terms()
        .iter()
        .find(|(l, _)| !labels.contains(&l.as_str()))
    {
        return Err(FuzzyError::UnknownTerm(extra.clone()));
    }
    let mut out = [MembershipFunction::Triangular {
        a: 0.0,
        b: 0.0,
        c: 0.0,
    }; N];
    for (slot, label) in out.iter_mut().zip(labels) {
        *slot = *var.term(label).ok_or_else(|| FuzzyError::MissingTerm {
            variable: String::from(var.name()),
            term: label,
        })?;
    }
    Ok(out)
}

fn labels<T: Copy, const N: usize>(all: &[T], label: fn(T) -> &'static str) -> [&'static str; N] {
    let mut out = [""; N];
    for (slot, &t) in out.iter_mut().zip(all) {
        *slot = label(t);
    }
    out
}

impl FuzzySystem {
    /// Each variable must carry exactly its expected term labels, in any order.
    pub fn new(
        distance: LinguisticVariable,
        energy: LinguisticVariable,
        radius: LinguisticVariable,
        rules: RuleBase,
        resolution: usize,
    ) -> Result<Self, FuzzyError> {
        if resolution == 0 {
            return Err(FuzzyError::InvalidResolution);
        }
        let distance_terms = canonical(&distance, labels(DistanceTerm::ALL, DistanceTerm::label))?;
        let energy_terms = canonical(&energy, labels(EnergyTerm::ALL, EnergyTerm::label))?;
        let radius_terms = canonical(&radius, labels(RadiusTerm::ALL, RadiusTerm::label))?;
        Ok(Self {
            distance,
            energy,
            radius,
            distance_terms,
            energy_terms,
            radius_terms,
            rules,
            resolution,
        })
    }

    pub fn default_distance() -> LinguisticVariable {
        input_variable("distance", ["close", "medium", "far"])
    }

    pub fn default_energy() -> LinguisticVariable {
        input_variable("energy", ["low", "medium", "high"])
    }

    pub fn default_radius() -> LinguisticVariable {
        let terms = [
            ("very_small", &[0.0, 0.0, 0.1, 0.25][..]),
            ("small", &[0.1, 0.3, 0.5]),
            ("medium", &[0.3, 0.5, 0.7]),
            ("large", &[0.5, 0.7, 0.9]),
            ("very_large", &[0.75, 0.9, 1.0, 1.0]),
        ];
        build("radius", &terms)
    }

    pub fn distance(&self) -> &LinguisticVariable {
        &self.distance
    }

    pub fn energy(&self) -> &LinguisticVariable {
        &self.energy
    }

    pub fn radius(&self) -> &LinguisticVariable {
        &self.radius
    }

    pub fn rules(&self) -> &RuleBase {
        &self.rules
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn with_rules(mut self, rules: RuleBase) -> Self {
        self.rules = rules;
        self
    }

    pub fn with_resolution(mut self, resolution: usize) -> Result<Self, FuzzyError> {
        if resolution == 0 {
            return Err(FuzzyError::InvalidResolution);
        }
        self.resolution = resolution;
        Ok(self)
    }

    /// Degrees of a normalized distance, indexed by [`DistanceTerm::index`].
    pub fn fuzzify_distance(&self, d_norm: f64) -> [f64; 3] {
        let x = self.distance.clamp(d_norm);
        self.distance_terms.map(|mf| mf.degree(x))
    }

    /// Degrees of a normalized residual energy, indexed by [`EnergyTerm::index`].
    pub fn fuzzify_energy(&self, e_norm: f64) -> [f64; 3] {
        let x = self.energy.clamp(e_norm);
        self.energy_terms.map(|mf| mf.degree(x))
    }

    pub fn infer(&self, distance: &[f64; 3], energy: &[f64; 3]) -> AggregatedOutput {
        infer(
            &self.rules,
            distance,
            energy,
            &self.radius_terms,
            self.radius.universe(),
        )
    }

    /// Crisp output in the radius universe for normalized inputs (clamped).
    pub fn evaluate(&self, d_norm: f64, e_norm: f64) -> Result<f64, FuzzyError> {
        let agg = self.infer(&self.fuzzify_distance(d_norm), &self.fuzzify_energy(e_norm));
        agg.defuzzify_centroid(self.resolution)
    }

    /// Competition radius in meters: `r_max` scaled by the defuzzified output.
    ///
    /// Fails only with [`FuzzyError::EmptyAggregate`], which a complete rule
    /// base over covering variables cannot produce.
    pub fn compute_radius(&self, d_norm: f64, e_norm: f64, r_max: f64) -> Result<f64, FuzzyError> {
        Ok(r_max * self.evaluate(d_norm, e_norm)?)
    }
}

impl Default for FuzzySystem {
    fn default() -> Self {
        Self::new(
            Self::default_distance(),
            Self::default_energy(),
            Self::default_radius(),
            RuleBase::repaired(),
            DEFAULT_RESOLUTION,
        )
        .expect("default fuzzy system is well formed")
    }
}

fn input_variable(name: &str, labels: [&str; 3]) -> LinguisticVariable {
    let shapes: [&[f64]; 3] = [
        &[0.0, 0.0, 0.2, 0.4],
        &[0.2, 0.5, 0.8],
        &[0.6, 0.8, 1.0, 1.0],
    ];
    let terms: Vec<(&str, &[f64])> = labels.into_iter().zip(shapes).collect();
    build(name, &terms)
}

fn build(name: &str, terms: &[(&str, &[f64])]) -> LinguisticVariable {
    let terms = terms
        .iter()
        .map(|(l, p)| {
            (
                String::from(*l),
                MembershipFunction::from_breakpoints(p).expect("ordered breakpoints"),
            )
        })
        .collect();
    LinguisticVariable::new(name, (0.0, 1.0), terms).expect("default variable covers [0, 1]")
}
