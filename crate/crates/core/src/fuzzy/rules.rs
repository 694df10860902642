use alloc::vec::Vec;
use core::fmt;

use crate::error::FuzzyError;

macro_rules! term_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $label:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn label(self) -> &'static str {
                match self {
                    $($name::$variant => $label),+
                }
            }

            pub fn index(self) -> usize {
                self as usize
            }

            pub fn from_label(label: &str) -> Option<Self> {
                match label {
                    $($label => Some($name::$variant),)+
                    _ => None,
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.label())
            }
        }
    };
}

term_enum!(
    /// Terms of the distance-to-base-station input.
    DistanceTerm { Close => "close", Medium => "medium", Far => "far" }
);

term_enum!(
    /// Terms of the residual-energy input.
    EnergyTerm { Low => "low", Medium => "medium", High => "high" }
);

term_enum!(
    /// Terms of the competition-radius output.
    RadiusTerm {
        VerySmall => "very_small",
        Small => "small",
        Medium => "medium",
        Large => "large",
        VeryLarge => "very_large",
    }
);

/// `IF distance IS .. AND energy IS .. THEN radius IS ..`
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzyRule {
    pub distance: DistanceTerm,
    pub energy: EnergyTerm,
    pub radius: RadiusTerm,
}

impl FuzzyRule {
    pub const fn new(distance: DistanceTerm, energy: EnergyTerm, radius: RadiusTerm) -> Self {
        Self {
            distance,
            energy,
            radius,
        }
    }

    pub fn from_labels(distance: &str, energy: &str, radius: &str) -> Result<Self, FuzzyError> {
        let unknown = |label: &str| FuzzyError::UnknownTerm(label.into());
        Ok(Self {
            distance: DistanceTerm::from_label(distance).ok_or_else(|| unknown(distance))?,
            energy: EnergyTerm::from_label(energy).ok_or_else(|| unknown(energy))?,
            radius: RadiusTerm::from_label(radius).ok_or_else(|| unknown(radius))?,
        })
    }
}

/// Rule table for the competition-radius system.
///
/// [`RuleBase::new`] only accepts complete tables: each (distance, energy)
/// pair exactly once. [`RuleBase::printed`] keeps the original nine-row
/// table verbatim, duplicates and gaps included, and is only useful for
/// side-by-side probes.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleBase {
    rules: Vec<FuzzyRule>,
    complete: bool,
}

use DistanceTerm as D;
use EnergyTerm as E;
use RadiusTerm as R;

const REPAIRED: [FuzzyRule; 9] = [
    FuzzyRule::new(D::Close, E::Low, R::VerySmall),
    FuzzyRule::new(D::Close, E::Medium, R::Small),
    FuzzyRule::new(D::Close, E::High, R::Small),
    FuzzyRule::new(D::Medium, E::Low, R::Small),
    FuzzyRule::new(D::Medium, E::Medium, R::Medium),
    FuzzyRule::new(D::Medium, E::High, R::Large),
    FuzzyRule::new(D::Far, E::Low, R::Large),
    FuzzyRule::new(D::Far, E::Medium, R::Large),
    FuzzyRule::new(D::Far, E::High, R::VeryLarge),
];

const PRINTED: [FuzzyRule; 9] = [
    FuzzyRule::new(D::Close, E::Low, R::VerySmall),
    FuzzyRule::new(D::Close, E::Medium, R::Small),
    FuzzyRule::new(D::Close, E::Medium, R::Small),
    FuzzyRule::new(D::Medium, E::Low, R::Small),
    FuzzyRule::new(D::Medium, E::Medium, R::Medium),
    FuzzyRule::new(D::Medium, E::Medium, R::Large),
    FuzzyRule::new(D::Far, E::Low, R::Large),
    FuzzyRule::new(D::Far, E::Medium, R::Large),
    FuzzyRule::new(D::Far, E::High, R::VeryLarge),
];

impl RuleBase {
    pub fn new(rules: Vec<FuzzyRule>) -> Result<Self, FuzzyError> {
        for (i, rule) in rules.iter().enumerate() {
            if rules[..i]
                .iter()
                .any(|r| r.distance == rule.distance && r.energy == rule.energy)
            {
                return Err(FuzzyError::DuplicateRule {
                    distance: rule.distance,
                    energy: rule.energy,
                });
            }
        }
        for &distance in DistanceTerm::ALL {
            for &energy in EnergyTerm::ALL {
                if !rules
                    .iter()
                    .any(|r| r.distance == distance && r.energy == energy)
                {
                    return Err(FuzzyError::MissingRule { distance, energy });
                }
            }
        }
        Ok(Self {
            rules,
            complete: true,
        })
    }

    /// Accepts any table, including duplicated or missing antecedent pairs.
    pub fn new_unchecked(rules: Vec<FuzzyRule>) -> Self {
        let complete = Self::new(rules.clone()).is_ok();
        Self { rules, complete }
    }

    /// The default table: the original one with its two duplicated rows
    /// re-targeted at the missing (close, high) and (medium, high) pairs.
    pub fn repaired() -> Self {
        Self {
            rules: REPAIRED.to_vec(),
            complete: true,
        }
    }

    /// The original nine-row table, verbatim.
    pub fn printed() -> Self {
        Self {
            rules: PRINTED.to_vec(),
            complete: false,
        }
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.rules
    }

    /// True when every (distance, energy) pair has exactly one rule.
    pub fn is_complete(&self) -> bool {
        self.complete
    }
}

impl Default for RuleBase {
    fn default() -> Self {
        Self::repaired()
    }
}
