use alloc::vec::Vec;

use super::{MembershipFunction, RuleBase};
use crate::error::FuzzyError;

/// Max-aggregate of min-clipped consequent sets.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregatedOutput {
    clipped: Vec<(MembershipFunction, f64)>,
    universe: (f64, f64),
}

impl AggregatedOutput {
    /// Clip levels are clamped into `[0, 1]`.
    pub fn new(clipped: Vec<(MembershipFunction, f64)>, universe: (f64, f64)) -> Self {
        let clipped = clipped
            .into_iter()
            .map(|(mf, level)| {
                (
                    mf,
                    if level.is_nan() {
                        0.0
                    } else {
                        level.clamp(0.0, 1.0)
                    },
                )
            })
            .collect();
        Self { clipped, universe }
    }

    pub fn clipped_terms(&self) -> &[(MembershipFunction, f64)] {
        &self.clipped
    }

    pub fn universe(&self) -> (f64, f64) {
        self.universe
    }

    pub fn is_empty(&self) -> bool {
        self.clipped.iter().all(|&(_, level)| level <= 0.0)
    }

    pub fn degree(&self, x: f64) -> f64 {
        self.clipped
            .iter()
            .filter(|&&(_, level)| level > 0.0)
            .map(|&(mf, level)| mf.degree(x).min(level))
            .fold(0.0, f64::max)
    }

    /// Center of gravity of the aggregate, taken as the midpoint-rule sum
    /// over `resolution` equal cells of the universe.
    ///
    /// The aggregate is piecewise linear, so the sum over each linear piece is
    /// accumulated in closed form; samples that land exactly on a breakpoint
    /// are evaluated directly. The result equals the sample-by-sample sum up
    /// to floating-point rounding.
    pub fn defuzzify_centroid(&self, resolution: usize) -> Result<f64, FuzzyError> {
        if resolution == 0 {
            return Err(FuzzyError::InvalidResolution);
        }
        if self.is_empty() {
            return Err(FuzzyError::EmptyAggregate);
        }
        let (lo, hi) = self.universe;
        let cells = Cells {
            lo,
            step: (hi - lo) / resolution as f64,
            count: resolution,
        };

        let breaks = self.breakpoints();
        let mut weight = 0.0;
        let mut moment = 0.0;
        for pair in breaks.windows(2) {
            let (p, q) = (pair[0], pair[1]);
            let Some((first, last)) = cells.strictly_inside(p, q) else {
                continue;
            };
            let (u1, u2) = (p + 0.25 * (q - p), p + 0.75 * (q - p));
            let (v1, v2) = (self.degree(u1), self.degree(u2));
            let slope = (v2 - v1) / (u2 - u1);
            let intercept = v1 - slope * u1;

            let m = (last - first + 1) as f64;
            let centre = 0.5 * (first + last) as f64 + 0.5;
            let mean_x = lo + cells.step * centre;
            let sum_x = m * mean_x;
            let sum_x2 = m * mean_x * mean_x + cells.step * cells.step * m * (m * m - 1.0) / 12.0;
            weight += slope * sum_x + intercept * m;
            moment += slope * sum_x2 + intercept * sum_x;
        }
        for &b in &breaks {
            if let Some(i) = cells.index_at(b) {
                let x = cells.sample(i);
                let mu = self.degree(x);
                weight += mu;
                moment += x * mu;
            }
        }

        if weight <= 0.0 {
            return Err(FuzzyError::EmptyAggregate);
        }
        Ok((moment / weight).clamp(lo, hi))
    }

    /// Sorted points between which the aggregate is linear.
    fn breakpoints(&self) -> Vec<f64> {
        let (lo, hi) = self.universe;
        let active: Vec<(MembershipFunction, f64)> = self
            .clipped
            .iter()
            .copied()
            .filter(|&(_, level)| level > 0.0)
            .collect();

        let mut base = alloc::vec![lo, hi];
        for (mf, level) in &active {
            mf.clipped_breakpoints(*level, &mut base);
        }
        sort_within(&mut base, lo, hi);

        // Crossings between two clipped terms inside a common linear piece.
        let mut all = base.clone();
        for pair in base.windows(2) {
            let (p, q) = (pair[0], pair[1]);
            if q <= p {
                continue;
            }
            let (u1, u2) = (p + 0.25 * (q - p), p + 0.75 * (q - p));
            let lines: Vec<(f64, f64)> = active
                .iter()
                .map(|&(mf, level)| {
                    let (v1, v2) = (mf.degree(u1).min(level), mf.degree(u2).min(level));
                    let slope = (v2 - v1) / (u2 - u1);
                    (slope, v1 - slope * u1)
                })
                .collect();
            for (i, &(s1, c1)) in lines.iter().enumerate() {
                for &(s2, c2) in &lines[i + 1..] {
                    if s1 != s2 {
                        let x = (c2 - c1) / (s1 - s2);
                        if x > p && x < q {
                            all.push(x);
                        }
                    }
                }
            }
        }
        sort_within(&mut all, lo, hi);
        all
    }
}

fn sort_within(points: &mut Vec<f64>, lo: f64, hi: f64) {
    points.retain(|&x| x >= lo && x <= hi);
    points.sort_by(f64::total_cmp);
    points.dedup();
}

/// Midpoint sample grid: sample `i` sits at `lo + (i + 0.5) * step`.
struct Cells {
    lo: f64,
    step: f64,
    count: usize,
}

impl Cells {
    fn sample(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.step
    }

    /// Nearest sample index to `x`, before any exactness adjustment.
    fn guess(&self, x: f64) -> usize {
        let g = (x - self.lo) / self.step - 0.5;
        if g <= 0.0 {
            0
        } else {
            (libm::floor(g) as usize).min(self.count - 1)
        }
    }

    /// Inclusive index range of samples with `p < x_i < q`.
    fn strictly_inside(&self, p: f64, q: f64) -> Option<(usize, usize)> {
        let mut first = self.guess(p);
        while first > 0 && self.sample(first - 1) > p {
            first -= 1;
        }
        while first < self.count && self.sample(first) <= p {
            first += 1;
        }
        let mut last = self.guess(q);
        while last + 1 < self.count && self.sample(last + 1) < q {
            last += 1;
        }
        loop {
            if self.sample(last) < q {
                break;
            }
            if last == 0 {
                return None;
            }
            last -= 1;
        }
        (first < self.count && first <= last).then_some((first, last))
    }

    fn index_at(&self, x: f64) -> Option<usize> {
        let g = self.guess(x);
        (g.saturating_sub(1)..(g + 2).min(self.count)).find(|&i| self.sample(i) == x)
    }
}

/// Mamdani inference: each rule fires at `min(distance degree, energy degree)`
/// and clips its consequent; consequents are max-aggregated.
///
/// `distance` and `energy` are degrees indexed by
/// [`DistanceTerm::index`](super::DistanceTerm::index) and
/// [`EnergyTerm::index`](super::EnergyTerm::index); `radius_terms` are the
/// output sets indexed by [`RadiusTerm::index`](super::RadiusTerm::index).
pub fn infer(
    rules: &RuleBase,
    distance: &[f64; 3],
    energy: &[f64; 3],
    radius_terms: &[MembershipFunction; 5],
    universe: (f64, f64),
) -> AggregatedOutput {
    let mut levels = [0.0f64; 5];
    for rule in rules.rules() {
        let strength = distance[rule.distance.index()].min(energy[rule.energy.index()]);
        let slot = &mut levels[rule.radius.index()];
        *slot = slot.max(strength);
    }
    AggregatedOutput::new(radius_terms.iter().copied().zip(levels).collect(), universe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn brute(agg: &AggregatedOutput, n: usize) -> f64 {
        let (lo, hi) = agg.universe();
        let step = (hi - lo) / n as f64;
        let (mut w, mut m) = (0.0, 0.0);
        for i in 0..n {
            let x = lo + (i as f64 + 0.5) * step;
            let mu = agg.degree(x);
            w += mu;
            m += x * mu;
        }
        m / w
    }

    #[test]
    fn symmetric_triangle_centroid() {
        let mf = MembershipFunction::triangular(0.3, 0.5, 0.7).unwrap();
        let agg = AggregatedOutput::new(vec![(mf, 1.0)], (0.0, 1.0));
        assert!((agg.defuzzify_centroid(10_000).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_sample_sum() {
        let terms = [
            (
                MembershipFunction::trapezoidal(0.0, 0.0, 0.1, 0.25).unwrap(),
                0.3,
            ),
            (MembershipFunction::triangular(0.1, 0.3, 0.5).unwrap(), 0.7),
            (MembershipFunction::triangular(0.3, 0.5, 0.7).unwrap(), 0.0),
            (MembershipFunction::triangular(0.5, 0.7, 0.9).unwrap(), 0.45),
            (
                MembershipFunction::trapezoidal(0.75, 0.9, 1.0, 1.0).unwrap(),
                0.2,
            ),
        ];
        let agg = AggregatedOutput::new(terms.to_vec(), (0.0, 1.0));
        for n in [2, 3, 7, 10, 100, 1000, 10_000] {
            let fast = agg.defuzzify_centroid(n).unwrap();
            let slow = brute(&agg, n);
            assert!((fast - slow).abs() < 1e-12, "n={n}: {fast} vs {slow}");
        }
    }

    #[test]
    fn samples_on_discontinuities() {
        // Vertical edges at 0.25 and 0.75, both of which are sample points for n = 2.
        let mf = MembershipFunction::trapezoidal(0.25, 0.25, 0.75, 0.75).unwrap();
        let agg = AggregatedOutput::new(vec![(mf, 1.0)], (0.0, 1.0));
        for n in [2, 4, 6, 8, 10] {
            let fast = agg.defuzzify_centroid(n).unwrap();
            assert!((fast - brute(&agg, n)).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn empty_aggregate_is_an_error() {
        let mf = MembershipFunction::triangular(0.3, 0.5, 0.7).unwrap();
        let agg = AggregatedOutput::new(vec![(mf, 0.0)], (0.0, 1.0));
        assert_eq!(agg.defuzzify_centroid(100), Err(FuzzyError::EmptyAggregate));
        let agg = AggregatedOutput::new(vec![(mf, 1.0)], (0.0, 1.0));
        assert_eq!(
            agg.defuzzify_centroid(0),
            Err(FuzzyError::InvalidResolution)
        );
    }

    #[test]
    fn infer_uses_min_then_max() {
        let rules = RuleBase::repaired();
        let radius = [
            MembershipFunction::trapezoidal(0.0, 0.0, 0.1, 0.25).unwrap(),
            MembershipFunction::triangular(0.1, 0.3, 0.5).unwrap(),
            MembershipFunction::triangular(0.3, 0.5, 0.7).unwrap(),
            MembershipFunction::triangular(0.5, 0.7, 0.9).unwrap(),
            MembershipFunction::trapezoidal(0.75, 0.9, 1.0, 1.0).unwrap(),
        ];
        let agg = infer(
            &rules,
            &[0.0, 0.5, 0.5],
            &[0.0, 1.0, 0.0],
            &radius,
            (0.0, 1.0),
        );
        let levels: Vec<f64> = agg.clipped_terms().iter().map(|&(_, l)| l).collect();
        assert_eq!(levels, vec![0.0, 0.0, 0.5, 0.5, 0.0]);
    }
}
