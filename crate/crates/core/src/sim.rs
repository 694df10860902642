//! Deployment, the lifetime loop, FND/HNA extraction and multi-seed aggregation.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{InvalidParameter, SeriesError};
use crate::geometry::Point;
use crate::protocol::{
    run_round, NetworkState, Protocol, ProtocolParams, RoundMetrics, RoundOutcome, SensorNode,
};

pub const DEFAULT_MAX_ROUNDS: usize = 5000;

/// Everything needed to run one scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    /// Width and height of the deployment area, meters.
    pub area: (f64, f64),
    pub base_station: Point,
    pub node_count: usize,
    /// Battery of every node at deployment, joules.
    pub initial_energy: f64,
    pub max_rounds: usize,
    pub trials: usize,
    pub base_seed: u64,
    pub protocol: ProtocolParams,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            area: (200.0, 200.0),
            base_station: Point::new(100.0, 100.0),
            node_count: 75,
            initial_energy: 1.0,
            max_rounds: DEFAULT_MAX_ROUNDS,
            trials: 50,
            base_seed: 1,
            protocol: ProtocolParams::default(),
        }
    }
}

fn invalid(key: &'static str, reason: &str) -> InvalidParameter {
    InvalidParameter {
        key,
        reason: reason.to_string(),
    }
}

fn check_positive(key: &'static str, v: f64) -> Result<(), InvalidParameter> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(key, "must be a positive finite number"))
    }
}

fn check_open_unit(key: &'static str, v: f64) -> Result<(), InvalidParameter> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(invalid(key, "must lie strictly between 0 and 1"))
    }
}

impl ScenarioConfig {
    /// Checks every parameter against its valid range.
    pub fn validate(&self) -> Result<(), InvalidParameter> {
        check_positive("scenario.area", self.area.0)?;
        check_positive("scenario.area", self.area.1)?;
        if !(self.base_station.x.is_finite() && self.base_station.y.is_finite()) {
            return Err(invalid("scenario.bs", "must be finite"));
        }
        if self.node_count < 2 {
            return Err(invalid("scenario.nodes", "at least 2 nodes are needed"));
        }
        check_positive("scenario.energy", self.initial_energy)?;
        if self.protocol.packet_bits == 0 {
            return Err(invalid("scenario.packet_bits", "must be positive"));
        }
        let ratio = self.protocol.aggregation_ratio;
        if !(ratio > 0.0 && ratio <= 1.0) {
            return Err(invalid("scenario.aggregation_ratio", "must lie in (0, 1]"));
        }
        if self.max_rounds == 0 {
            return Err(invalid("scenario.max_rounds", "must be positive"));
        }
        if self.trials == 0 {
            return Err(invalid("scenario.trials", "must be positive"));
        }
        self.protocol.radio.validate()?;
        check_open_unit("leach.p", self.protocol.leach_p)?;
        check_open_unit("fca.t", self.protocol.fca_t)?;
        check_positive("fca.r_max", self.protocol.r_max)?;
        if !self.protocol.fuzzy.rules().is_complete() {
            return Err(invalid(
                "fuzzy.rules",
                "every (distance, energy) pair needs exactly one rule",
            ));
        }
        Ok(())
    }

    /// Seed of trial `k`.
    pub fn seed(&self, trial: usize) -> u64 {
        self.base_seed.wrapping_add(trial as u64)
    }
}

/// Places `node_count` nodes uniformly over the area, ids in creation order.
pub fn deploy<R: Rng + ?Sized>(config: &ScenarioConfig, rng: &mut R) -> Vec<SensorNode> {
    let (w, h) = config.area;
    (0..config.node_count)
        .map(|id| {
            let x = rng.gen::<f64>() * w;
            let y = rng.gen::<f64>() * h;
            SensorNode::new(
                id,
                Point::new(x, y),
                config.initial_energy,
                config.base_station,
            )
        })
        .collect()
}

/// Deployment and protocol randomness come from separate streams of the
/// same seed, so both protocols see the identical topology for a seed.
fn rngs(seed: u64) -> (ChaCha8Rng, ChaCha8Rng) {
    let deploy = ChaCha8Rng::seed_from_u64(seed);
    let mut protocol = ChaCha8Rng::seed_from_u64(seed);
    protocol.set_stream(1);
    (deploy, protocol)
}

pub fn initial_network(config: &ScenarioConfig, seed: u64) -> NetworkState {
    let (mut deploy_rng, _) = rngs(seed);
    let nodes = deploy(config, &mut deploy_rng);
    NetworkState::new(
        nodes,
        config.base_station,
        config.area,
        config.initial_energy,
        config.protocol.leach_p,
    )
}

/// One protocol run on one seeded topology, stepped a round at a time.
pub struct Trial<'a> {
    config: &'a ScenarioConfig,
    protocol: Protocol,
    seed: u64,
    network: NetworkState,
    rng: ChaCha8Rng,
    series: Vec<RoundMetrics>,
}

impl<'a> Trial<'a> {
    pub fn new(config: &'a ScenarioConfig, protocol: Protocol, seed: u64) -> Self {
        let network = initial_network(config, seed);
        let (_, rng) = rngs(seed);
        Self {
            config,
            protocol,
            seed,
            network,
            rng,
            series: Vec::new(),
        }
    }

    pub fn network(&self) -> &NetworkState {
        &self.network
    }

    pub fn series(&self) -> &[RoundMetrics] {
        &self.series
    }

    /// Runs the next round, or returns `None` once every node is dead or
    /// `max_rounds` rounds have run.
    pub fn step(&mut self) -> Option<RoundOutcome> {
        if self.series.len() >= self.config.max_rounds || self.network.alive_count() == 0 {
            return None;
        }
        let outcome = run_round(
            &mut self.network,
            self.protocol,
            &self.config.protocol,
            &mut self.rng,
        );
        self.series.push(outcome.metrics);
        Some(outcome)
    }

    pub fn finish(mut self) -> TrialResult {
        while self.step().is_some() {}
        let alive: Vec<usize> = self.series.iter().map(|m| m.alive_count).collect();
        let lifetime =
            extract_metrics(&alive, self.config.node_count).expect("alive counts never increase");
        TrialResult {
            protocol: self.protocol,
            seed: self.seed,
            fnd: lifetime.fnd,
            hna: lifetime.hna,
            last_death: lifetime.last_death,
            series: self.series,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub protocol: Protocol,
    pub seed: u64,
    /// First round at whose end fewer than all nodes are alive.
    pub fnd: Option<usize>,
    /// First round at whose end at most half of the nodes are alive.
    pub hna: Option<usize>,
    /// First round at whose end no node is alive.
    pub last_death: Option<usize>,
    pub series: Vec<RoundMetrics>,
}

pub fn run_trial(config: &ScenarioConfig, protocol: Protocol, seed: u64) -> TrialResult {
    Trial::new(config, protocol, seed).finish()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lifetime {
    pub fnd: Option<usize>,
    pub hna: Option<usize>,
    pub last_death: Option<usize>,
}

/// FND, HNA and last-death rounds from per-round alive counts (index = round).
pub fn extract_metrics(alive: &[usize], node_count: usize) -> Result<Lifetime, SeriesError> {
    if alive.is_empty() {
        return Err(SeriesError::Empty);
    }
    if let Some(i) = alive.windows(2).position(|w| w[1] > w[0]) {
        return Err(SeriesError::Increasing { round: i + 1 });
    }
    let first = |pred: &dyn Fn(usize) -> bool| alive.iter().position(|&a| pred(a));
    Ok(Lifetime {
        fnd: first(&|a| a < node_count),
        hna: first(&|a| a <= node_count / 2),
        last_death: first(&|a| a == 0),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricSummary {
    /// Over the trials where the metric is defined.
    pub mean: Option<f64>,
    /// Population standard deviation over the same trials.
    pub std_dev: Option<f64>,
    pub min: Option<usize>,
    pub max: Option<usize>,
    pub defined: usize,
    /// Trials in which the threshold was never crossed.
    pub undefined: usize,
}

impl MetricSummary {
    pub fn from_values(values: impl IntoIterator<Item = Option<usize>>) -> Self {
        let mut defined = Vec::new();
        let mut undefined = 0;
        for v in values {
            match v {
                Some(v) => defined.push(v),
                None => undefined += 1,
            }
        }
        if defined.is_empty() {
            return Self {
                mean: None,
                std_dev: None,
                min: None,
                max: None,
                defined: 0,
                undefined,
            };
        }
        let n = defined.len() as f64;
        let mean = defined.iter().map(|&v| v as f64).sum::<f64>() / n;
        let var = defined
            .iter()
            .map(|&v| (v as f64 - mean) * (v as f64 - mean))
            .sum::<f64>()
            / n;
        Self {
            mean: Some(mean),
            std_dev: Some(libm::sqrt(var)),
            min: defined.iter().copied().min(),
            max: defined.iter().copied().max(),
            defined: defined.len(),
            undefined,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesPoint {
    pub round: usize,
    pub mean_alive: f64,
    pub mean_heads: f64,
    pub mean_energy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolSummary {
    pub protocol: Protocol,
    pub fnd: MetricSummary,
    pub hna: MetricSummary,
    /// Fraction of paired seeds on which this protocol outlives the other one
    /// (a metric that is never reached counts as outliving any round).
    /// `None` when only one protocol ran.
    pub win_rate_fnd: Option<f64>,
    pub win_rate_hna: Option<f64>,
    /// Per-round means across trials; extinct trials count as zero.
    pub series: Vec<SeriesPoint>,
    pub trials: Vec<TrialResult>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AggregateResult {
    pub protocols: Vec<ProtocolSummary>,
}

impl AggregateResult {
    pub fn get(&self, protocol: Protocol) -> Option<&ProtocolSummary> {
        self.protocols.iter().find(|p| p.protocol == protocol)
    }
}

fn beats(a: Option<usize>, b: Option<usize>) -> bool {
    match (a, b) {
        (None, Some(_)) => true,
        (Some(x), Some(y)) => x > y,
        _ => false,
    }
}

fn averaged_series(trials: &[TrialResult]) -> Vec<SeriesPoint> {
    let len = trials.iter().map(|t| t.series.len()).max().unwrap_or(0);
    let n = trials.len() as f64;
    (0..len)
        .map(|round| {
            let (mut alive, mut heads, mut energy) = (0.0, 0.0, 0.0);
            for m in trials.iter().filter_map(|t| t.series.get(round)) {
                alive += m.alive_count as f64;
                heads += m.head_count as f64;
                energy += m.energy_consumed;
            }
            SeriesPoint {
                round,
                mean_alive: alive / n,
                mean_heads: heads / n,
                mean_energy: energy / n,
            }
        })
        .collect()
}

/// Summarizes per-protocol trial lists. Lists for different protocols are
/// paired by position (trial `k` of each used the same seed).
pub fn aggregate(results: Vec<(Protocol, Vec<TrialResult>)>) -> AggregateResult {
    let rate =
        |mine: &[TrialResult], other: &[TrialResult], metric: fn(&TrialResult) -> Option<usize>| {
            let wins = mine
                .iter()
                .zip(other)
                .filter(|(a, b)| beats(metric(a), metric(b)))
                .count();
            wins as f64 / mine.len().min(other.len()).max(1) as f64
        };
    let mut protocols = Vec::new();
    for (i, (protocol, trials)) in results.iter().enumerate() {
        let other = results
            .iter()
            .enumerate()
            .find(|(j, _)| *j != i)
            .map(|(_, (_, t))| t);
        protocols.push(ProtocolSummary {
            protocol: *protocol,
            fnd: MetricSummary::from_values(trials.iter().map(|t| t.fnd)),
            hna: MetricSummary::from_values(trials.iter().map(|t| t.hna)),
            win_rate_fnd: other.map(|o| rate(trials, o, |t| t.fnd)),
            win_rate_hna: other.map(|o| rate(trials, o, |t| t.hna)),
            series: averaged_series(trials),
            trials: trials.clone(),
        });
    }
    AggregateResult { protocols }
}

/// Runs `config.trials` paired seeds for each protocol, one after another.
pub fn run_scenario(
    config: &ScenarioConfig,
    protocols: &[Protocol],
) -> Result<AggregateResult, InvalidParameter> {
    config.validate()?;
    if protocols.is_empty() {
        return Err(invalid("protocol", "no protocol selected"));
    }
    let results = protocols
        .iter()
        .map(|&p| {
            (
                p,
                (0..config.trials)
                    .map(|k| run_trial(config, p, config.seed(k)))
                    .collect(),
            )
        })
        .collect();
    Ok(aggregate(results))
}

/// Relative FND gain of `better` over `baseline`, e.g. 0.5 for 50 % later.
pub fn relative_improvement(better: f64, baseline: f64) -> f64 {
    (better - baseline) / baseline
}

impl core::fmt::Display for Lifetime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let show = |v: Option<usize>| v.map_or_else(|| "-".to_string(), |r| format!("{r}"));
        write!(
            f,
            "FND {} / HNA {} / LND {}",
            show(self.fnd),
            show(self.hna),
            show(self.last_death)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn extract_examples() {
        let mut alive = vec![75, 75, 74, 74, 70];
        let m = extract_metrics(&alive, 75).unwrap();
        assert_eq!(m.fnd, Some(2));
        assert_eq!(m.hna, None);
        alive.extend([40, 38, 37, 10, 0]);
        let m = extract_metrics(&alive, 75).unwrap();
        assert_eq!(m.hna, Some(7));
        assert_eq!(m.last_death, Some(9));
        assert_eq!(
            extract_metrics(&[5, 5, 5], 5).unwrap(),
            Lifetime {
                fnd: None,
                hna: None,
                last_death: None
            }
        );
        assert_eq!(
            extract_metrics(&[5, 4, 5], 5),
            Err(SeriesError::Increasing { round: 2 })
        );
        assert_eq!(extract_metrics(&[], 5), Err(SeriesError::Empty));
    }

    #[test]
    fn two_nodes_fnd_equals_hna() {
        let m = extract_metrics(&[2, 2, 1, 0], 2).unwrap();
        assert_eq!((m.fnd, m.hna), (Some(2), Some(2)));
    }

    #[test]
    fn summary_of_one_value() {
        let s = MetricSummary::from_values([Some(7)]);
        assert_eq!((s.mean, s.std_dev), (Some(7.0), Some(0.0)));
        let s = MetricSummary::from_values([None, Some(2), Some(4)]);
        assert_eq!((s.mean, s.std_dev, s.undefined), (Some(3.0), Some(1.0), 1));
    }

    #[test]
    fn win_ordering_treats_never_as_longest() {
        assert!(beats(None, Some(10)));
        assert!(!beats(Some(10), None));
        assert!(!beats(None, None));
        assert!(!beats(Some(3), Some(3)));
    }

    #[test]
    fn validation_rejects_bad_values() {
        let mut c = ScenarioConfig::default();
        assert!(c.validate().is_ok());
        c.protocol.aggregation_ratio = 0.0;
        assert_eq!(c.validate().unwrap_err().key, "scenario.aggregation_ratio");
        let mut c = ScenarioConfig {
            node_count: 1,
            ..ScenarioConfig::default()
        };
        assert_eq!(c.validate().unwrap_err().key, "scenario.nodes");
        c.node_count = 2;
        c.protocol.fca_t = 0.0;
        assert_eq!(c.validate().unwrap_err().key, "fca.t");
        let mut c = ScenarioConfig::default();
        c.protocol.fuzzy = c
            .protocol
            .fuzzy
            .with_rules(crate::fuzzy::RuleBase::printed());
        assert_eq!(c.validate().unwrap_err().key, "fuzzy.rules");
    }
}
