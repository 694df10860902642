//! TOML scenario files.
//!
//! Every section and key is optional; anything left out takes the built-in
//! default. Unknown keys are rejected so that typos do not silently fall back
//! to defaults.
//!
//! ```toml
//! [scenario]
//! area = [200.0, 200.0]
//! bs = [100.0, 100.0]
//! nodes = 75
//!
//! [fca]
//! r_max = 25.0
//!
//! [fuzzy.distance]
//! medium = [0.2, 0.5, 0.8]      # three points: triangle, four: trapezoid
//!
//! [fuzzy]
//! rules = [["close", "low", "very_small"], ...]
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use wsncluster_core::energy::RadioParams;
use wsncluster_core::fuzzy::{
    FuzzyRule, FuzzySystem, LinguisticVariable, MembershipFunction, RuleBase,
};
use wsncluster_core::{InvalidParameter, Point, ScenarioConfig};

pub const SCENARIO1: &str = include_str!("../configs/scenario1.toml");
pub const SCENARIO2: &str = include_str!("../configs/scenario2.toml");

/// Built-in config accepted by name wherever a config path is expected.
pub fn builtin(name: &str) -> Option<&'static str> {
    match name {
        "scenario1" => Some(SCENARIO1),
        "scenario2" => Some(SCENARIO2),
        _ => None,
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{origin}:{line}: {}{message}", key_prefix(key))]
    Parse {
        origin: String,
        line: usize,
        key: Option<String>,
        message: String,
    },
    #[error("{origin}{}: invalid `{key}`: {message}", line_suffix(*line))]
    Validation {
        origin: String,
        line: Option<usize>,
        key: String,
        message: String,
    },
}

fn key_prefix(key: &Option<String>) -> String {
    key.as_ref()
        .map_or_else(String::new, |k| format!("at `{k}`: "))
}

fn line_suffix(line: Option<usize>) -> String {
    line.map_or_else(String::new, |l| format!(":{l}"))
}

impl ConfigError {
    /// The offending key, when one can be named.
    pub fn key(&self) -> Option<&str> {
        match self {
            Self::Io { .. } => None,
            Self::Parse { key, .. } => key.as_deref(),
            Self::Validation { key, .. } => Some(key),
        }
    }

    /// 1-based line of the offending text, when it appears in the file.
    pub fn line(&self) -> Option<usize> {
        match self {
            Self::Io { .. } => None,
            Self::Parse { line, .. } => Some(*line),
            Self::Validation { line, .. } => *line,
        }
    }
}

#[derive(Debug, Default, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    #[serde(default)]
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub radio: RadioSection,
    #[serde(default)]
    pub leach: LeachSection,
    #[serde(default)]
    pub fca: FcaSection,
    #[serde(default)]
    pub fuzzy: FuzzySection,
}

#[derive(Debug, Default, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bs: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    /// Initial battery, joules.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub packet_bits: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aggregation_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_rounds: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_seed: Option<u64>,
}

#[derive(Debug, Default, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_elec: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_fs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_mp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_da: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ctrl_bits: Option<u64>,
}

#[derive(Debug, Default, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeachSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
}

#[derive(Debug, Default, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FcaSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
}

/// Term tables map a label to its 3 (triangle) or 4 (trapezoid) breakpoints.
/// Labels left out keep their default shape.
#[derive(Debug, Default, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzySection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<[String; 3]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<BTreeMap<String, Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<BTreeMap<String, Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<BTreeMap<String, Vec<f64>>>,
}

/// A value that cannot be applied, found while resolving a document.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolveError {
    pub key: String,
    pub message: String,
}

fn key_error(key: impl Into<String>, message: impl ToString) -> ResolveError {
    ResolveError {
        key: key.into(),
        message: message.to_string(),
    }
}

impl ConfigDocument {
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| parse_error(text, origin, &e))
    }

    /// Applies the document over the defaults without range checks.
    pub fn resolve(&self) -> Result<ScenarioConfig, ResolveError> {
        let mut c = ScenarioConfig::default();
        let s = &self.scenario;
        if let Some([w, h]) = s.area {
            c.area = (w, h);
        }
        if let Some([x, y]) = s.bs {
            c.base_station = Point::new(x, y);
        }
        set(&mut c.node_count, s.nodes);
        set(&mut c.initial_energy, s.energy);
        set(&mut c.protocol.packet_bits, s.packet_bits);
        set(&mut c.protocol.aggregation_ratio, s.aggregation_ratio);
        set(&mut c.max_rounds, s.max_rounds);
        set(&mut c.trials, s.trials);
        set(&mut c.base_seed, s.base_seed);

        let r = &self.radio;
        let radio = &mut c.protocol.radio;
        set(&mut radio.e_elec, r.e_elec);
        set(&mut radio.eps_fs, r.eps_fs);
        set(&mut radio.eps_mp, r.eps_mp);
        set(&mut radio.e_da, r.e_da);
        set(&mut radio.ctrl_bits, r.ctrl_bits);

        set(&mut c.protocol.leach_p, self.leach.p);
        set(&mut c.protocol.fca_t, self.fca.t);
        set(&mut c.protocol.r_max, self.fca.r_max);

        c.protocol.fuzzy = self.fuzzy.resolve()?;
        Ok(c)
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl FuzzySection {
    fn resolve(&self) -> Result<FuzzySystem, ResolveError> {
        let distance = override_terms(
            FuzzySystem::default_distance(),
            self.distance.as_ref(),
            "fuzzy.distance",
        )?;
        let energy = override_terms(
            FuzzySystem::default_energy(),
            self.energy.as_ref(),
            "fuzzy.energy",
        )?;
        let radius = override_terms(
            FuzzySystem::default_radius(),
            self.radius.as_ref(),
            "fuzzy.radius",
        )?;
        let rules = match &self.rules {
            Some(rows) => parse_rules(rows)?,
            None => RuleBase::repaired(),
        };
        let resolution = self
            .resolution
            .unwrap_or(wsncluster_core::fuzzy::DEFAULT_RESOLUTION);
        FuzzySystem::new(distance, energy, radius, rules, resolution).map_err(|e| {
            let key = if resolution == 0 {
                "fuzzy.resolution"
            } else {
                "fuzzy"
            };
            key_error(key, e)
        })
    }
}

fn parse_rules(rows: &[[String; 3]]) -> Result<RuleBase, ResolveError> {
    let rules = rows
        .iter()
        .map(|[d, e, r]| FuzzyRule::from_labels(d, e, r))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| key_error("fuzzy.rules", e))?;
    Ok(RuleBase::new_unchecked(rules))
}

/// Replaces the shapes of the listed terms, keeping the variable's term order.
fn override_terms(
    base: LinguisticVariable,
    table: Option<&BTreeMap<String, Vec<f64>>>,
    key: &str,
) -> Result<LinguisticVariable, ResolveError> {
    let Some(table) = table else {
        return Ok(base);
    };
    if let Some(label) = table.keys().find(|l| base.term(l).is_none()) {
        return Err(key_error(
            format!("{key}.{label}"),
            format!("unknown term `{label}`"),
        ));
    }
    let mut terms = Vec::with_capacity(base.terms().len());
    for (label, mf) in base.terms() {
        let mf = match table.get(label) {
            Some(points) => MembershipFunction::from_breakpoints(points)
                .map_err(|e| key_error(format!("{key}.{label}"), e))?,
            None => *mf,
        };
        terms.push((label.clone(), mf));
    }
    LinguisticVariable::new(base.name(), base.universe(), terms).map_err(|e| key_error(key, e))
}

/// Parses and validates a config file's text. `origin` names the source in errors.
pub fn parse_config(text: &str, origin: &str) -> Result<ScenarioConfig, ConfigError> {
    let doc = ConfigDocument::parse(text, origin)?;
    let config = doc
        .resolve()
        .map_err(|e| validation_error(text, origin, e.key, e.message))?;
    if let Err(InvalidParameter { key, reason }) = config.validate() {
        let message = match (&doc.fuzzy.rules, key) {
            // Name the first duplicated or missing pair rather than the generic reason.
            (Some(rows), "fuzzy.rules") => parse_rules(rows)
                .ok()
                .and_then(|rb| RuleBase::new(rb.rules().to_vec()).err())
                .map_or(reason, |e| e.to_string()),
            _ => reason,
        };
        return Err(validation_error(text, origin, key.to_string(), message));
    }
    Ok(config)
}

/// Loads a config file, or one of the built-in scenarios by name
/// (`scenario1`, `scenario2`) when no such file exists.
pub fn load_config(path: impl AsRef<Path>) -> Result<ScenarioConfig, ConfigError> {
    let path = path.as_ref();
    let (text, origin) = read_source(path)?;
    parse_config(&text, &origin)
}

fn read_source(path: &Path) -> Result<(String, String), ConfigError> {
    if !path.exists() {
        if let Some(text) = path.to_str().and_then(builtin) {
            return Ok((text.to_string(), path.display().to_string()));
        }
    }
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok((text, path.display().to_string()))
}

/// Reads a rule table from `repaired`, `printed`, or a TOML file with a
/// `[fuzzy] rules = [...]` entry. Incomplete tables are accepted.
pub fn load_rules(source: &str) -> Result<RuleBase, ConfigError> {
    match source {
        "repaired" => return Ok(RuleBase::repaired()),
        "printed" => return Ok(RuleBase::printed()),
        _ => {}
    }
    let (text, origin) = read_source(Path::new(source))?;
    let doc = ConfigDocument::parse(&text, &origin)?;
    let Some(rows) = &doc.fuzzy.rules else {
        return Err(validation_error(
            &text,
            &origin,
            "fuzzy.rules".into(),
            "no rule table in file".into(),
        ));
    };
    parse_rules(rows).map_err(|e| validation_error(&text, &origin, e.key, e.message))
}

/// Fuzzy system of a config file without scenario range checks, for probing
/// the fuzzy engine with experimental (even incomplete) tables.
pub fn load_fuzzy(path: impl AsRef<Path>) -> Result<FuzzySystem, ConfigError> {
    let path = path.as_ref();
    let (text, origin) = read_source(path)?;
    let doc = ConfigDocument::parse(&text, &origin)?;
    doc.fuzzy
        .resolve()
        .map_err(|e| validation_error(&text, &origin, e.key, e.message))
}

/// The fully resolved document for `config`: every key spelled out.
pub fn effective_document(config: &ScenarioConfig) -> ConfigDocument {
    let p = &config.protocol;
    let RadioParams {
        e_elec,
        eps_fs,
        eps_mp,
        e_da,
        ctrl_bits,
    } = p.radio;
    let fuzzy = &p.fuzzy;
    let terms = |var: &LinguisticVariable| {
        var.terms()
            .iter()
            .map(|(label, mf)| {
                let (points, n) = mf.breakpoints();
                (label.clone(), points[..n].to_vec())
            })
            .collect::<BTreeMap<_, _>>()
    };
    ConfigDocument {
        scenario: ScenarioSection {
            area: Some([config.area.0, config.area.1]),
            bs: Some([config.base_station.x, config.base_station.y]),
            nodes: Some(config.node_count),
            energy: Some(config.initial_energy),
            packet_bits: Some(p.packet_bits),
            aggregation_ratio: Some(p.aggregation_ratio),
            max_rounds: Some(config.max_rounds),
            trials: Some(config.trials),
            base_seed: Some(config.base_seed),
        },
        radio: RadioSection {
            e_elec: Some(e_elec),
            eps_fs: Some(eps_fs),
            eps_mp: Some(eps_mp),
            e_da: Some(e_da),
            ctrl_bits: Some(ctrl_bits),
        },
        leach: LeachSection { p: Some(p.leach_p) },
        fca: FcaSection {
            t: Some(p.fca_t),
            r_max: Some(p.r_max),
        },
        fuzzy: FuzzySection {
            resolution: Some(fuzzy.resolution()),
            rules: Some(
                fuzzy
                    .rules()
                    .rules()
                    .iter()
                    .map(|r| {
                        [
                            r.distance.label().into(),
                            r.energy.label().into(),
                            r.radius.label().into(),
                        ]
                    })
                    .collect(),
            ),
            distance: Some(terms(fuzzy.distance())),
            energy: Some(terms(fuzzy.energy())),
            radius: Some(terms(fuzzy.radius())),
        },
    }
}

/// TOML text that [`parse_config`] turns back into an identical config.
pub fn to_toml(config: &ScenarioConfig) -> Result<String, toml::ser::Error> {
    toml::to_string(&effective_document(config))
}

fn parse_error(text: &str, origin: &str, err: &toml::de::Error) -> ConfigError {
    let offset = err.span().map_or(0, |s| s.start);
    let line = line_of_offset(text, offset);
    let message = err.message().trim().to_string();
    if let Some(field) = unknown_field(&message) {
        let key = match section_at(text, line) {
            Some(section) => format!("{section}.{field}"),
            None => field.to_string(),
        };
        return ConfigError::Validation {
            origin: origin.to_string(),
            line: Some(line),
            key,
            message: "unknown key".into(),
        };
    }
    let key = text.lines().nth(line - 1).and_then(|l| {
        let (name, _) = l.split_once('=')?;
        let name = name.trim();
        Some(match section_at(text, line) {
            Some(section) => format!("{section}.{name}"),
            None => name.to_string(),
        })
    });
    ConfigError::Parse {
        origin: origin.to_string(),
        line,
        key,
        message,
    }
}

fn unknown_field(message: &str) -> Option<&str> {
    let rest = message.strip_prefix("unknown field `")?;
    Some(&rest[..rest.find('`')?])
}

fn validation_error(text: &str, origin: &str, key: String, message: String) -> ConfigError {
    let line = find_key_line(text, &key);
    ConfigError::Validation {
        origin: origin.to_string(),
        line,
        key,
        message,
    }
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn header(line: &str) -> Option<&str> {
    let t = line.trim();
    let inner = t.strip_prefix('[')?.split(']').next()?;
    (!t.starts_with("[[")).then(|| inner.trim())
}

/// Table header in force at a 1-based line.
fn section_at(text: &str, line: usize) -> Option<String> {
    text.lines()
        .take(line)
        .filter_map(header)
        .last()
        .map(str::to_string)
}

/// 1-based line where `section.name` is assigned, else the section header's line.
fn find_key_line(text: &str, key: &str) -> Option<usize> {
    let (section, name) = key.rsplit_once('.').unwrap_or(("", key));
    let mut current = String::new();
    let mut header_line = None;
    for (i, line) in text.lines().enumerate() {
        if let Some(h) = header(line) {
            current = h.to_string();
            if current == section {
                header_line.get_or_insert(i + 1);
            }
            continue;
        }
        if current != section {
            continue;
        }
        if let Some(rest) = line.trim_start().strip_prefix(name) {
            if rest.trim_start().starts_with('=') {
                return Some(i + 1);
            }
        }
    }
    // `fuzzy.distance` may be a header of its own.
    header_line.or_else(|| {
        text.lines()
            .position(|l| header(l) == Some(key))
            .map(|i| i + 1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_lines() {
        let text =
            "[scenario]\nnodes = 3\n\n[leach]\np = 2.0\n[fuzzy.distance]\nclose = [0, 0, 1]\n";
        assert_eq!(find_key_line(text, "leach.p"), Some(5));
        assert_eq!(find_key_line(text, "scenario.nodes"), Some(2));
        assert_eq!(find_key_line(text, "scenario.trials"), Some(1));
        assert_eq!(find_key_line(text, "fuzzy.distance.close"), Some(7));
        assert_eq!(find_key_line(text, "fuzzy.distance"), Some(6));
        assert_eq!(find_key_line(text, "radio.e_elec"), None);
        assert_eq!(section_at(text, 5).as_deref(), Some("leach"));
    }

    #[test]
    fn empty_document_is_the_default() {
        assert_eq!(parse_config("", "t").unwrap(), ScenarioConfig::default());
    }
}
