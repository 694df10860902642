//! Result tables written after a run.
//!
//! Floats carry 6 significant digits, rows end in a bare `\n`, and a metric
//! that was never reached is an empty field.

use std::fs;
use std::path::{Path, PathBuf};

use wsncluster_core::protocol::Protocol;
use wsncluster_core::sim::{AggregateResult, SeriesPoint};
use wsncluster_core::ScenarioConfig;

use crate::config;

pub const SUMMARY_HEADER: [&str; 7] = [
    "protocol",
    "mean_fnd",
    "std_fnd",
    "mean_hna",
    "std_hna",
    "win_rate_fnd",
    "win_rate_hna",
];
pub const TRIALS_HEADER: [&str; 5] = ["protocol", "trial", "seed", "fnd", "hna"];
pub const SERIES_HEADER: [&str; 4] = ["round", "mean_alive", "mean_heads", "mean_energy_j"];

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot serialize the effective config: {0}")]
    Config(#[from] toml::ser::Error),
}

/// Rendered tables of one run, ready to be written.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputBundle {
    pub summary: Vec<[String; 7]>,
    pub trials: Vec<[String; 5]>,
    pub series: Vec<(Protocol, Vec<[String; 4]>)>,
    /// The fully resolved config, as TOML.
    pub config: String,
}

/// `%g`-style formatting with 6 significant digits.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..6).contains(&exp) {
        return format!("{}e{exp}", trim_fraction(mantissa));
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_fraction(&format!("{v:.decimals$}")).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt_number(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

fn opt_round(v: Option<usize>) -> String {
    v.map(|r| r.to_string()).unwrap_or_default()
}

impl OutputBundle {
    pub fn new(result: &AggregateResult, config: &ScenarioConfig) -> Result<Self, OutputError> {
        let summary = result
            .protocols
            .iter()
            .map(|p| {
                [
                    p.protocol.name().to_string(),
                    opt_number(p.fnd.mean),
                    opt_number(p.fnd.std_dev),
                    opt_number(p.hna.mean),
                    opt_number(p.hna.std_dev),
                    opt_number(p.win_rate_fnd),
                    opt_number(p.win_rate_hna),
                ]
            })
            .collect();
        let trials = result
            .protocols
            .iter()
            .flat_map(|p| {
                p.trials.iter().enumerate().map(|(k, t)| {
                    [
                        p.protocol.name().to_string(),
                        k.to_string(),
                        t.seed.to_string(),
                        opt_round(t.fnd),
                        opt_round(t.hna),
                    ]
                })
            })
            .collect();
        let series = result
            .protocols
            .iter()
            .map(|p| (p.protocol, p.series.iter().map(series_row).collect()))
            .collect();
        Ok(Self {
            summary,
            trials,
            series,
            config: config::to_toml(config)?,
        })
    }
}

fn series_row(s: &SeriesPoint) -> [String; 4] {
    [
        s.round.to_string(),
        format_number(s.mean_alive),
        format_number(s.mean_heads),
        format_number(s.mean_energy),
    ]
}

fn render<const N: usize>(header: [&str; N], rows: &[[String; N]]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    // Writing into memory cannot fail.
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn write(path: PathBuf, bytes: &[u8]) -> Result<PathBuf, OutputError> {
    fs::write(&path, bytes).map_err(|source| OutputError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Writes `summary.csv`, `trials.csv`, one `series_<protocol>.csv` per
/// protocol and `config.toml` into `out_dir`, creating it if needed.
/// Returns the written paths.
pub fn emit_results(
    bundle: &OutputBundle,
    out_dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>, OutputError> {
    let dir = out_dir.as_ref();
    fs::create_dir_all(dir).map_err(|source| OutputError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = vec![
        write(
            dir.join("summary.csv"),
            &render(SUMMARY_HEADER, &bundle.summary),
        )?,
        write(
            dir.join("trials.csv"),
            &render(TRIALS_HEADER, &bundle.trials),
        )?,
    ];
    for (protocol, rows) in &bundle.series {
        let name = format!("series_{}.csv", protocol.name());
        written.push(write(dir.join(name), &render(SERIES_HEADER, rows))?);
    }
    written.push(write(dir.join("config.toml"), bundle.config.as_bytes())?);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_number(1315.4), "1315.4");
        assert_eq!(format_number(1950.123456), "1950.12");
        assert_eq!(format_number(0.1), "0.1");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(2.0 / 3.0), "0.666667");
        assert_eq!(format_number(0.0312), "0.0312");
        assert_eq!(format_number(4.2e-4), "0.00042");
        assert_eq!(format_number(1.234567e-7), "1.23457e-7");
        assert_eq!(format_number(123456789.0), "1.23457e8");
        assert_eq!(format_number(999999.7), "1e6");
        assert_eq!(format_number(-2.5), "-2.5");
    }
}
