//! Run configuration: one JSON document, overridable by CLI flags. The
//! effective config is hashed (FNV-1a over its canonical JSON) and echoed
//! into the output directory, and every randomized output carries the seed,
//! the hash, and the generator name, so results state exactly what produced
//! them.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use semnet::inflection::PeakConfig;
use semnet::ingest::Relation;
use semnet::rewire::{RewireConfig, RNG_ALGORITHM};
use semnet::tail::TailConfig;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Assertion dump, plain or gzip.
    pub dataset: Option<PathBuf>,
    pub languages: Vec<String>,
    /// Relation names; `Union` is derived from its parts, never parsed.
    pub relations: Vec<String>,
    pub seed: u64,
    /// Output directory; later commands read earlier commands' files here.
    pub out: PathBuf,
    /// Log-bin width; absent picks the ~20-bin default per graph.
    pub bin_log_width: Option<f64>,
    /// Per-network degree windows for baseline regressions, keyed
    /// "language/Relation". Networks without an entry use the peak window.
    pub windows: BTreeMap<String, (f64, f64)>,
    pub rewire: RewireSettings,
    pub calibration: CalibrationSettings,
    pub peak: PeakSettings,
    /// Override for the built-in per-language inflection-count table.
    pub grammar_file: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            dataset: None,
            languages: vec!["en".into()],
            relations: ["HasA", "PartOf", "IsA", "RelatedTo", "Antonym", "Synonym", "Union"]
                .map(String::from)
                .to_vec(),
            seed: 0,
            out: PathBuf::from("out"),
            bin_log_width: None,
            windows: BTreeMap::new(),
            rewire: RewireSettings::default(),
            calibration: CalibrationSettings::default(),
            peak: PeakSettings::default(),
            grammar_file: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RewireSettings {
    pub enabled: bool,
    pub multiplier: u32,
    pub realizations: u32,
    pub attempt_cap: Option<u64>,
}

impl Default for RewireSettings {
    fn default() -> RewireSettings {
        let base = RewireConfig::default();
        RewireSettings {
            enabled: true,
            multiplier: base.multiplier,
            realizations: base.realizations,
            attempt_cap: base.attempt_cap,
        }
    }
}

/// Null-ensemble size by network size; networks above the last class are
/// skipped as oversize.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SizeClass {
    pub max_nodes: usize,
    pub samples: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationSettings {
    pub min_nodes: usize,
    pub size_classes: Vec<SizeClass>,
}

impl Default for CalibrationSettings {
    fn default() -> CalibrationSettings {
        CalibrationSettings {
            min_nodes: semnet::ubcm::MIN_CALIBRATION_NODES,
            size_classes: vec![
                SizeClass { max_nodes: 500_000, samples: semnet::ubcm::DEFAULT_SAMPLES },
                SizeClass { max_nodes: 1_200_000, samples: semnet::ubcm::REDUCED_SAMPLES },
            ],
        }
    }
}

impl CalibrationSettings {
    /// Ensemble size for a network of `n` nodes; `None` means oversize.
    pub fn samples_for(&self, n: usize) -> Option<u32> {
        self.size_classes.iter().find(|c| n <= c.max_nodes).map(|c| c.samples)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PeakSettings {
    pub theta: f64,
    pub min_run: usize,
    /// Degree window for baseline fit and peak search; `null` upper bound
    /// means unbounded.
    pub window: (f64, Option<f64>),
}

impl Default for PeakSettings {
    fn default() -> PeakSettings {
        let base = PeakConfig::default();
        PeakSettings { theta: base.theta, min_run: base.min_run, window: (base.window.0, None) }
    }
}

/// Reproducibility stamp embedded in every randomized output file.
#[derive(Clone, Debug, Serialize)]
pub struct Stamp {
    pub seed: u64,
    pub config_hash: String,
    pub rng: &'static str,
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<RunConfig, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }

    /// FNV-1a over the canonical JSON of the effective config.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        format!("{:016x}", fnv1a64(canonical.as_bytes()))
    }

    pub fn stamp(&self) -> Stamp {
        Stamp { seed: self.seed, config_hash: self.hash(), rng: RNG_ALGORITHM }
    }

    /// Seed for one network, derived from the base seed and the network key
    /// so networks are independent but individually reproducible.
    pub fn network_seed(&self, key: &str) -> u64 {
        self.seed ^ fnv1a64(key.as_bytes())
    }

    /// Parsed relation list in config order, deduplicated.
    pub fn relations(&self) -> Result<Vec<Relation>, String> {
        let mut seen = Vec::new();
        for name in &self.relations {
            let rel: Relation = name.parse()?;
            if !seen.contains(&rel) {
                seen.push(rel);
            }
        }
        Ok(seen)
    }

    pub fn tail_config(&self, key: &str) -> TailConfig {
        TailConfig {
            bin_log_width: self.bin_log_width,
            window: self.windows.get(key).copied(),
            ..TailConfig::default()
        }
    }

    pub fn rewire_config(&self, seed: u64) -> Option<RewireConfig> {
        if !self.rewire.enabled {
            return None;
        }
        Some(RewireConfig {
            multiplier: self.rewire.multiplier,
            realizations: self.rewire.realizations,
            attempt_cap: self.rewire.attempt_cap,
            seed,
        })
    }

    /// Peak/baseline config for one network: the shared peak settings with
    /// the per-network window override applied.
    pub fn peak_config(&self, key: &str) -> PeakConfig {
        let window = self
            .windows
            .get(key)
            .copied()
            .unwrap_or((self.peak.window.0, self.peak.window.1.unwrap_or(f64::INFINITY)));
        PeakConfig { theta: self.peak.theta, min_run: self.peak.min_run, window }
    }
}
