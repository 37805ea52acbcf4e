//! The declarative run configuration (TOML).

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context};
use serde::{Deserialize, Serialize};
use wordpron::lexicon::{generate_toy_lexicon, parse_lexicon, AlignedEntry, StreamSpec, ToyParams};
use wordpron::pipeline::{SystemSpec, TrainingRegime};

use crate::{read_text, CliResult, ResultExt};

pub const CONFIG_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Text,
    Csv,
}

fn default_folds() -> usize {
    10
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

fn default_formats() -> Vec<ReportFormat> {
    vec![ReportFormat::Json, ReportFormat::Text, ReportFormat::Csv]
}

fn default_regimes() -> Vec<TrainingRegime> {
    TrainingRegime::ALL.to_vec()
}

/// Everything one `run` needs. Relative paths are taken relative to the
/// directory holding the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub format_version: u32,
    pub seed: u64,
    #[serde(default = "default_folds")]
    pub folds: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Fold-level worker threads; 0 uses every core.
    #[serde(default)]
    pub workers: usize,
    #[serde(default = "default_formats")]
    pub formats: Vec<ReportFormat>,
    /// Preset names (MAGYS, MGS, GS) or names from `custom_systems`.
    pub systems: Vec<String>,
    #[serde(default = "default_regimes")]
    pub regimes: Vec<TrainingRegime>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lexicon: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toy: Option<ToyParams>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub custom_systems: Vec<SystemSpec>,
}

/// Command-line values that replace config keys.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub folds: Option<usize>,
    pub output_dir: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        let mut config: RunConfig = toml::from_str(text).context("malformed run configuration")?;
        for spec in &mut config.custom_systems {
            for m in &mut spec.modules {
                m.input = StreamSpec::new(m.input.base, m.input.annotations.iter().copied());
            }
        }
        Ok(config)
    }

    /// Reads, resolves and validates a config file.
    pub fn load(path: &Path, overrides: &Overrides) -> CliResult<Self> {
        let mut config = Self::from_toml(&read_text(path)?).invalid()?;
        let base = path.parent().unwrap_or(Path::new(""));
        if let Some(lex) = &config.lexicon {
            config.lexicon = Some(base.join(lex));
        }
        config.output_dir = base.join(&config.output_dir);
        config.apply(overrides);
        config.validate().invalid()?;
        Ok(config)
    }

    pub fn apply(&mut self, overrides: &Overrides) {
        if let Some(seed) = overrides.seed {
            self.seed = seed;
        }
        if let Some(folds) = overrides.folds {
            self.folds = folds;
        }
        if let Some(dir) = &overrides.output_dir {
            self.output_dir = dir.clone();
        }
        if let Some(workers) = overrides.workers {
            self.workers = workers;
        }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        ensure!(
            self.format_version == CONFIG_FORMAT_VERSION,
            "unsupported config format_version {} (expected {CONFIG_FORMAT_VERSION})",
            self.format_version
        );
        ensure!(!self.systems.is_empty(), "no systems configured");
        ensure!(!self.regimes.is_empty(), "no regimes configured");
        ensure!(self.folds >= 2, "folds must be at least 2");
        match (&self.lexicon, &self.toy) {
            (Some(_), Some(_)) => bail!("give either `lexicon` or `toy`, not both"),
            (None, None) => bail!("one of `lexicon` or `toy` is required"),
            (Some(path), None) => {
                ensure!(path.is_file(), "lexicon {} does not exist", path.display())
            }
            (None, Some(toy)) => ensure!(toy.words > 0, "toy lexicon needs at least one word"),
        }
        let mut seen = HashSet::new();
        for name in &self.systems {
            ensure!(seen.insert(name.as_str()), "system {name} listed twice");
        }
        let mut regimes = HashSet::new();
        for r in &self.regimes {
            ensure!(regimes.insert(r), "regime {r} listed twice");
        }
        for spec in self.resolve_systems()? {
            spec.validate()?;
        }
        Ok(())
    }

    /// Named systems in config order; custom names shadow presets.
    pub fn resolve_systems(&self) -> anyhow::Result<Vec<SystemSpec>> {
        self.systems
            .iter()
            .map(|name| {
                self.custom_systems
                    .iter()
                    .find(|s| &s.name == name)
                    .cloned()
                    .or_else(|| SystemSpec::preset(name))
                    .with_context(|| format!("unknown system {name:?}"))
            })
            .collect()
    }

    pub fn load_lexicon(&self) -> CliResult<Vec<AlignedEntry>> {
        match (&self.lexicon, &self.toy) {
            (Some(path), _) => parse_lexicon(&read_text(path)?)
                .with_context(|| format!("lexicon {}", path.display()))
                .invalid(),
            (None, Some(toy)) => Ok(generate_toy_lexicon(toy)),
            (None, None) => Err(anyhow::anyhow!("no lexicon configured")).invalid(),
        }
    }

    pub fn wants(&self, format: ReportFormat) -> bool {
        self.formats.contains(&format)
    }
}
