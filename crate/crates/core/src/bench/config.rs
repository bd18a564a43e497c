//! Experiment configuration as flat `key = value` text.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::cipher::{Key, DEFAULT_BLOCK_SIZE};
use crate::error::{Error, Result};
use crate::jigsaw::GaParams;

use super::resize::ResizeMode;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum AttackMode {
    Conventional,
    Proposed,
    #[default]
    Both,
    /// No attack: score the encrypted image itself.
    None,
}

impl AttackMode {
    pub fn attacks(self) -> &'static [Attack] {
        match self {
            AttackMode::Conventional => &[Attack::Conventional],
            AttackMode::Proposed => &[Attack::Proposed],
            AttackMode::Both => &[Attack::Conventional, Attack::Proposed],
            AttackMode::None => &[Attack::None],
        }
    }
}

impl FromStr for AttackMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "conventional" => Ok(AttackMode::Conventional),
            "proposed" => Ok(AttackMode::Proposed),
            "both" => Ok(AttackMode::Both),
            "none" => Ok(AttackMode::None),
            other => Err(Error::InvalidArgument(format!(
                "unknown attack mode {other:?}: expected conventional, proposed, both or none"
            ))),
        }
    }
}

impl fmt::Display for AttackMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackMode::Conventional => "conventional",
            AttackMode::Proposed => "proposed",
            AttackMode::Both => "both",
            AttackMode::None => "none",
        })
    }
}

/// One attack applied to one image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Attack {
    /// Jigsaw solver run directly on the encrypted blocks.
    Conventional,
    /// Sub-block restoration followed by the jigsaw solver.
    Proposed,
    None,
}

impl Attack {
    pub fn label(self) -> &'static str {
        match self {
            Attack::Conventional => "conventional",
            Attack::Proposed => "proposed",
            Attack::None => "none",
        }
    }
}

impl FromStr for Attack {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conventional" => Ok(Attack::Conventional),
            "proposed" => Ok(Attack::Proposed),
            "none" => Ok(Attack::None),
            other => Err(Error::InvalidArgument(format!("unknown attack {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    /// A CIFAR-10 binary batch, or a directory of PPM/PNG/JPEG images.
    pub dataset: PathBuf,
    pub count: usize,
    /// Side length images are resized to.
    pub size: usize,
    pub block_size: usize,
    pub key1: Key,
    pub key2: Key,
    pub mode: AttackMode,
    /// GA settings; the seed is replaced per image.
    pub ga: GaParams,
    pub seed: u64,
    pub resize_mode: ResizeMode,
    pub out_dir: Option<PathBuf>,
    pub report: Option<PathBuf>,
    /// Worker threads; 0 uses every available core.
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dataset: PathBuf::new(),
            count: 30,
            size: 224,
            block_size: DEFAULT_BLOCK_SIZE,
            key1: Key::Seed(1),
            key2: Key::Seed(2),
            mode: AttackMode::Both,
            ga: GaParams::default(),
            seed: 0,
            resize_mode: ResizeMode::Bilinear,
            out_dir: None,
            report: None,
            threads: 0,
        }
    }
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad value {value:?} for {key}")))
}

impl ExperimentConfig {
    /// Sets one field by its config-file name.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "dataset" => self.dataset = PathBuf::from(value),
            "count" => self.count = number("count", value)?,
            "size" => self.size = number("size", value)?,
            "block_size" => self.block_size = number("block_size", value)?,
            "key1" => self.key1 = value.parse()?,
            "key2" => self.key2 = value.parse()?,
            "mode" => self.mode = value.parse()?,
            "population" => self.ga.population = number("population", value)?,
            "generations" => self.ga.generations = number("generations", value)?,
            "elites" => self.ga.elites = number("elites", value)?,
            "mutation_rate" => self.ga.mutation_rate = number("mutation_rate", value)?,
            "seed" => self.seed = number("seed", value)?,
            "resize_mode" => self.resize_mode = value.parse()?,
            "out_dir" => self.out_dir = Some(PathBuf::from(value)),
            "report" => self.report = Some(PathBuf::from(value)),
            "threads" => self.threads = number("threads", value)?,
            other => return Err(Error::InvalidArgument(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`. Blank lines and `#`
    /// comments are ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: i + 1,
                message: format!("expected key = value, got {line:?}"),
            })?;
            self.set(key, value).map_err(|e| Error::Config {
                line: i + 1,
                message: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 1 {
            return Err(Error::InvalidArgument("count must be >= 1".into()));
        }
        if self.block_size < 2 || self.block_size % 2 != 0 {
            return Err(Error::InvalidArgument(format!("block size {} must be even and >= 2", self.block_size)));
        }
        if self.size < self.block_size || self.size % self.block_size != 0 {
            return Err(Error::InvalidArgument(format!(
                "size {} must be a positive multiple of the block size {}",
                self.size, self.block_size
            )));
        }
        self.ga.validate()
    }

    /// The settings that determine results, as `key=value` lines.
    pub fn describe(&self) -> Vec<String> {
        vec![
            format!("dataset={}", self.dataset.display()),
            format!("count={} size={} resize_mode={}", self.count, self.size, self.resize_mode),
            format!("block_size={} key1={} key2={} mode={}", self.block_size, self.key1, self.key2, self.mode),
            format!(
                "population={} generations={} elites={} mutation_rate={} seed={}",
                self.ga.population, self.ga.generations, self.ga.elites, self.ga.mutation_rate, self.seed
            ),
        ]
    }
}
