//! The evaluation harness: resize, encrypt, attack, score.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::cipher::{CipherParams, KeyPair, Schedule};
use crate::error::{Error, Result};
use crate::image::Image;
use crate::jigsaw::{assemble, build_compatibility, cut_pieces, ga_solve, Assembly, GaParams};
use crate::metrics::{direct_assembly_accuracy, placement_accuracy, ssim, SsimParams};
use crate::permutation::Permutation;
use crate::unshuffle::{unshuffle, Recovery};

use super::cifar::read_cifar10;
use super::config::{Attack, ExperimentConfig};
use super::io::{read_image, write_image};
use super::report::{EvalReport, ImageRecord, Scores};
use super::resize::resize;

/// One dataset entry; unreadable files are kept as errors so the rest of
/// the batch still runs.
#[derive(Clone, Debug)]
pub struct Sample {
    pub id: usize,
    pub label: Option<u8>,
    pub image: std::result::Result<Image, String>,
}

const IMAGE_EXTENSIONS: [&str; 4] = ["ppm", "png", "jpg", "jpeg"];

/// Loads up to `count` samples from a CIFAR-10 batch file or an image
/// directory (sorted by file name).
pub fn load_samples(path: &Path, count: usize) -> Result<Vec<Sample>> {
    if path.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(|e| Error::io(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
            })
            .collect();
        files.sort();
        return Ok(files
            .into_iter()
            .take(count)
            .enumerate()
            .map(|(id, p)| Sample {
                id,
                label: None,
                image: read_image(&p).map_err(|e| e.to_string()),
            })
            .collect());
    }
    Ok(read_cifar10(path)?
        .into_iter()
        .take(count)
        .enumerate()
        .map(|(id, r)| Sample {
            id,
            label: Some(r.label),
            image: Ok(r.image),
        })
        .collect())
}

/// The conventional attack: solve the encrypted blocks as a jigsaw.
pub fn conventional_attack(encrypted: &Image, block_size: usize, ga: &GaParams) -> Result<(Image, Assembly)> {
    solve_blocks(encrypted, block_size, ga)
}

/// The proposed attack: restore sub-block pixel order, then solve.
pub fn proposed_attack(encrypted: &Image, block_size: usize, ga: &GaParams) -> Result<(Image, Assembly, Recovery)> {
    let (restored, recovery) = unshuffle(encrypted, block_size)?;
    let (img, assembly) = solve_blocks(&restored, block_size, ga)?;
    Ok((img, assembly, recovery))
}

fn solve_blocks(img: &Image, block_size: usize, ga: &GaParams) -> Result<(Image, Assembly)> {
    let pieces = cut_pieces(img, block_size)?;
    let table = build_compatibility(&pieces)?;
    let assembly = ga_solve(&pieces, &table, ga)?;
    Ok((assemble(&pieces, &assembly)?, assembly))
}

struct Prepared {
    original: Image,
    encrypted: Image,
    schedule: Schedule,
}

fn prepare(img: &Image, cfg: &ExperimentConfig) -> Result<Prepared> {
    let original = resize(img, cfg.size, cfg.size, cfg.resize_mode)?;
    let params = CipherParams::new(cfg.block_size, KeyPair::new(cfg.key1, cfg.key2));
    let schedule = Schedule::for_image(&original, &params)?;
    let encrypted = schedule.encrypt(&original)?;
    Ok(Prepared {
        original,
        encrypted,
        schedule,
    })
}

fn output_path(dir: &Path, id: usize, what: &str) -> PathBuf {
    dir.join(format!("{id:05}_{what}.ppm"))
}

fn run_attack(p: &Prepared, attack: Attack, id: usize, cfg: &ExperimentConfig) -> Result<Scores> {
    let ga = GaParams {
        seed: cfg.seed ^ id as u64,
        ..cfg.ga
    };
    let geom = p.schedule.geometry;
    let truth = Assembly::undoing(geom.cols(), geom.rows(), &p.schedule.blocks)?;
    let (restored, assembly, placement) = match attack {
        Attack::None => (p.encrypted.clone(), None, None),
        Attack::Conventional => {
            let (img, a) = conventional_attack(&p.encrypted, cfg.block_size, &ga)?;
            (img, Some(a), None)
        }
        Attack::Proposed => {
            let (img, a, recovery) = proposed_attack(&p.encrypted, cfg.block_size, &ga)?;
            let composed = p.schedule.pixels.then(&recovery.placement.to_permutation()?)?;
            let acc = placement_accuracy(&composed, &Permutation::identity(composed.len()))?;
            (img, Some(a), Some(acc))
        }
    };
    if let Some(dir) = &cfg.out_dir {
        write_image(output_path(dir, id, attack.label()), &restored)?;
    }
    Ok(Scores {
        ssim: ssim(&p.original, &restored, &SsimParams::default())?,
        placement_accuracy: placement,
        assembly_accuracy: assembly.map(|a| direct_assembly_accuracy(&a, &truth)).transpose()?,
    })
}

fn process(sample: &Sample, cfg: &ExperimentConfig) -> Vec<ImageRecord> {
    let prepared = sample.image.clone().and_then(|img| {
        let p = prepare(&img, cfg).map_err(|e| e.to_string())?;
        if let Some(dir) = &cfg.out_dir {
            write_image(output_path(dir, sample.id, "original"), &p.original).map_err(|e| e.to_string())?;
            write_image(output_path(dir, sample.id, "encrypted"), &p.encrypted).map_err(|e| e.to_string())?;
        }
        Ok(p)
    });
    cfg.mode
        .attacks()
        .iter()
        .map(|&attack| ImageRecord {
            id: sample.id,
            label: sample.label,
            attack,
            outcome: prepared
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|p| run_attack(p, attack, sample.id, cfg).map_err(|e| e.to_string())),
        })
        .collect()
}

/// Scores already-loaded samples. Each image is seeded with
/// `cfg.seed ^ id`, so the thread count never changes the result.
pub fn evaluate_samples(samples: &[Sample], cfg: &ExperimentConfig) -> Result<EvalReport> {
    cfg.validate()?;
    if let Some(dir) = &cfg.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let per_image: Vec<Vec<ImageRecord>> = pool.install(|| samples.par_iter().map(|s| process(s, cfg)).collect());

    let mut metadata = cfg.describe();
    metadata.push("ssim=luma_bt601 window=11 sigma=1.5 alignment=none".to_string());
    Ok(EvalReport {
        metadata,
        records: per_image.into_iter().flatten().collect(),
    })
}

/// Loads the configured dataset, evaluates it and writes the report if a
/// path is set.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<EvalReport> {
    cfg.validate()?;
    let samples = load_samples(&cfg.dataset, cfg.count)?;
    let report = evaluate_samples(&samples, cfg)?;
    if let Some(path) = &cfg.report {
        std::fs::write(path, report.to_text()).map_err(|e| Error::io(path, e))?;
    }
    Ok(report)
}
