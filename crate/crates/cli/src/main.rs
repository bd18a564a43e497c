use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use blockbreak::bench::{
    build_proxy_corpus, conventional_attack, proposed_attack, read_cifar10, read_image, resize, run_experiment,
    write_cifar10, write_image, ExperimentConfig, ResizeMode,
};
use blockbreak::cipher::{decrypt, encrypt, CipherParams, Key, KeyPair, DEFAULT_BLOCK_SIZE};
use blockbreak::jigsaw::{assemble, build_compatibility_with, cut_pieces, ga_solve, GaParams, Metric};

#[derive(Parser)]
#[command(name = "blockbreak", version, about = "Block-wise image encryption and a jigsaw-solver attack on it")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encrypt an image with a block key and a pixel key.
    Encrypt(CipherArgs),
    /// Invert `encrypt` given the same keys.
    Decrypt(CipherArgs),
    /// Recover an image from its ciphertext alone.
    Attack(AttackArgs),
    /// Reassemble a block-scrambled (not pixel-shuffled) image.
    Solve(SolveArgs),
    /// Run the SSIM evaluation over a dataset.
    Evaluate(EvaluateArgs),
    /// Dataset utilities.
    #[command(subcommand)]
    Dataset(DatasetCommand),
}

#[derive(Args)]
struct CipherArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BLOCK_SIZE)]
    block_size: usize,
    /// Block-permutation key: a u64, 0x-prefixed hex, or `identity`.
    #[arg(long)]
    key1: Key,
    /// Sub-block pixel-shuffle key.
    #[arg(long)]
    key2: Key,
}

#[derive(Args)]
struct GaArgs {
    #[arg(long, default_value_t = GaParams::default().population)]
    population: usize,
    #[arg(long, default_value_t = GaParams::default().generations)]
    generations: usize,
    #[arg(long, default_value_t = GaParams::default().elites)]
    elites: usize,
    #[arg(long, default_value_t = GaParams::default().mutation_rate)]
    mutation_rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl GaArgs {
    fn params(&self) -> GaParams {
        GaParams {
            population: self.population,
            generations: self.generations,
            elites: self.elites,
            mutation_rate: self.mutation_rate,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AttackKind {
    Conventional,
    Proposed,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, value_enum, default_value = "proposed")]
    mode: AttackKind,
    #[arg(long, default_value_t = DEFAULT_BLOCK_SIZE)]
    block_size: usize,
    /// Write the solved board as `col,row -> piece` lines.
    #[arg(long)]
    assembly: Option<PathBuf>,
    /// Write the recovered sub-block placement (proposed mode only).
    #[arg(long)]
    placement: Option<PathBuf>,
    #[command(flatten)]
    ga: GaArgs,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Piece side in pixels.
    #[arg(long, default_value_t = DEFAULT_BLOCK_SIZE)]
    block_size: usize,
    #[arg(long, default_value = "lab")]
    metric: Metric,
    #[arg(long)]
    assembly: Option<PathBuf>,
    #[command(flatten)]
    ga: GaArgs,
}

#[derive(Args)]
struct EvaluateArgs {
    /// `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    block_size: Option<usize>,
    #[arg(long)]
    key1: Option<String>,
    #[arg(long)]
    key2: Option<String>,
    /// conventional, proposed, both or none.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    elites: Option<usize>,
    #[arg(long)]
    mutation_rate: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    resize_mode: Option<String>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    threads: Option<usize>,
}

impl EvaluateArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let overrides = [
            ("dataset", path(&self.dataset)),
            ("count", self.count.map(|v| v.to_string())),
            ("size", self.size.map(|v| v.to_string())),
            ("block_size", self.block_size.map(|v| v.to_string())),
            ("key1", self.key1.clone()),
            ("key2", self.key2.clone()),
            ("mode", self.mode.clone()),
            ("population", self.population.map(|v| v.to_string())),
            ("generations", self.generations.map(|v| v.to_string())),
            ("elites", self.elites.map(|v| v.to_string())),
            ("mutation_rate", self.mutation_rate.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("out_dir", path(&self.out_dir)),
            ("report", path(&self.report)),
            ("resize_mode", self.resize_mode.clone()),
            ("threads", self.threads.map(|v| v.to_string())),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                cfg.set(key, &v).with_context(|| format!("--{}", key.replace('_', "-")))?;
            }
        }
        if cfg.dataset.as_os_str().is_empty() {
            bail!("no dataset given: pass --dataset or set it in --config");
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum DatasetCommand {
    /// Decode a CIFAR-10 batch into resized PPM files.
    Import {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 30)]
        count: usize,
        #[arg(long, default_value_t = 224)]
        size: usize,
        #[arg(long, default_value = "bilinear")]
        resize_mode: ResizeMode,
    },
    /// Cut random 32x32 crops from photographs into a CIFAR-10-format file.
    Proxy {
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 40)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(required = true)]
        sources: Vec<PathBuf>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Encrypt(a) => {
            let img = read_image(&a.input)?;
            let params = CipherParams::new(a.block_size, KeyPair::new(a.key1, a.key2));
            write_image(&a.output, &encrypt(&img, &params)?)?;
        }
        Command::Decrypt(a) => {
            let img = read_image(&a.input)?;
            let params = CipherParams::new(a.block_size, KeyPair::new(a.key1, a.key2));
            write_image(&a.output, &decrypt(&img, &params)?)?;
        }
        Command::Attack(a) => {
            let img = read_image(&a.input)?;
            let ga = a.ga.params();
            let (restored, assembly) = match a.mode {
                AttackKind::Conventional => {
                    if a.placement.is_some() {
                        bail!("--placement is only produced by the proposed attack");
                    }
                    conventional_attack(&img, a.block_size, &ga)?
                }
                AttackKind::Proposed => {
                    let (restored, assembly, recovery) = proposed_attack(&img, a.block_size, &ga)?;
                    if let Some(path) = &a.placement {
                        std::fs::write(path, recovery.to_report())
                            .with_context(|| format!("writing {}", path.display()))?;
                    }
                    (restored, assembly)
                }
            };
            write_image(&a.output, &restored)?;
            if let Some(path) = &a.assembly {
                std::fs::write(path, assembly.to_text()).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Solve(a) => {
            let img = read_image(&a.input)?;
            let pieces = cut_pieces(&img, a.block_size)?;
            let table = build_compatibility_with(&pieces, a.metric)?;
            let assembly = ga_solve(&pieces, &table, &a.ga.params())?;
            write_image(&a.output, &assemble(&pieces, &assembly)?)?;
            if let Some(path) = &a.assembly {
                std::fs::write(path, assembly.to_text()).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Evaluate(a) => {
            let cfg = a.config()?;
            let report = run_experiment(&cfg)?;
            if cfg.report.is_none() {
                print!("{}", report.to_text());
            } else {
                for s in report.summaries() {
                    let mean = s.mean_ssim.map_or("-".to_string(), |m| format!("{m:.4}"));
                    println!(
                        "{:<13} images={:<4} failed={:<3} mean_ssim={mean}",
                        s.attack.label(),
                        s.scored,
                        s.failed
                    );
                }
            }
        }
        Command::Dataset(DatasetCommand::Import {
            dataset,
            out_dir,
            count,
            size,
            resize_mode,
        }) => {
            std::fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            for (i, rec) in read_cifar10(&dataset)?.into_iter().take(count).enumerate() {
                let img = resize(&rec.image, size, size, resize_mode)?;
                write_image(out_dir.join(format!("{i:05}_label{}.ppm", rec.label)), &img)?;
            }
        }
        Command::Dataset(DatasetCommand::Proxy {
            output,
            count,
            seed,
            sources,
        }) => {
            write_cifar10(&output, &build_proxy_corpus(&sources, count, seed)?)?;
        }
    }
    Ok(())
}
