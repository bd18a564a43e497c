//! Datasets, image files, resizing, configuration and the evaluation
//! harness.

pub mod cifar;
pub mod config;
pub mod experiment;
pub mod io;
pub mod ppm;
pub mod proxy;
pub mod report;
pub mod resize;

pub use cifar::{encode_cifar10, parse_cifar10, read_cifar10, write_cifar10, Cifar10Record};
pub use config::{Attack, AttackMode, ExperimentConfig};
pub use experiment::{conventional_attack, evaluate_samples, load_samples, proposed_attack, run_experiment, Sample};
pub use io::{read_image, write_image};
pub use proxy::build_proxy_corpus;
pub use ppm::{decode_ppm, encode_ppm, read_ppm, write_ppm};
pub use report::{EvalReport, ImageRecord, Scores, Summary};
pub use resize::{resize, ResizeMode};
