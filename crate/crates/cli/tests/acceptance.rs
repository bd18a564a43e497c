//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.
//!
//! Natural images come from the CIFAR-10 test batch named by
//! `CIFAR10_TEST_BATCH` when set, otherwise from the bundled stand-in corpus
//! in `tests/data`. Pass criterion numbers as arguments to run a subset.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use blockbreak::bench::{read_cifar10, resize, run_experiment, Attack, AttackMode, ExperimentConfig, ResizeMode};
use blockbreak::cipher::{
    decrypt, encrypt, scramble_blocks_only, shuffle_subblock_pixels, CipherParams, Key, KeyPair, Schedule,
};
use blockbreak::jigsaw::{build_compatibility, cut_pieces, fitness, ga_solve_traced, Assembly, GaParams};
use blockbreak::metrics::{direct_assembly_accuracy, placement_accuracy, ssim, SsimParams};
use blockbreak::unshuffle::recover_placement;
use blockbreak::{Image, Permutation};

type Outcome = Result<String, String>;

fn corpus_path() -> (PathBuf, &'static str) {
    match std::env::var_os("CIFAR10_TEST_BATCH") {
        Some(p) => (PathBuf::from(p), "CIFAR-10 test batch"),
        None => (
            Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/proxy_test_batch.bin"),
            "stand-in corpus",
        ),
    }
}

fn corpus() -> Vec<Image> {
    let (path, _) = corpus_path();
    read_cifar10(&path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .into_iter()
        .map(|r| r.image)
        .collect()
}

fn natural_224(img: &Image) -> Image {
    resize(img, 224, 224, ResizeMode::Bilinear).unwrap()
}

fn random_image(rng: &mut impl RngCore, w: usize, h: usize) -> Image {
    let mut data = vec![0u8; w * h * 3];
    rng.fill_bytes(&mut data);
    Image::from_raw(w, h, data).unwrap()
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    for i in 0..1000 {
        let m = [4, 8, 16][rng.gen_range(0..3)];
        let (w, h) = (m * rng.gen_range(1..=8), m * rng.gen_range(1..=8));
        let img = random_image(&mut rng, w, h);
        let params = CipherParams::new(m, KeyPair::new(rng.next_u64(), rng.next_u64()));
        let enc = encrypt(&img, &params).map_err(|e| e.to_string())?;
        if decrypt(&enc, &params).map_err(|e| e.to_string())? != img {
            return Err(format!("trial {i} ({w}x{h}, M={m}) did not round-trip"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 30.0 {
        return Err(format!("1000 round trips took {secs:.1}s"));
    }
    Ok(format!("1000/1000 exact in {secs:.2}s"))
}

fn criterion_2() -> Outcome {
    let (dataset, name) = corpus_path();
    let cfg = ExperimentConfig {
        dataset,
        count: 30,
        mode: AttackMode::Both,
        ..ExperimentConfig::default()
    };
    let report = run_experiment(&cfg).map_err(|e| e.to_string())?;
    let scored = |a| report.ssim_values(a).len();
    if scored(Attack::Proposed) < 30 || scored(Attack::Conventional) < 30 {
        return Err(format!("too few scored images:\n{}", report.to_text()));
    }
    let proposed = report.mean_ssim(Attack::Proposed).unwrap();
    let conventional = report.mean_ssim(Attack::Conventional).unwrap();
    let detail = format!(
        "{name}, 30 images: proposed {proposed:.4}, conventional {conventional:.4}, gap {:.4}",
        proposed - conventional
    );
    if proposed >= 0.90 && conventional <= 0.55 && proposed - conventional >= 0.30 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Sum of squared differences across the quadrant midlines of every block
/// after restoring with `assign` (cell -> shuffled position), read directly
/// from pixels. Only for `M = 4`.
fn midline_cost(enc: &Image, assign: &[usize; 4]) -> u64 {
    let at = |bx: usize, by: usize, qx: usize, qy: usize, cx: usize, cy: usize| {
        let p = assign[cy * 2 + cx];
        enc.pixel(bx * 4 + qx * 2 + p % 2, by * 4 + qy * 2 + p / 2)
    };
    let d = |a: [u8; 3], b: [u8; 3]| -> u64 { (0..3).map(|c| (a[c] as i64 - b[c] as i64).pow(2) as u64).sum() };
    let mut total = 0;
    for by in 0..enc.height() / 4 {
        for bx in 0..enc.width() / 4 {
            for t in 0..2 {
                total += d(at(bx, by, 0, 0, 1, t), at(bx, by, 1, 0, 0, t));
                total += d(at(bx, by, 0, 1, 1, t), at(bx, by, 1, 1, 0, t));
                total += d(at(bx, by, 0, 0, t, 1), at(bx, by, 0, 1, t, 0));
                total += d(at(bx, by, 1, 0, t, 1), at(bx, by, 1, 1, t, 0));
            }
        }
    }
    total
}

fn all_bijections_of_4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                out.push([a, b, c, 6 - a - b - c]);
            }
        }
    }
    out
}

fn criterion_3() -> Outcome {
    let images = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut exact, mut tied) = (0, 0);
    for i in 0..20 {
        let big = natural_224(&images[i % images.len()]);
        let (x, y) = (rng.gen_range(0..=160), rng.gen_range(0..=160));
        let crop = big.crop(x, y, 64, 64).unwrap();
        let enc = encrypt(&crop, &CipherParams::new(4, KeyPair::new(rng.next_u64(), rng.next_u64()))).unwrap();

        let scored: Vec<(u64, [usize; 4])> =
            all_bijections_of_4().into_iter().map(|a| (midline_cost(&enc, &a), a)).collect();
        let best = scored.iter().map(|s| s.0).min().unwrap();
        let optima: Vec<[usize; 4]> = scored.iter().filter(|s| s.0 == best).map(|s| s.1).collect();

        let rec = recover_placement(&enc, 4).map_err(|e| e.to_string())?;
        let cells = rec.placement.cells();
        let ours = [cells[0].unwrap(), cells[1].unwrap(), cells[2].unwrap(), cells[3].unwrap()];
        if optima.len() == 1 && optima[0] == ours {
            exact += 1;
        } else if midline_cost(&enc, &ours) == best {
            tied += 1;
        }
    }
    let detail = format!("{} of 20 optimal ({exact} unique optimum matched, {tied} equal-objective ties)", exact + tied);
    if exact + tied >= 19 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Smooth 224×224 image. Each channel is a ramp or sinusoid along its own
/// direction. `balanced` spreads the three directions about 120° apart
/// with a common period so the image has structure along both axes;
/// otherwise directions and periods are independent and can line up.
fn synthetic(rng: &mut impl Rng, sinusoid: bool, balanced: bool) -> Image {
    use std::f64::consts::TAU;
    let base = rng.gen_range(0.0..TAU);
    let period = rng.gen_range(80.0..250.0);
    let channels: Vec<[f64; 4]> = (0..3)
        .map(|c| {
            let theta = if balanced {
                base + c as f64 * TAU / 3.0 + rng.gen_range(-0.2..0.2)
            } else {
                rng.gen_range(0.0..TAU)
            };
            let period = if balanced { period } else { rng.gen_range(80.0..250.0) };
            [theta, rng.gen_range(0.0..TAU), period, rng.gen_range(-1.0..1.0)]
        })
        .collect();
    Image::from_fn(224, 224, |x, y| {
        let mut px = [0u8; 3];
        for (c, &[theta, phase, period, bend]) in channels.iter().enumerate() {
            let t = (x as f64 - 112.0) * theta.cos() + (y as f64 - 112.0) * theta.sin();
            let v = if sinusoid {
                128.0 + 90.0 * (TAU * t / period + phase).sin()
            } else {
                let u = t / 160.0;
                128.0 + 100.0 * u + 20.0 * bend * u * u
            };
            px[c] = v.round().clamp(0.0, 255.0) as u8;
        }
        px
    })
    .unwrap()
}

/// Number of exactly recovered placements out of 50, and the worst accuracy.
fn synthetic_recovery(seed: u64, balanced: bool) -> Result<(usize, f64), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perfect = 0;
    let mut worst = 1.0f64;
    for i in 0..50 {
        let img = synthetic(&mut rng, i % 2 == 0, balanced);
        let k2 = rng.next_u64();
        let enc = encrypt(&img, &CipherParams::new(16, KeyPair::new(Key::Identity, k2))).unwrap();
        let rec = recover_placement(&enc, 16).map_err(|e| e.to_string())?;
        let truth = Key::Seed(k2).permutation(64).unwrap();
        let composed = truth.then(&rec.placement.to_permutation().unwrap()).unwrap();
        let acc = placement_accuracy(&composed, &Permutation::identity(64)).unwrap();
        worst = worst.min(acc);
        perfect += (acc == 1.0) as usize;
    }
    Ok((perfect, worst))
}

fn criterion_4() -> Outcome {
    let (perfect, worst) = synthetic_recovery(4, true)?;
    let (loose, _) = synthetic_recovery(4, false)?;
    let detail = format!(
        "{perfect}/50 exact, worst accuracy {worst:.4} (informational: {loose}/50 when channel directions are unconstrained)"
    );
    if perfect >= 48 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_5() -> Outcome {
    let images = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut checked, mut skipped) = (0, 0);
    for i in 0..20 {
        let img = natural_224(&images[(i * 3) % images.len()]);
        let enc = encrypt(&img, &CipherParams::new(16, KeyPair::new(rng.next_u64(), rng.next_u64()))).unwrap();
        let sigma = Permutation::from_seed(rng.next_u64(), 64).unwrap();
        let reshuffled = shuffle_subblock_pixels(&enc, 16, &sigma).unwrap();
        let a = recover_placement(&enc, 16).map_err(|e| e.to_string())?;
        let b = recover_placement(&reshuffled, 16).map_err(|e| e.to_string())?;
        if !(a.argmins_unique() && b.argmins_unique()) {
            skipped += 1;
            continue;
        }
        checked += 1;
        let expected: Vec<Option<usize>> = a.placement.cells().iter().map(|c| c.map(|p| sigma[p])).collect();
        if b.placement.cells() != expected.as_slice() {
            return Err(format!("image {i}: placement not transformed by sigma"));
        }
    }
    let detail = format!("{checked} checked, {skipped} skipped for tied argmins");
    if checked > 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for slot in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(slot, n - 1);
            out.push(p);
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let images = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut runs = 0;
    for (cols, rows) in [(2, 2), (3, 2)] {
        let all = permutations(cols * rows);
        for i in 0..10 {
            let big = natural_224(&images[(i * 7 + cols) % images.len()]);
            let (w, h) = (cols * 16, rows * 16);
            let crop = big.crop(rng.gen_range(0..=224 - w), rng.gen_range(0..=224 - h), w, h).unwrap();
            let pieces = cut_pieces(&crop, 16).unwrap();
            let table = build_compatibility(&pieces).unwrap();
            let optimum = all
                .iter()
                .map(|p| fitness(&Assembly::new(cols, rows, p.clone()).unwrap(), &table))
                .fold(f64::INFINITY, f64::min);
            for seed in 0..5 {
                let ga = GaParams { seed, ..GaParams::default() };
                let got = ga_solve_traced(&pieces, &table, &ga).map_err(|e| e.to_string())?.fitness;
                if (got - optimum).abs() > 1e-9 * optimum.max(1.0) {
                    return Err(format!("{cols}x{rows} image {i} seed {seed}: GA {got} vs optimum {optimum}"));
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs}/100 runs reached the exhaustive optimum"))
}

fn criterion_7() -> Outcome {
    let images = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut good = 0;
    let mut accs = Vec::new();
    for i in 0..10 {
        let img = natural_224(&images[(i * 5 + 1) % images.len()]);
        let k1 = rng.next_u64();
        let scrambled = scramble_blocks_only(&img, 16, Key::Seed(k1)).unwrap();
        let pieces = cut_pieces(&scrambled, 16).unwrap();
        let table = build_compatibility(&pieces).unwrap();
        let ga = GaParams { seed: i as u64, ..GaParams::default() };
        let out = ga_solve_traced(&pieces, &table, &ga).map_err(|e| e.to_string())?;
        let truth = Assembly::undoing(14, 14, &Key::Seed(k1).permutation(196).unwrap()).unwrap();
        let acc = direct_assembly_accuracy(&out.assembly, &truth).unwrap();
        good += (acc >= 0.9) as usize;
        accs.push(format!("{acc:.2}"));
    }
    let detail = format!("{good}/10 at >= 0.9 [{}]", accs.join(" "));
    if good >= 8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_8() -> Outcome {
    let images = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let p = SsimParams::default();
    for i in 0..100 {
        let m = [4, 8, 16][i % 3];
        let side = m * rng.gen_range(2..=14);
        let img = resize(&images[i % images.len()], side, side, ResizeMode::Bilinear).unwrap();
        let params = CipherParams::new(m, KeyPair::new(rng.next_u64(), rng.next_u64()));
        let enc = Schedule::for_image(&img, &params).and_then(|s| s.encrypt(&img)).unwrap();
        if side >= p.window {
            if ssim(&img, &img, &p).unwrap() != 1.0 || ssim(&enc, &enc, &p).unwrap() != 1.0 {
                return Err(format!("image {i}: ssim(x, x) != 1"));
            }
            let (ab, ba) = (ssim(&img, &enc, &p).unwrap(), ssim(&enc, &img, &p).unwrap());
            if ab.to_bits() != ba.to_bits() {
                return Err(format!("image {i}: ssim asymmetric ({ab} vs {ba})"));
            }
        }
        if img.channel_histograms() != enc.channel_histograms() {
            return Err(format!("image {i}: histograms changed"));
        }
    }
    Ok("100/100 images: identity, symmetry and histogram checks hold".into())
}

fn run_evaluate(config: &Path, report: &Path, out_dir: &Path, threads: usize) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_blockbreak"))
        .arg("evaluate")
        .arg("--config")
        .arg(config)
        .arg("--report")
        .arg(report)
        .arg("--out-dir")
        .arg(out_dir)
        .arg("--threads")
        .arg(threads.to_string())
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(String::from_utf8_lossy(&status.stderr).into_owned());
    }
    std::fs::read(report).map_err(|e| e.to_string())
}

fn dir_bytes(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (PathBuf::from(p.file_name().unwrap()), std::fs::read(&p).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn criterion_9() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = tmp.path().join("eval.conf");
    std::fs::write(
        &config,
        format!(
            "dataset = {}\ncount = 4\nmode = both\npopulation = 200\ngenerations = 20\nseed = 9\n",
            corpus_path().0.display()
        ),
    )
    .map_err(|e| e.to_string())?;
    let mut reports = Vec::new();
    let mut outputs = Vec::new();
    for (run, threads) in [1, 1, 4, 4].into_iter().enumerate() {
        let out = tmp.path().join(format!("out{run}"));
        reports.push(run_evaluate(&config, &tmp.path().join(format!("report{run}.txt")), &out, threads)?);
        outputs.push(dir_bytes(&out));
    }
    if reports[0] != reports[1] || outputs[0] != outputs[1] {
        return Err("serial runs differ".into());
    }
    if reports[2] != reports[3] || outputs[2] != outputs[3] {
        return Err("parallel runs differ".into());
    }
    if reports[0] != reports[2] || outputs[0] != outputs[2] {
        return Err("serial and parallel runs differ".into());
    }
    Ok(format!(
        "4 runs byte-identical ({} report bytes, {} images each)",
        reports[0].len(),
        outputs[0].len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("cipher round trip", criterion_1),
        ("attack SSIM comparison", criterion_2),
        ("corner placement vs exhaustive search", criterion_3),
        ("exact recovery on smooth synthetics", criterion_4),
        ("placement equivariance", criterion_5),
        ("GA vs exhaustive optimum", criterion_6),
        ("block-scramble-only solving", criterion_7),
        ("metric self-checks", criterion_8),
        ("evaluation determinism", criterion_9),
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    println!("acceptance: natural images from the {}", corpus_path().1);
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n} PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n} FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
