//! Builds CIFAR-10-format stand-in corpora from arbitrary photographs:
//! random square crops area-downsampled to 32×32.

use std::path::Path;

use ::image::imageops::{self, FilterType};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::image::Image;

use super::cifar::{Cifar10Record, SIDE};

/// `count` records cycling through `sources`; crop sides are 30-80% of the
/// shorter source dimension. Labels cycle 0..=9 and carry no meaning.
pub fn build_proxy_corpus(sources: &[impl AsRef<Path>], count: usize, seed: u64) -> Result<Vec<Cifar10Record>> {
    if sources.is_empty() {
        return Err(Error::InvalidArgument("need at least one source image".into()));
    }
    let photos = sources
        .iter()
        .map(|p| Ok(::image::open(p.as_ref())?.into_rgb8()))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let photo = &photos[i % photos.len()];
            let short = photo.width().min(photo.height());
            let side = ((short as f64 * rng.gen_range(0.3..0.8)) as u32).max(SIDE as u32);
            if side > short {
                return Err(Error::InvalidArgument(format!(
                    "source {} is smaller than {SIDE}x{SIDE}",
                    sources[i % photos.len()].as_ref().display()
                )));
            }
            let x = rng.gen_range(0..=photo.width() - side);
            let y = rng.gen_range(0..=photo.height() - side);
            let crop = imageops::crop_imm(photo, x, y, side, side).to_image();
            let small = imageops::resize(&crop, SIDE as u32, SIDE as u32, FilterType::Triangle);
            Ok(Cifar10Record {
                label: (i % 10) as u8,
                image: Image::from_raw(SIDE, SIDE, small.into_raw())?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::io::write_image;

    #[test]
    fn crops_are_deterministic_and_cycle_labels() {
        let dir = std::env::temp_dir().join(format!("blockbreak-proxy-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let src = dir.join("src.png");
        let photo = Image::from_fn(120, 90, |x, y| [(x * 2) as u8, (y * 2) as u8, 77]).unwrap();
        write_image(&src, &photo).unwrap();
        let a = build_proxy_corpus(&[&src], 12, 5).unwrap();
        let b = build_proxy_corpus(&[&src], 12, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 12);
        assert_eq!(a[11].label, 1);
        assert!(a.iter().all(|r| r.image.width() == 32 && r.image.pixel(5, 5)[2] == 77));
        assert_ne!(a, build_proxy_corpus(&[&src], 12, 6).unwrap());

        let tiny = dir.join("tiny.png");
        write_image(&tiny, &Image::filled(20, 20, [0, 0, 0]).unwrap()).unwrap();
        assert!(build_proxy_corpus(&[&tiny], 1, 0).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
