//! Reading and writing images by file extension: PPM natively, PNG and JPEG
//! through the `image` crate.

use std::path::Path;

use crate::error::{Error, Result};
use crate::image::Image;

use super::ppm;

fn extension(path: &Path) -> String {
    path.extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase()
}

pub fn read_image(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    if extension(path) == "ppm" {
        return ppm::read_ppm(path);
    }
    let rgb = ::image::open(path)?.into_rgb8();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    Image::from_raw(w, h, rgb.into_raw())
}

pub fn write_image(path: impl AsRef<Path>, img: &Image) -> Result<()> {
    let path = path.as_ref();
    match extension(path).as_str() {
        "ppm" => ppm::write_ppm(path, img),
        "png" | "jpg" | "jpeg" => {
            let buf = ::image::RgbImage::from_raw(img.width() as u32, img.height() as u32, img.as_raw().to_vec())
                .expect("buffer length matches dimensions");
            buf.save(path)?;
            Ok(())
        }
        other => Err(Error::UnsupportedFormat(format!("cannot write .{other} files"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn png_round_trip_is_lossless() {
        let dir = std::env::temp_dir().join(format!("blockbreak-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let img = Image::from_fn(7, 5, |x, y| [(x * 30) as u8, (y * 50) as u8, 200]).unwrap();
        for name in ["a.png", "a.ppm", "A.PPM"] {
            let p = dir.join(name);
            write_image(&p, &img).unwrap();
            assert_eq!(read_image(&p).unwrap(), img);
        }
        assert!(matches!(write_image(dir.join("a.bmp"), &img), Err(Error::UnsupportedFormat(_))));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
