//! Image similarity and permutation accuracy.

use crate::error::{Error, Result};
use crate::image::{Image, CHANNELS};
use crate::jigsaw::Assembly;
use crate::permutation::Permutation;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SsimParams {
    /// Side of the square Gaussian window; odd.
    pub window: usize,
    pub sigma: f64,
    pub k1: f64,
    pub k2: f64,
    pub dynamic_range: f64,
    pub luma: [f64; 3],
}

impl Default for SsimParams {
    fn default() -> Self {
        SsimParams {
            window: 11,
            sigma: 1.5,
            k1: 0.01,
            k2: 0.03,
            dynamic_range: 255.0,
            luma: [0.299, 0.587, 0.114],
        }
    }
}

impl SsimParams {
    pub fn c1(&self) -> f64 {
        (self.k1 * self.dynamic_range).powi(2)
    }

    pub fn c2(&self) -> f64 {
        (self.k2 * self.dynamic_range).powi(2)
    }

    /// One-dimensional Gaussian taps, normalized to sum 1.
    pub fn taps(&self) -> Vec<f64> {
        let r = (self.window / 2) as f64;
        let raw: Vec<f64> = (0..self.window)
            .map(|i| {
                let d = i as f64 - r;
                (-d * d / (2.0 * self.sigma * self.sigma)).exp()
            })
            .collect();
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|v| v / sum).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.window == 0 || self.window % 2 == 0 {
            return Err(Error::InvalidArgument(format!("SSIM window {} must be odd", self.window)));
        }
        if !(self.sigma > 0.0 && self.c1() > 0.0 && self.c2() > 0.0) {
            return Err(Error::InvalidArgument("SSIM sigma and constants must be positive".into()));
        }
        Ok(())
    }
}

pub fn luma_plane(img: &Image, coeffs: [f64; 3]) -> Vec<f64> {
    img.as_raw()
        .chunks_exact(CHANNELS)
        .map(|p| coeffs[0] * p[0] as f64 + coeffs[1] * p[1] as f64 + coeffs[2] * p[2] as f64)
        .collect()
}

/// Gaussian-weighted sums over every full window, separably.
fn filter(plane: &[f64], w: usize, h: usize, taps: &[f64]) -> Vec<f64> {
    let k = taps.len();
    let (ow, oh) = (w - k + 1, h - k + 1);
    let mut rows = vec![0.0; ow * h];
    for y in 0..h {
        let line = &plane[y * w..(y + 1) * w];
        for x in 0..ow {
            rows[y * ow + x] = taps.iter().zip(&line[x..x + k]).map(|(t, v)| t * v).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            out[y * ow + x] = taps.iter().enumerate().map(|(i, t)| t * rows[(y + i) * ow + x]).sum();
        }
    }
    out
}

/// Mean single-scale SSIM of the luma planes over all full windows.
pub fn ssim(a: &Image, b: &Image, params: &SsimParams) -> Result<f64> {
    params.validate()?;
    if (a.width(), a.height()) != (b.width(), b.height()) {
        return Err(Error::InvalidArgument(format!(
            "SSIM needs equal sizes, got {}x{} and {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )));
    }
    let (w, h) = (a.width(), a.height());
    if w < params.window || h < params.window {
        return Err(Error::InvalidArgument(format!(
            "{w}x{h} image is smaller than the {0}x{0} SSIM window",
            params.window
        )));
    }
    let taps = params.taps();
    let (la, lb) = (luma_plane(a, params.luma), luma_plane(b, params.luma));
    let sq = |p: &[f64]| p.iter().map(|v| v * v).collect::<Vec<_>>();
    let cross: Vec<f64> = la.iter().zip(&lb).map(|(x, y)| x * y).collect();

    let mu_a = filter(&la, w, h, &taps);
    let mu_b = filter(&lb, w, h, &taps);
    let e_aa = filter(&sq(&la), w, h, &taps);
    let e_bb = filter(&sq(&lb), w, h, &taps);
    let e_ab = filter(&cross, w, h, &taps);
    let (c1, c2) = (params.c1(), params.c2());

    let mut total = 0.0;
    for i in 0..mu_a.len() {
        let (ma, mb) = (mu_a[i], mu_b[i]);
        let var_a = e_aa[i] - ma * ma;
        let var_b = e_bb[i] - mb * mb;
        let cov = e_ab[i] - ma * mb;
        let num = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
        let den = (ma * ma + mb * mb + c1) * (var_a + var_b + c2);
        total += num / den;
    }
    Ok(total / mu_a.len() as f64)
}

/// Fraction of indices where both permutations agree.
pub fn placement_accuracy(recovered: &Permutation, truth: &Permutation) -> Result<f64> {
    if recovered.len() != truth.len() || truth.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "cannot compare permutations of length {} and {}",
            recovered.len(),
            truth.len()
        )));
    }
    let hits = recovered.as_slice().iter().zip(truth.as_slice()).filter(|(a, b)| a == b).count();
    Ok(hits as f64 / truth.len() as f64)
}

/// Fraction of board cells holding the same piece.
pub fn direct_assembly_accuracy(a: &Assembly, truth: &Assembly) -> Result<f64> {
    if (a.cols(), a.rows()) != (truth.cols(), truth.rows()) {
        return Err(Error::InvalidArgument(format!(
            "boards differ: {}x{} vs {}x{}",
            a.cols(),
            a.rows(),
            truth.cols(),
            truth.rows()
        )));
    }
    let hits = a.cells().iter().zip(truth.cells()).filter(|(x, y)| x == y).count();
    Ok(hits as f64 / truth.cells().len() as f64)
}
