//! Reconstruction quality of one image against a reference: L1 and L2 error
//! as a percentage of the unit intensity range, PSNR and SSIM.

use crate::error::Result;
use crate::types::ImageBuffer;

/// PSNR reported when the mean squared error is below [`MSE_FLOOR`].
pub const PSNR_CAP_DB: f64 = 100.0;
pub const MSE_FLOOR: f64 = 1e-10;

pub const SSIM_WINDOW: usize = 8;
pub const SSIM_C1: f64 = 0.01 * 0.01;
pub const SSIM_C2: f64 = 0.03 * 0.03;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImgScores {
    pub l1_pct: f64,
    pub l2_pct: f64,
    pub psnr: f64,
    pub ssim: f64,
}

pub fn img_scores(a: &ImageBuffer, b: &ImageBuffer) -> Result<ImgScores> {
    a.same_shape(b)?;
    let n = a.samples().len() as f64;
    let (mut abs_sum, mut sq_sum) = (0.0f64, 0.0f64);
    for (&x, &y) in a.samples().iter().zip(b.samples()) {
        let d = (x as f64 - y as f64) / 255.0;
        abs_sum += d.abs();
        sq_sum += d * d;
    }
    let mse = sq_sum / n;
    Ok(ImgScores {
        l1_pct: 100.0 * abs_sum / n,
        l2_pct: 100.0 * mse,
        psnr: psnr_from_mse(mse),
        ssim: ssim(a, b)?,
    })
}

/// Peak signal-to-noise ratio for a unit peak, capped at [`PSNR_CAP_DB`].
pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse < MSE_FLOOR {
        PSNR_CAP_DB
    } else {
        (10.0 * (1.0 / mse).log10()).min(PSNR_CAP_DB)
    }
}

/// Mean SSIM over all 8x8 windows (stride 1, unweighted), per channel, then
/// averaged over channels. Images smaller than the window use a single window
/// clipped to the image.
pub fn ssim(a: &ImageBuffer, b: &ImageBuffer) -> Result<f64> {
    a.same_shape(b)?;
    let c = a.channels();
    let total: f64 = (0..c).map(|ch| channel_ssim(a, b, ch)).sum();
    Ok(total / c as f64)
}

/// Summed-area table over `(h + 1) x (w + 1)` entries.
struct Integral {
    w1: usize,
    data: Vec<f64>,
}

impl Integral {
    fn build(h: usize, w: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let w1 = w + 1;
        let mut data = vec![0.0; (h + 1) * w1];
        for y in 0..h {
            let mut row = 0.0;
            for x in 0..w {
                row += f(y, x);
                data[(y + 1) * w1 + x + 1] = data[y * w1 + x + 1] + row;
            }
        }
        Self { w1, data }
    }

    fn window(&self, y: usize, x: usize, wh: usize, ww: usize) -> f64 {
        let at = |r: usize, c: usize| self.data[r * self.w1 + c];
        at(y + wh, x + ww) - at(y, x + ww) - at(y + wh, x) + at(y, x)
    }
}

fn channel_ssim(a: &ImageBuffer, b: &ImageBuffer, ch: usize) -> f64 {
    let (h, w, c) = (a.height(), a.width(), a.channels());
    let sa = a.samples();
    let sb = b.samples();
    let px = |s: &[u8], y: usize, x: usize| s[(y * w + x) * c + ch] as f64 / 255.0;

    let ia = Integral::build(h, w, |y, x| px(sa, y, x));
    let ib = Integral::build(h, w, |y, x| px(sb, y, x));
    let iaa = Integral::build(h, w, |y, x| px(sa, y, x).powi(2));
    let ibb = Integral::build(h, w, |y, x| px(sb, y, x).powi(2));
    let iab = Integral::build(h, w, |y, x| px(sa, y, x) * px(sb, y, x));

    let wh = SSIM_WINDOW.min(h);
    let ww = SSIM_WINDOW.min(w);
    let n = (wh * ww) as f64;
    let mut total = 0.0;
    let mut count = 0usize;
    for y in 0..=h - wh {
        for x in 0..=w - ww {
            let mu_a = ia.window(y, x, wh, ww) / n;
            let mu_b = ib.window(y, x, wh, ww) / n;
            let var_a = (iaa.window(y, x, wh, ww) / n - mu_a * mu_a).max(0.0);
            let var_b = (ibb.window(y, x, wh, ww) / n - mu_b * mu_b).max(0.0);
            let cov = iab.window(y, x, wh, ww) / n - mu_a * mu_b;
            total += ((2.0 * mu_a * mu_b + SSIM_C1) * (2.0 * cov + SSIM_C2))
                / ((mu_a * mu_a + mu_b * mu_b + SSIM_C1) * (var_a + var_b + SSIM_C2));
            count += 1;
        }
    }
    total / count as f64
}
