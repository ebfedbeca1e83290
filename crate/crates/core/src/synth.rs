//! Procedural street-scene generator and perception-noise simulator.
//!
//! Each landmark gets a seeded label layout built from axis-aligned regions
//! (buildings, vegetation, sidewalks, a road band with dashed lane markings,
//! fences, poles) and a grayscale static image rendered from the labels. The
//! dynamic image adds opaque sprites standing in for vehicles and pedestrians,
//! optionally with darkened shadows. [`degrade`] then imitates imperfect
//! perception: label flips, softened probabilities, sensor noise and blur
//! where dynamic objects were removed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::types::{ImageBuffer, Mask, ProbabilityMap, SemanticMap};

pub const CLASS_NAMES: [&str; 8] = [
    "None",
    "Buildings",
    "Fences",
    "Others",
    "Roadlines",
    "Road",
    "Sidewalk",
    "Vegetation",
];

// Scene roles, in the order of CLASS_NAMES. Label = role % K.
const NONE: usize = 0;
const BUILDINGS: usize = 1;
const FENCES: usize = 2;
const OTHERS: usize = 3;
const ROADLINES: usize = 4;
const ROAD: usize = 5;
const SIDEWALK: usize = 6;
const VEGETATION: usize = 7;

/// Per-pixel jitter applied to the class base intensity.
pub const TEXTURE_JITTER: i32 = 8;
/// Minimum distance between a sprite intensity and every class base.
const SPRITE_CLEARANCE: i32 = 12;
const SPRITE_JITTER: i32 = 3;

pub fn class_names(num_classes: usize) -> Vec<String> {
    if num_classes == CLASS_NAMES.len() {
        CLASS_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        (0..num_classes).map(|c| format!("class_{c}")).collect()
    }
}

/// Base intensity per class, evenly spread over `[16, 240]`.
pub fn class_intensities(num_classes: usize) -> Vec<u8> {
    (0..num_classes)
        .map(|c| (16.0 + c as f64 * 224.0 / (num_classes - 1) as f64).round() as u8)
        .collect()
}

fn sprite_palette(num_classes: usize) -> Vec<u8> {
    let bases = class_intensities(num_classes);
    (SPRITE_JITTER..=255 - SPRITE_JITTER)
        .filter(|&v| bases.iter().all(|&b| (v - b as i32).abs() >= SPRITE_CLEARANCE))
        .map(|v| v as u8)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldSpec {
    pub seed: u64,
    pub height: usize,
    pub width: usize,
    pub num_classes: usize,
    pub num_landmarks: usize,
    /// Inclusive range of sprites per dynamic frame.
    pub dynamic_objects: (usize, usize),
    pub shadow: bool,
}

impl Default for WorldSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            height: 128,
            width: 128,
            num_classes: CLASS_NAMES.len(),
            num_landmarks: 200,
            dynamic_objects: (1, 6),
            shadow: true,
        }
    }
}

impl WorldSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_landmarks == 0 {
            return Err(Error::invalid("num_landmarks", "must be at least 1"));
        }
        if !(2..=crate::types::MAX_CLASSES).contains(&self.num_classes) {
            return Err(Error::invalid("num_classes", format!("{} is outside [2, 256]", self.num_classes)));
        }
        if self.height < 8 || self.width < 8 {
            return Err(Error::invalid("height/width", "frames must be at least 8x8"));
        }
        if self.dynamic_objects.0 > self.dynamic_objects.1 {
            return Err(Error::invalid("dynamic_objects", "min exceeds max"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkSample {
    pub id: u64,
    pub static_image: ImageBuffer,
    pub dynamic_image: ImageBuffer,
    pub static_semantics: SemanticMap,
    pub static_probs: ProbabilityMap,
    /// Pixels covered by dynamic objects (shadows excluded).
    pub dynamic_mask: Mask,
}

struct Canvas {
    h: usize,
    w: usize,
    px: Vec<u8>,
}

impl Canvas {
    fn new(h: usize, w: usize, fill: u8) -> Self {
        Self {
            h,
            w,
            px: vec![fill; h * w],
        }
    }

    /// Fill rows `[y0, y1)` x cols `[x0, x1)`, clipped to the frame.
    fn rect(&mut self, y0: isize, y1: isize, x0: isize, x1: isize, mut f: impl FnMut(usize, &mut u8)) {
        let clip = |v: isize, hi: usize| v.clamp(0, hi as isize) as usize;
        let (y0, y1, x0, x1) = (clip(y0, self.h), clip(y1, self.h), clip(x0, self.w), clip(x1, self.w));
        for y in y0..y1 {
            for x in x0..x1 {
                let i = y * self.w + x;
                f(i, &mut self.px[i]);
            }
        }
    }

    /// Fill the axis-aligned ellipse inscribed in the given box.
    fn ellipse(&mut self, y0: isize, y1: isize, x0: isize, x1: isize, mut f: impl FnMut(usize, &mut u8)) {
        let cy = (y0 + y1) as f64 / 2.0;
        let cx = (x0 + x1) as f64 / 2.0;
        let ry = ((y1 - y0) as f64 / 2.0).max(0.5);
        let rx = ((x1 - x0) as f64 / 2.0).max(0.5);
        let (h, w) = (self.h as isize, self.w as isize);
        for y in y0.max(0)..y1.min(h) {
            for x in x0.max(0)..x1.min(w) {
                let dy = (y as f64 + 0.5 - cy) / ry;
                let dx = (x as f64 + 0.5 - cx) / rx;
                if dx * dx + dy * dy <= 1.0 {
                    let i = y as usize * self.w + x as usize;
                    f(i, &mut self.px[i]);
                }
            }
        }
    }
}

fn span(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    if hi <= lo {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

/// Intensity offset painted over pixels of one class only (windows, foliage).
struct Detail {
    role: usize,
    y0: isize,
    y1: isize,
    x0: isize,
    x1: isize,
    delta: i32,
}

fn windows(rng: &mut ChaCha8Rng, h: usize, details: &mut Vec<Detail>, top: isize, bottom: isize, x0: isize, x1: isize) {
    let size = (h / 96).max(2) as isize;
    let pitch = size * rng.random_range(3i64..=5) as isize;
    let y_off = rng.random_range(0..pitch as i64) as isize;
    let x_off = rng.random_range(0..pitch as i64) as isize;
    let mut y = top + size + y_off;
    while y + size < bottom - size {
        let mut x = x0 + size + x_off;
        while x + size < x1 - size {
            if rng.random_bool(0.8) {
                details.push(Detail { role: BUILDINGS, y0: y, y1: y + size, x0: x, x1: x + size, delta: -40 });
            }
            x += pitch;
        }
        y += pitch;
    }
}

fn speckle(rng: &mut ChaCha8Rng, details: &mut Vec<Detail>, y0: isize, y1: isize, x0: isize, x1: isize) {
    let area = ((y1 - y0).max(0) * (x1 - x0).max(0)) as usize;
    for _ in 0..area / 150 {
        let y = rng.random_range(y0 as i64..y1 as i64) as isize;
        let x = rng.random_range(x0 as i64..x1 as i64) as isize;
        let d = rng.random_range(1i64..=2) as isize;
        details.push(Detail { role: VEGETATION, y0: y, y1: y + d, x0: x, x1: x + d, delta: -36 });
    }
}

fn layout(rng: &mut ChaCha8Rng, h: usize, w: usize) -> (Vec<usize>, Vec<Detail>) {
    let mut c = Canvas::new(h, w, NONE as u8);
    let mut details = Vec::new();
    let set = |role: usize| move |_: usize, p: &mut u8| *p = role as u8;
    let hi = h as isize;
    let wi = w as isize;

    let horizon = span(rng, 3 * h / 10, 11 * h / 20) as isize;

    // skyline
    let mut x = 0isize;
    while x < wi {
        let bw = span(rng, w / 16, w / 4).max(2) as isize;
        if rng.random_bool(0.75) {
            let top = span(rng, h / 20, (horizon as usize).saturating_sub(2)) as isize;
            c.rect(top, horizon, x, x + bw, set(BUILDINGS));
            windows(rng, h, &mut details, top, horizon, x, x + bw);
        }
        x += bw;
    }
    for _ in 0..span(rng, 1, 4) {
        let cy = span(rng, h / 5, horizon as usize) as isize;
        let cx = rng.random_range(0..w) as isize;
        let ry = span(rng, h / 24, h / 8).max(1) as isize;
        let rx = span(rng, w / 24, w / 6).max(1) as isize;
        c.ellipse(cy - ry, cy + ry, cx - rx, cx + rx, set(VEGETATION));
        speckle(rng, &mut details, cy - ry, cy + ry, cx - rx, cx + rx);
    }

    // ground: sidewalk, road, sidewalk
    let walk_top = horizon;
    let road_top = walk_top + span(rng, h / 32, h / 8).max(1) as isize;
    let road_bot = road_top + span(rng, h / 6, h / 3).max(2) as isize;
    let walk_bot = road_bot + span(rng, h / 32, h / 8).max(1) as isize;
    c.rect(walk_top, road_top, 0, wi, set(SIDEWALK));
    c.rect(road_top, road_bot, 0, wi, set(ROAD));
    c.rect(road_bot, walk_bot, 0, wi, set(SIDEWALK));
    if rng.random_bool(0.35) {
        // cross street
        let cx = rng.random_range(0..w) as isize;
        let half = span(rng, w / 16, w / 6).max(1) as isize;
        c.rect(road_top, hi, cx - half, cx + half, set(ROAD));
    }

    // dashed lane marking
    let line_h = (h / 64).max(1) as isize;
    let line_y = (road_top + road_bot) / 2 + rng.random_range(-2i64..=2) as isize;
    let dash = span(rng, w / 16, w / 6).max(2) as isize;
    let gap = span(rng, w / 24, w / 8).max(1) as isize;
    let mut x = -(rng.random_range(0..(dash + gap) as usize) as isize);
    while x < wi {
        c.rect(line_y, line_y + line_h, x, x + dash, set(ROADLINES));
        x += dash + gap;
    }

    // fences along the far sidewalk edge
    let fence_h = (h / 32).max(1) as isize;
    for _ in 0..span(rng, 1, 3) {
        let x0 = rng.random_range(0..w) as isize;
        let len = span(rng, w / 10, w / 3) as isize;
        c.rect(walk_top - fence_h, walk_top, x0, x0 + len, set(FENCES));
    }

    // poles and signs
    for _ in 0..span(rng, 1, 4) {
        let x0 = rng.random_range(0..w) as isize;
        let pw = span(rng, 2, (w / 20).max(2)) as isize;
        let ph = span(rng, h / 8, h / 3) as isize;
        let bottom = span(rng, walk_top as usize, (walk_bot as usize).min(h)) as isize;
        c.rect(bottom - ph, bottom, x0, x0 + pw, set(OTHERS));
    }

    // foreground vegetation
    for _ in 0..span(rng, 0, 3) {
        let cy = span(rng, walk_bot.min(hi - 1) as usize, h - 1) as isize;
        let cx = rng.random_range(0..w) as isize;
        let ry = span(rng, h / 24, h / 8).max(1) as isize;
        let rx = span(rng, w / 16, w / 5).max(1) as isize;
        c.ellipse(cy - ry, cy + ry, cx - rx, cx + rx, set(VEGETATION));
        speckle(rng, &mut details, cy - ry, cy + ry, cx - rx, cx + rx);
    }

    (c.px.into_iter().map(|r| r as usize).collect(), details)
}

fn generate_one(spec: &WorldSpec, id: u64, palette: &[u8], bases: &[u8]) -> Result<LandmarkSample> {
    let (h, w, k) = (spec.height, spec.width, spec.num_classes);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(id);

    let (roles, details) = layout(&mut rng, h, w);
    let mut offset = Canvas::new(h, w, 0);
    let mut delta = vec![0i32; h * w];
    for d in &details {
        offset.rect(d.y0, d.y1, d.x0, d.x1, |i, _| {
            if roles[i] == d.role {
                delta[i] = d.delta;
            }
        });
    }
    let labels: Vec<u8> = roles.iter().map(|&r| (r % k) as u8).collect();
    let static_px: Vec<u8> = labels
        .iter()
        .zip(&delta)
        .map(|(&l, &d)| {
            let j = rng.random_range(-TEXTURE_JITTER..=TEXTURE_JITTER);
            (bases[l as usize] as i32 + d + j).clamp(0, 255) as u8
        })
        .collect();

    let mut dynamic = Canvas {
        h,
        w,
        px: static_px.clone(),
    };
    let mut mask = vec![false; h * w];
    let mut shadows = Vec::new();
    let n_sprites = span(&mut rng, spec.dynamic_objects.0, spec.dynamic_objects.1);
    for _ in 0..n_sprites {
        let sh = span(&mut rng, h / 10, h / 3).max(1) as isize;
        let sw = span(&mut rng, w / 10, w / 3).max(1) as isize;
        let y0 = rng.random_range(-(sh as i64 / 2)..h as i64 - sh as i64 / 2) as isize;
        let x0 = rng.random_range(-(sw as i64 / 2)..w as i64 - sw as i64 / 2) as isize;
        let value = palette[rng.random_range(0..palette.len())] as i32;
        let ellipse = rng.random_bool(0.5);
        let under = &static_px;
        let mut paint = |i: usize, p: &mut u8| {
            let mut v = (value + rng.random_range(-SPRITE_JITTER..=SPRITE_JITTER)) as u8;
            if v == under[i] {
                // surface detail can land on a sprite level
                v ^= 1;
            }
            *p = v;
            mask[i] = true;
        };
        if ellipse {
            dynamic.ellipse(y0, y0 + sh, x0, x0 + sw, &mut paint);
        } else {
            dynamic.rect(y0, y0 + sh, x0, x0 + sw, &mut paint);
        }
        shadows.push((y0 + sh, x0, sw, sh));
    }

    let differs = static_px.iter().zip(&dynamic.px).map(|(a, b)| a != b);
    if differs.zip(&mask).any(|(d, &m)| d != m) {
        return Err(Error::invalid(
            "dynamic mask",
            format!("landmark {id}: mask does not match changed pixels"),
        ));
    }

    if spec.shadow {
        for (bottom, x0, sw, sh) in shadows {
            let depth = (sh / 4).max(1);
            let mask_ref = &mask;
            dynamic.ellipse(bottom - depth, bottom + depth / 2, x0, x0 + sw, |i, p| {
                if !mask_ref[i] {
                    *p = (*p as u32 * 3 / 5) as u8;
                }
            });
        }
    }

    let static_semantics = SemanticMap::new(h, w, k, labels)?;
    Ok(LandmarkSample {
        id,
        static_image: ImageBuffer::new(h, w, 1, static_px)?,
        dynamic_image: ImageBuffer::new(h, w, 1, dynamic.px)?,
        static_probs: ProbabilityMap::one_hot(&static_semantics),
        static_semantics,
        dynamic_mask: Mask::new(h, w, mask)?,
    })
}

/// Generate landmarks `0..N`. Each landmark depends only on `(seed, id)`.
pub fn generate_world(spec: &WorldSpec) -> Result<Vec<LandmarkSample>> {
    spec.validate()?;
    let palette = sprite_palette(spec.num_classes);
    if palette.is_empty() {
        return Err(Error::invalid("num_classes", "no sprite intensity clears every class base"));
    }
    let bases = class_intensities(spec.num_classes);
    (0..spec.num_landmarks as u64)
        .map(|id| generate_one(spec, id, &palette, &bases))
        .collect()
}

/// Which image the degraded visual input starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VisualSource {
    /// Ground-truth static image, as if translation were perfect.
    #[default]
    Static,
    /// The dynamic frame, sprites included.
    Dynamic,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseSpec {
    pub label_flip_p: f64,
    /// Weight of the uniform distribution mixed into the one-hot labels.
    pub prob_temperature: f64,
    pub image_noise_sigma: f64,
    /// 5x5 box blur restricted to the dynamic-object mask.
    pub artifact_blur: bool,
    pub visual_source: VisualSource,
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.label_flip_p) {
            return Err(Error::invalid("label_flip_p", format!("{} is outside [0, 1]", self.label_flip_p)));
        }
        if !(0.0..=1.0).contains(&self.prob_temperature) {
            return Err(Error::invalid(
                "prob_temperature",
                format!("{} is outside [0, 1]", self.prob_temperature),
            ));
        }
        if !(self.image_noise_sigma >= 0.0 && self.image_noise_sigma.is_finite()) {
            return Err(Error::invalid(
                "image_noise_sigma",
                format!("{} must be finite and >= 0", self.image_noise_sigma),
            ));
        }
        Ok(())
    }
}

fn box_blur_masked(img: &ImageBuffer, mask: &Mask) -> Result<ImageBuffer> {
    let (h, w, c) = (img.height(), img.width(), img.channels());
    let src = img.samples();
    let mut out = src.to_vec();
    for y in 0..h {
        for x in 0..w {
            if !mask.bits()[y * w + x] {
                continue;
            }
            let (y0, y1) = (y.saturating_sub(2), (y + 3).min(h));
            let (x0, x1) = (x.saturating_sub(2), (x + 3).min(w));
            let n = ((y1 - y0) * (x1 - x0)) as u32;
            for ch in 0..c {
                let mut s = 0u32;
                for yy in y0..y1 {
                    for xx in x0..x1 {
                        s += src[(yy * w + xx) * c + ch] as u32;
                    }
                }
                out[(y * w + x) * c + ch] = ((s + n / 2) / n) as u8;
            }
        }
    }
    ImageBuffer::new(h, w, c, out)
}

/// Simulated perception output for one landmark: a probability map and a
/// recovered image. Deterministic given `(sample.id, noise, seed)`.
pub fn degrade(sample: &LandmarkSample, noise: &NoiseSpec, seed: u64) -> Result<(ProbabilityMap, ImageBuffer)> {
    noise.validate()?;
    let map = &sample.static_semantics;
    let k = map.num_classes();

    let mut label_rng = ChaCha8Rng::seed_from_u64(seed);
    label_rng.set_stream(2 * sample.id);
    let labels: Vec<u8> = map
        .labels()
        .iter()
        .map(|&l| {
            if label_rng.random::<f64>() < noise.label_flip_p {
                let other = label_rng.random_range(0..k as u32 - 1) as u8;
                if other >= l {
                    other + 1
                } else {
                    other
                }
            } else {
                l
            }
        })
        .collect();
    let t = noise.prob_temperature as f32;
    let uniform = t / k as f32;
    let mut probs = vec![uniform; labels.len() * k];
    for (i, &l) in labels.iter().enumerate() {
        probs[i * k + l as usize] = (1.0 - t) + uniform;
    }
    let probs = ProbabilityMap::new(map.height(), map.width(), k, probs)?;

    let base = match noise.visual_source {
        VisualSource::Static => &sample.static_image,
        VisualSource::Dynamic => &sample.dynamic_image,
    };
    let mut image = base.clone();
    if noise.image_noise_sigma > 0.0 {
        let mut img_rng = ChaCha8Rng::seed_from_u64(seed);
        img_rng.set_stream(2 * sample.id + 1);
        let normal = Normal::new(0.0, noise.image_noise_sigma)
            .map_err(|e| Error::invalid("image_noise_sigma", e.to_string()))?;
        let samples = base
            .samples()
            .iter()
            .map(|&v| (v as f64 + normal.sample(&mut img_rng)).round().clamp(0.0, 255.0) as u8)
            .collect();
        image = ImageBuffer::new(base.height(), base.width(), base.channels(), samples)?;
    }
    if noise.artifact_blur {
        image = box_blur_masked(&image, &sample.dynamic_mask)?;
    }
    Ok((probs, image))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::argmax_map;

    fn small_spec() -> WorldSpec {
        WorldSpec {
            seed: 42,
            height: 64,
            width: 64,
            num_landmarks: 6,
            ..WorldSpec::default()
        }
    }

    #[test]
    fn palette_clears_every_base() {
        let bases = class_intensities(8);
        assert_eq!(bases, vec![16, 48, 80, 112, 144, 176, 208, 240]);
        let palette = sprite_palette(8);
        assert!(!palette.is_empty());
        for v in palette {
            assert!(bases.iter().all(|&b| (v as i32 - b as i32).abs() >= SPRITE_CLEARANCE));
        }
    }

    #[test]
    fn no_dynamic_objects_means_identical_images() {
        let spec = WorldSpec {
            dynamic_objects: (0, 0),
            ..small_spec()
        };
        for s in generate_world(&spec).unwrap() {
            assert_eq!(s.dynamic_image, s.static_image);
            assert_eq!(s.dynamic_mask.count(), 0);
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(generate_world(&small_spec()).unwrap(), generate_world(&small_spec()).unwrap());
    }

    #[test]
    fn landmark_depends_only_on_seed_and_id() {
        let a = generate_world(&small_spec()).unwrap();
        let b = generate_world(&WorldSpec {
            num_landmarks: 3,
            ..small_spec()
        })
        .unwrap();
        assert_eq!(&a[..3], &b[..]);
    }

    #[test]
    fn changes_stay_inside_mask_and_shadows() {
        let spec = WorldSpec {
            shadow: false,
            ..small_spec()
        };
        for s in generate_world(&spec).unwrap() {
            for ((a, b), &m) in s
                .static_image
                .samples()
                .iter()
                .zip(s.dynamic_image.samples())
                .zip(s.dynamic_mask.bits())
            {
                assert_eq!(a != b, m);
            }
            assert_eq!(s.static_probs, ProbabilityMap::one_hot(&s.static_semantics));
        }
    }

    #[test]
    fn invalid_spec() {
        assert!(generate_world(&WorldSpec {
            num_landmarks: 0,
            ..small_spec()
        })
        .is_err());
        assert!(generate_world(&WorldSpec {
            num_classes: 1,
            ..small_spec()
        })
        .is_err());
    }

    #[test]
    fn zero_noise_is_identity() {
        let s = &generate_world(&small_spec()).unwrap()[2];
        let (probs, img) = degrade(s, &NoiseSpec::default(), 9).unwrap();
        assert_eq!(probs, s.static_probs);
        assert_eq!(img, s.static_image);
    }

    #[test]
    fn forced_flip_binary() {
        let spec = WorldSpec {
            num_classes: 2,
            ..small_spec()
        };
        let s = &generate_world(&spec).unwrap()[0];
        let noise = NoiseSpec {
            label_flip_p: 1.0,
            ..NoiseSpec::default()
        };
        let (probs, _) = degrade(s, &noise, 1).unwrap();
        let flipped = argmax_map(&probs);
        for (a, b) in flipped.labels().iter().zip(s.static_semantics.labels()) {
            assert_ne!(a, b);
        }
    }

    #[test]
    fn flip_rate_matches_probability() {
        let s = &generate_world(&small_spec()).unwrap()[0];
        let noise = NoiseSpec {
            label_flip_p: 0.1,
            prob_temperature: 0.3,
            ..NoiseSpec::default()
        };
        for seed in 0..10 {
            let (probs, _) = degrade(s, &noise, seed).unwrap();
            let pred = argmax_map(&probs);
            let flipped = pred
                .labels()
                .iter()
                .zip(s.static_semantics.labels())
                .filter(|(a, b)| a != b)
                .count();
            let frac = flipped as f64 / (64.0 * 64.0);
            assert!((frac - 0.1).abs() <= 0.02, "seed {seed}: {frac}");
        }
    }

    #[test]
    fn blur_only_touches_mask() {
        let s = &generate_world(&small_spec()).unwrap()[1];
        let noise = NoiseSpec {
            artifact_blur: true,
            visual_source: VisualSource::Dynamic,
            ..NoiseSpec::default()
        };
        let (_, img) = degrade(s, &noise, 0).unwrap();
        for ((&a, &b), &m) in img.samples().iter().zip(s.dynamic_image.samples()).zip(s.dynamic_mask.bits()) {
            if !m {
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn noise_spec_validation() {
        let bad = [
            NoiseSpec { label_flip_p: 1.5, ..NoiseSpec::default() },
            NoiseSpec { prob_temperature: -0.1, ..NoiseSpec::default() },
            NoiseSpec { image_noise_sigma: f64::NAN, ..NoiseSpec::default() },
        ];
        for n in bad {
            assert!(n.validate().is_err());
        }
    }
}
