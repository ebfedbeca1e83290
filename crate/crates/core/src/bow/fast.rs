use crate::error::Result;
use crate::types::ImageBuffer;

use super::to_gray;

/// Minimum distance of a keypoint from every border: half the 31x31 sampling
/// patch plus the 3x3 smoothing kernel.
pub const PATCH_MARGIN: usize = 16;

/// Contiguous circle pixels required for a corner.
const ARC_LEN: usize = 12;

/// Bresenham circle of radius 3, clockwise from the top.
const CIRCLE: [(isize, isize); 16] = [
    (0, -3),
    (1, -3),
    (2, -2),
    (3, -1),
    (3, 0),
    (3, 1),
    (2, 2),
    (1, 3),
    (0, 3),
    (-1, 3),
    (-2, 2),
    (-3, 1),
    (-3, 0),
    (-3, -1),
    (-2, -2),
    (-1, -3),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Keypoint {
    pub x: usize,
    pub y: usize,
    pub score: u32,
}

/// Longest circular run of `true` in `flags` and the summed weight over it.
fn longest_arc(flags: &[bool; 16], weights: &[u32; 16]) -> (usize, u32) {
    if flags.iter().all(|&f| f) {
        return (16, weights.iter().sum());
    }
    // Start right after a `false` so no run wraps past the scan start.
    let start = flags.iter().position(|&f| !f).unwrap() + 1;
    let (mut best_len, mut best_sum) = (0, 0);
    let (mut len, mut sum) = (0, 0);
    for i in 0..16 {
        let j = (start + i) % 16;
        if flags[j] {
            len += 1;
            sum += weights[j];
            if len > best_len || (len == best_len && sum > best_sum) {
                best_len = len;
                best_sum = sum;
            }
        } else {
            len = 0;
            sum = 0;
        }
    }
    (best_len, best_sum)
}

/// Segment-test response at `(x, y)`, or 0 when the pixel is not a corner.
fn corner_score(px: &[u8], w: usize, x: usize, y: usize, threshold: u8) -> u32 {
    let center = px[y * w + x] as i32;
    let t = threshold as i32;
    let at = |k: usize| {
        let (dx, dy) = CIRCLE[k];
        px[(y as isize + dy) as usize * w + (x as isize + dx) as usize] as i32
    };

    // A 12-arc covers at least three of the four compass points.
    let compass = [at(0), at(4), at(8), at(12)];
    let bright = compass.iter().filter(|&&p| p > center + t).count();
    let dark = compass.iter().filter(|&&p| p < center - t).count();
    if bright < 3 && dark < 3 {
        return 0;
    }

    let mut brighter = [false; 16];
    let mut darker = [false; 16];
    let mut diff = [0u32; 16];
    for k in 0..16 {
        let p = at(k);
        brighter[k] = p > center + t;
        darker[k] = p < center - t;
        diff[k] = (p - center).unsigned_abs();
    }
    let (bl, bs) = longest_arc(&brighter, &diff);
    let (dl, ds) = longest_arc(&darker, &diff);
    if bl >= ARC_LEN {
        bs
    } else if dl >= ARC_LEN {
        ds
    } else {
        0
    }
}

/// Segment-test corners with 3x3 non-maximum suppression.
///
/// Only pixels at least [`PATCH_MARGIN`] from every border are tested. Results
/// are ordered by score (descending) then `(y, x)` and cut to `max_keypoints`.
/// RGB input is converted with [`to_gray`].
pub fn detect_keypoints(img: &ImageBuffer, max_keypoints: usize, threshold: u8) -> Result<Vec<Keypoint>> {
    let gray = to_gray(img)?;
    let (h, w) = (gray.height(), gray.width());
    if h < 7 || w < 7 || h <= 2 * PATCH_MARGIN || w <= 2 * PATCH_MARGIN {
        return Ok(Vec::new());
    }
    let px = gray.samples();

    let mut scores = vec![0u32; h * w];
    for y in PATCH_MARGIN..h - PATCH_MARGIN {
        for x in PATCH_MARGIN..w - PATCH_MARGIN {
            scores[y * w + x] = corner_score(px, w, x, y, threshold);
        }
    }

    let mut keypoints = Vec::new();
    for y in PATCH_MARGIN..h - PATCH_MARGIN {
        for x in PATCH_MARGIN..w - PATCH_MARGIN {
            let s = scores[y * w + x];
            if s == 0 {
                continue;
            }
            let mut keep = true;
            'nbr: for dy in -1isize..=1 {
                for dx in -1isize..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let n = scores[(y as isize + dy) as usize * w + (x as isize + dx) as usize];
                    let earlier = dy < 0 || (dy == 0 && dx < 0);
                    if n > s || (earlier && n == s) {
                        keep = false;
                        break 'nbr;
                    }
                }
            }
            if keep {
                keypoints.push(Keypoint { x, y, score: s });
            }
        }
    }

    keypoints.sort_by(|a, b| b.score.cmp(&a.score).then(a.y.cmp(&b.y)).then(a.x.cmp(&b.x)));
    keypoints.truncate(max_keypoints);
    Ok(keypoints)
}
