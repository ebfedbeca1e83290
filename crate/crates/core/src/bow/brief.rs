use crate::error::{Error, Result};
use crate::types::ImageBuffer;

use super::fast::{Keypoint, PATCH_MARGIN};
use super::pattern::BRIEF_PAIRS;
use super::to_gray;

pub const DESCRIPTOR_BITS: usize = 256;
pub const DESCRIPTOR_BYTES: usize = DESCRIPTOR_BITS / 8;

/// 256-bit binary string. Bit `i` lives in word `i / 64` at position `i % 64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BinaryDescriptor(pub [u64; 4]);

impl BinaryDescriptor {
    pub fn hamming(&self, other: &Self) -> u32 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set_bit(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i % 64);
        if value {
            self.0[i / 64] |= mask;
        } else {
            self.0[i / 64] &= !mask;
        }
    }

    /// Little-endian words, i.e. byte `j` holds bits `8j..8j+8`, LSB first.
    pub fn to_bytes(&self) -> [u8; DESCRIPTOR_BYTES] {
        let mut out = [0u8; DESCRIPTOR_BYTES];
        for (chunk, word) in out.chunks_exact_mut(8).zip(&self.0) {
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8; DESCRIPTOR_BYTES]) -> Self {
        let mut words = [0u64; 4];
        for (word, chunk) in words.iter_mut().zip(bytes.chunks_exact(8)) {
            *word = u64::from_le_bytes(chunk.try_into().unwrap());
        }
        Self(words)
    }
}

/// 3x3 box sums of every interior pixel (border entries stay 0); comparing
/// sums equals comparing box means.
fn box_sums(gray: &ImageBuffer) -> Vec<u16> {
    let (h, w) = (gray.height(), gray.width());
    let px = gray.samples();
    let mut rows = vec![0u16; h * w];
    for y in 0..h {
        let r = &px[y * w..(y + 1) * w];
        for x in 1..w.saturating_sub(1) {
            rows[y * w + x] = r[x - 1] as u16 + r[x] as u16 + r[x + 1] as u16;
        }
    }
    let mut sums = vec![0u16; h * w];
    for y in 1..h.saturating_sub(1) {
        for x in 0..w {
            sums[y * w + x] = rows[(y - 1) * w + x] + rows[y * w + x] + rows[(y + 1) * w + x];
        }
    }
    sums
}

fn describe_sums(sums: &[u16], h: usize, w: usize, kp: &Keypoint) -> Result<BinaryDescriptor> {
    if kp.x < PATCH_MARGIN || kp.y < PATCH_MARGIN || kp.x + PATCH_MARGIN >= w || kp.y + PATCH_MARGIN >= h {
        return Err(Error::MarginViolation {
            x: kp.x,
            y: kp.y,
            margin: PATCH_MARGIN,
        });
    }
    let at = |dx: i8, dy: i8| sums[(kp.y as isize + dy as isize) as usize * w + (kp.x as isize + dx as isize) as usize];
    let mut d = BinaryDescriptor::default();
    for (i, &[px_, py_, qx, qy]) in BRIEF_PAIRS.iter().enumerate() {
        d.set_bit(i, at(px_, py_) < at(qx, qy));
    }
    Ok(d)
}

/// BRIEF-style descriptor of the patch around `kp`: bit `i` is set when the
/// smoothed intensity at the first point of pair `i` is below the second.
pub fn describe(img: &ImageBuffer, kp: &Keypoint) -> Result<BinaryDescriptor> {
    describe_all(img, std::slice::from_ref(kp)).map(|mut v| v.remove(0))
}

pub fn describe_all(img: &ImageBuffer, keypoints: &[Keypoint]) -> Result<Vec<BinaryDescriptor>> {
    let gray = to_gray(img)?;
    let sums = box_sums(&gray);
    keypoints
        .iter()
        .map(|kp| describe_sums(&sums, gray.height(), gray.width(), kp))
        .collect()
}
