//! On-disk formats and dataset layout.
//!
//! All binary formats are little-endian and start with a four-byte magic and a
//! `u32` version (currently 1):
//!
//! | magic  | payload after version                                                      |
//! |--------|----------------------------------------------------------------------------|
//! | `MMPM` | `u32 H, u32 W, u32 K`, then `H*W*K` f32, row-major, class fastest           |
//! | `MMVC` | `u32 W, u64 seed, u32 has_idf`, `W` x 32-byte words, then `W` f32 if idf    |
//! | `MMVI` | `u32 N, u32 g_dim, u32 h_dim, u32 L, u32 K`, then per record `u64 id`, `g_dim` f32, `h_dim` f32 |
//! | `MMFV` | `u32 len`, then `len` f32                                                   |
//!
//! Label maps, masks and images are binary PGM (`P5`) or PPM (`P6`) with
//! maxval 255. A label map stores the class index as the pixel value; a mask
//! stores 0 or 1.
//!
//! Readers validate every invariant of the returned type and never hand back a
//! partially built value. Writers are deterministic.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bow::{BinaryDescriptor, BowCode, Vocabulary, DESCRIPTOR_BYTES};
use crate::error::{Error, Result};
use crate::retrieval::{LandmarkCodes, LandmarkEntry, LandmarkIndex};
use crate::spm::{SpmCode, SpmConfig};
use crate::synth::{LandmarkSample, WorldSpec};
use crate::types::{FeatureVector, ImageBuffer, Mask, ProbabilityMap, SemanticMap};

pub const FORMAT_VERSION: u32 = 1;
pub const MANIFEST_VERSION: u32 = 1;

pub const PROB_MAGIC: &[u8; 4] = b"MMPM";
pub const VOCAB_MAGIC: &[u8; 4] = b"MMVC";
pub const INDEX_MAGIC: &[u8; 4] = b"MMVI";
pub const CODE_MAGIC: &[u8; 4] = b"MMFV";

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn format_err(context: &str, reason: impl Into<String>) -> Error {
    Error::Format {
        context: context.to_string(),
        reason: reason.into(),
    }
}

/// Attach the file name to errors raised while decoding its bytes.
fn with_path<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Format { reason, .. } => Error::Format {
            context: path.display().to_string(),
            reason,
        },
        Error::Io { .. } => e,
        other => Error::Format {
            context: path.display().to_string(),
            reason: other.to_string(),
        },
    })
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    context: &'static str,
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8], context: &'static str) -> Self {
        Self { bytes, pos: 0, context }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < n {
            return Err(format_err(
                self.context,
                format!("truncated: need {n} bytes at offset {}, {} left", self.pos, self.bytes.len() - self.pos),
            ));
        }
        let out = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f32s(&mut self, n: usize) -> Result<Vec<f32>> {
        let raw = self.take(n.checked_mul(4).ok_or_else(|| format_err(self.context, "length overflow"))?)?;
        Ok(raw.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap())).collect())
    }

    fn header(&mut self, magic: &[u8; 4]) -> Result<()> {
        let found = self.take(4)?;
        if found != magic {
            return Err(format_err(
                self.context,
                format!(
                    "bad magic {:?}, expected {:?}",
                    String::from_utf8_lossy(found),
                    String::from_utf8_lossy(magic)
                ),
            ));
        }
        let version = self.u32()?;
        if version != FORMAT_VERSION {
            return Err(format_err(
                self.context,
                format!("unsupported version {version}, expected {FORMAT_VERSION}"),
            ));
        }
        Ok(())
    }

    /// Remaining byte count must equal `expected`.
    fn expect_remaining(&self, expected: usize) -> Result<()> {
        let left = self.bytes.len() - self.pos;
        if left != expected {
            return Err(format_err(
                self.context,
                format!("payload is {left} bytes, header implies {expected}"),
            ));
        }
        Ok(())
    }

    fn finish(&self) -> Result<()> {
        self.expect_remaining(0)
    }
}

fn push_header(out: &mut Vec<u8>, magic: &[u8; 4]) {
    out.extend_from_slice(magic);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
}

fn push_u32(out: &mut Vec<u8>, v: usize) {
    out.extend_from_slice(&(v as u32).to_le_bytes());
}

fn push_f32s(out: &mut Vec<u8>, values: &[f32]) {
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

// ---------------------------------------------------------------------------
// Netpbm

struct Pnm<'a> {
    channels: usize,
    height: usize,
    width: usize,
    data: &'a [u8],
}

fn parse_pnm(bytes: &[u8]) -> Result<Pnm<'_>> {
    const CTX: &str = "netpbm";
    let channels = match bytes.get(..2) {
        Some(b"P5") => 1,
        Some(b"P6") => 3,
        _ => return Err(format_err(CTX, "not a binary PGM (P5) or PPM (P6) file")),
    };
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        loop {
            match bytes.get(pos) {
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(_) => break,
                None => return Err(format_err(CTX, "truncated header")),
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(|b| b.is_ascii_digit()) {
            pos += 1;
        }
        let text = std::str::from_utf8(&bytes[start..pos]).unwrap();
        *field = text
            .parse()
            .map_err(|_| format_err(CTX, format!("bad header field at byte {start}")))?;
    }
    // exactly one whitespace byte separates the header from the raster
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(format_err(CTX, "missing whitespace after maxval")),
    }
    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(format_err(CTX, format!("maxval {maxval}, only 255 is supported")));
    }
    if width == 0 || height == 0 {
        return Err(format_err(CTX, "zero image dimension"));
    }
    let expected = width * height * channels;
    let data = &bytes[pos..];
    if data.len() != expected {
        return Err(format_err(
            CTX,
            format!("raster is {} bytes, expected {expected}", data.len()),
        ));
    }
    Ok(Pnm {
        channels,
        height,
        width,
        data,
    })
}

fn pnm_bytes(channels: usize, height: usize, width: usize, data: &[u8]) -> Vec<u8> {
    let magic = if channels == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(data);
    out
}

pub fn image_to_bytes(img: &ImageBuffer) -> Vec<u8> {
    pnm_bytes(img.channels(), img.height(), img.width(), img.samples())
}

pub fn image_from_bytes(bytes: &[u8]) -> Result<ImageBuffer> {
    let p = parse_pnm(bytes)?;
    ImageBuffer::new(p.height, p.width, p.channels, p.data.to_vec())
}

pub fn write_image(path: &Path, img: &ImageBuffer) -> Result<()> {
    write_file(path, &image_to_bytes(img))
}

pub fn read_image(path: &Path) -> Result<ImageBuffer> {
    with_path(path, image_from_bytes(&read_file(path)?))
}

pub fn label_map_to_bytes(map: &SemanticMap) -> Vec<u8> {
    pnm_bytes(1, map.height(), map.width(), map.labels())
}

/// Decode a label PGM; every pixel must be below `num_classes`.
pub fn label_map_from_bytes(bytes: &[u8], num_classes: usize) -> Result<SemanticMap> {
    let p = parse_pnm(bytes)?;
    if p.channels != 1 {
        return Err(format_err("label map", "label maps must be PGM (P5)"));
    }
    SemanticMap::new(p.height, p.width, num_classes, p.data.to_vec())
}

pub fn write_label_map(path: &Path, map: &SemanticMap) -> Result<()> {
    write_file(path, &label_map_to_bytes(map))
}

pub fn read_label_map(path: &Path, num_classes: usize) -> Result<SemanticMap> {
    with_path(path, label_map_from_bytes(&read_file(path)?, num_classes))
}

pub fn write_mask(path: &Path, mask: &Mask) -> Result<()> {
    let data: Vec<u8> = mask.bits().iter().map(|&b| b as u8).collect();
    write_file(path, &pnm_bytes(1, mask.height(), mask.width(), &data))
}

pub fn read_mask(path: &Path) -> Result<Mask> {
    let bytes = read_file(path)?;
    let r = (|| {
        let p = parse_pnm(&bytes)?;
        if p.channels != 1 {
            return Err(format_err("mask", "masks must be PGM (P5)"));
        }
        if let Some(i) = p.data.iter().position(|&v| v > 1) {
            return Err(format_err(
                "mask",
                format!("value {} at (row {}, col {}) is not 0 or 1", p.data[i], i / p.width, i % p.width),
            ));
        }
        Mask::new(p.height, p.width, p.data.iter().map(|&v| v == 1).collect())
    })();
    with_path(path, r)
}

// ---------------------------------------------------------------------------
// Probability maps

pub fn prob_map_to_bytes(map: &ProbabilityMap) -> Vec<u8> {
    let mut out = Vec::with_capacity(20 + map.probs().len() * 4);
    push_header(&mut out, PROB_MAGIC);
    push_u32(&mut out, map.height());
    push_u32(&mut out, map.width());
    push_u32(&mut out, map.num_classes());
    push_f32s(&mut out, map.probs());
    out
}

pub fn prob_map_from_bytes(bytes: &[u8]) -> Result<ProbabilityMap> {
    let mut r = Reader::new(bytes, "probability map");
    r.header(PROB_MAGIC)?;
    let (h, w, k) = (r.u32()? as usize, r.u32()? as usize, r.u32()? as usize);
    let n = h
        .checked_mul(w)
        .and_then(|v| v.checked_mul(k))
        .ok_or_else(|| format_err("probability map", "dimension overflow"))?;
    r.expect_remaining(n * 4)?;
    let probs = r.f32s(n)?;
    ProbabilityMap::new(h, w, k, probs)
}

pub fn write_prob_map(path: &Path, map: &ProbabilityMap) -> Result<()> {
    write_file(path, &prob_map_to_bytes(map))
}

pub fn read_prob_map(path: &Path) -> Result<ProbabilityMap> {
    with_path(path, prob_map_from_bytes(&read_file(path)?))
}

// ---------------------------------------------------------------------------
// Feature vectors

pub fn code_to_bytes(v: &FeatureVector) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + v.len() * 4);
    push_header(&mut out, CODE_MAGIC);
    push_u32(&mut out, v.len());
    push_f32s(&mut out, v.values());
    out
}

pub fn code_from_bytes(bytes: &[u8]) -> Result<FeatureVector> {
    let mut r = Reader::new(bytes, "code vector");
    r.header(CODE_MAGIC)?;
    let len = r.u32()? as usize;
    r.expect_remaining(len * 4)?;
    FeatureVector::new(r.f32s(len)?)
}

pub fn write_code(path: &Path, v: &FeatureVector) -> Result<()> {
    write_file(path, &code_to_bytes(v))
}

pub fn read_code(path: &Path) -> Result<FeatureVector> {
    with_path(path, code_from_bytes(&read_file(path)?))
}

// ---------------------------------------------------------------------------
// Vocabularies

pub fn vocab_to_bytes(vocab: &Vocabulary) -> Vec<u8> {
    let mut out = Vec::with_capacity(24 + vocab.len() * (DESCRIPTOR_BYTES + 4));
    push_header(&mut out, VOCAB_MAGIC);
    push_u32(&mut out, vocab.len());
    out.extend_from_slice(&vocab.seed().to_le_bytes());
    push_u32(&mut out, vocab.idf().is_some() as usize);
    for w in vocab.words() {
        out.extend_from_slice(&w.to_bytes());
    }
    if let Some(idf) = vocab.idf() {
        push_f32s(&mut out, idf);
    }
    out
}

pub fn vocab_from_bytes(bytes: &[u8]) -> Result<Vocabulary> {
    let mut r = Reader::new(bytes, "vocabulary");
    r.header(VOCAB_MAGIC)?;
    let n = r.u32()? as usize;
    let seed = r.u64()?;
    let has_idf = match r.u32()? {
        0 => false,
        1 => true,
        v => return Err(format_err("vocabulary", format!("idf flag {v} is not 0 or 1"))),
    };
    r.expect_remaining(n * DESCRIPTOR_BYTES + if has_idf { n * 4 } else { 0 })?;
    let mut words = Vec::with_capacity(n);
    for _ in 0..n {
        words.push(BinaryDescriptor::from_bytes(r.take(DESCRIPTOR_BYTES)?.try_into().unwrap()));
    }
    let idf = if has_idf { Some(r.f32s(n)?) } else { None };
    r.finish()?;
    Vocabulary::new(words, idf, seed)
}

pub fn write_vocab(path: &Path, vocab: &Vocabulary) -> Result<()> {
    write_file(path, &vocab_to_bytes(vocab))
}

pub fn read_vocab(path: &Path) -> Result<Vocabulary> {
    with_path(path, vocab_from_bytes(&read_file(path)?))
}

// ---------------------------------------------------------------------------
// Landmark indices

pub fn index_to_bytes(index: &LandmarkIndex) -> Vec<u8> {
    let (g_dim, h_dim) = (index.g_dim(), index.h_dim());
    let mut out = Vec::with_capacity(28 + index.len() * (8 + 4 * (g_dim + h_dim)));
    push_header(&mut out, INDEX_MAGIC);
    push_u32(&mut out, index.len());
    push_u32(&mut out, g_dim);
    push_u32(&mut out, h_dim);
    push_u32(&mut out, index.spm_config().levels());
    push_u32(&mut out, index.spm_config().num_classes());
    for (id, codes) in index.entries() {
        out.extend_from_slice(&id.to_le_bytes());
        push_f32s(&mut out, codes.g.vector().values());
        push_f32s(&mut out, codes.h.vector().values());
    }
    out
}

pub fn index_from_bytes(bytes: &[u8]) -> Result<LandmarkIndex> {
    const CTX: &str = "landmark index";
    let mut r = Reader::new(bytes, CTX);
    r.header(INDEX_MAGIC)?;
    let n = r.u32()? as usize;
    let g_dim = r.u32()? as usize;
    let h_dim = r.u32()? as usize;
    let levels = r.u32()? as usize;
    let k = r.u32()? as usize;
    let spm = SpmConfig::new(levels, k)?;
    if spm.code_len() != h_dim {
        return Err(format_err(
            CTX,
            format!("h_dim {h_dim} disagrees with L={levels}, K={k} (expected {})", spm.code_len()),
        ));
    }
    if g_dim == 0 {
        return Err(format_err(CTX, "g_dim is zero"));
    }
    let record = 8 + 4 * (g_dim + h_dim);
    r.expect_remaining(n * record)?;
    let mut index = LandmarkIndex::new(g_dim, spm);
    for i in 0..n {
        let id = r.u64()?;
        let g = BowCode::new(FeatureVector::new(r.f32s(g_dim)?)?)
            .map_err(|e| format_err(CTX, format!("record {i} (id {id}): {e}")))?;
        let h = SpmCode::new(FeatureVector::new(r.f32s(h_dim)?)?, spm)
            .map_err(|e| format_err(CTX, format!("record {i} (id {id}): {e}")))?;
        index.insert(id, LandmarkCodes::new(g, h))?;
    }
    r.finish()?;
    Ok(index)
}

pub fn write_index(path: &Path, index: &LandmarkIndex) -> Result<()> {
    write_file(path, &index_to_bytes(index))
}

pub fn read_index(path: &Path) -> Result<LandmarkIndex> {
    with_path(path, index_from_bytes(&read_file(path)?))
}

/// Entries of an index, ascending id.
pub fn index_entries(index: &LandmarkIndex) -> Vec<LandmarkEntry> {
    index
        .entries()
        .map(|(id, codes)| LandmarkEntry {
            id,
            codes: codes.clone(),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Datasets

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LandmarkRecord {
    pub id: u64,
    pub static_image: String,
    pub dynamic_image: String,
    pub labels: String,
    pub probs: String,
    pub dynamic_mask: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub seed: u64,
    pub num_landmarks: usize,
    pub dynamic_objects_min: usize,
    pub dynamic_objects_max: usize,
    pub shadow: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub version: u32,
    pub num_classes: usize,
    pub class_names: Vec<String>,
    pub height: usize,
    pub width: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorInfo>,
    pub landmarks: Vec<LandmarkRecord>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

fn landmark_dir(id: u64) -> String {
    format!("landmark_{id:05}")
}

/// Write `manifest.json` and one sub-directory per landmark.
pub fn write_dataset(dir: &Path, spec: Option<&WorldSpec>, class_names: &[String], samples: &[LandmarkSample]) -> Result<DatasetManifest> {
    let first = samples
        .first()
        .ok_or_else(|| Error::invalid("samples", "dataset needs at least one landmark"))?;
    let k = first.static_semantics.num_classes();
    if class_names.len() != k {
        return Err(Error::mismatch("class name count", k, class_names.len()));
    }
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut records = Vec::with_capacity(samples.len());
    for s in samples {
        if s.static_semantics.num_classes() != k {
            return Err(Error::mismatch("class count", k, s.static_semantics.num_classes()));
        }
        let sub = landmark_dir(s.id);
        let sub_path = dir.join(&sub);
        fs::create_dir_all(&sub_path).map_err(|source| Error::Io {
            path: sub_path.clone(),
            source,
        })?;
        let ext = if s.static_image.is_gray() { "pgm" } else { "ppm" };
        let rec = LandmarkRecord {
            id: s.id,
            static_image: format!("{sub}/static.{ext}"),
            dynamic_image: format!("{sub}/dynamic.{ext}"),
            labels: format!("{sub}/labels.pgm"),
            probs: format!("{sub}/probs.mmpm"),
            dynamic_mask: format!("{sub}/mask.pgm"),
        };
        write_image(&dir.join(&rec.static_image), &s.static_image)?;
        write_image(&dir.join(&rec.dynamic_image), &s.dynamic_image)?;
        write_label_map(&dir.join(&rec.labels), &s.static_semantics)?;
        write_prob_map(&dir.join(&rec.probs), &s.static_probs)?;
        write_mask(&dir.join(&rec.dynamic_mask), &s.dynamic_mask)?;
        records.push(rec);
    }
    let manifest = DatasetManifest {
        version: MANIFEST_VERSION,
        num_classes: k,
        class_names: class_names.to_vec(),
        height: first.static_semantics.height(),
        width: first.static_semantics.width(),
        generator: spec.map(|s| GeneratorInfo {
            seed: s.seed,
            num_landmarks: s.num_landmarks,
            dynamic_objects_min: s.dynamic_objects.0,
            dynamic_objects_max: s.dynamic_objects.1,
            shadow: s.shadow,
        }),
        landmarks: records,
    };
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
    json.push('\n');
    write_file(&dir.join(MANIFEST_FILE), json.as_bytes())?;
    Ok(manifest)
}

pub fn read_manifest(dir: &Path) -> Result<DatasetManifest> {
    let path = dir.join(MANIFEST_FILE);
    let bytes = read_file(&path)?;
    let manifest: DatasetManifest =
        serde_json::from_slice(&bytes).map_err(|e| format_err(&path.display().to_string(), e.to_string()))?;
    if manifest.version != MANIFEST_VERSION {
        return Err(format_err(
            &path.display().to_string(),
            format!("unsupported manifest version {}", manifest.version),
        ));
    }
    if manifest.class_names.len() != manifest.num_classes {
        return Err(format_err(
            &path.display().to_string(),
            format!(
                "{} class names for {} classes",
                manifest.class_names.len(),
                manifest.num_classes
            ),
        ));
    }
    Ok(manifest)
}

fn check_grid(path: &Path, what: &str, hw: (usize, usize), expected: (usize, usize)) -> Result<()> {
    if hw != expected {
        return Err(format_err(
            &path.display().to_string(),
            format!("{what} is {}x{}, manifest says {}x{}", hw.0, hw.1, expected.0, expected.1),
        ));
    }
    Ok(())
}

/// Load one landmark record, checking its files against the manifest.
pub fn read_landmark(dir: &Path, manifest: &DatasetManifest, rec: &LandmarkRecord) -> Result<LandmarkSample> {
    let k = manifest.num_classes;
    let dims = (manifest.height, manifest.width);
    let p = |rel: &str| -> PathBuf { dir.join(rel) };

    let static_image = read_image(&p(&rec.static_image))?;
    check_grid(&p(&rec.static_image), "static image", (static_image.height(), static_image.width()), dims)?;
    let dynamic_image = read_image(&p(&rec.dynamic_image))?;
    check_grid(&p(&rec.dynamic_image), "dynamic image", (dynamic_image.height(), dynamic_image.width()), dims)?;
    let static_semantics = read_label_map(&p(&rec.labels), k)?;
    check_grid(&p(&rec.labels), "label map", (static_semantics.height(), static_semantics.width()), dims)?;
    let static_probs = read_prob_map(&p(&rec.probs))?;
    check_grid(&p(&rec.probs), "probability map", (static_probs.height(), static_probs.width()), dims)?;
    if static_probs.num_classes() != k {
        return Err(format_err(
            &p(&rec.probs).display().to_string(),
            format!("{} classes, manifest says {k}", static_probs.num_classes()),
        ));
    }
    let dynamic_mask = read_mask(&p(&rec.dynamic_mask))?;
    check_grid(&p(&rec.dynamic_mask), "mask", (dynamic_mask.height(), dynamic_mask.width()), dims)?;
    Ok(LandmarkSample {
        id: rec.id,
        static_image,
        dynamic_image,
        static_semantics,
        static_probs,
        dynamic_mask,
    })
}

pub fn read_dataset(dir: &Path) -> Result<(DatasetManifest, Vec<LandmarkSample>)> {
    let manifest = read_manifest(dir)?;
    let mut seen = std::collections::HashSet::new();
    let mut samples = Vec::with_capacity(manifest.landmarks.len());
    for rec in &manifest.landmarks {
        if !seen.insert(rec.id) {
            return Err(format_err(
                &dir.join(MANIFEST_FILE).display().to_string(),
                format!("duplicate landmark id {}", rec.id),
            ));
        }
        samples.push(read_landmark(dir, &manifest, rec)?);
    }
    Ok((manifest, samples))
}
