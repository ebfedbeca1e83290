use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use vpr_core::bow::Vocabulary;
use vpr_core::experiment::{bench_coding, build_index, encode_samples, train_vocab, Encoder, Perception, VocabSettings};
use vpr_core::image_metrics::img_scores;
use vpr_core::io::{self, DatasetManifest};
use vpr_core::retrieval::{eval_recall, FusionConfig, LandmarkIndex};
use vpr_core::semantics_metrics::{confusion, seg_scores, weighted_ce, ConfusionMatrix, Reduction, ZeroProb};
use vpr_core::spm::SpmConfig;
use vpr_core::synth::{class_names, degrade, generate_world, LandmarkSample, WorldSpec};
use vpr_core::{argmax_map, ClassStats, Error, Result};

use crate::args::*;

/// Human-readable report plus the path/contents of an optional CSV file.
#[derive(Default)]
pub struct Output {
    pub text: String,
    pub csv: Option<(std::path::PathBuf, String)>,
}

impl Output {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }
}

pub fn run(cmd: &Command) -> Result<Output> {
    let mut out = Output::default();
    let config = serde_json::to_string(cmd).map_err(|e| Error::invalid("config", e.to_string()))?;
    out.line(format!("config: {config}"));
    match cmd {
        Command::Synth(a) => synth(a, &mut out)?,
        Command::Degrade(a) => degrade_dataset(a, &mut out)?,
        Command::BuildVocab(a) => build_vocab(a, &mut out)?,
        Command::Index(a) => index(a, &mut out)?,
        Command::Query(a) => query(a, &mut out)?,
        Command::EvalRecall(a) => recall(a, &mut out)?,
        Command::EvalSeg(a) => seg(a, &mut out)?,
        Command::EvalImg(a) => img(a, &mut out)?,
        Command::BenchCoding(a) => bench(a, &mut out)?,
    }
    if let Some((path, body)) = &out.csv {
        fs::write(path, body).map_err(|source| Error::Io { path: path.clone(), source })?;
    }
    Ok(out)
}

fn synth(a: &SynthArgs, out: &mut Output) -> Result<()> {
    let spec = WorldSpec {
        seed: a.seed,
        height: a.height,
        width: a.width,
        num_classes: a.classes,
        num_landmarks: a.landmarks,
        dynamic_objects: (a.dynamic_min, a.dynamic_max),
        shadow: !a.no_shadow,
    };
    spec.validate()?;
    let samples = generate_world(&spec)?;
    let manifest = io::write_dataset(&a.out, Some(&spec), &class_names(a.classes), &samples)?;
    let masked: usize = samples.iter().map(|s| s.dynamic_mask.count()).sum();
    out.line(format!(
        "wrote {} landmarks ({}x{}, K = {}) to {}",
        manifest.landmarks.len(),
        manifest.height,
        manifest.width,
        manifest.num_classes,
        a.out.display()
    ));
    out.line(format!(
        "dynamic pixels: {:.4} of all pixels",
        masked as f64 / (samples.len() * a.height * a.width) as f64
    ));
    Ok(())
}

fn degrade_dataset(a: &DegradeArgs, out: &mut Output) -> Result<()> {
    let noise = a.noise.spec();
    noise.validate()?;
    let (manifest, samples) = io::read_dataset(&a.dataset)?;
    let degraded = samples
        .into_iter()
        .map(|s| {
            let (probs, image) = degrade(&s, &noise, a.seed)?;
            Ok(LandmarkSample {
                static_semantics: argmax_map(&probs),
                static_probs: probs,
                static_image: image,
                ..s
            })
        })
        .collect::<Result<Vec<_>>>()?;
    io::write_dataset(&a.out, None, &manifest.class_names, &degraded)?;
    out.line(format!("wrote {} degraded landmarks to {}", degraded.len(), a.out.display()));
    Ok(())
}

fn build_vocab(a: &BuildVocabArgs, out: &mut Output) -> Result<()> {
    let perception = a.perception.perception()?;
    let (_, samples) = io::read_dataset(&a.dataset)?;
    let settings = VocabSettings {
        num_words: a.words,
        seed: a.vocab_seed,
        max_iters: a.max_iters,
        idf: a.idf,
        bow: a.detector.params(),
    };
    let vocab = train_vocab(&samples, &perception, &settings)?;
    io::write_vocab(&a.out, &vocab)?;
    out.line(format!(
        "wrote {} words{} from {} images to {}",
        vocab.len(),
        if vocab.idf().is_some() { " with idf" } else { "" },
        samples.len(),
        a.out.display()
    ));
    Ok(())
}

fn encoder(args: &EncoderArgs, spm: SpmConfig) -> Result<Encoder> {
    let vocab: Vocabulary = io::read_vocab(&args.vocab)?;
    Encoder::new(vocab, spm, args.detector.params(), args.idf)
}

fn index(a: &IndexArgs, out: &mut Output) -> Result<()> {
    let perception = a.perception.perception()?;
    let (manifest, samples) = io::read_dataset(&a.dataset)?;
    let enc = encoder(&a.encoder, SpmConfig::new(a.levels, manifest.num_classes)?)?;
    let index = build_index(&samples, &enc, &perception)?;
    io::write_index(&a.out, &index)?;
    out.line(format!(
        "wrote {} entries (g: {} dims, h: {} dims) to {}",
        index.len(),
        index.g_dim(),
        index.h_dim(),
        a.out.display()
    ));
    Ok(())
}

fn load_index(path: &Path, enc_args: &EncoderArgs) -> Result<(LandmarkIndex, Encoder)> {
    let index = io::read_index(path)?;
    let enc = encoder(enc_args, index.spm_config())?;
    if enc.vocab.len() != index.g_dim() {
        return Err(Error::mismatch("vocabulary size vs index", index.g_dim(), enc.vocab.len()));
    }
    Ok((index, enc))
}

fn check_classes(manifest: &DatasetManifest, index: &LandmarkIndex) -> Result<()> {
    let k = index.spm_config().num_classes();
    if manifest.num_classes != k {
        return Err(Error::mismatch("dataset class count vs index", k, manifest.num_classes));
    }
    Ok(())
}

fn query(a: &QueryArgs, out: &mut Output) -> Result<()> {
    let cfg = FusionConfig::new(a.alpha)?;
    let (index, enc) = load_index(&a.index, &a.encoder)?;
    let codes = match (&a.dataset, a.landmark, &a.labels, &a.image) {
        (Some(dir), Some(id), _, _) => {
            let manifest = io::read_manifest(dir)?;
            check_classes(&manifest, &index)?;
            let rec = manifest
                .landmarks
                .iter()
                .find(|r| r.id == id)
                .ok_or(Error::UnknownId(id))?;
            let sample = io::read_landmark(dir, &manifest, rec)?;
            let (map, image) = a.perception.perception()?.perceive(&sample)?;
            enc.encode(&map, &image)?
        }
        (_, _, Some(labels), Some(image)) => {
            let map = io::read_label_map(labels, index.spm_config().num_classes())?;
            let image = io::read_image(image)?;
            enc.encode(&map, &image)?
        }
        _ => return Err(Error::invalid("query", "give --dataset with --landmark, or --labels with --image")),
    };
    let ranked = index.query(&codes, a.k, &cfg)?;
    out.line(format!("{:>5}  {:>8}  {:>12}", "rank", "id", "score"));
    let mut csv = String::from("rank,id,score\n");
    for (i, r) in ranked.iter().enumerate() {
        out.line(format!("{:>5}  {:>8}  {:>12.9}", i + 1, r.id, r.score));
        let _ = writeln!(csv, "{},{},{}", i + 1, r.id, r.score);
    }
    out.csv = a.csv.clone().map(|p| (p, csv));
    Ok(())
}

fn recall(a: &EvalRecallArgs, out: &mut Output) -> Result<()> {
    let cfg = FusionConfig::new(a.alpha)?;
    let (index, enc) = load_index(&a.index, &a.encoder)?;
    let (manifest, samples) = io::read_dataset(&a.dataset)?;
    check_classes(&manifest, &index)?;
    let queries = encode_samples(&samples, &enc, &a.perception.perception()?)?;
    let report = eval_recall(&index, &queries, &cfg, &a.cutoffs)?;
    out.line(format!(
        "queries: {}  index: {}  top-1% cutoff: {}",
        report.num_queries, report.index_size, report.top_percent_cutoff
    ));
    out.line(format!("{:>8}  {:>8}", "k", "recall"));
    for (k, r) in &report.r_at {
        out.line(format!("{:>8}  {:>8.4}", k, r));
    }
    out.line(format!("{:>8}  {:>8.4}", "1%", report.r_at_1pct()));
    let mut csv = String::from("k,recall\n");
    for (i, r) in report.curve.iter().enumerate() {
        let _ = writeln!(csv, "{},{}", i + 1, r);
    }
    out.csv = a.csv.clone().map(|p| (p, csv));
    Ok(())
}

fn paired(a: &[LandmarkSample], b: &[LandmarkSample]) -> Result<Vec<(usize, usize)>> {
    if a.len() != b.len() {
        return Err(Error::mismatch("landmark count", a.len(), b.len()));
    }
    a.iter()
        .enumerate()
        .map(|(i, s)| {
            b.iter()
                .position(|t| t.id == s.id)
                .map(|j| (i, j))
                .ok_or(Error::UnknownId(s.id))
        })
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"))
}

fn seg(a: &EvalSegArgs, out: &mut Output) -> Result<()> {
    let (manifest, gt) = io::read_dataset(&a.gt)?;
    let (_, pred) = io::read_dataset(&a.pred)?;
    let pairs = paired(&gt, &pred)?;
    let k = manifest.num_classes;
    let stats = ClassStats::from_maps(gt.iter().map(|s| &s.static_semantics), a.epsilon)?;
    let mut cm = ConfusionMatrix::zeros(k);
    let (mut ce, mut pixels) = (0.0, 0usize);
    for &(i, j) in &pairs {
        let (g, p) = (&gt[i], &pred[j]);
        cm.merge(&confusion(&g.static_semantics, &p.static_semantics)?)?;
        ce += weighted_ce(&p.static_probs, &g.static_semantics, &stats, Reduction::Sum, ZeroProb::Clamp)?;
        pixels += g.static_semantics.labels().len();
    }
    let s = seg_scores(&cm)?;
    out.line(format!("landmarks: {}  pixels: {}", pairs.len(), cm.total()));
    out.line(format!("{:>8}  {:>8}  {:>8}  {:>8}  {:>10}", "PA", "MPA", "MIoU", "FWIoU", "wCE/pixel"));
    out.line(format!(
        "{:>8.4}  {:>8.4}  {:>8.4}  {:>8.4}  {:>10.6}",
        s.pa,
        s.mpa,
        s.miou,
        s.fwiou,
        ce / pixels as f64
    ));
    out.line(format!("{:>4}  {:<14}  {:>10}  {:>10}", "c", "class", "IoU", "accuracy"));
    let mut csv = String::from("class,name,iou,accuracy\n");
    for c in 0..k {
        let name = &manifest.class_names[c];
        let (iou, acc) = (opt(s.per_class_iou[c]), opt(s.per_class_accuracy[c]));
        out.line(format!("{c:>4}  {name:<14}  {iou:>10}  {acc:>10}"));
        let _ = writeln!(csv, "{c},{name},{iou},{acc}");
    }
    let _ = writeln!(csv, "all,PA,{},", s.pa);
    let _ = writeln!(csv, "all,MPA,{},", s.mpa);
    let _ = writeln!(csv, "all,MIoU,{},", s.miou);
    let _ = writeln!(csv, "all,FWIoU,{},", s.fwiou);
    out.csv = a.csv.clone().map(|p| (p, csv));
    Ok(())
}

fn role(s: &LandmarkSample, r: ImageRole) -> &vpr_core::ImageBuffer {
    match r {
        ImageRole::Static => &s.static_image,
        ImageRole::Dynamic => &s.dynamic_image,
    }
}

fn img(a: &EvalImgArgs, out: &mut Output) -> Result<()> {
    let (_, reference) = io::read_dataset(&a.reference)?;
    let (_, candidate) = io::read_dataset(&a.candidate)?;
    let pairs = paired(&reference, &candidate)?;
    let mut csv = String::from("id,l1_pct,l2_pct,psnr,ssim\n");
    let mut sum = [0.0f64; 4];
    for &(i, j) in &pairs {
        let s = img_scores(role(&reference[i], a.reference_role), role(&candidate[j], a.candidate_role))?;
        for (acc, v) in sum.iter_mut().zip([s.l1_pct, s.l2_pct, s.psnr, s.ssim]) {
            *acc += v;
        }
        let _ = writeln!(csv, "{},{},{},{},{}", reference[i].id, s.l1_pct, s.l2_pct, s.psnr, s.ssim);
    }
    let n = pairs.len() as f64;
    out.line(format!("landmarks: {}", pairs.len()));
    out.line(format!("{:>8}  {:>8}  {:>8}  {:>8}", "L1%", "L2%", "PSNR", "SSIM"));
    out.line(format!(
        "{:>8.4}  {:>8.4}  {:>8.3}  {:>8.4}",
        sum[0] / n,
        sum[1] / n,
        sum[2] / n,
        sum[3] / n
    ));
    out.csv = a.csv.clone().map(|p| (p, csv));
    Ok(())
}

fn bench(a: &BenchArgs, out: &mut Output) -> Result<()> {
    let cfg = FusionConfig::new(a.alpha)?;
    let perception: Perception = a.perception.perception()?;
    let (manifest, samples) = io::read_dataset(&a.dataset)?;
    let base = a.levels.first().copied().ok_or(Error::invalid("levels", "need at least one level"))?;
    let enc = encoder(&a.encoder, SpmConfig::new(base, manifest.num_classes)?)?;
    let rows = bench_coding(&samples, &enc, &a.levels, a.repetitions, &perception, &cfg)?;
    out.line(format!("{:>3}  {:>7}  {:>7}  {:>7}  {:>7}  {:>10}", "L", "R@1", "R@5", "R@10", "R@1%", "coding ms"));
    let mut csv = String::from("levels,r_at_1,r_at_5,r_at_10,r_at_1pct,mean_coding_ms\n");
    for r in &rows {
        let rec = &r.recall;
        let vals = [rec.recall_at(1), rec.recall_at(5), rec.recall_at(10), rec.r_at_1pct()];
        out.line(format!(
            "{:>3}  {:>7.4}  {:>7.4}  {:>7.4}  {:>7.4}  {:>10.3}",
            r.levels, vals[0], vals[1], vals[2], vals[3], r.mean_coding_ms
        ));
        let _ = writeln!(csv, "{},{},{},{},{},{}", r.levels, vals[0], vals[1], vals[2], vals[3], r.mean_coding_ms);
    }
    out.csv = a.csv.clone().map(|p| (p, csv));
    Ok(())
}
