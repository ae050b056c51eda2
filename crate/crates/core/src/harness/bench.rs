//! Corpus benchmark: every (image, missing ratio, method) cell recovered from
//! a seeded random mask and scored with PSNR and SSIM.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use super::config::Settings;
use super::io::{load_image, Picture};
use super::mask::{corrupt, gen_mask, MaskSpec};
use crate::error::{Error, Result};
use crate::metrics::{psnr, ssim, QualityReport, PEAK};
use crate::solver::{
    recover_color, recover_dct_only, recover_ltvnn, recover_svt, DctMode, ObservationMask, ObservedImage, TauSchedule,
};
use crate::Image;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dnm,
    Gdnm,
    Ldnm,
    Svt,
    Ltvnn,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Dnm, Method::Gdnm, Method::Ldnm, Method::Svt, Method::Ltvnn];

    pub fn label(&self) -> &'static str {
        match self {
            Method::Dnm => "dnm",
            Method::Gdnm => "gdnm",
            Method::Ldnm => "ldnm",
            Method::Svt => "svt",
            Method::Ltvnn => "ltvnn",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.label() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown method {s:?}; expected one of dnm, gdnm, ldnm, svt, ltvnn")))
    }
}

/// Recovered channels and the iteration count of one method on one image.
pub fn run_method(method: Method, channels: &[ObservedImage], settings: &Settings) -> Result<(Vec<Image>, usize)> {
    let dims = channels[0].dims();
    let cfg = settings.recovery_config(dims)?;
    match method {
        Method::Dnm => {
            let (xs, trace) = recover_color(channels, &cfg)?;
            Ok((xs, trace.total_iterations()))
        }
        _ => {
            let mut out = Vec::with_capacity(channels.len());
            let mut iterations = 0;
            for obs in channels {
                let (x, n) = match method {
                    Method::Gdnm | Method::Ldnm => {
                        let mode = if method == Method::Gdnm { DctMode::Global } else { DctMode::Local };
                        let (x, trace) = recover_dct_only(obs, mode, &cfg)?;
                        (x, trace.total_iterations())
                    }
                    Method::Svt => {
                        let iters = settings.svt_iters();
                        (recover_svt(obs, &TauSchedule::for_observation(obs)?, iters)?, iters)
                    }
                    Method::Ltvnn => {
                        let (x, trace) = recover_ltvnn(obs, &cfg)?;
                        (x, trace.total_iterations())
                    }
                    Method::Dnm => unreachable!(),
                };
                out.push(x);
                iterations += n;
            }
            Ok((out, iterations))
        }
    }
}

/// One cell of the benchmark.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub image: String,
    pub iterations: usize,
    pub report: QualityReport,
    /// Set when the solver diverged; the scores are then NaN.
    pub error: Option<String>,
}

/// Mean scores of one (method, ratio) pair over the images that completed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub method: String,
    pub missing_ratio: f64,
    pub images: usize,
    pub psnr_db: f64,
    pub ssim: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchResult {
    pub rows: Vec<BenchRow>,
    pub aggregates: Vec<Aggregate>,
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub methods: Vec<Method>,
    pub ratios: Vec<f64>,
    pub settings: Settings,
    /// Record wall-clock seconds; when off every row reports 0 so that the
    /// CSV is byte-identical across runs.
    pub timing: bool,
}

/// 64-bit FNV-1a.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325_u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Mask seed of the cells for `image` at ratio `phi`. All methods of one
/// (image, ratio) pair see the same mask.
pub fn cell_seed(base: u64, image: &str, phi: f64) -> u64 {
    let mut key = image.as_bytes().to_vec();
    key.push(0);
    key.extend_from_slice(&phi.to_bits().to_le_bytes());
    base.wrapping_add(fnv1a(&key))
}

/// Image files (`pgm`, `ppm`, `pnm`, `png`) directly inside `dir`, sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Io { path: dir.to_path_buf(), source: e })?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::Io { path: dir.to_path_buf(), source: e })?.path();
        let ext = path.extension().and_then(|e| e.to_str()).map(|e| e.to_ascii_lowercase());
        if path.is_file() && matches!(ext.as_deref(), Some("pgm" | "ppm" | "pnm" | "png")) {
            files.push(path);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(Error::InsufficientData(format!("no images found in {}", dir.display())));
    }
    Ok(files)
}

/// PSNR over all channels pooled, SSIM averaged over channels.
pub fn score(recovered: &[Image], truth: &Picture) -> Result<(f64, f64)> {
    let mut sq = 0.0;
    let mut count = 0usize;
    let mut ssim_total = 0.0;
    for (x, t) in recovered.iter().zip(&truth.channels) {
        sq += (x - t).norm_squared();
        count += x.len();
        ssim_total += ssim(x, t)?;
    }
    let psnr_db = if truth.is_gray() {
        psnr(&recovered[0], &truth.channels[0])?
    } else if sq == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK * count as f64 / sq).log10()
    };
    Ok((psnr_db, ssim_total / truth.channels.len() as f64))
}

/// Runs every cell of `named` pictures in the order image, ratio, method.
pub fn run_bench_on(named: &[(String, Picture)], opts: &BenchOptions) -> Result<BenchResult> {
    if named.is_empty() {
        return Err(Error::InsufficientData("empty corpus".into()));
    }
    if opts.methods.is_empty() || opts.ratios.is_empty() {
        return Err(Error::Config("at least one method and one ratio are required".into()));
    }
    let base_seed = opts.settings.seed.unwrap_or(0);
    let mut rows = Vec::new();
    for (name, picture) in named {
        let dims = picture.dims();
        for &phi in &opts.ratios {
            let mask = gen_mask(dims, &MaskSpec::random(phi, cell_seed(base_seed, name, phi)))?;
            let channels = observe(picture, &mask)?;
            for &method in &opts.methods {
                let start = Instant::now();
                let outcome = run_method(method, &channels, &opts.settings);
                let seconds = if opts.timing { start.elapsed().as_secs_f64() } else { 0.0 };
                let row = match outcome {
                    Ok((recovered, iterations)) => {
                        let (psnr_db, ssim) = score(&recovered, picture)?;
                        BenchRow {
                            image: name.clone(),
                            iterations,
                            report: QualityReport {
                                method: method.to_string(),
                                missing_ratio: phi,
                                psnr_db,
                                ssim,
                                seconds,
                            },
                            error: None,
                        }
                    }
                    Err(e @ Error::Divergence { .. }) => BenchRow {
                        image: name.clone(),
                        iterations: 0,
                        report: QualityReport {
                            method: method.to_string(),
                            missing_ratio: phi,
                            psnr_db: f64::NAN,
                            ssim: f64::NAN,
                            seconds,
                        },
                        error: Some(e.to_string()),
                    },
                    Err(e) => return Err(e),
                };
                rows.push(row);
            }
        }
    }
    let aggregates = aggregate(&rows, &opts.methods, &opts.ratios);
    Ok(BenchResult { rows, aggregates })
}

/// Loads every image of `corpus` and runs [`run_bench_on`]; images are named
/// by file name.
pub fn run_bench(corpus: &Path, opts: &BenchOptions) -> Result<BenchResult> {
    let mut named = Vec::new();
    for path in corpus_files(corpus)? {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        named.push((name, load_image(&path)?));
    }
    run_bench_on(&named, opts)
}

fn observe(picture: &Picture, mask: &ObservationMask) -> Result<Vec<ObservedImage>> {
    picture.channels.iter().map(|c| corrupt(c, mask)).collect()
}

fn aggregate(rows: &[BenchRow], methods: &[Method], ratios: &[f64]) -> Vec<Aggregate> {
    let mut out = Vec::new();
    for &method in methods {
        for &phi in ratios {
            let done: Vec<&QualityReport> = rows
                .iter()
                .filter(|r| r.error.is_none() && r.report.method == method.label() && r.report.missing_ratio == phi)
                .map(|r| &r.report)
                .collect();
            let mean = |f: fn(&QualityReport) -> f64| {
                if done.is_empty() {
                    f64::NAN
                } else {
                    done.iter().map(|r| f(r)).sum::<f64>() / done.len() as f64
                }
            };
            out.push(Aggregate {
                method: method.to_string(),
                missing_ratio: phi,
                images: done.len(),
                psnr_db: mean(|r| r.psnr_db),
                ssim: mean(|r| r.ssim),
                seconds: mean(|r| r.seconds),
            });
        }
    }
    out
}

impl BenchResult {
    /// One line per cell: `image,method,phi,psnr_db,ssim,iterations,seconds`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("image,method,phi,psnr_db,ssim,iterations,seconds\n");
        for row in &self.rows {
            let r = &row.report;
            let _ = writeln!(
                out,
                "{},{},{},{:.6},{:.6},{},{:.3}",
                csv_field(&row.image),
                r.method,
                r.missing_ratio,
                r.psnr_db,
                r.ssim,
                row.iterations,
                r.seconds
            );
        }
        out
    }

    /// PSNR and SSIM tables with one row per ratio and one column per
    /// method, followed by any diverged cells.
    pub fn to_markdown(&self) -> String {
        let mut methods: Vec<&str> = Vec::new();
        let mut ratios: Vec<f64> = Vec::new();
        for a in &self.aggregates {
            if !methods.contains(&a.method.as_str()) {
                methods.push(&a.method);
            }
            if !ratios.contains(&a.missing_ratio) {
                ratios.push(a.missing_ratio);
            }
        }
        let images = self.rows.iter().map(|r| r.image.as_str()).collect::<std::collections::BTreeSet<_>>().len();

        let mut out = String::new();
        let _ = writeln!(out, "# Benchmark\n\n{images} image(s); values are means over images.\n");
        for (title, pick, digits) in [
            ("PSNR (dB)", (|a: &Aggregate| a.psnr_db) as fn(&Aggregate) -> f64, 3),
            ("SSIM", |a: &Aggregate| a.ssim, 4),
        ] {
            let _ = writeln!(out, "## {title}\n");
            let _ = writeln!(out, "| missing | {} |", methods.join(" | "));
            let _ = writeln!(out, "|---|{}", "---|".repeat(methods.len()));
            for &phi in &ratios {
                let cells: Vec<String> = methods
                    .iter()
                    .map(|m| {
                        self.aggregates
                            .iter()
                            .find(|a| a.method == *m && a.missing_ratio == phi)
                            .map(|a| format!("{:.*}", digits, pick(a)))
                            .unwrap_or_default()
                    })
                    .collect();
                let _ = writeln!(out, "| {:.0}% | {} |", phi * 100.0, cells.join(" | "));
            }
            out.push('\n');
        }
        let failed: Vec<&BenchRow> = self.rows.iter().filter(|r| r.error.is_some()).collect();
        if !failed.is_empty() {
            let _ = writeln!(out, "## Failed cells\n");
            for r in failed {
                let _ = writeln!(
                    out,
                    "- {} / {} / {}: {}",
                    r.image,
                    r.report.method,
                    r.report.missing_ratio,
                    r.error.as_deref().unwrap_or("")
                );
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
