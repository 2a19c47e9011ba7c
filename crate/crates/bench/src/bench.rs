//! Benchmark driver: degrade each test image under each setting and seed,
//! restore it, and tabulate ISNR next to the published figures.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use gdeconv::guided::{DEFAULT_EPSILON, DEFAULT_WINDOW};
use gdeconv::pipeline::DEFAULT_MAX_ITER;
use gdeconv::psf::DEFAULT_GAUSSIAN_SIZE;
use gdeconv::{deconvolve, isnr, load_image, GuidedFilterParams, Image, RestorationParams, RestorationTrace};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::degrade::degrade;
use crate::error::{BenchError, Result};
use crate::settings::{reference_isnr, Method, TestImage, TestSetting};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchParams {
    pub w: usize,
    pub epsilon: f64,
    pub max_iter: usize,
    pub rho_override: Option<f64>,
    pub gaussian_size: usize,
    /// Run independent restorations on the rayon pool.
    pub parallel: bool,
}

impl Default for BenchParams {
    fn default() -> Self {
        Self {
            w: DEFAULT_WINDOW,
            epsilon: DEFAULT_EPSILON,
            max_iter: DEFAULT_MAX_ITER,
            rho_override: None,
            gaussian_size: DEFAULT_GAUSSIAN_SIZE,
            parallel: true,
        }
    }
}

impl BenchParams {
    pub fn with_config(mut self, cfg: &RunConfig) -> Self {
        if let Some(w) = cfg.w {
            self.w = w;
        }
        if let Some(e) = cfg.epsilon {
            self.epsilon = e;
        }
        if let Some(m) = cfg.max_iter {
            self.max_iter = m;
        }
        if cfg.rho.is_some() {
            self.rho_override = cfg.rho;
        }
        if let Some(g) = cfg.psf_size_gaussian {
            self.gaussian_size = g;
        }
        self
    }

    pub fn restoration(&self, sigma: f64) -> Result<RestorationParams<f64>> {
        let params = RestorationParams {
            filter: GuidedFilterParams::new(self.w, self.epsilon)?,
            max_iter: self.max_iter,
            rho_override: self.rho_override,
            ..RestorationParams::new(sigma)
        };
        params.validate()?;
        Ok(params)
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub label: String,
    pub image: Option<TestImage>,
    pub test: u8,
    pub seed: u64,
    pub isnr: f64,
    pub rho: f64,
    pub trace: RestorationTrace<f64>,
    pub elapsed: Duration,
}

impl RunResult {
    pub fn time_per_iteration(&self) -> Duration {
        self.elapsed / self.trace.len().max(1) as u32
    }

    pub fn infinite_steps(&self) -> usize {
        self.trace.records.iter().filter(|r| r.lambda.is_infinite()).count()
    }
}

#[derive(Debug, Clone)]
pub struct PairSummary {
    pub label: String,
    pub image: Option<TestImage>,
    pub test: u8,
    pub runs: usize,
    pub mean: f64,
    /// Sample standard deviation over seeds; zero for a single seed.
    pub std: f64,
}

impl PairSummary {
    pub fn reference(&self, method: Method) -> Option<f64> {
        self.image.and_then(|img| reference_isnr(img, self.test, method))
    }
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub seeds: Vec<u64>,
    pub runs: Vec<RunResult>,
    pub summaries: Vec<PairSummary>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.2}")).unwrap_or_default()
}

impl BenchReport {
    pub fn mean_time_per_iteration(&self) -> Duration {
        let total: Duration = self.runs.iter().map(|r| r.elapsed).sum();
        let iters: usize = self.runs.iter().map(|r| r.trace.len()).sum();
        total / iters.max(1) as u32
    }

    /// One table holding per-run rows (`kind=run`) followed by per-pair
    /// summaries (`kind=summary`) with the published scores alongside.
    /// Contains no timing, so it is byte-stable for fixed inputs and seeds.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let seeds: Vec<String> = self.seeds.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "# seeds: {}", seeds.join(" "));
        out.push_str("kind,image,test,seed,isnr,rho,mean,std,n");
        for m in Method::ALL {
            let _ = write!(out, ",ref_{}", m.name());
        }
        out.push_str(",delta_ours\n");
        for r in &self.runs {
            let _ = writeln!(
                out,
                "run,{},{},{},{:.4},{:.6},,,,,,,,,",
                r.label, r.test, r.seed, r.isnr, r.rho
            );
        }
        for s in &self.summaries {
            let _ = write!(out, "summary,{},{},,,,{:.4},{:.4},{}", s.label, s.test, s.mean, s.std, s.runs);
            for m in Method::ALL {
                let _ = write!(out, ",{}", fmt_opt(s.reference(m)));
            }
            let delta = s.reference(Method::Ours).map(|r| s.mean - r);
            let _ = writeln!(out, ",{}", delta.map(|d| format!("{d:+.4}")).unwrap_or_default());
        }
        out
    }
}

/// Degrades `orig` under `setting` with `seed`, restores it, and scores it.
pub fn run_single(
    label: &str,
    image: Option<TestImage>,
    orig: &Image<f64>,
    setting: &TestSetting,
    seed: u64,
    params: &BenchParams,
) -> Result<RunResult> {
    let kernel = setting.kernel(params.gaussian_size)?;
    let y = degrade(orig, setting, seed, params.gaussian_size)?;
    let restoration = params.restoration(setting.noise::<f64>().sigma())?;
    let start = Instant::now();
    let out = deconvolve(&y, &kernel, &restoration, Some(orig))?;
    let elapsed = start.elapsed();
    Ok(RunResult {
        label: label.to_string(),
        image,
        test: setting.id,
        seed,
        isnr: isnr(orig, &y, &out.image)?,
        rho: out.rho,
        trace: out.trace,
        elapsed,
    })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn label_for(path: &Path) -> String {
    TestImage::from_path(path)
        .map(|t| t.name().to_string())
        .unwrap_or_else(|| path.file_stem().and_then(|s| s.to_str()).unwrap_or("image").to_string())
}

/// Runs every `(image, setting, seed)` combination.
pub fn run_benchmark(images: &[PathBuf], tests: &[u8], seeds: &[u64], params: &BenchParams) -> Result<BenchReport> {
    if images.is_empty() || tests.is_empty() || seeds.is_empty() {
        return Err(BenchError::Usage("bench needs at least one image, test and seed".into()));
    }
    let settings: Vec<TestSetting> = tests.iter().map(|&t| TestSetting::by_id(t)).collect::<Result<_>>()?;
    let mut originals = Vec::with_capacity(images.len());
    for path in images {
        let img: Image<f64> = load_image(path)?;
        originals.push((label_for(path), TestImage::from_path(path), img));
    }

    let mut jobs = Vec::new();
    for (i, _) in originals.iter().enumerate() {
        for s in &settings {
            for &seed in seeds {
                jobs.push((i, *s, seed));
            }
        }
    }
    let run = |&(i, setting, seed): &(usize, TestSetting, u64)| {
        let (label, kind, img) = &originals[i];
        run_single(label, *kind, img, &setting, seed, params)
    };
    let results: Vec<Result<RunResult>> = if params.parallel {
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    };
    let runs: Vec<RunResult> = results.into_iter().collect::<Result<_>>()?;

    let summaries = runs
        .chunks(seeds.len())
        .map(|group| {
            let values: Vec<f64> = group.iter().map(|r| r.isnr).collect();
            let (mean, std) = mean_std(&values);
            PairSummary {
                label: group[0].label.clone(),
                image: group[0].image,
                test: group[0].test,
                runs: group.len(),
                mean,
                std,
            }
        })
        .collect();
    Ok(BenchReport {
        seeds: seeds.to_vec(),
        runs,
        summaries,
    })
}

/// Per-iteration `lambda` trace of one benchmark run as CSV.
pub fn emit_lambda_trace(orig: &Image<f64>, setting: &TestSetting, seed: u64, params: &BenchParams) -> Result<String> {
    Ok(run_single("trace", None, orig, setting, seed, params)?.trace.to_csv())
}
