use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gdeconv::psf::DEFAULT_GAUSSIAN_SIZE;
use gdeconv::{deconvolve, isnr, load_image, metrics, mse, psnr, save_image, Image, Kernel, NoiseModel};
use gdeconv_bench::noise_estimate::estimate_sigma;
use gdeconv_bench::{degrade, emit_lambda_trace, run_benchmark, BenchError, BenchParams, Method, Result, RunConfig, TestSetting};

#[derive(Parser)]
#[command(name = "gdeconv", version, about = "Guided-filter regularized image deconvolution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Tuning {
    /// key=value file with w, epsilon, max_iter, rho, seed, psf_size_gaussian; flags win
    #[arg(long)]
    config: Option<PathBuf>,
    /// Guided filter window side (odd)
    #[arg(long)]
    w: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Fixed discrepancy fraction in (0, 1] instead of the image-based estimate
    #[arg(long)]
    rho: Option<f64>,
    /// Support of the Gaussian PSF of test 5 (odd)
    #[arg(long)]
    psf_size_gaussian: Option<usize>,
}

impl Tuning {
    fn resolve(&self, seed: Option<u64>) -> Result<RunConfig> {
        let file = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        Ok(file.overridden_by(&RunConfig {
            w: self.w,
            epsilon: self.epsilon,
            max_iter: self.max_iter,
            rho: self.rho,
            seed,
            psf_size_gaussian: self.psf_size_gaussian,
        }))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Blur and add seeded noise according to one of the five test settings
    Degrade {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        test: u8,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Restore a blurred, noisy observation
    Restore {
        #[arg(long = "in")]
        input: PathBuf,
        /// Use the blur kernel of test setting 1..=5
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5), conflicts_with = "psf_file")]
        psf_test: Option<u8>,
        /// Kernel in the plain-text "size_x size_y" + rows format
        #[arg(long)]
        psf_file: Option<PathBuf>,
        /// Noise standard deviation on the [0, 255] scale; estimated from the input when omitted
        #[arg(long)]
        sigma255: Option<f64>,
        #[arg(long)]
        out: PathBuf,
        /// Write the per-iteration lambda trace as CSV
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Clean image used to fill the trace ISNR column
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Start from the observation instead of zero
        #[arg(long)]
        warm_start: bool,
        /// Stop when the relative update energy drops below this value
        #[arg(long)]
        early_stop: Option<f64>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Report ISNR, PSNR and MSE of a restoration
    Evaluate {
        #[arg(long)]
        orig: PathBuf,
        #[arg(long)]
        degraded: PathBuf,
        #[arg(long)]
        restored: PathBuf,
    },
    /// Run the benchmark grid and write a CSV report
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        images: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = [1u8, 2, 3, 4, 5])]
        tests: Vec<u8>,
        #[arg(long, value_delimiter = ',', default_values_t = [0u64])]
        seeds: Vec<u64>,
        #[arg(long)]
        report: PathBuf,
        /// Run restorations one at a time
        #[arg(long)]
        serial: bool,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Degrade, restore, and write the per-iteration lambda trace
    Trace {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        test: u8,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
    },
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn gaussian_size(cfg: &RunConfig) -> usize {
    cfg.psf_size_gaussian.unwrap_or(DEFAULT_GAUSSIAN_SIZE)
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Degrade { input, out, test, seed, tuning } => {
            let cfg = tuning.resolve(seed)?;
            let seed = cfg.seed.unwrap_or(0);
            let setting = TestSetting::by_id(test)?;
            let img: Image<f64> = load_image(&input)?;
            let y = degrade(&img, &setting, seed, gaussian_size(&cfg))?;
            save_image(&y, &out)?;
            println!("test={test} seed={seed} sigma255={:.4}", setting.sigma255_sq.sqrt());
        }
        Command::Restore {
            input,
            psf_test,
            psf_file,
            sigma255,
            out,
            trace,
            reference,
            warm_start,
            early_stop,
            tuning,
        } => {
            let cfg = tuning.resolve(None)?;
            let kernel: Kernel<f64> = match (psf_test, psf_file) {
                (Some(t), None) => TestSetting::by_id(t)?.kernel(gaussian_size(&cfg))?,
                (None, Some(p)) => Kernel::load(&p)?.normalized()?,
                _ => return Err(BenchError::Usage("exactly one of --psf-test or --psf-file is required".into())),
            };
            let y: Image<f64> = load_image(&input)?;
            let noise = match sigma255 {
                Some(s) => NoiseModel::from_sigma255(s)?,
                None => {
                    let est = NoiseModel::from_sigma(estimate_sigma(&y))?;
                    eprintln!("estimated sigma255={:.4} (wavelet MAD)", est.sigma255());
                    est
                }
            };
            let mut params = BenchParams::default().with_config(&cfg).restoration(noise.sigma())?;
            params.warm_start = warm_start;
            params.early_stop = early_stop;
            let reference: Option<Image<f64>> = reference.map(load_image).transpose()?;
            let restored = deconvolve(&y, &kernel, &params, reference.as_ref())?;
            save_image(&restored.image, &out)?;
            if let Some(p) = trace {
                write_text(&p, &restored.trace.to_csv())?;
            }
            println!("iterations={} rho={:.6}", restored.trace.len(), restored.rho);
            if let Some(r) = &reference {
                println!("isnr={}", metrics::format_db(isnr(r, &y, &restored.image)?));
            }
        }
        Command::Evaluate { orig, degraded, restored } => {
            let o: Image<f64> = load_image(&orig)?;
            let d: Image<f64> = load_image(&degraded)?;
            let r: Image<f64> = load_image(&restored)?;
            println!("isnr_db={}", metrics::format_db(isnr(&o, &d, &r)?));
            println!("psnr_degraded_db={}", metrics::format_db(psnr(&o, &d)?));
            println!("psnr_restored_db={}", metrics::format_db(psnr(&o, &r)?));
            println!("mse_restored={:e}", mse(&o, &r)?);
        }
        Command::Bench {
            images,
            tests,
            seeds,
            report,
            serial,
            tuning,
        } => {
            let cfg = tuning.resolve(None)?;
            let params = BenchParams {
                parallel: !serial,
                ..BenchParams::default().with_config(&cfg)
            };
            let result = run_benchmark(&images, &tests, &seeds, &params)?;
            write_text(&report, &result.to_csv())?;
            let seeds: Vec<String> = seeds.iter().map(u64::to_string).collect();
            println!("seeds: {}", seeds.join(","));
            println!("{:<10} {:>4} {:>9} {:>7} {:>9} {:>9}", "image", "test", "mean", "std", "published", "L0-AbS");
            for s in &result.summaries {
                let show = |v: Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_else(|| "-".into());
                println!(
                    "{:<10} {:>4} {:>9.3} {:>7.3} {:>9} {:>9}",
                    s.label,
                    s.test,
                    s.mean,
                    s.std,
                    show(s.reference(Method::Ours)),
                    show(s.reference(Method::L0AbS))
                );
            }
            println!(
                "mean time per iteration: {:.4} s{}",
                result.mean_time_per_iteration().as_secs_f64(),
                if params.parallel { " (runs executed concurrently)" } else { "" }
            );
        }
        Command::Trace { input, test, seed, out, tuning } => {
            let cfg = tuning.resolve(seed)?;
            let params = BenchParams::default().with_config(&cfg);
            let img: Image<f64> = load_image(&input)?;
            let csv = emit_lambda_trace(&img, &TestSetting::by_id(test)?, cfg.seed.unwrap_or(0), &params)?;
            write_text(&out, &csv)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
