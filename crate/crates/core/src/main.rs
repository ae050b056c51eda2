use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dctnorm::harness::bench::{self, BenchOptions, Method};
use dctnorm::harness::{self, MaskPattern, MaskSpec, Picture, Settings};
use dctnorm::metrics::{psnr, ssim};
use dctnorm::solver::ObservedImage;
use dctnorm::{Error, Result};

#[derive(Parser)]
#[command(name = "dctnorm", version, about = "Image recovery from heavily subsampled pixels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Remove pixels from an image and write the observation and its mask.
    Corrupt {
        input: PathBuf,
        /// Observed image, missing pixels set to 0.
        #[arg(long)]
        output: PathBuf,
        /// Mask file: 255 observed, 0 missing.
        #[arg(long)]
        mask: PathBuf,
        /// Fraction of missing pixels (random pattern only).
        #[arg(long, default_value_t = 0.9)]
        missing: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// random or text-overlay.
        #[arg(long, default_value = "random")]
        pattern: MaskPattern,
    },
    /// Recover an image from an observation and its mask.
    Recover {
        input: PathBuf,
        #[arg(long)]
        mask: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// dnm, gdnm, ldnm, svt or ltvnn.
        #[arg(long, default_value = "dnm")]
        method: Method,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        settings: Settings,
    },
    /// Print PSNR and SSIM of an image against a reference.
    Evaluate { reference: PathBuf, image: PathBuf },
    /// Run methods over ratios on every image of a corpus directory.
    Bench {
        corpus: PathBuf,
        /// Comma separated methods.
        #[arg(long, value_delimiter = ',', default_value = "dnm,ltvnn,svt")]
        methods: Vec<Method>,
        /// Comma separated missing ratios.
        #[arg(long, value_delimiter = ',', default_value = "0.9,0.95,0.98,0.99")]
        ratios: Vec<f64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        markdown: Option<PathBuf>,
        /// Report 0 seconds for every cell so the CSV is reproducible byte for byte.
        #[arg(long)]
        no_timing: bool,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        settings: Settings,
    },
}

fn settings(config: Option<&PathBuf>, flags: &Settings) -> Result<Settings> {
    let file = match config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    Ok(file.overridden_by(flags))
}

fn write_text(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io { path: path.clone(), source: e })
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Corrupt { input, output, mask, missing, seed, pattern } => {
            let picture = harness::load_image(&input)?;
            let spec =
                MaskSpec { missing_ratio: if pattern == MaskPattern::Random { missing } else { 0.0 }, seed, pattern };
            let omega = harness::gen_mask(picture.dims(), &spec)?;
            let channels = picture
                .channels
                .iter()
                .map(|c| harness::corrupt(c, &omega).map(|o| o.data().clone()))
                .collect::<Result<Vec<_>>>()?;
            harness::save_image(&Picture { channels }, &output)?;
            harness::save_mask(&omega, &mask)?;
            println!("{} of {} pixels observed", omega.observed_count(), omega.flags().len());
        }
        Command::Recover { input, mask, output, method, config, settings: flags } => {
            let settings = settings(config.as_ref(), &flags)?;
            let picture = harness::load_image(&input)?;
            let omega = harness::load_mask(&mask)?;
            let channels = picture
                .channels
                .into_iter()
                .map(|c| ObservedImage::new(c, omega.clone()))
                .collect::<Result<Vec<_>>>()?;
            let (recovered, iterations) = bench::run_method(method, &channels, &settings)?;
            harness::save_image(&Picture { channels: recovered }, &output)?;
            println!("{method}: {iterations} iterations");
        }
        Command::Evaluate { reference, image } => {
            let a = harness::load_image(&reference)?;
            let b = harness::load_image(&image)?;
            if a.channels.len() != b.channels.len() {
                return Err(Error::InvalidDimension("images have different channel counts".into()));
            }
            let (psnr_db, ssim_value) = if a.is_gray() {
                (psnr(&b.channels[0], &a.channels[0])?, ssim(&b.channels[0], &a.channels[0])?)
            } else {
                bench::score(&b.channels, &a)?
            };
            println!("psnr_db {psnr_db:.4}\nssim {ssim_value:.4}");
        }
        Command::Bench { corpus, methods, ratios, csv, markdown, no_timing, config, settings: flags } => {
            let settings = settings(config.as_ref(), &flags)?;
            let opts = BenchOptions { methods, ratios, settings, timing: !no_timing };
            let result = harness::run_bench(&corpus, &opts)?;
            let table = result.to_csv();
            match &csv {
                Some(path) => write_text(path, &table)?,
                None => print!("{table}"),
            }
            if let Some(path) = &markdown {
                write_text(path, &result.to_markdown())?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
