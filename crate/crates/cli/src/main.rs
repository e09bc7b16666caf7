//! `shearlet`: batch front end for the shearlet toolkit.
//!
//! Diagnostics go to stderr; data goes to the files named by flags. Exit
//! status is 0 on success, 2 on argument errors and 1 on runtime errors.

mod bench;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shearlet::ShearletError;

#[derive(Parser, Debug)]
#[command(name = "shearlet", version, about = "Digital shearlet transform toolkit")]
pub struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a shearlet system and store it as a .shsys file.
    System {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        scales: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decompose a PGM image into a .shc coefficient file.
    Decompose {
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        scales: usize,
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Reconstruct a PGM image from a .shc coefficient file.
    Reconstruct {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    Denoise(DenoiseArgs),
    Inpaint(InpaintArgs),
    Ct(CtArgs),
    /// Print PSNR and SSIM between two images.
    Metrics {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Time system build, decomposition and reconstruction.
    Bench {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        scales: usize,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        repeat: u32,
    },
}

/// Hard-threshold denoising.
#[derive(Args, Debug)]
pub struct DenoiseArgs {
    #[arg(long)]
    image: PathBuf,
    /// Noise standard deviation in gray levels.
    #[arg(long)]
    sigma: f64,
    #[arg(long)]
    scales: usize,
    /// Per-scale threshold multipliers, coarse to fine.
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<f64>>,
    /// Add Gaussian noise of strength `sigma` before denoising.
    #[arg(long, requires = "seed")]
    add_noise: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the noisy input (with --add-noise).
    #[arg(long, requires = "add_noise")]
    noisy_out: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

/// Iterative-thresholding inpainting.
#[derive(Args, Debug)]
pub struct InpaintArgs {
    #[arg(long)]
    image: PathBuf,
    /// Nonzero pixels are known, zero pixels are missing.
    #[arg(long)]
    mask: PathBuf,
    #[arg(long)]
    iters: usize,
    /// Starting threshold, or `auto` for the largest normalized coefficient.
    #[arg(long)]
    delta_init: String,
    #[arg(long, default_value_t = 0.01)]
    delta_min: f64,
    #[arg(long)]
    scales: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phantom {
    SheppLogan,
    Ellipses,
}

/// Simulated CT scan and shearlet-regularized reconstruction.
#[derive(Args, Debug)]
pub struct CtArgs {
    #[arg(long, value_enum)]
    phantom: Phantom,
    #[arg(long)]
    size: usize,
    #[arg(long)]
    angles: usize,
    #[arg(long)]
    iters: usize,
    #[arg(long)]
    lambda: f64,
    /// Seed for the ellipse phantom and the sinogram noise.
    #[arg(long)]
    seed: Option<u64>,
    /// Standard deviation of Gaussian noise added to the sinogram.
    #[arg(long, requires = "seed")]
    noise: Option<f64>,
    /// Shearlet scales used by the regularizer.
    #[arg(long, default_value_t = 1)]
    scales: usize,
    /// Number of ellipses for the ellipse phantom.
    #[arg(long, default_value_t = 6)]
    count: usize,
    /// Reconstruction, written with intensity 1 mapped to 255.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    sinogram: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        pool = pool.num_threads(t as usize);
    }
    if let Err(e) = pool.build_global() {
        eprintln!("error: cannot start worker threads: {e}");
        return ExitCode::from(1);
    }
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let argument = matches!(
                e.downcast_ref::<ShearletError>(),
                Some(ShearletError::Argument(_) | ShearletError::GridTooSmall { .. })
            );
            ExitCode::from(if argument { 2 } else { 1 })
        }
    }
}
