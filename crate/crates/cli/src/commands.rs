use std::path::Path;

use anyhow::{Context, Result};
use shearlet::ct::{
    pdhg_reconstruct, radon, random_ellipses, shepp_logan, PdhgParams, ScanGeometry, Sinogram,
};
use shearlet::filters::{build_default_system, shearlet_count, ShearletSystem2D};
use shearlet::io::{load_coeffs, load_system, read_pgm, save_coeffs, save_sinogram, save_system, write_pgm};
use shearlet::restore::{
    add_gaussian_noise, default_delta_init, default_k, denoise, inpaint, psnr, ssim, DenoiseParams,
    InpaintParams,
};
use shearlet::transform::{sheardec2d, shearrec2d};
use shearlet::{ImageGrid, ShearletError};

use crate::{CtArgs, Command, DenoiseArgs, InpaintArgs, Phantom};

fn bad_arg(msg: impl Into<String>) -> anyhow::Error {
    ShearletError::Argument(msg.into()).into()
}

fn read_image(path: &Path) -> Result<ImageGrid> {
    read_pgm(path).with_context(|| format!("reading {}", path.display()))
}

fn write_image(img: &ImageGrid, path: &Path) -> Result<()> {
    write_pgm(img, path).with_context(|| format!("writing {}", path.display()))
}

/// Loads `path` if given, otherwise builds the default system; either way
/// the result must fit `rows x cols`.
fn system_for(path: Option<&Path>, rows: usize, cols: usize, scales: usize) -> Result<ShearletSystem2D> {
    match path {
        Some(p) => {
            let sys = load_system(p).with_context(|| format!("reading {}", p.display()))?;
            if sys.shape() != (rows, cols) {
                return Err(bad_arg(format!(
                    "system {} is {}x{}, data is {rows}x{cols}",
                    p.display(),
                    sys.rows(),
                    sys.cols()
                )));
            }
            Ok(sys)
        }
        None => Ok(build_default_system(rows, cols, scales)?),
    }
}

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::System { rows, cols, scales, out } => {
            let sys = build_default_system(rows, cols, scales)?;
            save_system(&sys, &out).with_context(|| format!("writing {}", out.display()))?;
            log::info!("{} filters written to {}", sys.n_shearlets(), out.display());
            Ok(())
        }
        Command::Decompose { image, scales, system, out } => {
            let f = read_image(&image)?;
            let sys = system_for(system.as_deref(), f.rows(), f.cols(), scales)?;
            if system.is_some() && sys.n_scales() != scales {
                return Err(bad_arg(format!(
                    "--scales {scales} disagrees with the system file ({} scales)",
                    sys.n_scales()
                )));
            }
            let c = sheardec2d(&f, &sys)?;
            save_coeffs(&c, &out).with_context(|| format!("writing {}", out.display()))?;
            Ok(())
        }
        Command::Reconstruct { coeffs, system, out } => {
            let c = load_coeffs(&coeffs).with_context(|| format!("reading {}", coeffs.display()))?;
            let scales = (1..=12)
                .find(|&j| shearlet_count(j) == c.n_shearlets())
                .ok_or_else(|| anyhow::anyhow!("{} slices match no default system", c.n_shearlets()))?;
            let sys = system_for(system.as_deref(), c.rows(), c.cols(), scales)?;
            write_image(&shearrec2d(&c, &sys)?, &out)
        }
        Command::Denoise(args) => run_denoise(args),
        Command::Inpaint(args) => run_inpaint(args),
        Command::Ct(args) => run_ct(args),
        Command::Metrics { a, b } => {
            let (fa, fb) = (read_image(&a)?, read_image(&b)?);
            println!("psnr={:?} ssim={:?}", psnr(&fa, &fb)?, ssim(&fa, &fb)?);
            Ok(())
        }
        Command::Bench { size, scales, repeat } => {
            let report = crate::bench::run(size, scales, repeat as usize)?;
            print!("{}", report.render()?);
            Ok(())
        }
    }
}

fn run_denoise(args: DenoiseArgs) -> Result<()> {
    let f = read_image(&args.image)?;
    let sys = build_default_system(f.rows(), f.cols(), args.scales)?;
    let noisy = match (args.add_noise, args.seed) {
        (true, Some(seed)) => add_gaussian_noise(&f, args.sigma, seed),
        _ => f,
    };
    if let Some(p) = &args.noisy_out {
        write_image(&noisy, p)?;
    }
    let k = args.k.unwrap_or_else(|| default_k(args.scales));
    let out = denoise(&noisy, &sys, &DenoiseParams::with_k(args.sigma, k))?;
    write_image(&out, &args.out)
}

fn run_inpaint(args: InpaintArgs) -> Result<()> {
    let f = read_image(&args.image)?;
    let mask = read_image(&args.mask)?.map(|&m| if m > 0.0 { 1.0 } else { 0.0 });
    f.check_same_shape(&mask)?;
    let masked = ImageGrid::from_vec(
        f.rows(),
        f.cols(),
        f.data().iter().zip(mask.data()).map(|(v, m)| v * m).collect(),
    )?;
    let sys = build_default_system(f.rows(), f.cols(), args.scales)?;
    let delta_init = match args.delta_init.as_str() {
        "auto" => default_delta_init(&masked, &sys)?,
        s => s
            .parse()
            .map_err(|_| bad_arg(format!("--delta-init expects a number or `auto`, got {s:?}")))?,
    };
    let p = InpaintParams {
        delta_init,
        delta_min: args.delta_min,
        iterations: args.iters,
    };
    write_image(&inpaint(&masked, &mask, &sys, &p)?, &args.out)
}

fn run_ct(args: CtArgs) -> Result<()> {
    let phantom = match args.phantom {
        Phantom::SheppLogan => shepp_logan(args.size)?,
        Phantom::Ellipses => random_ellipses(args.size, args.count, args.seed.unwrap_or(0))?,
    };
    let geo = ScanGeometry::standard(args.size, args.angles)?;
    let mut g = radon(&phantom, &geo)?;
    if let (Some(sigma), Some(seed)) = (args.noise, args.seed) {
        let as_grid = ImageGrid::from_vec(geo.n_angles, geo.n_offsets, g.into_vec())?;
        g = Sinogram::from_vec(geo, add_gaussian_noise(&as_grid, sigma, seed).into_vec())?;
    }
    if let Some(p) = &args.sinogram {
        save_sinogram(&g, p).with_context(|| format!("writing {}", p.display()))?;
    }
    let sys = build_default_system(args.size, args.size, args.scales)?;
    let res = pdhg_reconstruct(&g, &sys, &PdhgParams::new(args.lambda, args.iters))?;
    log::info!(
        "final objective {:?}, psnr vs phantom {:.2} dB (peak 1)",
        res.objective.last(),
        psnr(&phantom.scale(255.0), &res.image.scale(255.0))?
    );
    write_image(&res.image.scale(255.0), &args.out)
}
