use std::hash::{DefaultHasher, Hasher};
use std::time::Instant;

use anyhow::{bail, Result};
use serde::Serialize;
use shearlet::ct::piecewise_smooth;
use shearlet::filters::build_default_system;
use shearlet::transform::{sheardec2d, shearrec2d};

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub command: &'static str,
    pub size: usize,
    pub scales: usize,
    pub repeat: usize,
    pub threads: usize,
    pub system_build: Vec<f64>,
    pub decompose: Vec<f64>,
    pub reconstruct: Vec<f64>,
    /// Hash of the coefficients and reconstruction; identical across repetitions.
    pub checksum: String,
}

fn median(samples: &[f64]) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len() % 2 == 1 {
        s[m]
    } else {
        0.5 * (s[m - 1] + s[m])
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    // Clock resolution can round very short phases down to zero.
    (out, start.elapsed().as_secs_f64().max(1e-9))
}

fn digest(values: &[f64], h: &mut DefaultHasher) {
    for v in values {
        h.write_u64(v.to_bits());
    }
}

pub fn run(size: usize, scales: usize, repeat: usize) -> Result<BenchReport> {
    let image = piecewise_smooth(size, 0);
    let mut report = BenchReport {
        command: "bench",
        size,
        scales,
        repeat,
        threads: rayon::current_num_threads(),
        system_build: Vec::with_capacity(repeat),
        decompose: Vec::with_capacity(repeat),
        reconstruct: Vec::with_capacity(repeat),
        checksum: String::new(),
    };
    for _ in 0..repeat {
        let (sys, t_sys) = timed(|| build_default_system(size, size, scales));
        let sys = sys?;
        let (c, t_dec) = timed(|| sheardec2d(&image, &sys));
        let c = c?;
        let (back, t_rec) = timed(|| shearrec2d(&c, &sys));
        let back = back?;
        let mut h = DefaultHasher::new();
        digest(c.data(), &mut h);
        digest(back.data(), &mut h);
        let sum = format!("{:016x}", h.finish());
        if report.checksum.is_empty() {
            report.checksum = sum;
        } else if report.checksum != sum {
            bail!("output checksum changed between repetitions");
        }
        report.system_build.push(t_sys);
        report.decompose.push(t_dec);
        report.reconstruct.push(t_rec);
    }
    Ok(report)
}

impl BenchReport {
    /// `key=value` lines followed by one JSON line.
    pub fn render(&self) -> Result<String> {
        let mut out = format!(
            "command={}\nsize={}\nscales={}\nrepeat={}\nthreads={}\n",
            self.command, self.size, self.scales, self.repeat, self.threads
        );
        for (name, samples) in [
            ("system_build", &self.system_build),
            ("decompose", &self.decompose),
            ("reconstruct", &self.reconstruct),
        ] {
            out += &format!("{name}_median_s={:.6}\n", median(samples));
        }
        out += &format!("checksum={}\n", self.checksum);
        out += &serde_json::to_string(self)?;
        out.push('\n');
        Ok(out)
    }
}
