//! Timing of whole-pipeline encryption and decryption against input size.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pipeline::{decrypt_pipeline, encrypt_pipeline, Pipeline};

pub const DEFAULT_SIZES: [usize; 10] = [21, 1036, 2024, 4658, 6218, 9830, 18552, 31081, 39674, 60173];

pub const DEFAULT_REPS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub sizes: Vec<usize>,
    /// Median encryption time per size, in seconds.
    pub enc_times: Vec<f64>,
    /// Median decryption time per size, in seconds.
    pub dec_times: Vec<f64>,
    pub r_enc: f64,
    pub r_dec: f64,
}

impl BenchResult {
    pub fn to_table(&self) -> String {
        let mut out = format!("{:>10} {:>14} {:>14}\n", "bytes", "encrypt (ms)", "decrypt (ms)");
        for ((s, e), d) in self.sizes.iter().zip(&self.enc_times).zip(&self.dec_times) {
            writeln!(out, "{s:>10} {:>14.3} {:>14.3}", e * 1e3, d * 1e3).unwrap();
        }
        writeln!(out, "pearson r: encrypt {:.4}, decrypt {:.4}", self.r_enc, self.r_dec).unwrap();
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bytes,encrypt_s,decrypt_s\n");
        for ((s, e), d) in self.sizes.iter().zip(&self.enc_times).zip(&self.dec_times) {
            writeln!(out, "{s},{e:e},{d:e}").unwrap();
        }
        out
    }
}

/// Pearson correlation coefficient; `NaN` when either series is constant.
pub fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len()) as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    sxy / (sxx * syy).sqrt()
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[k]
    } else {
        0.5 * (xs[k - 1] + xs[k])
    }
}

/// Random printable ASCII text.
pub fn random_printable(len: usize, rng: &mut impl Rng) -> Vec<u8> {
    (0..len).map(|_| rng.gen_range(32u8..=126)).collect()
}

/// Times encryption and decryption of random printable plaintexts. Each
/// size gets one discarded warm-up run and `reps` timed runs; the median is
/// kept.
pub fn bench(p: &Pipeline, sizes: &[usize], reps: usize, seed: u64) -> Result<BenchResult> {
    if sizes.len() < 3 || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(
            "need at least 3 strictly increasing sizes".into(),
        ));
    }
    if reps == 0 {
        return Err(Error::Precondition("reps must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut enc_times = Vec::with_capacity(sizes.len());
    let mut dec_times = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let text = random_printable(size, &mut rng);
        let ct = encrypt_pipeline(p, &text)?;
        decrypt_pipeline(p, &ct)?;
        let mut enc = Vec::with_capacity(reps);
        let mut dec = Vec::with_capacity(reps);
        for _ in 0..reps {
            let t = Instant::now();
            let ct = encrypt_pipeline(p, &text)?;
            enc.push(t.elapsed().as_secs_f64());
            let t = Instant::now();
            std::hint::black_box(decrypt_pipeline(p, &ct)?);
            dec.push(t.elapsed().as_secs_f64());
        }
        enc_times.push(median(enc));
        dec_times.push(median(dec));
    }
    let xs: Vec<f64> = sizes.iter().map(|&s| s as f64).collect();
    Ok(BenchResult {
        sizes: sizes.to_vec(),
        r_enc: pearson(&xs, &enc_times),
        r_dec: pearson(&xs, &dec_times),
        enc_times,
        dec_times,
    })
}
