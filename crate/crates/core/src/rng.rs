//! Seeding and chunked Monte Carlo.
//!
//! Every stochastic routine splits its samples into chunks of [`CHUNK`]
//! draws. Chunk `j` gets its own `Pcg32` generator derived from
//! `(seed, j)`, and chunk results are combined in chunk order, so output
//! depends only on the seed and the sample count, never on thread count.

use rand::Rng;
use rand_distr::StandardNormal;
use rand_pcg::Pcg32;
use rayon::prelude::*;

/// Samples per chunk.
pub const CHUNK: usize = 65_536;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> Pcg32 {
    Pcg32::new(splitmix64(seed ^ splitmix64(chunk)), chunk)
}

/// Sizes of the chunks covering `n` samples.
pub fn chunk_sizes(n: usize) -> Vec<usize> {
    let full = n / CHUNK;
    let mut v = vec![CHUNK; full];
    if n % CHUNK != 0 {
        v.push(n % CHUNK);
    }
    v
}

/// Standard Gaussian vector of length d.
pub fn gaussian_vec<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform point on S^{d−1}, by normalising a Gaussian vector.
pub fn unit_vector<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let g = gaussian_vec(rng, d);
        let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-300 {
            let mut v: Vec<f64> = g.iter().map(|x| x / n).collect();
            // one correction step brings the norm to within an ulp or two
            let n2 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= n2);
            return v;
        }
    }
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        Moments {
            count: self.count + other.count,
            mean: self.mean + delta * other.count as f64 / n,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * other.count as f64 / n,
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        (self.m2 / (self.count as f64 - 1.0) / self.count as f64).sqrt()
    }
}

/// Mean of `draw` over `n` samples with its standard error.
pub fn monte_carlo<F>(n: usize, seed: u64, draw: F) -> Moments
where
    F: Fn(&mut Pcg32) -> f64 + Sync,
{
    let parts: Vec<Moments> = chunk_sizes(n)
        .into_par_iter()
        .enumerate()
        .map(|(j, size)| {
            let mut rng = chunk_rng(seed, j as u64);
            let mut m = Moments::default();
            for _ in 0..size {
                m.push(draw(&mut rng));
            }
            m
        })
        .collect();
    parts.into_iter().fold(Moments::default(), Moments::merge)
}
