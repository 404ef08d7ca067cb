//! Monte Carlo over Haar-random unitary matrices.
//!
//! Samples are drawn in fixed-size chunks. Chunk `i` owns a ChaCha8 stream
//! seeded with `mix_seed(seed, i)`, and per-chunk statistics are merged by a
//! pairwise tree in chunk order, so results depend only on
//! `(seed, chunk_size, samples)` and never on the number of worker threads.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::roots::{aberth, relative_residual};

/// Largest `N` for which the power-trace route to `Λ` is trusted.
pub const MAX_N: usize = 12;
pub const DEFAULT_CHUNK_SIZE: usize = 10_000;
pub const MIN_SAMPLES: usize = 1_000;
/// Slack on the unit circle when binning zero moduli.
pub const MODULUS_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    /// Diagonal unitary with the given eigenphases.
    pub fn diagonal(thetas: &[f64]) -> Self {
        let n = thetas.len();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, t) in thetas.iter().enumerate() {
            data[i * n + i] = Complex64::from_polar(1.0, *t);
        }
        UnitaryMatrix { n, data }
    }

    /// `max |(X^† X − I)_{ij}|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for l in 0..n {
                    s += self.get(l, i).conj() * self.get(l, j);
                }
                if i == j {
                    s -= 1.0;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    fn matmul(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for l in 0..n {
                let a = self.data[i * n + l];
                for j in 0..n {
                    out[i * n + j] += a * rhs[l * n + j];
                }
            }
        }
        out
    }
}

/// Haar sample: Householder QR of a complex Ginibre matrix, with each column
/// of Q multiplied by the phase of the matching diagonal entry of R.
pub fn sample_haar<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitaryMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut a: Vec<Complex64> = (0..n * n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * scale, im * scale)
        })
        .collect();
    let mut reflectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut r_diag = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let norm = (k..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        let x0 = a[k * n + k];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k..n).map(|i| a[i * n + k]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm > 0.0 {
            for z in v.iter_mut() {
                *z /= vnorm;
            }
            // A[k.., k..] -= 2 v (v^† A)
            for j in k..n {
                let dot: Complex64 = (k..n).map(|i| v[i - k].conj() * a[i * n + j]).sum();
                for i in k..n {
                    a[i * n + j] -= 2.0 * v[i - k] * dot;
                }
            }
        }
        r_diag[k] = a[k * n + k];
        reflectors.push(v);
    }
    // Q = H_0 H_1 ... H_{n-1}, applied to the identity from the right end
    let mut q = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        q[i * n + i] = Complex64::new(1.0, 0.0);
    }
    for k in (0..n).rev() {
        let v = &reflectors[k];
        for j in 0..n {
            let dot: Complex64 = (k..n).map(|i| v[i - k].conj() * q[i * n + j]).sum();
            for i in k..n {
                q[i * n + j] -= 2.0 * v[i - k] * dot;
            }
        }
    }
    for (j, r) in r_diag.iter().enumerate() {
        let ph = if r.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { r / r.norm() };
        for i in 0..n {
            q[i * n + j] *= ph;
        }
    }
    let x = UnitaryMatrix { n, data: q };
    assert!(x.unitarity_defect() <= 1e-10, "Householder QR lost unitarity");
    x
}

/// Ascending coefficients of `Λ_X(s) = det(I − s X^†)`, via power traces
/// and Newton's identities.
pub fn charpoly_coefficients(x: &UnitaryMatrix) -> Result<Vec<Complex64>> {
    let n = x.size();
    if n > MAX_N {
        return Err(Error::SizeTooLarge { n, max: MAX_N });
    }
    let mut p = Vec::with_capacity(n + 1);
    p.push(Complex64::new(n as f64, 0.0));
    let mut power = x.data.clone();
    for j in 1..=n {
        p.push((0..n).map(|i| power[i * n + i]).sum());
        if j < n {
            power = x.matmul(&power);
        }
    }
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for j in 1..=n {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 1..=j {
            let t = e[j - i] * p[i];
            s += if i % 2 == 1 { t } else { -t };
        }
        e.push(s / j as f64);
    }
    Ok(e.iter().enumerate().map(|(j, ej)| if j % 2 == 1 { -ej.conj() } else { ej.conj() }).collect())
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    crate::roots::eval_with_derivative(coeffs, z)
}

/// `(Λ_X(x), Λ_X'(x))`.
pub fn charpoly_and_derivative(x: &UnitaryMatrix, at: Complex64) -> Result<(Complex64, Complex64)> {
    Ok(horner(&charpoly_coefficients(x)?, at))
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of chunk `chunk`: `splitmix64(seed ^ splitmix64(chunk))`.
pub fn mix_seed(seed: u64, chunk: u64) -> u64 {
    splitmix64(seed ^ splitmix64(chunk))
}

/// Streaming mean and centered second moment.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(a: Welford, b: Welford) -> Welford {
        if a.count == 0 {
            return b;
        }
        if b.count == 0 {
            return a;
        }
        let count = a.count + b.count;
        let d = b.mean - a.mean;
        let mean = a.mean + d * b.count as f64 / count as f64;
        let m2 = a.m2 + b.m2 + d * d * a.count as f64 * b.count as f64 / count as f64;
        Welford { count, mean, m2 }
    }
}

fn tree_reduce<T: Clone>(mut items: Vec<T>, merge: impl Fn(T, T) -> T, empty: T) -> T {
    if items.is_empty() {
        return empty;
    }
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => merge(a, b),
                None => a,
            });
        }
        items = next;
    }
    items.pop().unwrap()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
    pub chunk_size: usize,
}

/// Sampling parameters shared by every estimator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingPlan {
    pub samples: usize,
    pub seed: u64,
    pub chunk_size: usize,
}

impl SamplingPlan {
    pub fn new(samples: usize, seed: u64) -> Self {
        SamplingPlan { samples, seed, chunk_size: DEFAULT_CHUNK_SIZE }
    }

    fn validate(&self) -> Result<()> {
        if self.samples < MIN_SAMPLES {
            return Err(Error::InvalidArgument(format!("need at least {MIN_SAMPLES} samples")));
        }
        if self.chunk_size == 0 {
            return Err(Error::InvalidArgument("chunk size must be positive".into()));
        }
        Ok(())
    }

    /// Runs `work(rng, count)` on every chunk in parallel, results in chunk order.
    fn run<T: Send>(&self, work: impl Fn(&mut ChaCha8Rng, usize) -> Result<T> + Sync) -> Result<Vec<T>> {
        self.validate()?;
        let chunks = self.samples.div_ceil(self.chunk_size);
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let count = self.chunk_size.min(self.samples - c * self.chunk_size);
                let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(self.seed, c as u64));
                work(&mut rng, count)
            })
            .collect()
    }

    fn estimate(&self, sample: impl Fn(&mut ChaCha8Rng) -> Result<f64> + Sync) -> Result<MCEstimate> {
        let parts = self.run(|rng, count| {
            let mut w = Welford::default();
            for _ in 0..count {
                w.push(sample(rng)?);
            }
            Ok(w)
        })?;
        let w = tree_reduce(parts, Welford::merge, Welford::default());
        let var = if w.count > 1 { w.m2 / (w.count - 1) as f64 } else { 0.0 };
        Ok(MCEstimate {
            mean: w.mean,
            std_error: (var / w.count as f64).sqrt(),
            samples: self.samples,
            seed: self.seed,
            chunk_size: self.chunk_size,
        })
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("N must be at least 1".into()))
    } else if n > MAX_N {
        Err(Error::SizeTooLarge { n, max: MAX_N })
    } else {
        Ok(())
    }
}

/// Estimate of `E|Λ'(x)|^{2k}` over U(N).
pub fn mc_moment(n: usize, k: f64, x: Complex64, plan: SamplingPlan) -> Result<MCEstimate> {
    check_n(n)?;
    plan.estimate(|rng| {
        let u = sample_haar(n, rng);
        let (_, d) = charpoly_and_derivative(&u, x)?;
        Ok(d.norm().powf(2.0 * k))
    })
}

/// Estimate of `E|Λ(x)|^{2k}` over U(N).
pub fn mc_charpoly_moment(n: usize, k: f64, x: Complex64, plan: SamplingPlan) -> Result<MCEstimate> {
    check_n(n)?;
    plan.estimate(|rng| {
        let u = sample_haar(n, rng);
        let (l, _) = charpoly_and_derivative(&u, x)?;
        Ok(l.norm().powf(2.0 * k))
    })
}

/// Estimate of `E log|Λ'(r)|` over U(N).
pub fn mc_log_moment(n: usize, r: f64, plan: SamplingPlan) -> Result<MCEstimate> {
    check_n(n)?;
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!("r = {r} outside [0, 1)")));
    }
    plan.estimate(|rng| {
        let u = sample_haar(n, rng);
        let (_, d) = charpoly_and_derivative(&u, Complex64::new(r, 0.0))?;
        Ok(d.norm().ln())
    })
}

/// Estimate of `E|tr X|^2` (equal to 1 for every N ≥ 1); a sampler check.
pub fn mc_trace_square(n: usize, plan: SamplingPlan) -> Result<MCEstimate> {
    check_n(n)?;
    plan.estimate(|rng| Ok(sample_haar(n, rng).trace().norm_sqr()))
}

/// Zeros of `Λ_X'`.
pub fn derivative_zeros(x: &UnitaryMatrix) -> Result<Vec<Complex64>> {
    let c = charpoly_coefficients(x)?;
    let d: Vec<Complex64> = c.iter().enumerate().skip(1).map(|(j, cj)| cj * j as f64).collect();
    match d.len() {
        0 | 1 => Ok(Vec::new()),
        2 => Ok(vec![-d[0] / d[1]]),
        _ => {
            let roots = aberth(&d, 1e-12, 200)
                .ok_or_else(|| Error::RootFindingFailure(format!("Aberth did not converge for N = {}", x.size())))?;
            if let Some(bad) = roots.iter().find(|z| relative_residual(&d, **z) > 1e-8) {
                return Err(Error::RootFindingFailure(format!("residual too large at {bad}")));
            }
            Ok(roots)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Zeros with modulus above `1 + MODULUS_TOLERANCE`, not binned.
    pub outside: u64,
    pub total_zeros: u64,
    pub max_modulus: f64,
    pub samples: usize,
    pub seed: u64,
    pub chunk_size: usize,
}

impl RadialHistogram {
    /// Cumulative count up to the upper edge of each bin, per sample.
    pub fn cumulative_fraction(&self) -> Vec<f64> {
        let mut acc = 0u64;
        self.counts
            .iter()
            .map(|c| {
                acc += c;
                acc as f64 / self.samples as f64
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("u_lo,u_hi,count,cum_fraction\n");
        for (i, cum) in self.cumulative_fraction().iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{}", self.edges[i], self.edges[i + 1], self.counts[i], cum);
        }
        out
    }
}

#[derive(Clone)]
struct ZeroTally {
    counts: Vec<u64>,
    outside: u64,
    max_modulus: f64,
}

/// Radial distribution of the zeros of `Λ'` over U(N).
pub fn mc_zero_radii(n: usize, bins: usize, plan: SamplingPlan) -> Result<RadialHistogram> {
    check_n(n)?;
    if n < 2 {
        return Err(Error::InvalidArgument("Λ' has zeros only for N >= 2".into()));
    }
    if bins == 0 {
        return Err(Error::InvalidArgument("need at least one bin".into()));
    }
    let parts = plan.run(|rng, count| {
        let mut t = ZeroTally { counts: vec![0; bins], outside: 0, max_modulus: 0.0 };
        for _ in 0..count {
            let u = sample_haar(n, rng);
            for z in derivative_zeros(&u)? {
                let m = z.norm();
                t.max_modulus = t.max_modulus.max(m);
                if m > 1.0 + MODULUS_TOLERANCE {
                    t.outside += 1;
                } else {
                    let b = ((m * bins as f64) as usize).min(bins - 1);
                    t.counts[b] += 1;
                }
            }
        }
        Ok(t)
    })?;
    let merged = tree_reduce(
        parts,
        |a, b| ZeroTally {
            counts: a.counts.iter().zip(&b.counts).map(|(x, y)| x + y).collect(),
            outside: a.outside + b.outside,
            max_modulus: a.max_modulus.max(b.max_modulus),
        },
        ZeroTally { counts: vec![0; bins], outside: 0, max_modulus: 0.0 },
    );
    let total_zeros = merged.counts.iter().sum::<u64>() + merged.outside;
    Ok(RadialHistogram {
        edges: (0..=bins).map(|i| i as f64 / bins as f64).collect(),
        counts: merged.counts,
        outside: merged.outside,
        total_zeros,
        max_modulus: merged.max_modulus,
        samples: plan.samples,
        seed: plan.seed,
        chunk_size: plan.chunk_size,
    })
}
