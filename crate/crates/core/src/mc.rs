//! Reproducible Monte Carlo plumbing.
//!
//! Replicate `i` of a run seeded with `seed` draws from ChaCha8 keyed by
//! `seed` on stream `i`. Streams of one key never overlap, so a replicate's
//! draws depend only on `(seed, i)`, never on which worker ran it or in what
//! order. Results are collected in replicate order and reduced sequentially,
//! which keeps every estimate bit-identical for any worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{Error, Result};

pub type McRng = ChaCha8Rng;

/// Generator for replicate `index` of a run seeded with `seed`.
pub fn substream(seed: u64, index: u64) -> McRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `f` once per replicate in parallel, returning results in replicate order.
pub fn replicate<T, F>(seed: u64, reps: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut McRng) -> T + Sync,
{
    (0..reps as u64)
        .into_par_iter()
        .map(|i| f(&mut substream(seed, i)))
        .collect()
}

/// Fallible variant of [`replicate`]; the first error in replicate order wins.
pub fn try_replicate<T, F>(seed: u64, reps: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut McRng) -> Result<T> + Sync,
{
    replicate(seed, reps, f).into_iter().collect()
}

/// Runs `op` on a dedicated pool with `workers` threads.
pub fn with_workers<T: Send>(workers: usize, op: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::domain(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(op))
}

/// A simulated number with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub reps: usize,
}

impl McEstimate {
    /// Sample mean with `stderr = sd / √n`.
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            let d = x - mean;
            mean += d / (i + 1) as f64;
            m2 += d * (x - mean);
        }
        let var = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
        Self { value: mean, stderr: (var / n as f64).sqrt(), reps: n }
    }

    /// Fraction of `true` values.
    pub fn proportion(flags: impl IntoIterator<Item = bool>) -> Self {
        let xs: Vec<f64> = flags.into_iter().map(|b| if b { 1.0 } else { 0.0 }).collect();
        Self::from_samples(&xs)
    }

    /// Sample variance; the error is the delta-method SE of the squared deviations.
    pub fn variance(xs: &[f64]) -> Self {
        let mean = Self::from_samples(xs).value;
        let sq: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
        let mut e = Self::from_samples(&sq);
        let n = xs.len() as f64;
        e.value *= n / (n - 1.0);
        e
    }

    /// Sample covariance of paired draws.
    pub fn covariance(xs: &[f64], ys: &[f64]) -> Self {
        let mx = Self::from_samples(xs).value;
        let my = Self::from_samples(ys).value;
        let prod: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
        let mut e = Self::from_samples(&prod);
        let n = xs.len() as f64;
        e.value *= n / (n - 1.0);
        e
    }

    /// `(value − target) / stderr`; zero when both agree exactly.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = self.value - target;
        if d == 0.0 {
            0.0
        } else {
            d / self.stderr
        }
    }

    pub fn within(&self, target: f64, n_se: f64) -> bool {
        self.z_score(target).abs() <= n_se
    }
}

/// Empirical pmf over `0..=n_max` from integer draws; the last cell is not a tail bin.
pub fn histogram(draws: &[f64], n_max: usize) -> Vec<f64> {
    let mut h = vec![0.0; n_max + 1];
    for &d in draws {
        if d >= 0.0 && d <= n_max as f64 {
            h[d as usize] += 1.0;
        }
    }
    let n = draws.len() as f64;
    h.iter_mut().for_each(|c| *c /= n);
    h
}

/// `½ Σ |p − q|` over the common cells.
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Two-sample Kolmogorov–Smirnov statistic and its asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let en = (n * m / (n + m)).sqrt();
    let lam = (en + 0.12 + 0.11 / en) * d;
    // Kolmogorov distribution tail
    let mut p = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = 2.0 * (-2.0 * kf * kf * lam * lam).exp();
        p += if k % 2 == 1 { term } else { -term };
        if term < 1e-12 {
            break;
        }
    }
    (d, p.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn substreams_are_deterministic_and_distinct() {
        let a: u64 = substream(1, 5).random();
        let b: u64 = substream(1, 5).random();
        let c: u64 = substream(1, 6).random();
        let d: u64 = substream(2, 5).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn replicate_is_independent_of_worker_count() {
        let run = |w| {
            with_workers(w, || replicate(42, 1000, |r| r.random::<f64>())).unwrap()
        };
        let one = run(1);
        assert_eq!(one, run(2));
        assert_eq!(one, run(8));
    }

    #[test]
    fn estimate_of_constant_and_known_values() {
        let e = McEstimate::from_samples(&[2.0, 2.0, 2.0]);
        assert_eq!((e.value, e.stderr, e.reps), (2.0, 0.0, 3));
        assert_eq!(e.z_score(2.0), 0.0);
        let e = McEstimate::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert!((e.value - 2.5).abs() < 1e-15);
        assert!((e.stderr - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        let v = McEstimate::variance(&[1.0, 2.0, 3.0, 4.0]);
        assert!((v.value - 5.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn ks_separates_shifted_samples() {
        let xs = replicate(3, 2000, |r| r.random::<f64>());
        let ys = replicate(4, 2000, |r| r.random::<f64>());
        let zs = replicate(5, 2000, |r| r.random::<f64>() + 0.2);
        assert!(ks_two_sample(&xs, &ys).1 > 0.001);
        assert!(ks_two_sample(&xs, &zs).1 < 1e-10);
    }

    #[test]
    fn histogram_and_tv() {
        let h = histogram(&[0.0, 1.0, 1.0, 5.0], 3);
        assert_eq!(h, vec![0.25, 0.5, 0.0, 0.0]);
        assert!((tv_distance(&[0.5, 0.5], &[1.0, 0.0]) - 0.5).abs() < 1e-15);
    }
}
