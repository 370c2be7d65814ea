//! The generalized counting process itself.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp, Poisson, StandardNormal};

use crate::error::ensure;
use crate::specfun::{ln_factorial, log_sum_exp};
use crate::{Error, Result};

/// Jump rates `λ_1..λ_k` of a GCP together with `Λ`, `c₁`, `c₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct GcpParams {
    rates: Vec<f64>,
    lambda: f64,
    c1: f64,
    c2: f64,
}

impl GcpParams {
    /// Zero rates are allowed and simply switch that jump size off.
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        ensure(!rates.is_empty(), || "at least one jump rate is required".into())?;
        ensure(rates.iter().all(|r| r.is_finite() && *r >= 0.0), || {
            format!("jump rates must be finite and non-negative, got {rates:?}")
        })?;
        let lambda: f64 = rates.iter().sum();
        ensure(lambda > 0.0, || "total jump rate must be positive".into())?;
        let c1 = rates.iter().enumerate().map(|(i, l)| (i + 1) as f64 * l).sum();
        let c2 = rates.iter().enumerate().map(|(i, l)| ((i + 1) * (i + 1)) as f64 * l).sum();
        Ok(Self { rates, lambda, c1, c2 })
    }

    pub fn k(&self) -> usize {
        self.rates.len()
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    /// `Λ = Σ λ_j`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `c₁ = Σ j λ_j`.
    pub fn c1(&self) -> f64 {
        self.c1
    }

    /// `c₂ = Σ j² λ_j`.
    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// `Σ λ_j (1 − u^j)`, the exponent of the pgf per unit time.
    pub fn psi(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        let mut pow = 1.0;
        for &l in &self.rates {
            pow *= u;
            acc += l * (1.0 - pow);
        }
        acc
    }

    pub fn psi_complex(&self, u: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        for &l in &self.rates {
            pow *= u;
            acc += l * (1.0 - pow);
        }
        acc
    }

    /// `Σ λ_j (1 − e^{−sj})`, the Laplace exponent of `M`.
    pub fn psi_laplace(&self, s: f64) -> f64 {
        self.rates
            .iter()
            .enumerate()
            .map(|(i, l)| l * -f64::exp_m1(-s * (i + 1) as f64))
            .sum()
    }
}

/// One solution of `x₁ + 2x₂ + … + kx_k = n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    pub x: Vec<u64>,
    /// `z_k = Σ x_j`.
    pub weight: u64,
}

impl Composition {
    /// `ln Π λ_j^{x_j} / x_j!`, `−∞` when a used jump size has rate zero.
    pub fn ln_rate_weight(&self, p: &GcpParams) -> f64 {
        let mut acc = 0.0;
        for (x, &l) in self.x.iter().zip(p.rates()) {
            if *x > 0 {
                if l == 0.0 {
                    return f64::NEG_INFINITY;
                }
                acc += *x as f64 * l.ln() - ln_factorial(*x);
            }
        }
        acc
    }
}

/// Largest `|Ω(k, n)|` that [`enumerate_omega`] will materialize.
pub const OMEGA_CAP: usize = 10_000_000;

type OmegaCache = Mutex<HashMap<(usize, u64), Arc<Vec<Composition>>>>;
static OMEGA_CACHE: LazyLock<OmegaCache> = LazyLock::new(|| Mutex::new(HashMap::new()));

fn omega_fill(
    j: usize,
    remaining: u64,
    x: &mut Vec<u64>,
    out: &mut Vec<Composition>,
) -> Result<()> {
    if j == 1 {
        x[0] = remaining;
        let weight = x.iter().sum();
        if out.len() >= OMEGA_CAP {
            return Err(Error::CapExceeded { cap: OMEGA_CAP, partial: out.len() });
        }
        out.push(Composition { x: x.clone(), weight });
        return Ok(());
    }
    let jj = j as u64;
    for xj in 0..=remaining / jj {
        x[j - 1] = xj;
        omega_fill(j - 1, remaining - xj * jj, x, out)?;
    }
    x[j - 1] = 0;
    Ok(())
}

/// All `x ∈ ℕ₀^k` with `Σ j·x_j = n`.
///
/// Ordered lexicographically on `(x_k, …, x_1)`; results are memoized.
pub fn enumerate_omega(k: usize, n: u64) -> Result<Arc<Vec<Composition>>> {
    ensure(k >= 1, || "k must be at least 1".into())?;
    if let Some(hit) = OMEGA_CACHE.lock().unwrap().get(&(k, n)) {
        return Ok(hit.clone());
    }
    let mut out = Vec::new();
    omega_fill(k, n, &mut vec![0; k], &mut out)?;
    let out = Arc::new(out);
    OMEGA_CACHE.lock().unwrap().insert((k, n), out.clone());
    Ok(out)
}

/// `ln W(n, z)` where `W(n, z) = Σ_{x ∈ Ω(k,n), Σx = z} Π λ_j^{x_j}/x_j!`.
///
/// Every closed-form pmf in this crate is `Σ_z W(n, z) F(z)` for a clock
/// functional `F`. The table is filled by `z W(n,z) = Σ_j λ_j W(n−j, z−1)`,
/// which follows from `Σ W(n,z) uⁿ w^z = exp(w Σ λ_j u^j)`.
#[derive(Debug, Clone)]
pub struct OmegaTable {
    ln_w: Vec<Vec<f64>>,
}

impl OmegaTable {
    pub fn new(p: &GcpParams, n_max: u64) -> Self {
        let n_max = n_max as usize;
        let ln_rates: Vec<f64> = p.rates().iter().map(|l| l.ln()).collect();
        let mut ln_w: Vec<Vec<f64>> = Vec::with_capacity(n_max + 1);
        ln_w.push(vec![0.0]);
        for n in 1..=n_max {
            let mut row = vec![f64::NEG_INFINITY; n + 1];
            for (z, cell) in row.iter_mut().enumerate().skip(1) {
                let terms = ln_rates.iter().enumerate().filter_map(|(i, lr)| {
                    let j = i + 1;
                    if j > n || *lr == f64::NEG_INFINITY {
                        return None;
                    }
                    let prev = ln_w[n - j].get(z - 1).copied().unwrap_or(f64::NEG_INFINITY);
                    (prev > f64::NEG_INFINITY).then_some(lr + prev)
                });
                let s = log_sum_exp(terms);
                if s > f64::NEG_INFINITY {
                    *cell = s - (z as f64).ln();
                }
            }
            ln_w.push(row);
        }
        Self { ln_w }
    }

    pub fn n_max(&self) -> u64 {
        (self.ln_w.len() - 1) as u64
    }

    /// `(z, ln W(n, z))` over the weights that actually occur.
    pub fn weights(&self, n: u64) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.ln_w[n as usize]
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > f64::NEG_INFINITY)
            .map(|(z, w)| (z as u64, *w))
    }

    /// `Σ_z W(n, z) exp(ln_f(z))`.
    pub fn sum_ln<F: FnMut(u64) -> Result<f64>>(&self, n: u64, mut ln_f: F) -> Result<f64> {
        if n > self.n_max() {
            return Err(Error::domain(format!("n = {n} exceeds table size {}", self.n_max())));
        }
        let mut terms = Vec::new();
        for (z, w) in self.weights(n) {
            terms.push(w + ln_f(z)?);
        }
        let s = log_sum_exp(terms);
        Ok(if s == f64::NEG_INFINITY { 0.0 } else { s.exp() })
    }
}

/// `P{M(t) = n}`, summed over `Ω(k, n)` exactly as enumerated.
pub fn gcp_pmf(p: &GcpParams, n: u64, t: f64) -> Result<f64> {
    ensure(t >= 0.0, || format!("time must be non-negative, got {t}"))?;
    if t == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let omega = enumerate_omega(p.k(), n)?;
    let ln_t = t.ln();
    let terms = omega
        .iter()
        .map(|c| c.ln_rate_weight(p) + c.weight as f64 * ln_t - p.lambda() * t);
    let s = log_sum_exp(terms);
    Ok(if s == f64::NEG_INFINITY { 0.0 } else { s.exp() })
}

/// `P{M(t) = n}` for `n = 0..=n_max` via the weight table.
pub fn gcp_pmf_vec(p: &GcpParams, n_max: u64, t: f64) -> Result<Vec<f64>> {
    ensure(t >= 0.0, || format!("time must be non-negative, got {t}"))?;
    if t == 0.0 {
        let mut v = vec![0.0; n_max as usize + 1];
        v[0] = 1.0;
        return Ok(v);
    }
    let table = OmegaTable::new(p, n_max);
    let ln_t = t.ln();
    (0..=n_max)
        .map(|n| table.sum_ln(n, |z| Ok(z as f64 * ln_t - p.lambda() * t)))
        .collect()
}

/// `E u^{M(t)} = exp(−t Σ λ_j (1 − u^j))`, `|u| ≤ 1`.
pub fn gcp_pgf(p: &GcpParams, u: f64, t: f64) -> Result<f64> {
    ensure(u.abs() <= 1.0, || format!("pgf argument must satisfy |u| <= 1, got {u}"))?;
    ensure(t >= 0.0, || format!("time must be non-negative, got {t}"))?;
    Ok((-t * p.psi(u)).exp())
}

/// `E e^{u M(t)}` for `u ≤ 0`.
pub fn gcp_mgf(p: &GcpParams, u: f64, t: f64) -> Result<f64> {
    ensure(u <= 0.0, || format!("mgf is exposed for u <= 0 only, got {u}"))?;
    ensure(t >= 0.0, || format!("time must be non-negative, got {t}"))?;
    Ok((-t * p.psi_laplace(-u)).exp())
}

/// First two moments and the covariance at two times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub var: f64,
    pub cov: f64,
}

/// Mean and variance at a single time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanVar {
    pub mean: f64,
    pub var: f64,
}

/// `E M(t) = c₁t`, `Var M(t) = c₂t`, `Cov(M(s), M(t)) = c₂s`.
pub fn gcp_moments(p: &GcpParams, s: f64, t: f64) -> Result<Moments> {
    ensure(s >= 0.0, || format!("time must be non-negative, got {s}"))?;
    if s > t {
        return Err(Error::Order { s, t });
    }
    Ok(Moments { mean: p.c1() * t, var: p.c2() * t, cov: p.c2() * s })
}

/// Central-difference residual of the Kolmogorov forward equations.
pub fn gcp_ode_residual(p: &GcpParams, n: u64, t: f64, h: f64) -> Result<f64> {
    ensure(h > 0.0 && t > h, || format!("need t > h > 0, got t = {t}, h = {h}"))?;
    let dp = (gcp_pmf(p, n, t + h)? - gcp_pmf(p, n, t - h)?) / (2.0 * h);
    let mut rhs = -p.lambda() * gcp_pmf(p, n, t)?;
    for (i, &l) in p.rates().iter().enumerate() {
        let j = (i + 1) as u64;
        if j > n {
            break;
        }
        rhs += l * gcp_pmf(p, n - j, t)?;
    }
    Ok(dp - rhs)
}

/// Smallest `N` with `P{M(t) > N} ≤ tol`, using `M(t) ≤ k·J`, `J ~ Poisson(Λt)`.
pub fn gcp_truncation(p: &GcpParams, t: f64, tol: f64) -> u64 {
    let mu = p.lambda() * t;
    if mu == 0.0 {
        return 0;
    }
    // walk the Poisson cdf in log space
    let mut ln_term = -mu;
    let mut cdf = ln_term.exp();
    let mut q = 0u64;
    while 1.0 - cdf > tol && q < 10_000_000 {
        q += 1;
        ln_term += mu.ln() - (q as f64).ln();
        cdf += ln_term.exp();
        if q as f64 > mu && ln_term.exp() < tol * 1e-3 {
            break;
        }
    }
    p.k() as u64 * q
}

/// A piecewise-constant integer path: jumps of `sizes[i]` at `epochs[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepPath {
    epochs: Vec<f64>,
    sizes: Vec<u64>,
    horizon: f64,
}

impl StepPath {
    pub fn new(epochs: Vec<f64>, sizes: Vec<u64>, horizon: f64) -> Result<Self> {
        ensure(epochs.len() == sizes.len(), || "epochs and sizes differ in length".into())?;
        ensure(horizon >= 0.0, || format!("horizon must be non-negative, got {horizon}"))?;
        ensure(epochs.windows(2).all(|w| w[0] < w[1]), || "epochs must strictly increase".into())?;
        ensure(epochs.iter().all(|e| (0.0..=horizon).contains(e)), || {
            "epochs must lie in [0, horizon]".into()
        })?;
        ensure(sizes.iter().all(|s| *s >= 1), || "jump sizes must be at least 1".into())?;
        Ok(Self { epochs, sizes, horizon })
    }

    pub fn epochs(&self) -> &[f64] {
        &self.epochs
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Sum of the jumps at epochs `≤ s`.
    pub fn value_at(&self, s: f64) -> u64 {
        let idx = self.epochs.partition_point(|e| *e <= s);
        self.sizes[..idx].iter().sum()
    }

    pub fn final_value(&self) -> u64 {
        self.sizes.iter().sum()
    }
}

/// Superposes `k` Poisson streams on `[0, horizon]`; stream `j` jumps by `j`.
pub fn simulate_gcp<R: Rng + ?Sized>(p: &GcpParams, horizon: f64, rng: &mut R) -> Result<StepPath> {
    ensure(horizon > 0.0, || format!("horizon must be positive, got {horizon}"))?;
    let exp = Exp::new(p.lambda()).map_err(|e| Error::domain(e.to_string()))?;
    let mut epochs = Vec::new();
    let mut sizes = Vec::new();
    let mut clock = 0.0;
    loop {
        clock += exp.sample(rng);
        if clock > horizon {
            break;
        }
        // pick the jump size with probability λ_j / Λ
        let mut u = rng.random::<f64>() * p.lambda();
        let mut size = p.k();
        for (i, &l) in p.rates().iter().enumerate() {
            if u < l {
                size = i + 1;
                break;
            }
            u -= l;
        }
        if p.rates()[size - 1] == 0.0 {
            // rounding landed on a switched-off size; take the last live one
            size = p.rates().iter().rposition(|l| *l > 0.0).unwrap() + 1;
        }
        if epochs.last() == Some(&clock) {
            *sizes.last_mut().unwrap() += size as u64;
        } else {
            epochs.push(clock);
            sizes.push(size as u64);
        }
    }
    StepPath::new(epochs, sizes, horizon)
}

/// Poisson draw that stays usable for astronomically large means.
pub fn sample_poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> f64 {
    if mean <= 0.0 {
        0.0
    } else if mean < 1e12 {
        Poisson::new(mean).unwrap().sample(rng)
    } else {
        // relative fluctuation below 1e-6: the normal limit is indistinguishable
        let z: f64 = StandardNormal.sample(rng);
        (mean + mean.sqrt() * z).round().max(0.0)
    }
}

/// `M(s)` at a single time, drawn as `Σ_j j·Poisson(λ_j s)`.
pub fn sample_gcp_value<R: Rng + ?Sized>(p: &GcpParams, s: f64, rng: &mut R) -> f64 {
    p.rates()
        .iter()
        .enumerate()
        .filter(|(_, l)| **l > 0.0)
        .map(|(i, l)| (i + 1) as f64 * sample_poisson(l * s, rng))
        .sum()
}
