//! Synthetic homodyne sampling and iterative maximum-likelihood
//! reconstruction, closing the simulate → measure → reconstruct loop.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::DensityMatrix;
use crate::measures::gaussian_summary;

/// Samples are generated in independent chunks of this many draws; chunk `k`
/// of a run with seed `s` uses an RNG seeded with `splitmix64(s, k)`. This is
/// the stream-splitting rule that makes parallel sampling deterministic.
const SAMPLE_CHUNK: usize = 65_536;

/// Phase-tagged homodyne samples with binning metadata.
///
/// Bin `b` of `B` measures the rotated quadrature at phase `b·π/B`; phases at
/// `θ` and `θ+π` are mirror-equivalent, so `[0, π)` covers everything.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureDataset {
    samples: Vec<(usize, f64)>,
    n_bins: usize,
    phases: Vec<f64>,
}

impl QuadratureDataset {
    pub fn new(samples: Vec<(usize, f64)>, n_bins: usize) -> Result<Self> {
        if n_bins == 0 {
            return Err(Error::InvalidParameter {
                name: "n_bins",
                value: 0.0,
                expected: "at least one phase bin",
            });
        }
        if let Some(&(b, _)) = samples.iter().find(|(b, _)| *b >= n_bins) {
            return Err(Error::Parse(format!(
                "sample phase bin {b} out of range (n_bins = {n_bins})"
            )));
        }
        let phases = (0..n_bins)
            .map(|b| b as f64 * std::f64::consts::PI / n_bins as f64)
            .collect();
        Ok(Self {
            samples,
            n_bins,
            phases,
        })
    }

    pub fn samples(&self) -> &[(usize, f64)] {
        &self.samples
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Reconstruction settings.
#[derive(Debug, Clone, Copy)]
pub struct TomoConfig {
    /// Truncation of the reconstructed density matrix.
    pub dim: usize,
    /// Quadrature discretization range for the measurement projectors.
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub max_iters: usize,
    /// Stop when the per-sample log-likelihood improves by less than this.
    pub log_lik_tol: f64,
}

impl TomoConfig {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            x_min: -6.0,
            x_max: 6.0,
            n_points: 400,
            max_iters: 2000,
            log_lik_tol: 1e-10,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidDimension { dim: self.dim });
        }
        if self.n_points < 100 {
            return Err(Error::InvalidParameter {
                name: "n_points",
                value: self.n_points as f64,
                expected: "at least 100 grid points",
            });
        }
        if self.max_iters < 1 {
            return Err(Error::InvalidParameter {
                name: "max_iters",
                value: self.max_iters as f64,
                expected: "at least one iteration",
            });
        }
        if !(self.x_min < self.x_max) {
            return Err(Error::InvalidParameter {
                name: "x_grid",
                value: self.x_min,
                expected: "x_min < x_max",
            });
        }
        Ok(())
    }
}

/// Oscillator eigenfunctions `ψ_0..ψ_{n−1}` at `x`, by the stable upward
/// recurrence. Under the crate convention `|ψ_0(x)|² = e^{−x²}/√π`.
pub fn hermite_functions(x: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let psi0 = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
    out.push(psi0);
    if n == 1 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * psi0);
    for k in 1..n - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Quadrature-eigenstate column `v_n = ψ_n(x)·e^{iθn}`; the homodyne
/// probability density is `v† ϱ v`.
fn projector_vector(theta: f64, x: f64, dim: usize) -> DVector<Complex64> {
    let psi = hermite_functions(x, dim);
    DVector::from_iterator(
        dim,
        psi.iter()
            .enumerate()
            .map(|(n, &y)| Complex64::from_polar(y, theta * n as f64)),
    )
}

/// Marginal distribution of the rotated quadrature `x_θ`:
/// `p_θ(x) = Σ_{m,n} ϱ_mn ψ_m(x) ψ_n(x) e^{i(n−m)θ}`, clipped at zero.
pub fn homodyne_pdf(rho: &DensityMatrix, theta: f64, x: f64) -> f64 {
    let v = projector_vector(theta, x, rho.dim());
    let p = (v.adjoint() * rho.matrix() * &v)[(0, 0)].re;
    if p < -1e-12 {
        log::warn!("homodyne pdf {p:e} clipped to zero at theta={theta}, x={x}");
    }
    p.max(0.0)
}

fn splitmix64(seed: u64, k: u64) -> u64 {
    let mut z = seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Tabulated inverse-CDF sampler for one phase bin.
struct BinSampler {
    x0: f64,
    h: f64,
    cdf: Vec<f64>,
}

impl BinSampler {
    fn build(rho: &DensityMatrix, theta: f64, x_lo: f64, x_hi: f64, n_tab: usize) -> Self {
        let h = (x_hi - x_lo) / (n_tab - 1) as f64;
        let pdf: Vec<f64> = (0..n_tab)
            .map(|j| homodyne_pdf(rho, theta, x_lo + j as f64 * h))
            .collect();
        let mut cdf = Vec::with_capacity(n_tab);
        cdf.push(0.0);
        for j in 1..n_tab {
            let step = 0.5 * (pdf[j - 1] + pdf[j]) * h;
            cdf.push(cdf[j - 1] + step);
        }
        let total = *cdf.last().unwrap();
        if total < 0.999 {
            log::warn!(
                "homodyne tabulation at theta={theta} captures only {total:.6} of the mass"
            );
        }
        for c in &mut cdf {
            *c /= total;
        }
        Self { x0: x_lo, h, cdf }
    }

    fn invert(&self, u: f64) -> f64 {
        let j = match self
            .cdf
            .binary_search_by(|c| c.partial_cmp(&u).unwrap())
        {
            Ok(j) => j,
            Err(j) => j.saturating_sub(1),
        };
        let j = j.min(self.cdf.len() - 2);
        let span = self.cdf[j + 1] - self.cdf[j];
        let frac = if span > 0.0 { (u - self.cdf[j]) / span } else { 0.0 };
        self.x0 + (j as f64 + frac) * self.h
    }
}

/// Draw i.i.d. homodyne samples from a state: the phase bin uniform over the
/// `n_bins` phases, the quadrature by inverse-CDF on a dense tabulation of
/// [`homodyne_pdf`]. Deterministic given the seed (see [`SAMPLE_CHUNK`] for
/// the parallel stream-splitting rule).
pub fn sample_quadratures(
    rho: &DensityMatrix,
    n_samples: usize,
    n_bins: usize,
    seed: u64,
) -> Result<QuadratureDataset> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            value: 0.0,
            expected: "at least one sample",
        });
    }
    if n_bins == 0 {
        return Err(Error::InvalidParameter {
            name: "n_bins",
            value: 0.0,
            expected: "at least one phase bin",
        });
    }

    let summary = gaussian_summary(rho);
    let reach = summary.mean.norm() + 8.0 * summary.cov[(0, 0)].max(summary.cov[(1, 1)]).sqrt();
    let n_tab = 4001;
    let phases: Vec<f64> = (0..n_bins)
        .map(|b| b as f64 * std::f64::consts::PI / n_bins as f64)
        .collect();
    let samplers: Vec<BinSampler> = phases
        .par_iter()
        .map(|&theta| BinSampler::build(rho, theta, -reach, reach, n_tab))
        .collect();

    let n_chunks = n_samples.div_ceil(SAMPLE_CHUNK);
    let samples: Vec<(usize, f64)> = (0..n_chunks)
        .into_par_iter()
        .flat_map_iter(|chunk| {
            let start = chunk * SAMPLE_CHUNK;
            let len = SAMPLE_CHUNK.min(n_samples - start);
            let mut rng = ChaCha12Rng::seed_from_u64(splitmix64(seed, chunk as u64));
            (0..len)
                .map(|_| {
                    let b = rng.random_range(0..n_bins);
                    let u: f64 = rng.random();
                    (b, samplers[b].invert(u))
                })
                .collect::<Vec<_>>()
        })
        .collect();

    QuadratureDataset::new(samples, n_bins)
}

/// Per-iteration record of a reconstruction run.
#[derive(Debug, Clone)]
pub struct ReconstructionLog {
    /// Per-sample average log-likelihood after each iteration.
    pub log_likelihood: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Iterative maximum-likelihood reconstruction (the RρR fixed point).
///
/// Binned quadrature projectors are discretized on the config's x grid;
/// each iteration applies `ϱ ← N[R ϱ R]` with
/// `R = Σ_j (f_j / p_j(ϱ)) Π_j` over the occupied cells. Stops when the
/// per-sample log-likelihood improves by less than `log_lik_tol` or after
/// `max_iters` iterations.
pub fn maxlik_reconstruct(
    data: &QuadratureDataset,
    config: &TomoConfig,
) -> Result<(DensityMatrix, ReconstructionLog)> {
    config.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let d = config.dim;
    let h = (config.x_max - config.x_min) / config.n_points as f64;

    // histogram samples into (bin, cell) counts
    let mut counts = vec![0u64; data.n_bins() * config.n_points];
    let mut kept = 0u64;
    let mut dropped = 0u64;
    for &(b, x) in data.samples() {
        let j = ((x - config.x_min) / h).floor();
        if j < 0.0 || j >= config.n_points as f64 {
            dropped += 1;
            continue;
        }
        counts[b * config.n_points + j as usize] += 1;
        kept += 1;
    }
    if dropped > 0 {
        log::warn!("{dropped} samples fell outside the reconstruction grid and were dropped");
    }
    if kept == 0 {
        return Err(Error::IllConditioned {
            detail: "all samples fall outside the reconstruction grid".into(),
        });
    }
    let n_total = kept as f64;

    // occupied cells only: the R sum has no contribution from empty cells
    struct Cell {
        v: DVector<Complex64>,
        f: f64,
    }
    let cells: Vec<Cell> = counts
        .par_iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(idx, &c)| {
            let b = idx / config.n_points;
            let j = idx % config.n_points;
            let x = config.x_min + (j as f64 + 0.5) * h;
            Cell {
                v: projector_vector(data.phases()[b], x, d),
                f: c as f64,
            }
        })
        .collect();

    // probability normalization per cell: p_cell ≈ p_θ(x)·h/B
    let log_norm = (h / data.n_bins() as f64).ln();
    let mut rho = DMatrix::<Complex64>::identity(d, d).scale(1.0 / d as f64);
    let mut log_likelihood = Vec::new();
    let mut converged = false;

    for _ in 0..config.max_iters {
        // p_j and the likelihood under the current iterate
        let probs: Vec<f64> = cells
            .par_iter()
            .map(|cell| (cell.v.adjoint() * &rho * &cell.v)[(0, 0)].re)
            .collect();
        if let Some((j, _)) = probs
            .iter()
            .enumerate()
            .find(|(_, &p)| !(p > 1e-280))
        {
            return Err(Error::IllConditioned {
                detail: format!(
                    "cell {} has zero predicted probability but {} observed counts",
                    j, cells[j].f
                ),
            });
        }
        let ll = cells
            .iter()
            .zip(&probs)
            .map(|(cell, &p)| cell.f * (p.ln() + log_norm))
            .sum::<f64>()
            / n_total;
        let improved = log_likelihood
            .last()
            .map(|&prev| ll - prev)
            .unwrap_or(f64::INFINITY);
        log_likelihood.push(ll);
        if improved.abs() < config.log_lik_tol {
            converged = true;
            break;
        }

        // R = Σ_j (f_j/p_j) |v_j⟩⟨v_j| (global scale is irrelevant)
        let r_op = cells
            .par_iter()
            .zip(&probs)
            .fold(
                || DMatrix::<Complex64>::zeros(d, d),
                |mut acc, (cell, &p)| {
                    let w = Complex64::new(cell.f / (p * n_total), 0.0);
                    // rank-one update acc += w·v v†
                    for m in 0..d {
                        let vm = cell.v[m] * w;
                        for n in 0..d {
                            acc[(m, n)] += vm * cell.v[n].conj();
                        }
                    }
                    acc
                },
            )
            .reduce(|| DMatrix::<Complex64>::zeros(d, d), |a, b| a + b);

        rho = &r_op * &rho * &r_op;
        rho = (&rho + rho.adjoint()).scale(0.5);
        let tr: f64 = rho.diagonal().iter().map(|c| c.re).sum();
        rho.scale_mut(1.0 / tr);
    }

    let iterations = log_likelihood.len();
    let rho = DensityMatrix::from_matrix(rho)?.hermitize();
    let (rho, _) = rho.normalize()?;
    Ok((
        rho,
        ReconstructionLog {
            log_likelihood,
            iterations,
            converged,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_state, fidelity};
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn vacuum_marginal_is_gaussian() {
        let vac = DensityMatrix::vacuum(10).unwrap();
        for theta in [0.0, 0.7, 2.2] {
            for x in [-1.5, -0.3, 0.0, 0.8, 2.0] {
                let expect = (-x * x as f64).exp() / std::f64::consts::PI.sqrt();
                assert_abs_diff_eq!(homodyne_pdf(&vac, theta, x), expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn single_photon_marginal() {
        let one = DensityMatrix::fock(1, 10).unwrap();
        for x in [-2.0, -0.5, 0.0, 0.5, 1.2] {
            let expect = 2.0 * x * x * (-x * x as f64).exp() / std::f64::consts::PI.sqrt();
            assert_abs_diff_eq!(homodyne_pdf(&one, 1.3, x), expect, epsilon = 1e-12);
        }
        assert_eq!(homodyne_pdf(&one, 0.0, 0.0), 0.0);
    }

    #[test]
    fn coherent_marginal_is_displaced_gaussian() {
        let (s, _) = coherent_state(c(1.0), 20).unwrap();
        let rho = DensityMatrix::from_pure(&s).unwrap();
        let mu = std::f64::consts::SQRT_2;
        for x in [0.0, 1.0, mu, 2.5] {
            let expect = (-(x - mu) * (x - mu)).exp() / std::f64::consts::PI.sqrt();
            assert_abs_diff_eq!(homodyne_pdf(&rho, 0.0, x), expect, epsilon = 1e-9);
        }
    }

    #[test]
    fn pdf_normalizes() {
        let (s, _) = coherent_state(c(0.9), 20).unwrap();
        let rho = DensityMatrix::from_pure(&s).unwrap();
        let (lo, hi, n) = (-8.0, 8.0, 3201);
        let h = (hi - lo) / (n - 1) as f64;
        let sum: f64 = (0..n)
            .map(|j| {
                let x = lo + j as f64 * h;
                let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                w * homodyne_pdf(&rho, 0.4, x)
            })
            .sum::<f64>()
            * h;
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn sampling_is_deterministic() {
        let rho = DensityMatrix::vacuum(8).unwrap();
        let a = sample_quadratures(&rho, 5000, 12, 42).unwrap();
        let b = sample_quadratures(&rho, 5000, 12, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_quadratures(&rho, 5000, 12, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn vacuum_sample_variance() {
        let rho = DensityMatrix::vacuum(8).unwrap();
        let data = sample_quadratures(&rho, 100_000, 12, 7).unwrap();
        let xs: Vec<f64> = data.samples().iter().map(|&(_, x)| x).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
        assert_abs_diff_eq!(var, 0.5, epsilon = 0.01);
    }

    #[test]
    fn single_photon_samples_avoid_origin() {
        let one = DensityMatrix::fock(1, 8).unwrap();
        let data = sample_quadratures(&one, 100_000, 12, 11).unwrap();
        let near_zero = data
            .samples()
            .iter()
            .filter(|&&(_, x)| x.abs() < 0.1)
            .count();
        assert!(
            (near_zero as f64) < 0.004 * data.len() as f64,
            "{near_zero} samples near the node"
        );
    }

    #[test]
    fn reconstruct_single_photon() {
        let one = DensityMatrix::fock(1, 10).unwrap();
        let data = sample_quadratures(&one, 200_000, 12, 3).unwrap();
        let (rho, log) = maxlik_reconstruct(&data, &TomoConfig::new(10)).unwrap();
        let f = fidelity(&rho, &one).unwrap();
        assert!(f >= 0.99, "fidelity {f} after {} iterations", log.iterations);
        rho.validate().unwrap();
    }

    #[test]
    fn likelihood_monotone_on_single_bin_toy_data() {
        let samples: Vec<(usize, f64)> = (0..200)
            .map(|k| (0usize, -1.0 + 2.0 * (k as f64 + 0.5) / 200.0))
            .collect();
        let data = QuadratureDataset::new(samples, 1).unwrap();
        let mut config = TomoConfig::new(4);
        config.max_iters = 200;
        let (_, log) = maxlik_reconstruct(&data, &config).unwrap();
        for w in log.log_likelihood.windows(2) {
            assert!(
                w[1] >= w[0] - 1e-9 * (1.0 + w[0].abs()),
                "likelihood dropped: {} -> {}",
                w[0],
                w[1]
            );
        }
    }

    #[test]
    fn empty_dataset_rejected() {
        let data = QuadratureDataset::new(vec![], 12).unwrap();
        assert!(matches!(
            maxlik_reconstruct(&data, &TomoConfig::new(6)),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn bad_config_rejected() {
        let data = QuadratureDataset::new(vec![(0, 0.1)], 1).unwrap();
        let mut config = TomoConfig::new(6);
        config.n_points = 10;
        assert!(maxlik_reconstruct(&data, &config).is_err());
    }
}
