//! Non-Gaussianity and non-classicality of single-mode states.
//!
//! The non-Gaussianity `delta` of a state is the entropy gap between the
//! Gaussian reference with matched first and second moments and the state
//! itself; it vanishes exactly on Gaussian states and is invariant under
//! Gaussian unitaries. The non-classicality witness `nu` is the most negative
//! Wigner value normalized so that the single-photon state scores 1.
//!
//! All entropies are in nats.

use nalgebra::{DMatrix, Matrix2, Vector2};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{annihilation_matrix, displace, rotate, squeeze, DensityMatrix};
use crate::linalg;

/// First moment and covariance of the quadratures `(x, p)`.
///
/// Under the crate convention the vacuum has `cov = diag(1/2, 1/2)` and any
/// physical covariance satisfies `det cov >= 1/4`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianSummary {
    pub mean: Vector2<f64>,
    pub cov: Matrix2<f64>,
}

impl GaussianSummary {
    /// Single-mode symplectic eigenvalue `√(det cov)`.
    pub fn symplectic_eigenvalue(&self) -> f64 {
        self.cov.determinant().max(0.0).sqrt()
    }

    pub fn is_physical(&self) -> bool {
        self.cov.determinant() >= 0.25 - 1e-9
    }
}

/// Quadrature matrices `x = (a+a†)/√2`, `p = (a−a†)/(i√2)` at truncation `dim`.
pub fn quadrature_ops(dim: usize) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let a = annihilation_matrix(dim);
    let adag = a.adjoint();
    let sqrt2_inv = std::f64::consts::FRAC_1_SQRT_2;
    let x = (&a + &adag).scale(sqrt2_inv);
    let minus_i = Complex64::new(0.0, -1.0);
    let p = (&a - &adag).map(|z| z * minus_i).scale(sqrt2_inv);
    (x, p)
}

fn expect(rho: &DensityMatrix, op: &DMatrix<Complex64>) -> f64 {
    // Tr[ρ A] = Σ_{m,n} ρ_mn A_nm
    let d = rho.dim();
    let mut acc = Complex64::ZERO;
    for m in 0..d {
        for n in 0..d {
            acc += rho.entry(m, n) * op[(n, m)];
        }
    }
    acc.re
}

/// First and second quadrature moments of a state, computed from the truncated
/// ladder matrices.
pub fn gaussian_summary(rho: &DensityMatrix) -> GaussianSummary {
    let (x, p) = quadrature_ops(rho.dim());
    let mx = expect(rho, &x);
    let mp = expect(rho, &p);
    let xx = expect(rho, &(&x * &x));
    let pp = expect(rho, &(&p * &p));
    let xp_sym = expect(rho, &((&x * &p + &p * &x).scale(0.5)));
    let cov = Matrix2::new(xx - mx * mx, xp_sym - mx * mp, xp_sym - mx * mp, pp - mp * mp);
    GaussianSummary {
        mean: Vector2::new(mx, mp),
        cov,
    }
}

/// Entropy of a single thermal mode with symplectic eigenvalue `nu`:
/// `g(ν) = (ν+½)ln(ν+½) − (ν−½)ln(ν−½)`.
fn thermal_entropy(nu: f64) -> f64 {
    let lo = nu - 0.5;
    if lo <= 1e-12 {
        return 0.0;
    }
    (nu + 0.5) * (nu + 0.5).ln() - lo * lo.ln()
}

/// Von Neumann entropy of the Gaussian reference state with the given
/// covariance (the mean is irrelevant: entropy is displacement invariant).
pub fn gaussian_entropy(summary: &GaussianSummary) -> Result<f64> {
    let det = summary.cov.determinant();
    if det < 0.25 - 1e-9 {
        return Err(Error::UnphysicalCovariance { det });
    }
    Ok(thermal_entropy(det.max(0.25).sqrt()))
}

/// `−Σ λ ln λ` over the eigenvalues of `rho`, in nats. Eigenvalues below the
/// floor `1e-14` contribute zero; anything below `−1e-8` is rejected.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let vals = rho.eigenvalues();
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -linalg::PSD_TOLERANCE {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: min,
        });
    }
    let s: f64 = vals
        .iter()
        .filter(|&&l| l > linalg::EIGENVALUE_FLOOR)
        .map(|&l| -l * l.ln())
        .sum();
    Ok(s.max(0.0))
}

/// Relative-entropy non-Gaussianity `δ[ϱ] = S(τ) − S(ϱ)`, where `τ` is the
/// Gaussian state with the same first and second moments as `ϱ`.
pub fn non_gaussianity(rho: &DensityMatrix) -> Result<f64> {
    let s_ref = gaussian_entropy(&gaussian_summary(rho))?;
    let s = von_neumann_entropy(rho)?;
    let delta = s_ref - s;
    if delta < -1e-8 {
        return Err(Error::NegativeNonGaussianity { delta });
    }
    if delta < 0.0 {
        log::warn!("non-Gaussianity {delta:e} clipped to 0 (eigenvalue noise near a pure state)");
        return Ok(0.0);
    }
    Ok(delta)
}

/// Materialize the Gaussian reference state with the given moments as a
/// truncated density matrix: thermal state, squeezed, rotated, displaced.
/// Only needed for testing; `delta` itself never builds `τ`.
pub fn materialize_gaussian(summary: &GaussianSummary, dim: usize) -> Result<DensityMatrix> {
    let det = summary.cov.determinant();
    if det < 0.25 - 1e-9 {
        return Err(Error::UnphysicalCovariance { det });
    }
    let nu = det.max(0.25).sqrt();
    let nbar = nu - 0.5;
    // cov/ν = R diag(e^{2u}, e^{-2u}) R^T with R a rotation
    let shape = summary.cov / nu;
    let se = shape.symmetric_eigen();
    let (i_max, i_min) = if se.eigenvalues[0] >= se.eigenvalues[1] {
        (0, 1)
    } else {
        (1, 0)
    };
    let lam_max = se.eigenvalues[i_max].max(1.0);
    let _ = i_min;
    let u = 0.5 * lam_max.ln();
    let v1 = se.eigenvectors.column(i_max);
    // squeeze(u) puts the large variance e^{2u} along p; the rotation by φ
    // maps that axis onto v1 (see the rotation Heisenberg action in `fock`).
    let phi = v1[0].atan2(v1[1]);
    let thermal = DensityMatrix::thermal(nbar, dim)?;
    let squeezed = squeeze(&thermal, Complex64::new(u, 0.0));
    let rotated = rotate(&squeezed, phi);
    let beta = Complex64::new(summary.mean.x, summary.mean.y) * std::f64::consts::FRAC_1_SQRT_2;
    Ok(displace(&rotated, beta))
}

/// Rectangular phase-space grid specification.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub step: f64,
}

impl GridSpec {
    /// Grid centered on the state's mean covering ±6 standard deviations on
    /// both axes, at the default step 0.05. Grid points land exactly on the
    /// mean so symmetric minima are hit exactly.
    pub fn auto(rho: &DensityMatrix) -> Self {
        Self::auto_with_step(rho, 0.05)
    }

    pub fn auto_with_step(rho: &DensityMatrix, step: f64) -> Self {
        let s = gaussian_summary(rho);
        let spread = s.cov[(0, 0)].max(s.cov[(1, 1)]).max(0.5).sqrt();
        let half = 6.0 * spread;
        let n = (half / step).ceil();
        Self {
            x_min: s.mean.x - n * step,
            x_max: s.mean.x + n * step,
            p_min: s.mean.y - n * step,
            p_max: s.mean.y + n * step,
            step,
        }
    }

    fn axis(min: f64, max: f64, step: f64) -> Vec<f64> {
        let n = ((max - min) / step + 0.5).floor() as usize;
        (0..=n).map(|j| min + j as f64 * step).collect()
    }

    pub fn xs(&self) -> Vec<f64> {
        Self::axis(self.x_min, self.x_max, self.step)
    }

    pub fn ps(&self) -> Vec<f64> {
        Self::axis(self.p_min, self.p_max, self.step)
    }
}

/// Wigner function sampled on a rectangular grid, row-major over x then p.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    pub spec: GridSpec,
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
    /// `values[ix][ip] = W(xs[ix], ps[ip])`
    pub values: Vec<Vec<f64>>,
}

impl WignerGrid {
    /// Riemann sum `Σ W·step²`; approximately 1 on a grid covering the state.
    pub fn riemann_sum(&self) -> f64 {
        let cell = self.spec.step * self.spec.step;
        self.values
            .iter()
            .map(|row| row.iter().sum::<f64>())
            .sum::<f64>()
            * cell
    }

    pub fn min_value(&self) -> (f64, usize, usize) {
        let mut best = (f64::INFINITY, 0, 0);
        for (ix, row) in self.values.iter().enumerate() {
            for (ip, &w) in row.iter().enumerate() {
                if w < best.0 {
                    best = (w, ix, ip);
                }
            }
        }
        best
    }
}

/// Wigner function at a phase-space point, from the closed-form Fock-basis
/// kernel: for `m ≥ n`
/// `⟨n|Ŵ|m⟩ = (1/π)(−1)^n √(n!/m!) (√2(x+ip))^{m−n} e^{−(x²+p²)} L_n^{m−n}(2(x²+p²))`,
/// normalized so that `∫∫ W dx dp = 1` and `W(0,0) = (−1)^n/π` for `|n⟩`.
pub fn wigner_eval(rho: &DensityMatrix, x: f64, p: f64) -> f64 {
    let d = rho.dim();
    let r2 = x * x + p * p;
    let envelope = (-r2).exp() / std::f64::consts::PI;
    let y = 2.0 * r2;
    let beta = Complex64::new(x, p) * std::f64::consts::SQRT_2;

    // beta^k for k = 0..d
    let mut beta_pow = Vec::with_capacity(d);
    let mut bp = Complex64::ONE;
    for _ in 0..d {
        beta_pow.push(bp);
        bp *= beta;
    }

    let mut total = 0.0f64;
    // k = m − n
    for k in 0..d {
        // generalized Laguerre L_n^k(y) by upward recurrence in n,
        // and the factor √(n!/(n+k)!) built alongside.
        let mut l_prev = 0.0f64;
        let mut l = 1.0f64; // L_0^k
        let mut fact_ratio = 1.0f64; // √(0!/k!)
        for j in 1..=k {
            fact_ratio /= (j as f64).sqrt();
        }
        let mut sign = 1.0f64; // (−1)^n
        let mut n = 0usize;
        loop {
            let m = n + k;
            if m >= d {
                break;
            }
            let kernel = sign * fact_ratio * l; // real prefactor of ⟨n|Ŵ|m⟩ / (envelope · beta^k)
            if k == 0 {
                total += rho.entry(n, n).re * kernel;
            } else {
                // ρ_mn ⟨n|Ŵ|m⟩ + c.c.
                total += 2.0 * (rho.entry(m, n) * beta_pow[k]).re * kernel;
            }
            // advance recurrences to n+1
            let np1 = (n + 1) as f64;
            let next = ((2.0 * n as f64 + 1.0 + k as f64 - y) * l - (n as f64 + k as f64) * l_prev)
                / np1;
            l_prev = l;
            l = next;
            fact_ratio *= (np1 / (np1 + k as f64)).sqrt();
            sign = -sign;
            n += 1;
        }
    }
    total * envelope
}

/// Evaluate the Wigner function over a grid (data-parallel over x rows).
pub fn wigner_grid(rho: &DensityMatrix, spec: &GridSpec) -> WignerGrid {
    let xs = spec.xs();
    let ps = spec.ps();
    let values: Vec<Vec<f64>> = xs
        .par_iter()
        .map(|&x| ps.iter().map(|&p| wigner_eval(rho, x, p)).collect())
        .collect();
    WignerGrid {
        spec: *spec,
        xs,
        ps,
        values,
    }
}

/// Non-classicality witness `ν[ϱ] = min W / min W_1 = −π·min W`.
///
/// The minimum is located on the coarse grid and then refined once around the
/// grid minimum at a tenth of the step. `ν > 0` witnesses non-classicality;
/// the single-photon state scores exactly 1.
pub fn non_classicality(rho: &DensityMatrix, spec: &GridSpec) -> Result<f64> {
    if spec.step <= 0.0 || spec.step > 0.05 + 1e-12 {
        return Err(Error::InvalidGrid {
            reason: format!("step {} outside (0, 0.05]", spec.step),
        });
    }
    let s = gaussian_summary(rho);
    let (sx, sp) = (s.cov[(0, 0)].sqrt(), s.cov[(1, 1)].sqrt());
    let slack = 1e-9;
    if spec.x_min > s.mean.x - 6.0 * sx + slack
        || spec.x_max < s.mean.x + 6.0 * sx - slack
        || spec.p_min > s.mean.y - 6.0 * sp + slack
        || spec.p_max < s.mean.y + 6.0 * sp - slack
    {
        return Err(Error::InvalidGrid {
            reason: "grid must cover the state's mean ± 6 standard deviations".into(),
        });
    }

    let grid = wigner_grid(rho, spec);
    let (mut w_min, ix, ip) = grid.min_value();
    let (x0, p0) = (grid.xs[ix], grid.ps[ip]);

    // one refinement pass: ± one coarse step around the minimum, step/10
    let fine = spec.step / 10.0;
    let refined = (-10..=10i32)
        .into_par_iter()
        .map(|dx| {
            let x = x0 + dx as f64 * fine;
            let mut local = f64::INFINITY;
            for dp in -10..=10i32 {
                let p = p0 + dp as f64 * fine;
                local = local.min(wigner_eval(rho, x, p));
            }
            local
        })
        .reduce(|| f64::INFINITY, f64::min);
    w_min = w_min.min(refined);

    Ok(-std::f64::consts::PI * w_min)
}
