//! Truncated-Fock-space state representations and the channel toolbox:
//! ladder operators, multimode tensor algebra, two-mode squeezing, partial
//! trace, photon loss, mixing and fidelity.
//!
//! Quadrature convention (fixed once, used everywhere in this crate):
//! `x = (a + a†)/√2`, `p = (a − a†)/(i√2)`, `ħ = 1`, vacuum variance `1/2`.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;

/// Default tolerated population of the top Fock level. Exceeding it is a
/// reportable warning, not a hard error.
pub const DEFAULT_TAIL_TOL: f64 = 1e-6;

/// Identifier of one optical mode in the four-mode pipeline.
///
/// `Signal`/`Idler` carry the physical interaction of interest;
/// `SignalParasite`/`IdlerParasite` are the mismatched modes populated by
/// parasitic amplification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeLabel {
    Signal,
    Idler,
    SignalParasite,
    IdlerParasite,
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModeLabel::Signal => "signal",
            ModeLabel::Idler => "idler",
            ModeLabel::SignalParasite => "signal-parasite",
            ModeLabel::IdlerParasite => "idler-parasite",
        };
        f.write_str(s)
    }
}

/// An unordered pair of distinct modes targeted by a two-mode operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModePair {
    pub first: ModeLabel,
    pub second: ModeLabel,
}

impl ModePair {
    pub fn new(first: ModeLabel, second: ModeLabel) -> Result<Self> {
        if first == second {
            return Err(Error::InvalidParameter {
                name: "mode pair",
                value: f64::NAN,
                expected: "two distinct mode labels",
            });
        }
        Ok(Self { first, second })
    }
}

/// Pure state over a tensor product of truncated Fock spaces (1 to 4 modes).
///
/// Amplitude layout is row-major over the mode order: the flat index of the
/// occupation tuple `(n_0, n_1, ..)` is `n_0·(d_1·d_2·..) + n_1·(d_2·..) + ..`,
/// i.e. `stride_k = Π_{j>k} d_j`.
///
/// Sub-normalized states are first class: conditioning produces them, and
/// [`MultiModeState::normalize`] reports the captured norm (the relative event
/// probability).
#[derive(Debug, Clone)]
pub struct MultiModeState {
    dims: Vec<usize>,
    labels: Vec<ModeLabel>,
    amps: Vec<Complex64>,
    normalized: bool,
}

impl MultiModeState {
    /// Build a state from raw amplitudes. `normalized` should be set only when
    /// the caller guarantees unit norm within 1e-10.
    pub fn from_amplitudes(
        labels: Vec<ModeLabel>,
        dims: Vec<usize>,
        amps: Vec<Complex64>,
        normalized: bool,
    ) -> Result<Self> {
        if labels.len() != dims.len() || labels.is_empty() || labels.len() > 4 {
            return Err(Error::InvalidParameter {
                name: "mode count",
                value: labels.len() as f64,
                expected: "between 1 and 4 labeled modes",
            });
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[i + 1..].contains(a) {
                return Err(Error::InvalidParameter {
                    name: "mode labels",
                    value: f64::NAN,
                    expected: "distinct labels per mode",
                });
            }
        }
        let total: usize = dims.iter().product();
        if dims.iter().any(|&d| d == 0) || total != amps.len() {
            return Err(Error::DimensionMismatch {
                left: total,
                right: amps.len(),
            });
        }
        Ok(Self {
            dims,
            labels,
            amps,
            normalized,
        })
    }

    /// Single-mode vacuum of the given truncation.
    pub fn vacuum(label: ModeLabel, dim: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidDimension { dim });
        }
        let mut amps = vec![Complex64::ZERO; dim];
        amps[0] = Complex64::ONE;
        Self::from_amplitudes(vec![label], vec![dim], amps, true)
    }

    pub fn mode_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn mode_labels(&self) -> &[ModeLabel] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn is_flagged_normalized(&self) -> bool {
        self.normalized
    }

    pub fn mode_index(&self, mode: ModeLabel) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == mode)
            .ok_or(Error::UnknownMode { mode })
    }

    /// Flat-index stride of mode `k` under the row-major layout.
    fn stride(&self, k: usize) -> usize {
        self.dims[k + 1..].iter().product()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Rescale to unit norm; returns the squared norm that was captured.
    pub fn normalize(mut self) -> Result<(Self, f64)> {
        let n2 = self.norm_sqr();
        if n2 <= 0.0 {
            return Err(Error::NotNormalized { trace: 0.0 });
        }
        let inv = 1.0 / n2.sqrt();
        for a in &mut self.amps {
            *a *= inv;
        }
        self.normalized = true;
        Ok((self, n2))
    }

    /// Tensor product, concatenating mode order left-to-right.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        for l in &other.labels {
            if self.labels.contains(l) {
                return Err(Error::InvalidParameter {
                    name: "mode labels",
                    value: f64::NAN,
                    expected: "distinct labels per mode",
                });
            }
        }
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for &a in &self.amps {
            for &b in &other.amps {
                amps.push(a * b);
            }
        }
        Self::from_amplitudes(labels, dims, amps, self.normalized && other.normalized)
    }

    /// Population of the top Fock level of `mode`, summed over the rest.
    pub fn top_level_population(&self, mode: ModeLabel) -> Result<f64> {
        let k = self.mode_index(mode)?;
        let d = self.dims[k];
        let stride = self.stride(k);
        let block = d * stride;
        let mut mass = 0.0;
        for (idx, a) in self.amps.iter().enumerate() {
            if (idx % block) / stride == d - 1 {
                mass += a.norm_sqr();
            }
        }
        Ok(mass)
    }
}

/// Truncated coherent state `|α⟩` on Fock levels `0..dim`.
///
/// Amplitudes are the Poisson weights `e^{−|α|²/2} α^n/√(n!)` renormalized over
/// the truncated space. Returns the renormalization factor that was applied
/// (1 for a fully captured state; the captured probability mass is
/// `factor^{−2}`). Warns when the mass above `dim−1` exceeds [`DEFAULT_TAIL_TOL`].
pub fn coherent_state(alpha: Complex64, dim: usize) -> Result<(MultiModeState, f64)> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim });
    }
    let mut amps = Vec::with_capacity(dim);
    let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    amps.push(c);
    for n in 1..dim {
        c *= alpha / (n as f64).sqrt();
        amps.push(c);
    }
    let captured: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let tail = 1.0 - captured;
    if tail > DEFAULT_TAIL_TOL {
        log::warn!(
            "coherent state |alpha|={} at dim {} leaves tail mass {:.3e} beyond truncation",
            alpha.norm(),
            dim,
            tail
        );
    }
    let factor = 1.0 / captured.sqrt();
    for a in &mut amps {
        *a *= factor;
    }
    let state = MultiModeState::from_amplitudes(vec![ModeLabel::Signal], vec![dim], amps, true)?;
    Ok((state, factor))
}

/// Apply the creation operator `a†` on one mode. The result is NOT
/// renormalized; the squared norm is returned alongside. Amplitude sitting on
/// the top Fock level is lost to truncation (with a warning when significant).
pub fn apply_creation(state: &MultiModeState, mode: ModeLabel) -> Result<(MultiModeState, f64)> {
    let k = state.mode_index(mode)?;
    let top = state.top_level_population(mode)?;
    if top > DEFAULT_TAIL_TOL {
        log::warn!(
            "a† on mode {}: top-level population {:.3e} will be lost to truncation",
            mode,
            top
        );
    }
    let d = state.dims[k];
    let stride = state.stride(k);
    let block = d * stride;
    let mut out = vec![Complex64::ZERO; state.amps.len()];
    for (idx, &a) in state.amps.iter().enumerate() {
        let n = (idx % block) / stride;
        if n + 1 < d {
            out[idx + stride] += ((n + 1) as f64).sqrt() * a;
        }
    }
    let result = MultiModeState {
        dims: state.dims.clone(),
        labels: state.labels.clone(),
        amps: out,
        normalized: false,
    };
    let n2 = result.norm_sqr();
    Ok((result, n2))
}

/// Apply the annihilation operator `a` on one mode. The result is NOT
/// renormalized; the squared norm is returned alongside (the click probability
/// up to model normalization).
pub fn apply_annihilation(
    state: &MultiModeState,
    mode: ModeLabel,
) -> Result<(MultiModeState, f64)> {
    let k = state.mode_index(mode)?;
    let d = state.dims[k];
    let stride = state.stride(k);
    let block = d * stride;
    let mut out = vec![Complex64::ZERO; state.amps.len()];
    for (idx, &a) in state.amps.iter().enumerate() {
        let n = (idx % block) / stride;
        if n >= 1 {
            out[idx - stride] += (n as f64).sqrt() * a;
        }
    }
    let result = MultiModeState {
        dims: state.dims.clone(),
        labels: state.labels.clone(),
        amps: out,
        normalized: false,
    };
    let n2 = result.norm_sqr();
    Ok((result, n2))
}

/// Apply the two-mode squeezer `exp(r(a†b† − ab))` on the given mode pair.
///
/// The exponential of the truncated generator is evaluated exactly
/// (scaled Taylor applied to the amplitude vector), so the operation is
/// unitary on the truncated space to machine precision; deviations from the
/// untruncated squeezer show up only as physical truncation leakage.
pub fn two_mode_squeeze(state: &MultiModeState, pair: ModePair, r: f64) -> Result<MultiModeState> {
    if !r.is_finite() {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            expected: "a finite squeezing parameter",
        });
    }
    let ka = state.mode_index(pair.first)?;
    let kb = state.mode_index(pair.second)?;
    let (da, db) = (state.dims[ka], state.dims[kb]);
    let (sa, sb) = (state.stride(ka), state.stride(kb));
    let (blk_a, blk_b) = (da * sa, db * sb);

    // G v with G = a†b† − ab
    let apply_gen = |v: &[Complex64], out: &mut [Complex64]| {
        for w in out.iter_mut() {
            *w = Complex64::ZERO;
        }
        for (idx, &amp) in v.iter().enumerate() {
            if amp == Complex64::ZERO {
                continue;
            }
            let na = (idx % blk_a) / sa;
            let nb = (idx % blk_b) / sb;
            if na + 1 < da && nb + 1 < db {
                let c = (((na + 1) * (nb + 1)) as f64).sqrt();
                out[idx + sa + sb] += c * amp;
            }
            if na >= 1 && nb >= 1 {
                let c = ((na * nb) as f64).sqrt();
                out[idx - sa - sb] -= c * amp;
            }
        }
    };

    // ‖G‖∞ ≤ 2√(da·db); pick substeps so each Taylor series sees norm ≤ 1.
    let bound = 2.0 * ((da * db) as f64).sqrt();
    let steps = (r.abs() * bound).ceil().max(1.0) as usize;
    let dt = r / steps as f64;

    let mut psi = state.amps.clone();
    let mut term = vec![Complex64::ZERO; psi.len()];
    let mut next = vec![Complex64::ZERO; psi.len()];
    for _ in 0..steps {
        term.copy_from_slice(&psi);
        let mut acc = psi.clone();
        for k in 1..=60usize {
            apply_gen(&term, &mut next);
            let scale = dt / k as f64;
            for (t, n) in term.iter_mut().zip(next.iter()) {
                *t = n * scale;
            }
            let mut tn = 0.0;
            for (a, t) in acc.iter_mut().zip(term.iter()) {
                *a += t;
                tn += t.norm_sqr();
            }
            if tn < 1e-34 {
                break;
            }
        }
        psi = acc;
    }

    Ok(MultiModeState {
        dims: state.dims.clone(),
        labels: state.labels.clone(),
        amps: psi,
        normalized: state.normalized,
    })
}

/// Trace out every mode except `keep`, returning the reduced density matrix.
/// The output trace equals the squared norm of the input state.
pub fn partial_trace(state: &MultiModeState, keep: ModeLabel) -> Result<DensityMatrix> {
    let k = state.mode_index(keep)?;
    let d = state.dims[k];
    let stride = state.stride(k);
    let block = d * stride;
    let outer = state.amps.len() / block;
    let mut rho = DMatrix::<Complex64>::zeros(d, d);
    for hi in 0..outer {
        for lo in 0..stride {
            let base = hi * block + lo;
            for m in 0..d {
                let am = state.amps[base + m * stride];
                if am == Complex64::ZERO {
                    continue;
                }
                for n in 0..d {
                    rho[(m, n)] += am * state.amps[base + n * stride].conj();
                }
            }
        }
    }
    DensityMatrix::from_matrix(rho)
}

/// Complex Hermitian density matrix on a truncated single-mode Fock space.
///
/// Invariants (enforced by construction and checkable via
/// [`DensityMatrix::validate`]): Hermitian within 1e-12, unit trace within
/// 1e-10 after normalizing operations, smallest eigenvalue ≥ −1e-10.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn from_matrix(mat: DMatrix<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                left: mat.nrows(),
                right: mat.ncols(),
            });
        }
        if mat.nrows() < 1 {
            return Err(Error::InvalidDimension { dim: 0 });
        }
        Ok(Self { mat })
    }

    /// Projector onto a pure state. The input must be single mode.
    pub fn from_pure(state: &MultiModeState) -> Result<Self> {
        if state.mode_labels().len() != 1 {
            return Err(Error::InvalidParameter {
                name: "mode count",
                value: state.mode_labels().len() as f64,
                expected: "a single-mode state",
            });
        }
        let d = state.mode_dims()[0];
        let v = DVector::from_column_slice(state.amplitudes());
        let mat = &v * v.adjoint();
        debug_assert_eq!(mat.nrows(), d);
        Self::from_matrix(mat)
    }

    /// `|n⟩⟨n|` at truncation `dim`.
    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim });
        }
        if n >= dim {
            return Err(Error::DimensionMismatch { left: n, right: dim });
        }
        let mut mat = DMatrix::zeros(dim, dim);
        mat[(n, n)] = Complex64::ONE;
        Self::from_matrix(mat)
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        Self::fock(0, dim)
    }

    /// Thermal state with mean photon number `nbar`, renormalized over the
    /// truncated levels.
    pub fn thermal(nbar: f64, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim });
        }
        if !(nbar >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "nbar",
                value: nbar,
                expected: "a mean photon number >= 0",
            });
        }
        let x = nbar / (nbar + 1.0);
        let mut mat = DMatrix::zeros(dim, dim);
        let mut w = 1.0;
        let mut z = 0.0;
        for n in 0..dim {
            mat[(n, n)] = Complex64::new(w, 0.0);
            z += w;
            w *= x;
        }
        for n in 0..dim {
            mat[(n, n)] /= z;
        }
        Self::from_matrix(mat)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn entry(&self, m: usize, n: usize) -> Complex64 {
        self.mat[(m, n)]
    }

    pub fn trace(&self) -> f64 {
        self.mat.diagonal().iter().map(|c| c.re).sum()
    }

    pub fn purity(&self) -> f64 {
        // Tr[ρ²] = Σ |ρ_mn|² for Hermitian ρ
        self.mat.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.mat
            .diagonal()
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.re)
            .sum()
    }

    /// Population of the top Fock level (the truncation-tail monitor).
    pub fn tail_mass(&self) -> f64 {
        let d = self.dim();
        self.mat[(d - 1, d - 1)].re
    }

    /// Rescale to unit trace; returns the trace that was captured.
    pub fn normalize(mut self) -> Result<(Self, f64)> {
        let t = self.trace();
        if t <= 0.0 {
            return Err(Error::NotNormalized { trace: t });
        }
        self.mat.scale_mut(1.0 / t);
        Ok((self, t))
    }

    /// Force exact Hermiticity, (ρ + ρ†)/2.
    pub fn hermitize(mut self) -> Self {
        self.mat = linalg::hermitian_part(&self.mat);
        self
    }

    /// Zero-pad to a larger truncation.
    pub fn embed(&self, new_dim: usize) -> Result<Self> {
        if new_dim < self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: new_dim,
            });
        }
        let mut mat = DMatrix::zeros(new_dim, new_dim);
        mat.view_mut((0, 0), (self.dim(), self.dim()))
            .copy_from(&self.mat);
        Self::from_matrix(mat)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.mat)
    }

    /// Tensor product (Kronecker), mode order left then right.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.kronecker(&other.mat),
        }
    }

    /// Check the full invariant set: Hermiticity within `1e-12`, unit trace
    /// within `1e-10`, smallest eigenvalue ≥ `−1e-10`.
    pub fn validate(&self) -> Result<()> {
        let herm_dev = (&self.mat - self.mat.adjoint()).norm();
        if herm_dev > 1e-12 * (1.0 + self.mat.norm()) {
            return Err(Error::Parse(format!(
                "density matrix not Hermitian (deviation {herm_dev:e})"
            )));
        }
        let t = self.trace();
        if (t - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { trace: t });
        }
        let min = self
            .eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -1e-10 {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min,
            });
        }
        Ok(())
    }
}

/// Pure-loss channel in the Fock basis: transmission `η` through a beam
/// splitter, `ϱ → Σ_k A_k ϱ A_k†` with `⟨n−k|A_k|n⟩ = √(C(n,k) η^{n−k} (1−η)^k)`.
/// Exactly trace preserving on the truncated space.
pub fn loss_channel(rho: &DensityMatrix, eta: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidParameter {
            name: "eta",
            value: eta,
            expected: "a transmission within [0, 1]",
        });
    }
    let d = rho.dim();
    // a[k][n] = ⟨n−k|A_k|n⟩, built by the recurrence
    // C(n+1,k)/C(n,k) = (n+1)/(n+1−k).
    let mut coef = vec![vec![0.0f64; d]; d];
    for k in 0..d {
        let mut binom = 1.0f64; // C(k, k)
        for n in k..d {
            if n > k {
                binom *= n as f64 / (n - k) as f64;
            }
            coef[k][n] = (binom * eta.powi((n - k) as i32) * (1.0 - eta).powi(k as i32)).sqrt();
        }
    }
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    for k in 0..d {
        for m in 0..d - k {
            let cm = coef[k][m + k];
            if cm == 0.0 {
                continue;
            }
            for n in 0..d - k {
                out[(m, n)] += cm * coef[k][n + k] * rho.entry(m + k, n + k);
            }
        }
    }
    Ok(DensityMatrix::from_matrix(out)?.hermitize())
}

/// Convex mixture `w·ϱ_a + (1−w)·ϱ_b`.
pub fn mix(rho_a: &DensityMatrix, rho_b: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::InvalidParameter {
            name: "w",
            value: w,
            expected: "a mixing weight within [0, 1]",
        });
    }
    if rho_a.dim() != rho_b.dim() {
        return Err(Error::DimensionMismatch {
            left: rho_a.dim(),
            right: rho_b.dim(),
        });
    }
    for rho in [rho_a, rho_b] {
        let t = rho.trace();
        if (t - 1.0).abs() > 1e-6 {
            return Err(Error::NotNormalized { trace: t });
        }
    }
    let mat = rho_a.matrix() * Complex64::new(w, 0.0)
        + rho_b.matrix() * Complex64::new(1.0 - w, 0.0);
    DensityMatrix::from_matrix(mat)
}

/// Uhlmann fidelity `(Tr√(√ϱ_a ϱ_b √ϱ_a))²`.
///
/// The squared convention is used throughout: it is the transition probability
/// commonly reported by tomography work, and reduces to `|⟨ψ|φ⟩|²` on pure
/// states.
pub fn fidelity(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Result<f64> {
    if rho_a.dim() != rho_b.dim() {
        return Err(Error::DimensionMismatch {
            left: rho_a.dim(),
            right: rho_b.dim(),
        });
    }
    for rho in [rho_a, rho_b] {
        let t = rho.trace();
        if (t - 1.0).abs() > 1e-6 {
            return Err(Error::NotNormalized { trace: t });
        }
    }
    let sa = linalg::sqrt_psd(rho_a.matrix())?;
    let inner = &sa * rho_b.matrix() * &sa;
    let vals = linalg::eigvalsh(&inner);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -linalg::PSD_TOLERANCE {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: min,
        });
    }
    let root_sum: f64 = vals
        .iter()
        .filter(|&&v| v > linalg::EIGENVALUE_FLOOR)
        .map(|&v| v.sqrt())
        .sum();
    Ok((root_sum * root_sum).min(1.0))
}

/// Matrix of the annihilation operator `a` at truncation `dim`.
pub fn annihilation_matrix(dim: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

fn apply_unitary(rho: &DensityMatrix, u: &DMatrix<Complex64>) -> DensityMatrix {
    DensityMatrix {
        mat: u * rho.matrix() * u.adjoint(),
    }
    .hermitize()
}

/// Displacement `D(β) = exp(βa† − β̄a)`; shifts the mean by `(√2 Re β, √2 Im β)`.
pub fn displace(rho: &DensityMatrix, beta: Complex64) -> DensityMatrix {
    let a = annihilation_matrix(rho.dim());
    let gen = a.adjoint() * beta - a * beta.conj();
    apply_unitary(rho, &linalg::exp_antihermitian(&gen))
}

/// Phase-space rotation `exp(−iφ a†a)`.
pub fn rotate(rho: &DensityMatrix, phi: f64) -> DensityMatrix {
    let a = annihilation_matrix(rho.dim());
    let n = a.adjoint() * &a;
    let gen = n.map(|z| -Complex64::new(0.0, phi) * z);
    apply_unitary(rho, &linalg::exp_antihermitian(&gen))
}

/// Single-mode squeezer `S(z) = exp((z̄a² − z a†²)/2)`. For real `z = u` the
/// x-variance scales by `e^{−2u}` and the p-variance by `e^{2u}`.
pub fn squeeze(rho: &DensityMatrix, z: Complex64) -> DensityMatrix {
    let a = annihilation_matrix(rho.dim());
    let a2 = &a * &a;
    let gen = (a2.map(|w| w * z.conj()) - a2.adjoint().map(|w| w * z)).scale(0.5);
    apply_unitary(rho, &linalg::exp_antihermitian(&gen))
}
