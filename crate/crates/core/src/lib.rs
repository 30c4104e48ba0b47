//! Truncated-Fock-space simulation of single-photon-added coherent states.
//!
//! The crate models the conditional preparation of a photon-added coherent
//! state in an optical parametric amplifier, including the dominant
//! imperfections of a real setup (multi-pair emission at squeezing `r`,
//! parasitic gain `γ`, trigger purity `ξ`, homodyne efficiency `η`),
//! quantifies the output's non-Gaussianity `δ` and non-classicality `ν`,
//! and validates states end to end through synthetic homodyne sampling and
//! maximum-likelihood tomography.
//!
//! # Conventions
//!
//! Fixed once, globally: `x = (a + a†)/√2`, `p = (a − a†)/(i√2)`, `ħ = 1`.
//! The vacuum quadrature variance is `1/2`, a physical covariance satisfies
//! `det σ ≥ 1/4`, the Wigner function is normalized to `∫∫ W dx dp = 1`
//! (so `W(0,0) = (−1)^n/π` for Fock states), and the homodyne marginal of the
//! vacuum is `e^{−x²}/√π`. Entropies are in nats.
//!
//! All operations are pure functions of their inputs; values move freely
//! across threads, and parameter sweeps and grid evaluations are data
//! parallel.

pub mod error;
pub mod experiment;
pub mod fock;
pub mod io;
mod linalg;
pub mod measures;
pub mod tomo;

pub use error::{Error, Result};
pub use experiment::{
    auto_dim, ideal_photon_added_state, run_pipeline, sweep_alpha, sweep_noise, ExperimentParams,
    NoiseKnob, PipelineResult, SweepRow,
};
pub use fock::{
    apply_annihilation, apply_creation, coherent_state, fidelity, loss_channel, mix,
    partial_trace, two_mode_squeeze, DensityMatrix, ModeLabel, ModePair, MultiModeState,
};
pub use measures::{
    gaussian_entropy, gaussian_summary, non_classicality, non_gaussianity, von_neumann_entropy,
    wigner_eval, wigner_grid, GaussianSummary, GridSpec, WignerGrid,
};
pub use tomo::{
    homodyne_pdf, maxlik_reconstruct, sample_quadratures, QuadratureDataset, ReconstructionLog,
    TomoConfig,
};
