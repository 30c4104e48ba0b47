//! The full state-preparation pipeline: a coherent seed amplified together
//! with an idler, conditioned on an idler click, degraded by parasitic gain,
//! imperfect triggering and homodyne loss.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{
    apply_annihilation, apply_creation, coherent_state, loss_channel, mix, partial_trace,
    two_mode_squeeze, DensityMatrix, ModeLabel, ModePair, MultiModeState,
};
use crate::measures::{non_classicality, non_gaussianity, GridSpec};

/// Default truncation of the idler and parasitic modes. Parasitic drive
/// strengths of interest (`γr ≲ 0.05`) populate only the lowest Fock levels;
/// the tail is monitored at run time.
pub const DEFAULT_ANCILLA_DIM: usize = 6;

/// Cap on the product of the four mode dimensions (25⁴).
pub const MEM_CAP: usize = 390_625;

/// Truncation dimension adequate for a photon-added coherent state of the
/// given amplitude: 20 for |α| ≤ 1, 25 for |α| ≤ 1.5, growing beyond.
pub fn auto_dim(alpha_abs: f64) -> usize {
    if alpha_abs <= 1.0 {
        20
    } else if alpha_abs <= 1.5 {
        25
    } else {
        ((alpha_abs * alpha_abs + 6.0 * alpha_abs + 10.0).ceil() as usize).max(25)
    }
}

/// The five-knob noise model plus truncation.
#[derive(Debug, Clone, Copy)]
pub struct ExperimentParams {
    /// Input coherent amplitude.
    pub alpha: Complex64,
    /// Squeezing parameter of the amplifier.
    pub r: f64,
    /// Parasitic gain ratio: mismatched modes are driven at `γr`.
    pub gamma: f64,
    /// Trigger purity: probability the herald click came from the right mode.
    pub xi: f64,
    /// Homodyne efficiency, applied as a beam-splitter loss.
    pub eta: f64,
    /// Signal-mode truncation.
    pub dim: usize,
    /// Idler/parasitic-mode truncation.
    pub ancilla_dim: usize,
}

impl ExperimentParams {
    pub fn new(
        alpha: Complex64,
        r: f64,
        gamma: f64,
        xi: f64,
        eta: f64,
        dim: usize,
    ) -> Result<Self> {
        let p = Self {
            alpha,
            r,
            gamma,
            xi,
            eta,
            dim,
            ancilla_dim: DEFAULT_ANCILLA_DIM,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_ancilla_dim(mut self, ancilla_dim: usize) -> Result<Self> {
        self.ancilla_dim = ancilla_dim;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.re.is_finite() || !self.alpha.im.is_finite() {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: f64::NAN,
                expected: "a finite complex amplitude",
            });
        }
        if !self.r.is_finite() || self.r < 0.0 {
            return Err(Error::InvalidParameter {
                name: "r",
                value: self.r,
                expected: "a squeezing parameter >= 0",
            });
        }
        for (name, v) in [("gamma", self.gamma), ("xi", self.xi), ("eta", self.eta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter {
                    name: match name {
                        "gamma" => "gamma",
                        "xi" => "xi",
                        _ => "eta",
                    },
                    value: v,
                    expected: "a value within [0, 1]",
                });
            }
        }
        if self.dim < 2 {
            return Err(Error::InvalidDimension { dim: self.dim });
        }
        if self.ancilla_dim < 1 {
            return Err(Error::InvalidDimension {
                dim: self.ancilla_dim,
            });
        }
        Ok(())
    }
}

/// Output of [`run_pipeline`]: the measured state, both trigger branches
/// (before homodyne loss) and the relative heralding weight.
#[derive(Debug, Clone)]
pub struct PipelineResult {
    /// Signal state as measured: `loss_η(ξ·ϱ_success + (1−ξ)·ϱ_faulty)`.
    pub rho_out: DensityMatrix,
    /// Correct-trigger branch: idler click conditioning applied.
    pub rho_success: DensityMatrix,
    /// Faulty-trigger branch: unconditioned reduced signal state.
    pub rho_faulty: DensityMatrix,
    /// Squared norm captured by the click conditioning (diagnostics only).
    pub click_weight: f64,
}

/// The ideal photon-added coherent state `a†|α⟩/√(1+|α|²)` as a projector.
pub fn ideal_photon_added_state(alpha: Complex64, dim: usize) -> Result<DensityMatrix> {
    let (coh, _) = coherent_state(alpha, dim)?;
    let (added, _) = apply_creation(&coh, ModeLabel::Signal)?;
    let (added, _) = added.normalize()?;
    let rho = DensityMatrix::from_pure(&added)?;
    let tail = rho.tail_mass();
    if tail > crate::fock::DEFAULT_TAIL_TOL {
        return Err(Error::TailMassExceeded {
            mass: tail,
            tol: crate::fock::DEFAULT_TAIL_TOL,
        });
    }
    Ok(rho)
}

/// Run the four-mode preparation pipeline.
///
/// Steps: build `|α,0,0,0⟩` on modes (signal, idler, signal-parasite,
/// idler-parasite); apply the squeezer cascade rightmost-first
/// (parasite-signal/idler at `γr`, then signal/parasite-idler at `γr`, then
/// signal/idler at `r`); condition the correct branch on an idler click
/// (annihilation), trace to the signal mode, and mix the branches with the
/// trigger purity before applying the homodyne loss.
pub fn run_pipeline(params: &ExperimentParams) -> Result<PipelineResult> {
    params.validate()?;
    // Parasitic modes stay in vacuum when the parasitic drive vanishes; a
    // one-level truncation then represents them exactly.
    let pd = if params.gamma * params.r == 0.0 {
        1
    } else {
        params.ancilla_dim
    };
    let ad = params.ancilla_dim;
    let required = params.dim * ad * pd * pd;
    if required > MEM_CAP {
        return Err(Error::MemoryCapExceeded {
            required,
            cap: MEM_CAP,
        });
    }

    let (signal, _) = coherent_state(params.alpha, params.dim)?;
    let psi = signal
        .tensor(&MultiModeState::vacuum(ModeLabel::Idler, ad)?)?
        .tensor(&MultiModeState::vacuum(ModeLabel::SignalParasite, pd)?)?
        .tensor(&MultiModeState::vacuum(ModeLabel::IdlerParasite, pd)?)?;

    let gr = params.gamma * params.r;
    let psi = two_mode_squeeze(
        &psi,
        ModePair::new(ModeLabel::SignalParasite, ModeLabel::Idler)?,
        gr,
    )?;
    let psi = two_mode_squeeze(
        &psi,
        ModePair::new(ModeLabel::Signal, ModeLabel::IdlerParasite)?,
        gr,
    )?;
    let psi = two_mode_squeeze(
        &psi,
        ModePair::new(ModeLabel::Signal, ModeLabel::Idler)?,
        params.r,
    )?;

    let input_norm = psi.norm_sqr();

    // correct-trigger branch: idler click approximated by the annihilator
    let (clicked, w) = apply_annihilation(&psi, ModeLabel::Idler)?;
    let click_weight = w / input_norm;
    if w <= f64::MIN_POSITIVE {
        return Err(Error::IllConditioned {
            detail: "zero heralding probability (no photons ever reach the idler)".into(),
        });
    }
    let (rho_success, _) = partial_trace(&clicked, ModeLabel::Signal)?.normalize()?;

    // faulty-trigger branch: the click carries no information about the signal
    let (rho_faulty, _) = partial_trace(&psi, ModeLabel::Signal)?.normalize()?;

    let mixed = mix(&rho_success, &rho_faulty, params.xi)?;
    let rho_out = loss_channel(&mixed, params.eta)?;

    if rho_out.tail_mass() > crate::fock::DEFAULT_TAIL_TOL {
        log::warn!(
            "pipeline output tail mass {:.3e} exceeds tolerance; consider a larger dim",
            rho_out.tail_mass()
        );
    }

    Ok(PipelineResult {
        rho_out,
        rho_success,
        rho_faulty,
        click_weight,
    })
}

/// One row of a parameter sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub alpha: f64,
    pub r: f64,
    pub gamma: f64,
    pub xi: f64,
    pub eta: f64,
    pub delta_nats: f64,
    pub nu: f64,
    pub click_weight: f64,
}

/// δ and ν of a state, with the default auto grid for the Wigner minimum.
pub fn measure_state(rho: &DensityMatrix) -> Result<(f64, f64)> {
    let delta = non_gaussianity(rho)?;
    let nu = non_classicality(rho, &GridSpec::auto(rho))?;
    Ok((delta, nu))
}

fn sweep_point(params: &ExperimentParams) -> Result<SweepRow> {
    let out = run_pipeline(params)?;
    let (delta, nu) = measure_state(&out.rho_out)?;
    Ok(SweepRow {
        alpha: params.alpha.norm(),
        r: params.r,
        gamma: params.gamma,
        xi: params.xi,
        eta: params.eta,
        delta_nats: delta,
        nu,
        click_weight: out.click_weight,
    })
}

/// Run the pipeline and measures for each amplitude. The template's `alpha`
/// is ignored; `fixed_dim` forces the signal truncation, otherwise
/// [`auto_dim`] picks it per amplitude. Points run in parallel; row order
/// follows the input order.
pub fn sweep_alpha(
    template: &ExperimentParams,
    alphas: &[f64],
    fixed_dim: Option<usize>,
) -> Result<Vec<SweepRow>> {
    if alphas.is_empty() {
        return Err(Error::Parse("empty amplitude list".into()));
    }
    alphas
        .par_iter()
        .map(|&a| {
            let params = ExperimentParams {
                alpha: Complex64::new(a, 0.0),
                dim: fixed_dim.unwrap_or_else(|| auto_dim(a.abs())),
                ..*template
            };
            sweep_point(&params)
        })
        .collect()
}

/// Which noise knob a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKnob {
    Gamma,
    Xi,
    Eta,
}

impl NoiseKnob {
    pub fn name(&self) -> &'static str {
        match self {
            NoiseKnob::Gamma => "gamma",
            NoiseKnob::Xi => "xi",
            NoiseKnob::Eta => "eta",
        }
    }
}

/// Sweep one noise knob over the given values, holding everything else at the
/// template's settings.
pub fn sweep_noise(
    template: &ExperimentParams,
    knob: NoiseKnob,
    values: &[f64],
) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(Error::Parse("empty knob value list".into()));
    }
    values
        .par_iter()
        .map(|&v| {
            let mut params = *template;
            match knob {
                NoiseKnob::Gamma => params.gamma = v,
                NoiseKnob::Xi => params.xi = v,
                NoiseKnob::Eta => params.eta = v,
            }
            params.validate()?;
            sweep_point(&params)
        })
        .collect()
}
