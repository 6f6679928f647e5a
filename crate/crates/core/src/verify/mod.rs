//! Randomised checks of the convolution inequalities, with per-trial records.
//!
//! Two measure conventions appear. The module suites (`prop1`, `multilinear`,
//! `interpolation`, `qha_module`) use `μ = dz/2π` on phase space, so
//! `f ∗ g = (2π)^{−1} ∫ f(w) g(· − w) dw`, `f ∗ A = (2π)^{−1} ∫ f(z) α_z(A) dz`
//! and `∫ A ∗ B dμ = tr A · tr B`; every base estimate then has constant one.
//! The dilated suites convolve symbols with `κ^{−1/2} dz`, where `κ` is the
//! S²-pairing factor measured on the grid (`2π` for `d = 1`).

mod dilated;
mod fixtures;
mod interpolation;
mod module;
mod multilinear;
mod prop1;
mod report;


use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::OperatorMatrix;
use crate::phase_space::{GridFunction, GridSpec};
use crate::rearrangement::orlicz_norm;
use crate::weyl_qha::{schatten_orlicz_norm, QhaContext};
use crate::young_fn::{exponents, YoungFunction};

pub use report::{Summary, TrialRecord, VerificationReport};

/// Phase-space grid and Fock truncation used by a suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub extent: f64,
    pub n: usize,
    pub n_fock: usize,
    /// Second resolution for the empirical-constant suites; `3n/2` when absent.
    pub refined_n: Option<usize>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { extent: 12.0, n: 128, n_fock: 64, refined_n: None }
    }
}

impl GridConfig {
    pub fn spec(&self) -> Result<GridSpec<f64>> {
        GridSpec::new(1, self.extent, self.n)
    }

    pub fn refined_spec(&self) -> Result<GridSpec<f64>> {
        let n = self.refined_n.unwrap_or((3 * self.n / 4) * 2);
        GridSpec::new(1, self.extent, n)
    }

    pub fn context(&self) -> Result<QhaContext<f64>> {
        QhaContext::new(self.n_fock, self.spec()?)
    }

    pub fn refined_context(&self) -> Result<QhaContext<f64>> {
        QhaContext::new(self.n_fock, self.refined_spec()?)
    }
}

/// Which suite to run, with its Young functions and dilation data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "suite", rename_all = "snake_case")]
pub enum SuiteKind {
    Prop1 {
        phi: YoungFunction<f64>,
    },
    Multilinear {
        psis: Vec<YoungFunction<f64>>,
        k: usize,
        #[serde(default)]
        psi0: Option<YoungFunction<f64>>,
    },
    Dilated {
        t: Vec<f64>,
        c: Vec<f64>,
        p: Vec<f64>,
        r: f64,
    },
    DilatedOrlicz {
        psis: Vec<YoungFunction<f64>>,
        t: Vec<f64>,
        c: Vec<f64>,
    },
    Interpolation {
        phi: YoungFunction<f64>,
    },
    QhaModule {
        phi: YoungFunction<f64>,
    },
}

impl SuiteKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Prop1 { .. } => "prop1",
            Self::Multilinear { .. } => "multilinear",
            Self::Dilated { .. } => "dilated",
            Self::DilatedOrlicz { .. } => "dilated_orlicz",
            Self::Interpolation { .. } => "interpolation",
            Self::QhaModule { .. } => "qha_module",
        }
    }
}

fn default_slack() -> f64 {
    1e-6
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    #[serde(flatten)]
    pub kind: SuiteKind,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub grid: GridConfig,
    /// A check passes when `bound − observed ≥ −slack · bound`.
    #[serde(default = "default_slack")]
    pub slack: f64,
    /// Multiplies every gating bound; values below one provoke failures.
    #[serde(default = "one")]
    pub bound_scale: f64,
}

impl SuiteConfig {
    pub fn new(kind: SuiteKind, trials: usize, seed: u64) -> Self {
        Self { kind, trials, seed, grid: GridConfig::default(), slack: default_slack(), bound_scale: 1.0 }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("suite config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be positive".into()));
        }
        if !(self.slack >= 0.0) || !(self.bound_scale > 0.0) {
            return Err(Error::InvalidInput("slack must be nonnegative and bound_scale positive".into()));
        }
        Ok(())
    }
}

/// Runs the configured suite.
pub fn run(cfg: &SuiteConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    match &cfg.kind {
        SuiteKind::Prop1 { phi } => prop1::run(cfg, phi),
        SuiteKind::Multilinear { psis, k, psi0 } => multilinear::run(cfg, psis, *k, psi0.as_ref()),
        SuiteKind::Dilated { t, c, p, r } => dilated::run(cfg, t, c, p, *r),
        SuiteKind::DilatedOrlicz { psis, t, c } => dilated::run_orlicz(cfg, psis, t, c),
        SuiteKind::Interpolation { phi } => interpolation::run(cfg, phi),
        SuiteKind::QhaModule { phi } => module::run(cfg, phi),
    }
}

pub fn suite_prop1(phi: &YoungFunction<f64>, trials: usize, seed: u64) -> Result<VerificationReport> {
    run(&SuiteConfig::new(SuiteKind::Prop1 { phi: phi.clone() }, trials, seed))
}

pub fn suite_multilinear(
    psi0: Option<&YoungFunction<f64>>,
    psis: &[YoungFunction<f64>],
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let kind = SuiteKind::Multilinear { psis: psis.to_vec(), k, psi0: psi0.cloned() };
    run(&SuiteConfig::new(kind, trials, seed))
}

pub fn suite_dilated(t: &[f64], c: &[f64], p: &[f64], r: f64, trials: usize, seed: u64) -> Result<VerificationReport> {
    let kind = SuiteKind::Dilated { t: t.to_vec(), c: c.to_vec(), p: p.to_vec(), r };
    run(&SuiteConfig::new(kind, trials, seed))
}

pub fn suite_dilated_orlicz(
    psis: &[YoungFunction<f64>],
    t: &[f64],
    c: &[f64],
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let kind = SuiteKind::DilatedOrlicz { psis: psis.to_vec(), t: t.to_vec(), c: c.to_vec() };
    run(&SuiteConfig::new(kind, trials, seed))
}

pub fn suite_interpolation(phi: &YoungFunction<f64>, trials: usize, seed: u64) -> Result<VerificationReport> {
    run(&SuiteConfig::new(SuiteKind::Interpolation { phi: phi.clone() }, trials, seed))
}

pub fn suite_qha_module(phi: &YoungFunction<f64>, trials: usize, seed: u64) -> Result<VerificationReport> {
    run(&SuiteConfig::new(SuiteKind::QhaModule { phi: phi.clone() }, trials, seed))
}

/// Measure of one unit of `dz` under `μ = dz/2π`.
pub(crate) const MU: f64 = 1.0 / (2.0 * PI);

/// `(q_Φ, p_Φ)` after checking `1 < q_Φ ≤ p_Φ < ∞`.
pub(crate) fn proper_exponents(phi: &YoungFunction<f64>) -> Result<(f64, f64)> {
    let (q, p) = exponents(phi)?;
    if !(q > 1.0 && p.is_finite()) {
        return Err(Error::ExponentOutOfRange { q, p });
    }
    Ok((q, p))
}

pub(crate) fn fun_norm(f: &GridFunction<f64>, phi: &YoungFunction<f64>) -> Result<f64> {
    orlicz_norm(&f.rearrangement(MU), phi)
}

pub(crate) fn op_norm(a: &OperatorMatrix<f64>, phi: &YoungFunction<f64>) -> Result<f64> {
    schatten_orlicz_norm(a, phi)
}

/// `f ∗ g` for `μ`.
pub(crate) fn conv_ff(f: &GridFunction<f64>, g: &GridFunction<f64>) -> Result<GridFunction<f64>> {
    Ok(crate::phase_space::convolve(f, g)?.scale(MU))
}

/// `f ∗ A` for `μ`.
pub(crate) fn conv_fo(ctx: &QhaContext<f64>, f: &GridFunction<f64>, a: &OperatorMatrix<f64>) -> Result<OperatorMatrix<f64>> {
    Ok(ctx.conv_fun_op(f, a)?.scale_real(MU))
}

/// Runs `trial` for every index in parallel and concatenates in index order.
pub(crate) fn run_trials<F>(trials: usize, trial: F) -> Result<Vec<TrialRecord>>
where
    F: Fn(usize) -> Result<Vec<TrialRecord>> + Sync,
{
    let per: Vec<Vec<TrialRecord>> = (0..trials).into_par_iter().map(&trial).collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}
