use std::f64::consts::PI;

use serde_json::json;

use crate::error::{Error, Result};
use crate::phase_space::{dilated_convolve, DilationSpec, GridFunction};
use crate::weyl_qha::{schatten_norm, QhaContext, TRUNCATION_WEIGHT};
use crate::young_fn::{exponents, Family, YoungFunction};

use super::fixtures::{digest, trial_rng, GaussMix, MixShape};
use super::multilinear::{stability_records, target, STABLE};
use super::{op_norm, run_trials, SuiteConfig, TrialRecord, VerificationReport};

/// Complex-weighted mixtures: the bound is attained by positive Gaussian states
/// with `p = 1`, so signed weights keep the margin visible.
fn shape() -> MixShape {
    MixShape { count: 1..=3, radius: 0.4, widths: (0.4, 0.7), complex: true }
}

/// `(2π)^{d(n−1)/2} Π |t_j|^{−2d/p_j}` for `d = 1`.
pub(crate) fn dilated_constant(t: &[f64], p: &[f64]) -> f64 {
    let n = t.len() as f64;
    (2.0 * PI).powf((n - 1.0) / 2.0) * t.iter().zip(p).map(|(tj, pj)| tj.abs().powf(-2.0 / pj)).product::<f64>()
}

/// `κ^{−(n−1)/2} a¹_{t₁} ∗ ⋯ ∗ aⁿ_{tₙ}` and its quantization together with those of the factors.
struct Chain {
    output: crate::matrix::OperatorMatrix<f64>,
    factors: Vec<crate::matrix::OperatorMatrix<f64>>,
}

fn chain(ctx: &QhaContext<f64>, spec: &DilationSpec<f64>, kappa: f64, funcs: &[GridFunction<f64>]) -> Result<Chain> {
    let b = dilated_convolve(spec, funcs)?.scale(kappa.powf(-((funcs.len() - 1) as f64) / 2.0));
    Ok(Chain { output: ctx.op_w(&b)?, factors: funcs.iter().map(|f| ctx.op_w(f)).collect::<Result<_>>()? })
}

impl Chain {
    fn guard_weight(&self, quarter: usize) -> f64 {
        self.factors.iter().chain(std::iter::once(&self.output)).map(|m| m.top_weight(quarter)).fold(0.0, f64::max)
    }
}

pub(super) fn run(cfg: &SuiteConfig, t: &[f64], c: &[f64], p: &[f64], r: f64) -> Result<VerificationReport> {
    let spec = DilationSpec::new(t.to_vec(), c.to_vec(), p.to_vec(), r)?;
    let ctx = cfg.grid.context()?;
    let kappa = ctx.pairing_factor()?;
    let grid = *ctx.grid();
    let constant = dilated_constant(t, p);
    let quarter = ctx.n_fock() / 4;
    let records = run_trials(cfg.trials, |trial| {
        let mut rng = trial_rng(cfg.seed, trial as u64);
        let mixes: Vec<GaussMix> = (0..spec.len()).map(|_| GaussMix::random(&mut rng, &shape())).collect();
        let tag = digest(&mixes);
        let funcs: Vec<GridFunction<f64>> = mixes.iter().map(|m| m.grid(grid)).collect();
        let ch = chain(&ctx, &spec, kappa, &funcs)?;
        let observed = schatten_norm(&ch.output, r);
        let rhs: f64 = ch.factors.iter().zip(p).map(|(a, pj)| schatten_norm(a, *pj)).product();
        Ok(vec![
            TrialRecord::bounded(trial, "dilated_bound", &tag, constant * cfg.bound_scale * rhs, observed, Some(rhs), cfg.slack),
            TrialRecord::bounded(trial, "truncation_guard", &tag, TRUNCATION_WEIGHT, ch.guard_weight(quarter), None, 0.0),
        ])
    })?;
    let parameters = json!({
        "t": t,
        "c": c,
        "p": p,
        "r": r,
        "constant": constant,
        "bound_scale": cfg.bound_scale,
        "exponent_relation_holds": spec.exponent_relation_holds(),
        "kappa": kappa,
        "convolution_normalisation": "kappa^(-1/2) dz",
        "grid": cfg.grid,
        "slack": cfg.slack,
    });
    Ok(VerificationReport::assemble("dilated", cfg.seed, cfg.trials, parameters, records, 0.1, cfg.slack))
}

/// Exponent of a pure power, if `phi` is one.
fn power_exponent(phi: &YoungFunction<f64>) -> Option<f64> {
    match phi.family() {
        Family::Power { p } => Some(*p),
        _ => None,
    }
}

pub(super) fn run_orlicz(cfg: &SuiteConfig, psis: &[YoungFunction<f64>], t: &[f64], c: &[f64]) -> Result<VerificationReport> {
    if psis.len() != t.len() {
        return Err(Error::DimensionMismatch { expected: t.len(), got: psis.len() });
    }
    let psi0 = target(psis, None)?;
    let p: Vec<f64> = psis.iter().map(|psi| exponents(psi).map(|e| e.1)).collect::<Result<_>>()?;
    let r = 1.0 / (p.iter().map(|x| 1.0 / x).sum::<f64>() - (t.len() - 1) as f64);
    let spec = DilationSpec::new(t.to_vec(), c.to_vec(), p.clone(), r.max(1.0))?;
    let contexts = [("base", cfg.grid.context()?), ("refined", cfg.grid.refined_context()?)];
    let kappa = contexts[0].1.pairing_factor()?;
    let powers: Option<Vec<f64>> = psis.iter().map(power_exponent).collect();
    let constant = powers.as_ref().map(|pw| dilated_constant(t, pw));
    let quarter = cfg.grid.n_fock / 4;
    let mut records = run_trials(cfg.trials, |trial| {
        let mut rng = trial_rng(cfg.seed, trial as u64);
        let mixes: Vec<GaussMix> = (0..spec.len()).map(|_| GaussMix::random(&mut rng, &shape())).collect();
        let tag = digest(&mixes);
        let mut out = Vec::new();
        for (label, ctx) in &contexts {
            let funcs: Vec<GridFunction<f64>> = mixes.iter().map(|m| m.grid(*ctx.grid())).collect();
            let ch = chain(ctx, &spec, kappa, &funcs)?;
            let observed = op_norm(&ch.output, &psi0)?;
            let rhs = ch.factors.iter().zip(psis).map(|(a, psi)| op_norm(a, psi)).product::<Result<f64>>()?;
            out.push(TrialRecord::estimate(trial, &format!("constant_{label}"), &tag, observed, rhs));
            if *label == "base" {
                if let Some(constant) = constant {
                    let bound = constant * cfg.bound_scale * rhs;
                    out.push(TrialRecord::bounded(trial, "power_crosscheck", &tag, bound, observed, Some(rhs), cfg.slack));
                }
                out.push(TrialRecord::bounded(trial, "truncation_guard", &tag, TRUNCATION_WEIGHT, ch.guard_weight(quarter), None, 0.0));
            }
        }
        Ok(out)
    })?;
    records.extend(stability_records(cfg.trials, &records));
    let parameters = json!({
        "psis": psis,
        "psi0": psi0,
        "t": t,
        "c": c,
        "p_psi": p,
        "p_psi0": r,
        "dilated_constant": constant,
        "kappa": kappa,
        "convolution_normalisation": "kappa^(-1/2) dz",
        "grid": cfg.grid,
        "refined_n": contexts[1].1.grid().n,
        "stability_window": [STABLE.0, STABLE.1],
    });
    Ok(VerificationReport::assemble("dilated_orlicz", cfg.seed, cfg.trials, parameters, records, 0.1, cfg.slack))
}
