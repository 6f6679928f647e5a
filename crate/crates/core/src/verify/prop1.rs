use serde_json::json;

use crate::error::Result;
use crate::weyl_qha::schatten_norm;
use crate::young_fn::YoungFunction;

use super::fixtures::{digest, trial_rng, GaussMix, LowRank, MixShape};
use super::{conv_ff, conv_fo, fun_norm, op_norm, proper_exponents, run_trials, SuiteConfig, TrialRecord, VerificationReport, MU};

pub(super) fn mix_shape() -> MixShape {
    MixShape { count: 1..=3, radius: 1.0, widths: (0.4, 1.0), complex: false }
}

/// The four estimates with constant `2p_Φ/(q_Φ − 1)`:
/// `L¹ × L^Φ → L^Φ`, `L^Φ × S¹ → S^Φ`, `L¹ × S^Φ → S^Φ` and `S^Φ × S¹ → L^Φ`.
pub(super) fn run(cfg: &SuiteConfig, phi: &YoungFunction<f64>) -> Result<VerificationReport> {
    let (q, p) = proper_exponents(phi)?;
    let constant = 2.0 * p / (q - 1.0);
    let ctx = cfg.grid.context()?;
    let spec = *ctx.grid();
    let shape = mix_shape();
    let bound = constant * cfg.bound_scale;
    let records = run_trials(cfg.trials, |trial| {
        let mut rng = trial_rng(cfg.seed, trial as u64);
        let (fm, gm) = (GaussMix::random(&mut rng, &shape), GaussMix::random(&mut rng, &shape));
        let (am, bm) = (LowRank::random(&mut rng, 1..=2, 4, 1.0), LowRank::random(&mut rng, 1..=2, 4, 1.0));
        let tag = digest(&(&fm, &gm, &am, &bm));
        let (f, g) = (fm.grid(spec), gm.grid(spec));
        let (a, b) = (am.matrix(&ctx), bm.matrix(&ctx));

        let fg = conv_ff(&f, &g)?;
        let fa = conv_fo(&ctx, &f, &a)?;
        let ab = ctx.conv_op_op(&a, &b)?;

        let f1 = f.l1_norm() * MU;
        let (f_phi, g_phi) = (fun_norm(&f, phi)?, fun_norm(&g, phi)?);
        let (a1, b1) = (schatten_norm(&a, 1.0), schatten_norm(&b, 1.0));
        let a_phi = op_norm(&a, phi)?;
        let fa_phi = op_norm(&fa, phi)?;

        let checks = [
            ("fun_fun", fun_norm(&fg, phi)?, g_phi * f1),
            ("fun_op", fa_phi, f_phi * a1),
            ("op_fun", fa_phi, a_phi * f1),
            ("op_op", fun_norm(&ab, phi)?, a_phi * b1),
        ];
        let mut out: Vec<TrialRecord> = checks
            .iter()
            .map(|(name, obs, rhs)| TrialRecord::bounded(trial, name, &tag, bound * rhs, *obs, Some(*rhs), cfg.slack))
            .collect();
        let weight = [&a, &b, &fa].iter().map(|m| m.top_weight(ctx.n_fock() / 4)).fold(0.0, f64::max);
        out.push(TrialRecord::bounded(trial, "truncation_guard", &tag, crate::weyl_qha::TRUNCATION_WEIGHT, weight, None, 0.0));
        Ok(out)
    })?;
    let parameters = json!({
        "phi": phi,
        "q_phi": q,
        "p_phi": p,
        "constant": constant,
        "bound_scale": cfg.bound_scale,
        "measure": "dz/2pi",
        "grid": cfg.grid,
        "slack": cfg.slack,
    });
    Ok(VerificationReport::assemble("prop1", cfg.seed, cfg.trials, parameters, records, 0.1, cfg.slack))
}
