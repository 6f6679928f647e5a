use serde_json::json;

use crate::error::Result;
use crate::matrix::OperatorMatrix;
use crate::phase_space::GridFunction;
use crate::weyl_qha::{schatten_norm, TRUNCATION_WEIGHT};
use crate::young_fn::YoungFunction;

use super::fixtures::{digest, trial_rng, GaussMix, LowRank, MixShape};
use super::{conv_ff, conv_fo, fun_norm, op_norm, proper_exponents, run_trials, SuiteConfig, TrialRecord, VerificationReport, MU};

/// Singular values of the intermediate `g ∗ A` below this fraction of the top
/// one are dropped before convolving with `f`.
const INTERMEDIATE_RANK_CUT: f64 = 1e-13;

const ASSOCIATIVITY_TOL: f64 = 1e-6;

/// `(f ⊕ A) ∗ (g ⊕ B) = (f ∗ g + A ∗ B) ⊕ (f ∗ B + A ∗ g)`, with the left factor
/// in `L¹ ⊕ S¹` and the right one in `L^Φ ⊕ S^Φ`.
pub(super) fn run(cfg: &SuiteConfig, phi: &YoungFunction<f64>) -> Result<VerificationReport> {
    let (q, p) = proper_exponents(phi)?;
    let constant = 2.0 * p / (q - 1.0);
    let ctx = cfg.grid.context()?;
    let spec = *ctx.grid();
    let narrow = MixShape { count: 1..=2, radius: 0.5, widths: (0.2, 0.4), complex: false };
    let wide = MixShape { count: 1..=2, radius: 0.5, widths: (0.3, 0.6), complex: false };
    let quarter = ctx.n_fock() / 4;
    let records = run_trials(cfg.trials, |trial| {
        let mut rng = trial_rng(cfg.seed, trial as u64);
        let fm = GaussMix::random(&mut rng, &narrow);
        let am = LowRank::random(&mut rng, 1..=2, 3, 0.8);
        let gm = GaussMix::random(&mut rng, &wide);
        let bm = LowRank::random(&mut rng, 1..=2, 3, 0.8);
        let tag = digest(&(&fm, &am, &gm, &bm));
        let (f, g) = (fm.grid(spec), gm.grid(spec));
        let (a, b) = (am.matrix(&ctx), bm.matrix(&ctx));

        let fg = conv_ff(&f, &g)?;
        let ga = conv_fo(&ctx, &g, &a)?;
        let fb = conv_fo(&ctx, &f, &b)?;
        let ab = ctx.conv_op_op(&a, &b)?;
        let out_fun = fg.add(&ab)?;
        let out_op = &fb + &ga;

        let f1 = f.l1_norm() * MU;
        let a1 = schatten_norm(&a, 1.0);
        let (g_phi, b_phi) = (fun_norm(&g, phi)?, op_norm(&b, phi)?);
        let rhs_fun = f1 * g_phi + a1 * b_phi;
        let rhs_op = f1 * b_phi + a1 * g_phi;
        let bound = constant * cfg.bound_scale;
        let mut out = vec![
            TrialRecord::bounded(trial, "function_part", &tag, bound * rhs_fun, fun_norm(&out_fun, phi)?, Some(rhs_fun), cfg.slack),
            TrialRecord::bounded(trial, "operator_part", &tag, bound * rhs_op, op_norm(&out_op, phi)?, Some(rhs_op), cfg.slack),
        ];

        let left = conv_fo(&ctx, &fg, &a)?;
        let right = ctx.conv_fun_op_truncated(&f, &ga, INTERMEDIATE_RANK_CUT)?.scale_real(MU);
        let assoc = (&left - &right).frobenius_norm() / right.frobenius_norm();
        out.push(TrialRecord::bounded(trial, "associativity", &tag, ASSOCIATIVITY_TOL, assoc, None, 0.0));

        let zero_f = GridFunction::zeros(spec);
        let zero_a = OperatorMatrix::zeros(ctx.n_fock());
        let zf = conv_ff(&zero_f, &g)?.add(&ctx.conv_op_op(&zero_a, &b)?)?;
        let zo = &conv_fo(&ctx, &zero_f, &b)? + &conv_fo(&ctx, &g, &zero_a)?;
        out.push(TrialRecord::bounded(trial, "zero_element", &tag, 0.0, zf.max_abs().max(zo.max_abs()), None, 0.0));

        let weight = [&a, &b, &ga, &fb, &left].iter().map(|m| m.top_weight(quarter)).fold(0.0, f64::max);
        out.push(TrialRecord::bounded(trial, "truncation_guard", &tag, TRUNCATION_WEIGHT, weight, None, 0.0));
        Ok(out)
    })?;
    let parameters = json!({
        "phi": phi,
        "q_phi": q,
        "p_phi": p,
        "constant": constant,
        "bound_scale": cfg.bound_scale,
        "measure": "dz/2pi",
        "associativity_tolerance": ASSOCIATIVITY_TOL,
        "grid": cfg.grid,
        "slack": cfg.slack,
    });
    Ok(VerificationReport::assemble("qha_module", cfg.seed, cfg.trials, parameters, records, 0.1, cfg.slack))
}
