use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::error::Result;
use crate::matrix::OperatorMatrix;
use crate::phase_space::{convolve, GridFunction, GridSpec};
use crate::young_fn::{strong_type_bound, BoundSpec, YoungFunction};

use super::fixtures::{digest, trial_rng};
use super::{fun_norm, op_norm, proper_exponents, run_trials, SuiteConfig, TrialRecord, VerificationReport};

/// Width of the Gaussian kernel of the grid operator.
const KERNEL_WIDTH: f64 = 0.5;

/// Number of displacements averaged by the matrix operator.
const SHIFTS: usize = 4;

#[derive(Debug, Clone, Serialize)]
struct Rect {
    lo: [f64; 2],
    hi: [f64; 2],
    value: f64,
}

fn random_rects(rng: &mut ChaCha8Rng) -> Vec<Rect> {
    let count = rng.gen_range(1..=4);
    (0..count)
        .map(|_| {
            let c = [rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)];
            let half = [rng.gen_range(0.3..2.0), rng.gen_range(0.3..2.0)];
            Rect {
                lo: [c[0] - half[0], c[1] - half[1]],
                hi: [c[0] + half[0], c[1] + half[1]],
                value: rng.gen_range(-3.0..3.0),
            }
        })
        .collect()
}

fn rect_function(spec: GridSpec<f64>, rects: &[Rect]) -> GridFunction<f64> {
    GridFunction::from_real_fn(spec, |z| {
        rects
            .iter()
            .filter(|r| (0..2).all(|i| z[i] >= r.lo[i] && z[i] < r.hi[i]))
            .map(|r| r.value)
            .sum()
    })
}

#[derive(Debug, Clone, Serialize)]
struct SimpleMatrix {
    levels: Vec<f64>,
    assignment: Vec<usize>,
    seed: u64,
}

/// `Σ_i λ_{assignment(i)} v_i v_iᴴ` for an orthonormal basis `v_i` drawn from `seed`;
/// level index `levels.len()` means zero.
fn simple_matrix(rng: &mut ChaCha8Rng, n: usize) -> (SimpleMatrix, OperatorMatrix<f64>) {
    let m = rng.gen_range(1..=4);
    let levels: Vec<f64> = (0..m).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let assignment: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=m)).collect();
    let seed = rng.gen();
    let mut basis_rng = trial_rng(seed, 0);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(basis_rng.gen_range(-1.0..1.0), basis_rng.gen_range(-1.0..1.0)))
            .collect();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.iter().zip(&v).fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= proj * bi;
                }
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    let mut a = OperatorMatrix::zeros(n);
    for (v, level) in basis.iter().zip(&assignment) {
        if *level < m {
            a.axpy(Complex64::new(1.0, 0.0), &OperatorMatrix::outer(v, v, levels[*level]));
        }
    }
    (SimpleMatrix { levels, assignment, seed }, a)
}

/// `T x = h ∗ x` on the grid (`Σ h h_cell = 1`) and `T A = Σ w_k α_{z_k}(A)` on
/// matrices; both are contractions on every `L^p`, so `C₀ = C₁ = 1`.
pub(super) fn run(cfg: &SuiteConfig, phi: &YoungFunction<f64>) -> Result<VerificationReport> {
    let (q, p) = proper_exponents(phi)?;
    let spec_bound = BoundSpec::weak_strong(1.0, 1.0, 1.0);
    let constant = strong_type_bound(&spec_bound, q, p)?;
    let ctx = cfg.grid.context()?;
    let spec = *ctx.grid();
    let n = ctx.n_fock();

    let kernel = GridFunction::gaussian(spec, &[0.0, 0.0], KERNEL_WIDTH, 1.0);
    let kernel = kernel.scale(1.0 / kernel.integral().re);
    let mut op_rng = trial_rng(cfg.seed, u64::MAX);
    let raw: Vec<(f64, [f64; 2])> = (0..SHIFTS)
        .map(|_| (op_rng.gen_range(0.2..1.0), [op_rng.gen_range(-2.0..2.0), op_rng.gen_range(-2.0..2.0)]))
        .collect();
    let total: f64 = raw.iter().map(|(w, _)| w).sum();
    let shifts: Vec<(f64, [f64; 2])> = raw.iter().map(|(w, z)| (w / total, *z)).collect();
    let weyl: Vec<(f64, OperatorMatrix<f64>)> = shifts.iter().map(|(w, z)| (*w, ctx.weyl_operator(*z))).collect();
    let average = |a: &OperatorMatrix<f64>| {
        let mut out = OperatorMatrix::zeros(n);
        for (w, u) in &weyl {
            out.axpy(Complex64::new(*w, 0.0), &u.matmul(a).matmul(&u.adjoint()));
        }
        out
    };

    let bound = constant * cfg.bound_scale;
    let records = run_trials(cfg.trials, |trial| {
        let mut rng = trial_rng(cfg.seed, trial as u64);
        let rects = random_rects(&mut rng);
        let x = rect_function(spec, &rects);
        let tx = convolve(&kernel, &x)?;
        let x_norm = fun_norm(&x, phi)?;
        let grid_tag = digest(&rects);
        let (desc, a) = simple_matrix(&mut rng, n);
        let ta = average(&a);
        let a_norm = op_norm(&a, phi)?;
        let matrix_tag = digest(&desc);
        Ok(vec![
            TrialRecord::bounded(trial, "grid", &grid_tag, bound * x_norm, fun_norm(&tx, phi)?, Some(x_norm), cfg.slack),
            TrialRecord::bounded(trial, "matrix", &matrix_tag, bound * a_norm, op_norm(&ta, phi)?, Some(a_norm), cfg.slack),
        ])
    })?;
    let parameters = json!({
        "phi": phi,
        "q_phi": q,
        "p_phi": p,
        "bound_spec": spec_bound,
        "constant": constant,
        "bound_scale": cfg.bound_scale,
        "kernel_width": KERNEL_WIDTH,
        "shifts": shifts,
        "grid": cfg.grid,
        "slack": cfg.slack,
    });
    Ok(VerificationReport::assemble("interpolation", cfg.seed, cfg.trials, parameters, records, 0.01, cfg.slack))
}
