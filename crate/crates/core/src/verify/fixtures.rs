use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::matrix::OperatorMatrix;
use crate::phase_space::{GridFunction, GridSpec};
use crate::weyl_qha::QhaContext;

/// Stream `trial` of the ChaCha generator seeded with `seed`.
pub(crate) fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// First 16 hex digits of the SHA-256 of the JSON form of `inputs`.
pub(crate) fn digest<S: Serialize>(inputs: &S) -> String {
    let bytes = serde_json::to_vec(inputs).expect("fixtures serialize");
    hex::encode(&Sha256::digest(&bytes)[..8])
}

fn in_disk(rng: &mut ChaCha8Rng, radius: f64) -> [f64; 2] {
    let r = radius * rng.gen::<f64>().sqrt();
    let phase = rng.gen_range(0.0..2.0 * PI);
    [r * phase.cos(), r * phase.sin()]
}

#[derive(Debug, Clone, Serialize)]
pub(crate) struct Component {
    pub center: [f64; 2],
    pub width: f64,
    pub weight: [f64; 2],
}

/// `Σ w_k exp(−|z − c_k|² / (2 a_k))`.
#[derive(Debug, Clone, Serialize)]
pub(crate) struct GaussMix {
    pub components: Vec<Component>,
}

/// Shape of a random Gaussian mixture.
#[derive(Debug, Clone)]
pub(crate) struct MixShape {
    pub count: RangeInclusive<usize>,
    pub radius: f64,
    pub widths: (f64, f64),
    pub complex: bool,
}

impl GaussMix {
    pub fn random(rng: &mut ChaCha8Rng, shape: &MixShape) -> Self {
        let count = rng.gen_range(shape.count.clone());
        let components = (0..count)
            .map(|_| {
                let center = in_disk(rng, shape.radius);
                let width = rng.gen_range(shape.widths.0..=shape.widths.1);
                let size = rng.gen_range(0.5..1.5);
                let weight = if shape.complex {
                    let phase = rng.gen_range(0.0..2.0 * PI);
                    [size * phase.cos(), size * phase.sin()]
                } else {
                    [size, 0.0]
                };
                Component { center, width, weight }
            })
            .collect();
        Self { components }
    }

    pub fn grid(&self, spec: GridSpec<f64>) -> GridFunction<f64> {
        GridFunction::from_fn(spec, |z| {
            self.components.iter().fold(Complex64::new(0.0, 0.0), |acc, c| {
                let r2 = (z[0] - c.center[0]).powi(2) + (z[1] - c.center[1]).powi(2);
                acc + Complex64::new(c.weight[0], c.weight[1]) * (-r2 / (2.0 * c.width)).exp()
            })
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub(crate) struct Term {
    pub z: [f64; 2],
    pub coeffs: Vec<[f64; 2]>,
    pub weight: f64,
}

/// `Σ w_k W_{z_k} |ψ_k⟩⟨ψ_k| W_{z_k}†` with `ψ_k` a unit vector on the lowest levels.
#[derive(Debug, Clone, Serialize)]
pub(crate) struct LowRank {
    pub terms: Vec<Term>,
}

impl LowRank {
    pub fn random(rng: &mut ChaCha8Rng, rank: RangeInclusive<usize>, levels: usize, radius: f64) -> Self {
        let count = rng.gen_range(rank);
        let terms = (0..count)
            .map(|_| {
                let z = in_disk(rng, radius);
                let raw: Vec<[f64; 2]> = (0..levels).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
                let norm = raw.iter().map(|c| c[0] * c[0] + c[1] * c[1]).sum::<f64>().sqrt();
                let coeffs = raw.iter().map(|c| [c[0] / norm, c[1] / norm]).collect();
                Term { z, coeffs, weight: rng.gen_range(0.5..1.5) }
            })
            .collect();
        Self { terms }
    }

    pub fn matrix(&self, ctx: &QhaContext<f64>) -> OperatorMatrix<f64> {
        let n = ctx.n_fock();
        let mut out = OperatorMatrix::zeros(n);
        for term in &self.terms {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            for (slot, c) in v.iter_mut().zip(&term.coeffs) {
                *slot = Complex64::new(c[0], c[1]);
            }
            let w = ctx.weyl_operator(term.z).apply(&v);
            out.axpy(Complex64::new(1.0, 0.0), &OperatorMatrix::outer(&w, &w, term.weight));
        }
        out
    }
}
