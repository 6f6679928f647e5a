use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{tol, Real};
use crate::solve::log_grid;

use super::exponents::{exponents, GRID_HI, GRID_LO};
use super::{Family, YoungFunction};

/// Point of the closed standard simplex. Interpolation accepts boundary points;
/// [`SimplexPoint::is_interior`] tells the two apart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct SimplexPoint<T> {
    theta: Vec<T>,
}

impl<T: Real> SimplexPoint<T> {
    pub fn new(theta: Vec<T>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::InvalidInput("empty simplex point".into()));
        }
        if theta.iter().any(|w| !(*w >= T::zero() && *w <= T::one())) {
            return Err(Error::InvalidInput("weights must lie in [0, 1]".into()));
        }
        let sum: T = theta.iter().copied().sum();
        if (sum - T::one()).abs() > tol::<T>(1e-12) * T::lit(theta.len() as f64) {
            return Err(Error::InvalidInput(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn is_interior(&self) -> bool {
        self.theta.iter().all(|w| *w > T::zero() && *w < T::one())
    }
}

/// `[Φ₁, …, Φₙ]_Θ`, the function with left-inverse `Π (Φ_j⁻¹)^{θ_j}`.
pub fn interpolate<T: Real>(
    phis: &[YoungFunction<T>],
    theta: &SimplexPoint<T>,
) -> Result<YoungFunction<T>> {
    if phis.len() != theta.len() {
        return Err(Error::DimensionMismatch {
            expected: phis.len(),
            got: theta.len(),
        });
    }
    if let Some(j) = theta.theta().iter().position(|w| *w == T::one()) {
        return Ok(phis[j].clone());
    }
    let mut inv = T::zero();
    let mut all_power = true;
    for (phi, w) in phis.iter().zip(theta.theta()) {
        match phi.family() {
            Family::Power { p } => inv = inv + *w / *p,
            _ => all_power = false,
        }
    }
    if all_power {
        return Ok(YoungFunction::power(T::one() / inv));
    }
    let factors = phis
        .iter()
        .cloned()
        .zip(theta.theta().iter().copied())
        .collect();
    Ok(YoungFunction::inverse_product(T::zero(), factors))
}

/// Binary form `[φ₀, φ₁]_θ`.
pub fn interpolate_pair<T: Real>(
    phi0: &YoungFunction<T>,
    phi1: &YoungFunction<T>,
    theta: T,
) -> Result<YoungFunction<T>> {
    let point = SimplexPoint::new(vec![T::one() - theta, theta])?;
    interpolate(&[phi0.clone(), phi1.clone()], &point)
}

fn checked_exponents<T: Real>(psi: &YoungFunction<T>) -> Result<(T, T)> {
    let (q, p) = exponents(psi)?;
    if !p.is_finite() || q <= T::one() {
        return Err(Error::ExponentOutOfRange {
            q: q.as_f64(),
            p: p.as_f64(),
        });
    }
    Ok((q, p))
}

/// Deterministic Θ with `θ_j > 1 − 1/p_{ψ_j}`: each weight gets its lower
/// bound plus a share of the slack proportional to `1/p_{ψ_j}`.
pub fn theta_solver<T: Real>(psis: &[YoungFunction<T>]) -> Result<SimplexPoint<T>> {
    if psis.is_empty() {
        return Err(Error::InvalidInput("no functions given".into()));
    }
    let inv_p: Vec<T> = psis
        .iter()
        .map(|psi| checked_exponents(psi).map(|(_, p)| T::one() / p))
        .collect::<Result<_>>()?;
    let m: Vec<T> = inv_p.iter().map(|ip| T::one() - *ip).collect();
    let big_m: T = m.iter().copied().sum();
    let sum_inv: T = inv_p.iter().copied().sum();
    if big_m >= T::one() {
        return Err(Error::ConditionViolated {
            n: psis.len(),
            sum_inv_p: sum_inv.as_f64(),
        });
    }
    let slack = T::one() - big_m;
    let theta = m
        .iter()
        .zip(&inv_p)
        .map(|(mj, ip)| *mj + slack * *ip / sum_inv)
        .collect();
    SimplexPoint::new(theta)
}

/// `Φ_j` with `Φ_j⁻¹(τ) = ψ⁻¹(τ)^{1/θ} / τ^{(1−θ)/θ}`.
pub fn construct_phi<T: Real>(psi: &YoungFunction<T>, theta_j: T) -> Result<YoungFunction<T>> {
    let (_, p) = exponents(psi)?;
    let threshold = T::one() - T::one() / p;
    if !(theta_j > threshold) || theta_j >= T::one() {
        return Err(Error::InfeasibleTheta {
            theta: theta_j.as_f64(),
            threshold: threshold.as_f64(),
        });
    }
    let e = -(T::one() - theta_j) / theta_j;
    Ok(YoungFunction::inverse_product(
        e,
        vec![(psi.clone(), T::one() / theta_j)],
    ))
}

/// `ψ₀` determined by `s^{n−1} ψ₀⁻¹(s) = Π ψ_j⁻¹(s)`.
pub fn young_relation_target<T: Real>(psis: &[YoungFunction<T>]) -> Result<YoungFunction<T>> {
    let n = psis.len();
    let mut sum_inv = T::zero();
    for psi in psis {
        sum_inv = sum_inv + T::one() / exponents(psi)?.1;
    }
    if !(sum_inv > T::lit((n - 1) as f64)) {
        return Err(Error::ConditionViolated {
            n,
            sum_inv_p: sum_inv.as_f64(),
        });
    }
    let factors = psis.iter().map(|psi| (psi.clone(), T::one())).collect();
    Ok(YoungFunction::inverse_product(
        -T::lit((n - 1) as f64),
        factors,
    ))
}

/// Largest relative residual of `s^{n−1} ψ₀⁻¹(s) = Π ψ_j⁻¹(s)` over
/// `s ∈ [1e-6, 1e6]`.
pub fn verify_young_relation<T: Real>(psi0: &YoungFunction<T>, psis: &[YoungFunction<T>]) -> T {
    let n1 = T::lit(psis.len() as f64 - 1.0);
    log_grid::<T>(1e-6, 1e6, 10_000)
        .into_iter()
        .map(|s| {
            let lhs = s.powf(n1) * psi0.left_inverse(s);
            let rhs = psis
                .iter()
                .fold(T::one(), |acc, psi| acc * psi.left_inverse(s));
            ((lhs - rhs) / lhs).abs()
        })
        .fold(T::zero(), T::max)
}

/// Discrepancy between `[[Φ_{[1]}, Φ]_ρ, Φ_{[1]}]_ν` and `[Φ_{[1]}, Φ]_{ρ(1−ν)}`,
/// compared through their left-inverses on `s ∈ [1e-8, 1e8]`.
pub fn collapse_identity_check<T: Real>(phi: &YoungFunction<T>, rho: T, nu: T) -> Result<T> {
    let linear = YoungFunction::power(T::one());
    let inner = interpolate_pair(&linear, phi, rho)?;
    let lhs = interpolate_pair(&inner, &linear, nu)?;
    let rhs = interpolate_pair(&linear, phi, rho * (T::one() - nu))?;
    Ok(max_inverse_discrepancy(&lhs, &rhs))
}

pub(crate) fn max_inverse_discrepancy<T: Real>(a: &YoungFunction<T>, b: &YoungFunction<T>) -> T {
    log_grid::<T>(GRID_LO, GRID_HI, 10_000)
        .into_iter()
        .map(|s| {
            let (x, y) = (a.left_inverse(s), b.left_inverse(s));
            ((x - y) / y).abs()
        })
        .fold(T::zero(), T::max)
}

/// Samples `Φ` at `knots` log-spaced points of `[1e-8, 1e8]`.
pub fn to_sampled<T: Real>(phi: &YoungFunction<T>, knots: usize) -> Result<YoungFunction<T>> {
    let t: Vec<T> = log_grid(GRID_LO, GRID_HI, knots);
    let values = t.iter().map(|x| phi.evaluate(*x)).collect();
    YoungFunction::sampled(t, values)
}
