use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::solve::log_grid;

use super::{Family, YoungFunction};

pub(crate) const GRID_LO: f64 = 1e-8;
pub(crate) const GRID_HI: f64 = 1e8;
const GRID_POINTS: usize = 100_000;
const DIVERGENCE: f64 = 1e6;

/// `(q_Φ, p_Φ)`: infimum and supremum of `t Φ'₊(t) / Φ(t)`.
///
/// Closed-form families are exact. Sampled functions use one-sided differences
/// on a log grid over `[1e-8, 1e8]`; inverse products use the analytic
/// elasticity of their inverse on the matching range of `s`. `p = inf` once
/// the ratio passes `1e6` or `Φ` becomes infinite on the grid.
pub fn exponents<T: Real>(phi: &YoungFunction<T>) -> Result<(T, T)> {
    phi.exponents.get_or_init(|| compute(phi)).clone()
}

pub fn is_delta2<T: Real>(phi: &YoungFunction<T>) -> bool {
    matches!(exponents(phi), Ok((_, p)) if p.is_finite())
}

fn compute<T: Real>(phi: &YoungFunction<T>) -> Result<(T, T)> {
    match phi.family() {
        Family::Power { p } => Ok((*p, *p)),
        Family::PowerLog { p, a } => Ok(((*p).min(*p + *a), (*p).max(*p + *a))),
        Family::PiecewisePower { p_low, p_high, .. } => {
            Ok(((*p_low).min(*p_high), (*p_low).max(*p_high)))
        }
        Family::Scaled { inner, r } => exponents(inner).map(|(q, p)| (q * *r, p * *r)),
        Family::Sampled { .. } => finite_difference(phi),
        Family::InverseProduct { .. } => inverse_grid(phi),
    }
}

fn finish<T: Real>(q: T, p: T) -> (T, T) {
    let p = if p > T::lit(DIVERGENCE) {
        T::infinity()
    } else {
        p
    };
    (q, p)
}

fn finite_difference<T: Real>(phi: &YoungFunction<T>) -> Result<(T, T)> {
    let rel = T::lit(1e-7).max(T::epsilon().sqrt());
    let (mut q, mut p) = (T::infinity(), T::zero());
    for t in log_grid::<T>(GRID_LO, GRID_HI, GRID_POINTS) {
        let v = phi.evaluate(t);
        if v == T::zero() {
            return Err(Error::DegenerateFunction(t.as_f64()));
        }
        if v.is_infinite() {
            return Ok((q.min(p), T::infinity()));
        }
        let h = t * rel;
        let ratio = (phi.evaluate(t + h) - v) / v * t / h;
        if ratio.is_nan() {
            return Err(Error::DegenerateFunction(t.as_f64()));
        }
        q = q.min(ratio);
        p = p.max(ratio);
    }
    Ok(finish(q, p))
}

fn inverse_grid<T: Real>(phi: &YoungFunction<T>) -> Result<(T, T)> {
    let lo = phi.evaluate(T::lit(GRID_LO));
    let hi = phi.evaluate(T::lit(GRID_HI));
    if lo == T::zero() || !lo.is_finite() {
        return Err(Error::DegenerateFunction(GRID_LO));
    }
    let cap = T::max_value().sqrt().sqrt();
    let floor = T::min_positive_value().sqrt().sqrt();
    let (lo, hi) = (lo.max(floor), hi.min(cap));
    if !(hi > lo) {
        return Err(Error::DegenerateFunction(GRID_HI));
    }
    let (mut q, mut p) = (T::infinity(), T::zero());
    for s in log_grid::<T>(lo.as_f64(), hi.as_f64(), GRID_POINTS) {
        let e = phi.inverse_elasticity(s);
        if !(e > T::zero()) {
            return Ok((q.min(p), T::infinity()));
        }
        let ratio = T::one() / e;
        q = q.min(ratio);
        p = p.max(ratio);
    }
    Ok(finish(q, p))
}

/// Grid supremum of `Φ(scale·t)/Φ(t)`; `scale^p` for powers.
///
/// This is a grid certificate, not the exact minimal constant.
pub fn doubling_constant<T: Real>(phi: &YoungFunction<T>, scale: T) -> T {
    if let Family::Power { p } = phi.family() {
        return scale.powf(*p);
    }
    log_grid::<T>(GRID_LO, GRID_HI, 10_000)
        .into_iter()
        .map(|t| phi.evaluate(scale * t) / phi.evaluate(t))
        .fold(T::one(), |a, b| if b > a || b.is_nan() { b } else { a })
}
