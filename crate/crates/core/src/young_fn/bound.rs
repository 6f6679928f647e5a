use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Data of a quasilinear operator that is weak type `(p0, p0)` with constant
/// `c0` and strong (or weak) type `(p1, p1)` with constant `c1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct BoundSpec<T> {
    pub p0: T,
    /// `inf` selects the `(∞, ∞)` endpoint.
    pub p1: T,
    pub k: T,
    pub c0: T,
    pub c1: T,
    /// Doubling constant of `Φ` at scale `2K`.
    pub c_k: T,
    #[serde(default = "one")]
    pub r: T,
}

fn one<T: Real>() -> T {
    T::one()
}

impl<T: Real> BoundSpec<T> {
    /// `(p0, ∞)` endpoints with `K = 1`.
    pub fn weak_strong(p0: T, c0: T, c1: T) -> Self {
        Self {
            p0,
            p1: T::infinity(),
            k: T::one(),
            c0,
            c1,
            c_k: T::one(),
            r: T::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.p0 > T::zero()
            && self.p1 > self.p0
            && self.k >= T::one()
            && self.c0 > T::zero()
            && self.c1 > T::zero()
            && self.c_k >= T::one()
            && self.r > T::zero()
            && self.r <= T::one();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("invalid bound spec {self:?}")))
        }
    }
}

/// Explicit constant `d` with `‖Tx‖_Φ ≤ d ‖x‖_Φ`.
///
/// With `p1 = ∞` this is `C₁ max{1, (p_Φ/(q_Φ − p₀) (2K C₀/C₁)^{p₀})^{1/r}}`, which
/// for `p₀ = K = r = 1` is `C₁ max{1, 2 p_Φ/(q_Φ − 1) · C₀/C₁}`. For finite `p1`
/// it is `max{1, p_Φ/(q_Φ−p₀)(2KC₀)^{p₀} + p₁p_Φ/(q_Φ(p₁−p_Φ)) C₁^{p₁} C_K}^{1/r}`.
pub fn strong_type_bound<T: Real>(spec: &BoundSpec<T>, q_phi: T, p_phi: T) -> Result<T> {
    spec.validate()?;
    if !(spec.p0 < q_phi && q_phi <= p_phi && p_phi < spec.p1) {
        return Err(Error::ExponentOrderViolated {
            p0: spec.p0.as_f64(),
            q: q_phi.as_f64(),
            p: p_phi.as_f64(),
            p1: spec.p1.as_f64(),
        });
    }
    let two_k = T::lit(2.0) * spec.k;
    let lead = p_phi / (q_phi - spec.p0);
    let root = spec.r.recip();
    if spec.p1.is_infinite() {
        let term = lead * (two_k * spec.c0 / spec.c1).powf(spec.p0);
        return Ok(spec.c1 * T::one().max(term.powf(root)));
    }
    let first = lead * (two_k * spec.c0).powf(spec.p0);
    let second = spec.p1 * p_phi / (q_phi * (spec.p1 - p_phi)) * spec.c1.powf(spec.p1) * spec.c_k;
    Ok(T::one().max(first + second).powf(root))
}
