//! Young, quasi-Young and weak Φ-functions.

mod algebra;
mod bound;
mod convexify;
mod exponents;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::solve::solve_increasing;

pub use algebra::{
    collapse_identity_check, construct_phi, interpolate, interpolate_pair, theta_solver,
    to_sampled, verify_young_relation, young_relation_target, SimplexPoint,
};
pub use bound::{strong_type_bound, BoundSpec};
pub use convexify::{check_equivalence, convexify};
pub use exponents::{doubling_constant, exponents, is_delta2};

/// Closed-form family tags. JSON form is `{"family": <tag>, ...params}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", bound(serialize = "T: Real", deserialize = "T: Real"))]
pub enum Family<T: Real> {
    /// `t^p`
    Power { p: T },
    /// `t^p (log(1+t))^a`
    PowerLog { p: T, a: T },
    /// `t^p_low` up to the breakpoint, then continued as a multiple of `t^p_high`.
    PiecewisePower { p_low: T, p_high: T, breakpoint: T },
    /// `inner(t^r)`
    Scaled { inner: Box<YoungFunction<T>>, r: T },
    /// Knots `t` (increasing, positive) with nondecreasing positive values,
    /// joined linearly in log-log coordinates. Values may be `inf`.
    Sampled { t: Vec<T>, values: Vec<T> },
    /// Defined through its left-inverse `s^scale_exponent · Π inv_k(s)^w_k`.
    InverseProduct {
        scale_exponent: T,
        factors: Vec<(YoungFunction<T>, T)>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(
    from = "Family<T>",
    into = "Family<T>",
    bound(serialize = "T: Real", deserialize = "T: Real")
)]
pub struct YoungFunction<T: Real> {
    family: Family<T>,
    exponents: OnceLock<std::result::Result<(T, T), Error>>,
}

impl<T: Real> From<Family<T>> for YoungFunction<T> {
    fn from(family: Family<T>) -> Self {
        Self {
            family,
            exponents: OnceLock::new(),
        }
    }
}

impl<T: Real> From<YoungFunction<T>> for Family<T> {
    fn from(phi: YoungFunction<T>) -> Self {
        phi.family
    }
}

impl<T: Real> PartialEq for YoungFunction<T> {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
    }
}

impl<T: Real> YoungFunction<T> {
    pub fn power(p: T) -> Self {
        assert!(p > T::zero(), "power exponent must be positive");
        Family::Power { p }.into()
    }

    pub fn power_log(p: T, a: T) -> Self {
        assert!(
            p > T::zero() && p + a > T::zero(),
            "PowerLog needs p > 0 and p + a > 0"
        );
        Family::PowerLog { p, a }.into()
    }

    pub fn piecewise_power(p_low: T, p_high: T, breakpoint: T) -> Self {
        assert!(p_low > T::zero() && p_high > T::zero() && breakpoint > T::zero());
        Family::PiecewisePower {
            p_low,
            p_high,
            breakpoint,
        }
        .into()
    }

    /// Quasi-Young `inner(t^r)`. Powers collapse to `Power{p r}`.
    pub fn scaled(inner: Self, r: T) -> Self {
        assert!(r > T::zero() && r <= T::one(), "r must lie in (0, 1]");
        if r == T::one() {
            return inner;
        }
        match inner.family {
            Family::Power { p } => Self::power(p * r),
            Family::Scaled { inner, r: r0 } => Self::scaled(*inner, r0 * r),
            _ => Family::Scaled {
                inner: Box::new(inner),
                r,
            }
            .into(),
        }
    }

    pub fn sampled(t: Vec<T>, values: Vec<T>) -> Result<Self> {
        if t.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: t.len(),
                got: values.len(),
            });
        }
        if t.len() < 2 {
            return Err(Error::InvalidInput("need at least two knots".into()));
        }
        if t[0] <= T::zero() || t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(
                "knots must be positive and increasing".into(),
            ));
        }
        if values.iter().any(|v| !(*v > T::zero())) || values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidInput(
                "values must be positive and nondecreasing".into(),
            ));
        }
        let last = values.len() - 1;
        if !(values[1] > values[0])
            || (values[last].is_finite() && !(values[last] > values[last - 1]))
        {
            return Err(Error::InvalidInput(
                "end segments must be strictly increasing".into(),
            ));
        }
        Ok(Family::Sampled { t, values }.into())
    }

    /// Builds the function whose left-inverse is `s^e · Π inv_k(s)^w_k`.
    ///
    /// Nested inverse products and power factors are folded, so the stored
    /// form is always one level deep.
    pub fn inverse_product(scale_exponent: T, factors: Vec<(YoungFunction<T>, T)>) -> Self {
        let mut e = scale_exponent;
        let mut flat: Vec<(YoungFunction<T>, T)> = Vec::new();
        for (phi, w) in factors {
            if w == T::zero() {
                continue;
            }
            match phi.family {
                Family::Power { p } => e = e + w / p,
                Family::InverseProduct {
                    scale_exponent,
                    factors,
                } => {
                    e = e + w * scale_exponent;
                    for (inner, wi) in factors {
                        push_factor(&mut flat, inner, w * wi);
                    }
                }
                Family::Scaled { inner, r } => push_factor(&mut flat, *inner, w / r),
                family => push_factor(&mut flat, family.into(), w),
            }
        }
        if flat.is_empty() && e > T::zero() {
            return Self::power(T::one() / e);
        }
        Family::InverseProduct {
            scale_exponent: e,
            factors: flat,
        }
        .into()
    }

    pub fn family(&self) -> &Family<T> {
        &self.family
    }

    /// Quasi-Young exponent; `1` for everything not built by [`Self::scaled`].
    pub fn r(&self) -> T {
        match &self.family {
            Family::Scaled { inner, r } => *r * inner.r(),
            _ => T::one(),
        }
    }

    /// `Φ(t)`, possibly `inf`.
    pub fn evaluate(&self, t: T) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        if t.is_infinite() {
            return T::infinity();
        }
        match &self.family {
            Family::Power { p } => t.powf(*p),
            Family::PowerLog { p, a } => t.powf(*p) * t.ln_1p().powf(*a),
            Family::PiecewisePower {
                p_low,
                p_high,
                breakpoint,
            } => {
                if t <= *breakpoint {
                    t.powf(*p_low)
                } else {
                    breakpoint.powf(*p_low) * (t / *breakpoint).powf(*p_high)
                }
            }
            Family::Scaled { inner, r } => inner.evaluate(t.powf(*r)),
            Family::Sampled { t: knots, values } => sampled_eval(knots, values, t),
            Family::InverseProduct { .. } => {
                let lt = t.ln();
                let u = solve_increasing(
                    |v: T| {
                        let s = v.exp();
                        (self.ln_inverse_product(s), self.inverse_elasticity(s))
                    },
                    lt,
                    lt,
                    T::lit(1500.0),
                );
                u.exp()
            }
        }
    }

    /// `t Φ'₊(t) / Φ(t)` for `t > 0`.
    pub fn elasticity(&self, t: T) -> T {
        match &self.family {
            Family::Power { p } => *p,
            Family::PowerLog { p, a } => *p + *a * log_ratio(t),
            Family::PiecewisePower {
                p_low,
                p_high,
                breakpoint,
            } => {
                if t < *breakpoint {
                    *p_low
                } else {
                    *p_high
                }
            }
            Family::Scaled { inner, r } => *r * inner.elasticity(t.powf(*r)),
            Family::Sampled { t: knots, values } => sampled_slope(knots, values, t),
            Family::InverseProduct { .. } => {
                let s = self.evaluate(t);
                T::one() / self.inverse_elasticity(s)
            }
        }
    }

    /// `Φ'₊(t)`.
    pub fn right_derivative(&self, t: T) -> T {
        if t <= T::zero() {
            let h = T::epsilon().sqrt();
            return self.evaluate(h) / h;
        }
        self.elasticity(t) * self.evaluate(t) / t
    }

    /// `inf{t ≥ 0 : Φ(t) ≥ s}`.
    pub fn left_inverse(&self, s: T) -> T {
        if s <= T::zero() {
            return T::zero();
        }
        if s.is_infinite() {
            return T::infinity();
        }
        match &self.family {
            Family::Power { p } => s.powf(T::one() / *p),
            Family::PowerLog { p, a } => {
                let ls = s.ln();
                let guess = ls / (*p + *a);
                let u = solve_increasing(
                    |u: T| {
                        let t = u.exp();
                        let lnln = if *a == T::zero() {
                            T::zero()
                        } else {
                            *a * ln_ln1p_exp(u)
                        };
                        (*p * u + lnln, self.elasticity(t))
                    },
                    ls,
                    guess,
                    T::lit(1500.0),
                );
                u.exp()
            }
            Family::PiecewisePower {
                p_low,
                p_high,
                breakpoint,
            } => {
                let sb = breakpoint.powf(*p_low);
                if s <= sb {
                    s.powf(T::one() / *p_low)
                } else {
                    *breakpoint * (s / sb).powf(T::one() / *p_high)
                }
            }
            Family::Scaled { inner, r } => inner.left_inverse(s).powf(T::one() / *r),
            Family::Sampled { t, values } => sampled_inverse(t, values, s),
            Family::InverseProduct { .. } => self.ln_inverse_product(s).exp(),
        }
    }

    /// `ln` of the left-inverse for the inverse-product family.
    fn ln_inverse_product(&self, s: T) -> T {
        let Family::InverseProduct {
            scale_exponent,
            factors,
        } = &self.family
        else {
            return self.left_inverse(s).ln();
        };
        let mut acc = *scale_exponent * s.ln();
        for (phi, w) in factors {
            acc = acc + *w * phi.left_inverse(s).ln();
        }
        acc
    }

    /// Elasticity `s (Φ⁻¹)'(s) / Φ⁻¹(s)`.
    pub fn inverse_elasticity(&self, s: T) -> T {
        match &self.family {
            Family::InverseProduct {
                scale_exponent,
                factors,
            } => {
                let mut acc = *scale_exponent;
                for (phi, w) in factors {
                    acc = acc + *w * phi.inverse_elasticity(s);
                }
                acc
            }
            Family::Power { p } => T::one() / *p,
            _ => T::one() / self.elasticity(self.left_inverse(s)),
        }
    }

    /// Parses the JSON form, accepting parameters either inline or under a
    /// `"params"` key, and an optional top-level `"r"` for quasi-Young scaling.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let mut obj = value
            .as_object()
            .cloned()
            .ok_or_else(|| Error::InvalidInput("Young function must be a JSON object".into()))?;
        if let Some(serde_json::Value::Object(params)) = obj.remove("params") {
            for (k, v) in params {
                obj.insert(k, v);
            }
        }
        let is_scaled = obj.get("family").and_then(|f| f.as_str()) == Some("Scaled");
        let outer_r = if is_scaled { None } else { obj.remove("r") };
        if let Some(serde_json::Value::Object(inner)) = obj.get("inner") {
            let parsed = Self::from_json(&serde_json::Value::Object(inner.clone()))?;
            obj.insert(
                "inner".into(),
                serde_json::to_value(&parsed).map_err(json_err)?,
            );
        }
        let family: Family<T> =
            serde_json::from_value(serde_json::Value::Object(obj)).map_err(json_err)?;
        let phi = validate(family)?;
        match outer_r {
            None => Ok(phi),
            Some(r) => {
                let r = r
                    .as_f64()
                    .ok_or_else(|| Error::InvalidInput("r must be a number".into()))?;
                if !(r > 0.0 && r <= 1.0) {
                    return Err(Error::InvalidInput(format!("r = {r} is outside (0, 1]")));
                }
                Ok(Self::scaled(phi, T::lit(r)))
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("Young functions always serialize")
    }
}

/// `t / ((1+t) log(1+t))`, decreasing from 1 at 0 to 0 at infinity.
fn log_ratio<T: Real>(t: T) -> T {
    if t < T::lit(1e-5) {
        T::one() - t / T::lit(2.0) + T::lit(5.0 / 12.0) * t * t
    } else if t > T::lit(1e10) {
        T::one() / ((T::one() + t.recip()) * t.ln_1p())
    } else {
        t / ((T::one() + t) * t.ln_1p())
    }
}

/// `ln(ln(1 + e^u))` without overflow for large `u`.
fn ln_ln1p_exp<T: Real>(u: T) -> T {
    if u > T::lit(30.0) {
        (u + (-u).exp().ln_1p()).ln()
    } else {
        u.exp().ln_1p().ln()
    }
}

fn json_err(e: serde_json::Error) -> Error {
    Error::InvalidInput(e.to_string())
}

fn validate<T: Real>(family: Family<T>) -> Result<YoungFunction<T>> {
    let bad = |m: &str| Err(Error::InvalidInput(m.into()));
    match family {
        Family::Power { p } if !(p > T::zero()) => bad("Power needs p > 0"),
        Family::PowerLog { p, a } if !(p > T::zero() && p + a > T::zero()) => {
            bad("PowerLog needs p > 0 and p + a > 0")
        }
        Family::PiecewisePower {
            p_low,
            p_high,
            breakpoint,
        } if !(p_low > T::zero() && p_high > T::zero() && breakpoint > T::zero()) => {
            bad("PiecewisePower needs positive parameters")
        }
        Family::Scaled { r, .. } if !(r > T::zero() && r <= T::one()) => {
            bad("r must lie in (0, 1]")
        }
        Family::Sampled { t, values } => YoungFunction::sampled(t, values),
        f => Ok(f.into()),
    }
}

fn push_factor<T: Real>(flat: &mut Vec<(YoungFunction<T>, T)>, phi: YoungFunction<T>, w: T) {
    if let Some(slot) = flat.iter_mut().find(|(f, _)| *f == phi) {
        slot.1 = slot.1 + w;
    } else {
        flat.push((phi, w));
    }
}

fn segment_of<T: Real>(knots: &[T], t: T) -> usize {
    // Index i of the segment [knots[i], knots[i+1]) holding t, clamped to the ends.
    let k = knots.partition_point(|x| *x <= t);
    k.saturating_sub(1).min(knots.len() - 2)
}

fn sampled_slope<T: Real>(knots: &[T], values: &[T], t: T) -> T {
    let i = segment_of(knots, t);
    if values[i + 1].is_infinite() {
        return T::infinity();
    }
    (values[i + 1] / values[i]).ln() / (knots[i + 1] / knots[i]).ln()
}

fn sampled_eval<T: Real>(knots: &[T], values: &[T], t: T) -> T {
    let i = segment_of(knots, t);
    if values[i + 1].is_infinite() {
        // Finite up to the last finite knot, then infinite.
        return if t <= knots[i] {
            sampled_eval_finite(knots, values, i, t)
        } else {
            T::infinity()
        };
    }
    sampled_eval_finite(knots, values, i, t)
}

fn sampled_eval_finite<T: Real>(knots: &[T], values: &[T], i: usize, t: T) -> T {
    if values[i + 1].is_infinite() {
        // Only reached for t at or below knots[i]; use the previous segment.
        if i == 0 {
            return values[0] * (t / knots[0]);
        }
        return sampled_eval_finite(knots, values, i - 1, t);
    }
    if t == knots[i] {
        return values[i];
    }
    let slope = (values[i + 1] / values[i]).ln() / (knots[i + 1] / knots[i]).ln();
    values[i] * (t / knots[i]).powf(slope)
}

fn sampled_inverse<T: Real>(knots: &[T], values: &[T], s: T) -> T {
    let n = knots.len();
    let k = values.partition_point(|v| *v < s);
    if k == n {
        // Beyond every knot value: extrapolate with the last finite segment.
        let i = n - 2;
        if values[i + 1].is_infinite() {
            return knots[i + 1];
        }
        let slope = (values[i + 1] / values[i]).ln() / (knots[i + 1] / knots[i]).ln();
        return knots[i + 1] * (s / values[i + 1]).powf(T::one() / slope);
    }
    if k == 0 {
        let slope = (values[1] / values[0]).ln() / (knots[1] / knots[0]).ln();
        return knots[0] * (s / values[0]).powf(T::one() / slope);
    }
    let i = k - 1;
    if values[k].is_infinite() {
        return knots[i];
    }
    let slope = (values[k] / values[i]).ln() / (knots[k] / knots[i]).ln();
    let t = knots[i] * (s / values[i]).powf(T::one() / slope);
    t.min(knots[k])
}

#[cfg(test)]
mod tests;
