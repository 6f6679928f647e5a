//! Distribution functions, decreasing rearrangements and the norms built on them.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::OperatorMatrix;
use crate::scalar::{tol, Real};
use crate::young_fn::YoungFunction;

/// Values of a simple function's modulus with the measure of each level set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct MeasureSamples<T> {
    pairs: Vec<(T, T)>,
}

impl<T: Real> MeasureSamples<T> {
    pub fn new(pairs: Vec<(T, T)>) -> Result<Self> {
        for (v, m) in &pairs {
            if !(*v >= T::zero()) || !v.is_finite() {
                return Err(Error::InvalidInput(format!("sample value {v} is not a finite nonnegative number")));
            }
            if !(*m > T::zero()) || !m.is_finite() {
                return Err(Error::InvalidInput(format!("sample measure {m} is not finite and positive")));
            }
        }
        Ok(Self { pairs })
    }

    /// Every value with the same measure, as for matrix spectra or grid cells.
    pub fn uniform(values: impl IntoIterator<Item = T>, measure: T) -> Result<Self> {
        Self::new(values.into_iter().map(|v| (v, measure)).collect())
    }

    pub fn pairs(&self) -> &[(T, T)] {
        &self.pairs
    }
}

/// Non-increasing right-continuous step function: `v_i` on `[t_{i−1}, t_i)`
/// with `t_0 = 0`, and zero beyond the last break.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct StepFunction<T> {
    breaks: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> StepFunction<T> {
    pub fn zero() -> Self {
        Self { breaks: Vec::new(), values: Vec::new() }
    }

    /// Checked constructor; values must be strictly decreasing and breaks
    /// strictly increasing.
    pub fn new(breaks: Vec<T>, values: Vec<T>) -> Result<Self> {
        if breaks.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: breaks.len(), got: values.len() });
        }
        let mut prev = T::zero();
        for t in &breaks {
            if !(*t > prev) || !t.is_finite() {
                return Err(Error::InvalidInput("breakpoints must be finite and strictly increasing".into()));
            }
            prev = *t;
        }
        if values.iter().any(|v| !(*v >= T::zero()) || !v.is_finite()) || values.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::InvalidInput("values must be finite, nonnegative and strictly decreasing".into()));
        }
        Ok(Self { breaks, values })
    }

    /// `v` on `[0, m)`.
    pub fn indicator(m: T, v: T) -> Self {
        Self::new(vec![m], vec![v]).expect("positive measure and value")
    }

    pub fn breaks(&self) -> &[T] {
        &self.breaks
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `(Δt_i, v_i)` for every block.
    pub fn blocks(&self) -> impl Iterator<Item = (T, T)> + '_ {
        let mut prev = T::zero();
        self.breaks.iter().zip(&self.values).map(move |(t, v)| {
            let dt = *t - prev;
            prev = *t;
            (dt, *v)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == T::zero())
    }

    pub fn top(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    /// `μ_t`.
    pub fn eval(&self, t: T) -> T {
        let i = self.breaks.partition_point(|b| *b <= t);
        self.values.get(i).copied().unwrap_or_else(T::zero)
    }

    /// `λ_α = |{μ > α}|`.
    pub fn distribution(&self, alpha: T) -> T {
        let k = self.values.partition_point(|v| *v > alpha);
        if k == 0 {
            T::zero()
        } else {
            self.breaks[k - 1]
        }
    }

    pub fn scale(&self, a: T) -> Self {
        if a == T::zero() {
            return Self::zero();
        }
        Self { breaks: self.breaks.clone(), values: self.values.iter().map(|v| *v * a.abs()).collect() }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::InvalidInput(e.to_string());
        wr.write_record(["t_break", "value"]).map_err(io)?;
        for (t, v) in self.breaks.iter().zip(&self.values) {
            wr.write_record([t.to_string(), v.to_string()]).map_err(io)?;
        }
        wr.flush().map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let (mut breaks, mut values) = (Vec::new(), Vec::new());
        for rec in rd.records() {
            let rec = rec.map_err(|e| Error::InvalidInput(e.to_string()))?;
            if rec.len() != 2 {
                return Err(Error::InvalidInput("expected columns t_break,value".into()));
            }
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map(T::lit)
                    .map_err(|e| Error::InvalidInput(format!("{s:?}: {e}")))
            };
            breaks.push(parse(&rec[0])?);
            values.push(parse(&rec[1])?);
        }
        Self::new(breaks, values)
    }
}

/// Total measure of the samples with value above `alpha`.
pub fn distribution<T: Real>(samples: &MeasureSamples<T>, alpha: T) -> T {
    samples.pairs.iter().filter(|(v, _)| *v > alpha).map(|(_, m)| *m).sum()
}

/// Decreasing rearrangement; equal values merge into one block.
pub fn rearrange<T: Real>(samples: &MeasureSamples<T>) -> StepFunction<T> {
    let mut pairs = samples.pairs.clone();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut breaks: Vec<T> = Vec::new();
    let mut values: Vec<T> = Vec::new();
    let mut acc = T::zero();
    for (v, m) in pairs {
        acc = acc + m;
        match values.last() {
            Some(last) if *last == v => *breaks.last_mut().unwrap() = acc,
            _ => {
                values.push(v);
                breaks.push(acc);
            }
        }
    }
    StepFunction { breaks, values }
}

/// `N(c) = Σ Δt_i Φ(v_i / c)`.
pub fn modular<T: Real>(mu: &StepFunction<T>, phi: &YoungFunction<T>, c: T) -> T {
    mu.blocks().map(|(dt, v)| if v == T::zero() { T::zero() } else { dt * phi.evaluate(v / c) }).sum()
}

/// Smallest `c` for which `fits(c)` holds, given that `fits` is monotone in `c`.
/// Starts from `c0`, widens by factors of two, then bisects to full precision.
fn smallest_scale<T: Real>(c0: T, fits: impl Fn(T) -> bool) -> Result<T> {
    let two = T::lit(2.0);
    let (mut lo, mut hi);
    if fits(c0) {
        hi = c0;
        lo = c0 / two;
        let mut steps = 0;
        while fits(lo) {
            hi = lo;
            lo = lo / two;
            steps += 1;
            if steps > 2000 || lo == T::zero() {
                return Ok(T::zero());
            }
        }
    } else {
        lo = c0;
        hi = c0 * two;
        let mut steps = 0;
        while !fits(hi) {
            lo = hi;
            hi = hi * two;
            steps += 1;
            if steps > 2000 || hi.is_infinite() {
                return Err(Error::Unbounded);
            }
        }
    }
    let rel = tol::<T>(1e-15);
    for _ in 0..200 {
        if hi - lo <= rel * hi {
            break;
        }
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if fits(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn initial_scale<T: Real>(mu: &StepFunction<T>, phi: &YoungFunction<T>) -> T {
    let m = *mu.breaks.last().unwrap();
    let x = phi.left_inverse(m.recip());
    let c0 = mu.top() / x;
    if c0.is_finite() && c0 > T::zero() {
        c0
    } else {
        mu.top()
    }
}

/// Luxemburg-type norm `inf{c > 0 : N(c) ≤ 1}`.
pub fn orlicz_norm<T: Real>(mu: &StepFunction<T>, phi: &YoungFunction<T>) -> Result<T> {
    if mu.is_zero() {
        return Ok(T::zero());
    }
    let c = root_scale(initial_scale(mu, phi), |c| modular(mu, phi, c))?;
    debug_assert!(modular(mu, phi, c) <= T::one());
    Ok(c)
}

/// Smallest `c` with `n(c) ≤ 1` for a decreasing modular `n`. After bracketing,
/// an Illinois secant on `ln n` against `ln c` (close to linear for Δ₂
/// functions) replaces bisection, with bisection as the fallback step.
fn root_scale<T: Real>(c0: T, n: impl Fn(T) -> T) -> Result<T> {
    let two = T::lit(2.0);
    let mut hi = c0;
    let mut lo;
    let mut n_hi = n(hi);
    let mut steps = 0;
    if n_hi <= T::one() {
        loop {
            lo = hi / two;
            let n_lo = n(lo);
            if n_lo > T::one() {
                break;
            }
            hi = lo;
            n_hi = n_lo;
            steps += 1;
            if steps > 2000 || lo == T::zero() {
                return Ok(T::zero());
            }
        }
    } else {
        loop {
            lo = hi;
            hi = hi * two;
            n_hi = n(hi);
            if n_hi <= T::one() {
                break;
            }
            steps += 1;
            if steps > 2000 || hi.is_infinite() {
                return Err(Error::Unbounded);
            }
        }
    }
    let g = |v: T| if v > T::zero() { v.ln() } else { -T::infinity() };
    let (mut g_lo, mut g_hi) = (g(n(lo)), g(n_hi));
    let rel = tol::<T>(1e-15);
    let mut side = 0i8;
    for _ in 0..200 {
        if hi - lo <= rel * hi {
            break;
        }
        let (x_lo, x_hi) = (lo.ln(), hi.ln());
        let secant = x_hi - g_hi * (x_hi - x_lo) / (g_hi - g_lo);
        let x = if g_lo.is_finite() && g_hi.is_finite() && secant > x_lo && secant < x_hi {
            secant
        } else {
            (x_lo + x_hi) / two
        };
        let mut c = x.exp();
        if c <= lo || c >= hi {
            c = (lo + hi) / two;
            if c <= lo || c >= hi {
                break;
            }
        }
        let nc = n(c);
        if nc <= T::one() {
            hi = c;
            g_hi = g(nc);
            if side == 1 {
                g_lo = g_lo / two;
            }
            side = 1;
        } else {
            lo = c;
            g_lo = g(nc);
            if side == -1 {
                g_hi = g_hi / two;
            }
            side = -1;
        }
    }
    Ok(hi)
}

/// `inf{c > 0 : t Φ(μ_t / c) ≤ 1 for all t}`, checked at the right end of each block.
pub fn weak_orlicz_norm<T: Real>(mu: &StepFunction<T>, phi: &YoungFunction<T>) -> Result<T> {
    if mu.is_zero() {
        return Ok(T::zero());
    }
    let fits = |c: T| {
        mu.breaks
            .iter()
            .zip(&mu.values)
            .all(|(t, v)| *v == T::zero() || *t * phi.evaluate(*v / c) <= T::one())
    };
    smallest_scale(initial_scale(mu, phi), fits)
}

/// `(∫ μ_t^p dt)^{1/p}`; `p = inf` gives the top value.
pub fn lp_norm<T: Real>(mu: &StepFunction<T>, p: T) -> T {
    let top = mu.top();
    if p.is_infinite() || top == T::zero() {
        return top;
    }
    let s: T = mu.blocks().map(|(dt, v)| dt * (v / top).powf(p)).sum();
    top * s.powf(p.recip())
}

/// `sup_t t^{1/p} μ_t`, cross-checked against `sup_s s λ_s^{1/p}`.
pub fn weak_lp_norm<T: Real>(mu: &StepFunction<T>, p: T) -> T {
    let ip = p.recip();
    let mu_form = mu.breaks.iter().zip(&mu.values).map(|(t, v)| t.powf(ip) * *v).fold(T::zero(), T::max);
    // λ is constant on [v_{i+1}, v_i); the supremum is the left limit at v_i.
    let lambda_form = mu
        .values
        .iter()
        .map(|v| {
            let below: T = mu.blocks().filter(|(_, w)| *w >= *v).map(|(dt, _)| dt).sum();
            *v * below.powf(ip)
        })
        .fold(T::zero(), T::max);
    debug_assert!((mu_form - lambda_form).abs() <= tol::<T>(1e-12) * mu_form.max(T::min_positive_value()));
    mu_form
}

/// Singular values with unit measures.
pub fn singular_values<T: Real>(matrix: &OperatorMatrix<T>) -> StepFunction<T> {
    let sigma = matrix.svd().sigma;
    rearrange(&MeasureSamples::uniform(sigma, T::one()).expect("singular values are finite"))
}

#[cfg(test)]
mod tests;
