//! Functions on phase space `R^{2d}` sampled on uniform periodic grids.

mod fft;
pub mod io;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rearrangement::{rearrange, MeasureSamples, StepFunction};
use crate::scalar::{tol, Real};

pub use fft::convolve;

/// Grid `[−L, L)^{2d}` with `n` points per axis at `z_k = −L + k h`, `h = 2L/n`.
/// The origin is the point with every index equal to `n/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct GridSpec<T> {
    pub d: usize,
    pub extent: T,
    pub n: usize,
}

impl<T: Real> GridSpec<T> {
    pub fn new(d: usize, extent: T, n: usize) -> Result<Self> {
        if d == 0 || n < 2 || !n.is_multiple_of(2) || !(extent > T::zero()) {
            return Err(Error::InvalidInput(format!(
                "grid needs d >= 1, even n >= 2 and L > 0 (got d = {d}, n = {n}, L = {extent})"
            )));
        }
        Ok(Self { d, extent, n })
    }

    pub fn axes(&self) -> usize {
        2 * self.d
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.axes() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> T {
        T::lit(2.0) * self.extent / T::from_usize_lossy(self.n)
    }

    pub fn cell_volume(&self) -> T {
        self.h().powi(self.axes() as i32)
    }

    pub fn coord(&self, k: usize) -> T {
        -self.extent + T::from_usize_lossy(k) * self.h()
    }

    /// Coordinates of the flat index `idx` (first axis slowest).
    pub fn point(&self, mut idx: usize, out: &mut [T]) {
        for a in (0..self.axes()).rev() {
            out[a] = self.coord(idx % self.n);
            idx /= self.n;
        }
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<T>> + '_ {
        (0..self.len()).map(move |i| {
            let mut z = vec![T::zero(); self.axes()];
            self.point(i, &mut z);
            z
        })
    }

    pub fn is_boundary(&self, mut idx: usize) -> bool {
        for _ in 0..self.axes() {
            let k = idx % self.n;
            if k == 0 || k == self.n - 1 {
                return true;
            }
            idx /= self.n;
        }
        false
    }

    pub fn origin_index(&self) -> usize {
        (0..self.axes()).fold(0, |acc, _| acc * self.n + self.n / 2)
    }
}

/// Complex samples on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct GridFunction<T> {
    spec: GridSpec<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(spec: GridSpec<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::DimensionMismatch { expected: spec.len(), got: values.len() });
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("grid values must be finite".into()));
        }
        Ok(Self { spec, values })
    }

    pub fn zeros(spec: GridSpec<T>) -> Self {
        Self { spec, values: vec![Complex::new(T::zero(), T::zero()); spec.len()] }
    }

    pub fn from_fn(spec: GridSpec<T>, f: impl Fn(&[T]) -> Complex<T>) -> Self {
        let mut z = vec![T::zero(); spec.axes()];
        let values = (0..spec.len())
            .map(|i| {
                spec.point(i, &mut z);
                f(&z)
            })
            .collect();
        Self { spec, values }
    }

    pub fn from_real_fn(spec: GridSpec<T>, f: impl Fn(&[T]) -> T) -> Self {
        Self::from_fn(spec, |z| Complex::new(f(z), T::zero()))
    }

    /// `amplitude · exp(−|z − center|² / (2a))`.
    pub fn gaussian(spec: GridSpec<T>, center: &[T], a: T, amplitude: T) -> Self {
        assert!(a > T::zero(), "Gaussian width must be positive");
        assert_eq!(center.len(), spec.axes(), "center must have 2d coordinates");
        let two_a = T::lit(2.0) * a;
        Self::from_real_fn(spec, |z| {
            let r2: T = z.iter().zip(center).map(|(x, c)| (*x - *c) * (*x - *c)).sum();
            amplitude * (-r2 / two_a).exp()
        })
    }

    pub fn spec(&self) -> &GridSpec<T> {
        &self.spec
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn at_origin(&self) -> Complex<T> {
        self.values[self.spec.origin_index()]
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self { spec: self.spec, values: self.values.iter().map(|z| f(*z)).collect() }
    }

    pub fn scale(&self, a: T) -> Self {
        self.map(|z| z * a)
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Result<Self> {
        check_same(&self.spec, &other.spec)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        Ok(Self { spec: self.spec, values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    /// `Σ f h^{2d}`.
    pub fn integral(&self) -> Complex<T> {
        let s = self.values.iter().fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + *z);
        s * self.spec.cell_volume()
    }

    pub fn l1_norm(&self) -> T {
        self.values.iter().map(|z| z.norm()).sum::<T>() * self.spec.cell_volume()
    }

    /// `⟨f, g⟩ = Σ conj(f) g h^{2d}`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        check_same(&self.spec, &other.spec)?;
        let s = self
            .values
            .iter()
            .zip(&other.values)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * *b);
        Ok(s * self.spec.cell_volume())
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Largest boundary-cell modulus relative to the largest modulus overall.
    pub fn boundary_ratio(&self) -> T {
        let top = self.max_abs();
        if top == T::zero() {
            return T::zero();
        }
        let edge = (0..self.values.len())
            .filter(|i| self.spec.is_boundary(*i))
            .map(|i| self.values[i].norm())
            .fold(T::zero(), T::max);
        edge / top
    }

    /// Largest difference at points with `|z| ≤ radius`.
    pub fn sup_diff(&self, other: &Self, radius: T) -> Result<T> {
        check_same(&self.spec, &other.spec)?;
        let mut z = vec![T::zero(); self.spec.axes()];
        let mut worst = T::zero();
        for i in 0..self.values.len() {
            self.spec.point(i, &mut z);
            let r2: T = z.iter().map(|x| *x * *x).sum();
            if r2 <= radius * radius {
                worst = worst.max((self.values[i] - other.values[i]).norm());
            }
        }
        Ok(worst)
    }

    /// Moduli with cell measures `h^{2d} · measure_scale`.
    pub fn samples(&self, measure_scale: T) -> MeasureSamples<T> {
        let cell = self.spec.cell_volume() * measure_scale;
        MeasureSamples::uniform(self.values.iter().map(|z| z.norm()), cell).expect("finite grid values")
    }

    pub fn rearrangement(&self, measure_scale: T) -> StepFunction<T> {
        rearrange(&self.samples(measure_scale))
    }
}

pub(crate) fn check_same<T: Real>(a: &GridSpec<T>, b: &GridSpec<T>) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch(format!(
            "(d, L, n) = ({}, {}, {}) vs ({}, {}, {})",
            a.d, a.extent, a.n, b.d, b.extent, b.n
        )));
    }
    Ok(())
}

/// Resampling rule used by [`dilate_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interpolation {
    /// Multilinear; positivity preserving, second order.
    Linear,
    /// Periodic trigonometric interpolation; spectrally accurate for samples
    /// that decay at the boundary.
    Trigonometric,
}

/// `a_t(z) = a(tz)` with trigonometric resampling.
pub fn dilate<T: Real>(a: &GridFunction<T>, t: T) -> Result<GridFunction<T>> {
    dilate_with(a, t, Interpolation::Trigonometric)
}

/// `a_t(z) = a(tz)`; points with `tz` outside `[−L, L − h]` get 0.
pub fn dilate_with<T: Real>(a: &GridFunction<T>, t: T, method: Interpolation) -> Result<GridFunction<T>> {
    if t == T::zero() || !t.is_finite() {
        return Err(Error::ZeroDilation);
    }
    if t == T::one() {
        return Ok(a.clone());
    }
    if t == -T::one() {
        return Ok(reflect(a));
    }
    let spec = a.spec;
    let weights = resampling_matrix(&spec, t, method);
    let mut values = a.values.clone();
    for axis in 0..spec.axes() {
        values = apply_axis(&values, spec.n, spec.axes(), axis, &weights);
    }
    Ok(GridFunction { spec, values })
}

/// `β₋(f)(z) = f(−z)`; the row `k = 0` has no mirror image on the grid and is set to 0.
pub fn reflect<T: Real>(a: &GridFunction<T>) -> GridFunction<T> {
    let spec = a.spec;
    let n = spec.n;
    let zero = Complex::new(T::zero(), T::zero());
    let values = (0..spec.len())
        .map(|i| {
            let mut idx = i;
            let mut src = 0usize;
            let mut mult = 1usize;
            for _ in 0..spec.axes() {
                let k = idx % n;
                if k == 0 {
                    return zero;
                }
                src += (n - k) * mult;
                mult *= n;
                idx /= n;
            }
            a.values[src]
        })
        .collect();
    GridFunction { spec, values }
}

/// `n × n` row-major weights mapping samples on one axis to samples at `t·z_j`.
fn resampling_matrix<T: Real>(spec: &GridSpec<T>, t: T, method: Interpolation) -> Vec<T> {
    let n = spec.n;
    let h = spec.h();
    let nf = T::from_usize_lossy(n);
    let snap = tol::<T>(1e-12);
    let mut w = vec![T::zero(); n * n];
    for j in 0..n {
        let x = t * spec.coord(j);
        let u = (x + spec.extent) / h;
        let nearest = u.round();
        let u = if (u - nearest).abs() < snap { nearest } else { u };
        if u < T::zero() || u > nf - T::one() {
            continue;
        }
        let row = &mut w[j * n..(j + 1) * n];
        if u == u.floor() {
            row[u.to_usize().unwrap()] = T::one();
            continue;
        }
        match method {
            Interpolation::Linear => {
                let k = u.floor();
                let frac = u - k;
                let k = k.to_usize().unwrap();
                row[k] = T::one() - frac;
                row[k + 1] = frac;
            }
            Interpolation::Trigonometric => {
                let pi = T::PI();
                for (k, slot) in row.iter_mut().enumerate() {
                    let y = u - T::from_usize_lossy(k);
                    *slot = (pi * y).sin() / (nf * (pi * y / nf).tan());
                }
            }
        }
    }
    w
}

fn apply_axis<T: Real>(values: &[Complex<T>], n: usize, axes: usize, axis: usize, w: &[T]) -> Vec<Complex<T>> {
    let stride = n.pow((axes - 1 - axis) as u32);
    let outer = values.len() / (stride * n);
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; values.len()];
    let mut line = vec![zero; n];
    for o in 0..outer {
        for s in 0..stride {
            let base = o * stride * n + s;
            for (k, slot) in line.iter_mut().enumerate() {
                *slot = values[base + k * stride];
            }
            for j in 0..n {
                let row = &w[j * n..(j + 1) * n];
                let mut acc = zero;
                for (wk, v) in row.iter().zip(&line) {
                    if *wk != T::zero() {
                        acc = acc + *v * *wk;
                    }
                }
                out[base + j * stride] = acc;
            }
        }
    }
    out
}

/// `|Σ c_j / t_j² − 1| ≤ 1e-12`.
pub fn check_tj_constraint<T: Real>(t: &[T], c: &[T]) -> bool {
    if t.len() != c.len() || t.iter().any(|x| *x == T::zero()) {
        return false;
    }
    let s: T = t.iter().zip(c).map(|(tj, cj)| *cj / (*tj * *tj)).sum();
    (s - T::one()).abs() <= tol::<T>(1e-12)
}

/// Dilation data `(t, c, p, r)` for a dilated convolution chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct DilationSpec<T> {
    pub t: Vec<T>,
    pub c: Vec<T>,
    pub p: Vec<T>,
    pub r: T,
}

impl<T: Real> DilationSpec<T> {
    /// Rejects specs whose `t, c` break `Σ c_j/t_j² = 1`. The exponent relation
    /// is reported by [`Self::exponent_relation_holds`] rather than enforced.
    pub fn new(t: Vec<T>, c: Vec<T>, p: Vec<T>, r: T) -> Result<Self> {
        if t.len() != c.len() || t.len() != p.len() || t.is_empty() {
            return Err(Error::DimensionMismatch { expected: t.len(), got: c.len().min(p.len()) });
        }
        if c.iter().any(|x| x.abs() != T::one()) {
            return Err(Error::InvalidInput("signs c_j must be +1 or -1".into()));
        }
        if p.iter().any(|x| !(*x >= T::one())) || !(r >= T::one()) {
            return Err(Error::InvalidInput("exponents must be at least 1".into()));
        }
        if !check_tj_constraint(&t, &c) {
            let s: T = t.iter().zip(&c).map(|(tj, cj)| *cj / (*tj * *tj)).sum();
            return Err(Error::ConstraintViolated(format!("sum c_j / t_j^2 = {s}, not 1")));
        }
        Ok(Self { t, c, p, r })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// `Σ 1/p_j = n − 1 + 1/r` within 1e-12.
    pub fn exponent_relation_holds(&self) -> bool {
        let s: T = self.p.iter().map(|p| p.recip()).sum();
        let want = T::lit((self.len() - 1) as f64) + self.r.recip();
        (s - want).abs() <= tol::<T>(1e-12)
    }
}

/// `a¹_{t₁} ∗ ⋯ ∗ aⁿ_{tₙ}` through `a¹_{t₁} ∗ ⋯ = |t_p|^{−2d(n−1)} (a¹_{t₁/t_p} ∗ ⋯)_{t_p}`
/// with `t_p` the smallest dilation in modulus, so every inner dilation compresses.
pub fn dilated_convolve<T: Real>(spec: &DilationSpec<T>, funcs: &[GridFunction<T>]) -> Result<GridFunction<T>> {
    if funcs.len() != spec.len() {
        return Err(Error::DimensionMismatch { expected: spec.len(), got: funcs.len() });
    }
    let pivot = spec
        .t
        .iter()
        .copied()
        .fold(spec.t[0], |a, b| if b.abs() < a.abs() { b } else { a });
    let mut acc = dilate(&funcs[0], spec.t[0] / pivot)?;
    for (f, t) in funcs.iter().zip(&spec.t).skip(1) {
        acc = convolve(&acc, &dilate(f, *t / pivot)?)?;
    }
    let d2 = (2 * funcs[0].spec.d * (funcs.len() - 1)) as i32;
    Ok(dilate(&acc, pivot)?.scale(pivot.abs().powi(-d2)))
}

/// Same chain, dilating each factor first and convolving left to right.
pub fn dilated_convolve_direct<T: Real>(spec: &DilationSpec<T>, funcs: &[GridFunction<T>]) -> Result<GridFunction<T>> {
    if funcs.len() != spec.len() {
        return Err(Error::DimensionMismatch { expected: spec.len(), got: funcs.len() });
    }
    let mut acc = dilate(&funcs[0], spec.t[0])?;
    for (f, t) in funcs.iter().zip(&spec.t).skip(1) {
        acc = convolve(&acc, &dilate(f, *t)?)?;
    }
    Ok(acc)
}
