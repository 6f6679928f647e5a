use num_complex::Complex;
use rustfft::{FftDirection, FftPlanner};

use crate::error::Result;
use crate::scalar::Real;

use super::{check_same, GridFunction};

/// `(f ∗ g)(w) = ∫ f(z) g(w − z) dz` as a periodic Riemann sum.
///
/// The grid is treated as a torus, so both factors should decay to about
/// 1e-12 of their peak at the boundary or the result picks up wrap-around.
pub fn convolve<T: Real>(f: &GridFunction<T>, g: &GridFunction<T>) -> Result<GridFunction<T>> {
    check_same(&f.spec, &g.spec)?;
    let spec = f.spec;
    let (n, axes) = (spec.n, spec.axes());
    let mut planner = FftPlanner::<T>::new();
    let fwd = planner.plan_fft(n, FftDirection::Forward);
    let inv = planner.plan_fft(n, FftDirection::Inverse);

    let mut a = f.values.clone();
    let mut b = g.values.clone();
    for axis in 0..axes {
        along_axis(&mut a, n, axes, axis, |line| fwd.process(line));
        along_axis(&mut b, n, axes, axis, |line| fwd.process(line));
    }
    for (x, y) in a.iter_mut().zip(&b) {
        *x = *x * *y;
    }
    for axis in 0..axes {
        along_axis(&mut a, n, axes, axis, |line| inv.process(line));
    }
    let norm = spec.cell_volume() / T::from_usize_lossy(spec.len());

    // Index k of the result sits at w = z_k, which is the circular index k + n/2
    // on every axis.
    let half = n / 2;
    let mut values = vec![Complex::new(T::zero(), T::zero()); a.len()];
    for (i, slot) in values.iter_mut().enumerate() {
        let mut idx = i;
        let mut src = 0usize;
        let mut mult = 1usize;
        for _ in 0..axes {
            src += ((idx % n + half) % n) * mult;
            mult *= n;
            idx /= n;
        }
        *slot = a[src] * norm;
    }
    Ok(GridFunction { spec, values })
}

fn along_axis<T: Real>(data: &mut [Complex<T>], n: usize, axes: usize, axis: usize, mut op: impl FnMut(&mut [Complex<T>])) {
    let stride = n.pow((axes - 1 - axis) as u32);
    if stride == 1 {
        for line in data.chunks_mut(n) {
            op(line);
        }
        return;
    }
    let outer = data.len() / (stride * n);
    let mut line = vec![Complex::new(T::zero(), T::zero()); n];
    for o in 0..outer {
        for s in 0..stride {
            let base = o * stride * n + s;
            for (k, slot) in line.iter_mut().enumerate() {
                *slot = data[base + k * stride];
            }
            op(&mut line);
            for (k, v) in line.iter().enumerate() {
                data[base + k * stride] = *v;
            }
        }
    }
}
