use crate::error::{Error, Result};
use crate::scalar::{tol, Real};
use crate::solve::log_grid;

use super::exponents::{GRID_HI, GRID_LO};
use super::YoungFunction;

const KNOTS: usize = 16_001;

/// Convex average `Ψ(t) = ∫₀ᵗ φ(s)/s ds`, returned as a sampled
/// function together with the smallest grid-certified `L` such that
/// `φ(t/L) ≤ Ψ(t) ≤ φ(Lt)`.
pub fn convexify<T: Real>(phi: &YoungFunction<T>) -> Result<(YoungFunction<T>, T)> {
    let knots: Vec<T> = log_grid(GRID_LO, GRID_HI, KNOTS);
    let slack = T::one() + tol::<T>(1e-9);
    let mut best = (T::zero(), T::zero());
    for t in &knots {
        let slope = phi.evaluate(*t) / *t;
        if best.0 > slope * slack {
            return Err(Error::NotAInc1 {
                s: best.1.as_f64(),
                t: t.as_f64(),
                left: best.0.as_f64(),
                right: slope.as_f64(),
            });
        }
        if slope > best.0 {
            best = (slope, *t);
        }
    }

    let t0 = knots[0];
    let mut acc = phi.evaluate(t0) / phi.elasticity(t0);
    let mut values = Vec::with_capacity(KNOTS);
    values.push(acc);
    let integrand = |u: T| phi.evaluate(u.exp());
    for w in knots.windows(2) {
        let (a, b) = (w[0].ln(), w[1].ln());
        acc = acc + adaptive_simpson(&integrand, a, b, 40);
        values.push(acc);
    }

    let mut l = T::one();
    for (t, v) in knots.iter().zip(&values) {
        if !v.is_finite() {
            break;
        }
        let x = phi.left_inverse(*v);
        l = l.max(*t / x).max(x / *t);
    }
    Ok((YoungFunction::sampled(knots, values)?, l))
}

fn simpson<T: Real>(fa: T, fm: T, fb: T, h: T) -> T {
    h / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb)
}

fn adaptive_simpson<T: Real>(f: &impl Fn(T) -> T, a: T, b: T, depth: u32) -> T {
    let two = T::lit(2.0);
    let m = (a + b) / two;
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    refine(f, a, b, fa, fm, fb, whole, depth)
}

#[allow(clippy::too_many_arguments)]
fn refine<T: Real>(
    f: &impl Fn(T) -> T,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    depth: u32,
) -> T {
    let two = T::lit(2.0);
    let m = (a + b) / two;
    let (lm, rm) = ((a + m) / two, (m + b) / two);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= tol::<T>(1e-13) * (left + right).abs() {
        return left + right + diff / T::lit(15.0);
    }
    refine(f, a, m, fa, flm, fm, left, depth - 1) + refine(f, m, b, fm, frm, fb, right, depth - 1)
}

/// Smallest `L = 2^{k/8}`, `k ≤ 64`, with `φ(t/L) ≤ ψ(t) ≤ φ(Lt)` on the log
/// grid; `None` if no such `L` exists.
pub fn check_equivalence<T: Real>(phi: &YoungFunction<T>, psi: &YoungFunction<T>) -> Option<T> {
    let grid: Vec<T> = log_grid(GRID_LO, GRID_HI, 10_000);
    let mut need = T::one();
    for t in &grid {
        let x = phi.left_inverse(psi.evaluate(*t));
        need = need.max(*t / x).max(x / *t);
    }
    if !need.is_finite() {
        return None;
    }
    let slack = T::one() + tol::<T>(1e-12);
    let start = (T::lit(8.0) * need.log2() - T::lit(1e-9))
        .ceil()
        .max(T::zero());
    let mut k = start.to_i32()?;
    while k <= 64 {
        let l = T::lit(2f64.powf(k as f64 / 8.0));
        let ok = grid.iter().all(|t| {
            let v = psi.evaluate(*t);
            phi.evaluate(*t / l) <= v * slack && v <= phi.evaluate(*t * l) * slack
        });
        if ok {
            return Some(l);
        }
        k += 1;
    }
    None
}
