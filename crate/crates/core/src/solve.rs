//! Root finding for monotone maps in log-log coordinates, and log grids.

use crate::scalar::{tol, Real};

/// Logarithmically spaced points `lo..=hi`, computed in `f64` and rounded once.
pub fn log_grid<T: Real>(lo: f64, hi: f64, n: usize) -> Vec<T> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|k| {
            let x = if k == 0 {
                lo
            } else if k + 1 == n {
                hi
            } else {
                (a + step * k as f64).exp()
            };
            T::lit(x)
        })
        .collect()
}

/// Solves `g(u) = target` for `u`, where `g` is nondecreasing and returns
/// `(g(u), g'(u))`. Values of `g` may be infinite.
///
/// Newton steps are taken inside a maintained bracket and replaced by bisection
/// whenever they leave it. Returns `-inf`/`+inf` if the target is not crossed
/// inside `|u| <= limit`.
pub fn solve_increasing<T: Real>(g: impl Fn(T) -> (T, T), target: T, guess: T, limit: T) -> T {
    let f = |u: T| {
        let (v, d) = g(u);
        (v - target, d)
    };
    let (f0, d0) = f(guess);
    if f0 == T::zero() {
        return guess;
    }
    // Project once with Newton to get a better centre for bracketing.
    let mut centre = guess;
    if f0.is_finite() && d0.is_finite() && d0 > T::zero() {
        let proj = guess - f0 / d0;
        if proj.is_finite() && proj.abs() < limit {
            centre = proj;
        }
    }
    let (fc, _) = f(centre);
    if fc == T::zero() {
        return centre;
    }
    let up = !(fc > T::zero());
    let mut step = T::lit(0.25);
    let (mut lo, mut hi);
    if up {
        lo = centre;
        loop {
            let cand = centre + step;
            if cand > limit {
                return T::infinity();
            }
            let (fv, _) = f(cand);
            if !(fv < T::zero()) {
                hi = cand;
                break;
            }
            lo = cand;
            step = step + step;
        }
    } else {
        hi = centre;
        loop {
            let cand = centre - step;
            if cand < -limit {
                return T::neg_infinity();
            }
            let (fv, _) = f(cand);
            if !(fv > T::zero()) {
                lo = cand;
                break;
            }
            hi = cand;
            step = step + step;
        }
    }
    let eps = tol::<T>(1e-15);
    let mut u = (lo + hi) / T::lit(2.0);
    for _ in 0..300 {
        let (fv, dv) = f(u);
        if fv == T::zero() {
            return u;
        }
        if fv < T::zero() {
            lo = u;
        } else {
            hi = u;
        }
        if hi - lo <= eps * T::one().max(u.abs()) {
            break;
        }
        let newton = u - fv / dv;
        let next =
            if fv.is_finite() && dv.is_finite() && dv > T::zero() && newton > lo && newton < hi {
                newton
            } else {
                (lo + hi) / T::lit(2.0)
            };
        if (next - u).abs() <= eps * T::one().max(u.abs()) {
            return next;
        }
        u = next;
    }
    (lo + hi) / T::lit(2.0)
}

/// Plain bisection for a predicate that is false below the answer and true
/// above it. `lo` must fail and `hi` must succeed.
pub fn bisect_predicate<T: Real>(mut lo: T, mut hi: T, rel: T, pred: impl Fn(T) -> bool) -> T {
    for _ in 0..400 {
        if hi - lo <= rel * hi.abs() {
            break;
        }
        let mid = if lo > T::zero() && hi / lo > T::lit(4.0) {
            (lo * hi).sqrt()
        } else {
            (lo + hi) / T::lit(2.0)
        };
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_endpoints() {
        let g: Vec<f64> = log_grid(1e-8, 1e8, 17);
        assert_eq!(g[0], 1e-8);
        assert_eq!(g[16], 1e8);
        assert!((g[8] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn solves_cubic_in_log_space() {
        // ln(t^3 + t) at u = ln t.
        let g = |u: f64| {
            let t = u.exp();
            let v = t * t * t + t;
            (v.ln(), (3.0 * t * t * t + t) / v)
        };
        let u = solve_increasing(g, 10.0f64.ln(), 0.0, 800.0);
        let t = u.exp();
        assert!((t * t * t + t - 10.0).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_targets_saturate() {
        let g = |u: f64| ((u.exp()).atan(), 0.1);
        assert_eq!(solve_increasing(g, 2.0, 0.0, 50.0), f64::INFINITY);
    }
}
