use num_complex::Complex;

use crate::scalar::Real;

use super::OperatorMatrix;

/// `A = Σ_k σ_k u_k v_kᴴ`, singular values non-increasing.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub sigma: Vec<T>,
    pub u: Vec<Vec<Complex<T>>>,
    pub v: Vec<Vec<Complex<T>>>,
}

impl<T: Real> Svd<T> {
    /// Terms with `σ_k > rel · σ_1`.
    pub fn rank(&self, rel: T) -> usize {
        let top = self.sigma.first().copied().unwrap_or_else(T::zero);
        self.sigma.iter().take_while(|s| **s > rel * top && **s > T::zero()).count()
    }
}

fn dot<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * *y)
}

fn norm_sqr<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// One-sided (Hestenes) Jacobi: orthogonalises the columns of `A V` by plane
/// rotations, accumulating `V`.
pub(super) fn jacobi_svd<T: Real>(a: &OperatorMatrix<T>) -> Svd<T> {
    let n = a.dim();
    let zero = Complex::new(T::zero(), T::zero());
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| a.column(j)).collect();
    let mut vs: Vec<Vec<Complex<T>>> = (0..n)
        .map(|j| {
            let mut e = vec![zero; n];
            e[j] = Complex::new(T::one(), T::zero());
            e
        })
        .collect();
    let eps = T::epsilon() * T::lit(2.0);
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sqr(&cols[p]);
                let beta = norm_sqr(&cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g == T::zero() || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (g + g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, phase, c, s);
                rotate(&mut vs, p, q, phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(T, usize)> = cols.iter().enumerate().map(|(j, c)| (norm_sqr(c).sqrt(), j)).collect();
    order.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)));
    let mut sigma = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    for (s, j) in order {
        sigma.push(s);
        u.push(if s > T::zero() { cols[j].iter().map(|z| *z / s).collect() } else { vec![zero; n] });
        v.push(vs[j].clone());
    }
    Svd { sigma, u, v }
}

/// Real plane rotation of columns `p`, `q` after removing the phase of `⟨x, y⟩` from `y`.
fn rotate<T: Real>(cols: &mut [Vec<Complex<T>>], p: usize, q: usize, phase: Complex<T>, c: T, s: T) {
    let (left, right) = cols.split_at_mut(q);
    let (x, y) = (&mut left[p], &mut right[0]);
    let ph = phase.conj();
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let yp = *yi * ph;
        let nx = *xi * c - yp * s;
        let ny = *xi * s + yp * c;
        *xi = nx;
        *yi = ny;
    }
}
