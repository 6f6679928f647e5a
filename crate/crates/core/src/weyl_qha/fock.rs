use num_complex::Complex;

use crate::matrix::OperatorMatrix;
use crate::scalar::Real;

/// `√k` and `½ ln k!` for `k < len`.
pub(crate) struct Tables<T> {
    roots: Vec<T>,
    half_ln_fact: Vec<T>,
}

impl<T: Real> Tables<T> {
    pub(crate) fn new(size: usize) -> Self {
        let roots = (0..=size).map(|k| T::from_usize_lossy(k).sqrt()).collect();
        let mut acc = 0.0f64;
        let half_ln_fact = (0..=size)
            .map(|k| {
                if k > 1 {
                    acc += (k as f64).ln();
                }
                T::lit(acc / 2.0)
            })
            .collect();
        Self { roots, half_ln_fact }
    }
}

/// Leading `size × size` block of `D(β) = exp(β a† − β* a)`, row-major into `out`.
///
/// With `x = |β|²` and `k = m − n ≥ 0`,
/// `D_{m,n} = (β/|β|)^k ℓ_n^{(k)}(x)` where `ℓ_n^{(k)} = √(n!/(n+k)!) x^{k/2} e^{−x/2} L_n^{(k)}(x)`;
/// above the diagonal `β/|β|` becomes `−β*/|β|`. The normalised Laguerre
/// functions stay bounded by one and are advanced in `n` by their three-term
/// recurrence, starting from `ℓ_0^{(k)}` evaluated in log space. Every entry of
/// the block is exact: truncation only discards rows and columns.
pub(crate) fn displacement_into<T: Real>(beta: Complex<T>, size: usize, tables: &Tables<T>, out: &mut [Complex<T>]) {
    let zero = Complex::new(T::zero(), T::zero());
    let x = beta.norm_sqr();
    if x == T::zero() {
        for (idx, v) in out[..size * size].iter_mut().enumerate() {
            *v = if idx / size == idx % size { Complex::new(T::one(), T::zero()) } else { zero };
        }
        return;
    }
    let r = tables.roots.as_slice();
    let half = T::lit(0.5);
    let ln_x = x.ln();
    let unit_lower = beta / x.sqrt();
    let unit_upper = -beta.conj() / x.sqrt();
    let (mut ph_lo, mut ph_up) = (Complex::new(T::one(), T::zero()), Complex::new(T::one(), T::zero()));
    for k in 0..size {
        let kf = T::from_usize_lossy(k);
        let mut prev = T::zero();
        let mut cur = (kf * half * ln_x - x * half - tables.half_ln_fact[k]).exp();
        for n in 0..size - k {
            let m = n + k;
            out[m * size + n] = ph_lo * cur;
            if k > 0 {
                out[n * size + m] = ph_up * cur;
            }
            let nf = T::from_usize_lossy(n);
            let next = ((nf + nf + T::one() + kf - x) * cur - r[n] * r[n + k] * prev) / (r[n + 1] * r[n + k + 1]);
            prev = cur;
            cur = next;
        }
        ph_lo = ph_lo * unit_lower;
        ph_up = ph_up * unit_upper;
    }
}

pub fn displacement<T: Real>(beta: Complex<T>, size: usize) -> OperatorMatrix<T> {
    let tables = Tables::<T>::new(size);
    let mut data = vec![Complex::new(T::zero(), T::zero()); size * size];
    if size > 0 {
        displacement_into(beta, size, &tables, &mut data);
    }
    OperatorMatrix::from_rows(size, data).expect("displacement entries are finite")
}
