use crate::scalar::Real;

use super::OperatorMatrix;

/// Eigenvalues of `(A + Aᴴ)/2` via cyclic Jacobi on the real symmetric
/// embedding `[[Re, −Im], [Im, Re]]`, whose spectrum is that of the Hermitian
/// matrix with every eigenvalue doubled.
pub(super) fn hermitian_eigenvalues<T: Real>(a: &OperatorMatrix<T>) -> Vec<T> {
    let n = a.dim();
    let m = 2 * n;
    let half = T::lit(0.5);
    let mut s = vec![T::zero(); m * m];
    for i in 0..n {
        for j in 0..n {
            let h = (a[(i, j)] + a[(j, i)].conj()) * half;
            s[i * m + j] = h.re;
            s[(i + n) * m + (j + n)] = h.re;
            s[(i + n) * m + j] = h.im;
            s[i * m + (j + n)] = -h.im;
        }
    }
    jacobi_symmetric(&mut s, m);
    let mut ev: Vec<T> = (0..m).map(|i| s[i * m + i]).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev.into_iter().step_by(2).collect()
}

fn jacobi_symmetric<T: Real>(s: &mut [T], m: usize) {
    let eps = T::epsilon();
    for _sweep in 0..100 {
        let off: T = (0..m)
            .flat_map(|i| (0..m).filter(move |j| *j != i).map(move |j| (i, j)))
            .map(|(i, j)| s[i * m + j] * s[i * m + j])
            .sum();
        let diag: T = (0..m).map(|i| s[i * m + i] * s[i * m + i]).sum();
        if off <= eps * eps * diag || off == T::zero() {
            return;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = s[p * m + q];
                if apq == T::zero() {
                    continue;
                }
                let (app, aqq) = (s[p * m + p], s[q * m + q]);
                let theta = (aqq - app) / (apq + apq);
                let t = theta.signum() / (theta.abs() + (T::one() + theta * theta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let sn = t * c;
                for k in 0..m {
                    let (akp, akq) = (s[k * m + p], s[k * m + q]);
                    s[k * m + p] = c * akp - sn * akq;
                    s[k * m + q] = sn * akp + c * akq;
                }
                for k in 0..m {
                    let (apk, aqk) = (s[p * m + k], s[q * m + k]);
                    s[p * m + k] = c * apk - sn * aqk;
                    s[q * m + k] = sn * apk + c * aqk;
                }
            }
        }
    }
}
