//! Weyl quantization and quantum-harmonic-analysis convolutions for `d = 1`,
//! represented in the Fock basis truncated to `N` levels.
//!
//! Conventions: `z = (x, ξ)`, `α(z) = (x + iξ)/√2`, `W_z = D(α(z))`, and the
//! parity `U = diag((−1)^n)`. Then `⟨0|W_z|0⟩ = e^{−|z|²/4}` and
//!
//! * `op_w(f) = π^{−1} ∫ f(z) W_{2z} U dz`
//! * `sym_w(A)(z) = 2 tr(A W_{2z} U)`
//! * `f ∗ A = ∫ f(z) W_z A W_z† dz`
//! * `(A ∗ B)(z) = tr(A W_z U B U W_z†)`
//!
//! With these, `tr(op_w(f)† op_w(g)) = ⟨f, g⟩ / κ` with `κ = 2π`;
//! [`QhaContext::pairing_factor`] measures `κ` on the grid.

mod fock;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::OperatorMatrix;
use crate::phase_space::{GridFunction, GridSpec};
use crate::rearrangement::{lp_norm, orlicz_norm, singular_values};
use crate::scalar::{tol, Real};
use crate::young_fn::YoungFunction;

pub use fock::displacement;

/// Grid points handled per parallel task; the reduction order is fixed by it,
/// so results do not depend on the thread count.
const CHUNK: usize = 512;

/// Samples below this fraction of the peak are skipped when integrating.
const NEGLIGIBLE: f64 = 1e-20;

/// Boundary decay required of symbols passed to [`QhaContext::op_w`].
pub const BOUNDARY_DECAY: f64 = 1e-12;

/// Largest share of `‖A‖₂²` allowed on the top `N/4` Fock levels.
pub const TRUNCATION_WEIGHT: f64 = 1e-8;

/// Fock truncation plus the phase-space grid used for symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QhaContext<T> {
    n_fock: usize,
    grid: GridSpec<T>,
}

impl<T: Real> QhaContext<T> {
    pub fn new(n_fock: usize, grid: GridSpec<T>) -> Result<Self> {
        if grid.d != 1 {
            return Err(Error::InvalidInput(format!("Fock representation is implemented for d = 1, got d = {}", grid.d)));
        }
        if n_fock < 16 {
            return Err(Error::InvalidInput(format!("Fock truncation must be at least 16, got {n_fock}")));
        }
        // ⟨0|W_z|0⟩ = e^{−|z|²/4} has to fall below the decay guard inside the grid.
        let edge = (-grid.extent * grid.extent / T::lit(4.0)).exp();
        if edge > T::lit(BOUNDARY_DECAY) {
            return Err(Error::InvalidInput(format!("grid extent {} leaves e^(-L^2/4) = {edge} above 1e-12", grid.extent)));
        }
        Ok(Self { n_fock, grid })
    }

    pub fn n_fock(&self) -> usize {
        self.n_fock
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    fn alpha(z: [T; 2]) -> Complex<T> {
        Complex::new(z[0], z[1]) * T::FRAC_1_SQRT_2()
    }

    pub fn weyl_operator(&self, z: [T; 2]) -> OperatorMatrix<T> {
        displacement(Self::alpha(z), self.n_fock)
    }

    pub fn parity(&self) -> OperatorMatrix<T> {
        let signs: Vec<T> = (0..self.n_fock).map(|n| if n % 2 == 0 { T::one() } else { -T::one() }).collect();
        OperatorMatrix::diagonal(&signs)
    }

    /// `W_{2z} U`.
    pub fn displaced_parity(&self, z: [T; 2]) -> OperatorMatrix<T> {
        let two = T::lit(2.0);
        let w = displacement(Self::alpha([two * z[0], two * z[1]]), self.n_fock);
        OperatorMatrix::from_fn(self.n_fock, |i, j| if j % 2 == 0 { w[(i, j)] } else { -w[(i, j)] })
    }

    /// `α_z(A) = W_z A W_z†`.
    pub fn shift(&self, z: [T; 2], a: &OperatorMatrix<T>) -> Result<OperatorMatrix<T>> {
        self.check_dim(a)?;
        let w = self.weyl_operator(z);
        Ok(w.matmul(a).matmul(&w.adjoint()))
    }

    fn check_dim(&self, a: &OperatorMatrix<T>) -> Result<()> {
        if a.dim() != self.n_fock {
            return Err(Error::DimensionMismatch { expected: self.n_fock, got: a.dim() });
        }
        Ok(())
    }

    fn check_grid(&self, f: &GridFunction<T>) -> Result<()> {
        if f.spec() != &self.grid {
            return Err(Error::GridMismatch("symbol grid differs from the context grid".into()));
        }
        Ok(())
    }

    fn check_decay(&self, f: &GridFunction<T>) -> Result<()> {
        let ratio = f.boundary_ratio();
        if ratio > tol::<T>(BOUNDARY_DECAY) {
            return Err(Error::BoundaryDecayViolated(ratio.as_f64()));
        }
        Ok(())
    }

    /// Indices and coordinates of the samples that contribute to an integral.
    fn support(&self, f: &GridFunction<T>) -> Vec<(usize, [T; 2])> {
        let cut = f.max_abs() * T::lit(NEGLIGIBLE);
        let mut z = [T::zero(); 2];
        f.values()
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() > cut)
            .map(|(i, _)| {
                self.grid.point(i, &mut z);
                (i, z)
            })
            .collect()
    }

    /// Sums `term(f(z), D(β(s z)), acc)` over the support in fixed chunks.
    fn integrate<F>(&self, f: &GridFunction<T>, scale_beta: T, term: F) -> OperatorMatrix<T>
    where
        F: Fn(Complex<T>, &[Complex<T>], &mut [Complex<T>]) + Sync,
    {
        let n = self.n_fock;
        let pts = self.support(f);
        let tables = fock::Tables::<T>::new(n);
        let zero = Complex::new(T::zero(), T::zero());
        let partials: Vec<Vec<Complex<T>>> = pts
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut acc = vec![zero; n * n];
                let mut d = vec![zero; n * n];
                for (i, z) in chunk {
                    let beta = Self::alpha([z[0] * scale_beta, z[1] * scale_beta]);
                    fock::displacement_into(beta, n, &tables, &mut d);
                    term(f.values()[*i], &d, &mut acc);
                }
                acc
            })
            .collect();
        let mut total = vec![zero; n * n];
        for p in partials {
            for (t, v) in total.iter_mut().zip(p) {
                *t = *t + v;
            }
        }
        OperatorMatrix::from_rows(n, total).expect("finite sums")
    }

    /// Weyl quantization; rejects symbols that have not decayed to 1e-12 of
    /// their peak on the grid boundary.
    pub fn op_w(&self, f: &GridFunction<T>) -> Result<OperatorMatrix<T>> {
        self.check_grid(f)?;
        self.check_decay(f)?;
        Ok(self.op_w_unchecked(f))
    }

    /// [`Self::op_w`] without the decay guard, for symbols such as `f ≡ 1`
    /// whose low Fock block still converges.
    pub fn op_w_unchecked(&self, f: &GridFunction<T>) -> OperatorMatrix<T> {
        assert_eq!(f.spec(), &self.grid, "symbol grid differs from the context grid");
        let n = self.n_fock;
        let w = self.grid.cell_volume() / T::PI();
        self.integrate(f, T::lit(2.0), |fz, d, acc| {
            let c = fz * w;
            for (k, (a, dk)) in acc.iter_mut().zip(d).enumerate() {
                if (k % n).is_multiple_of(2) {
                    *a = *a + *dk * c;
                } else {
                    *a = *a - *dk * c;
                }
            }
        })
    }

    /// Weyl symbol sampled on the context grid.
    pub fn sym_w(&self, a: &OperatorMatrix<T>) -> Result<GridFunction<T>> {
        self.check_dim(a)?;
        let n = self.n_fock;
        let two = T::lit(2.0);
        let values = self.pointwise(two, |d| {
            // tr(A D U) = Σ_{m,k} A_{k m} D_{m k} (−1)^k
            let mut s = Complex::new(T::zero(), T::zero());
            for (idx, dk) in d.iter().enumerate() {
                let (m, k) = (idx / n, idx % n);
                let term = a[(k, m)] * *dk;
                s = if k % 2 == 0 { s + term } else { s - term };
            }
            s * two
        });
        GridFunction::new(self.grid, values)
    }

    /// Evaluates `g(D(β(s z)))` at every grid point.
    fn pointwise<F>(&self, scale_beta: T, g: F) -> Vec<Complex<T>>
    where
        F: Fn(&[Complex<T>]) -> Complex<T> + Sync,
    {
        let n = self.n_fock;
        let total = self.grid.len();
        let tables = fock::Tables::<T>::new(n);
        let zero = Complex::new(T::zero(), T::zero());
        let idx: Vec<usize> = (0..total).collect();
        idx.par_chunks(CHUNK)
            .flat_map_iter(|chunk| {
                let mut d = vec![zero; n * n];
                let mut z = [T::zero(); 2];
                chunk
                    .iter()
                    .map(|i| {
                        self.grid.point(*i, &mut z);
                        fock::displacement_into(Self::alpha([z[0] * scale_beta, z[1] * scale_beta]), n, &tables, &mut d);
                        g(&d)
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    /// `f ∗ A`, via the singular value decomposition of `A` so each grid point
    /// costs `O(rank · N²)`.
    pub fn conv_fun_op(&self, f: &GridFunction<T>, a: &OperatorMatrix<T>) -> Result<OperatorMatrix<T>> {
        self.conv_fun_op_truncated(f, a, T::epsilon())
    }

    /// [`Self::conv_fun_op`] keeping only singular values of `A` above `rel · σ₁`.
    pub fn conv_fun_op_truncated(&self, f: &GridFunction<T>, a: &OperatorMatrix<T>, rel: T) -> Result<OperatorMatrix<T>> {
        self.check_grid(f)?;
        self.check_dim(a)?;
        self.check_decay(f)?;
        let n = self.n_fock;
        let svd = a.svd();
        let rank = svd.rank(rel);
        let (sigma, us, vs) = (&svd.sigma[..rank], &svd.u[..rank], &svd.v[..rank]);
        let h = self.grid.cell_volume();
        Ok(self.integrate(f, T::one(), |fz, d, acc| {
            for k in 0..rank {
                let x = matvec(d, &us[k], n);
                let y = matvec(d, &vs[k], n);
                let c = fz * h * sigma[k];
                for i in 0..n {
                    let xi = x[i] * c;
                    let row = &mut acc[i * n..(i + 1) * n];
                    for (r, yj) in row.iter_mut().zip(&y) {
                        *r = *r + xi * yj.conj();
                    }
                }
            }
        }))
    }

    /// `A ∗ B` sampled on the grid.
    pub fn conv_op_op(&self, a: &OperatorMatrix<T>, b: &OperatorMatrix<T>) -> Result<GridFunction<T>> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        let n = self.n_fock;
        let u = self.parity();
        let ubu = u.matmul(b).matmul(&u);
        let sa = a.svd();
        let sb = ubu.svd();
        let (ra, rb) = (sa.rank(T::epsilon()), sb.rank(T::epsilon()));
        let dot = |p: &[Complex<T>], q: &[Complex<T>]| {
            p.iter().zip(q).fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * *y)
        };
        let values = self.pointwise(T::one(), |d| {
            // tr(A W x yᴴ W†) = (W y)ᴴ A (W x)
            let mut s = Complex::new(T::zero(), T::zero());
            for l in 0..rb {
                let p = matvec(d, &sb.u[l], n);
                let q = matvec(d, &sb.v[l], n);
                for k in 0..ra {
                    s = s + dot(&sa.v[k], &p) * dot(&sa.u[k], &q).conj() * (sa.sigma[k] * sb.sigma[l]);
                }
            }
            s
        });
        GridFunction::new(self.grid, values)
    }

    /// `⟨f, g⟩ / tr(op_w(f)† op_w(g))` for two centred Gaussians, which should be
    /// `2π` up to quadrature and truncation error.
    pub fn pairing_factor(&self) -> Result<T> {
        let f = GridFunction::gaussian(self.grid, &[T::zero(), T::zero()], T::one(), T::one());
        let g = GridFunction::gaussian(self.grid, &[T::lit(0.3), T::lit(-0.2)], T::lit(0.75), T::one());
        let (a, b) = (self.op_w(&f)?, self.op_w(&g)?);
        let lhs = f.inner(&g)?;
        let rhs = a.adjoint().trace_product(&b);
        Ok((lhs / rhs).re)
    }

    /// Whether `a` keeps at most [`TRUNCATION_WEIGHT`] of its mass on the top
    /// `N/4` Fock levels.
    pub fn truncation_ok(&self, a: &OperatorMatrix<T>) -> bool {
        a.top_weight(self.n_fock / 4) <= T::lit(TRUNCATION_WEIGHT)
    }
}

fn matvec<T: Real>(d: &[Complex<T>], v: &[Complex<T>], n: usize) -> Vec<Complex<T>> {
    d.chunks_exact(n)
        .map(|row| row.iter().zip(v).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + *a * *b))
        .collect()
}

/// Schatten–Orlicz norm: the Orlicz norm of the singular values with unit weights.
pub fn schatten_orlicz_norm<T: Real>(a: &OperatorMatrix<T>, phi: &YoungFunction<T>) -> Result<T> {
    orlicz_norm(&singular_values(a), phi)
}

pub fn schatten_norm<T: Real>(a: &OperatorMatrix<T>, p: T) -> T {
    lp_norm(&singular_values(a), p)
}
