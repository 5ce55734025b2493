//! Domain types for the bipartite member/center graph and the structured
//! quadratic-form kernels shared by every solver step.
//!
//! The graph has `r` member nodes and `k` center nodes (`p = r + k`). Members
//! attach to centers through the row-stochastic weight matrix `B`; the
//! unobserved center signals are weighted averages of the members through the
//! column-stochastic matrix `A`. Per-sample outer products are never
//! materialized: every contraction is evaluated through its rank-1 form.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Tolerance on simplex sums when validating stochastic matrices: 1e-9 at
/// f64 precision, scaled up for scalars with coarser epsilon.
fn stochastic_sum_tol<T: Real>(dim: usize) -> T {
    let machine = T::default_epsilon() * T::c(64.0) * T::from_usize(dim.max(1)).unwrap();
    T::c(1e-9).max(machine)
}

/// Observed member signals: the `r x n` data matrix plus cached per-sample
/// energies `h_i = x̃_iᵀ x̃_i`.
#[derive(Debug, Clone)]
pub struct MemberData<T: Real> {
    x: DMatrix<T>,
    h: DVector<T>,
}

impl<T: Real> MemberData<T> {
    /// Wraps an `r x n` matrix (rows = member variables, columns = samples).
    pub fn new(x: DMatrix<T>) -> Result<Self> {
        let (r, n) = x.shape();
        if r < 1 || n < 1 {
            return Err(Error::InvalidInput(format!(
                "member data must be at least 1x1, got {r}x{n}"
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("member data contains non-finite entries".into()));
        }
        let h = DVector::from_fn(n, |i, _| x.column(i).norm_squared());
        Ok(Self { x, h })
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.x
    }

    /// Cached sample energies `h_i = ‖x̃_i‖²`.
    pub fn energies(&self) -> &DVector<T> {
        &self.h
    }

    /// Number of member variables (rows).
    pub fn r(&self) -> usize {
        self.x.nrows()
    }

    /// Number of samples (columns).
    pub fn n(&self) -> usize {
        self.x.ncols()
    }
}

/// Member-to-center edge weights `B`: `r x k`, nonnegative, rows on the
/// probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteWeights<T: Real> {
    b: DMatrix<T>,
}

impl<T: Real> BipartiteWeights<T> {
    pub fn new(b: DMatrix<T>) -> Result<Self> {
        let (r, k) = b.shape();
        if r < 1 || k < 1 {
            return Err(Error::InvalidInput(format!(
                "membership matrix must be at least 1x1, got {r}x{k}"
            )));
        }
        let tol = stochastic_sum_tol::<T>(k.max(r));
        for i in 0..r {
            let mut sum = T::zero();
            for j in 0..k {
                let v = b[(i, j)];
                if !v.is_finite() || v < T::zero() {
                    return Err(Error::InvalidInput(format!(
                        "membership entry ({i},{j}) is negative or non-finite"
                    )));
                }
                sum += v;
            }
            if (sum - T::one()).abs() > tol {
                return Err(Error::InvalidInput(format!(
                    "membership row {i} sums to {sum:?}, expected 1"
                )));
            }
        }
        Ok(Self { b })
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.b
    }

    pub fn r(&self) -> usize {
        self.b.nrows()
    }

    pub fn k(&self) -> usize {
        self.b.ncols()
    }

    /// Per-column weight totals `Bᵀ1_r` (center degrees).
    pub fn column_sums(&self) -> DVector<T> {
        self.b.row_sum().transpose()
    }

    /// Entries strictly greater than zero. Simplex projection produces hard
    /// zeros, so this is an exact support, not a thresholded one.
    pub fn support(&self) -> DMatrix<bool> {
        self.b.map(|v| v > T::zero())
    }
}

/// Center-averaging weights `A`: `r x k`, nonnegative, columns on the
/// probability simplex, support restricted to a boolean mask.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterMixing<T: Real> {
    a: DMatrix<T>,
    support: DMatrix<bool>,
}

impl<T: Real> CenterMixing<T> {
    pub fn new(a: DMatrix<T>, support: DMatrix<bool>) -> Result<Self> {
        let (r, k) = a.shape();
        if r < 1 || k < 1 {
            return Err(Error::InvalidInput(format!(
                "averaging matrix must be at least 1x1, got {r}x{k}"
            )));
        }
        if support.shape() != (r, k) {
            return Err(Error::DimensionMismatch(format!(
                "support mask is {}x{}, expected {r}x{k}",
                support.nrows(),
                support.ncols()
            )));
        }
        let tol = stochastic_sum_tol::<T>(k.max(r));
        for j in 0..k {
            let mut sum = T::zero();
            for i in 0..r {
                let v = a[(i, j)];
                if !v.is_finite() || v < T::zero() {
                    return Err(Error::InvalidInput(format!(
                        "averaging entry ({i},{j}) is negative or non-finite"
                    )));
                }
                if !support[(i, j)] && v != T::zero() {
                    return Err(Error::InvalidInput(format!(
                        "averaging entry ({i},{j}) is nonzero outside the support mask"
                    )));
                }
                sum += v;
            }
            if (sum - T::one()).abs() > tol {
                return Err(Error::InvalidInput(format!(
                    "averaging column {j} sums to {sum:?}, expected 1"
                )));
            }
        }
        Ok(Self { a, support })
    }

    /// Wraps a column-stochastic matrix with an unconstrained (all-true)
    /// support, as used for the initial `A` before any membership exists.
    pub fn full_support(a: DMatrix<T>) -> Result<Self> {
        let mask = DMatrix::from_element(a.nrows(), a.ncols(), true);
        Self::new(a, mask)
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.a
    }

    pub fn support(&self) -> &DMatrix<bool> {
        &self.support
    }

    pub fn r(&self) -> usize {
        self.a.nrows()
    }

    pub fn k(&self) -> usize {
        self.a.ncols()
    }
}

/// The learned `p x p` Laplacian together with its rank-`(p-k)` spectral
/// factorization `L = U Diag(λ) Uᵀ`.
#[derive(Debug, Clone)]
pub struct BlockLaplacian<T: Real> {
    matrix: DMatrix<T>,
    eigvecs: DMatrix<T>,
    eigvals: DVector<T>,
}

impl<T: Real> BlockLaplacian<T> {
    /// Builds the dense Laplacian from a kept spectrum. All kept eigenvalues
    /// must be strictly positive.
    pub fn from_spectrum(eigvecs: DMatrix<T>, eigvals: DVector<T>) -> Result<Self> {
        if eigvecs.ncols() != eigvals.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} eigenvectors for {} eigenvalues",
                eigvecs.ncols(),
                eigvals.len()
            )));
        }
        if eigvals.iter().any(|l| !l.is_finite() || *l <= T::zero()) {
            return Err(Error::Numerical(
                "kept Laplacian spectrum must be strictly positive".into(),
            ));
        }
        let matrix = &eigvecs * DMatrix::from_diagonal(&eigvals) * eigvecs.transpose();
        Ok(Self { matrix, eigvecs, eigvals })
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn eigvecs(&self) -> &DMatrix<T> {
        &self.eigvecs
    }

    /// Kept eigenvalues, descending, all strictly positive.
    pub fn eigvals(&self) -> &DVector<T> {
        &self.eigvals
    }

    pub fn p(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.eigvals.len()
    }

    /// Generalized log-determinant: `Σ_j ln λ_j` over the kept spectrum.
    pub fn log_det_star(&self) -> T {
        self.eigvals.iter().fold(T::zero(), |acc, l| acc + l.ln())
    }
}

/// ADMM dual variable `Y`: symmetric `p x p`.
#[derive(Debug, Clone, PartialEq)]
pub struct DualVariable<T: Real> {
    y: DMatrix<T>,
}

impl<T: Real> DualVariable<T> {
    pub fn new(y: DMatrix<T>) -> Result<Self> {
        if y.nrows() != y.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "dual variable must be square, got {}x{}",
                y.nrows(),
                y.ncols()
            )));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("dual variable has non-finite entries".into()));
        }
        let tol = stochastic_sum_tol::<T>(y.nrows());
        let asym = (&y - y.transpose()).amax();
        if asym > tol {
            return Err(Error::InvalidInput(format!(
                "dual variable asymmetry {asym:?} exceeds tolerance"
            )));
        }
        Ok(Self { y })
    }

    pub fn zeros(p: usize) -> Self {
        Self { y: DMatrix::zeros(p, p) }
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.y
    }

    pub fn p(&self) -> usize {
        self.y.nrows()
    }
}

/// Assembles the `p x p` block Laplacian `[[I_r, -B], [-Bᵀ, Diag(Bᵀ1_r)]]`.
///
/// The identity block uses the row-stochasticity of `B` (`Diag(B 1_k) = I_r`).
/// Every row sums to zero.
pub fn build_block_laplacian<T: Real>(b: &BipartiteWeights<T>) -> DMatrix<T> {
    let (r, k) = (b.r(), b.k());
    let p = r + k;
    let bm = b.matrix();
    let degrees = b.column_sums();
    let mut l = DMatrix::zeros(p, p);
    for i in 0..r {
        l[(i, i)] = T::one();
    }
    for i in 0..r {
        for j in 0..k {
            let w = -bm[(i, j)];
            l[(i, r + j)] = w;
            l[(r + j, i)] = w;
        }
    }
    for j in 0..k {
        l[(r + j, r + j)] = degrees[j];
    }
    l
}

/// The `k x r` contraction matrix `G(A) = -2 Aᵀ S̃ + diag(Aᵀ S̃ A) 1_rᵀ` for a
/// single sample, evaluated through `v = Aᵀ x̃` without forming `S̃ = x̃ x̃ᵀ`.
pub fn g_matrix<T: Real>(a: &CenterMixing<T>, x: &DVector<T>) -> Result<DMatrix<T>> {
    let (r, k) = (a.r(), a.k());
    if x.len() != r {
        return Err(Error::DimensionMismatch(format!(
            "sample has length {}, expected {r}",
            x.len()
        )));
    }
    let v = a.matrix().transpose() * x;
    let mut g = DMatrix::zeros(k, r);
    for j in 0..k {
        let vj = v[j];
        let sq = vj * vj;
        for i in 0..r {
            g[(j, i)] = -(T::c(2.0)) * vj * x[i] + sq;
        }
    }
    Ok(g)
}

/// The augmented quadratic form `xᵀ L x = h + tr(B G(A))` for one sample,
/// evaluated through the rank-1 kernels. Tiny negative rounding results
/// (≥ -1e-12) are clamped to zero; the exact form is nonnegative.
pub fn structured_quad_form<T: Real>(
    x: &DVector<T>,
    a: &CenterMixing<T>,
    b: &BipartiteWeights<T>,
) -> Result<T> {
    let r = b.r();
    if a.r() != r || a.k() != b.k() {
        return Err(Error::DimensionMismatch(format!(
            "averaging matrix is {}x{}, membership is {}x{}",
            a.r(),
            a.k(),
            b.r(),
            b.k()
        )));
    }
    if x.len() != r {
        return Err(Error::DimensionMismatch(format!(
            "sample has length {}, expected {r}",
            x.len()
        )));
    }
    let h = x.norm_squared();
    let v = a.matrix().transpose() * x;
    let u = b.matrix().transpose() * x;
    let c = b.column_sums();
    let mut q = h;
    for j in 0..b.k() {
        q += -(T::c(2.0)) * u[j] * v[j] + c[j] * v[j] * v[j];
    }
    Ok(clamp_tiny_negative(q))
}

/// Quadratic forms `q_i = h_i + tr(B G_i(A))` for every sample at once.
///
/// Uses `V = Aᵀ X̃`, `U = Bᵀ X̃` and the column sums of `B`; cost `O(rkn)`.
pub fn sample_quad_forms<T: Real>(
    data: &MemberData<T>,
    a: &CenterMixing<T>,
    b: &BipartiteWeights<T>,
) -> Result<DVector<T>> {
    let r = data.r();
    if a.r() != r || b.r() != r || a.k() != b.k() {
        return Err(Error::DimensionMismatch(format!(
            "data has {r} members, averaging is {}x{}, membership is {}x{}",
            a.r(),
            a.k(),
            b.r(),
            b.k()
        )));
    }
    let k = b.k();
    let v = a.matrix().transpose() * data.matrix();
    let u = b.matrix().transpose() * data.matrix();
    let c = b.column_sums();
    let h = data.energies();
    let q = DVector::from_fn(data.n(), |i, _| {
        let mut acc = h[i];
        for j in 0..k {
            let vj = v[(j, i)];
            acc += -(T::c(2.0)) * u[(j, i)] * vj + c[j] * vj * vj;
        }
        clamp_tiny_negative(acc)
    });
    Ok(q)
}

fn clamp_tiny_negative<T: Real>(q: T) -> T {
    if q < T::zero() && q >= -T::c(1e-12) {
        T::zero()
    } else {
        q
    }
}
