//! ADMM outer loop with majorization-minimization inner solvers.
//!
//! One outer iteration performs four updates:
//!
//! 1. closed-form spectral update of the rank-constrained Laplacian `L`,
//! 2. membership update of `B` by projected gradient descent on a linearized
//!    surrogate of the heavy-tailed likelihood,
//! 3. per-column update of the averaging matrix `A` on a weighted-scatter
//!    surrogate, restricted to the support of `B`,
//! 4. dual ascent on `Y` against the relaxed structural equality.
//!
//! The likelihood terms are never evaluated through per-sample outer
//! products; all aggregation goes through the weighted scatter
//! `X̃ Diag(w) X̃ᵀ`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::metrics::{labels_from_b, LabeledPartition};
use crate::model::{
    build_block_laplacian, sample_quad_forms, BipartiteWeights, BlockLaplacian, CenterMixing,
    DualVariable, MemberData,
};
use crate::scalar::Real;
use crate::simplex::{project_rows_simplex, project_simplex};

/// Relative-change tolerance for the inner PGD loops.
const INNER_TOL: f64 = 1e-8;

/// Floor protecting the automatic step sizes from degenerate scales.
const STEP_FLOOR: f64 = 1e-12;

/// Hyperparameters of the ADMM solver.
///
/// `mu` and `eta` are the PGD step sizes for the `B` and `A` subproblems;
/// `None` selects the safe automatic choice (inverse Lipschitz constant of
/// the respective surrogate gradient).
#[derive(Debug, Clone)]
pub struct SolverConfig<T: Real> {
    pub k: usize,
    pub nu: T,
    pub rho: T,
    pub mu: Option<T>,
    pub eta: Option<T>,
    pub max_outer: usize,
    pub inner_iters: usize,
    pub tol_primal: T,
    pub tol_change: T,
    pub seed: u64,
}

impl<T: Real> SolverConfig<T> {
    /// Configuration with conservative defaults: `rho = 1`, automatic step
    /// sizes, `max_outer = 1000`, `inner_iters = 50`, `tol_primal = 1e-5`,
    /// `tol_change = 1e-6`, `seed = 0`.
    pub fn new(k: usize, nu: T) -> Self {
        Self {
            k,
            nu,
            rho: T::one(),
            mu: None,
            eta: None,
            max_outer: 1000,
            inner_iters: 50,
            tol_primal: T::c(1e-5),
            tol_change: T::c(1e-6),
            seed: 0,
        }
    }

    /// Checks the configuration against the member count `r`.
    pub fn validate(&self, r: usize) -> Result<()> {
        if self.k < 1 {
            return Err(Error::InvalidInput("cluster count must be at least 1".into()));
        }
        if self.k >= r {
            return Err(Error::InvalidInput(format!(
                "cluster count {} must be smaller than the member count {r}",
                self.k
            )));
        }
        if !(self.nu.is_finite() && self.nu > T::c(2.0)) {
            return Err(Error::InvalidInput("degrees of freedom must exceed 2".into()));
        }
        if !(self.rho.is_finite() && self.rho > T::zero()) {
            return Err(Error::InvalidInput("penalty rho must be positive".into()));
        }
        for (name, step) in [("mu", self.mu), ("eta", self.eta)] {
            if let Some(s) = step {
                if !(s.is_finite() && s > T::zero()) {
                    return Err(Error::InvalidInput(format!("step size {name} must be positive")));
                }
            }
        }
        if self.max_outer == 0 || self.inner_iters == 0 {
            return Err(Error::InvalidInput("iteration caps must be at least 1".into()));
        }
        if !(self.tol_primal > T::zero() && self.tol_change > T::zero()) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Per-iteration diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct TraceEntry<T: Real> {
    pub iter: usize,
    pub objective: T,
    pub primal_residual: T,
    pub b_change: T,
}

/// Borrowed view of the ADMM iterates, handed to the per-iteration callback.
pub struct SolverState<'a, T: Real> {
    pub laplacian: &'a BlockLaplacian<T>,
    pub weights: &'a BipartiteWeights<T>,
    pub mixing: &'a CenterMixing<T>,
    pub dual: &'a DualVariable<T>,
    pub iter: usize,
    pub trace: &'a [TraceEntry<T>],
}

/// Final clustering output.
#[derive(Debug, Clone)]
pub struct ClusterResult<T: Real> {
    pub labels: LabeledPartition,
    pub weights: BipartiteWeights<T>,
    pub mixing: CenterMixing<T>,
    pub converged: bool,
    pub iterations: usize,
    pub trace: Vec<TraceEntry<T>>,
}

/// How the averaging matrix `A` is initialized.
pub enum InitMixing<T: Real> {
    Given(CenterMixing<T>),
    /// Entries from `U[0,1]`, columns normalized to unit sum.
    RandomUniform,
    /// Entries `|N(0,1)|`, columns normalized to unit sum.
    RandomNormal,
}

/// Samples a column-stochastic initial `A` with full support.
pub fn sample_initial_mixing<T: Real>(
    r: usize,
    k: usize,
    normal: bool,
    seed: u64,
) -> Result<CenterMixing<T>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut a = DMatrix::zeros(r, k);
    for j in 0..k {
        for i in 0..r {
            let draw: f64 = if normal {
                let z: f64 = StandardNormal.sample(&mut rng);
                z.abs()
            } else {
                rng.random::<f64>()
            };
            a[(i, j)] = T::c(draw);
        }
    }
    for j in 0..k {
        let sum: T = a.column(j).iter().fold(T::zero(), |acc, v| acc + *v);
        if !(sum.is_finite() && sum > T::zero()) {
            return Err(Error::Initialization(format!(
                "sampled column {j} has non-positive total weight"
            )));
        }
        for i in 0..r {
            a[(i, j)] /= sum;
        }
    }
    CenterMixing::full_support(a)
}

/// Initial membership from the data: extract the member-to-center block of
/// the pseudo-inverse of the augmented second-moment matrix, flip its sign
/// (precision off-diagonals carry negated edge weights), clamp negatives,
/// and project the rows onto the simplex.
pub fn init_b<T: Real>(
    data: &MemberData<T>,
    a0: &CenterMixing<T>,
    k: usize,
) -> Result<BipartiteWeights<T>> {
    let (r, n) = (data.r(), data.n());
    if a0.r() != r || a0.k() != k {
        return Err(Error::DimensionMismatch(format!(
            "initial averaging matrix is {}x{}, expected {r}x{k}",
            a0.r(),
            a0.k()
        )));
    }
    if k >= r {
        return Err(Error::InvalidInput(format!(
            "cluster count {k} must be smaller than the member count {r}"
        )));
    }
    let p = r + k;
    let centers = a0.matrix().transpose() * data.matrix();
    let mut aug = DMatrix::zeros(p, n);
    aug.view_mut((0, 0), (r, n)).copy_from(data.matrix());
    aug.view_mut((r, 0), (k, n)).copy_from(&centers);
    let second_moment = (&aug * aug.transpose()) / T::from_usize(n).unwrap();
    if second_moment.amax() == T::zero() {
        return Err(Error::Initialization("data second-moment matrix is zero".into()));
    }
    let pinv = crate::eigen::pseudo_inverse_psd(&second_moment)?;
    let block = pinv.view((0, r), (r, k));
    let raw = DMatrix::from_fn(r, k, |i, j| {
        let w = -block[(i, j)];
        if w > T::zero() {
            w
        } else {
            T::zero()
        }
    });
    BipartiteWeights::new(project_rows_simplex(&raw)?)
}

/// Closed-form spectral update of the Laplacian.
///
/// Keeps the `p - k` largest eigenpairs of `ρ · block(B) - Y` and maps each
/// kept eigenvalue `σ` to the positive root of `ρλ² - σλ - 1 = 0`.
pub fn l_update<T: Real>(
    b: &BipartiteWeights<T>,
    y: &DualVariable<T>,
    rho: T,
    k: usize,
) -> Result<BlockLaplacian<T>> {
    let p = b.r() + b.k();
    if y.p() != p || b.k() != k {
        return Err(Error::DimensionMismatch(format!(
            "dual is {}x{}, membership gives p = {p}, k = {}",
            y.p(),
            y.p(),
            b.k()
        )));
    }
    if !(rho.is_finite() && rho > T::zero()) {
        return Err(Error::InvalidInput("penalty rho must be positive".into()));
    }
    let target = build_block_laplacian(b) * rho - y.matrix();
    let eig = crate::eigen::sym_eigen_desc(&target)?;
    let keep = p - k;
    let vecs = eig.vectors.columns(0, keep).clone_owned();
    let four = T::c(4.0);
    let two_rho = T::c(2.0) * rho;
    let vals = DVector::from_fn(keep, |j, _| {
        let sigma = eig.values[j];
        (sigma + (sigma * sigma + four * rho).sqrt()) / two_rho
    });
    BlockLaplacian::from_spectrum(vecs, vals)
}

/// Per-sample linearization weights `w_i = ((p+ν)/n) / (q_i + ν)` at the
/// current iterates.
fn likelihood_weights<T: Real>(
    data: &MemberData<T>,
    a: &CenterMixing<T>,
    b: &BipartiteWeights<T>,
    nu: T,
    k: usize,
) -> Result<DVector<T>> {
    let p = T::from_usize(data.r() + k).unwrap();
    let n = T::from_usize(data.n()).unwrap();
    let scale = (p + nu) / n;
    let q = sample_quad_forms(data, a, b)?;
    Ok(DVector::from_fn(data.n(), |i, _| scale / (q[i] + nu)))
}

/// Weighted scatter `X̃ Diag(w) X̃ᵀ` (the rank-1 aggregation of all
/// per-sample outer products).
fn weighted_scatter<T: Real>(data: &MemberData<T>, w: &DVector<T>) -> DMatrix<T> {
    let mut scaled = data.matrix().clone();
    for i in 0..data.n() {
        let wi = w[i];
        scaled.column_mut(i).scale_mut(wi);
    }
    &scaled * data.matrix().transpose()
}

/// Coefficient matrix `H` of the membership surrogate: the tangent
/// linearization of the heavy-tailed likelihood plus the exact expansion of
/// the quadratic penalty.
///
/// Returns a `k x r` matrix.
pub fn b_majorizer_coeffs<T: Real>(
    a: &CenterMixing<T>,
    b_l: &BipartiteWeights<T>,
    l: &BlockLaplacian<T>,
    y: &DualVariable<T>,
    data: &MemberData<T>,
    cfg: &SolverConfig<T>,
) -> Result<DMatrix<T>> {
    let (r, k) = (b_l.r(), b_l.k());
    let p = r + k;
    if l.p() != p || y.p() != p {
        return Err(Error::DimensionMismatch(format!(
            "Laplacian is {}x{}, dual is {}x{}, expected {p}x{p}",
            l.p(),
            l.p(),
            y.p(),
            y.p()
        )));
    }
    let w = likelihood_weights(data, a, b_l, cfg.nu, k)?;
    let scatter = weighted_scatter(data, &w);

    // P = -2 Aᵀ S_w + diag(Aᵀ S_w A) 1ᵀ
    let at_s = a.matrix().transpose() * &scatter;
    let at_s_a_diag = {
        let prod = &at_s * a.matrix();
        DVector::from_fn(k, |j, _| prod[(j, j)])
    };
    let mut h = at_s * T::c(-2.0);
    for j in 0..k {
        let d = at_s_a_diag[j];
        for i in 0..r {
            h[(j, i)] += d;
        }
    }

    // H = P + ρ (M_rkᵀ + M_kr - diag(M)_{r+1:p} 1ᵀ), M = L + Y/ρ
    let m = l.matrix() + y.matrix() / cfg.rho;
    for j in 0..k {
        let diag = m[(r + j, r + j)];
        for i in 0..r {
            h[(j, i)] += cfg.rho * (m[(i, r + j)] + m[(r + j, i)] - diag);
        }
    }
    Ok(h)
}

/// Value of the membership surrogate with its constant dropped:
/// `tr(BH) + ρ‖B‖_F² + (ρ/2) 1ᵀBBᵀ1`.
pub fn b_surrogate_objective<T: Real>(b: &DMatrix<T>, h: &DMatrix<T>, rho: T) -> T {
    let trace_bh = (b * h).trace();
    let col_tot = b.row_sum();
    let ones_quad = col_tot.iter().fold(T::zero(), |acc, s| acc + *s * *s);
    trace_bh + rho * b.norm_squared() + rho * T::c(0.5) * ones_quad
}

/// The exact membership subproblem objective: heavy-tailed likelihood term
/// plus the quadratic penalty `(ρ/2)‖L - block(B) + Y/ρ‖_F²`.
pub fn b_subproblem_objective<T: Real>(
    b: &BipartiteWeights<T>,
    l: &BlockLaplacian<T>,
    y: &DualVariable<T>,
    a: &CenterMixing<T>,
    data: &MemberData<T>,
    cfg: &SolverConfig<T>,
) -> Result<T> {
    let penalty_arg = l.matrix() - build_block_laplacian(b) + y.matrix() / cfg.rho;
    let penalty = cfg.rho * T::c(0.5) * penalty_arg.norm_squared();
    Ok(likelihood_term(data, a, b, cfg.nu, cfg.k)? + penalty)
}

/// `(p+ν)/n Σ_i log(1 + q_i/ν)` at the given iterates.
pub fn likelihood_term<T: Real>(
    data: &MemberData<T>,
    a: &CenterMixing<T>,
    b: &BipartiteWeights<T>,
    nu: T,
    k: usize,
) -> Result<T> {
    let q = sample_quad_forms(data, a, b)?;
    let p = T::from_usize(data.r() + k).unwrap();
    let n = T::from_usize(data.n()).unwrap();
    let sum = q.iter().fold(T::zero(), |acc, qi| acc + (T::one() + *qi / nu).ln());
    Ok((p + nu) / n * sum)
}

/// PGD on the membership surrogate, starting from `b_l`.
///
/// The gradient is `Hᵀ + 2ρB + ρ 1 1ᵀ B`; the automatic step is the exact
/// inverse of its Lipschitz constant `ρ(r + 2)`.
pub fn b_update<T: Real>(
    b_l: &BipartiteWeights<T>,
    h: &DMatrix<T>,
    rho: T,
    mu: Option<T>,
    inner_iters: usize,
) -> Result<BipartiteWeights<T>> {
    let (r, k) = (b_l.r(), b_l.k());
    if h.shape() != (k, r) {
        return Err(Error::DimensionMismatch(format!(
            "surrogate coefficients are {}x{}, expected {k}x{r}",
            h.nrows(),
            h.ncols()
        )));
    }
    let step = match mu {
        Some(s) => s,
        None => T::one() / (rho * T::from_usize(r + 2).unwrap()),
    };
    let ht = h.transpose();
    let tol = T::c(INNER_TOL);
    let mut b = b_l.matrix().clone();
    for _ in 0..inner_iters {
        let col_tot = b.row_sum(); // Bᵀ1 as a row vector
        let mut grad = &ht + &b * (T::c(2.0) * rho);
        for i in 0..r {
            for j in 0..k {
                grad[(i, j)] += rho * col_tot[j];
            }
        }
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Numerical("non-finite membership gradient".into()));
        }
        let next = project_rows_simplex(&(&b - grad * step))?;
        let change = (&next - &b).norm() / T::one().max(b.norm());
        b = next;
        if change < tol {
            break;
        }
    }
    BipartiteWeights::new(b)
}

/// Weighted scatter `S̃` for the averaging-matrix surrogate, evaluated at
/// `(A_l, B)`.
pub fn a_majorizer_matrix<T: Real>(
    a_l: &CenterMixing<T>,
    b: &BipartiteWeights<T>,
    data: &MemberData<T>,
    cfg: &SolverConfig<T>,
) -> Result<DMatrix<T>> {
    let w = likelihood_weights(data, a_l, b, cfg.nu, cfg.k)?;
    Ok(weighted_scatter(data, &w))
}

/// Per-column surrogate `b_j a_jᵀ S̃ a_j - 2 b_jᵀ S̃ a_j`.
pub fn a_column_surrogate<T: Real>(
    a_col: &DVector<T>,
    b_col: &DVector<T>,
    s_tilde: &DMatrix<T>,
) -> T {
    let b_tot = b_col.iter().fold(T::zero(), |acc, v| acc + *v);
    let s_a = s_tilde * a_col;
    b_tot * a_col.dot(&s_a) - T::c(2.0) * b_col.dot(&s_a)
}

/// The exact averaging-matrix subproblem objective (likelihood term only).
pub fn a_subproblem_objective<T: Real>(
    a: &CenterMixing<T>,
    b: &BipartiteWeights<T>,
    data: &MemberData<T>,
    cfg: &SolverConfig<T>,
) -> Result<T> {
    likelihood_term(data, a, b, cfg.nu, cfg.k)
}

/// Per-column PGD on the averaging surrogate, restricted to the support of
/// `B`. Each gradient step is followed by a projection of the supported
/// subvector onto the simplex; entries off the support stay exactly zero.
pub fn a_update<T: Real>(
    a_l: &CenterMixing<T>,
    b: &BipartiteWeights<T>,
    s_tilde: &DMatrix<T>,
    eta: Option<T>,
    inner_iters: usize,
) -> Result<CenterMixing<T>> {
    let (r, k) = (a_l.r(), a_l.k());
    if b.r() != r || b.k() != k {
        return Err(Error::DimensionMismatch(format!(
            "membership is {}x{}, averaging is {r}x{k}",
            b.r(),
            b.k()
        )));
    }
    if s_tilde.shape() != (r, r) {
        return Err(Error::DimensionMismatch(format!(
            "scatter is {}x{}, expected {r}x{r}",
            s_tilde.nrows(),
            s_tilde.ncols()
        )));
    }
    let support = b.support();
    let floor = T::c(STEP_FLOOR);
    let tol = T::c(INNER_TOL);
    let trace = s_tilde.trace();
    let mut a_new = DMatrix::zeros(r, k);

    for j in 0..k {
        let members: Vec<usize> = (0..r).filter(|&i| support[(i, j)]).collect();
        if members.is_empty() {
            return Err(Error::DegenerateCluster(format!(
                "cluster {j} has no attached members"
            )));
        }
        let b_col = b.matrix().column(j).clone_owned();
        let b_tot = b_col.iter().fold(T::zero(), |acc, v| acc + *v);
        let step = match eta {
            Some(s) => s,
            None => T::one() / (T::c(2.0) * b_tot.max(floor) * trace.max(floor)),
        };
        let s_b = s_tilde * &b_col;

        // feasible start: the previous column masked to the new support
        let mut col = DVector::zeros(r);
        for &i in &members {
            col[i] = a_l.matrix()[(i, j)];
        }
        col = project_onto_support(&col, &members)?;

        for _ in 0..inner_iters {
            let s_a = s_tilde * &col;
            let grad = (s_a * b_tot - &s_b) * T::c(2.0);
            if grad.iter().any(|g| !g.is_finite()) {
                return Err(Error::Numerical("non-finite averaging gradient".into()));
            }
            let stepped = &col - grad * step;
            let next = project_onto_support(&stepped, &members)?;
            let change = (&next - &col).norm() / T::one().max(col.norm());
            col = next;
            if change < tol {
                break;
            }
        }
        a_new.set_column(j, &col);
    }
    CenterMixing::new(a_new, support)
}

/// Projects the entries listed in `members` onto the simplex, zeroing the
/// rest.
fn project_onto_support<T: Real>(x: &DVector<T>, members: &[usize]) -> Result<DVector<T>> {
    let sub = DVector::from_fn(members.len(), |t, _| x[members[t]]);
    let projected = project_simplex(&sub)?;
    let mut out = DVector::zeros(x.len());
    for (t, &i) in members.iter().enumerate() {
        out[i] = projected[t];
    }
    Ok(out)
}

/// Dual ascent `Y ← Y + ρ (L - block(B))`.
pub fn dual_update<T: Real>(
    y: &DualVariable<T>,
    l: &BlockLaplacian<T>,
    b: &BipartiteWeights<T>,
    rho: T,
) -> Result<DualVariable<T>> {
    let p = b.r() + b.k();
    if y.p() != p || l.p() != p {
        return Err(Error::DimensionMismatch(format!(
            "dual is {}x{}, Laplacian is {}x{}, expected {p}x{p}",
            y.p(),
            y.p(),
            l.p(),
            l.p()
        )));
    }
    let next = y.matrix() + (l.matrix() - build_block_laplacian(b)) * rho;
    DualVariable::new(next)
}

/// Penalized negative log-likelihood of problem iterates:
/// `(p+ν)/n Σ log(1 + q_i/ν) - Σ_j log λ_j`.
pub fn objective<T: Real>(
    l: &BlockLaplacian<T>,
    b: &BipartiteWeights<T>,
    a: &CenterMixing<T>,
    data: &MemberData<T>,
    cfg: &SolverConfig<T>,
) -> Result<T> {
    if l.eigvals().iter().any(|v| *v <= T::zero()) {
        return Err(Error::Numerical("Laplacian spectrum must be positive".into()));
    }
    Ok(likelihood_term(data, a, b, cfg.nu, cfg.k)? - l.log_det_star())
}

/// Runs the full ADMM loop. See [`run_with_callback`] for the monitored
/// variant.
pub fn run<T: Real>(
    data: &MemberData<T>,
    cfg: &SolverConfig<T>,
    init: InitMixing<T>,
) -> Result<ClusterResult<T>> {
    run_with_callback(data, cfg, init, |_| {})
}

/// Runs the ADMM loop, invoking `callback` with the full iterate state after
/// every outer iteration.
///
/// Stops when both the relative primal residual `‖L - block(B)‖_F /
/// max(1, ‖L‖_F)` and the relative membership change drop below their
/// tolerances, or at `max_outer` (which is reported as `converged = false`,
/// not an error).
pub fn run_with_callback<T: Real>(
    data: &MemberData<T>,
    cfg: &SolverConfig<T>,
    init: InitMixing<T>,
    mut callback: impl FnMut(&SolverState<'_, T>),
) -> Result<ClusterResult<T>> {
    let r = data.r();
    cfg.validate(r)?;
    let k = cfg.k;
    let p = r + k;

    let mixing0 = match init {
        InitMixing::Given(a0) => {
            if a0.r() != r || a0.k() != k {
                return Err(Error::DimensionMismatch(format!(
                    "initial averaging matrix is {}x{}, expected {r}x{k}",
                    a0.r(),
                    a0.k()
                )));
            }
            a0
        }
        InitMixing::RandomUniform => sample_initial_mixing(r, k, false, cfg.seed)?,
        InitMixing::RandomNormal => sample_initial_mixing(r, k, true, cfg.seed)?,
    };

    let mut weights = init_b(data, &mixing0, k)?;
    let mut mixing = mixing0;
    let mut dual = DualVariable::zeros(p);
    let mut trace: Vec<TraceEntry<T>> = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for iter in 0..cfg.max_outer {
        let laplacian = l_update(&weights, &dual, cfg.rho, k)?;
        let h = b_majorizer_coeffs(&mixing, &weights, &laplacian, &dual, data, cfg)?;
        let weights_next = b_update(&weights, &h, cfg.rho, cfg.mu, cfg.inner_iters)?;
        let scatter = a_majorizer_matrix(&mixing, &weights_next, data, cfg)?;
        let mixing_next = a_update(&mixing, &weights_next, &scatter, cfg.eta, cfg.inner_iters)?;
        let dual_next = dual_update(&dual, &laplacian, &weights_next, cfg.rho)?;

        let residual_num = (laplacian.matrix() - build_block_laplacian(&weights_next)).norm();
        let primal_residual = residual_num / T::one().max(laplacian.matrix().norm());
        let b_change =
            (weights_next.matrix() - weights.matrix()).norm() / T::one().max(weights.matrix().norm());
        let objective_value = objective(&laplacian, &weights_next, &mixing_next, data, cfg)?;

        weights = weights_next;
        mixing = mixing_next;
        dual = dual_next;
        iterations = iter + 1;
        trace.push(TraceEntry { iter, objective: objective_value, primal_residual, b_change });

        callback(&SolverState {
            laplacian: &laplacian,
            weights: &weights,
            mixing: &mixing,
            dual: &dual,
            iter,
            trace: &trace,
        });

        if primal_residual < cfg.tol_primal && b_change < cfg.tol_change {
            converged = true;
            break;
        }
    }

    let labels = labels_from_b(&weights);
    Ok(ClusterResult { labels, weights, mixing, converged, iterations, trace })
}
