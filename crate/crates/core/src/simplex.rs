//! Exact Euclidean projection onto the probability simplex
//! `{x ≥ 0, Σ x_i = 1}` via the sort-and-threshold rule.
//!
//! The projection solves `argmin ½‖x - x0‖²` subject to the simplex
//! constraints. Sorting the entries in descending order, the active support
//! is the largest prefix size `s` with `x_(s) + (1 - Σ_{i≤s} x_(i))/s > 0`;
//! entries outside the support come out as exact zeros, which downstream code
//! relies on for support masks.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Projects a vector onto the probability simplex. `O(d log d)`.
///
/// An input that is already feasible at working precision is returned
/// unchanged, which makes the projection exactly idempotent.
pub fn project_simplex<T: Real>(x0: &DVector<T>) -> Result<DVector<T>> {
    let d = x0.len();
    if d == 0 {
        return Err(Error::InvalidInput("cannot project an empty vector".into()));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("projection input has non-finite entries".into()));
    }
    if is_feasible_at_precision(x0.as_slice()) {
        return Ok(x0.clone());
    }
    let alpha = simplex_threshold(x0.as_slice());
    Ok(DVector::from_fn(d, |i, _| {
        let v = x0[i] + alpha;
        if v > T::zero() {
            v
        } else {
            T::zero()
        }
    }))
}

/// Nonnegative with the sum within `128 d eps` of one. The slack covers the
/// rounding the main path can leave in its own output, so projecting twice
/// returns the first result bit for bit.
fn is_feasible_at_precision<T: Real>(x: &[T]) -> bool {
    if x.iter().any(|v| *v < T::zero()) {
        return false;
    }
    let tol = T::c(128.0) * T::default_epsilon() * T::from_usize(x.len()).unwrap();
    (compensated_sum(x.iter().copied()) - T::one()).abs() <= tol
}

/// Neumaier summation.
fn compensated_sum<T: Real>(values: impl Iterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Projects each row of an `m x d` matrix onto the simplex independently.
pub fn project_rows_simplex<T: Real>(m: &DMatrix<T>) -> Result<DMatrix<T>> {
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    if m.ncols() == 0 {
        return Err(Error::InvalidInput("cannot project rows of width 0".into()));
    }
    let mut out = m.clone();
    let mut row = vec![T::zero(); m.ncols()];
    for i in 0..m.nrows() {
        for (j, slot) in row.iter_mut().enumerate() {
            let v = m[(i, j)];
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "projection input has non-finite entry at ({i},{j})"
                )));
            }
            *slot = v;
        }
        if is_feasible_at_precision(&row) {
            continue;
        }
        let alpha = simplex_threshold(&row);
        for j in 0..m.ncols() {
            let v = m[(i, j)] + alpha;
            out[(i, j)] = if v > T::zero() { v } else { T::zero() };
        }
    }
    Ok(out)
}

/// The KKT threshold α: the projection is `max(0, x_i + α)` elementwise.
///
/// Ties in the descending sort are broken by original index so the scan is
/// deterministic.
fn simplex_threshold<T: Real>(x: &[T]) -> T {
    let d = x.len();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| x[b].partial_cmp(&x[a]).expect("finite entries").then(a.cmp(&b)));

    let mut sum = T::zero();
    let mut comp = T::zero();
    let mut alpha = T::zero();
    for (s, &idx) in order.iter().enumerate() {
        let v = x[idx];
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
        let cumsum = sum + comp;
        let count = T::from_usize(s + 1).unwrap();
        let candidate = (T::one() - cumsum) / count;
        if x[idx] + candidate > T::zero() {
            alpha = candidate;
        }
    }
    alpha
}
