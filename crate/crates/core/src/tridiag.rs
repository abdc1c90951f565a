//! Extreme eigenvalues of real symmetric tridiagonal matrices by bisection
//! on Sturm counts.
//!
//! A Hermitian tridiagonal matrix is unitarily equivalent (by a diagonal
//! phase) to the real symmetric tridiagonal with the same diagonal and the
//! moduli of its off-diagonal entries, so only `(diag, |offdiag|^2)` enter.
//! The negative-pivot count of the shifted `LDL^T` recurrence equals the
//! number of eigenvalues below the shift, which makes bisection to the
//! smallest or largest eigenvalue unconditionally robust — there is no
//! convergence failure mode, only a width cap.

/// Number of eigenvalues strictly below `x`.
///
/// `diag` has length n, `off_sq` holds squared off-diagonal moduli, length
/// n-1. Zero pivots are nudged by a matrix-scaled epsilon, the standard
/// safeguard for Sturm recurrences.
pub fn count_below(diag: &[f64], off_sq: &[f64], x: f64) -> usize {
    let n = diag.len();
    debug_assert!(off_sq.len() + 1 == n || n == 0);
    let scale = diag
        .iter()
        .map(|d| d.abs())
        .chain(off_sq.iter().map(|e| e.abs().sqrt()))
        .fold(f64::MIN_POSITIVE, f64::max);
    let tiny = scale * 1e-300f64.max(f64::EPSILON * f64::EPSILON);
    let mut count = 0usize;
    let mut q = 1.0f64;
    for i in 0..n {
        let e2 = if i == 0 { 0.0 } else { off_sq[i - 1] };
        q = (diag[i] - x) - e2 / q;
        if q == 0.0 {
            q = -tiny;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off_sq: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i == 0 { 0.0 } else { off_sq[i - 1].sqrt() };
        let right = if i + 1 < n { off_sq[i].sqrt() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    (lo, hi)
}

fn bisect_to(
    diag: &[f64],
    off_sq: &[f64],
    mut lo: f64,
    mut hi: f64,
    target: usize,
) -> f64 {
    // Invariant: count_below(lo) <= target < count_below(hi).
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(diag, off_sq, mid) > target {
            hi = mid;
        } else {
            lo = mid;
        }
        let width = hi - lo;
        if width <= f64::EPSILON * hi.abs().max(lo.abs()).max(1e-300) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest eigenvalue.
pub fn smallest_eigenvalue(diag: &[f64], off_sq: &[f64]) -> f64 {
    if diag.is_empty() {
        return 0.0;
    }
    let (glo, ghi) = gershgorin(diag, off_sq);
    let lo = glo - 1e-12 * (1.0 + glo.abs());
    let hi = ghi + 1e-12 * (1.0 + ghi.abs());
    bisect_to(diag, off_sq, lo, hi, 0)
}

/// Largest eigenvalue.
pub fn largest_eigenvalue(diag: &[f64], off_sq: &[f64]) -> f64 {
    if diag.is_empty() {
        return 0.0;
    }
    let n = diag.len();
    let (glo, ghi) = gershgorin(diag, off_sq);
    let lo = glo - 1e-12 * (1.0 + glo.abs());
    let hi = ghi + 1e-12 * (1.0 + ghi.abs());
    bisect_to(diag, off_sq, lo, hi, n - 1)
}
