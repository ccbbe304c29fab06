//! Bracketed scalar root finding.

/// Outcome of a bracketed search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Bisection on `[lo, hi]`, which must bracket a sign change.
///
/// Stops when the bracket is narrower than `x_tol` (absolute) or the
/// function vanishes exactly. Returns `None` if the endpoints have the same
/// sign.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Option<Root> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(Root { x: lo, value: 0.0, iterations: 0 });
    }
    if f_hi == 0.0 {
        return Some(Root { x: hi, value: 0.0, iterations: 0 });
    }
    if f_lo.signum() == f_hi.signum() || !f_lo.is_finite() || !f_hi.is_finite() {
        return None;
    }
    let mut iterations = 0;
    while iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= x_tol {
            break;
        }
        let f_mid = f(mid);
        iterations += 1;
        if f_mid == 0.0 {
            return Some(Root { x: mid, value: 0.0, iterations });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    Some(Root { x, value: f(x), iterations })
}

/// Scans `n` equally spaced interior points of `(lo, hi)` and returns every
/// adjacent pair where `f` changes sign.
pub fn sign_changes<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let step = (hi - lo) / (n + 1) as f64;
    let points: Vec<(f64, f64)> = (1..=n)
        .map(|i| {
            let x = lo + step * i as f64;
            (x, f(x))
        })
        .collect();
    points
        .windows(2)
        .filter(|w| w[0].1.is_finite() && w[1].1.is_finite() && w[0].1.signum() != w[1].1.signum())
        .map(|w| (w[0].0, w[1].0))
        .collect()
}
