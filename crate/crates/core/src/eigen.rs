//! Cyclic Jacobi eigen-decomposition of small dense Hermitian matrices.
//!
//! Jacobi rotations keep residuals at the level of machine precision times
//! the matrix norm even when a large diagonal (hyperfine splittings) sits on
//! top of small couplings (Stark mixing), where QR-based solvers lose a few
//! digits.

use nalgebra::DMatrix;
use num_complex::Complex64;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (unsorted) and the unitary matrix whose columns are the
/// eigenvectors, or `None` if the sweeps did not converge.
pub fn hermitian_jacobi(h: &DMatrix<Complex64>) -> Option<(Vec<f64>, DMatrix<Complex64>)> {
    let n = h.nrows();
    assert_eq!(n, h.ncols(), "matrix must be square");
    let mut a = h.clone();
    let mut v = DMatrix::<Complex64>::identity(n, n);
    let total = a.norm();
    if total == 0.0 {
        return Some((vec![0.0; n], v));
    }
    let target = (f64::EPSILON * 1e-2 * total).powi(2);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off <= target {
            let values = (0..n).map(|k| a[(k, k)].re).collect();
            return Some((values, v));
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    None
}

/// Zeroes `a[(p, q)]` with a phase-adjusted plane rotation.
fn rotate(a: &mut DMatrix<Complex64>, v: &mut DMatrix<Complex64>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let n = a.nrows();
    let phase = apq / b; // e^{iθ}
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let tau = (aqq - app) / (2.0 * b);
    let t = if tau >= 0.0 { 1.0 / (tau + (1.0 + tau * tau).sqrt()) } else { -1.0 / (-tau + (1.0 + tau * tau).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let ph_conj = phase.conj();

    // A ← A J with J_pp = c, J_pq = s, J_qp = −s e^{−iθ}, J_qq = c e^{−iθ}
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * c - akq * ph_conj * s;
        a[(k, q)] = akp * s + akq * ph_conj * c;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * c - vkq * ph_conj * s;
        v[(k, q)] = vkp * s + vkq * ph_conj * c;
    }
    // A ← J† A
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = apk * c - aqk * phase * s;
        a[(q, k)] = apk * s + aqk * phase * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}
