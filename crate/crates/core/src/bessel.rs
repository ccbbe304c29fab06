//! Bessel functions J0..J2 and modified Bessel functions K0..K2 of real
//! non-negative argument, with the derivatives the fiber eigenvalue problem
//! needs.
//!
//! J uses the power series up to x = 8 and Miller's backward recurrence
//! beyond. K uses the small-argument series up to x = 2 and Steed's
//! continued fraction (Temme's CF2) above.

use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const EPS: f64 = 1e-17;
const SERIES_LIMIT_J: f64 = 8.0;
const SERIES_LIMIT_K: f64 = 2.0;

fn j_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    // (x/2)^n / n!
    let mut term = (1..=n).fold(1.0, |acc, k| acc * half / f64::from(k));
    let mut sum = term;
    for k in 1..200 {
        term *= q / (f64::from(k) * f64::from(k + n));
        sum += term;
        if term.abs() < EPS * sum.abs() {
            break;
        }
    }
    sum
}

/// J0, J1, J2 by downward recurrence normalized with J0 + 2 sum J_2k = 1.
fn j_miller(x: f64) -> [f64; 3] {
    let start = 2 * ((x as usize + 40 + (40.0 * x).sqrt() as usize) / 2);
    let mut out = [0.0; 3];
    let (mut jp1, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            for o in out.iter_mut() {
                *o *= 1e-250;
            }
        }
        let order = k - 1;
        if order <= 2 {
            out[order] = j;
        }
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * j;
        }
    }
    norm += j;
    [out[0] / norm, out[1] / norm, out[2] / norm]
}

/// Bessel functions of the first kind `[J0(x), J1(x), J2(x)]`, `x >= 0`.
pub fn bessel_j012(x: f64) -> [f64; 3] {
    debug_assert!(x >= 0.0);
    if x <= SERIES_LIMIT_J {
        [j_series(0, x), j_series(1, x), j_series(2, x)]
    } else {
        j_miller(x)
    }
}

pub fn bessel_j0(x: f64) -> f64 {
    bessel_j012(x)[0]
}

pub fn bessel_j1(x: f64) -> f64 {
    bessel_j012(x)[1]
}

pub fn bessel_j2(x: f64) -> f64 {
    bessel_j012(x)[2]
}

/// `J1'(x) = J0(x) - J1(x)/x`
pub fn bessel_j1_prime(x: f64) -> f64 {
    let [j0, j1, _] = bessel_j012(x);
    j0 - j1 / x
}

fn k01_series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let log_term = (0.5 * x).ln();
    // I0, I1 and the harmonic-number sums, accumulated together
    let mut i0 = 1.0;
    let mut i1 = 0.5 * x;
    let mut k0_sum = 0.0;
    let mut psi_sum = -2.0 * EULER_GAMMA + 1.0; // psi(1) + psi(2)
    let mut k1_sum = psi_sum;
    let mut term0 = 1.0; // y^k / (k!)^2
    let mut term1 = 1.0; // y^k / (k! (k+1)!)
    let mut harmonic = 0.0;
    for k in 1..100 {
        let kf = f64::from(k);
        term0 *= y / (kf * kf);
        term1 *= y / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        psi_sum += 1.0 / kf + 1.0 / (kf + 1.0);
        i0 += term0;
        i1 += 0.5 * x * term1;
        k0_sum += term0 * harmonic;
        k1_sum += term1 * psi_sum;
        if term0 < EPS * i0 && term1 < EPS {
            break;
        }
    }
    let k0 = -(log_term + EULER_GAMMA) * i0 + k0_sum;
    let k1 = 1.0 / x + i1 * log_term - 0.25 * x * k1_sum;
    (k0, k1)
}

fn k01_continued_fraction(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..10_000 {
        let fi = f64::from(i);
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - a1 * h) / x;
    (k0, k1)
}

/// Modified Bessel functions of the second kind `[K0(x), K1(x), K2(x)]`, `x > 0`.
pub fn bessel_k012(x: f64) -> [f64; 3] {
    debug_assert!(x > 0.0);
    let (k0, k1) = if x <= SERIES_LIMIT_K {
        k01_series(x)
    } else {
        k01_continued_fraction(x)
    };
    [k0, k1, k0 + 2.0 * k1 / x]
}

pub fn bessel_k0(x: f64) -> f64 {
    bessel_k012(x)[0]
}

pub fn bessel_k1(x: f64) -> f64 {
    bessel_k012(x)[1]
}

pub fn bessel_k2(x: f64) -> f64 {
    bessel_k012(x)[2]
}

/// `K1'(x) = -K0(x) - K1(x)/x`
pub fn bessel_k1_prime(x: f64) -> f64 {
    let [k0, k1, _] = bessel_k012(x);
    -k0 - k1 / x
}
