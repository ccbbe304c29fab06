//! Helpers shared by the integration tests: an exact-arithmetic Racah
//! oracle for Wigner symbols and deterministic sample generators.

#![allow(dead_code)]

use nanotrap::stark::FieldEnvelope;
use nanotrap::HalfInt;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn fact(n: i32) -> BigInt {
    assert!(n >= 0);
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// `Δ(abc)` for doubled arguments.
fn delta(a: i32, b: i32, c: i32) -> BigRational {
    ratio(
        fact((a + b - c) / 2) * fact((a - b + c) / 2) * fact((-a + b + c) / 2),
        fact((a + b + c) / 2 + 1),
    )
}

pub fn triangle(a: i32, b: i32, c: i32) -> bool {
    a >= 0 && b >= 0 && c >= 0 && (a + b + c) % 2 == 0 && c <= a + b && c >= (a - b).abs()
}

/// Value `s * sqrt(r)` converted to f64 only at the very end.
fn finish(s: BigRational, r: BigRational) -> f64 {
    if s.is_zero() {
        return 0.0;
    }
    let sign = if s.is_negative() { -1.0 } else { 1.0 };
    // (s² r) exactly, then one square root
    let sq = &s * &s * r;
    let v = sq.numer().to_f64().unwrap() / sq.denom().to_f64().unwrap();
    sign * v.sqrt()
}

/// Exact 3-j symbol; all arguments doubled.
pub fn three_j(j: [i32; 3], m: [i32; 3]) -> f64 {
    let [a, b, c] = j;
    let [x, y, z] = m;
    if x + y + z != 0 || !triangle(a, b, c) || x.abs() > a || y.abs() > b || z.abs() > c {
        return 0.0;
    }
    if (a + x) % 2 != 0 || (b + y) % 2 != 0 || (c + z) % 2 != 0 {
        return 0.0;
    }
    let h = |v: i32| v / 2;
    let r = delta(a, b, c)
        * ratio(
            fact(h(a + x)) * fact(h(a - x)) * fact(h(b + y)) * fact(h(b - y)) * fact(h(c + z)) * fact(h(c - z)),
            BigInt::one(),
        );
    let mut s = BigRational::zero();
    for k in 0..=h(a + b + c) {
        let args = [k, h(c - b + x) + k, h(c - a - y) + k, h(a + b - c) - k, h(a - x) - k, h(b + y) - k];
        if args.iter().any(|&v| v < 0) {
            continue;
        }
        let den = args.iter().fold(BigInt::one(), |acc, &v| acc * fact(v));
        let term = ratio(BigInt::one(), den);
        s = if k % 2 == 0 { s + term } else { s - term };
    }
    let phase = h(a - b - z);
    if phase.rem_euclid(2) == 1 {
        s = -s;
    }
    finish(s, r)
}

/// Exact 6-j symbol; all arguments doubled.
pub fn six_j(j: [i32; 6]) -> f64 {
    let [a, b, c, d, e, f] = j;
    let triads = [(a, b, c), (a, e, f), (d, b, f), (d, e, c)];
    if triads.iter().any(|&(p, q, r)| !triangle(p, q, r)) {
        return 0.0;
    }
    let r = triads.iter().fold(BigRational::one(), |acc, &(p, q, r)| acc * delta(p, q, r));
    let sums = triads.map(|(p, q, r)| (p + q + r) / 2);
    let tops = [(a + b + d + e) / 2, (b + c + e + f) / 2, (c + a + f + d) / 2];
    let lo = *sums.iter().max().unwrap();
    let hi = *tops.iter().min().unwrap();
    let mut s = BigRational::zero();
    for t in lo..=hi {
        let mut den = BigInt::one();
        for &v in &sums {
            den *= fact(t - v);
        }
        for &v in &tops {
            den *= fact(v - t);
        }
        let term = ratio(fact(t + 1), den);
        s = if t % 2 == 0 { s + term } else { s - term };
    }
    finish(s, r)
}

pub fn h(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

/// Every admissible 3-j argument set with doubled j up to `max_twice`.
pub fn all_three_j(max_twice: i32) -> Vec<([i32; 3], [i32; 3])> {
    let mut out = Vec::new();
    for a in 0..=max_twice {
        for b in 0..=max_twice {
            for c in 0..=max_twice {
                if !triangle(a, b, c) {
                    continue;
                }
                for x in (-a..=a).step_by(2) {
                    for y in (-b..=b).step_by(2) {
                        let z = -x - y;
                        if z.abs() <= c {
                            out.push(([a, b, c], [x, y, z]));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Every 6-j argument set with doubled j up to `max_twice` whose first
/// triad closes (the others may or may not).
pub fn all_six_j(max_twice: i32) -> Vec<[i32; 6]> {
    let mut out = Vec::new();
    let r = 0..=max_twice;
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                if !triangle(a, b, c) {
                    continue;
                }
                for d in r.clone() {
                    for e in r.clone() {
                        for f in r.clone() {
                            out.push([a, b, c, d, e, f]);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Deterministic low-discrepancy numbers in [0, 1) (additive golden-ratio sequence).
pub fn weyl(k: usize, dim: usize) -> f64 {
    let alpha = [0.618_033_988_749_894_9, 0.414_213_562_373_095_1, 0.732_050_807_568_877_2, 0.236_067_977_499_789_7,
        0.645_751_311_064_590_6, 0.316_624_790_355_399_8];
    (0.5 + (k + 1) as f64 * alpha[dim % alpha.len()]).fract()
}

/// A reproducible field envelope with components of magnitude up to `scale`.
pub fn sample_field(k: usize, scale: f64, omega: f64) -> FieldEnvelope {
    let v = |d: usize| scale * (2.0 * weyl(k, d) - 1.0);
    FieldEnvelope::new(Complex64::new(v(0), v(1)), Complex64::new(v(2), v(3)), Complex64::new(v(4), v(5)), omega)
}
