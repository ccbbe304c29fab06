//! Wigner 3-j and 6-j symbols.
//!
//! Both symbols are evaluated from their Racah sums. Every factorial is kept
//! as a vector of prime exponents; the common factor of all terms is pulled
//! out so the alternating sum itself is an exact big integer, and only the
//! final product is rounded to `f64`. This keeps full precision for the
//! j ~ 15/2 arguments that show up with I = 7/2 hyperfine manifolds.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An integer or half-integer angular momentum (or projection), stored as
/// twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(value: i32) -> Self {
        HalfInt(2 * value)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub const fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// Projections m = -j, -j+1, ..., j.
    pub fn projections(self) -> impl DoubleEndedIterator<Item = HalfInt> + Clone {
        let j = self.0;
        (0..=j).map(move |k| HalfInt(-j + 2 * k))
    }

    /// `j(j+1)`
    pub fn casimir(self) -> f64 {
        let j = self.value();
        j * (j + 1.0)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Argument(format!("cannot parse {s:?} as an angular momentum"));
        match s.split_once('/') {
            Some((num, "2")) => num.trim().parse::<i32>().map(HalfInt).map_err(|_| bad()),
            Some(_) => Err(bad()),
            None => s
                .trim()
                .parse::<i32>()
                .ok()
                .and_then(|v| v.checked_mul(2))
                .map(HalfInt)
                .ok_or_else(bad),
        }
    }
}

fn check_j(j: HalfInt) -> Result<()> {
    if j.0 < 0 {
        return Err(Error::Argument(format!("j = {j} is negative")));
    }
    Ok(())
}

fn check_jm(j: HalfInt, m: HalfInt) -> Result<()> {
    check_j(j)?;
    if m.0.abs() > j.0 || (j.0 - m.0) % 2 != 0 {
        return Err(Error::Argument(format!("m = {m} is not a projection of j = {j}")));
    }
    Ok(())
}

/// Triangle rule for doubled arguments, including the integer-perimeter condition.
fn triangle(a: i32, b: i32, c: i32) -> bool {
    c >= (a - b).abs() && c <= a + b && (a + b + c) % 2 == 0
}

struct PrimeTable {
    primes: Vec<u32>,
}

const MAX_FACTORIAL: u32 = 400;

fn prime_table() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = MAX_FACTORIAL as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                (i * i..=n).step_by(i).for_each(|k| sieve[k] = false);
            }
            i += 1;
        }
        let primes = (2..=n).filter(|&k| sieve[k]).map(|k| k as u32).collect();
        PrimeTable { primes }
    })
}

/// Prime exponents of a rational number built from factorials.
#[derive(Clone, Debug)]
struct Factored(Vec<i64>);

impl Factored {
    fn one() -> Self {
        Factored(vec![0; prime_table().primes.len()])
    }

    /// Multiplies by `n!^power` (Legendre's formula).
    fn mul_factorial(&mut self, n: i32, power: i64) {
        debug_assert!(n >= 0);
        let n = n as u32;
        assert!(n <= MAX_FACTORIAL, "factorial argument {n} exceeds table");
        for (e, &p) in self.0.iter_mut().zip(&prime_table().primes) {
            if p > n {
                break;
            }
            let mut k = n / p;
            let mut count = 0i64;
            while k > 0 {
                count += i64::from(k);
                k /= p;
            }
            *e += power * count;
        }
    }
}

/// A signed sum of factored terms, evaluated exactly.
///
/// Returns `(S, common)` with `sum = S * prod p^common`, `S` an integer.
fn exact_sum(terms: &[(bool, Factored)]) -> (BigInt, Factored) {
    let n = prime_table().primes.len();
    let mut common = Factored(vec![i64::MAX; n]);
    for (_, t) in terms {
        for (c, &e) in common.0.iter_mut().zip(&t.0) {
            *c = (*c).min(e);
        }
    }
    let mut total = BigInt::zero();
    for (negative, t) in terms {
        let mut value = BigInt::from(1u32);
        for ((&e, &c), &p) in t.0.iter().zip(&common.0).zip(&prime_table().primes) {
            let k = (e - c) as u32;
            if k > 0 {
                value *= BigInt::from(p).pow(k);
            }
        }
        if *negative {
            total -= value;
        } else {
            total += value;
        }
    }
    (total, common)
}

/// `sign * S * sqrt(prod p^twice_exp)` rounded once per big-integer conversion.
fn finish(sum: &BigInt, twice_exp: &[i64]) -> f64 {
    if sum.is_zero() {
        return 0.0;
    }
    let mut num = sum.abs();
    let mut den = BigInt::from(1u32);
    let mut rad_num = BigInt::from(1u32);
    let mut rad_den = BigInt::from(1u32);
    for (&e2, &p) in twice_exp.iter().zip(&prime_table().primes) {
        if e2 == 0 {
            continue;
        }
        let p = BigInt::from(p);
        let whole = (e2.abs() / 2) as u32;
        let odd = e2.abs() % 2 == 1;
        if e2 > 0 {
            num *= p.pow(whole);
            if odd {
                rad_num *= p;
            }
        } else {
            den *= p.pow(whole);
            if odd {
                rad_den *= p;
            }
        }
    }
    let magnitude = ratio_to_f64(&num, &den) * ratio_to_f64(&rad_num, &rad_den).sqrt();
    if sum.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    // scale both to at most ~1000 bits so the f64 conversions stay finite
    let shift = num.bits().max(den.bits()).saturating_sub(1000);
    let (n, d) = if shift > 0 {
        (num >> shift, den >> shift)
    } else {
        (num.clone(), den.clone())
    };
    let n = n.to_f64().unwrap_or(f64::NAN);
    let d = d.to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Adds `Δ(a, b, c)^power` for doubled arguments.
fn mul_delta(f: &mut Factored, a: i32, b: i32, c: i32, power: i64) {
    f.mul_factorial((a + b - c) / 2, power);
    f.mul_factorial((a - b + c) / 2, power);
    f.mul_factorial((-a + b + c) / 2, power);
    f.mul_factorial((a + b + c) / 2 + 1, -power);
}

/// Wigner 3-j symbol `(j1 j2 j3; m1 m2 m3)`.
///
/// Returns exactly 0 when the projections do not sum to zero or the triangle
/// rule fails. Errors if some `m` is not a valid projection of its `j`.
pub fn three_j(j1: HalfInt, j2: HalfInt, j3: HalfInt, m1: HalfInt, m2: HalfInt, m3: HalfInt) -> Result<f64> {
    check_jm(j1, m1)?;
    check_jm(j2, m2)?;
    check_jm(j3, m3)?;
    let (a, b, c) = (j1.0, j2.0, j3.0);
    let (x, y, z) = (m1.0, m2.0, m3.0);
    if x + y + z != 0 || !triangle(a, b, c) {
        return Ok(0.0);
    }

    let t_min = 0.max((b - c - x) / 2).max((a - c + y) / 2);
    let t_max = ((a + b - c) / 2).min((a - x) / 2).min((b + y) / 2);
    if t_min > t_max {
        return Ok(0.0);
    }

    let terms: Vec<(bool, Factored)> = (t_min..=t_max)
        .map(|t| {
            let mut f = Factored::one();
            f.mul_factorial(t, -1);
            f.mul_factorial((c - b + x) / 2 + t, -1);
            f.mul_factorial((c - a - y) / 2 + t, -1);
            f.mul_factorial((a + b - c) / 2 - t, -1);
            f.mul_factorial((a - x) / 2 - t, -1);
            f.mul_factorial((b + y) / 2 - t, -1);
            (t % 2 == 1, f)
        })
        .collect();
    let (sum, common) = exact_sum(&terms);

    let mut pref = Factored::one();
    mul_delta(&mut pref, a, b, c, 1);
    for (j, m) in [(a, x), (b, y), (c, z)] {
        pref.mul_factorial((j + m) / 2, 1);
        pref.mul_factorial((j - m) / 2, 1);
    }
    let twice_exp: Vec<i64> = common.0.iter().zip(&pref.0).map(|(&c, &p)| 2 * c + p).collect();

    let value = finish(&sum, &twice_exp);
    let phase = (a - b - z) / 2;
    Ok(if phase.rem_euclid(2) == 1 { -value } else { value })
}

/// Wigner 6-j symbol `{j1 j2 j3; j4 j5 j6}`.
///
/// Returns exactly 0 when any of the four triads
/// (j1 j2 j3), (j1 j5 j6), (j4 j2 j6), (j4 j5 j3) violates the triangle rule.
pub fn six_j(j1: HalfInt, j2: HalfInt, j3: HalfInt, j4: HalfInt, j5: HalfInt, j6: HalfInt) -> Result<f64> {
    for j in [j1, j2, j3, j4, j5, j6] {
        check_j(j)?;
    }
    let (a, b, c, d, e, f) = (j1.0, j2.0, j3.0, j4.0, j5.0, j6.0);
    let triads = [(a, b, c), (a, e, f), (d, b, f), (d, e, c)];
    if !triads.iter().all(|&(x, y, z)| triangle(x, y, z)) {
        return Ok(0.0);
    }

    let lows: Vec<i32> = triads.iter().map(|&(x, y, z)| (x + y + z) / 2).collect();
    let highs = [(a + b + d + e) / 2, (b + c + e + f) / 2, (c + a + f + d) / 2];
    let t_min = *lows.iter().max().unwrap();
    let t_max = *highs.iter().min().unwrap();
    if t_min > t_max {
        return Ok(0.0);
    }

    let terms: Vec<(bool, Factored)> = (t_min..=t_max)
        .map(|t| {
            let mut fac = Factored::one();
            fac.mul_factorial(t + 1, 1);
            for &l in &lows {
                fac.mul_factorial(t - l, -1);
            }
            for &h in &highs {
                fac.mul_factorial(h - t, -1);
            }
            (t % 2 == 1, fac)
        })
        .collect();
    let (sum, common) = exact_sum(&terms);

    let mut pref = Factored::one();
    for &(x, y, z) in &triads {
        mul_delta(&mut pref, x, y, z, 1);
    }
    let twice_exp: Vec<i64> = common.0.iter().zip(&pref.0).map(|(&c, &p)| 2 * c + p).collect();
    Ok(finish(&sum, &twice_exp))
}
