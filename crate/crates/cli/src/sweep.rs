//! Parsing of `start:stop:step` sweeps and `start:stop` windows.

use std::str::FromStr;

/// Hard cap on sweep length, to turn typos like `800:1000:0.000001` into
/// a usage error instead of an hour-long run.
const MAX_POINTS: usize = 1_000_000;

/// An inclusive, evenly stepped range. A bare number is a one-point sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    pub fn single(value: f64) -> Self {
        Sweep { start: value, stop: value, step: 1.0 }
    }

    pub fn len(&self) -> usize {
        // tolerate accumulated rounding at the inclusive endpoint
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|k| round_grid(self.start + k as f64 * self.step)).collect()
    }
}

/// Snaps a grid value to 1e-9 of its unit so `0.1 + 0.2`-style noise does not
/// leak into the output.
fn round_grid(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

fn number(text: &str) -> Result<f64, String> {
    let v = f64::from_str(text.trim()).map_err(|_| format!("malformed number '{text}'"))?;
    if !v.is_finite() {
        return Err(format!("'{text}' is not finite"));
    }
    Ok(v)
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let sweep = match parts.as_slice() {
            [v] => Sweep::single(number(v)?),
            [a, b, c] => Sweep { start: number(a)?, stop: number(b)?, step: number(c)? },
            _ => return Err(format!("expected VALUE or START:STOP:STEP, got '{s}'")),
        };
        if sweep.start <= 0.0 {
            return Err(format!("start must be positive, got {}", sweep.start));
        }
        if sweep.stop < sweep.start {
            return Err(format!("empty range: stop {} is below start {}", sweep.stop, sweep.start));
        }
        if sweep.step <= 0.0 {
            return Err(format!("step must be positive, got {}", sweep.step));
        }
        if sweep.len() > MAX_POINTS {
            return Err(format!("range has {} points, limit is {MAX_POINTS}", sweep.len()));
        }
        Ok(sweep)
    }
}

/// An open wavelength window `start:stop`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub start: f64,
    pub stop: f64,
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let Some((a, b)) = s.split_once(':') else {
            return Err(format!("expected START:STOP, got '{s}'"));
        };
        let w = Window { start: number(a)?, stop: number(b)? };
        if w.start <= 0.0 || w.stop <= w.start {
            return Err(format!("window {}:{} is empty or not positive", w.start, w.stop));
        }
        Ok(w)
    }
}
