//! Magic wavelengths: crossings of the lower-level scalar polarizability
//! with the upper-level stretched combinations `α0 ± α2`.

use std::fmt;

use serde::Serialize;

use crate::atomdata::{AtomDatabase, FineState};
use crate::constants::wavelength_to_angular;
use crate::polarizability::{Damping, StatePolarizability};
use crate::roots::bisect;
use crate::{Error, Result};

/// Crossings are accepted only when `|Δα|` re-evaluates below this, a.u.
pub const CROSSING_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// α0 + α2
    Sum,
    /// α0 − α2
    Difference,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Sum => "sum",
            Branch::Difference => "difference",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DetuningSide {
    Red,
    Blue,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Crossing {
    /// Vacuum wavelength, m.
    pub wavelength: f64,
    pub branch: Branch,
    /// Sign of dΔα/dλ at the crossing, ±1.
    pub slope_sign: i8,
    /// Relative to the upper–lower transition wavelength.
    pub detuning_side: DetuningSide,
    /// `Δα` at the returned wavelength, a.u.
    pub residual: f64,
    /// Common polarizability at the crossing, a.u.
    pub alpha: f64,
}

/// A sum-branch and a difference-branch crossing close to each other.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MagicCluster {
    pub sum: Crossing,
    pub difference: Crossing,
}

impl MagicCluster {
    /// Mean of the two branch wavelengths, m.
    pub fn central(&self) -> f64 {
        0.5 * (self.sum.wavelength + self.difference.wavelength)
    }

    /// Distance between the two branch wavelengths, m.
    pub fn spread(&self) -> f64 {
        (self.sum.wavelength - self.difference.wavelength).abs()
    }
}

/// Search parameters. Wavelengths in nm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MagicSearch {
    pub guard_band_nm: f64,
    pub step_nm: f64,
    pub cluster_nm: f64,
    pub damping: Damping,
}

impl Default for MagicSearch {
    fn default() -> Self {
        MagicSearch { guard_band_nm: 0.5, step_nm: 0.02, cluster_nm: 10.0, damping: Damping::Included }
    }
}

impl MagicSearch {
    /// All crossings of both branches inside `window` (m), ordered by wavelength.
    pub fn find(&self, db: &AtomDatabase, upper: &str, lower: &str, window: (f64, f64)) -> Result<Vec<Crossing>> {
        let (lo, hi) = window;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::Window(format!("empty wavelength window {:.3}–{:.3} nm", lo * 1e9, hi * 1e9)));
        }
        if !(self.step_nm > 0.0 && self.guard_band_nm >= 0.0) {
            return Err(Error::Argument("grid step must be positive and guard band non-negative".into()));
        }
        let up = StatePolarizability::new(db, upper)?;
        let low = StatePolarizability::new(db, lower)?;
        let transition = db.transition_wavelength(upper, lower)?;

        let guard = self.guard_band_nm * 1e-9;
        let mut poles: Vec<f64> = up
            .pole_frequencies()
            .into_iter()
            .chain(low.pole_frequencies())
            .map(crate::constants::angular_to_wavelength)
            .collect();
        poles.sort_by(f64::total_cmp);
        let segments = allowed_segments(lo, hi, &poles, guard);
        if segments.is_empty() {
            return Err(Error::Window(format!(
                "window {:.3}–{:.3} nm lies inside resonance guard bands",
                lo * 1e9,
                hi * 1e9
            )));
        }

        let damping = self.damping;
        let delta = |branch: Branch, lambda: f64| {
            let w = wavelength_to_angular(lambda);
            let u = up.at(w, damping);
            let l = low.at(w, damping).scalar;
            match branch {
                Branch::Sum => u.scalar + u.tensor - l,
                Branch::Difference => u.scalar - u.tensor - l,
            }
        };

        let step = self.step_nm * 1e-9;
        let mut out = Vec::new();
        for &(a, b) in &segments {
            let n = ((b - a) / step).ceil().max(1.0) as usize;
            let grid: Vec<f64> = (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
            for branch in [Branch::Sum, Branch::Difference] {
                let vals: Vec<f64> = grid.iter().map(|&x| delta(branch, x)).collect();
                for k in 0..n {
                    if vals[k] == 0.0 || vals[k].signum() != vals[k + 1].signum() {
                        if vals[k + 1] == 0.0 && k + 1 < n {
                            continue; // picked up as the left end of the next cell
                        }
                        let Some(root) = bisect(|x| delta(branch, x), grid[k], grid[k + 1], 0.0) else {
                            continue;
                        };
                        if root.value.abs() >= CROSSING_TOLERANCE {
                            continue;
                        }
                        let d = 1e-13;
                        let slope = delta(branch, root.x + d) - delta(branch, root.x - d);
                        let w = wavelength_to_angular(root.x);
                        out.push(Crossing {
                            wavelength: root.x,
                            branch,
                            slope_sign: if slope >= 0.0 { 1 } else { -1 },
                            detuning_side: if root.x > transition { DetuningSide::Red } else { DetuningSide::Blue },
                            residual: root.value,
                            alpha: low.at(w, damping).scalar,
                        });
                    }
                }
            }
        }
        out.sort_by(|x, y| x.wavelength.total_cmp(&y.wavelength));
        Ok(out)
    }

    /// Pairs sum and difference crossings, closest first, within `cluster_nm`.
    pub fn cluster(&self, crossings: &[Crossing]) -> Vec<MagicCluster> {
        let max = self.cluster_nm * 1e-9;
        let sums: Vec<&Crossing> = crossings.iter().filter(|c| c.branch == Branch::Sum).collect();
        let diffs: Vec<&Crossing> = crossings.iter().filter(|c| c.branch == Branch::Difference).collect();
        let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
        for (i, s) in sums.iter().enumerate() {
            for (j, d) in diffs.iter().enumerate() {
                let gap = (s.wavelength - d.wavelength).abs();
                if gap <= max {
                    pairs.push((gap, i, j));
                }
            }
        }
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
        let (mut used_s, mut used_d) = (vec![false; sums.len()], vec![false; diffs.len()]);
        let mut out = Vec::new();
        for (_, i, j) in pairs {
            if used_s[i] || used_d[j] {
                continue;
            }
            used_s[i] = true;
            used_d[j] = true;
            out.push(MagicCluster { sum: *sums[i], difference: *diffs[j] });
        }
        out.sort_by(|x, y| x.central().total_cmp(&y.central()));
        out
    }
}

/// `[lo, hi]` minus the union of `±guard` bands around `poles`.
fn allowed_segments(lo: f64, hi: f64, poles: &[f64], guard: f64) -> Vec<(f64, f64)> {
    let mut segments = vec![(lo, hi)];
    for &p in poles {
        let (g0, g1) = (p - guard, p + guard);
        segments = segments
            .into_iter()
            .flat_map(|(a, b)| {
                let mut parts = Vec::with_capacity(2);
                if g1 <= a || g0 >= b {
                    parts.push((a, b));
                } else {
                    if g0 > a {
                        parts.push((a, g0));
                    }
                    if g1 < b {
                        parts.push((g1, b));
                    }
                }
                parts
            })
            .collect();
    }
    segments.retain(|(a, b)| b > a);
    segments
}

/// Crossings of `upper` (α0 ± α2) with `lower` (α0) inside `window` (m),
/// using the default search parameters.
pub fn find_crossings(upper: &FineState, lower: &FineState, window: (f64, f64), db: &AtomDatabase) -> Result<Vec<Crossing>> {
    MagicSearch::default().find(db, &upper.label, &lower.label, window)
}

/// Default clustering of a crossing list.
pub fn clusters(crossings: &[Crossing]) -> Vec<MagicCluster> {
    MagicSearch::default().cluster(crossings)
}

/// Mean wavelength of a cluster holding exactly one crossing per branch.
pub fn central_magic(crossings: &[Crossing]) -> Result<f64> {
    let sum: Vec<&Crossing> = crossings.iter().filter(|c| c.branch == Branch::Sum).collect();
    let difference: Vec<&Crossing> = crossings.iter().filter(|c| c.branch == Branch::Difference).collect();
    if sum.len() != 1 || difference.len() != 1 {
        return Err(Error::ClusterSize { sum: sum.len(), difference: difference.len() });
    }
    Ok(0.5 * (sum[0].wavelength + difference[0].wavelength))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn search(lo_nm: f64, hi_nm: f64, step: f64) -> Vec<Crossing> {
        let db = AtomDatabase::cesium();
        MagicSearch { step_nm: step, ..Default::default() }
            .find(&db, "6P3/2", "6S1/2", (lo_nm * 1e-9, hi_nm * 1e-9))
            .unwrap()
    }

    fn fake(nm: f64, branch: Branch) -> Crossing {
        Crossing {
            wavelength: nm * 1e-9,
            branch,
            slope_sign: 1,
            detuning_side: DetuningSide::Red,
            residual: 0.0,
            alpha: 0.0,
        }
    }

    #[test]
    fn red_window_has_one_cluster() {
        let c = search(900.0, 960.0, 0.02);
        let cl = clusters(&c);
        assert_eq!(cl.len(), 1);
        let central = cl[0].central() * 1e9;
        assert!((central - 934.5).abs() < 3.0, "{central}");
        assert_eq!(cl[0].sum.detuning_side, DetuningSide::Red);
    }

    #[test]
    fn blue_windows_are_blue_detuned() {
        for (lo, hi) in [(660.0, 700.0), (600.0, 640.0)] {
            let c = search(lo, hi, 0.02);
            assert!(!c.is_empty());
            assert!(c.iter().all(|x| x.detuning_side == DetuningSide::Blue));
            assert!(!clusters(&c).is_empty());
        }
    }

    #[test]
    fn residuals_below_tolerance() {
        let db = AtomDatabase::cesium();
        let up = StatePolarizability::new(&db, "6P3/2").unwrap();
        let low = StatePolarizability::new(&db, "6S1/2").unwrap();
        for c in search(600.0, 960.0, 0.02) {
            let w = wavelength_to_angular(c.wavelength);
            let u = up.at(w, Damping::Included);
            let l = low.at(w, Damping::Included).scalar;
            let d = match c.branch {
                Branch::Sum => u.scalar + u.tensor - l,
                Branch::Difference => u.scalar - u.tensor - l,
            };
            assert!(d.abs() < CROSSING_TOLERANCE, "{d}");
            assert_relative_eq!(c.alpha, l);
        }
    }

    #[test]
    fn stable_under_grid_refinement() {
        for (lo, hi) in [(600.0, 640.0), (660.0, 700.0), (900.0, 960.0)] {
            let coarse = search(lo, hi, 0.02);
            let fine = search(lo, hi, 0.01);
            assert_eq!(coarse.len(), fine.len());
            for (a, b) in coarse.iter().zip(&fine) {
                assert_eq!(a.branch, b.branch);
                assert!((a.wavelength - b.wavelength).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn crossings_avoid_guard_bands() {
        let db = AtomDatabase::cesium();
        let mut poles: Vec<f64> = ["6P3/2", "6S1/2"]
            .iter()
            .flat_map(|s| StatePolarizability::new(&db, s).unwrap().pole_frequencies())
            .map(crate::constants::angular_to_wavelength)
            .collect();
        poles.sort_by(f64::total_cmp);
        for c in search(500.0, 1100.0, 0.05) {
            assert!(poles.iter().all(|p| (c.wavelength - p).abs() >= 0.5e-9));
        }
    }

    #[test]
    fn window_errors() {
        let db = AtomDatabase::cesium();
        let s = MagicSearch::default();
        assert!(matches!(s.find(&db, "6P3/2", "6S1/2", (900e-9, 900e-9)), Err(Error::Window(_))));
        assert!(matches!(s.find(&db, "6P3/2", "6S1/2", (960e-9, 900e-9)), Err(Error::Window(_))));
        // entirely inside the D2 guard band
        assert!(matches!(s.find(&db, "6P3/2", "6S1/2", (852.2e-9, 852.4e-9)), Err(Error::Window(_))));
    }

    #[test]
    fn central_is_the_mean() {
        let m = central_magic(&[fake(938.0, Branch::Sum), fake(931.0, Branch::Difference)]).unwrap();
        assert_relative_eq!(m, 934.5e-9, max_relative = 1e-15);
        let m = central_magic(&[fake(684.0, Branch::Sum), fake(687.0, Branch::Difference)]).unwrap();
        assert_relative_eq!(m, 685.5e-9, max_relative = 1e-15);
        let m = central_magic(&[fake(700.0, Branch::Sum), fake(700.0, Branch::Difference)]).unwrap();
        assert_eq!(m, fake(700.0, Branch::Sum).wavelength);
    }

    #[test]
    fn central_rejects_wrong_cluster_size() {
        assert!(matches!(
            central_magic(&[fake(938.0, Branch::Sum)]),
            Err(Error::ClusterSize { sum: 1, difference: 0 })
        ));
        assert!(matches!(
            central_magic(&[fake(938.0, Branch::Sum), fake(931.0, Branch::Sum), fake(930.0, Branch::Difference)]),
            Err(Error::ClusterSize { sum: 2, difference: 1 })
        ));
    }

    #[test]
    fn clustering_prefers_closest_pairs() {
        let c = [fake(602.0, Branch::Difference), fake(611.6, Branch::Sum), fake(614.0, Branch::Difference)];
        let cl = clusters(&c);
        assert_eq!(cl.len(), 1);
        assert_relative_eq!(cl[0].difference.wavelength, 614e-9);
        assert!(clusters(&[fake(600.0, Branch::Sum), fake(611.0, Branch::Difference)]).is_empty());
    }

    #[test]
    fn segments_skip_guard_bands() {
        let s = allowed_segments(0.0, 10.0, &[2.0, 9.8, 20.0], 0.5);
        assert_eq!(s, vec![(0.0, 1.5), (2.5, 9.3)]);
    }
}
