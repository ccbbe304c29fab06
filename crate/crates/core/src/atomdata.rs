//! Fine-structure levels, E1 couplings and hyperfine constants.
//!
//! The database is read from a plain-text file with one record per line:
//!
//! ```text
//! LEVEL <label> <n> <L> <2J> <energy_cm-1> <gamma_MHz>
//! TRANS <upper_label> <lower_label> <reduced_dipole_au>
//! HFS   <label> <2I> <A_MHz> <B_MHz>
//! ```
//!
//! `#` starts a comment. `gamma`, `A` and `B` are given divided by 2π (MHz);
//! they are stored internally in rad/s.

use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::constants::wavenumber_to_angular;
use crate::wigner::HalfInt;
use crate::{Error, Result};

/// The cesium-133 data file shipped with the crate.
pub const BUNDLED_CESIUM: &str = include_str!("../data/cesium.dat");

/// A fine-structure level `|n L_J>`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FineState {
    pub label: String,
    pub n: u32,
    pub l: u32,
    pub j: HalfInt,
    /// Term energy above the ground state, cm^-1.
    pub energy_cm: f64,
    /// Population decay rate γ, rad/s.
    pub decay_rate: f64,
}

impl FineState {
    /// Level energy as an angular frequency, rad/s.
    pub fn angular_frequency(&self) -> f64 {
        wavenumber_to_angular(self.energy_cm)
    }
}

/// An E1 transition between two declared levels (indices into
/// [`AtomDatabase::levels`]).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transition {
    pub upper: usize,
    pub lower: usize,
    /// `|<upper||D||lower>|` in atomic units (e a0).
    pub reduced_dipole: f64,
    /// ω_upper − ω_lower, rad/s.
    pub frequency: f64,
    /// γ_upper + γ_lower, rad/s.
    pub linewidth: f64,
}

/// One transition seen from a given level.
#[derive(Clone, Debug, PartialEq)]
pub struct Coupling {
    pub partner: usize,
    pub partner_j: HalfInt,
    pub reduced_dipole: f64,
    /// ω_partner − ω_state, rad/s; negative for partners below the state.
    pub frequency: f64,
    pub linewidth: f64,
}

#[derive(Clone, Debug, PartialEq)]
struct HfsRecord {
    level: usize,
    twice_i: i32,
    a_mhz: f64,
    b_mhz: f64,
}

/// A hyperfine sublevel `|F, M_F>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Sublevel {
    pub f: HalfInt,
    pub m: HalfInt,
}

impl std::fmt::Display for Sublevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F={} M={}", self.f, self.m)
    }
}

/// The `|F, M_F>` sublevels of one fine-structure level.
#[derive(Clone, Debug, PartialEq)]
pub struct HfsManifold {
    pub state: FineState,
    pub nuclear_spin: HalfInt,
    /// Magnetic-dipole constant, rad/s.
    pub a: f64,
    /// Electric-quadrupole constant, rad/s (0 for J = 1/2).
    pub b: f64,
    /// Ordered by F, then M_F, both ascending.
    pub sublevels: Vec<Sublevel>,
}

impl HfsManifold {
    pub fn new(state: FineState, nuclear_spin: HalfInt, a: f64, b: f64) -> Self {
        let j = state.j;
        let f_min = (j - nuclear_spin).abs();
        let f_max = j + nuclear_spin;
        let sublevels = (f_min.twice()..=f_max.twice())
            .step_by(2)
            .map(HalfInt::from_twice)
            .flat_map(|f| f.projections().map(move |m| Sublevel { f, m }))
            .collect();
        HfsManifold { state, nuclear_spin, a, b, sublevels }
    }

    pub fn dim(&self) -> usize {
        self.sublevels.len()
    }

    pub fn index_of(&self, sub: Sublevel) -> Option<usize> {
        self.sublevels.iter().position(|&s| s == sub)
    }

    /// Distinct F values in ascending order.
    pub fn families(&self) -> Vec<HalfInt> {
        let mut fs: Vec<HalfInt> = self.sublevels.iter().map(|s| s.f).collect();
        fs.dedup();
        fs
    }
}

/// An immutable, validated level/transition database.
#[derive(Clone, Debug)]
pub struct AtomDatabase {
    levels: Vec<FineState>,
    gamma_mhz: Vec<f64>,
    transitions: Vec<Transition>,
    hfs: Vec<HfsRecord>,
    index: HashMap<String, usize>,
}

/// Reads and validates a database file.
pub fn load_database(path: impl AsRef<Path>) -> Result<AtomDatabase> {
    AtomDatabase::load(path)
}

fn parse_field<T: FromStr>(tok: &str, what: &str, line: usize) -> Result<T> {
    tok.parse::<T>().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse {what} from {tok:?}"),
    })
}

fn parse_real(tok: &str, what: &str, line: usize) -> Result<f64> {
    let v: f64 = parse_field(tok, what, line)?;
    if !v.is_finite() {
        return Err(Error::Parse { line, message: format!("{what} must be finite, got {tok:?}") });
    }
    Ok(v)
}

impl AtomDatabase {
    /// The bundled cesium-133 database.
    pub fn cesium() -> Self {
        Self::parse(BUNDLED_CESIUM).expect("bundled cesium data is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut levels = Vec::new();
        let mut gamma_mhz = Vec::new();
        let mut index = HashMap::new();
        let mut pending_trans = Vec::new();
        let mut pending_hfs = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tok: Vec<&str> = content.split_whitespace().collect();
            let Some(&kind) = tok.first() else { continue };
            let expect = |n: usize| -> Result<()> {
                if tok.len() != n {
                    return Err(Error::Parse {
                        line,
                        message: format!("{kind} record needs {} fields, found {}", n - 1, tok.len() - 1),
                    });
                }
                Ok(())
            };
            match kind {
                "LEVEL" => {
                    expect(7)?;
                    let label = tok[1].to_string();
                    let n: u32 = parse_field(tok[2], "n", line)?;
                    let l: u32 = parse_field(tok[3], "L", line)?;
                    let twice_j: i32 = parse_field(tok[4], "2J", line)?;
                    let energy_cm = parse_real(tok[5], "energy", line)?;
                    let gamma = parse_real(tok[6], "gamma", line)?;
                    let l2 = 2 * l as i32;
                    if twice_j < 1 || (twice_j != l2 + 1 && twice_j != l2 - 1) {
                        return Err(Error::Parse { line, message: format!("2J = {twice_j} incompatible with L = {l}") });
                    }
                    if energy_cm < 0.0 || gamma < 0.0 {
                        return Err(Error::Parse { line, message: "energy and gamma must be non-negative".into() });
                    }
                    if index.insert(label.clone(), levels.len()).is_some() {
                        return Err(Error::Parse { line, message: format!("level {label} declared twice") });
                    }
                    levels.push(FineState {
                        label,
                        n,
                        l,
                        j: HalfInt::from_twice(twice_j),
                        energy_cm,
                        decay_rate: 2.0 * PI * gamma * 1e6,
                    });
                    gamma_mhz.push(gamma);
                }
                "TRANS" => {
                    expect(4)?;
                    let d = parse_real(tok[3], "reduced dipole", line)?;
                    if d < 0.0 {
                        return Err(Error::Parse { line, message: "reduced dipole must be non-negative".into() });
                    }
                    pending_trans.push((line, tok[1].to_string(), tok[2].to_string(), d));
                }
                "HFS" => {
                    expect(5)?;
                    let twice_i: i32 = parse_field(tok[2], "2I", line)?;
                    if twice_i < 0 {
                        return Err(Error::Parse { line, message: "2I must be non-negative".into() });
                    }
                    let a = parse_real(tok[3], "A", line)?;
                    let b = parse_real(tok[4], "B", line)?;
                    pending_hfs.push((line, tok[1].to_string(), twice_i, a, b));
                }
                other => {
                    return Err(Error::Parse { line, message: format!("unknown record type {other:?}") });
                }
            }
        }

        if levels.is_empty() {
            return Err(Error::EmptyDatabase);
        }
        if !levels.iter().any(|l| l.energy_cm == 0.0) {
            return Err(Error::InvalidRecord("no level with energy 0 (ground state)".into()));
        }

        let mut seen = HashSet::new();
        let mut transitions = Vec::with_capacity(pending_trans.len());
        for (line, up, lo, d) in pending_trans {
            let find = |label: &str| {
                index.get(label).copied().ok_or_else(|| Error::DanglingLevel {
                    upper: up.clone(),
                    lower: lo.clone(),
                    missing: label.to_string(),
                })
            };
            let (u, l) = (find(&up)?, find(&lo)?);
            let key = (u.min(l), u.max(l));
            if !seen.insert(key) {
                return Err(Error::DuplicateTransition(up, lo));
            }
            let (su, sl) = (&levels[u], &levels[l]);
            if su.energy_cm <= sl.energy_cm {
                return Err(Error::Parse { line, message: format!("{up} is not above {lo}") });
            }
            if (su.l as i32 - sl.l as i32).abs() != 1 || (su.j.twice() - sl.j.twice()).abs() > 2 {
                return Err(Error::Parse { line, message: format!("{up} -> {lo} is not an E1 transition") });
            }
            transitions.push(Transition {
                upper: u,
                lower: l,
                reduced_dipole: d,
                frequency: su.angular_frequency() - sl.angular_frequency(),
                linewidth: su.decay_rate + sl.decay_rate,
            });
        }

        let mut hfs: Vec<HfsRecord> = Vec::with_capacity(pending_hfs.len());
        for (line, label, twice_i, a_mhz, b_mhz) in pending_hfs {
            let level = *index.get(&label).ok_or_else(|| Error::Parse {
                line,
                message: format!("hyperfine record for undeclared level {label}"),
            })?;
            if hfs.iter().any(|h| h.level == level) {
                return Err(Error::Parse { line, message: format!("hyperfine constants for {label} given twice") });
            }
            if b_mhz != 0.0 && (levels[level].j.twice() < 2 || twice_i < 2) {
                return Err(Error::Parse {
                    line,
                    message: format!("quadrupole constant must be 0 for {label} (J or I below 1)"),
                });
            }
            hfs.push(HfsRecord { level, twice_i, a_mhz, b_mhz });
        }

        Ok(AtomDatabase { levels, gamma_mhz, transitions, hfs, index })
    }

    pub fn levels(&self) -> &[FineState] {
        &self.levels
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownLevel(label.to_string()))
    }

    pub fn level(&self, label: &str) -> Result<&FineState> {
        Ok(&self.levels[self.index_of(label)?])
    }

    /// All transitions touching `label`, seen from that level.
    pub fn couplings(&self, label: &str) -> Result<Vec<Coupling>> {
        let me = self.index_of(label)?;
        Ok(self
            .transitions
            .iter()
            .filter_map(|t| {
                let (partner, sign) = if t.upper == me {
                    (t.lower, -1.0)
                } else if t.lower == me {
                    (t.upper, 1.0)
                } else {
                    return None;
                };
                Some(Coupling {
                    partner,
                    partner_j: self.levels[partner].j,
                    reduced_dipole: t.reduced_dipole,
                    frequency: sign * t.frequency,
                    linewidth: t.linewidth,
                })
            })
            .collect())
    }

    /// `(A, B, I)` with A and B in rad/s.
    pub fn hfs_constants(&self, label: &str) -> Result<(f64, f64, HalfInt)> {
        let level = self.index_of(label)?;
        let rec = self
            .hfs
            .iter()
            .find(|h| h.level == level)
            .ok_or_else(|| Error::MissingHfs(label.to_string()))?;
        Ok((
            2.0 * PI * rec.a_mhz * 1e6,
            2.0 * PI * rec.b_mhz * 1e6,
            HalfInt::from_twice(rec.twice_i),
        ))
    }

    pub fn manifold(&self, label: &str) -> Result<HfsManifold> {
        let (a, b, i) = self.hfs_constants(label)?;
        Ok(HfsManifold::new(self.level(label)?.clone(), i, a, b))
    }

    /// Vacuum wavelength (m) of the transition between two levels.
    pub fn transition_wavelength(&self, a: &str, b: &str) -> Result<f64> {
        let da = self.level(a)?.energy_cm;
        let db = self.level(b)?.energy_cm;
        Ok(1e-2 / (da - db).abs())
    }

    /// Canonical text form: levels, then hyperfine records, then transitions,
    /// each in input order with single-space separators.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (l, g) in self.levels.iter().zip(&self.gamma_mhz) {
            let _ = writeln!(out, "LEVEL {} {} {} {} {} {}", l.label, l.n, l.l, l.j.twice(), l.energy_cm, g);
        }
        for h in &self.hfs {
            let _ = writeln!(out, "HFS {} {} {} {}", self.levels[h.level].label, h.twice_i, h.a_mhz, h.b_mhz);
        }
        for t in &self.transitions {
            let _ = writeln!(
                out,
                "TRANS {} {} {}",
                self.levels[t.upper].label, self.levels[t.lower].label, t.reduced_dipole
            );
        }
        out
    }
}

impl FromStr for AtomDatabase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Strips comments and blank lines and collapses whitespace.
pub fn normalize(text: &str) -> String {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|l| !l.is_empty())
        .fold(String::new(), |mut acc, l| {
            acc.push_str(&l);
            acc.push('\n');
            acc
        })
}
