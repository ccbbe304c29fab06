//! Hyperfine plus dynamic Stark Hamiltonian of a fine-structure manifold in
//! the `|F, M_F>` basis.
//!
//! The Stark operator of a field with spherical components `E_q` is
//!
//! ```text
//! V = −¼ α0 |E|² − ¼ α2 Σ_{μμ'} (−1)^μ' E_μ E*_{−μ'} T_{μμ'}
//! ```
//!
//! with `T_{μμ'}` the rank-2 tensor built from 3-j and 6-j symbols. Fields of
//! different colors add at the operator level; cross-frequency terms average
//! to zero and are left out. All matrices are in rad/s; reported shifts are in
//! Hz.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::atomdata::{AtomDatabase, HfsManifold, Sublevel};
use crate::eigen::hermitian_jacobi;
use crate::constants::{intensity_to_field_squared, POLARIZABILITY_AU, HBAR};
use crate::polarizability::{Damping, Polarizability, StatePolarizability};
use crate::wigner::{six_j, three_j, HalfInt};
use crate::{Error, Result};

/// Residual bound `‖Hv − λv‖ / ‖H‖_F` every eigenpair must meet.
pub const EIGEN_RESIDUAL: f64 = 1e-12;

/// Spherical tensor components of a monochromatic field envelope.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FieldEnvelope {
    /// `E_{-1}`, V/m.
    pub e_minus1: Complex64,
    /// `E_0`, V/m.
    pub e_0: Complex64,
    /// `E_{+1}`, V/m.
    pub e_plus1: Complex64,
    /// Angular frequency, rad/s.
    pub omega: f64,
}

impl FieldEnvelope {
    pub fn new(e_minus1: Complex64, e_0: Complex64, e_plus1: Complex64, omega: f64) -> Self {
        FieldEnvelope { e_minus1, e_0, e_plus1, omega }
    }

    pub fn zero(omega: f64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        FieldEnvelope::new(z, z, z, omega)
    }

    /// A traveling wave of intensity `intensity` (W/m²) polarized along z.
    pub fn linear_z(intensity: f64, omega: f64) -> Self {
        let e = intensity_to_field_squared(intensity).sqrt();
        let z = Complex64::new(0.0, 0.0);
        FieldEnvelope::new(z, Complex64::new(e, 0.0), z, omega)
    }

    /// From Cartesian components, with `E_{±1} = ∓(E_x ± iE_y)/√2`, `E_0 = E_z`.
    pub fn from_cartesian(ex: Complex64, ey: Complex64, ez: Complex64, omega: f64) -> Self {
        let i = Complex64::i();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        FieldEnvelope::new((ex - i * ey) * r, ez, -(ex + i * ey) * r, omega)
    }

    /// `E_q` for `q ∈ {−1, 0, 1}`.
    pub fn component(&self, q: i32) -> Complex64 {
        match q {
            -1 => self.e_minus1,
            0 => self.e_0,
            1 => self.e_plus1,
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// `|E|² = |E_{-1}|² + |E_0|² + |E_1|²`, V²/m².
    pub fn field_squared(&self) -> f64 {
        self.e_minus1.norm_sqr() + self.e_0.norm_sqr() + self.e_plus1.norm_sqr()
    }

    /// Rotation about z by `phi0`: `E_q → E_q exp(−iqφ0)`.
    pub fn rotate(&self, phi0: f64) -> Self {
        let ph = |q: f64| Complex64::from_polar(1.0, -q * phi0);
        FieldEnvelope::new(self.e_minus1 * ph(-1.0), self.e_0, self.e_plus1 * ph(1.0), self.omega)
    }

    /// Multiplies every amplitude by `c`.
    pub fn scale(&self, c: f64) -> Self {
        FieldEnvelope::new(self.e_minus1 * c, self.e_0 * c, self.e_plus1 * c, self.omega)
    }

    pub fn is_zero(&self) -> bool {
        self.field_squared() == 0.0
    }
}

/// Eigen-spectrum of a manifold in a set of fields.
#[derive(Clone, Debug)]
pub struct ShiftSpectrum {
    pub manifold: HfsManifold,
    /// Eigenvalues in Hz relative to the fine-structure origin, ascending.
    pub eigenvalues: Vec<f64>,
    /// Adiabatic `|F, M_F>` label of each eigenvalue.
    pub labels: Vec<Sublevel>,
    /// Eigenvalue minus the zero-field hyperfine energy of its label, Hz.
    pub shifts: Vec<f64>,
}

impl ShiftSpectrum {
    pub fn shift_of(&self, sub: Sublevel) -> Option<f64> {
        self.labels.iter().position(|&l| l == sub).map(|k| self.shifts[k])
    }

    /// `(label, shift)` pairs of one F family, ordered by M_F.
    pub fn family(&self, f: HalfInt) -> Vec<(Sublevel, f64)> {
        let mut out: Vec<(Sublevel, f64)> = self
            .labels
            .iter()
            .zip(&self.shifts)
            .filter(|(l, _)| l.f == f)
            .map(|(&l, &s)| (l, s))
            .collect();
        out.sort_by_key(|(l, _)| l.m);
        out
    }
}

/// Zero-field hyperfine energy (rad/s) of level F.
pub fn hfs_energy(a: f64, b: f64, i: HalfInt, j: HalfInt, f: HalfInt) -> f64 {
    let k = f.casimir() - i.casimir() - j.casimir();
    let mut e = 0.5 * a * k;
    if i.twice() >= 2 && j.twice() >= 2 && b != 0.0 {
        let (iv, jv) = (i.value(), j.value());
        e += b * (1.5 * k * (k + 1.0) - 2.0 * i.casimir() * j.casimir())
            / (2.0 * iv * (2.0 * iv - 1.0) * 2.0 * jv * (2.0 * jv - 1.0));
    }
    e
}

/// Diagonal hyperfine Hamiltonian (rad/s) in the `|F, M_F>` basis.
pub fn hfs_hamiltonian(manifold: &HfsManifold) -> DMatrix<Complex64> {
    let j = manifold.state.j;
    let diag: Vec<Complex64> = manifold
        .sublevels
        .iter()
        .map(|s| Complex64::new(hfs_energy(manifold.a, manifold.b, manifold.nuclear_spin, j, s.f), 0.0))
        .collect();
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
}

fn parity(twice: i32) -> f64 {
    if twice.rem_euclid(4) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The field-independent rank-2 matrices `G_q` (q = −2..=2, index q + 2).
fn rank2_matrices(manifold: &HfsManifold) -> Result<Option<[DMatrix<f64>; 5]>> {
    let j = manifold.state.j;
    let i = manifold.nuclear_spin;
    if j.twice() < 2 {
        return Ok(None);
    }
    let jv = j.value();
    let pref = (7.5f64).sqrt() * ((jv + 1.0) * (2.0 * jv + 1.0) * (2.0 * jv + 3.0) / (jv * (2.0 * jv - 1.0))).sqrt();
    let two = HalfInt::from_int(2);
    let n = manifold.dim();
    let mut g: [DMatrix<f64>; 5] = std::array::from_fn(|_| DMatrix::zeros(n, n));
    for (row, s) in manifold.sublevels.iter().enumerate() {
        for (col, t) in manifold.sublevels.iter().enumerate() {
            let q = t.m - s.m;
            if q.twice().abs() > 4 {
                continue;
            }
            let sj = six_j(s.f, two, t.f, j, i, j)?;
            if sj == 0.0 {
                continue;
            }
            let tj = three_j(s.f, two, t.f, s.m, q, -t.m)?;
            if tj == 0.0 {
                continue;
            }
            let phase = parity(i.twice() + j.twice() + s.f.twice() - t.f.twice() - s.m.twice());
            let deg = ((2.0 * s.f.value() + 1.0) * (2.0 * t.f.value() + 1.0)).sqrt();
            g[(q.twice() / 2 + 2) as usize][(row, col)] = pref * phase * deg * tj * sj;
        }
    }
    Ok(Some(g))
}

/// `Σ_{μ+μ'=q} (−1)^μ' E_μ E*_{−μ'} (1 2 1; μ −q μ')`, index q + 2.
fn field_coefficients(field: &FieldEnvelope) -> Result<[Complex64; 5]> {
    let mut c = [Complex64::new(0.0, 0.0); 5];
    for mu in -1..=1 {
        for mup in -1..=1 {
            let q = mu + mup;
            let w = three_j(
                HalfInt::ONE,
                HalfInt::from_int(2),
                HalfInt::ONE,
                HalfInt::from_int(mu),
                HalfInt::from_int(-q),
                HalfInt::from_int(mup),
            )?;
            let sign = if mup % 2 == 0 { 1.0 } else { -1.0 };
            c[(q + 2) as usize] += field.component(mu) * field.component(-mup).conj() * (sign * w);
        }
    }
    Ok(c)
}

/// Converts a polarizability in a.u. times |E|² (V²/m²) to an energy in rad/s.
fn au_field_to_rad(alpha_au: f64, e2: f64) -> f64 {
    alpha_au * POLARIZABILITY_AU * e2 / HBAR
}

/// Precomputed Hamiltonian pieces of one manifold.
#[derive(Clone, Debug)]
pub struct StarkSystem {
    manifold: HfsManifold,
    hfs: DMatrix<Complex64>,
    rank2: Option<[DMatrix<f64>; 5]>,
    pol: StatePolarizability,
    damping: Damping,
}

impl StarkSystem {
    pub fn new(db: &AtomDatabase, manifold: HfsManifold) -> Result<Self> {
        let pol = StatePolarizability::new(db, &manifold.state.label)?;
        let hfs = hfs_hamiltonian(&manifold);
        let rank2 = rank2_matrices(&manifold)?;
        Ok(StarkSystem { manifold, hfs, rank2, pol, damping: Damping::Included })
    }

    pub fn for_level(db: &AtomDatabase, label: &str) -> Result<Self> {
        StarkSystem::new(db, db.manifold(label)?)
    }

    pub fn with_damping(mut self, damping: Damping) -> Self {
        self.damping = damping;
        self
    }

    pub fn manifold(&self) -> &HfsManifold {
        &self.manifold
    }

    pub fn hfs_hamiltonian(&self) -> &DMatrix<Complex64> {
        &self.hfs
    }

    pub fn polarizability(&self, omega: f64) -> Polarizability {
        self.pol.at(omega, self.damping)
    }

    /// The α2 part of the Stark operator alone, rad/s.
    pub fn tensor_operator(&self, field: &FieldEnvelope, alpha2: f64) -> Result<DMatrix<Complex64>> {
        tensor_part(self.rank2.as_ref(), self.manifold.dim(), field, alpha2)
    }

    /// Stark operator (rad/s) of one field with a given polarizability.
    pub fn stark_operator(&self, field: &FieldEnvelope, pol: &Polarizability) -> Result<DMatrix<Complex64>> {
        build_operator(self.rank2.as_ref(), self.manifold.dim(), field, pol)
    }

    /// Hyperfine plus summed Stark operators, rad/s.
    pub fn hamiltonian(&self, fields: &[FieldEnvelope]) -> Result<DMatrix<Complex64>> {
        let mut h = self.hfs.clone();
        for f in fields {
            if f.is_zero() {
                continue;
            }
            h += self.stark_operator(f, &self.polarizability(f.omega))?;
        }
        Ok(h)
    }

    /// Common scalar shift (Hz) of the manifold: `−¼ Σ α0 |E|²`.
    pub fn scalar_shift(&self, fields: &[FieldEnvelope]) -> f64 {
        fields
            .iter()
            .filter(|f| !f.is_zero())
            .map(|f| -0.25 * au_field_to_rad(self.polarizability(f.omega).scalar, f.field_squared()))
            .sum::<f64>()
            / (2.0 * PI)
    }

    pub fn light_shifts(&self, fields: &[FieldEnvelope]) -> Result<ShiftSpectrum> {
        let h = self.hamiltonian(fields)?;
        let n = h.nrows();
        let hfs_hz: Vec<f64> = (0..n).map(|k| self.hfs[(k, k)].re / (2.0 * PI)).collect();

        let off_diagonal = (0..n).any(|r| (0..n).any(|c| r != c && h[(r, c)] != Complex64::new(0.0, 0.0)));
        let (values, labels) = if !off_diagonal {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&x, &y| h[(x, x)].re.total_cmp(&h[(y, y)].re).then(x.cmp(&y)));
            let values = order.iter().map(|&k| h[(k, k)].re / (2.0 * PI)).collect();
            (values, order)
        } else {
            diagonalize(&h)?
        };
        let labels: Vec<Sublevel> = labels.iter().map(|&k| self.manifold.sublevels[k]).collect();
        let shifts = values
            .iter()
            .zip(&labels)
            .map(|(v, l)| v - hfs_hz[self.manifold.index_of(*l).unwrap_or(0)])
            .collect();
        Ok(ShiftSpectrum { manifold: self.manifold.clone(), eigenvalues: values, labels, shifts })
    }
}

/// Eigenvalues (Hz, ascending) and the basis index each one is labeled with.
fn diagonalize(h: &DMatrix<Complex64>) -> Result<(Vec<f64>, Vec<usize>)> {
    let n = h.nrows();
    let norm = h.norm();
    let (raw, vectors) = hermitian_jacobi(h).ok_or(Error::Eigen { residual: f64::NAN, norm, dim: n })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));

    let mut worst = 0.0f64;
    for k in 0..n {
        let v = vectors.column(k);
        worst = worst.max((h * v - v * Complex64::new(raw[k], 0.0)).norm());
    }
    if !worst.is_finite() || (norm > 0.0 && worst / norm > EIGEN_RESIDUAL) {
        return Err(Error::Eigen { residual: worst / norm, norm, dim: n });
    }

    let values: Vec<f64> = order.iter().map(|&k| raw[k]).collect();
    // degenerate clusters share the weight of their whole subspace
    let tol = 1e-12 * norm.max(1.0);
    let mut weights = vec![vec![0.0; n]; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[end] - values[end - 1] <= tol {
            end += 1;
        }
        let mut w = vec![0.0; n];
        for &k in &order[start..end] {
            for (b, wb) in w.iter_mut().enumerate() {
                *wb += vectors[(b, k)].norm_sqr();
            }
        }
        for row in &mut weights[start..end] {
            row.clone_from(&w);
        }
        start = end;
    }

    let mut label = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for _ in 0..n {
        let mut best: Option<(f64, usize, usize)> = None;
        for (k, row) in weights.iter().enumerate() {
            if label[k] != usize::MAX {
                continue;
            }
            for (b, &w) in row.iter().enumerate() {
                if taken[b] {
                    continue;
                }
                // strict > keeps the lowest basis index (lower F, then lower M) on ties
                if best.is_none_or(|(bw, _, _)| w > bw) {
                    best = Some((w, k, b));
                }
            }
        }
        let (_, k, b) = best.expect("unassigned eigenvector");
        label[k] = b;
        taken[b] = true;
    }
    Ok((values.iter().map(|v| v / (2.0 * PI)).collect(), label))
}

fn tensor_part(
    rank2: Option<&[DMatrix<f64>; 5]>,
    n: usize,
    field: &FieldEnvelope,
    alpha2: f64,
) -> Result<DMatrix<Complex64>> {
    let mut out = DMatrix::zeros(n, n);
    let Some(g) = rank2 else {
        return Ok(out);
    };
    if alpha2 == 0.0 || field.is_zero() {
        return Ok(out);
    }
    let c = field_coefficients(field)?;
    let scale = -0.25 * au_field_to_rad(alpha2, 1.0);
    for (gq, cq) in g.iter().zip(c) {
        if cq != Complex64::new(0.0, 0.0) {
            out.zip_apply(gq, |o: &mut Complex64, x| *o += cq * (scale * x));
        }
    }
    Ok(out)
}

fn build_operator(
    rank2: Option<&[DMatrix<f64>; 5]>,
    n: usize,
    field: &FieldEnvelope,
    pol: &Polarizability,
) -> Result<DMatrix<Complex64>> {
    if (field.omega - pol.omega).abs() > 1e-12 * field.omega.abs().max(pol.omega.abs()) {
        return Err(Error::FrequencyMismatch { field: field.omega, pol: pol.omega });
    }
    let mut v = tensor_part(rank2, n, field, pol.tensor)?;
    let scalar = -0.25 * au_field_to_rad(pol.scalar, field.field_squared());
    for k in 0..n {
        v[(k, k)] += scalar;
    }
    Ok(v)
}

/// Builds the Stark operator of `field` for `manifold` with polarizability `pol`.
pub fn stark_operator(
    manifold: &HfsManifold,
    field: &FieldEnvelope,
    pol: &Polarizability,
) -> Result<DMatrix<Complex64>> {
    let rank2 = if pol.tensor != 0.0 { rank2_matrices(manifold)? } else { None };
    build_operator(rank2.as_ref(), manifold.dim(), field, pol)
}

/// Diagonalizes `manifold` in the sum of `fields`.
pub fn light_shifts(manifold: &HfsManifold, fields: &[FieldEnvelope], db: &AtomDatabase) -> Result<ShiftSpectrum> {
    StarkSystem::new(db, manifold.clone())?.light_shifts(fields)
}

/// Transition shifts (Hz) of every upper sublevel, optionally restricted to
/// one F family: upper shift minus the common scalar shift of `lower`.
pub fn transition_shifts(
    upper: &StarkSystem,
    lower: &StarkSystem,
    fields: &[FieldEnvelope],
    family: Option<HalfInt>,
) -> Result<Vec<(Sublevel, f64)>> {
    let spec = upper.light_shifts(fields)?;
    let base = lower.scalar_shift(fields);
    let mut out: Vec<(Sublevel, f64)> = spec
        .labels
        .iter()
        .zip(&spec.shifts)
        .filter(|(l, _)| family.is_none_or(|f| l.f == f))
        .map(|(&l, &s)| (l, s - base))
        .collect();
    out.sort_by_key(|(l, _)| *l);
    Ok(out)
}
