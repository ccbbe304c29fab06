//! One function per subcommand: validate arguments, compute, fill a [`Table`].

use clap::ValueEnum;
use num_complex::Complex64;
use rayon::prelude::*;

use nanotrap::constants::{hz_to_millikelvin, intensity_to_field_squared, mw_per_cm2, wavelength_to_angular};
use nanotrap::magic::MagicSearch;
use nanotrap::polarizability::StatePolarizability;
use nanotrap::stark::transition_shifts;
use nanotrap::trap::{log_grid, FiberTemplate, TwoColorTrap};
use nanotrap::{AtomDatabase, BeamConfig, Damping, FieldEnvelope, FiberMode, FiberSpec, HalfInt, StarkSystem, Sublevel};

use crate::output::{Cell, Table};
use crate::{Failure, MagicArgs, ModeArgs, Polarization, PolarizabilityArgs, ShiftArgs, TrapArgs};

fn usage(flag: &str, message: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!("{flag}: {message}"))
}

fn positive(flag: &str, v: f64) -> Result<f64, Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(flag, format!("must be positive, got {v}")))
    }
}

fn non_negative(flag: &str, v: f64) -> Result<f64, Failure> {
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(flag, format!("must be non-negative, got {v}")))
    }
}

fn level(db: &AtomDatabase, flag: &str, label: &str) -> Result<(), Failure> {
    db.level(label).map(|_| ()).map_err(|e| usage(flag, e))
}

fn damping(off: bool) -> Damping {
    if off {
        Damping::Neglected
    } else {
        Damping::Included
    }
}

/// Parses `5`, `-3` or `7/2`.
fn half_int(flag: &str, text: &str) -> Result<HalfInt, Failure> {
    let bad = || usage(flag, format!("expected an integer or n/2, got '{text}'"));
    match text.split_once('/') {
        None => text.trim().parse::<i32>().map(HalfInt::from_int).map_err(|_| bad()),
        Some((n, "2")) => n.trim().parse::<i32>().map(HalfInt::from_twice).map_err(|_| bad()),
        Some(_) => Err(bad()),
    }
}

fn key(prefix: &str, l: &Sublevel) -> String {
    format!("{prefix}_f{}_m{}", l.f, l.m)
}

fn omega_nm(nm: f64) -> f64 {
    wavelength_to_angular(nm * 1e-9)
}

pub fn polarizability(db: &AtomDatabase, args: &PolarizabilityArgs) -> Result<Table, Failure> {
    level(db, "--state", &args.state)?;
    let sp = StatePolarizability::new(db, &args.state)?;
    let d = damping(args.no_damping);
    let grid = args.lambda_nm.values();
    let rows: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&nm| {
            let p = sp.at(omega_nm(nm), d);
            (p.scalar, p.tensor)
        })
        .collect();

    let mut t = Table::new(["lambda_nm", "alpha0_au", "alpha2_au"].map(String::from).to_vec());
    t.meta("command", "polarizability");
    t.meta("state", &args.state);
    t.meta("damping", if args.no_damping { "neglected" } else { "included" });
    t.meta("units", "polarizability in atomic units (e^2 a0^2 / E_h); vacuum wavelength in nm");
    for (nm, (a0, a2)) in grid.iter().zip(rows) {
        t.push(vec![(*nm).into(), a0.into(), a2.into()]);
    }
    Ok(t)
}

pub fn magic(db: &AtomDatabase, args: &MagicArgs) -> Result<Table, Failure> {
    level(db, "--upper", &args.upper)?;
    level(db, "--lower", &args.lower)?;
    let search = MagicSearch {
        guard_band_nm: non_negative("--guard-nm", args.guard_nm)?,
        step_nm: positive("--step-nm", args.step_nm)?,
        damping: damping(args.no_damping),
        ..MagicSearch::default()
    };
    let window = (args.window_nm.start * 1e-9, args.window_nm.stop * 1e-9);
    let crossings = search.find(db, &args.upper, &args.lower, window)?;
    let clusters = search.cluster(&crossings);

    let columns = ["wavelength_nm", "branch", "slope_sign", "detuning", "alpha_au", "residual_au"];
    let mut t = Table::new(columns.map(String::from).to_vec());
    t.meta("command", "magic");
    t.meta("upper", &args.upper);
    t.meta("lower", &args.lower);
    t.meta("window_nm", format!("{}:{}", args.window_nm.start, args.window_nm.stop));
    t.meta("branches", "sum = alpha0 + alpha2, difference = alpha0 - alpha2 of the upper level against alpha0 of the lower");
    t.meta("slope_sign", "sign of d(upper - lower)/d(lambda) at the crossing");
    let centrals: Vec<String> = clusters
        .iter()
        .map(|c| format!("{:.4} (sum {:.4}, difference {:.4})", c.central() * 1e9, c.sum.wavelength * 1e9, c.difference.wavelength * 1e9))
        .collect();
    t.meta("central_magic_nm", if centrals.is_empty() { "none".to_string() } else { centrals.join("; ") });
    for c in &crossings {
        t.push(vec![
            Cell::Num(c.wavelength * 1e9),
            Cell::Text(c.branch.to_string()),
            Cell::Int(c.slope_sign.into()),
            Cell::Text(format!("{:?}", c.detuning_side).to_lowercase()),
            Cell::Num(c.alpha),
            Cell::Num(c.residual),
        ]);
    }
    Ok(t)
}

fn uniform_field(polarization: Polarization, intensity: f64, omega: f64) -> FieldEnvelope {
    let e = Complex64::new(intensity_to_field_squared(intensity).sqrt(), 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match polarization {
        Polarization::Z => FieldEnvelope::linear_z(intensity, omega),
        Polarization::SigmaPlus => FieldEnvelope::new(zero, zero, e, omega),
        Polarization::SigmaMinus => FieldEnvelope::new(e, zero, zero, omega),
    }
}

pub fn shift(db: &AtomDatabase, args: &ShiftArgs) -> Result<Table, Failure> {
    level(db, "--upper", &args.upper)?;
    level(db, "--lower", &args.lower)?;
    let upper = StarkSystem::for_level(db, &args.upper).map_err(|e| usage("--upper", e))?;
    let lower = StarkSystem::for_level(db, &args.lower).map_err(|e| usage("--lower", e))?;
    let family = match &args.family {
        Some(text) => {
            let f = half_int("--family", text)?;
            if !upper.manifold().families().contains(&f) {
                return Err(usage("--family", format!("F = {f} does not exist in {}", args.upper)));
            }
            Some(f)
        }
        None => None,
    };
    let pairs: Vec<(f64, f64)> = args
        .lambda_nm
        .values()
        .into_iter()
        .flat_map(|nm| args.intensity.values().into_iter().map(move |i| (nm, i)))
        .collect();
    let results = pairs
        .par_iter()
        .map(|&(nm, i)| {
            let field = uniform_field(args.polarization, mw_per_cm2(i), omega_nm(nm));
            transition_shifts(&upper, &lower, &[field], family)
        })
        .collect::<nanotrap::Result<Vec<_>>>()?;

    let labels: Vec<Sublevel> = results[0].iter().map(|(l, _)| *l).collect();
    let mut columns = vec!["lambda_nm".to_string(), "intensity_mw_cm2".to_string()];
    columns.extend(labels.iter().map(|l| key("shift_mhz", l)));
    let mut t = Table::new(columns);
    t.meta("command", "shift");
    t.meta("upper", &args.upper);
    t.meta("lower", &args.lower);
    t.meta("polarization", args.polarization.to_possible_value().expect("named variant").get_name());
    t.meta("quantity", "upper sublevel shift minus the lower-level scalar shift, MHz");
    for ((nm, i), row) in pairs.iter().zip(&results) {
        let mut cells = vec![Cell::Num(*nm), Cell::Num(*i)];
        cells.extend(row.iter().map(|(_, s)| Cell::Num(s * 1e-6)));
        t.push(cells);
    }
    Ok(t)
}

pub fn mode(args: &ModeArgs) -> Result<Table, Failure> {
    let a = positive("--a-um", args.a_um)? * 1e-6;
    let lambda = positive("--lambda-nm", args.lambda_nm)? * 1e-9;
    let power = non_negative("--power-mw", args.power_mw)? * 1e-3;
    let n1 = match args.n1 {
        Some(n) => positive("--n1", n)?,
        None => nanotrap::fibermode::fused_silica_index(lambda),
    };
    let n2 = positive("--n2", args.n2)?;
    let r_max = match args.r_max_um {
        Some(r) => positive("--r-max-um", r)? * 1e-6,
        None => a + 1e-6,
    };
    if args.points < 2 {
        return Err(usage("--points", "need at least 2 points"));
    }
    let spec = FiberSpec::new(a, n1, n2, lambda).map_err(|e| usage("--n1/--n2", e))?;
    let m = FiberMode::with_power(&spec, power)?;

    let mut t = Table::new(["r_nm", "er_v_per_m", "ephi_v_per_m", "ez_v_per_m", "e2_v2_per_m2"].map(String::from).to_vec());
    t.meta("command", "mode");
    t.meta_num("a_nm", a * 1e9);
    t.meta_num("lambda_nm", args.lambda_nm);
    t.meta_num("n1", n1);
    t.meta_num("n2", n2);
    t.meta_num("v_number", spec.v_number());
    t.meta_num("beta_per_m", m.beta);
    t.meta_num("n_eff", m.beta / spec.k());
    t.meta_num("h_per_m", m.h);
    t.meta_num("q_per_m", m.q);
    t.meta_num("decay_length_nm", 1e9 / m.q);
    t.meta_num("power_w", m.power);
    t.meta_num("eigenvalue_residual", m.eigenvalue_residual());
    t.meta("sampling", "field magnitudes at phi = 0, z = 0; |E|^2 is independent of phi");
    for k in 0..args.points {
        let r = r_max * k as f64 / (args.points - 1) as f64;
        let [er, ep, ez] = m.cylindrical(r, 0.0, 0.0);
        let e2 = er.norm_sqr() + ep.norm_sqr() + ez.norm_sqr();
        t.push(vec![(r * 1e9).into(), er.norm().into(), ep.norm().into(), ez.norm().into(), e2.into()]);
    }
    Ok(t)
}

pub fn trap(db: &AtomDatabase, args: &TrapArgs) -> Result<Table, Failure> {
    let a = positive("--a-um", args.a_um)? * 1e-6;
    let red = BeamConfig::red(positive("--red-nm", args.red_nm)? * 1e-9, non_negative("--red-mw", args.red_mw)? * 1e-3);
    let blue = BeamConfig::blue(positive("--blue-nm", args.blue_nm)? * 1e-9, non_negative("--blue-mw", args.blue_mw)? * 1e-3);
    if args.red_nm <= args.blue_nm {
        return Err(usage("--red-nm", format!("red wavelength {} nm must exceed blue wavelength {} nm", args.red_nm, args.blue_nm)));
    }
    let span = positive("--span-um", args.span_um)? * 1e-6;
    if args.points < 3 {
        return Err(usage("--points", "need at least 3 points"));
    }
    let family = half_int("--family", &args.family)?;
    let fiber = FiberTemplate {
        n1_red: args.red_n1.map(|n| positive("--red-n1", n)).transpose()?,
        n1_blue: args.blue_n1.map(|n| positive("--blue-n1", n)).transpose()?,
        ..FiberTemplate::silica(a)
    };
    let trap = TwoColorTrap::with_levels(db, fiber, red, blue, "6P3/2", "6S1/2", family).map_err(|e| match e {
        nanotrap::Error::UnknownFamily(_) => usage("--family", e),
        other => Failure::Compute(other),
    })?;
    let profile = trap.profile(&log_grid(a, span, args.points))?;

    let mut columns = vec!["r_nm".to_string(), "ground_mhz".to_string(), "ground_mk".to_string()];
    columns.extend(profile.labels.iter().map(|l| key("excited_mhz", l)));
    columns.extend(profile.labels.iter().map(|l| key("shift_mhz", l)));
    let mut t = Table::new(columns);
    t.meta("command", "trap");
    t.meta_num("a_nm", a * 1e9);
    for (name, beam, mode) in [("red", &red, trap.red_mode()), ("blue", &blue, trap.blue_mode())] {
        t.meta(
            &format!("{name}_beam"),
            format!(
                "lambda {} nm, power {} mW, n1 {}, beta {} 1/m, decay length {:.3} nm",
                beam.wavelength * 1e9,
                beam.power * 1e3,
                mode.spec.n1,
                mode.beta,
                1e9 / mode.q
            ),
        );
    }
    t.meta("symmetry", "cylindrical; potentials do not depend on phi or z and are sampled at phi = 0, z = 0");
    t.meta("levels", format!("ground 6S1/2 (scalar shift), excited 6P3/2 F = {family}"));
    match profile.characterize() {
        Some(s) => t.meta(
            "ground_trap",
            format!(
                "r_min {:.2} nm ({:.2} nm from surface), depth {:.4} mK ({:.4} MHz), barrier {:.4} mK",
                s.r_min * 1e9,
                (s.r_min - a) * 1e9,
                s.depth_mk(),
                s.depth * 1e-6,
                s.barrier_mk()
            ),
        ),
        None => t.meta("ground_trap", "none"),
    }
    t.meta_num("max_abs_shift_mhz", profile.max_transition_shift() * 1e-6);
    for (k, r) in profile.r.iter().enumerate() {
        let mut cells = vec![Cell::Num(r * 1e9), Cell::Num(profile.ground[k] * 1e-6), Cell::Num(hz_to_millikelvin(profile.ground[k]))];
        cells.extend(profile.excited[k].iter().map(|u| Cell::Num(u * 1e-6)));
        cells.extend(profile.transition[k].iter().map(|u| Cell::Num(u * 1e-6)));
        t.push(cells);
    }
    Ok(t)
}
