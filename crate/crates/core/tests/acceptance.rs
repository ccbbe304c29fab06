//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion with
//! indented details; exits nonzero on failure only when
//! `NANOTRAP_ACCEPTANCE_STRICT` is set.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nanotrap::constants::{angular_to_atomic, mw_per_cm2, wavelength_to_angular};
use nanotrap::fibermode::{normalize_power, FiberSpec};
use nanotrap::magic::MagicSearch;
use nanotrap::polarizability::polarizability;
use nanotrap::stark::{transition_shifts, FieldEnvelope, StarkSystem};
use nanotrap::trap::{default_grid, FiberTemplate, TwoColorTrap};
use nanotrap::wigner::{six_j, three_j};
use nanotrap::{AtomDatabase, BeamConfig, Branch, Damping, FiberMode, HalfInt, Sublevel};

use common::{all_six_j, all_three_j, h, sample_field, weyl};

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { pass: true, details: Vec::new() }
    }

    fn require(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.details.push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, line: String) {
        self.details.push(format!("     {line}"));
    }
}

fn omega_nm(nm: f64) -> f64 {
    wavelength_to_angular(nm * 1e-9)
}

fn nm(m: f64) -> f64 {
    m * 1e9
}

fn mhz(hz: f64) -> f64 {
    hz * 1e-6
}

fn within(x: f64, target: f64, frac: f64) -> bool {
    (x - target).abs() <= frac * target.abs()
}

fn central_magic(db: &AtomDatabase, window: (f64, f64), targets: (f64, f64)) -> Option<f64> {
    let search = MagicSearch::default();
    let found = search.find(db, "6P3/2", "6S1/2", (window.0 * 1e-9, window.1 * 1e-9)).ok()?;
    let nearest = |branch: Branch, target: f64| {
        found
            .iter()
            .filter(|c| c.branch == branch)
            .min_by(|a, b| (nm(a.wavelength) - target).abs().total_cmp(&(nm(b.wavelength) - target).abs()))
            .map(|c| nm(c.wavelength))
    };
    Some(0.5 * (nearest(Branch::Sum, targets.0)? + nearest(Branch::Difference, targets.1)?))
}

fn magic_wavelengths(db: &AtomDatabase) -> Outcome {
    let mut out = Outcome::new();
    let search = MagicSearch::default();
    let cases = [((900.0, 960.0), 938.0, 931.0), ((660.0, 700.0), 684.0, 687.0), ((600.0, 640.0), 612.0, 614.0)];
    for (window, sum_target, diff_target) in cases {
        let start = Instant::now();
        let found = match search.find(db, "6P3/2", "6S1/2", (window.0 * 1e-9, window.1 * 1e-9)) {
            Ok(found) => found,
            Err(e) => {
                out.require(false, format!("{:.0}-{:.0} nm: {e}", window.0, window.1));
                continue;
            }
        };
        let elapsed = start.elapsed();
        let listing: Vec<String> = found.iter().map(|c| format!("{} {:.4}", c.branch, nm(c.wavelength))).collect();
        out.note(format!("{:.0}-{:.0} nm crossings: {}", window.0, window.1, listing.join(", ")));
        for (branch, target) in [(Branch::Sum, sum_target), (Branch::Difference, diff_target)] {
            let best = found
                .iter()
                .filter(|c| c.branch == branch)
                .map(|c| nm(c.wavelength))
                .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()));
            match best {
                Some(w) => out.require((w - target).abs() <= 3.0, format!("{branch} crossing {w:.4} nm vs {target} ± 3 nm")),
                None => out.require(false, format!("no {branch} crossing in window")),
            }
        }
        out.require(elapsed < Duration::from_secs(10), format!("runtime {:.3} s < 10 s", elapsed.as_secs_f64()));
    }
    out
}

fn f5_transition_span(db: &AtomDatabase, lambda_nm: f64, intensity: f64) -> nanotrap::Result<(f64, f64)> {
    let upper = StarkSystem::for_level(db, "6P3/2")?;
    let lower = StarkSystem::for_level(db, "6S1/2")?;
    let field = FieldEnvelope::linear_z(intensity, omega_nm(lambda_nm));
    let shifts = transition_shifts(&upper, &lower, &[field], Some(HalfInt::from_int(5)))?;
    let lo = shifts.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let hi = shifts.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    Ok((mhz(lo), mhz(hi)))
}

fn shift_spans(db: &AtomDatabase) -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let cases = [("blue", (660.0, 700.0), (684.0, 687.0), (-4.0, 3.1)), ("red", (900.0, 960.0), (938.0, 931.0), (-21.2, 26.3))];
    for (name, window, targets, (want_lo, want_hi)) in cases {
        let Some(central) = central_magic(db, window, targets) else {
            out.require(false, format!("{name}: no central magic wavelength"));
            continue;
        };
        match f5_transition_span(db, central, mw_per_cm2(1.0)) {
            Ok((lo, hi)) => out.require(
                within(lo, want_lo, 0.25) && within(hi, want_hi, 0.25),
                format!("{name} central {central:.4} nm: span [{lo:.3}, {hi:.3}] MHz vs [{want_lo}, {want_hi}] ± 25%"),
            ),
            Err(e) => out.require(false, format!("{name}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    out.require(elapsed < Duration::from_secs(5), format!("runtime {:.3} s < 5 s", elapsed.as_secs_f64()));
    out
}

fn stretched_bound(db: &AtomDatabase) -> Outcome {
    let mut out = Outcome::new();
    let upper = StarkSystem::for_level(db, "6P3/2").expect("excited level");
    let lower = StarkSystem::for_level(db, "6S1/2").expect("ground level");
    let f5 = HalfInt::from_int(5);
    let stretched = [Sublevel { f: f5, m: HalfInt::from_int(5) }, Sublevel { f: f5, m: HalfInt::from_int(-5) }];
    let centre = Sublevel { f: f5, m: HalfInt::ZERO };
    for (lambda, m0_target) in [(684.0, -23.0), (938.0, 146.0)] {
        let mut worst: f64 = 0.0;
        let mut m0 = f64::NAN;
        for step in 1..=12 {
            let intensity = mw_per_cm2(0.25 * step as f64);
            let field = FieldEnvelope::linear_z(intensity, omega_nm(lambda));
            let shifts = transition_shifts(&upper, &lower, &[field], Some(f5)).expect("shifts");
            for (label, s) in &shifts {
                if stretched.contains(label) {
                    worst = worst.max(mhz(s.abs()));
                }
                if step == 12 && *label == centre {
                    m0 = mhz(*s);
                }
            }
        }
        out.require(worst < 2.0, format!("{lambda} nm: max |M=±5 shift| up to 3 MW/cm² = {worst:.3} MHz < 2 MHz"));
        out.require(within(m0, m0_target, 0.3), format!("{lambda} nm: M=0 shift at 3 MW/cm² = {m0:.3} MHz vs {m0_target} ± 30%"));
    }
    out
}

fn trap_bound(db: &AtomDatabase) -> Outcome {
    let mut out = Outcome::new();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().expect("thread pool");
    let start = Instant::now();
    let fiber = FiberTemplate::silica(0.2e-6);
    let built = pool.install(|| {
        let trap = TwoColorTrap::new(db, fiber, BeamConfig::red(934.5e-9, 11.5e-3), BeamConfig::blue(685.5e-9, 48.5e-3))?;
        trap.profile(&default_grid(fiber.a))
    });
    let elapsed = start.elapsed();
    let profile = match built {
        Ok(p) => p,
        Err(e) => {
            out.require(false, format!("trap profile: {e}"));
            return out;
        }
    };
    let max_shift = mhz(profile.max_transition_shift());
    out.require(max_shift < 14.0, format!("max |transition shift| = {max_shift:.3} MHz < 14 MHz"));
    let Some(ground) = profile.characterize() else {
        out.require(false, "no interior ground-potential minimum".to_string());
        return out;
    };
    out.require(
        ground.barrier > 0.0,
        format!(
            "ground minimum at {:.1} nm, depth {:.3} mK, surface barrier {:.3} mK",
            nm(ground.r_min),
            ground.depth_mk(),
            ground.barrier_mk()
        ),
    );
    let mut worst: f64 = 0.0;
    for k in 0..profile.labels.len() {
        match profile.characterize_excited(k) {
            Some(s) => worst = worst.max(nm((s.r_min - ground.r_min).abs())),
            None => worst = f64::INFINITY,
        }
    }
    out.require(worst <= 10.0, format!("largest ground/excited minimum offset = {worst:.2} nm ≤ 10 nm"));
    out.require(elapsed < Duration::from_secs(60), format!("single-thread runtime {:.3} s < 60 s", elapsed.as_secs_f64()));
    out
}

fn wigner_scans(out: &mut Outcome) {
    // orthogonality of 3-j symbols over m1, m2
    let mut worst: f64 = 0.0;
    for a in 0..=8i32 {
        for b in 0..=8 {
            for c in (a - b).abs()..=a + b {
                for c2 in (a - b).abs()..=a + b {
                    if (a + b + c) % 2 != 0 || (a + b + c2) % 2 != 0 {
                        continue;
                    }
                    for z in (-c.min(c2)..=c.min(c2)).step_by(2) {
                        let mut sum = 0.0;
                        for x in (-a..=a).step_by(2) {
                            let y = -x - z;
                            if y.abs() > b {
                                continue;
                            }
                            let t1 = three_j(h(a), h(b), h(c), h(x), h(y), h(z)).unwrap();
                            let t2 = three_j(h(a), h(b), h(c2), h(x), h(y), h(z)).unwrap();
                            sum += t1 * t2;
                        }
                        let want = if c == c2 { 1.0 / (c as f64 + 1.0) } else { 0.0 };
                        worst = worst.max((sum - want).abs());
                    }
                }
            }
        }
    }
    out.require(worst < 1e-12, format!("3-j orthogonality max error {worst:.2e} < 1e-12"));

    // orthogonality of 6-j symbols over the coupled momentum
    let mut worst: f64 = 0.0;
    for a in 0..=6 {
        for b in 0..=6 {
            for c in 0..=6 {
                for d in 0..=6 {
                    for f in 0..=6 {
                        for f2 in 0..=6 {
                            let mut sum = 0.0;
                            for x in 0..=12 {
                                let t1 = six_j(h(a), h(b), h(x), h(c), h(d), h(f)).unwrap();
                                let t2 = six_j(h(a), h(b), h(x), h(c), h(d), h(f2)).unwrap();
                                sum += (x as f64 + 1.0) * (f as f64 + 1.0) * t1 * t2;
                            }
                            let admissible = common::triangle(a, d, f) && common::triangle(c, b, f);
                            let want = if f == f2 && admissible { 1.0 } else { 0.0 };
                            // unreachable f leaves an empty sum
                            if f == f2 && !admissible && sum == 0.0 {
                                continue;
                            }
                            worst = worst.max((sum - want).abs());
                        }
                    }
                }
            }
        }
    }
    out.require(worst < 1e-12, format!("6-j orthogonality max error {worst:.2e} < 1e-12"));

    // permutation and reflection symmetries
    let mut worst: f64 = 0.0;
    for ([a, b, c], [x, y, z]) in all_three_j(8) {
        let base = three_j(h(a), h(b), h(c), h(x), h(y), h(z)).unwrap();
        let odd = if ((a + b + c) / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let cyclic = three_j(h(b), h(c), h(a), h(y), h(z), h(x)).unwrap();
        let swapped = three_j(h(b), h(a), h(c), h(y), h(x), h(z)).unwrap();
        let reflected = three_j(h(a), h(b), h(c), h(-x), h(-y), h(-z)).unwrap();
        worst = worst.max((cyclic - base).abs()).max((swapped - odd * base).abs()).max((reflected - odd * base).abs());
    }
    for [a, b, c, d, e, f] in all_six_j(6) {
        let base = six_j(h(a), h(b), h(c), h(d), h(e), h(f)).unwrap();
        let cols = six_j(h(b), h(a), h(c), h(e), h(d), h(f)).unwrap();
        let flip = six_j(h(d), h(e), h(c), h(a), h(b), h(f)).unwrap();
        worst = worst.max((cols - base).abs()).max((flip - base).abs());
    }
    out.require(worst < 1e-12, format!("3-j/6-j symmetry max error {worst:.2e} < 1e-12"));
}

fn stark_scans(db: &AtomDatabase, out: &mut Outcome) {
    let sys = StarkSystem::for_level(db, "6P3/2").expect("excited level");
    let mut herm: f64 = 0.0;
    let mut trace: f64 = 0.0;
    let mut rotation: f64 = 0.0;
    for k in 0..48 {
        let lambda = 600.0 + 400.0 * weyl(k, 5);
        let w = omega_nm(lambda);
        let field = sample_field(k, 2e7 * (0.1 + weyl(k, 4)), w);
        let pol = sys.polarizability(w);
        let v = sys.stark_operator(&field, &pol).expect("operator");
        herm = herm.max((&v - v.adjoint()).norm() / v.norm());
        let t = sys.tensor_operator(&field, pol.tensor).expect("tensor");
        trace = trace.max(t.trace().norm() / t.norm());

        let base = sys.light_shifts(&[field]).expect("shifts").eigenvalues;
        let phi = 2.0 * PI * weyl(k, 3);
        let turned = sys.light_shifts(&[field.rotate(phi)]).expect("shifts").eigenvalues;
        let scale = base.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for (a, b) in base.iter().zip(&turned) {
            rotation = rotation.max((a - b).abs() / scale);
        }
    }
    out.require(herm < 1e-12, format!("Stark operator Hermiticity {herm:.2e} < 1e-12 relative"));
    out.require(trace < 1e-12, format!("tensor part tracelessness {trace:.2e} < 1e-12 relative"));
    out.require(rotation < 1e-10, format!("z-rotation eigenvalue invariance {rotation:.2e} < 1e-10"));

    // low-intensity slope of each shift equals the diagonal of the Stark operator
    let w = omega_nm(934.5);
    let pol = sys.polarizability(w);
    let v1 = sys.stark_operator(&FieldEnvelope::linear_z(1.0, w), &pol).expect("operator");
    let xs = [1e6, 2e6, 3e6];
    let spectra: Vec<_> = xs.iter().map(|&i| sys.light_shifts(&[FieldEnvelope::linear_z(i, w)]).expect("shifts")).collect();
    let mut fit: f64 = 0.0;
    for (k, sub) in sys.manifold().sublevels.iter().enumerate() {
        let y: Vec<f64> = spectra.iter().zip(&xs).map(|(s, x)| s.shift_of(*sub).unwrap() / x).collect();
        // quadratic through the reduced points, evaluated at zero intensity
        let l = [
            xs[1] * xs[2] / ((xs[0] - xs[1]) * (xs[0] - xs[2])),
            xs[0] * xs[2] / ((xs[1] - xs[0]) * (xs[1] - xs[2])),
            xs[0] * xs[1] / ((xs[2] - xs[0]) * (xs[2] - xs[1])),
        ];
        let slope: f64 = l.iter().zip(&y).map(|(a, b)| a * b).sum();
        let want = v1[(k, k)].re / (2.0 * PI);
        fit = fit.max(((slope - want) / want).abs());
    }
    out.require(fit < 1e-6, format!("perturbative quadratic-fit slope vs diagonal {fit:.2e} < 1e-6 relative"));
}

fn fiber_scans(out: &mut Outcome) {
    let mut residual: f64 = 0.0;
    let mut round_trip: f64 = 0.0;
    for k in 0..24 {
        let a = (0.15 + 0.2 * weyl(k, 0)) * 1e-6;
        let lambda = (650.0 + 350.0 * weyl(k, 1)) * 1e-9;
        let spec = FiberSpec::silica(a, lambda).expect("spec");
        let mode = FiberMode::solve(&spec).expect("mode");
        residual = residual.max(mode.eigenvalue_residual());
        let power = 1e-3 * (1.0 + 60.0 * weyl(k, 2));
        let scaled = normalize_power(&mode, power).expect("normalize");
        let back = scaled.integrated_power().expect("power");
        round_trip = round_trip.max(((back - power) / power).abs());
    }
    out.require(residual < 1e-10, format!("dispersion-relation residual {residual:.2e} < 1e-10"));
    out.require(round_trip < 1e-9, format!("Poynting normalization round trip {round_trip:.2e} < 1e-9"));
}

fn damping_scan(db: &AtomDatabase, out: &mut Outcome) {
    let mut worst: f64 = 0.0;
    for label in ["6S1/2", "6P1/2", "6P3/2"] {
        let j = db.level(label).expect("level").j.value();
        let couplings = db.couplings(label).expect("couplings");
        for k in 0..40 {
            let lambda = 450.0 + 1500.0 * weyl(k, 2);
            let w = angular_to_atomic(omega_nm(lambda));
            // plain ω0 / (ω0² − ω²) on the same coupling frequencies; error scaled by Σ|term|
            let terms: Vec<f64> = couplings
                .iter()
                .map(|c| {
                    let w0 = angular_to_atomic(c.frequency);
                    2.0 / (3.0 * (2.0 * j + 1.0)) * c.reduced_dipole.powi(2) * w0 / (w0 * w0 - w * w)
                })
                .collect();
            let simple: f64 = terms.iter().sum();
            let scale: f64 = terms.iter().map(|t| t.abs()).sum();
            let got = polarizability(db, label, omega_nm(lambda), Damping::Neglected).expect("pol").scalar;
            worst = worst.max((got - simple).abs() / scale);
        }
    }
    out.require(worst < 1e-12, format!("damping-off vs simple dispersive sum {worst:.2e} < 1e-12 relative"));
}

fn property_suites(db: &AtomDatabase) -> Outcome {
    let mut out = Outcome::new();
    wigner_scans(&mut out);
    stark_scans(db, &mut out);
    fiber_scans(&mut out);
    damping_scan(db, &mut out);
    out
}

fn oracle_equivalence(db: &AtomDatabase) -> Outcome {
    let mut out = Outcome::new();
    let mut worst: f64 = 0.0;
    let cases = all_three_j(8);
    for ([a, b, c], [x, y, z]) in &cases {
        let got = three_j(h(*a), h(*b), h(*c), h(*x), h(*y), h(*z)).unwrap();
        worst = worst.max((got - common::three_j([*a, *b, *c], [*x, *y, *z])).abs());
    }
    out.require(worst < 1e-13, format!("three_j vs exact Racah sum over {} symbols: {worst:.2e} < 1e-13", cases.len()));

    let mut worst: f64 = 0.0;
    let cases = all_six_j(8);
    for j in &cases {
        let got = six_j(h(j[0]), h(j[1]), h(j[2]), h(j[3]), h(j[4]), h(j[5])).unwrap();
        worst = worst.max((got - common::six_j(*j)).abs());
    }
    out.require(worst < 1e-13, format!("six_j vs exact Racah sum over {} symbols: {worst:.2e} < 1e-13", cases.len()));

    // reference values from the standalone sum-over-states script
    let reference = [("6S1/2", 3.828_913_665_254_582e2, 0.0), ("6P3/2", 1.598_093_471_419_586e3, -2.555_736_209_769_715e2)];
    for (label, scalar, tensor) in reference {
        let p = polarizability(db, label, 0.0, Damping::Included).expect("pol");
        let es = ((p.scalar - scalar) / scalar).abs();
        let et = if tensor == 0.0 { p.tensor.abs() } else { ((p.tensor - tensor) / tensor).abs() };
        out.require(
            es < 1e-10 && et < 1e-10,
            format!("{label} static α0 = {:.10}, α2 = {:.10} (rel. errors {es:.1e}, {et:.1e})", p.scalar, p.tensor),
        );
    }
    out
}

fn main() {
    let db = AtomDatabase::cesium();
    let criteria: [(&str, fn(&AtomDatabase) -> Outcome); 6] = [
        ("1 magic-wavelength reproduction", magic_wavelengths),
        ("2 F=5 shift spans at the central magic wavelengths", shift_spans),
        ("3 stretched-state bound and M=0 shifts", stretched_bound),
        ("4 two-color trap", trap_bound),
        ("5 property suites", property_suites),
        ("6 oracle equivalence", oracle_equivalence),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run(&db);
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {name} ({:.2} s)", start.elapsed().as_secs_f64());
        for line in &outcome.details {
            println!("    {line}");
        }
        failed += usize::from(!outcome.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 && std::env::var_os("NANOTRAP_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
