//! Acceptance report: one PASS/FAIL line per criterion at its stated tolerance.
//!
//! Verdicts are written straight to stderr, past the test harness capture,
//! and are not asserted; the per-module integration tests assert
//! the criteria that hold. The test itself fails only when a criterion cannot
//! be evaluated at all.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::f64::consts::SQRT_2;
use std::io::Write;
use std::time::Instant;

use common::{generic_points, linspace, rf_fixture};
use photocorr::cli::{build_model, Command, ModelSpec};
use photocorr::gaussian::*;
use photocorr::models::*;
use photocorr::scalar::{cabs, carg, cplx, expi, re};
use photocorr::spectra::*;
use photocorr::twophoton::*;
use photocorr::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = (bool, String);
type Criterion = (&'static str, fn() -> Result<Verdict>);

fn max(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn min(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(f64::INFINITY, f64::min)
}

/// Golden-section minimum of a unimodal `f` on `[a, b]`.
fn golden_min(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - r * (b - a), a + r * (b - a));
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc < fd {
            (b, d, fd) = (d, c, fc);
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            (a, c, fc) = (c, d, fd);
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    let x = (a + b) / 2.0;
    Ok((x, f(x)?))
}

fn ac1() -> Result<Verdict> {
    let mut ok = true;
    let mut notes = Vec::new();
    for &(d, o) in &[(0.0, 40.05), (60.0, 26.53), (80.0, 2.0)] {
        let p = RFParams::new(d, o, 1.0)?;
        let m = resonance_fluorescence(&p)?;
        let op = mollow_splitting(&p);
        let s = SensorConfig::new(0.0, 0.0, 2.0, 1.0);
        let grid: Vec<f64> = linspace(-2.5, 2.5, 201).into_iter().map(|v| v * op).collect();
        let t = Instant::now();
        let out = spectrum_numeric(&m, &s, &grid, op)?;
        let secs = t.elapsed().as_secs_f64();
        let worst = max(out.iter().map(|x| {
            let a = spectrum_analytic_rf(&p, 2.0, x.omega);
            ((x.value - a) / a).abs()
        }));
        ok &= worst < 1e-6 && secs < 30.0;
        notes.push(format!("({d},{o}) rel {worst:.1e} in {secs:.2}s"));
    }
    Ok((ok, format!("{} [tol 1e-6, < 30 s]", notes.join(", "))))
}

fn ac2() -> Result<Verdict> {
    let p = RFParams::new(0.0, 1e-3, 1.0)?;
    let m = resonance_fluorescence(&p)?;
    let taus = linspace(0.0, 10.0, 201);
    let (mut ok, mut notes) = (true, Vec::new());
    for &g in &[0.5, 1.0, 2.0, 10.0] {
        let v = g2_tau(&m, &SensorConfig::new(0.0, 0.0, g, 1.0), &taus)?;
        let closed = |t: f64| if g == 1.0 { g2_filtered_heitler_confluent(1.0, t) } else { g2_filtered_heitler(1.0, g, t) };
        let dev = max(taus.iter().zip(&v).map(|(t, x)| (x - closed(*t)).abs()));
        let dev0 = (v[0] - (1.0 / (1.0 + g)).powi(2)).abs();
        ok &= dev < 1e-4 && dev0 < 1e-4;
        notes.push(format!("G={g} max {dev:.1e} tau0 {dev0:.1e}"));
    }
    Ok((ok, format!("Omega=1e-3: {} [abs tol 1e-4]", notes.join(", "))))
}

fn ac3() -> Result<Verdict> {
    let m = resonance_fluorescence(&RFParams::new(0.0, 1e-3, 1.0)?)?;
    let taus = linspace(0.2, 6.0, 59);
    let v = g2_tau(&m, &SensorConfig::new(0.0, 0.0, 50.0, 1.0), &taus)?;
    let dev = max(taus.iter().zip(&v).map(|(t, x)| {
        let a = g2_broadband_heitler(1.0, *t);
        ((x - a) / a).abs()
    }));
    Ok((dev < 0.05, format!("Gamma=50: max rel {dev:.2e} [tol 5e-2]")))
}

fn ac4() -> Result<Verdict> {
    let (m, p, s) = rf_fixture("fig2f");
    let d = p.delta_sigma;
    let circle = feature_loci::<f64>(LocusKind::Circle).circle_points(16, 0.0).unwrap();
    let on_circle: Vec<f64> =
        circle.iter().map(|&(x, y)| g2_coincidence(&m, &s.at(d * x, d * y))).collect::<Result<_>>()?;
    let above = on_circle.iter().filter(|g| **g >= 0.1).count();
    let lines = [(-1.0, 0.5), (-1.0, 1.5), (-1.0, -2.2), (0.5, -1.0), (-2.2, -1.0), (0.5, -0.5), (-1.5, 1.5), (2.0, -2.0)];
    let on_lines: Vec<f64> =
        lines.iter().map(|&(x, y)| g2_coincidence(&m, &s.at(d * x, d * y))).collect::<Result<_>>()?;
    let low = min(on_lines.iter().copied());
    Ok((
        above == 0 && low > 10.0,
        format!(
            "circle max {:.3e} ({above}/16 points >= 0.1) [tol < 0.1]; lines min {low:.3e} [> 10]",
            max(on_circle.iter().copied())
        ),
    ))
}

fn ac5() -> Result<Verdict> {
    let s = SensorConfig::new(0.0, 0.0, 2.0, 1.0);
    let pts = generic_points();
    let mut devs = vec![Vec::new(); pts.len()];
    for &o in &[2.0, 1.0, 0.5] {
        let m = resonance_fluorescence(&RFParams::new(80.0, o, 1.0)?)?;
        for (k, &(x, y)) in pts.iter().enumerate() {
            let a = g2_analytic_detuned(x, y);
            devs[k].push(((g2_coincidence(&m, &s.at(80.0 * x, 80.0 * y))? - a) / a).abs());
        }
    }
    let ratios: Vec<[f64; 2]> = devs.iter().map(|d| [d[0] / d[1], d[1] / d[2]]).collect();
    let good = ratios.iter().filter(|r| r.iter().all(|q| (1.7..=2.3).contains(q))).count();
    let flat: Vec<String> = ratios.iter().map(|r| format!("{:.2}/{:.2}", r[0], r[1])).collect();
    Ok((good == pts.len(), format!("{good}/{} points halve; ratios {} [window 1.7..2.3]", pts.len(), flat.join(" "))))
}

fn ac6() -> Result<Verdict> {
    let (m, p, s) = rf_fixture("fig2f");
    let d = p.delta_sigma;
    let generic = generic_points();
    let mut pts = generic.clone();
    pts.extend(feature_loci::<f64>(LocusKind::Circle).circle_points(16, 0.0).unwrap());
    pts.extend([(-1.0, 0.5), (0.5, -0.5), (1.0, 1.0), (0.0, 0.0)]);
    let mut defect = 0.0f64;
    let (mut i1_bad, mut i0_bad) = (0, 0);
    let (mut i1_worst, mut i0_worst) = (0.0f64, 0.0f64);
    for (k, &(x, y)) in pts.iter().enumerate() {
        let (_, _, mom) = sensor_moments(&m, &s.at(d * x, d * y), false)?;
        let t = interference_full_state(&mom, (mom.mean1, mom.mean2));
        defect = defect.max((t.total() - mom.g2()).abs() / mom.g2().abs().max(1.0));
        if k < generic.len() {
            let a = t.i1.abs() / t.i0.abs().max(t.i2.abs());
            let b = (t.i0 - (t.i2 / 2.0).powi(2)).abs() / t.i0;
            i1_worst = i1_worst.max(a);
            i0_worst = i0_worst.max(b);
            i1_bad += usize::from(!(a < 0.05));
            i0_bad += usize::from(!(b < 0.05));
        }
    }
    Ok((
        defect < 1e-9 && i1_bad == 0 && i0_bad == 0,
        format!(
            "identity defect {defect:.1e} over {} points [tol 1e-9]; |I1|/max {i1_worst:.3} ({i1_bad} over); \
             |I0-(I2/2)^2|/I0 {i0_worst:.3} ({i0_bad} over) [tol 0.05, {} generic points]",
            pts.len(),
            generic.len()
        ),
    ))
}

fn ac7() -> Result<Verdict> {
    let (m, p, s) = rf_fixture("fig3b");
    let d = p.delta_sigma;
    let circle = feature_loci::<f64>(LocusKind::Circle).circle_points(64, 0.0).unwrap();
    let g: Vec<f64> = circle.iter().map(|&(x, y)| g2_coincidence(&m, &s.at(d * x, d * y))).collect::<Result<_>>()?;
    let low = min(g.iter().copied());
    let taus = linspace(0.0, 10.0, 201);
    let v = g2_homodyned_tau(&p, 1.0, &taus)?;
    let dev = max(taus.iter().zip(&v).map(|(t, x)| {
        let a = g2_homodyned_analytic(&p, 1.0, *t).unwrap();
        ((x - a) / a).abs()
    }));
    Ok((low > 1.0 && dev < 0.05, format!("circle min {low:.4} over 64 points [> 1]; tau max rel {dev:.2e} [tol 5e-2]")))
}

fn ac8() -> Result<Verdict> {
    let mut notes = Vec::new();
    let (mut zero_ok, mut min_ok) = (true, true);
    for &l in &[0.001, 0.01, 0.1] {
        let p = CavityParams::optimal(1.0, 80.1, l, 15)?;
        let g: f64 = g2_unfiltered(&squeezed_cavity(&p)?)?;
        let a = g2_cavity_phase_matched(l, p.omega_a, p.big_gamma_a());
        let rel = (g / a - 1.0).abs();
        let at = |o: f64| g2_unfiltered(&squeezed_cavity(&CavityParams { omega_a: o, ..p })?);
        let (_, gmin) = golden_min(at, 0.2 * p.omega_a, 3.0 * p.omega_a, 1e-4 * p.omega_a)?;
        let rel_min = (gmin / g2_cavity_minimum(l) - 1.0).abs();
        zero_ok &= rel < 1e-6;
        min_ok &= rel_min < 1e-6;
        notes.push(format!("l={l} g2(0) rel {rel:.1e} min {gmin:.6} rel {rel_min:.1e}"));
    }
    let cfg = common::fixture_config("fig3a", Command::G2tau);
    let Some(ModelSpec::Cavity(p)) = cfg.model else { unreachable!() };
    let taus = linspace(0.0, 10.0, 401);
    let v = g2_tau_unfiltered(&build_model(&cfg)?, &taus)?;
    let dev = max(taus.iter().zip(&v).map(|(t, x)| (x - g2_cavity_tau(p.gamma_a, p.delta_a, *t)).abs()));
    Ok((
        zero_ok && min_ok && dev < 1e-3,
        format!("{} [tol 1e-6]; fig3a tau max abs {dev:.2e} [tol 1e-3]", notes.join(", ")),
    ))
}

fn ratio_range(draws: &[GaussianParams<f64>]) -> Result<(f64, f64, usize)> {
    let mut r = Vec::new();
    for p in draws {
        r.push(convergence_row(p, DEFAULT_N_MAX)?.ratio());
    }
    let bad = r.iter().filter(|x| !(3.5..=4.5).contains(*x)).count();
    Ok((min(r.iter().copied()), max(r.iter().copied()), bad))
}

/// Parameters meeting the antibunching conditions for the given amplitudes.
fn matched(alpha1: photocorr::C<f64>, alpha2: photocorr::C<f64>, epsilon: f64) -> GaussianParams<f64> {
    let (f1, f2) = (carg(alpha1), carg(alpha2));
    GaussianParams {
        alpha1,
        alpha2,
        r1: cabs(alpha1).powi(2),
        theta1: 2.0 * f1,
        r2: cabs(alpha2).powi(2),
        theta2: 2.0 * f2,
        t12: cabs(alpha1) * cabs(alpha2),
        vartheta12: f1 + f2,
        epsilon,
    }
}

fn ac9() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let coherent: Vec<_> = (0..50).map(|_| GaussianParams::random(&mut rng, 0.05)).collect();
    let vacuum: Vec<_> = (0..50)
        .map(|_| GaussianParams { alpha1: re(0.0), alpha2: re(0.0), ..GaussianParams::random(&mut rng, 0.05) })
        .collect();
    let (c_lo, c_hi, c_bad) = ratio_range(&coherent)?;
    let (v_lo, v_hi, v_bad) = ratio_range(&vacuum)?;
    let mut g_max = 0.0f64;
    let mut term_dev = 0.0f64;
    for _ in 0..10 {
        let mut amp = || expi(rng.gen_range(-3.1..3.1)) * re(rng.gen_range(0.5..0.95));
        let (a1, a2) = (amp(), amp());
        let st = build_state(&matched(a1, a2, 0.01), DEFAULT_N_MAX)?;
        let mo = moments_exact(&st)?;
        g_max = g_max.max(mo.g2_1).max(mo.g2_2).max(mo.g2_12);
        let (_, t) = decomposition_exact(&st)?;
        term_dev = term_dev.max((t.i0 - 1.0).abs()).max(((t.i2 + 2.0) / 2.0).abs());
    }
    Ok((
        c_bad == 0 && v_bad == 0 && g_max < 1e-3 && term_dev < 0.02,
        format!(
            "amplitude draws ratio {c_lo:.3}..{c_hi:.3} ({c_bad}/50 outside); squeezed-vacuum draws ratio \
             {v_lo:.3}..{v_hi:.3} ({v_bad}/50 outside) [window 3.5..4.5]; matched g2 max {g_max:.2e} [< 1e-3]; \
             (I0,I2) rel dev {term_dev:.2e} [tol 2e-2]"
        ),
    ))
}

fn ac10() -> Result<Verdict> {
    // R = 1 for any pair of coherent amplitudes; B = √2 needs the two to coincide.
    let r0: f64 = quantifiers_from_moments(&SensorMoments::coherent(cplx(0.7, 0.2), cplx(-0.3, 1.1)))?.r.unwrap();
    let b0: f64 = quantifiers_from_moments(&SensorMoments::coherent(cplx(0.7, 0.2), cplx(0.7, 0.2)))?.b.unwrap();
    let coherent_ok = (r0 - 1.0).abs() < 1e-12 && (b0 - SQRT_2).abs() < 1e-12;
    let (m, p, s) = rf_fixture("fig2f");
    let s = s.with_levels(3);
    let d = p.delta_sigma;
    let mut leap = 0.0f64;
    for &x in &[0.25, 0.5, 0.75, 1.5, 2.0] {
        leap = leap.max(quantifiers(&m, &s.at(d * x, -d * x))?.r.unwrap_or(0.0));
    }
    let op = mollow_splitting(&p);
    let mut diag = 0.0f64;
    for &w in &[-op, 0.0, op] {
        diag = diag.max(quantifiers(&m, &s.at(w, w))?.r.unwrap_or(f64::INFINITY));
    }
    Ok((
        coherent_ok && leap > 1.0 && diag <= 1.0 + 1e-6,
        format!(
            "coherent R-1 {:.1e}, B-sqrt2 {:.1e} [tol 1e-12]; leapfrog max R {leap:.3e} [> 1]; \
             peak diagonal max R-1 {:.1e} [<= 1e-6]",
            r0 - 1.0,
            b0 - SQRT_2,
            diag - 1.0
        ),
    ))
}

#[test]
fn acceptance_report() {
    let criteria: [Criterion; 10] = [
        ("spectrum oracle", ac1),
        ("filtered g2(tau) oracle", ac2),
        ("broadband limit", ac3),
        ("circle of antibunching", ac4),
        ("compact-formula convergence", ac5),
        ("interference identity and asymptotics", ac6),
        ("homodyne removal of the circle", ac7),
        ("squeezed-cavity suite", ac8),
        ("Gaussian oracle", ac9),
        ("quantifier sanity", ac10),
    ];
    let mut errors = Vec::new();
    let mut passed = 0;
    let mut out = std::io::stderr();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match f() {
            Ok((ok, detail)) => {
                passed += usize::from(ok);
                let _ = writeln!(
                    out,
                    "AC{:<2} {} {name}: {detail} ({:.1}s)",
                    k + 1,
                    if ok { "PASS" } else { "FAIL" },
                    t.elapsed().as_secs_f64()
                );
            }
            Err(e) => {
                let _ = writeln!(out, "AC{:<2} FAIL {name}: evaluation error: {e}", k + 1);
                errors.push(k + 1);
            }
        }
    }
    let _ = writeln!(out, "acceptance: {passed}/{} criteria pass", criteria.len());
    assert!(errors.is_empty(), "criteria could not be evaluated: {errors:?}");
}
