//! Helpers shared by the integration tests.
#![allow(dead_code)]

use photocorr::cli::{build_model, fixture, parse_config, Command, ModelSpec, RunConfig};
use photocorr::models::{QuantumModel, RFParams, SensorConfig};
use photocorr::twophoton::{feature_loci, LocusKind};

/// Parsed configuration of a shipped fixture.
pub fn fixture_config(name: &str, command: Command) -> RunConfig {
    let text = fixture(name).expect("fixture exists");
    parse_config(command, Some(text), &[], None, "unused.csv".into(), None).unwrap()
}

/// Model, parameters and sensor template of a resonance-fluorescence fixture.
pub fn rf_fixture(name: &str) -> (QuantumModel<f64>, RFParams<f64>, SensorConfig<f64>) {
    let cfg = fixture_config(name, Command::G2map);
    let Some(ModelSpec::Rf(p)) = cfg.model else { panic!("{name} is not an rf fixture") };
    let m = build_model(&cfg).unwrap();
    let s = SensorConfig::new(0.0, 0.0, cfg.big_gamma, m.system_rate());
    (m, p, s)
}

/// Ten points of the detuned landscape kept clear of every divergence and
/// zero locus, of the axes, and of each other.
///
/// Candidates sit on a 0.2-spaced grid over `[−2.4, 2.4]²` with `ϖ₁ ≤ ϖ₂`;
/// every seventh one is kept.
pub fn generic_points() -> Vec<(f64, f64)> {
    let loci = [
        feature_loci::<f64>(LocusKind::Circle),
        feature_loci(LocusKind::BunchingLines),
        feature_loci(LocusKind::SecondaryLines),
    ];
    let mut out = Vec::new();
    for i in 0..25 {
        for j in i..25 {
            let (x, y) = (-2.4 + 0.2 * i as f64, -2.4 + 0.2 * j as f64);
            if x.abs() > 0.3 && y.abs() > 0.3 && loci.iter().all(|l| l.distance(x, y) >= 0.35) {
                out.push((x, y));
            }
        }
    }
    out.into_iter().step_by(7).take(10).collect()
}

/// `n` points on `[a, b]` including both ends.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}
