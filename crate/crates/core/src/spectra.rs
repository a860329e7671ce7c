//! One-photon spectra: sensor-based numerics and closed forms.
//!
//! The numerical spectrum is the stationary population of a single sensor,
//! `S(ω) = Γ/(2πε²)⟨ς†ς⟩`, extrapolated to `ε → 0` from `ε` and `ε/2`.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::expectation;
use crate::error::{Error, Result};
use crate::models::{attach_sensor, CavityParams, QuantumModel, RFParams, SensorConfig};
use crate::scalar::{cabs2, Real, C};
use crate::steadystate::steady_state;

/// Spectrum value at one frequency, with `varpi = ω/Ω₊`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumSample<T: Real> {
    pub omega: T,
    pub varpi: T,
    pub value: T,
}

/// Largest accepted `|S(ε) − S(ε/2)| / |S(ε)|`.
pub const EPSILON_RATIO_LIMIT: f64 = 1e-4;

/// Mollow splitting Ω₊ = √(Δσ² + 4Ωσ²).
pub fn mollow_splitting<T: Real>(p: &RFParams<T>) -> T {
    (p.delta_sigma * p.delta_sigma + T::lit(4.0) * p.omega_sigma * p.omega_sigma).sqrt()
}

/// Normalized Lorentzian of full width Γ.
pub fn lorentzian<T: Real>(big_gamma: T, omega: T) -> T {
    let h = big_gamma / T::lit(2.0);
    h / (T::pi() * (h * h + omega * omega))
}

/// Stationary `⟨σ⟩` and `⟨σ†σ⟩` of the driven two-level system.
///
/// With `H = Δσ†σ + Ω(σ† + σ)` and the generator `−i[H,ρ]`, the coherent
/// amplitude is `⟨σ⟩ = −2Ω(2Δ + iγ)/(γ² + 4Δ² + 8Ω²)`.
pub fn rf_moments<T: Real>(p: &RFParams<T>) -> (C<T>, T) {
    let (d, o, g) = (p.delta_sigma, p.omega_sigma, p.gamma_sigma);
    let den = g * g + T::lit(4.0) * d * d + T::lit(8.0) * o * o;
    let s = C::new(-T::lit(4.0) * o * d / den, -T::lit(2.0) * o * g / den);
    (s, T::lit(4.0) * o * o / den)
}

/// Incoherent lineshape of resonance fluorescence seen through a filter of width Γ.
///
/// Uses `γ_ij ≡ iΓ + jγσ`; normalized to unit area and even in ω.
pub fn mollow_lineshape<T: Real>(p: &RFParams<T>, big_gamma: T, omega: T) -> T {
    let (d, o, g) = (p.delta_sigma, p.omega_sigma, p.gamma_sigma);
    let gg = |i: f64, j: f64| T::lit(i) * big_gamma + T::lit(j) * g;
    let n = |x: f64| T::lit(x);
    let (w2, d2, o2) = (omega * omega, d * d, o * o);
    let (g11, g12) = (gg(1.0, 1.0), gg(1.0, 2.0));
    let num = (g12 * g12 + n(4.0) * w2) * (g11 * g11 * g12 + n(4.0) * g12 * d2 + n(4.0) * gg(1.0, 0.0) * w2)
        + n(8.0) * o2 * (g11 * g12 * gg(3.0, 5.0) + n(4.0) * g12 * d2 - n(4.0) * gg(1.0, -2.0) * w2)
        + n(128.0) * o2 * o2 * g11;
    let den = (g12 * g12 + n(4.0) * w2)
        * ((g11 * g11 + n(4.0) * d2).powi(2) + n(8.0) * (g11 * g11 - n(4.0) * d2) * w2 + n(16.0) * w2 * w2)
        + n(32.0)
            * o2
            * (g11 * g12 * (g11 * g11 + n(4.0) * d2) + n(4.0) * (gg(0.0, 1.0) * g11 + n(4.0) * d2) * w2
                - n(16.0) * w2 * w2)
        + n(256.0) * o2 * o2 * (g11 * g11 + n(4.0) * w2);
    n(2.0) / T::pi() * num / den
}

/// Closed-form filtered spectrum: coherent Lorentzian plus incoherent triplet.
pub fn spectrum_analytic_rf<T: Real>(p: &RFParams<T>, big_gamma: T, omega: T) -> T {
    let (s, n) = rf_moments(p);
    let coh = cabs2(s);
    coh * lorentzian(big_gamma, omega) + (n - coh) * mollow_lineshape(p, big_gamma, omega)
}

/// Resonant Heitler-regime spectrum (leading order in Ωσ/γσ).
///
/// Only meaningful for `Δσ = 0` and `Ωσ ≪ γσ`; other inputs are evaluated as is.
pub fn spectrum_analytic_heitler<T: Real>(p: &RFParams<T>, big_gamma: T, omega: T) -> T {
    let (o, g) = (p.omega_sigma, p.gamma_sigma);
    let r = o * o / (g * g);
    let g11 = big_gamma + g;
    let g12 = big_gamma + T::lit(2.0) * g;
    let w2 = omega * omega;
    let inc = T::lit(2.0) / T::pi() * (g12 * g11 * g11 + T::lit(4.0) * big_gamma * w2)
        / (g11 * g11 + T::lit(4.0) * w2).powi(2);
    T::lit(4.0) * r * ((T::one() - T::lit(16.0) * r) * lorentzian(big_gamma, omega) + T::lit(8.0) * r * inc)
}

/// Weight of the δ(ω) line of the unfiltered Heitler spectrum.
pub fn heitler_delta_weight<T: Real>(p: &RFParams<T>) -> T {
    let r = p.omega_sigma * p.omega_sigma / (p.gamma_sigma * p.gamma_sigma);
    T::lit(4.0) * r * (T::one() - T::lit(16.0) * r)
}

/// Continuous part of the unfiltered Heitler spectrum, a squared Lorentzian.
pub fn heitler_narrow_continuum<T: Real>(p: &RFParams<T>, omega: T) -> T {
    let g = p.gamma_sigma;
    let r = p.omega_sigma * p.omega_sigma / (g * g);
    let l = lorentzian(g, omega);
    T::lit(4.0) * r * T::lit(8.0) * r * T::pi() * g * l * l
}

/// Coherent intensity `|⟨a⟩|²` and population `⟨a†a⟩` of the phase-matched cavity.
pub fn cavity_moments_phase_matched<T: Real>(p: &CavityParams<T>) -> (T, T) {
    let l = p.lambda();
    let big = p.big_gamma_a();
    let one = T::one();
    let coh = T::lit(4.0) * p.omega_a * p.omega_a / (big * big * (one + l) * (one + l));
    let inc = l * l / (T::lit(2.0) * (one - l * l));
    (coh, coh + inc)
}

/// Filtered spectrum of the phase-matched squeezed cavity for large Δa.
///
/// Uses `γ_ij ≡ iΓ + jγa`.
pub fn spectrum_analytic_cavity<T: Real>(p: &CavityParams<T>, big_gamma: T, omega: T) -> T {
    let (coh, n) = cavity_moments_phase_matched(p);
    let g = p.gamma_a;
    let g11 = big_gamma + g;
    let g12 = big_gamma + T::lit(2.0) * g;
    let (w2, d2) = (omega * omega, p.delta_a * p.delta_a);
    let four = T::lit(4.0);
    let num = g12 * (g11 * g11 + four * d2) + four * big_gamma * w2;
    let den = (g11 * g11 + four * w2).powi(2) + T::lit(8.0) * d2 * (g11 * g11 - four * w2) + T::lit(16.0) * d2 * d2;
    coh * lorentzian(big_gamma, omega) + (n - coh) * T::lit(2.0) / T::pi() * num / den
}

/// Leading-order sensor population `⟨ς†ς⟩/ε²` in the far-detuned regime, at `ϖ = ω/Δσ`.
pub fn detuned_sensor_population<T: Real>(p: &RFParams<T>, big_gamma: T, varpi: T) -> T {
    let (d, o, g) = (p.delta_sigma, p.omega_sigma, p.gamma_sigma);
    let d2 = d * d;
    let o2 = o * o;
    let v2 = varpi * varpi;
    o2 / (d2 * d2 * v2)
        + T::lit(2.0) * o2 * o2 / (big_gamma * d2 * d2 * d2) * (big_gamma + T::lit(2.0) * g + big_gamma * v2)
            / (T::one() - v2).powi(2)
}

/// `Γ/(2πε²)⟨ς†ς⟩` for one sensor at `omega`, at the coupling given in `s`.
pub fn sensor_spectrum_point<T: Real>(base: &QuantumModel<T>, s: &SensorConfig<T>, omega: T) -> Result<T> {
    let m = attach_sensor(base, omega, s.big_gamma, s.epsilon, s.levels)?;
    let rho = steady_state(&m.liouvillian()?)?;
    let sv = m.sensor_op(m.sensors().len() - 1)?;
    let n = expectation(&rho, &[&sv.adjoint(), sv])?.re;
    Ok(s.big_gamma / (T::lit(2.0) * T::pi() * s.epsilon * s.epsilon) * n)
}

/// Sensor spectrum on a grid of raw frequencies, extrapolated to vanishing coupling.
///
/// Each point is solved at `ε` and `ε/2` and combined as `(4S(ε/2) − S(ε))/3`.
/// A relative change above [`EPSILON_RATIO_LIMIT`] between the two is an error.
/// `omega_plus` sets `varpi = ω/Ω₊` in the samples.
pub fn spectrum_numeric<T: Real>(
    base: &QuantumModel<T>,
    s: &SensorConfig<T>,
    omega_grid: &[T],
    omega_plus: T,
) -> Result<Vec<SpectrumSample<T>>> {
    s.validate()?;
    let half = s.clone().with_epsilon(s.epsilon * T::lit(0.5));
    omega_grid
        .par_iter()
        .map(|&omega| {
            let s1 = sensor_spectrum_point(base, s, omega)?;
            let s2 = sensor_spectrum_point(base, &half, omega)?;
            let value = if s1 == T::zero() && s2 == T::zero() {
                T::zero()
            } else {
                let ratio = (s1 - s2).abs() / s1.abs();
                if !(ratio < T::lit(EPSILON_RATIO_LIMIT)) {
                    return Err(Error::EpsilonTooLarge { ratio: ratio.as_f64(), limit: EPSILON_RATIO_LIMIT });
                }
                (T::lit(4.0) * s2 - s1) / T::lit(3.0)
            };
            Ok(SpectrumSample { omega, varpi: omega / omega_plus, value })
        })
        .collect()
}

/// `∫_{−∞}^{∞} f(ω) dω` by adaptive Simpson on `ω = c·tan u`.
///
/// `c` sets the frequency scale of the mapping; the integrand must decay at
/// least as `ω⁻²`.
pub fn integrate_real_line<T: Real, F: Fn(T) -> T>(f: F, c: T, rel_tol: T) -> T {
    let half_pi = T::frac_pi_2();
    let g = |u: T| {
        let cu = u.cos();
        if cu <= T::zero() {
            return T::zero();
        }
        f(c * u.tan()) * c / (cu * cu)
    };
    let a = -half_pi;
    let b = half_pi;
    let coarse = simpson(&g, a, b);
    let scale = coarse.2.abs().max(T::default_epsilon());
    adaptive_simpson(&g, a, b, coarse, rel_tol * scale, 50)
}

fn simpson<T: Real, G: Fn(T) -> T>(g: &G, a: T, b: T) -> (T, T, T) {
    let m = (a + b) / T::lit(2.0);
    let fm = g(m);
    let s = (b - a) / T::lit(6.0) * (g(a) + T::lit(4.0) * fm + g(b));
    (m, fm, s)
}

fn adaptive_simpson<T: Real, G: Fn(T) -> T>(g: &G, a: T, b: T, whole: (T, T, T), tol: T, depth: u32) -> T {
    let (m, _, s) = whole;
    let left = simpson(g, a, m);
    let right = simpson(g, m, b);
    let delta = left.2 + right.2 - s;
    if depth == 0 || delta.abs() <= T::lit(15.0) * tol {
        return left.2 + right.2 + delta / T::lit(15.0);
    }
    let half = tol / T::lit(2.0);
    adaptive_simpson(g, a, m, left, half, depth - 1) + adaptive_simpson(g, m, b, right, half, depth - 1)
}
