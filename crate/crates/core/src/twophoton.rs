//! Two-photon correlations: frequency-resolved coincidences, delayed
//! correlations, interference decomposition, nonclassicality quantifiers and
//! the closed forms they are checked against.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{expectation, Operator};
use crate::error::{Error, Result};
use crate::models::{attach_sensors, homodyne, resonance_fluorescence, QuantumModel, RFParams, SensorConfig};
use crate::scalar::{cabs2, re, Real, C};
use crate::steadystate::{steady_state, two_time_correlator, DensityMatrix};

/// Channel names of a [`Landscape`], in CSV column order.
pub const CHANNELS: [&str; 7] = ["g2", "I0", "I1", "I2", "R", "B", "S"];

/// Normal-ordered moments of two modes `a₁`, `a₂` in one state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SensorMoments<T: Real> {
    /// `⟨a₁†a₁⟩`, `⟨a₂†a₂⟩`.
    pub n1: T,
    pub n2: T,
    /// `⟨a₁⟩`, `⟨a₂⟩`.
    pub mean1: C<T>,
    pub mean2: C<T>,
    /// `⟨a₁†a₂†a₂a₁⟩`.
    pub cross: T,
    /// `⟨a₁†a₂†⟩`.
    pub pair_dag: C<T>,
    /// `⟨a₁†a₂⟩`.
    pub hop: C<T>,
    /// `⟨a₁†a₂†a₂⟩`.
    pub third2: C<T>,
    /// `⟨a₁†a₂†a₁⟩`.
    pub third1: C<T>,
    /// `⟨a₁a₂⟩`.
    pub pair: C<T>,
    /// Moments involving `a_i²`; present only when requested.
    pub higher: Option<HigherMoments<T>>,
}

/// Moments with squared lowering operators, needed by [`Quantifiers`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HigherMoments<T: Real> {
    /// `⟨a₁†²a₁²⟩`, `⟨a₂†²a₂²⟩`.
    pub auto1: T,
    pub auto2: T,
    /// `⟨a₁†²a₂²⟩`, `⟨a₂†²a₁²⟩`.
    pub swap12: C<T>,
    pub swap21: C<T>,
    /// `⟨a₁²a₂²⟩`.
    pub quad: C<T>,
}

impl<T: Real> SensorMoments<T> {
    /// Evaluates the moments of `a1`, `a2` in `rho`.
    pub fn compute(rho: &DensityMatrix<T>, a1: &Operator<T>, a2: &Operator<T>, higher: bool) -> Result<Self> {
        let d1 = a1.adjoint();
        let d2 = a2.adjoint();
        let e = |ops: &[&Operator<T>]| expectation(rho, ops);
        let higher = if higher {
            Some(HigherMoments {
                auto1: e(&[&d1, &d1, a1, a1])?.re,
                auto2: e(&[&d2, &d2, a2, a2])?.re,
                swap12: e(&[&d1, &d1, a2, a2])?,
                swap21: e(&[&d2, &d2, a1, a1])?,
                quad: e(&[a1, a1, a2, a2])?,
            })
        } else {
            None
        };
        Ok(SensorMoments {
            n1: e(&[&d1, a1])?.re,
            n2: e(&[&d2, a2])?.re,
            mean1: e(&[a1])?,
            mean2: e(&[a2])?,
            cross: e(&[&d1, &d2, a2, a1])?.re,
            pair_dag: e(&[&d1, &d2])?,
            hop: e(&[&d1, a2])?,
            third2: e(&[&d1, &d2, a2])?,
            third1: e(&[&d1, &d2, a1])?,
            pair: e(&[a1, a2])?,
            higher,
        })
    }

    /// Moments of two independent coherent states `|α₁⟩|α₂⟩`.
    pub fn coherent(alpha1: C<T>, alpha2: C<T>) -> Self {
        let (n1, n2) = (cabs2(alpha1), cabs2(alpha2));
        let (c1, c2) = (alpha1.conj(), alpha2.conj());
        SensorMoments {
            n1,
            n2,
            mean1: alpha1,
            mean2: alpha2,
            cross: n1 * n2,
            pair_dag: c1 * c2,
            hop: c1 * alpha2,
            third2: c1 * c2 * alpha2,
            third1: c1 * c2 * alpha1,
            pair: alpha1 * alpha2,
            higher: Some(HigherMoments {
                auto1: n1 * n1,
                auto2: n2 * n2,
                swap12: c1 * c1 * alpha2 * alpha2,
                swap21: c2 * c2 * alpha1 * alpha1,
                quad: alpha1 * alpha1 * alpha2 * alpha2,
            }),
        }
    }

    /// `⟨a₁†a₂†a₂a₁⟩ / (n₁n₂)`.
    pub fn g2(&self) -> T {
        self.cross / (self.n1 * self.n2)
    }
}

/// Sensor population below which a coincidence is reported as undefined.
///
/// A population of `ε²` corresponds to a spectral density of order one; the
/// floor sits a thousand machine epsilons below that.
pub fn population_floor<T: Real>(epsilon: T) -> T {
    T::lit(1e3) * T::default_epsilon() * epsilon * epsilon
}

fn guard<T: Real>(m: &SensorMoments<T>, epsilon: T) -> Result<()> {
    let floor = population_floor(epsilon);
    if !(m.n1 > floor) || !(m.n2 > floor) {
        return Err(Error::VanishingPopulation(format!(
            "sensor populations {:e}, {:e} below {:e}",
            m.n1.as_f64(),
            m.n2.as_f64(),
            floor.as_f64()
        )));
    }
    Ok(())
}

/// Steady state and sensor moments of `base` with two sensors attached.
pub fn sensor_moments<T: Real>(
    base: &QuantumModel<T>,
    s: &SensorConfig<T>,
    higher: bool,
) -> Result<(QuantumModel<T>, DensityMatrix<T>, SensorMoments<T>)> {
    if higher && s.levels < 3 {
        return Err(Error::InvalidParameter("moments with squared sensor operators need levels >= 3".into()));
    }
    let m = attach_sensors(base, s)?;
    let rho = steady_state(&m.liouvillian()?)?;
    let n = m.sensors().len();
    let mom = SensorMoments::compute(&rho, m.sensor_op(n - 2)?, m.sensor_op(n - 1)?, higher)?;
    guard(&mom, s.epsilon)?;
    Ok((m, rho, mom))
}

/// Stationary frequency-resolved coincidences `⟨ς₁†ς₂†ς₂ς₁⟩/(⟨ς₁†ς₁⟩⟨ς₂†ς₂⟩)`.
pub fn g2_coincidence<T: Real>(base: &QuantumModel<T>, s: &SensorConfig<T>) -> Result<T> {
    Ok(sensor_moments(base, s, false)?.2.g2())
}

/// Colour-blind `⟨d†²d²⟩/⟨d†d⟩²` of the detected field of a model without sensors.
pub fn g2_unfiltered<T: Real>(m: &QuantumModel<T>) -> Result<T> {
    let rho = steady_state(&m.liouvillian()?)?;
    let d = m.detection_op();
    let dd = d.adjoint();
    let n = expectation(&rho, &[&dd, d])?.re;
    if !(n > T::zero()) {
        return Err(Error::VanishingPopulation("detected field is empty".into()));
    }
    Ok(expectation(&rho, &[&dd, &dd, d, d])?.re / (n * n))
}

/// Delayed coincidences `⟨ς₁†(0)ς₂†(τ)ς₂(τ)ς₁(0)⟩/(n₁n₂)` of two sensors.
pub fn g2_tau<T: Real>(base: &QuantumModel<T>, s: &SensorConfig<T>, tau_grid: &[T]) -> Result<Vec<T>> {
    let (m, rho, mom) = sensor_moments(base, s, false)?;
    let l = m.liouvillian()?;
    let n = m.sensors().len();
    let s1 = m.sensor_op(n - 2)?;
    let s2 = m.sensor_op(n - 1)?;
    let num = s2.adjoint().mul(s2)?;
    let g = two_time_correlator(&l, &rho, &s1.adjoint(), &num, s1, tau_grid)?;
    let norm = mom.n1 * mom.n2;
    Ok(g.into_iter().map(|z| z.re / norm).collect())
}

/// Colour-blind delayed coincidences of the detected field of a model without sensors.
pub fn g2_tau_unfiltered<T: Real>(m: &QuantumModel<T>, tau_grid: &[T]) -> Result<Vec<T>> {
    let l = m.liouvillian()?;
    let rho = steady_state(&l)?;
    let d = m.detection_op();
    let dd = d.adjoint();
    let num = dd.mul(d)?;
    let n = expectation(&rho, &[&num])?.re;
    if !(n > T::zero()) {
        return Err(Error::VanishingPopulation("detected field is empty".into()));
    }
    let g = two_time_correlator(&l, &rho, &dd, &num, d, tau_grid)?;
    Ok(g.into_iter().map(|z| z.re / (n * n)).collect())
}

/// Delayed coincidences of resonance fluorescence homodyned with `α = −F⟨σ⟩`.
///
/// `⟨σ⟩` is taken from the numerical steady state and the detected field is
/// correlated without filtering, i.e. in the infinite sensor-width limit.
pub fn g2_homodyned_tau<T: Real>(p: &RFParams<T>, fraction: T, tau_grid: &[T]) -> Result<Vec<T>> {
    check_fraction(fraction)?;
    let m = resonance_fluorescence(p)?;
    let rho = steady_state(&m.liouvillian()?)?;
    let mean = expectation(&rho, &[m.detection_op()])?;
    let h = homodyne(&m, -mean * re(fraction))?;
    g2_tau_unfiltered(&h, tau_grid)
}

fn check_fraction<T: Real>(fraction: T) -> Result<()> {
    if !(fraction >= T::zero() && fraction <= T::one()) {
        return Err(Error::InvalidParameter("homodyne fraction must lie in [0, 1]".into()));
    }
    Ok(())
}

/// Leading-order homodyned correlation in the detuned Heitler regime.
///
/// `1 + (1−F)⁻⁴e^{−γτ} − 2(1−F)⁻²e^{−γτ/2}cos(Δτ)`; at `F = 1` the finite limit
/// `1 + Δ⁴/(4Ω⁴)e^{−γτ}` is returned.
pub fn g2_homodyned_analytic<T: Real>(p: &RFParams<T>, fraction: T, tau: T) -> Result<T> {
    check_fraction(fraction)?;
    let (d, o, g) = (p.delta_sigma, p.omega_sigma, p.gamma_sigma);
    if fraction == T::one() {
        return Ok(T::one() + d.powi(4) / (T::lit(4.0) * o.powi(4)) * (-g * tau).exp());
    }
    let k = (T::one() - fraction).powi(-2);
    Ok(T::one() + k * k * (-g * tau).exp() - T::lit(2.0) * k * (-g * tau / T::lit(2.0)).exp() * (d * tau).cos())
}

/// Filtered `g²_Γ(τ)` at resonance in the Heitler regime with both sensors at the laser.
///
/// `(1 + Γγ/(Γ²−γ²)e^{−Γτ/2} − Γ²/(Γ²−γ²)e^{−γτ/2})²`, with the confluent
/// form `(1 − ½(1 + γτ/2)e^{−γτ/2})²` at `Γ = γ`.
pub fn g2_filtered_heitler<T: Real>(gamma: T, big_gamma: T, tau: T) -> T {
    let half = T::lit(0.5);
    let eg = (-gamma * tau * half).exp();
    if (big_gamma - gamma).abs() <= T::lit(1e-9) * gamma {
        return g2_filtered_heitler_confluent(gamma, tau);
    }
    let den = big_gamma * big_gamma - gamma * gamma;
    let inner = T::one() + big_gamma * gamma / den * (-big_gamma * tau * half).exp() - big_gamma * big_gamma / den * eg;
    inner * inner
}

/// `Γ = γ` limit of [`g2_filtered_heitler`].
pub fn g2_filtered_heitler_confluent<T: Real>(gamma: T, tau: T) -> T {
    let half = T::lit(0.5);
    let inner = T::one() - half * (T::one() + gamma * tau * half) * (-gamma * tau * half).exp();
    inner * inner
}

/// Colour-blind Heitler antibunching `(1 − e^{−γτ/2})²`.
pub fn g2_broadband_heitler<T: Real>(gamma: T, tau: T) -> T {
    let x = T::one() - (-gamma * tau / T::lit(2.0)).exp();
    x * x
}

/// Phase-matched cavity `g²_a(0)` at drive `Ω` and dimensionless squeezing `λ`.
pub fn g2_cavity_phase_matched<T: Real>(lambda: T, omega: T, big_gamma_a: T) -> T {
    let (l, o2, g2) = (lambda, omega * omega, big_gamma_a * big_gamma_a);
    let one = T::one();
    let num = g2 * g2 * l * l * (one + l).powi(2) * (one + T::lit(2.0) * l * l)
        + T::lit(16.0) * o2 * g2 * l * (l * l - one) * (one - T::lit(2.0) * l)
        + T::lit(64.0) * (one - l).powi(2) * o2 * o2;
    let den = g2 * l * l * (l * l - one) - T::lit(8.0) * o2 * (one - l).powi(2);
    (one - l).powi(2) * num / (den * den)
}

/// Minimum of [`g2_cavity_phase_matched`] over the drive: `2λ(2−λ)/(1+2λ−λ²)`.
pub fn g2_cavity_minimum<T: Real>(lambda: T) -> T {
    let two = T::lit(2.0);
    two * lambda * (two - lambda) / (T::one() + two * lambda - lambda * lambda)
}

/// Leading-order delayed coincidences of the optimally driven, phase-matched cavity.
///
/// `1 + e^{−γτ} − 2e^{−γτ/2}cos(Δτ)`.
pub fn g2_cavity_tau<T: Real>(gamma_a: T, delta_a: T, tau: T) -> T {
    T::one() + (-gamma_a * tau).exp() - T::lit(2.0) * (-gamma_a * tau / T::lit(2.0)).exp() * (delta_a * tau).cos()
}

/// Leading-order filtered coincidences of detuned Heitler emission at `ϖᵢ = ωᵢ/Δσ`.
///
/// `(ϖ₁²+ϖ₁+ϖ₂²+ϖ₂)² / [(ϖ₁+ϖ₂)²(ϖ₁+1)²(ϖ₂+1)²]`; on the divergence lines
/// the result is `+∞`.
pub fn g2_analytic_detuned<T: Real>(varpi1: T, varpi2: T) -> T {
    let (a, b) = (varpi1, varpi2);
    let one = T::one();
    let num = (a * a + a + b * b + b).powi(2);
    let den = ((a + b) * (a + one) * (b + one)).powi(2);
    if den == T::zero() {
        return T::lit(f64::INFINITY);
    }
    num / den
}

/// `1 + I₀ + I₁ + I₂` split of `g²₁₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InterferenceTerms<T: Real> {
    pub i0: T,
    pub i1: T,
    pub i2: T,
}

impl<T: Real> InterferenceTerms<T> {
    /// `1 + I₀ + I₁ + I₂`.
    pub fn total(&self) -> T {
        T::one() + self.i0 + self.i1 + self.i2
    }
}

/// Leading-order detuned Heitler interference terms; `I₁ = 0`.
pub fn interference_analytic_detuned<T: Real>(varpi1: T, varpi2: T) -> InterferenceTerms<T> {
    let (a, b) = (varpi1, varpi2);
    let one = T::one();
    let two = T::lit(2.0);
    let s = a + b;
    let den = s * (a + one) * (b + one);
    let i0 = (a * b * (two + s)).powi(2) / (den * den);
    let i2 = -two * a * b * (two + s) / den;
    InterferenceTerms { i0, i1: T::zero(), i2 }
}

/// Interference terms from full-state moments and coherent amplitudes `α₁`, `α₂`.
///
/// The three terms sum to `g²₁₂ − 1` for any `α`; they coincide with the
/// fluctuation forms when `αᵢ = ⟨aᵢ⟩`.
pub fn interference_full_state<T: Real>(m: &SensorMoments<T>, alphas: (C<T>, C<T>)) -> InterferenceTerms<T> {
    let (a1, a2) = alphas;
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let (p1, p2) = (cabs2(a1), cabs2(a2));
    let aa = p1 * p2;
    let x = (a1 * a2 * m.pair_dag).re;
    let y = (a1 * a2.conj() * m.hop).re;
    let p = (a1 * m.third2).re;
    let q = (a2 * m.third1).re;
    let norm = m.n1 * m.n2;
    let i0 = (m.cross - norm - four * aa + two * p1 * m.n2 + two * p2 * m.n1 + two * (x + y - p - q)) / norm;
    let i1 = two * (p + q - two * (x + y) + four * aa - p1 * m.n2 - p2 * m.n1) / norm;
    let i2 = (two * (x + y) - four * aa) / norm;
    InterferenceTerms { i0, i1, i2 }
}

/// Interference terms evaluated on the fluctuation operators `ãᵢ = aᵢ − αᵢ`.
pub fn interference_fluctuation_form<T: Real>(
    rho: &DensityMatrix<T>,
    a1: &Operator<T>,
    a2: &Operator<T>,
    alphas: (C<T>, C<T>),
) -> Result<InterferenceTerms<T>> {
    let id = Operator::identity(a1.signature());
    let f1 = a1.add(&id.scale(-alphas.0))?;
    let f2 = a2.add(&id.scale(-alphas.1))?;
    let full = SensorMoments::compute(rho, a1, a2, false)?;
    let fl = SensorMoments::compute(rho, &f1, &f2, false)?;
    let (al1, al2) = alphas;
    let two = T::lit(2.0);
    let norm = full.n1 * full.n2;
    Ok(InterferenceTerms {
        i0: (fl.cross - fl.n1 * fl.n2) / norm,
        i1: two * (al1 * fl.third2 + al2 * fl.third1).re / norm,
        i2: two * (al1 * al2 * fl.pair_dag + al1 * al2.conj() * fl.hop).re / norm,
    })
}

/// Largest accepted `|1 + I₀ + I₁ + I₂ − g²|`, relative to `max(1, g²)`.
pub const IDENTITY_TOL: f64 = 1e-9;

/// Interference decomposition of the two-sensor coincidences.
///
/// `alphas` defaults to the stationary sensor amplitudes `⟨ςᵢ⟩`.
pub fn interference_decomposition<T: Real>(
    base: &QuantumModel<T>,
    s: &SensorConfig<T>,
    alphas: Option<(C<T>, C<T>)>,
) -> Result<(T, InterferenceTerms<T>)> {
    let (_, _, mom) = sensor_moments(base, s, false)?;
    decompose_checked(&mom, alphas)
}

fn decompose_checked<T: Real>(mom: &SensorMoments<T>, alphas: Option<(C<T>, C<T>)>) -> Result<(T, InterferenceTerms<T>)> {
    let alphas = alphas.unwrap_or((mom.mean1, mom.mean2));
    let terms = interference_full_state(mom, alphas);
    let g2 = mom.g2();
    let defect = (terms.total() - g2).abs();
    if !(defect <= T::lit(IDENTITY_TOL) * g2.abs().max(T::one())) {
        return Err(Error::InvalidState(format!("interference identity (defect {:e})", defect.as_f64())));
    }
    Ok((g2, terms))
}

/// Cauchy-Schwarz ratio `R`, Bell combination `B` and two-mode squeezing witness `S`.
///
/// A channel is `None` when its denominator vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Quantifiers<T: Real> {
    pub r: Option<T>,
    pub b: Option<T>,
    pub s: Option<T>,
}

/// Quantifiers from moments that include [`HigherMoments`].
pub fn quantifiers_from_moments<T: Real>(m: &SensorMoments<T>) -> Result<Quantifiers<T>> {
    let h = m
        .higher
        .ok_or_else(|| Error::InvalidParameter("quantifiers need moments of squared sensor operators".into()))?;
    let nonzero = |x: T| x != T::zero() && x.is_finite();
    let r_den = h.auto1 * h.auto2;
    let r = nonzero(r_den).then(|| m.cross * m.cross / r_den);
    let two = T::lit(2.0);
    let b_den = h.auto1 + h.auto2 + two * m.cross;
    let b_num = re(h.auto1 + h.auto2 - T::lit(4.0) * m.cross) - h.swap12 - h.swap21;
    let b = nonzero(b_den).then(|| two.sqrt() * (b_num / re(b_den)).norm_sqr().sqrt());
    let s_den = m.cross - cabs2(m.mean1 * m.mean2);
    let s_num = h.quad - m.pair * m.pair;
    let s = nonzero(s_den).then(|| cabs2(s_num).sqrt() / s_den);
    Ok(Quantifiers { r, b, s })
}

/// Quantifiers at one pair of sensor frequencies; sensors need three levels.
pub fn quantifiers<T: Real>(base: &QuantumModel<T>, s: &SensorConfig<T>) -> Result<Quantifiers<T>> {
    quantifiers_from_moments(&sensor_moments(base, s, true)?.2)
}

/// Which channels a landscape evaluates besides `g2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LandscapeOptions<T: Real> {
    pub interference: bool,
    pub quantifiers: bool,
    /// Coherent amplitudes for the decomposition instead of `⟨ςᵢ⟩`.
    pub alphas: Option<(C<T>, C<T>)>,
}

/// Grid point that failed with a numerical (not undefined-point) error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointFailure {
    pub index: (usize, usize),
    pub varpi: (f64, f64),
    pub message: String,
}

/// Two-photon observables on a `ϖ₁ × ϖ₂` grid.
///
/// Channel values are stored row-major (`ϖ₁` slow); undefined points are `None`.
#[derive(Clone, Debug)]
pub struct Landscape<T: Real> {
    pub varpi1_grid: Vec<T>,
    pub varpi2_grid: Vec<T>,
    pub channels: BTreeMap<String, Vec<Option<T>>>,
    pub failures: Vec<PointFailure>,
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

impl<T: Real> Landscape<T> {
    pub fn get(&self, channel: &str, i1: usize, i2: usize) -> Option<T> {
        let c = self.channels.get(channel)?;
        *c.get(i1 * self.varpi2_grid.len() + i2)?
    }

    /// Largest `|g²(ϖ₁,ϖ₂) − g²(ϖ₂,ϖ₁)|` relative to `max(1, g²)`, for identical grids.
    pub fn asymmetry(&self) -> Option<T> {
        if self.varpi1_grid != self.varpi2_grid {
            return None;
        }
        let n = self.varpi1_grid.len();
        let mut worst = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                if let (Some(a), Some(b)) = (self.get("g2", i, j), self.get("g2", j, i)) {
                    worst = worst.max((a - b).abs() / a.abs().max(T::one()));
                }
            }
        }
        Some(worst)
    }
}

type PointValues<T> = std::result::Result<[Option<T>; 7], String>;

/// Evaluates `g²` and the requested channels over `ϖ₁ × ϖ₂`, with `ωᵢ = ϖᵢΩ₊`.
///
/// Points are independent and solved in parallel; assembly is in grid order.
/// Undefined points become `None`; other per-point failures are collected in
/// [`Landscape::failures`].
pub fn g2_landscape<T: Real>(
    base: &QuantumModel<T>,
    varpi1_grid: &[T],
    varpi2_grid: &[T],
    omega_plus: T,
    s: &SensorConfig<T>,
    opts: &LandscapeOptions<T>,
) -> Result<Landscape<T>> {
    s.validate()?;
    for g in [varpi1_grid, varpi2_grid] {
        if g.is_empty() || g.windows(2).any(|w| !(w[1] > w[0])) || g.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("grids must be finite, non-empty and ascending".into()));
        }
    }
    let s = if opts.quantifiers && s.levels < 3 { s.clone().with_levels(3) } else { s.clone() };
    let n2 = varpi2_grid.len();
    let points: Vec<(usize, usize)> = (0..varpi1_grid.len()).flat_map(|i| (0..n2).map(move |j| (i, j))).collect();
    let values: Vec<PointValues<T>> = points
        .par_iter()
        .map(|&(i, j)| {
            let cfg = s.at(varpi1_grid[i] * omega_plus, varpi2_grid[j] * omega_plus);
            match landscape_point(base, &cfg, opts) {
                Ok(v) => Ok(v),
                Err(e) if e.is_undefined_point() => Ok([None; 7]),
                Err(e) => Err(e.to_string()),
            }
        })
        .collect();

    let mut channels: BTreeMap<String, Vec<Option<T>>> = BTreeMap::new();
    let wanted: Vec<usize> = (0..7)
        .filter(|&k| k == 0 || (opts.interference && (1..4).contains(&k)) || (opts.quantifiers && k >= 4))
        .collect();
    for &k in &wanted {
        channels.insert(CHANNELS[k].to_string(), Vec::with_capacity(values.len()));
    }
    let mut failures = Vec::new();
    for (&(i, j), v) in points.iter().zip(values) {
        let row = match v {
            Ok(row) => row,
            Err(message) => {
                failures.push(PointFailure {
                    index: (i, j),
                    varpi: (varpi1_grid[i].as_f64(), varpi2_grid[j].as_f64()),
                    message,
                });
                [None; 7]
            }
        };
        for &k in &wanted {
            channels.get_mut(CHANNELS[k]).expect("channel allocated").push(row[k]);
        }
    }

    let mut metadata = serde_json::Map::new();
    metadata.insert("omega_plus".into(), omega_plus.as_f64().into());
    metadata.insert("big_gamma".into(), s.big_gamma.as_f64().into());
    metadata.insert("epsilon".into(), s.epsilon.as_f64().into());
    metadata.insert("sensor_levels".into(), s.levels.into());
    metadata.insert("system_rate".into(), base.system_rate().as_f64().into());
    Ok(Landscape { varpi1_grid: varpi1_grid.to_vec(), varpi2_grid: varpi2_grid.to_vec(), channels, failures, metadata })
}

fn landscape_point<T: Real>(base: &QuantumModel<T>, s: &SensorConfig<T>, opts: &LandscapeOptions<T>) -> Result<[Option<T>; 7]> {
    let (_, _, mom) = sensor_moments(base, s, opts.quantifiers)?;
    let mut out = [None; 7];
    out[0] = Some(mom.g2());
    if opts.interference {
        let (_, t) = decompose_checked(&mom, opts.alphas)?;
        out[1] = Some(t.i0);
        out[2] = Some(t.i1);
        out[3] = Some(t.i2);
    }
    if opts.quantifiers {
        let q = quantifiers_from_moments(&mom)?;
        out[4] = q.r;
        out[5] = q.b;
        out[6] = q.s;
    }
    Ok(out)
}

/// Straight line `a·ϖ₁ + b·ϖ₂ = c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Line<T: Real> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Real> Line<T> {
    /// Euclidean distance of `(x, y)` to the line.
    pub fn distance(&self, x: T, y: T) -> T {
        (self.a * x + self.b * y - self.c).abs() / (self.a * self.a + self.b * self.b).sqrt()
    }
}

/// Geometric features of the detuned Heitler two-photon landscape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocusKind {
    /// Circle of exact antibunching.
    Circle,
    /// Divergent bunching lines `ϖ₁ = −1`, `ϖ₂ = −1`, `ϖ₁ + ϖ₂ = 0`.
    BunchingLines,
    /// Zeros of higher order `ϖ₁ = 1`, `ϖ₂ = 1`, `ϖ₁ + ϖ₂ = ±1`.
    SecondaryLines,
}

/// A locus in the `(ϖ₁, ϖ₂)` plane.
#[derive(Clone, Debug, PartialEq)]
pub enum Locus<T: Real> {
    Circle { center: (T, T), radius: T },
    Lines(Vec<Line<T>>),
}

impl<T: Real> Locus<T> {
    /// Distance of `(x, y)` to the nearest part of the locus.
    pub fn distance(&self, x: T, y: T) -> T {
        match self {
            Locus::Circle { center, radius } => {
                let (dx, dy) = (x - center.0, y - center.1);
                ((dx * dx + dy * dy).sqrt() - *radius).abs()
            }
            Locus::Lines(lines) => lines.iter().fold(T::lit(f64::INFINITY), |m, l| m.min(l.distance(x, y))),
        }
    }

    /// `n` points at equal angles on a circle, starting at angle `phase`.
    pub fn circle_points(&self, n: usize, phase: T) -> Option<Vec<(T, T)>> {
        let Locus::Circle { center, radius } = self else {
            return None;
        };
        let step = T::two_pi() / T::from_usize(n).unwrap();
        Some(
            (0..n)
                .map(|k| {
                    let t = phase + step * T::from_usize(k).unwrap();
                    (center.0 + *radius * t.cos(), center.1 + *radius * t.sin())
                })
                .collect(),
        )
    }
}

/// Parametric description of one family of landscape features.
pub fn feature_loci<T: Real>(kind: LocusKind) -> Locus<T> {
    let (z, o) = (T::zero(), T::one());
    let line = |a, b, c| Line { a, b, c };
    match kind {
        LocusKind::Circle => Locus::Circle { center: (-T::lit(0.5), -T::lit(0.5)), radius: T::lit(0.5).sqrt() },
        LocusKind::BunchingLines => Locus::Lines(vec![line(o, z, -o), line(z, o, -o), line(o, o, z)]),
        LocusKind::SecondaryLines => {
            Locus::Lines(vec![line(o, z, o), line(z, o, o), line(o, o, o), line(o, o, -o)])
        }
    }
}
