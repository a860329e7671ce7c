//! Displaced one- and two-mode squeezed states.
//!
//! States are built in a truncated two-mode Fock space by exponentiating the
//! displacement and squeezing generators; their moments are the brute-force
//! reference for the leading-order formulas in the scaled parametrization
//! `α → εα`, `ξ → ε²ξ`, `ζ → ε²ζ`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use crate::algebra::{embed, lowering, Operator, SpaceSignature};
use crate::error::{Error, Result};
use crate::linalg::Propagator;
use crate::scalar::{cabs, cabs2, carg, expi, re, Real, C};
use crate::steadystate::DensityMatrix;
use crate::twophoton::{interference_fluctuation_form, interference_full_state, InterferenceTerms, SensorMoments};

/// Default number of Fock levels per mode.
pub const DEFAULT_N_MAX: usize = 12;

/// Largest population accepted in the top Fock level of either mode.
pub const LEAKAGE_LIMIT: f64 = 1e-10;

/// Coherent amplitudes, single-mode squeezing `ξᵢ = rᵢe^{iθᵢ}` and two-mode
/// squeezing `ζ = t e^{iϑ}`, before scaling by `epsilon`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaussianParams<T: Real> {
    pub alpha1: C<T>,
    pub alpha2: C<T>,
    pub r1: T,
    pub theta1: T,
    pub r2: T,
    pub theta2: T,
    pub t12: T,
    pub vartheta12: T,
    pub epsilon: T,
}

impl<T: Real> GaussianParams<T> {
    /// All amplitudes zero, `ε = 1`.
    pub fn vacuum() -> Self {
        let z = T::zero();
        GaussianParams {
            alpha1: re(z),
            alpha2: re(z),
            r1: z,
            theta1: z,
            r2: z,
            theta2: z,
            t12: z,
            vartheta12: z,
            epsilon: T::one(),
        }
    }

    pub fn with_epsilon(mut self, epsilon: T) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r1 >= T::zero() && self.r2 >= T::zero() && self.t12 >= T::zero()) {
            return Err(Error::InvalidParameter("squeezing magnitudes must be non-negative".into()));
        }
        if !(self.epsilon > T::zero()) {
            return Err(Error::InvalidParameter("epsilon must be positive".into()));
        }
        Ok(())
    }

    /// Effective `(α₁, α₂, ξ₁, ξ₂, ζ)` after scaling.
    #[allow(clippy::type_complexity)]
    pub fn scaled(&self) -> (C<T>, C<T>, C<T>, C<T>, C<T>) {
        let e = self.epsilon;
        let e2 = e * e;
        (
            self.alpha1 * re(e),
            self.alpha2 * re(e),
            expi(self.theta1) * re(e2 * self.r1),
            expi(self.theta2) * re(e2 * self.r2),
            expi(self.vartheta12) * re(e2 * self.t12),
        )
    }

    /// Random draw with `|αᵢ| ∈ [0.5, 1.5]`, `rᵢ, t ∈ [0, 1)` and uniform phases.
    pub fn random<R: Rng>(rng: &mut R, epsilon: T) -> Self {
        let pi = std::f64::consts::PI;
        let mut phase = || T::lit(rng.gen_range(-pi..pi));
        let (p1, p2, th1, th2, vt) = (phase(), phase(), phase(), phase(), phase());
        GaussianParams {
            alpha1: expi(p1) * re(T::lit(rng.gen_range(0.5..1.5))),
            alpha2: expi(p2) * re(T::lit(rng.gen_range(0.5..1.5))),
            r1: T::lit(rng.gen_range(0.0..1.0)),
            theta1: th1,
            r2: T::lit(rng.gen_range(0.0..1.0)),
            theta2: th2,
            t12: T::lit(rng.gen_range(0.0..1.0)),
            vartheta12: vt,
            epsilon,
        }
    }
}

/// Bogoliubov coefficients of the squeezers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bogoliubov<T: Real> {
    pub mu1: T,
    pub nu1: C<T>,
    pub mu2: T,
    pub nu2: C<T>,
    pub m11: T,
    pub n12: C<T>,
}

/// `μᵢ = cosh rᵢ`, `νᵢ = e^{iθᵢ} sinh rᵢ`, `M₁₁ = cosh t`, `N₁₂ = e^{iϑ} sinh t` at the scaled magnitudes.
pub fn bogoliubov_coefficients<T: Real>(p: &GaussianParams<T>) -> Bogoliubov<T> {
    let e2 = p.epsilon * p.epsilon;
    let (r1, r2, t) = (e2 * p.r1, e2 * p.r2, e2 * p.t12);
    Bogoliubov {
        mu1: r1.cosh(),
        nu1: expi(p.theta1) * re(r1.sinh()),
        mu2: r2.cosh(),
        nu2: expi(p.theta2) * re(r2.sinh()),
        m11: t.cosh(),
        n12: expi(p.vartheta12) * re(t.sinh()),
    }
}

/// Pure state of two truncated modes `a1`, `a2`.
#[derive(Clone, Debug)]
pub struct GaussianState<T: Real> {
    signature: SpaceSignature,
    psi: DVector<C<T>>,
    a1: Operator<T>,
    a2: Operator<T>,
}

impl<T: Real> GaussianState<T> {
    pub fn psi(&self) -> &DVector<C<T>> {
        &self.psi
    }

    pub fn signature(&self) -> &SpaceSignature {
        &self.signature
    }

    /// Lowering operators of the two modes.
    pub fn modes(&self) -> (&Operator<T>, &Operator<T>) {
        (&self.a1, &self.a2)
    }

    pub fn density_matrix(&self) -> Result<DensityMatrix<T>> {
        DensityMatrix::from_pure(self.signature.clone(), &self.psi)
    }

    /// Population of the top Fock level of either mode.
    pub fn leakage(&self) -> T {
        let n = self.signature.subsystems()[0].1;
        let mut leak = T::zero();
        for (k, z) in self.psi.iter().enumerate() {
            if k / n == n - 1 || k % n == n - 1 {
                leak += cabs2(*z);
            }
        }
        leak
    }
}

/// Two-mode space with lowering operators `a1`, `a2` of `n_max` levels each.
pub fn two_mode_space<T: Real>(n_max: usize) -> Result<(SpaceSignature, Operator<T>, Operator<T>)> {
    if n_max < 2 {
        return Err(Error::InvalidParameter("n_max must be at least 2".into()));
    }
    let sig = SpaceSignature::new(vec![("a1", n_max), ("a2", n_max)])?;
    let a1 = embed(&lowering(n_max), "a1", &sig)?;
    let a2 = embed(&lowering(n_max), "a2", &sig)?;
    Ok((sig, a1, a2))
}

/// Generator `α a† − α* a` of the displacement.
fn displacement_generator<T: Real>(a: &Operator<T>, alpha: C<T>) -> Result<Operator<T>> {
    a.adjoint().scale(alpha).add(&a.scale(-alpha.conj()))
}

/// Generator `½(ξ* a² − ξ a†²)` of the single-mode squeezer.
fn squeezer_generator<T: Real>(a: &Operator<T>, xi: C<T>) -> Result<Operator<T>> {
    let ad = a.adjoint();
    let half = re(T::lit(0.5));
    a.mul(a)?.scale(xi.conj() * half).add(&ad.mul(&ad)?.scale(-xi * half))
}

/// Generator `ζ* a₁a₂ − ζ a₁†a₂†` of the two-mode squeezer.
fn two_mode_generator<T: Real>(a1: &Operator<T>, a2: &Operator<T>, zeta: C<T>) -> Result<Operator<T>> {
    a1.mul(a2)?.scale(zeta.conj()).add(&a1.adjoint().mul(&a2.adjoint())?.scale(-zeta))
}

/// `exp(α a† − α* a)` on the given mode.
pub fn displacement<T: Real>(a: &Operator<T>, alpha: C<T>) -> DMatrix<C<T>> {
    displacement_generator(a, alpha).expect("operators share a space").to_dense().exp()
}

/// `exp(½(ξ* a² − ξ a†²))` on the given mode.
pub fn single_mode_squeezer<T: Real>(a: &Operator<T>, xi: C<T>) -> DMatrix<C<T>> {
    squeezer_generator(a, xi).expect("operators share a space").to_dense().exp()
}

/// `exp(ζ* a₁a₂ − ζ a₁†a₂†)`, which gives `⟨a₁a₂⟩ ≈ −ζ` on vacuum.
pub fn two_mode_squeezer<T: Real>(a1: &Operator<T>, a2: &Operator<T>, zeta: C<T>) -> DMatrix<C<T>> {
    two_mode_generator(a1, a2, zeta).expect("operators share a space").to_dense().exp()
}

/// `exp(G) ψ` by sparse Taylor stepping.
fn apply_exp<T: Real>(generator: &Operator<T>, psi: &DVector<C<T>>) -> Result<DVector<C<T>>> {
    Propagator::stepping(generator.matrix()).advance(psi, T::one())
}

/// `D₁D₂ S₁⁽¹⁾S₁⁽²⁾ S₂⁽¹²⁾|00⟩` in a space of `n_max` levels per mode.
///
/// Fails if the top Fock level holds more than [`LEAKAGE_LIMIT`].
pub fn build_state<T: Real>(p: &GaussianParams<T>, n_max: usize) -> Result<GaussianState<T>> {
    p.validate()?;
    let (sig, a1, a2) = two_mode_space::<T>(n_max)?;
    let (al1, al2, xi1, xi2, zeta) = p.scaled();
    let d = sig.dim();
    let mut psi = DVector::from_element(d, re(T::zero()));
    psi[0] = re(T::one());
    psi = apply_exp(&two_mode_generator(&a1, &a2, zeta)?, &psi)?;
    psi = apply_exp(&squeezer_generator(&a2, xi2)?, &psi)?;
    psi = apply_exp(&squeezer_generator(&a1, xi1)?, &psi)?;
    psi = apply_exp(&displacement_generator(&a2, al2)?, &psi)?;
    psi = apply_exp(&displacement_generator(&a1, al1)?, &psi)?;
    let norm = psi.norm();
    psi /= re(norm);
    let state = GaussianState { signature: sig, psi, a1, a2 };
    let leak = state.leakage();
    if !(leak <= T::lit(LEAKAGE_LIMIT)) {
        return Err(Error::TruncationLeakage(leak.as_f64()));
    }
    Ok(state)
}

/// Populations, anomalous moments and second-order correlations of two modes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentSet<T: Real> {
    pub n1: T,
    pub n2: T,
    pub a1sq: C<T>,
    pub a2sq: C<T>,
    pub a1a2: C<T>,
    pub g2_1: T,
    pub g2_2: T,
    pub g2_12: T,
}

fn mode_moments<T: Real>(state: &GaussianState<T>) -> Result<SensorMoments<T>> {
    SensorMoments::compute(&state.density_matrix()?, &state.a1, &state.a2, true)
}

/// Moments of the truncated state.
pub fn moments_exact<T: Real>(state: &GaussianState<T>) -> Result<MomentSet<T>> {
    let rho = state.density_matrix()?;
    let m = SensorMoments::compute(&rho, &state.a1, &state.a2, true)?;
    let h = m.higher.expect("higher moments requested");
    let a1sq = crate::algebra::expectation(&rho, &[&state.a1, &state.a1])?;
    let a2sq = crate::algebra::expectation(&rho, &[&state.a2, &state.a2])?;
    let ratio = |num: T, den: T| if den > T::zero() { num / den } else { T::zero() };
    Ok(MomentSet {
        n1: m.n1,
        n2: m.n2,
        a1sq,
        a2sq,
        a1a2: m.pair,
        g2_1: ratio(h.auto1, m.n1 * m.n1),
        g2_2: ratio(h.auto2, m.n2 * m.n2),
        g2_12: ratio(m.cross, m.n1 * m.n2),
    })
}

/// Leading order in `ε` of the moments.
///
/// With both amplitudes zero the squeezed-vacuum forms apply:
/// `nᵢ ≈ ε⁴(rᵢ² + t²)`, `g²ᵢ ≈ rᵢ²/((rᵢ² + t²)²ε⁴)`,
/// `g²₁₂ ≈ t²/((r₁² + t²)(r₂² + t²)ε⁴)`. Otherwise
/// `g²ᵢ ≈ 1 − 2rᵢcos(2φᵢ − θᵢ)/|αᵢ|² + rᵢ²/|αᵢ|⁴` and
/// `g²₁₂ ≈ 1 − 2t cos(φ₁ + φ₂ − ϑ)/(|α₁||α₂|) + t²/(|α₁|²|α₂|²)`.
pub fn moments_leading_order<T: Real>(p: &GaussianParams<T>) -> MomentSet<T> {
    let e = p.epsilon;
    let e2 = e * e;
    let e4 = e2 * e2;
    let (xi1, xi2, zeta) = (expi(p.theta1) * re(p.r1), expi(p.theta2) * re(p.r2), expi(p.vartheta12) * re(p.t12));
    let t2 = p.t12 * p.t12;
    let (q1, q2) = (p.r1 * p.r1 + t2, p.r2 * p.r2 + t2);
    let (m1, m2) = (cabs(p.alpha1), cabs(p.alpha2));
    if m1 == T::zero() && m2 == T::zero() {
        return MomentSet {
            n1: e4 * q1,
            n2: e4 * q2,
            a1sq: -xi1 * re(e2),
            a2sq: -xi2 * re(e2),
            a1a2: -zeta * re(e2),
            g2_1: p.r1 * p.r1 / (q1 * q1 * e4),
            g2_2: p.r2 * p.r2 / (q2 * q2 * e4),
            g2_12: t2 / (q1 * q2 * e4),
        };
    }
    let (f1, f2) = (carg(p.alpha1), carg(p.alpha2));
    let two = T::lit(2.0);
    let single = |r: T, th: T, m: T, f: T| T::one() - two * r * (two * f - th).cos() / (m * m) + r * r / (m * m * m * m);
    MomentSet {
        n1: e2 * m1 * m1,
        n2: e2 * m2 * m2,
        a1sq: (p.alpha1 * p.alpha1 - xi1) * re(e2),
        a2sq: (p.alpha2 * p.alpha2 - xi2) * re(e2),
        a1a2: (p.alpha1 * p.alpha2 - zeta) * re(e2),
        g2_1: single(p.r1, p.theta1, m1, f1),
        g2_2: single(p.r2, p.theta2, m2, f2),
        g2_12: T::one() - two * p.t12 * (f1 + f2 - p.vartheta12).cos() / (m1 * m2) + t2 / (m1 * m1 * m2 * m2),
    }
}

/// Leading-order interference terms: `I₀ ≈ t²/(|α₁|²|α₂|²)`,
/// `I₂ ≈ −2t cos(φ₁ + φ₂ − ϑ)/(|α₁||α₂|)`, `I₁ = 0`.
pub fn decomposition_leading_order<T: Real>(p: &GaussianParams<T>) -> Result<InterferenceTerms<T>> {
    let (m1, m2) = (cabs(p.alpha1), cabs(p.alpha2));
    if m1 == T::zero() || m2 == T::zero() {
        return Err(Error::InvalidParameter("both coherent amplitudes must be nonzero".into()));
    }
    let phase = carg(p.alpha1) + carg(p.alpha2) - p.vartheta12;
    Ok(InterferenceTerms {
        i0: p.t12 * p.t12 / (m1 * m1 * m2 * m2),
        i1: T::zero(),
        i2: -T::lit(2.0) * p.t12 * phase.cos() / (m1 * m2),
    })
}

/// `g²₁₂` and its interference terms for the truncated state, with `αᵢ = ⟨aᵢ⟩`.
pub fn decomposition_exact<T: Real>(state: &GaussianState<T>) -> Result<(T, InterferenceTerms<T>)> {
    let m = mode_moments(state)?;
    Ok((m.g2(), interference_full_state(&m, (m.mean1, m.mean2))))
}

/// Largest difference between the fluctuation-form and full-state-form terms.
///
/// The two agree identically when `alphas` are the mean fields of the state.
pub fn fluctuation_split_check<T: Real>(state: &GaussianState<T>, alphas: (C<T>, C<T>)) -> Result<T> {
    let rho = state.density_matrix()?;
    let m = SensorMoments::compute(&rho, &state.a1, &state.a2, false)?;
    let full = interference_full_state(&m, alphas);
    let fl = interference_fluctuation_form(&rho, &state.a1, &state.a2, alphas)?;
    Ok((full.i0 - fl.i0).abs().max((full.i1 - fl.i1).abs()).max((full.i2 - fl.i2).abs()))
}

/// Relative discrepancies `|exact/leading − 1|` of `(g²₁, g²₂, g²₁₂)` at `ε` and `ε/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow<T: Real> {
    pub epsilon: T,
    pub coarse: [T; 3],
    pub fine: [T; 3],
}

impl<T: Real> ConvergenceRow<T> {
    /// Coarse over fine discrepancy per channel, about 4 for an `O(ε²)` error.
    pub fn ratios(&self) -> [T; 3] {
        [0, 1, 2].map(|k| self.coarse[k] / self.fine[k])
    }

    /// Coarse over fine discrepancy of the whole moment set, in the max norm.
    pub fn ratio(&self) -> T {
        let max = |v: &[T; 3]| v.iter().fold(T::zero(), |m, x| m.max(*x));
        max(&self.coarse) / max(&self.fine)
    }
}

/// Compares exact and leading-order `g²` values at `p.epsilon` and half of it.
pub fn convergence_row<T: Real>(p: &GaussianParams<T>, n_max: usize) -> Result<ConvergenceRow<T>> {
    let gap = |q: &GaussianParams<T>| -> Result<[T; 3]> {
        let ex = moments_exact(&build_state(q, n_max)?)?;
        let lo = moments_leading_order(q);
        Ok([ex.g2_1 / lo.g2_1, ex.g2_2 / lo.g2_2, ex.g2_12 / lo.g2_12].map(|x| (x - T::one()).abs()))
    };
    let coarse = gap(p)?;
    let fine = gap(&p.with_epsilon(p.epsilon * T::lit(0.5)))?;
    Ok(ConvergenceRow { epsilon: p.epsilon, coarse, fine })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cplx, max_abs};
    use approx::assert_relative_eq;

    #[test]
    fn sparse_build_matches_dense_exponentials() {
        let p = GaussianParams {
            alpha1: cplx(0.9, -0.4),
            alpha2: cplx(-0.2, 1.1),
            r1: 0.7,
            theta1: 0.4,
            r2: 0.3,
            theta2: -2.0,
            t12: 0.8,
            vartheta12: 1.3,
            epsilon: 0.3,
        };
        let st = build_state(&p, DEFAULT_N_MAX).unwrap();
        let (al1, al2, xi1, xi2, zeta) = p.scaled();
        let (a1, a2) = st.modes();
        let mut psi = DVector::from_element(st.signature().dim(), re(0.0));
        psi[0] = re(1.0);
        let psi = displacement(a1, al1)
            * displacement(a2, al2)
            * single_mode_squeezer(a1, xi1)
            * single_mode_squeezer(a2, xi2)
            * two_mode_squeezer(a1, a2, zeta)
            * psi;
        let diff: Vec<_> = (st.psi() - &psi / re(psi.norm())).iter().copied().collect();
        assert!(max_abs(&diff) < 1e-12);
    }

    #[test]
    fn bogoliubov_examples() {
        let b = bogoliubov_coefficients(&GaussianParams::<f64>::vacuum());
        assert_eq!((b.mu1, b.m11, b.nu1, b.n12), (1.0, 1.0, re(0.0), re(0.0)));
        let p = GaussianParams { r1: 0.3, theta1: std::f64::consts::FRAC_PI_2, ..GaussianParams::vacuum() };
        let b = bogoliubov_coefficients(&p);
        assert!(b.nu1.re.abs() < 1e-16);
        assert_relative_eq!(b.nu1.im, 0.304520, epsilon = 1e-6);
        assert_relative_eq!(b.mu1 * b.mu1 - cabs2(b.nu1), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn vacuum_state_is_ground_state() {
        let s = build_state(&GaussianParams::<f64>::vacuum(), 6).unwrap();
        assert_relative_eq!(s.psi()[0].re, 1.0, epsilon = 1e-15);
        let m = moments_exact(&s).unwrap();
        assert!(m.n1.abs() < 1e-30 && m.n2.abs() < 1e-30 && cabs(m.a1a2) < 1e-15);
    }

    #[test]
    fn leakage_is_reported() {
        let p = GaussianParams { alpha1: re(2.0), ..GaussianParams::vacuum() };
        assert!(matches!(build_state(&p, 6), Err(Error::TruncationLeakage(_))));
    }

    #[test]
    fn single_mode_squeezers_commute() {
        let (_, a1, a2) = two_mode_space::<f64>(8).unwrap();
        let s1 = single_mode_squeezer(&a1, C::new(0.1, 0.05));
        let s2 = single_mode_squeezer(&a2, C::new(-0.07, 0.02));
        assert!(max_abs((&s1 * &s2 - &s2 * &s1).iter()) < 1e-15);
    }
}
