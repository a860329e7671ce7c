//! Physical models: driven two-level emitter, squeezed driven cavity,
//! frequency sensors and detection-side homodyning.
//!
//! Energies and rates are in units of the system decay rate. Sensors are
//! appended to the right of the signature as `s1`, `s2`, ….

use nalgebra::DMatrix;

use crate::algebra::{
    build_liouvillian, embed, identity, kron, lowering, Operator, OperatorMap, SpaceSignature, Superoperator,
};
use crate::error::{Error, Result};
use crate::scalar::{expi, i_unit, re, Real, C};

/// Resonance-fluorescence parameters: detuning Δσ, drive Ωσ (real), decay γσ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RFParams<T: Real> {
    pub delta_sigma: T,
    pub omega_sigma: T,
    pub gamma_sigma: T,
}

impl<T: Real> RFParams<T> {
    pub fn new(delta_sigma: T, omega_sigma: T, gamma_sigma: T) -> Result<Self> {
        let p = RFParams { delta_sigma, omega_sigma, gamma_sigma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_sigma > T::zero()) {
            return Err(Error::InvalidParameter("gamma_sigma must be positive".into()));
        }
        if !(self.omega_sigma >= T::zero()) {
            return Err(Error::InvalidParameter("omega_sigma must be non-negative".into()));
        }
        if !self.delta_sigma.is_finite() || !self.omega_sigma.is_finite() {
            return Err(Error::InvalidParameter("parameters must be finite".into()));
        }
        Ok(())
    }
}

/// Squeezed, coherently driven cavity.
///
/// `lambda_a` is the squeezing drive Λa (an energy); the dimensionless
/// λ = 2Λa/Γa with Γa = √(γa² + 4Δa²) is returned by [`CavityParams::lambda`].
/// `n_max` is the number of Fock levels kept.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityParams<T: Real> {
    pub delta_a: T,
    pub lambda_a: T,
    pub omega_a: T,
    pub theta_drive: T,
    pub gamma_a: T,
    pub n_max: usize,
}

impl<T: Real> CavityParams<T> {
    /// Γa = √(γa² + 4Δa²).
    pub fn big_gamma_a(&self) -> T {
        (self.gamma_a * self.gamma_a + T::lit(4.0) * self.delta_a * self.delta_a).sqrt()
    }

    /// Dimensionless squeezing λ = 2Λa/Γa.
    pub fn lambda(&self) -> T {
        T::lit(2.0) * self.lambda_a / self.big_gamma_a()
    }

    /// Phase-matched cavity at the optimum drive for the given λ.
    pub fn optimal(gamma_a: T, delta_a: T, lambda: T, n_max: usize) -> Result<Self> {
        let mut p = CavityParams { delta_a, lambda_a: T::zero(), omega_a: T::zero(), theta_drive: T::zero(), gamma_a, n_max };
        p.lambda_a = p.big_gamma_a() * lambda / T::lit(2.0);
        p.theta_drive = phase_matching_angle(&p);
        p.omega_a = optimum_drive(&p)?;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_a > T::zero()) {
            return Err(Error::InvalidParameter("gamma_a must be positive".into()));
        }
        if self.n_max < 2 {
            return Err(Error::InvalidParameter("n_max must be at least 2".into()));
        }
        if !(self.lambda_a >= T::zero()) {
            return Err(Error::InvalidParameter("lambda_a must be non-negative".into()));
        }
        let l = self.lambda();
        if !(l < T::one()) {
            return Err(Error::Unstable(l.as_f64()));
        }
        Ok(())
    }
}

/// Two frequency sensors of common width Γ and coupling ε.
///
/// `levels = 2` gives the usual two-level sensors. Quantifiers that need
/// `ς²` use three-level (truncated bosonic) sensors.
#[derive(Clone, Debug, PartialEq)]
pub struct SensorConfig<T: Real> {
    pub omega_1: T,
    pub omega_2: T,
    pub big_gamma: T,
    pub epsilon: T,
    pub levels: usize,
}

impl<T: Real> SensorConfig<T> {
    /// Two-level sensors with the default coupling `ε = 1e-3 · max(γ, Γ)`.
    pub fn new(omega_1: T, omega_2: T, big_gamma: T, system_rate: T) -> Self {
        SensorConfig { omega_1, omega_2, big_gamma, epsilon: default_epsilon(system_rate, big_gamma), levels: 2 }
    }

    pub fn with_levels(mut self, levels: usize) -> Self {
        self.levels = levels;
        self
    }

    pub fn with_epsilon(mut self, epsilon: T) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn at(&self, omega_1: T, omega_2: T) -> Self {
        SensorConfig { omega_1, omega_2, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.big_gamma > T::zero()) {
            return Err(Error::InvalidParameter("sensor width must be positive".into()));
        }
        if !(self.epsilon > T::zero()) {
            return Err(Error::InvalidParameter("sensor coupling must be positive".into()));
        }
        if self.levels < 2 {
            return Err(Error::InvalidParameter("sensors need at least two levels".into()));
        }
        Ok(())
    }
}

/// Default sensor coupling `1e-3 · max(system rate, Γ)`.
pub fn default_epsilon<T: Real>(system_rate: T, big_gamma: T) -> T {
    T::lit(1e-3) * system_rate.max(big_gamma)
}

/// One attached sensor.
#[derive(Clone, Debug, PartialEq)]
pub struct SensorInfo<T: Real> {
    pub label: String,
    pub omega: T,
    pub big_gamma: T,
    pub epsilon: T,
    pub levels: usize,
}

/// Hamiltonian, dissipators and labelled operators of one model.
#[derive(Clone, Debug)]
pub struct QuantumModel<T: Real> {
    signature: SpaceSignature,
    hamiltonian: Operator<T>,
    collapses: Vec<(Operator<T>, T)>,
    detection_op: Operator<T>,
    labeled_ops: OperatorMap<T>,
    bare_hamiltonian: Operator<T>,
    field_op: Operator<T>,
    homodyne_alpha: C<T>,
    sensors: Vec<SensorInfo<T>>,
    system_rate: T,
}

impl<T: Real> QuantumModel<T> {
    pub fn signature(&self) -> &SpaceSignature {
        &self.signature
    }

    pub fn hamiltonian(&self) -> &Operator<T> {
        &self.hamiltonian
    }

    pub fn collapses(&self) -> &[(Operator<T>, T)] {
        &self.collapses
    }

    /// Field the sensors couple to (including any homodyne displacement).
    pub fn detection_op(&self) -> &Operator<T> {
        &self.detection_op
    }

    /// Total homodyne amplitude added to the detected field.
    pub fn homodyne_alpha(&self) -> C<T> {
        self.homodyne_alpha
    }

    pub fn labeled_ops(&self) -> &OperatorMap<T> {
        &self.labeled_ops
    }

    pub fn op(&self, label: &str) -> Result<&Operator<T>> {
        self.labeled_ops.get(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn sensors(&self) -> &[SensorInfo<T>] {
        &self.sensors
    }

    /// Decay rate of the emitter or cavity.
    pub fn system_rate(&self) -> T {
        self.system_rate
    }

    /// Lowering operator of sensor `k` (0-based).
    pub fn sensor_op(&self, k: usize) -> Result<&Operator<T>> {
        let info = self
            .sensors
            .get(k)
            .ok_or_else(|| Error::InvalidParameter(format!("model has no sensor {}", k + 1)))?;
        self.op(&info.label)
    }

    /// Lindblad generator, balanced by the sensor excitation number when sensors are attached.
    pub fn liouvillian(&self) -> Result<Superoperator<T>> {
        let l = build_liouvillian(&self.hamiltonian, &self.collapses)?;
        if self.sensors.is_empty() {
            return Ok(l);
        }
        let d = self.signature.dim();
        let mut w = vec![T::one(); d];
        for info in &self.sensors {
            for (s, ws) in w.iter_mut().enumerate() {
                let k = self.signature.local_level(s, &info.label)?;
                *ws *= info.epsilon.powi(k as i32);
            }
        }
        l.with_balance(w)
    }

    fn coupled_hamiltonian(&self, detection: &Operator<T>) -> Result<Operator<T>> {
        let mut h = self.bare_hamiltonian.clone();
        let dd = detection.adjoint();
        for info in &self.sensors {
            let s = self.op(&info.label)?;
            let coupling = dd.mul(s)?.add(&s.adjoint().mul(detection)?)?;
            h = h.add(&coupling.scale(re(info.epsilon)))?;
        }
        Ok(h)
    }
}

fn hermitian_check<T: Real>(h: &Operator<T>) -> Result<()> {
    let defect = h.hermiticity_defect();
    if !(defect <= T::lit(1e-12).max(T::default_epsilon() * T::lit(100.0))) {
        return Err(Error::InvalidParameter(format!("Hamiltonian not Hermitian (defect {:e})", defect.as_f64())));
    }
    Ok(())
}

fn single_mode_model<T: Real>(label: &str, dim: usize, h: DMatrix<C<T>>, rate: T) -> Result<QuantumModel<T>> {
    let sig = SpaceSignature::new(vec![(label, dim)])?;
    let hamiltonian = Operator::from_dense(sig.clone(), &h)?;
    hermitian_check(&hamiltonian)?;
    let a = embed(&lowering(dim), label, &sig)?;
    let mut labeled_ops = OperatorMap::new();
    labeled_ops.insert(label.to_string(), a.clone());
    Ok(QuantumModel {
        signature: sig,
        bare_hamiltonian: hamiltonian.clone(),
        hamiltonian,
        collapses: vec![(a.clone(), rate)],
        detection_op: a.clone(),
        field_op: a,
        labeled_ops,
        homodyne_alpha: re(T::zero()),
        sensors: Vec::new(),
        system_rate: rate,
    })
}

/// Driven two-level system `H = Δσ σ†σ + Ωσ(σ† + σ)` with decay `(σ, γσ)`.
pub fn resonance_fluorescence<T: Real>(p: &RFParams<T>) -> Result<QuantumModel<T>> {
    p.validate()?;
    let s = lowering::<T>(2);
    let sd = s.adjoint();
    let h = &sd * &s * re(p.delta_sigma) + (&sd + &s) * re(p.omega_sigma);
    single_mode_model("sigma", 2, h, p.gamma_sigma)
}

/// Squeezed driven cavity
/// `H = Δa a†a + i(Λa/2)(a†² − a²) + Ωa(e^{iϑ}a† + e^{−iϑ}a)` with decay `(a, γa)`.
pub fn squeezed_cavity<T: Real>(p: &CavityParams<T>) -> Result<QuantumModel<T>> {
    p.validate()?;
    let n = p.n_max;
    let a = lowering::<T>(n);
    let ad = a.adjoint();
    let half = T::lit(0.5);
    let h = &ad * &a * re(p.delta_a)
        + (&ad * &ad - &a * &a) * (i_unit::<T>() * re(p.lambda_a * half))
        + &ad * (expi(p.theta_drive) * re(p.omega_a))
        + &a * (expi(-p.theta_drive) * re(p.omega_a));
    single_mode_model("a", n, h, p.gamma_a)
}

/// Branch ϑ = ½·atan2(2Δa, γa) of the phase-matching condition tan 2ϑ = 2Δa/γa.
pub fn phase_matching_angle<T: Real>(p: &CavityParams<T>) -> T {
    T::lit(0.5) * (T::lit(2.0) * p.delta_a).atan2(p.gamma_a)
}

/// Drive minimizing g²a(0): Ω = Γa√(λ/2)(1+λ) / (2(1−λ)).
pub fn optimum_drive<T: Real>(p: &CavityParams<T>) -> Result<T> {
    let l = p.lambda();
    if !(l < T::one()) || l < T::zero() {
        return Err(Error::Unstable(l.as_f64()));
    }
    let two = T::lit(2.0);
    Ok(p.big_gamma_a() * (l / two).sqrt() * (T::one() + l) / (two * (T::one() - l)))
}

/// Appends two sensors at `ω₁`, `ω₂` coupled to the detection field.
pub fn attach_sensors<T: Real>(m: &QuantumModel<T>, s: &SensorConfig<T>) -> Result<QuantumModel<T>> {
    s.validate()?;
    let m1 = attach_sensor(m, s.omega_1, s.big_gamma, s.epsilon, s.levels)?;
    attach_sensor(&m1, s.omega_2, s.big_gamma, s.epsilon, s.levels)
}

/// Appends one sensor `ς` with `H += ω ς†ς + ε(d†ς + ς†d)` and decay `(ς, Γ)`.
pub fn attach_sensor<T: Real>(
    m: &QuantumModel<T>,
    omega: T,
    big_gamma: T,
    epsilon: T,
    levels: usize,
) -> Result<QuantumModel<T>> {
    SensorConfig { omega_1: omega, omega_2: omega, big_gamma, epsilon, levels }.validate()?;
    let label = format!("s{}", m.sensors.len() + 1);
    let sig = m.signature.extend(label.clone(), levels)?;
    let grow = |op: &Operator<T>| -> Result<Operator<T>> {
        let id = crate::algebra::dense_to_csr(&identity::<T>(levels));
        Operator::from_csr(sig.clone(), kron(op.matrix(), &id))
    };
    let s = embed(&lowering(levels), &label, &sig)?;
    let mut labeled_ops = OperatorMap::new();
    for (k, op) in &m.labeled_ops {
        labeled_ops.insert(k.clone(), grow(op)?);
    }
    labeled_ops.insert(label.clone(), s.clone());
    let mut collapses = Vec::with_capacity(m.collapses.len() + 1);
    for (c, g) in &m.collapses {
        collapses.push((grow(c)?, *g));
    }
    collapses.push((s.clone(), big_gamma));
    let bare = grow(&m.bare_hamiltonian)?.add(&s.adjoint().mul(&s)?.scale(re(omega)))?;
    let mut sensors = m.sensors.clone();
    sensors.push(SensorInfo { label, omega, big_gamma, epsilon, levels });

    let mut out = QuantumModel {
        signature: sig.clone(),
        hamiltonian: bare.clone(),
        collapses,
        detection_op: grow(&m.detection_op)?,
        labeled_ops,
        bare_hamiltonian: bare,
        field_op: grow(&m.field_op)?,
        homodyne_alpha: m.homodyne_alpha,
        sensors,
        system_rate: m.system_rate,
    };
    out.hamiltonian = out.coupled_hamiltonian(&out.detection_op)?;
    hermitian_check(&out.hamiltonian)?;
    Ok(out)
}

/// Displaces the detected field `d → α + d` without touching the system dynamics.
///
/// Sensor couplings are rebuilt from the displaced field. Amplitudes
/// accumulate, so `homodyne(homodyne(m, α), −α)` restores `m` exactly.
pub fn homodyne<T: Real>(m: &QuantumModel<T>, alpha: C<T>) -> Result<QuantumModel<T>> {
    let total = m.homodyne_alpha + alpha;
    let detection = if total.re == T::zero() && total.im == T::zero() {
        m.field_op.clone()
    } else {
        m.field_op.add(&Operator::identity(&m.signature).scale(total))?
    };
    let mut out = m.clone();
    out.homodyne_alpha = total;
    out.hamiltonian = out.coupled_hamiltonian(&detection)?;
    out.detection_op = detection;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rf() -> QuantumModel<f64> {
        resonance_fluorescence(&RFParams::new(0.0, 0.1, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn sensors_extend_dimension() {
        let s = SensorConfig::new(0.0, 0.0, 2.0, 1.0);
        assert_eq!(attach_sensors(&rf(), &s).unwrap().signature().dim(), 8);
        let cav = squeezed_cavity(&CavityParams::optimal(1.0, 80.1, 0.001, 15).unwrap()).unwrap();
        assert_eq!(attach_sensors(&cav, &s).unwrap().signature().dim(), 60);
    }

    #[test]
    fn phase_matching_examples() {
        let mut p = CavityParams { delta_a: 0.0, lambda_a: 0.0, omega_a: 0.0, theta_drive: 0.0, gamma_a: 1.0, n_max: 4 };
        assert_eq!(phase_matching_angle(&p), 0.0);
        p.delta_a = 1e12;
        assert_relative_eq!(phase_matching_angle(&p), std::f64::consts::FRAC_PI_4, epsilon = 1e-12);
        p.delta_a = 80.1;
        // ½·atan2(160.2, 1) = ½(π/2 − atan(1/160.2))
        assert_relative_eq!(phase_matching_angle(&p), 0.782277105, epsilon = 1e-9);
    }

    #[test]
    fn optimum_drive_examples() {
        let p = CavityParams::optimal(1.0, 80.1, 0.0, 4).unwrap();
        assert_eq!(p.omega_a, 0.0);
        let p = CavityParams::optimal(1.0, 80.1, 0.001, 4).unwrap();
        // Γa = √(1 + 4·80.1²) = 160.2031…, Γa·√0.0005·1.001/1.998
        assert_relative_eq!(p.omega_a, 1.794711, epsilon = 1e-6);
        let small = CavityParams::optimal(1.0, 80.1, 1e-8, 4).unwrap();
        let asym = small.big_gamma_a() / 2.0 * (1e-8f64 / 2.0).sqrt();
        assert_relative_eq!(small.omega_a, asym, max_relative = 1e-7);
    }

    #[test]
    fn unstable_cavity_is_rejected() {
        let p = CavityParams { delta_a: 0.0, lambda_a: 0.6, omega_a: 0.0, theta_drive: 0.0, gamma_a: 1.0, n_max: 4 };
        assert!(matches!(squeezed_cavity(&p), Err(Error::Unstable(_))));
        assert!(optimum_drive(&p).is_err());
    }

    #[test]
    fn homodyne_round_trip_restores_detection() {
        let s = SensorConfig::new(0.3, -0.2, 2.0, 1.0);
        let m = attach_sensors(&rf(), &s).unwrap();
        let alpha = C::new(0.013, -0.27);
        let back = homodyne(&homodyne(&m, alpha).unwrap(), -alpha).unwrap();
        assert_eq!(back.detection_op().to_dense(), m.detection_op().to_dense());
        assert_eq!(back.hamiltonian().to_dense(), m.hamiltonian().to_dense());
        let same = homodyne(&m, C::new(0.0, 0.0)).unwrap();
        assert_eq!(same.hamiltonian().to_dense(), m.hamiltonian().to_dense());
    }

    #[test]
    fn homodyne_leaves_system_dynamics_alone() {
        let m = rf();
        let h = homodyne(&m, C::new(0.5, 0.5)).unwrap();
        assert_eq!(h.hamiltonian().to_dense(), m.hamiltonian().to_dense());
        assert_ne!(h.detection_op().to_dense(), m.detection_op().to_dense());
    }
}
