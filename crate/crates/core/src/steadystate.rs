//! Stationary states of Liouvillians and two-time correlations.
//!
//! The kernel of `L` is found by replacing one row of the linear system.
//! Dense solves use the trace functional as that row. Banded solves pin
//! `ρ₀₀ = 1` instead (a trace row would destroy the band) and normalize
//! afterwards; the two are equivalent because every diagonal row of `L` is
//! minus the sum of the other diagonal rows.

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};

use crate::algebra::{unvec, vec_of, Operator, SpaceSignature, Superoperator};
use crate::error::{Error, Result};
use crate::linalg::{banded_solve, dense_solve, prefer_banded, Propagator};
use crate::models::{QuantumModel, SensorConfig};
use crate::scalar::{cabs, re, Real, C};

/// Density matrix on a composite space.
#[derive(Clone, Debug)]
pub struct DensityMatrix<T: Real> {
    signature: SpaceSignature,
    matrix: DMatrix<C<T>>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(signature: SpaceSignature, matrix: DMatrix<C<T>>) -> Result<Self> {
        let d = signature.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!("density matrix must be {d}x{d}")));
        }
        Ok(DensityMatrix { signature, matrix })
    }

    /// Pure state `|ψ⟩⟨ψ|`.
    pub fn from_pure(signature: SpaceSignature, psi: &DVector<C<T>>) -> Result<Self> {
        Self::new(signature, psi * psi.adjoint())
    }

    pub fn signature(&self) -> &SpaceSignature {
        &self.signature
    }

    pub fn matrix(&self) -> &DMatrix<C<T>> {
        &self.matrix
    }

    pub fn trace(&self) -> C<T> {
        self.matrix.trace()
    }

    /// Largest entry of `ρ − ρ†`.
    pub fn hermiticity_defect(&self) -> T {
        (&self.matrix - self.matrix.adjoint()).iter().fold(T::zero(), |m, z| m.max(cabs(*z)))
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> T {
        let h = (&self.matrix + self.matrix.adjoint()) * re(T::lit(0.5));
        h.symmetric_eigenvalues().iter().fold(T::max_value().unwrap(), |m, x| m.min(*x))
    }

    /// Checks hermiticity, unit trace and positivity at the given tolerances.
    pub fn validate(&self, herm_tol: T, trace_tol: T, pos_tol: T) -> Result<()> {
        let h = self.hermiticity_defect();
        if !(h <= herm_tol) {
            return Err(Error::InvalidState(format!("hermiticity (defect {:e})", h.as_f64())));
        }
        let t = self.trace();
        if !(cabs(t - re(T::one())) <= trace_tol) {
            return Err(Error::InvalidState(format!("unit trace (trace {:e})", t.re.as_f64())));
        }
        let e = self.min_eigenvalue();
        if !(e >= -pos_tol) {
            return Err(Error::InvalidState(format!("positivity (min eigenvalue {:e})", e.as_f64())));
        }
        Ok(())
    }
}

/// Tolerances for the steady-state checks, floored by the scalar precision.
pub(crate) fn tol<T: Real>(base: f64) -> T {
    let eps = T::default_epsilon().as_f64();
    T::lit(base.max(1e5 * eps))
}

/// Residual `‖L vec(ρ)‖_∞`.
pub fn residual<T: Real>(l: &Superoperator<T>, rho: &DensityMatrix<T>) -> T {
    l.apply(&vec_of(rho.matrix())).iter().fold(T::zero(), |m, z| m.max(cabs(*z)))
}

/// Balanced generator `L' = Tvec⁻¹ L Tvec` and the vec weights `Tvec`.
fn balanced<T: Real>(l: &Superoperator<T>) -> (CsrMatrix<C<T>>, Option<Vec<T>>) {
    let Some(t) = l.balance() else {
        return (l.matrix().clone(), None);
    };
    let d = t.len();
    let tv: Vec<T> = (0..d * d).map(|k| t[k % d] * t[k / d]).collect();
    let mut coo = CooMatrix::new(d * d, d * d);
    for (r, c, v) in l.matrix().triplet_iter() {
        coo.push(r, c, *v * re(tv[c] / tv[r]));
    }
    (CsrMatrix::from(&coo), Some(tv))
}

/// Stationary state `L vec(ρ) = 0`, `Tr ρ = 1`.
///
/// The result is checked a posteriori: the residual must be below `1e-10`
/// and `ρ` must be Hermitian, unit-trace and positive within tolerance.
pub fn steady_state<T: Real>(l: &Superoperator<T>) -> Result<DensityMatrix<T>> {
    let d = l.hilbert_dim();
    let n = d * d;
    let (lp, tv) = balanced(l);
    let (kl, ku) = bandwidth(&lp);
    let zero = C::new(T::zero(), T::zero());
    let mut b = DVector::from_element(n, zero);
    b[0] = re(T::one());

    let y = if prefer_banded(n, kl, ku) {
        let pinned = lp.filter(|r, _, _| r != 0);
        let mut coo = CooMatrix::new(n, n);
        for (r, c, v) in pinned.triplet_iter() {
            coo.push(r, c, *v);
        }
        coo.push(0, 0, re(T::one()));
        banded_solve(&CsrMatrix::from(&coo), &b)?
    } else {
        let mut a = crate::algebra::csr_to_dense(&lp);
        a.row_mut(0).fill(zero);
        for i in 0..d {
            let w = tv.as_ref().map_or(T::one(), |tv| tv[i + d * i]);
            a[(0, i + d * i)] = re(w);
        }
        dense_solve(a, &b)?
    };

    let x = match &tv {
        Some(tv) => DVector::from_iterator(n, y.iter().zip(tv).map(|(z, w)| *z * re(*w))),
        None => y,
    };
    let mut m = unvec(&x, d);
    let tr = m.trace();
    if !(cabs(tr) > T::zero()) {
        return Err(Error::NonUniqueSteadyState("solution has zero trace".into()));
    }
    m /= tr;
    let rho = DensityMatrix::new(l.signature().clone(), m)?;

    let res = residual(l, &rho);
    if !(res <= tol::<T>(1e-10)) {
        return Err(Error::NonUniqueSteadyState(format!("residual {:e} above tolerance", res.as_f64())));
    }
    rho.validate(tol(1e-10), tol(1e-10), tol(1e-8))?;
    Ok(rho)
}

fn bandwidth<T: Real>(m: &CsrMatrix<C<T>>) -> (usize, usize) {
    let mut kl = 0;
    let mut ku = 0;
    for (r, c, _) in m.triplet_iter() {
        if r > c {
            kl = kl.max(r - c);
        } else {
            ku = ku.max(c - r);
        }
    }
    (kl, ku)
}

/// `vec(ρ)` evolved for each time of an ascending grid.
///
/// Uniform grids reuse a single cached step propagator.
pub fn propagate<T: Real>(l: &Superoperator<T>, x0: &DMatrix<C<T>>, tau_grid: &[T]) -> Result<Vec<DMatrix<C<T>>>> {
    check_grid(tau_grid)?;
    if tau_grid.is_empty() {
        return Ok(Vec::new());
    }
    let d = l.hilbert_dim();
    let (lp, tv) = balanced(l);
    let mut prop = Propagator::new(&lp);
    let scale_in = |v: DVector<C<T>>| match &tv {
        Some(tv) => DVector::from_iterator(v.len(), v.iter().zip(tv).map(|(z, w)| *z / re(*w))),
        None => v,
    };
    let scale_out = |v: &DVector<C<T>>| match &tv {
        Some(tv) => DVector::from_iterator(v.len(), v.iter().zip(tv).map(|(z, w)| *z * re(*w))),
        None => v.clone(),
    };

    let uniform_step = uniform_spacing(tau_grid);
    let mut y = prop.advance(&scale_in(vec_of(x0)), tau_grid[0])?;
    let mut out = Vec::with_capacity(tau_grid.len());
    out.push(unvec(&scale_out(&y), d));
    for k in 1..tau_grid.len() {
        let h = uniform_step.unwrap_or(tau_grid[k] - tau_grid[k - 1]);
        y = prop.advance(&y, h)?;
        out.push(unvec(&scale_out(&y), d));
    }
    Ok(out)
}

fn check_grid<T: Real>(tau_grid: &[T]) -> Result<()> {
    if tau_grid.iter().any(|t| !(*t >= T::zero())) {
        return Err(Error::InvalidParameter("delays must be non-negative".into()));
    }
    if tau_grid.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::InvalidParameter("delays must be ascending".into()));
    }
    Ok(())
}

/// Common spacing of a grid that is uniform to 1e-9 relative, if any.
fn uniform_spacing<T: Real>(grid: &[T]) -> Option<T> {
    if grid.len() < 3 {
        return None;
    }
    let n = T::from_usize(grid.len() - 1).unwrap();
    let h = (grid[grid.len() - 1] - grid[0]) / n;
    if h <= T::zero() {
        return None;
    }
    let ok = grid.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= T::lit(1e-9) * h);
    ok.then_some(h)
}

/// `G(τ) = ⟨A(0) B(τ) C(0)⟩ = Tr[B e^{Lτ}(C ρ A)]` in the stationary state.
pub fn two_time_correlator<T: Real>(
    l: &Superoperator<T>,
    rho_ss: &DensityMatrix<T>,
    a: &Operator<T>,
    b: &Operator<T>,
    c: &Operator<T>,
    tau_grid: &[T],
) -> Result<Vec<C<T>>> {
    for op in [a, b, c] {
        if op.signature() != rho_ss.signature() || op.signature() != l.signature() {
            return Err(Error::SignatureMismatch);
        }
    }
    let x0 = c.apply_left(&right_mul(rho_ss.matrix(), a));
    let states = propagate(l, &x0, tau_grid)?;
    Ok(states.iter().map(|x| b.apply_left(x).trace()).collect())
}

/// `X · A` for a dense `X` and sparse `A`.
pub(crate) fn right_mul<T: Real>(x: &DMatrix<C<T>>, a: &Operator<T>) -> DMatrix<C<T>> {
    // X A = (A† X†)†
    a.adjoint().apply_left(&x.adjoint()).adjoint()
}

/// Relative change `|o(ε) − o(ε/2)| / |o(ε)|` of a sensor observable.
///
/// Both observables equal to zero give a ratio of 0.
pub fn epsilon_independence_check<T, B, O>(build: B, s: &SensorConfig<T>, observable: O) -> Result<T>
where
    T: Real,
    B: Fn(&SensorConfig<T>) -> Result<QuantumModel<T>>,
    O: Fn(&QuantumModel<T>, &DensityMatrix<T>) -> Result<T>,
{
    let eval = |cfg: &SensorConfig<T>| -> Result<T> {
        let m = build(cfg)?;
        let rho = steady_state(&m.liouvillian()?)?;
        observable(&m, &rho)
    };
    let o1 = eval(s)?;
    let half = SensorConfig { epsilon: s.epsilon * T::lit(0.5), ..s.clone() };
    let o2 = eval(&half)?;
    if o1 == T::zero() && o2 == T::zero() {
        return Ok(T::zero());
    }
    if o1 == T::zero() {
        return Ok(T::max_value().unwrap());
    }
    Ok((o1 - o2).abs() / o1.abs())
}
