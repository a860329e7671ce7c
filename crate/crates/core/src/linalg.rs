//! Linear solves and matrix-exponential actions for Liouvillians.
//!
//! Dense LU and dense `exp` come from nalgebra. Banded Gaussian elimination
//! and the uniform-substep Taylor propagator are implemented here because
//! nalgebra offers neither for sparse complex matrices.

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::CsrMatrix;

use crate::algebra::csr_to_dense;
use crate::error::{Error, Result};
use crate::scalar::{cabs, Real, C};

/// Largest system solved with dense LU regardless of band structure.
pub const DENSE_SOLVE_MAX: usize = 1024;

/// Largest Liouvillian dimension propagated with a dense matrix exponential.
pub const DENSE_EXPM_MAX: usize = 1024;

/// Relative size of the last Taylor term accepted as converged.
const TAYLOR_TOL: f64 = 1e-17;

/// Upper bound on `‖hL‖₁` per Taylor substep.
const TAYLOR_THETA: f64 = 1.0;

/// Dense LU solve `A x = b`.
pub fn dense_solve<T: Real>(a: DMatrix<C<T>>, b: &DVector<C<T>>) -> Result<DVector<C<T>>> {
    let x = a
        .lu()
        .solve(b)
        .ok_or_else(|| Error::NonUniqueSteadyState("dense LU found an exactly singular pivot".into()))?;
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonUniqueSteadyState("dense LU produced non-finite values".into()));
    }
    Ok(x)
}

/// Row-major band storage with room for the fill-in of partial pivoting.
struct Band<T: Real> {
    n: usize,
    kl: usize,
    width: usize,
    data: Vec<C<T>>,
}

impl<T: Real> Band<T> {
    fn new(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Band { n, kl, width, data: vec![C::new(T::zero(), T::zero()); n * width] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    /// Last column that can be nonzero in row `i` after fill-in.
    #[inline]
    fn last_col(&self, i: usize) -> usize {
        (i + self.width - self.kl - 1).min(self.n - 1)
    }
}

/// Solves `A x = b` by banded Gaussian elimination with partial pivoting.
///
/// `A` is given in CSR form; the row-`pin` replacement used by the steady-state
/// solver keeps the band intact, unlike a dense trace row.
pub fn banded_solve<T: Real>(a: &CsrMatrix<C<T>>, b: &DVector<C<T>>) -> Result<DVector<C<T>>> {
    let n = a.nrows();
    let (mut kl, mut ku) = (0, 0);
    for (r, c, _) in a.triplet_iter() {
        if r > c {
            kl = kl.max(r - c);
        } else {
            ku = ku.max(c - r);
        }
    }
    let mut band = Band::new(n, kl, ku);
    for (r, c, v) in a.triplet_iter() {
        let k = band.idx(r, c);
        band.data[k] += *v;
    }
    let mut rhs = b.clone();
    let scale = band.data.iter().fold(T::zero(), |m, z| m.max(cabs(*z)));
    let tiny = scale * T::lit(1e-300f64.max(f64::MIN_POSITIVE));

    for k in 0..n {
        let last_row = (k + kl).min(n - 1);
        let mut p = k;
        let mut best = cabs(band.data[band.idx(k, k)]);
        for r in k + 1..=last_row {
            let v = cabs(band.data[band.idx(r, k)]);
            if v > best {
                best = v;
                p = r;
            }
        }
        if !(best > tiny) {
            return Err(Error::NonUniqueSteadyState(format!("banded elimination met a zero pivot at row {k}")));
        }
        let hi = band.last_col(k);
        if p != k {
            for j in k..=hi {
                let (ik, ip) = (band.idx(k, j), band.idx(p, j));
                band.data.swap(ik, ip);
            }
            rhs.swap_rows(k, p);
        }
        let pivot = band.data[band.idx(k, k)];
        for r in k + 1..=last_row {
            let irk = band.idx(r, k);
            let f = band.data[irk] / pivot;
            if f.re == T::zero() && f.im == T::zero() {
                continue;
            }
            band.data[irk] = C::new(T::zero(), T::zero());
            for j in k + 1..=hi {
                let u = band.data[band.idx(k, j)];
                let irj = band.idx(r, j);
                band.data[irj] -= f * u;
            }
            let bk = rhs[k];
            rhs[r] -= f * bk;
        }
    }
    for k in (0..n).rev() {
        let mut s = rhs[k];
        for j in k + 1..=band.last_col(k) {
            s -= band.data[band.idx(k, j)] * rhs[j];
        }
        rhs[k] = s / band.data[band.idx(k, k)];
    }
    if rhs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonUniqueSteadyState("banded elimination produced non-finite values".into()));
    }
    Ok(rhs)
}

/// Whether banded elimination beats dense LU for this pattern.
pub fn prefer_banded(n: usize, kl: usize, ku: usize) -> bool {
    if n <= DENSE_SOLVE_MAX {
        return false;
    }
    let dense = (n as f64).powi(3) / 3.0;
    let banded = n as f64 * kl as f64 * (2 * kl + ku + 1) as f64;
    2.0 * banded < dense
}

/// Propagator for `x ↦ exp(L t) x` under a fixed generator.
pub enum Propagator<T: Real> {
    /// Dense generator with a cache of `exp(L h)` for the last step size.
    Dense { generator: DMatrix<C<T>>, cache: Option<(T, DMatrix<C<T>>)> },
    /// Sparse generator stepped with truncated Taylor series.
    Stepping { generator: CsrMatrix<C<T>>, norm1: T },
}

impl<T: Real> Propagator<T> {
    /// Chooses dense or stepping propagation from the generator size.
    pub fn new(generator: &CsrMatrix<C<T>>) -> Self {
        if generator.nrows() <= DENSE_EXPM_MAX {
            Propagator::Dense { generator: csr_to_dense(generator), cache: None }
        } else {
            Self::stepping(generator)
        }
    }

    /// Forces the sparse Taylor-stepping path.
    pub fn stepping(generator: &CsrMatrix<C<T>>) -> Self {
        let mut col = vec![T::zero(); generator.ncols()];
        for (_, c, v) in generator.triplet_iter() {
            col[c] += cabs(*v);
        }
        let norm1 = col.into_iter().fold(T::zero(), |m, x| m.max(x));
        Propagator::Stepping { generator: generator.clone(), norm1 }
    }

    /// Returns `exp(L h) x`.
    pub fn advance(&mut self, x: &DVector<C<T>>, h: T) -> Result<DVector<C<T>>> {
        if h < T::zero() {
            return Err(Error::Propagation("negative time step".into()));
        }
        if h == T::zero() {
            return Ok(x.clone());
        }
        match self {
            Propagator::Dense { generator, cache } => {
                let stale = match cache {
                    Some((hc, _)) => *hc != h,
                    None => true,
                };
                if stale {
                    let e = (&*generator * C::new(h, T::zero())).exp();
                    if e.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                        return Err(Error::Propagation("matrix exponential overflowed".into()));
                    }
                    *cache = Some((h, e));
                }
                let (_, e) = cache.as_ref().expect("cache filled");
                Ok(e * x)
            }
            Propagator::Stepping { generator, norm1 } => taylor_action(generator, *norm1, x, h),
        }
    }
}

/// `exp(L h) x` by `m` uniform substeps of a truncated Taylor series.
///
/// The substep keeps `‖L h/m‖₁ ≤ 1`, and each series is summed until the
/// newest term falls below `1e-17` of the running sum, which bounds the local
/// error per substep well under `1e-10`.
fn taylor_action<T: Real>(l: &CsrMatrix<C<T>>, norm1: T, x: &DVector<C<T>>, h: T) -> Result<DVector<C<T>>> {
    let steps = ((norm1 * h).as_f64() / TAYLOR_THETA).ceil().max(1.0);
    if !steps.is_finite() || steps > 1e9 {
        return Err(Error::Propagation(format!("step count {steps} out of range")));
    }
    let m = steps as usize;
    let dt = h / T::from_usize(m).unwrap();
    let tol = T::lit(TAYLOR_TOL);
    let mut y = x.clone();
    for _ in 0..m {
        let mut term = y.clone();
        let mut sum = y.clone();
        let mut k = 1usize;
        loop {
            term = (l * &term) * C::new(dt / T::from_usize(k).unwrap(), T::zero());
            sum += &term;
            let tn = term.iter().fold(T::zero(), |a, z| a.max(cabs(*z)));
            let sn = sum.iter().fold(T::zero(), |a, z| a.max(cabs(*z)));
            if tn <= tol * sn || tn == T::zero() {
                break;
            }
            k += 1;
            if k > 80 {
                return Err(Error::Propagation("Taylor series failed to converge".into()));
            }
        }
        y = sum;
    }
    Ok(y)
}
