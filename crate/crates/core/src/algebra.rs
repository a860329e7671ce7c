//! Composite Hilbert spaces, sparse operators and Lindblad superoperators.
//!
//! Density matrices are vectorized by column stacking, so that
//! `vec(A X B) = (Bᵀ ⊗ A) vec(X)` and the index of `X[i, j]` is `i + d·j`.
//! nalgebra stores dense matrices column-major, so `vec` is a plain reshape.
//! Every superoperator formula in the crate is written for this convention.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};

use crate::error::{Error, Result};
use crate::scalar::{cabs, i_unit, re, Real, C};
use crate::steadystate::DensityMatrix;

/// Ordered tensor-product structure: `(label, dimension)` per subsystem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceSignature {
    subsystems: Vec<(String, usize)>,
}

impl SpaceSignature {
    /// Builds a signature, rejecting zero dimensions and repeated labels.
    pub fn new<S: Into<String>>(subsystems: Vec<(S, usize)>) -> Result<Self> {
        let mut sig = SpaceSignature { subsystems: Vec::with_capacity(subsystems.len()) };
        for (label, dim) in subsystems {
            sig = sig.extend(label, dim)?;
        }
        Ok(sig)
    }

    /// Returns a copy with one more subsystem appended on the right.
    pub fn extend<S: Into<String>>(&self, label: S, dim: usize) -> Result<Self> {
        let label = label.into();
        if dim == 0 {
            return Err(Error::DimensionMismatch(format!("subsystem `{label}` has dimension 0")));
        }
        if self.position(&label).is_some() {
            return Err(Error::DuplicateLabel(label));
        }
        let mut subsystems = self.subsystems.clone();
        subsystems.push((label, dim));
        Ok(SpaceSignature { subsystems })
    }

    pub fn subsystems(&self) -> &[(String, usize)] {
        &self.subsystems
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.subsystems.iter().map(|(_, d)| d).product()
    }

    /// Position of a label in signature order.
    pub fn position(&self, label: &str) -> Option<usize> {
        self.subsystems.iter().position(|(l, _)| l == label)
    }

    /// Dimension of the labelled subsystem.
    pub fn subsystem_dim(&self, label: &str) -> Result<usize> {
        self.position(label)
            .map(|k| self.subsystems[k].1)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Local level of the labelled subsystem in composite basis state `state`.
    pub fn local_level(&self, state: usize, label: &str) -> Result<usize> {
        let k = self.position(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        let stride: usize = self.subsystems[k + 1..].iter().map(|(_, d)| d).product();
        Ok((state / stride) % self.subsystems[k].1)
    }
}

/// Sparse complex operator on a composite space.
#[derive(Clone, Debug)]
pub struct Operator<T: Real> {
    signature: SpaceSignature,
    matrix: CsrMatrix<C<T>>,
}

impl<T: Real> Operator<T> {
    /// Wraps a sparse matrix, checking that it matches the signature.
    pub fn from_csr(signature: SpaceSignature, matrix: CsrMatrix<C<T>>) -> Result<Self> {
        let d = signature.dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on a space of dimension {d}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Operator { signature, matrix })
    }

    /// Converts a dense matrix, dropping exact zeros.
    pub fn from_dense(signature: SpaceSignature, m: &DMatrix<C<T>>) -> Result<Self> {
        Self::from_csr(signature, dense_to_csr(m))
    }

    pub fn identity(signature: &SpaceSignature) -> Self {
        let d = signature.dim();
        Operator { signature: signature.clone(), matrix: CsrMatrix::identity(d) }
    }

    pub fn zeros(signature: &SpaceSignature) -> Self {
        let d = signature.dim();
        Operator { signature: signature.clone(), matrix: CsrMatrix::zeros(d, d) }
    }

    pub fn signature(&self) -> &SpaceSignature {
        &self.signature
    }

    pub fn matrix(&self) -> &CsrMatrix<C<T>> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.signature.dim()
    }

    pub fn nnz(&self) -> usize {
        self.matrix.nnz()
    }

    /// Hermitian adjoint.
    pub fn adjoint(&self) -> Self {
        Operator { signature: self.signature.clone(), matrix: csr_adjoint(&self.matrix) }
    }

    /// Operator product `self · rhs`.
    pub fn mul(&self, rhs: &Operator<T>) -> Result<Self> {
        self.check(rhs)?;
        Ok(Operator { signature: self.signature.clone(), matrix: prune(&(&self.matrix * &rhs.matrix)) })
    }

    /// Operator sum `self + rhs`.
    pub fn add(&self, rhs: &Operator<T>) -> Result<Self> {
        self.check(rhs)?;
        Ok(Operator { signature: self.signature.clone(), matrix: prune(&(&self.matrix + &rhs.matrix)) })
    }

    /// Scalar multiple.
    pub fn scale(&self, c: C<T>) -> Self {
        Operator { signature: self.signature.clone(), matrix: prune(&(&self.matrix * c)) }
    }

    /// Dense copy of the matrix.
    pub fn to_dense(&self) -> DMatrix<C<T>> {
        csr_to_dense(&self.matrix)
    }

    /// Largest entrywise deviation from hermiticity.
    pub fn hermiticity_defect(&self) -> T {
        let a = self.to_dense();
        let b = a.adjoint();
        (a - b).iter().fold(T::zero(), |m, z| m.max(cabs(*z)))
    }

    /// Action on a dense matrix from the left.
    pub fn apply_left(&self, x: &DMatrix<C<T>>) -> DMatrix<C<T>> {
        &self.matrix * x
    }

    fn check(&self, rhs: &Operator<T>) -> Result<()> {
        if self.signature != rhs.signature {
            return Err(Error::SignatureMismatch);
        }
        Ok(())
    }
}

/// Sparse Liouvillian acting on column-stacked density matrices.
#[derive(Clone, Debug)]
pub struct Superoperator<T: Real> {
    signature: SpaceSignature,
    matrix: CsrMatrix<C<T>>,
    balance: Option<Vec<T>>,
}

impl<T: Real> Superoperator<T> {
    pub fn signature(&self) -> &SpaceSignature {
        &self.signature
    }

    pub fn matrix(&self) -> &CsrMatrix<C<T>> {
        &self.matrix
    }

    /// Hilbert-space dimension `d` (the superoperator is `d² × d²`).
    pub fn hilbert_dim(&self) -> usize {
        self.signature.dim()
    }

    /// Per-basis-state weights `t_s` of the similarity transform used by the solvers.
    ///
    /// Sensor moments scale as powers of the coupling, so the raw Liouvillian
    /// mixes entries of order 1 with solution components of order `ε^k`.
    /// With `T = diag(t_s)` and `t_s = ε^{k(s)}` the solvers work on
    /// `T⁻¹ ρ T⁻¹`, whose entries are all of order one.
    pub fn balance(&self) -> Option<&[T]> {
        self.balance.as_deref()
    }

    /// Attaches balancing weights (one per Hilbert-space basis state).
    pub fn with_balance(mut self, weights: Vec<T>) -> Result<Self> {
        if weights.len() != self.hilbert_dim() || weights.iter().any(|w| *w <= T::zero()) {
            return Err(Error::InvalidParameter("balance weights must be positive, one per state".into()));
        }
        self.balance = Some(weights);
        Ok(self)
    }

    /// `L vec(X)`.
    pub fn apply(&self, v: &DVector<C<T>>) -> DVector<C<T>> {
        &self.matrix * v
    }

    /// `L(X)` returned as a matrix.
    pub fn apply_to(&self, x: &DMatrix<C<T>>) -> DMatrix<C<T>> {
        unvec(&self.apply(&vec_of(x)), self.hilbert_dim())
    }

    /// Lower and upper bandwidth of the sparse pattern.
    pub fn bandwidth(&self) -> (usize, usize) {
        let mut kl = 0;
        let mut ku = 0;
        for (r, c, _) in self.matrix.triplet_iter() {
            if r > c {
                kl = kl.max(r - c);
            } else {
                ku = ku.max(c - r);
            }
        }
        (kl, ku)
    }

    /// Induced 1-norm `max_j Σ_i |L_ij|`.
    pub fn norm1(&self) -> T {
        let mut col = vec![T::zero(); self.matrix.ncols()];
        for (_, c, v) in self.matrix.triplet_iter() {
            col[c] += cabs(*v);
        }
        col.into_iter().fold(T::zero(), |m, x| m.max(x))
    }
}

/// Column-stacking vectorization.
pub fn vec_of<T: Real>(x: &DMatrix<C<T>>) -> DVector<C<T>> {
    DVector::from_column_slice(x.as_slice())
}

/// Inverse of [`vec_of`] for a `d × d` matrix.
pub fn unvec<T: Real>(v: &DVector<C<T>>, d: usize) -> DMatrix<C<T>> {
    DMatrix::from_column_slice(d, d, v.as_slice())
}

/// Bosonic (truncated) lowering matrix on `n` levels; for `n = 2` this is σ.
pub fn lowering<T: Real>(n: usize) -> DMatrix<C<T>> {
    let mut a = DMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = re(T::from_usize(k).unwrap().sqrt());
    }
    a
}

/// Dense identity on `n` levels.
pub fn identity<T: Real>(n: usize) -> DMatrix<C<T>> {
    DMatrix::identity(n, n)
}

/// Places `local_op` on subsystem `target_label`: `I ⊗ … ⊗ local_op ⊗ … ⊗ I`.
pub fn embed<T: Real>(local_op: &DMatrix<C<T>>, target_label: &str, sig: &SpaceSignature) -> Result<Operator<T>> {
    let k = sig.position(target_label).ok_or_else(|| Error::UnknownLabel(target_label.to_string()))?;
    let dk = sig.subsystems()[k].1;
    if local_op.nrows() != dk || local_op.ncols() != dk {
        return Err(Error::DimensionMismatch(format!(
            "local operator is {}x{} but `{target_label}` has dimension {dk}",
            local_op.nrows(),
            local_op.ncols()
        )));
    }
    let left: usize = sig.subsystems()[..k].iter().map(|(_, d)| d).product();
    let right: usize = sig.subsystems()[k + 1..].iter().map(|(_, d)| d).product();
    let m = kron(&kron(&CsrMatrix::identity(left), &dense_to_csr(local_op)), &CsrMatrix::identity(right));
    Operator::from_csr(sig.clone(), m)
}

/// Lindblad generator `−i[H,ρ] + Σ (γ/2)(2cρc† − c†cρ − ρc†c)` as a superoperator.
///
/// In column-stacked form
/// `L = −i(I⊗H − Hᵀ⊗I) + Σ (γ/2)(2 c̄⊗c − I⊗c†c − (c†c)ᵀ⊗I)`.
pub fn build_liouvillian<T: Real>(h: &Operator<T>, collapses: &[(Operator<T>, T)]) -> Result<Superoperator<T>> {
    let sig = h.signature().clone();
    let d = sig.dim();
    let id = CsrMatrix::<C<T>>::identity(d);
    let mi = -i_unit::<T>();
    let half = T::lit(0.5);

    let mut coo = CooMatrix::new(d * d, d * d);
    push_scaled(&mut coo, &kron(&id, h.matrix()), mi);
    push_scaled(&mut coo, &kron(&csr_transpose(h.matrix()), &id), -mi);
    for (c, rate) in collapses {
        if c.signature() != &sig {
            return Err(Error::SignatureMismatch);
        }
        if !(*rate >= T::zero()) {
            return Err(Error::InvalidParameter(format!("collapse rate {} is negative", rate.as_f64())));
        }
        if *rate == T::zero() {
            continue;
        }
        let cdc = &csr_adjoint(c.matrix()) * c.matrix();
        push_scaled(&mut coo, &kron(&csr_conj(c.matrix()), c.matrix()), re(*rate));
        push_scaled(&mut coo, &kron(&id, &cdc), re(-*rate * half));
        push_scaled(&mut coo, &kron(&csr_transpose(&cdc), &id), re(-*rate * half));
    }
    Ok(Superoperator { signature: sig, matrix: prune(&CsrMatrix::from(&coo)), balance: None })
}

/// `Tr[(op_1 op_2 … op_n) ρ]`.
pub fn expectation<T: Real>(rho: &DensityMatrix<T>, op_string: &[&Operator<T>]) -> Result<C<T>> {
    let mut x = rho.matrix().clone();
    for op in op_string.iter().rev() {
        if op.signature() != rho.signature() {
            return Err(Error::SignatureMismatch);
        }
        x = op.apply_left(&x);
    }
    Ok(x.trace())
}

/// Labelled collection of operators attached to a model.
pub type OperatorMap<T> = BTreeMap<String, Operator<T>>;

/// Kronecker product of two sparse matrices.
pub fn kron<T: Real>(a: &CsrMatrix<C<T>>, b: &CsrMatrix<C<T>>) -> CsrMatrix<C<T>> {
    let (nb, mb) = (b.nrows(), b.ncols());
    let mut coo = CooMatrix::new(a.nrows() * nb, a.ncols() * mb);
    for (ia, ja, va) in a.triplet_iter() {
        for (ib, jb, vb) in b.triplet_iter() {
            coo.push(ia * nb + ib, ja * mb + jb, *va * *vb);
        }
    }
    CsrMatrix::from(&coo)
}

/// Sparse copy of a dense matrix without its exact zeros.
pub fn dense_to_csr<T: Real>(m: &DMatrix<C<T>>) -> CsrMatrix<C<T>> {
    let mut coo = CooMatrix::new(m.nrows(), m.ncols());
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v.re != T::zero() || v.im != T::zero() {
                coo.push(i, j, v);
            }
        }
    }
    CsrMatrix::from(&coo)
}

/// Dense copy of a sparse matrix.
pub fn csr_to_dense<T: Real>(m: &CsrMatrix<C<T>>) -> DMatrix<C<T>> {
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for (i, j, v) in m.triplet_iter() {
        out[(i, j)] += *v;
    }
    out
}

fn push_scaled<T: Real>(coo: &mut CooMatrix<C<T>>, m: &CsrMatrix<C<T>>, s: C<T>) {
    for (i, j, v) in m.triplet_iter() {
        coo.push(i, j, *v * s);
    }
}

fn csr_transpose<T: Real>(m: &CsrMatrix<C<T>>) -> CsrMatrix<C<T>> {
    m.transpose()
}

fn csr_conj<T: Real>(m: &CsrMatrix<C<T>>) -> CsrMatrix<C<T>> {
    let values = m.values().iter().map(|v| v.conj()).collect();
    CsrMatrix::try_from_pattern_and_values(m.pattern().clone(), values).expect("pattern preserved")
}

fn csr_adjoint<T: Real>(m: &CsrMatrix<C<T>>) -> CsrMatrix<C<T>> {
    csr_conj(&m.transpose())
}

fn prune<T: Real>(m: &CsrMatrix<C<T>>) -> CsrMatrix<C<T>> {
    m.filter(|_, _, v| v.re != T::zero() || v.im != T::zero())
}
