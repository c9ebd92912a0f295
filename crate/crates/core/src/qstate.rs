//! Dense complex states with an explicit tensor product structure.
//!
//! Composite indices are row-major with party 0 varying slowest:
//! `flat = sum_k i_k * prod_{l>k} d_l`. Every other module relies on this
//! convention, so it is only encoded here (see [`Dims::encode`] and
//! [`Dims::decode_into`]).

use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Subsystem dimensions of a tensor product structure, e.g. `[2, 3]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Dims(Vec<usize>);

impl Dims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::usage("dims must name at least one party"));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::usage(format!("subsystem dimension {d} < 2")));
        }
        Ok(Dims(dims))
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Dims::new(vec![2; n])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn parties(&self) -> usize {
        self.0.len()
    }

    /// Total Hilbert-space dimension.
    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn concat(&self, other: &Dims) -> Dims {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Dims(v)
    }

    pub fn decode(&self, flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.0.len()];
        self.decode_into(flat, &mut out);
        out
    }

    pub fn decode_into(&self, mut flat: usize, out: &mut [usize]) {
        for (slot, &d) in out.iter_mut().zip(&self.0).rev() {
            *slot = flat % d;
            flat /= d;
        }
    }

    pub fn encode(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.0).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub(crate) fn check_multi_index(&self, multi: &[usize]) -> Result<()> {
        if multi.len() != self.0.len() {
            return Err(Error::usage(format!(
                "multi-index {:?} has {} components, dims {:?} need {}",
                multi,
                multi.len(),
                self.0,
                self.0.len()
            )));
        }
        for (k, (&i, &d)) in multi.iter().zip(&self.0).enumerate() {
            if i >= d {
                return Err(Error::usage(format!("index {i} out of range for party {k} (dim {d})")));
            }
        }
        Ok(())
    }

    pub(crate) fn check_permutation(&self, perm: &[usize]) -> Result<()> {
        let n = self.parties();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::usage(format!("permutation {perm:?} must have length {n}")));
        }
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::usage(format!("{perm:?} is not a permutation of 0..{n}")));
            }
            seen[p] = true;
        }
        Ok(())
    }

    /// Dims obtained by putting old party `perm[k]` at new position `k`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Dims> {
        self.check_permutation(perm)?;
        Ok(Dims(perm.iter().map(|&p| self.0[p]).collect()))
    }

    /// Merge runs of adjacent parties; `groups[k]` is the number of old parties in new party `k`.
    pub fn regrouped(&self, groups: &[usize]) -> Result<Dims> {
        if groups.iter().sum::<usize>() != self.parties() || groups.contains(&0) {
            return Err(Error::usage(format!(
                "grouping {groups:?} does not cover the {} parties",
                self.parties()
            )));
        }
        let mut out = Vec::with_capacity(groups.len());
        let mut start = 0;
        for &g in groups {
            out.push(self.0[start..start + g].iter().product());
            start += g;
        }
        Dims::new(out)
    }
}

impl TryFrom<Vec<usize>> for Dims {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Dims::new(v)
    }
}

impl From<Dims> for Vec<usize> {
    fn from(d: Dims) -> Self {
        d.0
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Numerical tolerances for state validation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub herm: f64,
    pub trace: f64,
    pub psd: f64,
    pub eig: f64,
    pub norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { herm: 1e-10, trace: 1e-10, psd: 1e-8, eig: 1e-10, norm: 1e-10 }
    }
}

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    dims: Dims,
    amps: CVector,
}

impl PureState {
    pub fn new(dims: Dims, amps: CVector) -> Result<Self> {
        Self::with_tolerance(dims, amps, Tolerances::default().norm)
    }

    pub fn with_tolerance(dims: Dims, amps: CVector, tol_norm: f64) -> Result<Self> {
        if amps.len() != dims.total() {
            return Err(Error::usage(format!(
                "{} amplitudes do not match dims {dims} (need {})",
                amps.len(),
                dims.total()
            )));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::validation("non-finite amplitude"));
        }
        let norm2 = amps.norm_squared();
        if (norm2 - 1.0).abs() > tol_norm {
            return Err(Error::validation(format!("state norm^2 = {norm2}, expected 1")));
        }
        Ok(PureState { dims, amps })
    }

    /// Rescale `amps` to unit norm. Fails only on the zero vector.
    pub fn normalized(dims: Dims, amps: CVector) -> Result<Self> {
        let n = amps.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::validation("cannot normalize a zero or non-finite vector"));
        }
        PureState::new(dims, amps.unscale(n))
    }

    /// Computational basis state `|multi>`.
    pub fn basis(dims: Dims, multi: &[usize]) -> Result<Self> {
        dims.check_multi_index(multi)?;
        let mut amps = CVector::zeros(dims.total());
        amps[dims.encode(multi)] = ONE;
        Ok(PureState { dims, amps })
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn amps(&self) -> &CVector {
        &self.amps
    }

    pub fn to_density(&self) -> DensityMatrix {
        density_from_pure(self)
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState { dims: self.dims.concat(&other.dims), amps: self.amps.kronecker(&other.amps) }
    }

    /// Reorder parties: old party `perm[k]` becomes new party `k`.
    pub fn permute(&self, perm: &[usize]) -> Result<PureState> {
        let new_dims = self.dims.permuted(perm)?;
        let n = self.dims.parties();
        let mut old = vec![0; n];
        let mut new = vec![0; n];
        let mut amps = CVector::zeros(self.amps.len());
        for (flat, &a) in self.amps.iter().enumerate() {
            self.dims.decode_into(flat, &mut old);
            for (k, &p) in perm.iter().enumerate() {
                new[k] = old[p];
            }
            amps[new_dims.encode(&new)] = a;
        }
        Ok(PureState { dims: new_dims, amps })
    }

    /// Same vector, coarser tensor product structure (see [`Dims::regrouped`]).
    pub fn regroup(&self, groups: &[usize]) -> Result<PureState> {
        Ok(PureState { dims: self.dims.regrouped(groups)?, amps: self.amps.clone() })
    }

    /// The `d1 x d2` coefficient matrix `c[i][j]` of a bipartite state.
    pub fn coefficient_matrix(&self) -> Result<CMatrix> {
        let d = self.dims.as_slice();
        if d.len() != 2 {
            return Err(Error::usage(format!("expected a bipartite state, got dims {}", self.dims)));
        }
        Ok(CMatrix::from_fn(d[0], d[1], |i, j| self.amps[i * d[1] + j]))
    }
}

/// Read access shared by physical density matrices and general operators.
pub trait TpsMatrix {
    fn dims(&self) -> &Dims;
    fn matrix(&self) -> &CMatrix;
}

/// A square matrix carrying a tensor product structure but no physical guarantees,
/// e.g. a partial transpose.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    dims: Dims,
    mat: CMatrix,
}

impl Operator {
    pub fn new(dims: Dims, mat: CMatrix) -> Result<Self> {
        let n = dims.total();
        if mat.nrows() != n || mat.ncols() != n {
            return Err(Error::usage(format!(
                "{}x{} matrix does not match dims {dims}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Operator { dims, mat })
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }
}

impl TpsMatrix for Operator {
    fn dims(&self) -> &Dims {
        &self.dims
    }
    fn matrix(&self) -> &CMatrix {
        &self.mat
    }
}

/// A density matrix. Values built with [`DensityMatrix::new`] satisfy hermiticity,
/// unit trace and positivity within the default [`Tolerances`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Dims,
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(dims: Dims, mat: CMatrix) -> Result<Self> {
        Self::with_tolerances(dims, mat, &Tolerances::default())
    }

    pub fn with_tolerances(dims: Dims, mat: CMatrix, tol: &Tolerances) -> Result<Self> {
        let op = Operator::new(dims, mat)?;
        let violations = validate(&op, tol);
        if !violations.is_empty() {
            let msg: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::validation(msg.join("; ")));
        }
        Ok(DensityMatrix { dims: op.dims, mat: op.mat })
    }

    /// Skip physical validation. Shape is still checked.
    pub fn new_unchecked(dims: Dims, mat: CMatrix) -> Result<Self> {
        let op = Operator::new(dims, mat)?;
        Ok(DensityMatrix { dims: op.dims, mat: op.mat })
    }

    /// Maximally mixed state `I/D`.
    pub fn maximally_mixed(dims: Dims) -> Self {
        let n = dims.total();
        let mat = CMatrix::identity(n, n).unscale(n as f64);
        DensityMatrix { dims, mat }
    }

    pub(crate) fn from_parts(dims: Dims, mat: CMatrix) -> Self {
        debug_assert_eq!(mat.nrows(), dims.total());
        DensityMatrix { dims, mat }
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { dims: self.dims.concat(&other.dims), mat: self.mat.kronecker(&other.mat) }
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.mat, Tolerances::default().herm)
    }

    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    /// Reorder parties: old party `perm[k]` becomes new party `k`.
    pub fn permute(&self, perm: &[usize]) -> Result<DensityMatrix> {
        let new_dims = self.dims.permuted(perm)?;
        let n = self.dims.total();
        let np = self.dims.parties();
        let mut old = vec![0; np];
        let mut new = vec![0; np];
        let map: Vec<usize> = (0..n)
            .map(|flat| {
                self.dims.decode_into(flat, &mut old);
                for (k, &p) in perm.iter().enumerate() {
                    new[k] = old[p];
                }
                new_dims.encode(&new)
            })
            .collect();
        let mut mat = CMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                mat[(map[r], map[c])] = self.mat[(r, c)];
            }
        }
        Ok(DensityMatrix { dims: new_dims, mat })
    }

    pub fn regroup(&self, groups: &[usize]) -> Result<DensityMatrix> {
        Ok(DensityMatrix { dims: self.dims.regrouped(groups)?, mat: self.mat.clone() })
    }
}

impl TpsMatrix for DensityMatrix {
    fn dims(&self) -> &Dims {
        &self.dims
    }
    fn matrix(&self) -> &CMatrix {
        &self.mat
    }
}

/// `|psi><psi|`.
pub fn density_from_pure(psi: &PureState) -> DensityMatrix {
    let a = &psi.amps;
    DensityMatrix { dims: psi.dims.clone(), mat: a * a.adjoint() }
}

/// Reduced state on the parties in `keep` (0-based, any order; result keeps ascending order).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let np = rho.dims.parties();
    if keep.is_empty() {
        return Err(Error::usage("partial_trace: keep set is empty"));
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&p) = kept.iter().find(|&&p| p >= np) {
        return Err(Error::usage(format!("partial_trace: party {p} out of range for {np} parties")));
    }
    if kept.len() == np {
        return Ok(rho.clone());
    }
    let d = rho.dims.as_slice();
    let kept_dims = Dims::new(kept.iter().map(|&p| d[p]).collect())?;
    let traced: Vec<usize> = (0..np).filter(|p| !kept.contains(p)).collect();
    let n = rho.dims.total();
    let m = kept_dims.total();

    let mut ri = vec![0; np];
    let mut ci = vec![0; np];
    let mut sub = vec![0; kept.len()];
    let mut out = CMatrix::zeros(m, m);
    for r in 0..n {
        rho.dims.decode_into(r, &mut ri);
        for (s, &p) in sub.iter_mut().zip(&kept) {
            *s = ri[p];
        }
        let rk = kept_dims.encode(&sub);
        for c in 0..n {
            rho.dims.decode_into(c, &mut ci);
            if traced.iter().any(|&p| ri[p] != ci[p]) {
                continue;
            }
            for (s, &p) in sub.iter_mut().zip(&kept) {
                *s = ci[p];
            }
            out[(rk, kept_dims.encode(&sub))] += rho.mat[(r, c)];
        }
    }
    Ok(DensityMatrix { dims: kept_dims, mat: out })
}

/// Transpose the indices of one party (0-based). The result need not be positive.
pub fn partial_transpose<M: TpsMatrix + ?Sized>(rho: &M, party: usize) -> Result<Operator> {
    let dims = rho.dims();
    let np = dims.parties();
    if party >= np {
        return Err(Error::usage(format!("partial_transpose: party {party} out of range for {np} parties")));
    }
    let n = dims.total();
    let mut ri = vec![0; np];
    let mut ci = vec![0; np];
    let mut out = CMatrix::zeros(n, n);
    for r in 0..n {
        dims.decode_into(r, &mut ri);
        for c in 0..n {
            dims.decode_into(c, &mut ci);
            std::mem::swap(&mut ri[party], &mut ci[party]);
            out[(dims.encode(&ri), dims.encode(&ci))] = rho.matrix()[(r, c)];
            std::mem::swap(&mut ri[party], &mut ci[party]);
        }
    }
    Ok(Operator { dims: dims.clone(), mat: out })
}

/// Largest elementwise modulus of `M - M^dagger`.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues in descending order.
/// Column `k` of the returned matrix is the eigenvector of eigenvalue `k`.
pub(crate) fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Real eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(m: &CMatrix, tol_herm: f64) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::usage(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
    }
    let res = hermiticity_residual(m);
    if res > tol_herm {
        return Err(Error::validation(format!("matrix is not Hermitian (residual {res:.3e})")));
    }
    Ok(eigh(m).0)
}

/// Singular values, descending.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Hermiticity,
    Trace,
    Positivity,
    NonFinite,
}

/// One failed invariant and how far off it is.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub residual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::Hermiticity => "not Hermitian",
            ViolationKind::Trace => "trace differs from 1",
            ViolationKind::Positivity => "negative eigenvalue",
            ViolationKind::NonFinite => "non-finite entries",
        };
        write!(f, "{what} (residual {:.3e})", self.residual)
    }
}

/// Check hermiticity, unit trace and positivity. An empty list means the matrix is a valid state.
pub fn validate<M: TpsMatrix + ?Sized>(rho: &M, tol: &Tolerances) -> Vec<Violation> {
    let m = rho.matrix();
    let mut out = Vec::new();
    let bad = m.iter().filter(|z| !z.re.is_finite() || !z.im.is_finite()).count();
    if bad > 0 {
        out.push(Violation { kind: ViolationKind::NonFinite, residual: bad as f64 });
        return out;
    }
    let herm = hermiticity_residual(m);
    if herm > tol.herm {
        out.push(Violation { kind: ViolationKind::Hermiticity, residual: herm });
    }
    let trace = (m.trace() - ONE).norm();
    if trace > tol.trace {
        out.push(Violation { kind: ViolationKind::Trace, residual: trace });
    }
    let min_eig = eigh(m).0.last().copied().unwrap_or(0.0);
    if min_eig < -tol.psd {
        out.push(Violation { kind: ViolationKind::Positivity, residual: -min_eig });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn pure(dims: &[usize], amps: &[f64]) -> PureState {
        let v = CVector::from_iterator(amps.len(), amps.iter().map(|&x| c(x)));
        PureState::new(Dims::new(dims.to_vec()).unwrap(), v).unwrap()
    }

    fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn index_round_trip() {
        let d = Dims::new(vec![2, 3, 2]).unwrap();
        for flat in 0..d.total() {
            assert_eq!(d.encode(&d.decode(flat)), flat);
        }
        assert_eq!(d.decode(7), vec![1, 0, 1]);
    }

    #[test]
    fn dims_reject_trivial_factor() {
        assert!(Dims::new(vec![2, 1]).is_err());
        assert!(Dims::new(vec![]).is_err());
    }

    #[test]
    fn density_of_basis_and_bell_states() {
        let rho = pure(&[2, 2], &[1.0, 0.0, 0.0, 0.0]).to_density();
        let mut expect = CMatrix::zeros(4, 4);
        expect[(0, 0)] = ONE;
        assert_eq!(rho.matrix(), &expect);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rho = pure(&[2, 2], &[h, 0.0, 0.0, h]).to_density();
        for &(r, cc) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert_abs_diff_eq!(rho.matrix()[(r, cc)].re, 0.5, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(rho.matrix()[(1, 1)].norm(), 0.0);

        let rho = pure(&[2, 2], &[0.0, h, -h, 0.0]).to_density();
        assert_abs_diff_eq!(rho.matrix()[(1, 2)].re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.matrix()[(2, 1)].re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.matrix()[(1, 1)].re, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn non_normalized_pure_state_is_rejected() {
        let v = CVector::from_vec(vec![c(1.0), c(1.0)]);
        let err = PureState::new(Dims::new(vec![2]).unwrap(), v).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
    }

    #[test]
    fn tensor_of_kets_and_mixed_states() {
        let zero = pure(&[2], &[1.0, 0.0]);
        let one = pure(&[2], &[0.0, 1.0]);
        let t = zero.tensor(&one);
        assert_eq!(t.dims().as_slice(), &[2, 2]);
        assert_eq!(t, PureState::basis(Dims::new(vec![2, 2]).unwrap(), &[0, 1]).unwrap());

        let half = DensityMatrix::maximally_mixed(Dims::new(vec![2]).unwrap());
        let quarter = half.tensor(&half);
        assert_eq!(quarter.dims().as_slice(), &[2, 2]);
        let expect = DensityMatrix::maximally_mixed(Dims::new(vec![2, 2]).unwrap());
        assert!(max_abs_diff(quarter.matrix(), expect.matrix()) < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_and_empty_keep() {
        let a = pure(&[2], &[0.6, 0.8]).to_density();
        let b = pure(&[3], &[0.0, 0.6, 0.8]).to_density();
        let ab = a.tensor(&b);
        let ra = partial_trace(&ab, &[0]).unwrap();
        let rb = partial_trace(&ab, &[1]).unwrap();
        assert!(max_abs_diff(ra.matrix(), a.matrix()) < 1e-15);
        assert!(max_abs_diff(rb.matrix(), b.matrix()) < 1e-15);
        assert!(matches!(partial_trace(&ab, &[]), Err(Error::Usage(_))));
        assert!(partial_trace(&ab, &[2]).is_err());
    }

    #[test]
    fn partial_transpose_of_singlet() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rho = pure(&[2, 2], &[0.0, h, -h, 0.0]).to_density();
        let pt = partial_transpose(&rho, 1).unwrap();
        let eig = hermitian_eigenvalues(pt.matrix(), 1e-12).unwrap();
        // frozen from an independent 4x4 eigensolve: {-1/2, 1/2, 1/2, 1/2}
        assert_abs_diff_eq!(eig[3], -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(eig[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(pt.matrix().trace().re, 1.0, epsilon = 1e-15);

        let v = validate(&pt, &Tolerances::default());
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::Positivity);
        assert_abs_diff_eq!(v[0].residual, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn partial_transpose_of_mixed_and_product_states() {
        let mixed = DensityMatrix::maximally_mixed(Dims::new(vec![2, 3]).unwrap());
        assert_eq!(partial_transpose(&mixed, 0).unwrap().matrix(), mixed.matrix());

        let prod = pure(&[2], &[0.6, 0.8]).to_density().tensor(&pure(&[2], &[0.8, 0.6]).to_density());
        let eig = hermitian_eigenvalues(partial_transpose(&prod, 1).unwrap().matrix(), 1e-12).unwrap();
        assert!(eig.iter().all(|&e| e > -1e-12));
    }

    #[test]
    fn eigenvalues_of_small_examples() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.3), c(0.7)]));
        let e = hermitian_eigenvalues(&m, 1e-10).unwrap();
        assert_abs_diff_eq!(e[0], 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(e[1], 0.3, epsilon = 1e-15);

        let x = CMatrix::from_row_slice(2, 2, &[ZERO, c(0.5), c(0.5), ZERO]);
        let e = hermitian_eigenvalues(&x, 1e-10).unwrap();
        assert_abs_diff_eq!(e[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(e[1], -0.5, epsilon = 1e-15);

        let bad = CMatrix::from_row_slice(2, 2, &[ZERO, c(1.0), ZERO, ZERO]);
        assert!(matches!(hermitian_eigenvalues(&bad, 1e-10), Err(Error::Validation(_))));
    }

    #[test]
    fn singular_values_of_small_examples() {
        let s = singular_values(&CMatrix::identity(2, 2));
        assert_eq!(s.len(), 2);
        assert_abs_diff_eq!(s[0], 1.0, epsilon = 1e-15);

        let m = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.5), c(0.5), c(-0.5)]);
        for v in singular_values(&m) {
            assert_abs_diff_eq!(v, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-14);
        }

        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.2), c(0.9)]));
        let s = singular_values(&d);
        assert_abs_diff_eq!(s[0], 0.9, epsilon = 1e-15);
        assert_abs_diff_eq!(s[1], 0.2, epsilon = 1e-15);
    }

    #[test]
    fn validate_reports_trace_residual() {
        let mut m = DensityMatrix::maximally_mixed(Dims::new(vec![2, 2]).unwrap()).into_matrix();
        m[(0, 0)] -= c(0.1);
        let op = Operator::new(Dims::new(vec![2, 2]).unwrap(), m).unwrap();
        let v = validate(&op, &Tolerances::default());
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::Trace);
        assert_abs_diff_eq!(v[0].residual, 0.1, epsilon = 1e-14);
    }

    #[test]
    fn permute_and_inverse() {
        let a = pure(&[2], &[0.6, 0.8]);
        let b = pure(&[3], &[0.0, 0.6, 0.8]);
        let ab = a.tensor(&b);
        assert_eq!(ab.permute(&[1, 0]).unwrap(), b.tensor(&a));
        assert!(ab.permute(&[0, 0]).is_err());

        let rho = ab.to_density();
        let swapped = rho.permute(&[1, 0]).unwrap();
        assert!(max_abs_diff(swapped.matrix(), b.tensor(&a).to_density().matrix()) < 1e-15);
        assert_eq!(swapped.permute(&[1, 0]).unwrap(), rho);
    }
}
