//! Classification of density-matrix elements into diagonal, local-coherence and
//! nonlocal-coherence entries, and the two l1 functionals built on it.
//!
//! For an element `rho[(i_1..i_n), (j_1..j_n)]`:
//! * all `i_k == j_k` is diagonal;
//! * all `i_k != j_k` is nonlocal coherence (summed by [`nonlocal_sum`]);
//! * anything else is local coherence (summed by [`local_coherence`]).

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::qstate::{CMatrix, Dims, TpsMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoherenceClass {
    Diagonal,
    LocalCoherence,
    NonlocalCoherence,
}

impl CoherenceClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CoherenceClass::Diagonal => "Diagonal",
            CoherenceClass::LocalCoherence => "LocalCoherence",
            CoherenceClass::NonlocalCoherence => "NonlocalCoherence",
        }
    }
}

fn classify_unchecked(row: &[usize], col: &[usize]) -> CoherenceClass {
    let equal = row.iter().zip(col).filter(|(a, b)| a == b).count();
    if equal == row.len() {
        CoherenceClass::Diagonal
    } else if equal == 0 {
        CoherenceClass::NonlocalCoherence
    } else {
        CoherenceClass::LocalCoherence
    }
}

/// Class of the element at multi-indices `(row, col)`.
pub fn classify(dims: &Dims, row: &[usize], col: &[usize]) -> Result<CoherenceClass> {
    dims.check_multi_index(row)?;
    dims.check_multi_index(col)?;
    Ok(classify_unchecked(row, col))
}

/// Class of the element at flat indices `(r, c)`.
pub fn classify_flat(dims: &Dims, r: usize, c: usize) -> Result<CoherenceClass> {
    let n = dims.total();
    if r >= n || c >= n {
        return Err(crate::Error::usage(format!("flat index ({r},{c}) out of range for dims {dims}")));
    }
    Ok(classify_unchecked(&dims.decode(r), &dims.decode(c)))
}

/// Neumaier compensated summation.
#[derive(Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// Nonlocal sum, local sum and diagonal mass of a matrix in a fixed frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherenceProfile {
    pub s_value: f64,
    pub l_value: f64,
    pub diag_mass: f64,
}

/// Precomputed element classes for one [`Dims`], row-major over all `D*D` entries.
#[derive(Clone, Debug)]
pub struct ClassMask {
    dims: Dims,
    classes: Vec<CoherenceClass>,
}

impl ClassMask {
    pub fn new(dims: &Dims) -> Self {
        let n = dims.total();
        let decoded: Vec<Vec<usize>> = (0..n).map(|f| dims.decode(f)).collect();
        let mut classes = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                classes.push(classify_unchecked(&decoded[r], &decoded[c]));
            }
        }
        ClassMask { dims: dims.clone(), classes }
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn class(&self, r: usize, c: usize) -> CoherenceClass {
        self.classes[r * self.dims.total() + c]
    }

    /// Profile of `m`, summed in row-major order. `m` must be `D x D`.
    pub fn profile(&self, m: &CMatrix) -> CoherenceProfile {
        let n = self.dims.total();
        assert_eq!(m.nrows(), n, "matrix does not match mask dims");
        let mut s = CompensatedSum::default();
        let mut l = CompensatedSum::default();
        let mut d = CompensatedSum::default();
        for r in 0..n {
            for c in 0..n {
                let modulus = m[(r, c)].norm();
                match self.classes[r * n + c] {
                    CoherenceClass::Diagonal => d.add(modulus),
                    CoherenceClass::LocalCoherence => l.add(modulus),
                    CoherenceClass::NonlocalCoherence => s.add(modulus),
                }
            }
        }
        CoherenceProfile { s_value: s.value(), l_value: l.value(), diag_mass: d.value() }
    }
}

pub fn profile<M: TpsMatrix + ?Sized>(rho: &M) -> CoherenceProfile {
    ClassMask::new(rho.dims()).profile(rho.matrix())
}

/// Sum of moduli of all nonlocal-coherence elements.
pub fn nonlocal_sum<M: TpsMatrix + ?Sized>(rho: &M) -> f64 {
    profile(rho).s_value
}

/// Sum of moduli of all local-coherence elements.
pub fn local_coherence<M: TpsMatrix + ?Sized>(rho: &M) -> f64 {
    profile(rho).l_value
}
