//! Comparison measures: Schmidt decomposition, concurrence, entanglement of
//! formation, negativity and the closed-form discord expressions, plus the
//! closed-form consonance values of each state family.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizer::{self, OptimizerConfig};
use crate::qstate::{eigh, partial_transpose, singular_values, CMatrix, CVector, DensityMatrix, PureState, TpsMatrix, C64};
use crate::states::{two_param_coefficients, AnyState, Family};
use crate::coherence;

/// `x log2 x`, with the value 0 at `x = 0`.
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Schmidt form `sum_k P_k |u_k> (x) |v_k>` of a bipartite pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtDecomposition {
    /// Descending, `sum P_k^2 = 1`. Length `min(d1, d2)`.
    pub coefficients: Vec<f64>,
    /// `d1 x d1` unitary; the first `min(d1, d2)` columns are the Schmidt vectors.
    pub left_basis: CMatrix,
    /// `d2 x d2` unitary; the first `min(d1, d2)` columns are the Schmidt vectors.
    pub right_basis: CMatrix,
}

impl SchmidtDecomposition {
    /// Eigenvalues of either reduced state, `P_k^2`.
    pub fn lambdas(&self) -> Vec<f64> {
        self.coefficients.iter().map(|p| p * p).collect()
    }

    pub fn reconstruct(&self) -> CVector {
        let (d1, d2) = (self.left_basis.nrows(), self.right_basis.nrows());
        let mut out = CVector::zeros(d1 * d2);
        for (k, &p) in self.coefficients.iter().enumerate() {
            let term = self.left_basis.column(k).kronecker(&self.right_basis.column(k));
            out += term.scale(p);
        }
        out
    }
}

/// Extend orthonormal columns to a full unitary by Gram-Schmidt against the standard basis.
fn complete_basis(cols: Vec<CVector>, dim: usize) -> CMatrix {
    let mut basis = cols;
    for e in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut v = CVector::zeros(dim);
        v[e] = C64::new(1.0, 0.0);
        for b in &basis {
            let proj = b.dotc(&v);
            v -= b * proj;
        }
        for b in &basis {
            let proj = b.dotc(&v);
            v -= b * proj;
        }
        let n = v.norm();
        if n > 1e-8 {
            basis.push(v.unscale(n));
        }
    }
    CMatrix::from_columns(&basis)
}

pub fn schmidt_decompose(psi: &PureState) -> Result<SchmidtDecomposition> {
    let c = psi.coefficient_matrix()?;
    let (d1, d2) = (c.nrows(), c.ncols());
    let svd = c.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let coefficients = order.iter().map(|&i| svd.singular_values[i]).collect();
    let left = order.iter().map(|&i| u.column(i).into_owned()).collect();
    let right = order.iter().map(|&i| v_t.row(i).transpose()).collect();
    Ok(SchmidtDecomposition {
        coefficients,
        left_basis: complete_basis(left, d1),
        right_basis: complete_basis(right, d2),
    })
}

/// Nonlocal sum of the Schmidt-form density matrix, `(sum P_k)^2 - sum P_k^2`.
pub fn consonance_pure_bipartite(psi: &PureState) -> Result<f64> {
    let c = psi.coefficient_matrix()?;
    let p = singular_values(&c);
    let sum: f64 = p.iter().sum();
    let sq: f64 = p.iter().map(|x| x * x).sum();
    Ok((sum * sum - sq).max(0.0))
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims().as_slice() != [2, 2] {
        return Err(Error::usage(format!("two-qubit measure needs dims [2,2], got {}", rho.dims())));
    }
    Ok(())
}

/// Wootters concurrence of a two-qubit state.
///
/// With `rho = sum_i |w_i><w_i|` (unnormalized eigenvectors) the values
/// `lambda_i` are the singular values of `T_ij = w_i^T (Y (x) Y) w_j`, which
/// equal the square roots of the eigenvalues of `rho * rho_tilde`.
pub fn concurrence_2x2(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let (vals, vecs) = eigh(rho.matrix());
    let mut w = vecs;
    for (k, &p) in vals.iter().enumerate() {
        let s = p.max(0.0).sqrt();
        for r in 0..4 {
            w[(r, k)] *= s;
        }
    }
    // sigma_y (x) sigma_y in the computational basis
    let mut yy = CMatrix::zeros(4, 4);
    yy[(0, 3)] = C64::new(-1.0, 0.0);
    yy[(1, 2)] = C64::new(1.0, 0.0);
    yy[(2, 1)] = C64::new(1.0, 0.0);
    yy[(3, 0)] = C64::new(-1.0, 0.0);
    let t = w.transpose() * yy * &w;
    let lam = singular_values(&t);
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// Entanglement of formation from concurrence: binary entropy of `f = (1 + sqrt(1 - C^2))/2`.
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::usage(format!("concurrence {c} outside [0, 1]")));
    }
    let f = (1.0 + (1.0 - c * c).sqrt()) / 2.0;
    Ok(-xlog2x(f) - xlog2x(1.0 - f))
}

/// Trace norm of the partial transpose minus one.
pub fn negativity<M: TpsMatrix + ?Sized>(rho: &M, party: usize) -> Result<f64> {
    let pt = partial_transpose(rho, party)?;
    let (vals, _) = eigh(pt.matrix());
    let trace_norm: f64 = vals.iter().map(|v| v.abs()).sum();
    Ok((trace_norm - 1.0).max(0.0))
}

/// Discord of the Werner state,
/// `(1/4)[(1-a)log2(1-a) + (1+3a)log2(1+3a) - 2(1+a)log2(1+a)]`.
pub fn discord_werner(a: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::usage(format!("Werner parameter a = {a} outside [0, 1]")));
    }
    Ok(0.25 * (xlog2x(1.0 - a) + xlog2x(1.0 + 3.0 * a) - 2.0 * xlog2x(1.0 + a)))
}

/// Discord of `a|11> + b|00>` (equal to its entanglement of formation),
/// `1 - (1/2)[(1+s)log2(1+s) + (1-s)log2(1-s)]` with `s = sqrt(1 - 4|ab|^2)`.
pub fn discord_bell_like(a: C64, b: C64) -> Result<f64> {
    let norm = a.norm_sqr() + b.norm_sqr();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::validation(format!("|a|^2 + |b|^2 = {norm}, expected 1")));
    }
    let ab = a.norm() * b.norm();
    let s = (1.0 - 4.0 * ab * ab).max(0.0).sqrt();
    Ok(1.0 - 0.5 * (xlog2x(1.0 + s) + xlog2x(1.0 - s)))
}

/// Discord of the qubit-qutrit family,
/// `beta log2(2 beta) + gamma log2(2 gamma) - (beta + gamma) log2(beta + gamma)`.
pub fn discord_2x3(alpha: f64, gamma: f64) -> Result<f64> {
    let (_, beta, gamma) = two_param_coefficients(alpha, gamma)?;
    // beta log2(2 beta) = xlog2x(2 beta) / 2
    Ok(0.5 * xlog2x(2.0 * beta) + 0.5 * xlog2x(2.0 * gamma) - xlog2x(beta + gamma))
}

/// Whether a closed-form consonance value is exact for every search space or depends on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Exact,
    /// Multipartite values whose infimum depends on the chosen unitary search space.
    PresetDependent,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub value: f64,
    pub claim: Claim,
}

/// Closed-form consonance of a state family.
pub fn consonance_closed_form(family: &Family) -> Result<ClosedForm> {
    let exact = |value| Ok(ClosedForm { value, claim: Claim::Exact });
    match *family {
        Family::Werner { a } => {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::usage(format!("Werner parameter a = {a} outside [0, 1]")));
            }
            exact(a)
        }
        Family::TwoParam2x3 { alpha, gamma } => {
            let (_, beta, gamma) = two_param_coefficients(alpha, gamma)?;
            exact((beta - gamma).abs())
        }
        Family::Bell(_) => exact(1.0),
        Family::BellLike { a, b } | Family::PsiLike { a, b } => {
            check_pair(a, b)?;
            exact(2.0 * (a * b).abs())
        }
        Family::Pure2x2 { a, b, c, d } => {
            let n = a * a + b * b + c * c + d * d;
            if (n - 1.0).abs() > 1e-10 {
                return Err(Error::validation(format!("|a|^2+|b|^2+|c|^2+|d|^2 = {n}, expected 1")));
            }
            exact(2.0 * (a * d - b * c).abs())
        }
        Family::Ghz { n: 3 } => Ok(ClosedForm { value: 0.0, claim: Claim::PresetDependent }),
        Family::W { n: 3 } => Ok(ClosedForm { value: 1.0, claim: Claim::PresetDependent }),
        ref other => Err(Error::usage(format!("no closed-form consonance for family '{}'", other.name()))),
    }
}

fn check_pair(a: f64, b: f64) -> Result<()> {
    let n = a * a + b * b;
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::validation(format!("|a|^2 + |b|^2 = {n}, expected 1")));
    }
    Ok(())
}

/// Closed-form discord of the families that have one.
pub fn discord_closed_form(family: &Family) -> Result<f64> {
    match *family {
        Family::Werner { a } => discord_werner(a),
        Family::TwoParam2x3 { alpha, gamma } => discord_2x3(alpha, gamma),
        Family::BellLike { a, b } | Family::PsiLike { a, b } => {
            discord_bell_like(C64::new(a, 0.0), C64::new(b, 0.0))
        }
        Family::Bell(_) => Ok(1.0),
        ref other => Err(Error::usage(format!("no closed-form discord for family '{}'", other.name()))),
    }
}

/// Closed-form two-qubit concurrence of the families that have one.
pub fn concurrence_closed_form(family: &Family) -> Result<f64> {
    match *family {
        Family::Werner { a } => Ok(((3.0 * a - 1.0) / 2.0).max(0.0)),
        Family::BellLike { a, b } | Family::PsiLike { a, b } => Ok(2.0 * (a * b).abs()),
        Family::Pure2x2 { a, b, c, d } => Ok(2.0 * (a * d - b * c).abs()),
        Family::Bell(_) => Ok(1.0),
        ref other => Err(Error::usage(format!("no closed-form concurrence for family '{}'", other.name()))),
    }
}

/// Measure identifiers accepted by the CLI and sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Measure {
    /// Closed-form consonance of the family.
    ConsonanceCf,
    /// Consonance from the constrained optimizer.
    ConsonanceOpt,
    /// Schmidt-coefficient consonance of a bipartite pure state.
    ConsonancePure,
    /// `consonance_cf - concurrence`.
    ConsonanceMinusConcurrence,
    Concurrence,
    Eof,
    Negativity,
    Discord,
    NonlocalSum,
    LocalCoherence,
}

impl Measure {
    pub const ALL: [Measure; 10] = [
        Measure::ConsonanceCf,
        Measure::ConsonanceOpt,
        Measure::ConsonancePure,
        Measure::ConsonanceMinusConcurrence,
        Measure::Concurrence,
        Measure::Eof,
        Measure::Negativity,
        Measure::Discord,
        Measure::NonlocalSum,
        Measure::LocalCoherence,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Measure::ConsonanceCf => "consonance_cf",
            Measure::ConsonanceOpt => "consonance_opt",
            Measure::ConsonancePure => "consonance_pure",
            Measure::ConsonanceMinusConcurrence => "consonance_minus_concurrence",
            Measure::Concurrence => "concurrence",
            Measure::Eof => "eof",
            Measure::Negativity => "negativity",
            Measure::Discord => "discord",
            Measure::NonlocalSum => "nonlocal_sum",
            Measure::LocalCoherence => "local_coherence",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        let alias = match norm.as_str() {
            "consonance" => "consonance_opt",
            "c_minus_concurrence" | "consonance_minus_c" => "consonance_minus_concurrence",
            other => other,
        };
        Measure::ALL
            .into_iter()
            .find(|m| m.id() == alias)
            .ok_or_else(|| Error::Parse(format!("unknown measure '{s}'")))
    }
}

impl TryFrom<String> for Measure {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Measure> for String {
    fn from(m: Measure) -> String {
        m.id().to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    General,
    Optimized,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureResult {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_params: Option<BTreeMap<String, f64>>,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feasible: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub claim: Option<Claim>,
}

/// Evaluate `measure` on a state, using closed forms when `family` is known and
/// the measure is a closed-form one. `config` drives [`Measure::ConsonanceOpt`].
pub fn evaluate(
    measure: Measure,
    family: Option<&Family>,
    state: &AnyState,
    config: &OptimizerConfig,
) -> Result<MeasureResult> {
    let family_params = family.map(Family::params);
    let mut feasible = None;
    let mut claim = None;
    let need_family = || {
        family.ok_or_else(|| Error::usage(format!("measure '{measure}' needs a named state family")))
    };
    let (value, method) = match measure {
        Measure::ConsonanceCf => {
            let cf = consonance_closed_form(need_family()?)?;
            claim = Some(cf.claim);
            (cf.value, Method::ClosedForm)
        }
        Measure::ConsonanceMinusConcurrence => {
            let fam = need_family()?;
            let cf = consonance_closed_form(fam)?;
            let conc = match concurrence_closed_form(fam) {
                Ok(c) => c,
                Err(_) => concurrence_2x2(&state.to_density())?,
            };
            (cf.value - conc, Method::ClosedForm)
        }
        Measure::Discord => (discord_closed_form(need_family()?)?, Method::ClosedForm),
        Measure::ConsonanceOpt => {
            let report = optimizer::consonance(&state.to_density(), config)?;
            feasible = Some(report.feasible);
            (report.value, Method::Optimized)
        }
        Measure::ConsonancePure => {
            let psi = state
                .as_pure()
                .ok_or_else(|| Error::usage("consonance_pure needs a pure state"))?;
            (consonance_pure_bipartite(psi)?, Method::General)
        }
        Measure::Concurrence => (concurrence_2x2(&state.to_density())?, Method::General),
        Measure::Eof => (eof_from_concurrence(concurrence_2x2(&state.to_density())?.min(1.0))?, Method::General),
        Measure::Negativity => (negativity(&state.to_density(), 0)?, Method::General),
        Measure::NonlocalSum => (coherence::nonlocal_sum(&state.to_density()), Method::General),
        Measure::LocalCoherence => (coherence::local_coherence(&state.to_density()), Method::General),
    };
    Ok(MeasureResult { name: measure.id().to_string(), value, family_params, method, feasible, claim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{Dims, ZERO};
    use crate::states::{bell, bell_like, pure_2x2, random_pure, two_param_qubit_qutrit, werner, BellKind};
    use approx::assert_abs_diff_eq;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn xlog2x_convention() {
        assert_eq!(xlog2x(0.0), 0.0);
        assert_abs_diff_eq!(xlog2x(0.5), -0.5);
    }

    #[test]
    fn schmidt_examples() {
        let (a, b) = (0.6, 0.8);
        let s = schmidt_decompose(&bell_like(r(a), r(b)).unwrap()).unwrap();
        assert_abs_diff_eq!(s.coefficients[0], 0.8, epsilon = 1e-14);
        assert_abs_diff_eq!(s.coefficients[1], 0.6, epsilon = 1e-14);

        let psi = pure_2x2(r(-0.5), r(0.5), r(0.5), r(0.5)).unwrap();
        let s = schmidt_decompose(&psi).unwrap();
        for p in &s.coefficients {
            assert_abs_diff_eq!(*p, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-14);
        }

        let prod = PureState::basis(Dims::new(vec![2, 3]).unwrap(), &[1, 2]).unwrap();
        let s = schmidt_decompose(&prod).unwrap();
        assert_abs_diff_eq!(s.coefficients[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.coefficients[1], 0.0, epsilon = 1e-14);
        assert_eq!(s.right_basis.nrows(), 3);
        assert_eq!(s.right_basis.ncols(), 3);
    }

    #[test]
    fn schmidt_rejects_tripartite() {
        let psi = crate::states::ghz(3).unwrap();
        assert!(matches!(schmidt_decompose(&psi), Err(Error::Usage(_))));
        assert!(consonance_pure_bipartite(&psi).is_err());
    }

    #[test]
    fn schmidt_reconstruction_and_unitary_bases() {
        for (seed, d) in [(1, vec![2, 2]), (2, vec![2, 3]), (3, vec![3, 2]), (4, vec![3, 4])] {
            let psi = random_pure(&Dims::new(d).unwrap(), seed);
            let s = schmidt_decompose(&psi).unwrap();
            let err = (s.reconstruct() - psi.amps()).norm();
            assert!(err < 1e-9, "reconstruction error {err}");
            let sum2: f64 = s.lambdas().iter().sum();
            assert_abs_diff_eq!(sum2, 1.0, epsilon = 1e-10);
            for u in [&s.left_basis, &s.right_basis] {
                let n = u.nrows();
                let defect = (u.adjoint() * u - CMatrix::identity(n, n)).norm();
                assert!(defect < 1e-10);
            }
        }
    }

    #[test]
    fn pure_consonance_examples() {
        let (a, b) = (0.8_f64.sqrt(), 0.2_f64.sqrt());
        let c = consonance_pure_bipartite(&bell_like(r(a), r(b)).unwrap()).unwrap();
        assert_abs_diff_eq!(c, 0.8, epsilon = 1e-12);
        let zero = PureState::basis(Dims::new(vec![2, 2]).unwrap(), &[0, 0]).unwrap();
        assert_abs_diff_eq!(consonance_pure_bipartite(&zero).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn concurrence_examples() {
        assert_abs_diff_eq!(concurrence_2x2(&werner(2.0 / 3.0).unwrap()).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(concurrence_2x2(&werner(0.2).unwrap()).unwrap(), 0.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phi = pure_2x2(r(h), ZERO, ZERO, r(h)).unwrap().to_density();
        assert_abs_diff_eq!(concurrence_2x2(&phi).unwrap(), 1.0, epsilon = 1e-12);
        let psi = pure_2x2(ZERO, r(h), r(h), ZERO).unwrap().to_density();
        assert_abs_diff_eq!(concurrence_2x2(&psi).unwrap(), 1.0, epsilon = 1e-12);
        let prod = PureState::basis(Dims::new(vec![2, 2]).unwrap(), &[0, 1]).unwrap().to_density();
        assert_abs_diff_eq!(concurrence_2x2(&prod).unwrap(), 0.0, epsilon = 1e-12);
        assert!(concurrence_2x2(&two_param_qubit_qutrit(0.1, 0.3).unwrap()).is_err());
    }

    #[test]
    fn eof_examples() {
        assert_abs_diff_eq!(eof_from_concurrence(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(eof_from_concurrence(1.0).unwrap(), 1.0, epsilon = 1e-15);
        // frozen from direct evaluation of the binary-entropy formula
        assert_abs_diff_eq!(eof_from_concurrence(0.25).unwrap(), 0.117_618_873_770_917_8, epsilon = 1e-12);
        assert!(eof_from_concurrence(1.1).is_err());
        let mut prev = 0.0;
        for k in 1..=100 {
            let e = eof_from_concurrence(k as f64 / 100.0).unwrap();
            assert!(e > prev);
            prev = e;
        }
    }

    #[test]
    fn negativity_examples() {
        let singlet = bell(BellKind::PsiMinus).to_density();
        assert_abs_diff_eq!(negativity(&singlet, 0).unwrap(), 1.0, epsilon = 1e-12);
        let rho = two_param_qubit_qutrit(0.05, 0.9).unwrap();
        assert_abs_diff_eq!(negativity(&rho, 0).unwrap(), 0.9, epsilon = 1e-12);
        let prod = PureState::basis(Dims::new(vec![2, 3]).unwrap(), &[1, 2]).unwrap().to_density();
        assert_abs_diff_eq!(negativity(&prod, 1).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn discord_werner_examples() {
        assert_abs_diff_eq!(discord_werner(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(discord_werner(1.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(discord_werner(1.0 / 3.0).unwrap(), 0.125_814_583_693_911_5, epsilon = 1e-12);
        assert_abs_diff_eq!(discord_werner(0.5).unwrap(), 0.262_483_183_763_734_4, epsilon = 1e-12);
        assert!(discord_werner(-0.1).is_err());
    }

    #[test]
    fn discord_bell_like_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(discord_bell_like(r(h), r(h)).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(discord_bell_like(r(1.0), ZERO).unwrap(), 0.0);
        let d = discord_bell_like(r(0.8_f64.sqrt()), r(0.2_f64.sqrt())).unwrap();
        // 2|ab| = 0.8; binary entropy of f = 0.8 gives 0.721928...
        assert_abs_diff_eq!(d, 0.721_928_094_887_362_4, epsilon = 1e-12);
        assert_abs_diff_eq!(d, eof_from_concurrence(0.8).unwrap(), epsilon = 1e-12);
        assert!(discord_bell_like(r(1.0), r(1.0)).is_err());
    }

    #[test]
    fn discord_2x3_examples() {
        let alpha = 0.1;
        assert_abs_diff_eq!(discord_2x3(alpha, (1.0 - 2.0 * alpha) / 4.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(discord_2x3(alpha, 0.0).unwrap(), (1.0 - 2.0 * alpha) / 3.0, epsilon = 1e-15);
        // direct evaluation at beta = 1/6, gamma = 0.3
        assert_abs_diff_eq!(discord_2x3(0.1, 0.3).unwrap(), 0.027_866_552_620_372_1, epsilon = 1e-12);
        assert!(discord_2x3(0.6, 0.0).is_err());
        assert!(discord_2x3(0.4, 0.5).is_err());
    }

    #[test]
    fn closed_forms() {
        let cf = |s: &str| consonance_closed_form(&s.parse().unwrap()).unwrap();
        assert_eq!(cf("werner:a=0.5").value, 0.5);
        assert_abs_diff_eq!(cf("two_param_2x3:alpha=0.1,gamma=0.3").value, 0.3 - 1.0 / 6.0, epsilon = 1e-15);
        let w = cf("w_state");
        assert_eq!(w.value, 1.0);
        assert_eq!(w.claim, Claim::PresetDependent);
        assert!(consonance_closed_form(&"random_pure:dims=2x2".parse().unwrap()).is_err());
    }

    #[test]
    fn measure_ids_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.id().parse::<Measure>().unwrap(), m);
        }
        assert_eq!("consonance".parse::<Measure>().unwrap(), Measure::ConsonanceOpt);
        assert!("dissonance".parse::<Measure>().is_err());
    }
}
