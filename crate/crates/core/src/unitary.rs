//! Unitary parameterization and circuits of non-global layers.
//!
//! A `d x d` unitary is `U(theta) = exp(i H(theta))` where `H` is the Hermitian
//! matrix whose diagonal is `theta[0..d]` and whose upper triangle, in
//! lexicographic `(j, k)` order, holds `theta[d + 2p] + i * theta[d + 2p + 1]`.
//! The exponential map of the compact group `U(d)` is onto, so every unitary
//! has a preimage; [`UnitaryParams::from_unitary`] computes one.

use std::fmt;
use std::str::FromStr;

use nalgebra::Schur;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{eigh, CMatrix, DensityMatrix, Dims, TpsMatrix, C64, ZERO};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitaryParams {
    dim: usize,
    theta: Vec<f64>,
}

impl UnitaryParams {
    pub fn new(dim: usize, theta: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::usage("unitary dimension must be positive"));
        }
        if theta.len() != dim * dim {
            return Err(Error::usage(format!(
                "a {dim}x{dim} unitary takes {} parameters, got {}",
                dim * dim,
                theta.len()
            )));
        }
        Ok(UnitaryParams { dim, theta })
    }

    pub fn zeros(dim: usize) -> Self {
        UnitaryParams { dim, theta: vec![0.0; dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// The Hermitian generator `H(theta)`.
    pub fn generator(&self) -> CMatrix {
        generator_from_slice(self.dim, &self.theta)
    }

    /// Parameters of a Hermitian generator (its anti-Hermitian part is ignored).
    pub fn from_generator(h: &CMatrix) -> Result<Self> {
        let d = h.nrows();
        if h.ncols() != d {
            return Err(Error::usage("generator must be square"));
        }
        let mut theta = Vec::with_capacity(d * d);
        for k in 0..d {
            theta.push(h[(k, k)].re);
        }
        for j in 0..d {
            for k in j + 1..d {
                let z = (h[(j, k)] + h[(k, j)].conj()) * 0.5;
                theta.push(z.re);
                theta.push(z.im);
            }
        }
        UnitaryParams::new(d, theta)
    }

    /// A parameter vector with `build_unitary(p) == u`, via the principal logarithm.
    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        let d = u.nrows();
        if u.ncols() != d {
            return Err(Error::usage("unitary must be square"));
        }
        let defect = (u.adjoint() * u - CMatrix::identity(d, d)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if defect > 1e-8 {
            return Err(Error::validation(format!("matrix is not unitary (defect {defect:.3e})")));
        }
        let (q, t) = Schur::new(u.clone()).unpack();
        let phases = CMatrix::from_fn(d, d, |r, c| if r == c { C64::new(t[(r, r)].arg(), 0.0) } else { ZERO });
        let h = &q * phases * q.adjoint();
        UnitaryParams::from_generator(&h)
    }
}

fn generator_from_slice(d: usize, theta: &[f64]) -> CMatrix {
    let mut h = CMatrix::zeros(d, d);
    for k in 0..d {
        h[(k, k)] = C64::new(theta[k], 0.0);
    }
    let mut p = d;
    for j in 0..d {
        for k in j + 1..d {
            let z = C64::new(theta[p], theta[p + 1]);
            h[(j, k)] = z;
            h[(k, j)] = z.conj();
            p += 2;
        }
    }
    h
}

/// `exp(i H)` for Hermitian `H`, through its eigen-decomposition.
pub fn expm_i_hermitian(h: &CMatrix) -> CMatrix {
    let (vals, vecs) = eigh(h);
    let mut scaled = vecs.clone();
    for (k, &lam) in vals.iter().enumerate() {
        let phase = C64::from_polar(1.0, lam);
        for r in 0..scaled.nrows() {
            scaled[(r, k)] *= phase;
        }
    }
    scaled * vecs.adjoint()
}

pub fn build_unitary(params: &UnitaryParams) -> CMatrix {
    unitary_from_slice(params.dim, &params.theta)
}

fn unitary_from_slice(d: usize, theta: &[f64]) -> CMatrix {
    if theta.iter().all(|&t| t == 0.0) {
        return CMatrix::identity(d, d);
    }
    expm_i_hermitian(&generator_from_slice(d, theta))
}

/// Unitary search space for the optimizer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Preset {
    /// One unitary per party, `U_1 (x) U_2 (x) ...`.
    #[default]
    SingleParty,
    /// `depth` layers, each acting on a strict subset of the parties.
    NonglobalCircuit(usize),
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::SingleParty => f.write_str("SINGLE_PARTY"),
            Preset::NonglobalCircuit(d) => write!(f, "NONGLOBAL_CIRCUIT({d})"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    /// Accepts `SINGLE_PARTY`, `single_party`, `single`, `NONGLOBAL_CIRCUIT(3)`,
    /// `nonglobal:3` and bare `nonglobal` (depth 3).
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        if matches!(norm.as_str(), "single_party" | "single") {
            return Ok(Preset::SingleParty);
        }
        let rest = norm
            .strip_prefix("nonglobal_circuit")
            .or_else(|| norm.strip_prefix("nonglobal"))
            .ok_or_else(|| Error::Parse(format!("unknown preset '{s}'")))?;
        let depth_str = rest.trim_start_matches([':', '(', '=']).trim_end_matches(')');
        let depth = if depth_str.is_empty() {
            3
        } else {
            depth_str.parse::<usize>().map_err(|_| Error::Parse(format!("bad depth in preset '{s}'")))?
        };
        if depth == 0 {
            return Err(Error::Parse("preset depth must be positive".into()));
        }
        Ok(Preset::NonglobalCircuit(depth))
    }
}

impl Serialize for Preset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Preset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Default layer supports: every strict subset of size one or two, in lexicographic order.
pub fn default_supports(parties: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 0..parties {
        if parties > 1 {
            out.push(vec![a]);
        }
        for b in a + 1..parties {
            if parties > 2 {
                out.push(vec![a, b]);
            }
        }
    }
    out.sort();
    out
}

/// Layer supports for `preset` on `parties` parties. `supports` overrides the
/// default support list of [`Preset::NonglobalCircuit`] and is cycled to fill `depth` layers.
pub fn layer_supports(preset: Preset, parties: usize, supports: Option<&[Vec<usize>]>) -> Result<Vec<Vec<usize>>> {
    let out: Vec<Vec<usize>> = match preset {
        Preset::SingleParty => (0..parties).map(|p| vec![p]).collect(),
        Preset::NonglobalCircuit(depth) => {
            let list = supports.map(<[_]>::to_vec).unwrap_or_else(|| default_supports(parties));
            if list.is_empty() {
                return Err(Error::Constraint(format!("no strict-subset supports exist for {parties} parties")));
            }
            list.iter().cycle().take(depth).cloned().collect()
        }
    };
    for s in &out {
        check_support(s, parties)?;
    }
    Ok(out)
}

fn check_support(support: &[usize], parties: usize) -> Result<()> {
    if support.is_empty() {
        return Err(Error::Constraint("layer support is empty".into()));
    }
    if support.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Constraint(format!("layer support {support:?} is not strictly increasing")));
    }
    if support.iter().any(|&p| p >= parties) {
        return Err(Error::Constraint(format!("layer support {support:?} names a party >= {parties}")));
    }
    if support.len() >= parties {
        return Err(Error::Constraint(format!("layer support {support:?} covers every party (global unitary)")));
    }
    Ok(())
}

/// One parameterized unitary on a strict subset of the parties.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "LayerRepr", try_from = "LayerRepr")]
pub struct CircuitLayer {
    support: Vec<usize>,
    params: UnitaryParams,
}

#[derive(Serialize, Deserialize)]
struct LayerRepr {
    support: Vec<usize>,
    theta: Vec<f64>,
}

impl From<CircuitLayer> for LayerRepr {
    fn from(l: CircuitLayer) -> Self {
        LayerRepr { support: l.support, theta: l.params.theta }
    }
}

impl TryFrom<LayerRepr> for CircuitLayer {
    type Error = Error;
    fn try_from(r: LayerRepr) -> Result<Self> {
        let dim = (r.theta.len() as f64).sqrt().round() as usize;
        Ok(CircuitLayer { support: r.support, params: UnitaryParams::new(dim, r.theta)? })
    }
}

impl CircuitLayer {
    pub fn new(support: Vec<usize>, params: UnitaryParams) -> Self {
        CircuitLayer { support, params }
    }

    /// Layer whose unitary is `u`.
    pub fn from_unitary(support: Vec<usize>, u: &CMatrix) -> Result<Self> {
        Ok(CircuitLayer { support, params: UnitaryParams::from_unitary(u)? })
    }

    pub fn identity(support: Vec<usize>, dims: &Dims) -> Self {
        let dim = support.iter().map(|&p| dims.as_slice()[p]).product();
        CircuitLayer { support, params: UnitaryParams::zeros(dim) }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn params(&self) -> &UnitaryParams {
        &self.params
    }

    fn check(&self, dims: &Dims) -> Result<()> {
        check_support(&self.support, dims.parties())?;
        let dim: usize = self.support.iter().map(|&p| dims.as_slice()[p]).product();
        if dim != self.params.dim {
            return Err(Error::usage(format!(
                "layer on {:?} needs a {dim}-dimensional unitary, has {}",
                self.support, self.params.dim
            )));
        }
        Ok(())
    }
}

/// Full-space unitary acting as the layer's unitary on its support and identity elsewhere.
pub fn embed(layer: &CircuitLayer, dims: &Dims) -> Result<CMatrix> {
    layer.check(dims)?;
    Ok(embed_matrix(&build_unitary(&layer.params), &layer.support, dims))
}

fn embed_matrix(u: &CMatrix, support: &[usize], dims: &Dims) -> CMatrix {
    let n = dims.total();
    let d = dims.as_slice();
    if support.len() == 1 {
        // kron(I_left, U, I_right)
        let p = support[0];
        let left: usize = d[..p].iter().product();
        let right: usize = d[p + 1..].iter().product();
        return CMatrix::identity(left, left).kronecker(u).kronecker(&CMatrix::identity(right, right));
    }
    let sub_dims: Vec<usize> = support.iter().map(|&p| d[p]).collect();
    let np = dims.parties();
    let mut split = Vec::with_capacity(n);
    let mut multi = vec![0; np];
    for flat in 0..n {
        dims.decode_into(flat, &mut multi);
        let sub = support.iter().zip(&sub_dims).fold(0, |acc, (&p, &sd)| acc * sd + multi[p]);
        for &p in support {
            multi[p] = 0;
        }
        split.push((sub, dims.encode(&multi)));
    }
    let mut out = CMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            if split[r].1 == split[c].1 {
                out[(r, c)] = u[(split[r].0, split[c].0)];
            }
        }
    }
    out
}

/// An ordered list of non-global layers; layer 0 is applied first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalCircuit {
    preset: Preset,
    layers: Vec<CircuitLayer>,
}

impl LocalCircuit {
    pub fn new(preset: Preset, layers: Vec<CircuitLayer>) -> Self {
        LocalCircuit { preset, layers }
    }

    /// All-zero parameters on the default layout of `preset`.
    pub fn identity(preset: Preset, dims: &Dims) -> Result<Self> {
        Self::identity_with_supports(preset, dims, None)
    }

    pub fn identity_with_supports(preset: Preset, dims: &Dims, supports: Option<&[Vec<usize>]>) -> Result<Self> {
        let layers = layer_supports(preset, dims.parties(), supports)?
            .into_iter()
            .map(|s| CircuitLayer::identity(s, dims))
            .collect();
        Ok(LocalCircuit { preset, layers })
    }

    /// Product of per-party unitaries `u[0] (x) u[1] (x) ...`.
    pub fn single_party(unitaries: &[CMatrix]) -> Result<Self> {
        let layers = unitaries
            .iter()
            .enumerate()
            .map(|(p, u)| CircuitLayer::from_unitary(vec![p], u))
            .collect::<Result<_>>()?;
        Ok(LocalCircuit { preset: Preset::SingleParty, layers })
    }

    pub fn preset(&self) -> Preset {
        self.preset
    }

    pub fn layers(&self) -> &[CircuitLayer] {
        &self.layers
    }

    pub fn num_params(&self) -> usize {
        self.layers.iter().map(|l| l.params.theta.len()).sum()
    }

    /// All layer parameters concatenated in layer order.
    pub fn flat_params(&self) -> Vec<f64> {
        self.layers.iter().flat_map(|l| l.params.theta.iter().copied()).collect()
    }

    /// Same layout, new parameters.
    pub fn with_flat_params(&self, theta: &[f64]) -> Result<Self> {
        if theta.len() != self.num_params() {
            return Err(Error::usage(format!(
                "circuit takes {} parameters, got {}",
                self.num_params(),
                theta.len()
            )));
        }
        let mut at = 0;
        let layers = self
            .layers
            .iter()
            .map(|l| {
                let k = l.params.theta.len();
                let params = UnitaryParams { dim: l.params.dim, theta: theta[at..at + k].to_vec() };
                at += k;
                CircuitLayer { support: l.support.clone(), params }
            })
            .collect();
        Ok(LocalCircuit { preset: self.preset, layers })
    }

    /// Structural check against `dims`, including the preset invariants.
    pub fn validate_for(&self, dims: &Dims) -> Result<()> {
        for l in &self.layers {
            l.check(dims)?;
        }
        match self.preset {
            Preset::SingleParty => {
                let ok = self.layers.len() == dims.parties()
                    && self.layers.iter().enumerate().all(|(p, l)| l.support == [p]);
                if !ok {
                    return Err(Error::Constraint("SINGLE_PARTY circuit needs one singleton layer per party".into()));
                }
            }
            Preset::NonglobalCircuit(depth) => {
                if self.layers.len() > depth {
                    return Err(Error::Constraint(format!(
                        "{} layers exceed NONGLOBAL_CIRCUIT depth {depth}",
                        self.layers.len()
                    )));
                }
            }
        }
        Ok(())
    }

    /// `U_total = E_last ... E_0`.
    pub fn total_unitary(&self, dims: &Dims) -> Result<CMatrix> {
        self.validate_for(dims)?;
        Ok(self.total_unitary_unchecked(dims))
    }

    fn total_unitary_unchecked(&self, dims: &Dims) -> CMatrix {
        if self.preset == Preset::SingleParty {
            return self
                .layers
                .iter()
                .map(|l| build_unitary(&l.params))
                .reduce(|acc, u| acc.kronecker(&u))
                .expect("at least one party");
        }
        let n = dims.total();
        let mut total = CMatrix::identity(n, n);
        for l in &self.layers {
            if l.params.theta.iter().all(|&t| t == 0.0) {
                continue;
            }
            total = embed_matrix(&build_unitary(&l.params), &l.support, dims) * total;
        }
        total
    }
}

/// `U rho U^dagger` for the circuit's total unitary.
pub fn apply(circuit: &LocalCircuit, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let u = circuit.total_unitary(rho.dims())?;
    Ok(conjugate(&u, rho))
}

pub(crate) fn conjugate(u: &CMatrix, rho: &DensityMatrix) -> DensityMatrix {
    let m = u * rho.matrix() * u.adjoint();
    DensityMatrix::from_parts(rho.dims().clone(), m)
}

/// Flat parameter vector to total unitary for a fixed layout, used in the optimizer's inner loop.
#[derive(Clone, Debug)]
pub(crate) struct CircuitTemplate {
    pub(crate) dims: Dims,
    pub(crate) template: LocalCircuit,
}

impl CircuitTemplate {
    pub(crate) fn new(template: LocalCircuit, dims: &Dims) -> Result<Self> {
        template.validate_for(dims)?;
        Ok(CircuitTemplate { dims: dims.clone(), template })
    }

    pub(crate) fn num_params(&self) -> usize {
        self.template.num_params()
    }

    pub(crate) fn unitary(&self, theta: &[f64]) -> CMatrix {
        let mut at = 0;
        let n = self.dims.total();
        let single = self.template.preset == Preset::SingleParty;
        let mut total: Option<CMatrix> = None;
        for l in &self.template.layers {
            let d = l.params.dim;
            let u = unitary_from_slice(d, &theta[at..at + d * d]);
            at += d * d;
            total = Some(match total {
                None if single => u,
                Some(acc) if single => acc.kronecker(&u),
                None => embed_matrix(&u, &l.support, &self.dims),
                Some(acc) => embed_matrix(&u, &l.support, &self.dims) * acc,
            });
        }
        total.unwrap_or_else(|| CMatrix::identity(n, n))
    }

    pub(crate) fn circuit(&self, theta: &[f64]) -> LocalCircuit {
        self.template.with_flat_params(theta).expect("template parameter count")
    }
}

/// Circuit in the default `NONGLOBAL_CIRCUIT(3)` layout for three qubits
/// (supports `[0]`, `[0,1]`, `[0,2]`) that maps the GHZ state to `|000>`:
/// CNOT from party 0 to 1, then CNOT from 0 to 2 followed by a Hadamard on 0.
pub fn ghz3_disentangler() -> LocalCircuit {
    let one = C64::new(1.0, 0.0);
    let mut cnot = CMatrix::zeros(4, 4);
    for (a, b) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        cnot[(a, b)] = one;
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let hadamard = CMatrix::from_row_slice(2, 2, &[C64::new(h, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0)]);
    let h_then = hadamard.kronecker(&CMatrix::identity(2, 2)) * &cnot;
    let dims = Dims::qubits(3).expect("three qubits");
    LocalCircuit::new(
        Preset::NonglobalCircuit(3),
        vec![
            CircuitLayer::identity(vec![0], &dims),
            CircuitLayer::from_unitary(vec![0, 1], &cnot).expect("unitary"),
            CircuitLayer::from_unitary(vec![0, 2], &h_then).expect("unitary"),
        ],
    )
}
