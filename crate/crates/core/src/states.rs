//! State families, tensor-product-structure relabelings and the factory-spec grammar.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::qstate::{CMatrix, CVector, DensityMatrix, Dims, PureState, TpsMatrix, C64, ZERO};

const NORM_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl FromStr for BellKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "phi+" | "phi_plus" | "phiplus" => Ok(BellKind::PhiPlus),
            "phi-" | "phi_minus" | "phiminus" => Ok(BellKind::PhiMinus),
            "psi+" | "psi_plus" | "psiplus" => Ok(BellKind::PsiPlus),
            "psi-" | "psi_minus" | "psiminus" => Ok(BellKind::PsiMinus),
            other => Err(Error::Parse(format!("unknown Bell state '{other}'"))),
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
        })
    }
}

fn qubit_pair() -> Dims {
    Dims::new(vec![2, 2]).expect("static dims")
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Amplitudes over `|00>, |01>, |10>, |11>`.
fn two_qubit(amps: [C64; 4]) -> Result<PureState> {
    PureState::with_tolerance(qubit_pair(), CVector::from_row_slice(&amps), NORM_TOL)
}

pub fn bell(kind: BellKind) -> PureState {
    let h = real(std::f64::consts::FRAC_1_SQRT_2);
    let amps = match kind {
        BellKind::PhiPlus => [h, ZERO, ZERO, h],
        BellKind::PhiMinus => [h, ZERO, ZERO, -h],
        BellKind::PsiPlus => [ZERO, h, h, ZERO],
        BellKind::PsiMinus => [ZERO, h, -h, ZERO],
    };
    two_qubit(amps).expect("Bell states are normalized")
}

/// `a|11> + b|00>`.
pub fn bell_like(a: C64, b: C64) -> Result<PureState> {
    two_qubit([b, ZERO, ZERO, a])
}

/// `a|10> + b|01>`.
pub fn psi_like(a: C64, b: C64) -> Result<PureState> {
    two_qubit([ZERO, b, a, ZERO])
}

/// `a|11> + b|10> + c|01> + d|00>`.
pub fn pure_2x2(a: C64, b: C64, c: C64, d: C64) -> Result<PureState> {
    two_qubit([d, c, b, a])
}

fn projector(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// `a |psi-><psi-| + (1 - a) I/4`.
pub fn werner(a: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::usage(format!("Werner parameter a = {a} outside [0, 1]")));
    }
    let singlet = projector(bell(BellKind::PsiMinus).amps());
    let mat = singlet.scale(a) + CMatrix::identity(4, 4).scale((1.0 - a) / 4.0);
    DensityMatrix::new(qubit_pair(), mat)
}

/// `beta = (1 - 2 alpha - gamma) / 3` from the unit-trace condition.
pub fn two_param_beta(alpha: f64, gamma: f64) -> f64 {
    (1.0 - 2.0 * alpha - gamma) / 3.0
}

/// Validated `(alpha, beta, gamma)` of the qubit-qutrit family.
pub fn two_param_coefficients(alpha: f64, gamma: f64) -> Result<(f64, f64, f64)> {
    // rounding residue from deriving alpha out of (beta, gamma)
    let alpha = if (-1e-12..0.0).contains(&alpha) { 0.0 } else { alpha };
    if !(0.0..=0.5).contains(&alpha) {
        return Err(Error::usage(format!("alpha = {alpha} outside [0, 1/2]")));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::usage(format!("gamma = {gamma} outside [0, 1]")));
    }
    let beta = two_param_beta(alpha, gamma);
    if beta < -1e-12 {
        return Err(Error::usage(format!("alpha = {alpha}, gamma = {gamma} give beta = {beta} < 0")));
    }
    Ok((alpha, beta.max(0.0), gamma))
}

/// Qubit-qutrit mixture
/// `alpha (|02><02| + |12><12|) + beta (Phi+ + Phi- + Psi+) + gamma Psi-`,
/// Bell vectors on qutrit levels {0, 1}.
pub fn two_param_qubit_qutrit(alpha: f64, gamma: f64) -> Result<DensityMatrix> {
    let (alpha, beta, gamma) = two_param_coefficients(alpha, gamma)?;
    let dims = Dims::new(vec![2, 3])?;
    let ket = |pairs: &[((usize, usize), f64)]| {
        let mut v = CVector::zeros(6);
        for &((i, j), amp) in pairs {
            v[i * 3 + j] = real(amp);
        }
        v
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let phi_p = ket(&[((0, 0), h), ((1, 1), h)]);
    let phi_m = ket(&[((0, 0), h), ((1, 1), -h)]);
    let psi_p = ket(&[((0, 1), h), ((1, 0), h)]);
    let psi_m = ket(&[((0, 1), h), ((1, 0), -h)]);
    let mat = (projector(&ket(&[((0, 2), 1.0)])) + projector(&ket(&[((1, 2), 1.0)]))).scale(alpha)
        + (projector(&phi_p) + projector(&phi_m) + projector(&psi_p)).scale(beta)
        + projector(&psi_m).scale(gamma);
    DensityMatrix::new(dims, mat)
}

/// `(|0..0> + |1..1>)/sqrt 2` on `n` qubits.
pub fn ghz(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::usage("GHZ state needs n >= 2"));
    }
    let dims = Dims::qubits(n)?;
    let mut amps = CVector::zeros(dims.total());
    let h = real(std::f64::consts::FRAC_1_SQRT_2);
    amps[0] = h;
    amps[dims.total() - 1] = h;
    PureState::new(dims, amps)
}

/// Equal superposition of the `n` single-excitation basis states.
pub fn w_state(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::usage("W state needs n >= 2"));
    }
    let dims = Dims::qubits(n)?;
    let mut amps = CVector::zeros(dims.total());
    let w = real(1.0 / (n as f64).sqrt());
    for k in 0..n {
        amps[1 << k] = w;
    }
    PureState::new(dims, amps)
}

/// Normalized complex-Gaussian vector; deterministic per seed.
pub fn random_pure(dims: &Dims, seed: u64) -> PureState {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    random_pure_with(dims, &mut rng)
}

fn random_pure_with(dims: &Dims, rng: &mut ChaCha20Rng) -> PureState {
    loop {
        let amps = CVector::from_fn(dims.total(), |_, _| {
            C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
        });
        if let Ok(p) = PureState::normalized(dims.clone(), amps) {
            return p;
        }
    }
}

/// Equal-weight mixture of `rank` random pure states.
pub fn random_density(dims: &Dims, seed: u64, rank: usize) -> Result<DensityMatrix> {
    let n = dims.total();
    if rank == 0 || rank > n {
        return Err(Error::usage(format!("rank {rank} must be in 1..={n}")));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut mat = CMatrix::zeros(n, n);
    for _ in 0..rank {
        mat += projector(random_pure_with(dims, &mut rng).amps());
    }
    DensityMatrix::new(dims.clone(), mat.unscale(rank as f64))
}

/// A change of tensor product structure: source basis vector `k` (column `k` of
/// `source_basis`) becomes the target computational basis state with flat index `map[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TpsRelabeling {
    source_dims: Dims,
    target_dims: Dims,
    source_basis: CMatrix,
    map: Vec<usize>,
}

impl TpsRelabeling {
    pub fn new(source_dims: Dims, target_dims: Dims, source_basis: CMatrix, map: Vec<usize>) -> Result<Self> {
        let n = source_dims.total();
        if target_dims.total() != n {
            return Err(Error::usage(format!("relabeling {source_dims} -> {target_dims} changes the dimension")));
        }
        if source_basis.nrows() != n || source_basis.ncols() != n {
            return Err(Error::usage("source basis has the wrong shape"));
        }
        let defect = (source_basis.adjoint() * &source_basis - CMatrix::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if defect > 1e-10 {
            return Err(Error::validation(format!("source basis is not orthonormal (defect {defect:.3e})")));
        }
        let mut seen = vec![false; n];
        if map.len() != n || map.iter().any(|&t| t >= n || std::mem::replace(&mut seen[t], true)) {
            return Err(Error::usage(format!("relabeling map {map:?} is not a bijection on 0..{n}")));
        }
        Ok(TpsRelabeling { source_dims, target_dims, source_basis, map })
    }

    /// Pure relabeling of computational product states.
    pub fn permutation(source_dims: Dims, target_dims: Dims, map: Vec<usize>) -> Result<Self> {
        let n = source_dims.total();
        Self::new(source_dims, target_dims, CMatrix::identity(n, n), map)
    }

    pub fn identity(dims: &Dims) -> Self {
        let n = dims.total();
        Self::permutation(dims.clone(), dims.clone(), (0..n).collect()).expect("identity relabeling")
    }

    /// Bell basis to product basis:
    /// `|psi+> -> |0,0>`, `|psi-> -> |0,1>`, `|phi+> -> |1,0>`, `|phi-> -> |1,1>`,
    /// i.e. first factor `{|Psi>, |Phi>} = {0, 1}` and second factor `{|+'>, |-'>} = {0, 1}`.
    pub fn werner_f_prime() -> Self {
        let kets = [BellKind::PsiPlus, BellKind::PsiMinus, BellKind::PhiPlus, BellKind::PhiMinus];
        let basis = CMatrix::from_columns(&kets.map(|k| bell(k).amps().clone()));
        Self::new(qubit_pair(), qubit_pair(), basis, vec![0, 1, 2, 3]).expect("Bell basis is orthonormal")
    }

    /// Built-in relabelings by name: `werner-f-prime`, `identity:<dims>`.
    pub fn named(name: &str, dims: &Dims) -> Result<Self> {
        match name.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "werner-f-prime" | "f-prime" => Ok(Self::werner_f_prime()),
            "identity" => Ok(Self::identity(dims)),
            other => Err(Error::Parse(format!("unknown relabeling '{other}'"))),
        }
    }

    pub fn source_dims(&self) -> &Dims {
        &self.source_dims
    }

    pub fn target_dims(&self) -> &Dims {
        &self.target_dims
    }

    /// `W = sum_k |map(k)><b_k|`.
    pub fn unitary(&self) -> CMatrix {
        let n = self.source_dims.total();
        let mut w = CMatrix::zeros(n, n);
        for (k, &t) in self.map.iter().enumerate() {
            for c in 0..n {
                w[(t, c)] = self.source_basis[(c, k)].conj();
            }
        }
        w
    }
}

/// Rewrite `rho` in the relabeled tensor product structure.
pub fn tps_remap(rho: &DensityMatrix, relabeling: &TpsRelabeling) -> Result<DensityMatrix> {
    if rho.dims() != &relabeling.source_dims {
        return Err(Error::usage(format!(
            "state dims {} do not match relabeling source {}",
            rho.dims(),
            relabeling.source_dims
        )));
    }
    let w = relabeling.unitary();
    let m = &w * rho.matrix() * w.adjoint();
    Ok(DensityMatrix::from_parts(relabeling.target_dims.clone(), m))
}

/// Either kind of state a factory or state file can produce.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyState {
    Pure(PureState),
    Density(DensityMatrix),
}

impl AnyState {
    pub fn dims(&self) -> &Dims {
        match self {
            AnyState::Pure(p) => p.dims(),
            AnyState::Density(d) => d.dims(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            AnyState::Pure(p) => p.to_density(),
            AnyState::Density(d) => d.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            AnyState::Pure(p) => Some(p),
            AnyState::Density(_) => None,
        }
    }
}

/// A named state family with its parameters, parsed from `name(:key=value(,key=value)*)?`.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Werner { a: f64 },
    TwoParam2x3 { alpha: f64, gamma: f64 },
    Bell(BellKind),
    BellLike { a: f64, b: f64 },
    PsiLike { a: f64, b: f64 },
    Pure2x2 { a: f64, b: f64, c: f64, d: f64 },
    Ghz { n: usize },
    W { n: usize },
    Basis { dims: Dims, index: Vec<usize> },
    MaximallyMixed { dims: Dims },
    RandomPure { dims: Dims, seed: u64 },
    RandomDensity { dims: Dims, seed: u64, rank: usize },
}

/// Parameter bag with typed accessors that report which key is wrong.
struct Params<'a> {
    family: &'a str,
    map: &'a BTreeMap<String, String>,
}

impl Params<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    fn f64_opt(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key)
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("{}: '{key}={v}' is not a number", self.family)))
            })
            .transpose()
    }

    fn f64(&self, key: &str) -> Result<f64> {
        self.f64_opt(key)?
            .ok_or_else(|| Error::Parse(format!("{}: missing parameter '{key}'", self.family)))
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.f64_opt(key)?.unwrap_or(default))
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{}: '{key}={v}' is not a non-negative integer", self.family))),
        }
    }

    fn dims(&self) -> Result<Dims> {
        let v = self
            .raw("dims")
            .ok_or_else(|| Error::Parse(format!("{}: missing parameter 'dims'", self.family)))?;
        parse_dims(v)
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.map.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::Parse(format!(
                "{}: unknown parameter '{k}' (expected one of {allowed:?})",
                self.family
            ))),
            None => Ok(()),
        }
    }
}

/// `2x3`, `2.3` or `2;3`.
pub fn parse_dims(s: &str) -> Result<Dims> {
    let parts: std::result::Result<Vec<usize>, _> =
        s.split(['x', '.', ';', '*']).map(|p| p.trim().parse::<usize>()).collect();
    Dims::new(parts.map_err(|_| Error::Parse(format!("bad dims '{s}'")))?)
}

fn split_spec(spec: &str) -> Result<(String, Option<String>, BTreeMap<String, String>)> {
    let spec = spec.trim();
    let (name, rest) = match spec.split_once(':') {
        Some((n, r)) => (n, Some(r)),
        None => (spec, None),
    };
    let name = name.trim().to_ascii_lowercase().replace('-', "_");
    if name.is_empty() {
        return Err(Error::Parse("empty factory name".into()));
    }
    let mut positional = None;
    let mut map = BTreeMap::new();
    if let Some(rest) = rest {
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.split_once('=') {
                Some((k, v)) => {
                    if map.insert(k.trim().to_ascii_lowercase(), v.trim().to_string()).is_some() {
                        return Err(Error::Parse(format!("duplicate parameter '{k}'")));
                    }
                }
                None if positional.is_none() => positional = Some(item.to_string()),
                None => return Err(Error::Parse(format!("unexpected bare token '{item}'"))),
            }
        }
    }
    Ok((name, positional, map))
}

/// Amplitude pair from `a`/`b` or from `a2 = |a|^2`.
fn amplitude_pair(p: &Params) -> Result<(f64, f64)> {
    p.check_keys(&["a", "b", "a2"])?;
    if let Some(a2) = p.f64_opt("a2")? {
        if !(0.0..=1.0).contains(&a2) {
            return Err(Error::usage(format!("{}: a2 = {a2} outside [0, 1]", p.family)));
        }
        return Ok((a2.sqrt(), (1.0 - a2).sqrt()));
    }
    let a = p.f64("a")?;
    let b = match p.f64_opt("b")? {
        Some(b) => b,
        None => (1.0 - a * a).max(0.0).sqrt(),
    };
    Ok((a, b))
}

impl Family {
    /// Build from a family name and string-valued parameters.
    pub fn from_parts(name: &str, positional: Option<&str>, map: &BTreeMap<String, String>) -> Result<Self> {
        let name = name.to_ascii_lowercase().replace('-', "_");
        let p = Params { family: &name, map };
        let fam = match name.as_str() {
            "werner" => {
                p.check_keys(&["a"])?;
                Family::Werner { a: p.f64("a")? }
            }
            "two_param_2x3" | "two_param_qubit_qutrit" | "qubit_qutrit" => {
                p.check_keys(&["alpha", "beta", "gamma"])?;
                let (alpha, beta, gamma) = (p.f64_opt("alpha")?, p.f64_opt("beta")?, p.f64_opt("gamma")?);
                let (alpha, gamma) = match (alpha, beta, gamma) {
                    (Some(a), None, Some(g)) => (a, g),
                    (None, Some(b), Some(g)) => ((1.0 - 3.0 * b - g) / 2.0, g),
                    (Some(a), Some(b), None) => (a, 1.0 - 2.0 * a - 3.0 * b),
                    _ => {
                        return Err(Error::Parse(format!(
                            "{name}: give exactly two of alpha, beta, gamma"
                        )))
                    }
                };
                Family::TwoParam2x3 { alpha, gamma }
            }
            "bell" => {
                p.check_keys(&["kind"])?;
                let kind = positional
                    .or(p.raw("kind"))
                    .ok_or_else(|| Error::Parse("bell: missing kind (phi+, phi-, psi+, psi-)".into()))?;
                Family::Bell(kind.parse()?)
            }
            "bell_like" => {
                let (a, b) = amplitude_pair(&p)?;
                Family::BellLike { a, b }
            }
            "psi_like" => {
                let (a, b) = amplitude_pair(&p)?;
                Family::PsiLike { a, b }
            }
            "pure_2x2" => {
                p.check_keys(&["a", "b", "c", "d"])?;
                Family::Pure2x2 {
                    a: p.f64_or("a", 0.0)?,
                    b: p.f64_or("b", 0.0)?,
                    c: p.f64_or("c", 0.0)?,
                    d: p.f64_or("d", 0.0)?,
                }
            }
            "ghz" => {
                p.check_keys(&["n"])?;
                Family::Ghz { n: p.usize_or("n", 3)? }
            }
            "w" | "w_state" => {
                p.check_keys(&["n"])?;
                Family::W { n: p.usize_or("n", 3)? }
            }
            "basis" => {
                p.check_keys(&["dims", "index"])?;
                let dims = p.dims()?;
                let raw = p.raw("index").unwrap_or("0");
                let index = raw
                    .chars()
                    .filter(|c| !matches!(c, '.' | 'x' | ';'))
                    .map(|c| c.to_digit(10).map(|d| d as usize))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::Parse(format!("basis: bad index '{raw}'")))?;
                Family::Basis { dims, index }
            }
            "maximally_mixed" | "mixed" => {
                p.check_keys(&["dims"])?;
                Family::MaximallyMixed { dims: p.dims()? }
            }
            "random_pure" => {
                p.check_keys(&["dims", "seed"])?;
                Family::RandomPure { dims: p.dims()?, seed: p.usize_or("seed", 0)? as u64 }
            }
            "random_density" => {
                p.check_keys(&["dims", "seed", "rank"])?;
                let dims = p.dims()?;
                let rank = p.usize_or("rank", dims.total())?;
                Family::RandomDensity { dims, seed: p.usize_or("seed", 0)? as u64, rank }
            }
            other => return Err(Error::Parse(format!("unknown state family '{other}'"))),
        };
        if positional.is_some() && !matches!(fam, Family::Bell(_)) {
            return Err(Error::Parse(format!("{name}: parameters must be key=value")));
        }
        Ok(fam)
    }

    /// Canonical family identifier.
    pub fn name(&self) -> &'static str {
        match self {
            Family::Werner { .. } => "werner",
            Family::TwoParam2x3 { .. } => "two_param_2x3",
            Family::Bell(_) => "bell",
            Family::BellLike { .. } => "bell_like",
            Family::PsiLike { .. } => "psi_like",
            Family::Pure2x2 { .. } => "pure_2x2",
            Family::Ghz { .. } => "ghz",
            Family::W { .. } => "w_state",
            Family::Basis { .. } => "basis",
            Family::MaximallyMixed { .. } => "maximally_mixed",
            Family::RandomPure { .. } => "random_pure",
            Family::RandomDensity { .. } => "random_density",
        }
    }

    /// Numeric parameters, for reports.
    pub fn params(&self) -> BTreeMap<String, f64> {
        let pairs: Vec<(&str, f64)> = match *self {
            Family::Werner { a } => vec![("a", a)],
            Family::TwoParam2x3 { alpha, gamma } => {
                vec![("alpha", alpha), ("beta", two_param_beta(alpha, gamma)), ("gamma", gamma)]
            }
            Family::BellLike { a, b } | Family::PsiLike { a, b } => vec![("a", a), ("b", b)],
            Family::Pure2x2 { a, b, c, d } => vec![("a", a), ("b", b), ("c", c), ("d", d)],
            Family::Ghz { n } | Family::W { n } => vec![("n", n as f64)],
            Family::RandomPure { seed, .. } => vec![("seed", seed as f64)],
            Family::RandomDensity { seed, rank, .. } => vec![("seed", seed as f64), ("rank", rank as f64)],
            Family::Bell(_) | Family::Basis { .. } | Family::MaximallyMixed { .. } => vec![],
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    pub fn state(&self) -> Result<AnyState> {
        Ok(match self {
            Family::Werner { a } => AnyState::Density(werner(*a)?),
            Family::TwoParam2x3 { alpha, gamma } => AnyState::Density(two_param_qubit_qutrit(*alpha, *gamma)?),
            Family::Bell(k) => AnyState::Pure(bell(*k)),
            Family::BellLike { a, b } => AnyState::Pure(bell_like(real(*a), real(*b))?),
            Family::PsiLike { a, b } => AnyState::Pure(psi_like(real(*a), real(*b))?),
            Family::Pure2x2 { a, b, c, d } => AnyState::Pure(pure_2x2(real(*a), real(*b), real(*c), real(*d))?),
            Family::Ghz { n } => AnyState::Pure(ghz(*n)?),
            Family::W { n } => AnyState::Pure(w_state(*n)?),
            Family::Basis { dims, index } => AnyState::Pure(PureState::basis(dims.clone(), index)?),
            Family::MaximallyMixed { dims } => AnyState::Density(DensityMatrix::maximally_mixed(dims.clone())),
            Family::RandomPure { dims, seed } => AnyState::Pure(random_pure(dims, *seed)),
            Family::RandomDensity { dims, seed, rank } => AnyState::Density(random_density(dims, *seed, *rank)?),
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (name, positional, map) = split_spec(s)?;
        Family::from_parts(&name, positional.as_deref(), &map)
    }
}
