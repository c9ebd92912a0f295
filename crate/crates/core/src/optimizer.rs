//! Consonance: the infimum of the nonlocal sum over a local-unitary search
//! space, subject to vanishing local coherence.
//!
//! Each restart minimizes the exterior penalty `S + mu * L` through a staged
//! `mu` schedule, then polishes feasibility by minimizing the squared local
//! coherence alone. Restarts run in parallel and are merged in index order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coherence::{self, ClassMask, CoherenceClass};
use crate::error::{Error, Result};
use crate::nelder_mead::{self, Settings};
use crate::qstate::{validate, CMatrix, DensityMatrix, TpsMatrix, Tolerances};
use crate::unitary::{apply, CircuitTemplate, LocalCircuit, Preset};

fn default_restarts() -> usize {
    32
}
fn default_mu0() -> f64 {
    10.0
}
fn default_mu_growth() -> f64 {
    10.0
}
fn default_mu_stages() -> usize {
    4
}
fn default_eps_l() -> f64 {
    1e-6
}
fn default_tol_value() -> f64 {
    1e-6
}
fn default_max_evals() -> usize {
    20_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    #[serde(default)]
    pub preset: Preset,
    /// Random starts in addition to the identity start.
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_mu0")]
    pub mu0: f64,
    #[serde(default = "default_mu_growth")]
    pub mu_growth: f64,
    #[serde(default = "default_mu_stages")]
    pub mu_stages: usize,
    #[serde(default = "default_eps_l")]
    pub eps_l: f64,
    #[serde(default = "default_tol_value")]
    pub tol_value: f64,
    #[serde(default = "default_max_evals")]
    pub max_evals: usize,
    /// Layer supports for `NONGLOBAL_CIRCUIT`; the default list when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supports: Option<Vec<Vec<usize>>>,
    /// Extra starting circuits, tried right after the identity start.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warm_starts: Vec<LocalCircuit>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            preset: Preset::default(),
            restarts: default_restarts(),
            seed: 0,
            mu0: default_mu0(),
            mu_growth: default_mu_growth(),
            mu_stages: default_mu_stages(),
            eps_l: default_eps_l(),
            tol_value: default_tol_value(),
            max_evals: default_max_evals(),
            supports: None,
            warm_starts: Vec::new(),
        }
    }
}

impl OptimizerConfig {
    pub fn with_preset(preset: Preset) -> Self {
        OptimizerConfig { preset, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::usage(format!("{name} must be positive, got {v}")))
            }
        };
        positive("mu0", self.mu0)?;
        positive("tol_value", self.tol_value)?;
        positive("eps_L", self.eps_l)?;
        if self.mu_growth < 1.0 {
            return Err(Error::usage(format!("mu_growth must be at least 1, got {}", self.mu_growth)));
        }
        if self.eps_l >= 1e-3 {
            return Err(Error::usage(format!("eps_L must be below 1e-3, got {}", self.eps_l)));
        }
        if self.mu_stages == 0 || self.max_evals == 0 {
            return Err(Error::usage("mu_stages and max_evals must be positive"));
        }
        if let Preset::NonglobalCircuit(0) = self.preset {
            return Err(Error::usage("NONGLOBAL_CIRCUIT depth must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartStat {
    /// Nonlocal sum of this restart's candidate.
    pub value: f64,
    pub l_residual: f64,
    pub evals: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsonanceReport {
    pub value: f64,
    pub l_residual: f64,
    pub feasible: bool,
    pub circuit: LocalCircuit,
    /// In start order: identity, warm starts, random starts.
    pub per_restart: Vec<RestartStat>,
}

/// Objective evaluation for one fixed state and circuit layout.
struct Problem<'a> {
    rho: &'a CMatrix,
    template: &'a CircuitTemplate,
    mask: &'a ClassMask,
}

impl Problem<'_> {
    fn transformed(&self, theta: &[f64]) -> CMatrix {
        let u = self.template.unitary(theta);
        &u * self.rho * u.adjoint()
    }

    fn s_and_l(&self, theta: &[f64]) -> (f64, f64) {
        let p = self.mask.profile(&self.transformed(theta));
        (p.s_value, p.l_value)
    }

    fn local_sq(&self, theta: &[f64]) -> f64 {
        let m = self.transformed(theta);
        let n = m.nrows();
        let mut acc = 0.0;
        for r in 0..n {
            for c in 0..n {
                if self.mask.class(r, c) == CoherenceClass::LocalCoherence {
                    acc += m[(r, c)].norm_sqr();
                }
            }
        }
        acc
    }
}

#[derive(Clone, Debug)]
struct Candidate {
    theta: Vec<f64>,
    s: f64,
    l: f64,
}

/// Feasible first, then lower value, then lower residual.
fn better(a: &Candidate, b: &Candidate, eps_l: f64) -> bool {
    let (fa, fb) = (a.l <= eps_l, b.l <= eps_l);
    if fa != fb {
        return fa;
    }
    if !fa {
        return a.l < b.l || (a.l == b.l && a.s < b.s);
    }
    a.s < b.s || (a.s == b.s && a.l < b.l)
}

fn run_restart(problem: &Problem<'_>, x0: Vec<f64>, config: &OptimizerConfig) -> (Candidate, usize) {
    let (s0, l0) = problem.s_and_l(&x0);
    let mut best = Candidate { theta: x0.clone(), s: s0, l: l0 };
    let mut evals = 1;
    let phases = config.mu_stages + 1;
    let mut x = x0;
    let mut mu = config.mu0;
    for stage in 0..phases {
        let remaining = config.max_evals.saturating_sub(evals);
        if remaining == 0 {
            break;
        }
        let budget = remaining / (phases - stage);
        let polish = stage == config.mu_stages;
        let settings = Settings {
            step: if stage == 0 { 0.5 } else { 0.05 },
            tol_f: if polish { 1e-26 } else { config.tol_value * 1e-3 },
            tol_x: 1e-10,
            max_evals: budget.max(1),
            max_rebuilds: 4,
        };
        let out = if polish {
            nelder_mead::minimize(|t: &[f64]| problem.local_sq(t), &x, &settings)
        } else {
            let m = mu;
            nelder_mead::minimize(
                |t: &[f64]| {
                    let (s, l) = problem.s_and_l(t);
                    s + m * l
                },
                &x,
                &settings,
            )
        };
        evals += out.evals;
        x = out.x;
        let (s, l) = problem.s_and_l(&x);
        evals += 1;
        let cand = Candidate { theta: x.clone(), s, l };
        if better(&cand, &best, config.eps_l) {
            best = cand;
        }
        mu *= config.mu_growth;
    }
    (best, evals)
}

fn check_state(rho: &DensityMatrix) -> Result<()> {
    let violations = validate(rho, &Tolerances::default());
    if let Some(v) = violations.first() {
        return Err(Error::validation(format!("state is not physical: {v}")));
    }
    Ok(())
}

fn template_for(rho: &DensityMatrix, preset: Preset, supports: Option<&[Vec<usize>]>) -> Result<CircuitTemplate> {
    let identity = LocalCircuit::identity_with_supports(preset, rho.dims(), supports)?;
    CircuitTemplate::new(identity, rho.dims())
}

fn random_theta(rng: &mut ChaCha20Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-std::f64::consts::PI..=std::f64::consts::PI)).collect()
}

/// Constrained minimum of the nonlocal sum over the configured circuit space.
pub fn consonance(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<ConsonanceReport> {
    config.validate()?;
    check_state(rho)?;
    let template = template_for(rho, config.preset, config.supports.as_deref())?;
    let n = template.num_params();

    let mut starts: Vec<Vec<f64>> = vec![vec![0.0; n]];
    for warm in &config.warm_starts {
        warm.validate_for(rho.dims())?;
        let same_layout = warm.preset() == config.preset
            && warm.layers().len() == template.template.layers().len()
            && warm.layers().iter().zip(template.template.layers()).all(|(a, b)| a.support() == b.support());
        if !same_layout {
            return Err(Error::usage("warm-start circuit layout differs from the configured search space"));
        }
        starts.push(warm.flat_params());
    }
    for r in 0..config.restarts {
        let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
        rng.set_stream(r as u64);
        starts.push(random_theta(&mut rng, n));
    }

    let mask = ClassMask::new(rho.dims());
    let problem = Problem { rho: rho.matrix(), template: &template, mask: &mask };
    let results: Vec<(Candidate, usize)> =
        starts.into_par_iter().map(|x0| run_restart(&problem, x0, config)).collect();

    let per_restart = results
        .iter()
        .map(|(c, evals)| RestartStat { value: c.s, l_residual: c.l, evals: *evals })
        .collect();
    let mut best = &results[0].0;
    for (c, _) in &results[1..] {
        if better(c, best, config.eps_l) {
            best = c;
        }
    }

    let circuit = template.circuit(&best.theta);
    let p = coherence::profile(&apply(&circuit, rho)?);
    Ok(ConsonanceReport {
        value: p.s_value,
        l_residual: p.l_value,
        feasible: p.l_value <= config.eps_l,
        circuit,
        per_restart,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Minimum nonlocal sum over feasible samples; `None` if no sample was feasible.
    pub min_value: Option<f64>,
    pub feasible_count: usize,
}

const ORACLE_CHUNK: usize = 1024;
const ORACLE_STREAM_BASE: u64 = 1 << 40;

/// Brute-force upper bound: random circuits of the preset's default layout,
/// keeping those with local coherence at most `eps_l`. Sample 0 is the identity.
pub fn oracle_consonance(
    rho: &DensityMatrix,
    preset: Preset,
    samples: usize,
    seed: u64,
    eps_l: f64,
) -> Result<OracleResult> {
    if samples == 0 {
        return Err(Error::usage("oracle needs at least one sample"));
    }
    let template = template_for(rho, preset, None)?;
    let mask = ClassMask::new(rho.dims());
    let problem = Problem { rho: rho.matrix(), template: &template, mask: &mask };
    let n = template.num_params();
    let chunks = samples.div_ceil(ORACLE_CHUNK);
    let partial: Vec<(Option<f64>, usize)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(ORACLE_STREAM_BASE + chunk as u64);
            let mut min: Option<f64> = None;
            let mut count = 0;
            let lo = chunk * ORACLE_CHUNK;
            for i in lo..samples.min(lo + ORACLE_CHUNK) {
                let theta = if i == 0 { vec![0.0; n] } else { random_theta(&mut rng, n) };
                let (s, l) = problem.s_and_l(&theta);
                if l <= eps_l {
                    count += 1;
                    min = Some(min.map_or(s, |m: f64| m.min(s)));
                }
            }
            (min, count)
        })
        .collect();
    let mut out = OracleResult { min_value: None, feasible_count: 0 };
    for (m, c) in partial {
        out.feasible_count += c;
        out.min_value = match (out.min_value, m) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
    Ok(out)
}

pub use crate::measures::consonance_pure_bipartite;
