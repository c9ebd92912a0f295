use consonance::coherence::{nonlocal_sum, profile};
use consonance::measures::{discord_bell_like, eof_from_concurrence, schmidt_decompose};
use consonance::optimizer::{consonance, oracle_consonance, OptimizerConfig};
use consonance::qstate::{
    hermitian_eigenvalues, partial_trace, partial_transpose, singular_values, CMatrix, DensityMatrix, Dims, Operator,
    TpsMatrix, C64,
};
use consonance::states::{random_density, random_pure, two_param_qubit_qutrit, werner};
use consonance::unitary::{apply, build_unitary, embed, CircuitLayer, LocalCircuit, Preset, UnitaryParams};
use proptest::prelude::*;

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=3, 2..=3)
}

fn theta(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.2f64..3.2, len)
}

fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn random_layer(support: Vec<usize>, dims: &Dims, seed: u64) -> CircuitLayer {
    let d: usize = support.iter().map(|&p| dims.as_slice()[p]).product();
    let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let theta = (0..d * d)
        .map(|_| {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 6.0
        })
        .collect();
    CircuitLayer::new(support, UnitaryParams::new(d, theta).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_trace_inverts_tensor(d1 in 2usize..=3, d2 in 2usize..=3, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_density(&Dims::new(vec![d1]).unwrap(), s1, d1).unwrap();
        let b = random_density(&Dims::new(vec![d2]).unwrap(), s2, d2).unwrap();
        let ab = a.tensor(&b);
        prop_assert!(max_diff(partial_trace(&ab, &[0]).unwrap().matrix(), a.matrix()) < 1e-12);
        prop_assert!(max_diff(partial_trace(&ab, &[1]).unwrap().matrix(), b.matrix()) < 1e-12);
    }

    #[test]
    fn partial_transpose_is_an_involution(d in dims_strategy(), seed in any::<u64>(), party in 0usize..3) {
        let dims = Dims::new(d).unwrap();
        let party = party % dims.parties();
        let rho = random_density(&dims, seed, 2).unwrap();
        let once = partial_transpose(&rho, party).unwrap();
        let twice = partial_transpose(&once, party).unwrap();
        prop_assert!(max_diff(twice.matrix(), rho.matrix()) < 1e-15);
        let trace: C64 = once.matrix().trace();
        prop_assert!((trace.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schmidt_squares_are_reduced_spectrum(d1 in 2usize..=4, d2 in 2usize..=4, seed in any::<u64>()) {
        let psi = random_pure(&Dims::new(vec![d1, d2]).unwrap(), seed);
        let c = psi.coefficient_matrix().unwrap();
        let sq = sorted(singular_values(&c).iter().map(|s| s * s).collect());
        let reduced = partial_trace(&psi.to_density(), &[0]).unwrap();
        let mut eig = sorted(reduced.eigenvalues().unwrap());
        eig.drain(..eig.len() - sq.len());
        for (x, y) in sq.iter().zip(&eig) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        let s = schmidt_decompose(&psi).unwrap();
        prop_assert!((s.reconstruct() - psi.amps()).norm() < 1e-9);
    }

    #[test]
    fn profile_partitions_the_l1_mass(d in dims_strategy(), seed in any::<u64>(), rank in 1usize..4) {
        let dims = Dims::new(d).unwrap();
        let rho = random_density(&dims, seed, rank).unwrap();
        let p = profile(&rho);
        let total: f64 = rho.matrix().iter().map(|z| z.norm()).sum();
        prop_assert!((p.s_value + p.l_value + p.diag_mass - total).abs() < 1e-12);
        prop_assert!((p.diag_mass - 1.0).abs() < 1e-12);
        prop_assert!(p.s_value >= 0.0 && p.l_value >= 0.0);
    }

    #[test]
    fn nonlocal_sum_is_l1_continuous(s1 in any::<u64>(), s2 in any::<u64>(), t in 0.0f64..1.0) {
        let dims = Dims::new(vec![2, 3]).unwrap();
        let a = random_density(&dims, s1, 3).unwrap();
        let b = random_density(&dims, s2, 2).unwrap();
        let mix = DensityMatrix::new(dims, a.matrix().scale(1.0 - t) + b.matrix().scale(t)).unwrap();
        let l1: f64 = (a.matrix() - mix.matrix()).iter().map(|z| z.norm()).sum();
        prop_assert!((nonlocal_sum(&a) - nonlocal_sum(&mix)).abs() <= l1 + 1e-12);
    }

    #[test]
    fn applying_a_circuit_preserves_the_spectrum(seed in any::<u64>(), th in theta(13)) {
        let dims = Dims::new(vec![2, 3]).unwrap();
        let rho = random_density(&dims, seed, 3).unwrap();
        let circuit = LocalCircuit::identity(Preset::SingleParty, &dims).unwrap().with_flat_params(&th).unwrap();
        let out = apply(&circuit, &rho).unwrap();
        let before = sorted(rho.eigenvalues().unwrap());
        let after = sorted(hermitian_eigenvalues(out.matrix(), 1e-10).unwrap());
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn circuit_composition_is_sequential(seed in any::<u64>(), k1 in any::<u64>(), k2 in any::<u64>(), k3 in any::<u64>()) {
        let dims = Dims::qubits(3).unwrap();
        let rho = random_density(&dims, seed, 2).unwrap();
        let (l1, l2, l3) = (
            random_layer(vec![0, 1], &dims, k1),
            random_layer(vec![2], &dims, k2),
            random_layer(vec![1, 2], &dims, k3),
        );
        let first = LocalCircuit::new(Preset::NonglobalCircuit(3), vec![l1.clone()]);
        let rest = LocalCircuit::new(Preset::NonglobalCircuit(3), vec![l2.clone(), l3.clone()]);
        let whole = LocalCircuit::new(Preset::NonglobalCircuit(3), vec![l1, l2, l3]);
        let stepwise = apply(&rest, &apply(&first, &rho).unwrap()).unwrap();
        let at_once = apply(&whole, &rho).unwrap();
        prop_assert!(max_diff(stepwise.matrix(), at_once.matrix()) < 1e-12);
    }

    #[test]
    fn disjoint_layers_commute(k1 in any::<u64>(), k2 in any::<u64>()) {
        let dims = Dims::new(vec![2, 3, 2]).unwrap();
        let a = embed(&random_layer(vec![0, 2], &dims, k1), &dims).unwrap();
        let b = embed(&random_layer(vec![1], &dims, k2), &dims).unwrap();
        prop_assert!(max_diff(&(&a * &b), &(&b * &a)) < 1e-12);
    }

    #[test]
    fn bell_like_discord_is_eof_of_concurrence(re_a in -1.0f64..1.0, im_a in -1.0f64..1.0, re_b in -1.0f64..1.0, im_b in -1.0f64..1.0) {
        let n = (re_a * re_a + im_a * im_a + re_b * re_b + im_b * im_b).sqrt();
        prop_assume!(n > 1e-3);
        let (a, b) = (C64::new(re_a / n, im_a / n), C64::new(re_b / n, im_b / n));
        let lhs = discord_bell_like(a, b).unwrap();
        let rhs = eof_from_concurrence((2.0 * (a * b).norm()).min(1.0)).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn generated_unitaries_are_unitary(th in theta(9)) {
        let u = build_unitary(&UnitaryParams::new(3, th).unwrap());
        prop_assert!(max_diff(&(u.adjoint() * &u), &CMatrix::identity(3, 3)) < 1e-12);
    }
}

fn quick(seed: u64) -> OptimizerConfig {
    OptimizerConfig { restarts: 2, max_evals: 4000, seed, ..Default::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn optimizer_is_deterministic_and_sound(a in 0.0f64..1.0, seed in any::<u64>()) {
        let rho = werner(a).unwrap();
        let r1 = consonance(&rho, &quick(seed)).unwrap();
        let r2 = consonance(&rho, &quick(seed)).unwrap();
        prop_assert_eq!(&r1, &r2);
        let replay = profile(&apply(&r1.circuit, &rho).unwrap());
        prop_assert!((replay.s_value - r1.value).abs() < 1e-9);
        prop_assert_eq!(r1.feasible, replay.l_value <= 1e-6);
    }

    #[test]
    fn upper_bound_chain_for_coherence_free_frames(alpha in 0.0f64..0.5, gamma in 0.0f64..1.0, seed in any::<u64>()) {
        prop_assume!(1.0 - 2.0 * alpha - gamma >= 0.0);
        let rho = two_param_qubit_qutrit(alpha, gamma).unwrap();
        let r = consonance(&rho, &quick(seed)).unwrap();
        let o = oracle_consonance(&rho, Preset::SingleParty, 500, seed, 1e-6).unwrap();
        let oracle = o.min_value.unwrap();
        prop_assert!(r.value <= oracle + 1e-12);
        prop_assert!(oracle <= nonlocal_sum(&rho) + 1e-12);
    }

    #[test]
    fn local_unitary_invariance(a in 0.0f64..1.0, th in theta(8)) {
        let rho = werner(a).unwrap();
        let dims = rho.dims().clone();
        let v = LocalCircuit::identity(Preset::SingleParty, &dims).unwrap().with_flat_params(&th).unwrap();
        let rotated = apply(&v, &rho).unwrap();
        let config = OptimizerConfig { restarts: 4, ..Default::default() };
        let c0 = consonance(&rho, &config).unwrap();
        let c1 = consonance(&rotated, &config).unwrap();
        prop_assert!(c0.feasible && c1.feasible);
        prop_assert!((c0.value - c1.value).abs() < 2.0 * config.tol_value, "{} vs {}", c0.value, c1.value);
    }
}

#[test]
fn operators_and_states_share_the_transpose() {
    let dims = Dims::new(vec![2, 2]).unwrap();
    let rho = werner(0.4).unwrap();
    let op = Operator::new(dims, rho.matrix().clone()).unwrap();
    let a = partial_transpose(&rho, 1).unwrap();
    let b = partial_transpose(&op, 1).unwrap();
    assert_eq!(a.matrix(), b.matrix());
}
