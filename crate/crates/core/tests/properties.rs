use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use nrmsym::linalg::{hermitian_eigen, max_abs, CMatrix};
use nrmsym::pigroup::{
    generate_group, parity_sign, CosetDecomposition, GroupChain, NucleusClass, NucleusFrame, PermInv, DEFAULT_CAP,
};
use nrmsym::reptheory::{
    character_table, induced_character, irrep_matrices, splitting_multiplicities, IrrepMatrices,
};
use nrmsym::spinstats::{statistical_weights, twist_permutation, SpinSign, SpinSystem};
use nrmsym::tunneling::{build_h_nrm, splitting_report, TunnelingModel, DEFAULT_HERMITICITY_THRESHOLD};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn frame() -> NucleusFrame {
    NucleusFrame::new(vec![NucleusClass::new("H", 4, 1)], true).unwrap()
}

/// The `k`-th permutation of four slots in Lehmer order.
fn nth_perm(mut k: usize, star: bool) -> PermInv {
    let mut pool: Vec<usize> = (0..4).collect();
    let mut image = Vec::new();
    for radix in (1..=4).rev() {
        let f: usize = (1..radix).product();
        image.push(pool.remove(k / f));
        k %= f;
    }
    PermInv::new(image, star).unwrap()
}

fn element() -> impl Strategy<Value = PermInv> {
    (0usize..24, any::<bool>()).prop_map(|(k, s)| nth_perm(k, s))
}

/// A chain over four spin-½ nuclei: `R` from up to two generators, `Q` with
/// one extra feasible element, and an irrep of `R` picked by index.
fn triple() -> impl Strategy<Value = (GroupChain, IrrepMatrices)> {
    (prop::collection::vec(element(), 1..=2), element(), any::<usize>()).prop_map(|(gens, extra, pick)| {
        let chain = GroupChain::new(frame(), &gens, &[extra], DEFAULT_CAP).unwrap();
        let rt = character_table(chain.r()).unwrap();
        let label = rt.labels()[pick % rt.num_irreps()].clone();
        let gamma = irrep_matrices(chain.r(), &label, &rt).unwrap();
        (chain, gamma)
    })
}

/// 24 cases unless `PROPTEST_CASES` says otherwise.
fn config() -> ProptestConfig {
    let cases = std::env::var("PROPTEST_CASES").ok().and_then(|v| v.parse().ok()).unwrap_or(24);
    ProptestConfig::with_cases(cases)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn generated_groups_satisfy_the_axioms(gens in prop::collection::vec(element(), 1..=3)) {
        let g = generate_group(&gens, &frame(), DEFAULT_CAP).unwrap();
        let n = g.order();
        prop_assert!(g.element(0).is_identity());
        prop_assert_eq!(48 % n, 0);
        for a in 0..n {
            prop_assert_eq!(g.mul(a, g.inverse(a)), 0);
            prop_assert_eq!(g.mul(0, a), a);
            for b in 0..n {
                let ab = g.mul(a, b);
                prop_assert_eq!(g.element(ab), &g.element(a).compose(g.element(b)).unwrap());
            }
        }
        for a in (0..n).step_by(3) {
            for b in (0..n).step_by(2) {
                for c in 0..n {
                    prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
        let total: usize = g.class_sizes().iter().sum();
        prop_assert_eq!(total, n);
        prop_assert!(g.class_sizes().iter().all(|s| n.is_multiple_of(*s)));
    }

    #[test]
    fn character_tables_are_orthogonal(gens in prop::collection::vec(element(), 1..=3)) {
        let g = Arc::new(generate_group(&gens, &frame(), DEFAULT_CAP).unwrap());
        let t = character_table(&g).unwrap();
        prop_assert!(t.row_orthogonality_residual() < 1e-9);
        prop_assert!(t.column_orthogonality_residual() < 1e-9);
        prop_assert_eq!(t.dims().iter().map(|d| d * d).sum::<usize>(), g.order());
        prop_assert_eq!(t.num_irreps(), g.num_classes());
    }

    #[test]
    fn irrep_matrices_are_unitary_homomorphisms((chain, gamma) in triple()) {
        prop_assert!(gamma.homomorphism_residual() < 1e-9);
        prop_assert!(gamma.unitarity_residual() < 1e-9);
        let rt = character_table(chain.r()).unwrap();
        let l = rt.index_of(gamma.label()).unwrap();
        for h in 0..chain.r().order() {
            prop_assert!((gamma.trace(h) - rt.character_of_element(l, h)).norm() < 1e-9);
        }
    }

    #[test]
    fn lagrange_and_reciprocity((chain, gamma) in triple()) {
        let (r, q, p) = (chain.r().order(), chain.q().order(), chain.p().order());
        prop_assert_eq!(q % r, 0);
        prop_assert_eq!(p % q, 0);
        prop_assert_eq!(chain.r_in_q().num_cosets(), q / r);
        let qt = character_table(chain.q()).unwrap();
        let m = splitting_multiplicities(&qt, chain.r_in_q(), &gamma).unwrap();
        let dim: usize = m.dims.iter().zip(&m.multiplicities).map(|(d, k)| d * k).sum();
        prop_assert_eq!(dim, gamma.dim() * q / r);
        // inner product of the induced character with each irrep
        let chi = induced_character(chain.r_in_q(), &gamma).unwrap();
        let sizes = chain.q().class_sizes();
        for l in 0..qt.num_irreps() {
            let ip: Complex64 = (0..sizes.len())
                .map(|k| qt.character(l, k).conj() * chi[k] * sizes[k] as f64)
                .sum::<Complex64>() / q as f64;
            prop_assert!((ip.re - m.multiplicities[l] as f64).abs() < 1e-6);
            prop_assert!(ip.im.abs() < 1e-6);
        }
    }

    #[test]
    fn degeneracies_follow_the_prediction((chain, gamma) in triple(), seed in any::<u64>()) {
        let qt = character_table(chain.q()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = TunnelingModel::with_random_seeds(chain.r_in_q().clone(), gamma, 0.3, 0.1, &mut rng).unwrap();
        let report = splitting_report(&model, &qt, Some(1e-8), DEFAULT_HERMITICITY_THRESHOLD).unwrap();
        if model.has_tunneling() {
            prop_assert!(report.matched, "{:?} vs {:?}", report.observed_degeneracies(), report.expected_degeneracies);
        }
        prop_assert!(report.residuals.block_offdiagonal < 1e-9);
        prop_assert!(report.residuals.commutant < 1e-10);
    }

    #[test]
    fn spectrum_scales_with_the_tunneling_blocks((chain, gamma) in triple(), seed in any::<u64>(), factor in 0.1f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = TunnelingModel::with_random_seeds(chain.r_in_q().clone(), gamma, -1.0, 0.2, &mut rng).unwrap();
        let base = hermitian_eigen(&build_h_nrm(&model).unwrap().matrix).unwrap().eigenvalues;
        let scaled = hermitian_eigen(&build_h_nrm(&model.scaled(factor)).unwrap().matrix).unwrap().eigenvalues;
        for (a, b) in base.iter().zip(&scaled) {
            prop_assert!(((b + 1.0) - factor * (a + 1.0)).abs() < 1e-10);
        }
        let trace: f64 = base.iter().sum();
        prop_assert!((trace + base.len() as f64).abs() < 1e-10);
    }

    #[test]
    fn spectrum_does_not_depend_on_coset_representatives(
        (chain, gamma) in triple(),
        seed in any::<u64>(),
        picks in prop::collection::vec(any::<usize>(), 24),
    ) {
        let dec = chain.r_in_q();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = TunnelingModel::with_random_seeds(dec.clone(), gamma.clone(), 0.0, 0.3, &mut rng).unwrap();
        let base = hermitian_eigen(&build_h_nrm(&model).unwrap().matrix).unwrap().eigenvalues;

        // the same Hamiltonian, described by one arbitrary element per coset
        let reps: Vec<usize> = (0..dec.num_cosets())
            .map(|u| if u == 0 { 0 } else { let c = dec.coset(u); c[picks[u % picks.len()] % c.len()] })
            .collect();
        let blocks: Vec<(usize, CMatrix)> = reps.iter().skip(1).map(|&q| {
            let (u, g) = dec.factorize(q);
            (q, &model.seeds()[&u] * gamma.matrix(g))
        }).collect();
        let alt = CosetDecomposition::with_representatives(Arc::clone(chain.q()), dec.subgroup_indices(), reps).unwrap();
        let moved = TunnelingModel::from_element_blocks(alt.clone(), gamma.clone(), 0.0, &blocks).unwrap();
        let ev = hermitian_eigen(&build_h_nrm(&moved).unwrap().matrix).unwrap().eigenvalues;
        for (a, b) in base.iter().zip(&ev) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        let qt = character_table(chain.q()).unwrap();
        prop_assert_eq!(
            splitting_multiplicities(&qt, dec, &gamma).unwrap().multiplicities,
            splitting_multiplicities(&qt, &alt, &gamma).unwrap().multiplicities
        );
    }

    #[test]
    fn spin_sum_rules_and_twisting((chain, _gamma) in triple(), spectators in any::<bool>()) {
        let qt = character_table(chain.q()).unwrap();
        let spin = SpinSystem::new(chain.frame().clone(), spectators);
        let table = statistical_weights(&qt, &spin).unwrap();
        prop_assert_eq!(table.sum_rule(SpinSign::Plus), spin.dim());
        prop_assert_eq!(table.sum_rule(SpinSign::Minus), spin.dim());
        for sign in [SpinSign::Plus, SpinSign::Minus] {
            let t = twist_permutation(&qt, &spin, sign).unwrap();
            prop_assert!((0..t.len()).all(|l| t[t[l]] == l));
        }
        for class in chain.q().classes() {
            let chi = spin.character(chain.q().element(class[0]));
            prop_assert!(class.iter().all(|&x| spin.character(chain.q().element(x)) == chi));
        }
    }

    #[test]
    fn parity_sign_is_a_character(a in element(), b in element()) {
        let f = frame();
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(parity_sign(&ab, &f).unwrap(), parity_sign(&a, &f).unwrap() * parity_sign(&b, &f).unwrap());
        prop_assert_eq!(a.compose(&a.inverse()).unwrap(), PermInv::identity(4));
    }
}

#[test]
fn no_seed_model_is_the_rigid_hamiltonian() {
    let chain = GroupChain::new(frame(), &[nth_perm(9, false)], &[nth_perm(1, true)], DEFAULT_CAP).unwrap();
    let rt = character_table(chain.r()).unwrap();
    let gamma = irrep_matrices(chain.r(), &rt.labels()[0], &rt).unwrap();
    let model = TunnelingModel::new(chain.r_in_q().clone(), gamma, 4.0, BTreeMap::new()).unwrap();
    let h = build_h_nrm(&model).unwrap().matrix;
    let rigid = nrmsym::tunneling::build_h_r(&model).map(|x| Complex64::new(x, 0.0));
    assert!(max_abs(&(h - rigid)) < 1e-14);
}
