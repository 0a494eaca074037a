use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use nrmsym::cli::parse_word;
use nrmsym::molecules::{ammonia, three_spin_half_rotor};
use nrmsym::pigroup::{
    classify_case, inversion_sign, parity_sign, FiniteGroup, GroupCase, GroupChain, NucleusClass, NucleusFrame,
    DEFAULT_CAP,
};
use nrmsym::reptheory::{character_table, induced_character, irrep_matrices, splitting_multiplicities, IrrepMatrices};
use nrmsym::spinstats::{
    build_symmetrized_states, statistical_weights, verify_s_pm, ModelSpace, SpinSign, SpinSystem,
};
use nrmsym::tunneling::{sector_energies, splitting_report, TunnelingModel, DEFAULT_HERMITICITY_THRESHOLD};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn chain_from_words(frame: &NucleusFrame, point_group: &[&str], feasible: &[&str]) -> GroupChain {
    let words = |w: &[&str]| w.iter().map(|s| parse_word(s, frame).unwrap()).collect::<Vec<_>>();
    GroupChain::new(frame.clone(), &words(point_group), &words(feasible), DEFAULT_CAP).unwrap()
}

fn gamma_of_dim(chain: &GroupChain, dim: usize, complex: bool) -> IrrepMatrices {
    let rt = character_table(chain.r()).unwrap();
    let l = (0..rt.num_irreps())
        .find(|&l| {
            rt.dims()[l] == dim && (!complex || rt.characters()[l].iter().any(|z| z.im.abs() > 1e-6))
        })
        .expect("requested irrep exists");
    irrep_matrices(chain.r(), &rt.labels()[l], &rt).unwrap()
}

/// Test triples `(Q, R, Γ)` with `|Q| ≤ 48`.
fn triples() -> Vec<(&'static str, GroupChain, IrrepMatrices)> {
    let nh3 = ammonia().chain().unwrap();
    let h4 = NucleusFrame::new(vec![NucleusClass::new("H", 4, 1)], true).unwrap();
    let s4xc2 = chain_from_words(&h4, &["(1 2 3 4)", "(1 3)"], &["(1 2)*"]);
    let s4 = chain_from_words(&h4, &["(1 2 3)"], &["(1 2 3 4)"]);
    vec![
        ("NH3 with Γ nondegenerate", nh3.clone(), gamma_of_dim(&nh3, 1, false)),
        ("NH3 with Γ = E", nh3.clone(), gamma_of_dim(&nh3, 2, false)),
        ("S4×C2 over an order-8 point group, d = 2", s4xc2.clone(), gamma_of_dim(&s4xc2, 2, false)),
        ("S4 over C3, complex Γ", s4.clone(), gamma_of_dim(&s4, 1, true)),
    ]
}

fn pf5_arithmetic() -> Outcome {
    let start = Instant::now();
    let frame = NucleusFrame::new(vec![NucleusClass::new("P", 1, 1), NucleusClass::new("F", 5, 1)], true).unwrap();
    // slot 1 is P; F slots 2-4 equatorial, 5-6 axial
    let chain = chain_from_words(&frame, &["(2 3 4)", "(3 4)(5 6)", "(5 6)*"], &["(2 5)(3 6)*"]);
    let (r, q, p) = (chain.r().order(), chain.q().order(), chain.p().order());
    let cosets = chain.r_in_q().num_cosets();
    let d = gamma_of_dim(&chain, 2, false).dim();
    let bound = (d * cosets) * (d * cosets);
    let elapsed = start.elapsed();
    check((r, q, p, cosets) == (12, 240, 240, 20), || format!("orders {r}, {q}, {p}, cosets {cosets}"))?;
    check(bound == 1600 && bound > p, || format!("bound {bound}"))?;
    check(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "|R| = {r}, |Q| = |P| = {p}, {cosets} cosets, ({d}·{cosets})² = {bound} > {p}, {:.2?}",
        elapsed
    ))
}

fn ammonia_doubling() -> Outcome {
    let start = Instant::now();
    let chain = ammonia().chain().unwrap();
    check(chain.r().order() == 6, || "point group order".into())?;
    let gamma = gamma_of_dim(&chain, 1, false);
    let star = chain.q().index_of(&parse_word("E*", chain.frame()).unwrap()).unwrap();
    let beta = nalgebra::DMatrix::from_element(1, 1, Complex64::new(0.01, 0.0));
    let model = TunnelingModel::from_element_blocks(chain.r_in_q().clone(), gamma, 1.0, &[(star, beta)]).unwrap();
    let qt = character_table(chain.q()).unwrap();
    let report = splitting_report(&model, &qt, None, DEFAULT_HERMITICITY_THRESHOLD).unwrap();
    let elapsed = start.elapsed();
    let energies: Vec<f64> = report.clusters.iter().map(|c| c.mean_energy).collect();
    check(energies.len() == 2, || format!("{} clusters", energies.len()))?;
    check((energies[0] - 0.99).abs() < 1e-10 && (energies[1] - 1.01).abs() < 1e-10, || {
        format!("energies {energies:?}")
    })?;
    let m = &report.predicted;
    let predicted: Vec<(usize, usize)> = (0..m.labels.len())
        .filter(|&l| m.multiplicities[l] > 0)
        .map(|l| (m.dims[l], m.multiplicities[l]))
        .collect();
    check(predicted == vec![(1, 1), (1, 1)], || format!("predicted {predicted:?}"))?;
    check(report.matched, || "degeneracies do not match".into())?;
    check(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("clusters at {:.12} and {:.12}, {:.2?}", energies[0], energies[1], elapsed))
}

fn degeneracy_theorem() -> Outcome {
    let start = Instant::now();
    let mut draws = 0;
    let mut d2 = false;
    for (name, chain, gamma) in triples() {
        check(chain.q().order() <= 48, || format!("{name}: |Q| = {}", chain.q().order()))?;
        d2 |= gamma.dim() == 2;
        let qt = character_table(chain.q()).unwrap();
        let expected: Vec<usize> = splitting_multiplicities(&qt, chain.r_in_q(), &gamma).unwrap().degeneracy_multiset();
        for k in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + k);
            let model =
                TunnelingModel::with_random_seeds(chain.r_in_q().clone(), gamma.clone(), 0.0, 1.0, &mut rng).unwrap();
            let report = splitting_report(&model, &qt, Some(1e-8), DEFAULT_HERMITICITY_THRESHOLD).unwrap();
            check(report.observed_degeneracies() == expected, || {
                format!("{name}, draw {k}: {:?} vs {expected:?}", report.observed_degeneracies())
            })?;
            draws += 1;
        }
    }
    let elapsed = start.elapsed();
    check(d2, || "no two-dimensional Γ".into())?;
    check(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{draws} draws on 4 triples, zero mismatches, {:.2?}", elapsed))
}

fn reciprocity() -> Outcome {
    let mut checked = 0;
    for (name, chain, gamma) in triples() {
        let qt = character_table(chain.q()).unwrap();
        let direct = splitting_multiplicities(&qt, chain.r_in_q(), &gamma).unwrap();
        let chi = induced_character(chain.r_in_q(), &gamma).unwrap();
        let sizes = chain.q().class_sizes();
        let f = chain.q().order() as f64;
        for l in 0..qt.num_irreps() {
            let ip: Complex64 =
                (0..sizes.len()).map(|k| qt.character(l, k).conj() * chi[k] * sizes[k] as f64).sum::<Complex64>() / f;
            let rounded = ip.re.round();
            check((ip.re - rounded).abs() < 1e-6 && ip.im.abs() < 1e-6, || format!("{name}: {ip} not integral"))?;
            check(rounded as usize == direct.multiplicities[l], || {
                format!("{name}, {}: {} vs {rounded}", qt.labels()[l], direct.multiplicities[l])
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} multiplicities agree"))
}

fn character_tables() -> Outcome {
    let mut groups: Vec<Arc<FiniteGroup>> = Vec::new();
    for (_, chain, _) in triples() {
        groups.extend([Arc::clone(chain.r()), Arc::clone(chain.q()), Arc::clone(chain.p())]);
    }
    let pf5 = nrmsym::molecules::phosphorus_pentafluoride().chain().unwrap();
    groups.extend([Arc::clone(pf5.r()), Arc::clone(pf5.p())]);
    groups.push(Arc::clone(three_spin_half_rotor().chain().unwrap().q()));
    let mut worst: f64 = 0.0;
    for g in &groups {
        let t = character_table(g).map_err(|e| e.to_string())?;
        let residual = t.row_orthogonality_residual().max(t.column_orthogonality_residual());
        worst = worst.max(residual);
        check(residual < 1e-9, || format!("order {}: residual {residual:e}", g.order()))?;
        let sum: usize = t.dims().iter().map(|d| d * d).sum();
        check(sum == g.order(), || format!("order {}: Σd² = {sum}", g.order()))?;
    }
    let largest = groups.iter().map(|g| g.order()).max().unwrap_or(0);
    Ok(format!("{} tables up to order {largest}, worst residual {worst:.1e}", groups.len()))
}

fn block_diagonality() -> Outcome {
    let mut worst: f64 = 0.0;
    for (name, chain, gamma) in triples() {
        let qt = character_table(chain.q()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let model = TunnelingModel::with_random_seeds(chain.r_in_q().clone(), gamma, 0.5, 1.0, &mut rng).unwrap();
        let h = nrmsym::tunneling::build_h_nrm(&model).unwrap().matrix;
        let sectors = sector_energies(&h, &qt, model.induced(), 1e-8).map_err(|e| format!("{name}: {e}"))?;
        worst = worst.max(sectors.cross_sector_residual);
        check(sectors.cross_sector_residual < 1e-9, || {
            format!("{name}: {:e}", sectors.cross_sector_residual)
        })?;
    }
    Ok(format!("largest cross-sector element {worst:.1e}"))
}

fn spin_sum_rules() -> Outcome {
    let nh3 = ammonia().chain().unwrap();
    let qt = character_table(nh3.q()).unwrap();
    check(classify_case(nh3.q()) == GroupCase::CaseB, || "NH3 should be Case B".into())?;
    for (include, dim) in [(true, 16), (false, 8)] {
        let spin = SpinSystem::new(nh3.frame().clone(), include);
        check(spin.dim() == dim, || format!("spin dimension {}", spin.dim()))?;
        let w = statistical_weights(&qt, &spin).unwrap();
        for sign in [SpinSign::Plus, SpinSign::Minus] {
            check(w.sum_rule(sign) == dim, || format!("NH3 {sign:?}: {} ≠ {dim}", w.sum_rule(sign)))?;
        }
    }
    let rotor = three_spin_half_rotor().chain().unwrap();
    check(classify_case(rotor.q()) == GroupCase::CaseA, || "rotor should be Case A".into())?;
    let rt = character_table(rotor.q()).unwrap();
    let w = statistical_weights(&rt, &SpinSystem::new(rotor.frame().clone(), true)).unwrap();
    check(w.sum_rule(SpinSign::Plus) == 8, || format!("rotor: {}", w.sum_rule(SpinSign::Plus)))?;
    Ok("NH3 16 and 8 for both signs, three-spin Case A 8".into())
}

/// Applies every element of `P` and compares with `ε(x)·(±1)^{star}`.
fn explicit_residual(v: &[Complex64], space: &ModelSpace, chain: &GroupChain, sign: SpinSign) -> f64 {
    let p = chain.p();
    (0..p.order())
        .map(|x| {
            let e = p.element(x);
            let mut expected = parity_sign(e, chain.frame()).unwrap() as f64;
            if sign == SpinSign::Minus {
                expected *= inversion_sign(e) as f64;
            }
            space
                .apply(x, v)
                .iter()
                .zip(v)
                .map(|(a, b)| (a - b * expected).norm())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

fn s_pm_verification() -> Outcome {
    let nonrigid = ammonia().chain().unwrap();
    let rigid = nonrigid.rigid().unwrap();
    let mut summary = Vec::new();
    let mut worst: f64 = 0.0;
    for (name, chain) in [("non-rigid", nonrigid), ("rigid", rigid)] {
        let qt = character_table(chain.q()).unwrap();
        let rt = character_table(chain.r()).unwrap();
        let (mut plus, mut minus) = (0, 0);
        for g in rt.labels() {
            let gamma = irrep_matrices(chain.r(), g, &rt).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let model =
                TunnelingModel::with_random_seeds(chain.r_in_q().clone(), gamma.clone(), 1.0, 0.05, &mut rng).unwrap();
            let space = ModelSpace::new(&chain, &gamma, SpinSystem::new(chain.frame().clone(), true)).unwrap();
            let m = splitting_multiplicities(&qt, chain.r_in_q(), &gamma).unwrap();
            for (l, label) in qt.labels().iter().enumerate() {
                for mu in 1..=m.multiplicities[l] {
                    let Ok(pair) = build_symmetrized_states(&chain, &model, &qt, &space, label, mu, 1) else {
                        continue;
                    };
                    for state in [pair.plus, pair.minus].into_iter().flatten() {
                        let report = verify_s_pm(&state.vector, &space).map_err(|e| format!("{name} {label}: {e}"))?;
                        let residual = explicit_residual(&state.vector, &space, &chain, state.sign);
                        worst = worst.max(residual).max(report.residual);
                        check(report.sign == state.sign && residual < 1e-9, || {
                            format!("{name} {label}: {} with residual {residual:e}", report.label())
                        })?;
                        match state.sign {
                            SpinSign::Plus => plus += 1,
                            SpinSign::Minus => minus += 1,
                        }
                    }
                }
            }
        }
        check(plus > 0 && minus > 0, || format!("{name}: {plus} S+ and {minus} S- states"))?;
        summary.push(format!("{name} {plus}+/{minus}-"));
    }
    Ok(format!("{}, worst residual {worst:.1e}", summary.join(", ")))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 PF5 group arithmetic", pf5_arithmetic),
        ("2 ammonia inversion doubling", ammonia_doubling),
        ("3 degeneracy pattern", degeneracy_theorem),
        ("4 Frobenius reciprocity", reciprocity),
        ("5 character tables", character_tables),
        ("6 block diagonality", block_diagonality),
        ("7 spin sum rules", spin_sum_rules),
        ("8 S+/S- verification", s_pm_verification),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                println!("FAIL {name}: {why}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
