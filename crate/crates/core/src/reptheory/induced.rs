use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CharacterTable, IrrepMatrices, RepError};
use crate::pigroup::CosetDecomposition;

const INTEGRALITY: f64 = 1e-6;

fn check_compatible(dec: &CosetDecomposition, gamma: &IrrepMatrices) -> Result<(), RepError> {
    if gamma.group().as_ref() != dec.subgroup().as_ref() {
        return Err(RepError::GroupMismatch(
            "irrep is not defined on the decomposition's subgroup".into(),
        ));
    }
    Ok(())
}

/// Induced character at every element of the big group.
///
/// `h` contributes `tr S(g)` for each coset `s` it fixes, i.e. whenever
/// `h ∘ G_s = G_s ∘ R(g)`.
pub fn induced_character_by_element(
    dec: &CosetDecomposition,
    gamma: &IrrepMatrices,
) -> Result<Vec<Complex64>, RepError> {
    check_compatible(dec, gamma)?;
    let q = dec.group();
    Ok((0..q.order())
        .map(|h| {
            dec.representatives()
                .iter()
                .enumerate()
                .filter_map(|(s, &gs)| {
                    let (u, g) = dec.factorize(q.mul(h, gs));
                    (u == s).then(|| gamma.trace(g))
                })
                .sum()
        })
        .collect())
}

/// Induced character per conjugacy class of the big group. Fails if the
/// element values are not constant on a class.
pub fn induced_character(dec: &CosetDecomposition, gamma: &IrrepMatrices) -> Result<Vec<Complex64>, RepError> {
    let by_element = induced_character_by_element(dec, gamma)?;
    let q = dec.group();
    let mut residual: f64 = 0.0;
    let per_class: Vec<Complex64> = q
        .classes()
        .iter()
        .map(|class| {
            let first = by_element[class[0]];
            for &x in class {
                residual = residual.max((by_element[x] - first).norm());
            }
            first
        })
        .collect();
    if residual > 1e-9 {
        return Err(RepError::NotAClassFunction { residual });
    }
    Ok(per_class)
}

/// How often each irrep of the big group occurs in the representation
/// induced from one irrep of the subgroup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplittingMultiplicities {
    pub subgroup_irrep: String,
    pub subgroup_dim: usize,
    pub num_cosets: usize,
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    pub multiplicities: Vec<usize>,
}

impl SplittingMultiplicities {
    /// `Σ_λ M_λ d_λ`.
    pub fn induced_dim(&self) -> usize {
        self.multiplicities.iter().zip(&self.dims).map(|(m, d)| m * d).sum()
    }

    /// Number of distinct levels, `Σ_λ M_λ`.
    pub fn num_levels(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// `d_λ` repeated `M_λ` times, ascending.
    pub fn degeneracy_multiset(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .dims
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(&d, &m)| std::iter::repeat_n(d, m))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn get(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label).map(|i| self.multiplicities[i])
    }
}

fn to_count(label: &str, value: Complex64) -> Result<usize, RepError> {
    let rounded = value.re.round();
    if value.im.abs() > INTEGRALITY || (value.re - rounded).abs() > INTEGRALITY || rounded < 0.0 {
        return Err(RepError::NonIntegralMultiplicity {
            label: label.to_string(),
            value: value.re,
            imag: value.im,
        });
    }
    Ok(rounded as usize)
}

/// Splitting multiplicities from a sum over the point-group elements only:
/// `M_λ = (1/p) Σ_g conj(χ_λ(g)) tr S(g)`.
///
/// Each value is cross-checked against the inner product of the induced
/// character with `χ_λ` over the whole big group; disagreement is an
/// internal error.
pub fn splitting_multiplicities(
    qtable: &CharacterTable,
    dec: &CosetDecomposition,
    gamma: &IrrepMatrices,
) -> Result<SplittingMultiplicities, RepError> {
    check_compatible(dec, gamma)?;
    let q = dec.group();
    if qtable.group().as_ref() != q.as_ref() {
        return Err(RepError::GroupMismatch("character table belongs to another group".into()));
    }
    let p = dec.subgroup().order() as f64;
    let f = q.order() as f64;
    let induced = induced_character_by_element(dec, gamma)?;

    let mut multiplicities = Vec::with_capacity(qtable.num_irreps());
    for (lambda, label) in qtable.labels().iter().enumerate() {
        let eq2: Complex64 = dec
            .subgroup_indices()
            .iter()
            .enumerate()
            .map(|(g, &h)| qtable.character_of_element(lambda, h).conj() * gamma.trace(g))
            .sum::<Complex64>()
            / p;
        let oracle: Complex64 = (0..q.order())
            .map(|h| qtable.character_of_element(lambda, h).conj() * induced[h])
            .sum::<Complex64>()
            / f;
        let m = to_count(label, eq2)?;
        let m_oracle = to_count(label, oracle)?;
        if m != m_oracle {
            return Err(RepError::ReciprocityMismatch {
                label: label.clone(),
                direct: m,
                induced: m_oracle,
            });
        }
        multiplicities.push(m);
    }
    let out = SplittingMultiplicities {
        subgroup_irrep: gamma.label().to_string(),
        subgroup_dim: gamma.dim(),
        num_cosets: dec.num_cosets(),
        labels: qtable.labels().to_vec(),
        dims: qtable.dims().to_vec(),
        multiplicities,
    };
    let expected = gamma.dim() * dec.num_cosets();
    if out.induced_dim() != expected {
        return Err(RepError::DimensionCount {
            found: out.induced_dim(),
            expected,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::pigroup::{coset_decomposition, full_pi_group, NucleusClass, NucleusFrame, PermInv};
    use crate::reptheory::{character_table, irrep_matrices};

    fn ammonia() -> (Arc<crate::pigroup::FiniteGroup>, CosetDecomposition) {
        let frame = NucleusFrame::new(
            vec![NucleusClass::new("H", 3, 1), NucleusClass::new("N", 1, 1)],
            true,
        )
        .unwrap();
        let p = Arc::new(full_pi_group(&frame, 64).unwrap());
        let r: Vec<usize> = p
            .elements()
            .iter()
            .enumerate()
            .filter(|(_, x)| {
                // C3v realization: even permutations plain, odd ones starred
                let odd = x.cycles().iter().filter(|c| c.len() == 2).count() % 2 == 1;
                odd == x.star()
            })
            .map(|(i, _)| i)
            .collect();
        let dec = coset_decomposition(&p, &r).unwrap();
        (p, dec)
    }

    #[test]
    fn induced_character_at_identity_counts_dimensions() {
        let (_, dec) = ammonia();
        let rt = character_table(dec.subgroup()).unwrap();
        for label in rt.labels() {
            let gamma = irrep_matrices(dec.subgroup(), label, &rt).unwrap();
            let chi = induced_character(&dec, &gamma).unwrap();
            assert!((chi[0] - (gamma.dim() * 2) as f64).norm() < 1e-12);
        }
    }

    #[test]
    fn permutation_character_counts_fixed_cosets() {
        let (p, dec) = ammonia();
        let rt = character_table(dec.subgroup()).unwrap();
        let gamma = irrep_matrices(dec.subgroup(), "irrep_0", &rt).unwrap();
        let chi = induced_character_by_element(&dec, &gamma).unwrap();
        for h in 0..p.order() {
            let fixed = dec
                .representatives()
                .iter()
                .filter(|&&gs| dec.factorize(p.mul(h, gs)).0 == dec.factorize(gs).0)
                .count();
            assert!((chi[h] - fixed as f64).norm() < 1e-12);
        }
        // R elements fix both cosets, the starred coset fixes none
        let e_star = p.index_of(&PermInv::inversion(4)).unwrap();
        assert!((chi[e_star]).norm() < 1e-12);
    }

    #[test]
    fn ammonia_trivial_level_doubles() {
        let (p, dec) = ammonia();
        let qt = character_table(&p).unwrap();
        let rt = character_table(dec.subgroup()).unwrap();
        let gamma = irrep_matrices(dec.subgroup(), "irrep_0", &rt).unwrap();
        let m = splitting_multiplicities(&qt, &dec, &gamma).unwrap();
        assert_eq!(m.num_levels(), 2);
        assert_eq!(m.degeneracy_multiset(), vec![1, 1]);
        assert!(m.multiplicities.iter().all(|&x| x <= 1));
    }

    #[test]
    fn no_tunneling_gives_no_splitting() {
        let (_, dec) = ammonia();
        let r = Arc::clone(dec.subgroup());
        let all: Vec<usize> = (0..r.order()).collect();
        let trivial = coset_decomposition(&r, &all).unwrap();
        let rt = character_table(&r).unwrap();
        for (lambda, label) in rt.labels().iter().enumerate() {
            let gamma = irrep_matrices(&r, label, &rt).unwrap();
            let m = splitting_multiplicities(&rt, &trivial, &gamma).unwrap();
            for (nu, &count) in m.multiplicities.iter().enumerate() {
                assert_eq!(count, usize::from(nu == lambda));
            }
        }
    }
}
