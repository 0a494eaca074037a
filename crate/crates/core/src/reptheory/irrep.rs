use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CharacterTable, RepError, DEFAULT_SEED};
use crate::linalg::{hermitian_eigen, max_abs, orthonormal_range, CMatrix};
use crate::pigroup::FiniteGroup;

/// Largest group for which explicit irrep matrices are built.
pub const MAX_IRREP_GROUP_ORDER: usize = 64;

/// Unitary matrices `S(g)` of one irreducible representation, with the
/// convention `R(g)|i⟩ = Σ_j S(g)[j][i] |j⟩`.
#[derive(Debug, Clone)]
pub struct IrrepMatrices {
    group: Arc<FiniteGroup>,
    label: String,
    dim: usize,
    matrices: Vec<CMatrix>,
}

impl IrrepMatrices {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, element: usize) -> &CMatrix {
        &self.matrices[element]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn trace(&self, element: usize) -> Complex64 {
        self.matrices[element].trace()
    }

    /// `max ‖S(a)S(b) − S(ab)‖` over all pairs.
    pub fn homomorphism_residual(&self) -> f64 {
        let n = self.group.order();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let lhs = &self.matrices[a] * &self.matrices[b];
                worst = worst.max(max_abs(&(lhs - &self.matrices[self.group.mul(a, b)])));
            }
        }
        worst
    }

    pub fn unitarity_residual(&self) -> f64 {
        let eye = CMatrix::identity(self.dim, self.dim);
        self.matrices
            .iter()
            .map(|m| max_abs(&(m * m.adjoint() - &eye)))
            .fold(0.0, f64::max)
    }

    /// Re-indexes the matrices onto another group holding the same
    /// elements, possibly in a different order.
    pub fn transport(&self, target: Arc<FiniteGroup>) -> Result<IrrepMatrices, RepError> {
        if target.order() != self.group.order() {
            return Err(RepError::GroupMismatch(format!(
                "cannot move a representation of an order-{} group to an order-{} group",
                self.group.order(),
                target.order()
            )));
        }
        let matrices = target
            .elements()
            .iter()
            .map(|x| {
                self.group
                    .index_of(x)
                    .map(|i| self.matrices[i].clone())
                    .ok_or_else(|| RepError::GroupMismatch(format!("element {x} is missing")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IrrepMatrices {
            group: target,
            label: self.label.clone(),
            dim: self.dim,
            matrices,
        })
    }
}

pub fn irrep_matrices(
    group: &Arc<FiniteGroup>,
    label: &str,
    table: &CharacterTable,
) -> Result<IrrepMatrices, RepError> {
    irrep_matrices_with_seed(group, label, table, DEFAULT_SEED)
}

/// Builds the irrep by reducing the regular representation.
///
/// The character projector cuts out the `d²`-dimensional isotypic block;
/// a random Hermitian element of the commutant (built from right
/// multiplications) restricted to that block has `d` eigenvalues of
/// multiplicity `d`, and the lowest eigenspace is one irreducible copy.
pub fn irrep_matrices_with_seed(
    group: &Arc<FiniteGroup>,
    label: &str,
    table: &CharacterTable,
    seed: u64,
) -> Result<IrrepMatrices, RepError> {
    let n = group.order();
    if n > MAX_IRREP_GROUP_ORDER {
        return Err(RepError::TooLarge {
            order: n,
            max: MAX_IRREP_GROUP_ORDER,
        });
    }
    if table.group().as_ref() != group.as_ref() {
        return Err(RepError::GroupMismatch("character table belongs to another group".into()));
    }
    let lambda = table.index_of(label)?;
    let d = table.dims()[lambda];
    let chi: Vec<Complex64> = (0..n).map(|h| table.character_of_element(lambda, h)).collect();

    let scale = d as f64 / n as f64;
    let projector = CMatrix::from_fn(n, n, |x, g| chi[group.mul(x, group.inverse(g))].conj() * scale);
    let block = orthonormal_range(&projector, 1e-6);
    if block.ncols() != d * d {
        return Err(RepError::BlockExtractionFailed {
            residual: (block.ncols() as f64 - (d * d) as f64).abs(),
        });
    }

    let mut last_residual = f64::INFINITY;
    for attempt in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        // right multiplication: e_g ↦ e_{g k⁻¹}
        let mut commutant = CMatrix::zeros(n, n);
        for k in 0..n {
            let a = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let kinv = group.inverse(k);
            for g in 0..n {
                commutant[(group.mul(g, kinv), g)] += a;
                commutant[(group.mul(g, k), g)] += a.conj();
            }
        }
        let restricted = block.adjoint() * &commutant * &block;
        let eig = hermitian_eigen(&restricted)?;
        let ev = &eig.eigenvalues;
        let spread = (ev[ev.len() - 1] - ev[0]).max(1.0);
        let cluster_ok = ev[d - 1] - ev[0] < 1e-8 * spread;
        let gap_ok = d * d == d || ev[d] - ev[d - 1] > 1e-6 * spread;
        if !(cluster_ok && gap_ok) {
            continue;
        }
        let basis = &block * eig.eigenvectors.columns(0, d);

        let mut matrices = Vec::with_capacity(n);
        let mut residual: f64 = 0.0;
        for h in 0..n {
            // rows of Reg(h)·W: (Reg(h) W)[hg] = W[g]
            let moved = CMatrix::from_fn(n, d, |x, j| basis[(group.mul(group.inverse(h), x), j)]);
            let s = basis.adjoint() * &moved;
            residual = residual.max(max_abs(&(moved - &basis * &s)));
            matrices.push(s);
        }
        if residual > 1e-9 {
            last_residual = residual;
            continue;
        }
        return Ok(IrrepMatrices {
            group: Arc::clone(group),
            label: table.labels()[lambda].clone(),
            dim: d,
            matrices,
        });
    }
    Err(RepError::BlockExtractionFailed {
        residual: last_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pigroup::{generate_group, NucleusClass, NucleusFrame, PermInv};
    use crate::reptheory::character_table;

    fn s3() -> Arc<FiniteGroup> {
        let frame = NucleusFrame::new(vec![NucleusClass::new("H", 3, 1)], false).unwrap();
        let gens = [
            PermInv::from_cycles(3, &[vec![0, 1, 2]], false).unwrap(),
            PermInv::from_cycles(3, &[vec![0, 1]], false).unwrap(),
        ];
        Arc::new(generate_group(&gens, &frame, 64).unwrap())
    }

    #[test]
    fn trivial_irrep_is_all_ones() {
        let g = s3();
        let t = character_table(&g).unwrap();
        let rep = irrep_matrices(&g, "irrep_0", &t).unwrap();
        for m in rep.matrices() {
            assert_eq!(m.shape(), (1, 1));
            assert!((m[(0, 0)] - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn one_dimensional_irreps_equal_their_characters() {
        let g = s3();
        let t = character_table(&g).unwrap();
        let rep = irrep_matrices(&g, "irrep_1", &t).unwrap();
        for h in 0..g.order() {
            assert!((rep.matrix(h)[(0, 0)] - t.character_of_element(1, h)).norm() < 1e-12);
        }
    }

    #[test]
    fn two_dimensional_irrep_of_s3() {
        let g = s3();
        let t = character_table(&g).unwrap();
        let rep = irrep_matrices(&g, "irrep_2", &t).unwrap();
        assert_eq!(rep.dim(), 2);
        for h in 0..g.order() {
            let x = g.element(h);
            let expected = match x.cycles().iter().filter(|c| c.len() > 1).map(Vec::len).max() {
                None => 2.0,
                Some(3) => -1.0,
                Some(_) => 0.0,
            };
            assert!((rep.trace(h) - expected).norm() < 1e-9, "element {x}");
        }
        assert!(rep.homomorphism_residual() < 1e-9);
        assert!(rep.unitarity_residual() < 1e-9);
    }

    #[test]
    fn oversized_groups_are_refused() {
        let frame = NucleusFrame::new(vec![NucleusClass::new("H", 5, 1)], false).unwrap();
        let gens = [
            PermInv::from_cycles(5, &[vec![0, 1, 2, 3, 4]], false).unwrap(),
            PermInv::from_cycles(5, &[vec![0, 1]], false).unwrap(),
        ];
        let g = Arc::new(generate_group(&gens, &frame, 1024).unwrap());
        let t = character_table(&g).unwrap();
        assert!(matches!(
            irrep_matrices(&g, "irrep_0", &t),
            Err(RepError::TooLarge { order: 120, .. })
        ));
    }
}
