use std::sync::Arc;

use num_complex::Complex64;

use super::TunnelingError;
use crate::linalg::{max_abs, CMatrix};
use crate::pigroup::{CosetDecomposition, FiniteGroup};
use crate::reptheory::IrrepMatrices;

/// The representation of the big group carried by the kets `G_r|Γi⟩`.
///
/// Basis vectors are ordered with the coset position outer and the irrep
/// component inner, so `(r, i)` sits at `r·d + i`. Every `D(h)` is block
/// monomial: column block `s` has a single nonzero block `S(g)` in row
/// block `u`, where `h ∘ G_s = G_u ∘ R(g)`.
#[derive(Debug, Clone)]
pub struct InducedRepresentation {
    dec: CosetDecomposition,
    irrep: IrrepMatrices,
    action: Vec<Vec<(usize, usize)>>,
}

impl InducedRepresentation {
    pub fn new(dec: CosetDecomposition, irrep: IrrepMatrices) -> Result<Self, TunnelingError> {
        if irrep.group().as_ref() != dec.subgroup().as_ref() {
            return Err(TunnelingError::IrrepGroupMismatch);
        }
        let q = Arc::clone(dec.group());
        let action = (0..q.order())
            .map(|h| {
                dec.representatives()
                    .iter()
                    .map(|&gs| dec.factorize(q.mul(h, gs)))
                    .collect()
            })
            .collect();
        Ok(Self { dec, irrep, action })
    }

    pub fn dec(&self) -> &CosetDecomposition {
        &self.dec
    }

    pub fn irrep(&self) -> &IrrepMatrices {
        &self.irrep
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.dec.group()
    }

    pub fn block_dim(&self) -> usize {
        self.irrep.dim()
    }

    pub fn dim(&self) -> usize {
        self.irrep.dim() * self.dec.num_cosets()
    }

    /// `(u, g)` with `h ∘ G_s = G_u ∘ R(g)`.
    pub fn action(&self, h: usize, s: usize) -> (usize, usize) {
        self.action[h][s]
    }

    pub fn matrix(&self, h: usize) -> CMatrix {
        let d = self.block_dim();
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for (s, &(u, g)) in self.action[h].iter().enumerate() {
            m.view_mut((u * d, s * d), (d, d)).copy_from(self.irrep.matrix(g));
        }
        m
    }

    pub fn character(&self, h: usize) -> Complex64 {
        self.action[h]
            .iter()
            .enumerate()
            .filter(|(s, (u, _))| s == u)
            .map(|(_, &(_, g))| self.irrep.trace(g))
            .sum()
    }

    /// `D(h) · m` for any `m` with `dim()` rows.
    pub fn apply_left(&self, h: usize, m: &CMatrix) -> CMatrix {
        let d = self.block_dim();
        let mut out = CMatrix::zeros(m.nrows(), m.ncols());
        for (s, &(u, g)) in self.action[h].iter().enumerate() {
            let block = self.irrep.matrix(g) * m.rows(s * d, d);
            out.rows_mut(u * d, d).copy_from(&block);
        }
        out
    }

    /// `m · D(h)` for any `m` with `dim()` columns.
    pub fn apply_right(&self, m: &CMatrix, h: usize) -> CMatrix {
        let d = self.block_dim();
        let mut out = CMatrix::zeros(m.nrows(), m.ncols());
        for (s, &(u, g)) in self.action[h].iter().enumerate() {
            let block = m.columns(u * d, d) * self.irrep.matrix(g);
            out.columns_mut(s * d, d).copy_from(&block);
        }
        out
    }

    /// `D(h) · m · D(h)†`.
    pub fn conjugate(&self, h: usize, m: &CMatrix) -> CMatrix {
        let hinv = self.group().inverse(h);
        self.apply_right(&self.apply_left(h, m), hinv)
    }

    /// `(1/f) Σ_h D(h) m D(h)†`, the orthogonal projection onto the
    /// commutant. Summed in element order.
    pub fn average(&self, m: &CMatrix) -> CMatrix {
        let f = self.group().order();
        let mut acc = CMatrix::zeros(m.nrows(), m.ncols());
        for h in 0..f {
            acc += self.conjugate(h, m);
        }
        acc / Complex64::new(f as f64, 0.0)
    }

    /// `max_h ‖D(h)·m − m·D(h)‖_max`.
    pub fn commutator_residual(&self, m: &CMatrix) -> f64 {
        (0..self.group().order())
            .map(|h| max_abs(&(self.apply_left(h, m) - self.apply_right(m, h))))
            .fold(0.0, f64::max)
    }
}

/// Dense `D(h)`.
pub fn induced_rep_matrix(rep: &InducedRepresentation, h: usize) -> CMatrix {
    rep.matrix(h)
}
