use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::{InducedRepresentation, TunnelingError};
use crate::linalg::{hermiticity_residual, max_abs, CMatrix};
use crate::pigroup::CosetDecomposition;
use crate::reptheory::IrrepMatrices;

/// Default bound on the relative anti-Hermitian part of the raw fill.
pub const DEFAULT_HERMITICITY_THRESHOLD: f64 = 1e-6;

/// Everything needed to build the non-rigid Hamiltonian for one rigid level:
/// the induced representation (cosets of `R` in `Q` and the irrep `Γ`),
/// the rigid energy, and one tunneling block per linked coset.
///
/// `seeds[u]` is `T_u = ⟨Γi|H G_u|Γj⟩`; the `u = 0` block is always
/// `E0·1` and is not stored.
#[derive(Debug, Clone)]
pub struct TunnelingModel {
    induced: InducedRepresentation,
    e0: f64,
    seeds: BTreeMap<usize, CMatrix>,
}

impl TunnelingModel {
    pub fn new(
        dec: CosetDecomposition,
        irrep: IrrepMatrices,
        e0: f64,
        seeds: BTreeMap<usize, CMatrix>,
    ) -> Result<Self, TunnelingError> {
        let induced = InducedRepresentation::new(dec, irrep)?;
        Self::from_induced(induced, e0, seeds)
    }

    pub fn from_induced(
        induced: InducedRepresentation,
        e0: f64,
        mut seeds: BTreeMap<usize, CMatrix>,
    ) -> Result<Self, TunnelingError> {
        let d = induced.block_dim();
        let cosets = induced.dec().num_cosets();
        for (&u, block) in &seeds {
            if u >= cosets {
                return Err(TunnelingError::InvalidSeed(format!(
                    "coset {} does not exist (there are {cosets})",
                    u + 1
                )));
            }
            if block.shape() != (d, d) {
                return Err(TunnelingError::InvalidSeed(format!(
                    "block for coset {} is {}x{}, expected {d}x{d}",
                    u + 1,
                    block.nrows(),
                    block.ncols()
                )));
            }
        }
        if let Some(b0) = seeds.remove(&0) {
            let eye = CMatrix::identity(d, d) * Complex64::new(e0, 0.0);
            if max_abs(&(b0 - eye)) > 1e-12 {
                return Err(TunnelingError::InvalidSeed(
                    "the block of the identity coset must equal E0 times the identity".into(),
                ));
            }
        }
        Ok(Self { induced, e0, seeds })
    }

    /// Builds seeds from blocks `⟨Γ|H q|Γ⟩` given for arbitrary elements
    /// `q` of `Q`. With `q = G_u ∘ R(g)` the coset block is
    /// `T_u = F(q) · S(g)†`.
    pub fn from_element_blocks(
        dec: CosetDecomposition,
        irrep: IrrepMatrices,
        e0: f64,
        blocks: &[(usize, CMatrix)],
    ) -> Result<Self, TunnelingError> {
        let induced = InducedRepresentation::new(dec, irrep)?;
        let d = induced.block_dim();
        let mut seeds: BTreeMap<usize, CMatrix> = BTreeMap::new();
        for (q, block) in blocks {
            if *q >= induced.group().order() {
                return Err(TunnelingError::InvalidSeed(format!("element index {q} out of range")));
            }
            if block.shape() != (d, d) {
                return Err(TunnelingError::InvalidSeed(format!(
                    "block for {} is {}x{}, expected {d}x{d}",
                    induced.group().element(*q),
                    block.nrows(),
                    block.ncols()
                )));
            }
            let (u, g) = induced.dec().factorize(*q);
            if u == 0 {
                return Err(TunnelingError::InvalidSeed(format!(
                    "{} lies in the point group; its block is fixed by E0",
                    induced.group().element(*q)
                )));
            }
            let t = block * induced.irrep().matrix(g).adjoint();
            if let Some(prev) = seeds.get(&u) {
                let scale = max_abs(prev).max(max_abs(&t)).max(f64::MIN_POSITIVE);
                if max_abs(&(prev - &t)) > 1e-9 * scale {
                    return Err(TunnelingError::InvalidSeed(format!(
                        "conflicting blocks given for coset {}",
                        u + 1
                    )));
                }
            }
            seeds.insert(u, t);
        }
        Self::from_induced(induced, e0, seeds)
    }

    /// A model whose seed blocks are drawn at random and then made
    /// consistent: the raw fill is hermitized and projected onto the
    /// commutant, and the seeds are read back from the first block row.
    pub fn with_random_seeds<R: Rng + ?Sized>(
        dec: CosetDecomposition,
        irrep: IrrepMatrices,
        e0: f64,
        scale: f64,
        rng: &mut R,
    ) -> Result<Self, TunnelingError> {
        let induced = InducedRepresentation::new(dec, irrep)?;
        let d = induced.block_dim();
        let raw: BTreeMap<usize, CMatrix> = (1..induced.dec().num_cosets())
            .map(|u| {
                let block = CMatrix::from_fn(d, d, |_, _| {
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale
                });
                (u, block)
            })
            .collect();
        let h = symmetrize(&induced, raw_fill(&induced, e0, &raw)).0;
        // entries the symmetry forces to vanish come back as roundoff
        let floor = 1e-12 * scale.abs();
        let seeds = (1..induced.dec().num_cosets())
            .map(|u| {
                let block = h
                    .view((0, u * d), (d, d))
                    .map(|z| Complex64::new(if z.re.abs() < floor { 0.0 } else { z.re }, if z.im.abs() < floor { 0.0 } else { z.im }));
                (u, block)
            })
            .collect();
        Self::from_induced(induced, e0, seeds)
    }

    pub fn induced(&self) -> &InducedRepresentation {
        &self.induced
    }

    pub fn dec(&self) -> &CosetDecomposition {
        self.induced.dec()
    }

    pub fn irrep(&self) -> &IrrepMatrices {
        self.induced.irrep()
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn seeds(&self) -> &BTreeMap<usize, CMatrix> {
        &self.seeds
    }

    pub fn dim(&self) -> usize {
        self.induced.dim()
    }

    /// True when at least one linked-coset block is nonzero.
    pub fn has_tunneling(&self) -> bool {
        self.seeds.values().any(|b| max_abs(b) > 0.0)
    }

    /// The same model with every tunneling block multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let seeds = self
            .seeds
            .iter()
            .map(|(&u, b)| (u, b * Complex64::new(factor, 0.0)))
            .collect();
        Self {
            induced: self.induced.clone(),
            e0: self.e0,
            seeds,
        }
    }
}

/// `H_R`: `E0` on the diagonal of the full `d·f/p` basis.
pub fn build_h_r(model: &TunnelingModel) -> DMatrix<f64> {
    DMatrix::identity(model.dim(), model.dim()) * model.e0
}

/// The symmetrized non-rigid Hamiltonian and the diagnostics gathered while
/// building it.
#[derive(Debug, Clone)]
pub struct NrmHamiltonian {
    pub matrix: CMatrix,
    /// `max|H − H†|` of the raw fill relative to its largest tunneling entry.
    pub hermiticity_residual: f64,
    /// `max|H_projected − H_hermitized|`.
    pub projection_displacement: f64,
    /// `max_h ‖D(h)H − HD(h)‖_max` of the final matrix.
    pub commutant_residual: f64,
}

fn raw_fill(induced: &InducedRepresentation, e0: f64, seeds: &BTreeMap<usize, CMatrix>) -> CMatrix {
    let d = induced.block_dim();
    let dec = induced.dec();
    let q = dec.group();
    let n = dec.num_cosets();
    let mut h = CMatrix::zeros(n * d, n * d);
    for (s, &gs) in dec.representatives().iter().enumerate() {
        let gs_inv = q.inverse(gs);
        for (r, &gr) in dec.representatives().iter().enumerate() {
            let (u, g) = dec.factorize(q.mul(gs_inv, gr));
            let sg = induced.irrep().matrix(g);
            let block = if u == 0 {
                sg * Complex64::new(e0, 0.0)
            } else if let Some(t) = seeds.get(&u) {
                t * sg
            } else {
                continue;
            };
            h.view_mut((s * d, r * d), (d, d)).copy_from(&block);
        }
    }
    h
}

/// Hermitizes and projects onto the commutant. Returns the result with the
/// relative anti-Hermitian residual of the input and the projection
/// displacement.
fn symmetrize(induced: &InducedRepresentation, raw: CMatrix) -> (CMatrix, f64, f64) {
    let n = raw.nrows();
    let diag_scale = raw.diagonal().iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let tunneling_scale = {
        let mut off = raw.clone();
        for i in 0..n {
            off[(i, i)] = Complex64::new(0.0, 0.0);
        }
        max_abs(&off)
    };
    let residual = hermiticity_residual(&raw);
    let relative = if tunneling_scale > 0.0 {
        residual / tunneling_scale
    } else if diag_scale > 0.0 {
        residual / diag_scale
    } else {
        residual
    };
    let hermitized = (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0);
    let projected = induced.average(&hermitized);
    let displacement = max_abs(&(&projected - &hermitized));
    (projected, relative, displacement)
}

pub fn build_h_nrm(model: &TunnelingModel) -> Result<NrmHamiltonian, TunnelingError> {
    build_h_nrm_with_threshold(model, DEFAULT_HERMITICITY_THRESHOLD)
}

/// Builds `H_NRM` in three stages: fill every block from the seed of the
/// coset containing `G_s⁻¹ G_r`, hermitize, and average over the group.
pub fn build_h_nrm_with_threshold(model: &TunnelingModel, threshold: f64) -> Result<NrmHamiltonian, TunnelingError> {
    let raw = raw_fill(&model.induced, model.e0, &model.seeds);
    let (matrix, hermiticity_residual, projection_displacement) = symmetrize(&model.induced, raw);
    if hermiticity_residual > threshold {
        return Err(TunnelingError::SeedInconsistency {
            residual: hermiticity_residual,
            threshold,
        });
    }
    let commutant_residual = model.induced.commutator_residual(&matrix);
    let tolerance = 1e-10 * max_abs(&matrix).max(1.0);
    if commutant_residual > tolerance {
        return Err(TunnelingError::CommutantResidual {
            residual: commutant_residual,
        });
    }
    Ok(NrmHamiltonian {
        matrix,
        hermiticity_residual,
        projection_displacement,
        commutant_residual,
    })
}
