use serde::{Deserialize, Serialize};

use super::{build_h_nrm_with_threshold, InducedRepresentation, TunnelingError, TunnelingModel};
use crate::linalg::{hermitian_eigen, max_abs, orthonormal_range, CMatrix};
use crate::reptheory::{splitting_multiplicities, CharacterTable, SplittingMultiplicities};

/// A group of numerically coincident eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCluster {
    pub mean_energy: f64,
    pub degeneracy: usize,
    pub members: Vec<f64>,
    /// Sector levels `(λ label, μ)` whose energy falls in this cluster,
    /// with `μ` counted from 1.
    pub assigned: Vec<(String, usize)>,
}

/// Greedy single-linkage clustering of ascending eigenvalues: a gap
/// smaller than `tol` joins consecutive values.
pub fn cluster_levels(eigenvalues: &[f64], tol: f64) -> Vec<LevelCluster> {
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for &e in eigenvalues {
        match clusters.last_mut() {
            Some(c) if e - c[c.len() - 1] < tol => c.push(e),
            _ => clusters.push(vec![e]),
        }
    }
    clusters
        .into_iter()
        .map(|members| LevelCluster {
            mean_energy: members.iter().sum::<f64>() / members.len() as f64,
            degeneracy: members.len(),
            members,
            assigned: Vec::new(),
        })
        .collect()
}

/// Default clustering tolerance `1e-8 · max(1, |E0|, spread)`.
pub fn default_cluster_tolerance(e0: f64, eigenvalues: &[f64]) -> f64 {
    let spread = match (eigenvalues.first(), eigenvalues.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0.0,
    };
    1e-8 * 1f64.max(e0.abs()).max(spread)
}

/// `P_λ = (d_λ/f) Σ_h conj(χ_λ(h)) D(h)`.
pub fn character_projector(lambda: usize, qtable: &CharacterTable, rep: &InducedRepresentation) -> CMatrix {
    let q = rep.group();
    let f = q.order() as f64;
    let scale = qtable.dims()[lambda] as f64 / f;
    let n = rep.dim();
    let d = rep.block_dim();
    let mut p = CMatrix::zeros(n, n);
    for h in 0..q.order() {
        let w = qtable.character_of_element(lambda, h).conj() * scale;
        for s in 0..rep.dec().num_cosets() {
            let (u, g) = rep.action(h, s);
            let block = rep.irrep().matrix(g) * w;
            let mut target = p.view_mut((u * d, s * d), (d, d));
            target += block;
        }
    }
    p
}

/// The levels of one symmetry species.
#[derive(Debug, Clone)]
pub struct Sector {
    pub label: String,
    pub irrep_dim: usize,
    /// Orthonormal basis of the range of `P_λ`.
    pub basis: CMatrix,
    /// Energies `E_λμ` in ascending order, `μ = 1..=M_λ`.
    pub energies: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SectorAnalysis {
    pub sectors: Vec<Sector>,
    /// Largest `|⟨λ|H|ν⟩|` between different species.
    pub cross_sector_residual: f64,
}

impl SectorAnalysis {
    pub fn sector(&self, label: &str) -> Option<&Sector> {
        self.sectors.iter().find(|s| s.label == label)
    }

    /// Every sector level with its `d_λ` multiplicity, ascending.
    pub fn expanded_spectrum(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .sectors
            .iter()
            .flat_map(|s| s.energies.iter().flat_map(move |&e| std::iter::repeat_n(e, s.irrep_dim)))
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }
}

/// Restricts `H` to each species' projected space and reads off the level
/// energies. Eigenvalues inside a sector must come in groups of `d_λ`.
pub fn sector_energies(
    h: &CMatrix,
    qtable: &CharacterTable,
    rep: &InducedRepresentation,
    tol: f64,
) -> Result<SectorAnalysis, TunnelingError> {
    let mut sectors = Vec::new();
    for (lambda, label) in qtable.labels().iter().enumerate() {
        let d = qtable.dims()[lambda];
        let projector = character_projector(lambda, qtable, rep);
        let basis = orthonormal_range(&projector, 1e-6);
        if !basis.ncols().is_multiple_of(d) {
            return Err(TunnelingError::SectorDegeneracyMismatch {
                label: label.clone(),
                size: basis.ncols(),
                irrep_dim: d,
            });
        }
        let mut energies = Vec::new();
        if basis.ncols() > 0 {
            let restricted = basis.adjoint() * h * &basis;
            let eig = hermitian_eigen(&restricted)?;
            for cluster in cluster_levels(&eig.eigenvalues, tol) {
                if cluster.degeneracy % d != 0 {
                    return Err(TunnelingError::SectorDegeneracyMismatch {
                        label: label.clone(),
                        size: cluster.degeneracy,
                        irrep_dim: d,
                    });
                }
                for chunk in cluster.members.chunks(d) {
                    energies.push(chunk.iter().sum::<f64>() / d as f64);
                }
            }
        }
        sectors.push(Sector {
            label: label.clone(),
            irrep_dim: d,
            basis,
            energies,
        });
    }

    let mut cross: f64 = 0.0;
    for (a, sa) in sectors.iter().enumerate() {
        for sb in sectors.iter().skip(a + 1) {
            if sa.basis.ncols() == 0 || sb.basis.ncols() == 0 {
                continue;
            }
            cross = cross.max(max_abs(&(sa.basis.adjoint() * h * &sb.basis)));
        }
    }
    if cross > 1e-9 * max_abs(h).max(1.0) {
        return Err(TunnelingError::BlockOffDiagonal { residual: cross });
    }
    Ok(SectorAnalysis {
        sectors,
        cross_sector_residual: cross,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub hermiticity: f64,
    pub commutant: f64,
    pub block_offdiagonal: f64,
}

/// Predicted splitting, observed clusters, and whether they agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplittingReport {
    pub predicted: SplittingMultiplicities,
    pub e0: f64,
    pub cluster_tolerance: f64,
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<LevelCluster>,
    /// `(λ label, μ from 1, E_λμ)` for every predicted level.
    pub levels: Vec<(String, usize, f64)>,
    /// Degeneracies the clusters should show: `d_λ` repeated `M_λ` times,
    /// or a single block of every state when there is no tunneling.
    pub expected_degeneracies: Vec<usize>,
    pub matched: bool,
    /// Clusters holding more than one predicted level.
    pub accidental_degeneracies: usize,
    pub residuals: Residuals,
}

impl SplittingReport {
    pub fn observed_degeneracies(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.clusters.iter().map(|c| c.degeneracy).collect();
        v.sort_unstable();
        v
    }
}

/// Runs prediction, construction, diagonalization, clustering and sector
/// analysis, and reconciles the observed degeneracies with the prediction.
pub fn splitting_report(
    model: &TunnelingModel,
    qtable: &CharacterTable,
    tol: Option<f64>,
    hermiticity_threshold: f64,
) -> Result<SplittingReport, TunnelingError> {
    let rep = model.induced();
    let predicted = splitting_multiplicities(qtable, rep.dec(), rep.irrep())?;
    let h = build_h_nrm_with_threshold(model, hermiticity_threshold)?;
    let eig = hermitian_eigen(&h.matrix)?;
    let tol = tol.unwrap_or_else(|| default_cluster_tolerance(model.e0(), &eig.eigenvalues));
    let mut clusters = cluster_levels(&eig.eigenvalues, tol);
    let sectors = sector_energies(&h.matrix, qtable, rep, tol)?;

    let mut levels = Vec::new();
    for sector in &sectors.sectors {
        for (mu, &e) in sector.energies.iter().enumerate() {
            levels.push((sector.label.clone(), mu + 1, e));
        }
    }
    for (label, mu, e) in &levels {
        // nearest cluster; equal distances go to the lower cluster
        let best = clusters
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| (a.mean_energy - e).abs().total_cmp(&(b.mean_energy - e).abs()))
            .map(|(i, _)| i)
            .expect("at least one cluster");
        clusters[best].assigned.push((label.clone(), *mu));
    }

    let expected_degeneracies = if model.has_tunneling() {
        predicted.degeneracy_multiset()
    } else {
        vec![model.dim()]
    };
    let mut observed: Vec<usize> = clusters.iter().map(|c| c.degeneracy).collect();
    observed.sort_unstable();
    let accidental_degeneracies = clusters.iter().filter(|c| c.assigned.len() > 1).count();

    Ok(SplittingReport {
        matched: observed == expected_degeneracies,
        predicted,
        e0: model.e0(),
        cluster_tolerance: tol,
        eigenvalues: eig.eigenvalues,
        clusters,
        levels,
        expected_degeneracies,
        accidental_degeneracies,
        residuals: Residuals {
            hermiticity: h.hermiticity_residual,
            commutant: h.commutant_residual,
            block_offdiagonal: sectors.cross_sector_residual,
        },
    })
}
