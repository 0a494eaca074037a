use std::sync::Arc;

use super::{FiniteGroup, PiGroupError};

/// Left cosets `G_u R` of a subgroup, with the factorization
/// `q = G_u ∘ R(g)` stored for every element `q`.
///
/// Subgroup positions `g` index the extracted subgroup returned by
/// [`CosetDecomposition::subgroup`], whose elements are in ascending
/// parent-index order.
#[derive(Debug, Clone)]
pub struct CosetDecomposition {
    group: Arc<FiniteGroup>,
    subgroup_indices: Vec<usize>,
    subgroup: Arc<FiniteGroup>,
    representatives: Vec<usize>,
    membership: Vec<(usize, usize)>,
}

impl CosetDecomposition {
    /// Representatives are chosen as the smallest element index not yet
    /// covered, so the first representative is the identity.
    pub fn new(group: Arc<FiniteGroup>, subgroup_indices: &[usize]) -> Result<Self, PiGroupError> {
        let (sub, subgroup) = Self::prepare(&group, subgroup_indices)?;
        let order = group.order();
        let mut membership = vec![(usize::MAX, usize::MAX); order];
        let mut representatives = Vec::new();
        for q in 0..order {
            if membership[q].0 != usize::MAX {
                continue;
            }
            let u = representatives.len();
            representatives.push(q);
            for (g, &h) in sub.iter().enumerate() {
                membership[group.mul(q, h)] = (u, g);
            }
        }
        Ok(Self {
            group,
            subgroup_indices: sub,
            subgroup,
            representatives,
            membership,
        })
    }

    /// Uses caller-chosen representatives, one per coset, the first being
    /// the identity.
    pub fn with_representatives(
        group: Arc<FiniteGroup>,
        subgroup_indices: &[usize],
        representatives: Vec<usize>,
    ) -> Result<Self, PiGroupError> {
        let (sub, subgroup) = Self::prepare(&group, subgroup_indices)?;
        let order = group.order();
        if representatives.first() != Some(&0) {
            return Err(PiGroupError::BadRepresentatives(
                "the first representative must be the identity".into(),
            ));
        }
        if representatives.len() * sub.len() != order {
            return Err(PiGroupError::BadRepresentatives(format!(
                "expected {} representatives, got {}",
                order / sub.len(),
                representatives.len()
            )));
        }
        let mut membership = vec![(usize::MAX, usize::MAX); order];
        for (u, &rep) in representatives.iter().enumerate() {
            if rep >= order {
                return Err(PiGroupError::BadRepresentatives(format!("index {rep} out of range")));
            }
            for (g, &h) in sub.iter().enumerate() {
                let q = group.mul(rep, h);
                if membership[q].0 != usize::MAX {
                    return Err(PiGroupError::BadRepresentatives(format!(
                        "representatives {} and {} share a coset",
                        representatives[membership[q].0], rep
                    )));
                }
                membership[q] = (u, g);
            }
        }
        Ok(Self {
            group,
            subgroup_indices: sub,
            subgroup,
            representatives,
            membership,
        })
    }

    fn prepare(
        group: &FiniteGroup,
        subgroup_indices: &[usize],
    ) -> Result<(Vec<usize>, Arc<FiniteGroup>), PiGroupError> {
        let mut sub = subgroup_indices.to_vec();
        sub.sort_unstable();
        sub.dedup();
        if !group.is_subgroup(&sub) {
            return Err(PiGroupError::NotASubgroup);
        }
        let subgroup = Arc::new(group.subgroup(&sub)?);
        Ok((sub, subgroup))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn subgroup(&self) -> &Arc<FiniteGroup> {
        &self.subgroup
    }

    pub fn subgroup_indices(&self) -> &[usize] {
        &self.subgroup_indices
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn num_cosets(&self) -> usize {
        self.representatives.len()
    }

    /// The unique `(u, g)` with `q = G_u ∘ R(g)`.
    pub fn factorize(&self, q: usize) -> (usize, usize) {
        self.membership[q]
    }

    /// Elements of coset `u`, in subgroup-position order.
    pub fn coset(&self, u: usize) -> Vec<usize> {
        let rep = self.representatives[u];
        self.subgroup_indices
            .iter()
            .map(|&h| self.group.mul(rep, h))
            .collect()
    }
}

/// Left-coset decomposition with smallest-index representatives.
pub fn coset_decomposition(
    group: &Arc<FiniteGroup>,
    subgroup_indices: &[usize],
) -> Result<CosetDecomposition, PiGroupError> {
    CosetDecomposition::new(Arc::clone(group), subgroup_indices)
}

/// Free-function form of [`CosetDecomposition::factorize`].
pub fn factorize(q: usize, dec: &CosetDecomposition) -> (usize, usize) {
    dec.factorize(q)
}
