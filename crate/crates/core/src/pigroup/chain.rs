use std::sync::Arc;

use super::{
    full_pi_group, generate_group, CosetDecomposition, FiniteGroup, NucleusFrame, PermInv,
    PiGroupError,
};

/// The nested groups `R ⊆ Q ⊆ P` for one molecule.
///
/// `Q` is stored as a subgroup of `P` (ascending `P` index order) and the
/// point group `R` as a subgroup of `Q`, so every index map is monotone.
#[derive(Debug, Clone)]
pub struct GroupChain {
    frame: NucleusFrame,
    p: Arc<FiniteGroup>,
    q: Arc<FiniteGroup>,
    q_in_p: Vec<usize>,
    r_in_q: CosetDecomposition,
    q_in_p_dec: CosetDecomposition,
}

impl GroupChain {
    /// `R` is generated by `point_group`; `Q` by `point_group ∪ feasible`.
    pub fn new(
        frame: NucleusFrame,
        point_group: &[PermInv],
        feasible: &[PermInv],
        cap: usize,
    ) -> Result<Self, PiGroupError> {
        let p = Arc::new(full_pi_group(&frame, cap)?);
        let r = generate_group(point_group, &frame, cap)?;
        let all: Vec<PermInv> = point_group.iter().chain(feasible).cloned().collect();
        let q_gen = generate_group(&all, &frame, cap)?;
        let q_in_p = sorted(p.embed(&q_gen)?);
        let q = Arc::new(p.subgroup(&q_in_p)?);
        let r_in_q = CosetDecomposition::new(Arc::clone(&q), &q.embed(&r)?)?;
        let q_in_p_dec = CosetDecomposition::new(Arc::clone(&p), &q_in_p)?;
        Ok(Self {
            frame,
            p,
            q,
            q_in_p,
            r_in_q,
            q_in_p_dec,
        })
    }

    /// The same molecule with tunneling switched off: `Q` replaced by `R`.
    pub fn rigid(&self) -> Result<Self, PiGroupError> {
        let r = Arc::clone(self.r_in_q.subgroup());
        let q_in_p = sorted(self.p.embed(&r)?);
        let all: Vec<usize> = (0..r.order()).collect();
        let r_in_q = CosetDecomposition::new(Arc::clone(&r), &all)?;
        let q_in_p_dec = CosetDecomposition::new(Arc::clone(&self.p), &q_in_p)?;
        Ok(Self {
            frame: self.frame.clone(),
            p: Arc::clone(&self.p),
            q: r,
            q_in_p,
            r_in_q,
            q_in_p_dec,
        })
    }

    pub fn frame(&self) -> &NucleusFrame {
        &self.frame
    }

    pub fn p(&self) -> &Arc<FiniteGroup> {
        &self.p
    }

    pub fn q(&self) -> &Arc<FiniteGroup> {
        &self.q
    }

    pub fn r(&self) -> &Arc<FiniteGroup> {
        self.r_in_q.subgroup()
    }

    /// `P` index of each `Q` element.
    pub fn q_in_p(&self) -> &[usize] {
        &self.q_in_p
    }

    /// Cosets `G_r R` of the point group inside `Q`.
    pub fn r_in_q(&self) -> &CosetDecomposition {
        &self.r_in_q
    }

    /// Cosets `F_t Q` of `Q` inside `P`.
    pub fn q_in_p_dec(&self) -> &CosetDecomposition {
        &self.q_in_p_dec
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}
