//! Ready-made frames and generators for a few textbook molecules.
//!
//! Point groups are given as their permutation-inversion realizations:
//! a proper rotation becomes the permutation it induces on the nuclei, an
//! improper operation additionally carries `E*`.

use crate::pigroup::{GroupChain, NucleusClass, NucleusFrame, PermInv, PiGroupError, DEFAULT_CAP};

/// Frame, point-group generators and feasible tunneling generators.
#[derive(Debug, Clone)]
pub struct MoleculeSpec {
    pub name: &'static str,
    pub frame: NucleusFrame,
    pub point_group: Vec<PermInv>,
    pub feasible: Vec<PermInv>,
}

impl MoleculeSpec {
    pub fn chain(&self) -> Result<GroupChain, PiGroupError> {
        GroupChain::new(self.frame.clone(), &self.point_group, &self.feasible, DEFAULT_CAP)
    }

    /// The same molecule with no feasible tunneling.
    pub fn rigid(&self) -> Self {
        Self {
            feasible: Vec::new(),
            ..self.clone()
        }
    }
}

fn word(slots: usize, cycles: &[&[usize]], star: bool) -> PermInv {
    let zero_based: Vec<Vec<usize>> = cycles.iter().map(|c| c.iter().map(|k| k - 1).collect()).collect();
    PermInv::from_cycles(slots, &zero_based, star).expect("static generator is valid")
}

/// Ammonia with ¹⁵N (spin ½): slots 1–3 are H, slot 4 is N. The point group
/// is the C3v realization `{E, (123), (132), (12)*, (13)*, (23)*}`; the
/// umbrella inversion `E*` is feasible.
pub fn ammonia() -> MoleculeSpec {
    let frame = NucleusFrame::new(vec![NucleusClass::new("H", 3, 1), NucleusClass::new("N", 1, 1)], true)
        .expect("static frame");
    MoleculeSpec {
        name: "NH3",
        point_group: vec![word(4, &[&[1, 2, 3]], false), word(4, &[&[1, 2]], true)],
        feasible: vec![PermInv::inversion(4)],
        frame,
    }
}

/// Three identical spin-½ nuclei. The point group is the cyclic subgroup
/// `{E, (123), (132)}` and the transposition `(12)` is feasible, so `Q` is
/// the pure permutation group S3 (a Case (a) group) inside the order-12
/// full group.
pub fn three_spin_half_rotor() -> MoleculeSpec {
    let frame = NucleusFrame::new(vec![NucleusClass::new("H", 3, 1)], true).expect("static frame");
    MoleculeSpec {
        name: "H3-rotor",
        point_group: vec![word(3, &[&[1, 2, 3]], false)],
        feasible: vec![word(3, &[&[1, 2]], false)],
        frame,
    }
}

/// PF5: slots 1–3 equatorial F, 4–5 axial F, slot 6 P, all spin ½. The
/// point group is the D3h realization generated by `(123)`, `(23)(45)` and
/// `(45)*`. The pseudorotation `(14)(25)*` (pivot 3) is taken as feasible; together
/// with the point group it generates every permutation-inversion.
pub fn phosphorus_pentafluoride() -> MoleculeSpec {
    let frame = NucleusFrame::new(vec![NucleusClass::new("F", 5, 1), NucleusClass::new("P", 1, 1)], true)
        .expect("static frame");
    MoleculeSpec {
        name: "PF5",
        point_group: vec![
            word(6, &[&[1, 2, 3]], false),
            word(6, &[&[2, 3], &[4, 5]], false),
            word(6, &[&[4, 5]], true),
        ],
        feasible: vec![word(6, &[&[1, 4], &[2, 5]], true)],
        frame,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_orders() {
        let nh3 = ammonia().chain().unwrap();
        assert_eq!((nh3.r().order(), nh3.q().order(), nh3.p().order()), (6, 12, 12));
        let rotor = three_spin_half_rotor().chain().unwrap();
        assert_eq!((rotor.r().order(), rotor.q().order(), rotor.p().order()), (3, 6, 12));
        let pf5 = phosphorus_pentafluoride().chain().unwrap();
        assert_eq!((pf5.r().order(), pf5.q().order(), pf5.p().order()), (12, 240, 240));
        assert_eq!(pf5.r_in_q().num_cosets(), 20);
    }
}
