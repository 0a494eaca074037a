use std::collections::{HashMap, VecDeque};

use super::{NucleusFrame, PermInv, PiGroupError};

/// Default bound on explicit closures.
pub const DEFAULT_CAP: usize = 1024;

/// An explicit finite group of permutation-inversions.
///
/// Element 0 is always the identity. Conjugacy classes are listed in order
/// of their smallest element index, so class 0 is `{identity}`.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    elements: Vec<PermInv>,
    index: HashMap<PermInv, usize>,
    cayley: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl FiniteGroup {
    /// Builds the group structure over an explicit element list.
    /// The first element must be the identity and the list must be closed.
    pub fn from_elements(elements: Vec<PermInv>) -> Result<Self, PiGroupError> {
        match elements.first() {
            Some(e) if e.is_identity() => {}
            _ => return Err(PiGroupError::MissingIdentity),
        }
        let slots = elements[0].slots();
        if let Some(bad) = elements.iter().find(|x| x.slots() != slots) {
            return Err(PiGroupError::FrameMismatch {
                expected: slots,
                found: bad.slots(),
            });
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, x) in elements.iter().enumerate() {
            if index.insert(x.clone(), i).is_some() {
                return Err(PiGroupError::DuplicateElement(x.to_string()));
            }
        }
        let order = elements.len();
        let mut cayley = vec![vec![0; order]; order];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let ab = a.compose_unchecked(b);
                cayley[i][j] = *index
                    .get(&ab)
                    .ok_or_else(|| PiGroupError::NotClosed(ab.to_string()))?;
            }
        }
        let inverse: Vec<usize> = (0..order)
            .map(|i| cayley[i].iter().position(|&k| k == 0).expect("closed group has inverses"))
            .collect();

        let mut class_of = vec![usize::MAX; order];
        let mut classes = Vec::new();
        for i in 0..order {
            if class_of[i] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = Vec::new();
            for x in 0..order {
                let c = cayley[cayley[x][i]][inverse[x]];
                if class_of[c] == usize::MAX {
                    class_of[c] = id;
                    members.push(c);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }

        Ok(Self {
            elements,
            index,
            cayley,
            inverse,
            classes,
            class_of,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn slots(&self) -> usize {
        self.elements[0].slots()
    }

    pub fn elements(&self) -> &[PermInv] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &PermInv {
        &self.elements[i]
    }

    pub fn index_of(&self, x: &PermInv) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Index of `a ∘ b`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a][b]
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn starred_count(&self) -> usize {
        self.elements.iter().filter(|x| x.star()).count()
    }

    /// True when `indices` contains the identity and is closed under products
    /// and inverses.
    pub fn is_subgroup(&self, indices: &[usize]) -> bool {
        let mut member = vec![false; self.order()];
        for &i in indices {
            if i >= self.order() {
                return false;
            }
            member[i] = true;
        }
        member[0]
            && indices.iter().all(|&a| member[self.inverse[a]])
            && indices
                .iter()
                .all(|&a| indices.iter().all(|&b| member[self.cayley[a][b]]))
    }

    /// Extracts a subgroup as a group in its own right, with elements in
    /// ascending parent-index order.
    pub fn subgroup(&self, indices: &[usize]) -> Result<FiniteGroup, PiGroupError> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if !self.is_subgroup(&sorted) {
            return Err(PiGroupError::NotASubgroup);
        }
        FiniteGroup::from_elements(sorted.iter().map(|&i| self.elements[i].clone()).collect())
    }

    /// Parent indices of every element of `other`, which must be contained
    /// in this group.
    pub fn embed(&self, other: &FiniteGroup) -> Result<Vec<usize>, PiGroupError> {
        other
            .elements()
            .iter()
            .map(|x| {
                self.index_of(x)
                    .ok_or_else(|| PiGroupError::NotContained(x.to_string()))
            })
            .collect()
    }
}

/// Closure of `{identity} ∪ generators`, breadth-first from the identity
/// with generators applied in the given order.
pub fn generate_group(
    generators: &[PermInv],
    frame: &NucleusFrame,
    cap: usize,
) -> Result<FiniteGroup, PiGroupError> {
    for g in generators {
        g.validate(frame)?;
    }
    let identity = PermInv::identity(frame.total_slots());
    let mut elements = vec![identity.clone()];
    let mut seen: HashMap<PermInv, usize> = HashMap::from([(identity, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in generators {
            let next = elements[i].compose_unchecked(g);
            if seen.contains_key(&next) {
                continue;
            }
            if elements.len() >= cap {
                return Err(PiGroupError::ClosureExceedsCap { cap });
            }
            seen.insert(next.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(next);
        }
    }
    FiniteGroup::from_elements(elements)
}

/// The full permutation-inversion group of a frame: the direct product of
/// the symmetric groups on each class, times `{E, E*}` when inversion is
/// allowed.
pub fn full_pi_group(frame: &NucleusFrame, cap: usize) -> Result<FiniteGroup, PiGroupError> {
    if frame.full_group_order() > cap {
        return Err(PiGroupError::ClosureExceedsCap { cap });
    }
    let n = frame.total_slots();
    let mut generators = Vec::new();
    for c in 0..frame.classes().len() {
        let slots: Vec<usize> = frame.class_slots(c).collect();
        if slots.len() >= 2 {
            generators.push(PermInv::from_cycles(n, &[vec![slots[0], slots[1]]], false)?);
        }
        if slots.len() >= 3 {
            generators.push(PermInv::from_cycles(n, std::slice::from_ref(&slots), false)?);
        }
    }
    if frame.allow_inversion() {
        generators.push(PermInv::inversion(n));
    }
    generate_group(&generators, frame, cap)
}

/// Which statistical-weight formula applies to a group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GroupCase {
    /// Permutations only.
    CaseA,
    /// Half permutations, half permutation-inversions.
    CaseB,
    Unsupported,
}

pub fn classify_case(group: &FiniteGroup) -> GroupCase {
    let starred = group.starred_count();
    if starred == 0 {
        GroupCase::CaseA
    } else if 2 * starred == group.order() {
        GroupCase::CaseB
    } else {
        // starred elements form a coset of the pure-permutation subgroup
        debug_assert!(false, "starred elements are neither none nor half");
        GroupCase::Unsupported
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pigroup::NucleusClass;

    fn ammonia_frame() -> NucleusFrame {
        NucleusFrame::new(
            vec![NucleusClass::new("H", 3, 1), NucleusClass::new("N", 1, 1)],
            true,
        )
        .unwrap()
    }

    fn cyc(n: usize, c: &[usize], star: bool) -> PermInv {
        PermInv::from_cycles(n, &[c.to_vec()], star).unwrap()
    }

    #[test]
    fn empty_generators_give_trivial_group() {
        let g = generate_group(&[], &ammonia_frame(), DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.classes(), &[vec![0]]);
    }

    #[test]
    fn c3v_realization_has_three_plain_and_three_starred() {
        let frame = ammonia_frame();
        let g = generate_group(&[cyc(4, &[0, 1, 2], false), cyc(4, &[0, 1], true)], &frame, 64).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.starred_count(), 3);
        assert_eq!(g.class_sizes(), vec![1, 2, 3]);
        assert_eq!(classify_case(&g), GroupCase::CaseB);
    }

    #[test]
    fn full_groups_have_factorial_orders() {
        assert_eq!(full_pi_group(&ammonia_frame(), 64).unwrap().order(), 12);
        let single = NucleusFrame::new(vec![NucleusClass::new("X", 1, 0)], false).unwrap();
        assert_eq!(full_pi_group(&single, 1).unwrap().order(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let err = full_pi_group(&ammonia_frame(), 11).unwrap_err();
        assert!(matches!(err, PiGroupError::ClosureExceedsCap { cap: 11 }));
        let err = generate_group(&[cyc(4, &[0, 1, 2], false)], &ammonia_frame(), 2).unwrap_err();
        assert!(matches!(err, PiGroupError::ClosureExceedsCap { cap: 2 }));
    }

    #[test]
    fn group_tables_satisfy_identity_and_inverse_laws() {
        let g = full_pi_group(&ammonia_frame(), 64).unwrap();
        for i in 0..g.order() {
            assert_eq!(g.mul(0, i), i);
            assert_eq!(g.mul(i, 0), i);
            assert_eq!(g.mul(i, g.inverse(i)), 0);
        }
        for class in g.classes() {
            assert_eq!(g.order() % class.len(), 0);
        }
    }

    #[test]
    fn pure_permutation_group_is_case_a() {
        let g = generate_group(&[cyc(4, &[0, 1, 2], false), cyc(4, &[0, 1], false)], &ammonia_frame(), 64).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(classify_case(&g), GroupCase::CaseA);
    }

    #[test]
    fn subgroup_extraction_checks_closure() {
        let g = full_pi_group(&ammonia_frame(), 64).unwrap();
        let three_cycle = g.index_of(&cyc(4, &[0, 1, 2], false)).unwrap();
        assert!(matches!(
            g.subgroup(&[0, three_cycle]),
            Err(PiGroupError::NotASubgroup)
        ));
        let e_star = g.index_of(&PermInv::inversion(4)).unwrap();
        let sub = g.subgroup(&[e_star, 0]).unwrap();
        assert_eq!(sub.order(), 2);
        assert!(sub.element(1).star());
    }
}
