use std::fmt;

use serde::{Deserialize, Serialize};

use super::{NucleusFrame, PiGroupError, Statistics};

/// A permutation of nucleus slots, optionally combined with the spatial
/// inversion `E*`.
///
/// `image[k]` is the slot that the nucleus in slot `k` is carried to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PermInv {
    image: Vec<usize>,
    star: bool,
}

impl PermInv {
    pub fn identity(slots: usize) -> Self {
        Self {
            image: (0..slots).collect(),
            star: false,
        }
    }

    /// The bare inversion `E*`.
    pub fn inversion(slots: usize) -> Self {
        Self {
            image: (0..slots).collect(),
            star: true,
        }
    }

    pub fn new(image: Vec<usize>, star: bool) -> Result<Self, PiGroupError> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &k in &image {
            if k >= n || seen[k] {
                return Err(PiGroupError::NotABijection(image));
            }
            seen[k] = true;
        }
        Ok(Self { image, star })
    }

    /// Builds an element from disjoint cycles of 0-based slots.
    pub fn from_cycles(slots: usize, cycles: &[Vec<usize>], star: bool) -> Result<Self, PiGroupError> {
        let mut image: Vec<usize> = (0..slots).collect();
        let mut touched = vec![false; slots];
        for cycle in cycles {
            for (pos, &from) in cycle.iter().enumerate() {
                if from >= slots {
                    return Err(PiGroupError::SlotOutOfRange { slot: from, slots });
                }
                if touched[from] {
                    return Err(PiGroupError::OverlappingCycles(from));
                }
                touched[from] = true;
                image[from] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Self::new(image, star)
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn star(&self) -> bool {
        self.star
    }

    pub fn slots(&self) -> usize {
        self.image.len()
    }

    pub fn is_identity(&self) -> bool {
        !self.star && self.image.iter().enumerate().all(|(k, &v)| k == v)
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &PermInv) -> Result<PermInv, PiGroupError> {
        if self.slots() != other.slots() {
            return Err(PiGroupError::FrameMismatch {
                expected: self.slots(),
                found: other.slots(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &PermInv) -> PermInv {
        PermInv {
            image: other.image.iter().map(|&k| self.image[k]).collect(),
            star: self.star ^ other.star,
        }
    }

    pub fn inverse(&self) -> PermInv {
        let mut image = vec![0; self.slots()];
        for (k, &v) in self.image.iter().enumerate() {
            image[v] = k;
        }
        PermInv {
            image,
            star: self.star,
        }
    }

    /// Disjoint cycles including fixed points, each starting at its
    /// smallest slot, ordered by that slot.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.slots()];
        let mut out = Vec::new();
        for start in 0..self.slots() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut k = self.image[start];
            while k != start {
                seen[k] = true;
                cycle.push(k);
                k = self.image[k];
            }
            out.push(cycle);
        }
        out
    }

    /// Checks that the element lives on `frame` and only exchanges
    /// identical nuclei.
    pub fn validate(&self, frame: &NucleusFrame) -> Result<(), PiGroupError> {
        if self.slots() != frame.total_slots() {
            return Err(PiGroupError::FrameMismatch {
                expected: frame.total_slots(),
                found: self.slots(),
            });
        }
        for (k, &v) in self.image.iter().enumerate() {
            if frame.class_of_slot(k) != frame.class_of_slot(v) {
                return Err(PiGroupError::CrossClass { from: k, to: v });
            }
        }
        if self.star && !frame.allow_inversion() {
            return Err(PiGroupError::InversionNotAllowed);
        }
        Ok(())
    }
}

/// `a ∘ b`, with `b` applied first.
pub fn compose(a: &PermInv, b: &PermInv) -> Result<PermInv, PiGroupError> {
    a.compose(b)
}

/// `+1` or `-1` as the permutation of identical fermions is even or odd.
/// Boson classes and the inversion flag never contribute.
pub fn parity_sign(a: &PermInv, frame: &NucleusFrame) -> Result<i32, PiGroupError> {
    if a.slots() != frame.total_slots() {
        return Err(PiGroupError::FrameMismatch {
            expected: frame.total_slots(),
            found: a.slots(),
        });
    }
    let mut sign = 1;
    for cycle in a.cycles() {
        let class = frame.class_of_slot(cycle[0]);
        if frame.classes()[class].statistics == Statistics::Fermion && cycle.len() % 2 == 0 {
            sign = -sign;
        }
    }
    Ok(sign)
}

/// `-1` when the element contains the inversion, `+1` otherwise.
pub fn inversion_sign(a: &PermInv) -> i32 {
    if a.star {
        -1
    } else {
        1
    }
}

impl fmt::Display for PermInv {
    /// 1-based cycle notation, e.g. `(1 2 3)(4 5)*`; the identity prints as
    /// `E` and the bare inversion as `E*`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            f.write_str("E")?;
        }
        for cycle in cycles {
            let body: Vec<String> = cycle.iter().map(|k| (k + 1).to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        if self.star {
            f.write_str("*")?;
        }
        Ok(())
    }
}
