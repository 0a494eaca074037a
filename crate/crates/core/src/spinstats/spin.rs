use serde::{Deserialize, Serialize};

use crate::linalg::CMatrix;
use crate::pigroup::{NucleusFrame, PermInv};

/// `Π_c (2I_c+1)^{cycles of h inside class c}` over every class of the
/// frame. The inversion flag does not act on spin.
pub fn spin_character(h: &PermInv, frame: &NucleusFrame) -> f64 {
    character_over(h, frame, |_| true)
}

fn character_over(h: &PermInv, frame: &NucleusFrame, include: impl Fn(usize) -> bool) -> f64 {
    debug_assert_eq!(h.slots(), frame.total_slots());
    let mut value = 1.0;
    for cycle in h.cycles() {
        let class = frame.class_of_slot(cycle[0]);
        if include(class) {
            value *= frame.classes()[class].spin_multiplicity() as f64;
        }
    }
    value
}

/// The nuclear-spin product space of a frame.
///
/// Basis states are product kets `|m_1 m_2 …⟩` over the included slots,
/// the first included slot being the most significant digit. A class with
/// a single nucleus is a spectator; it may be left out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinSystem {
    frame: NucleusFrame,
    include_spectators: bool,
    slots: Vec<usize>,
    radix: Vec<usize>,
    dim: usize,
}

impl SpinSystem {
    pub fn new(frame: NucleusFrame, include_spectators: bool) -> Self {
        let mut slots = Vec::new();
        let mut radix = Vec::new();
        for (c, class) in frame.classes().iter().enumerate() {
            if class.count == 1 && !include_spectators {
                continue;
            }
            for slot in frame.class_slots(c) {
                slots.push(slot);
                radix.push(class.spin_multiplicity());
            }
        }
        let dim = radix.iter().product();
        Self {
            frame,
            include_spectators,
            slots,
            radix,
            dim,
        }
    }

    pub fn frame(&self) -> &NucleusFrame {
        &self.frame
    }

    pub fn include_spectators(&self) -> bool {
        self.include_spectators
    }

    /// Slots carrying a spin factor, ascending.
    pub fn included_slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn is_included(&self, class: usize) -> bool {
        self.include_spectators || self.frame.classes()[class].count > 1
    }

    /// Trace of the spin action of `h`.
    pub fn character(&self, h: &PermInv) -> f64 {
        character_over(h, &self.frame, |c| self.is_included(c))
    }

    /// The basis permutation `b ↦ b'` of `h`: the spin on slot `k` moves
    /// to slot `h(k)`, so `m'_{h(k)} = m_k`.
    pub fn permutation(&self, h: &PermInv) -> Vec<usize> {
        let n = self.slots.len();
        let mut position = vec![usize::MAX; self.frame.total_slots()];
        for (i, &s) in self.slots.iter().enumerate() {
            position[s] = i;
        }
        let target: Vec<usize> = self.slots.iter().map(|&s| position[h.image()[s]]).collect();
        let mut digits = vec![0usize; n];
        let mut moved = vec![0usize; n];
        (0..self.dim)
            .map(|b| {
                let mut rest = b;
                for i in (0..n).rev() {
                    digits[i] = rest % self.radix[i];
                    rest /= self.radix[i];
                }
                for i in 0..n {
                    moved[target[i]] = digits[i];
                }
                moved.iter().zip(&self.radix).fold(0, |acc, (&m, &r)| acc * r + m)
            })
            .collect()
    }

    /// Dense permutation matrix of [`SpinSystem::permutation`].
    pub fn matrix(&self, h: &PermInv) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (b, bp) in self.permutation(h).into_iter().enumerate() {
            m[(bp, b)] = 1.0.into();
        }
        m
    }
}
