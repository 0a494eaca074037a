use serde::{Deserialize, Serialize};

use super::PiGroupError;

/// Exchange statistics of a class of identical nuclei.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Fermion,
    Boson,
}

impl Statistics {
    /// Statistics forced by a nuclear spin given as `2I`.
    pub fn for_twice_spin(twice_spin: u32) -> Self {
        if twice_spin % 2 == 1 {
            Statistics::Fermion
        } else {
            Statistics::Boson
        }
    }
}

/// One class of identical nuclei.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NucleusClass {
    pub label: String,
    pub count: usize,
    /// Nuclear spin times two, so that half-integer spins stay exact.
    pub twice_spin: u32,
    pub statistics: Statistics,
}

impl NucleusClass {
    pub fn new(label: impl Into<String>, count: usize, twice_spin: u32) -> Self {
        Self {
            label: label.into(),
            count,
            twice_spin,
            statistics: Statistics::for_twice_spin(twice_spin),
        }
    }

    pub fn spin(&self) -> f64 {
        f64::from(self.twice_spin) / 2.0
    }

    /// Dimension `2I + 1` of the single-nucleus spin space.
    pub fn spin_multiplicity(&self) -> usize {
        self.twice_spin as usize + 1
    }
}

/// The slot layout of a molecule: which slots hold which kind of identical
/// nucleus, and whether the spatial inversion is part of the symmetry.
///
/// Slots are numbered consecutively class by class, so class `c` owns the
/// half-open range `offsets[c] .. offsets[c] + count`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FrameRepr", into = "FrameRepr")]
pub struct NucleusFrame {
    classes: Vec<NucleusClass>,
    offsets: Vec<usize>,
    slot_class: Vec<usize>,
    allow_inversion: bool,
}

#[derive(Serialize, Deserialize)]
struct FrameRepr {
    classes: Vec<NucleusClass>,
    allow_inversion: bool,
}

impl TryFrom<FrameRepr> for NucleusFrame {
    type Error = PiGroupError;

    fn try_from(repr: FrameRepr) -> Result<Self, Self::Error> {
        NucleusFrame::new(repr.classes, repr.allow_inversion)
    }
}

impl From<NucleusFrame> for FrameRepr {
    fn from(frame: NucleusFrame) -> Self {
        FrameRepr {
            classes: frame.classes,
            allow_inversion: frame.allow_inversion,
        }
    }
}

impl NucleusFrame {
    pub fn new(classes: Vec<NucleusClass>, allow_inversion: bool) -> Result<Self, PiGroupError> {
        if classes.is_empty() {
            return Err(PiGroupError::InvalidFrame("frame has no nucleus classes".into()));
        }
        let mut offsets = Vec::with_capacity(classes.len());
        let mut slot_class = Vec::new();
        for (c, class) in classes.iter().enumerate() {
            if class.count == 0 {
                return Err(PiGroupError::InvalidFrame(format!(
                    "class '{}' has zero nuclei",
                    class.label
                )));
            }
            if class.statistics != Statistics::for_twice_spin(class.twice_spin) {
                return Err(PiGroupError::InvalidFrame(format!(
                    "class '{}' with spin {} cannot be a {:?}",
                    class.label,
                    class.spin(),
                    class.statistics
                )));
            }
            offsets.push(slot_class.len());
            slot_class.extend(std::iter::repeat_n(c, class.count));
        }
        Ok(Self {
            classes,
            offsets,
            slot_class,
            allow_inversion,
        })
    }

    pub fn classes(&self) -> &[NucleusClass] {
        &self.classes
    }

    pub fn total_slots(&self) -> usize {
        self.slot_class.len()
    }

    pub fn allow_inversion(&self) -> bool {
        self.allow_inversion
    }

    pub fn class_of_slot(&self, slot: usize) -> usize {
        self.slot_class[slot]
    }

    pub fn class_slots(&self, class: usize) -> std::ops::Range<usize> {
        let start = self.offsets[class];
        start..start + self.classes[class].count
    }

    /// Product of factorials of the class counts, doubled when the
    /// inversion is allowed. Saturates instead of overflowing.
    pub fn full_group_order(&self) -> usize {
        let perms = self.classes.iter().fold(1usize, |acc, c| {
            (1..=c.count).fold(acc, |a, k| a.saturating_mul(k))
        });
        if self.allow_inversion {
            perms.saturating_mul(2)
        } else {
            perms
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_ranges_partition_the_frame() {
        let frame = NucleusFrame::new(
            vec![NucleusClass::new("F", 5, 1), NucleusClass::new("P", 1, 1)],
            true,
        )
        .unwrap();
        assert_eq!(frame.total_slots(), 6);
        assert_eq!(frame.class_slots(0), 0..5);
        assert_eq!(frame.class_slots(1), 5..6);
        assert_eq!(frame.class_of_slot(5), 1);
        assert_eq!(frame.full_group_order(), 240);
    }

    #[test]
    fn inconsistent_statistics_is_rejected() {
        let mut class = NucleusClass::new("H", 2, 1);
        class.statistics = Statistics::Boson;
        assert!(matches!(
            NucleusFrame::new(vec![class], false),
            Err(PiGroupError::InvalidFrame(_))
        ));
    }

    #[test]
    fn empty_class_is_rejected() {
        assert!(NucleusFrame::new(vec![NucleusClass::new("H", 0, 1)], false).is_err());
    }
}
