use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{SpinError, SpinSystem};
use crate::pigroup::{classify_case, inversion_sign, parity_sign, FiniteGroup, GroupCase, PiGroupError};
use crate::reptheory::CharacterTable;

/// Which one-dimensional character of `P` the total state carries:
/// `ε(x)` for `S+`, `u(x)·ε(x)` for `S−`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpinSign {
    Plus,
    Minus,
}

impl SpinSign {
    pub fn symbol(self) -> &'static str {
        match self {
            SpinSign::Plus => "+",
            SpinSign::Minus => "-",
        }
    }
}

/// `ε(x)` for `Plus`, `u(x)·ε(x)` for `Minus`, for every element of `group`.
pub fn sign_character(group: &FiniteGroup, spin: &SpinSystem, sign: SpinSign) -> Result<Vec<i32>, PiGroupError> {
    group
        .elements()
        .iter()
        .map(|x| {
            let eps = parity_sign(x, spin.frame())?;
            Ok(match sign {
                SpinSign::Plus => eps,
                SpinSign::Minus => eps * inversion_sign(x),
            })
        })
        .collect()
}

/// `m_λ = (1/f) Σ_h c(h) χ_λ(h) χ_spin(h)` with `c` the character of `sign`.
pub fn twisted_multiplicity(qtable: &CharacterTable, spin: &SpinSystem, sign: SpinSign) -> Result<Vec<usize>, SpinError> {
    let q = qtable.group();
    let c = sign_character(q, spin, sign)?;
    let chi_spin: Vec<f64> = q.elements().iter().map(|h| spin.character(h)).collect();
    let f = q.order() as f64;
    (0..qtable.num_irreps())
        .map(|lambda| {
            let sum: Complex64 = (0..q.order())
                .map(|h| qtable.character_of_element(lambda, h) * (c[h] as f64 * chi_spin[h]))
                .sum();
            let m = sum / f;
            let rounded = m.re.round();
            if (m.re - rounded).abs() > 1e-6 || m.im.abs() > 1e-6 || rounded < 0.0 {
                return Err(SpinError::NonIntegralMultiplicity {
                    label: qtable.labels()[lambda].clone(),
                    value: m.re,
                    imag: m.im,
                });
            }
            Ok(rounded as usize)
        })
        .collect()
}

/// Per-irrep spin multiplicities in the form the case calls for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum SpinMultiplicity {
    CaseA { m: usize },
    CaseB { plus: usize, minus: usize },
}

impl SpinMultiplicity {
    /// `2m` in Case A, `m+ + m−` in Case B.
    pub fn weight(self) -> usize {
        match self {
            SpinMultiplicity::CaseA { m } => 2 * m,
            SpinMultiplicity::CaseB { plus, minus } => plus + minus,
        }
    }

    pub fn for_sign(self, sign: SpinSign) -> usize {
        match (self, sign) {
            (SpinMultiplicity::CaseA { m }, _) => m,
            (SpinMultiplicity::CaseB { plus, .. }, SpinSign::Plus) => plus,
            (SpinMultiplicity::CaseB { minus, .. }, SpinSign::Minus) => minus,
        }
    }
}

pub fn twisted_multiplicities(
    qtable: &CharacterTable,
    spin: &SpinSystem,
    case: GroupCase,
) -> Result<Vec<SpinMultiplicity>, SpinError> {
    match case {
        GroupCase::CaseA => Ok(twisted_multiplicity(qtable, spin, SpinSign::Plus)?
            .into_iter()
            .map(|m| SpinMultiplicity::CaseA { m })
            .collect()),
        GroupCase::CaseB => {
            let plus = twisted_multiplicity(qtable, spin, SpinSign::Plus)?;
            let minus = twisted_multiplicity(qtable, spin, SpinSign::Minus)?;
            Ok(plus
                .into_iter()
                .zip(minus)
                .map(|(plus, minus)| SpinMultiplicity::CaseB { plus, minus })
                .collect())
        }
        GroupCase::Unsupported => Err(SpinError::UnsupportedCase),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightEntry {
    pub label: String,
    pub dim: usize,
    pub multiplicity: SpinMultiplicity,
    pub weight: usize,
    /// Spin-statistically forbidden: no spin partner exists.
    pub missing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightTable {
    pub case: GroupCase,
    pub spin_dim: usize,
    pub include_spectators: bool,
    pub entries: Vec<WeightEntry>,
}

impl WeightTable {
    /// `Σ_λ d_λ m_λ` for one sign; equals the spin dimension.
    pub fn sum_rule(&self, sign: SpinSign) -> usize {
        self.entries.iter().map(|e| e.dim * e.multiplicity.for_sign(sign)).sum()
    }

    /// `Σ_λ d_λ · weight_λ`.
    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.dim * e.weight).sum()
    }

    pub fn missing_levels(&self) -> Vec<&str> {
        self.entries.iter().filter(|e| e.missing).map(|e| e.label.as_str()).collect()
    }
}

pub fn statistical_weights(qtable: &CharacterTable, spin: &SpinSystem) -> Result<WeightTable, SpinError> {
    let case = classify_case(qtable.group());
    let entries = twisted_multiplicities(qtable, spin, case)?
        .into_iter()
        .enumerate()
        .map(|(lambda, multiplicity)| {
            let weight = multiplicity.weight();
            WeightEntry {
                label: qtable.labels()[lambda].clone(),
                dim: qtable.dims()[lambda],
                multiplicity,
                weight,
                missing: weight == 0,
            }
        })
        .collect();
    Ok(WeightTable {
        case,
        spin_dim: spin.dim(),
        include_spectators: spin.include_spectators(),
        entries,
    })
}

/// The permutation `λ ↦ λ'` with `χ_λ' = c·χ_λ`.
pub fn twist_permutation(qtable: &CharacterTable, spin: &SpinSystem, sign: SpinSign) -> Result<Vec<usize>, SpinError> {
    let q = qtable.group();
    let c = sign_character(q, spin, sign)?;
    let reps: Vec<usize> = q.classes().iter().map(|k| k[0]).collect();
    (0..qtable.num_irreps())
        .map(|lambda| {
            let row: Vec<Complex64> = reps
                .iter()
                .enumerate()
                .map(|(k, &h)| qtable.character(lambda, k) * c[h] as f64)
                .collect();
            Ok(qtable.find_by_characters(&row)?)
        })
        .collect()
}
