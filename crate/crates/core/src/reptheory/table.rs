use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{RepError, DEFAULT_SEED};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::pigroup::FiniteGroup;

const MAX_ATTEMPTS: u64 = 8;

/// Complex characters of a finite group, one row per irrep and one column
/// per conjugacy class (in the group's class order).
#[derive(Debug, Clone)]
pub struct CharacterTable {
    group: Arc<FiniteGroup>,
    labels: Vec<String>,
    characters: Vec<Vec<Complex64>>,
    dims: Vec<usize>,
}

impl CharacterTable {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_irreps(&self) -> usize {
        self.dims.len()
    }

    /// `characters()[irrep][class]`.
    pub fn characters(&self) -> &[Vec<Complex64>] {
        &self.characters
    }

    pub fn character(&self, irrep: usize, class: usize) -> Complex64 {
        self.characters[irrep][class]
    }

    pub fn character_of_element(&self, irrep: usize, element: usize) -> Complex64 {
        self.characters[irrep][self.group.class_of(element)]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, RepError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| RepError::UnknownLabel(label.to_string()))
    }

    /// Irrep whose character row matches `row` (one value per class) within
    /// `1e-6`.
    pub fn find_by_characters(&self, row: &[Complex64]) -> Result<usize, RepError> {
        if row.len() != self.group.num_classes() {
            return Err(RepError::CharacterRowNotFound);
        }
        self.characters
            .iter()
            .position(|chars| chars.iter().zip(row).all(|(a, b)| (a - b).norm() < 1e-6))
            .ok_or(RepError::CharacterRowNotFound)
    }

    /// Renames irreps; labels absent from `map` keep their current name.
    pub fn relabel(&mut self, map: &BTreeMap<String, String>) -> Result<(), RepError> {
        for old in map.keys() {
            self.index_of(old)?;
        }
        let renamed: Vec<String> = self
            .labels
            .iter()
            .map(|l| map.get(l).cloned().unwrap_or_else(|| l.clone()))
            .collect();
        for (i, l) in renamed.iter().enumerate() {
            if renamed[..i].contains(l) {
                return Err(RepError::DuplicateLabel(l.clone()));
            }
        }
        self.labels = renamed;
        Ok(())
    }

    /// Largest deviation of `(1/|G|) Σ |K| χ_λ conj(χ_ν)` from `δ_λν`.
    pub fn row_orthogonality_residual(&self) -> f64 {
        let sizes = self.group.class_sizes();
        let order = self.group.order() as f64;
        let mut worst: f64 = 0.0;
        for (l, a) in self.characters.iter().enumerate() {
            for (n, b) in self.characters.iter().enumerate() {
                let s: Complex64 = a
                    .iter()
                    .zip(b)
                    .zip(&sizes)
                    .map(|((x, y), &k)| x * y.conj() * k as f64)
                    .sum::<Complex64>()
                    / order;
                let expected = if l == n { 1.0 } else { 0.0 };
                worst = worst.max((s - expected).norm());
            }
        }
        worst
    }

    /// Largest deviation of `(sqrt(|K_a||K_b|)/|G|) Σ_λ χ_λ(a) conj(χ_λ(b))`
    /// from `δ_ab`.
    pub fn column_orthogonality_residual(&self) -> f64 {
        let sizes = self.group.class_sizes();
        let order = self.group.order() as f64;
        let k = sizes.len();
        let mut worst: f64 = 0.0;
        for a in 0..k {
            for b in 0..k {
                let s: Complex64 = self
                    .characters
                    .iter()
                    .map(|row| row[a] * row[b].conj())
                    .sum();
                let s = s * ((sizes[a] * sizes[b]) as f64).sqrt() / order;
                let expected = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((s - expected).norm());
            }
        }
        worst
    }
}

/// Character table with the default seed.
pub fn character_table(group: &Arc<FiniteGroup>) -> Result<CharacterTable, RepError> {
    character_table_with_seed(group, DEFAULT_SEED)
}

/// Computes the character table from the class algebra.
///
/// With class sums `K_a` normalized to `e_a = K_a / sqrt|K_a|`, left
/// multiplication by each `K_k` is a normal operator on the centre of the
/// group algebra, and its adjoint is multiplication by the inverse class.
/// A random combination of the Hermitian and anti-Hermitian parts is
/// therefore Hermitian, and its eigenvectors are the central idempotents,
/// whose components are proportional to `conj(χ_λ(a)) sqrt|K_a|`.
pub fn character_table_with_seed(group: &Arc<FiniteGroup>, seed: u64) -> Result<CharacterTable, RepError> {
    let k = group.num_classes();
    let order = group.order();
    let sizes = group.class_sizes();

    // counts[m][a][b] = #{x ∈ K_m : x⁻¹ z_b ∈ K_a} for a fixed z_b ∈ K_b
    let mut counts = vec![vec![vec![0usize; k]; k]; k];
    for (b, class) in group.classes().iter().enumerate() {
        let z = class[0];
        for x in 0..order {
            let a = group.class_of(group.mul(group.inverse(x), z));
            counts[group.class_of(x)][a][b] += 1;
        }
    }
    let mult: Vec<CMatrix> = (0..k)
        .map(|m| {
            CMatrix::from_fn(k, k, |b, a| {
                let scale = (sizes[b] as f64 / sizes[a] as f64).sqrt();
                Complex64::new(counts[m][a][b] as f64 * scale, 0.0)
            })
        })
        .collect();

    let mut last_gap = 0.0;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let mut x = CMatrix::zeros(k, k);
        for m in mult.iter().skip(1) {
            let alpha: f64 = rng.random_range(-1.0..1.0);
            let beta: f64 = rng.random_range(-1.0..1.0);
            let adj = m.adjoint();
            x += (m + &adj) * Complex64::new(alpha, 0.0);
            x += (m - &adj) * Complex64::new(0.0, beta);
        }
        let eig = hermitian_eigen(&x)?;
        let spread = eig.eigenvalues.last().unwrap() - eig.eigenvalues[0];
        let gap = eig
            .eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        if k > 1 && gap < 1e-6 * spread.max(1.0) {
            last_gap = gap;
            continue;
        }
        return assemble(group, &eig.eigenvectors, &sizes);
    }
    Err(RepError::DegenerateRandomCombination {
        attempts: MAX_ATTEMPTS as usize,
        gap: last_gap,
    })
}

fn assemble(group: &Arc<FiniteGroup>, vectors: &CMatrix, sizes: &[usize]) -> Result<CharacterTable, RepError> {
    let k = sizes.len();
    let order = group.order();
    let mut rows: Vec<(usize, Vec<Complex64>)> = Vec::with_capacity(k);
    for col in 0..k {
        let y = vectors.column(col);
        let y0 = y[0];
        let dim_f = (order as f64).sqrt() * y0.norm();
        let dim = dim_f.round();
        if (dim_f - dim).abs() > 1e-6 || dim < 1.0 {
            return Err(RepError::NonIntegralDimension { value: dim_f });
        }
        let chars: Vec<Complex64> = (0..k)
            .map(|a| (y[a] / y0).conj() * dim / (sizes[a] as f64).sqrt())
            .map(clean)
            .collect();
        rows.push((dim as usize, chars));
    }
    rows.sort_by(|(da, ca), (db, cb)| da.cmp(db).then_with(|| compare_rows(cb, ca)));

    let sum_sq: usize = rows.iter().map(|(d, _)| d * d).sum();
    if sum_sq != order {
        return Err(RepError::NonIntegralDimension {
            value: sum_sq as f64,
        });
    }
    Ok(CharacterTable {
        group: Arc::clone(group),
        labels: (0..k).map(|i| format!("irrep_{i}")).collect(),
        dims: rows.iter().map(|(d, _)| *d).collect(),
        characters: rows.into_iter().map(|(_, c)| c).collect(),
    })
}

/// Snaps values within `1e-12` of an integer component to it, so sorting
/// and printing are stable.
fn clean(z: Complex64) -> Complex64 {
    let snap = |x: f64| {
        let r = x.round();
        if (x - r).abs() < 1e-12 {
            r
        } else {
            x
        }
    };
    Complex64::new(snap(z.re), snap(z.im))
}

fn compare_rows(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    let q = |x: f64| (x * 1e6).round() as i64;
    for (x, y) in a.iter().zip(b) {
        let ord = q(x.re).cmp(&q(y.re)).then(q(x.im).cmp(&q(y.im)));
        if ord.is_ne() {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}
