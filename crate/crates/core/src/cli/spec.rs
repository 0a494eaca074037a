use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::linalg::CMatrix;
use crate::pigroup::{NucleusClass, NucleusFrame, PermInv, Statistics, DEFAULT_CAP};
use crate::tunneling::DEFAULT_HERMITICITY_THRESHOLD;

pub const SCHEMA: &str = "nrmsym-spec/1";

/// A nuclear spin written as a number (`0.5`) or a fraction (`"1/2"`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpinValue {
    Number(f64),
    Text(String),
}

impl SpinValue {
    pub fn twice(&self) -> Result<u32, String> {
        let value = match self {
            SpinValue::Number(x) => *x,
            SpinValue::Text(s) => match s.split_once('/') {
                Some((n, d)) => {
                    let n: f64 = n.trim().parse().map_err(|_| format!("bad spin '{s}'"))?;
                    let d: f64 = d.trim().parse().map_err(|_| format!("bad spin '{s}'"))?;
                    n / d
                }
                None => s.trim().parse().map_err(|_| format!("bad spin '{s}'"))?,
            },
        };
        let twice = 2.0 * value;
        if !(0.0..=64.0).contains(&twice) || (twice - twice.round()).abs() > 1e-12 {
            return Err(format!("spin {value} is not a nonnegative multiple of 1/2"));
        }
        Ok(twice.round() as u32)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub label: String,
    pub count: usize,
    pub spin: SpinValue,
    #[serde(default)]
    pub statistics: Option<Statistics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    pub classes: Vec<ClassSpec>,
    #[serde(default = "yes")]
    pub allow_inversion: bool,
}

fn yes() -> bool {
    true
}

/// A complex number as `x` or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ComplexValue> for Complex64 {
    fn from(v: ComplexValue) -> Self {
        match v {
            ComplexValue::Real(x) => Complex64::new(x, 0.0),
            ComplexValue::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

/// Selects the point-group irrep `Γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum IrrepSelection {
    Label(String),
    Index(usize),
    /// One value per conjugacy class, in the order `group` prints them.
    Characters(Vec<ComplexValue>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedBlock {
    /// Any element of the coset, as a word.
    pub element: String,
    /// Rows of complex entries.
    pub matrix: Vec<Vec<ComplexValue>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub cluster_tol: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Draw consistent random tunneling blocks of this scale instead of
    /// reading `seed_blocks`.
    #[serde(default)]
    pub random_seed_scale: Option<f64>,
    #[serde(default = "yes")]
    pub include_spectator_spins: bool,
    #[serde(default = "default_threshold")]
    pub hermiticity_threshold: f64,
    #[serde(default = "default_cap")]
    pub cap: usize,
    #[serde(default)]
    pub relabel_q: BTreeMap<String, String>,
    #[serde(default)]
    pub relabel_r: BTreeMap<String, String>,
}

fn default_threshold() -> f64 {
    DEFAULT_HERMITICITY_THRESHOLD
}

fn default_cap() -> usize {
    DEFAULT_CAP
}

impl Default for Options {
    fn default() -> Self {
        Self {
            cluster_tol: None,
            seed: None,
            random_seed_scale: None,
            include_spectator_spins: true,
            hermiticity_threshold: DEFAULT_HERMITICITY_THRESHOLD,
            cap: DEFAULT_CAP,
            relabel_q: BTreeMap::new(),
            relabel_r: BTreeMap::new(),
        }
    }
}

/// The file format, before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpec {
    pub schema: String,
    #[serde(default)]
    pub name: String,
    pub frame: FrameSpec,
    #[serde(default)]
    pub point_group: Vec<String>,
    #[serde(default)]
    pub feasible: Vec<String>,
    #[serde(default)]
    pub irrep: Option<IrrepSelection>,
    #[serde(default)]
    pub e0: f64,
    #[serde(default)]
    pub seed_blocks: Vec<SeedBlock>,
    #[serde(default)]
    pub options: Options,
}

/// A validated job.
#[derive(Debug, Clone)]
pub struct JobSpec {
    pub name: String,
    pub frame: NucleusFrame,
    pub point_group: Vec<PermInv>,
    pub feasible: Vec<PermInv>,
    pub irrep: Option<IrrepSelection>,
    pub e0: f64,
    pub seed_blocks: Vec<(PermInv, CMatrix)>,
    pub options: Options,
}

/// Parses a word such as `"(1 2 3)(4 5)*"`, `"E"`, `"E*"` or `"()"` with
/// 1-based slots.
pub fn parse_word(word: &str, frame: &NucleusFrame) -> Result<PermInv, CliError> {
    let invalid = |why: &str| CliError::Validation(format!("word '{word}': {why}"));
    let mut body = word.trim();
    let star = body.ends_with('*');
    if star {
        body = body[..body.len() - 1].trim_end();
    }
    let n = frame.total_slots();
    let mut cycles = Vec::new();
    if body != "E" && !body.is_empty() {
        let mut rest = body;
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(|| invalid("expected '('"))?;
            let close = open.find(')').ok_or_else(|| invalid("missing ')'"))?;
            let cycle = open[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| match t.parse::<usize>() {
                    Ok(k) if (1..=n).contains(&k) => Ok(k - 1),
                    _ => Err(invalid(&format!("slot '{t}' is not in 1..={n}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = open[close + 1..].trim_start();
        }
    }
    let element = PermInv::from_cycles(n, &cycles, star).map_err(|e| invalid(&e.to_string()))?;
    element.validate(frame).map_err(|e| invalid(&e.to_string()))?;
    Ok(element)
}

fn build_frame(spec: &FrameSpec) -> Result<NucleusFrame, CliError> {
    let classes = spec
        .classes
        .iter()
        .map(|c| {
            let twice = c
                .spin
                .twice()
                .map_err(|e| CliError::Validation(format!("class '{}': {e}", c.label)))?;
            let mut class = NucleusClass::new(c.label.clone(), c.count, twice);
            if let Some(stat) = c.statistics {
                class.statistics = stat;
            }
            Ok(class)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    NucleusFrame::new(classes, spec.allow_inversion).map_err(|e| CliError::Validation(e.to_string()))
}

impl JobSpec {
    pub fn from_raw(raw: RawSpec) -> Result<Self, CliError> {
        if raw.schema != SCHEMA {
            return Err(CliError::Validation(format!(
                "schema '{}' is not supported (expected '{SCHEMA}')",
                raw.schema
            )));
        }
        let frame = build_frame(&raw.frame)?;
        let words = |list: &[String]| list.iter().map(|w| parse_word(w, &frame)).collect::<Result<Vec<_>, _>>();
        let point_group = words(&raw.point_group)?;
        let feasible = words(&raw.feasible)?;
        let seed_blocks = raw
            .seed_blocks
            .iter()
            .map(|b| {
                let element = parse_word(&b.element, &frame)?;
                let rows = b.matrix.len();
                let cols = b.matrix.first().map_or(0, Vec::len);
                if rows == 0 || b.matrix.iter().any(|r| r.len() != cols) {
                    return Err(CliError::Validation(format!(
                        "seed block for '{}' is not a rectangular nonempty matrix",
                        b.element
                    )));
                }
                let matrix = CMatrix::from_fn(rows, cols, |i, j| b.matrix[i][j].into());
                Ok((element, matrix))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if !raw.e0.is_finite() {
            return Err(CliError::Validation("e0 must be finite".into()));
        }
        Ok(Self {
            name: raw.name,
            frame,
            point_group,
            feasible,
            irrep: raw.irrep,
            e0: raw.e0,
            seed_blocks,
            options: raw.options,
        })
    }
}

pub fn parse_spec_str(text: &str) -> Result<JobSpec, CliError> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    JobSpec::from_raw(raw)
}

pub fn parse_spec(path: &Path) -> Result<JobSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    parse_spec_str(&text)
}
