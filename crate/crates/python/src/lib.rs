//! Python bindings.

use std::sync::Arc;

use num_complex::Complex64;
use nrmsym_core::cli::{parse_spec_str, parse_word, run_command, CliError, Command};
use nrmsym_core::pigroup::{classify_case, GroupCase, GroupChain, NucleusClass, NucleusFrame, PermInv, DEFAULT_CAP};
use nrmsym_core::reptheory::{character_table, irrep_matrices, splitting_multiplicities, CharacterTable};
use nrmsym_core::spinstats::{spin_character, statistical_weights, SpinSystem};
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(nrmsym, ValidationError, PyValueError);
create_exception!(nrmsym, NumericalError, PyArithmeticError);

fn to_py(e: impl Into<CliError>) -> PyErr {
    match e.into() {
        e @ CliError::Numerical(_) => NumericalError::new_err(e.to_string()),
        e => ValidationError::new_err(e.to_string()),
    }
}

fn case_name(case: GroupCase) -> &'static str {
    match case {
        GroupCase::CaseA => "A",
        GroupCase::CaseB => "B",
        GroupCase::Unsupported => "unsupported",
    }
}

/// Spin given as a float (0.5) or a fraction string ("1/2").
fn twice_spin(spin: &Bound<'_, PyAny>) -> PyResult<u32> {
    let value: f64 = if let Ok(s) = spin.extract::<String>() {
        match s.split_once('/') {
            Some((n, d)) => {
                let n: f64 = n.trim().parse().map_err(|_| ValidationError::new_err(format!("bad spin '{s}'")))?;
                let d: f64 = d.trim().parse().map_err(|_| ValidationError::new_err(format!("bad spin '{s}'")))?;
                n / d
            }
            None => s.trim().parse().map_err(|_| ValidationError::new_err(format!("bad spin '{s}'")))?,
        }
    } else {
        spin.extract()?
    };
    let twice = 2.0 * value;
    if twice < 0.0 || (twice - twice.round()).abs() > 1e-12 {
        return Err(ValidationError::new_err(format!("spin {value} is not a multiple of 1/2")));
    }
    Ok(twice.round() as u32)
}

/// Classes of identical nuclei, each `(label, count, spin)`.
#[pyclass(name = "Frame", module = "nrmsym", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFrame {
    inner: NucleusFrame,
}

#[pymethods]
impl PyFrame {
    #[new]
    #[pyo3(signature = (classes, allow_inversion = true))]
    fn new(classes: Vec<(String, usize, Bound<'_, PyAny>)>, allow_inversion: bool) -> PyResult<Self> {
        let classes = classes
            .into_iter()
            .map(|(label, count, spin)| Ok(NucleusClass::new(label, count, twice_spin(&spin)?)))
            .collect::<PyResult<Vec<_>>>()?;
        let inner = NucleusFrame::new(classes, allow_inversion).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn slots(&self) -> usize {
        self.inner.total_slots()
    }

    #[getter]
    fn allow_inversion(&self) -> bool {
        self.inner.allow_inversion()
    }

    /// Order of the full permutation-inversion group.
    fn full_group_order(&self) -> usize {
        self.inner.full_group_order()
    }

    /// Parses a cycle word such as "(1 2 3)" or "(1 2)*".
    fn element(&self, word: &str) -> PyResult<PyPermInv> {
        Ok(PyPermInv {
            inner: parse_word(word, &self.inner).map_err(to_py)?,
        })
    }

    /// Trace of the spin action of `element`.
    fn spin_character(&self, element: &PyPermInv) -> f64 {
        spin_character(&element.inner, &self.inner)
    }

    #[pyo3(signature = (include_spectators = true))]
    fn spin_dim(&self, include_spectators: bool) -> usize {
        SpinSystem::new(self.inner.clone(), include_spectators).dim()
    }
}

#[pyclass(name = "PermInv", module = "nrmsym", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPermInv {
    inner: PermInv,
}

#[pymethods]
impl PyPermInv {
    /// 0-based images of each slot.
    #[getter]
    fn image(&self) -> Vec<usize> {
        self.inner.image().to_vec()
    }

    #[getter]
    fn star(&self) -> bool {
        self.inner.star()
    }

    /// `self ∘ other`, with `other` applied first.
    fn compose(&self, other: &PyPermInv) -> PyResult<PyPermInv> {
        Ok(PyPermInv {
            inner: self.inner.compose(&other.inner).map_err(to_py)?,
        })
    }

    fn inverse(&self) -> PyPermInv {
        PyPermInv {
            inner: self.inner.inverse(),
        }
    }

    fn __mul__(&self, other: &PyPermInv) -> PyResult<PyPermInv> {
        self.compose(other)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PermInv('{}')", self.inner)
    }
}

/// The groups `R ⊆ Q ⊆ P` of one molecule.
#[pyclass(name = "GroupChain", module = "nrmsym", frozen)]
struct PyGroupChain {
    chain: GroupChain,
    rtable: CharacterTable,
    qtable: CharacterTable,
}

impl PyGroupChain {
    fn from_chain(chain: GroupChain) -> PyResult<Self> {
        let rtable = character_table(chain.r()).map_err(to_py)?;
        let qtable = character_table(chain.q()).map_err(to_py)?;
        Ok(Self { chain, rtable, qtable })
    }

    fn table(&self, which: &str) -> PyResult<&CharacterTable> {
        match which {
            "r" | "R" => Ok(&self.rtable),
            "q" | "Q" => Ok(&self.qtable),
            _ => Err(ValidationError::new_err("which must be 'r' or 'q'")),
        }
    }
}

#[pymethods]
impl PyGroupChain {
    #[new]
    #[pyo3(signature = (frame, point_group, feasible = Vec::new(), cap = DEFAULT_CAP))]
    fn new(frame: &PyFrame, point_group: Vec<String>, feasible: Vec<String>, cap: usize) -> PyResult<Self> {
        let words = |list: &[String]| {
            list.iter()
                .map(|w| parse_word(w, &frame.inner))
                .collect::<Result<Vec<_>, _>>()
                .map_err(to_py)
        };
        let chain = GroupChain::new(frame.inner.clone(), &words(&point_group)?, &words(&feasible)?, cap)
            .map_err(to_py)?;
        Self::from_chain(chain)
    }

    /// The same molecule with `Q` replaced by `R`.
    fn rigid(&self) -> PyResult<Self> {
        Self::from_chain(self.chain.rigid().map_err(to_py)?)
    }

    #[getter]
    fn r_order(&self) -> usize {
        self.chain.r().order()
    }

    #[getter]
    fn q_order(&self) -> usize {
        self.chain.q().order()
    }

    #[getter]
    fn p_order(&self) -> usize {
        self.chain.p().order()
    }

    #[getter]
    fn cosets(&self) -> usize {
        self.chain.r_in_q().num_cosets()
    }

    /// "A" or "B" for the tunneling group.
    #[getter]
    fn case(&self) -> &'static str {
        case_name(classify_case(self.chain.q()))
    }

    #[pyo3(signature = (which = "q"))]
    fn class_sizes(&self, which: &str) -> PyResult<Vec<usize>> {
        Ok(self.table(which)?.group().class_sizes())
    }

    #[pyo3(signature = (which = "q"))]
    fn irrep_labels(&self, which: &str) -> PyResult<Vec<String>> {
        Ok(self.table(which)?.labels().to_vec())
    }

    #[pyo3(signature = (which = "q"))]
    fn irrep_dims(&self, which: &str) -> PyResult<Vec<usize>> {
        Ok(self.table(which)?.dims().to_vec())
    }

    /// Rows of the character table, one complex value per class.
    #[pyo3(signature = (which = "q"))]
    fn characters(&self, which: &str) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(self.table(which)?.characters().to_vec())
    }

    /// `{λ: M_λ}` for the point-group irrep `gamma`, zeros omitted.
    fn splitting<'py>(&self, py: Python<'py>, gamma: &str) -> PyResult<Bound<'py, PyDict>> {
        let irrep = irrep_matrices(self.chain.r(), gamma, &self.rtable).map_err(to_py)?;
        let m = splitting_multiplicities(&self.qtable, self.chain.r_in_q(), &irrep).map_err(to_py)?;
        let out = PyDict::new(py);
        for (label, &k) in m.labels.iter().zip(&m.multiplicities) {
            if k > 0 {
                out.set_item(label, k)?;
            }
        }
        Ok(out)
    }

    /// `{λ: weight}` of the nuclear-spin statistical weights.
    #[pyo3(signature = (include_spectators = true))]
    fn statistical_weights<'py>(&self, py: Python<'py>, include_spectators: bool) -> PyResult<Bound<'py, PyDict>> {
        let spin = SpinSystem::new(self.chain.frame().clone(), include_spectators);
        let table = statistical_weights(&self.qtable, &spin).map_err(to_py)?;
        let out = PyDict::new(py);
        for e in &table.entries {
            out.set_item(&e.label, e.weight)?;
        }
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!(
            "GroupChain(|R|={}, |Q|={}, |P|={})",
            self.chain.r().order(),
            self.chain.q().order(),
            self.chain.p().order()
        )
    }
}

fn command(name: &str) -> PyResult<Command> {
    Ok(match name {
        "group" => Command::Group,
        "split" => Command::Split,
        "spectrum" => Command::Spectrum,
        "weights" => Command::Weights,
        "verify" => Command::Verify,
        other => return Err(ValidationError::new_err(format!("unknown command '{other}'"))),
    })
}

/// Runs a command on a job given as a JSON string or a dict and returns the
/// report as a dict.
#[pyfunction]
fn run<'py>(py: Python<'py>, name: &str, spec: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let json = py.import("json")?;
    let text: String = if let Ok(s) = spec.extract::<String>() {
        s
    } else {
        json.call_method1("dumps", (spec,))?.extract()?
    };
    let job = parse_spec_str(&text).map_err(to_py)?;
    let report = run_command(command(name)?, &job).map_err(to_py)?;
    let out = serde_json::to_string(&report).map_err(|e| NumericalError::new_err(e.to_string()))?;
    json.call_method1("loads", (out,))
}

/// Group elements of the full permutation-inversion group of `frame`.
#[pyfunction]
fn full_group(frame: &PyFrame) -> PyResult<Vec<PyPermInv>> {
    let g = Arc::new(nrmsym_core::pigroup::full_pi_group(&frame.inner, DEFAULT_CAP).map_err(to_py)?);
    Ok(g.elements().iter().map(|x| PyPermInv { inner: x.clone() }).collect())
}

#[pymodule]
fn nrmsym(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFrame>()?;
    m.add_class::<PyPermInv>()?;
    m.add_class::<PyGroupChain>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(full_group, m)?)?;
    m.add("ValidationError", m.py().get_type::<ValidationError>())?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    Ok(())
}
