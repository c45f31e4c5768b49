//! Python bindings. Sites are 0-based, like the Rust API; the text formats
//! (program files, region strings) keep their 1-based convention.

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use super_scrambler::experiments::analysis;
use super_scrambler::experiments::{
    build_ghz_program, run_random_ensemble, EnsembleSummary, ExperimentConfig,
};
use super_scrambler::oracle::verify_gate_tables as verify_tables;
use super_scrambler::{
    Error, OperatorProgram, OperatorWavefunction, Region, Stabilization, SuperGate, SuperPauli,
    SuperStabilizerTableau,
};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn region(n: usize, sites: Vec<usize>) -> PyResult<Region> {
    Region::new(n, sites).map_err(py_err)
}

fn gate_from_tuple(name: &str, sites: &[usize]) -> PyResult<SuperGate> {
    match (name.to_ascii_uppercase().as_str(), sites) {
        ("T", [a]) => Ok(SuperGate::T(*a)),
        ("SWAP", [a, b]) => Ok(SuperGate::Swap(*a, *b)),
        ("C3", [c, t1, t2]) => Ok(SuperGate::c3(*c, *t1, *t2)),
        _ => Err(PyValueError::new_err(format!(
            "unknown gate {name} with {} sites",
            sites.len()
        ))),
    }
}

fn gate_to_tuple(g: SuperGate) -> (String, Vec<usize>) {
    match g {
        SuperGate::T(a) => ("T".into(), vec![a]),
        SuperGate::Swap(a, b) => ("SWAP".into(), vec![a, b]),
        SuperGate::C3 { control, targets } => ("C3".into(), vec![control, targets[0], targets[1]]),
    }
}

/// Gate sequence in operator-space order (first gate acts first).
#[pyclass(name = "Program", module = "superscrambler")]
struct PyProgram {
    inner: OperatorProgram,
}

#[pymethods]
impl PyProgram {
    /// `gates` is a list of `(name, sites)` with names `T`, `SWAP`, `C3`.
    #[new]
    #[pyo3(signature = (n_qubits, gates = Vec::new()))]
    fn new(n_qubits: usize, gates: Vec<(String, Vec<usize>)>) -> PyResult<Self> {
        let gates = gates
            .iter()
            .map(|(name, sites)| gate_from_tuple(name, sites))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            inner: OperatorProgram::new(n_qubits, gates).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: OperatorProgram::parse(text).map_err(py_err)?,
        })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    fn gates(&self) -> Vec<(String, Vec<usize>)> {
        self.inner.gates().iter().copied().map(gate_to_tuple).collect()
    }

    fn t(&mut self, site: usize) -> PyResult<()> {
        self.inner.push(SuperGate::T(site)).map_err(py_err)
    }

    fn swap(&mut self, a: usize, b: usize) -> PyResult<()> {
        self.inner.push(SuperGate::Swap(a, b)).map_err(py_err)
    }

    fn c3(&mut self, control: usize, target_1: usize, target_2: usize) -> PyResult<()> {
        self.inner
            .push(SuperGate::c3(control, target_1, target_2))
            .map_err(py_err)
    }

    fn reversed(&self) -> Self {
        Self {
            inner: self.inner.reversed(),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Program(n_qubits={}, gates={})", self.inner.n_qubits(), self.inner.len())
    }
}

/// GF(2) super-stabilizer tableau, starting from the all-X operator.
#[pyclass(name = "Tableau", module = "superscrambler")]
struct PyTableau {
    inner: SuperStabilizerTableau,
}

#[pymethods]
impl PyTableau {
    #[new]
    fn new(n_qubits: usize) -> PyResult<Self> {
        Ok(Self {
            inner: SuperStabilizerTableau::new_all_x(n_qubits).map_err(py_err)?,
        })
    }

    /// Builds a tableau from `I/X/Z/Y` labels, one per stabilizer.
    #[staticmethod]
    fn from_stabilizers(labels: Vec<String>) -> PyResult<Self> {
        let paulis = labels
            .iter()
            .map(|l| SuperPauli::from_label(l))
            .collect::<Result<Vec<_>, _>>()
            .map_err(py_err)?;
        Ok(Self {
            inner: SuperStabilizerTableau::from_stabilizers(&paulis).map_err(py_err)?,
        })
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    fn apply_t(&mut self, site: usize) -> PyResult<()> {
        self.inner.apply_t(site).map_err(py_err)
    }

    fn apply_swap(&mut self, a: usize, b: usize) -> PyResult<()> {
        self.inner.apply_swap(a, b).map_err(py_err)
    }

    fn apply_c3(&mut self, control: usize, target_1: usize, target_2: usize) -> PyResult<()> {
        self.inner.apply_c3(control, target_1, target_2).map_err(py_err)
    }

    fn apply_program(&mut self, program: &PyProgram) -> PyResult<()> {
        self.inner.apply_program(&program.inner).map_err(py_err)
    }

    /// Operator entanglement entropy in bits across the given sites.
    fn entropy(&self, sites: Vec<usize>) -> PyResult<usize> {
        self.inner
            .entropy(&region(self.inner.n_qubits(), sites)?)
            .map_err(py_err)
    }

    /// Entropies of the prefixes of length 0..=N.
    fn prefix_entropies(&self) -> Vec<usize> {
        self.inner.prefix_entropies()
    }

    fn stabilizers(&self) -> Vec<String> {
        self.inner.stabilizers().iter().map(|s| s.label()).collect()
    }

    /// Raises ValueError if the stabilizers anticommute or are dependent.
    fn check_invariants(&self) -> PyResult<()> {
        self.inner.check_invariants().map_err(py_err)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner.same_bits(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!("Tableau(n_qubits={})", self.inner.n_qubits())
    }
}

/// Dense operator-space wavefunction over the X/Y string basis (N <= 16).
#[pyclass(name = "Wavefunction", module = "superscrambler")]
struct PyWavefunction {
    inner: OperatorWavefunction,
}

#[pymethods]
impl PyWavefunction {
    #[new]
    fn new(n_qubits: usize) -> PyResult<Self> {
        Ok(Self {
            inner: OperatorWavefunction::new_all_x(n_qubits).map_err(py_err)?,
        })
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    fn apply_t(&mut self, site: usize) -> PyResult<()> {
        self.inner.apply_t(site).map_err(py_err)
    }

    fn apply_swap(&mut self, a: usize, b: usize) -> PyResult<()> {
        self.inner.apply_swap(a, b).map_err(py_err)
    }

    fn apply_c3(&mut self, control: usize, target_1: usize, target_2: usize) -> PyResult<()> {
        self.inner.apply_c3(control, target_1, target_2).map_err(py_err)
    }

    fn apply_program(&mut self, program: &PyProgram) -> PyResult<()> {
        self.inner.apply_program(&program.inner).map_err(py_err)
    }

    fn entropy(&self, sites: Vec<usize>) -> PyResult<f64> {
        self.inner
            .entropy(&region(self.inner.n_qubits(), sites)?)
            .map_err(py_err)
    }

    /// Amplitudes indexed by the Y-mask, site 0 in the least significant bit.
    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    /// `+1` or `-1` if the labelled super-Pauli stabilizes the state with
    /// that sign, `0` otherwise.
    fn stabilized_by(&self, label: &str) -> PyResult<i8> {
        let p = SuperPauli::from_label(label).map_err(py_err)?;
        Ok(match self.inner.check_stabilized(&p).map_err(py_err)? {
            Stabilization::Plus => 1,
            Stabilization::Minus => -1,
            Stabilization::NotStabilized => 0,
        })
    }
}

/// Checks the gate conjugation identities; returns a dict with one entry
/// per identity plus an overall `passed` flag.
#[pyfunction]
fn verify_gate_tables(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let report = verify_tables();
    let out = PyDict::new(py);
    let ids = PyDict::new(py);
    for id in &report.identities {
        ids.set_item(&id.name, (id.passed, id.max_deviation))?;
    }
    out.set_item("identities", ids)?;
    out.set_item("c3_preserves_xy_subspace", report.c3_preserves_xy_subspace)?;
    out.set_item("passed", report.passed())?;
    Ok(out)
}

/// Deterministic GHZ program on `n_qubits` (a multiple of 3).
#[pyfunction]
#[pyo3(signature = (n_qubits, localized = false))]
fn ghz_program(n_qubits: usize, localized: bool) -> PyResult<PyProgram> {
    Ok(PyProgram {
        inner: build_ghz_program(n_qubits, localized).map_err(py_err)?,
    })
}

/// Runs the random T/C3 ensemble. `cut` is a list of 0-based sites and
/// defaults to the left half chain. Returns a dict with `steps`, `mean`,
/// `stderr` and the summary fields.
#[pyfunction]
#[pyo3(signature = (n_qubits, steps, realizations, seed, cut = None, sample_every = 1, oracle_check = false))]
fn random_ensemble<'py>(
    py: Python<'py>,
    n_qubits: usize,
    steps: u64,
    realizations: usize,
    seed: u64,
    cut: Option<Vec<usize>>,
    sample_every: u64,
    oracle_check: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let mut cfg = ExperimentConfig::new(n_qubits, steps, realizations, seed);
    if let Some(sites) = cut {
        cfg.cut = region(n_qubits, sites)?;
    }
    cfg.sample_every = sample_every;
    cfg.oracle_check = oracle_check;
    let series = py
        .detach(|| run_random_ensemble(&cfg))
        .map_err(py_err)?;
    let summary = EnsembleSummary::compute(&cfg, &series);
    let out = PyDict::new(py);
    let pts = series.points();
    out.set_item("steps", pts.iter().map(|p| p.step).collect::<Vec<_>>())?;
    out.set_item("mean", pts.iter().map(|p| p.mean).collect::<Vec<_>>())?;
    out.set_item("stderr", pts.iter().map(|p| p.stderr).collect::<Vec<_>>())?;
    out.set_item("plateau", summary.plateau)?;
    out.set_item("growth_rate", summary.growth_rate)?;
    out.set_item("saturation_step", summary.saturation_step)?;
    out.set_item("page_value", summary.page_value)?;
    out.set_item("notes", summary.notes)?;
    out.set_item("csv", series.to_csv())?;
    Ok(out)
}

/// Large-dimension Page value in bits.
#[pyfunction]
fn page_value(n_qubits: usize, cut_size: usize) -> PyResult<f64> {
    analysis::page_value(n_qubits, cut_size).map_err(py_err)
}

/// Exact finite-dimension Page value in bits.
#[pyfunction]
fn page_value_exact(n_qubits: usize, cut_size: usize) -> PyResult<f64> {
    analysis::page_value_exact(n_qubits, cut_size).map_err(py_err)
}

#[pymodule]
fn superscrambler(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProgram>()?;
    m.add_class::<PyTableau>()?;
    m.add_class::<PyWavefunction>()?;
    m.add_function(wrap_pyfunction!(verify_gate_tables, m)?)?;
    m.add_function(wrap_pyfunction!(ghz_program, m)?)?;
    m.add_function(wrap_pyfunction!(random_ensemble, m)?)?;
    m.add_function(wrap_pyfunction!(page_value, m)?)?;
    m.add_function(wrap_pyfunction!(page_value_exact, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
