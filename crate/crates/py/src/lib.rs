//! Python bindings: `import tdvrp`.
//!
//! Errors from the core library surface as `ValueError`, file problems as
//! `OSError`.

use std::path::PathBuf;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use tdvrp_core::builder::{self, FetchLimits, PeakWindow, QuerySchedule, TrafficProfile};
use tdvrp_core::io::{self, FormatError};
use tdvrp_core::{data, export, oracle, Node, Route};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn format_err(e: FormatError) -> PyErr {
    match e {
        FormatError::Io { .. } => PyOSError::new_err(e.to_string()),
        other => value_err(other),
    }
}

#[pyclass(name = "Instance", module = "tdvrp", frozen)]
pub struct PyInstance {
    inner: tdvrp_core::Instance,
}

#[pymethods]
impl PyInstance {
    /// `coords` is a list of `(lat, lon)`, depot first.
    #[new]
    #[pyo3(signature = (coords, labels = None))]
    fn new(coords: Vec<(f64, f64)>, labels: Option<Vec<String>>) -> PyResult<Self> {
        if labels.as_ref().is_some_and(|l| l.len() != coords.len()) {
            return Err(value_err("labels and coords differ in length"));
        }
        let nodes = coords
            .into_iter()
            .enumerate()
            .map(|(id, (lat, lon))| Node {
                id,
                lat,
                lon,
                label: labels.as_ref().map_or_else(|| id.to_string(), |l| l[id].clone()),
            })
            .collect();
        Ok(Self { inner: tdvrp_core::Instance::new(nodes).map_err(value_err)? })
    }

    /// The bundled 31-node Paris instance.
    #[staticmethod]
    fn paris() -> Self {
        Self { inner: data::paris_instance() }
    }

    #[staticmethod]
    #[pyo3(signature = (n_nodes, seed = 0))]
    fn random(n_nodes: usize, seed: u64) -> PyResult<Self> {
        Ok(Self { inner: data::random_instance(n_nodes, seed).map_err(value_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: io::instance_from_str(text).map_err(format_err)? })
    }

    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        Ok(Self { inner: io::read_instance(&path).map_err(format_err)? })
    }

    fn to_json(&self) -> String {
        io::instance_to_string(&self.inner)
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        io::write_instance(&path, &self.inner).map_err(format_err)
    }

    /// `(id, lat, lon, label)` per node.
    #[getter]
    fn nodes(&self) -> Vec<(usize, f64, f64, String)> {
        self.inner.nodes().iter().map(|n| (n.id, n.lat, n.lon, n.label.clone())).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Instance({} nodes)", self.inner.len())
    }
}

#[pyclass(name = "MultiLayerMatrix", module = "tdvrp", frozen)]
pub struct PyMatrix {
    inner: tdvrp_core::MultiLayerMatrix,
}

#[pymethods]
impl PyMatrix {
    /// `layers[s][i][j]` in seconds; layer `s` covers departures in
    /// `[s * step_seconds, (s + 1) * step_seconds)`.
    #[new]
    fn new(step_seconds: i64, layers: Vec<Vec<Vec<i64>>>) -> PyResult<Self> {
        Ok(Self { inner: tdvrp_core::MultiLayerMatrix::new(step_seconds, layers).map_err(value_err)? })
    }

    #[staticmethod]
    fn constant(n_nodes: usize, n_layers: usize, step_seconds: i64, value: i64) -> PyResult<Self> {
        Ok(Self {
            inner: tdvrp_core::MultiLayerMatrix::constant(n_nodes, n_layers, step_seconds, value).map_err(value_err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: io::matrix_from_str(text).map_err(format_err)? })
    }

    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        Ok(Self { inner: io::read_matrix(&path).map_err(format_err)? })
    }

    fn to_json(&self) -> String {
        io::matrix_to_string(&self.inner)
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        io::write_matrix(&path, &self.inner).map_err(format_err)
    }

    #[getter]
    fn n_nodes(&self) -> usize {
        self.inner.n_nodes()
    }

    #[getter]
    fn n_layers(&self) -> usize {
        self.inner.n_layers()
    }

    #[getter]
    fn step_seconds(&self) -> i64 {
        self.inner.step_seconds()
    }

    #[getter]
    fn closed(&self) -> bool {
        self.inner.is_closed()
    }

    fn layers(&self) -> Vec<Vec<Vec<i64>>> {
        self.inner.layers()
    }

    fn travel_time(&self, i: usize, j: usize, departure: i64) -> PyResult<i64> {
        self.inner.travel_time(i, j, departure).map_err(value_err)
    }

    fn average(&self) -> Self {
        Self { inner: self.inner.average() }
    }

    fn __eq__(&self, other: PyRef<'_, PyMatrix>) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "MultiLayerMatrix({} nodes, {} layers of {} s)",
            self.inner.n_nodes(),
            self.inner.n_layers(),
            self.inner.step_seconds()
        )
    }
}

#[pyclass(name = "SolverParams", module = "tdvrp", get_all, set_all)]
pub struct PySolverParams {
    n_grasp: usize,
    k_grasp: usize,
    n_improve: usize,
    l_delete: usize,
    k_del: usize,
    k_ins: usize,
    seed: u64,
}

impl From<&PySolverParams> for tdvrp_core::SolverParams {
    fn from(p: &PySolverParams) -> Self {
        Self {
            n_grasp: p.n_grasp,
            k_grasp: p.k_grasp,
            n_improve: p.n_improve,
            l_delete: p.l_delete,
            k_del: p.k_del,
            k_ins: p.k_ins,
            seed: p.seed,
        }
    }
}

impl From<tdvrp_core::SolverParams> for PySolverParams {
    fn from(p: tdvrp_core::SolverParams) -> Self {
        Self {
            n_grasp: p.n_grasp,
            k_grasp: p.k_grasp,
            n_improve: p.n_improve,
            l_delete: p.l_delete,
            k_del: p.k_del,
            k_ins: p.k_ins,
            seed: p.seed,
        }
    }
}

#[pymethods]
impl PySolverParams {
    #[new]
    #[pyo3(signature = (n_grasp = 30, k_grasp = 3, n_improve = 20, l_delete = 6, k_del = 3, k_ins = 1, seed = 0))]
    fn new(n_grasp: usize, k_grasp: usize, n_improve: usize, l_delete: usize, k_del: usize, k_ins: usize, seed: u64) -> Self {
        Self { n_grasp, k_grasp, n_improve, l_delete, k_del, k_ins, seed }
    }

    fn __repr__(&self) -> String {
        format!(
            "SolverParams(n_grasp={}, k_grasp={}, n_improve={}, l_delete={}, k_del={}, k_ins={}, seed={})",
            self.n_grasp, self.k_grasp, self.n_improve, self.l_delete, self.k_del, self.k_ins, self.seed
        )
    }
}

#[pyclass(name = "SolveResult", module = "tdvrp", frozen)]
pub struct PySolveResult {
    inner: tdvrp_core::SolveResult,
}

#[pymethods]
impl PySolveResult {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: io::result_from_str(text).map_err(format_err)? })
    }

    fn to_json(&self) -> String {
        io::result_to_string(&self.inner)
    }

    #[getter]
    fn route(&self) -> Vec<usize> {
        self.inner.best_route.order().to_vec()
    }

    #[getter]
    fn departures(&self) -> Vec<i64> {
        self.inner.best_schedule.departures.clone()
    }

    #[getter]
    fn total_cost(&self) -> i64 {
        self.inner.total_cost()
    }

    #[getter]
    fn cost_trace(&self) -> Vec<i64> {
        self.inner.cost_trace.clone()
    }

    #[getter]
    fn params(&self) -> PySolverParams {
        self.inner.params.into()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[getter]
    fn rng(&self) -> &str {
        &self.inner.rng
    }

    fn __repr__(&self) -> String {
        format!("SolveResult(total_cost={}, clients={})", self.inner.total_cost(), self.inner.best_route.len())
    }
}

fn params_or_default(params: Option<PyRef<'_, PySolverParams>>) -> tdvrp_core::SolverParams {
    params.map_or_else(tdvrp_core::SolverParams::default, |p| (&*p).into())
}

/// GRASP construction followed by insertion-deletion improvement.
#[pyfunction]
#[pyo3(signature = (instance, matrix, params = None))]
fn solve(
    py: Python<'_>,
    instance: PyRef<'_, PyInstance>,
    matrix: PyRef<'_, PyMatrix>,
    params: Option<PyRef<'_, PySolverParams>>,
) -> PyResult<PySolveResult> {
    let params = params_or_default(params);
    let (inst, m) = (&instance.inner, &matrix.inner);
    let inner = py.detach(|| tdvrp_core::solve(inst, m, &params)).map_err(value_err)?;
    Ok(PySolveResult { inner })
}

/// `(departures, total_cost)` for a client order.
#[pyfunction]
fn evaluate_route(route: Vec<usize>, matrix: PyRef<'_, PyMatrix>) -> PyResult<(Vec<i64>, i64)> {
    let s = tdvrp_core::evaluate_route(&Route::new(route), &matrix.inner).map_err(value_err)?;
    Ok((s.departures, s.total_cost))
}

#[pyfunction]
fn average_matrix(matrix: PyRef<'_, PyMatrix>) -> PyMatrix {
    PyMatrix { inner: tdvrp_core::average_matrix(&matrix.inner) }
}

/// Per-layer triangle-inequality and sign report.
#[pyfunction]
fn validate_matrix<'py>(py: Python<'py>, matrix: PyRef<'_, PyMatrix>) -> PyResult<Bound<'py, PyDict>> {
    let report = matrix.inner.validate();
    let d = PyDict::new(py);
    d.set_item("clean", report.is_clean())?;
    d.set_item("triangle_violations", report.triangle_violations())?;
    d.set_item("negative_entries", report.negative_entries())?;
    let layers: Vec<(usize, usize, i64)> =
        report.layers.iter().map(|l| (l.layer, l.triangle_violations, l.worst_violation)).collect();
    d.set_item("layers", layers)?;
    Ok(d)
}

/// Exact optimum by enumeration: `(route, total_cost)`.
#[pyfunction]
#[pyo3(signature = (matrix, max_clients = oracle::DEFAULT_CLIENT_CAP))]
fn brute_force_optimum(py: Python<'_>, matrix: PyRef<'_, PyMatrix>, max_clients: usize) -> PyResult<(Vec<usize>, i64)> {
    let m = &matrix.inner;
    let (route, schedule) = py
        .detach(|| oracle::brute_force_optimum_with_cap(m, max_clients))
        .map_err(value_err)?;
    Ok((route.into_inner(), schedule.total_cost))
}

/// Synthetic matrix; `peaks` holds `(start_layer, end_layer, multiplier)`.
/// With `rush_hours=True` the built-in morning/evening profile is used and
/// the shape arguments are ignored.
#[pyfunction]
#[pyo3(signature = (instance, n_layers, step_seconds, seed = 0, base_speed_kmh = 30.0, peaks = Vec::new(), jitter = 0.0, rush_hours = false))]
#[allow(clippy::too_many_arguments)]
fn generate_synthetic(
    instance: PyRef<'_, PyInstance>,
    n_layers: usize,
    step_seconds: i64,
    seed: u64,
    base_speed_kmh: f64,
    peaks: Vec<(usize, usize, f64)>,
    jitter: f64,
    rush_hours: bool,
) -> PyResult<PyMatrix> {
    let profile = if rush_hours {
        TrafficProfile::rush_hours(seed)
    } else {
        TrafficProfile {
            base_speed_kmh,
            peak_windows: peaks
                .into_iter()
                .map(|(start_layer, end_layer, multiplier)| PeakWindow { start_layer, end_layer, multiplier })
                .collect(),
            asymmetry_jitter: jitter,
            seed,
        }
    };
    let inner = builder::generate_synthetic(&instance.inner, n_layers, step_seconds, &profile).map_err(value_err)?;
    Ok(PyMatrix { inner })
}

/// `(layer, origins, destinations, departure_time, day)`.
type RequestTuple = (usize, Vec<usize>, Vec<usize>, i64, usize);

/// Request plan summary for fetching an `n_nodes × n_nodes × n_layers` grid.
#[pyfunction]
#[pyo3(signature = (n_nodes, n_layers, start_epoch = 0, step_seconds = 3600, daily_quota = builder::FREE_DAILY_QUOTA, elements_per_request = builder::ELEMENTS_PER_REQUEST, include_self_pairs = false))]
#[allow(clippy::too_many_arguments)]
fn plan_fetch<'py>(
    py: Python<'py>,
    n_nodes: usize,
    n_layers: usize,
    start_epoch: i64,
    step_seconds: i64,
    daily_quota: usize,
    elements_per_request: usize,
    include_self_pairs: bool,
) -> PyResult<Bound<'py, PyDict>> {
    if n_nodes < 2 || n_layers == 0 || daily_quota == 0 || elements_per_request == 0 {
        return Err(value_err("need n_nodes >= 2 and positive layers, quota and request size"));
    }
    let plan = builder::plan_fetch(
        n_nodes,
        n_layers,
        QuerySchedule { start_epoch, step_seconds },
        FetchLimits { elements_per_request, daily_quota, include_self_pairs },
    );
    let d = PyDict::new(py);
    d.set_item("total_elements", plan.total_elements)?;
    d.set_item("billed_elements", plan.billed_elements)?;
    d.set_item("days_needed", plan.days_needed)?;
    d.set_item("n_requests", plan.requests.len())?;
    let requests: Vec<RequestTuple> = plan
        .requests
        .into_iter()
        .map(|r| (r.layer, r.origins, r.destinations, r.departure_time, r.day))
        .collect();
    d.set_item("requests", requests)?;
    Ok(d)
}

/// Largest instance a single day of quota can fetch at `n_layers`.
#[pyfunction]
#[pyo3(signature = (n_layers, daily_quota = builder::FREE_DAILY_QUOTA))]
fn max_single_day_nodes(n_layers: usize, daily_quota: usize) -> usize {
    builder::max_single_day_nodes(n_layers, FetchLimits { daily_quota, ..FetchLimits::default() })
}

/// Multi-layer against averaged-matrix planning; one dict per seed.
#[pyfunction]
#[pyo3(signature = (instance, matrix, params = None, n_seeds = 20))]
fn compare<'py>(
    py: Python<'py>,
    instance: PyRef<'_, PyInstance>,
    matrix: PyRef<'_, PyMatrix>,
    params: Option<PyRef<'_, PySolverParams>>,
    n_seeds: usize,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let params = params_or_default(params);
    let (inst, m) = (&instance.inner, &matrix.inner);
    let report = py.detach(|| tdvrp_core::compare(inst, m, &params, n_seeds)).map_err(value_err)?;
    report
        .rows
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("seed", r.seed)?;
            d.set_item("c_ml", r.c_ml)?;
            d.set_item("c_2d", r.c_2d)?;
            d.set_item("c_2d_own", r.c_2d_own)?;
            d.set_item("gap_percent", r.gap_percent)?;
            d.set_item("gap_own_percent", r.gap_own_percent)?;
            Ok(d)
        })
        .collect()
}

/// GeoJSON FeatureCollection text for a solved tour.
#[pyfunction]
fn route_geojson(instance: PyRef<'_, PyInstance>, result: PyRef<'_, PySolveResult>) -> PyResult<String> {
    let fc = export::route_geojson(&instance.inner, &result.inner).map_err(value_err)?;
    Ok(fc.to_string())
}

#[pyfunction]
fn paris_instance() -> PyInstance {
    PyInstance::paris()
}

#[pyfunction]
fn format_hmm(seconds: i64) -> String {
    tdvrp_core::format_hmm(seconds)
}

#[pymodule]
fn tdvrp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PySolverParams>()?;
    m.add_class::<PySolveResult>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_route, m)?)?;
    m.add_function(wrap_pyfunction!(average_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(validate_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_optimum, m)?)?;
    m.add_function(wrap_pyfunction!(generate_synthetic, m)?)?;
    m.add_function(wrap_pyfunction!(plan_fetch, m)?)?;
    m.add_function(wrap_pyfunction!(max_single_day_nodes, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(route_geojson, m)?)?;
    m.add_function(wrap_pyfunction!(paris_instance, m)?)?;
    m.add_function(wrap_pyfunction!(format_hmm, m)?)?;
    Ok(())
}
