//! Domain types: instances, multi-layer travel-time matrices, routes and
//! their time-dependent evaluation.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Travel and clock times are whole seconds.
pub type Seconds = i64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid route: {0}")]
    InvalidRoute(String),
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    pub lat: f64,
    pub lon: f64,
    #[serde(default)]
    pub label: String,
}

/// Depot plus clients. The depot is always node 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    nodes: Vec<Node>,
}

impl Instance {
    pub const DEPOT: usize = 0;

    pub fn new(nodes: Vec<Node>) -> Result<Self, ModelError> {
        if nodes.len() < 2 {
            return Err(ModelError::InvalidInput(format!(
                "an instance needs a depot and at least one client, got {} node(s)",
                nodes.len()
            )));
        }
        for (pos, node) in nodes.iter().enumerate() {
            if node.id != pos {
                return Err(ModelError::InvalidInput(format!(
                    "node ids must be contiguous from 0: position {pos} holds id {}",
                    node.id
                )));
            }
            if !(-90.0..=90.0).contains(&node.lat) || !(-180.0..=180.0).contains(&node.lon) {
                return Err(ModelError::InvalidInput(format!(
                    "node {} has out-of-range coordinates ({}, {})",
                    node.id, node.lat, node.lon
                )));
            }
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn n_clients(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn depot(&self) -> &Node {
        &self.nodes[Self::DEPOT]
    }
}

/// Stack of `S` travel-time layers over `N` nodes, one layer per time step.
///
/// Layer `s` holds the travel times for departures in
/// `[s * step_seconds, (s + 1) * step_seconds)`. Departures past the horizon
/// use the last layer. Layers are not assumed symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiLayerMatrix {
    n_nodes: usize,
    n_layers: usize,
    step_seconds: Seconds,
    closed: bool,
    // layer-major, then row-major
    times: Vec<Seconds>,
}

impl MultiLayerMatrix {
    /// Builds a matrix from `layers[s][i][j]`.
    ///
    /// Fails on ragged shapes, a non-positive step, negative entries or a
    /// nonzero diagonal. The `closed` flag is derived from a full triangle
    /// scan.
    pub fn new(step_seconds: Seconds, layers: Vec<Vec<Vec<Seconds>>>) -> Result<Self, ModelError> {
        let n_layers = layers.len();
        if n_layers == 0 {
            return Err(ModelError::MalformedMatrix("matrix has no layers".into()));
        }
        let n_nodes = layers[0].len();
        let mut times = Vec::with_capacity(n_layers * n_nodes * n_nodes);
        for (s, layer) in layers.into_iter().enumerate() {
            if layer.len() != n_nodes {
                return Err(ModelError::MalformedMatrix(format!(
                    "layer {s} has {} rows, expected {n_nodes}",
                    layer.len()
                )));
            }
            for (i, row) in layer.into_iter().enumerate() {
                if row.len() != n_nodes {
                    return Err(ModelError::MalformedMatrix(format!(
                        "layer {s} row {i} has {} columns, expected {n_nodes}",
                        row.len()
                    )));
                }
                times.extend(row);
            }
        }
        Self::from_flat(n_nodes, n_layers, step_seconds, times)
    }

    pub(crate) fn from_flat(
        n_nodes: usize,
        n_layers: usize,
        step_seconds: Seconds,
        times: Vec<Seconds>,
    ) -> Result<Self, ModelError> {
        if step_seconds <= 0 {
            return Err(ModelError::MalformedMatrix(format!(
                "step_seconds must be positive, got {step_seconds}"
            )));
        }
        if n_nodes == 0 || n_layers == 0 {
            return Err(ModelError::MalformedMatrix("matrix must be non-empty".into()));
        }
        debug_assert_eq!(times.len(), n_layers * n_nodes * n_nodes);
        let report = ValidationReport::scan(n_nodes, n_layers, &times);
        if report.has_structural_errors() {
            return Err(ModelError::MalformedMatrix(report.describe_structural()));
        }
        Ok(Self {
            n_nodes,
            n_layers,
            step_seconds,
            closed: report.is_clean(),
            times,
        })
    }

    /// Builds a matrix whose entries come from `f(layer, from, to)`.
    /// Diagonal entries are forced to zero.
    pub fn from_fn(
        n_nodes: usize,
        n_layers: usize,
        step_seconds: Seconds,
        mut f: impl FnMut(usize, usize, usize) -> Seconds,
    ) -> Result<Self, ModelError> {
        let mut times = Vec::with_capacity(n_layers * n_nodes * n_nodes);
        for s in 0..n_layers {
            for i in 0..n_nodes {
                for j in 0..n_nodes {
                    times.push(if i == j { 0 } else { f(s, i, j) });
                }
            }
        }
        Self::from_flat(n_nodes, n_layers, step_seconds, times)
    }

    /// Every off-diagonal entry equals `value` in every layer.
    pub fn constant(
        n_nodes: usize,
        n_layers: usize,
        step_seconds: Seconds,
        value: Seconds,
    ) -> Result<Self, ModelError> {
        Self::from_fn(n_nodes, n_layers, step_seconds, |_, _, _| value)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_layers(&self) -> usize {
        self.n_layers
    }

    pub fn step_seconds(&self) -> Seconds {
        self.step_seconds
    }

    pub fn horizon_seconds(&self) -> Seconds {
        self.step_seconds * self.n_layers as Seconds
    }

    /// True when every layer satisfies the triangle inequality.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Raw entry `times[layer][from][to]`. Panics on out-of-range indices.
    #[inline]
    pub fn entry(&self, layer: usize, from: usize, to: usize) -> Seconds {
        self.times[(layer * self.n_nodes + from) * self.n_nodes + to]
    }

    pub fn layer(&self, layer: usize) -> Vec<Vec<Seconds>> {
        (0..self.n_nodes)
            .map(|i| (0..self.n_nodes).map(|j| self.entry(layer, i, j)).collect())
            .collect()
    }

    pub fn layers(&self) -> Vec<Vec<Vec<Seconds>>> {
        (0..self.n_layers).map(|s| self.layer(s)).collect()
    }

    /// Maps a departure time to the layer that prices it, clamping at the
    /// last layer.
    pub fn layer_index(&self, departure: Seconds) -> Result<usize, ModelError> {
        if departure < 0 {
            return Err(ModelError::InvalidInput(format!(
                "departure time must be non-negative, got {departure}"
            )));
        }
        Ok(self.layer_of(departure))
    }

    #[inline]
    fn layer_of(&self, departure: Seconds) -> usize {
        debug_assert!(departure >= 0);
        ((departure / self.step_seconds) as usize).min(self.n_layers - 1)
    }

    /// `C_ij(k)`: the time to drive from `from` to `to` when leaving at `departure`.
    pub fn travel_time(&self, from: usize, to: usize, departure: Seconds) -> Result<Seconds, ModelError> {
        if from >= self.n_nodes || to >= self.n_nodes {
            return Err(ModelError::InvalidInput(format!(
                "arc ({from}, {to}) out of range for {} nodes",
                self.n_nodes
            )));
        }
        if from == to {
            return Err(ModelError::InvalidInput(format!("self-arc ({from}, {to}) has no cost")));
        }
        let layer = self.layer_index(departure)?;
        Ok(self.entry(layer, from, to))
    }

    #[inline]
    pub(crate) fn arc(&self, from: usize, to: usize, departure: Seconds) -> Seconds {
        self.entry(self.layer_of(departure), from, to)
    }

    /// Total driving time of the closed tour depot -> `clients` -> depot,
    /// without any validation of the node sequence.
    #[inline]
    pub fn tour_cost<I>(&self, clients: I) -> Seconds
    where
        I: IntoIterator<Item = usize>,
    {
        let mut clock = 0;
        let mut at = Instance::DEPOT;
        for next in clients {
            clock += self.arc(at, next, clock);
            at = next;
        }
        if at != Instance::DEPOT {
            clock += self.arc(at, Instance::DEPOT, clock);
        }
        clock
    }

    /// Departure times along the tour, then the full schedule.
    pub fn evaluate_route(&self, route: &Route) -> Result<Schedule, ModelError> {
        route.check(self.n_nodes)?;
        let mut departures = Vec::with_capacity(route.len() + 1);
        let mut clock = 0;
        let mut at = Instance::DEPOT;
        departures.push(clock);
        for &next in route.order() {
            clock += self.arc(at, next, clock);
            departures.push(clock);
            at = next;
        }
        if at != Instance::DEPOT {
            clock += self.arc(at, Instance::DEPOT, clock);
        }
        Ok(Schedule {
            departures,
            total_cost: clock,
        })
    }

    /// Collapses all layers into their element-wise mean (rounded to the
    /// nearest second) as a single layer covering the whole horizon.
    pub fn average(&self) -> MultiLayerMatrix {
        let n = self.n_nodes;
        let layers = self.n_layers as Seconds;
        let mut times = vec![0; n * n];
        for (cell, slot) in times.iter_mut().enumerate() {
            let sum: Seconds = (0..self.n_layers).map(|s| self.times[s * n * n + cell]).sum();
            // half-up rounding of a non-negative mean
            *slot = (2 * sum + layers) / (2 * layers);
        }
        let report = ValidationReport::scan(n, 1, &times);
        MultiLayerMatrix {
            n_nodes: n,
            n_layers: 1,
            step_seconds: self.horizon_seconds(),
            closed: report.is_clean(),
            times,
        }
    }

    pub fn validate(&self) -> ValidationReport {
        ValidationReport::scan(self.n_nodes, self.n_layers, &self.times)
    }
}

/// Free-function form of [`MultiLayerMatrix::average`].
pub fn average_matrix(matrix: &MultiLayerMatrix) -> MultiLayerMatrix {
    matrix.average()
}

/// Free-function form of [`MultiLayerMatrix::evaluate_route`].
pub fn evaluate_route(route: &Route, matrix: &MultiLayerMatrix) -> Result<Schedule, ModelError> {
    matrix.evaluate_route(route)
}

/// Diagnostics for raw layer data, which need not be well formed.
pub fn validate_layers(layers: &[Vec<Vec<Seconds>>]) -> Result<ValidationReport, ModelError> {
    let n = layers.first().map_or(0, Vec::len);
    let mut flat = Vec::with_capacity(layers.len() * n * n);
    for (s, layer) in layers.iter().enumerate() {
        if layer.len() != n || layer.iter().any(|row| row.len() != n) {
            return Err(ModelError::MalformedMatrix(format!("layer {s} is not {n}x{n}")));
        }
        flat.extend(layer.iter().flatten().copied());
    }
    Ok(ValidationReport::scan(n, layers.len(), &flat))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LayerReport {
    pub layer: usize,
    /// Number of (i, j, k) triples with t(i,k) > t(i,j) + t(j,k).
    pub triangle_violations: usize,
    /// Largest t(i,k) - (t(i,j) + t(j,k)) among violations.
    pub worst_violation: Seconds,
    pub negative_entries: Vec<(usize, usize)>,
    pub nonzero_diagonal: Vec<usize>,
}

impl LayerReport {
    pub fn is_clean(&self) -> bool {
        self.triangle_violations == 0
            && self.negative_entries.is_empty()
            && self.nonzero_diagonal.is_empty()
    }
}

/// Per-layer violations found by [`MultiLayerMatrix::validate`]. Only layers
/// with at least one violation are listed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub layers: Vec<LayerReport>,
}

impl ValidationReport {
    fn scan(n: usize, n_layers: usize, times: &[Seconds]) -> Self {
        let mut layers = Vec::new();
        for s in 0..n_layers {
            let t = &times[s * n * n..(s + 1) * n * n];
            let mut report = LayerReport {
                layer: s,
                ..Default::default()
            };
            for i in 0..n {
                if t[i * n + i] != 0 {
                    report.nonzero_diagonal.push(i);
                }
                for j in 0..n {
                    if t[i * n + j] < 0 {
                        report.negative_entries.push((i, j));
                    }
                }
            }
            for i in 0..n {
                for j in 0..n {
                    if j == i {
                        continue;
                    }
                    let via = t[i * n + j];
                    for k in 0..n {
                        if k == i || k == j {
                            continue;
                        }
                        let excess = t[i * n + k] - (via + t[j * n + k]);
                        if excess > 0 {
                            report.triangle_violations += 1;
                            report.worst_violation = report.worst_violation.max(excess);
                        }
                    }
                }
            }
            if !report.is_clean() {
                layers.push(report);
            }
        }
        Self { layers }
    }

    pub fn is_clean(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn triangle_violations(&self) -> usize {
        self.layers.iter().map(|l| l.triangle_violations).sum()
    }

    pub fn negative_entries(&self) -> usize {
        self.layers.iter().map(|l| l.negative_entries.len()).sum()
    }

    fn has_structural_errors(&self) -> bool {
        self.layers
            .iter()
            .any(|l| !l.negative_entries.is_empty() || !l.nonzero_diagonal.is_empty())
    }

    fn describe_structural(&self) -> String {
        let mut parts = Vec::new();
        for l in &self.layers {
            if let Some(&(i, j)) = l.negative_entries.first() {
                parts.push(format!(
                    "layer {}: {} negative entries (first at ({i}, {j}))",
                    l.layer,
                    l.negative_entries.len()
                ));
            }
            if !l.nonzero_diagonal.is_empty() {
                parts.push(format!("layer {}: nonzero diagonal at {:?}", l.layer, l.nonzero_diagonal));
            }
        }
        parts.join("; ")
    }
}

/// Visit order of the clients. The depot is implicit at both ends.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Route(Vec<usize>);

impl Route {
    pub fn new(order: Vec<usize>) -> Self {
        Self(order)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn insert(&mut self, position: usize, node: usize) {
        self.0.insert(position, node);
    }

    pub fn remove(&mut self, position: usize) -> usize {
        self.0.remove(position)
    }

    pub fn position_of(&self, node: usize) -> Option<usize> {
        self.0.iter().position(|&c| c == node)
    }

    /// Duplicate-free, depot-free, and every node below `n_nodes`.
    pub fn check(&self, n_nodes: usize) -> Result<(), ModelError> {
        let mut seen = HashSet::with_capacity(self.0.len());
        for &node in &self.0 {
            if node == Instance::DEPOT {
                return Err(ModelError::InvalidRoute("the depot cannot appear in a route".into()));
            }
            if node >= n_nodes {
                return Err(ModelError::InvalidRoute(format!(
                    "node {node} out of range for {n_nodes} nodes"
                )));
            }
            if !seen.insert(node) {
                return Err(ModelError::InvalidRoute(format!("node {node} appears twice")));
            }
        }
        Ok(())
    }

    /// A permutation of all clients `1..n_nodes`.
    pub fn is_complete(&self, n_nodes: usize) -> bool {
        self.0.len() + 1 == n_nodes && self.check(n_nodes).is_ok()
    }
}

impl From<Vec<usize>> for Route {
    fn from(order: Vec<usize>) -> Self {
        Self(order)
    }
}

/// Departure times `k_i` along a tour and its total driving time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    /// `departures[0]` is the depot start; `departures[a]` the departure
    /// from the a-th visited client.
    pub departures: Vec<Seconds>,
    /// Arrival time back at the depot.
    pub total_cost: Seconds,
}

/// The heuristic knobs plus the RNG seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverParams {
    /// Randomized constructions in the GRASP phase.
    pub n_grasp: usize,
    /// Restricted candidate list size for construction.
    pub k_grasp: usize,
    /// Insertion-deletion rounds.
    pub n_improve: usize,
    /// Nodes removed per round.
    pub l_delete: usize,
    pub k_del: usize,
    pub k_ins: usize,
    pub seed: u64,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            n_grasp: 30,
            k_grasp: 3,
            n_improve: 20,
            l_delete: 6,
            k_del: 3,
            k_ins: 1,
            seed: 0,
        }
    }
}

impl SolverParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self, n_clients: usize) -> Result<(), ModelError> {
        if self.n_grasp == 0 {
            return Err(ModelError::InvalidParams("n_grasp must be at least 1".into()));
        }
        for (name, k) in [("k_grasp", self.k_grasp), ("k_del", self.k_del), ("k_ins", self.k_ins)] {
            if k == 0 {
                return Err(ModelError::InvalidParams(format!("{name} must be at least 1")));
            }
        }
        if self.l_delete == 0 {
            return Err(ModelError::InvalidParams("l_delete must be at least 1".into()));
        }
        if self.l_delete > n_clients {
            return Err(ModelError::InvalidParams(format!(
                "l_delete = {} exceeds the {n_clients} clients",
                self.l_delete
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_layer() -> MultiLayerMatrix {
        // t(0->1) = 1800 always; t(1->0) = 3000 in layer 0, 1200 in layer 1
        MultiLayerMatrix::new(
            3600,
            vec![vec![vec![0, 1800], vec![3000, 0]], vec![vec![0, 1800], vec![1200, 0]]],
        )
        .unwrap()
    }

    #[test]
    fn layer_index_floor_and_clamp() {
        let m = MultiLayerMatrix::constant(2, 6, 7200, 1).unwrap();
        assert_eq!(m.layer_index(0).unwrap(), 0);
        assert_eq!(m.layer_index(7199).unwrap(), 7199 / 7200);
        assert_eq!(m.layer_index(7200).unwrap(), 1);
        assert_eq!(m.layer_index(999_999).unwrap(), 5);
        assert!(matches!(m.layer_index(-1), Err(ModelError::InvalidInput(_))));
    }

    #[test]
    fn travel_time_reads_the_departure_layer() {
        let m = MultiLayerMatrix::new(
            3600,
            vec![vec![vec![0, 10], vec![50 * 60, 0]], vec![vec![0, 10], vec![20 * 60, 0]]],
        )
        .unwrap();
        assert_eq!(m.travel_time(1, 0, 1800).unwrap(), 3000);
        assert_eq!(m.travel_time(1, 0, 3600).unwrap(), 1200);
        assert_eq!(m.travel_time(0, 1, 3600).unwrap(), 10);
        assert!(m.travel_time(1, 1, 0).is_err());
        assert!(m.travel_time(0, 2, 0).is_err());
        assert!(m.travel_time(0, 1, -5).is_err());
    }

    #[test]
    fn constant_matrix_is_time_independent() {
        let m = MultiLayerMatrix::constant(4, 3, 100, 77).unwrap();
        for k in [0, 99, 100, 250, 10_000] {
            assert_eq!(m.travel_time(2, 3, k).unwrap(), 77);
        }
    }

    #[test]
    fn evaluate_examples() {
        let m = MultiLayerMatrix::constant(4, 2, 3600, 600).unwrap();
        let empty = m.evaluate_route(&Route::empty()).unwrap();
        assert_eq!(empty.departures, vec![0]);
        assert_eq!(empty.total_cost, 0);
        let full = m.evaluate_route(&Route::new(vec![3, 1, 2])).unwrap();
        assert_eq!(full.total_cost, 2400);
        assert_eq!(full.departures, vec![0, 600, 1200, 1800]);

        let s = two_layer().evaluate_route(&Route::new(vec![1])).unwrap();
        assert_eq!(s.departures, vec![0, 1800]);
        assert_eq!(s.total_cost, 4800);
    }

    #[test]
    fn evaluate_rejects_bad_routes() {
        let m = MultiLayerMatrix::constant(4, 1, 10, 1).unwrap();
        for bad in [vec![1, 1], vec![0, 1], vec![4]] {
            assert!(matches!(
                m.evaluate_route(&Route::new(bad)),
                Err(ModelError::InvalidRoute(_))
            ));
        }
    }

    #[test]
    fn averaging() {
        let m = MultiLayerMatrix::new(
            100,
            vec![vec![vec![0, 100], vec![7, 0]], vec![vec![0, 300], vec![8, 0]]],
        )
        .unwrap();
        let avg = m.average();
        assert_eq!(avg.n_layers(), 1);
        assert_eq!(avg.step_seconds(), 200);
        assert_eq!(avg.entry(0, 0, 1), 200);
        // 7.5 rounds half-up
        assert_eq!(avg.entry(0, 1, 0), 8);
        assert_eq!(avg.average(), avg);

        let single = MultiLayerMatrix::constant(3, 1, 50, 9).unwrap();
        assert_eq!(single.average(), single);
    }

    #[test]
    fn asymmetry_is_preserved() {
        let m = MultiLayerMatrix::new(60, vec![vec![vec![0, 11], vec![29, 0]]]).unwrap();
        assert_eq!(m.travel_time(0, 1, 0).unwrap(), 11);
        assert_eq!(m.travel_time(1, 0, 0).unwrap(), 29);
    }

    #[test]
    fn triangle_scan_counts_single_violation() {
        let layer = vec![vec![0, 2, 10], vec![10, 0, 3], vec![10, 10, 0]];
        let m = MultiLayerMatrix::new(60, vec![layer]).unwrap();
        assert!(!m.is_closed());
        let report = m.validate();
        assert_eq!(report.layers.len(), 1);
        assert_eq!(report.layers[0].triangle_violations, 1);
        assert_eq!(report.layers[0].worst_violation, 5);
    }

    #[test]
    fn negative_and_diagonal_entries_are_flagged() {
        let raw = vec![vec![vec![0, -4], vec![3, 1]]];
        let report = validate_layers(&raw).unwrap();
        assert_eq!(report.negative_entries(), 1);
        assert_eq!(report.layers[0].nonzero_diagonal, vec![1]);
        assert!(matches!(
            MultiLayerMatrix::new(60, raw),
            Err(ModelError::MalformedMatrix(_))
        ));
    }

    #[test]
    fn malformed_shapes_rejected() {
        assert!(MultiLayerMatrix::new(60, vec![]).is_err());
        assert!(MultiLayerMatrix::new(60, vec![vec![vec![0, 1], vec![1]]]).is_err());
        assert!(MultiLayerMatrix::new(0, vec![vec![vec![0]]]).is_err());
    }

    #[test]
    fn instance_invariants() {
        let node = |id, lat, lon| Node { id, lat, lon, label: String::new() };
        assert!(Instance::new(vec![node(0, 0.0, 0.0)]).is_err());
        assert!(Instance::new(vec![node(0, 0.0, 0.0), node(2, 0.0, 0.0)]).is_err());
        assert!(Instance::new(vec![node(0, 0.0, 0.0), node(1, 91.0, 0.0)]).is_err());
        assert!(Instance::new(vec![node(0, 0.0, 0.0), node(1, 0.0, -181.0)]).is_err());
        let ok = Instance::new(vec![node(0, 48.8, 2.3), node(1, 48.9, 2.4)]).unwrap();
        assert_eq!(ok.n_clients(), 1);
    }

    #[test]
    fn params_validation() {
        let p = SolverParams::default();
        assert!(p.validate(30).is_ok());
        assert!(p.validate(5).is_err());
        assert!(SolverParams { k_ins: 0, ..p }.validate(30).is_err());
        assert!(SolverParams { n_grasp: 0, ..p }.validate(30).is_err());
    }
}
