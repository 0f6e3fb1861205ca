//! GRASP construction followed by the insertion-deletion improvement
//! heuristic.
//!
//! Every insertion or deletion is priced by re-evaluating the whole tour: in
//! a time-dependent matrix a change early in the tour shifts every later
//! departure, so local two-arc deltas are wrong.
//!
//! All randomness comes from a single [`SolverRng`] stream seeded from
//! [`SolverParams::seed`], so a solve is a pure function of its inputs.

use std::cmp::Reverse;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Instance, ModelError, MultiLayerMatrix, Route, Schedule, Seconds, SolverParams};

/// Portable, platform-independent generator used for every random draw.
pub type SolverRng = ChaCha8Rng;

/// Recorded in every result so runs can be reproduced.
pub const RNG_ALGORITHM: &str = "ChaCha8";

pub fn seeded_rng(seed: u64) -> SolverRng {
    SolverRng::seed_from_u64(seed)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("instance has {instance} nodes but the matrix has {matrix}")]
    DimensionMismatch { instance: usize, matrix: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InsertionCandidate {
    pub node: usize,
    /// Slot in the partial route, `0..=len`.
    pub position: usize,
    pub delta_cost: Seconds,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "SolveResultDocument", try_from = "SolveResultDocument")]
pub struct SolveResult {
    pub best_route: Route,
    pub best_schedule: Schedule,
    /// Construction costs in trial order, then best-so-far after each
    /// improvement round.
    pub cost_trace: Vec<Seconds>,
    pub params: SolverParams,
    pub seed: u64,
    pub rng: String,
}

impl SolveResult {
    pub fn total_cost(&self) -> Seconds {
        self.best_schedule.total_cost
    }
}

/// On-disk shape of a [`SolveResult`].
#[derive(Debug, Clone, Serialize, Deserialize)]
struct SolveResultDocument {
    route: Vec<usize>,
    departures_s: Vec<Seconds>,
    total_cost_s: Seconds,
    cost_trace_s: Vec<Seconds>,
    seed: u64,
    params: SolverParams,
    rng: String,
}

impl From<SolveResult> for SolveResultDocument {
    fn from(r: SolveResult) -> Self {
        Self {
            route: r.best_route.into_inner(),
            departures_s: r.best_schedule.departures,
            total_cost_s: r.best_schedule.total_cost,
            cost_trace_s: r.cost_trace,
            seed: r.seed,
            params: r.params,
            rng: r.rng,
        }
    }
}

impl TryFrom<SolveResultDocument> for SolveResult {
    type Error = String;

    fn try_from(d: SolveResultDocument) -> Result<Self, String> {
        if d.departures_s.len() != d.route.len() + 1 {
            return Err(format!(
                "departures_s has {} entries for a route of {} clients",
                d.departures_s.len(),
                d.route.len()
            ));
        }
        Ok(Self {
            best_route: Route::new(d.route),
            best_schedule: Schedule {
                departures: d.departures_s,
                total_cost: d.total_cost_s,
            },
            cost_trace: d.cost_trace_s,
            params: d.params,
            seed: d.seed,
            rng: d.rng,
        })
    }
}

fn cost_with_insertion(matrix: &MultiLayerMatrix, route: &[usize], node: usize, position: usize) -> Seconds {
    let (head, tail) = route.split_at(position);
    matrix.tour_cost(head.iter().copied().chain(std::iter::once(node)).chain(tail.iter().copied()))
}

fn cost_without(matrix: &MultiLayerMatrix, route: &[usize], position: usize) -> Seconds {
    matrix.tour_cost(
        route
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != position)
            .map(|(_, &n)| n),
    )
}

/// Prices every (node, slot) insertion into `partial`, cheapest first.
///
/// Ties are broken by node index then position, so the order is total.
pub fn enumerate_insertions(
    partial: &Route,
    remaining: &[usize],
    matrix: &MultiLayerMatrix,
) -> Vec<InsertionCandidate> {
    let order = partial.order();
    let base = matrix.tour_cost(order.iter().copied());
    let mut candidates = Vec::with_capacity(remaining.len() * (order.len() + 1));
    for &node in remaining {
        for position in 0..=order.len() {
            candidates.push(InsertionCandidate {
                node,
                position,
                delta_cost: cost_with_insertion(matrix, order, node, position) - base,
            });
        }
    }
    candidates.sort_by_key(|c| (c.delta_cost, c.node, c.position));
    candidates
}

/// Uniform draw among the first `min(k, len)` entries.
fn pick<'a, T, R: Rng + ?Sized>(sorted: &'a [T], k: usize, rng: &mut R) -> &'a T {
    let bound = k.min(sorted.len());
    &sorted[rng.random_range(0..bound)]
}

/// Builds one complete tour by repeated randomized cheapest insertion.
pub fn construct_route<R: Rng + ?Sized>(matrix: &MultiLayerMatrix, k_grasp: usize, rng: &mut R) -> Route {
    let mut route = Route::empty();
    let mut remaining: Vec<usize> = (1..matrix.n_nodes()).collect();
    while !remaining.is_empty() {
        let candidates = enumerate_insertions(&route, &remaining, matrix);
        let chosen = *pick(&candidates, k_grasp, rng);
        route.insert(chosen.position, chosen.node);
        remaining.retain(|&n| n != chosen.node);
    }
    route
}

fn finish(
    matrix: &MultiLayerMatrix,
    route: Route,
    cost_trace: Vec<Seconds>,
    params: &SolverParams,
) -> Result<SolveResult, SolveError> {
    if !route.is_complete(matrix.n_nodes()) {
        return Err(ModelError::InvalidRoute(format!(
            "solver produced an incomplete tour of {} clients",
            route.len()
        ))
        .into());
    }
    let best_schedule = matrix.evaluate_route(&route)?;
    Ok(SolveResult {
        best_route: route,
        best_schedule,
        cost_trace,
        params: *params,
        seed: params.seed,
        rng: RNG_ALGORITHM.to_string(),
    })
}

/// Runs `n_grasp` randomized constructions and keeps the cheapest (the
/// earliest trial wins ties).
pub fn run_grasp<R: Rng + ?Sized>(
    matrix: &MultiLayerMatrix,
    params: &SolverParams,
    rng: &mut R,
) -> Result<SolveResult, SolveError> {
    params.validate(matrix.n_nodes() - 1)?;
    let mut trace = Vec::with_capacity(params.n_grasp);
    let mut best: Option<(Seconds, Route)> = None;
    for _ in 0..params.n_grasp {
        let route = construct_route(matrix, params.k_grasp, rng);
        let cost = matrix.tour_cost(route.order().iter().copied());
        trace.push(cost);
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, route));
        }
    }
    let (_, route) = best.expect("n_grasp >= 1");
    finish(matrix, route, trace, params)
}

/// Removes `count` nodes one at a time, each drawn from the `k_del` nodes
/// whose removal saves the most time. Returns the removed nodes in order.
fn delete_nodes<R: Rng + ?Sized>(
    matrix: &MultiLayerMatrix,
    route: &mut Route,
    count: usize,
    k_del: usize,
    rng: &mut R,
) -> Vec<usize> {
    let mut deleted = Vec::with_capacity(count);
    for _ in 0..count {
        let order = route.order();
        let base = matrix.tour_cost(order.iter().copied());
        let mut savings: Vec<(Seconds, usize, usize)> = order
            .iter()
            .enumerate()
            .map(|(pos, &node)| (base - cost_without(matrix, order, pos), node, pos))
            .collect();
        savings.sort_by_key(|&(saving, node, _)| (Reverse(saving), node));
        let &(_, node, pos) = pick(&savings, k_del, rng);
        route.remove(pos);
        deleted.push(node);
    }
    deleted
}

fn reinsert_nodes<R: Rng + ?Sized>(
    matrix: &MultiLayerMatrix,
    route: &mut Route,
    nodes: &[usize],
    k_ins: usize,
    rng: &mut R,
) {
    for &node in nodes {
        let candidates = enumerate_insertions(route, &[node], matrix);
        let chosen = *pick(&candidates, k_ins, rng);
        route.insert(chosen.position, chosen.node);
    }
}

/// `n_improve` rounds of delete-L / reinsert-first-deleted-first, each
/// starting from the incumbent and replacing it only on strict improvement.
pub fn improve<R: Rng + ?Sized>(
    route: &Route,
    matrix: &MultiLayerMatrix,
    params: &SolverParams,
    rng: &mut R,
) -> Result<SolveResult, SolveError> {
    let n_clients = matrix.n_nodes() - 1;
    params.validate(n_clients)?;
    if !route.is_complete(matrix.n_nodes()) {
        return Err(ModelError::InvalidRoute("improvement needs a complete tour".into()).into());
    }
    let mut best = route.clone();
    let mut best_cost = matrix.tour_cost(best.order().iter().copied());
    let mut trace = Vec::with_capacity(params.n_improve);
    for _ in 0..params.n_improve {
        let mut candidate = best.clone();
        let deleted = delete_nodes(matrix, &mut candidate, params.l_delete, params.k_del, rng);
        reinsert_nodes(matrix, &mut candidate, &deleted, params.k_ins, rng);
        let cost = matrix.tour_cost(candidate.order().iter().copied());
        if cost < best_cost {
            best = candidate;
            best_cost = cost;
        }
        trace.push(best_cost);
    }
    finish(matrix, best, trace, params)
}

/// Full pipeline: GRASP then insertion-deletion, from one RNG stream.
pub fn solve(
    instance: &Instance,
    matrix: &MultiLayerMatrix,
    params: &SolverParams,
) -> Result<SolveResult, SolveError> {
    if instance.len() != matrix.n_nodes() {
        return Err(SolveError::DimensionMismatch {
            instance: instance.len(),
            matrix: matrix.n_nodes(),
        });
    }
    solve_matrix(matrix, params)
}

/// [`solve`] without an instance; node count comes from the matrix.
pub fn solve_matrix(matrix: &MultiLayerMatrix, params: &SolverParams) -> Result<SolveResult, SolveError> {
    if matrix.n_nodes() < 2 {
        return Err(ModelError::InvalidInput("need at least one client".into()).into());
    }
    params.validate(matrix.n_nodes() - 1)?;
    let mut rng = seeded_rng(params.seed);
    let grasp = run_grasp(matrix, params, &mut rng)?;
    let improved = improve(&grasp.best_route, matrix, params, &mut rng)?;
    let mut trace = grasp.cost_trace;
    trace.extend_from_slice(&improved.cost_trace);
    Ok(SolveResult {
        cost_trace: trace,
        ..improved
    })
}
