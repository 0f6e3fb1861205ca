//! Test-only oracles, written against raw nested vectors so they share no
//! code path with the library's evaluator.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdvrp_core::builder::{PeakWindow, TrafficProfile};
use tdvrp_core::{Instance, MultiLayerMatrix, Node};

pub type Layers = Vec<Vec<Vec<i64>>>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `C_ij(k)`: layer `floor(k / step)`, clamped to the last layer.
fn arc_cost(layers: &Layers, step: i64, i: usize, j: usize, k: i64) -> i64 {
    let s = ((k / step) as usize).min(layers.len() - 1);
    layers[s][i][j]
}

/// Departure time from the node at 0-based tour position `a` of
/// `tour = [depot, clients..., depot]`, by direct recursion.
fn departure(layers: &Layers, step: i64, tour: &[usize], a: usize) -> i64 {
    if a == 0 {
        return 0;
    }
    let prev = departure(layers, step, tour, a - 1);
    prev + arc_cost(layers, step, tour[a - 1], tour[a], prev)
}

/// Departures of depot and clients, and the arrival back at the depot.
pub fn naive_schedule(layers: &Layers, step: i64, clients: &[usize]) -> (Vec<i64>, i64) {
    if clients.is_empty() {
        return (vec![0], 0);
    }
    let mut tour = vec![0];
    tour.extend_from_slice(clients);
    tour.push(0);
    let deps = (0..tour.len() - 1).map(|a| departure(layers, step, &tour, a)).collect();
    (deps, departure(layers, step, &tour, tour.len() - 1))
}

pub fn naive_cost(layers: &Layers, step: i64, clients: &[usize]) -> i64 {
    naive_schedule(layers, step, clients).1
}

/// Uniform random entries in `lo..=hi`, zero diagonal.
pub fn random_layers(rng: &mut impl Rng, n: usize, s: usize, lo: i64, hi: i64) -> Layers {
    (0..s)
        .map(|_| {
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { 0 } else { rng.random_range(lo..=hi) }).collect())
                .collect()
        })
        .collect()
}

pub fn random_route(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (1..n).collect();
    for i in (1..order.len()).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    order
}

/// `n` nodes scattered over the Paris bounding box.
pub fn random_instance(rng: &mut impl Rng, n: usize) -> Instance {
    Instance::new(
        (0..n)
            .map(|id| Node {
                id,
                lat: rng.random_range(48.72..48.92),
                lon: rng.random_range(2.17..2.59),
                label: id.to_string(),
            })
            .collect(),
    )
    .unwrap()
}

pub fn random_profile(rng: &mut impl Rng, n_layers: usize) -> TrafficProfile {
    let windows = (0..rng.random_range(0..=3))
        .map(|_| {
            let a = rng.random_range(0..n_layers);
            let b = rng.random_range(a..n_layers);
            PeakWindow {
                start_layer: a,
                end_layer: b,
                multiplier: rng.random_range(1.0..2.5),
            }
        })
        .collect();
    TrafficProfile {
        base_speed_kmh: rng.random_range(15.0..60.0),
        peak_windows: windows,
        asymmetry_jitter: rng.random_range(0.0..0.4),
        seed: rng.random(),
    }
}

pub fn matrix(layers: &Layers, step: i64) -> MultiLayerMatrix {
    MultiLayerMatrix::new(step, layers.clone()).unwrap()
}

/// Exhaustive minimum tour cost, independent of the library oracle.
pub fn exhaustive_min(layers: &Layers, step: i64) -> i64 {
    fn rec(layers: &Layers, step: i64, prefix: &mut Vec<usize>, left: &mut Vec<usize>, best: &mut i64) {
        if left.is_empty() {
            *best = (*best).min(naive_cost(layers, step, prefix));
            return;
        }
        for idx in 0..left.len() {
            let node = left.remove(idx);
            prefix.push(node);
            rec(layers, step, prefix, left, best);
            prefix.pop();
            left.insert(idx, node);
        }
    }
    let n = layers[0].len();
    let mut best = i64::MAX;
    rec(layers, step, &mut Vec::new(), &mut (1..n).collect(), &mut best);
    best
}
