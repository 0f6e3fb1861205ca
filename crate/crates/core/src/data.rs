//! Bundled instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::io::instance_from_str;
use crate::model::{Instance, ModelError, Node};

/// Depot plus 30 clients across the Paris urban area.
pub const PARIS_31_JSON: &str = include_str!("../data/paris_31.json");

pub fn paris_instance() -> Instance {
    instance_from_str(PARIS_31_JSON).expect("bundled instance is valid")
}

/// `n_nodes` points drawn uniformly over the Paris area, node 0 the depot.
/// Coordinates are rounded to six decimals so they survive a JSON round trip
/// unchanged.
pub fn random_instance(n_nodes: usize, seed: u64) -> Result<Instance, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let round6 = |x: f64| (x * 1e6).round() / 1e6;
    Instance::new(
        (0..n_nodes)
            .map(|id| Node {
                id,
                lat: round6(rng.random_range(48.72..48.92)),
                lon: round6(rng.random_range(2.17..2.59)),
                label: if id == 0 { "depot".to_string() } else { id.to_string() },
            })
            .collect(),
    )
}
