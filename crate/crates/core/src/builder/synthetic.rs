//! Synthetic time-dependent travel times from coordinates and a congestion
//! profile.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{Instance, ModelError, MultiLayerMatrix, Node, Seconds};

pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Great-circle distance in kilometres.
pub fn haversine_km(a: &Node, b: &Node) -> f64 {
    let (lat1, lat2) = (a.lat.to_radians(), b.lat.to_radians());
    let dlat = lat2 - lat1;
    let dlon = (b.lon - a.lon).to_radians();
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().asin()
}

/// A congestion window over layers `start_layer..=end_layer`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakWindow {
    pub start_layer: usize,
    pub end_layer: usize,
    pub multiplier: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficProfile {
    /// Free-flow speed, km/h.
    pub base_speed_kmh: f64,
    pub peak_windows: Vec<PeakWindow>,
    /// Each direction of each arc is scaled by a factor drawn uniformly from
    /// `[1 - jitter, 1 + jitter]`. Zero disables it.
    pub asymmetry_jitter: f64,
    pub seed: u64,
}

impl Default for TrafficProfile {
    fn default() -> Self {
        Self {
            base_speed_kmh: 30.0,
            peak_windows: Vec::new(),
            asymmetry_jitter: 0.0,
            seed: 0,
        }
    }
}

impl TrafficProfile {
    /// Morning and evening rush over a 12-hour day in 2-hour steps
    /// (8-10 and 16-20).
    pub fn rush_hours(seed: u64) -> Self {
        Self {
            base_speed_kmh: 30.0,
            peak_windows: vec![
                PeakWindow { start_layer: 0, end_layer: 0, multiplier: 2.0 },
                PeakWindow { start_layer: 1, end_layer: 1, multiplier: 1.4 },
                PeakWindow { start_layer: 4, end_layer: 5, multiplier: 1.8 },
            ],
            asymmetry_jitter: 0.15,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.base_speed_kmh > 0.0 && self.base_speed_kmh.is_finite()) {
            return Err(ModelError::InvalidParams(format!(
                "base speed must be positive, got {}",
                self.base_speed_kmh
            )));
        }
        if !(0.0..1.0).contains(&self.asymmetry_jitter) {
            return Err(ModelError::InvalidParams(format!(
                "asymmetry jitter must be in [0, 1), got {}",
                self.asymmetry_jitter
            )));
        }
        for w in &self.peak_windows {
            if !(w.multiplier >= 1.0 && w.multiplier.is_finite()) {
                return Err(ModelError::InvalidParams(format!(
                    "peak multipliers must be >= 1, got {}",
                    w.multiplier
                )));
            }
            if w.start_layer > w.end_layer {
                return Err(ModelError::InvalidParams(format!(
                    "peak window {}..={} is reversed",
                    w.start_layer, w.end_layer
                )));
            }
        }
        Ok(())
    }

    /// Overlapping windows take the strongest multiplier.
    pub fn multiplier(&self, layer: usize) -> f64 {
        self.peak_windows
            .iter()
            .filter(|w| (w.start_layer..=w.end_layer).contains(&layer))
            .map(|w| w.multiplier)
            .fold(1.0, f64::max)
    }
}

/// Min-plus closure (Floyd-Warshall) of one `n × n` layer, in place.
pub fn close_layer(n: usize, t: &mut [Seconds]) {
    for via in 0..n {
        for i in 0..n {
            let to_via = t[i * n + via];
            for j in 0..n {
                let through = to_via + t[via * n + j];
                if through < t[i * n + j] {
                    t[i * n + j] = through;
                }
            }
        }
    }
}

/// Layer `s` entry `(i, j)` is
/// `round(round(free_flow(i, j) · jitter(i, j)) · multiplier(s))`, then each
/// layer is closed under min-plus so the triangle inequality holds.
pub fn generate_synthetic(
    instance: &Instance,
    n_layers: usize,
    step_seconds: Seconds,
    profile: &TrafficProfile,
) -> Result<MultiLayerMatrix, ModelError> {
    profile.validate()?;
    if n_layers == 0 {
        return Err(ModelError::InvalidParams("need at least one layer".into()));
    }
    let nodes = instance.nodes();
    let n = nodes.len();
    let mut rng = ChaCha8Rng::seed_from_u64(profile.seed);
    let mut base = vec![0 as Seconds; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let jitter = if profile.asymmetry_jitter > 0.0 {
                rng.random_range(1.0 - profile.asymmetry_jitter..=1.0 + profile.asymmetry_jitter)
            } else {
                1.0
            };
            let km = haversine_km(&nodes[i], &nodes[j]);
            if km == 0.0 {
                log::warn!("nodes {i} and {j} coincide; their travel time is zero");
            }
            base[i * n + j] = (km / profile.base_speed_kmh * 3600.0 * jitter).round() as Seconds;
        }
    }
    let mut times = Vec::with_capacity(n_layers * n * n);
    for s in 0..n_layers {
        let factor = profile.multiplier(s);
        let mut layer: Vec<Seconds> = base.iter().map(|&t| (t as f64 * factor).round() as Seconds).collect();
        close_layer(n, &mut layer);
        times.extend(layer);
    }
    MultiLayerMatrix::from_flat(n, n_layers, step_seconds, times)
}
