//! Request planning under per-request and per-day element quotas.
//!
//! Each request covers a rectangle of origin rows times destination columns.
//! The provider bills the full rectangle, so a complete plan bills
//! `layers * n * n` elements. Self-pairs inside a rectangle are billed but
//! not used unless `include_self_pairs` is set.

use serde::{Deserialize, Serialize};

/// Free tier daily element allowance.
pub const FREE_DAILY_QUOTA: usize = 2_500;
/// Paid tier daily element allowance.
pub const PAID_DAILY_QUOTA: usize = 100_000;
/// Elements allowed in a single request when traffic data is requested.
pub const ELEMENTS_PER_REQUEST: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchLimits {
    pub elements_per_request: usize,
    pub daily_quota: usize,
    /// Count `(i, i)` pairs as wanted elements.
    pub include_self_pairs: bool,
}

impl Default for FetchLimits {
    fn default() -> Self {
        Self {
            elements_per_request: ELEMENTS_PER_REQUEST,
            daily_quota: FREE_DAILY_QUOTA,
            include_self_pairs: false,
        }
    }
}

impl FetchLimits {
    pub fn paid() -> Self {
        Self {
            daily_quota: PAID_DAILY_QUOTA,
            ..Self::default()
        }
    }
}

/// Running element count against a daily allowance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotaBudget {
    pub daily_quota: usize,
    pub elements_used: usize,
}

impl QuotaBudget {
    pub fn new(daily_quota: usize) -> Self {
        Self {
            daily_quota,
            elements_used: 0,
        }
    }

    pub fn remaining(&self) -> usize {
        self.daily_quota.saturating_sub(self.elements_used)
    }

    /// Charges `elements` if they fit in what is left today.
    pub fn try_consume(&mut self, elements: usize) -> bool {
        if elements > self.remaining() {
            return false;
        }
        self.elements_used += elements;
        true
    }
}

/// When the layers are queried: layer `s` departs at
/// `start_epoch + s * step_seconds`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuerySchedule {
    pub start_epoch: i64,
    pub step_seconds: i64,
}

impl QuerySchedule {
    pub fn departure_for(&self, layer: usize) -> i64 {
        self.start_epoch + layer as i64 * self.step_seconds
    }

    /// Layer priced by an absolute departure timestamp, if it is one of ours.
    pub fn layer_of(&self, departure_time: i64) -> Option<usize> {
        let offset = departure_time - self.start_epoch;
        (offset >= 0 && offset % self.step_seconds == 0).then(|| (offset / self.step_seconds) as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchRequest {
    pub layer: usize,
    pub origins: Vec<usize>,
    pub destinations: Vec<usize>,
    /// Absolute departure timestamp, epoch seconds.
    pub departure_time: i64,
    /// Zero-based day the request is scheduled on.
    pub day: usize,
}

impl FetchRequest {
    /// Rectangle size the provider bills.
    pub fn billed_elements(&self) -> usize {
        self.origins.len() * self.destinations.len()
    }

    /// `(origin, destination)` pairs this request is responsible for.
    pub fn pairs(&self, include_self_pairs: bool) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.origins.iter().flat_map(move |&o| {
            self.destinations
                .iter()
                .filter(move |&&d| include_self_pairs || d != o)
                .map(move |&d| (o, d))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FetchPlan {
    pub n_nodes: usize,
    pub n_layers: usize,
    pub schedule: QuerySchedule,
    pub requests: Vec<FetchRequest>,
    /// Wanted elements: `S·N·(N−1)`, or `S·N²` with self-pairs.
    pub total_elements: usize,
    /// Elements billed by the provider, always `S·N²`.
    pub billed_elements: usize,
    pub elements_per_request_limit: usize,
    pub daily_quota: usize,
    pub include_self_pairs: bool,
    pub days_needed: usize,
}

impl FetchPlan {
    pub fn fits_single_day(&self) -> bool {
        self.days_needed <= 1
    }

    pub fn billed_on_day(&self, day: usize) -> usize {
        self.requests
            .iter()
            .filter(|r| r.day == day)
            .map(FetchRequest::billed_elements)
            .sum()
    }
}

/// Splits the `S × N × N` grid into row-major request rectangles.
///
/// With `N` at most the per-request limit, each request takes
/// `limit / N` whole origin rows. Otherwise each origin row is cut into
/// destination chunks of `limit` columns. Requests are then packed into days
/// in order so no day bills more than the daily quota.
pub fn plan_fetch(n_nodes: usize, n_layers: usize, schedule: QuerySchedule, limits: FetchLimits) -> FetchPlan {
    assert!(n_nodes >= 2, "a plan needs at least two nodes");
    assert!(n_layers >= 1, "a plan needs at least one layer");
    // a request can never bill more than a whole day allows
    let limit = limits.elements_per_request.min(limits.daily_quota).max(1);

    let mut rectangles: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    if n_nodes <= limit {
        let rows_per_request = limit / n_nodes;
        let all: Vec<usize> = (0..n_nodes).collect();
        for chunk in all.chunks(rows_per_request) {
            rectangles.push((chunk.to_vec(), all.clone()));
        }
    } else {
        let all: Vec<usize> = (0..n_nodes).collect();
        for origin in 0..n_nodes {
            for chunk in all.chunks(limit) {
                rectangles.push((vec![origin], chunk.to_vec()));
            }
        }
    }

    let mut requests = Vec::with_capacity(rectangles.len() * n_layers);
    let mut day = 0;
    let mut used_today = 0;
    for layer in 0..n_layers {
        for (origins, destinations) in &rectangles {
            let billed = origins.len() * destinations.len();
            if used_today + billed > limits.daily_quota {
                day += 1;
                used_today = 0;
            }
            used_today += billed;
            requests.push(FetchRequest {
                layer,
                origins: origins.clone(),
                destinations: destinations.clone(),
                departure_time: schedule.departure_for(layer),
                day,
            });
        }
    }

    let billed_elements = n_layers * n_nodes * n_nodes;
    let total_elements = if limits.include_self_pairs {
        billed_elements
    } else {
        n_layers * n_nodes * (n_nodes - 1)
    };
    FetchPlan {
        n_nodes,
        n_layers,
        schedule,
        requests,
        total_elements,
        billed_elements,
        elements_per_request_limit: limit,
        daily_quota: limits.daily_quota,
        include_self_pairs: limits.include_self_pairs,
        days_needed: day + 1,
    }
}

/// Largest node count whose full plan fits in one day.
pub fn max_single_day_nodes(n_layers: usize, limits: FetchLimits) -> usize {
    let schedule = QuerySchedule {
        start_epoch: 0,
        step_seconds: 3600,
    };
    let mut n = 2;
    if !plan_fetch(n, n_layers, schedule, limits).fits_single_day() {
        return 0;
    }
    while plan_fetch(n + 1, n_layers, schedule, limits).fits_single_day() {
        n += 1;
    }
    n
}
