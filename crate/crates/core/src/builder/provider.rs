use std::collections::HashMap;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

use super::cache::{read_entries, CacheEntry};
use super::plan::QuerySchedule;
use crate::model::{MultiLayerMatrix, Node, Seconds};

/// One rectangle of origins × destinations at a departure time.
#[derive(Debug, Clone, Copy)]
pub struct ProviderRequest<'a> {
    pub origins: &'a [usize],
    pub destinations: &'a [usize],
    /// All instance nodes, indexed by id.
    pub nodes: &'a [Node],
    pub departure_time: i64,
}

/// `response[o][d]` for the request's origin and destination positions;
/// `None` when the provider had no value for that pair.
pub type ProviderResponse = Vec<Vec<Option<Seconds>>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProviderError {
    /// Worth retrying: timeouts, 5xx, rate limiting.
    #[error("transient provider failure: {0}")]
    Transient(String),
    #[error("provider failure: {0}")]
    Permanent(String),
    #[error("provider quota exhausted")]
    QuotaExceeded,
}

/// A source of travel times for request rectangles.
pub trait TravelTimeProvider: Sync {
    fn query(&self, request: &ProviderRequest<'_>) -> Result<ProviderResponse, ProviderError>;
}

/// Replays recorded `(origin, destination, departure_time) -> seconds`
/// observations. Unknown pairs come back as holes.
#[derive(Debug, Default)]
pub struct RecordedProvider {
    entries: HashMap<(usize, usize, i64), Seconds>,
    calls: AtomicUsize,
}

impl RecordedProvider {
    pub fn new(entries: impl IntoIterator<Item = CacheEntry>) -> Self {
        Self {
            entries: entries.into_iter().map(|e| ((e.o, e.d, e.t), e.s)).collect(),
            calls: AtomicUsize::new(0),
        }
    }

    /// Loads a recording in the cache's JSON-lines format.
    pub fn from_jsonl(path: &Path) -> std::io::Result<Self> {
        Ok(Self::new(read_entries(path)?))
    }

    /// Number of queries served so far.
    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }
}

impl TravelTimeProvider for RecordedProvider {
    fn query(&self, request: &ProviderRequest<'_>) -> Result<ProviderResponse, ProviderError> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        Ok(request
            .origins
            .iter()
            .map(|&o| {
                request
                    .destinations
                    .iter()
                    .map(|&d| self.entries.get(&(o, d, request.departure_time)).copied())
                    .collect()
            })
            .collect())
    }
}

/// Serves entries of a pre-built matrix, mapping departure timestamps back to
/// layers through the query schedule.
#[derive(Debug)]
pub struct SyntheticProvider {
    matrix: MultiLayerMatrix,
    schedule: QuerySchedule,
    calls: AtomicUsize,
}

impl SyntheticProvider {
    pub fn new(matrix: MultiLayerMatrix, schedule: QuerySchedule) -> Self {
        Self {
            matrix,
            schedule,
            calls: AtomicUsize::new(0),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }
}

impl TravelTimeProvider for SyntheticProvider {
    fn query(&self, request: &ProviderRequest<'_>) -> Result<ProviderResponse, ProviderError> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let layer = self
            .schedule
            .layer_of(request.departure_time)
            .filter(|&s| s < self.matrix.n_layers())
            .ok_or_else(|| {
                ProviderError::Permanent(format!("no layer departs at {}", request.departure_time))
            })?;
        let n = self.matrix.n_nodes();
        if let Some(&bad) = request.origins.iter().chain(request.destinations).find(|&&i| i >= n) {
            return Err(ProviderError::Permanent(format!("unknown node {bad}")));
        }
        Ok(request
            .origins
            .iter()
            .map(|&o| {
                request
                    .destinations
                    .iter()
                    .map(|&d| Some(self.matrix.entry(layer, o, d)))
                    .collect()
            })
            .collect())
    }
}
