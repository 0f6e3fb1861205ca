use std::thread;
use std::time::Duration;

use thiserror::Error;

use super::cache::{CacheEntry, FetchCache};
use super::plan::{FetchPlan, FetchRequest, QuotaBudget};
use super::provider::{ProviderError, ProviderRequest, ProviderResponse, TravelTimeProvider};
use crate::model::{Instance, ModelError, MultiLayerMatrix, Seconds, ValidationReport};

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("request {request} (layer {layer}) failed: {message}")]
    Backend {
        request: usize,
        layer: usize,
        message: String,
    },
    #[error("matrix incomplete: {} missing pairs, first {:?}", holes.len(), holes.first())]
    Incomplete {
        /// `(layer, origin, destination)` of every missing entry.
        holes: Vec<(usize, usize, usize)>,
    },
    #[error(
        "quota exhausted after {completed_requests} of {total_requests} requests; \
         progress is cached, rerun tomorrow to resume"
    )]
    Suspended {
        completed_requests: usize,
        total_requests: usize,
        elements_used: usize,
    },
    #[error("cache error: {0}")]
    Cache(#[from] std::io::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Bounded exponential backoff for transient provider failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_attempts: 5,
            base_delay: Duration::from_millis(500),
        }
    }
}

impl RetryPolicy {
    pub fn immediate(max_attempts: u32) -> Self {
        Self {
            max_attempts,
            base_delay: Duration::ZERO,
        }
    }

    fn delay_before(&self, attempt: u32) -> Duration {
        self.base_delay * 2u32.saturating_pow(attempt.saturating_sub(1))
    }
}

#[derive(Debug)]
pub struct FetchOutcome {
    pub matrix: MultiLayerMatrix,
    /// Fetched data is never altered; violations are only reported.
    pub report: ValidationReport,
    pub requests_issued: usize,
    pub requests_from_cache: usize,
    pub budget: QuotaBudget,
}

/// Executes a [`FetchPlan`] against a provider, through a cache.
pub struct Fetcher<'p> {
    provider: &'p dyn TravelTimeProvider,
    retry: RetryPolicy,
    budget: QuotaBudget,
}

impl<'p> Fetcher<'p> {
    pub fn new(provider: &'p dyn TravelTimeProvider, daily_quota: usize) -> Self {
        Self {
            provider,
            retry: RetryPolicy::default(),
            budget: QuotaBudget::new(daily_quota),
        }
    }

    pub fn retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn budget(mut self, budget: QuotaBudget) -> Self {
        self.budget = budget;
        self
    }

    fn query_with_retry(&self, index: usize, request: &FetchRequest, instance: &Instance) -> Result<ProviderResponse, FetchError> {
        let query = ProviderRequest {
            origins: &request.origins,
            destinations: &request.destinations,
            nodes: instance.nodes(),
            departure_time: request.departure_time,
        };
        let mut attempt = 0;
        loop {
            attempt += 1;
            match self.provider.query(&query) {
                Ok(response) => return Ok(response),
                Err(ProviderError::Transient(msg)) if attempt < self.retry.max_attempts => {
                    log::warn!("request {index}: attempt {attempt} failed ({msg}), retrying");
                    thread::sleep(self.retry.delay_before(attempt));
                }
                Err(ProviderError::QuotaExceeded) => {
                    return Err(FetchError::Suspended {
                        completed_requests: index,
                        total_requests: 0,
                        elements_used: self.budget.elements_used,
                    })
                }
                Err(e) => {
                    return Err(FetchError::Backend {
                        request: index,
                        layer: request.layer,
                        message: format!("{e} (after {attempt} attempt(s))"),
                    })
                }
            }
        }
    }

    /// Issues the plan's requests in order, skipping any whose pairs are all
    /// cached, and assembles the matrix by plan coordinates.
    pub fn execute(
        &mut self,
        plan: &FetchPlan,
        instance: &Instance,
        cache: &mut FetchCache,
    ) -> Result<FetchOutcome, FetchError> {
        let n = plan.n_nodes;
        if instance.len() != n {
            return Err(ModelError::InvalidInput(format!(
                "plan covers {n} nodes but the instance has {}",
                instance.len()
            ))
            .into());
        }
        let mut times: Vec<Option<Seconds>> = vec![None; plan.n_layers * n * n];
        for s in 0..plan.n_layers {
            for i in 0..n {
                times[(s * n + i) * n + i] = Some(0);
            }
        }
        let mut issued = 0;
        let mut from_cache = 0;

        for (index, request) in plan.requests.iter().enumerate() {
            let t = request.departure_time;
            let cached = request.pairs(false).all(|(o, d)| cache.contains(o, d, t));
            if cached {
                for (o, d) in request.pairs(false) {
                    times[(request.layer * n + o) * n + d] = cache.get(o, d, t);
                }
                from_cache += 1;
                continue;
            }
            if !self.budget.try_consume(request.billed_elements()) {
                cache.flush()?;
                return Err(FetchError::Suspended {
                    completed_requests: index,
                    total_requests: plan.requests.len(),
                    elements_used: self.budget.elements_used,
                });
            }
            let response = match self.query_with_retry(index, request, instance) {
                Ok(r) => r,
                Err(FetchError::Suspended { elements_used, .. }) => {
                    cache.flush()?;
                    return Err(FetchError::Suspended {
                        completed_requests: index,
                        total_requests: plan.requests.len(),
                        elements_used,
                    });
                }
                Err(e) => {
                    cache.flush()?;
                    return Err(e);
                }
            };
            issued += 1;
            if response.len() != request.origins.len()
                || response.iter().any(|row| row.len() != request.destinations.len())
            {
                return Err(FetchError::Backend {
                    request: index,
                    layer: request.layer,
                    message: "response shape does not match the request".into(),
                });
            }
            for (row, &o) in response.iter().zip(&request.origins) {
                for (&value, &d) in row.iter().zip(&request.destinations) {
                    if o == d {
                        continue;
                    }
                    if let Some(s) = value {
                        cache.insert(CacheEntry { o, d, t, s })?;
                        times[(request.layer * n + o) * n + d] = Some(s);
                    }
                }
            }
        }
        cache.flush()?;

        let mut holes = Vec::new();
        for s in 0..plan.n_layers {
            for i in 0..n {
                for j in 0..n {
                    if times[(s * n + i) * n + j].is_none() {
                        holes.push((s, i, j));
                    }
                }
            }
        }
        if !holes.is_empty() {
            return Err(FetchError::Incomplete { holes });
        }
        let matrix = MultiLayerMatrix::from_flat(
            n,
            plan.n_layers,
            plan.schedule.step_seconds,
            times.into_iter().map(|v| v.expect("holes checked")).collect(),
        )?;
        let report = matrix.validate();
        Ok(FetchOutcome {
            matrix,
            report,
            requests_issued: issued,
            requests_from_cache: from_cache,
            budget: self.budget,
        })
    }
}

/// Runs `plan` with the default retry policy and a fresh daily budget.
pub fn execute_fetch(
    plan: &FetchPlan,
    provider: &dyn TravelTimeProvider,
    instance: &Instance,
    cache: &mut FetchCache,
) -> Result<FetchOutcome, FetchError> {
    Fetcher::new(provider, plan.daily_quota).execute(plan, instance, cache)
}
