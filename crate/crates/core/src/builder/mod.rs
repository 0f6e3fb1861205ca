//! Building multi-layer matrices: quota-aware fetching from a distance-matrix
//! provider, or synthetic generation from a traffic profile.

mod cache;
mod fetch;
#[cfg(feature = "live")]
mod live;
mod plan;
mod provider;
mod synthetic;

pub use cache::{CacheEntry, FetchCache};
pub use fetch::{execute_fetch, FetchError, FetchOutcome, Fetcher, RetryPolicy};
#[cfg(feature = "live")]
pub use live::{parse_response, LiveProvider, API_KEY_ENV};
pub use plan::{
    max_single_day_nodes, plan_fetch, FetchLimits, FetchPlan, FetchRequest, QuerySchedule,
    QuotaBudget, ELEMENTS_PER_REQUEST, FREE_DAILY_QUOTA, PAID_DAILY_QUOTA,
};
pub use provider::{
    ProviderError, ProviderRequest, ProviderResponse, RecordedProvider, SyntheticProvider, TravelTimeProvider,
};
pub use synthetic::{close_layer, generate_synthetic, haversine_km, PeakWindow, TrafficProfile, EARTH_RADIUS_KM};
