//! HTTP backend for a Google-style Distance Matrix endpoint.

use serde::Deserialize;

use super::provider::{ProviderError, ProviderRequest, ProviderResponse, TravelTimeProvider};

/// Environment variable holding the API key. The key is only ever placed in
/// request URLs, never in outputs or error messages.
pub const API_KEY_ENV: &str = "TDVRP_MAPS_API_KEY";

pub const DEFAULT_ENDPOINT: &str = "https://maps.googleapis.com/maps/api/distancematrix/json";

pub struct LiveProvider {
    api_key: String,
    endpoint: String,
    agent: ureq::Agent,
}

impl std::fmt::Debug for LiveProvider {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LiveProvider")
            .field("endpoint", &self.endpoint)
            .finish_non_exhaustive()
    }
}

impl LiveProvider {
    pub fn new(api_key: impl Into<String>) -> Self {
        Self {
            api_key: api_key.into(),
            endpoint: DEFAULT_ENDPOINT.to_string(),
            agent: ureq::Agent::new_with_defaults(),
        }
    }

    pub fn from_env() -> Result<Self, ProviderError> {
        match std::env::var(API_KEY_ENV) {
            Ok(key) if !key.is_empty() => Ok(Self::new(key)),
            _ => Err(ProviderError::Permanent(format!("{API_KEY_ENV} is not set"))),
        }
    }

    pub fn with_endpoint(mut self, endpoint: impl Into<String>) -> Self {
        self.endpoint = endpoint.into();
        self
    }
}

fn coordinates(request: &ProviderRequest<'_>, ids: &[usize]) -> String {
    ids.iter()
        .map(|&i| {
            let node = &request.nodes[i];
            format!("{:.6},{:.6}", node.lat, node.lon)
        })
        .collect::<Vec<_>>()
        .join("|")
}

impl TravelTimeProvider for LiveProvider {
    fn query(&self, request: &ProviderRequest<'_>) -> Result<ProviderResponse, ProviderError> {
        let departure = request.departure_time.to_string();
        let result = self
            .agent
            .get(&self.endpoint)
            .query("origins", coordinates(request, request.origins))
            .query("destinations", coordinates(request, request.destinations))
            .query("departure_time", &departure)
            .query("mode", "driving")
            .query("traffic_model", "best_guess")
            .query("key", &self.api_key)
            .call();
        match result {
            Ok(mut response) => {
                let body = response
                    .body_mut()
                    .read_to_string()
                    .map_err(|e| ProviderError::Transient(format!("reading response body: {e}")))?;
                parse_response(&body, request.origins.len(), request.destinations.len())
            }
            Err(ureq::Error::StatusCode(code)) if code == 429 || code >= 500 => {
                Err(ProviderError::Transient(format!("HTTP {code}")))
            }
            Err(ureq::Error::StatusCode(code)) => Err(ProviderError::Permanent(format!("HTTP {code}"))),
            // transport errors can embed the URL, which carries the key
            Err(_) => Err(ProviderError::Transient("transport error".into())),
        }
    }
}

#[derive(Deserialize)]
struct Body {
    status: String,
    #[serde(default)]
    error_message: Option<String>,
    #[serde(default)]
    rows: Vec<Row>,
}

#[derive(Deserialize)]
struct Row {
    elements: Vec<Element>,
}

#[derive(Deserialize)]
struct Element {
    status: String,
    duration: Option<Value>,
    duration_in_traffic: Option<Value>,
}

#[derive(Deserialize)]
struct Value {
    value: i64,
}

/// Extracts per-element durations, preferring the traffic-aware value.
pub fn parse_response(body: &str, n_origins: usize, n_destinations: usize) -> Result<ProviderResponse, ProviderError> {
    let parsed: Body =
        serde_json::from_str(body).map_err(|e| ProviderError::Permanent(format!("unparseable response: {e}")))?;
    match parsed.status.as_str() {
        "OK" => {}
        "OVER_QUERY_LIMIT" | "OVER_DAILY_LIMIT" => return Err(ProviderError::QuotaExceeded),
        "UNKNOWN_ERROR" => return Err(ProviderError::Transient(parsed.status)),
        other => {
            return Err(ProviderError::Permanent(match parsed.error_message {
                Some(msg) => format!("{other}: {msg}"),
                None => other.to_string(),
            }))
        }
    }
    if parsed.rows.len() != n_origins || parsed.rows.iter().any(|r| r.elements.len() != n_destinations) {
        return Err(ProviderError::Permanent(format!(
            "expected {n_origins}x{n_destinations} elements"
        )));
    }
    Ok(parsed
        .rows
        .into_iter()
        .map(|row| {
            row.elements
                .into_iter()
                .map(|e| {
                    (e.status == "OK")
                        .then(|| e.duration_in_traffic.or(e.duration).map(|v| v.value))
                        .flatten()
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
      "destination_addresses": ["a", "b"],
      "origin_addresses": ["c"],
      "rows": [{"elements": [
        {"status": "OK", "duration": {"text": "10 mins", "value": 600},
         "duration_in_traffic": {"text": "12 mins", "value": 720}},
        {"status": "ZERO_RESULTS"}
      ]}],
      "status": "OK"
    }"#;

    #[test]
    fn prefers_traffic_duration() {
        let r = parse_response(SAMPLE, 1, 2).unwrap();
        assert_eq!(r, vec![vec![Some(720), None]]);
    }

    #[test]
    fn status_mapping() {
        assert_eq!(
            parse_response(r#"{"status":"OVER_DAILY_LIMIT","rows":[]}"#, 0, 0),
            Err(ProviderError::QuotaExceeded)
        );
        assert!(matches!(
            parse_response(r#"{"status":"UNKNOWN_ERROR"}"#, 0, 0),
            Err(ProviderError::Transient(_))
        ));
        assert!(matches!(
            parse_response(r#"{"status":"REQUEST_DENIED","error_message":"bad key"}"#, 0, 0),
            Err(ProviderError::Permanent(m)) if m.contains("bad key")
        ));
        assert!(matches!(parse_response(SAMPLE, 2, 2), Err(ProviderError::Permanent(_))));
    }

    #[test]
    fn debug_hides_key() {
        let p = LiveProvider::new("secret-key");
        assert!(!format!("{p:?}").contains("secret-key"));
    }
}
