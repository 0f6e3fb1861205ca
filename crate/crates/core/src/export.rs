//! GeoJSON rendering of a solved tour for external map viewers.

use geojson::{Feature, FeatureCollection, Geometry, JsonObject, Value};
use serde_json::json;
use thiserror::Error;

use crate::model::{Instance, Node};
use crate::solver::SolveResult;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExportError {
    #[error("route visits node {index}, but the instance only has {n_nodes} nodes")]
    IndexOutOfRange { index: usize, n_nodes: usize },
    #[error("route lists node {0} more than once or includes the depot")]
    BadRoute(usize),
}

fn point(node: &Node, visit_order: usize, departure_s: i64) -> Feature {
    let mut props = JsonObject::new();
    props.insert("id".into(), json!(node.id));
    props.insert("label".into(), json!(node.label));
    props.insert("visit_order".into(), json!(visit_order));
    props.insert("departure_s".into(), json!(departure_s));
    Feature {
        bbox: None,
        geometry: Some(Geometry::new(Value::Point(vec![node.lon, node.lat]))),
        id: None,
        properties: Some(props),
        foreign_members: None,
    }
}

/// One Point per visited node (depot first, visit order 0) and, for a
/// non-empty tour, a LineString depot -> clients -> depot. Coordinates are
/// `[longitude, latitude]`; segments are straight, not road geometry.
pub fn route_geojson(instance: &Instance, result: &SolveResult) -> Result<FeatureCollection, ExportError> {
    let order = result.best_route.order();
    let n_nodes = instance.len();
    let mut seen = vec![false; n_nodes];
    seen[Instance::DEPOT] = true;
    for &index in order {
        if index >= n_nodes {
            return Err(ExportError::IndexOutOfRange { index, n_nodes });
        }
        if std::mem::replace(&mut seen[index], true) {
            return Err(ExportError::BadRoute(index));
        }
    }
    let nodes = instance.nodes();
    let departures = &result.best_schedule.departures;
    let departure = |pos: usize| departures.get(pos).copied().unwrap_or_default();

    let mut features = vec![point(instance.depot(), 0, departure(0))];
    for (pos, &index) in order.iter().enumerate() {
        features.push(point(&nodes[index], pos + 1, departure(pos + 1)));
    }
    if !order.is_empty() {
        let depot = instance.depot();
        let mut line = vec![vec![depot.lon, depot.lat]];
        line.extend(order.iter().map(|&i| vec![nodes[i].lon, nodes[i].lat]));
        line.push(vec![depot.lon, depot.lat]);
        let mut props = JsonObject::new();
        props.insert("total_cost_s".into(), json!(result.best_schedule.total_cost));
        features.push(Feature {
            bbox: None,
            geometry: Some(Geometry::new(Value::LineString(line))),
            id: None,
            properties: Some(props),
            foreign_members: None,
        });
    }
    Ok(FeatureCollection {
        bbox: None,
        features,
        foreign_members: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Route, Schedule, SolverParams};

    fn result_for(order: Vec<usize>) -> SolveResult {
        let departures = (0..=order.len() as i64).map(|k| k * 60).collect();
        SolveResult {
            best_route: Route::new(order),
            best_schedule: Schedule { departures, total_cost: 0 },
            cost_trace: vec![],
            params: SolverParams::default(),
            seed: 0,
            rng: "ChaCha8".into(),
        }
    }

    fn small() -> Instance {
        Instance::new(
            (0..3)
                .map(|id| Node { id, lat: 48.0 + id as f64, lon: 2.0 + id as f64, label: id.to_string() })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn empty_route_is_depot_only() {
        let fc = route_geojson(&small(), &result_for(vec![])).unwrap();
        assert_eq!(fc.features.len(), 1);
        assert!(matches!(fc.features[0].geometry.as_ref().unwrap().value, Value::Point(_)));
    }

    #[test]
    fn two_client_line() {
        let fc = route_geojson(&small(), &result_for(vec![2, 1])).unwrap();
        assert_eq!(fc.features.len(), 4);
        match &fc.features[3].geometry.as_ref().unwrap().value {
            Value::LineString(coords) => {
                assert_eq!(coords.len(), 4);
                assert_eq!(coords[0], vec![2.0, 48.0]);
                assert_eq!(coords[1], vec![4.0, 50.0]);
                assert_eq!(coords[3], coords[0]);
            }
            other => panic!("expected a line, got {other:?}"),
        }
        let props = fc.features[1].properties.as_ref().unwrap();
        assert_eq!(props["id"], 2);
        assert_eq!(props["visit_order"], 1);
        assert_eq!(props["departure_s"], 60);
    }

    #[test]
    fn out_of_range_index_named() {
        assert_eq!(
            route_geojson(&small(), &result_for(vec![1, 7])).unwrap_err(),
            ExportError::IndexOutOfRange { index: 7, n_nodes: 3 }
        );
    }
}
