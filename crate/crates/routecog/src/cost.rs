//! General-cost pricing and the volume-delay travel-time surrogate.
//!
//! The general cost of a routing edge is the weighted sum of travel time
//! (`alpha`), distance (`beta`), financial cost (`gamma`) and road quality
//! (`delta`), plus the unweighted `supplement2` surcharges; the financial
//! cost of a link is `length * cost_rate + supplement1`. Weights are per driver class and
//! carry all unit conversions; the resulting cost is dimensionless.
//!
//! Congested travel times come from a standard polynomial volume-delay
//! curve, `t = t0 * (1 + a * (volume / capacity)^b)`, which stands in for
//! a microscopic traffic simulation while preserving the feedback loop:
//! more volume on an edge makes it slower, which reprices routes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::network::{Edge, Link, Network, Route};

/// Per-driver-class weights of the general-cost sum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostWeights {
    /// Weight on travel time (cost per second).
    pub alpha: f64,
    /// Weight on travel distance (cost per meter).
    pub beta: f64,
    /// Weight on financial link cost (dimensionless).
    pub gamma: f64,
    /// Weight on road quality (dimensionless).
    pub delta: f64,
    /// Driver class this weight set applies to.
    #[serde(default)]
    pub driver_class: String,
}

impl CostWeights {
    pub fn validate(&self) -> Result<(), CostError> {
        let all = [self.alpha, self.beta, self.gamma, self.delta];
        if all.iter().any(|w| *w < 0.0 || !w.is_finite()) {
            return Err(CostError::NegativeWeight {
                driver_class: self.driver_class.clone(),
            });
        }
        if all.iter().all(|w| *w == 0.0) {
            return Err(CostError::AllWeightsZero {
                driver_class: self.driver_class.clone(),
            });
        }
        Ok(())
    }
}

impl Default for CostWeights {
    fn default() -> Self {
        CostWeights {
            alpha: 1.0,
            beta: 0.001,
            gamma: 1.0,
            delta: 1.0,
            driver_class: "default".to_string(),
        }
    }
}

/// Simulated state of one routing edge.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeState {
    pub edge_id: String,
    /// Current travel time over the edge, seconds. Never below free-flow.
    pub travel_time: f64,
    /// Current volume on the edge, vehicles per hour.
    pub volume: f64,
}

/// Parameters of the volume-delay curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VolumeDelayParams {
    pub a: f64,
    pub b: f64,
}

impl Default for VolumeDelayParams {
    fn default() -> Self {
        VolumeDelayParams { a: 0.15, b: 4.0 }
    }
}

impl VolumeDelayParams {
    pub fn validate(&self) -> Result<(), CostError> {
        if !(self.a >= 0.0 && self.a.is_finite() && self.b >= 1.0 && self.b.is_finite()) {
            return Err(CostError::BadVolumeDelayParams {
                a: self.a,
                b: self.b,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CostError {
    #[error("weights for driver class {driver_class:?} must be non-negative and finite")]
    NegativeWeight { driver_class: String },
    #[error("weights for driver class {driver_class:?} are all zero")]
    AllWeightsZero { driver_class: String },
    #[error("volume-delay params a={a}, b={b} violate a >= 0, b >= 1")]
    BadVolumeDelayParams { a: f64, b: f64 },
    #[error("no cost known for edge {0}")]
    MissingEdgeCost(String),
}

/// Financial cost of traversing a link: `length * cost_rate + supplement1`.
pub fn link_financial_cost(link: &Link) -> f64 {
    link.length * link.cost_rate + link.supplement1
}

/// General cost of an edge under the given state and weights.
///
/// `state` must belong to `edge`; travel time is the simulated quantity,
/// every other term derives from static link attributes.
pub fn edge_general_cost(
    edge: &Edge,
    state: &EdgeState,
    weights: &CostWeights,
    network: &Network,
) -> f64 {
    assert_eq!(
        state.edge_id, edge.id,
        "state must describe the costed edge"
    );
    let mut distance = 0.0;
    let mut financial = 0.0;
    let mut quality = 0.0;
    let mut supplement2 = 0.0;
    for link_id in &edge.link_ids {
        let link = network
            .link(link_id)
            .unwrap_or_else(|| panic!("edge {} references unknown link {link_id}", edge.id));
        distance += link.length;
        financial += link_financial_cost(link);
        quality += link.road_quality;
        supplement2 += link.supplement2;
    }
    weights.alpha * state.travel_time
        + weights.beta * distance
        + weights.gamma * financial
        + weights.delta * quality
        + supplement2
}

/// General cost of a route: the sum of its edges' general costs.
pub fn route_general_cost(
    route: &Route,
    edge_costs: &std::collections::HashMap<String, f64>,
) -> Result<f64, CostError> {
    let mut total = 0.0;
    for edge_id in &route.edge_ids {
        let cost = edge_costs
            .get(edge_id)
            .ok_or_else(|| CostError::MissingEdgeCost(edge_id.clone()))?;
        total += cost;
    }
    Ok(total)
}

/// General cost of every edge at free flow (zero volume) under one weight
/// set, keyed by edge id.
pub fn free_flow_edge_costs(
    network: &Network,
    weights: &CostWeights,
) -> std::collections::HashMap<String, f64> {
    network
        .edges()
        .iter()
        .map(|edge| {
            let state = EdgeState {
                edge_id: edge.id.clone(),
                travel_time: network
                    .edge_free_flow_time(&edge.id)
                    .expect("edge links resolve"),
                volume: 0.0,
            };
            (
                edge.id.clone(),
                edge_general_cost(edge, &state, weights, network),
            )
        })
        .collect()
}

/// Congested travel time: `t0 * (1 + a * (volume / capacity)^b)`.
///
/// Monotone non-decreasing in volume; equals free-flow time at zero volume.
pub fn congested_travel_time(
    free_flow_time: f64,
    volume: f64,
    capacity: f64,
    params: &VolumeDelayParams,
) -> f64 {
    debug_assert!(free_flow_time > 0.0 && capacity > 0.0 && volume >= 0.0);
    free_flow_time * (1.0 + params.a * (volume / capacity).powf(params.b))
}
