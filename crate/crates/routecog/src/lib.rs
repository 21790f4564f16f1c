//! Mesoscopic route-choice assignment at desk scale.
//!
//! The crate models a priced road network (general cost per routing edge),
//! distributes origin-destination demand over candidate routes with a Logit
//! or Kirchhoff discrete-choice model, lets simulated drivers cache their
//! choices in a behavior feature library, and iterates demand loading against
//! a volume-delay travel-time feedback until average travel cost stabilizes.
//!
//! Start with the runnable examples (`cargo run --example <name>`); each one
//! demonstrates a single capability:
//!
//! - `fixture_tour` — the bundled 12-zone network, validation, adjacency
//! - `choice_probabilities` — utilities, Logit and Kirchhoff distributions
//! - `volume_delay` — the congested travel-time curve
//! - `shortest_routes` — k-shortest loopless route search vs. brute force
//! - `feature_library` — the perceive/retrieve/reason/store cognition cycle
//! - `run_assignment` — the full iterative assignment on the fixture scenario
//! - `compare_cognition` — cognition on vs. off, side by side
//!
//! The same functionality is reachable from the `routecog` binary
//! (`run`, `validate`, `routes`, `choice`, `compare` subcommands).

pub mod assignment;
pub mod choice;
pub mod cli;
pub mod cognition;
pub mod cost;
pub mod network;
pub mod od;
pub mod routing;

pub use assignment::{
    check_convergence, compare_cognition, run_assignment, summarize, update_travel_times,
    weighted_mean_variance, AssignmentError, Averaging, CognitionMode, DemandMode, IterationReport,
    NetworkState, RouteFlow, RunResult, RunSummary, Simulation, SimulationConfig, PACKET_ROSTER,
};
pub use choice::{
    kirchhoff_as_logit, kirchhoff_probabilities, logit_probabilities, sample_route, utilities,
    ChoiceError, ChoiceModelKind, ChoiceParams, ChoiceSet,
};
pub use cognition::{
    perceive, reason, resense, AgeBand, AttributeChanges, CognitionError, DriverPacket,
    EnvironmentState, ExperienceBand, FeatureKey, FeatureLibrary, Gender, LibraryEntry,
    Physiological, RoadCondition, ScoredCandidates, StaticAttributes, TemporaryAttributes, Urgency,
    Weather,
};
pub use cost::{
    congested_travel_time, edge_general_cost, free_flow_edge_costs, link_financial_cost,
    route_general_cost, CostError, CostWeights, EdgeState, VolumeDelayParams,
};
pub use network::{
    fixture_network, load_network, serialize_network, validate_network, Diagnostic, Edge, Link,
    Network, NetworkDocument, NetworkError, Node, NodeKind, RoadClass, Route, Zone,
};
pub use od::{fixture_od, parse_od, write_od, OdError, OdMatrix};
pub use routing::{
    brute_force_routes, k_shortest_routes, sort_routes_by_cost, RouteQuery, RoutingError,
};
