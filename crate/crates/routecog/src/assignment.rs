//! Iterative stochastic assignment with travel-time feedback.
//!
//! One run distributes OD demand over candidate routes (through the
//! cognition cycle when enabled, or by fresh discrete-choice draws when
//! not), loads the chosen routes onto the network, updates travel times
//! with the volume-delay curve, and repeats until the average realized
//! travel cost stabilizes or the iteration budget runs out.
//!
//! Iteration 0 prices routes at free flow, which warm-starts the demand
//! distribution before any congestion feedback. Feedback volumes are
//! blended by the method of successive averages by default (`averaging:
//! successive`), which damps the oscillation a bare fixed-point loop
//! (`averaging: none`) can fall into. A run is fully deterministic given
//! its seed: every packet draws from its own counter-derived substream, so
//! execution order cannot leak into results. Wall-clock route-search time
//! is the one exception, and is reported for trend inspection only.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::choice::{sample_route, ChoiceError, ChoiceModelKind, ChoiceParams};
use crate::cognition::{
    perceive, reason, AgeBand, CognitionError, DriverPacket, EnvironmentState, ExperienceBand,
    FeatureLibrary, Gender, Physiological, RoadCondition, ScoredCandidates, StaticAttributes,
    TemporaryAttributes, Urgency, Weather,
};
use crate::cost::{
    congested_travel_time, edge_general_cost, CostError, CostWeights, EdgeState, VolumeDelayParams,
};
use crate::network::{Network, Route};
use crate::od::{OdError, OdMatrix};
use crate::routing::{k_shortest_routes, RouteQuery, RoutingError};

/// How feedback volumes are blended between iterations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Averaging {
    /// Take the candidate volumes as-is (the literal feedback loop).
    None,
    /// Method of successive averages: `v += (candidate - v) / n`.
    Successive,
}

impl std::str::FromStr for Averaging {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Averaging::None),
            "successive" => Ok(Averaging::Successive),
            other => Err(format!("unknown averaging {other:?}")),
        }
    }
}

/// Demand regime: flat demand as given, or uniformly scaled peak demand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DemandMode {
    Flat,
    Peak,
}

impl std::str::FromStr for DemandMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "flat" => Ok(DemandMode::Flat),
            "peak" => Ok(DemandMode::Peak),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

/// Whether drivers use the behavior feature library.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CognitionMode {
    On,
    Off,
}

impl std::str::FromStr for CognitionMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "on" => Ok(CognitionMode::On),
            "off" => Ok(CognitionMode::Off),
            other => Err(format!("unknown cognition mode {other:?}")),
        }
    }
}

/// Full parameter set of one assignment run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationConfig {
    pub choice: ChoiceParams,
    /// Cost weights keyed by driver class; `"default"` must be present and
    /// covers classes without their own entry.
    pub weights: BTreeMap<String, CostWeights>,
    pub volume_delay: VolumeDelayParams,
    /// Candidate routes per OD pair and driver class.
    pub k_routes: usize,
    /// Feedback work period in seconds. One re-sensing opportunity per
    /// period; the static volume-delay surrogate has no finer clock.
    pub work_period: f64,
    pub max_iterations: usize,
    /// Relative-change convergence threshold on average travel cost.
    pub epsilon: f64,
    pub averaging: Averaging,
    pub mode: DemandMode,
    /// Demand multiplier applied in peak mode.
    pub peak_factor: f64,
    pub cognition: CognitionMode,
    pub seed: u64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        let mut weights = BTreeMap::new();
        weights.insert("default".to_string(), CostWeights::default());
        SimulationConfig {
            choice: ChoiceParams {
                model: ChoiceModelKind::Kirchhoff,
                sensitivity: 3.0,
            },
            weights,
            volume_delay: VolumeDelayParams::default(),
            k_routes: 5,
            work_period: 120.0,
            max_iterations: 100,
            epsilon: 1e-3,
            averaging: Averaging::Successive,
            mode: DemandMode::Flat,
            peak_factor: 1.5,
            cognition: CognitionMode::On,
            seed: 42,
        }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<(), AssignmentError> {
        self.choice
            .validate()
            .map_err(|e| AssignmentError::Config(e.to_string()))?;
        self.volume_delay
            .validate()
            .map_err(|e| AssignmentError::Config(e.to_string()))?;
        if !self.weights.contains_key("default") {
            return Err(AssignmentError::Config(
                "weights must contain a \"default\" driver class".to_string(),
            ));
        }
        for (class, weights) in &self.weights {
            let mut named = weights.clone();
            named.driver_class = class.clone();
            named
                .validate()
                .map_err(|e| AssignmentError::Config(e.to_string()))?;
        }
        if self.k_routes < 1 {
            return Err(AssignmentError::Config(
                "k_routes must be at least 1".into(),
            ));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(AssignmentError::Config("epsilon must be positive".into()));
        }
        if self.max_iterations < 1 {
            return Err(AssignmentError::Config(
                "max_iterations must be at least 1".into(),
            ));
        }
        if !(self.peak_factor >= 1.0 && self.peak_factor.is_finite()) {
            return Err(AssignmentError::Config("peak_factor must be >= 1".into()));
        }
        if !(self.work_period > 0.0 && self.work_period.is_finite()) {
            return Err(AssignmentError::Config(
                "work_period must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Weight set for a driver class, falling back to `"default"`.
    pub fn weights_for(&self, driver_class: &str) -> &CostWeights {
        self.weights
            .get(driver_class)
            .unwrap_or_else(|| &self.weights["default"])
    }
}

/// Per-edge volumes and travel times after some number of iterations.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkState {
    /// Number of volume updates applied so far.
    pub iteration: usize,
    volumes: Vec<f64>,
    travel_times: Vec<f64>,
}

impl NetworkState {
    /// Zero volumes, free-flow travel times.
    pub fn free_flow(network: &Network) -> NetworkState {
        let travel_times = network
            .edges()
            .iter()
            .map(|e| {
                network
                    .edge_free_flow_time(&e.id)
                    .expect("edge links resolve")
            })
            .collect();
        NetworkState {
            iteration: 0,
            volumes: vec![0.0; network.edges().len()],
            travel_times,
        }
    }

    /// Volumes aligned with `network.edges()` order.
    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    /// Travel times aligned with `network.edges()` order.
    pub fn travel_times(&self) -> &[f64] {
        &self.travel_times
    }
}

/// Per-iteration metrics.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationReport {
    pub iteration: usize,
    /// Demand-weighted mean realized route cost over all packets.
    pub average_travel_cost: f64,
    /// Demand-weighted population variance of realized route costs.
    pub cost_variance: f64,
    /// Wall clock spent determining routes: candidate enumeration, feature
    /// library queries and updates, and choice sampling. Trend data only —
    /// excluded from determinism comparisons.
    pub route_search_time: Duration,
    /// Library hits over lookups; 0 when nothing was looked up.
    pub cache_hit_rate: f64,
    pub converged: bool,
}

/// Demand assigned to one route of one OD pair.
#[derive(Clone, Debug, PartialEq)]
pub struct RouteFlow {
    pub origin_zone: String,
    pub dest_zone: String,
    pub route: Route,
    pub demand: f64,
}

/// Outcome of a completed run.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub reports: Vec<IterationReport>,
    /// Route flows of the final iteration, sorted by OD pair and route.
    pub flows: Vec<RouteFlow>,
    pub library: FeatureLibrary,
    pub converged: bool,
}

#[derive(Debug, Error)]
pub enum AssignmentError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Od(#[from] OdError),
    #[error(transparent)]
    Routing(#[from] RoutingError),
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Cognition(#[from] CognitionError),
    #[error(transparent)]
    Choice(#[from] ChoiceError),
}

/// Fixed roster of driver feature combinations; every OD pair with demand
/// is split into one packet per roster slot.
pub const PACKET_ROSTER: [(AgeBand, Gender, ExperienceBand, Urgency, Physiological); 8] = [
    (
        AgeBand::Young,
        Gender::Female,
        ExperienceBand::Novice,
        Urgency::Low,
        Physiological::Normal,
    ),
    (
        AgeBand::Young,
        Gender::Male,
        ExperienceBand::Experienced,
        Urgency::High,
        Physiological::Normal,
    ),
    (
        AgeBand::Middle,
        Gender::Female,
        ExperienceBand::Experienced,
        Urgency::Low,
        Physiological::Normal,
    ),
    (
        AgeBand::Middle,
        Gender::Male,
        ExperienceBand::Novice,
        Urgency::High,
        Physiological::Normal,
    ),
    (
        AgeBand::Senior,
        Gender::Female,
        ExperienceBand::Novice,
        Urgency::High,
        Physiological::Normal,
    ),
    (
        AgeBand::Senior,
        Gender::Male,
        ExperienceBand::Experienced,
        Urgency::Low,
        Physiological::Normal,
    ),
    (
        AgeBand::Middle,
        Gender::Female,
        ExperienceBand::Novice,
        Urgency::Low,
        Physiological::Fatigued,
    ),
    (
        AgeBand::Young,
        Gender::Male,
        ExperienceBand::Experienced,
        Urgency::High,
        Physiological::Fatigued,
    ),
];

/// True iff the last `min(3, len - 1)` consecutive relative changes of the
/// series are all below `epsilon`. Needs at least two entries.
pub fn check_convergence(history: &[f64], epsilon: f64) -> bool {
    if history.len() < 2 {
        return false;
    }
    let pairs = (history.len() - 1).min(3);
    for window in history.windows(2).rev().take(pairs) {
        let (prev, curr) = (window[0], window[1]);
        let relative = if prev != 0.0 {
            (curr - prev).abs() / prev.abs()
        } else if curr == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        if relative.is_nan() || relative >= epsilon {
            return false;
        }
    }
    true
}

/// Demand-weighted mean and population variance. Zero values for an empty
/// set.
pub fn weighted_mean_variance(values: &[f64], weights: &[f64]) -> (f64, f64) {
    assert_eq!(values.len(), weights.len());
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() / total;
    let variance = values
        .iter()
        .zip(weights)
        .map(|(v, w)| w * (v - mean) * (v - mean))
        .sum::<f64>()
        / total;
    (mean, variance)
}

/// Applies one round of volume blending and recomputes travel times.
///
/// Candidate flows are per-edge (aligned with `network.edges()`); link
/// volumes follow from the edges containing each link, and edge travel
/// times are the sum of their links' congested times.
pub fn update_travel_times(
    network: &Network,
    state: &NetworkState,
    candidate_flows: &[f64],
    config: &SimulationConfig,
) -> NetworkState {
    assert_eq!(candidate_flows.len(), state.volumes.len());
    let n = state.iteration + 1;
    let volumes: Vec<f64> = match config.averaging {
        Averaging::None => candidate_flows.to_vec(),
        Averaging::Successive => state
            .volumes
            .iter()
            .zip(candidate_flows)
            .map(|(v, w)| v + (w - v) / n as f64)
            .collect(),
    };

    let mut link_volumes: HashMap<&str, f64> = HashMap::new();
    for (edge, volume) in network.edges().iter().zip(&volumes) {
        for link_id in &edge.link_ids {
            *link_volumes.entry(link_id.as_str()).or_insert(0.0) += volume;
        }
    }
    let travel_times: Vec<f64> = network
        .edges()
        .iter()
        .map(|edge| {
            edge.link_ids
                .iter()
                .map(|link_id| {
                    let link = network.link(link_id).expect("edge links resolve");
                    let volume = link_volumes.get(link_id.as_str()).copied().unwrap_or(0.0);
                    congested_travel_time(
                        link.free_flow_time(),
                        volume,
                        link.capacity,
                        &config.volume_delay,
                    )
                })
                .sum()
        })
        .collect();

    NetworkState {
        iteration: n,
        volumes,
        travel_times,
    }
}

/// Deterministic per-packet random stream, independent of execution order.
fn packet_stream(seed: u64, iteration: usize, packet_id: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut x = seed
        ^ (iteration as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ packet_id.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    // splitmix64 finalizer
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^= x >> 31;
    ChaCha8Rng::seed_from_u64(x)
}

/// A stepwise assignment run over an immutable network and OD matrix.
pub struct Simulation<'a> {
    network: &'a Network,
    config: SimulationConfig,
    packets: Vec<DriverPacket>,
    /// Perceived feature key per packet; keys are pure functions of packet
    /// attributes, which stay fixed within a run.
    packet_keys: Vec<crate::cognition::FeatureKey>,
    library: FeatureLibrary,
    state: NetworkState,
    history: Vec<f64>,
    reports: Vec<IterationReport>,
    last_flows: Vec<RouteFlow>,
    converged: bool,
}

impl<'a> Simulation<'a> {
    pub fn new(
        network: &'a Network,
        od: &OdMatrix,
        config: SimulationConfig,
    ) -> Result<Simulation<'a>, AssignmentError> {
        Simulation::with_library(network, od, config, FeatureLibrary::new())
    }

    /// Starts from a previously exported feature library.
    pub fn with_library(
        network: &'a Network,
        od: &OdMatrix,
        config: SimulationConfig,
        library: FeatureLibrary,
    ) -> Result<Simulation<'a>, AssignmentError> {
        config.validate()?;
        od.cross_check(network)?;
        let packets = build_packets(od, &config);
        let packet_keys = packets.iter().map(perceive).collect();
        let state = NetworkState::free_flow(network);
        Ok(Simulation {
            network,
            config,
            packets,
            packet_keys,
            library,
            state,
            history: Vec::new(),
            reports: Vec::new(),
            last_flows: Vec::new(),
            converged: false,
        })
    }

    pub fn packets(&self) -> &[DriverPacket] {
        &self.packets
    }

    pub fn library(&self) -> &FeatureLibrary {
        &self.library
    }

    pub fn reports(&self) -> &[IterationReport] {
        &self.reports
    }

    pub fn state(&self) -> &NetworkState {
        &self.state
    }

    /// Route flows of the most recent iteration.
    pub fn last_flows(&self) -> &[RouteFlow] {
        &self.last_flows
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn iterations_run(&self) -> usize {
        self.reports.len()
    }

    /// True once the run has converged or exhausted its iteration budget.
    pub fn finished(&self) -> bool {
        self.converged || self.reports.len() >= self.config.max_iterations
    }

    /// Edge general-cost map for one driver class under current times.
    fn cost_map_for(&self, weights: &CostWeights) -> HashMap<String, f64> {
        self.network
            .edges()
            .iter()
            .zip(self.state.travel_times.iter())
            .map(|(edge, &travel_time)| {
                let state = EdgeState {
                    edge_id: edge.id.clone(),
                    travel_time,
                    volume: 0.0,
                };
                (
                    edge.id.clone(),
                    edge_general_cost(edge, &state, weights, self.network),
                )
            })
            .collect()
    }

    /// Runs one iteration and returns its report.
    pub fn step(&mut self) -> Result<IterationReport, AssignmentError> {
        let iteration = self.reports.len();
        let search_timer = Instant::now();

        // Choice phase: route per packet, enumerating candidates lazily per
        // (OD pair, driver class) under the current (pre-loading) costs.
        let mut cost_maps: BTreeMap<String, HashMap<String, f64>> = BTreeMap::new();
        let mut candidate_sets: BTreeMap<(String, String, String), ScoredCandidates> =
            BTreeMap::new();
        let mut lookups = 0u64;
        let mut hits = 0u64;

        for p in 0..self.packets.len() {
            let key = &self.packet_keys[p];

            let route = if self.config.cognition == CognitionMode::On {
                lookups += 1;
                if let Some(entry) = self.library.retrieve(key) {
                    hits += 1;
                    entry.route.clone()
                } else {
                    let candidates = lookup_candidates(
                        &mut candidate_sets,
                        &mut cost_maps,
                        self.network,
                        &self.config,
                        &self.state,
                        &key.origin_zone,
                        &key.temporary.dest_zone,
                        self.packets[p].static_attrs.driver_class(),
                    )?;
                    let mut stream = packet_stream(self.config.seed, iteration, self.packets[p].id);
                    reason(key, candidates, &self.config.choice, &mut stream)?
                }
            } else {
                let candidates = lookup_candidates(
                    &mut candidate_sets,
                    &mut cost_maps,
                    self.network,
                    &self.config,
                    &self.state,
                    &key.origin_zone,
                    &key.temporary.dest_zone,
                    self.packets[p].static_attrs.driver_class(),
                )?;
                let probabilities = self.config.choice.probabilities(candidates.costs())?;
                let mut stream = packet_stream(self.config.seed, iteration, self.packets[p].id);
                let index = sample_route(&probabilities, &mut stream)?;
                candidates.routes()[index].clone()
            };
            self.packets[p].chosen_route = Some(route);
        }
        let mut search_time = search_timer.elapsed();

        // Load the chosen routes and update travel times.
        let edge_pos: HashMap<&str, usize> = self
            .network
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.as_str(), i))
            .collect();
        let mut candidate_flows = vec![0.0; self.network.edges().len()];
        for packet in &self.packets {
            let route = packet.chosen_route.as_ref().expect("route chosen above");
            for edge_id in &route.edge_ids {
                candidate_flows[edge_pos[edge_id.as_str()]] += packet.demand;
            }
        }
        self.state = update_travel_times(self.network, &self.state, &candidate_flows, &self.config);

        // Realized costs under the updated times, per driver class.
        let mut realized_maps: BTreeMap<String, HashMap<String, f64>> = BTreeMap::new();
        let mut realized_costs = Vec::with_capacity(self.packets.len());
        let mut demands = Vec::with_capacity(self.packets.len());
        for packet in &self.packets {
            let class = packet.static_attrs.driver_class();
            if !realized_maps.contains_key(class) {
                let map = self.cost_map_for(self.config.weights_for(class));
                realized_maps.insert(class.to_string(), map);
            }
            let map = &realized_maps[class];
            let route = packet.chosen_route.as_ref().expect("route chosen above");
            let cost = crate::cost::route_general_cost(route, map)?;
            realized_costs.push(cost);
            demands.push(packet.demand);
        }

        // Post-trip evaluation (library updates belong to search time).
        if self.config.cognition == CognitionMode::On {
            let store_timer = Instant::now();
            for ((packet, key), realized) in self
                .packets
                .iter()
                .zip(&self.packet_keys)
                .zip(&realized_costs)
            {
                let route = packet.chosen_route.clone().expect("route chosen");
                self.library
                    .evaluate_and_store(key.clone(), route, *realized);
            }
            search_time += store_timer.elapsed();
        }

        let (average, variance) = weighted_mean_variance(&realized_costs, &demands);
        self.history.push(average);
        self.converged = check_convergence(&self.history, self.config.epsilon);

        self.last_flows = aggregate_flows(&self.packets);

        let report = IterationReport {
            iteration,
            average_travel_cost: average,
            cost_variance: variance,
            route_search_time: search_time,
            cache_hit_rate: if lookups > 0 {
                hits as f64 / lookups as f64
            } else {
                0.0
            },
            converged: self.converged,
        };
        self.reports.push(report.clone());
        Ok(report)
    }

    /// Steps until convergence or the iteration budget is exhausted.
    pub fn run(&mut self) -> Result<(), AssignmentError> {
        while !self.finished() {
            self.step()?;
        }
        Ok(())
    }

    /// Steps through the full iteration budget, ignoring early convergence.
    /// The per-iteration converged flag is still recorded. This is what the
    /// cognition comparison uses, so both runs produce series of equal
    /// length and the route-search-time trend is observable past the point
    /// where the cost series settles.
    pub fn run_to_horizon(&mut self) -> Result<(), AssignmentError> {
        while self.reports.len() < self.config.max_iterations {
            self.step()?;
        }
        Ok(())
    }

    pub fn into_result(self) -> RunResult {
        RunResult {
            reports: self.reports,
            flows: self.last_flows,
            library: self.library,
            converged: self.converged,
        }
    }
}

/// Candidate lookup with per-iteration memoization. Free function so the
/// borrow of the memo maps stays disjoint from the packet list.
#[allow(clippy::too_many_arguments)]
fn lookup_candidates<'m>(
    candidate_sets: &'m mut BTreeMap<(String, String, String), ScoredCandidates>,
    cost_maps: &mut BTreeMap<String, HashMap<String, f64>>,
    network: &Network,
    config: &SimulationConfig,
    state: &NetworkState,
    origin: &str,
    dest: &str,
    class: &str,
) -> Result<&'m ScoredCandidates, AssignmentError> {
    let key = (origin.to_string(), dest.to_string(), class.to_string());
    if !candidate_sets.contains_key(&key) {
        if !cost_maps.contains_key(class) {
            let weights = config.weights_for(class);
            let map: HashMap<String, f64> = network
                .edges()
                .iter()
                .zip(state.travel_times().iter())
                .map(|(edge, &travel_time)| {
                    let edge_state = EdgeState {
                        edge_id: edge.id.clone(),
                        travel_time,
                        volume: 0.0,
                    };
                    (
                        edge.id.clone(),
                        edge_general_cost(edge, &edge_state, weights, network),
                    )
                })
                .collect();
            cost_maps.insert(class.to_string(), map);
        }
        let cost_map = &cost_maps[class];
        let routes = k_shortest_routes(
            network,
            &RouteQuery {
                origin_zone: origin.to_string(),
                dest_zone: dest.to_string(),
                k: config.k_routes,
                cost_map: cost_map.clone(),
            },
        )?;
        let costs: Vec<f64> = routes
            .iter()
            .map(|r| r.edge_ids.iter().map(|e| cost_map[e]).sum())
            .collect();
        let candidates = ScoredCandidates::new(routes, costs)?;
        candidate_sets.insert(key.clone(), candidates);
    }
    Ok(&candidate_sets[&key])
}

fn build_packets(od: &OdMatrix, config: &SimulationConfig) -> Vec<DriverPacket> {
    let factor = match config.mode {
        DemandMode::Flat => 1.0,
        DemandMode::Peak => config.peak_factor,
    };
    let mut packets = Vec::new();
    let mut id = 0u64;
    for (origin, dest, demand) in od.pairs() {
        if demand <= 0.0 {
            continue;
        }
        let scaled = demand * factor;
        let share = scaled / PACKET_ROSTER.len() as f64;
        for (age, gender, experience, urgency, physiological) in PACKET_ROSTER {
            packets.push(DriverPacket {
                id,
                origin_zone: origin.to_string(),
                static_attrs: StaticAttributes {
                    age_band: age,
                    gender,
                    experience_band: experience,
                },
                temporary: TemporaryAttributes {
                    dest_zone: dest.to_string(),
                    urgency,
                    physiological,
                },
                environment: EnvironmentState {
                    weather: Weather::Clear,
                    road_condition: RoadCondition::Normal,
                },
                demand: share,
                chosen_route: None,
            });
            id += 1;
        }
    }
    packets
}

fn aggregate_flows(packets: &[DriverPacket]) -> Vec<RouteFlow> {
    let mut by_route: BTreeMap<(String, String, Vec<String>), f64> = BTreeMap::new();
    for packet in packets {
        let route = packet.chosen_route.as_ref().expect("assigned packet");
        *by_route
            .entry((
                route.origin_zone.clone(),
                route.dest_zone.clone(),
                route.edge_ids.clone(),
            ))
            .or_insert(0.0) += packet.demand;
    }
    by_route
        .into_iter()
        .map(|((origin, dest, edge_ids), demand)| RouteFlow {
            origin_zone: origin.clone(),
            dest_zone: dest.clone(),
            route: Route {
                origin_zone: origin,
                dest_zone: dest,
                edge_ids,
            },
            demand,
        })
        .collect()
}

/// Runs a full assignment and returns the result.
pub fn run_assignment(
    network: &Network,
    od: &OdMatrix,
    config: SimulationConfig,
) -> Result<RunResult, AssignmentError> {
    let mut simulation = Simulation::new(network, od, config)?;
    simulation.run()?;
    Ok(simulation.into_result())
}

/// Condensed view of one run for side-by-side comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub iterations: usize,
    pub converged: bool,
    /// Mean of `average_travel_cost` over all emitted iterations.
    pub mean_avg_cost: f64,
    pub final_avg_cost: f64,
    pub mean_variance: f64,
    pub final_cache_hit_rate: f64,
    pub total_search_ms: f64,
    /// Coefficient of variation of route-search time over the last (up to)
    /// ten iterations.
    pub search_cv_last10: f64,
}

pub fn summarize(result: &RunResult) -> RunSummary {
    let n = result.reports.len().max(1) as f64;
    let mean_avg_cost = result
        .reports
        .iter()
        .map(|r| r.average_travel_cost)
        .sum::<f64>()
        / n;
    let mean_variance = result.reports.iter().map(|r| r.cost_variance).sum::<f64>() / n;
    let search_ms: Vec<f64> = result
        .reports
        .iter()
        .map(|r| r.route_search_time.as_secs_f64() * 1000.0)
        .collect();
    let tail = &search_ms[search_ms.len().saturating_sub(10)..];
    let cv = if tail.is_empty() {
        0.0
    } else {
        let mean = tail.iter().sum::<f64>() / tail.len() as f64;
        if mean == 0.0 {
            0.0
        } else {
            let variance =
                tail.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / tail.len() as f64;
            variance.sqrt() / mean
        }
    };
    RunSummary {
        iterations: result.reports.len(),
        converged: result.converged,
        mean_avg_cost,
        final_avg_cost: result
            .reports
            .last()
            .map(|r| r.average_travel_cost)
            .unwrap_or(0.0),
        mean_variance,
        final_cache_hit_rate: result
            .reports
            .last()
            .map(|r| r.cache_hit_rate)
            .unwrap_or(0.0),
        total_search_ms: search_ms.iter().sum(),
        search_cv_last10: cv,
    }
}

/// Runs the same scenario with cognition on and off (sharing every other
/// parameter, including the seed) and returns both results.
///
/// Both runs step through the full iteration budget so the two series have
/// equal length; early convergence is recorded but does not stop them.
pub fn compare_cognition(
    network: &Network,
    od: &OdMatrix,
    config: &SimulationConfig,
) -> Result<(RunResult, RunResult), AssignmentError> {
    let mut results = Vec::with_capacity(2);
    for mode in [CognitionMode::On, CognitionMode::Off] {
        let mut run_config = config.clone();
        run_config.cognition = mode;
        let mut simulation = Simulation::new(network, od, run_config)?;
        simulation.run_to_horizon()?;
        results.push(simulation.into_result());
    }
    let off = results.pop().expect("two runs");
    let on = results.pop().expect("two runs");
    Ok((on, off))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{load_network, Network};

    fn two_route_network() -> Network {
        // Two zones joined by a fast corridor and a slow corridor.
        let doc = serde_json::json!({
            "nodes": [
                {"id": "ca", "kind": "zone-centroid", "label": "A"},
                {"id": "cb", "kind": "zone-centroid", "label": "B"},
                {"id": "m", "kind": "inner-node", "label": "M"},
                {"id": "n", "kind": "inner-node", "label": "N"}
            ],
            "links": [
                {"id": "out-m", "from_node": "ca", "to_node": "m", "length": 500.0, "lanes": 2,
                 "free_flow_speed": 10.0, "capacity": 2000.0, "cost_rate": 0.0, "supplement1": 0.0,
                 "supplement2": 0.0, "road_quality": 0.0, "road_class": "minor"},
                {"id": "fast", "from_node": "m", "to_node": "cb", "length": 1000.0, "lanes": 2,
                 "free_flow_speed": 20.0, "capacity": 2000.0, "cost_rate": 0.0, "supplement1": 0.0,
                 "supplement2": 0.0, "road_quality": 0.0, "road_class": "major"},
                {"id": "out-n", "from_node": "ca", "to_node": "n", "length": 500.0, "lanes": 2,
                 "free_flow_speed": 10.0, "capacity": 2000.0, "cost_rate": 0.0, "supplement1": 0.0,
                 "supplement2": 0.0, "road_quality": 0.0, "road_class": "minor"},
                {"id": "slow", "from_node": "n", "to_node": "cb", "length": 1000.0, "lanes": 2,
                 "free_flow_speed": 10.0, "capacity": 2000.0, "cost_rate": 0.0, "supplement1": 0.0,
                 "supplement2": 0.0, "road_quality": 0.0, "road_class": "minor"},
                {"id": "back", "from_node": "cb", "to_node": "ca", "length": 1000.0, "lanes": 2,
                 "free_flow_speed": 10.0, "capacity": 2000.0, "cost_rate": 0.0, "supplement1": 0.0,
                 "supplement2": 0.0, "road_quality": 0.0, "road_class": "minor"}
            ],
            "edges": [
                {"id": "out-m", "link_ids": ["out-m"]},
                {"id": "fast", "link_ids": ["fast"]},
                {"id": "out-n", "link_ids": ["out-n"]},
                {"id": "slow", "link_ids": ["slow"]},
                {"id": "back", "link_ids": ["back"]}
            ],
            "zones": [
                {"id": "A", "centroid_node": "ca", "name": "A"},
                {"id": "B", "centroid_node": "cb", "name": "B"}
            ]
        });
        load_network(&doc.to_string()).unwrap()
    }

    fn od_one_pair(demand: f64) -> OdMatrix {
        OdMatrix::new(
            vec!["A".into(), "B".into()],
            vec![vec![0.0, demand], vec![0.0, 0.0]],
        )
        .unwrap()
    }

    #[test]
    fn convergence_criterion_cases() {
        assert!(check_convergence(&[100.0, 100.0], 1e-3));
        assert!(check_convergence(&[100.0, 100.0, 100.0, 100.0], 1e-3));
        assert!(!check_convergence(&[100.0], 1e-3));
        assert!(!check_convergence(&[100.0, 110.0, 121.0, 133.1], 1e-3));
        // The last three relative changes are 1e-4, 1e-5, 1e-6 scale.
        assert!(check_convergence(
            &[100.0, 100.2, 100.21, 100.211, 100.2111],
            1e-3
        ));
        // Zero history (no demand) converges immediately.
        assert!(check_convergence(&[0.0, 0.0], 1e-3));
    }

    #[test]
    fn mean_variance_cases() {
        assert_eq!(weighted_mean_variance(&[50.0], &[10.0]), (50.0, 0.0));
        assert_eq!(
            weighted_mean_variance(&[40.0, 60.0], &[5.0, 5.0]),
            (50.0, 100.0)
        );
        assert_eq!(weighted_mean_variance(&[], &[]), (0.0, 0.0));
    }

    #[test]
    fn msa_first_iteration_copies_candidates() {
        let network = two_route_network();
        let state = NetworkState::free_flow(&network);
        let candidate = vec![10.0, 20.0, 0.0, 5.0, 0.0];
        let config = SimulationConfig::default();
        let next = update_travel_times(&network, &state, &candidate, &config);
        assert_eq!(next.volumes(), candidate.as_slice());
        assert_eq!(next.iteration, 1);
    }

    #[test]
    fn msa_converges_to_constant_candidates() {
        let network = two_route_network();
        let mut state = NetworkState::free_flow(&network);
        let candidate = vec![100.0, 100.0, 40.0, 40.0, 0.0];
        let config = SimulationConfig::default();
        for _ in 0..200 {
            state = update_travel_times(&network, &state, &candidate, &config);
        }
        for (v, w) in state.volumes().iter().zip(&candidate) {
            assert!((v - w).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_flows_mean_free_flow_times() {
        let network = two_route_network();
        let state = NetworkState::free_flow(&network);
        let next = update_travel_times(
            &network,
            &state,
            &vec![0.0; network.edges().len()],
            &SimulationConfig::default(),
        );
        assert_eq!(next.travel_times(), state.travel_times());
    }

    #[test]
    fn all_zero_od_converges_after_iteration_1() {
        let network = two_route_network();
        let od = od_one_pair(0.0);
        let result = run_assignment(&network, &od, SimulationConfig::default()).unwrap();
        assert!(result.converged);
        assert_eq!(result.reports.len(), 2);
        assert!(result.reports.iter().all(|r| r.average_travel_cost == 0.0));
        // Zero lookups: the cache hit rate is 0 by convention.
        assert!(result.reports.iter().all(|r| r.cache_hit_rate == 0.0));
        assert!(result.flows.is_empty());
    }

    #[test]
    fn single_route_demand_converges_quickly() {
        let network = two_route_network();
        // Remove the slow corridor so exactly one route remains.
        let mut doc = network.to_document();
        doc.links.retain(|l| l.id != "slow" && l.id != "out-n");
        doc.edges.retain(|e| e.id != "slow" && e.id != "out-n");
        let single = Network::assemble(doc);
        assert!(single.validate().is_empty());

        let od = od_one_pair(800.0);
        let result = run_assignment(&single, &od, SimulationConfig::default()).unwrap();
        assert!(result.converged);
        assert!(result.reports.len() <= 3);
        assert_eq!(result.flows.len(), 1);
        assert_eq!(result.flows[0].demand, 800.0);
    }

    #[test]
    fn packet_set_carries_exact_demand() {
        let od = od_one_pair(800.0);
        let config = SimulationConfig::default();
        let packets = build_packets(&od, &config);
        assert_eq!(packets.len(), 8);
        assert_eq!(packets.iter().map(|p| p.demand).sum::<f64>(), 800.0);
        // Roster entries are pairwise distinct feature sets.
        for i in 0..packets.len() {
            for j in 0..i {
                assert_ne!(perceive(&packets[i]), perceive(&packets[j]));
            }
        }
    }

    #[test]
    fn peak_mode_scales_demand() {
        let od = od_one_pair(800.0);
        let config = SimulationConfig {
            mode: DemandMode::Peak,
            ..SimulationConfig::default()
        };
        let packets = build_packets(&od, &config);
        assert_eq!(packets.iter().map(|p| p.demand).sum::<f64>(), 1200.0);
    }

    #[test]
    fn flow_conservation_every_iteration() {
        let network = two_route_network();
        let od = od_one_pair(750.0);
        let mut simulation = Simulation::new(&network, &od, SimulationConfig::default()).unwrap();
        for _ in 0..5 {
            simulation.step().unwrap();
            let assigned: f64 = simulation
                .last_flows()
                .iter()
                .filter(|f| f.origin_zone == "A" && f.dest_zone == "B")
                .map(|f| f.demand)
                .sum();
            assert_eq!(assigned, 750.0);
        }
    }

    #[test]
    fn equal_cost_routes_split_roughly_evenly_without_cognition() {
        // Make both corridors identical so the two routes cost the same.
        let network = two_route_network();
        let mut doc = network.to_document();
        for link in &mut doc.links {
            if link.id == "fast" {
                link.free_flow_speed = 10.0;
            }
        }
        let symmetric = Network::assemble(doc);
        let od = od_one_pair(8000.0);
        let config = SimulationConfig {
            cognition: CognitionMode::Off,
            max_iterations: 1,
            ..SimulationConfig::default()
        };
        let result = run_assignment(&symmetric, &od, config).unwrap();
        let fast_share: f64 = result
            .flows
            .iter()
            .filter(|f| f.route.edge_ids.contains(&"fast".to_string()))
            .map(|f| f.demand)
            .sum();
        let share = fast_share / 8000.0;
        assert!((share - 0.5).abs() < 0.2, "share {share}");
        // Frozen draw under seed 42: exactly 4 of the 8 packets.
        assert_eq!(fast_share, 4000.0);
    }

    #[test]
    fn stationary_cognition_freezes_flows_and_hits() {
        let network = two_route_network();
        let od = od_one_pair(900.0);
        let mut simulation = Simulation::new(&network, &od, SimulationConfig::default()).unwrap();
        let first = simulation.step().unwrap();
        assert_eq!(first.cache_hit_rate, 0.0);
        let flows_after_first: Vec<RouteFlow> = simulation.last_flows().to_vec();
        for _ in 0..4 {
            let report = simulation.step().unwrap();
            assert_eq!(report.cache_hit_rate, 1.0);
            assert_eq!(simulation.last_flows(), flows_after_first.as_slice());
        }
    }

    #[test]
    fn cognition_off_reports_zero_hit_rate() {
        let network = two_route_network();
        let od = od_one_pair(100.0);
        let config = SimulationConfig {
            cognition: CognitionMode::Off,
            max_iterations: 3,
            ..SimulationConfig::default()
        };
        let result = run_assignment(&network, &od, config).unwrap();
        assert!(result.reports.iter().all(|r| r.cache_hit_rate == 0.0));
        assert!(result.library.is_empty());
    }

    #[test]
    fn identical_seeds_reproduce_reports_and_flows() {
        let network = two_route_network();
        let od = od_one_pair(640.0);
        let config = SimulationConfig {
            cognition: CognitionMode::Off,
            max_iterations: 6,
            ..SimulationConfig::default()
        };
        let a = run_assignment(&network, &od, config.clone()).unwrap();
        let b = run_assignment(&network, &od, config).unwrap();
        assert_eq!(a.flows, b.flows);
        for (ra, rb) in a.reports.iter().zip(&b.reports) {
            assert_eq!(ra.average_travel_cost, rb.average_travel_cost);
            assert_eq!(ra.cost_variance, rb.cost_variance);
            assert_eq!(ra.cache_hit_rate, rb.cache_hit_rate);
            assert_eq!(ra.converged, rb.converged);
        }
    }

    #[test]
    fn library_scores_never_increase() {
        let network = two_route_network();
        let od = od_one_pair(1800.0);
        let mut simulation = Simulation::new(&network, &od, SimulationConfig::default()).unwrap();
        let mut best: BTreeMap<String, f64> = BTreeMap::new();
        for _ in 0..6 {
            simulation.step().unwrap();
            for (key, entry) in simulation.library().iter() {
                let canonical = key.canonical_string();
                if let Some(previous) = best.get(&canonical) {
                    assert!(entry.score <= *previous);
                }
                best.insert(canonical, entry.score);
            }
        }
    }

    #[test]
    fn unreachable_positive_demand_is_an_error() {
        let network = two_route_network();
        let mut doc = network.to_document();
        doc.links.retain(|l| l.id != "back");
        doc.edges.retain(|e| e.id != "back");
        let one_way = Network::assemble(doc);
        // B -> A no longer exists; demand on it must fail.
        let od = OdMatrix::new(
            vec!["A".into(), "B".into()],
            vec![vec![0.0, 10.0], vec![10.0, 0.0]],
        )
        .unwrap();
        let err = run_assignment(&one_way, &od, SimulationConfig::default()).unwrap_err();
        assert!(matches!(
            err,
            AssignmentError::Routing(RoutingError::NoRoute { .. })
        ));
    }

    #[test]
    fn config_validation_rejects_missing_default_weights() {
        let mut config = SimulationConfig::default();
        config.weights.clear();
        let network = two_route_network();
        let od = od_one_pair(1.0);
        assert!(matches!(
            Simulation::new(&network, &od, config),
            Err(AssignmentError::Config(_))
        ));
    }
}
