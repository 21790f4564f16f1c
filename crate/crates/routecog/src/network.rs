//! Road network model: zones, nodes, links and routing edges.
//!
//! A `Link` is a physical road segment carrying all priced attributes; an
//! `Edge` is a routing-graph unit composed of one or more consecutive links.
//! Zones are trip sources/sinks, each anchored to a dedicated centroid node.
//! Networks are immutable after [`load_network`]; all operations that follow
//! (costing, routing, assignment) only read them.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Role of a node in the network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    #[serde(rename = "edge-node")]
    EdgeNode,
    #[serde(rename = "inner-node")]
    InnerNode,
    #[serde(rename = "zone-centroid")]
    ZoneCentroid,
}

/// Functional class of a road link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoadClass {
    Express,
    Major,
    Minor,
    Slip,
}

impl fmt::Display for RoadClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RoadClass::Express => "express",
            RoadClass::Major => "major",
            RoadClass::Minor => "minor",
            RoadClass::Slip => "slip",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    pub label: String,
}

/// A physical road segment with its priced attributes.
///
/// Lengths are meters, speeds meters/second, capacities vehicles/hour.
/// `cost_rate` is currency per meter; `supplement1` is a per-link surcharge
/// that is part of the financial link cost, while `supplement2` is added to
/// the general cost unweighted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Link {
    pub id: String,
    pub from_node: String,
    pub to_node: String,
    pub length: f64,
    pub lanes: u32,
    pub free_flow_speed: f64,
    pub capacity: f64,
    pub cost_rate: f64,
    pub supplement1: f64,
    pub supplement2: f64,
    pub road_quality: f64,
    pub road_class: RoadClass,
}

impl Link {
    /// Traversal time at free-flow speed, in seconds.
    pub fn free_flow_time(&self) -> f64 {
        self.length / self.free_flow_speed
    }
}

/// A routing-graph unit: an ordered run of connected links.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub id: String,
    pub link_ids: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Zone {
    pub id: String,
    pub centroid_node: String,
    pub name: String,
}

/// An ordered edge sequence between an origin and a destination zone.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Route {
    pub origin_zone: String,
    pub dest_zone: String,
    pub edge_ids: Vec<String>,
}

/// The raw network document, as read from or written to JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub nodes: Vec<Node>,
    pub links: Vec<Link>,
    pub edges: Vec<Edge>,
    pub zones: Vec<Zone>,
}

/// A single validation finding: the entity it concerns and the violated rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub entity: String,
    pub rule: String,
}

impl Diagnostic {
    fn new(entity: impl Into<String>, rule: impl Into<String>) -> Self {
        Diagnostic {
            entity: entity.into(),
            rule: rule.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.entity, self.rule)
    }
}

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("network document: {0}")]
    Schema(String),
    #[error("invalid network:\n{}", format_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| format!("  - {d}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// A validated, immutable road network with derived lookup structures.
#[derive(Clone, Debug)]
pub struct Network {
    nodes: Vec<Node>,
    links: Vec<Link>,
    edges: Vec<Edge>,
    zones: Vec<Zone>,
    node_index: HashMap<String, usize>,
    link_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    zone_index: HashMap<String, usize>,
    /// node id -> outgoing edge ids, sorted.
    adjacency: BTreeMap<String, Vec<String>>,
    /// per edge (by position): (from node, to node), when derivable.
    edge_endpoints: Vec<Option<(String, String)>>,
}

impl Network {
    /// Assembles a network from a document without validating invariants.
    ///
    /// Collections are sorted by id and the adjacency map is derived. Use
    /// [`Network::validate`] to obtain diagnostics; [`load_network`] combines
    /// both and rejects invalid documents.
    pub fn assemble(doc: NetworkDocument) -> Network {
        let NetworkDocument {
            mut nodes,
            mut links,
            mut edges,
            mut zones,
        } = doc;
        nodes.sort_by(|a, b| a.id.cmp(&b.id));
        links.sort_by(|a, b| a.id.cmp(&b.id));
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        zones.sort_by(|a, b| a.id.cmp(&b.id));

        let node_index = index_by_id(nodes.iter().map(|n| n.id.clone()));
        let link_index = index_by_id(links.iter().map(|l| l.id.clone()));
        let edge_index = index_by_id(edges.iter().map(|e| e.id.clone()));
        let zone_index = index_by_id(zones.iter().map(|z| z.id.clone()));

        let edge_endpoints: Vec<Option<(String, String)>> = edges
            .iter()
            .map(|e| {
                let first = e.link_ids.first().and_then(|id| link_index.get(id));
                let last = e.link_ids.last().and_then(|id| link_index.get(id));
                match (first, last) {
                    (Some(&f), Some(&l)) => {
                        Some((links[f].from_node.clone(), links[l].to_node.clone()))
                    }
                    _ => None,
                }
            })
            .collect();

        let mut adjacency: BTreeMap<String, Vec<String>> =
            nodes.iter().map(|n| (n.id.clone(), Vec::new())).collect();
        for (edge, endpoints) in edges.iter().zip(edge_endpoints.iter()) {
            if let Some((from, _)) = endpoints {
                if let Some(out) = adjacency.get_mut(from) {
                    out.push(edge.id.clone());
                }
            }
        }
        for out in adjacency.values_mut() {
            out.sort();
        }

        Network {
            nodes,
            links,
            edges,
            zones,
            node_index,
            link_index,
            edge_index,
            zone_index,
            adjacency,
            edge_endpoints,
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn zones(&self) -> &[Zone] {
        &self.zones
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.node_index.get(id).map(|&i| &self.nodes[i])
    }

    pub fn link(&self, id: &str) -> Option<&Link> {
        self.link_index.get(id).map(|&i| &self.links[i])
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edge_index.get(id).map(|&i| &self.edges[i])
    }

    pub fn zone(&self, id: &str) -> Option<&Zone> {
        self.zone_index.get(id).map(|&i| &self.zones[i])
    }

    /// Outgoing edge ids of a node, sorted by id.
    pub fn outgoing_edges(&self, node_id: &str) -> &[String] {
        self.adjacency
            .get(node_id)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    /// The derived adjacency map (node id -> sorted outgoing edge ids).
    pub fn adjacency(&self) -> &BTreeMap<String, Vec<String>> {
        &self.adjacency
    }

    /// Start node of an edge (from-node of its first link).
    pub fn edge_from(&self, edge_id: &str) -> Option<&str> {
        let idx = *self.edge_index.get(edge_id)?;
        self.edge_endpoints[idx]
            .as_ref()
            .map(|(from, _)| from.as_str())
    }

    /// End node of an edge (to-node of its last link).
    pub fn edge_to(&self, edge_id: &str) -> Option<&str> {
        let idx = *self.edge_index.get(edge_id)?;
        self.edge_endpoints[idx].as_ref().map(|(_, to)| to.as_str())
    }

    /// Sum of link free-flow traversal times over an edge, in seconds.
    pub fn edge_free_flow_time(&self, edge_id: &str) -> Option<f64> {
        let edge = self.edge(edge_id)?;
        let mut total = 0.0;
        for link_id in &edge.link_ids {
            total += self.link(link_id)?.free_flow_time();
        }
        Some(total)
    }

    /// Full node sequence traversed by an edge, including interior link nodes.
    pub fn edge_node_sequence(&self, edge_id: &str) -> Option<Vec<&str>> {
        let edge = self.edge(edge_id)?;
        let mut seq = Vec::with_capacity(edge.link_ids.len() + 1);
        for (i, link_id) in edge.link_ids.iter().enumerate() {
            let link = self.link(link_id)?;
            if i == 0 {
                seq.push(link.from_node.as_str());
            }
            seq.push(link.to_node.as_str());
        }
        Some(seq)
    }

    /// Full node sequence of a route, including interior link nodes.
    ///
    /// Returns `None` if an edge is unknown or consecutive edges do not meet.
    pub fn route_node_sequence(&self, route: &Route) -> Option<Vec<String>> {
        let mut seq: Vec<String> = Vec::new();
        for edge_id in &route.edge_ids {
            let part = self.edge_node_sequence(edge_id)?;
            if let Some(last) = seq.last() {
                if last != part[0] {
                    return None;
                }
                seq.extend(part[1..].iter().map(|s| s.to_string()));
            } else {
                seq.extend(part.iter().map(|s| s.to_string()));
            }
        }
        Some(seq)
    }

    /// Checks that a route runs centroid-to-centroid between its zones and
    /// visits no node twice.
    pub fn is_valid_route(&self, route: &Route) -> bool {
        let (Some(origin), Some(dest)) =
            (self.zone(&route.origin_zone), self.zone(&route.dest_zone))
        else {
            return false;
        };
        if route.edge_ids.is_empty() {
            return false;
        }
        let Some(seq) = self.route_node_sequence(route) else {
            return false;
        };
        if seq.first().map(String::as_str) != Some(origin.centroid_node.as_str()) {
            return false;
        }
        if seq.last().map(String::as_str) != Some(dest.centroid_node.as_str()) {
            return false;
        }
        let unique: HashSet<&String> = seq.iter().collect();
        unique.len() == seq.len()
    }

    /// Rebuilds the plain document form (collections stay sorted by id).
    pub fn to_document(&self) -> NetworkDocument {
        NetworkDocument {
            nodes: self.nodes.clone(),
            links: self.links.clone(),
            edges: self.edges.clone(),
            zones: self.zones.clone(),
        }
    }

    /// Runs all invariant checks and returns one diagnostic per violation.
    ///
    /// An empty list means the network is valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diags = Vec::new();

        check_unique_ids(&mut diags, "node", self.nodes.iter().map(|n| &n.id));
        check_unique_ids(&mut diags, "link", self.links.iter().map(|l| &l.id));
        check_unique_ids(&mut diags, "edge", self.edges.iter().map(|e| &e.id));
        check_unique_ids(&mut diags, "zone", self.zones.iter().map(|z| &z.id));

        if self.zones.len() < 2 {
            diags.push(Diagnostic::new("network", "at least 2 zones required"));
        }

        for link in &self.links {
            let entity = format!("link {}", link.id);
            if link.from_node == link.to_node {
                diags.push(Diagnostic::new(&entity, "from_node equals to_node"));
            }
            for node_id in [&link.from_node, &link.to_node] {
                if self.node(node_id).is_none() {
                    diags.push(Diagnostic::new(
                        &entity,
                        format!("dangling reference to node {node_id}"),
                    ));
                }
            }
            if !(link.length > 0.0 && link.length.is_finite()) {
                diags.push(Diagnostic::new(&entity, "length must be positive"));
            }
            if link.lanes < 1 {
                diags.push(Diagnostic::new(&entity, "lanes must be at least 1"));
            }
            if !(link.free_flow_speed > 0.0 && link.free_flow_speed.is_finite()) {
                diags.push(Diagnostic::new(&entity, "free_flow_speed must be positive"));
            }
            if !(link.capacity > 0.0 && link.capacity.is_finite()) {
                diags.push(Diagnostic::new(&entity, "capacity must be positive"));
            }
            for (name, value) in [
                ("cost_rate", link.cost_rate),
                ("supplement1", link.supplement1),
                ("supplement2", link.supplement2),
                ("road_quality", link.road_quality),
            ] {
                if !(value >= 0.0 && value.is_finite()) {
                    diags.push(Diagnostic::new(
                        &entity,
                        format!("{name} must be non-negative"),
                    ));
                }
            }
        }

        for edge in &self.edges {
            let entity = format!("edge {}", edge.id);
            if edge.link_ids.is_empty() {
                diags.push(Diagnostic::new(&entity, "link_ids must be non-empty"));
                continue;
            }
            let mut seen = HashSet::new();
            for link_id in &edge.link_ids {
                if self.link(link_id).is_none() {
                    diags.push(Diagnostic::new(
                        &entity,
                        format!("dangling reference to link {link_id}"),
                    ));
                }
                if !seen.insert(link_id) {
                    diags.push(Diagnostic::new(
                        &entity,
                        format!("link {link_id} appears more than once"),
                    ));
                }
            }
            for pair in edge.link_ids.windows(2) {
                if let (Some(a), Some(b)) = (self.link(&pair[0]), self.link(&pair[1])) {
                    if a.to_node != b.from_node {
                        diags.push(Diagnostic::new(
                            &entity,
                            format!("links {} and {} are not consecutive", pair[0], pair[1]),
                        ));
                    }
                }
            }
        }

        let mut centroid_refs: HashMap<&str, u32> = HashMap::new();
        for zone in &self.zones {
            let entity = format!("zone {}", zone.id);
            match self.node(&zone.centroid_node) {
                None => diags.push(Diagnostic::new(
                    &entity,
                    format!("dangling reference to node {}", zone.centroid_node),
                )),
                Some(node) => {
                    if node.kind != NodeKind::ZoneCentroid {
                        diags.push(Diagnostic::new(
                            &entity,
                            format!("centroid node {} is not a zone-centroid", node.id),
                        ));
                    }
                    *centroid_refs.entry(node.id.as_str()).or_insert(0) += 1;
                }
            }
        }
        for node in &self.nodes {
            if node.kind == NodeKind::ZoneCentroid {
                let refs = centroid_refs.get(node.id.as_str()).copied().unwrap_or(0);
                if refs != 1 {
                    diags.push(Diagnostic::new(
                        format!("node {}", node.id),
                        format!("zone-centroid referenced by {refs} zones, expected 1"),
                    ));
                }
            }
        }

        // Strong connectivity over zone centroids, but only when the graph
        // structure itself is sound; reachability over a broken edge list
        // would produce noise diagnostics.
        if diags.is_empty() {
            for origin in &self.zones {
                let reached = self.reachable_from(&origin.centroid_node);
                for dest in &self.zones {
                    if origin.id != dest.id && !reached.contains(dest.centroid_node.as_str()) {
                        diags.push(Diagnostic::new(
                            "network",
                            format!("zone {} is unreachable from zone {}", dest.id, origin.id),
                        ));
                    }
                }
            }
        }

        diags
    }

    fn reachable_from(&self, start: &str) -> HashSet<&str> {
        let mut reached: HashSet<&str> = HashSet::new();
        let mut queue = VecDeque::new();
        if let Some(node) = self.node(start) {
            reached.insert(node.id.as_str());
            queue.push_back(node.id.as_str());
        }
        while let Some(node_id) = queue.pop_front() {
            for edge_id in self.outgoing_edges(node_id) {
                if let Some(to) = self.edge_to(edge_id) {
                    if reached.insert(to) {
                        queue.push_back(to);
                    }
                }
            }
        }
        reached
    }
}

fn index_by_id(ids: impl Iterator<Item = String>) -> HashMap<String, usize> {
    // On duplicate ids the first occurrence wins; validate() reports them.
    let mut map = HashMap::new();
    for (i, id) in ids.enumerate() {
        map.entry(id).or_insert(i);
    }
    map
}

fn check_unique_ids<'a>(
    diags: &mut Vec<Diagnostic>,
    kind: &str,
    ids: impl Iterator<Item = &'a String>,
) {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            diags.push(Diagnostic::new(
                format!("{kind} {id}"),
                "duplicate id".to_string(),
            ));
        }
    }
}

/// Parses and validates a network document.
pub fn load_network(source: &str) -> Result<Network, NetworkError> {
    let doc: NetworkDocument =
        serde_json::from_str(source).map_err(|e| NetworkError::Schema(e.to_string()))?;
    let network = Network::assemble(doc);
    let diags = network.validate();
    if diags.is_empty() {
        Ok(network)
    } else {
        Err(NetworkError::Invalid(diags))
    }
}

/// Diagnostics for an already assembled network; empty iff valid.
pub fn validate_network(network: &Network) -> Vec<Diagnostic> {
    network.validate()
}

/// Canonical serialized form: collections sorted by id, fixed key order,
/// two-space indentation, trailing newline. Byte-stable under round-trips.
pub fn serialize_network(network: &Network) -> String {
    let doc = network.to_document();
    let mut text = serde_json::to_string_pretty(&doc).expect("network document serializes");
    text.push('\n');
    text
}

/// The bundled 12-zone fixture network.
///
/// The corridor inventory follows the abstract network this model was
/// exercised on: three express corridors at 5 lanes per direction (a ring
/// plus two arterials), one major road at 4, two minor roads at 3 and one
/// slip road at 2, all bidirectional, plus a short connector pair between
/// each zone centroid and its access junction. The exact topology (a 4x3
/// zone grid inside a 12-node ring) is this crate's choice and is fixed by
/// the bundled document; see `data/fixture_network.json`.
pub fn fixture_network() -> Network {
    load_network(FIXTURE_NETWORK_JSON).expect("bundled fixture network is valid")
}

/// Raw canonical JSON of the bundled fixture network.
pub const FIXTURE_NETWORK_JSON: &str = include_str!("../data/fixture_network.json");

#[cfg(test)]
mod tests {
    use super::*;

    fn two_zone_doc() -> NetworkDocument {
        let nodes = vec![
            Node {
                id: "a".into(),
                kind: NodeKind::InnerNode,
                label: "A".into(),
            },
            Node {
                id: "b".into(),
                kind: NodeKind::InnerNode,
                label: "B".into(),
            },
            Node {
                id: "ca".into(),
                kind: NodeKind::ZoneCentroid,
                label: "CA".into(),
            },
            Node {
                id: "cb".into(),
                kind: NodeKind::ZoneCentroid,
                label: "CB".into(),
            },
        ];
        let mk_link = |id: &str, from: &str, to: &str| Link {
            id: id.into(),
            from_node: from.into(),
            to_node: to.into(),
            length: 1000.0,
            lanes: 2,
            free_flow_speed: 10.0,
            capacity: 1800.0,
            cost_rate: 0.0,
            supplement1: 0.0,
            supplement2: 0.0,
            road_quality: 0.0,
            road_class: RoadClass::Minor,
        };
        let links = vec![
            mk_link("l-ab", "a", "b"),
            mk_link("l-ba", "b", "a"),
            mk_link("l-ca-a", "ca", "a"),
            mk_link("l-a-ca", "a", "ca"),
            mk_link("l-cb-b", "cb", "b"),
            mk_link("l-b-cb", "b", "cb"),
        ];
        let edges = links
            .iter()
            .map(|l| Edge {
                id: format!("e-{}", l.id),
                link_ids: vec![l.id.clone()],
            })
            .collect();
        let zones = vec![
            Zone {
                id: "Z1".into(),
                centroid_node: "ca".into(),
                name: "Zone 1".into(),
            },
            Zone {
                id: "Z2".into(),
                centroid_node: "cb".into(),
                name: "Zone 2".into(),
            },
        ];
        NetworkDocument {
            nodes,
            links,
            edges,
            zones,
        }
    }

    #[test]
    fn two_zone_network_is_valid() {
        let network = Network::assemble(two_zone_doc());
        assert!(network.validate().is_empty());
    }

    #[test]
    fn single_zone_is_rejected() {
        let mut doc = two_zone_doc();
        doc.zones.truncate(1);
        let err = load_network(&serde_json::to_string(&doc).unwrap()).unwrap_err();
        match err {
            NetworkError::Invalid(diags) => {
                assert!(diags.iter().any(|d| d.rule.contains("at least 2 zones")));
            }
            other => panic!("expected Invalid, got {other:?}"),
        }
    }

    #[test]
    fn dangling_node_reference_is_reported() {
        let mut doc = two_zone_doc();
        doc.links[0].from_node = "missing".into();
        let network = Network::assemble(doc);
        let diags = network.validate();
        assert!(diags
            .iter()
            .any(|d| d.rule.contains("dangling reference to node missing")));
    }

    #[test]
    fn unknown_field_is_a_schema_error() {
        let mut value: serde_json::Value = serde_json::to_value(two_zone_doc()).unwrap();
        value["nodes"][0]["extra"] = serde_json::json!(1);
        let err = load_network(&value.to_string()).unwrap_err();
        match err {
            NetworkError::Schema(msg) => assert!(msg.contains("extra"), "message: {msg}"),
            other => panic!("expected Schema, got {other:?}"),
        }
    }

    #[test]
    fn disconnected_edge_links_are_reported() {
        let mut doc = two_zone_doc();
        doc.edges[0] = Edge {
            id: "broken".into(),
            link_ids: vec!["l-ab".into(), "l-ab".into()],
        };
        let network = Network::assemble(doc);
        let diags = network.validate();
        assert!(diags
            .iter()
            .any(|d| d.entity == "edge broken" && d.rule.contains("not consecutive")));
        assert!(diags
            .iter()
            .any(|d| d.entity == "edge broken" && d.rule.contains("more than once")));
    }

    #[test]
    fn unreachable_zone_pair_is_named() {
        let mut doc = two_zone_doc();
        // Drop the only edge into Z2's centroid.
        doc.edges.retain(|e| e.id != "e-l-b-cb");
        doc.links.retain(|l| l.id != "l-b-cb");
        let network = Network::assemble(doc);
        let diags = network.validate();
        assert!(diags
            .iter()
            .any(|d| d.rule.contains("Z2 is unreachable from zone Z1")));
    }

    #[test]
    fn adjacency_matches_edge_scan() {
        let network = Network::assemble(two_zone_doc());
        for node in network.nodes() {
            let mut expect: Vec<String> = network
                .edges()
                .iter()
                .filter(|e| network.edge_from(&e.id) == Some(node.id.as_str()))
                .map(|e| e.id.clone())
                .collect();
            expect.sort();
            assert_eq!(network.outgoing_edges(&node.id), expect.as_slice());
        }
    }

    #[test]
    fn route_validity_checks_loops_and_endpoints() {
        let network = Network::assemble(two_zone_doc());
        let good = Route {
            origin_zone: "Z1".into(),
            dest_zone: "Z2".into(),
            edge_ids: vec!["e-l-ca-a".into(), "e-l-ab".into(), "e-l-b-cb".into()],
        };
        assert!(network.is_valid_route(&good));

        let disconnected = Route {
            origin_zone: "Z1".into(),
            dest_zone: "Z2".into(),
            edge_ids: vec!["e-l-ca-a".into(), "e-l-b-cb".into()],
        };
        assert!(!network.is_valid_route(&disconnected));

        let looping = Route {
            origin_zone: "Z1".into(),
            dest_zone: "Z2".into(),
            edge_ids: vec![
                "e-l-ca-a".into(),
                "e-l-ab".into(),
                "e-l-ba".into(),
                "e-l-ab".into(),
                "e-l-b-cb".into(),
            ],
        };
        assert!(!network.is_valid_route(&looping));
    }

    #[test]
    fn load_after_serialize_is_identity() {
        let network = Network::assemble(two_zone_doc());
        let text = serialize_network(&network);
        let reloaded = load_network(&text).unwrap();
        assert_eq!(network.to_document(), reloaded.to_document());
        // A second pass is byte-stable.
        assert_eq!(serialize_network(&reloaded), text);
    }
}
