//! Tour of the bundled 12-zone fixture network: inventory, validation,
//! adjacency and per-class link attributes.
//!
//! ```bash
//! cargo run --example fixture_tour
//! ```

use std::collections::BTreeMap;

use routecog::{fixture_network, validate_network, NodeKind};

fn main() {
    let network = fixture_network();

    println!(
        "fixture: {} zones, {} nodes, {} links, {} edges",
        network.zones().len(),
        network.nodes().len(),
        network.links().len(),
        network.edges().len()
    );

    let mut kinds: BTreeMap<String, usize> = BTreeMap::new();
    for node in network.nodes() {
        let name = match node.kind {
            NodeKind::EdgeNode => "edge-node",
            NodeKind::InnerNode => "inner-node",
            NodeKind::ZoneCentroid => "zone-centroid",
        };
        *kinds.entry(name.to_string()).or_insert(0) += 1;
    }
    println!("node kinds: {kinds:?}");

    // Corridors are identifiable by link id prefix (the part before the
    // last dash); connectors use the conn* prefix.
    let mut corridors: BTreeMap<String, (String, usize)> = BTreeMap::new();
    for link in network.links() {
        let prefix = link.id.rsplit_once('-').map(|(p, _)| p).unwrap_or(&link.id);
        if prefix.starts_with("conn") {
            continue;
        }
        let entry = corridors
            .entry(prefix.to_string())
            .or_insert((link.road_class.to_string(), 0));
        entry.1 += 1;
    }
    println!("corridors (directed links each):");
    for (name, (class, links)) in &corridors {
        println!("  {name:<10} {class:<8} {links} links");
    }

    let diagnostics = validate_network(&network);
    println!("diagnostics: {}", diagnostics.len());

    let hub = "i06";
    println!(
        "outgoing edges at {hub}: {}",
        network.outgoing_edges(hub).join(", ")
    );

    let multi: Vec<&str> = network
        .edges()
        .iter()
        .filter(|e| e.link_ids.len() > 1)
        .map(|e| e.id.as_str())
        .collect();
    println!("multi-link edges (ring runs through non-decision nodes): {multi:?}");
}
