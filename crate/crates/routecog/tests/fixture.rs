//! Properties of the bundled 12-zone fixture network and demand table.

use std::collections::BTreeMap;

use routecog::{
    brute_force_routes, fixture_network, fixture_od, load_network, validate_network, NodeKind,
    RoadClass,
};

#[test]
fn fixture_loads_with_expected_inventory() {
    let network = load_network(routecog::network::FIXTURE_NETWORK_JSON).unwrap();
    assert_eq!(network.zones().len(), 12);
    let non_centroid = network
        .nodes()
        .iter()
        .filter(|n| n.kind != NodeKind::ZoneCentroid)
        .count();
    assert_eq!(non_centroid, 24);
    assert_eq!(
        network
            .nodes()
            .iter()
            .filter(|n| n.kind == NodeKind::EdgeNode)
            .count(),
        12
    );
    assert_eq!(
        network
            .nodes()
            .iter()
            .filter(|n| n.kind == NodeKind::InnerNode)
            .count(),
        12
    );

    let expected: Vec<String> = (1..=12).map(|k| format!("Z{k}")).collect();
    let mut zone_ids: Vec<String> = network.zones().iter().map(|z| z.id.clone()).collect();
    zone_ids.sort_by_key(|id| id[1..].parse::<u32>().unwrap());
    assert_eq!(zone_ids, expected);
}

#[test]
fn fixture_is_valid() {
    assert!(validate_network(&fixture_network()).is_empty());
}

#[test]
fn fixture_corridor_inventory_matches_road_classes() {
    let network = fixture_network();
    // Corridor name = link id prefix before the segment suffix; zone
    // connectors (conn*) are access ramps, not corridors.
    let mut corridors: BTreeMap<String, RoadClass> = BTreeMap::new();
    for link in network.links() {
        let prefix = link.id.rsplit_once('-').map(|(p, _)| p).unwrap_or(&link.id);
        if prefix.starts_with("conn") {
            continue;
        }
        let class = *corridors
            .entry(prefix.to_string())
            .or_insert(link.road_class);
        assert_eq!(class, link.road_class, "corridor {prefix} mixes classes");
    }
    let mut counts: BTreeMap<RoadClass, usize> = BTreeMap::new();
    for class in corridors.values() {
        *counts.entry(*class).or_insert(0) += 1;
    }
    assert_eq!(counts[&RoadClass::Express], 3);
    assert_eq!(counts[&RoadClass::Major], 1);
    assert_eq!(counts[&RoadClass::Minor], 2);
    assert_eq!(counts[&RoadClass::Slip], 1);

    // Lanes per direction by class.
    for link in network.links() {
        let prefix = link.id.rsplit_once('-').map(|(p, _)| p).unwrap_or(&link.id);
        if prefix.starts_with("conn") {
            continue;
        }
        let lanes = match link.road_class {
            RoadClass::Express => 5,
            RoadClass::Major => 4,
            RoadClass::Minor => 3,
            RoadClass::Slip => 2,
        };
        assert_eq!(link.lanes, lanes, "link {}", link.id);
    }
}

#[test]
fn every_zone_pair_has_at_least_two_routes() {
    let network = fixture_network();
    let mut z1_z2 = None;
    for origin in network.zones() {
        for dest in network.zones() {
            if origin.id == dest.id {
                continue;
            }
            let routes = brute_force_routes(&network, &origin.id, &dest.id).unwrap();
            assert!(
                routes.len() >= 2,
                "{} -> {} has {} routes",
                origin.id,
                dest.id,
                routes.len()
            );
            for route in &routes {
                assert!(network.is_valid_route(route));
            }
            if origin.id == "Z1" && dest.id == "Z2" {
                z1_z2 = Some(routes.len());
            }
        }
    }
    // Frozen on the first oracle run.
    assert_eq!(z1_z2, Some(710));
}

#[test]
fn adjacency_agrees_with_direct_edge_scan() {
    let network = fixture_network();
    for node in network.nodes() {
        let mut expected: Vec<String> = network
            .edges()
            .iter()
            .filter(|e| network.edge_from(&e.id) == Some(node.id.as_str()))
            .map(|e| e.id.clone())
            .collect();
        expected.sort();
        assert_eq!(network.outgoing_edges(&node.id), expected.as_slice());
    }
}

#[test]
fn deleting_a_zones_edges_yields_connectivity_diagnostics() {
    let network = fixture_network();
    // Cut Z5 off by removing its connector edges (the links stay, so only
    // reachability is violated).
    let mut doc = network.to_document();
    doc.edges.retain(|e| !e.id.starts_with("conn05"));
    let broken = routecog::Network::assemble(doc);
    let diags = validate_network(&broken);
    assert!(diags
        .iter()
        .any(|d| d.rule.contains("Z5 is unreachable from zone Z1")));
    assert!(diags
        .iter()
        .any(|d| d.rule.contains("Z1 is unreachable from zone Z5")));
}

#[test]
fn od_cross_check_names_unknown_zones() {
    let network = fixture_network();
    let od = routecog::parse_od("2\nZ1 ZX\n0 5\n5 0\n").unwrap();
    assert_eq!(
        od.cross_check(&network).unwrap_err(),
        routecog::OdError::UnknownZone("ZX".into())
    );
    assert!(fixture_od().cross_check(&network).is_ok());
}

#[test]
fn edge_cost_map_agrees_with_linkwise_recomputation() {
    // Route general cost summed over edge costs must equal the same sum
    // rebuilt directly from raw link attributes.
    let network = fixture_network();
    let weights = routecog::CostWeights::default();
    let cost_map = routecog::free_flow_edge_costs(&network, &weights);
    let routes = routecog::k_shortest_routes(
        &network,
        &routecog::RouteQuery {
            origin_zone: "Z1".into(),
            dest_zone: "Z2".into(),
            k: 3,
            cost_map: cost_map.clone(),
        },
    )
    .unwrap();
    for route in &routes {
        let via_edges = routecog::route_general_cost(route, &cost_map).unwrap();
        let mut linkwise = 0.0;
        for edge_id in &route.edge_ids {
            for link_id in &network.edge(edge_id).unwrap().link_ids {
                let link = network.link(link_id).unwrap();
                linkwise += weights.alpha * link.free_flow_time()
                    + weights.beta * link.length
                    + weights.gamma * (link.length * link.cost_rate + link.supplement1)
                    + weights.delta * link.road_quality
                    + link.supplement2;
            }
        }
        assert!(
            (via_edges - linkwise).abs() < 1e-9,
            "{} vs {linkwise}",
            via_edges
        );
    }
}

#[test]
fn packet_set_carries_published_demand() {
    let network = fixture_network();
    let od = fixture_od();
    let simulation =
        routecog::Simulation::new(&network, &od, routecog::SimulationConfig::default()).unwrap();
    let z1_z11: f64 = simulation
        .packets()
        .iter()
        .filter(|p| p.origin_zone == "Z1" && p.temporary.dest_zone == "Z11")
        .map(|p| p.demand)
        .sum();
    assert_eq!(z1_z11, 800.0);
}

#[test]
fn fixture_od_row_sums() {
    let od = fixture_od();
    assert_eq!(od.len(), 12);
    // Row Z1 as published.
    let row: Vec<f64> = (0..12).map(|d| od.demand_at(0, d)).collect();
    assert_eq!(
        row,
        vec![0.0, 200.0, 182.0, 221.0, 235.0, 120.0, 80.0, 60.0, 105.0, 89.0, 800.0, 253.0]
    );
    let total = od.total_demand();
    assert!(total > 15_000.0 && total < 25_000.0, "total {total}");
}
