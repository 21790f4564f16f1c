//! K-shortest loopless route search on the fixture, cross-checked against
//! exhaustive enumeration.
//!
//! ```bash
//! cargo run --release --example shortest_routes
//! ```

use routecog::{
    brute_force_routes, fixture_network, free_flow_edge_costs, k_shortest_routes,
    sort_routes_by_cost, CostWeights, RouteQuery,
};

fn main() {
    let network = fixture_network();
    let cost_map = free_flow_edge_costs(&network, &CostWeights::default());

    let (origin, dest) = ("Z1", "Z7");
    let query = RouteQuery {
        origin_zone: origin.to_string(),
        dest_zone: dest.to_string(),
        k: 5,
        cost_map: cost_map.clone(),
    };
    let routes = k_shortest_routes(&network, &query).unwrap();
    println!(
        "{} cheapest routes {origin} -> {dest} at free flow:",
        routes.len()
    );
    for (i, route) in routes.iter().enumerate() {
        let cost: f64 = route.edge_ids.iter().map(|e| cost_map[e]).sum();
        println!(
            "{:>2}. cost {cost:>9.3}  {}",
            i + 1,
            route.edge_ids.join(" ")
        );
    }

    let mut all = brute_force_routes(&network, origin, dest).unwrap();
    println!("exhaustive enumeration finds {} loopless routes", all.len());
    sort_routes_by_cost(&mut all, &cost_map).unwrap();
    let agree = all
        .iter()
        .take(routes.len())
        .zip(&routes)
        .all(|(a, b)| a == b);
    println!("top-{} agreement with the oracle: {agree}", routes.len());
}
