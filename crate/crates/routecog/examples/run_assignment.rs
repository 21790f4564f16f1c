//! Full iterative assignment on the bundled fixture scenario, printing
//! the per-iteration metrics and the busiest route flows.
//!
//! ```bash
//! cargo run --release --example run_assignment
//! ```

use routecog::{fixture_network, fixture_od, run_assignment, SimulationConfig};

fn main() {
    let network = fixture_network();
    let od = fixture_od();
    println!(
        "scenario: {} zones, total demand {:.0} veh/h",
        od.len(),
        od.total_demand()
    );

    let config = SimulationConfig::default();
    let result = run_assignment(&network, &od, config).unwrap();

    println!(
        "{:>4} {:>14} {:>14} {:>12} {:>6} {:>6}",
        "iter", "avg cost", "variance", "search ms", "hits", "conv"
    );
    for r in &result.reports {
        println!(
            "{:>4} {:>14.4} {:>14.2} {:>12.3} {:>6.2} {:>6}",
            r.iteration,
            r.average_travel_cost,
            r.cost_variance,
            r.route_search_time.as_secs_f64() * 1000.0,
            r.cache_hit_rate,
            r.converged
        );
    }
    println!(
        "converged: {} after {} iterations; library holds {} feature keys",
        result.converged,
        result.reports.len(),
        result.library.len()
    );

    let mut flows = result.flows.clone();
    flows.sort_by(|a, b| b.demand.total_cmp(&a.demand));
    println!("heaviest route flows:");
    for flow in flows.iter().take(5) {
        println!(
            "  {:>7.1} veh/h  {} -> {}  via {}",
            flow.demand,
            flow.origin_zone,
            flow.dest_zone,
            flow.route.edge_ids.join(" ")
        );
    }
}
