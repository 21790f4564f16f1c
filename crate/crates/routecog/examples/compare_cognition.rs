//! Cognition on vs. off on the fixture scenario: the feature library
//! removes repeated route computation (search time collapses once every
//! key is cached) while keeping the average travel cost in the same band.
//!
//! ```bash
//! cargo run --release --example compare_cognition
//! ```

use routecog::{compare_cognition, fixture_network, fixture_od, summarize, SimulationConfig};

fn main() {
    let network = fixture_network();
    let od = fixture_od();
    let config = SimulationConfig::default();

    let (on, off) = compare_cognition(&network, &od, &config).unwrap();
    let summary_on = summarize(&on);
    let summary_off = summarize(&off);

    println!(
        "{:<22} {:>14} {:>14}",
        "metric", "cognition on", "cognition off"
    );
    let rows = [
        (
            "iterations",
            summary_on.iterations as f64,
            summary_off.iterations as f64,
        ),
        (
            "mean avg cost",
            summary_on.mean_avg_cost,
            summary_off.mean_avg_cost,
        ),
        (
            "final avg cost",
            summary_on.final_avg_cost,
            summary_off.final_avg_cost,
        ),
        (
            "mean variance",
            summary_on.mean_variance,
            summary_off.mean_variance,
        ),
        (
            "total search ms",
            summary_on.total_search_ms,
            summary_off.total_search_ms,
        ),
        (
            "search cv (last 10)",
            summary_on.search_cv_last10,
            summary_off.search_cv_last10,
        ),
        (
            "final hit rate",
            summary_on.final_cache_hit_rate,
            summary_off.final_cache_hit_rate,
        ),
    ];
    for (name, a, b) in rows {
        println!("{name:<22} {a:>14.4} {b:>14.4}");
    }

    println!(
        "search time per iteration, first 5 on-iterations (ms): {:?}",
        on.reports
            .iter()
            .take(5)
            .map(|r| (r.route_search_time.as_secs_f64() * 1e6).round() / 1e3)
            .collect::<Vec<_>>()
    );
    println!(
        "mean cost ratio on/off: {:.5}",
        summary_on.mean_avg_cost / summary_off.mean_avg_cost
    );
}
