//! The congested travel-time curve that stands in for a microscopic
//! traffic simulation: `t = t0 * (1 + a * (v/c)^b)`.
//!
//! ```bash
//! cargo run --example volume_delay
//! ```

use routecog::{congested_travel_time, VolumeDelayParams};

fn main() {
    let params = VolumeDelayParams::default();
    let free_flow = 120.0; // seconds
    let capacity = 3600.0; // veh/h

    println!(
        "free-flow time {free_flow} s, capacity {capacity} veh/h, a={}, b={}",
        params.a, params.b
    );
    println!(
        "{:>8} {:>8} {:>12} {:>8}",
        "volume", "v/c", "time (s)", "factor"
    );
    for step in 0..=8 {
        let volume = capacity * step as f64 / 4.0;
        let time = congested_travel_time(free_flow, volume, capacity, &params);
        println!(
            "{volume:>8.0} {:>8.2} {time:>12.2} {:>8.3}",
            volume / capacity,
            time / free_flow
        );
    }
}
