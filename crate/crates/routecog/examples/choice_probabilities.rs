//! Route utilities and the two choice distributions, including the
//! classic contrast: a 5 vs 10 minute pair separates strongly under
//! Kirchhoff while 105 vs 110 barely moves, whereas Logit treats both
//! pairs by their absolute utility difference.
//!
//! ```bash
//! cargo run --example choice_probabilities
//! ```

use routecog::{kirchhoff_as_logit, kirchhoff_probabilities, logit_probabilities, utilities};

fn show(label: &str, values: &[f64]) {
    let text: Vec<String> = values.iter().map(|v| format!("{v:.6}")).collect();
    println!("  {label:<20} [{}]", text.join(", "));
}

fn main() {
    for costs in [[5.0, 10.0], [105.0, 110.0]] {
        println!("route costs {costs:?}:");
        let u = utilities(&costs).unwrap();
        show("utilities 1/C", &u);
        show("logit mu=10", &logit_probabilities(&u, 10.0).unwrap());
        show("kirchhoff k=1", &kirchhoff_probabilities(&u, 1.0).unwrap());
        show("kirchhoff k=4", &kirchhoff_probabilities(&u, 4.0).unwrap());
    }

    // The Kirchhoff distribution is a Logit over logarithmic utilities.
    let u = utilities(&[12.0, 19.0, 31.0]).unwrap();
    let direct = kirchhoff_probabilities(&u, 3.0).unwrap();
    let via_logit = kirchhoff_as_logit(&u, 3.0).unwrap();
    println!("kirchhoff vs logit-of-log, k=3:");
    show("direct", &direct);
    show("via logit", &via_logit);
    let max_diff = direct
        .iter()
        .zip(&via_logit)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("  max elementwise difference: {max_diff:e}");

    // Sensitivity limits: k = 0 is uniform, large k concentrates on the
    // cheapest route.
    let u = utilities(&[100.0, 105.0]).unwrap();
    show("k=0", &kirchhoff_probabilities(&u, 0.0).unwrap());
    show("k=200", &kirchhoff_probabilities(&u, 200.0).unwrap());
}
