//! The cognition cycle on its own: perceive a feature key, miss the
//! library, reason over candidates, store the result, hit on the next
//! trip, re-sense a weather change, and export the library.
//!
//! ```bash
//! cargo run --example feature_library
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use routecog::{
    perceive, reason, resense, AgeBand, AttributeChanges, ChoiceModelKind, ChoiceParams,
    DriverPacket, EnvironmentState, ExperienceBand, FeatureLibrary, Gender, Physiological,
    RoadCondition, Route, ScoredCandidates, StaticAttributes, TemporaryAttributes, Urgency,
    Weather,
};

fn main() {
    let mut packet = DriverPacket {
        id: 0,
        origin_zone: "Z1".to_string(),
        static_attrs: StaticAttributes {
            age_band: AgeBand::Middle,
            gender: Gender::Female,
            experience_band: ExperienceBand::Experienced,
        },
        temporary: TemporaryAttributes {
            dest_zone: "Z7".to_string(),
            urgency: Urgency::Low,
            physiological: Physiological::Normal,
        },
        environment: EnvironmentState {
            weather: Weather::Clear,
            road_condition: RoadCondition::Normal,
        },
        demand: 150.0,
        chosen_route: None,
    };

    let route = |edges: &[&str]| Route {
        origin_zone: "Z1".to_string(),
        dest_zone: "Z7".to_string(),
        edge_ids: edges.iter().map(|s| s.to_string()).collect(),
    };
    let candidates = ScoredCandidates::new(
        vec![route(&["a", "b"]), route(&["c"]), route(&["d", "e", "f"])],
        vec![420.0, 445.0, 510.0],
    )
    .unwrap();
    let params = ChoiceParams {
        model: ChoiceModelKind::Kirchhoff,
        sensitivity: 3.0,
    };

    let mut library = FeatureLibrary::new();
    let mut stream = ChaCha8Rng::seed_from_u64(42);

    let key = perceive(&packet);
    println!("perceived key: {}", key.canonical_string());
    println!("first lookup hits: {}", library.retrieve(&key).is_some());

    let chosen = reason(&key, &candidates, &params, &mut stream).unwrap();
    println!("reasoned route: {}", chosen.edge_ids.join(" "));

    library.evaluate_and_store(key.clone(), chosen.clone(), 431.0);
    println!("stored with realized cost 431");

    let entry = library.retrieve(&key).unwrap();
    println!(
        "second lookup hits: route {} (score {}, hits {})",
        entry.route.edge_ids.join(" "),
        entry.score,
        entry.hits
    );

    // A cheaper realized trip replaces the entry; a worse one would not.
    library.evaluate_and_store(key.clone(), route(&["c"]), 405.0);
    library.evaluate_and_store(key.clone(), route(&["d", "e", "f"]), 460.0);
    println!(
        "after two more trips the remembered score is {}",
        library.peek(&key).unwrap().score
    );

    // Mid-trip the weather flips; the rain key is new, so the driver
    // reasons again instead of replaying the remembered route.
    let rerouted = resense(
        &mut packet,
        &AttributeChanges {
            weather: Some(Weather::Rain),
            ..AttributeChanges::default()
        },
        &mut library,
        &candidates,
        &params,
        &mut stream,
    )
    .unwrap();
    println!(
        "after rain is sensed: route {}",
        rerouted.edge_ids.join(" ")
    );

    println!("library export:\n{}", library.export_json());
}
