//! Driver behavior cognition: perceive, retrieve, reason, store.
//!
//! Drivers are simulated as packets of identical-feature demand. Before a
//! trip a packet perceives its feature set (who it is, where it goes, what
//! the world looks like) into a canonical [`FeatureKey`] and looks the key
//! up in the [`FeatureLibrary`]. A hit replays the remembered route without
//! any route search; a miss triggers reasoning — a discrete-choice draw over
//! the current candidate routes. After the trip the realized route cost is
//! evaluated against the stored entry and the better (cheaper) choice is
//! kept, so per-key scores never increase.
//!
//! Continuous driver attributes are discretized into fixed bands; the
//! library requires exact key matches, so the key space stays finite.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::choice::{sample_route, ChoiceError, ChoiceParams};
use crate::network::Route;

macro_rules! string_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant,)+
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                match self {
                    $($name::$variant => f.write_str($text),)+
                }
            }
        }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(format!(concat!("unknown ", stringify!($name), " {:?}"), other)),
                }
            }
        }
    };
}

string_enum!(AgeBand { Young => "young", Middle => "middle", Senior => "senior" });
string_enum!(Gender { Female => "female", Male => "male" });
string_enum!(ExperienceBand { Novice => "novice", Experienced => "experienced" });
string_enum!(Urgency { Low => "low", High => "high" });
string_enum!(Physiological { Normal => "normal", Fatigued => "fatigued" });
string_enum!(Weather { Clear => "clear", Rain => "rain" });
string_enum!(RoadCondition { Normal => "normal", Incident => "incident" });

/// Who the driver is; stable for the whole simulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StaticAttributes {
    pub age_band: AgeBand,
    pub gender: Gender,
    pub experience_band: ExperienceBand,
}

impl StaticAttributes {
    /// Cost-weight class this driver belongs to. Weight sets in the run
    /// configuration are keyed by these names, with `"default"` as fallback.
    pub fn driver_class(&self) -> &'static str {
        match self.experience_band {
            ExperienceBand::Novice => "novice",
            ExperienceBand::Experienced => "experienced",
        }
    }
}

/// Trip-specific state: where to and in what condition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TemporaryAttributes {
    pub dest_zone: String,
    pub urgency: Urgency,
    pub physiological: Physiological,
}

/// What the world looks like to the driver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EnvironmentState {
    pub weather: Weather,
    pub road_condition: RoadCondition,
}

/// Canonical library key: two keys are equal iff every component matches.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FeatureKey {
    pub origin_zone: String,
    pub static_attrs: StaticAttributes,
    pub temporary: TemporaryAttributes,
    pub environment: EnvironmentState,
}

impl FeatureKey {
    /// Canonical string form: all components in fixed field order, joined
    /// by `|`. Zone ids must not contain `|`.
    pub fn canonical_string(&self) -> String {
        format!(
            "{}|{}|{}|{}|{}|{}|{}|{}|{}",
            self.origin_zone,
            self.static_attrs.age_band,
            self.static_attrs.gender,
            self.static_attrs.experience_band,
            self.temporary.dest_zone,
            self.temporary.urgency,
            self.temporary.physiological,
            self.environment.weather,
            self.environment.road_condition,
        )
    }

    /// Inverse of [`FeatureKey::canonical_string`].
    pub fn parse_canonical(text: &str) -> Result<FeatureKey, CognitionError> {
        let parts: Vec<&str> = text.split('|').collect();
        if parts.len() != 9 {
            return Err(CognitionError::Import(format!(
                "key {text:?} must have 9 fields, found {}",
                parts.len()
            )));
        }
        let field = |e: String| CognitionError::Import(format!("key {text:?}: {e}"));
        Ok(FeatureKey {
            origin_zone: parts[0].to_string(),
            static_attrs: StaticAttributes {
                age_band: parts[1].parse().map_err(field)?,
                gender: parts[2].parse().map_err(field)?,
                experience_band: parts[3].parse().map_err(field)?,
            },
            temporary: TemporaryAttributes {
                dest_zone: parts[4].to_string(),
                urgency: parts[5].parse().map_err(field)?,
                physiological: parts[6].parse().map_err(field)?,
            },
            environment: EnvironmentState {
                weather: parts[7].parse().map_err(field)?,
                road_condition: parts[8].parse().map_err(field)?,
            },
        })
    }
}

/// A remembered route with the best realized cost seen so far.
#[derive(Clone, Debug, PartialEq)]
pub struct LibraryEntry {
    pub route: Route,
    /// Realized general cost of the route when it was stored. Strictly
    /// positive; never increases across updates.
    pub score: f64,
    /// Number of retrievals that hit this entry.
    pub hits: u64,
}

/// Persistent map from feature keys to remembered route choices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FeatureLibrary {
    entries: BTreeMap<FeatureKey, LibraryEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExportEntry {
    route_edge_ids: Vec<String>,
    score: f64,
    hits: u64,
}

impl FeatureLibrary {
    pub fn new() -> FeatureLibrary {
        FeatureLibrary::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Looks up a key; a present entry has its hit counter bumped.
    pub fn retrieve(&mut self, key: &FeatureKey) -> Option<&LibraryEntry> {
        match self.entries.get_mut(key) {
            Some(entry) => {
                entry.hits += 1;
                Some(entry)
            }
            None => None,
        }
    }

    /// Read-only lookup; does not count as a retrieval.
    pub fn peek(&self, key: &FeatureKey) -> Option<&LibraryEntry> {
        self.entries.get(key)
    }

    /// Post-trip evaluation: insert on a new key, replace when the realized
    /// cost beats the stored score, keep the incumbent otherwise (ties
    /// included).
    pub fn evaluate_and_store(&mut self, key: FeatureKey, route: Route, realized_cost: f64) {
        assert!(
            realized_cost > 0.0 && realized_cost.is_finite(),
            "realized cost must be positive, got {realized_cost}"
        );
        match self.entries.get_mut(&key) {
            None => {
                self.entries.insert(
                    key,
                    LibraryEntry {
                        route,
                        score: realized_cost,
                        hits: 0,
                    },
                );
            }
            Some(entry) => {
                if realized_cost < entry.score {
                    entry.route = route;
                    entry.score = realized_cost;
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FeatureKey, &LibraryEntry)> {
        self.entries.iter()
    }

    /// Canonical JSON export: keys in sorted canonical-string form. The
    /// export round-trips byte-exactly through [`FeatureLibrary::import_json`].
    pub fn export_json(&self) -> String {
        let map: BTreeMap<String, ExportEntry> = self
            .entries
            .iter()
            .map(|(key, entry)| {
                (
                    key.canonical_string(),
                    ExportEntry {
                        route_edge_ids: entry.route.edge_ids.clone(),
                        score: entry.score,
                        hits: entry.hits,
                    },
                )
            })
            .collect();
        let mut text = serde_json::to_string_pretty(&map).expect("library serializes");
        text.push('\n');
        text
    }

    pub fn import_json(text: &str) -> Result<FeatureLibrary, CognitionError> {
        let map: BTreeMap<String, ExportEntry> =
            serde_json::from_str(text).map_err(|e| CognitionError::Import(e.to_string()))?;
        let mut library = FeatureLibrary::new();
        for (key_text, entry) in map {
            let key = FeatureKey::parse_canonical(&key_text)?;
            if !(entry.score > 0.0 && entry.score.is_finite()) {
                return Err(CognitionError::Import(format!(
                    "key {key_text:?}: score {} must be positive",
                    entry.score
                )));
            }
            let route = Route {
                origin_zone: key.origin_zone.clone(),
                dest_zone: key.temporary.dest_zone.clone(),
                edge_ids: entry.route_edge_ids,
            };
            library.entries.insert(
                key,
                LibraryEntry {
                    route,
                    score: entry.score,
                    hits: entry.hits,
                },
            );
        }
        Ok(library)
    }
}

/// A group of drivers sharing one feature set on one OD pair, simulated as
/// a unit carrying `demand` vehicles per hour.
#[derive(Clone, Debug, PartialEq)]
pub struct DriverPacket {
    pub id: u64,
    pub origin_zone: String,
    pub static_attrs: StaticAttributes,
    pub temporary: TemporaryAttributes,
    pub environment: EnvironmentState,
    pub demand: f64,
    pub chosen_route: Option<Route>,
}

/// Candidate routes with their general costs under the chooser's weights.
#[derive(Clone, Debug)]
pub struct ScoredCandidates {
    routes: Vec<Route>,
    costs: Vec<f64>,
}

impl ScoredCandidates {
    pub fn new(routes: Vec<Route>, costs: Vec<f64>) -> Result<ScoredCandidates, CognitionError> {
        if routes.is_empty() {
            return Err(CognitionError::EmptyCandidates);
        }
        assert_eq!(routes.len(), costs.len(), "one cost per candidate route");
        Ok(ScoredCandidates { routes, costs })
    }

    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }
}

/// Changed temporary or environment attributes sensed during a trip.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AttributeChanges {
    pub dest_zone: Option<String>,
    pub urgency: Option<Urgency>,
    pub physiological: Option<Physiological>,
    pub weather: Option<Weather>,
    pub road_condition: Option<RoadCondition>,
}

impl AttributeChanges {
    pub fn is_empty(&self) -> bool {
        *self == AttributeChanges::default()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CognitionError {
    #[error("no candidate routes to reason over")]
    EmptyCandidates,
    #[error("candidate routes run {found} but the feature key expects {expected}")]
    CandidateMismatch { expected: String, found: String },
    #[error(transparent)]
    Choice(#[from] ChoiceError),
    #[error("library import: {0}")]
    Import(String),
}

/// Perception: assemble the canonical feature key from a packet's state.
pub fn perceive(packet: &DriverPacket) -> FeatureKey {
    FeatureKey {
        origin_zone: packet.origin_zone.clone(),
        static_attrs: packet.static_attrs,
        temporary: packet.temporary.clone(),
        environment: packet.environment,
    }
}

/// Reasoning: sample one candidate route from the choice distribution over
/// the candidates' general costs. Consumes exactly one stream draw.
pub fn reason<R: Rng + ?Sized>(
    key: &FeatureKey,
    candidates: &ScoredCandidates,
    params: &ChoiceParams,
    stream: &mut R,
) -> Result<Route, CognitionError> {
    for route in candidates.routes() {
        if route.origin_zone != key.origin_zone || route.dest_zone != key.temporary.dest_zone {
            return Err(CognitionError::CandidateMismatch {
                expected: format!("{} -> {}", key.origin_zone, key.temporary.dest_zone),
                found: format!("{} -> {}", route.origin_zone, route.dest_zone),
            });
        }
    }
    let probabilities = params.probabilities(candidates.costs())?;
    let index = sample_route(&probabilities, stream)?;
    Ok(candidates.routes()[index].clone())
}

/// Mid-trip re-sensing: apply attribute changes, then rerun the
/// perceive/retrieve cycle, reasoning only on a library miss.
///
/// The packet's attributes are updated in place; nothing is stored — the
/// post-trip evaluation does that. With no changes this returns the stored
/// route unchanged (idempotent under stationary conditions).
pub fn resense<R: Rng + ?Sized>(
    packet: &mut DriverPacket,
    changes: &AttributeChanges,
    library: &mut FeatureLibrary,
    candidates: &ScoredCandidates,
    params: &ChoiceParams,
    stream: &mut R,
) -> Result<Route, CognitionError> {
    if let Some(dest) = &changes.dest_zone {
        packet.temporary.dest_zone = dest.clone();
    }
    if let Some(urgency) = changes.urgency {
        packet.temporary.urgency = urgency;
    }
    if let Some(physiological) = changes.physiological {
        packet.temporary.physiological = physiological;
    }
    if let Some(weather) = changes.weather {
        packet.environment.weather = weather;
    }
    if let Some(condition) = changes.road_condition {
        packet.environment.road_condition = condition;
    }
    let key = perceive(packet);
    if let Some(entry) = library.retrieve(&key) {
        return Ok(entry.route.clone());
    }
    reason(&key, candidates, params, stream)
}
