//! Discrete route-choice distributions.
//!
//! Route utilities are reciprocal general costs, `U = 1 / C`. Two decision
//! functions turn utilities into choice probabilities:
//!
//! - Logit: `p_j = exp(mu * U_j) / sum_i exp(mu * U_i)` — reacts to absolute
//!   utility differences and is invariant under utility translation.
//! - Kirchhoff: `p_j = U_j^k / sum_i U_i^k` — reacts to relative differences
//!   and is invariant under cost scaling, so a 5 vs 10 pair separates far
//!   more than a 105 vs 110 pair.
//!
//! Kirchhoff is the Logit of logarithmic utilities; [`kirchhoff_as_logit`]
//! exposes that identity as a cross-check. All probabilities are computed in
//! log space with a max-shift so large sensitivities cannot overflow.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which decision function distributes the choice probabilities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChoiceModelKind {
    Logit,
    Kirchhoff,
}

impl std::fmt::Display for ChoiceModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChoiceModelKind::Logit => f.write_str("logit"),
            ChoiceModelKind::Kirchhoff => f.write_str("kirchhoff"),
        }
    }
}

impl std::str::FromStr for ChoiceModelKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "logit" => Ok(ChoiceModelKind::Logit),
            "kirchhoff" => Ok(ChoiceModelKind::Kirchhoff),
            other => Err(format!("unknown choice model {other:?}")),
        }
    }
}

/// Decision function plus its sensitivity (`mu` for Logit, `k` for Kirchhoff).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiceParams {
    pub model: ChoiceModelKind,
    pub sensitivity: f64,
}

impl ChoiceParams {
    pub fn validate(&self) -> Result<(), ChoiceError> {
        let ok = match self.model {
            ChoiceModelKind::Logit => self.sensitivity > 0.0,
            // k = 0 is the well-defined uniform limit.
            ChoiceModelKind::Kirchhoff => self.sensitivity >= 0.0,
        };
        if ok && self.sensitivity.is_finite() {
            Ok(())
        } else {
            Err(ChoiceError::BadSensitivity {
                model: self.model,
                value: self.sensitivity,
            })
        }
    }

    /// Choice probabilities for a set of route general costs.
    pub fn probabilities(&self, costs: &[f64]) -> Result<Vec<f64>, ChoiceError> {
        self.validate()?;
        let u = utilities(costs)?;
        match self.model {
            ChoiceModelKind::Logit => logit_probabilities(&u, self.sensitivity),
            ChoiceModelKind::Kirchhoff => kirchhoff_probabilities(&u, self.sensitivity),
        }
    }
}

/// A candidate route set with one positive general cost per route.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiceSet {
    pub route_ids: Vec<String>,
    pub costs: Vec<f64>,
}

impl ChoiceSet {
    pub fn new(route_ids: Vec<String>, costs: Vec<f64>) -> Result<ChoiceSet, ChoiceError> {
        if route_ids.is_empty() || costs.is_empty() {
            return Err(ChoiceError::EmptyChoiceSet);
        }
        assert_eq!(route_ids.len(), costs.len(), "one cost per route");
        for (i, &c) in costs.iter().enumerate() {
            if !(c > 0.0 && c.is_finite()) {
                return Err(ChoiceError::NonPositiveCost { index: i });
            }
        }
        Ok(ChoiceSet { route_ids, costs })
    }

    pub fn len(&self) -> usize {
        self.route_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.route_ids.is_empty()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ChoiceError {
    #[error("choice set is empty")]
    EmptyChoiceSet,
    #[error("cost at index {index} is not strictly positive")]
    NonPositiveCost { index: usize },
    #[error("utility at index {index} is not strictly positive")]
    NonPositiveUtility { index: usize },
    #[error("utility at index {index} is not finite")]
    NonFiniteUtility { index: usize },
    #[error("{model} sensitivity {value} is out of range")]
    BadSensitivity { model: ChoiceModelKind, value: f64 },
    #[error("malformed probability vector: {0}")]
    BadProbabilities(String),
}

/// Elementwise reciprocal: `U_j = 1 / C_j`. Costs must be strictly positive.
pub fn utilities(costs: &[f64]) -> Result<Vec<f64>, ChoiceError> {
    costs
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if c > 0.0 && c.is_finite() {
                Ok(1.0 / c)
            } else {
                Err(ChoiceError::NonPositiveCost { index: i })
            }
        })
        .collect()
}

/// Numerically stable softmax of pre-scaled exponents.
fn softmax(exponents: &[f64]) -> Vec<f64> {
    let max = exponents.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = exponents.iter().map(|&x| (x - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// Logit distribution `p_j = exp(mu * U_j) / sum_i exp(mu * U_i)`.
pub fn logit_probabilities(utilities: &[f64], mu: f64) -> Result<Vec<f64>, ChoiceError> {
    if utilities.is_empty() {
        return Err(ChoiceError::EmptyChoiceSet);
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(ChoiceError::BadSensitivity {
            model: ChoiceModelKind::Logit,
            value: mu,
        });
    }
    for (i, &u) in utilities.iter().enumerate() {
        if !u.is_finite() {
            return Err(ChoiceError::NonFiniteUtility { index: i });
        }
    }
    let exponents: Vec<f64> = utilities.iter().map(|&u| mu * u).collect();
    Ok(softmax(&exponents))
}

/// Kirchhoff distribution `p_j = U_j^k / sum_i U_i^k`, evaluated as
/// `softmax(k * ln U)`.
pub fn kirchhoff_probabilities(utilities: &[f64], k: f64) -> Result<Vec<f64>, ChoiceError> {
    if utilities.is_empty() {
        return Err(ChoiceError::EmptyChoiceSet);
    }
    if !(k >= 0.0 && k.is_finite()) {
        return Err(ChoiceError::BadSensitivity {
            model: ChoiceModelKind::Kirchhoff,
            value: k,
        });
    }
    let exponents = log_utilities_scaled(utilities, k)?;
    Ok(softmax(&exponents))
}

/// The Kirchhoff distribution written as a Logit over logarithmic utilities.
///
/// Cross-check oracle for [`kirchhoff_probabilities`]; for `k = 0` (where a
/// plain Logit would reject the sensitivity) it degenerates to uniform, the
/// Kirchhoff limit.
pub fn kirchhoff_as_logit(utilities: &[f64], k: f64) -> Result<Vec<f64>, ChoiceError> {
    if utilities.is_empty() {
        return Err(ChoiceError::EmptyChoiceSet);
    }
    if !(k >= 0.0 && k.is_finite()) {
        return Err(ChoiceError::BadSensitivity {
            model: ChoiceModelKind::Kirchhoff,
            value: k,
        });
    }
    let log_utilities: Vec<f64> = log_utilities_scaled(utilities, 1.0)?;
    if k > 0.0 {
        logit_probabilities(&log_utilities, k)
    } else {
        Ok(softmax(&vec![0.0; utilities.len()]))
    }
}

fn log_utilities_scaled(utilities: &[f64], k: f64) -> Result<Vec<f64>, ChoiceError> {
    utilities
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            if !u.is_finite() {
                Err(ChoiceError::NonFiniteUtility { index: i })
            } else if u > 0.0 {
                Ok(k * u.ln())
            } else {
                Err(ChoiceError::NonPositiveUtility { index: i })
            }
        })
        .collect()
}

/// Draws one route index by inverse CDF on the next stream value.
///
/// Deterministic given the stream state; the probability vector must sum to
/// one within 1e-9.
pub fn sample_route<R: Rng + ?Sized>(
    probabilities: &[f64],
    stream: &mut R,
) -> Result<usize, ChoiceError> {
    if probabilities.is_empty() {
        return Err(ChoiceError::BadProbabilities("empty vector".to_string()));
    }
    let mut total = 0.0;
    for &p in probabilities {
        if !(p >= 0.0 && p.is_finite()) {
            return Err(ChoiceError::BadProbabilities(format!(
                "entry {p} is not a probability"
            )));
        }
        total += p;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(ChoiceError::BadProbabilities(format!(
            "sum {total} is not 1"
        )));
    }
    let draw: f64 = stream.gen();
    let mut cumulative = 0.0;
    for (i, &p) in probabilities.iter().enumerate() {
        cumulative += p;
        if draw < cumulative {
            return Ok(i);
        }
    }
    // Rounding can leave the cumulative a hair below the draw.
    Ok(probabilities.len() - 1)
}
