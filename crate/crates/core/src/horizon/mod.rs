//! The pair-exchange picture of horizon emission.
//!
//! A pair is created just outside the Schwarzschild radius `r_g`. Its positron
//! falls inward and annihilates with an electron that was already inside; the
//! pair electron escapes. The same exchange with the horizon removed is the
//! flat-space zitterbewegung diagram. Nothing here is metric: radii are
//! ordered, times are schematic.

mod render;
mod timeline;

pub use render::{emit_diagram, DiagramFormat};
pub use timeline::{
    flat_space_analogue, scenario_timeline, Event, EventKind, EventTimeline, Particle, Segment,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HorizonError {
    #[error("radius {name} = {value} is not a positive finite number")]
    NonPositiveRadius { name: &'static str, value: f64 },
    #[error("unsupported diagram format {0:?} (expected svg or ascii)")]
    UnsupportedFormat(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("scenario document: {0}")]
    Parse(String),
}

/// Which of the two allowed orderings of `r` and `r2` holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `r < r2 < r_g`.
    RInsideR2,
    /// `r2 < r < r_g`.
    R2InsideR,
}

impl Variant {
    pub fn constraint(self) -> &'static str {
        match self {
            Variant::RInsideR2 => "r < r2 < r_g",
            Variant::R2InsideR => "r2 < r < r_g",
        }
    }
}

pub const R1_OUTSIDE: &str = "r1 > r_g";
pub const R2_INSIDE: &str = "r2 < r_g";
pub const R_INSIDE: &str = "r < r_g";
pub const ESCAPE_BEYOND_CREATION: &str = "r_prime > r1";
pub const VARIANT_EITHER: &str = "r < r2 < r_g or r2 < r < r_g";

/// Radii of one horizon exchange. `r_prime` is a finite stand-in for escape
/// to infinity. `variant` may be left out and is then inferred.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HorizonScenario {
    pub r_g: f64,
    pub r: f64,
    pub r1: f64,
    pub r2: f64,
    pub r_prime: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
}

impl HorizonScenario {
    pub fn new(r_g: f64, r: f64, r1: f64, r2: f64, r_prime: f64) -> Self {
        Self {
            r_g,
            r,
            r1,
            r2,
            r_prime,
            variant: None,
        }
    }

    /// Parse a key-value document with keys `r_g`, `r`, `r1`, `r2`,
    /// `r_prime` and optionally `variant`.
    pub fn parse(text: &str) -> Result<Self, HorizonError> {
        toml::from_str(text).map_err(|e| HorizonError::Parse(e.message().to_string()))
    }

    pub fn radii(&self) -> [(&'static str, f64); 5] {
        [
            ("r_g", self.r_g),
            ("r", self.r),
            ("r1", self.r1),
            ("r2", self.r2),
            ("r_prime", self.r_prime),
        ]
    }

    /// The ordering of `r` and `r2` that actually holds, if any.
    pub fn observed_variant(&self) -> Option<Variant> {
        if self.r < self.r2 && self.r2 < self.r_g {
            Some(Variant::RInsideR2)
        } else if self.r2 < self.r && self.r < self.r_g {
            Some(Variant::R2InsideR)
        } else {
            None
        }
    }
}

/// Outcome of [`validate_scenario`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Validation {
    pub variant: Option<Variant>,
    /// Every violated constraint, by name.
    pub violations: Vec<&'static str>,
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check every ordering constraint and report all that fail.
pub fn validate_scenario(s: &HorizonScenario) -> Result<Validation, HorizonError> {
    for (name, value) in s.radii() {
        if !(value.is_finite() && value > 0.0) {
            return Err(HorizonError::NonPositiveRadius { name, value });
        }
    }
    let mut violations = Vec::new();
    if !(s.r1 > s.r_g) {
        violations.push(R1_OUTSIDE);
    }
    if !(s.r2 < s.r_g) {
        violations.push(R2_INSIDE);
    }
    if !(s.r < s.r_g) {
        violations.push(R_INSIDE);
    }
    if !(s.r_prime > s.r1) {
        violations.push(ESCAPE_BEYOND_CREATION);
    }
    let observed = s.observed_variant();
    match (s.variant, observed) {
        (Some(declared), obs) if obs != Some(declared) => violations.push(declared.constraint()),
        (None, None) => violations.push(VARIANT_EITHER),
        _ => {}
    }
    Ok(Validation {
        variant: observed,
        violations,
    })
}
