//! Property checks for local rules and their dynamics, on sampled graphs and
//! on exhaustive spaces of small graphs.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::engine::Dynamics;

mod checks;
mod report;
mod sample;
mod space;

pub use checks::{
    check_causality, check_conjugacy, check_dynamics_axioms, check_freshness, check_invertibility,
    check_limit_preservation, check_limit_preservation_sampled, check_local_rule, check_reversibility,
    InverseEntry, InverseTable, DEFAULT_INVERSE_RADIUS,
};
pub use report::{render_json, render_text, Report, Verdict, Witness};
pub use sample::{Sampler, DEFAULT_MAX_VERTICES};
pub use space::{GraphSpace, SpaceOptions, DEFAULT_SPACE_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("space holds {size} graphs, more than the limit of {limit}")]
    SpaceTooLarge { size: u64, limit: u64 },
    #[error("{0}")]
    BadSpace(String),
    #[error("unknown property {0:?}")]
    UnknownProperty(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    /// Conjugacy and freshness of the local rule.
    Dynamics,
    /// Bound, naming and consistency over the exhaustive space.
    Local,
    Causality,
    Limits,
    /// Injectivity over the space, then a search for a causal inverse.
    Invertibility,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Dynamics,
        Property::Local,
        Property::Causality,
        Property::Limits,
        Property::Invertibility,
    ];

    /// Parses a comma-separated list; `all` selects every property.
    pub fn parse_list(text: &str) -> Result<Vec<Property>, VerifyError> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Property::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for Property {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dynamics" => Ok(Property::Dynamics),
            "local" => Ok(Property::Local),
            "causality" => Ok(Property::Causality),
            "limits" => Ok(Property::Limits),
            "invertibility" => Ok(Property::Invertibility),
            other => Err(VerifyError::UnknownProperty(other.to_string())),
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Dynamics => "dynamics",
            Property::Local => "local",
            Property::Causality => "causality",
            Property::Limits => "limits",
            Property::Invertibility => "invertibility",
        })
    }
}

/// Settings shared by a batch of checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Suite {
    pub samples: usize,
    pub seed: u64,
    pub space: SpaceOptions,
    pub space_limit: u64,
    /// Largest radius tried for limits and for the inverse.
    pub r_max: usize,
}

impl Default for Suite {
    fn default() -> Self {
        Self {
            samples: 200,
            seed: 0,
            space: SpaceOptions::default(),
            space_limit: DEFAULT_SPACE_LIMIT,
            r_max: DEFAULT_INVERSE_RADIUS,
        }
    }
}

impl Suite {
    pub fn run(&self, dynamics: &Dynamics, properties: &[Property]) -> Result<Vec<Report>, VerifyError> {
        let rule = dynamics.rule();
        let mut out = Vec::new();
        let mut space = None;
        let mut space_of = || -> Result<_, VerifyError> {
            if space.is_none() {
                let s = GraphSpace::for_rule(rule.as_ref(), self.space)?;
                space = Some((s.to_string(), s.enumerate_with_limit(self.space_limit)?));
            }
            Ok(space.clone().expect("just built"))
        };
        for p in properties {
            match p {
                Property::Dynamics => out.extend(check_dynamics_axioms(rule, self.samples, self.seed)?),
                Property::Local => {
                    let (label, graphs) = space_of()?;
                    let mut r = check_local_rule(rule, &graphs);
                    r.note(format!("space: {label}"));
                    out.push(r);
                }
                Property::Causality => out.extend(check_causality(dynamics, self.samples, self.seed)?),
                Property::Limits => out.push(check_limit_preservation_sampled(
                    dynamics,
                    self.samples.min(50),
                    self.seed,
                    self.r_max,
                )?),
                Property::Invertibility => {
                    let (label, graphs) = space_of()?;
                    let (mut r, table) = check_invertibility(dynamics, &graphs);
                    r.note(format!("space: {label}"));
                    out.push(r);
                    if let Some(table) = table {
                        out.push(check_reversibility(&table, self.r_max));
                    }
                }
            }
        }
        Ok(out)
    }
}
