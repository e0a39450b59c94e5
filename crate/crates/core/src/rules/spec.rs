//! Rules by name, as written on the command line.
//!
//! A spec is a rule name followed by `/key=value` parameters:
//!
//! ```text
//! identity
//! xor-ca
//! ca/h=00:0,01:1,10:1,11:0/q=0
//! grid  grid/sigma=a,b  grid-grey-black  grid-grey-white-black
//! state-perm/map=0:1,1:0/pi=2
//! mutant-constant-name  mutant-boundary-conflict  mutant-radius-cheat
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::graph::Signature;
use crate::name::{sym, Symbol, DEFAULT_EDGE_STATE};
use crate::rules::ca::CellularAutomatonRule;
use crate::rules::grid::{GridVariant, InflatingGridRule};
use crate::rules::mutants::{boundary_conflict_rule, constant_name_rule, radius_cheat_rule};
use crate::rules::permutation::StatePermutationRule;
use crate::rules::{identity_rule, xor_ca_rule, Rule, RuleError, XOR_TABLE};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleSpec {
    /// Takes its signature from the context it is used in.
    Identity,
    XorCa,
    Ca { table: String, quiescent: String },
    Grid { variant: GridVariant, sigma: Option<Vec<String>> },
    StatePerm { map: String, degree: u32 },
    MutantConstantName,
    MutantBoundaryConflict,
    MutantRadiusCheat,
}

impl RuleSpec {
    /// Builds the rule. `context` supplies the signature for `identity`;
    /// without one it works on binary lines.
    pub fn build(&self, context: Option<&Signature>) -> Result<Rule, RuleError> {
        Ok(match self {
            RuleSpec::Identity => identity_rule(context.cloned().unwrap_or_else(|| {
                Signature::new([sym("0"), sym("1")], [sym(DEFAULT_EDGE_STATE)], 2)
            })),
            RuleSpec::XorCa => xor_ca_rule(),
            RuleSpec::Ca { table, quiescent } => {
                let table = CellularAutomatonRule::parse_table(table)?;
                let q = Symbol::new(quiescent)
                    .map_err(|e| RuleError::BadParameters(format!("quiescent state: {e}")))?;
                Arc::new(CellularAutomatonRule::new(table, q)?)
            }
            RuleSpec::Grid { variant, sigma } => {
                let alphabet = sigma
                    .as_ref()
                    .map(|s| {
                        s.iter()
                            .map(|x| Symbol::new(x).map_err(|e| RuleError::BadParameters(e.to_string())))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .transpose()?;
                Arc::new(InflatingGridRule::new(*variant, alphabet)?)
            }
            RuleSpec::StatePerm { map, degree } => {
                Arc::new(StatePermutationRule::new(StatePermutationRule::parse_map(map)?, *degree)?)
            }
            RuleSpec::MutantConstantName => constant_name_rule(),
            RuleSpec::MutantBoundaryConflict => boundary_conflict_rule(),
            RuleSpec::MutantRadiusCheat => radius_cheat_rule(),
        })
    }

    /// The built-in rules that are expected to pass every check.
    pub fn builtins() -> Vec<RuleSpec> {
        vec![
            RuleSpec::Identity,
            RuleSpec::XorCa,
            RuleSpec::Grid {
                variant: GridVariant::Plain,
                sigma: None,
            },
            RuleSpec::Grid {
                variant: GridVariant::GreyBlack,
                sigma: None,
            },
            RuleSpec::Grid {
                variant: GridVariant::GreyWhiteBlack,
                sigma: None,
            },
            RuleSpec::StatePerm {
                map: "0:1,1:0".into(),
                degree: 2,
            },
        ]
    }

    pub fn mutants() -> Vec<RuleSpec> {
        vec![
            RuleSpec::MutantConstantName,
            RuleSpec::MutantBoundaryConflict,
            RuleSpec::MutantRadiusCheat,
        ]
    }
}

impl FromStr for RuleSpec {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.trim().split('/');
        let name = parts.next().unwrap_or_default();
        let mut params = BTreeMap::new();
        for p in parts {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| RuleError::BadParameters(format!("expected key=value, got {p:?}")))?;
            if params.insert(k.to_string(), v.to_string()).is_some() {
                return Err(RuleError::BadParameters(format!("parameter {k} given twice")));
            }
        }
        let mut take = |k: &str| params.remove(k);
        let spec = match name {
            "identity" => RuleSpec::Identity,
            "xor-ca" => RuleSpec::XorCa,
            "ca" => RuleSpec::Ca {
                table: take("h").unwrap_or_else(|| XOR_TABLE.to_string()),
                quiescent: take("q").unwrap_or_else(|| "0".into()),
            },
            "grid" | "grid-grey-black" | "grid-grey-white-black" => RuleSpec::Grid {
                variant: name.parse()?,
                sigma: take("sigma").map(|s| s.split(',').map(str::to_string).collect()),
            },
            "state-perm" => RuleSpec::StatePerm {
                map: take("map").ok_or_else(|| RuleError::BadParameters("state-perm needs map=".into()))?,
                degree: match take("pi") {
                    Some(p) => p
                        .parse()
                        .map_err(|_| RuleError::BadParameters(format!("bad degree {p:?}")))?,
                    None => 2,
                },
            },
            "mutant-constant-name" => RuleSpec::MutantConstantName,
            "mutant-boundary-conflict" => RuleSpec::MutantBoundaryConflict,
            "mutant-radius-cheat" => RuleSpec::MutantRadiusCheat,
            other => return Err(RuleError::UnknownRule(other.into())),
        };
        if let Some(k) = params.keys().next() {
            return Err(RuleError::BadParameters(format!("unknown parameter {k} for {name}")));
        }
        Ok(spec)
    }
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleSpec::Identity => f.write_str("identity"),
            RuleSpec::XorCa => f.write_str("xor-ca"),
            RuleSpec::Ca { table, quiescent } => write!(f, "ca/h={table}/q={quiescent}"),
            RuleSpec::Grid { variant, sigma } => {
                write!(f, "{variant}")?;
                if let Some(s) = sigma {
                    write!(f, "/sigma={}", s.join(","))?;
                }
                Ok(())
            }
            RuleSpec::StatePerm { map, degree } => write!(f, "state-perm/map={map}/pi={degree}"),
            RuleSpec::MutantConstantName => f.write_str("mutant-constant-name"),
            RuleSpec::MutantBoundaryConflict => f.write_str("mutant-boundary-conflict"),
            RuleSpec::MutantRadiusCheat => f.write_str("mutant-radius-cheat"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for text in [
            "identity",
            "xor-ca",
            "ca/h=00:0,01:1,10:1,11:0/q=0",
            "grid",
            "grid/sigma=a,b",
            "grid-grey-black",
            "grid-grey-white-black",
            "state-perm/map=0:1,1:0/pi=2",
            "mutant-constant-name",
            "mutant-boundary-conflict",
            "mutant-radius-cheat",
        ] {
            let spec: RuleSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
            spec.build(None).unwrap();
        }
    }

    #[test]
    fn rejects_unknown_names_and_parameters() {
        assert!(matches!("nope".parse::<RuleSpec>(), Err(RuleError::UnknownRule(_))));
        assert!("xor-ca/h=1".parse::<RuleSpec>().is_err());
        assert!("state-perm".parse::<RuleSpec>().is_err());
        assert!("ca/h=00:1,01:1,10:1,11:0".parse::<RuleSpec>().unwrap().build(None).is_err());
    }

    #[test]
    fn identity_uses_context() {
        let sig = Signature::new([sym("grey")], [sym("e")], 4);
        let rule = RuleSpec::Identity.build(Some(&sig)).unwrap();
        assert_eq!(rule.signature(), &sig);
    }
}
