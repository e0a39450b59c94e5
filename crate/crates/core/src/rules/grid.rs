//! The inflating grid: every vertex becomes a 2×2 block of vertices.
//!
//! Ports are 1 = East, 2 = North, 3 = West, 4 = South. The block of `v` is
//! `v.0` (north-west), `v.1` (north-east), `v.2` (south-west) and `v.3`
//! (south-east). An external edge leaving `v` through port `i` towards `w:j`
//! becomes two parallel edges between the side `i` of `v`'s block and the
//! side `j` of `w`'s block, keeping the orientation, the edge state and the
//! ports.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::graph::{Direction, Disk, Graph, Signature};
use crate::name::{sym, Port, Symbol, VertexName, DEFAULT_EDGE_STATE};
use crate::rules::{center_of, Domain, LocalRule, Rule, RuleError};

pub const GREY: &str = "grey";
pub const WHITE: &str = "white";
pub const BLACK: &str = "black";

const NW: u32 = 0;
const NE: u32 = 1;
const SW: u32 = 2;
const SE: u32 = 3;

/// Internal wiring of a block as `(from, port, to, port)`.
const INTERNAL: [(u32, u32, u32, u32); 4] = [(NW, 1, NE, 3), (SW, 1, SE, 3), (SW, 2, NW, 4), (SE, 2, NE, 4)];

/// Block members along each side, listed clockwise.
fn side(port: u32) -> [u32; 2] {
    match port {
        1 => [NE, SE],
        2 => [NW, NE],
        3 => [SW, NW],
        _ => [SE, SW],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GridVariant {
    Plain,
    GreyBlack,
    GreyWhiteBlack,
}

impl GridVariant {
    pub const ALL: [GridVariant; 3] = [GridVariant::Plain, GridVariant::GreyBlack, GridVariant::GreyWhiteBlack];
}

impl fmt::Display for GridVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridVariant::Plain => "grid",
            GridVariant::GreyBlack => "grid-grey-black",
            GridVariant::GreyWhiteBlack => "grid-grey-white-black",
        })
    }
}

impl FromStr for GridVariant {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "grid" => Ok(GridVariant::Plain),
            "grid-grey-black" => Ok(GridVariant::GreyBlack),
            "grid-grey-white-black" => Ok(GridVariant::GreyWhiteBlack),
            other => Err(RuleError::UnknownRule(other.into())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct InflatingGridRule {
    variant: GridVariant,
    signature: Signature,
    edge: Symbol,
}

impl InflatingGridRule {
    /// The plain variant copies states over `alphabet`; the coloured variants
    /// use their fixed colour sets.
    pub fn new(variant: GridVariant, alphabet: Option<Vec<Symbol>>) -> Result<Self, RuleError> {
        let states: Vec<Symbol> = match (variant, alphabet) {
            (GridVariant::Plain, Some(a)) if !a.is_empty() => a,
            (GridVariant::Plain, Some(_)) => {
                return Err(RuleError::BadParameters("empty alphabet".into()))
            }
            (GridVariant::Plain, None) => vec![sym("0"), sym("1")],
            (_, Some(_)) => {
                return Err(RuleError::BadParameters(format!(
                    "{variant} has a fixed alphabet"
                )))
            }
            (GridVariant::GreyBlack, None) => vec![sym(GREY), sym(BLACK)],
            (GridVariant::GreyWhiteBlack, None) => vec![sym(GREY), sym(WHITE), sym(BLACK)],
        };
        let edge = sym(DEFAULT_EDGE_STATE);
        Ok(Self {
            variant,
            signature: Signature::new(states, [edge.clone()], 4),
            edge,
        })
    }

    pub fn variant(&self) -> GridVariant {
        self.variant
    }

    /// States of `v.0 .. v.3` for a vertex in state `s`.
    fn colours(&self, center: &VertexName, s: &Symbol) -> Result<[Symbol; 4], RuleError> {
        let all = |c: &str| [sym(c), sym(c), sym(c), sym(c)];
        let out = match (self.variant, s.as_str()) {
            (GridVariant::Plain, _) => [s.clone(), s.clone(), s.clone(), s.clone()],
            (GridVariant::GreyBlack, GREY) => [sym(GREY), sym(GREY), sym(GREY), sym(BLACK)],
            (GridVariant::GreyBlack, BLACK) => all(BLACK),
            (GridVariant::GreyWhiteBlack, WHITE) => [sym(WHITE), sym(WHITE), sym(WHITE), sym(BLACK)],
            (GridVariant::GreyWhiteBlack, GREY) => all(WHITE),
            (GridVariant::GreyWhiteBlack, BLACK) => all(BLACK),
            _ => {
                return Err(RuleError::malformed(
                    center,
                    format!("state {s} has no colouring in {}", self.variant),
                ))
            }
        };
        Ok(out)
    }
}

pub fn inflating_grid_rule(variant: GridVariant) -> Rule {
    Arc::new(InflatingGridRule::new(variant, None).expect("built-in alphabet"))
}

impl LocalRule for InflatingGridRule {
    fn name(&self) -> String {
        self.variant.to_string()
    }

    fn radius(&self) -> usize {
        0
    }

    fn bound(&self) -> usize {
        12
    }

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn domain(&self) -> Domain {
        Domain::PortGraphs
    }

    fn apply(&self, disk: &Disk) -> Result<Graph, RuleError> {
        let center = center_of(disk)?;
        let g = disk.graph();
        if g.degree() != 4 {
            return Err(RuleError::malformed(
                center,
                format!("grid disks have degree 4, found {}", g.degree()),
            ));
        }
        let state = g
            .state(center)
            .ok_or_else(|| RuleError::malformed(center, "vertex has no state"))?;
        let colours = self.colours(center, state)?;

        let mut out = Graph::new(4);
        for (k, c) in colours.into_iter().enumerate() {
            out.add_stated(center.child(k as u32), c);
        }
        for (a, i, b, j) in INTERNAL {
            out.add_edge(
                Port::new(center.child(a), i),
                Port::new(center.child(b), j),
                self.edge.clone(),
            )?;
        }
        for (i, att) in g.ports_of(center) {
            let (w, j) = (&att.partner.vertex, att.partner.index);
            let (mine, theirs) = (side(i), side(j));
            for k in 0..2 {
                let here = Port::new(center.child(mine[k]), i);
                let there = Port::new(w.child(theirs[1 - k]), j);
                let (s, t) = match att.direction {
                    Direction::Outgoing => (here, there),
                    Direction::Incoming => (there, here),
                };
                out.ensure_edge(s, t, att.state.clone())?;
            }
        }
        Ok(out)
    }
}
