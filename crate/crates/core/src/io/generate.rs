use std::fmt;
use std::str::FromStr;

use crate::graph::Graph;
use crate::io::IoError;
use crate::name::{Port, Symbol, VertexName, DEFAULT_EDGE_STATE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Single,
    Line,
    Cycle,
    Grid,
}

impl FromStr for Family {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" => Ok(Family::Single),
            "line" => Ok(Family::Line),
            "cycle" => Ok(Family::Cycle),
            "grid" => Ok(Family::Grid),
            other => Err(IoError::BadParameters(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Single => "single",
            Family::Line => "line",
            Family::Cycle => "cycle",
            Family::Grid => "grid",
        })
    }
}

/// Parses a comma-separated state list.
pub fn parse_states(csv: &str) -> Result<Vec<Symbol>, IoError> {
    csv.split(',')
        .map(|s| Symbol::new(s.trim()).map_err(|e| IoError::BadParameters(e.to_string())))
        .collect()
}

fn name(i: usize) -> VertexName {
    VertexName::new(&format!("v{i}")).expect("valid name")
}

/// Builds a family member with vertices `v0, v1, …`. `states` holds one state
/// for every vertex, or a single state for all of them; it defaults to `0`.
/// `n` is the side length for grids and ignored for `single`.
pub fn generate(family: Family, n: usize, states: &[Symbol]) -> Result<Graph, IoError> {
    if n == 0 {
        return Err(IoError::BadParameters("n must be at least 1".into()));
    }
    let count = match family {
        Family::Single => 1,
        Family::Line | Family::Cycle => n,
        Family::Grid => n
            .checked_mul(n)
            .ok_or_else(|| IoError::BadParameters("grid too large".into()))?,
    };
    let default = [Symbol::new("0").expect("valid symbol")];
    let states = if states.is_empty() { &default[..] } else { states };
    if states.len() != 1 && states.len() != count {
        return Err(IoError::BadParameters(format!(
            "{} states given for {count} vertices",
            states.len()
        )));
    }
    let degree = match family {
        Family::Line | Family::Cycle => 2,
        Family::Single | Family::Grid => 4,
    };
    let mut g = Graph::new(degree);
    for i in 0..count {
        g.add_stated(name(i), states[if states.len() == 1 { 0 } else { i }].clone());
    }
    let e = Symbol::new(DEFAULT_EDGE_STATE).expect("valid symbol");
    let mut link = |a: usize, i: u32, b: usize, j: u32| {
        g.add_edge(Port::new(name(a), i), Port::new(name(b), j), e.clone())
            .expect("generated wiring is monogamous")
    };
    match family {
        Family::Single => {}
        Family::Line => (1..n).for_each(|i| link(i - 1, 2, i, 1)),
        Family::Cycle => (0..n).for_each(|i| link(i, 2, (i + 1) % n, 1)),
        Family::Grid => {
            for y in 0..n {
                for x in 0..n {
                    let v = y * n + x;
                    if x + 1 < n {
                        link(v, 1, v + 1, 3);
                    }
                    if y + 1 < n {
                        link(v, 2, v + n, 4);
                    }
                }
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::name::{sym, vn};

    #[test]
    fn families() {
        let g = generate(Family::Line, 5, &parse_states("1,0,0,1,1").unwrap()).unwrap();
        assert_eq!((g.len(), g.edge_count(), g.degree()), (5, 4, 2));
        assert_eq!(g.state(&vn("v3")), Some(&sym("1")));

        let g = generate(Family::Cycle, 3, &[]).unwrap();
        assert_eq!(g.edge_count(), 3);
        for v in g.vertices() {
            assert_eq!(g.ports_of(v).count(), 2);
        }
        let g = generate(Family::Cycle, 1, &[]).unwrap();
        assert_eq!(g.edge_count(), 1);

        let g = generate(Family::Single, 7, &[sym("grey")]).unwrap();
        assert_eq!((g.len(), g.degree()), (1, 4));

        let g = generate(Family::Grid, 3, &[]).unwrap();
        assert_eq!((g.len(), g.edge_count()), (9, 12));
    }

    #[test]
    fn bad_parameters() {
        assert!(generate(Family::Line, 0, &[]).is_err());
        assert!(generate(Family::Line, 3, &[sym("0"), sym("1")]).is_err());
        assert!("torus".parse::<Family>().is_err());
    }
}
