//! Exact isomorphism testing for small port graphs.
//!
//! Ports fix the local structure, so once one vertex of a connected
//! component is mapped the rest of the component is forced. The search picks
//! a root per component and tries each compatible image for it.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::graph::{Direction, Graph, GraphError};
use crate::name::{Renaming, Symbol, VertexName};

/// Default bound on the number of vertices accepted by [`isomorphic`].
pub const DEFAULT_SIZE_GUARD: usize = 64;

/// Local shape of a vertex that any isomorphism must preserve.
type Shape = (Option<Symbol>, Vec<(u32, Direction, u32, Symbol)>);

fn shape(g: &Graph, v: &VertexName) -> Shape {
    let ports = g
        .ports_of(v)
        .map(|(i, att)| (i, att.direction, att.partner.index, att.state.clone()))
        .collect();
    (g.state(v).cloned(), ports)
}

pub fn isomorphic(g: &Graph, h: &Graph) -> Result<bool, GraphError> {
    isomorphic_with_guard(g, h, DEFAULT_SIZE_GUARD)
}

pub fn isomorphic_with_guard(g: &Graph, h: &Graph, guard: usize) -> Result<bool, GraphError> {
    Ok(find_isomorphism_with_guard(g, h, guard)?.is_some())
}

/// A renaming `R` with `g.rename(R) == h`, if one exists.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Result<Option<Renaming>, GraphError> {
    find_isomorphism_with_guard(g, h, DEFAULT_SIZE_GUARD)
}

pub fn find_isomorphism_with_guard(
    g: &Graph,
    h: &Graph,
    guard: usize,
) -> Result<Option<Renaming>, GraphError> {
    for graph in [g, h] {
        if graph.len() > guard {
            return Err(GraphError::SizeGuardExceeded {
                size: graph.len(),
                limit: guard,
            });
        }
    }
    if g.degree() != h.degree() || g.len() != h.len() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let g_shapes: BTreeMap<&VertexName, Shape> = g.vertices().map(|v| (v, shape(g, v))).collect();
    let h_shapes: BTreeMap<&VertexName, Shape> = h.vertices().map(|v| (v, shape(h, v))).collect();
    let mut g_multiset: Vec<&Shape> = g_shapes.values().collect();
    let mut h_multiset: Vec<&Shape> = h_shapes.values().collect();
    g_multiset.sort();
    h_multiset.sort();
    if g_multiset != h_multiset {
        return Ok(None);
    }

    let mut mapping: BTreeMap<VertexName, VertexName> = BTreeMap::new();
    let mut used: BTreeSet<VertexName> = BTreeSet::new();
    for root in g.vertices() {
        if mapping.contains_key(root) {
            continue;
        }
        let mut matched = false;
        for candidate in h.vertices() {
            if used.contains(candidate) || h_shapes[candidate] != g_shapes[root] {
                continue;
            }
            if let Some(component) = propagate(g, h, root, candidate, &used) {
                for (a, b) in component {
                    used.insert(b.clone());
                    mapping.insert(a, b);
                }
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(None);
        }
    }
    let renaming = Renaming::from_pairs(mapping).expect("mapping is injective by construction");
    debug_assert_eq!(g.rename(&renaming).as_ref(), Ok(h));
    Ok(Some(renaming))
}

/// Extends `root -> image` over the component of `root`, following ports.
fn propagate(
    g: &Graph,
    h: &Graph,
    root: &VertexName,
    image: &VertexName,
    used: &BTreeSet<VertexName>,
) -> Option<BTreeMap<VertexName, VertexName>> {
    let mut map = BTreeMap::new();
    let mut taken = BTreeSet::new();
    map.insert(root.clone(), image.clone());
    taken.insert(image.clone());
    let mut queue = VecDeque::from([(root.clone(), image.clone())]);
    while let Some((x, y)) = queue.pop_front() {
        if g.state(&x) != h.state(&y) {
            return None;
        }
        let hx: Vec<_> = g.ports_of(&x).collect();
        let hy: Vec<_> = h.ports_of(&y).collect();
        if hx.len() != hy.len() {
            return None;
        }
        for ((i, a), (j, b)) in hx.into_iter().zip(hy) {
            if i != j
                || a.direction != b.direction
                || a.state != b.state
                || a.partner.index != b.partner.index
            {
                return None;
            }
            let (x2, y2) = (&a.partner.vertex, &b.partner.vertex);
            match map.get(x2) {
                Some(mapped) if mapped == y2 => {}
                Some(_) => return None,
                None => {
                    if used.contains(y2) || taken.contains(y2) {
                        return None;
                    }
                    map.insert(x2.clone(), y2.clone());
                    taken.insert(y2.clone());
                    queue.push_back((x2.clone(), y2.clone()));
                }
            }
        }
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::name::{sym, vn, Port};

    fn ring(names: &[&str], closed: bool) -> Graph {
        let mut g = Graph::new(2);
        for n in names {
            g.add_stated(vn(n), sym("0"));
        }
        let k = names.len();
        let edges = if closed { k } else { k - 1 };
        for i in 0..edges {
            let (a, b) = (names[i], names[(i + 1) % k]);
            g.add_edge(Port::new(vn(a), 2), Port::new(vn(b), 1), sym("e"))
                .unwrap();
        }
        g
    }

    #[test]
    fn renamed_graph_is_isomorphic() {
        let g = ring(&["a", "b", "c"], false);
        let h = g.rename(&Renaming::swap(vn("a"), vn("c"))).unwrap();
        assert!(isomorphic(&g, &h).unwrap());
        let r = find_isomorphism(&g, &h).unwrap().unwrap();
        assert_eq!(g.rename(&r).unwrap(), h);
    }

    #[test]
    fn line_is_not_a_cycle() {
        let line = ring(&["a", "b", "c"], false);
        let cycle = ring(&["a", "b", "c"], true);
        assert!(!isomorphic(&line, &cycle).unwrap());
    }

    #[test]
    fn states_and_orientation_matter() {
        let g = ring(&["a", "b"], false);
        let mut h = g.clone();
        h.set_state(&vn("a"), sym("1")).unwrap();
        assert!(!isomorphic(&g, &h).unwrap());

        let mut rev = Graph::new(2);
        rev.add_stated(vn("a"), sym("0"));
        rev.add_stated(vn("b"), sym("0"));
        rev.add_edge(Port::new(vn("b"), 1), Port::new(vn("a"), 2), sym("e"))
            .unwrap();
        assert!(!isomorphic(&g, &rev).unwrap());
    }

    #[test]
    fn repeated_components_are_matched() {
        let g = ring(&["a", "b"], false)
            .union(&ring(&["c", "d"], false))
            .unwrap();
        let h = ring(&["x", "y"], false)
            .union(&ring(&["p", "q"], false))
            .unwrap();
        assert!(isomorphic(&g, &h).unwrap());
    }

    #[test]
    fn guard_is_enforced() {
        let names: Vec<String> = (0..5).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let g = ring(&refs, false);
        assert!(matches!(
            isomorphic_with_guard(&g, &g, 4),
            Err(GraphError::SizeGuardExceeded { size: 5, limit: 4 })
        ));
    }
}
