//! Fixtures shared by the benchmarks.

use cgd_core::{generate, Family, Graph, Symbol};

/// An `n × n` grid with every vertex in state `0`.
pub fn grid(n: usize) -> Graph {
    generate(Family::Grid, n, &[]).expect("valid grid")
}

/// A line of `n` cells with a fixed pseudo-random pattern.
pub fn line(n: usize) -> Graph {
    let states: Vec<Symbol> = (0..n)
        .map(|i| Symbol::new(if (i * 7 + i / 3) % 5 < 2 { "1" } else { "0" }).expect("valid symbol"))
        .collect();
    generate(Family::Line, n, &states).expect("valid line")
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixtures() {
        assert_eq!(super::grid(4).len(), 16);
        assert_eq!(super::line(10).edge_count(), 9);
    }
}
