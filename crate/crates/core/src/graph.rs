//! Static undirected interaction graph between agents.

use std::collections::BTreeSet;

use crate::error::ValidationError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionGraph {
    neighbors: Vec<Vec<usize>>,
}

impl InteractionGraph {
    /// Graph with `agents` vertices and no edges.
    pub fn empty(agents: usize) -> Self {
        Self {
            neighbors: vec![Vec::new(); agents],
        }
    }

    pub fn complete(agents: usize) -> Self {
        let neighbors = (0..agents)
            .map(|i| (0..agents).filter(|&j| j != i).collect())
            .collect();
        Self { neighbors }
    }

    /// Builds the graph from an edge list of vertex indices. Duplicate edges
    /// (in either orientation) collapse to one.
    pub fn from_edges(agents: usize, edges: &[(usize, usize)]) -> Result<Self, ValidationError> {
        let mut sets = vec![BTreeSet::new(); agents];
        for &(i, j) in edges {
            if i >= agents || j >= agents {
                return Err(ValidationError::new(format!(
                    "edge ({i}, {j}) references an agent outside 0..{agents}"
                )));
            }
            if i == j {
                return Err(ValidationError::new(format!("self-loop on agent index {i}")));
            }
            sets[i].insert(j);
            sets[j].insert(i);
        }
        Ok(Self {
            neighbors: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    pub fn agents(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors[i].binary_search(&j).is_ok()
    }

    /// Each undirected edge once, as `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.neighbors
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
            .collect()
    }

    /// Connected in the usual sense; a single vertex (or none) counts as connected.
    pub fn is_connected(&self) -> bool {
        let n = self.agents();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for &j in &self.neighbors[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_edges() {
        let g = InteractionGraph::complete(3);
        assert_eq!(g.edges(), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(g.is_connected());
        assert!(g.has_edge(2, 0));
    }

    #[test]
    fn connectivity() {
        assert!(InteractionGraph::empty(1).is_connected());
        assert!(!InteractionGraph::empty(2).is_connected());
        let path = InteractionGraph::from_edges(3, &[(0, 2), (2, 1)]).unwrap();
        assert!(path.is_connected());
        assert_eq!(path.neighbors(2), &[0, 1]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(InteractionGraph::from_edges(2, &[(1, 1)]).is_err());
        assert!(InteractionGraph::from_edges(2, &[(0, 2)]).is_err());
    }
}
