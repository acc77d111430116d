//! Exhaustive facet-path search, usable only on tiny inputs.

use thiserror::Error;

use crate::lattice::{LatticeGraph, Node};

pub const DEFAULT_FACET_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BruteForceError {
    #[error("{facets} facets exceed the exhaustive search limit of {limit}")]
    TooLarge { facets: usize, limit: usize },
}

/// A facet path (facets only, no edge elements) if one exists.
pub fn brute_force_facet_path(g: &LatticeGraph) -> Result<Option<Vec<Node>>, BruteForceError> {
    brute_force_facet_path_with_limit(g, DEFAULT_FACET_LIMIT)
}

/// Depth-first search over `(current vertex, used facets)` states, with a
/// table of states already known to be dead ends.
pub fn brute_force_facet_path_with_limit(
    g: &LatticeGraph,
    limit: usize,
) -> Result<Option<Vec<Node>>, BruteForceError> {
    let facets = g.facet_count();
    // The dead-state table has `V * 2^F` bits.
    let limit = limit.min(24);
    if facets > limit {
        return Err(BruteForceError::TooLarge { facets, limit });
    }
    if facets == 0 {
        return Ok(None);
    }
    let mut search = Search {
        g,
        full: (1u64 << facets) - 1,
        dead: vec![0u64; (g.vertex_count() << facets).div_ceil(64)],
        trail: Vec::with_capacity(2 * facets + 1),
    };
    for v in 0..g.vertex_count() {
        search.trail.clear();
        search.trail.push(Node::Vertex(v));
        if search.extend(v, 0) {
            return Ok(Some(search.trail));
        }
    }
    Ok(None)
}

struct Search<'a> {
    g: &'a LatticeGraph,
    full: u64,
    dead: Vec<u64>,
    trail: Vec<Node>,
}

impl Search<'_> {
    fn extend(&mut self, v: usize, used: u64) -> bool {
        if used == self.full {
            return true;
        }
        let key = (v << self.g.facet_count()) | used as usize;
        if self.dead[key / 64] >> (key % 64) & 1 == 1 {
            return false;
        }
        for &f in self.g.vertex_facets(v) {
            if used >> f & 1 == 1 {
                continue;
            }
            for &w in self.g.facet_vertices(f) {
                if w == v {
                    continue;
                }
                self.trail.push(Node::Facet(f));
                self.trail.push(Node::Vertex(w));
                if self.extend(w, used | 1 << f) {
                    return true;
                }
                self.trail.truncate(self.trail.len() - 2);
            }
        }
        self.dead[key / 64] |= 1 << (key % 64);
        false
    }
}
