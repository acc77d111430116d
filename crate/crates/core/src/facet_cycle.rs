//! Facet cycles on genus-zero surfaces.
//!
//! The mesh is contracted edge by edge down to a tetrahedron, which has a
//! known facet cycle. Each contraction is then undone and the cycle
//! repaired locally around the restored vertex: every vertex node keeps
//! even degree and every facet keeps exactly two vertex neighbours, so the
//! final graph has an Eulerian tour that is a facet cycle.
//!
//! Triangle ids are those of the input mesh throughout. A contraction of
//! `x` into `y` kills the two triangles on edge `xy` and rewrites `x` to `y`
//! in the others, which keep their ids.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::Node;
use crate::mesh::Mesh;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FacetCycleError {
    #[error("facet cycles are only constructed for genus 0, surface has genus {genus}")]
    GenusNotZero { genus: usize },
    #[error("edge ({x}, {y}) cannot be contracted")]
    NotContractible { x: usize, y: usize },
    #[error("invariant violated after lifting through vertex {vertex}: {detail}")]
    InvariantViolated { vertex: usize, detail: String },
}

/// One undone-able contraction of `x` into `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionRecord {
    pub x: usize,
    pub y: usize,
    /// Neighbours of `x` in counterclockwise order, starting at `y`.
    pub link: Vec<usize>,
    /// `fan[i]` is the triangle `[x, link[i - 1], link[i]]` (cyclically).
    pub fan: Vec<usize>,
    /// The two triangles on edge `xy`, removed by the contraction.
    pub destroyed: [usize; 2],
}

impl ContractionRecord {
    /// `T(u)` for `u = link[i]`: the triangle `u, x, v` in counterclockwise
    /// order, together with `v`.
    fn wedge(&self, i: usize) -> (usize, usize) {
        let n = self.link.len();
        (self.fan[i], self.link[(i + n - 1) % n])
    }
}

/// Mutable triangle soup under edge contraction.
#[derive(Debug, Clone)]
pub struct ContractionMesh {
    triangles: Vec<[usize; 3]>,
    triangle_alive: Vec<bool>,
    vertex_alive: Vec<bool>,
    /// Incident triangles; may hold dead ids, pruned lazily.
    incident: Vec<Vec<usize>>,
    degree: Vec<usize>,
    edges: HashSet<(usize, usize)>,
    /// Vertices by degree 3, 4, 5; entries may be stale.
    buckets: [Vec<usize>; 3],
    live_vertices: usize,
    live_triangles: usize,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// `tri` rotated so that `v` comes first.
fn rotate_to(tri: [usize; 3], v: usize) -> [usize; 3] {
    match tri.iter().position(|&w| w == v) {
        Some(0) => tri,
        Some(1) => [tri[1], tri[2], tri[0]],
        Some(2) => [tri[2], tri[0], tri[1]],
        _ => panic!("vertex {v} not in triangle {tri:?}"),
    }
}

impl ContractionMesh {
    pub fn new<S: Scalar>(m: &Mesh<S>) -> Self {
        Self::from_triangles(m.vertex_count(), m.triangles().to_vec())
    }

    /// Assumes a valid closed surface on vertices `0..vertex_count`.
    pub fn from_triangles(vertex_count: usize, triangles: Vec<[usize; 3]>) -> Self {
        let mut incident = vec![Vec::new(); vertex_count];
        let mut edges = HashSet::with_capacity(triangles.len() * 3 / 2);
        for (t, tri) in triangles.iter().enumerate() {
            for i in 0..3 {
                incident[tri[i]].push(t);
                edges.insert(key(tri[i], tri[(i + 1) % 3]));
            }
        }
        let degree: Vec<usize> = incident.iter().map(Vec::len).collect();
        let mut c = ContractionMesh {
            triangle_alive: vec![true; triangles.len()],
            vertex_alive: vec![true; vertex_count],
            live_triangles: triangles.len(),
            triangles,
            incident,
            degree,
            edges,
            buckets: Default::default(),
            live_vertices: vertex_count,
        };
        for v in (0..vertex_count).rev() {
            c.enqueue(v);
        }
        c
    }

    pub fn vertex_count(&self) -> usize {
        self.live_vertices
    }

    pub fn triangle_count(&self) -> usize {
        self.live_triangles
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&key(a, b))
    }

    /// Live triangles with their ids.
    pub fn triangles(&self) -> impl Iterator<Item = (usize, [usize; 3])> + '_ {
        self.triangles.iter().enumerate().filter(|&(t, _)| self.triangle_alive[t]).map(|(t, &tri)| (t, tri))
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_alive.len()).filter(|&v| self.vertex_alive[v])
    }

    fn enqueue(&mut self, v: usize) {
        if (3..=5).contains(&self.degree[v]) {
            self.buckets[self.degree[v] - 3].push(v);
        }
    }

    fn live_incident(&mut self, v: usize) -> Vec<usize> {
        let alive = &self.triangle_alive;
        self.incident[v].retain(|&t| alive[t]);
        self.incident[v].clone()
    }

    /// Neighbours of `x` counterclockwise, each paired with the triangle
    /// `[x, previous, neighbour]`. Starts at `start` if given.
    fn link(&mut self, x: usize, start: Option<usize>) -> (Vec<usize>, Vec<usize>) {
        let fan = self.live_incident(x);
        let mut succ: Vec<(usize, usize, usize)> = fan
            .iter()
            .map(|&t| {
                let [_, b, c] = rotate_to(self.triangles[t], x);
                (b, c, t)
            })
            .collect();
        succ.sort_unstable();
        let next = |b: usize| {
            let i = succ.binary_search_by(|probe| probe.0.cmp(&b)).expect("closed fan");
            (succ[i].1, succ[i].2)
        };
        let first = start.unwrap_or(succ[0].0);
        let mut link = Vec::with_capacity(succ.len());
        let mut tris = Vec::with_capacity(succ.len());
        let mut u = first;
        loop {
            let (c, t) = next(u);
            link.push(c);
            tris.push(t);
            u = c;
            if u == first {
                break;
            }
        }
        // Rotate so that the listing starts at `first`.
        link.rotate_right(1);
        tris.rotate_right(1);
        debug_assert_eq!(link.len(), fan.len());
        (link, tris)
    }

    fn common_neighbours(&self, link: &[usize], y: usize) -> usize {
        link.iter().filter(|&&w| w != y && self.is_adjacent(w, y)).count()
    }

    /// An edge `(x, y)` at a vertex of degree at most five whose endpoints
    /// have exactly two common neighbours, or `None` once only a
    /// tetrahedron is left.
    pub fn select_contractible_edge(&mut self) -> Option<(usize, usize)> {
        if self.live_vertices <= 4 {
            return None;
        }
        let x = loop {
            let Some(b) = self.buckets.iter().position(|b| !b.is_empty()) else {
                panic!("a closed genus-0 surface always has a vertex of degree at most 5")
            };
            let v = self.buckets[b].pop().unwrap();
            if self.vertex_alive[v] && self.degree[v] == b + 3 {
                // Left in place for a later call in case nothing is contracted.
                self.buckets[b].push(v);
                break v;
            }
        };
        let (mut link, _) = self.link(x, None);
        link.sort_unstable();
        let y = link.iter().copied().find(|&y| self.common_neighbours(&link, y) == 2);
        Some((x, y.expect("some edge at every vertex of a larger triangulation contracts")))
    }

    /// Contracts `x` into `y`.
    pub fn contract(&mut self, x: usize, y: usize) -> Result<ContractionRecord, FacetCycleError> {
        let refuse = FacetCycleError::NotContractible { x, y };
        if x == y
            || x >= self.vertex_alive.len()
            || y >= self.vertex_alive.len()
            || !self.vertex_alive[x]
            || !self.vertex_alive[y]
            || !self.is_adjacent(x, y)
            || self.live_vertices <= 4
        {
            return Err(refuse);
        }
        let (link, fan) = self.link(x, Some(y));
        if self.common_neighbours(&link, y) != 2 {
            return Err(refuse);
        }
        let n = link.len();
        // fan[0] = [x, link[n-1], y] and fan[1] = [x, y, link[1]].
        let destroyed = [fan[0], fan[1]];
        for &t in &destroyed {
            self.triangle_alive[t] = false;
            self.live_triangles -= 1;
            for v in self.triangles[t] {
                self.degree[v] -= 1;
            }
        }
        for &t in &fan[2..] {
            let tri = &mut self.triangles[t];
            let i = tri.iter().position(|&v| v == x).unwrap();
            tri[i] = y;
            self.incident[y].push(t);
            self.degree[y] += 1;
        }
        for &w in &link {
            self.edges.remove(&key(x, w));
            if w != y {
                self.edges.insert(key(y, w));
            }
        }
        self.vertex_alive[x] = false;
        self.degree[x] = 0;
        self.incident[x] = Vec::new();
        self.live_vertices -= 1;
        for v in [y, link[1], link[n - 1]] {
            let live = self.degree[v];
            if self.incident[v].len() > 2 * live + 8 {
                let alive = &self.triangle_alive;
                self.incident[v].retain(|&t| alive[t]);
            }
            self.enqueue(v);
        }
        Ok(ContractionRecord { x, y, link, fan, destroyed })
    }

    /// Undoes `rec`, which must be the latest contraction still in effect.
    /// Linear in the degrees involved.
    pub fn uncontract(&mut self, rec: &ContractionRecord) {
        let (x, y) = (rec.x, rec.y);
        for &t in &rec.fan[2..] {
            let tri = &mut self.triangles[t];
            let i = tri.iter().position(|&v| v == y).unwrap();
            tri[i] = x;
            self.degree[y] -= 1;
        }
        for &t in &rec.destroyed {
            self.triangle_alive[t] = true;
            self.live_triangles += 1;
            for v in self.triangles[t] {
                if v != x {
                    self.degree[v] += 1;
                    if !self.incident[v].contains(&t) {
                        self.incident[v].push(t);
                    }
                }
            }
        }
        let n = rec.link.len();
        for &w in &rec.link {
            if w != y && w != rec.link[1] && w != rec.link[n - 1] {
                self.edges.remove(&key(y, w));
            }
            self.edges.insert(key(x, w));
        }
        self.vertex_alive[x] = true;
        self.degree[x] = n;
        self.incident[x] = rec.fan.clone();
        self.live_vertices += 1;
        self.enqueue(x);
    }

    /// Combinatorial check that the live triangles form a closed oriented
    /// genus-0 surface.
    pub fn validate(&self) -> Result<(), String> {
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        let mut seen = HashSet::new();
        for (t, tri) in self.triangles() {
            let mut sorted = tri;
            sorted.sort_unstable();
            if sorted[0] == sorted[1] || sorted[1] == sorted[2] {
                return Err(format!("triangle {t} repeats a vertex"));
            }
            if !seen.insert(sorted) {
                return Err(format!("triangle {t} is doubled"));
            }
            for i in 0..3 {
                if let Some(other) = directed.insert((tri[i], tri[(i + 1) % 3]), t) {
                    return Err(format!("triangles {other} and {t} share a directed edge"));
                }
            }
        }
        for &(a, b) in directed.keys() {
            if !directed.contains_key(&(b, a)) {
                return Err(format!("edge ({a}, {b}) is on a boundary"));
            }
        }
        let e = directed.len() / 2;
        if e != self.edges.len() {
            return Err("edge set out of date".into());
        }
        let euler = self.live_vertices as i64 - e as i64 + self.live_triangles as i64;
        if euler != 2 {
            return Err(format!("Euler characteristic {euler}"));
        }
        Ok(())
    }
}

/// Vertex–facet subgraph of the lattice graph in which every facet has two
/// distinct vertex neighbours. Stored per facet; `None` for facets not in
/// the graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenCoverGraph {
    pub cover: Vec<Option<[usize; 2]>>,
    pub degree: Vec<usize>,
}

impl EvenCoverGraph {
    pub fn empty(vertex_count: usize, facet_count: usize) -> Self {
        EvenCoverGraph { cover: vec![None; facet_count], degree: vec![0; vertex_count] }
    }

    pub fn set(&mut self, facet: usize, ends: [usize; 2]) {
        self.clear(facet);
        for v in ends {
            self.degree[v] += 1;
        }
        self.cover[facet] = Some(ends);
    }

    pub fn clear(&mut self, facet: usize) {
        if let Some(ends) = self.cover[facet].take() {
            for v in ends {
                self.degree[v] -= 1;
            }
        }
    }

    /// Checks the inductive invariants against the live triangles of `c`:
    /// exactly those facets covered, by two distinct corners each, every
    /// vertex of even degree and the whole graph connected.
    pub fn validate(&self, c: &ContractionMesh) -> Result<(), String> {
        let mut live = vec![false; self.cover.len()];
        for (t, tri) in c.triangles() {
            live[t] = true;
            match self.cover[t] {
                Some([a, b]) if a != b && tri.contains(&a) && tri.contains(&b) => {}
                other => return Err(format!("facet {t} {tri:?} has cover {other:?}")),
            }
        }
        if let Some(t) = (0..live.len()).find(|&t| !live[t] && self.cover[t].is_some()) {
            return Err(format!("removed facet {t} still covered"));
        }
        if let Some(v) = (0..self.degree.len()).find(|&v| self.degree[v] % 2 == 1) {
            return Err(format!("vertex {v} has odd degree {}", self.degree[v]));
        }
        let facets = self.cover.iter().filter(|c| c.is_some()).count();
        match eulerian_tour(self) {
            Some(nodes) if nodes.len() == 2 * facets + 1 => Ok(()),
            _ => Err("cover graph is disconnected".into()),
        }
    }
}

/// Facet cycle on a tetrahedron with vertices `a < b < c < d`:
/// `a, abc, b, bcd, c, cda, d, dab, a`.
pub fn base_k4_cycle(c: &ContractionMesh, vertex_count: usize, facet_count: usize) -> EvenCoverGraph {
    let vs: Vec<usize> = c.vertices().collect();
    assert_eq!(vs.len(), 4, "base case needs a tetrahedron");
    let (a, b, cc, d) = (vs[0], vs[1], vs[2], vs[3]);
    let mut g = EvenCoverGraph::empty(vertex_count, facet_count);
    for (t, tri) in c.triangles() {
        let missing = vs.iter().copied().find(|v| !tri.contains(v)).unwrap();
        let ends = match missing {
            m if m == d => [a, b],
            m if m == a => [b, cc],
            m if m == b => [cc, d],
            _ => [d, a],
        };
        g.set(t, ends);
    }
    g
}

/// Extends a cover of the contracted surface to the surface with `rec.x`
/// restored. `g` holds the contracted cover on entry.
///
/// The cover inside the link of `x` is discarded; every link vertex `u` is
/// labelled by the parity of its remaining degree, and the triangle
/// `T(u) = (u, x, v)` is joined as `v - T(u) - x` for odd `u` or as
/// `u - T(u) - v` for even `u`.
pub fn lift_cycle(g: &mut EvenCoverGraph, rec: &ContractionRecord) -> Result<(), FacetCycleError> {
    let fail = |detail: String| FacetCycleError::InvariantViolated { vertex: rec.x, detail };
    for &t in &rec.fan {
        g.clear(t);
    }
    let odd: Vec<bool> = rec.link.iter().map(|&u| g.degree[u] % 2 == 1).collect();
    if odd.iter().filter(|&&o| o).count() % 2 == 1 {
        return Err(fail("odd number of odd link vertices".into()));
    }
    for (i, &u) in rec.link.iter().enumerate() {
        let (t, v) = rec.wedge(i);
        g.set(t, if odd[i] { [v, rec.x] } else { [u, v] });
    }
    if let Some(&u) = rec.link.iter().find(|&&u| g.degree[u] % 2 == 1) {
        return Err(fail(format!("link vertex {u} left with odd degree")));
    }
    if g.degree[rec.x] % 2 == 1 {
        return Err(fail("restored vertex has odd degree".into()));
    }
    Ok(())
}

/// A closed alternating vertex / facet walk; the first vertex is repeated
/// at the end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetCycle {
    pub nodes: Vec<Node>,
}

impl FacetCycle {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Triangle ids in visiting order; consecutive triangles share a vertex.
    pub fn facet_order(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Facet(f) => Some(*f),
                _ => None,
            })
            .collect()
    }
}

/// Hierholzer's walk over the multigraph whose edges are the covered facets.
fn eulerian_tour(g: &EvenCoverGraph) -> Option<Vec<Node>> {
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); g.degree.len()];
    for (f, c) in g.cover.iter().enumerate() {
        if let Some([a, b]) = *c {
            adjacency[a].push(f);
            adjacency[b].push(f);
        }
    }
    let start = g.cover.iter().flatten().next()?[0];
    for list in &mut adjacency {
        list.reverse();
    }
    let mut used = vec![false; g.cover.len()];
    // Stack of (vertex, facet used to arrive).
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut tour = Vec::new();
    while let Some(&(v, arrived)) = stack.last() {
        let next = loop {
            match adjacency[v].pop() {
                Some(f) if used[f] => continue,
                other => break other,
            }
        };
        match next {
            Some(f) => {
                used[f] = true;
                let [a, b] = g.cover[f].unwrap();
                stack.push((if a == v { b } else { a }, Some(f)));
            }
            None => {
                stack.pop();
                tour.push(Node::Vertex(v));
                if let Some(f) = arrived {
                    tour.push(Node::Facet(f));
                }
            }
        }
    }
    tour.reverse();
    Some(tour)
}

/// The Eulerian tour of a valid cover graph as a facet cycle.
pub fn eulerian_facet_cycle(g: &EvenCoverGraph) -> Result<FacetCycle, FacetCycleError> {
    let facets = g.cover.iter().filter(|c| c.is_some()).count();
    let fail = |detail: &str| FacetCycleError::InvariantViolated { vertex: usize::MAX, detail: detail.into() };
    if let Some(v) = (0..g.degree.len()).find(|&v| g.degree[v] % 2 == 1) {
        return Err(FacetCycleError::InvariantViolated { vertex: v, detail: "odd degree".into() });
    }
    let nodes = eulerian_tour(g).ok_or_else(|| fail("empty cover"))?;
    if nodes.len() != 2 * facets + 1 {
        return Err(fail("cover graph is disconnected"));
    }
    Ok(FacetCycle { nodes })
}

/// A facet cycle of a genus-zero mesh.
pub fn facet_cycle<S: Scalar>(m: &Mesh<S>) -> Result<FacetCycle, FacetCycleError> {
    facet_cycle_with(m, false)
}

/// As [`facet_cycle`]; with `checked` set, the surface and the full cover
/// invariants are re-validated at every level, which costs quadratic time.
pub fn facet_cycle_with<S: Scalar>(m: &Mesh<S>, checked: bool) -> Result<FacetCycle, FacetCycleError> {
    let genus = m.genus();
    if genus != 0 {
        return Err(FacetCycleError::GenusNotZero { genus });
    }
    let mut c = ContractionMesh::new(m);
    let mut records = Vec::with_capacity(m.vertex_count().saturating_sub(4));
    while let Some((x, y)) = c.select_contractible_edge() {
        records.push(c.contract(x, y)?);
        if checked {
            c.validate().map_err(|detail| FacetCycleError::InvariantViolated { vertex: x, detail })?;
        }
    }
    let mut g = base_k4_cycle(&c, m.vertex_count(), m.triangle_count());
    while let Some(rec) = records.pop() {
        lift_cycle(&mut g, &rec)?;
        if checked {
            // The lift itself only needs the record.
            c.uncontract(&rec);
            g.validate(&c).map_err(|detail| FacetCycleError::InvariantViolated { vertex: rec.x, detail })?;
        }
    }
    eulerian_facet_cycle(&g)
}
