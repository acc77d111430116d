//! Cutting a closed surface open into a triangulated disk.

use std::collections::HashMap;

use thiserror::Error;

use crate::lattice::{LatticeGraph, Node};
use crate::mesh::Mesh;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiskError {
    #[error("a disk needs at least one triangle")]
    Empty,
    #[error("triangle {face} repeats a vertex")]
    RepeatedVertex { face: usize },
    #[error("vertex {vertex} is not used by any triangle")]
    UnusedVertex { vertex: usize },
    #[error("edge ({}, {}) has {count} incident triangles", .edge.0, .edge.1)]
    NonManifoldEdge { edge: (usize, usize), count: usize },
    #[error("edge ({}, {}) is traversed in the same direction twice", .edge.0, .edge.1)]
    InconsistentOrientation { edge: (usize, usize) },
    #[error("boundary edges do not form a single simple cycle")]
    BoundaryNotACycle,
    #[error("Euler characteristic is {euler}, a disk has 1")]
    NotADisk { euler: i64 },
}

/// An edge of the disk. `vertices` is the direction in which `left`
/// traverses it; `right`, when present, traverses it the other way.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiskEdge {
    pub vertices: [usize; 2],
    pub left: usize,
    pub right: Option<usize>,
    pub mesh_edge: usize,
}

impl DiskEdge {
    pub fn is_boundary(&self) -> bool {
        self.right.is_none()
    }
}

/// Triangulated topological disk with disk-local vertex ids.
///
/// Triangle ids coincide with the ids of the triangles they came from.
#[derive(Debug, Clone)]
pub struct Disk {
    triangles: Vec<[usize; 3]>,
    triangle_edges: Vec<[usize; 3]>,
    edges: Vec<DiskEdge>,
    vertex_origin: Vec<usize>,
    boundary: Vec<usize>,
    boundary_edges: Vec<usize>,
    on_boundary: Vec<bool>,
    cut_edges: Vec<usize>,
}

/// Mesh edges to cut so the surface opens into a disk.
///
/// Genus zero: the lexicographically smallest edge. Otherwise a tree-cotree
/// cut graph (breadth-first trees from vertex 0 and triangle 0) with
/// dangling tree branches pruned away.
pub fn cut_graph<S: Scalar>(m: &Mesh<S>) -> Vec<usize> {
    if m.genus() == 0 {
        return vec![0];
    }
    let n = m.vertex_count();
    let mut adjacency = vec![Vec::new(); n];
    for (e, &[a, b]) in m.edges().iter().enumerate() {
        adjacency[a].push((b, e));
        adjacency[b].push((a, e));
    }

    let mut in_tree = vec![false; m.edge_count()];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                in_tree[e] = true;
                queue.push_back(w);
            }
        }
    }

    let mut in_cotree = vec![false; m.edge_count()];
    let mut seen = vec![false; m.triangle_count()];
    queue.push_back(0);
    seen[0] = true;
    while let Some(t) = queue.pop_front() {
        for (side, &e) in m.triangle_edges(t).iter().enumerate() {
            let other = m.neighbors(t)[side];
            if !in_tree[e] && !seen[other] {
                seen[other] = true;
                in_cotree[e] = true;
                queue.push_back(other);
            }
        }
    }

    let mut cut: Vec<bool> = (0..m.edge_count()).map(|e| !in_cotree[e]).collect();
    let mut degree = vec![0usize; n];
    for (e, &[a, b]) in m.edges().iter().enumerate() {
        if cut[e] {
            degree[a] += 1;
            degree[b] += 1;
        }
    }
    let mut leaves: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    while let Some(v) = leaves.pop() {
        if degree[v] != 1 {
            continue;
        }
        let &(w, e) = adjacency[v].iter().find(|&&(_, e)| cut[e]).unwrap();
        cut[e] = false;
        degree[v] = 0;
        degree[w] -= 1;
        if degree[w] == 1 {
            leaves.push(w);
        }
    }
    let kept: Vec<usize> = (0..m.edge_count()).filter(|&e| cut[e]).collect();
    debug_assert!(!kept.is_empty());
    kept
}

/// Cuts `m` open along [`cut_graph`].
///
/// Each mesh vertex becomes one disk vertex per wedge of its star between
/// consecutive cut edges (one copy if no cut edge touches it).
pub fn cut_to_disk<S: Scalar>(m: &Mesh<S>) -> Disk {
    let cut_edges = cut_graph(m);
    let mut is_cut = vec![false; m.edge_count()];
    for &e in &cut_edges {
        is_cut[e] = true;
    }

    // Disk copies of each vertex: one per incident cut edge, at least one.
    let mut copies = vec![0usize; m.vertex_count()];
    for &e in &cut_edges {
        for v in m.edges()[e] {
            copies[v] += 1;
        }
    }
    let mut base = Vec::with_capacity(m.vertex_count());
    let mut vertex_origin = Vec::with_capacity(m.vertex_count() + 2 * cut_edges.len());
    for (v, &k) in copies.iter().enumerate() {
        base.push(vertex_origin.len());
        vertex_origin.extend(std::iter::repeat_n(v, k.max(1)));
    }

    let mut triangles = Vec::with_capacity(m.triangle_count());
    let mut first_corner = vec![usize::MAX; m.vertex_count()];
    for (t, tri) in m.triangles().iter().enumerate() {
        triangles.push(tri.map(|v| base[v]));
        for (c, &v) in tri.iter().enumerate() {
            if copies[v] > 0 && first_corner[v] == usize::MAX {
                first_corner[v] = 3 * t + c;
            }
        }
    }
    // Vertices on the cut: walk the star and start a new copy after each
    // cut edge.
    let mut fan = Vec::new();
    for v in (0..m.vertex_count()).filter(|&v| copies[v] > 0) {
        let start = first_corner[v];
        fan.clear();
        fan.extend(m.fan_from(start / 3, start % 3));
        // Edge crossed when moving from fan[j] to fan[j + 1].
        let crossed = |j: usize| m.triangle_edges(fan[j].0)[fan[j].1];
        let first_cut = (0..fan.len()).find(|&j| is_cut[crossed(j)]).expect("vertex on the cut");
        let mut local = base[v];
        for k in 0..fan.len() {
            let j = (first_cut + 1 + k) % fan.len();
            let (t, c) = fan[j];
            triangles[t][c] = local;
            if k + 1 < fan.len() && is_cut[crossed(j)] {
                local += 1;
            }
        }
        debug_assert_eq!(local + 1, base[v] + copies[v]);
    }

    // Disk edge ids follow mesh edge order; a cut edge becomes two boundary
    // edges, the copy on its first triangle first.
    let mut disk_edge = Vec::with_capacity(m.edge_count());
    let mut extra = 0;
    for &cut in &is_cut {
        disk_edge.push(disk_edge.len() + extra);
        extra += usize::from(cut);
    }
    let placeholder = DiskEdge { vertices: [0, 0], left: 0, right: None, mesh_edge: 0 };
    let mut edges = vec![placeholder; m.edge_count() + cut_edges.len()];
    let mut triangle_edges = Vec::with_capacity(m.triangle_count());
    for t in 0..m.triangle_count() {
        let sides = m.triangle_edges(t);
        triangle_edges.push(std::array::from_fn(|s| {
            let e = sides[s];
            let [t0, t1] = m.edge_triangles(e);
            let vertices = [triangles[t][s], triangles[t][(s + 1) % 3]];
            if is_cut[e] {
                let id = disk_edge[e] + usize::from(t == t1);
                edges[id] = DiskEdge { vertices, left: t, right: None, mesh_edge: e };
                id
            } else {
                if t == t0 {
                    edges[disk_edge[e]] = DiskEdge { vertices, left: t0, right: Some(t1), mesh_edge: e };
                }
                disk_edge[e]
            }
        }));
    }

    // Cutting a connected surface leaves it connected.
    let disk = Disk::assemble(triangles, triangle_edges, edges, vertex_origin, cut_edges, false)
        .expect("cutting along a cut graph yields a disk");
    assert_eq!(disk.euler_characteristic(), 1);
    disk
}

/// Endpoints of the boundary edge with the smallest pair of original
/// vertex ids; `s` is the one with the smaller original id.
pub fn pick_terminals(d: &Disk) -> (usize, usize) {
    let &e = d
        .boundary_edges
        .iter()
        .min_by_key(|&&e| {
            let [a, b] = d.edges[e].vertices.map(|v| d.vertex_origin[v]);
            ((a.min(b), a.max(b)), e)
        })
        .expect("a disk has a boundary");
    let [a, b] = d.edges[e].vertices;
    if d.vertex_origin[a] < d.vertex_origin[b] {
        (a, b)
    } else {
        (b, a)
    }
}

impl Disk {
    /// Builds a standalone disk from counterclockwise triangles over vertices
    /// `0..n`. Origins are the identity.
    pub fn from_triangles(triangles: Vec<[usize; 3]>) -> Result<Self, DiskError> {
        if triangles.is_empty() {
            return Err(DiskError::Empty);
        }
        let n = triangles.iter().flatten().max().unwrap() + 1;
        let mut used = vec![false; n];
        let mut sides: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(DiskError::RepeatedVertex { face: t });
            }
            for side in 0..3 {
                used[tri[side]] = true;
                let (a, b) = (tri[side], tri[(side + 1) % 3]);
                sides.entry((a.min(b), a.max(b))).or_default().push((t, side));
            }
        }
        if let Some(vertex) = used.iter().position(|&u| !u) {
            return Err(DiskError::UnusedVertex { vertex });
        }
        let mut keys: Vec<_> = sides.keys().copied().collect();
        keys.sort_unstable();
        let mut edges = Vec::with_capacity(keys.len());
        let mut triangle_edges = vec![[usize::MAX; 3]; triangles.len()];
        for key in keys {
            let uses = &sides[&key];
            let id = edges.len();
            let directed = |(t, s): (usize, usize)| [triangles[t][s], triangles[t][(s + 1) % 3]];
            match uses.as_slice() {
                &[only] => {
                    triangle_edges[only.0][only.1] = id;
                    edges.push(DiskEdge { vertices: directed(only), left: only.0, right: None, mesh_edge: id });
                }
                &[a, b] => {
                    if directed(a) == directed(b) {
                        return Err(DiskError::InconsistentOrientation { edge: key });
                    }
                    let (l, r) = if directed(a)[0] == key.0 { (a, b) } else { (b, a) };
                    triangle_edges[l.0][l.1] = id;
                    triangle_edges[r.0][r.1] = id;
                    edges.push(DiskEdge { vertices: directed(l), left: l.0, right: Some(r.0), mesh_edge: id });
                }
                _ => return Err(DiskError::NonManifoldEdge { edge: key, count: uses.len() }),
            }
        }
        let vertex_origin = (0..n).collect();
        Self::assemble(triangles, triangle_edges, edges, vertex_origin, Vec::new(), true)
    }

    fn assemble(
        triangles: Vec<[usize; 3]>,
        triangle_edges: Vec<[usize; 3]>,
        edges: Vec<DiskEdge>,
        vertex_origin: Vec<usize>,
        cut_edges: Vec<usize>,
        check_connected: bool,
    ) -> Result<Self, DiskError> {
        let n = vertex_origin.len();
        let euler = n as i64 - edges.len() as i64 + triangles.len() as i64;
        if euler != 1 {
            return Err(DiskError::NotADisk { euler });
        }
        let mut outgoing = vec![usize::MAX; n];
        let mut boundary_count = 0;
        for (e, edge) in edges.iter().enumerate() {
            if edge.is_boundary() {
                boundary_count += 1;
                let from = edge.vertices[0];
                if outgoing[from] != usize::MAX {
                    return Err(DiskError::BoundaryNotACycle);
                }
                outgoing[from] = e;
            }
        }
        let start = edges.iter().position(DiskEdge::is_boundary).ok_or(DiskError::BoundaryNotACycle)?;
        let mut boundary = Vec::with_capacity(boundary_count);
        let mut boundary_edges = Vec::with_capacity(boundary_count);
        let mut e = start;
        loop {
            boundary.push(edges[e].vertices[0]);
            boundary_edges.push(e);
            e = outgoing[edges[e].vertices[1]];
            if e == usize::MAX || boundary_edges.len() > boundary_count {
                return Err(DiskError::BoundaryNotACycle);
            }
            if e == start {
                break;
            }
        }
        if boundary_edges.len() != boundary_count {
            return Err(DiskError::BoundaryNotACycle);
        }
        let mut on_boundary = vec![false; n];
        for &v in &boundary {
            on_boundary[v] = true;
        }
        // With χ = 1 and one boundary cycle the complex is a disk exactly
        // when it is connected.
        if check_connected && !Self::connected(&triangle_edges, &edges) {
            return Err(DiskError::NotADisk { euler });
        }
        Ok(Disk { triangles, triangle_edges, edges, vertex_origin, boundary, boundary_edges, on_boundary, cut_edges })
    }

    fn connected(triangle_edges: &[[usize; 3]], edges: &[DiskEdge]) -> bool {
        let mut seen = vec![false; triangle_edges.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(t) = stack.pop() {
            for &e in &triangle_edges[t] {
                let edge = &edges[e];
                for other in [Some(edge.left), edge.right].into_iter().flatten() {
                    if !seen[other] {
                        seen[other] = true;
                        reached += 1;
                        stack.push(other);
                    }
                }
            }
        }
        reached == triangle_edges.len()
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangle_edges[t]
    }

    pub fn edges(&self) -> &[DiskEdge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_origin.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn vertex_origin(&self, v: usize) -> usize {
        self.vertex_origin[v]
    }

    /// Disk triangles keep the ids of the mesh triangles they came from.
    pub fn triangle_origin(&self, t: usize) -> usize {
        t
    }

    /// Boundary vertices in counterclockwise order.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    /// `boundary_edges[i]` runs from `boundary[i]` to `boundary[i + 1]`.
    pub fn boundary_edges(&self) -> &[usize] {
        &self.boundary_edges
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.on_boundary.get(v).copied().unwrap_or(false)
    }

    /// Mesh edges that were cut (empty for standalone disks).
    pub fn cut_edges(&self) -> &[usize] {
        &self.cut_edges
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.triangle_count() as i64
    }

    pub fn lattice_graph(&self) -> LatticeGraph {
        let facets = self.triangles.iter().map(|t| t.to_vec()).collect();
        let facet_edges = self.triangle_edges.iter().map(|t| t.to_vec()).collect();
        let edges = self.edges.iter().map(|e| e.vertices).collect();
        LatticeGraph::from_parts(self.vertex_count(), facets, facet_edges, edges)
    }

    /// Rewrites disk-local node ids as ids of the original mesh.
    pub fn lift_path(&self, nodes: &[Node]) -> Vec<Node> {
        nodes
            .iter()
            .map(|&n| match n {
                Node::Vertex(v) => Node::Vertex(self.vertex_origin[v]),
                Node::Facet(t) => Node::Facet(self.triangle_origin(t)),
                Node::Edge(e) => Node::Edge(self.edges[e].mesh_edge),
            })
            .collect()
    }
}
