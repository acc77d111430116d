//! The lattice graph: one node per facet, edge and vertex, with an arc for
//! each incidence.

use serde::{Deserialize, Serialize};

use crate::mesh::Mesh;
use crate::scalar::Scalar;

/// A node of the lattice graph. Serializes as `{"vertex": 3}` and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Node {
    Vertex(usize),
    Facet(usize),
    Edge(usize),
}

impl Node {
    pub fn is_vertex(&self) -> bool {
        matches!(self, Node::Vertex(_))
    }

    pub fn vertex(&self) -> Option<usize> {
        match *self {
            Node::Vertex(v) => Some(v),
            _ => None,
        }
    }
}

/// Incidence structure over facets, edges and vertices.
///
/// Facets may be arbitrary polygons so the same type also describes
/// nonsimplicial solids and cut-open disks (where boundary edges have a
/// single facet).
#[derive(Debug, Clone)]
pub struct LatticeGraph {
    facets: Rows,
    facet_edges: Rows,
    edges: Vec<[usize; 2]>,
    edge_facets: Rows,
    vertex_facets: Rows,
}

/// Variable-length rows packed into one array.
#[derive(Debug, Clone, Default)]
struct Rows {
    start: Vec<usize>,
    items: Vec<usize>,
}

impl Rows {
    fn from_rows<R: AsRef<[usize]>>(rows: impl IntoIterator<Item = R>) -> Self {
        let mut out = Rows { start: vec![0], items: Vec::new() };
        for r in rows {
            out.items.extend_from_slice(r.as_ref());
            out.start.push(out.items.len());
        }
        out
    }

    /// Row `j` lists the rows of `self` containing `j`, in increasing order.
    fn transpose(&self, n: usize) -> Self {
        let mut start = vec![0; n + 1];
        for &j in &self.items {
            start[j + 1] += 1;
        }
        for j in 0..n {
            start[j + 1] += start[j];
        }
        let mut fill = start.clone();
        let mut items = vec![0; self.items.len()];
        for i in 0..self.len() {
            for &j in self.row(i) {
                items[fill[j]] = i;
                fill[j] += 1;
            }
        }
        Rows { start, items }
    }

    fn len(&self) -> usize {
        self.start.len() - 1
    }

    fn row(&self, i: usize) -> &[usize] {
        &self.items[self.start[i]..self.start[i + 1]]
    }
}

pub fn lattice_graph<S: Scalar>(m: &Mesh<S>) -> LatticeGraph {
    LatticeGraph::from_mesh(m)
}

impl LatticeGraph {
    pub fn from_mesh<S: Scalar>(m: &Mesh<S>) -> Self {
        let facets = Rows::from_rows(m.triangles());
        let facet_edges = Rows::from_rows((0..m.triangle_count()).map(|t| m.triangle_edges(t)));
        Self::from_rows(m.vertex_count(), facets, facet_edges, m.edges().to_vec())
    }

    /// Builds the graph of a polygonal surface. Edge ids follow the
    /// lexicographic order of sorted endpoint pairs, as in [`Mesh`].
    pub fn from_faces<F: AsRef<[usize]>>(vertex_count: usize, faces: &[F]) -> Self {
        let mut edges: Vec<[usize; 2]> = Vec::new();
        for f in faces {
            let f = f.as_ref();
            for i in 0..f.len() {
                let (a, b) = (f[i], f[(i + 1) % f.len()]);
                edges.push([a.min(b), a.max(b)]);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let facet_edges = faces
            .iter()
            .map(|f| {
                let f = f.as_ref();
                (0..f.len())
                    .map(|i| {
                        let (a, b) = (f[i], f[(i + 1) % f.len()]);
                        edges.binary_search(&[a.min(b), a.max(b)]).unwrap()
                    })
                    .collect()
            })
            .collect();
        let facets = faces.iter().map(|f| f.as_ref().to_vec()).collect();
        Self::from_parts(vertex_count, facets, facet_edges, edges)
    }

    /// `facet_edges[f][i]` is the edge from corner `i` to corner `i + 1`.
    /// Parallel edges (same endpoints, different ids) are allowed.
    pub fn from_parts(
        vertex_count: usize,
        facets: Vec<Vec<usize>>,
        facet_edges: Vec<Vec<usize>>,
        edges: Vec<[usize; 2]>,
    ) -> Self {
        for (f, (verts, es)) in facets.iter().zip(&facet_edges).enumerate() {
            assert_eq!(verts.len(), es.len(), "facet {f} has mismatched corner and side counts");
        }
        Self::from_rows(vertex_count, Rows::from_rows(facets), Rows::from_rows(facet_edges), edges)
    }

    fn from_rows(vertex_count: usize, facets: Rows, facet_edges: Rows, edges: Vec<[usize; 2]>) -> Self {
        let edge_facets = facet_edges.transpose(edges.len());
        let vertex_facets = facets.transpose(vertex_count);
        LatticeGraph { facets, facet_edges, edges, edge_facets, vertex_facets }
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_facets.len()
    }

    pub fn node_count(&self) -> usize {
        self.facet_count() + self.edge_count() + self.vertex_count()
    }

    /// Facet-vertex plus facet-edge plus edge-vertex incidences.
    pub fn arc_count(&self) -> usize {
        let corners = self.facets.items.len();
        2 * corners + 2 * self.edges.len()
    }

    pub fn facet_vertices(&self, f: usize) -> &[usize] {
        self.facets.row(f)
    }

    pub fn facet_edges(&self, f: usize) -> &[usize] {
        self.facet_edges.row(f)
    }

    pub fn edge_vertices(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    pub fn edge_facets(&self, e: usize) -> &[usize] {
        self.edge_facets.row(e)
    }

    pub fn vertex_facets(&self, v: usize) -> &[usize] {
        self.vertex_facets.row(v)
    }

    pub fn contains(&self, n: Node) -> bool {
        match n {
            Node::Vertex(v) => v < self.vertex_count(),
            Node::Facet(f) => f < self.facet_count(),
            Node::Edge(e) => e < self.edge_count(),
        }
    }

    /// True when `a` and `b` are joined by an arc. Unknown ids are never incident.
    pub fn is_incident(&self, a: Node, b: Node) -> bool {
        if !self.contains(a) || !self.contains(b) {
            return false;
        }
        match (a, b) {
            (Node::Vertex(v), Node::Facet(f)) | (Node::Facet(f), Node::Vertex(v)) => {
                self.facets.row(f).contains(&v)
            }
            (Node::Vertex(v), Node::Edge(e)) | (Node::Edge(e), Node::Vertex(v)) => {
                self.edges[e].contains(&v)
            }
            (Node::Edge(e), Node::Facet(f)) | (Node::Facet(f), Node::Edge(e)) => {
                self.facet_edges.row(f).contains(&e)
            }
            _ => false,
        }
    }

    /// Every arc once, facet arcs first.
    pub fn arcs(&self) -> impl Iterator<Item = (Node, Node)> + '_ {
        let facet_arcs = (0..self.facet_count()).flat_map(|f| {
            let (vs, es) = (self.facets.row(f), self.facet_edges.row(f));
            vs.iter()
                .map(move |&v| (Node::Facet(f), Node::Vertex(v)))
                .chain(es.iter().map(move |&e| (Node::Facet(f), Node::Edge(e))))
        });
        let edge_arcs = self
            .edges
            .iter()
            .enumerate()
            .flat_map(|(e, &[a, b])| [(Node::Edge(e), Node::Vertex(a)), (Node::Edge(e), Node::Vertex(b))]);
        facet_arcs.chain(edge_arcs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    fn counts(g: &LatticeGraph) -> (usize, usize, usize, usize) {
        (g.facet_count(), g.edge_count(), g.vertex_count(), g.arc_count())
    }

    #[test]
    fn tetrahedron_counts() {
        let g = lattice_graph(&shapes::tetrahedron::<f64>());
        assert_eq!(counts(&g), (4, 6, 4, 36));
        assert_eq!(g.arcs().count(), 36);
    }

    #[test]
    fn cube_and_octahedron_counts() {
        let g = lattice_graph(&shapes::triangulated_cube::<f64>());
        assert_eq!(counts(&g), (12, 18, 8, 3 * 12 + 3 * 12 + 2 * 18));
        let g = lattice_graph(&shapes::octahedron::<f64>());
        assert_eq!(counts(&g), (8, 12, 6, 24 + 24 + 24));
    }

    #[test]
    fn from_faces_matches_mesh_edge_ids() {
        let m = shapes::torus::<f64>(4, 3, 2.0, 0.5);
        let a = LatticeGraph::from_mesh(&m);
        let b = LatticeGraph::from_faces(m.vertex_count(), m.triangles());
        for f in 0..m.triangle_count() {
            assert_eq!(a.facet_edges(f), b.facet_edges(f));
        }
    }

    #[test]
    fn every_edge_of_a_closed_mesh_has_two_facets() {
        let m = shapes::bipyramid::<f64>(6);
        let g = lattice_graph(&m);
        for e in 0..g.edge_count() {
            assert_eq!(g.edge_facets(e).len(), 2);
            let [a, b] = g.edge_vertices(e);
            for &f in g.edge_facets(e) {
                assert!(g.is_incident(Node::Vertex(a), Node::Facet(f)));
                assert!(g.is_incident(Node::Vertex(b), Node::Facet(f)));
                assert!(g.is_incident(Node::Edge(e), Node::Facet(f)));
            }
        }
    }

    #[test]
    fn truncated_cube_graph() {
        let (points, faces) = shapes::truncated_cube_faces::<f64>();
        let g = LatticeGraph::from_faces(points.len(), &faces);
        assert_eq!((g.facet_count(), g.edge_count(), g.vertex_count()), (14, 36, 24));
    }

    #[test]
    fn node_json_shape() {
        let s = serde_json::to_string(&[Node::Vertex(3), Node::Facet(1), Node::Edge(0)]).unwrap();
        assert_eq!(s, r#"[{"vertex":3},{"facet":1},{"edge":0}]"#);
    }
}
