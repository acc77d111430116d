//! Closed triangulated surfaces.
//!
//! A [`Mesh`] is validated once at construction: every face is a triangle,
//! every edge has exactly two incident triangles traversing it in opposite
//! directions, every vertex star is a single fan, and the surface is
//! connected. After that the mesh is immutable.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::geom::{is_degenerate3, Point3};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeshError {
    #[error("face {face} has {arity} vertices, only triangles are supported")]
    NonSimplicialFace { face: usize, arity: usize },
    #[error("face {face} references vertex {index} but only {count} vertices exist")]
    IndexOutOfRange { face: usize, index: usize, count: usize },
    #[error("triangle {face} is degenerate")]
    DegenerateTriangle { face: usize },
    #[error("triangles {first} and {second} have the same vertices")]
    DuplicateTriangle { first: usize, second: usize },
    #[error("edge ({}, {}) has {count} incident triangles, expected 2", .edge.0, .edge.1)]
    NonManifoldEdge { edge: (usize, usize), count: usize },
    #[error("edge ({}, {}) is traversed in the same direction by both of its triangles", .edge.0, .edge.1)]
    InconsistentOrientation { edge: (usize, usize) },
    #[error("the triangles around vertex {vertex} do not form a single fan")]
    NonManifoldVertex { vertex: usize },
    #[error("surface has {components} connected components (isolated vertices count as components)")]
    DisconnectedSurface { components: usize },
    #[error("Euler characteristic {euler} does not correspond to a closed orientable surface")]
    InvalidEulerCharacteristic { euler: i64 },
}

/// Indexed simplicial 2-manifold with 3D vertex coordinates.
#[derive(Debug, Clone)]
pub struct Mesh<S> {
    points: Vec<Point3<S>>,
    triangles: Vec<[usize; 3]>,
    /// Sorted vertex pairs, in lexicographic order; the position is the edge id.
    edges: Vec<[usize; 2]>,
    /// `[t0, t1]` where `t0` traverses the edge low -> high and `t1` high -> low.
    edge_triangles: Vec<[usize; 2]>,
    /// Edge id of side `i` (corner `i` -> corner `i + 1`).
    triangle_edges: Vec<[usize; 3]>,
    /// Triangle across side `i`.
    neighbors: Vec<[usize; 3]>,
    edge_index: HashMap<(usize, usize), usize>,
}

/// Validates and builds a mesh from a point list and polygon index lists.
pub fn build_mesh<S: Scalar, F: AsRef<[usize]>>(
    points: Vec<Point3<S>>,
    faces: &[F],
) -> Result<Mesh<S>, MeshError> {
    Mesh::new(points, faces)
}

impl<S: Scalar> Mesh<S> {
    pub fn new<F: AsRef<[usize]>>(points: Vec<Point3<S>>, faces: &[F]) -> Result<Self, MeshError> {
        let mut triangles = Vec::with_capacity(faces.len());
        for (face, f) in faces.iter().enumerate() {
            let f = f.as_ref();
            if f.len() != 3 {
                return Err(MeshError::NonSimplicialFace { face, arity: f.len() });
            }
            triangles.push([f[0], f[1], f[2]]);
        }
        Self::from_triangles(points, triangles)
    }

    pub fn from_triangles(
        points: Vec<Point3<S>>,
        triangles: Vec<[usize; 3]>,
    ) -> Result<Self, MeshError> {
        let count = points.len();
        for (face, tri) in triangles.iter().enumerate() {
            for &index in tri {
                if index >= count {
                    return Err(MeshError::IndexOutOfRange { face, index, count });
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(MeshError::DegenerateTriangle { face });
            }
            if is_degenerate3(points[tri[0]], points[tri[1]], points[tri[2]]) {
                return Err(MeshError::DegenerateTriangle { face });
            }
        }

        let mut seen: HashMap<[usize; 3], usize> = HashMap::with_capacity(triangles.len());
        for (face, tri) in triangles.iter().enumerate() {
            let mut key = *tri;
            key.sort_unstable();
            if let Some(&first) = seen.get(&key) {
                return Err(MeshError::DuplicateTriangle { first, second: face });
            }
            seen.insert(key, face);
        }

        // Directed half-edges first: a repeated direction is an orientation
        // error unless the edge is over-populated anyway.
        let mut undirected: HashMap<(usize, usize), Vec<(usize, usize)>> =
            HashMap::with_capacity(triangles.len() * 3 / 2);
        for (t, tri) in triangles.iter().enumerate() {
            for side in 0..3 {
                let (a, b) = (tri[side], tri[(side + 1) % 3]);
                undirected.entry((a.min(b), a.max(b))).or_default().push((t, side));
            }
        }
        let mut keys: Vec<(usize, usize)> = undirected.keys().copied().collect();
        keys.sort_unstable();

        let mut edges = Vec::with_capacity(keys.len());
        let mut edge_triangles = Vec::with_capacity(keys.len());
        let mut triangle_edges = vec![[usize::MAX; 3]; triangles.len()];
        let mut neighbors = vec![[usize::MAX; 3]; triangles.len()];
        let mut edge_index = HashMap::with_capacity(keys.len());
        for key in keys {
            let uses = &undirected[&key];
            if uses.len() != 2 {
                return Err(MeshError::NonManifoldEdge { edge: key, count: uses.len() });
            }
            let forward = |&(t, side): &(usize, usize)| triangles[t][side] == key.0;
            let (fwd, bwd): (Vec<_>, Vec<_>) = uses.iter().partition(|u| forward(u));
            if fwd.len() != 1 || bwd.len() != 1 {
                return Err(MeshError::InconsistentOrientation { edge: key });
            }
            let id = edges.len();
            let (t0, s0) = fwd[0];
            let (t1, s1) = bwd[0];
            edges.push([key.0, key.1]);
            edge_triangles.push([t0, t1]);
            triangle_edges[t0][s0] = id;
            triangle_edges[t1][s1] = id;
            neighbors[t0][s0] = t1;
            neighbors[t1][s1] = t0;
            edge_index.insert(key, id);
        }

        let mesh = Mesh { points, triangles, edges, edge_triangles, triangle_edges, neighbors, edge_index };
        mesh.check_vertex_stars()?;
        mesh.check_connected()?;
        let euler = mesh.euler_characteristic();
        if euler > 2 || euler % 2 != 0 {
            return Err(MeshError::InvalidEulerCharacteristic { euler });
        }
        Ok(mesh)
    }

    /// Each vertex star must be one closed fan: following `a -> b` over the
    /// triangles `(v, a, b)` has to visit every incident triangle in one cycle.
    fn check_vertex_stars(&self) -> Result<(), MeshError> {
        let mut incident = vec![0usize; self.points.len()];
        let mut first_corner = vec![usize::MAX; self.points.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for (corner, &v) in tri.iter().enumerate() {
                incident[v] += 1;
                if first_corner[v] == usize::MAX {
                    first_corner[v] = 3 * t + corner;
                }
            }
        }
        for v in 0..self.points.len() {
            if incident[v] == 0 {
                continue;
            }
            let start = first_corner[v];
            let fan = self.fan_from(start / 3, start % 3).count();
            if fan != incident[v] {
                return Err(MeshError::NonManifoldVertex { vertex: v });
            }
        }
        Ok(())
    }

    fn check_connected(&self) -> Result<(), MeshError> {
        let referenced: HashSet<usize> = self.triangles.iter().flatten().copied().collect();
        let isolated = self.points.len() - referenced.len();
        let mut seen = vec![false; self.triangles.len()];
        let mut components = 0;
        for start in 0..self.triangles.len() {
            if seen[start] {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(t) = stack.pop() {
                for &n in &self.neighbors[t] {
                    if !seen[n] {
                        seen[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
        let components = components + isolated;
        if components != 1 {
            return Err(MeshError::DisconnectedSurface { components });
        }
        Ok(())
    }

    /// Corners `(triangle, corner)` around the vertex at `corner` of `t`,
    /// rotating across side `corner` each step. Ends when the fan closes.
    pub fn fan_from(&self, t: usize, corner: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let v = self.triangles[t][corner];
        let mut current = Some((t, corner));
        let start = (t, corner);
        std::iter::from_fn(move || {
            let here = current?;
            let next_t = self.neighbors[here.0][here.1];
            let next_c = self.triangles[next_t].iter().position(|&w| w == v).unwrap();
            current = if (next_t, next_c) == start { None } else { Some((next_t, next_c)) };
            Some(here)
        })
    }

    pub fn points(&self) -> &[Point3<S>] {
        &self.points
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn edge_triangles(&self, edge: usize) -> [usize; 2] {
        self.edge_triangles[edge]
    }

    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangle_edges[t]
    }

    pub fn neighbors(&self, t: usize) -> [usize; 3] {
        self.neighbors[t]
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn triangle_points(&self, t: usize) -> [Point3<S>; 3] {
        let [a, b, c] = self.triangles[t];
        [self.points[a], self.points[b], self.points[c]]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.points.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Number of handles, `(2 - V + E - F) / 2`.
    pub fn genus(&self) -> usize {
        ((2 - self.euler_characteristic()) / 2) as usize
    }
}

/// Genus of a validated (hence connected) mesh.
pub fn genus<S: Scalar>(m: &Mesh<S>) -> usize {
    m.genus()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn tetrahedron_has_six_edges() {
        let m = shapes::tetrahedron::<f64>();
        assert_eq!(m.edge_count(), 6);
        assert_eq!(m.genus(), 0);
    }

    #[test]
    fn truncated_cube_is_rejected_as_non_simplicial() {
        let (points, faces) = shapes::truncated_cube_faces::<f64>();
        let err = Mesh::new(points, &faces).unwrap_err();
        assert!(matches!(err, MeshError::NonSimplicialFace { arity: 8, .. }), "{err}");
    }

    #[test]
    fn out_of_range_index() {
        let m = shapes::tetrahedron::<f64>();
        let mut tris = m.triangles().to_vec();
        tris[2][1] = 7;
        let err = Mesh::from_triangles(m.points().to_vec(), tris).unwrap_err();
        assert_eq!(err, MeshError::IndexOutOfRange { face: 2, index: 7, count: 4 });
    }

    #[test]
    fn flipped_triangle_is_inconsistent() {
        let m = shapes::tetrahedron::<f64>();
        let mut tris = m.triangles().to_vec();
        tris[0].swap(1, 2);
        let err = Mesh::from_triangles(m.points().to_vec(), tris).unwrap_err();
        assert!(matches!(err, MeshError::InconsistentOrientation { .. }), "{err}");
    }

    #[test]
    fn open_surface_is_non_manifold() {
        let m = shapes::tetrahedron::<f64>();
        let tris = m.triangles()[..3].to_vec();
        let err = Mesh::from_triangles(m.points().to_vec(), tris).unwrap_err();
        assert!(matches!(err, MeshError::NonManifoldEdge { count: 1, .. }), "{err}");
    }

    #[test]
    fn collinear_triangle_is_degenerate() {
        let mut m = shapes::tetrahedron::<f64>().points().to_vec();
        m[3] = [(m[0][0] + m[1][0]) / 2.0, (m[0][1] + m[1][1]) / 2.0, (m[0][2] + m[1][2]) / 2.0];
        let tris = shapes::tetrahedron::<f64>().triangles().to_vec();
        let err = Mesh::from_triangles(m, tris).unwrap_err();
        assert!(matches!(err, MeshError::DegenerateTriangle { .. }), "{err}");
    }

    #[test]
    fn repeated_index_is_degenerate() {
        let m = shapes::tetrahedron::<f64>();
        let err = Mesh::new(m.points().to_vec(), &[[0usize, 0, 1]]).unwrap_err();
        assert_eq!(err, MeshError::DegenerateTriangle { face: 0 });
    }

    #[test]
    fn duplicate_triangle() {
        let m = shapes::tetrahedron::<f64>();
        let mut tris = m.triangles().to_vec();
        let dup = [tris[0][1], tris[0][2], tris[0][0]];
        tris.push(dup);
        let err = Mesh::from_triangles(m.points().to_vec(), tris).unwrap_err();
        assert_eq!(err, MeshError::DuplicateTriangle { first: 0, second: 4 });
    }

    #[test]
    fn two_tetrahedra_are_disconnected() {
        let a = shapes::tetrahedron::<f64>();
        let mut points = a.points().to_vec();
        points.extend(a.points().iter().map(|p| [p[0] + 5.0, p[1], p[2]]));
        let mut tris = a.triangles().to_vec();
        tris.extend(a.triangles().iter().map(|t| [t[0] + 4, t[1] + 4, t[2] + 4]));
        let err = Mesh::from_triangles(points, tris).unwrap_err();
        assert_eq!(err, MeshError::DisconnectedSurface { components: 2 });
    }

    #[test]
    fn unused_vertex_is_a_component() {
        let a = shapes::tetrahedron::<f64>();
        let mut points = a.points().to_vec();
        points.push([9.0, 9.0, 9.0]);
        let err = Mesh::from_triangles(points, a.triangles().to_vec()).unwrap_err();
        assert_eq!(err, MeshError::DisconnectedSurface { components: 2 });
    }

    #[test]
    fn pinched_vertex_is_rejected() {
        // Two tetrahedra glued at a single vertex: every edge is fine, the
        // shared vertex has two fans.
        let a = shapes::tetrahedron::<f64>();
        let mut points = a.points().to_vec();
        points.extend(a.points()[1..].iter().map(|p| [p[0] + 0.1, p[1] + 3.0, p[2] + 0.2]));
        let remap = |v: usize| if v == 0 { 0 } else { v + 3 };
        let mut tris = a.triangles().to_vec();
        tris.extend(a.triangles().iter().map(|t| [remap(t[0]), remap(t[1]), remap(t[2])]));
        let err = Mesh::from_triangles(points, tris).unwrap_err();
        assert_eq!(err, MeshError::NonManifoldVertex { vertex: 0 });
    }

    #[test]
    fn genus_examples() {
        assert_eq!(shapes::tetrahedron::<f64>().genus(), 0);
        assert_eq!(shapes::triangulated_cube::<f64>().genus(), 0);
        let torus = shapes::torus::<f64>(3, 3, 2.0, 1.0);
        assert_eq!((torus.vertex_count(), torus.edge_count(), torus.triangle_count()), (9, 27, 18));
        assert_eq!(torus.genus(), 1);
    }

    #[test]
    fn edge_table_lists_each_pair_once() {
        let m = shapes::torus::<f64>(4, 5, 2.0, 0.7);
        let mut pairs: Vec<_> = m.edges().to_vec();
        pairs.dedup();
        assert_eq!(pairs.len(), m.edge_count());
        for e in 0..m.edge_count() {
            let [t0, t1] = m.edge_triangles(e);
            assert_ne!(t0, t1);
            assert!(m.triangle_edges(t0).contains(&e));
            assert!(m.triangle_edges(t1).contains(&e));
        }
    }

    #[test]
    fn works_in_single_precision() {
        let m = shapes::triangulated_cube::<f32>();
        assert_eq!(m.triangle_count(), 12);
        assert_eq!(m.genus(), 0);
    }
}
