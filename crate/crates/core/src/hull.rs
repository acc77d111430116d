//! Convex hulls of random point sets, used as test and experiment inputs.
//!
//! Incremental construction with exact orientation predicates. Each hull
//! face keeps the input points it can see; the next point inserted is the
//! farthest one above some face, and the points seen by the faces it
//! replaces are handed to the new faces.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use robust::{orient3d, Coord3D};

use crate::geom::Point3;
use crate::mesh::{Mesh, MeshError};
use crate::scalar::Scalar;

const NONE: usize = usize::MAX;

/// Relative size of the perturbation added to sphere points.
pub const JITTER: f64 = 1e-9;

/// `n` points uniform on the unit sphere, each perturbed by up to
/// [`JITTER`] per coordinate.
pub fn sphere_points(n: usize, seed: u64) -> Vec<Point3<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let g: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let r = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
            std::array::from_fn(|i| g[i] / r + JITTER * rng.random_range(-1.0..1.0))
        })
        .collect()
}

/// Hull of [`sphere_points`] as a mesh on the points that are hull vertices.
pub fn random_hull<S: Scalar>(n: usize, seed: u64) -> Result<Mesh<S>, MeshError> {
    hull_mesh(&sphere_points(n, seed))
}

/// Hull of `points` as a mesh; points strictly inside or on the hull but
/// not needed as corners are dropped and the rest renumbered in input order.
pub fn hull_mesh<S: Scalar>(points: &[Point3<f64>]) -> Result<Mesh<S>, MeshError> {
    let faces = convex_hull(points).unwrap_or_default();
    let mut index = vec![NONE; points.len()];
    let mut used: Vec<usize> = faces.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    for (i, &p) in used.iter().enumerate() {
        index[p] = i;
    }
    let pts = used.iter().map(|&p| points[p].map(S::from_f64_lossy)).collect();
    Mesh::from_triangles(pts, faces.iter().map(|f| f.map(|v| index[v])).collect())
}

fn c3(p: Point3<f64>) -> Coord3D<f64> {
    Coord3D { x: p[0], y: p[1], z: p[2] }
}

struct Face {
    v: [usize; 3],
    /// Face across side `i` (`v[i] -> v[i + 1]`).
    adj: [usize; 3],
    outside: Vec<usize>,
    alive: bool,
}

struct Hull<'a> {
    p: &'a [Point3<f64>],
    faces: Vec<Face>,
}

impl Hull<'_> {
    /// Positive when `q` is strictly above the outward face.
    fn height(&self, f: usize, q: usize) -> f64 {
        let v = self.faces[f].v;
        -orient3d(c3(self.p[v[0]]), c3(self.p[v[1]]), c3(self.p[v[2]]), c3(self.p[q]))
    }

    fn sees(&self, f: usize, q: usize) -> bool {
        self.height(f, q) > 0.0
    }

    fn add_face(&mut self, v: [usize; 3]) -> usize {
        self.faces.push(Face { v, adj: [NONE; 3], outside: Vec::new(), alive: true });
        self.faces.len() - 1
    }

    fn side_to(&self, f: usize, g: usize) -> usize {
        self.faces[f].adj.iter().position(|&a| a == g).expect("adjacent faces")
    }

    fn assign(&mut self, q: usize, candidates: &[usize]) {
        if let Some(&f) = candidates.iter().find(|&&f| self.sees(f, q)) {
            self.faces[f].outside.push(q);
        }
    }

    /// Inserts the farthest point above `f`.
    fn insert_from(&mut self, f: usize, work: &mut Vec<usize>) {
        let eye = *self.faces[f]
            .outside
            .iter()
            .max_by(|&&a, &&b| self.height(f, a).total_cmp(&self.height(f, b)).then(b.cmp(&a)))
            .unwrap();

        // Faces visible from the eye form a connected cap around `f`.
        let mut visible = vec![f];
        self.faces[f].alive = false;
        let mut horizon: Vec<(usize, usize, usize)> = Vec::new();
        let mut i = 0;
        while i < visible.len() {
            let g = visible[i];
            i += 1;
            for side in 0..3 {
                let h = self.faces[g].adj[side];
                if !self.faces[h].alive {
                    continue;
                }
                if self.sees(h, eye) {
                    self.faces[h].alive = false;
                    visible.push(h);
                } else {
                    horizon.push((g, side, h));
                }
            }
        }

        let mut by_start = HashMap::with_capacity(horizon.len());
        let mut created = Vec::with_capacity(horizon.len());
        for &(g, side, h) in &horizon {
            let v = self.faces[g].v;
            let (a, b) = (v[side], v[(side + 1) % 3]);
            let n = self.add_face([a, b, eye]);
            let back = self.side_to(h, g);
            self.faces[h].adj[back] = n;
            self.faces[n].adj[0] = h;
            by_start.insert(a, n);
            created.push(n);
        }
        for &n in &created {
            let [_, b, _] = self.faces[n].v;
            let m = by_start[&b];
            // Side 1 of `n` is b -> eye, side 2 of `m` is eye -> b.
            self.faces[n].adj[1] = m;
            self.faces[m].adj[2] = n;
        }

        for &g in &visible {
            for q in std::mem::take(&mut self.faces[g].outside) {
                if q != eye {
                    self.assign(q, &created);
                }
            }
        }
        work.extend(created.iter().copied().filter(|&n| !self.faces[n].outside.is_empty()));
    }
}

/// Outward counterclockwise triangles of the convex hull, or `None` if the
/// points are all coplanar.
pub fn convex_hull(p: &[Point3<f64>]) -> Option<Vec<[usize; 3]>> {
    let n = p.len();
    if n < 4 {
        return None;
    }
    let d2 = |a: Point3<f64>, b: Point3<f64>| (0..3).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>();
    let i0 = 0;
    let i1 = (0..n).max_by(|&a, &b| d2(p[i0], p[a]).total_cmp(&d2(p[i0], p[b])))?;
    let line = |q: Point3<f64>| {
        let (u, w) = (sub(p[i1], p[i0]), sub(q, p[i0]));
        let c = [u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]];
        c[0] * c[0] + c[1] * c[1] + c[2] * c[2]
    };
    let i2 = (0..n).max_by(|&a, &b| line(p[a]).total_cmp(&line(p[b])))?;
    let vol = |q: usize| orient3d(c3(p[i0]), c3(p[i1]), c3(p[i2]), c3(p[q]));
    let i3 = (0..n).max_by(|&a, &b| vol(a).abs().total_cmp(&vol(b).abs()))?;
    if vol(i3) == 0.0 {
        return None;
    }
    // Orient the base so that i3 is below it.
    let (a, b, c) = if vol(i3) > 0.0 { (i0, i1, i2) } else { (i0, i2, i1) };
    let d = i3;

    let mut h = Hull { p, faces: Vec::with_capacity(2 * n) };
    let tris = [[a, b, c], [a, d, b], [b, d, c], [c, d, a]];
    for t in tris {
        h.add_face(t);
    }
    let mut edge_face = HashMap::new();
    for (f, t) in tris.iter().enumerate() {
        for s in 0..3 {
            edge_face.insert((t[s], t[(s + 1) % 3]), f);
        }
    }
    for (f, t) in tris.iter().enumerate() {
        for s in 0..3 {
            h.faces[f].adj[s] = edge_face[&(t[(s + 1) % 3], t[s])];
        }
    }
    let initial = [0, 1, 2, 3];
    for q in 0..n {
        if ![a, b, c, d].contains(&q) {
            h.assign(q, &initial);
        }
    }

    let mut work: Vec<usize> = initial.into_iter().filter(|&f| !h.faces[f].outside.is_empty()).collect();
    while let Some(f) = work.pop() {
        if h.faces[f].alive && !h.faces[f].outside.is_empty() {
            h.insert_from(f, &mut work);
        }
    }
    Some(h.faces.iter().filter(|f| f.alive).map(|f| f.v).collect())
}

fn sub(a: Point3<f64>, b: Point3<f64>) -> Point3<f64> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_sphere_points_uses_every_point() {
        for (n, seed) in [(4, 0), (10, 1), (57, 2), (500, 3)] {
            let m = random_hull::<f64>(n, seed).unwrap();
            assert_eq!(m.vertex_count(), n);
            assert_eq!(m.triangle_count(), 2 * n - 4);
            assert_eq!(m.genus(), 0);
        }
    }

    #[test]
    fn hull_is_convex_by_exact_test() {
        let pts = sphere_points(200, 9);
        let faces = convex_hull(&pts).unwrap();
        for f in &faces {
            for q in 0..pts.len() {
                let o = orient3d(c3(pts[f[0]]), c3(pts[f[1]]), c3(pts[f[2]]), c3(pts[q]));
                assert!(o >= 0.0, "point {q} above face {f:?}");
            }
        }
    }

    #[test]
    fn interior_points_are_dropped() {
        let mut pts = sphere_points(30, 4);
        pts.push([0.0, 0.0, 0.0]);
        pts.push([0.1, -0.2, 0.05]);
        let m = hull_mesh::<f64>(&pts).unwrap();
        assert_eq!(m.vertex_count(), 30);
    }

    #[test]
    fn coplanar_input_has_no_hull() {
        let pts: Vec<Point3<f64>> = (0..6).map(|i| [i as f64, (i * i) as f64, 0.0]).collect();
        assert_eq!(convex_hull(&pts), None);
    }

    #[test]
    fn seeds_are_deterministic() {
        assert_eq!(sphere_points(20, 5), sphere_points(20, 5));
        assert_ne!(sphere_points(20, 5), sphere_points(20, 6));
    }

    #[test]
    fn single_precision_hull() {
        let m = random_hull::<f32>(100, 1).unwrap();
        assert_eq!(m.triangle_count(), 196);
    }
}
