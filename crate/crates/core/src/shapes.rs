//! Small reference surfaces used by tests, examples and the CLI.

use std::f64::consts::PI;

use crate::geom::Point3;
use crate::mesh::Mesh;
use crate::scalar::Scalar;

fn convert<S: Scalar>(points: &[[f64; 3]]) -> Vec<Point3<S>> {
    points.iter().map(|p| p.map(S::from_f64_lossy)).collect()
}

/// Flips triangles of a convex, origin-containing solid so they face outward.
fn orient_outward(points: &[[f64; 3]], triangles: &mut [[usize; 3]]) {
    let centre = points.iter().fold([0.0; 3], |acc, p| [acc[0] + p[0], acc[1] + p[1], acc[2] + p[2]]);
    let n = points.len() as f64;
    let centre = centre.map(|c| c / n);
    for tri in triangles.iter_mut() {
        let [a, b, c] = tri.map(|i| points[i]);
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let normal = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
        let out = [a[0] - centre[0], a[1] - centre[1], a[2] - centre[2]];
        if normal[0] * out[0] + normal[1] * out[1] + normal[2] * out[2] < 0.0 {
            tri.swap(1, 2);
        }
    }
}

fn solid<S: Scalar>(points: Vec<[f64; 3]>, mut triangles: Vec<[usize; 3]>) -> Mesh<S> {
    orient_outward(&points, &mut triangles);
    Mesh::from_triangles(convert(&points), triangles).expect("reference solid is a valid mesh")
}

pub fn tetrahedron<S: Scalar>() -> Mesh<S> {
    let points = vec![[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
    solid(points, vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])
}

/// Unit cube with every square face split along one diagonal: 8 vertices, 12 triangles.
pub fn triangulated_cube<S: Scalar>() -> Mesh<S> {
    let points: Vec<[f64; 3]> = (0..8)
        .map(|i| [(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64])
        .collect();
    let quads = [[0, 1, 3, 2], [4, 5, 7, 6], [0, 1, 5, 4], [2, 3, 7, 6], [0, 2, 6, 4], [1, 3, 7, 5]];
    let triangles = quads.iter().flat_map(|&[a, b, c, d]| [[a, b, c], [a, c, d]]).collect();
    solid(points, triangles)
}

pub fn octahedron<S: Scalar>() -> Mesh<S> {
    let points = vec![
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let mut triangles = Vec::new();
    for x in [0, 1] {
        for y in [2, 3] {
            for z in [4, 5] {
                triangles.push([x, y, z]);
            }
        }
    }
    solid(points, triangles)
}

/// Double pyramid over a regular `n`-gon: apexes are vertices 0 and 1.
pub fn bipyramid<S: Scalar>(n: usize) -> Mesh<S> {
    assert!(n >= 3);
    let mut points = vec![[0.0, 0.0, 1.3], [0.0, 0.0, -1.1]];
    for i in 0..n {
        let a = 2.0 * PI * i as f64 / n as f64;
        points.push([a.cos(), a.sin(), 0.0]);
    }
    let mut triangles = Vec::new();
    for i in 0..n {
        let (p, q) = (2 + i, 2 + (i + 1) % n);
        triangles.push([0, p, q]);
        triangles.push([1, q, p]);
    }
    solid(points, triangles)
}

/// Grid torus with `n` steps around the axis and `m` around the tube.
/// `n = m = 3` gives the 9-vertex, 18-triangle torus.
pub fn torus<S: Scalar>(n: usize, m: usize, major: f64, minor: f64) -> Mesh<S> {
    assert!(n >= 3 && m >= 3);
    let mut points = Vec::with_capacity(n * m);
    for i in 0..n {
        let theta = 2.0 * PI * i as f64 / n as f64;
        for j in 0..m {
            let phi = 2.0 * PI * j as f64 / m as f64;
            let r = major + minor * phi.cos();
            points.push([r * theta.cos(), r * theta.sin(), minor * phi.sin()]);
        }
    }
    let id = |i: usize, j: usize| (i % n) * m + (j % m);
    let mut triangles = Vec::with_capacity(2 * n * m);
    for i in 0..n {
        for j in 0..m {
            triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    Mesh::from_triangles(convert(&points), triangles).expect("grid torus is a valid mesh")
}

/// Truncated cube as polygon faces (8 triangles, 6 octagons), outward
/// counterclockwise. Not a simplicial surface, so it cannot become a [`Mesh`].
pub fn truncated_cube_faces<S: Scalar>() -> (Vec<Point3<S>>, Vec<Vec<usize>>) {
    let xi = 2f64.sqrt() - 1.0;
    let mut points = Vec::new();
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                points.push([sx * xi, sy, sz]);
                points.push([sx, sy * xi, sz]);
                points.push([sx, sy, sz * xi]);
            }
        }
    }
    let mut faces = Vec::new();
    for corner in 0..8 {
        let ids = vec![3 * corner, 3 * corner + 1, 3 * corner + 2];
        let p = points[3 * corner];
        let normal = [p[0].signum(), p[1].signum(), p[2].signum()];
        faces.push(ccw_about(&points, ids, normal));
    }
    for axis in 0..3 {
        for sign in [1.0, -1.0] {
            let ids: Vec<usize> = (0..points.len())
                .filter(|&i| (points[i][axis] - sign).abs() < 1e-12)
                .collect();
            let mut normal = [0.0; 3];
            normal[axis] = sign;
            faces.push(ccw_about(&points, ids, normal));
        }
    }
    (convert(&points), faces)
}

fn ccw_about(points: &[[f64; 3]], mut ids: Vec<usize>, normal: [f64; 3]) -> Vec<usize> {
    let n = ids.len() as f64;
    let c = ids.iter().fold([0.0; 3], |acc, &i| {
        [acc[0] + points[i][0] / n, acc[1] + points[i][1] / n, acc[2] + points[i][2] / n]
    });
    let helper = if normal[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    };
    let u = cross(normal, helper);
    let w = cross(normal, u);
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let angle = |i: usize| {
        let d = [points[i][0] - c[0], points[i][1] - c[1], points[i][2] - c[2]];
        dot(d, w).atan2(dot(d, u))
    };
    ids.sort_by(|&a, &b| angle(a).total_cmp(&angle(b)));
    ids
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let cube = triangulated_cube::<f64>();
        assert_eq!((cube.vertex_count(), cube.edge_count(), cube.triangle_count()), (8, 18, 12));
        let oct = octahedron::<f64>();
        assert_eq!((oct.vertex_count(), oct.edge_count(), oct.triangle_count()), (6, 12, 8));
        let bp = bipyramid::<f64>(5);
        assert_eq!(bp.triangle_count(), 10);
        let (points, faces) = truncated_cube_faces::<f64>();
        assert_eq!(points.len(), 24);
        assert_eq!(faces.iter().filter(|f| f.len() == 3).count(), 8);
        assert_eq!(faces.iter().filter(|f| f.len() == 8).count(), 6);
    }

    #[test]
    fn truncated_cube_faces_are_consistently_oriented() {
        let (_, faces) = truncated_cube_faces::<f64>();
        let mut directed = std::collections::HashSet::new();
        for f in &faces {
            for i in 0..f.len() {
                assert!(directed.insert((f[i], f[(i + 1) % f.len()])));
            }
        }
        for &(a, b) in &directed {
            assert!(directed.contains(&(b, a)));
        }
        assert_eq!(directed.len(), 2 * 36);
    }
}
