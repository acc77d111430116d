//! Vertical-strip layout of a path's elements.
//!
//! Element `k` of a path is placed in strip `k` so that its entry vertex is
//! the unique leftmost point and its exit vertex the unique rightmost one.
//! Consecutive strips then meet only at the shared vertex.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{add2, cross3, dist2, dot3, is_degenerate3, norm3, sub3, Point2, Point3};
use crate::lattice::Node;
use crate::mesh::Mesh;
use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("element {element:?} is entered and left through the same vertex {vertex}")]
    SameEntryExit { element: Node, vertex: usize },
    #[error("vertex {vertex} is not a corner of element {element:?}")]
    NotIncident { element: Node, vertex: usize },
    #[error("element {element:?} does not exist in the mesh")]
    UnknownElement { element: Node },
    #[error("triangle is degenerate")]
    DegenerateTriangle,
    #[error("flattened quadrilateral is reflex at both ends of its diagonal")]
    DegenerateHinge,
    #[error("node {position} breaks the vertex / element alternation")]
    MalformedPath { position: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacedTriangle<S> {
    pub triangle: usize,
    /// Plane positions of the triangle's corners, in the mesh's corner order.
    pub corners: [Point2<S>; 3],
    pub strip: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Strip<S> {
    pub left: S,
    pub right: S,
    pub element: Node,
    pub entry_vertex: usize,
    pub exit_vertex: usize,
    pub entry: Point2<S>,
    pub exit: Point2<S>,
}

/// Where strips `k` and `k + 1` meet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Connection<S> {
    pub point: Point2<S>,
    pub vertex: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout<S> {
    pub strips: Vec<Strip<S>>,
    pub triangles: Vec<PlacedTriangle<S>>,
    pub connections: Vec<Connection<S>>,
}

impl<S: Scalar> Layout<S> {
    /// Triangles in two-triangle strips.
    pub fn quad_strip_count(&self) -> usize {
        self.strips.iter().filter(|s| matches!(s.element, Node::Edge(_))).count()
    }

    /// `(min_x, min_y, max_x, max_y)` over all placed corners.
    pub fn bounding_box(&self) -> [S; 4] {
        let mut b = [S::infinity(), S::infinity(), S::neg_infinity(), S::neg_infinity()];
        for p in self.triangles.iter().flat_map(|t| t.corners) {
            b = [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])];
        }
        b
    }
}

/// How a two-triangle strip was placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hinge {
    /// The flattened quadrilateral is convex and stays rigid.
    Rigid,
    /// Opened at the entry vertex, which both triangles still share.
    AtEntry,
    /// Opened at the exit vertex.
    AtExit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadPlacement<S> {
    /// Positions of `y`, `z`, `a` for the triangle left of `y -> z`.
    pub left: [Point2<S>; 3],
    /// Positions of `y`, `z`, `b` for the other triangle.
    pub right: [Point2<S>; 3],
    pub entry: Point2<S>,
    pub exit: Point2<S>,
    pub hinge: Hinge,
}

fn pi<S: Scalar>() -> S {
    lit(std::f64::consts::PI)
}

fn half_pi<S: Scalar>() -> S {
    lit(std::f64::consts::FRAC_PI_2)
}

/// Rotates by `-phi`, taking direction `phi` to the positive x axis, then
/// translates by `anchor`.
fn frame<S: Scalar>(p: Point2<S>, phi: S, anchor: Point2<S>) -> Point2<S> {
    let (s, c) = phi.sin_cos();
    [anchor[0] + c * p[0] + s * p[1], anchor[1] - s * p[0] + c * p[1]]
}

/// Coordinates of `apex` in the plane where `from` is the origin and `to`
/// lies on the positive x axis, on the left side. Returns `(x, height)`.
fn flatten<S: Scalar>(from: Point3<S>, to: Point3<S>, apex: Point3<S>) -> (S, S) {
    let axis = sub3(to, from);
    let len = norm3(axis);
    let d = sub3(apex, from);
    (dot3(d, axis) / len, norm3(cross3(axis, d)) / len)
}

/// Places a triangle so that corner `entry` lands on `anchor` and is the
/// strictly leftmost corner while corner `exit` is the strictly rightmost.
///
/// The direction that becomes the positive x axis bisects the arc of
/// feasible directions. Returns the corners in the input order.
pub fn place_triangle<S: Scalar>(
    points: [Point3<S>; 3],
    entry: usize,
    exit: usize,
    anchor: Point2<S>,
) -> Result<[Point2<S>; 3], LayoutError> {
    assert!(entry < 3 && exit < 3);
    if entry == exit {
        return Err(LayoutError::SameEntryExit { element: Node::Facet(usize::MAX), vertex: entry });
    }
    if is_degenerate3(points[0], points[1], points[2]) {
        return Err(LayoutError::DegenerateTriangle);
    }
    let third = 3 - entry - exit;
    let len = crate::geom::dist3(points[entry], points[exit]);
    let (x, h) = flatten(points[entry], points[exit], points[third]);
    // Counterclockwise order is preserved: the third corner is on the left
    // of entry -> exit exactly when exit follows entry.
    let h = if exit == (entry + 1) % 3 { h } else { -h };
    let flat_third = [x, h];
    let flat_exit = [len, S::zero()];

    let w = normalize(flat_third);
    let e = normalize([len - x, -h]);
    let d = normalize([w[0] + e[0], w[1] + e[1]]);
    let phi = d[1].atan2(d[0]);

    let mut out = [[S::zero(); 2]; 3];
    out[entry] = anchor;
    out[exit] = frame(flat_exit, phi, anchor);
    out[third] = frame(flat_third, phi, anchor);
    let right = out[exit][0];
    pull_inside(&mut out[third], anchor[0], right);
    Ok(out)
}

/// Rounding can leave a corner that belongs strictly inside `(lo, hi)` on
/// or just past a strip side; move it back by the smallest float step.
fn pull_inside<S: Scalar>(p: &mut Point2<S>, lo: S, hi: S) {
    if p[0] <= lo {
        p[0] = lo.next_toward(hi);
    }
    if p[0] >= hi {
        p[0] = hi.next_toward(lo);
    }
}

fn normalize<S: Scalar>(v: Point2<S>) -> Point2<S> {
    let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
    [v[0] / n, v[1] / n]
}

/// Places the two triangles on either side of diagonal `y z` in one strip,
/// entering at `y` and leaving at `z`. `a` is the apex left of `y -> z`.
///
/// A convex flattened quadrilateral is placed rigidly. Otherwise the
/// diagonal is opened at its convex end: the triangles stay joined there
/// and are turned apart just far enough, plus a small margin.
pub fn place_quad<S: Scalar>(
    y: Point3<S>,
    z: Point3<S>,
    a: Point3<S>,
    b: Point3<S>,
    anchor: Point2<S>,
) -> Result<QuadPlacement<S>, LayoutError> {
    if is_degenerate3(y, z, a) || is_degenerate3(z, y, b) {
        return Err(LayoutError::DegenerateTriangle);
    }
    let q = FlatQuad::new(y, z, a, b);
    let magnitude = anchor[0].abs().max(anchor[1].abs());
    let pi = pi::<S>();
    let reflex_y = q.alpha1 + q.alpha2 >= pi;
    let reflex_z = q.beta1 + q.beta2 >= pi;
    let mut placed = match (reflex_y, reflex_z) {
        (false, false) => q.rigid(anchor),
        (false, true) => q.hinged(anchor, magnitude),
        (true, false) => {
            // Mirror the problem through the diagonal's other end.
            let r = FlatQuad::new(z, y, b, a).hinged([S::zero(), S::zero()], magnitude);
            let flip = |p: Point2<S>| [-p[0], -p[1]];
            let entry = flip(r.exit);
            let shift = |p: Point2<S>| {
                let f = flip(p);
                // Grouped so that the entry copy lands exactly on the anchor.
                [anchor[0] + (f[0] - entry[0]), anchor[1] + (f[1] - entry[1])]
            };
            let left = [shift(r.right[1]), shift(r.right[0]), shift(r.right[2])];
            let right = [shift(r.left[1]), shift(r.left[0]), shift(r.left[2])];
            QuadPlacement { entry: anchor, exit: shift(r.entry), left, right, hinge: Hinge::AtExit }
        }
        (true, true) => return Err(LayoutError::DegenerateHinge),
    };
    let (lo, hi) = (placed.entry, placed.exit);
    for p in placed.left.iter_mut().chain(placed.right.iter_mut()) {
        if *p != lo && *p != hi {
            pull_inside(p, lo[0], hi[0]);
        }
    }
    Ok(placed)
}

/// `y` at the origin, `z` at `(len, 0)`, `a` above and `b` below.
struct FlatQuad<S> {
    len: S,
    a: Point2<S>,
    b: Point2<S>,
    alpha1: S,
    beta1: S,
    alpha2: S,
    beta2: S,
}

impl<S: Scalar> FlatQuad<S> {
    fn new(y: Point3<S>, z: Point3<S>, a: Point3<S>, b: Point3<S>) -> Self {
        let len = crate::geom::dist3(y, z);
        let (ax, ah) = flatten(y, z, a);
        let (bx, bh) = flatten(y, z, b);
        FlatQuad {
            len,
            a: [ax, ah],
            b: [bx, -bh],
            alpha1: ah.atan2(ax),
            beta1: ah.atan2(len - ax),
            alpha2: bh.atan2(bx),
            beta2: bh.atan2(len - bx),
        }
    }

    fn rigid(&self, anchor: Point2<S>) -> QuadPlacement<S> {
        let hp = half_pi::<S>();
        let lo = self.alpha1.max(self.beta2) - hp;
        let hi = hp - self.beta1.max(self.alpha2);
        let phi = (lo + hi) / lit(2.0);
        let z = frame([self.len, S::zero()], phi, anchor);
        QuadPlacement {
            left: [anchor, z, frame(self.a, phi, anchor)],
            right: [anchor, z, frame(self.b, phi, anchor)],
            entry: anchor,
            exit: z,
            hinge: Hinge::Rigid,
        }
    }

    /// Reflex at `z`: both triangles keep `y` and are rotated apart about it.
    /// `magnitude` is the size of the final coordinates, which bounds how
    /// small a gap can still be represented.
    fn hinged(&self, anchor: Point2<S>, magnitude: S) -> QuadPlacement<S> {
        let hp = half_pi::<S>();
        let pi = pi::<S>();
        let two = lit::<S>(2.0);
        let diameter = [dist2([S::zero(), S::zero()], self.a), dist2([S::zero(), S::zero()], self.b), dist2(self.a, self.b)]
            .into_iter()
            .fold(self.len, S::max);
        let apex_a = pi - self.alpha1 - self.beta1;
        let apex_b = pi - self.alpha2 - self.beta2;
        // Turning by `margin` moves each apex off the exit line by about
        // `|za| * margin / 2`; keep that above the float spacing.
        let shortest = dist2([self.len, S::zero()], self.a).min(dist2([self.len, S::zero()], self.b));
        let floor = lit::<S>(64.0) * S::epsilon() * (magnitude + diameter) / shortest;
        let margin = (lit::<S>(1e-6) * diameter / self.len).max(floor).min(apex_a / two).min(apex_b / two);
        let phi1 = hp - self.beta1 - margin / two;
        let mut phi2 = self.beta2 - hp + margin / two;
        let zero = [S::zero(), S::zero()];
        let z_end = [self.len, S::zero()];
        let z1 = frame(z_end, phi1, zero);
        let mut z2 = frame(z_end, phi2, zero);
        if z1[0] == z2[0] {
            phi2 = phi2 + margin / two;
            z2 = frame(z_end, phi2, zero);
        }
        let left = [anchor, add2(anchor, z1), frame(self.a, phi1, anchor)];
        let right = [anchor, add2(anchor, z2), frame(self.b, phi2, anchor)];
        let exit = if z1[0] > z2[0] { left[1] } else { right[1] };
        QuadPlacement { left, right, entry: anchor, exit, hinge: Hinge::AtEntry }
    }
}

/// Lays out every element of `nodes` (mesh ids) in consecutive strips,
/// starting with the first entry vertex at the origin.
pub fn layout_path<S: Scalar>(nodes: &[Node], m: &Mesh<S>) -> Result<Layout<S>, LayoutError> {
    if nodes.len() < 3 || nodes.len() % 2 == 0 {
        return Err(LayoutError::MalformedPath { position: nodes.len() });
    }
    for (i, n) in nodes.iter().enumerate() {
        if n.is_vertex() != (i % 2 == 0) {
            return Err(LayoutError::MalformedPath { position: i });
        }
    }
    let elements = nodes.len() / 2;
    let mut layout = Layout {
        strips: Vec::with_capacity(elements),
        triangles: Vec::with_capacity(elements + 4),
        connections: Vec::with_capacity(elements.saturating_sub(1)),
    };
    let mut anchor = [S::zero(), S::zero()];
    for k in 0..elements {
        let from = nodes[2 * k].vertex().unwrap();
        let element = nodes[2 * k + 1];
        let to = nodes[2 * k + 2].vertex().unwrap();
        if from == to {
            return Err(LayoutError::SameEntryExit { element, vertex: from });
        }
        if k > 0 {
            layout.connections.push(Connection { point: anchor, vertex: from });
        }
        let exit = match element {
            Node::Facet(f) => {
                if f >= m.triangle_count() {
                    return Err(LayoutError::UnknownElement { element });
                }
                let tri = m.triangles()[f];
                let corner = |v: usize| tri.iter().position(|&w| w == v).ok_or(LayoutError::NotIncident { element, vertex: v });
                let (entry, exit) = (corner(from)?, corner(to)?);
                let corners = place_triangle(m.triangle_points(f), entry, exit, anchor)?;
                layout.triangles.push(PlacedTriangle { triangle: f, corners, strip: k });
                corners[exit]
            }
            Node::Edge(e) => {
                if e >= m.edge_count() {
                    return Err(LayoutError::UnknownElement { element });
                }
                let ends = m.edges()[e];
                for v in [from, to] {
                    if !ends.contains(&v) {
                        return Err(LayoutError::NotIncident { element, vertex: v });
                    }
                }
                // The first triangle of an edge runs from its lower to its higher end.
                let [t0, t1] = m.edge_triangles(e);
                let (left_t, right_t) = if from < to { (t0, t1) } else { (t1, t0) };
                let apex = |t: usize| *m.triangles()[t].iter().find(|&&v| v != from && v != to).unwrap();
                let (a, b) = (apex(left_t), apex(right_t));
                let p = m.points();
                let q = place_quad(p[from], p[to], p[a], p[b], anchor)?;
                for (t, placed, apex) in [(left_t, q.left, a), (right_t, q.right, b)] {
                    let tri = m.triangles()[t];
                    let corners = tri.map(|v| {
                        if v == from {
                            placed[0]
                        } else if v == to {
                            placed[1]
                        } else {
                            debug_assert_eq!(v, apex);
                            placed[2]
                        }
                    });
                    layout.triangles.push(PlacedTriangle { triangle: t, corners, strip: k });
                }
                q.exit
            }
            Node::Vertex(_) => unreachable!(),
        };
        layout.strips.push(Strip {
            left: anchor[0],
            right: exit[0],
            element,
            entry_vertex: from,
            exit_vertex: to,
            entry: anchor,
            exit,
        });
        anchor = exit;
    }
    Ok(layout)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::dist3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lengths_match(p3: [Point3<f64>; 3], p2: [Point2<f64>; 3]) -> bool {
        (0..3).all(|i| {
            let j = (i + 1) % 3;
            let (l3, l2) = (dist3(p3[i], p3[j]), dist2(p2[i], p2[j]));
            (l3 - l2).abs() <= 1e-9 * l3
        })
    }

    fn signed_area(p: [Point2<f64>; 3]) -> f64 {
        (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1])
    }

    #[test]
    fn equilateral() {
        let h = 3f64.sqrt() / 2.0;
        let tri = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, h, 0.0]];
        let p = place_triangle(tri, 0, 1, [0.0, 0.0]).unwrap();
        assert_eq!(p[0], [0.0, 0.0]);
        assert!(p[2][0] > 0.0 && p[2][0] < p[1][0]);
        assert!(lengths_match(tri, p));
    }

    #[test]
    fn obtuse_at_entry_is_tilted() {
        let tri = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [-0.8, 0.3, 0.0]];
        let p = place_triangle(tri, 0, 1, [2.0, 5.0]).unwrap();
        assert_eq!(p[0], [2.0, 5.0]);
        assert!(p[0][0] < p[2][0] && p[2][0] < p[1][0]);
        assert!(lengths_match(tri, p));
    }

    #[test]
    fn same_entry_and_exit_is_rejected() {
        let tri = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        assert!(matches!(place_triangle(tri, 1, 1, [0.0, 0.0]), Err(LayoutError::SameEntryExit { .. })));
    }

    #[test]
    fn random_triangles_keep_extremes_and_orientation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let tri: [Point3<f64>; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
            if is_degenerate3(tri[0], tri[1], tri[2]) {
                continue;
            }
            let entry = rng.random_range(0..3);
            let exit = (entry + rng.random_range(1..3)) % 3;
            let third = 3 - entry - exit;
            let p = place_triangle(tri, entry, exit, [0.25, -1.0]).unwrap();
            assert_eq!(p[entry], [0.25, -1.0]);
            assert!(p[entry][0] < p[third][0] && p[third][0] < p[exit][0], "{tri:?}");
            assert!(lengths_match(tri, p));
            // The plane image keeps the counterclockwise corner order: a
            // rotation, never a reflection.
            assert!(signed_area(p) > 0.0);
        }
    }

    fn quad_checks(y: Point3<f64>, z: Point3<f64>, a: Point3<f64>, b: Point3<f64>) -> QuadPlacement<f64> {
        let q = place_quad(y, z, a, b, [1.0, 2.0]).unwrap();
        assert_eq!(q.entry, [1.0, 2.0]);
        assert!(lengths_match([y, z, a], q.left));
        assert!(lengths_match([z, y, b], [q.right[1], q.right[0], q.right[2]]));
        let all = [q.left[0], q.left[1], q.left[2], q.right[0], q.right[1], q.right[2]];
        for p in all {
            assert!(p == q.entry || p[0] > q.entry[0]);
            assert!(p == q.exit || p[0] < q.exit[0]);
        }
        assert!(signed_area(q.left) > 0.0);
        assert!(signed_area([q.right[1], q.right[0], q.right[2]]) > 0.0);
        q
    }

    #[test]
    fn convex_quad_is_rigid() {
        let q = quad_checks([0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, -1.0, 0.3]);
        assert_eq!(q.hinge, Hinge::Rigid);
        assert_eq!(q.left[1], q.right[1]);
    }

    #[test]
    fn reflex_at_exit_opens_at_entry() {
        // Both apexes lean past z, so the angle at z exceeds pi.
        let q = quad_checks([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [3.0, 0.5, 0.0], [3.0, -0.5, 0.0]);
        assert_eq!(q.hinge, Hinge::AtEntry);
        assert_eq!(q.left[0], q.right[0]);
        assert_ne!(q.left[1], q.right[1]);
    }

    #[test]
    fn reflex_at_entry_opens_at_exit() {
        let q = quad_checks([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [-2.0, 0.5, 0.0], [-2.0, -0.5, 0.0]);
        assert_eq!(q.hinge, Hinge::AtExit);
        assert_eq!(q.left[1], q.right[1]);
        assert_ne!(q.left[0], q.right[0]);
    }

    #[test]
    fn symmetric_reflex_quad_still_has_a_unique_exit() {
        let q = quad_checks([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 1.0, 0.0], [2.0, -1.0, 0.0]);
        assert_eq!(q.hinge, Hinge::AtEntry);
    }
}
