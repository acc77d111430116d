//! Independent checkers for paths, cycles and layouts.
//!
//! Nothing here trusts the construction code: paths are re-checked against
//! the lattice graph and layouts against the mesh geometry, with exact
//! orientation predicates for every overlap and contact decision.

use std::fmt;

use robust::{orient2d, Coord};
use serde::{Deserialize, Serialize};

use crate::geom::{dist2, dist3, Point2};
use crate::lattice::{LatticeGraph, Node};
use crate::layout::Layout;
use crate::mesh::Mesh;
use crate::scalar::{lit, Scalar};

/// Identifier of a checked property.
///
/// Path rules name node positions in `elements`, except the two coverage
/// rules which name facets. Layout rules name mesh triangles, except the
/// strip rules which name strip indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    EmptyPath,
    Alternation,
    UnknownElement,
    NotIncident,
    RepeatedVertex,
    UncoveredFacet,
    DuplicateFacet,
    NotClosed,
    EdgeInCycle,
    Isometry,
    Orientation,
    Overlap,
    Disconnected,
    StripContainment,
    StripOrder,
    Connection,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // The serde name is the canonical spelling.
        let s = serde_json::to_string(self).expect("unit variant serializes");
        f.write_str(s.trim_matches('"'))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub elements: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn from_violations(mut violations: Vec<Violation>) -> Self {
        violations.sort_by(|a, b| a.rule.cmp(&b.rule).then_with(|| a.elements.cmp(&b.elements)));
        Report { pass: violations.is_empty(), violations }
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    pub fn merge(self, other: Report) -> Report {
        let mut v = self.violations;
        v.extend(other.violations);
        Report::from_violations(v)
    }
}

fn violation(rule: Rule, elements: Vec<usize>, detail: impl Into<String>) -> Violation {
    Violation { rule, elements, detail: detail.into() }
}

/// Checks that `nodes` is an unfolding path of `g`, or a facet cycle when
/// `cyclic` is set.
///
/// A cycle is written with its first vertex repeated at the end.
pub fn check_path(g: &LatticeGraph, nodes: &[Node], cyclic: bool) -> Report {
    let mut out = Vec::new();
    if nodes.is_empty() {
        out.push(violation(Rule::EmptyPath, vec![], "path has no nodes"));
        return Report::from_violations(out);
    }
    if nodes.len() % 2 == 0 {
        out.push(violation(Rule::Alternation, vec![nodes.len() - 1], "path must start and end at a vertex"));
    }
    for (i, n) in nodes.iter().enumerate() {
        if n.is_vertex() != (i % 2 == 0) {
            out.push(violation(Rule::Alternation, vec![i], format!("{n:?} at position {i}")));
        } else if !g.contains(*n) {
            out.push(violation(Rule::UnknownElement, vec![i], format!("{n:?} is not in the lattice graph")));
        }
    }
    if !out.is_empty() {
        return Report::from_violations(out);
    }

    let mut covered = vec![0usize; g.facet_count()];
    for i in (1..nodes.len()).step_by(2) {
        let (before, element, after) = (nodes[i - 1], nodes[i], nodes[i + 1]);
        for (pos, v) in [(i - 1, before), (i + 1, after)] {
            if !g.is_incident(v, element) {
                out.push(violation(Rule::NotIncident, vec![pos, i], format!("{v:?} does not touch {element:?}")));
            }
        }
        if before == after {
            out.push(violation(Rule::RepeatedVertex, vec![i - 1, i + 1], format!("{before:?} on both sides of {element:?}")));
        }
        match element {
            Node::Facet(f) => covered[f] += 1,
            Node::Edge(e) => {
                if cyclic {
                    out.push(violation(Rule::EdgeInCycle, vec![i], format!("{element:?} in a facet cycle")));
                }
                for &f in g.edge_facets(e) {
                    covered[f] += 1;
                }
            }
            Node::Vertex(_) => unreachable!(),
        }
    }
    for (f, &c) in covered.iter().enumerate() {
        match c {
            0 => out.push(violation(Rule::UncoveredFacet, vec![f], format!("facet {f} is never visited"))),
            1 => {}
            _ => out.push(violation(Rule::DuplicateFacet, vec![f], format!("facet {f} is visited {c} times"))),
        }
    }
    if cyclic && nodes.first() != nodes.last() {
        out.push(violation(Rule::NotClosed, vec![0, nodes.len() - 1], "cycle does not return to its first vertex"));
    }
    Report::from_violations(out)
}

fn coord<S: Scalar>(p: Point2<S>) -> Coord<f64> {
    Coord { x: p[0].to_f64_exact(), y: p[1].to_f64_exact() }
}

/// A placed triangle in counterclockwise order, or `None` if its corners
/// are collinear.
fn ccw(c: [Coord<f64>; 3]) -> Option<[Coord<f64>; 3]> {
    let o = orient2d(c[0], c[1], c[2]);
    if o > 0.0 {
        Some(c)
    } else if o < 0.0 {
        Some([c[0], c[2], c[1]])
    } else {
        None
    }
}

/// True if some side line of `a` has every corner of `b` on its outer
/// closed side (`strict` false) or strictly outside (`strict` true).
fn separated_by_side(a: &[Coord<f64>; 3], b: &[Coord<f64>; 3], strict: bool) -> bool {
    (0..3).any(|i| {
        let (p, q) = (a[i], a[(i + 1) % 3]);
        b.iter().all(|&r| {
            let o = orient2d(p, q, r);
            if strict {
                o < 0.0
            } else {
                o <= 0.0
            }
        })
    })
}

/// Exact test: do the open interiors of two counterclockwise triangles meet?
pub fn interiors_intersect(a: &[Coord<f64>; 3], b: &[Coord<f64>; 3]) -> bool {
    !separated_by_side(a, b, false) && !separated_by_side(b, a, false)
}

/// Exact test: do the closed triangles share at least one point?
pub fn triangles_touch(a: &[Coord<f64>; 3], b: &[Coord<f64>; 3]) -> bool {
    !separated_by_side(a, b, true) && !separated_by_side(b, a, true)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Checks a layout of `m`: every triangle placed once and isometrically,
/// no two interiors overlapping, the contact graph connected, and every
/// strip holding its own triangles and meeting the next at one point.
pub fn check_layout<S: Scalar>(l: &Layout<S>, m: &Mesh<S>) -> Report {
    let mut out = Vec::new();
    let tol = S::isometry_tolerance();
    let mut placed = vec![0usize; m.triangle_count()];

    let mut shapes: Vec<Option<[Coord<f64>; 3]>> = Vec::with_capacity(l.triangles.len());
    for (i, pt) in l.triangles.iter().enumerate() {
        if pt.triangle >= m.triangle_count() {
            out.push(violation(Rule::UnknownElement, vec![pt.triangle], format!("placed triangle {i} has no mesh triangle")));
            shapes.push(None);
            continue;
        }
        placed[pt.triangle] += 1;
        let p3 = m.triangle_points(pt.triangle);
        for k in 0..3 {
            let j = (k + 1) % 3;
            let (l3, l2) = (dist3(p3[k], p3[j]), dist2(pt.corners[k], pt.corners[j]));
            // Far from the origin a short side cannot be stored more
            // accurately than the spacing of floats at its corners.
            let magnitude = pt.corners[k].iter().chain(&pt.corners[j]).fold(S::zero(), |a, c| a.max(c.abs()));
            let floor = lit::<S>(4.0) * S::epsilon() * magnitude;
            if !((l2 - l3).abs() <= tol * l3 + floor) {
                out.push(violation(
                    Rule::Isometry,
                    vec![pt.triangle],
                    format!("side {k} has length {l2} in the plane and {l3} in space"),
                ));
                break;
            }
        }
        let c = pt.corners.map(coord);
        if orient2d(c[0], c[1], c[2]) <= 0.0 {
            out.push(violation(Rule::Orientation, vec![pt.triangle], "placed triangle is reflected or flat"));
        }
        shapes.push(ccw(c));
    }
    for (t, &c) in placed.iter().enumerate() {
        match c {
            0 => out.push(violation(Rule::UncoveredFacet, vec![t], format!("triangle {t} is not placed"))),
            1 => {}
            _ => out.push(violation(Rule::DuplicateFacet, vec![t], format!("triangle {t} is placed {c} times"))),
        }
    }

    check_pairs(l, &shapes, &mut out);
    check_strips(l, m, &mut out);
    Report::from_violations(out)
}

/// Overlap and contact over all pairs whose x-ranges meet, found by a
/// sweep over the triangles sorted by their left end.
fn check_pairs<S: Scalar>(l: &Layout<S>, shapes: &[Option<[Coord<f64>; 3]>], out: &mut Vec<Violation>) {
    let n = l.triangles.len();
    let range = |c: &[Coord<f64>; 3], k: fn(&Coord<f64>) -> f64| {
        let v = c.map(|p| k(&p));
        (v[0].min(v[1]).min(v[2]), v[0].max(v[1]).max(v[2]))
    };
    let mut order: Vec<(f64, f64, f64, f64, usize)> = shapes
        .iter()
        .enumerate()
        .filter_map(|(i, s)| {
            let s = s.as_ref()?;
            let (x0, x1) = range(s, |p| p.x);
            let (y0, y1) = range(s, |p| p.y);
            Some((x0, x1, y0, y1, i))
        })
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.4.cmp(&b.4)));

    let mut uf = UnionFind::new(n);
    for (k, &(_, x1, y0, y1, i)) in order.iter().enumerate() {
        let a = shapes[i].as_ref().unwrap();
        for &(bx0, _, by0, by1, j) in &order[k + 1..] {
            if bx0 > x1 {
                break;
            }
            if by0 > y1 || by1 < y0 {
                continue;
            }
            let b = shapes[j].as_ref().unwrap();
            if !triangles_touch(a, b) {
                continue;
            }
            uf.union(i, j);
            if interiors_intersect(a, b) {
                let (ti, tj) = (l.triangles[i].triangle, l.triangles[j].triangle);
                out.push(violation(Rule::Overlap, vec![ti.min(tj), ti.max(tj)], "interiors intersect"));
            }
        }
    }
    if n > 0 {
        let root = uf.find(0);
        let stray: Vec<usize> = (0..n).filter(|&i| uf.find(i) != root).map(|i| l.triangles[i].triangle).collect();
        if !stray.is_empty() {
            out.push(violation(Rule::Disconnected, stray, "not reachable from the first triangle through contacts"));
        }
    }
}

fn check_strips<S: Scalar>(l: &Layout<S>, m: &Mesh<S>, out: &mut Vec<Violation>) {
    if l.strips.is_empty() {
        out.push(violation(Rule::EmptyPath, vec![], "layout has no strips"));
        return;
    }
    for (k, s) in l.strips.iter().enumerate() {
        if !(s.left < s.right) || s.entry[0] != s.left || s.exit[0] != s.right {
            out.push(violation(Rule::StripOrder, vec![k], "strip must run left to right from its entry to its exit"));
        }
        if let Some(next) = l.strips.get(k + 1) {
            if s.exit != next.entry || s.exit_vertex != next.entry_vertex {
                out.push(violation(Rule::Connection, vec![k, k + 1], "consecutive strips do not meet at their shared vertex"));
            }
            match l.connections.get(k) {
                Some(c) if c.point == s.exit && c.vertex == s.exit_vertex => {}
                _ => out.push(violation(Rule::Connection, vec![k, k + 1], "connection record disagrees with the strips")),
            }
        }
    }
    if l.connections.len() + 1 != l.strips.len() {
        out.push(violation(Rule::Connection, vec![], "one connection expected between each pair of strips"));
    }

    let mut entry_seen = vec![false; l.strips.len()];
    let mut exit_seen = vec![false; l.strips.len()];
    for pt in &l.triangles {
        let Some(s) = l.strips.get(pt.strip) else {
            out.push(violation(Rule::StripContainment, vec![pt.triangle], format!("strip {} does not exist", pt.strip)));
            continue;
        };
        let Some(tri) = m.triangles().get(pt.triangle) else { continue };
        for (c, &v) in pt.corners.iter().zip(tri) {
            // Only the entry and exit points may lie on the strip's sides.
            let inside = (c[0] > s.left || *c == s.entry) && (c[0] < s.right || *c == s.exit);
            if !inside {
                out.push(violation(
                    Rule::StripContainment,
                    vec![pt.triangle],
                    format!("corner at vertex {v} leaves strip {} or touches its side", pt.strip),
                ));
            }
            if v == s.entry_vertex && *c == s.entry {
                entry_seen[pt.strip] = true;
            }
            if v == s.exit_vertex && *c == s.exit {
                exit_seen[pt.strip] = true;
            }
        }
    }
    for k in 0..l.strips.len() {
        if !entry_seen[k] || !exit_seen[k] {
            out.push(violation(Rule::Connection, vec![k], "strip's entry or exit is not a corner of its own triangles"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64, y: f64) -> Coord<f64> {
        Coord { x, y }
    }

    fn tri(p: [(f64, f64); 3]) -> [Coord<f64>; 3] {
        ccw(p.map(|(x, y)| c(x, y))).unwrap()
    }

    #[test]
    fn shared_vertex_touches_without_overlap() {
        let a = tri([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let b = tri([(1.0, 0.0), (2.0, 0.0), (2.0, 1.0)]);
        assert!(triangles_touch(&a, &b));
        assert!(!interiors_intersect(&a, &b));
    }

    #[test]
    fn shared_edge_is_not_overlap() {
        let a = tri([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let b = tri([(1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        assert!(triangles_touch(&a, &b));
        assert!(!interiors_intersect(&a, &b));
    }

    #[test]
    fn crossing_triangles_overlap() {
        let a = tri([(0.0, 0.0), (2.0, 0.0), (1.0, 2.0)]);
        let b = tri([(0.0, 1.0), (2.0, 1.0), (1.0, -1.0)]);
        assert!(interiors_intersect(&a, &b));
    }

    #[test]
    fn far_apart_do_not_touch() {
        let a = tri([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let b = tri([(3.0, 0.0), (4.0, 0.0), (3.0, 1.0)]);
        assert!(!triangles_touch(&a, &b));
    }

    /// Point strictly inside a counterclockwise triangle, by sign tests
    /// written independently of the separating-side code.
    fn strictly_inside(t: &[Coord<f64>; 3], p: Coord<f64>) -> bool {
        let s = |a: Coord<f64>, b: Coord<f64>| (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        s(t[0], t[1]) > 0.0 && s(t[1], t[2]) > 0.0 && s(t[2], t[0]) > 0.0
    }

    #[test]
    fn overlap_test_never_misses_a_sampled_common_interior_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut overlaps = 0;
        for _ in 0..2000 {
            let mut r = || (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
            let (Some(a), Some(b)) = (ccw([r(), r(), r()].map(|(x, y)| c(x, y))), ccw([r(), r(), r()].map(|(x, y)| c(x, y)))) else {
                continue;
            };
            let mut rng2 = ChaCha8Rng::seed_from_u64(overlaps as u64);
            let found = (0..400).any(|_| {
                // Sample barycentric points of `a` and test them against `b`.
                let (u, v): (f64, f64) = (rng2.random(), rng2.random());
                let (u, v) = if u + v > 1.0 { (1.0 - u, 1.0 - v) } else { (u, v) };
                let p = c(
                    a[0].x + u * (a[1].x - a[0].x) + v * (a[2].x - a[0].x),
                    a[0].y + u * (a[1].y - a[0].y) + v * (a[2].y - a[0].y),
                );
                strictly_inside(&a, p) && strictly_inside(&b, p)
            });
            if found {
                overlaps += 1;
                assert!(interiors_intersect(&a, &b), "{a:?} {b:?}");
            }
        }
        assert!(overlaps > 100);
    }

    #[test]
    fn report_pass_matches_emptiness() {
        assert!(Report::from_violations(vec![]).pass);
        let r = Report::from_violations(vec![violation(Rule::Overlap, vec![1, 2], "x")]);
        assert!(!r.pass && r.has(Rule::Overlap));
    }

    #[test]
    fn rule_names_are_kebab_case() {
        assert_eq!(Rule::RepeatedVertex.to_string(), "repeated-vertex");
        assert_eq!(serde_json::to_string(&Rule::UncoveredFacet).unwrap(), "\"uncovered-facet\"");
    }

    #[test]
    fn path_checks_on_a_tetrahedron() {
        let g = LatticeGraph::from_faces(4, &[[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]]);
        let v = Node::Vertex;
        let f = Node::Facet;
        let good = [v(0), f(0), v(1), f(1), v(3), f(3), v(2), f(2), v(0)];
        assert!(check_path(&g, &good, true).pass);
        assert!(check_path(&g, &good, false).pass);

        let open = &good[..7];
        let r = check_path(&g, open, false);
        assert!(r.has(Rule::UncoveredFacet));
        assert_eq!(r.violations[0].elements, vec![2]);

        let repeated = [v(0), f(0), v(0), f(1), v(3), f(3), v(2), f(2), v(0)];
        assert!(check_path(&g, &repeated, false).has(Rule::RepeatedVertex));

        let not_closed = [v(0), f(0), v(1), f(1), v(3), f(3), v(2), f(2), v(3)];
        let r = check_path(&g, &not_closed, true);
        assert!(r.has(Rule::NotClosed));
        assert!(!r.has(Rule::NotIncident));

        let wrong = [v(0), f(3), v(1)];
        assert!(check_path(&g, &wrong, false).has(Rule::NotIncident));
        assert!(check_path(&g, &[v(0), v(1), f(0)], false).has(Rule::Alternation));
        assert!(check_path(&g, &[], false).has(Rule::EmptyPath));
    }

    #[test]
    fn edge_nodes_cover_two_facets_but_not_in_cycles() {
        let g = LatticeGraph::from_faces(4, &[[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]]);
        // Edge ids are lexicographic: 01, 02, 03, 12, 13, 23.
        let v = Node::Vertex;
        let p = [v(0), Node::Edge(0), v(1), Node::Facet(3), v(2), Node::Facet(2), v(3)];
        assert!(check_path(&g, &p, false).pass);
        assert!(check_path(&g, &p, true).has(Rule::EdgeInCycle));
    }
}
