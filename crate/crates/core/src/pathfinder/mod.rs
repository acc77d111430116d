//! Unfolding paths through a triangulated disk.
//!
//! The recursive construction peels off one triangle at a time from either
//! terminal. A triangle whose removal would pinch the disk in two splits the
//! work into two sub-disks instead. All sub-disks share one mutable
//! half-edge structure; each pending piece of work is identified by the
//! boundary half-edges that end at its two terminals.

mod brute;

pub use brute::{brute_force_facet_path, brute_force_facet_path_with_limit, BruteForceError, DEFAULT_FACET_LIMIT};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::Node;
use crate::surgery::Disk;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("terminals {s} and {t} must be distinct boundary vertices")]
    InvalidTerminals { s: usize, t: usize },
    #[error("no case applies to the disk between {s} and {t}")]
    NoCaseApplies { s: usize, t: usize },
}

/// Alternating vertex / element sequence. Elements are facets or interior
/// edges; an edge element covers both of its facets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnfoldingPath {
    pub nodes: Vec<Node>,
}

impl UnfoldingPath {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// `(from, element, to)` triples.
    pub fn elements(&self) -> impl Iterator<Item = (usize, Node, usize)> + '_ {
        self.nodes.windows(3).step_by(2).map(|w| (w[0].vertex().unwrap(), w[1], w[2].vertex().unwrap()))
    }

    pub fn quad_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Edge(_))).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WingClass {
    Good,
    BreaksDisk,
    IncidentToOpposite,
    NotAWing,
}

/// How often each case fired.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathStats {
    pub peel: usize,
    pub split_same_side: usize,
    pub split_other_side: usize,
    pub single_triangle: usize,
    pub quadrilateral: usize,
    /// Peels on a disk whose boundary is only two edges long.
    pub digon: usize,
    pub expansions: usize,
    pub max_stack: usize,
}

/// Triangles incident to the boundary edges at `v`, lower boundary
/// neighbour first. Empty when `v` is not on the boundary.
pub fn wings(d: &Disk, v: usize) -> Vec<usize> {
    let Some(k) = d.boundary().iter().position(|&b| b == v) else {
        return Vec::new();
    };
    let n = d.boundary().len();
    let incoming = d.edges()[d.boundary_edges()[(k + n - 1) % n]];
    let outgoing = d.edges()[d.boundary_edges()[k]];
    let mut sides = [(incoming.vertices[0], incoming.left), (outgoing.vertices[1], outgoing.left)];
    sides.sort();
    let mut out = vec![sides[0].1];
    if sides[1].1 != sides[0].1 {
        out.push(sides[1].1);
    }
    out
}

/// Whether removing `t` leaves something other than a disk.
///
/// For a triangle with exactly one boundary side this is the case iff the
/// opposite corner already lies on the boundary. Triangles with two or
/// three boundary sides never break the disk; interior triangles always do.
pub fn breaks_disk(d: &Disk, t: usize) -> bool {
    let edges = d.triangle_edges(t);
    let boundary: Vec<usize> = (0..3).filter(|&i| d.edges()[edges[i]].is_boundary()).collect();
    match boundary.as_slice() {
        [] => true,
        [i] => d.is_boundary_vertex(d.triangles()[t][(i + 2) % 3]),
        _ => false,
    }
}

/// Classifies `t` as a wing at `terminal` with respect to the other terminal.
pub fn classify_wing(d: &Disk, t: usize, terminal: usize, opposite: usize) -> WingClass {
    if !wings(d, terminal).contains(&t) {
        WingClass::NotAWing
    } else if d.triangles()[t].contains(&opposite) {
        WingClass::IncidentToOpposite
    } else if breaks_disk(d, t) {
        WingClass::BreaksDisk
    } else {
        WingClass::Good
    }
}

/// An unfolding path from `s` to `t` covering every triangle of `d` once.
pub fn unfolding_path(d: &Disk, s: usize, t: usize) -> Result<UnfoldingPath, PathError> {
    unfolding_path_with_stats(d, s, t).map(|(p, _)| p)
}

pub fn unfolding_path_with_stats(d: &Disk, s: usize, t: usize) -> Result<(UnfoldingPath, PathStats), PathError> {
    if s == t || !d.is_boundary_vertex(s) || !d.is_boundary_vertex(t) {
        return Err(PathError::InvalidTerminals { s, t });
    }
    let work = WorkDisk::new(d);
    let incoming = |v: usize| {
        let k = d.boundary().iter().position(|&b| b == v).unwrap();
        let n = d.boundary().len();
        work.half_edge_of(d.boundary_edges()[(k + n - 1) % n])
    };
    let task = Task { s, t, s_in: incoming(s), t_in: incoming(t) };
    work.run(task)
}

#[derive(Debug, Clone, Copy)]
struct Task {
    s: usize,
    t: usize,
    /// Boundary half-edge of the task's sub-disk ending at `s`.
    s_in: usize,
    t_in: usize,
}

#[derive(Debug, Clone, Copy)]
enum Work {
    Task(Task),
    Emit(usize, Node, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    S,
    T,
}

/// Half-edge `h = 3 * triangle + side` runs from corner `side` to corner
/// `side + 1`. A half-edge is on the current boundary when its twin is
/// missing or belongs to a removed triangle; boundary half-edges are linked
/// in counterclockwise order through `next` / `prev`.
struct WorkDisk<'a> {
    disk: &'a Disk,
    twin: Vec<usize>,
    alive: Vec<bool>,
    /// Set once a vertex is on the boundary of whatever sub-disk holds it.
    touched: Vec<bool>,
    next: Vec<usize>,
    prev: Vec<usize>,
    stats: PathStats,
}

impl<'a> WorkDisk<'a> {
    fn new(disk: &'a Disk) -> Self {
        let f = disk.triangle_count();
        let mut twin = vec![NONE; 3 * f];
        for e in disk.edges() {
            if let Some(r) = e.right {
                let a = Self::side_in(disk, e.left, e.vertices);
                let b = Self::side_in(disk, r, [e.vertices[1], e.vertices[0]]);
                twin[a] = b;
                twin[b] = a;
            }
        }
        let mut touched = vec![false; disk.vertex_count()];
        for &v in disk.boundary() {
            touched[v] = true;
        }
        let mut w = WorkDisk {
            disk,
            twin,
            alive: vec![true; f],
            touched,
            next: vec![NONE; 3 * f],
            prev: vec![NONE; 3 * f],
            stats: PathStats::default(),
        };
        let hs: Vec<usize> = disk.boundary_edges().iter().map(|&e| w.half_edge_of(e)).collect();
        for i in 0..hs.len() {
            w.link(hs[i], hs[(i + 1) % hs.len()]);
        }
        w
    }

    fn side_in(disk: &Disk, t: usize, [a, b]: [usize; 2]) -> usize {
        let tri = disk.triangles()[t];
        let side = (0..3).find(|&i| tri[i] == a && tri[(i + 1) % 3] == b).expect("edge lies on its triangle");
        3 * t + side
    }

    /// The half-edge of a boundary disk edge.
    fn half_edge_of(&self, e: usize) -> usize {
        let edge = self.disk.edges()[e];
        Self::side_in(self.disk, edge.left, edge.vertices)
    }

    fn origin(&self, h: usize) -> usize {
        self.disk.triangles()[h / 3][h % 3]
    }

    fn dest(&self, h: usize) -> usize {
        self.disk.triangles()[h / 3][(h % 3 + 1) % 3]
    }

    fn succ(h: usize) -> usize {
        3 * (h / 3) + (h % 3 + 1) % 3
    }

    fn pred(h: usize) -> usize {
        3 * (h / 3) + (h % 3 + 2) % 3
    }

    fn is_boundary(&self, h: usize) -> bool {
        let tw = self.twin[h];
        tw == NONE || !self.alive[tw / 3]
    }

    fn link(&mut self, a: usize, b: usize) {
        self.next[a] = b;
        self.prev[b] = a;
    }

    fn contains(&self, tri: usize, v: usize) -> bool {
        self.disk.triangles()[tri].contains(&v)
    }

    /// Corner opposite boundary half-edge `h`.
    fn apex(&self, h: usize) -> usize {
        self.dest(Self::succ(h))
    }

    fn breaks(&self, h: usize) -> bool {
        let (h1, h2) = (Self::succ(h), Self::pred(h));
        self.touched[self.apex(h)] && !self.is_boundary(h1) && !self.is_boundary(h2)
    }

    fn run(mut self, root: Task) -> Result<(UnfoldingPath, PathStats), PathError> {
        let f = self.disk.triangle_count();
        let mut nodes = Vec::with_capacity(2 * f + 1);
        nodes.push(Node::Vertex(root.s));
        let mut stack = vec![Work::Task(root)];
        while let Some(item) = stack.pop() {
            match item {
                Work::Emit(from, element, to) => {
                    debug_assert_eq!(nodes.last(), Some(&Node::Vertex(from)));
                    nodes.push(element);
                    nodes.push(Node::Vertex(to));
                }
                Work::Task(task) => {
                    self.stats.expansions += 1;
                    assert!(self.stats.expansions <= f, "more expansions than triangles");
                    let before = stack.len();
                    self.step(task, &mut stack, &mut nodes)?;
                    self.stats.max_stack = self.stats.max_stack.max(stack.len());
                    debug_assert!(stack.len() <= before + 3);
                }
            }
        }
        debug_assert!(self.alive.iter().all(|&a| !a));
        Ok((UnfoldingPath { nodes }, self.stats))
    }

    fn step(&mut self, task: Task, stack: &mut Vec<Work>, nodes: &mut Vec<Node>) -> Result<(), PathError> {
        let Task { s, t, s_in, t_in } = task;
        debug_assert_eq!(self.dest(s_in), s);
        debug_assert_eq!(self.dest(t_in), t);
        let s_out = self.next[s_in];
        let t_out = self.next[t_in];

        if self.next[s_out] == s_in {
            // Two-edge boundary: s and t are its only vertices, so the apex
            // of either boundary triangle is interior and can be peeled.
            let tri = s_out / 3;
            let u = self.apex(s_out);
            assert!(!self.touched[u]);
            let handles = self.remove(tri);
            let u_in = self.handle_for(&handles, u);
            // s_out was t's incoming half-edge.
            let t_in = self.handle_for(&handles, t);
            self.stats.digon += 1;
            stack.push(Work::Task(Task { s: u, t, s_in: u_in, t_in }));
            stack.push(Work::Emit(s, Node::Facet(tri), u));
            return Ok(());
        }

        let mut candidates = [
            (self.origin(s_in), s_in, End::S),
            (self.dest(s_out), s_out, End::S),
            (self.origin(t_in), t_in, End::T),
            (self.dest(t_out), t_out, End::T),
        ];
        candidates[..2].sort_by_key(|c| c.0);
        candidates[2..].sort_by_key(|c| c.0);
        let mut wings: Vec<(usize, End)> = Vec::with_capacity(4);
        for (_, h, end) in candidates {
            if !wings.iter().any(|&(g, _)| g / 3 == h / 3) {
                wings.push((h, end));
            }
        }
        let opposite = |end: End| if end == End::S { t } else { s };

        if let Some(&(h, end)) = wings.iter().find(|&&(h, end)| !self.contains(h / 3, opposite(end)) && !self.breaks(h)) {
            self.peel(h, end, task, stack);
            return Ok(());
        }
        if let Some(&(h, end)) = wings.iter().find(|&&(h, end)| !self.contains(h / 3, opposite(end))) {
            assert!(self.breaks(h), "a wing that is neither good nor incident to the other terminal must break the disk");
            self.split(h, end, task, stack);
            return Ok(());
        }

        let tri = s_out / 3;
        if (0..3).all(|i| self.is_boundary(3 * tri + i)) {
            assert!(self.contains(tri, t));
            self.alive[tri] = false;
            self.stats.single_triangle += 1;
            nodes.push(Node::Facet(tri));
            nodes.push(Node::Vertex(t));
            return Ok(());
        }
        let other = s_in / 3;
        let shared = (0..3).map(|i| 3 * tri + i).find(|&h| !self.is_boundary(h) && self.twin[h] / 3 == other);
        if let Some(h) = shared {
            let quad = [tri, other];
            let rest_on_boundary = quad
                .iter()
                .flat_map(|&q| (0..3).map(move |i| 3 * q + i))
                .all(|g| g == h || g == self.twin[h] || self.is_boundary(g));
            let ends = [self.origin(h), self.dest(h)];
            if rest_on_boundary && ends.contains(&s) && ends.contains(&t) {
                self.alive[tri] = false;
                self.alive[other] = false;
                self.stats.quadrilateral += 1;
                let edge = self.disk.triangle_edges(tri)[h % 3];
                nodes.push(Node::Edge(edge));
                nodes.push(Node::Vertex(t));
                return Ok(());
            }
        }
        Err(PathError::NoCaseApplies { s, t })
    }

    /// Removes a triangle that has one or two boundary sides and relinks the
    /// boundary around it. Returns the half-edges whose successors changed:
    /// the predecessor on the boundary and the newly exposed sides.
    fn remove(&mut self, tri: usize) -> Vec<usize> {
        let hs = [3 * tri, 3 * tri + 1, 3 * tri + 2];
        let on = hs.map(|h| self.is_boundary(h));
        let count = on.iter().filter(|&&b| b).count();
        let out = match count {
            1 => {
                let i = (0..3).find(|&i| on[i]).unwrap();
                let (p, n) = (self.prev[hs[i]], self.next[hs[i]]);
                let x1 = self.twin[hs[(i + 2) % 3]];
                let x2 = self.twin[hs[(i + 1) % 3]];
                self.link(p, x1);
                self.link(x1, x2);
                self.link(x2, n);
                vec![p, x1, x2]
            }
            2 => {
                let k = (0..3).find(|&i| !on[i]).unwrap();
                let i = (k + 1) % 3;
                let (p, n) = (self.prev[hs[i]], self.next[hs[(i + 1) % 3]]);
                let x = self.twin[hs[k]];
                self.link(p, x);
                self.link(x, n);
                vec![p, x]
            }
            _ => unreachable!("only triangles with one or two boundary sides are peeled"),
        };
        self.alive[tri] = false;
        for v in self.disk.triangles()[tri] {
            self.touched[v] = true;
        }
        out
    }

    fn handle_for(&self, candidates: &[usize], v: usize) -> usize {
        *candidates.iter().find(|&&h| self.dest(h) == v).expect("new boundary reaches the vertex")
    }

    /// Removes the good wing on boundary half-edge `h`.
    fn peel(&mut self, h: usize, end: End, task: Task, stack: &mut Vec<Work>) {
        let tri = h / 3;
        let u = self.apex(h);
        let handles = self.remove(tri);
        let u_in = self.handle_for(&handles, u);
        self.stats.peel += 1;
        match end {
            End::S => {
                stack.push(Work::Task(Task { s: u, s_in: u_in, ..task }));
                stack.push(Work::Emit(task.s, Node::Facet(tri), u));
            }
            End::T => {
                stack.push(Work::Emit(u, Node::Facet(tri), task.t));
                stack.push(Work::Task(Task { t: u, t_in: u_in, ..task }));
            }
        }
    }

    /// The wing on `h` is not incident to the other terminal but its
    /// apex `u` is on the boundary, so removal leaves two disks joined at `u`.
    fn split(&mut self, h: usize, end: End, task: Task, stack: &mut Vec<Work>) {
        let tri = h / 3;
        let i = h % 3;
        let hs = [3 * tri + i, 3 * tri + (i + 1) % 3, 3 * tri + (i + 2) % 3];
        let (c0, c1) = (self.origin(h), self.dest(h));
        let u = self.apex(h);
        let (p, n) = (self.prev[h], self.next[h]);

        // Rotate about u in both directions at once; whichever side of the
        // fan is shorter finds its boundary half-edge first.
        let mut out_walk = hs[2];
        let mut in_walk = hs[1];
        let (in_u, out_u) = loop {
            let g = Self::succ(self.twin[out_walk]);
            if self.is_boundary(g) {
                break (self.prev[g], g);
            }
            out_walk = g;
            let g = Self::pred(self.twin[in_walk]);
            if self.is_boundary(g) {
                break (g, self.next[g]);
            }
            in_walk = g;
        };
        debug_assert_eq!(self.dest(in_u), u);
        debug_assert_eq!(self.origin(out_u), u);

        // Chain X runs c1 .. u and chain Y runs u .. c0. Find which one holds
        // the other terminal, again walking both in lockstep.
        let (opposite, opposite_in) = match end {
            End::S => (task.t, task.t_in),
            End::T => (task.s, task.s_in),
        };
        debug_assert_ne!(opposite, u);
        let mut x = Some(n);
        let mut y = Some(out_u);
        let opposite_in_x = loop {
            if let Some(g) = x {
                if g == opposite_in {
                    break true;
                }
                x = if g == in_u { None } else { Some(self.next[g]) };
            } else {
                break false;
            }
            if let Some(g) = y {
                if g == opposite_in {
                    break false;
                }
                y = if g == p { None } else { Some(self.next[g]) };
            } else {
                break true;
            }
        };

        let x_close = self.twin[hs[1]];
        let y_close = self.twin[hs[2]];
        self.link(in_u, x_close);
        self.link(x_close, n);
        self.link(p, y_close);
        self.link(y_close, out_u);
        self.alive[tri] = false;

        // D1 holds the wing's own terminal, D2 the other end of its boundary side.
        let terminal = match end {
            End::S => task.s,
            End::T => task.t,
        };
        let terminal_is_c0 = c0 == terminal;
        let other = if terminal_is_c0 { c1 } else { c0 };
        let (term_d1, u_d1, other_d2, u_d2) = if terminal_is_c0 {
            (p, y_close, x_close, in_u)
        } else {
            (x_close, in_u, p, y_close)
        };
        let opposite_in_d1 = opposite_in_x != terminal_is_c0;

        let works = match (end, opposite_in_d1) {
            (End::S, true) => {
                self.stats.split_same_side += 1;
                [
                    Work::Emit(task.s, Node::Facet(tri), other),
                    Work::Task(Task { s: other, s_in: other_d2, t: u, t_in: u_d2 }),
                    Work::Task(Task { s: u, s_in: u_d1, t: task.t, t_in: task.t_in }),
                ]
            }
            (End::S, false) => {
                self.stats.split_other_side += 1;
                [
                    Work::Task(Task { s: task.s, s_in: term_d1, t: u, t_in: u_d1 }),
                    Work::Emit(u, Node::Facet(tri), other),
                    Work::Task(Task { s: other, s_in: other_d2, t: task.t, t_in: task.t_in }),
                ]
            }
            (End::T, true) => {
                self.stats.split_same_side += 1;
                [
                    Work::Task(Task { s: task.s, s_in: task.s_in, t: u, t_in: u_d1 }),
                    Work::Task(Task { s: u, s_in: u_d2, t: other, t_in: other_d2 }),
                    Work::Emit(other, Node::Facet(tri), task.t),
                ]
            }
            (End::T, false) => {
                self.stats.split_other_side += 1;
                [
                    Work::Task(Task { s: task.s, s_in: task.s_in, t: other, t_in: other_d2 }),
                    Work::Emit(other, Node::Facet(tri), u),
                    Work::Task(Task { s: u, s_in: u_d1, t: task.t, t_in: term_d1 }),
                ]
            }
        };
        stack.extend(works.into_iter().rev());
    }
}
