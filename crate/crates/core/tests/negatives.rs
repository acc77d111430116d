use vunfold::shapes;
use vunfold::{check_layout, check_path, lattice_graph, layout_path, unfold_path, LayoutError, Node, Rule};

fn cube_path() -> (vunfold::Mesh64, vunfold::Unfolding<f64>) {
    let m = shapes::triangulated_cube::<f64>();
    let u = unfold_path(&m).unwrap();
    assert!(u.report.pass);
    (m, u)
}

#[test]
fn repeated_consecutive_vertex() {
    let m = shapes::tetrahedron::<f64>();
    let t = m.triangles()[0];
    let nodes = [Node::Vertex(t[0]), Node::Facet(0), Node::Vertex(t[0])];
    let r = check_path(&lattice_graph(&m), &nodes, false);
    assert!(r.has(Rule::RepeatedVertex));
    assert!(matches!(layout_path(&nodes, &m), Err(LayoutError::SameEntryExit { .. })));
}

#[test]
fn dropped_element_leaves_a_facet_uncovered() {
    let (m, u) = cube_path();
    let mut nodes = u.nodes.clone();
    nodes.truncate(nodes.len() - 2);
    let r = check_path(&lattice_graph(&m), &nodes, false);
    assert!(r.has(Rule::UncoveredFacet));
    assert!(!r.has(Rule::NotIncident));
    assert!(check_layout(&layout_path(&nodes, &m).unwrap(), &m).has(Rule::UncoveredFacet));
}

#[test]
fn facet_not_touching_its_vertices() {
    let m = shapes::octahedron::<f64>();
    let t = m.triangles()[0];
    let stranger = (0..m.vertex_count()).find(|v| !t.contains(v)).unwrap();
    let nodes = [Node::Vertex(t[0]), Node::Facet(0), Node::Vertex(stranger)];
    assert!(check_path(&lattice_graph(&m), &nodes, false).has(Rule::NotIncident));
    assert!(matches!(layout_path(&nodes, &m), Err(LayoutError::NotIncident { .. })));
}

#[test]
fn malformed_paths_are_rejected_by_layout() {
    let m = shapes::tetrahedron::<f64>();
    assert!(matches!(layout_path(&[Node::Vertex(0)], &m), Err(LayoutError::MalformedPath { .. })));
    let nodes = [Node::Vertex(0), Node::Vertex(1), Node::Vertex(2)];
    assert!(matches!(layout_path(&nodes, &m), Err(LayoutError::MalformedPath { position: 1 })));
    let nodes = [Node::Vertex(0), Node::Facet(40), Node::Vertex(2)];
    assert!(matches!(layout_path(&nodes, &m), Err(LayoutError::UnknownElement { .. })));
}

#[test]
fn scaled_triangle_breaks_isometry() {
    let (m, mut u) = cube_path();
    let pt = &mut u.layout.triangles[3];
    let c0 = pt.corners[0];
    for c in &mut pt.corners {
        *c = [c0[0] + 1.001 * (c[0] - c0[0]), c0[1] + 1.001 * (c[1] - c0[1])];
    }
    assert!(check_layout(&u.layout, &m).has(Rule::Isometry));
}

#[test]
fn shifted_triangle_overlaps_its_neighbor() {
    let (m, mut u) = cube_path();
    let target = u.layout.triangles[2].corners;
    let (cx, cy) = centroid(target);
    let pt = &mut u.layout.triangles[5];
    let (sx, sy) = centroid(pt.corners);
    for c in &mut pt.corners {
        *c = [c[0] + cx - sx, c[1] + cy - sy];
    }
    let r = check_layout(&u.layout, &m);
    assert!(r.has(Rule::Overlap));
    assert!(!r.has(Rule::Isometry));
}

#[test]
fn reflected_triangle_is_flagged() {
    let (m, mut u) = cube_path();
    let pt = &mut u.layout.triangles[0];
    for c in &mut pt.corners {
        c[1] = -c[1];
    }
    assert!(check_layout(&u.layout, &m).has(Rule::Orientation));
}

#[test]
fn separated_piece_is_disconnected() {
    let (m, mut u) = cube_path();
    let last = u.layout.triangles.len() - 1;
    for c in &mut u.layout.triangles[last].corners {
        c[1] += 100.0;
    }
    assert!(check_layout(&u.layout, &m).has(Rule::Disconnected));
}

fn centroid(c: [[f64; 2]; 3]) -> (f64, f64) {
    ((c[0][0] + c[1][0] + c[2][0]) / 3.0, (c[0][1] + c[1][1] + c[2][1]) / 3.0)
}
