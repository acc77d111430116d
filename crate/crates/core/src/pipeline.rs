//! End-to-end unfolding: path or cycle, strip layout, verification.

use thiserror::Error;

use crate::facet_cycle::{facet_cycle, FacetCycleError};
use crate::lattice::{lattice_graph, Node};
use crate::layout::{layout_path, Layout, LayoutError};
use crate::mesh::Mesh;
use crate::pathfinder::{unfolding_path_with_stats, PathError, PathStats};
use crate::scalar::Scalar;
use crate::surgery::{cut_to_disk, pick_terminals};
use crate::verify::{check_layout, check_path, Report};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnfoldError {
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Cycle(#[from] FacetCycleError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

#[derive(Debug, Clone)]
pub struct Unfolding<S> {
    /// Node sequence in mesh ids. A cycle repeats its first vertex at the end.
    pub nodes: Vec<Node>,
    pub cyclic: bool,
    pub layout: Layout<S>,
    /// Path and layout checks together.
    pub report: Report,
    pub quad_count: usize,
    /// Case counts of the path construction; `None` for cycles.
    pub stats: Option<PathStats>,
}

/// Cuts `m` to a disk and unfolds along an unfolding path. Any genus.
pub fn unfold_path<S: Scalar>(m: &Mesh<S>) -> Result<Unfolding<S>, UnfoldError> {
    let d = cut_to_disk(m);
    let (s, t) = pick_terminals(&d);
    let (path, stats) = unfolding_path_with_stats(&d, s, t)?;
    let nodes = d.lift_path(path.nodes());
    finish(m, nodes, false, Some(stats))
}

/// Unfolds a genus-zero mesh along a facet cycle: one triangle per strip.
pub fn unfold_cycle<S: Scalar>(m: &Mesh<S>) -> Result<Unfolding<S>, UnfoldError> {
    let cycle = facet_cycle(m)?;
    finish(m, cycle.nodes, true, None)
}

fn finish<S: Scalar>(
    m: &Mesh<S>,
    nodes: Vec<Node>,
    cyclic: bool,
    stats: Option<PathStats>,
) -> Result<Unfolding<S>, UnfoldError> {
    let layout = layout_path(&nodes, m)?;
    let report = check_path(&lattice_graph(m), &nodes, cyclic).merge(check_layout(&layout, m));
    let quad_count = nodes.iter().filter(|n| matches!(n, Node::Edge(_))).count();
    Ok(Unfolding { nodes, cyclic, layout, report, quad_count, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn cube_cycle_has_twelve_single_triangle_strips() {
        let u = unfold_cycle(&shapes::triangulated_cube::<f64>()).unwrap();
        assert!(u.report.pass, "{:?}", u.report.violations);
        assert_eq!(u.layout.strips.len(), 12);
        assert_eq!(u.quad_count, 0);
    }

    #[test]
    fn torus_path() {
        let u = unfold_path(&shapes::torus::<f64>(8, 5, 3.0, 1.0)).unwrap();
        assert!(u.report.pass, "{:?}", u.report.violations);
        assert!(matches!(unfold_cycle(&shapes::torus::<f64>(8, 5, 3.0, 1.0)), Err(UnfoldError::Cycle(_))));
    }

    #[test]
    fn single_precision() {
        let m = shapes::octahedron::<f32>();
        assert!(unfold_path(&m).unwrap().report.pass);
        assert!(unfold_cycle(&m).unwrap().report.pass);
    }
}
