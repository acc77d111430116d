//! Vertex-unfolding of closed triangulated surfaces.
//!
//! The surface is cut to a disk, a path through its triangles is found,
//! and the triangles are laid out left to right in vertical strips that
//! touch only at single points. Genus-zero surfaces also admit a closed
//! cycle through all triangles that never needs two-triangle strips.
//!
//! ```
//! use vunfold::{shapes, unfold_cycle};
//!
//! let cube = shapes::triangulated_cube::<f64>();
//! let unfolding = unfold_cycle(&cube).unwrap();
//! assert!(unfolding.report.pass);
//! assert_eq!(unfolding.layout.strips.len(), 12);
//! ```

pub mod scalar;
pub mod geom;
pub mod mesh;
pub mod lattice;
pub mod shapes;
pub mod surgery;
pub mod pathfinder;
pub mod facet_cycle;
pub mod layout;
pub mod verify;
pub mod hull;
pub mod pipeline;
pub mod io;

pub use lattice::{lattice_graph, LatticeGraph, Node};
pub use mesh::{build_mesh, genus, Mesh, MeshError};
pub use facet_cycle::{facet_cycle, FacetCycle, FacetCycleError};
pub use layout::{layout_path, place_quad, place_triangle, Layout, LayoutError};
pub use pipeline::{unfold_cycle, unfold_path, UnfoldError, Unfolding};
pub use pathfinder::{unfolding_path, PathError, UnfoldingPath};
pub use scalar::Scalar;
pub use surgery::{cut_to_disk, pick_terminals, Disk, DiskError};
pub use verify::{check_layout, check_path, Report, Rule};

pub type Mesh64 = Mesh<f64>;
pub type Mesh32 = Mesh<f32>;
pub type Layout64 = Layout<f64>;
pub type Layout32 = Layout<f32>;
