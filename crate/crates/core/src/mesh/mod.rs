//! Triangulations, red refinement and node index sets.

mod hierarchy;
mod triangulation;

pub use hierarchy::{quadratic_ref_nodes, Level, MeshHierarchy};
pub use triangulation::{
    bundled, l_shape, load_mesh, orient, triangle_area, unit_square, write_mesh, Point, Triangulation,
};
