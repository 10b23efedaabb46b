//! Rational cones, polyhedra and fans with exact double description.

mod cone;
mod dd;
mod fan;
mod polyhedron;

pub use cone::Cone;
pub use fan::{common_refinement, image_fan, Fan, ImageFan};
pub use polyhedron::{fiber_slice, MinValue, Polyhedron};
