//! Exact rational geometry: vectors, linear algebra, polytopes, fans, and
//! conewise-linear functions.

pub mod clf;
pub mod fan;
pub mod linalg;
pub mod polytope;
pub mod vector;

pub use clf::{minimize_ratio, ConewiseLinear};
pub use fan::{common_refinement, normal_fan, Fan};
pub use polytope::{
    barycenter, enumerate_vertices, facet_halfspaces, facets_with_incidence, recession_direction,
    support_extrema, volume, HPolytope, Halfspace, VPolytope,
};
pub use vector::RatVector;
