//! Upper bounds on hyperbolic volumes of link complements computed from the
//! combinatorics of planar diagrams.
//!
//! - [`geometry`]: Lobachevsky function, ideal tetrahedra, regular ideal
//!   bipyramids.
//! - [`optimize`]: numerical maximization of bipyramid volume over all
//!   dihedral-angle shapes.
//! - [`diagram`]: diagram codes, faces, bigon chains.
//! - [`bounds`]: every volume bound with its applicability gate.

pub mod bounds;
pub mod diagram;
pub mod geometry;
pub mod optimize;

pub use diagram::{compute_faces, parse_pd, FaceDecomposition, LinkDiagram, TwistStats};
pub use geometry::{regular_bipyramid_volume, v_oct, v_tet, VolumeConstants};
