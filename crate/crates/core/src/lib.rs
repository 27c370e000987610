//! Core algorithms for the ultrasound visualization toolkit.
//!
//! The pipeline reads a MetaImage volume ([`metaimage`]), optionally denoises
//! it ([`filters`]), and turns it into a triangle mesh either by marching
//! cubes ([`marching_cubes`]) or by stacking per-slice 2D Delaunay
//! triangulations ([`delaunay`]). [`mesh`] holds the shared mesh type along
//! with topology metrics and the export/wire formats.

pub mod delaunay;
pub mod filters;
pub mod marching_cubes;
pub mod mesh;
pub mod metaimage;
pub mod pipeline;
pub mod volume;

pub use mesh::TriangleMesh;
pub use volume::{Axis, ScalarVolume, Slice2D};
