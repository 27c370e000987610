//! Stacked per-slice triangulations lifted into a single 3D mesh.

use super::{extract_slice_points, prune_edges, triangulate_2d, DelaunayError};
use crate::marching_cubes::compute_normals;
use crate::mesh::TriangleMesh;
use crate::volume::{Axis, ScalarVolume};
use rayon::prelude::*;

/// Parameters of [`stack_slices`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackParams {
    pub axis: Axis,
    pub slice_step: usize,
    pub point_step: usize,
    /// Longest triangle edge kept, in mm.
    pub max_edge: f64,
}

impl Default for StackParams {
    fn default() -> Self {
        Self {
            axis: Axis::Z,
            slice_step: 1,
            point_step: 1,
            max_edge: 4.0,
        }
    }
}

impl StackParams {
    pub fn validate(&self) -> Result<(), DelaunayError> {
        if self.slice_step == 0 {
            return Err(DelaunayError::InvalidParameter {
                name: "slice_step",
                reason: "must be at least 1".into(),
            });
        }
        if self.point_step == 0 {
            return Err(DelaunayError::InvalidParameter {
                name: "point_step",
                reason: "must be at least 1".into(),
            });
        }
        if !(self.max_edge > 0.0) {
            return Err(DelaunayError::InvalidParameter {
                name: "max_edge",
                reason: format!("must be positive, got {}", self.max_edge),
            });
        }
        Ok(())
    }
}

/// Triangulates iso-contour points of every `slice_step`-th slice along
/// `axis`, prunes long edges and places each slice at its world position.
///
/// Slices with fewer than three usable points are skipped. Triangles are
/// counter-clockwise in the slice's (u, v) plane; normals come from the
/// volume gradient.
pub fn stack_slices(
    volume: &ScalarVolume,
    iso: f32,
    params: &StackParams,
) -> Result<TriangleMesh, DelaunayError> {
    params.validate()?;
    let a = params.axis.index();
    let extent = volume.dims()[a];
    if extent < 2 {
        return Err(DelaunayError::VolumeTooSmall {
            axis: params.axis.as_str(),
            extent,
        });
    }
    let origin = volume.origin();
    let spacing = volume.spacing();
    let [pu, pv] = params.axis.in_plane();
    let indices: Vec<usize> = (0..extent).step_by(params.slice_step).collect();

    let parts: Vec<TriangleMesh> = indices
        .par_iter()
        .map(|&s| {
            let slice = volume
                .extract_slice(params.axis, s)
                .expect("slice index below extent");
            let points = extract_slice_points(&slice, iso, params.point_step);
            let tri = match triangulate_2d(&points) {
                Ok(t) => prune_edges(&t, params.max_edge),
                Err(_) => return TriangleMesh::default(),
            };
            let mut remap = vec![u32::MAX; tri.points.len()];
            let mut mesh = TriangleMesh::default();
            for t in &tri.triangles {
                let ids = t.map(|i| {
                    if remap[i] == u32::MAX {
                        let p = tri.points[i];
                        let mut w = [0.0f64; 3];
                        w[a] = origin[a] + s as f64 * spacing[a];
                        w[pu] = origin[pu] + p.x;
                        w[pv] = origin[pv] + p.y;
                        remap[i] = mesh.positions.len() as u32;
                        mesh.positions.push(w.map(|c| c as f32));
                    }
                    remap[i]
                });
                mesh.triangles.push(ids);
            }
            mesh
        })
        .collect();

    let mut mesh = TriangleMesh::default();
    for part in &parts {
        mesh.append(part);
    }
    Ok(compute_normals(volume, mesh))
}
