//! Isosurface extraction by marching cubes.
//!
//! Each cell of eight neighbouring voxels is classified against the iso
//! level (strictly greater counts as inside), mapped through the 256-case
//! table in [`tables`], and emits triangles whose vertices sit on the cell
//! edges by linear interpolation. Vertices are keyed by the grid edge they
//! lie on, so adjacent cells share them without any epsilon merging.
//! Triangles wind counter-clockwise when viewed from outside, i.e. from the
//! side of lower field values.

pub mod tables;

use crate::mesh::{normalize, TriangleMesh};
use crate::volume::ScalarVolume;
use rayon::prelude::*;
use std::collections::HashMap;
use tables::{CORNER_OFFSETS, EDGE_CORNERS, TRI_TABLE};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtractError {
    #[error("VolumeTooSmall: need at least 2 voxels along {axes}, got dims {dims:?}")]
    VolumeTooSmall { dims: [usize; 3], axes: &'static str },
    #[error("DegenerateEdge: both endpoints have value {0}")]
    DegenerateEdge(f32),
}

/// Cell-layer count per parallel work unit. Fixed so that the fragment
/// boundaries, and therefore the output, never depend on the thread count.
pub const DEFAULT_SLAB_LAYERS: usize = 8;

/// Classification of one cell: bit `b` set iff corner `b` is above iso.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellCase(pub u8);

impl CellCase {
    pub fn index(self) -> u8 {
        self.0
    }

    /// Whether this case is one of the base patterns (at most four inside
    /// corners, ties broken towards indices below 128). Other cases reuse
    /// the base pattern of their complement with reversed winding.
    pub fn is_base(self) -> bool {
        let inside = self.0.count_ones();
        inside < 4 || (inside == 4 && self.0 < 128)
    }

    /// Edge triples of the triangles emitted for this case, wound so the
    /// right-hand normal points away from the inside corners.
    pub fn triangle_edges(self) -> impl Iterator<Item = [usize; 3]> {
        let base = self.is_base();
        let row = if base { !self.0 } else { self.0 };
        TRI_TABLE[row as usize]
            .chunks_exact(3)
            .take_while(|c| c[0] >= 0)
            .map(move |c| {
                let [a, b, c] = [c[0] as usize, c[1] as usize, c[2] as usize];
                if base {
                    [a, b, c]
                } else {
                    [a, c, b]
                }
            })
    }

    pub fn triangle_count(self) -> usize {
        self.triangle_edges().count()
    }
}

pub fn classify_cell(corner_values: &[f32; 8], iso: f32) -> CellCase {
    let mut index = 0u8;
    for (b, &v) in corner_values.iter().enumerate() {
        if v > iso {
            index |= 1 << b;
        }
    }
    CellCase(index)
}

/// Point where the linear interpolant between `(p1, v1)` and `(p2, v2)`
/// crosses `iso`; the parameter is clamped to `[0, 1]`.
pub fn interpolate_edge(
    p1: [f64; 3],
    v1: f32,
    p2: [f64; 3],
    v2: f32,
    iso: f32,
) -> Result<[f64; 3], ExtractError> {
    if v1 == v2 {
        return Err(ExtractError::DegenerateEdge(v1));
    }
    let t = ((iso as f64 - v1 as f64) / (v2 as f64 - v1 as f64)).clamp(0.0, 1.0);
    Ok([
        p1[0] + t * (p2[0] - p1[0]),
        p1[1] + t * (p2[1] - p1[1]),
        p1[2] + t * (p2[2] - p1[2]),
    ])
}

/// Lower voxel offset and axis of each cube edge: the edge runs from
/// `cell + offset` to `cell + offset + e_axis`.
const EDGE_ORIGIN: [([usize; 3], usize); 12] = [
    ([0, 0, 0], 0),
    ([1, 0, 0], 1),
    ([0, 1, 0], 0),
    ([0, 0, 0], 1),
    ([0, 0, 1], 0),
    ([1, 0, 1], 1),
    ([0, 1, 1], 0),
    ([0, 0, 1], 1),
    ([0, 0, 0], 2),
    ([1, 0, 0], 2),
    ([1, 1, 0], 2),
    ([0, 1, 0], 2),
];

fn check_dims(volume: &ScalarVolume) -> Result<(), ExtractError> {
    let dims = volume.dims();
    if dims.iter().any(|&d| d < 2) {
        return Err(ExtractError::VolumeTooSmall {
            dims,
            axes: "every axis",
        });
    }
    Ok(())
}

/// Vertices and local triangles produced by one slab of cell layers.
struct Fragment {
    edge_ids: Vec<u64>,
    positions: Vec<[f32; 3]>,
    triangles: Vec<[u32; 3]>,
}

fn extract_slab(volume: &ScalarVolume, iso: f32, layers: std::ops::Range<usize>) -> Fragment {
    let [nx, ny, _] = volume.dims();
    let mut lookup: HashMap<u64, u32> = HashMap::new();
    let mut frag = Fragment {
        edge_ids: Vec::new(),
        positions: Vec::new(),
        triangles: Vec::new(),
    };
    let mut corners = [0.0f32; 8];
    for k in layers {
        for j in 0..ny - 1 {
            for i in 0..nx - 1 {
                for (c, off) in CORNER_OFFSETS.iter().enumerate() {
                    corners[c] = volume.at(i + off[0], j + off[1], k + off[2]);
                }
                let case = classify_cell(&corners, iso);
                if case.0 == 0 || case.0 == 255 {
                    continue;
                }
                for edges in case.triangle_edges() {
                    let tri = edges.map(|e| {
                        let (off, axis) = EDGE_ORIGIN[e];
                        let lo = [i + off[0], j + off[1], k + off[2]];
                        let id = (volume.flat_index(lo[0], lo[1], lo[2]) as u64) * 3 + axis as u64;
                        *lookup.entry(id).or_insert_with(|| {
                            let [c1, c2] = EDGE_CORNERS[e];
                            // canonical direction: from the lower voxel up the axis
                            let (v_lo, v_hi) = if CORNER_OFFSETS[c1][axis] == 0 {
                                (corners[c1], corners[c2])
                            } else {
                                (corners[c2], corners[c1])
                            };
                            let p_lo = lo.map(|c| c as f64);
                            let mut p_hi = p_lo;
                            p_hi[axis] += 1.0;
                            let p = interpolate_edge(p_lo, v_lo, p_hi, v_hi, iso)
                                .expect("crossing edge has distinct endpoint values");
                            frag.edge_ids.push(id);
                            frag.positions.push(volume.continuous_to_world(p).map(|c| c as f32));
                            (frag.positions.len() - 1) as u32
                        })
                    });
                    frag.triangles.push(tri);
                }
            }
        }
    }
    frag
}

/// Marching cubes with normals, using [`DEFAULT_SLAB_LAYERS`].
pub fn extract_isosurface(volume: &ScalarVolume, iso: f32) -> Result<TriangleMesh, ExtractError> {
    extract_isosurface_slabbed(volume, iso, DEFAULT_SLAB_LAYERS)
}

/// Marching cubes over z-slabs of `slab_layers` cell layers each.
///
/// Slabs run in parallel; fragments are merged in slab order and vertices
/// numbered by first use, so the mesh equals the single-pass result for any
/// `slab_layers` and any thread count.
pub fn extract_isosurface_slabbed(
    volume: &ScalarVolume,
    iso: f32,
    slab_layers: usize,
) -> Result<TriangleMesh, ExtractError> {
    check_dims(volume)?;
    let cell_layers = volume.dims()[2] - 1;
    let slab_layers = slab_layers.max(1);
    let slabs: Vec<std::ops::Range<usize>> = (0..cell_layers)
        .step_by(slab_layers)
        .map(|z0| z0..z0.saturating_add(slab_layers).min(cell_layers))
        .collect();
    let fragments: Vec<Fragment> = slabs
        .into_par_iter()
        .map(|range| extract_slab(volume, iso, range))
        .collect();

    let mut mesh = TriangleMesh::default();
    let mut global: HashMap<u64, u32> = HashMap::new();
    for frag in fragments {
        let remap: Vec<u32> = frag
            .edge_ids
            .iter()
            .zip(&frag.positions)
            .map(|(&id, &p)| {
                *global.entry(id).or_insert_with(|| {
                    mesh.positions.push(p);
                    (mesh.positions.len() - 1) as u32
                })
            })
            .collect();
        mesh.triangles
            .extend(frag.triangles.iter().map(|t| t.map(|i| remap[i as usize])));
    }
    Ok(compute_normals(volume, mesh))
}

/// Central-difference gradient at a grid point, one-sided at the borders.
fn grid_gradient(volume: &ScalarVolume, ijk: [usize; 3]) -> [f64; 3] {
    let dims = volume.dims();
    let spacing = volume.spacing();
    let mut g = [0.0; 3];
    for a in 0..3 {
        let n = dims[a];
        if n < 2 {
            continue;
        }
        let mut lo = ijk;
        let mut hi = ijk;
        if ijk[a] > 0 {
            lo[a] -= 1;
        }
        if ijk[a] + 1 < n {
            hi[a] += 1;
        }
        let steps = (hi[a] - lo[a]) as f64;
        let f_hi = volume.at(hi[0], hi[1], hi[2]) as f64;
        let f_lo = volume.at(lo[0], lo[1], lo[2]) as f64;
        g[a] = (f_hi - f_lo) / (steps * spacing[a]);
    }
    g
}

/// Field gradient at a world position: grid gradients blended trilinearly.
pub fn sample_gradient(volume: &ScalarVolume, world: [f64; 3]) -> [f64; 3] {
    let dims = volume.dims();
    let c = volume.world_to_continuous(world);
    let mut base = [0usize; 3];
    let mut frac = [0.0f64; 3];
    for a in 0..3 {
        let max = (dims[a] - 1) as f64;
        let x = c[a].clamp(0.0, max);
        let b = (x.floor() as usize).min(dims[a].saturating_sub(2));
        base[a] = b;
        frac[a] = if dims[a] < 2 { 0.0 } else { x - b as f64 };
    }
    let mut g = [0.0; 3];
    for off in CORNER_OFFSETS {
        let mut w = 1.0;
        let mut ijk = [0usize; 3];
        for a in 0..3 {
            ijk[a] = (base[a] + off[a]).min(dims[a] - 1);
            w *= if off[a] == 1 { frac[a] } else { 1.0 - frac[a] };
        }
        if w == 0.0 {
            continue;
        }
        let gc = grid_gradient(volume, ijk);
        for a in 0..3 {
            g[a] += w * gc[a];
        }
    }
    g
}

/// Sets each vertex normal to the normalized negative field gradient.
///
/// Where the gradient vanishes, the area-weighted average of the incident
/// face normals is used instead (and +z if that is degenerate too).
pub fn compute_normals(volume: &ScalarVolume, mut mesh: TriangleMesh) -> TriangleMesh {
    let normals: Vec<Option<[f32; 3]>> = mesh
        .positions
        .par_iter()
        .map(|p| {
            let g = sample_gradient(volume, p.map(f64::from));
            normalize([-g[0], -g[1], -g[2]]).map(|n| n.map(|c| c as f32))
        })
        .collect();

    let mut face_sums: Option<Vec<[f64; 3]>> = None;
    if normals.iter().any(Option::is_none) {
        let mut sums = vec![[0.0f64; 3]; mesh.positions.len()];
        for t in 0..mesh.triangles.len() {
            let n = mesh.face_cross(t);
            for &v in &mesh.triangles[t] {
                for a in 0..3 {
                    sums[v as usize][a] += n[a];
                }
            }
        }
        face_sums = Some(sums);
    }
    mesh.normals = normals
        .into_iter()
        .enumerate()
        .map(|(i, n)| {
            n.unwrap_or_else(|| {
                let sums = face_sums.as_ref().expect("computed when any normal is missing");
                normalize(sums[i])
                    .unwrap_or([0.0, 0.0, 1.0])
                    .map(|c| c as f32)
            })
        })
        .collect();
    mesh
}
