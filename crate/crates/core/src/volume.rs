//! In-memory voxel grid, slicing and synthetic phantoms.
//!
//! Voxels are stored x-fastest, z-slowest (`index = i + nx * (j + ny * k)`),
//! which is also the raw MetaImage payload order.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VolumeError {
    #[error("data length {actual} does not match dims {dims:?} (expected {expected})")]
    ShapeMismatch {
        dims: [usize; 3],
        expected: usize,
        actual: usize,
    },
    #[error("every dimension must be at least 1, got {0:?}")]
    EmptyDimension([usize; 3]),
    #[error("spacing components must be positive and finite, got {0:?}")]
    InvalidSpacing([f64; 3]),
    #[error("origin components must be finite, got {0:?}")]
    InvalidOrigin([f64; 3]),
    #[error("voxel {index} holds a non-finite value")]
    NonFinite { index: usize },
    #[error("index {index:?} out of bounds for dims {dims:?}")]
    IndexOutOfBounds { index: [usize; 3], dims: [usize; 3] },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

/// One of the three volume axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    /// The two remaining axes, in x, y, z order.
    pub fn in_plane(self) -> [usize; 2] {
        match self {
            Axis::X => [1, 2],
            Axis::Y => [0, 2],
            Axis::Z => [0, 1],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(format!("unknown axis '{other}', expected x, y or z")),
        }
    }
}

/// A 3D grid of 32-bit float samples with physical spacing and origin (mm).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarVolume {
    dims: [usize; 3],
    spacing: [f64; 3],
    origin: [f64; 3],
    data: Vec<f32>,
}

impl ScalarVolume {
    pub fn new(
        dims: [usize; 3],
        spacing: [f64; 3],
        origin: [f64; 3],
        data: Vec<f32>,
    ) -> Result<Self, VolumeError> {
        if dims.iter().any(|&d| d == 0) {
            return Err(VolumeError::EmptyDimension(dims));
        }
        let expected = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or(VolumeError::EmptyDimension(dims))?;
        if data.len() != expected {
            return Err(VolumeError::ShapeMismatch {
                dims,
                expected,
                actual: data.len(),
            });
        }
        if spacing.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(VolumeError::InvalidSpacing(spacing));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(VolumeError::InvalidOrigin(origin));
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(VolumeError::NonFinite { index });
        }
        Ok(Self {
            dims,
            spacing,
            origin,
            data,
        })
    }

    /// Unit spacing, zero origin.
    pub fn from_data(dims: [usize; 3], data: Vec<f32>) -> Result<Self, VolumeError> {
        Self::new(dims, [1.0; 3], [0.0; 3], data)
    }

    /// Builds a volume by evaluating `f(i, j, k)` at every voxel.
    pub fn from_fn(
        dims: [usize; 3],
        spacing: [f64; 3],
        origin: [f64; 3],
        mut f: impl FnMut(usize, usize, usize) -> f32,
    ) -> Result<Self, VolumeError> {
        let mut data = Vec::with_capacity(dims.iter().product());
        for k in 0..dims[2] {
            for j in 0..dims[1] {
                for i in 0..dims[0] {
                    data.push(f(i, j, k));
                }
            }
        }
        Self::new(dims, spacing, origin, data)
    }

    pub fn constant(dims: [usize; 3], value: f32) -> Result<Self, VolumeError> {
        Self::from_data(dims, vec![value; dims.iter().product()])
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f32> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Same geometry, new samples. Length and finiteness are re-checked.
    pub fn with_data(&self, data: Vec<f32>) -> Result<Self, VolumeError> {
        Self::new(self.dims, self.spacing, self.origin, data)
    }

    pub fn with_origin(&self, origin: [f64; 3]) -> Result<Self, VolumeError> {
        Self::new(self.dims, self.spacing, origin, self.data.clone())
    }

    pub fn map(&self, f: impl Fn(f32) -> f32) -> Result<Self, VolumeError> {
        self.with_data(self.data.iter().map(|&v| f(v)).collect())
    }

    #[inline]
    pub fn flat_index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.dims[0] * (j + self.dims[1] * k)
    }

    /// Inverse of [`ScalarVolume::flat_index`].
    pub fn unflatten(&self, index: usize) -> [usize; 3] {
        let [nx, ny, _] = self.dims;
        [index % nx, (index / nx) % ny, index / (nx * ny)]
    }

    /// Unchecked in release builds; callers iterate within `dims`.
    #[inline]
    pub fn at(&self, i: usize, j: usize, k: usize) -> f32 {
        self.data[self.flat_index(i, j, k)]
    }

    pub fn get(&self, ijk: [usize; 3]) -> Result<f32, VolumeError> {
        self.check_index(ijk)?;
        Ok(self.at(ijk[0], ijk[1], ijk[2]))
    }

    fn check_index(&self, ijk: [usize; 3]) -> Result<(), VolumeError> {
        if ijk.iter().zip(&self.dims).any(|(&c, &d)| c >= d) {
            return Err(VolumeError::IndexOutOfBounds {
                index: ijk,
                dims: self.dims,
            });
        }
        Ok(())
    }

    /// World position (mm) of a voxel center: `origin + ijk * spacing`.
    pub fn index_to_world(&self, ijk: [usize; 3]) -> Result<[f64; 3], VolumeError> {
        self.check_index(ijk)?;
        Ok(self.continuous_to_world([ijk[0] as f64, ijk[1] as f64, ijk[2] as f64]))
    }

    /// Maps a fractional voxel coordinate to world space without bounds checks.
    #[inline]
    pub fn continuous_to_world(&self, p: [f64; 3]) -> [f64; 3] {
        [
            self.origin[0] + p[0] * self.spacing[0],
            self.origin[1] + p[1] * self.spacing[1],
            self.origin[2] + p[2] * self.spacing[2],
        ]
    }

    #[inline]
    pub fn world_to_continuous(&self, p: [f64; 3]) -> [f64; 3] {
        [
            (p[0] - self.origin[0]) / self.spacing[0],
            (p[1] - self.origin[1]) / self.spacing[1],
            (p[2] - self.origin[2]) / self.spacing[2],
        ]
    }

    /// Axis-aligned world bounds covered by voxel centers.
    pub fn world_bounds(&self) -> ([f64; 3], [f64; 3]) {
        let hi = self.continuous_to_world([
            (self.dims[0] - 1) as f64,
            (self.dims[1] - 1) as f64,
            (self.dims[2] - 1) as f64,
        ]);
        (self.origin, hi)
    }

    /// Exact minimum and maximum over all voxels.
    pub fn value_range(&self) -> (f32, f32) {
        self.data
            .iter()
            .fold((f32::INFINITY, f32::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Copies the plane `axis = slice_index` out of the volume.
    pub fn extract_slice(&self, axis: Axis, slice_index: usize) -> Result<Slice2D, VolumeError> {
        let a = axis.index();
        if slice_index >= self.dims[a] {
            let mut index = [0; 3];
            index[a] = slice_index;
            return Err(VolumeError::IndexOutOfBounds {
                index,
                dims: self.dims,
            });
        }
        let [u_axis, v_axis] = axis.in_plane();
        let (nu, nv) = (self.dims[u_axis], self.dims[v_axis]);
        let mut data = Vec::with_capacity(nu * nv);
        let mut ijk = [0usize; 3];
        ijk[a] = slice_index;
        for v in 0..nv {
            ijk[v_axis] = v;
            for u in 0..nu {
                ijk[u_axis] = u;
                data.push(self.at(ijk[0], ijk[1], ijk[2]));
            }
        }
        Ok(Slice2D {
            dims: [nu, nv],
            spacing: [self.spacing[u_axis], self.spacing[v_axis]],
            axis,
            slice_index,
            data,
        })
    }
}

/// A 2D plane copied out of a [`ScalarVolume`]. `data[u + nu * v]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Slice2D {
    pub dims: [usize; 2],
    pub spacing: [f64; 2],
    pub axis: Axis,
    pub slice_index: usize,
    pub data: Vec<f32>,
}

impl Slice2D {
    #[inline]
    pub fn at(&self, u: usize, v: usize) -> f32 {
        self.data[u + self.dims[0] * v]
    }
}

/// Binary ball phantom: `inside` where the voxel center is within `radius`
/// of `center`, `outside` elsewhere. Unit spacing, zero origin.
pub fn synth_sphere(
    dims: [usize; 3],
    center: [f64; 3],
    radius: f64,
    inside: f32,
    outside: f32,
) -> Result<ScalarVolume, VolumeError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(VolumeError::InvalidParameter {
            name: "radius",
            reason: format!("must be positive and finite, got {radius}"),
        });
    }
    let r2 = radius * radius;
    ScalarVolume::from_fn(dims, [1.0; 3], [0.0; 3], |i, j, k| {
        let d = [
            i as f64 - center[0],
            j as f64 - center[1],
            k as f64 - center[2],
        ];
        if d[0] * d[0] + d[1] * d[1] + d[2] * d[2] <= r2 {
            inside
        } else {
            outside
        }
    })
}

/// Uniform draw in (0, 1] from the top 53 bits of the generator output.
fn unit_open0(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 1.0) * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw in [0, 1).
fn unit_closed0(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Deterministic noise phantom.
///
/// The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`.
/// Gaussian samples come in pairs from the Box-Muller transform over two
/// 53-bit uniforms (`u1` in (0,1], `u2` in [0,1)), filling voxels in flat
/// order. Impulses are then placed on `round(impulse_fraction * n)` distinct
/// voxels chosen by a partial Fisher-Yates shuffle of the flat indices,
/// drawing `i + next_u64() % (n - i)` at step `i`.
pub fn synth_noise(
    dims: [usize; 3],
    seed: u64,
    base: f32,
    sigma: f32,
    impulse_fraction: f64,
    impulse_value: f32,
) -> Result<ScalarVolume, VolumeError> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(VolumeError::InvalidParameter {
            name: "sigma",
            reason: format!("must be non-negative, got {sigma}"),
        });
    }
    if !(0.0..=1.0).contains(&impulse_fraction) {
        return Err(VolumeError::InvalidParameter {
            name: "impulse_fraction",
            reason: format!("must lie in [0, 1], got {impulse_fraction}"),
        });
    }
    let n: usize = dims.iter().product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(n);
    while data.len() < n {
        let u1 = unit_open0(&mut rng);
        let u2 = unit_closed0(&mut rng);
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        data.push(base + sigma * (r * theta.cos()) as f32);
        if data.len() < n {
            data.push(base + sigma * (r * theta.sin()) as f32);
        }
    }

    let impulses = (impulse_fraction * n as f64).round() as usize;
    if impulses > 0 {
        let mut order: Vec<usize> = (0..n).collect();
        for i in 0..impulses.min(n) {
            let j = i + (rng.next_u64() % (n - i) as u64) as usize;
            order.swap(i, j);
            data[order[i]] = impulse_value;
        }
    }
    ScalarVolume::from_data(dims, data)
}
