//! Denoising filters: separable Gaussian smoothing and a cubic-window median.
//!
//! Both filters work in voxel units and replicate the nearest edge voxel at
//! the borders. Output z-slices are computed independently in parallel, so
//! results do not depend on the thread count.

use crate::volume::{ScalarVolume, VolumeError};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FilterError {
    #[error("NonPositiveSigma: gaussian sigma must be positive and finite, got {0}")]
    NonPositiveSigma(f64),
    #[error("NonPositiveRadius: median radius must be at least 1, got {0}")]
    NonPositiveRadius(usize),
    #[error(transparent)]
    Volume(#[from] VolumeError),
}

/// Symmetric, normalized 1D convolution kernel with `2 * radius + 1` taps.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel1D {
    radius: usize,
    weights: Vec<f64>,
}

impl Kernel1D {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weight at signed offset `d` from the center.
    pub fn weight(&self, d: isize) -> f64 {
        self.weights[(d + self.radius as isize) as usize]
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum()
    }
}

/// Sampled Gaussian truncated at `ceil(3 * sigma)` and renormalized to sum 1.
pub fn gaussian_kernel_1d(sigma: f64) -> Result<Kernel1D, FilterError> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(FilterError::NonPositiveSigma(sigma));
    }
    let radius = (3.0 * sigma).ceil() as usize;
    let r = radius as isize;
    let raw: Vec<f64> = (-r..=r)
        .map(|x| (-((x * x) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|w| w / total).collect();
    Ok(Kernel1D { radius, weights })
}

#[inline]
fn clamp_index(i: isize, n: usize) -> usize {
    i.clamp(0, n as isize - 1) as usize
}

/// One 1D convolution pass along `axis` with edge replication.
fn convolve_axis(src: &[f32], dims: [usize; 3], axis: usize, kernel: &Kernel1D) -> Vec<f32> {
    let [nx, ny, _] = dims;
    let plane = nx * ny;
    let n_axis = dims[axis];
    let stride = [1, nx, plane][axis];
    let r = kernel.radius() as isize;
    let mut out = vec![0.0f32; src.len()];
    out.par_chunks_mut(plane)
        .enumerate()
        .for_each(|(k, out_plane)| {
            for j in 0..ny {
                for i in 0..nx {
                    let pos = [i, j, k][axis] as isize;
                    let base = i + nx * j + plane * k - pos as usize * stride;
                    let mut acc = 0.0f64;
                    for d in -r..=r {
                        let c = clamp_index(pos + d, n_axis);
                        acc += kernel.weight(d) * src[base + c * stride] as f64;
                    }
                    out_plane[i + nx * j] = acc as f32;
                }
            }
        });
    out
}

/// Separable Gaussian blur: the same 1D kernel along x, then y, then z.
pub fn gaussian_filter(volume: &ScalarVolume, sigma: f64) -> Result<ScalarVolume, FilterError> {
    let kernel = gaussian_kernel_1d(sigma)?;
    let dims = volume.dims();
    let mut data = convolve_axis(volume.data(), dims, 0, &kernel);
    data = convolve_axis(&data, dims, 1, &kernel);
    data = convolve_axis(&data, dims, 2, &kernel);
    Ok(volume.with_data(data)?)
}

/// Median over the `(2r+1)^3` window around each voxel, with edge replication.
pub fn median_filter(volume: &ScalarVolume, radius: usize) -> Result<ScalarVolume, FilterError> {
    if radius == 0 {
        return Err(FilterError::NonPositiveRadius(radius));
    }
    let dims = volume.dims();
    let [nx, ny, nz] = dims;
    let plane = nx * ny;
    let src = volume.data();
    let r = radius as isize;
    let window = (2 * radius + 1).pow(3);
    let mut out = vec![0.0f32; src.len()];
    out.par_chunks_mut(plane)
        .enumerate()
        .for_each_init(
            || Vec::with_capacity(window),
            |buf, (k, out_plane)| {
                for j in 0..ny {
                    for i in 0..nx {
                        buf.clear();
                        for dz in -r..=r {
                            let z = clamp_index(k as isize + dz, nz);
                            for dy in -r..=r {
                                let y = clamp_index(j as isize + dy, ny);
                                let row = nx * y + plane * z;
                                for dx in -r..=r {
                                    let x = clamp_index(i as isize + dx, nx);
                                    buf.push(src[row + x]);
                                }
                            }
                        }
                        out_plane[i + nx * j] = lower_median(buf);
                    }
                }
            },
        );
    Ok(volume.with_data(out)?)
}

/// Middle order statistic; the lower of the two middles for even counts.
fn lower_median(values: &mut [f32]) -> f32 {
    let mid = (values.len() - 1) / 2;
    *values.select_nth_unstable_by(mid, f32::total_cmp).1
}
