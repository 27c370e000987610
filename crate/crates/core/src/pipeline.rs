//! Filter chains and extraction choices shared by the CLI and the service.

use crate::delaunay::{stack_slices, DelaunayError, StackParams};
use crate::filters::{gaussian_filter, median_filter, FilterError};
use crate::marching_cubes::{extract_isosurface, ExtractError};
use crate::mesh::TriangleMesh;
use crate::volume::ScalarVolume;
use std::fmt;
use thiserror::Error;

pub const DEFAULT_GAUSSIAN_SIGMA: f64 = 1.0;
pub const DEFAULT_MEDIAN_RADIUS: usize = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("NonFiniteIso: iso level must be finite, got {0}")]
    NonFiniteIso(f32),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Delaunay(#[from] DelaunayError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterStep {
    Gaussian(f64),
    Median(usize),
}

impl FilterStep {
    pub fn validate(&self) -> Result<(), FilterError> {
        match *self {
            FilterStep::Gaussian(s) if !(s > 0.0 && s.is_finite()) => Err(FilterError::NonPositiveSigma(s)),
            FilterStep::Median(0) => Err(FilterError::NonPositiveRadius(0)),
            _ => Ok(()),
        }
    }

    pub fn apply(&self, volume: &ScalarVolume) -> Result<ScalarVolume, FilterError> {
        match *self {
            FilterStep::Gaussian(sigma) => gaussian_filter(volume, sigma),
            FilterStep::Median(radius) => median_filter(volume, radius),
        }
    }
}

impl fmt::Display for FilterStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterStep::Gaussian(s) => write!(f, "gaussian({s})"),
            FilterStep::Median(r) => write!(f, "median({r})"),
        }
    }
}

/// Ordered filter steps; the `Display` form is the canonical cache key.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FilterChain(pub Vec<FilterStep>);

impl FilterChain {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self) -> Result<(), FilterError> {
        self.0.iter().try_for_each(FilterStep::validate)
    }

    /// Applies the steps in order; an empty chain returns a copy.
    pub fn apply(&self, volume: &ScalarVolume) -> Result<ScalarVolume, FilterError> {
        self.validate()?;
        let mut current = volume.clone();
        for step in &self.0 {
            current = step.apply(&current)?;
        }
        Ok(current)
    }
}

impl fmt::Display for FilterChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{step}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    MarchingCubes,
    Delaunay(StackParams),
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::MarchingCubes => "mc",
            Algorithm::Delaunay(_) => "delaunay",
        }
    }
}

/// Midpoint of the volume's value range.
pub fn default_iso(volume: &ScalarVolume) -> f32 {
    let (lo, hi) = volume.value_range();
    ((lo as f64 + hi as f64) / 2.0) as f32
}

/// Runs the chosen extraction at `iso` on an already filtered volume.
pub fn extract(volume: &ScalarVolume, iso: f32, algorithm: &Algorithm) -> Result<TriangleMesh, PipelineError> {
    if !iso.is_finite() {
        return Err(PipelineError::NonFiniteIso(iso));
    }
    Ok(match algorithm {
        Algorithm::MarchingCubes => extract_isosurface(volume, iso)?,
        Algorithm::Delaunay(params) => stack_slices(volume, iso, params)?,
    })
}
