//! Parsing of the mesh endpoint's query string.

use serde::Serialize;
use usviz_core::delaunay::StackParams;
use usviz_core::pipeline::{
    Algorithm, FilterChain, FilterStep, DEFAULT_GAUSSIAN_SIGMA, DEFAULT_MEDIAN_RADIUS,
};
use usviz_core::Axis;

/// One rejected query parameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamError {
    pub name: String,
    pub reason: String,
}

impl ParamError {
    fn new(name: &str, reason: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}

/// A validated mesh request. `iso == None` means the midpoint of the
/// filtered volume's value range.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshRequest {
    pub algorithm: Algorithm,
    pub iso: Option<f32>,
    pub filters: FilterChain,
}

const DELAUNAY_ONLY: [&str; 4] = ["axis", "slice_step", "point_step", "max_edge"];

impl MeshRequest {
    /// Parses ordered `(key, value)` pairs. Filter parameters may repeat and
    /// apply in the order given; an empty filter value uses the default
    /// strength. Every problem is reported, not just the first.
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self, Vec<ParamError>> {
        let mut errors = Vec::new();
        let mut seen: Vec<&str> = Vec::new();
        let mut algorithm = None;
        let mut iso = None;
        let mut filters = Vec::new();
        let mut stack = StackParams::default();

        for (key, value) in pairs {
            let key = key.as_str();
            let repeatable = matches!(key, "gaussian" | "median");
            if !repeatable && seen.contains(&key) {
                errors.push(ParamError::new(key, "given more than once"));
                continue;
            }
            seen.push(key);
            match key {
                "algorithm" => match value.as_str() {
                    "mc" | "marching_cubes" => algorithm = Some(false),
                    "delaunay" => algorithm = Some(true),
                    other => errors.push(ParamError::new(key, format!("expected mc or delaunay, got {other:?}"))),
                },
                "iso" => match value.parse::<f32>() {
                    Ok(v) if v.is_finite() => iso = Some(v),
                    _ => errors.push(ParamError::new(key, format!("expected a finite number, got {value:?}"))),
                },
                "gaussian" => {
                    let sigma = if value.is_empty() { Ok(DEFAULT_GAUSSIAN_SIGMA) } else { value.parse::<f64>() };
                    match sigma {
                        Ok(s) if s > 0.0 && s.is_finite() => filters.push(FilterStep::Gaussian(s)),
                        _ => errors.push(ParamError::new(key, format!("expected a positive sigma, got {value:?}"))),
                    }
                }
                "median" => {
                    let radius = if value.is_empty() { Ok(DEFAULT_MEDIAN_RADIUS) } else { value.parse::<usize>() };
                    match radius {
                        Ok(r) if r >= 1 => filters.push(FilterStep::Median(r)),
                        _ => errors.push(ParamError::new(key, format!("expected an integer radius >= 1, got {value:?}"))),
                    }
                }
                "axis" => match value.parse::<Axis>() {
                    Ok(a) => stack.axis = a,
                    Err(_) => errors.push(ParamError::new(key, format!("expected x, y or z, got {value:?}"))),
                },
                "slice_step" | "point_step" => match value.parse::<usize>() {
                    Ok(n) if n >= 1 => {
                        if key == "slice_step" {
                            stack.slice_step = n;
                        } else {
                            stack.point_step = n;
                        }
                    }
                    _ => errors.push(ParamError::new(key, format!("expected an integer >= 1, got {value:?}"))),
                },
                "max_edge" => match value.parse::<f64>() {
                    Ok(v) if v > 0.0 && v.is_finite() => stack.max_edge = v,
                    _ => errors.push(ParamError::new(key, format!("expected a positive length, got {value:?}"))),
                },
                other => errors.push(ParamError::new(other, "unknown parameter")),
            }
        }

        let delaunay = algorithm.unwrap_or(false);
        if !delaunay {
            for key in DELAUNAY_ONLY {
                if seen.contains(&key) {
                    errors.push(ParamError::new(key, "only valid with algorithm=delaunay"));
                }
            }
        }
        if !errors.is_empty() {
            return Err(errors);
        }
        Ok(MeshRequest {
            algorithm: if delaunay { Algorithm::Delaunay(stack) } else { Algorithm::MarchingCubes },
            iso,
            filters: FilterChain(filters),
        })
    }
}
