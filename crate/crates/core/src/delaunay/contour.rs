//! Iso-contour points of a 2D slice via marching squares.

use super::Point2;
use crate::volume::Slice2D;
use std::collections::HashMap;

/// Cell corners: 0 = (u, v), 1 = (u+1, v), 2 = (u+1, v+1), 3 = (u, v+1).
/// Edges: 0 = c0-c1, 1 = c1-c2, 2 = c3-c2, 3 = c0-c3.
const SQUARE_EDGES: [[usize; 2]; 4] = [[0, 1], [1, 2], [3, 2], [0, 3]];

/// Segments per case (bit `b` set when corner `b` is inside, i.e. `> iso`).
/// The saddle cases 5 and 10 keep the two inside corners separated.
const SEGMENTS: [&[[usize; 2]]; 16] = [
    &[],
    &[[3, 0]],
    &[[0, 1]],
    &[[3, 1]],
    &[[1, 2]],
    &[[3, 0], [1, 2]],
    &[[0, 2]],
    &[[3, 2]],
    &[[2, 3]],
    &[[0, 2]],
    &[[0, 1], [2, 3]],
    &[[1, 2]],
    &[[1, 3]],
    &[[0, 1]],
    &[[3, 0]],
    &[],
];

const CORNERS: [[usize; 2]; 4] = [[0, 0], [1, 0], [1, 1], [0, 1]];

/// Contour vertices of one slice, welded across cells, with their segments.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Contour {
    /// In-plane coordinates in mm (pixel index times spacing, no origin).
    pub vertices: Vec<Point2>,
    pub segments: Vec<[usize; 2]>,
}

/// Marching squares over `slice` at `iso`.
pub fn contour_slice(slice: &Slice2D, iso: f32) -> Contour {
    let [nu, nv] = slice.dims;
    let mut contour = Contour::default();
    if nu < 2 || nv < 2 {
        return contour;
    }
    let mut by_edge: HashMap<usize, usize> = HashMap::new();
    for v in 0..nv - 1 {
        for u in 0..nu - 1 {
            let vals = CORNERS.map(|[du, dv]| slice.at(u + du, v + dv));
            let case = vals
                .iter()
                .enumerate()
                .fold(0usize, |acc, (b, &x)| acc | (usize::from(x > iso) << b));
            for seg in SEGMENTS[case] {
                let ids = seg.map(|e| {
                    let [c0, c1] = SQUARE_EDGES[e];
                    let [u0, v0] = CORNERS[c0];
                    let axis = if CORNERS[c1][0] != u0 { 0 } else { 1 };
                    let (pu, pv) = (u + u0, v + v0);
                    let key = (pu + nu * pv) * 2 + axis;
                    *by_edge.entry(key).or_insert_with(|| {
                        let a = slice.at(pu, pv);
                        let b = if axis == 0 { slice.at(pu + 1, pv) } else { slice.at(pu, pv + 1) };
                        let t = ((iso - a) as f64 / (b - a) as f64).clamp(0.0, 1.0);
                        let (fu, fv) = if axis == 0 {
                            (pu as f64 + t, pv as f64)
                        } else {
                            (pu as f64, pv as f64 + t)
                        };
                        contour
                            .vertices
                            .push(Point2::new(fu * slice.spacing[0], fv * slice.spacing[1]));
                        contour.vertices.len() - 1
                    })
                });
                contour.segments.push(ids);
            }
        }
    }
    contour
}

/// Orders contour vertices along their polylines: open chains first (from
/// endpoints in creation order), then closed loops from their lowest vertex.
pub fn trace(contour: &Contour) -> Vec<Vec<usize>> {
    let n = contour.vertices.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &[a, b] in &contour.segments {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let walk = |start: usize, seen: &mut [bool]| {
        let mut path = vec![start];
        seen[start] = true;
        let mut cur = start;
        while let Some(&next) = adj[cur].iter().find(|&&x| !seen[x]) {
            seen[next] = true;
            path.push(next);
            cur = next;
        }
        path
    };
    let mut paths = Vec::new();
    for s in 0..n {
        if !seen[s] && adj[s].len() == 1 {
            paths.push(walk(s, &mut seen));
        }
    }
    for s in 0..n {
        if !seen[s] {
            paths.push(walk(s, &mut seen));
        }
    }
    paths
}

/// Iso-contour points of `slice` in mm, keeping every `step`-th vertex along
/// each traced contour (the first vertex of each contour is always kept).
pub fn extract_slice_points(slice: &Slice2D, iso: f32, step: usize) -> Vec<Point2> {
    let step = step.max(1);
    let contour = contour_slice(slice, iso);
    trace(&contour)
        .into_iter()
        .flat_map(|path| path.into_iter().step_by(step))
        .map(|i| contour.vertices[i])
        .collect()
}
