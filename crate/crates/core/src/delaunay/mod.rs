//! Planar Delaunay triangulation and its use on volume slices.
//!
//! [`triangulate_2d`] is an incremental Bowyer-Watson construction.
//! [`contour`] turns a slice into iso-contour points and [`stack`] lifts the
//! per-slice triangulations back into one 3D mesh.

pub mod contour;
pub mod stack;

pub use contour::extract_slice_points;
pub use stack::{stack_slices, StackParams};

use std::collections::{HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DelaunayError {
    #[error("TooFewPoints: need at least 3 distinct points, got {0}")]
    TooFewPoints(usize),
    #[error("AllCollinear: all {0} points lie on one line")]
    AllCollinear(usize),
    #[error("CollinearTriangle: circumcircle of collinear points is undefined")]
    CollinearTriangle,
    #[error("NonFinitePoint: point {0} has a non-finite coordinate")]
    NonFinitePoint(usize),
    #[error("VolumeTooSmall: need at least 2 voxels along {axis}, got {extent}")]
    VolumeTooSmall { axis: &'static str, extent: usize },
    #[error("InvalidParameter: {name} {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist2(self, o: Point2) -> f64 {
        let (dx, dy) = (self.x - o.x, self.y - o.y);
        dx * dx + dy * dy
    }
}

/// Distinct points plus counter-clockwise triangles indexing into them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Triangulation2D {
    pub points: Vec<Point2>,
    pub triangles: Vec<[usize; 3]>,
}

impl Triangulation2D {
    /// Unordered edge set, each edge as `(min, max)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|&[a, b, c]| [(a, b), (b, c), (c, a)])
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| 0.5 * orient2d(self.points[t[0]], self.points[t[1]], self.points[t[2]]))
            .sum()
    }
}

/// Twice the signed area of `abc`; positive when counter-clockwise.
pub fn orient2d(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Circle {
    Inside,
    On,
    Outside,
}

/// Relative tolerance of the incircle determinant.
pub const INCIRCLE_TOLERANCE: f64 = 1e-10;

/// Position of `p` relative to the circumcircle of triangle `abc`.
///
/// Evaluates the lifted-paraboloid 3x3 determinant on coordinates taken
/// relative to `p`. `|det| <= 1e-10 * scale^4` is reported as
/// [`Circle::On`], where `scale` is the largest of those relative
/// coordinates in magnitude. Clockwise input is accepted and handled as its
/// counter-clockwise reordering.
pub fn in_circumcircle(a: Point2, b: Point2, c: Point2, p: Point2) -> Result<Circle, DelaunayError> {
    let orient = orient2d(a, b, c);
    if orient == 0.0 {
        return Err(DelaunayError::CollinearTriangle);
    }
    let (adx, ady) = (a.x - p.x, a.y - p.y);
    let (bdx, bdy) = (b.x - p.x, b.y - p.y);
    let (cdx, cdy) = (c.x - p.x, c.y - p.y);
    let alift = adx * adx + ady * ady;
    let blift = bdx * bdx + bdy * bdy;
    let clift = cdx * cdx + cdy * cdy;
    let det = adx * (bdy * clift - blift * cdy) - ady * (bdx * clift - blift * cdx)
        + alift * (bdx * cdy - bdy * cdx);
    let det = if orient > 0.0 { det } else { -det };
    let scale = [adx, ady, bdx, bdy, cdx, cdy]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = INCIRCLE_TOLERANCE * scale.powi(4);
    Ok(if det.abs() <= tol {
        Circle::On
    } else if det > 0.0 {
        Circle::Inside
    } else {
        Circle::Outside
    })
}

/// Drops points within `tol` of an earlier point; keeps first occurrences in order.
pub fn dedup_points(points: &[Point2], tol: f64) -> Vec<Point2> {
    let cell = tol.max(f64::MIN_POSITIVE);
    let key = |p: Point2| ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut out: Vec<Point2> = Vec::with_capacity(points.len());
    'points: for &p in points {
        let (kx, ky) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(bucket) = grid.get(&(kx + dx, ky + dy)) {
                    if bucket.iter().any(|&q| out[q].dist2(p) <= tol * tol) {
                        continue 'points;
                    }
                }
            }
        }
        grid.entry((kx, ky)).or_default().push(out.len());
        out.push(p);
    }
    out
}

/// Duplicate tolerance in input units (mm).
pub const DEDUP_TOLERANCE: f64 = 1e-9;

/// Super-triangle vertex directions, counter-clockwise.
const GHOST_DIRS: [Point2; 3] = [
    Point2::new(0.0, 1.0),
    Point2::new(-0.866_025_403_784_438_6, -0.5),
    Point2::new(0.866_025_403_784_438_6, -0.5),
];

/// Working triangle during insertion. Vertex ids `>= n` are super-triangle
/// vertices placed infinitely far away along [`GHOST_DIRS`].
#[derive(Clone, Copy)]
struct Work {
    v: [usize; 3],
    /// Circumcenter and squared radius for all-real triangles.
    circle: Option<(Point2, f64)>,
}

struct Builder<'a> {
    pts: &'a [Point2],
    n: usize,
}

impl Builder<'_> {
    fn is_ghost(&self, v: usize) -> bool {
        v >= self.n
    }

    fn make(&self, v: [usize; 3]) -> Work {
        let circle = if v.iter().all(|&i| !self.is_ghost(i)) {
            circumcircle(self.pts[v[0]], self.pts[v[1]], self.pts[v[2]])
        } else {
            None
        };
        Work { v, circle }
    }

    /// Whether `p` lies strictly inside the (possibly infinite) circumcircle.
    fn contains(&self, t: &Work, p: Point2) -> bool {
        let ghosts = t.v.iter().filter(|&&i| self.is_ghost(i)).count();
        match ghosts {
            0 => {
                if let Some((center, r2)) = t.circle {
                    // cheap rejection well outside the circle
                    if center.dist2(p) > r2 * (1.0 + 1e-6) + 1e-12 {
                        return false;
                    }
                }
                let [a, b, c] = t.v.map(|i| self.pts[i]);
                matches!(in_circumcircle(a, b, c, p), Ok(Circle::Inside))
            }
            1 => {
                // rotate so the ghost is last; the circle degenerates to the
                // open half-plane left of a->b plus the open segment ab
                let g = t.v.iter().position(|&i| self.is_ghost(i)).unwrap();
                let a = self.pts[t.v[(g + 1) % 3]];
                let b = self.pts[t.v[(g + 2) % 3]];
                let o = orient2d(a, b, p);
                if o != 0.0 {
                    return o > 0.0;
                }
                let along = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
                along > 0.0 && along < a.dist2(b)
            }
            2 => {
                // half-plane through the real vertex facing the two ghosts
                let r = t.v.iter().position(|&i| !self.is_ghost(i)).unwrap();
                let a = self.pts[t.v[r]];
                let gi = GHOST_DIRS[t.v[(r + 1) % 3] - self.n];
                let gj = GHOST_DIRS[t.v[(r + 2) % 3] - self.n];
                let w = Point2::new(gi.x + gj.x, gi.y + gj.y);
                (p.x - a.x) * w.x + (p.y - a.y) * w.y > 0.0
            }
            _ => true,
        }
    }
}

impl Builder<'_> {
    fn encloses(&self, t: &Work, p: Point2) -> bool {
        if t.v.iter().any(|&i| self.is_ghost(i)) {
            return false;
        }
        let [a, b, c] = t.v.map(|i| self.pts[i]);
        orient2d(a, b, p) >= 0.0 && orient2d(b, c, p) >= 0.0 && orient2d(c, a, p) >= 0.0
    }
}

fn circumcircle(a: Point2, b: Point2, c: Point2) -> Option<(Point2, f64)> {
    let d = 2.0 * orient2d(a, b, c);
    if d == 0.0 {
        return None;
    }
    let (bx, by) = (b.x - a.x, b.y - a.y);
    let (cx, cy) = (c.x - a.x, c.y - a.y);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = Point2::new(a.x + ux, a.y + uy);
    Some((center, ux * ux + uy * uy))
}

/// Bowyer-Watson Delaunay triangulation.
///
/// Points are deduplicated (tolerance [`DEDUP_TOLERANCE`]) and inserted in
/// input order. Each insertion removes the triangles whose circumcircle
/// strictly contains the new point and fans the cavity boundary to it, so
/// cocircular ties keep whichever diagonal was created first. The initial
/// super-triangle has its vertices at infinity (the limit of an arbitrarily
/// large margin), which guarantees the result covers the convex hull.
pub fn triangulate_2d(points: &[Point2]) -> Result<Triangulation2D, DelaunayError> {
    if let Some(i) = points.iter().position(|p| !(p.x.is_finite() && p.y.is_finite())) {
        return Err(DelaunayError::NonFinitePoint(i));
    }
    let pts = dedup_points(points, DEDUP_TOLERANCE);
    let n = pts.len();
    if n < 3 {
        return Err(DelaunayError::TooFewPoints(n));
    }
    if pts[2..].iter().all(|&p| orient2d(pts[0], pts[1], p) == 0.0) {
        return Err(DelaunayError::AllCollinear(n));
    }

    let builder = Builder { pts: &pts, n };
    let mut tris: Vec<Work> = vec![builder.make([n, n + 1, n + 2])];
    let mut cavity: HashSet<(usize, usize)> = HashSet::new();
    for (pi, &p) in pts.iter().enumerate() {
        let mut kept = Vec::with_capacity(tris.len() + 2);
        let mut bad_edges: Vec<(usize, usize)> = Vec::new();
        for t in tris.drain(..) {
            if builder.contains(&t, p) {
                let [a, b, c] = t.v;
                bad_edges.extend([(a, b), (b, c), (c, a)]);
            } else {
                kept.push(t);
            }
        }
        if bad_edges.is_empty() {
            // only reachable through rounding: fall back to the enclosing triangle
            if let Some(pos) = kept.iter().position(|t| builder.encloses(t, p)) {
                let [a, b, c] = kept.swap_remove(pos).v;
                bad_edges.extend([(a, b), (b, c), (c, a)]);
            }
        }
        cavity.clear();
        cavity.extend(bad_edges.iter().copied());
        for &(u, v) in &bad_edges {
            if !cavity.contains(&(v, u)) {
                kept.push(builder.make([u, v, pi]));
            }
        }
        tris = kept;
    }

    let triangles = tris
        .into_iter()
        .filter(|t| t.v.iter().all(|&i| i < n))
        .map(|t| t.v)
        .collect();
    Ok(Triangulation2D {
        points: pts,
        triangles,
    })
}

/// Removes every triangle with an edge longer than `max_edge`.
pub fn prune_edges(t: &Triangulation2D, max_edge: f64) -> Triangulation2D {
    let limit = max_edge * max_edge;
    let triangles = t
        .triangles
        .iter()
        .copied()
        .filter(|&[a, b, c]| {
            let p = &t.points;
            p[a].dist2(p[b]) <= limit && p[b].dist2(p[c]) <= limit && p[c].dist2(p[a]) <= limit
        })
        .collect();
    Triangulation2D {
        points: t.points.clone(),
        triangles,
    }
}
