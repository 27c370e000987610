//! Acceptance suite: one PASS/FAIL line per criterion, each with its
//! runtime budget. Runs without the browser viewer.

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};
use tower::ServiceExt;
use usviz_core::delaunay::{
    in_circumcircle, orient2d, stack_slices, triangulate_2d, Circle, Point2, StackParams,
};
use usviz_core::filters::{gaussian_filter, gaussian_kernel_1d, median_filter};
use usviz_core::marching_cubes::extract_isosurface;
use usviz_core::mesh::{decode_wire_mesh, export_obj, mesh_stats};
use usviz_core::metaimage::{read_volume, write_volume, ElementType, MhaError, MhaHeader};
use usviz_core::volume::{synth_noise, synth_sphere};
use usviz_core::{Axis, ScalarVolume};
use usviz_server::{router, AppState, ServerConfig};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

struct Rng(ChaCha8Rng);

impl Rng {
    fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.0.next_u64() % (hi - lo + 1) as u64) as i64
    }
}

// ---------------------------------------------------------------- MHA

fn random_volume(rng: &mut Rng, ty: ElementType) -> ScalarVolume {
    let dims = [0; 3].map(|_: usize| rng.int(2, 32) as usize);
    let spacing = [0; 3].map(|_: usize| rng.range(0.1, 3.0));
    let origin = [0; 3].map(|_: usize| rng.range(-100.0, 100.0));
    let n = dims.iter().product();
    let data: Vec<f32> = (0..n)
        .map(|_| match ty.integer_range() {
            // 32-bit integers are limited to the exactly representable span
            Some((lo, hi)) => rng.int(lo.max(-16_777_216.0) as i64, hi.min(16_777_216.0) as i64) as f32,
            None => loop {
                let v = f32::from_bits(rng.0.next_u32());
                if v.is_finite() {
                    break v;
                }
            },
        })
        .collect();
    ScalarVolume::new(dims, spacing, origin, data).unwrap()
}

fn mha_round_trip() -> Outcome {
    let mut rng = Rng::new(0x3a11);
    for i in 0..20 {
        let ty = ElementType::ALL[i % ElementType::ALL.len()];
        let v = random_volume(&mut rng, ty);
        let mut header = MhaHeader::for_volume(&v, ty);
        header.byte_order_msb = i % 3 == 0;
        let written = write_volume(&header, &v, ty);
        ensure!(written.clamped == 0, "volume {i}: {} voxels clamped", written.clamped);
        let (h2, v2) = read_volume(&written.bytes).map_err(|e| format!("volume {i} ({ty:?}): {e}"))?;
        ensure!(h2.element_type == ty && h2.dim_size == v.dims(), "volume {i}: header mismatch");
        ensure!(v2.dims() == v.dims() && v2.spacing() == v.spacing() && v2.origin() == v.origin(),
            "volume {i}: geometry mismatch");
        let same_bits = v.data().iter().zip(v2.data()).all(|(a, b)| a.to_bits() == b.to_bits());
        ensure!(same_bits, "volume {i} ({ty:?}): voxel values differ");
    }

    let head = "ObjectType = Image\n";
    let good = "NDims = 3\nDimSize = 2 2 2\nElementType = MET_UCHAR\n";
    let payload8 = [0u8; 8];
    let with_payload = |h: String, p: &[u8]| {
        let mut b = h.into_bytes();
        b.extend_from_slice(p);
        b
    };
    type Check = fn(&MhaError) -> bool;
    let corpus: Vec<(&str, Vec<u8>, Check)> = vec![
        ("missing NDims", with_payload(format!("{head}DimSize = 2 2 2\nElementType = MET_UCHAR\nElementDataFile = LOCAL\n"), &payload8),
            |e| matches!(e, MhaError::MissingRequiredKey("NDims"))),
        ("missing DimSize", with_payload(format!("{head}NDims = 3\nElementType = MET_UCHAR\nElementDataFile = LOCAL\n"), &payload8),
            |e| matches!(e, MhaError::MissingRequiredKey("DimSize"))),
        ("missing ElementType", with_payload(format!("{head}NDims = 3\nDimSize = 2 2 2\nElementDataFile = LOCAL\n"), &payload8),
            |e| matches!(e, MhaError::MissingRequiredKey("ElementType"))),
        ("missing ElementDataFile", format!("{head}{good}").into_bytes(),
            |e| matches!(e, MhaError::MissingRequiredKey("ElementDataFile"))),
        ("2D image", with_payload(format!("{head}NDims = 2\nDimSize = 2 2\nElementType = MET_UCHAR\nElementDataFile = LOCAL\n"), &[0; 4]),
            |e| matches!(e, MhaError::UnsupportedValue { key, .. } if key == "NDims")),
        ("unknown element type", with_payload(format!("{head}NDims = 3\nDimSize = 2 2 2\nElementType = MET_RGB\nElementDataFile = LOCAL\n"), &payload8),
            |e| matches!(e, MhaError::UnsupportedValue { key, .. } if key == "ElementType")),
        ("line without '='", with_payload(format!("{head}NDims 3\n{good}ElementDataFile = LOCAL\n"), &payload8),
            |e| matches!(e, MhaError::MalformedLine { line: 2, .. })),
        ("truncated payload", with_payload(format!("{head}{good}ElementDataFile = LOCAL\n"), &payload8[..5]),
            |e| matches!(e, MhaError::PayloadTooShort { expected: 8, actual: 5, .. })),
        ("compressed payload", with_payload(format!("{head}{good}CompressedData = True\nElementDataFile = LOCAL\n"), &payload8),
            |e| matches!(e, MhaError::UnsupportedCompression)),
        ("external data file", format!("{head}{good}ElementDataFile = volume.raw\n").into_bytes(),
            |e| matches!(e, MhaError::UnsupportedValue { key, .. } if key == "ElementDataFile")),
    ];
    for (name, bytes, check) in &corpus {
        match read_volume(bytes) {
            Ok(_) => return Err(format!("malformed case '{name}' was accepted")),
            Err(e) if check(&e) => {}
            Err(e) => return Err(format!("malformed case '{name}' gave {e}")),
        }
    }
    Ok(format!("20 volumes over {} element types exact; {} malformed cases typed", ElementType::ALL.len(), corpus.len()))
}

// ---------------------------------------------------------------- sphere

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn sphere_reconstruction() -> Outcome {
    let center = 31.5;
    let run = || {
        let v = synth_sphere([64; 3], [center; 3], 20.0, 1.0, 0.0).unwrap();
        let smooth = gaussian_filter(&v, 1.0).unwrap();
        extract_isosurface(&smooth, 0.5).unwrap()
    };
    let mesh = in_pool(1, run);
    let parallel = in_pool(4, run);
    ensure!(!mesh.is_empty(), "empty mesh");
    let worst = mesh
        .positions
        .iter()
        .map(|p| (p.iter().map(|&c| (c as f64 - center).powi(2)).sum::<f64>().sqrt() - 20.0).abs())
        .fold(0.0f64, f64::max);
    ensure!(worst <= 1.5, "vertex {worst:.3} voxels off the sphere");
    let stats = mesh_stats(&mesh);
    ensure!(stats.boundary_edge_count == 0, "{} boundary edges", stats.boundary_edge_count);
    ensure!(stats.euler_characteristic == 2, "euler characteristic {}", stats.euler_characteristic);
    ensure!(export_obj(&mesh) == export_obj(&parallel), "OBJ differs between 1 and 4 threads");
    Ok(format!(
        "{} vertices, max |d - 20| = {worst:.3}, chi = 2, closed, OBJ identical at 1/4 threads",
        stats.vertex_count
    ))
}

// ---------------------------------------------------------------- filters

/// Truncated, renormalized Gaussian computed from its definition.
fn oracle_weights(sigma: f64) -> Vec<f64> {
    let r = (3.0 * sigma).ceil() as i64;
    let raw: Vec<f64> = (-r..=r).map(|x| (-(x * x) as f64 / (2.0 * sigma * sigma)).exp()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

fn brute_force_gaussian(v: &ScalarVolume, sigma: f64) -> Vec<f64> {
    let w = oracle_weights(sigma);
    let r = (w.len() / 2) as i64;
    let [nx, ny, nz] = v.dims();
    let clamp = |i: i64, n: usize| i.clamp(0, n as i64 - 1) as usize;
    let mut out = Vec::with_capacity(v.len());
    for k in 0..nz as i64 {
        for j in 0..ny as i64 {
            for i in 0..nx as i64 {
                let mut acc = 0.0;
                for dz in -r..=r {
                    for dy in -r..=r {
                        for dx in -r..=r {
                            let weight = w[(dx + r) as usize] * w[(dy + r) as usize] * w[(dz + r) as usize];
                            acc += weight * v.at(clamp(i + dx, nx), clamp(j + dy, ny), clamp(k + dz, nz)) as f64;
                        }
                    }
                }
                out.push(acc);
            }
        }
    }
    out
}

fn filter_oracles() -> Outcome {
    let mut worst_conv = 0.0f64;
    for (seed, sigma) in [(1u64, 0.6), (2, 1.0), (3, 1.3)] {
        let v = synth_noise([9; 3], seed, 0.0, 1.0, 0.0, 0.0).unwrap();
        let fast = gaussian_filter(&v, sigma).unwrap();
        let slow = brute_force_gaussian(&v, sigma);
        for (a, b) in fast.data().iter().zip(&slow) {
            worst_conv = worst_conv.max((*a as f64 - b).abs());
        }
    }
    ensure!(worst_conv <= 1e-5, "separable vs brute force: max abs {worst_conv:e}");

    let n = 15;
    let c = n / 2;
    let imp = ScalarVolume::from_fn([n; 3], [1.0; 3], [0.0; 3], |i, j, k| {
        if (i, j, k) == (c, c, c) { 1.0 } else { 0.0 }
    })
    .unwrap();
    let resp = gaussian_filter(&imp, 1.0).unwrap();
    let w = oracle_weights(1.0);
    let r = w.len() / 2;
    let mut worst_imp = 0.0f64;
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let tap = |x: usize| {
                    let d = x as i64 - c as i64;
                    if d.unsigned_abs() as usize <= r { w[(d + r as i64) as usize] } else { 0.0 }
                };
                worst_imp = worst_imp.max((resp.at(i, j, k) as f64 - tap(i) * tap(j) * tap(k)).abs());
            }
        }
    }
    ensure!(worst_imp <= 1e-5, "impulse response off by {worst_imp:e}");

    let sigma = 1.0;
    let noise = synth_noise([64; 3], 77, 0.0, 10.0, 0.0, 0.0).unwrap();
    let smooth = gaussian_filter(&noise, sigma).unwrap();
    let kr = gaussian_kernel_1d(sigma).unwrap().radius();
    let interior_var = |vol: &ScalarVolume| {
        let [nx, ny, nz] = vol.dims();
        let mut vals = Vec::new();
        for k in kr..nz - kr {
            for j in kr..ny - kr {
                for i in kr..nx - kr {
                    vals.push(vol.at(i, j, k) as f64);
                }
            }
        }
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (vals.len() - 1) as f64
    };
    let ratio = interior_var(&smooth) / interior_var(&noise);
    let expected = oracle_weights(sigma).iter().map(|w| w * w).sum::<f64>().powi(3);
    let rel = (ratio / expected - 1.0).abs();
    ensure!(rel <= 0.05, "variance ratio {ratio:.5} vs expected {expected:.5} ({:.1}% off)", rel * 100.0);

    let corrupted = synth_noise([32; 3], 5, 100.0, 0.0, 0.01, 255.0).unwrap();
    let impulses = corrupted.data().iter().filter(|&&x| x != 100.0).count();
    ensure!(impulses > 0, "no impulses injected");
    let cleaned = median_filter(&corrupted, 1).unwrap();
    ensure!(cleaned.data().iter().all(|&x| x == 100.0), "median left impulses behind");

    Ok(format!(
        "conv max abs {worst_conv:.1e}, impulse max abs {worst_imp:.1e}, variance ratio {:.2}% off, {impulses} impulses removed",
        rel * 100.0
    ))
}

// ---------------------------------------------------------------- Delaunay

fn random_points(rng: &mut Rng, n: usize) -> Vec<Point2> {
    (0..n).map(|_| Point2::new(rng.range(0.0, 100.0), rng.range(0.0, 100.0))).collect()
}

fn edge_set(tris: &[[usize; 3]]) -> BTreeSet<(usize, usize)> {
    tris.iter()
        .flat_map(|&[a, b, c]| [(a, b), (b, c), (c, a)])
        .map(|(u, v)| (u.min(v), u.max(v)))
        .collect()
}

fn brute_force_delaunay(p: &[Point2]) -> Vec<[usize; 3]> {
    let n = p.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = if orient2d(p[i], p[j], p[k]) > 0.0 { (i, j, k) } else { (i, k, j) };
                if orient2d(p[a], p[b], p[c]) == 0.0 {
                    continue;
                }
                if (0..n).all(|m| m == i || m == j || m == k
                    || in_circumcircle(p[a], p[b], p[c], p[m]) != Ok(Circle::Inside))
                {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

fn min_angle(a: Point2, b: Point2, c: Point2) -> f64 {
    let ang = |p: Point2, q: Point2, r: Point2| {
        let (ux, uy, vx, vy) = (q.x - p.x, q.y - p.y, r.x - p.x, r.y - p.y);
        (ux * vy - uy * vx).abs().atan2(ux * vx + uy * vy)
    };
    ang(a, b, c).min(ang(b, c, a)).min(ang(c, a, b))
}

fn delaunay_correctness() -> Outcome {
    let mut rng = Rng::new(0xde1a);
    for set in 0..50 {
        let pts = random_points(&mut rng, 12);
        let t = triangulate_2d(&pts).map_err(|e| format!("set {set}: {e}"))?;
        ensure!(t.points == pts, "set {set}: points were altered");
        ensure!(edge_set(&t.triangles) == edge_set(&brute_force_delaunay(&pts)),
            "set {set}: edge set differs from the brute-force oracle");
    }
    let mut flips = 0usize;
    for set in 0..20 {
        let pts = random_points(&mut rng, 200);
        let t = triangulate_2d(&pts).map_err(|e| format!("large set {set}: {e}"))?;
        let p = &t.points;
        for &[a, b, c] in &t.triangles {
            for (m, &q) in p.iter().enumerate() {
                if m != a && m != b && m != c {
                    ensure!(in_circumcircle(p[a], p[b], p[c], q) != Ok(Circle::Inside),
                        "large set {set}: point {m} inside circumcircle of {a},{b},{c}");
                }
            }
        }
        let global = |tris: &[[usize; 3]]| {
            tris.iter().map(|&[a, b, c]| min_angle(p[a], p[b], p[c])).fold(f64::MAX, f64::min)
        };
        let before = global(&t.triangles);
        let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
        for (ti, &[a, b, c]) in t.triangles.iter().enumerate() {
            for e in [(a, b), (b, c), (c, a)] {
                owner.insert(e, ti);
            }
        }
        let mut edges: Vec<(usize, usize)> = owner.keys().copied().filter(|&(u, v)| u < v).collect();
        edges.sort_unstable();
        for (u, v) in edges {
            let (Some(&t1), Some(&t2)) = (owner.get(&(u, v)), owner.get(&(v, u))) else { continue };
            let apex = |ti: usize| *t.triangles[ti].iter().find(|&&x| x != u && x != v).unwrap();
            let (x, y) = (apex(t1), apex(t2));
            if orient2d(p[x], p[y], p[u]) * orient2d(p[x], p[y], p[v]) >= 0.0 {
                continue; // quad not convex: no flip possible
            }
            let mut flipped = t.triangles.clone();
            flipped[t1] = [x, y, v];
            flipped[t2] = [y, x, u];
            flips += 1;
            ensure!(global(&flipped) <= before + 1e-12,
                "large set {set}: flipping edge {u}-{v} raises the minimum angle");
            let local_before = min_angle(p[u], p[v], p[x]).min(min_angle(p[v], p[u], p[y]));
            let local_after = min_angle(p[x], p[y], p[v]).min(min_angle(p[y], p[x], p[u]));
            ensure!(local_after <= local_before + 1e-12,
                "large set {set}: flipping edge {u}-{v} improves its quad");
        }
    }
    Ok(format!("50 x 12-point sets match the oracle; 20 x 200-point sets empty-circle clean, {flips} flips checked"))
}

fn stacked_delaunay() -> Outcome {
    let center = 31.5;
    let v = synth_sphere([64; 3], [center; 3], 20.0, 1.0, 0.0).unwrap();
    let params = StackParams { axis: Axis::Z, slice_step: 4, point_step: 1, max_edge: 4.0 };
    let mesh = stack_slices(&v, 0.5, &params).map_err(|e| e.to_string())?;
    ensure!(mesh.triangle_count() > 0, "empty output");
    let worst = mesh
        .positions
        .iter()
        .map(|p| (p.iter().map(|&c| (c as f64 - center).powi(2)).sum::<f64>().sqrt() - 20.0).abs())
        .fold(0.0f64, f64::max);
    ensure!(worst <= 1.5, "vertex {worst:.3} voxels off the sphere");
    Ok(format!("{} triangles, max |d - 20| = {worst:.3}", mesh.triangle_count()))
}

// ---------------------------------------------------------------- service

struct Reply {
    status: StatusCode,
    headers: axum::http::HeaderMap,
    body: Vec<u8>,
}

impl Reply {
    fn header(&self, name: &str) -> String {
        self.headers.get(name).map(|v| v.to_str().unwrap().to_string()).unwrap_or_default()
    }
}

async fn send(app: &Router, method: &str, uri: &str, body: Vec<u8>) -> Reply {
    let req = Request::builder().method(method).uri(uri).body(Body::from(body)).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let headers = resp.headers().clone();
    let body = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    Reply { status, headers, body }
}

fn runtime() -> tokio::runtime::Runtime {
    tokio::runtime::Builder::new_multi_thread().enable_all().build().unwrap()
}

async fn upload_sphere(app: &Router, n: usize, radius: f64) -> Result<String, String> {
    let v = synth_sphere([n; 3], [(n as f64 - 1.0) / 2.0; 3], radius, 1.0, 0.0).unwrap();
    let bytes = write_volume(&MhaHeader::for_volume(&v, ElementType::UChar), &v, ElementType::UChar).bytes;
    let r = send(app, "POST", "/api/datasets?name=sphere", bytes).await;
    ensure!(r.status == StatusCode::CREATED, "upload returned {}", r.status);
    let rec: serde_json::Value = serde_json::from_slice(&r.body).map_err(|e| e.to_string())?;
    ensure!(rec["dims"] == serde_json::json!([n, n, n]), "record dims {}", rec["dims"]);
    ensure!(rec["value_range"] == serde_json::json!([0.0, 1.0]), "record value_range {}", rec["value_range"]);
    Ok(rec["id"].as_str().unwrap_or_default().to_string())
}

fn service_end_to_end() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let app = router(Arc::new(AppState::open(ServerConfig::new(dir.path())).map_err(|e| e.to_string())?));
    runtime().block_on(async {
        let id = upload_sphere(&app, 64, 20.0).await?;
        let mesh = |q: &str| format!("/api/datasets/{id}/mesh?{q}");

        let cold = send(&app, "GET", &mesh("algorithm=mc&iso=0.25&gaussian=1"), vec![]).await;
        ensure!(cold.status == StatusCode::OK, "mesh request returned {}", cold.status);
        let warm = send(&app, "GET", &mesh("algorithm=mc&iso=0.25&gaussian=1"), vec![]).await;
        let high = send(&app, "GET", &mesh("algorithm=mc&iso=0.75&gaussian=1"), vec![]).await;
        let dl = send(&app, "GET", &mesh("algorithm=delaunay&iso=0.25&gaussian=1"), vec![]).await;

        let decode = |r: &Reply| decode_wire_mesh(&r.body).map_err(|e| e.to_string());
        let (m_low, m_high, m_dl) = (decode(&cold)?, decode(&high)?, decode(&dl)?);
        ensure!(m_low.vertex_count() != m_high.vertex_count(),
            "iso 0.25 and 0.75 both gave {} vertices", m_low.vertex_count());
        ensure!(m_low.triangle_count() != m_dl.triangle_count(),
            "mc and delaunay both gave {} triangles", m_dl.triangle_count());
        ensure!(m_dl.triangle_count() > 0, "delaunay mesh empty");
        ensure!(cold.body == warm.body, "repeated request bodies differ");
        ensure!(cold.header("x-vertex-count") == m_low.vertex_count().to_string(), "X-Vertex-Count mismatch");
        ensure!(cold.header("x-triangle-count") == m_low.triangle_count().to_string(), "X-Triangle-Count mismatch");
        ensure!(mesh_stats(&m_low).euler_characteristic == 2, "mesh over the wire is not a sphere");
        let ms = |r: &Reply| r.header("x-compute-ms").parse::<f64>().map_err(|e| e.to_string());
        let (cold_ms, warm_ms) = (ms(&cold)?, ms(&warm)?);
        ensure!(cold.header("x-cache") == "miss" && warm.header("x-cache") == "hit", "cache headers wrong");
        ensure!(warm_ms < cold_ms, "warm {warm_ms} ms not below cold {cold_ms} ms");
        Ok(format!(
            "vertices {} vs {} (iso 0.25/0.75), triangles {} vs {} (mc/delaunay), compute {cold_ms:.1} -> {warm_ms:.1} ms",
            m_low.vertex_count(), m_high.vertex_count(), m_low.triangle_count(), m_dl.triangle_count()
        ))
    })
}

fn realtime_budget() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let app = router(Arc::new(AppState::open(ServerConfig::new(dir.path())).map_err(|e| e.to_string())?));
    runtime().block_on(async {
        let id = upload_sphere(&app, 128, 40.0).await?;
        let uri = format!("/api/datasets/{id}/mesh?algorithm=mc&iso=0.5");
        let first = send(&app, "GET", &uri, vec![]).await;
        ensure!(first.status == StatusCode::OK, "mesh request returned {}", first.status);
        let start = Instant::now();
        let warm = send(&app, "GET", &uri, vec![]).await;
        let elapsed = start.elapsed();
        ensure!(warm.header("x-cache") == "hit", "second request missed the cache");
        ensure!(elapsed < Duration::from_millis(500), "warm request took {:.1} ms", elapsed.as_secs_f64() * 1e3);
        Ok(format!(
            "warm request {:.1} ms for {} triangles on {} core(s)",
            elapsed.as_secs_f64() * 1e3,
            warm.header("x-triangle-count"),
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        ))
    })
}

// ---------------------------------------------------------------- runner

fn main() {
    let criteria: [(&str, f64, fn() -> Outcome); 7] = [
        ("MHA round-trip", 5.0, mha_round_trip),
        ("Sphere reconstruction", 3.0, sphere_reconstruction),
        ("Filter oracles", 10.0, filter_oracles),
        ("Delaunay correctness", 20.0, delaunay_correctness),
        ("Stacked Delaunay on sphere", 5.0, stacked_delaunay),
        ("Service end-to-end", 10.0, service_end_to_end),
        ("Real-time budget (128^3 warm MC < 500 ms)", f64::INFINITY, realtime_budget),
    ];
    println!();
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(detail) if secs > budget => Err(format!("took {secs:.2} s, budget {budget} s ({detail})")),
            other => other,
        };
        let budget_text = if budget.is_finite() { format!(" / {budget} s") } else { String::new() };
        match outcome {
            Ok(detail) => println!("PASS  {name} [{secs:.2} s{budget_text}]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name} [{secs:.2} s{budget_text}]: {why}");
            }
        }
    }
    println!("\nacceptance: {} passed, {failed} failed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
