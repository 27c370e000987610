//! Indexed triangle meshes: hygiene, topology metrics and export formats.

use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("MeshTooLarge: {what} count {count} does not fit in 32 bits")]
    MeshTooLarge { what: &'static str, count: usize },
    #[error("BadMagic: expected MSH1, found {0:?}")]
    BadMagic([u8; 4]),
    #[error("TruncatedBody: expected {expected} bytes, found {actual}")]
    TruncatedBody { expected: usize, actual: usize },
    #[error("TrailingBytes: expected {expected} bytes, found {actual}")]
    TrailingBytes { expected: usize, actual: usize },
    #[error("IndexOutOfRange: triangle {triangle} references vertex {index} of {vertices}")]
    IndexOutOfRange {
        triangle: usize,
        index: u32,
        vertices: usize,
    },
}

/// Triangle soup with shared vertices. Positions are in world units (mm).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TriangleMesh {
    pub positions: Vec<[f32; 3]>,
    pub normals: Vec<[f32; 3]>,
    pub triangles: Vec<[u32; 3]>,
}

impl TriangleMesh {
    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    /// Appends `other`, offsetting its indices.
    pub fn append(&mut self, other: &TriangleMesh) {
        let base = self.positions.len() as u32;
        self.positions.extend_from_slice(&other.positions);
        self.normals.extend_from_slice(&other.normals);
        self.triangles
            .extend(other.triangles.iter().map(|t| t.map(|i| i + base)));
    }

    /// Reverses the winding of every triangle.
    pub fn flipped(&self) -> TriangleMesh {
        TriangleMesh {
            positions: self.positions.clone(),
            normals: self.normals.clone(),
            triangles: self.triangles.iter().map(|&[a, b, c]| [a, c, b]).collect(),
        }
    }

    /// Unnormalized face normal (twice the area) by the right-hand rule.
    pub fn face_cross(&self, t: usize) -> [f64; 3] {
        let [a, b, c] = self.triangles[t].map(|i| self.positions[i as usize].map(f64::from));
        cross(sub(b, a), sub(c, a))
    }

    pub fn validate(&self) -> Result<(), MeshError> {
        let n = self.positions.len();
        for (t, tri) in self.triangles.iter().enumerate() {
            if let Some(&index) = tri.iter().find(|&&i| i as usize >= n) {
                return Err(MeshError::IndexOutOfRange {
                    triangle: t,
                    index,
                    vertices: n,
                });
            }
        }
        Ok(())
    }
}

pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn normalize(v: [f64; 3]) -> Option<[f64; 3]> {
    let len = dot(v, v).sqrt();
    (len > 0.0 && len.is_finite()).then(|| [v[0] / len, v[1] / len, v[2] / len])
}

/// Merges vertices that snap to the same cell of an `epsilon` grid.
///
/// `epsilon == 0` merges only bit-identical positions. The first vertex of
/// each cell keeps its position; merged normals are averaged and
/// renormalized. Triangles that collapse are dropped and unreferenced
/// vertices are compacted away; surviving vertices keep their relative order.
///
/// Points closer than `epsilon` but on opposite sides of a cell boundary
/// are not merged.
pub fn weld_vertices(mesh: &TriangleMesh, epsilon: f64) -> TriangleMesh {
    let key = |p: [f32; 3]| -> [i64; 3] {
        if epsilon > 0.0 {
            p.map(|c| (c as f64 / epsilon).round() as i64)
        } else {
            // +0.0 and -0.0 are the same point
            p.map(|c| if c == 0.0 { 0 } else { c.to_bits() as i64 })
        }
    };

    let mut cell_of: HashMap<[i64; 3], u32> = HashMap::new();
    let mut representative: Vec<u32> = Vec::with_capacity(mesh.positions.len());
    let mut groups: Vec<Vec<u32>> = Vec::new();
    for (i, &p) in mesh.positions.iter().enumerate() {
        let g = *cell_of.entry(key(p)).or_insert_with(|| {
            groups.push(Vec::new());
            (groups.len() - 1) as u32
        });
        groups[g as usize].push(i as u32);
        representative.push(g);
    }

    let mut kept: Vec<[u32; 3]> = Vec::with_capacity(mesh.triangles.len());
    let mut referenced = vec![false; groups.len()];
    for tri in &mesh.triangles {
        let g = tri.map(|i| representative[i as usize]);
        if g[0] == g[1] || g[1] == g[2] || g[0] == g[2] {
            continue;
        }
        for &group in &g {
            referenced[group as usize] = true;
        }
        kept.push(g);
    }

    let mut remap = vec![u32::MAX; groups.len()];
    let mut out = TriangleMesh::default();
    let has_normals = mesh.normals.len() == mesh.positions.len();
    for (group, members) in groups.iter().enumerate() {
        if !referenced[group] {
            continue;
        }
        remap[group] = out.positions.len() as u32;
        out.positions.push(mesh.positions[members[0] as usize]);
        if has_normals {
            out.normals.push(merged_normal(&mesh.normals, members));
        }
    }
    out.triangles = kept
        .into_iter()
        .map(|g| g.map(|group| remap[group as usize]))
        .collect();
    out
}

fn merged_normal(normals: &[[f32; 3]], members: &[u32]) -> [f32; 3] {
    if members.len() == 1 {
        return normals[members[0] as usize];
    }
    let mut sum = [0.0f64; 3];
    for &m in members {
        let n = normals[m as usize];
        for a in 0..3 {
            sum[a] += n[a] as f64;
        }
    }
    normalize(sum)
        .unwrap_or_else(|| normals[members[0] as usize].map(f64::from))
        .map(|c| c as f32)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshStats {
    pub vertex_count: usize,
    pub triangle_count: usize,
    pub edge_count: usize,
    pub euler_characteristic: i64,
    pub boundary_edge_count: usize,
    /// Edges with more than two incident triangles.
    pub non_manifold_edge_count: usize,
    pub bbox_min: [f32; 3],
    pub bbox_max: [f32; 3],
}

impl MeshStats {
    pub fn is_closed(&self) -> bool {
        self.boundary_edge_count == 0 && self.non_manifold_edge_count == 0
    }
}

/// Counts every unordered index pair used by a triangle with its incidence.
pub fn edge_incidence(mesh: &TriangleMesh) -> HashMap<(u32, u32), u32> {
    let mut edges: HashMap<(u32, u32), u32> = HashMap::with_capacity(mesh.triangles.len() * 3 / 2);
    for &[a, b, c] in &mesh.triangles {
        for (u, v) in [(a, b), (b, c), (c, a)] {
            *edges.entry((u.min(v), u.max(v))).or_insert(0) += 1;
        }
    }
    edges
}

pub fn mesh_stats(mesh: &TriangleMesh) -> MeshStats {
    let edges = edge_incidence(mesh);
    let (bbox_min, bbox_max) = if mesh.positions.is_empty() {
        ([0.0; 3], [0.0; 3])
    } else {
        mesh.positions.iter().fold(
            ([f32::INFINITY; 3], [f32::NEG_INFINITY; 3]),
            |(lo, hi), p| {
                (
                    [lo[0].min(p[0]), lo[1].min(p[1]), lo[2].min(p[2])],
                    [hi[0].max(p[0]), hi[1].max(p[1]), hi[2].max(p[2])],
                )
            },
        )
    };
    let v = mesh.positions.len();
    let f = mesh.triangles.len();
    let e = edges.len();
    MeshStats {
        vertex_count: v,
        triangle_count: f,
        edge_count: e,
        euler_characteristic: v as i64 - e as i64 + f as i64,
        boundary_edge_count: edges.values().filter(|&&n| n == 1).count(),
        non_manifold_edge_count: edges.values().filter(|&&n| n > 2).count(),
        bbox_min,
        bbox_max,
    }
}

/// `%g`-style formatting with six significant digits.
pub fn format_sig6(x: f32) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Wavefront OBJ with positions, normals and `f a//a b//b c//c` faces.
pub fn export_obj(mesh: &TriangleMesh) -> String {
    let mut out = String::with_capacity(mesh.positions.len() * 64 + mesh.triangles.len() * 32);
    let _ = writeln!(
        out,
        "# usviz mesh: {} vertices, {} triangles",
        mesh.positions.len(),
        mesh.triangles.len()
    );
    for p in &mesh.positions {
        let _ = writeln!(out, "v {} {} {}", format_sig6(p[0]), format_sig6(p[1]), format_sig6(p[2]));
    }
    for n in &mesh.normals {
        let _ = writeln!(out, "vn {} {} {}", format_sig6(n[0]), format_sig6(n[1]), format_sig6(n[2]));
    }
    for t in &mesh.triangles {
        let [a, b, c] = t.map(|i| i + 1);
        let _ = writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}");
    }
    out
}

/// Legacy ASCII VTK POLYDATA with per-point normals.
pub fn export_vtk_legacy(mesh: &TriangleMesh) -> String {
    let mut out = String::with_capacity(mesh.positions.len() * 64 + mesh.triangles.len() * 24);
    out.push_str("# vtk DataFile Version 3.0\nusviz mesh\nASCII\nDATASET POLYDATA\n");
    let _ = writeln!(out, "POINTS {} float", mesh.positions.len());
    for p in &mesh.positions {
        let _ = writeln!(out, "{} {} {}", format_sig6(p[0]), format_sig6(p[1]), format_sig6(p[2]));
    }
    let _ = writeln!(out, "POLYGONS {} {}", mesh.triangles.len(), mesh.triangles.len() * 4);
    for [a, b, c] in &mesh.triangles {
        let _ = writeln!(out, "3 {a} {b} {c}");
    }
    let _ = writeln!(out, "POINT_DATA {}", mesh.positions.len());
    out.push_str("NORMALS normals float\n");
    for n in &mesh.normals {
        let _ = writeln!(out, "{} {} {}", format_sig6(n[0]), format_sig6(n[1]), format_sig6(n[2]));
    }
    out
}

pub const WIRE_MAGIC: &[u8; 4] = b"MSH1";
const WIRE_HEADER_LEN: usize = 12;

/// Rejects meshes whose vertex or triangle count cannot be written as a u32.
pub fn check_wire_counts(vertices: usize, triangles: usize) -> Result<(), MeshError> {
    if vertices > u32::MAX as usize {
        return Err(MeshError::MeshTooLarge {
            what: "vertex",
            count: vertices,
        });
    }
    if triangles > u32::MAX as usize {
        return Err(MeshError::MeshTooLarge {
            what: "triangle",
            count: triangles,
        });
    }
    Ok(())
}

/// Exact byte length of the MSH1 encoding.
pub fn wire_len(vertices: usize, triangles: usize) -> usize {
    WIRE_HEADER_LEN + vertices * 24 + triangles * 12
}

/// MSH1 little-endian layout:
///
/// ```text
/// "MSH1" | nV: u32 | nT: u32 | nV x [f32; 3] positions | nV x [f32; 3] normals | nT x [u32; 3]
/// ```
///
/// Normals must have the same length as positions.
pub fn encode_wire_mesh(mesh: &TriangleMesh) -> Result<Vec<u8>, MeshError> {
    let nv = mesh.positions.len();
    let nt = mesh.triangles.len();
    check_wire_counts(nv, nt)?;
    let mut out = Vec::with_capacity(wire_len(nv, nt));
    out.extend_from_slice(WIRE_MAGIC);
    out.extend_from_slice(&(nv as u32).to_le_bytes());
    out.extend_from_slice(&(nt as u32).to_le_bytes());
    for p in &mesh.positions {
        for c in p {
            out.extend_from_slice(&c.to_le_bytes());
        }
    }
    for i in 0..nv {
        let n = mesh.normals.get(i).copied().unwrap_or([0.0; 3]);
        for c in n {
            out.extend_from_slice(&c.to_le_bytes());
        }
    }
    for t in &mesh.triangles {
        for i in t {
            out.extend_from_slice(&i.to_le_bytes());
        }
    }
    Ok(out)
}

pub fn decode_wire_mesh(bytes: &[u8]) -> Result<TriangleMesh, MeshError> {
    if bytes.len() < WIRE_HEADER_LEN {
        if bytes.len() >= 4 && &bytes[..4] != WIRE_MAGIC {
            return Err(MeshError::BadMagic(bytes[..4].try_into().unwrap()));
        }
        return Err(MeshError::TruncatedBody {
            expected: WIRE_HEADER_LEN,
            actual: bytes.len(),
        });
    }
    let magic: [u8; 4] = bytes[..4].try_into().unwrap();
    if &magic != WIRE_MAGIC {
        return Err(MeshError::BadMagic(magic));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let f32_at = |o: usize| f32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let nv = u32_at(4) as usize;
    let nt = u32_at(8) as usize;
    let expected = wire_len(nv, nt);
    if bytes.len() < expected {
        return Err(MeshError::TruncatedBody {
            expected,
            actual: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(MeshError::TrailingBytes {
            expected,
            actual: bytes.len(),
        });
    }
    let triple = |o: usize| [f32_at(o), f32_at(o + 4), f32_at(o + 8)];
    let pos_base = WIRE_HEADER_LEN;
    let nrm_base = pos_base + nv * 12;
    let tri_base = nrm_base + nv * 12;
    let mesh = TriangleMesh {
        positions: (0..nv).map(|i| triple(pos_base + i * 12)).collect(),
        normals: (0..nv).map(|i| triple(nrm_base + i * 12)).collect(),
        triangles: (0..nt)
            .map(|i| {
                let o = tri_base + i * 12;
                [u32_at(o), u32_at(o + 4), u32_at(o + 8)]
            })
            .collect(),
    };
    mesh.validate()?;
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_triangle() -> TriangleMesh {
        TriangleMesh {
            positions: vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            normals: vec![[0.57735026, 0.57735026, 0.57735026]; 3],
            triangles: vec![[0, 1, 2]],
        }
    }

    fn tetrahedron() -> TriangleMesh {
        TriangleMesh {
            positions: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            normals: vec![[0.0, 0.0, 1.0]; 4],
            triangles: vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]],
        }
    }

    #[test]
    fn stats_of_simple_shapes() {
        let s = mesh_stats(&unit_triangle());
        assert_eq!((s.vertex_count, s.edge_count, s.triangle_count), (3, 3, 1));
        assert_eq!(s.euler_characteristic, 1);
        assert_eq!(s.boundary_edge_count, 3);

        let s = mesh_stats(&tetrahedron());
        assert_eq!((s.vertex_count, s.edge_count, s.triangle_count), (4, 6, 4));
        assert_eq!(s.euler_characteristic, 2);
        assert_eq!(s.boundary_edge_count, 0);
        assert!(s.is_closed());
        assert_eq!(s.bbox_min, [0.0; 3]);
        assert_eq!(s.bbox_max, [1.0; 3]);
    }

    #[test]
    fn weld_zero_epsilon_keeps_welded_mesh() {
        let t = tetrahedron();
        assert_eq!(weld_vertices(&t, 0.0), t);
    }

    #[test]
    fn weld_merges_exact_duplicates() {
        let mut m = unit_triangle();
        m.positions.extend(m.positions.clone());
        m.normals.extend(m.normals.clone());
        m.triangles.push([3, 4, 5]);
        let w = weld_vertices(&m, 1e-6);
        assert_eq!(w.positions.len(), 3);
        assert_eq!(w.triangles, vec![[0, 1, 2], [0, 1, 2]]);
    }

    #[test]
    fn weld_drops_collapsed_triangle() {
        let m = TriangleMesh {
            positions: vec![[0.0, 0.0, 0.0], [1e-7, 0.0, 0.0], [1.0, 1.0, 0.0]],
            normals: vec![[0.0, 0.0, 1.0]; 3],
            triangles: vec![[0, 1, 2]],
        };
        let w = weld_vertices(&m, 1e-6);
        assert!(w.triangles.is_empty());
        assert!(w.positions.is_empty());
        assert!(w.normals.is_empty());
    }

    #[test]
    fn weld_averages_normals() {
        let m = TriangleMesh {
            positions: vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0; 3]],
            normals: vec![[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]],
            triangles: vec![[0, 1, 2], [3, 1, 2]],
        };
        let w = weld_vertices(&m, 0.0);
        assert_eq!(w.positions.len(), 3);
        let h = std::f32::consts::FRAC_1_SQRT_2;
        assert!((w.normals[0][0] - h).abs() < 1e-6 && (w.normals[0][1] - h).abs() < 1e-6);
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(1.0), "1");
        assert_eq!(format_sig6(-2.5), "-2.5");
        assert_eq!(format_sig6(31.5), "31.5");
        assert_eq!(format_sig6(1.0 / 3.0), "0.333333");
        assert_eq!(format_sig6(123456.7), "123457");
        assert_eq!(format_sig6(1234567.0), "1.23457e+06");
        assert_eq!(format_sig6(0.0001), "0.0001");
        assert_eq!(format_sig6(0.00001), "1e-05");
        assert_eq!(format_sig6(9.9999999), "10");
    }

    #[test]
    fn obj_single_triangle() {
        let text = export_obj(&unit_triangle());
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 3);
        assert_eq!(text.lines().filter(|l| l.starts_with("vn ")).count(), 3);
        let faces: Vec<&str> = text.lines().filter(|l| l.starts_with("f ")).collect();
        assert_eq!(faces, ["f 1//1 2//2 3//3"]);
    }

    #[test]
    fn obj_empty_mesh_is_header_only() {
        let text = export_obj(&TriangleMesh::default());
        assert_eq!(text.lines().count(), 1);
        assert!(text.starts_with('#'));
    }

    fn parse_obj_positions(text: &str) -> Vec<[f32; 3]> {
        text.lines()
            .filter_map(|l| l.strip_prefix("v "))
            .map(|rest| {
                let v: Vec<f32> = rest.split_whitespace().map(|t| t.parse().unwrap()).collect();
                [v[0], v[1], v[2]]
            })
            .collect()
    }

    #[test]
    fn vtk_section_arithmetic() {
        let text = export_vtk_legacy(&unit_triangle());
        assert!(text.starts_with("# vtk DataFile Version 3.0\n"));
        assert!(text.contains("DATASET POLYDATA\n"));
        assert!(text.contains("POINTS 3 float\n"));
        assert!(text.contains("POLYGONS 1 4\n3 0 1 2\n"));
        assert!(text.contains("POINT_DATA 3\nNORMALS normals float\n"));

        let empty = export_vtk_legacy(&TriangleMesh::default());
        assert!(empty.contains("POINTS 0 float\n"));
    }

    #[test]
    fn wire_sizes() {
        assert_eq!(encode_wire_mesh(&TriangleMesh::default()).unwrap().len(), 12);
        assert_eq!(encode_wire_mesh(&unit_triangle()).unwrap().len(), 96);
        assert_eq!(decode_wire_mesh(&encode_wire_mesh(&TriangleMesh::default()).unwrap()).unwrap(), TriangleMesh::default());
    }

    #[test]
    fn wire_errors() {
        let mut bytes = encode_wire_mesh(&unit_triangle()).unwrap();
        assert!(matches!(decode_wire_mesh(&bytes[..95]), Err(MeshError::TruncatedBody { expected: 96, actual: 95 })));
        bytes[0] = b'X';
        assert!(matches!(decode_wire_mesh(&bytes), Err(MeshError::BadMagic(_))));
        assert!(matches!(
            check_wire_counts(u32::MAX as usize + 1, 0),
            Err(MeshError::MeshTooLarge { what: "vertex", .. })
        ));
        assert!(check_wire_counts(u32::MAX as usize, u32::MAX as usize).is_ok());
    }

    fn arb_mesh() -> impl Strategy<Value = TriangleMesh> {
        (1usize..40).prop_flat_map(|nv| {
            (
                proptest::collection::vec(proptest::array::uniform3(-1000.0f32..1000.0), nv),
                proptest::collection::vec(proptest::array::uniform3(-1.0f32..1.0), nv),
                proptest::collection::vec(proptest::array::uniform3(0..nv as u32), 0..60),
            )
                .prop_map(|(positions, normals, triangles)| TriangleMesh {
                    positions,
                    normals,
                    triangles,
                })
        })
    }

    proptest! {
        #[test]
        fn wire_round_trip_is_exact(m in arb_mesh()) {
            let bytes = encode_wire_mesh(&m).unwrap();
            prop_assert_eq!(bytes.len(), wire_len(m.positions.len(), m.triangles.len()));
            let back = decode_wire_mesh(&bytes).unwrap();
            prop_assert_eq!(back.positions.iter().flatten().map(|c| c.to_bits()).collect::<Vec<_>>(),
                            m.positions.iter().flatten().map(|c| c.to_bits()).collect::<Vec<_>>());
            prop_assert_eq!(back, m);
        }

        #[test]
        fn exports_are_deterministic_and_obj_reparses(m in arb_mesh()) {
            prop_assert_eq!(export_obj(&m), export_obj(&m.clone()));
            prop_assert_eq!(export_vtk_legacy(&m), export_vtk_legacy(&m.clone()));
            let parsed = parse_obj_positions(&export_obj(&m));
            prop_assert_eq!(parsed.len(), m.positions.len());
            for (p, q) in parsed.iter().zip(&m.positions) {
                for a in 0..3 {
                    prop_assert!((p[a] - q[a]).abs() <= 1e-5 * q[a].abs().max(1.0));
                }
            }
        }

        #[test]
        fn weld_is_idempotent(m in arb_mesh(), eps in prop_oneof![Just(0.0), 0.01f64..50.0]) {
            let once = weld_vertices(&m, eps);
            prop_assert_eq!(weld_vertices(&once, eps), once.clone());
            prop_assert!(once.triangles.iter().all(|t| t[0] != t[1] && t[1] != t[2] && t[0] != t[2]));
        }

        #[test]
        fn euler_matches_counts(m in arb_mesh()) {
            let s = mesh_stats(&m);
            prop_assert_eq!(s.euler_characteristic, s.vertex_count as i64 - s.edge_count as i64 + s.triangle_count as i64);
        }
    }
}
