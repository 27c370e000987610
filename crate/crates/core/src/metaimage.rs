//! Single-file MetaImage (`.mha`) reading and writing.
//!
//! A file is a block of `Key = Value` text lines terminated by the
//! `ElementDataFile = LOCAL` line, followed immediately by the raw voxel
//! payload (x-fastest). Only uncompressed 3D images with an in-file payload
//! are accepted.

use crate::volume::{ScalarVolume, VolumeError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MhaError {
    #[error("MissingRequiredKey: header has no {0} entry")]
    MissingRequiredKey(&'static str),
    #[error("UnsupportedValue: {key} = {value}")]
    UnsupportedValue { key: String, value: String },
    #[error("InvalidValue: {key} = {value} ({reason})")]
    InvalidValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("MalformedLine: line {line} has no '=': {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("PayloadTooShort: expected {expected} payload bytes at offset {offset}, found {actual}")]
    PayloadTooShort {
        expected: usize,
        actual: usize,
        offset: usize,
    },
    #[error("PayloadTooLong: expected {expected} payload bytes at offset {offset}, found {actual}")]
    PayloadTooLong {
        expected: usize,
        actual: usize,
        offset: usize,
    },
    #[error("UnsupportedCompression: compressed payloads are not supported")]
    UnsupportedCompression,
    #[error("InvalidVolume: {0}")]
    InvalidVolume(#[from] VolumeError),
}

impl MhaError {
    /// Stable variant name, used in service error bodies.
    pub fn kind(&self) -> &'static str {
        match self {
            MhaError::MissingRequiredKey(_) => "MissingRequiredKey",
            MhaError::UnsupportedValue { .. } => "UnsupportedValue",
            MhaError::InvalidValue { .. } => "InvalidValue",
            MhaError::MalformedLine { .. } => "MalformedLine",
            MhaError::PayloadTooShort { .. } => "PayloadTooShort",
            MhaError::PayloadTooLong { .. } => "PayloadTooLong",
            MhaError::UnsupportedCompression => "UnsupportedCompression",
            MhaError::InvalidVolume(_) => "InvalidVolume",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementType {
    UChar,
    Char,
    Short,
    UShort,
    Int,
    UInt,
    Float,
    Double,
}

impl ElementType {
    pub const ALL: [ElementType; 8] = [
        ElementType::UChar,
        ElementType::Char,
        ElementType::Short,
        ElementType::UShort,
        ElementType::Int,
        ElementType::UInt,
        ElementType::Float,
        ElementType::Double,
    ];

    pub fn size(self) -> usize {
        match self {
            ElementType::UChar | ElementType::Char => 1,
            ElementType::Short | ElementType::UShort => 2,
            ElementType::Int | ElementType::UInt | ElementType::Float => 4,
            ElementType::Double => 8,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            ElementType::UChar => "MET_UCHAR",
            ElementType::Char => "MET_CHAR",
            ElementType::Short => "MET_SHORT",
            ElementType::UShort => "MET_USHORT",
            ElementType::Int => "MET_INT",
            ElementType::UInt => "MET_UINT",
            ElementType::Float => "MET_FLOAT",
            ElementType::Double => "MET_DOUBLE",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        ElementType::ALL.into_iter().find(|t| t.token() == token)
    }

    /// Inclusive value range of the integer types; `None` for floating types.
    pub fn integer_range(self) -> Option<(f64, f64)> {
        match self {
            ElementType::UChar => Some((0.0, u8::MAX as f64)),
            ElementType::Char => Some((i8::MIN as f64, i8::MAX as f64)),
            ElementType::Short => Some((i16::MIN as f64, i16::MAX as f64)),
            ElementType::UShort => Some((0.0, u16::MAX as f64)),
            ElementType::Int => Some((i32::MIN as f64, i32::MAX as f64)),
            ElementType::UInt => Some((0.0, u32::MAX as f64)),
            ElementType::Float | ElementType::Double => None,
        }
    }
}

impl std::str::FromStr for ElementType {
    type Err = String;

    /// Accepts either the header token (`MET_USHORT`) or the bare name (`ushort`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(t) = ElementType::from_token(s) {
            return Ok(t);
        }
        let upper = format!("MET_{}", s.to_ascii_uppercase());
        ElementType::from_token(&upper).ok_or_else(|| format!("unknown element type '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MhaHeader {
    pub ndims: usize,
    pub dim_size: [usize; 3],
    pub element_type: ElementType,
    pub element_spacing: [f64; 3],
    pub offset: [f64; 3],
    pub byte_order_msb: bool,
    pub compressed: bool,
    pub element_data_file: String,
    /// Unrecognized entries, in file order, values verbatim.
    pub extra: Vec<(String, String)>,
}

impl MhaHeader {
    /// A canonical header describing `volume` stored as `element_type`.
    pub fn for_volume(volume: &ScalarVolume, element_type: ElementType) -> Self {
        Self {
            ndims: 3,
            dim_size: volume.dims(),
            element_type,
            element_spacing: volume.spacing(),
            offset: volume.origin(),
            byte_order_msb: false,
            compressed: false,
            element_data_file: "LOCAL".to_string(),
            extra: Vec::new(),
        }
    }

    pub fn voxel_count(&self) -> Option<usize> {
        self.dim_size
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
    }

    pub fn payload_len(&self) -> Option<usize> {
        self.voxel_count()?.checked_mul(self.element_type.size())
    }
}

fn invalid(key: &str, value: &str, reason: impl Into<String>) -> MhaError {
    MhaError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.into(),
    }
}

fn parse_triple<T: std::str::FromStr>(key: &str, value: &str) -> Result<[T; 3], MhaError> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(invalid(key, value, "expected three components"));
    }
    let mut out = Vec::with_capacity(3);
    for p in parts {
        out.push(
            p.parse::<T>()
                .map_err(|_| invalid(key, value, format!("cannot parse '{p}'")))?,
        );
    }
    match <[T; 3]>::try_from(out) {
        Ok(arr) => Ok(arr),
        Err(_) => unreachable!(),
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool, MhaError> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "1" => Ok(true),
        "false" | "0" => Ok(false),
        _ => Err(invalid(key, value, "expected True or False")),
    }
}

/// Parses header lines up to and including the `ElementDataFile` entry.
/// Lines after it are not consumed. Blank lines are skipped.
pub fn parse_header<I, S>(lines: I) -> Result<MhaHeader, MhaError>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut ndims: Option<usize> = None;
    let mut dim_size: Option<[usize; 3]> = None;
    let mut dim_size_raw: Option<String> = None;
    let mut element_type: Option<ElementType> = None;
    let mut element_spacing = [1.0; 3];
    let mut offset = [0.0; 3];
    let mut byte_order_msb = false;
    let mut compressed = false;
    let mut element_data_file: Option<String> = None;
    let mut extra = Vec::new();

    for (line_no, line) in lines.into_iter().enumerate() {
        let line = line.as_ref().trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(MhaError::MalformedLine {
                line: line_no + 1,
                text: line.to_string(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "ObjectType" => {}
            "NDims" => {
                let n: usize = value
                    .parse()
                    .map_err(|_| invalid(key, value, "not an integer"))?;
                ndims = Some(n);
            }
            // DimSize is validated once NDims is known
            "DimSize" => dim_size_raw = Some(value.to_string()),
            "ElementType" => {
                element_type = Some(ElementType::from_token(value).ok_or_else(|| {
                    MhaError::UnsupportedValue {
                        key: key.to_string(),
                        value: value.to_string(),
                    }
                })?)
            }
            "ElementSpacing" => {
                let s: [f64; 3] = parse_triple(key, value)?;
                if s.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
                    return Err(invalid(key, value, "spacing must be positive"));
                }
                element_spacing = s;
            }
            "Offset" | "Origin" | "Position" => {
                let o: [f64; 3] = parse_triple(key, value)?;
                if o.iter().any(|c| !c.is_finite()) {
                    return Err(invalid(key, value, "offset must be finite"));
                }
                offset = o;
            }
            "BinaryDataByteOrderMSB" | "ElementByteOrderMSB" => {
                byte_order_msb |= parse_bool(key, value)?
            }
            "CompressedData" => compressed = parse_bool(key, value)?,
            "ElementDataFile" => {
                element_data_file = Some(value.to_string());
                break;
            }
            _ => extra.push((key.to_string(), value.to_string())),
        }
    }

    let ndims = ndims.ok_or(MhaError::MissingRequiredKey("NDims"))?;
    if ndims != 3 {
        return Err(MhaError::UnsupportedValue {
            key: "NDims".into(),
            value: ndims.to_string(),
        });
    }
    if let Some(raw) = dim_size_raw {
        let d: [usize; 3] = parse_triple("DimSize", &raw)?;
        if d.iter().any(|&c| c == 0) {
            return Err(invalid("DimSize", &raw, "every dimension must be at least 1"));
        }
        dim_size = Some(d);
    }
    let dim_size = dim_size.ok_or(MhaError::MissingRequiredKey("DimSize"))?;
    let element_type = element_type.ok_or(MhaError::MissingRequiredKey("ElementType"))?;
    let element_data_file =
        element_data_file.ok_or(MhaError::MissingRequiredKey("ElementDataFile"))?;
    if element_data_file != "LOCAL" {
        return Err(MhaError::UnsupportedValue {
            key: "ElementDataFile".into(),
            value: element_data_file,
        });
    }

    let header = MhaHeader {
        ndims,
        dim_size,
        element_type,
        element_spacing,
        offset,
        byte_order_msb,
        compressed,
        element_data_file,
        extra,
    };
    if header.payload_len().is_none() {
        return Err(invalid(
            "DimSize",
            &format!("{} {} {}", dim_size[0], dim_size[1], dim_size[2]),
            "payload size overflows",
        ));
    }
    Ok(header)
}

/// Splits `bytes` into header lines and the payload offset. The header ends
/// after the first line whose key is `ElementDataFile`.
fn split_header(bytes: &[u8]) -> (Vec<String>, Option<usize>) {
    let mut lines = Vec::new();
    let mut start = 0;
    while start < bytes.len() {
        let end = bytes[start..]
            .iter()
            .position(|&b| b == b'\n')
            .map(|p| start + p + 1)
            .unwrap_or(bytes.len());
        let line = String::from_utf8_lossy(&bytes[start..end]).into_owned();
        let is_last = line
            .split_once('=')
            .is_some_and(|(k, _)| k.trim() == "ElementDataFile");
        lines.push(line);
        start = end;
        if is_last {
            return (lines, Some(start));
        }
    }
    (lines, None)
}

/// Decodes a complete `.mha` byte stream into its header and a float volume.
pub fn read_volume(bytes: &[u8]) -> Result<(MhaHeader, ScalarVolume), MhaError> {
    let (lines, payload_offset) = split_header(bytes);
    let header = parse_header(&lines)?;
    if header.compressed {
        return Err(MhaError::UnsupportedCompression);
    }
    // parse_header only succeeds once ElementDataFile was seen
    let offset = payload_offset.unwrap_or(bytes.len());
    let payload = &bytes[offset..];
    let expected = header.payload_len().unwrap_or(usize::MAX);
    if payload.len() < expected {
        return Err(MhaError::PayloadTooShort {
            expected,
            actual: payload.len(),
            offset,
        });
    }
    if payload.len() > expected {
        return Err(MhaError::PayloadTooLong {
            expected,
            actual: payload.len(),
            offset,
        });
    }
    let data = decode_payload(payload, header.element_type, header.byte_order_msb);
    if let Some(index) = data.iter().position(|v| !v.is_finite()) {
        return Err(MhaError::InvalidValue {
            key: "payload".into(),
            value: format!("voxel {index}"),
            reason: "non-finite or out of float range".into(),
        });
    }
    let volume = ScalarVolume::new(
        header.dim_size,
        header.element_spacing,
        header.offset,
        data,
    )?;
    Ok((header, volume))
}

fn decode_payload(payload: &[u8], ty: ElementType, msb: bool) -> Vec<f32> {
    macro_rules! decode {
        ($t:ty, $n:expr) => {
            payload
                .chunks_exact($n)
                .map(|c| {
                    let arr: [u8; $n] = c.try_into().unwrap();
                    let v = if msb {
                        <$t>::from_be_bytes(arr)
                    } else {
                        <$t>::from_le_bytes(arr)
                    };
                    v as f32
                })
                .collect()
        };
    }
    match ty {
        ElementType::UChar => payload.iter().map(|&b| b as f32).collect(),
        ElementType::Char => payload.iter().map(|&b| b as i8 as f32).collect(),
        ElementType::Short => decode!(i16, 2),
        ElementType::UShort => decode!(u16, 2),
        ElementType::Int => decode!(i32, 4),
        ElementType::UInt => decode!(u32, 4),
        ElementType::Float => decode!(f32, 4),
        ElementType::Double => decode!(f64, 8),
    }
}

/// Result of [`write_volume`].
#[derive(Debug, Clone, PartialEq)]
pub struct WrittenVolume {
    pub bytes: Vec<u8>,
    /// Voxels whose value fell outside the target type's range.
    pub clamped: usize,
}

fn format_triple<T: std::fmt::Display>(v: &[T; 3]) -> String {
    format!("{} {} {}", v[0], v[1], v[2])
}

/// Serializes `volume` as a single-file MetaImage with `target` element type.
///
/// Geometry (dims, spacing, origin) comes from the volume; byte order and
/// the extra entries come from `header`. Integer targets round to nearest
/// and clamp to the type range; each clamped voxel is counted.
pub fn write_volume(header: &MhaHeader, volume: &ScalarVolume, target: ElementType) -> WrittenVolume {
    let msb = header.byte_order_msb;
    let mut text = String::new();
    let mut line = |k: &str, v: &str| {
        text.push_str(k);
        text.push_str(" = ");
        text.push_str(v);
        text.push('\n');
    };
    line("ObjectType", "Image");
    line("NDims", "3");
    line("DimSize", &format_triple(&volume.dims()));
    line("ElementType", target.token());
    line("ElementSpacing", &format_triple(&volume.spacing()));
    line("Offset", &format_triple(&volume.origin()));
    line("BinaryDataByteOrderMSB", if msb { "True" } else { "False" });
    for (k, v) in &header.extra {
        line(k, v);
    }
    line("ElementDataFile", "LOCAL");

    let mut bytes = text.into_bytes();
    bytes.reserve(volume.len() * target.size());
    let mut clamped = 0usize;

    macro_rules! encode_int {
        ($t:ty) => {{
            let (lo, hi) = (<$t>::MIN as f64, <$t>::MAX as f64);
            for &v in volume.data() {
                let r = (v as f64).round();
                let c = if r < lo {
                    clamped += 1;
                    lo
                } else if r > hi {
                    clamped += 1;
                    hi
                } else {
                    r
                };
                let x = c as $t;
                bytes.extend_from_slice(&if msb { x.to_be_bytes() } else { x.to_le_bytes() });
            }
        }};
    }
    match target {
        ElementType::UChar => encode_int!(u8),
        ElementType::Char => encode_int!(i8),
        ElementType::Short => encode_int!(i16),
        ElementType::UShort => encode_int!(u16),
        ElementType::Int => encode_int!(i32),
        ElementType::UInt => encode_int!(u32),
        ElementType::Float => {
            for &v in volume.data() {
                bytes.extend_from_slice(&if msb { v.to_be_bytes() } else { v.to_le_bytes() });
            }
        }
        ElementType::Double => {
            for &v in volume.data() {
                let x = v as f64;
                bytes.extend_from_slice(&if msb { x.to_be_bytes() } else { x.to_le_bytes() });
            }
        }
    }
    WrittenVolume { bytes, clamped }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const MINIMAL: &str = "ObjectType = Image\nNDims = 3\nDimSize = 4 4 4\nElementType = MET_UCHAR\nElementDataFile = LOCAL\n";

    fn with_payload(header: &str, payload: &[u8]) -> Vec<u8> {
        let mut b = header.as_bytes().to_vec();
        b.extend_from_slice(payload);
        b
    }

    #[test]
    fn parse_minimal_header_applies_defaults() {
        let h = parse_header(MINIMAL.lines()).unwrap();
        assert_eq!(h.dim_size, [4, 4, 4]);
        assert_eq!(h.element_type, ElementType::UChar);
        assert_eq!(h.element_spacing, [1.0; 3]);
        assert_eq!(h.offset, [0.0; 3]);
        assert!(!h.byte_order_msb);
        assert!(!h.compressed);
        assert!(h.extra.is_empty());
    }

    #[test]
    fn parse_full_size_header() {
        let text = MINIMAL.replace("4 4 4", "256 256 256");
        assert_eq!(parse_header(text.lines()).unwrap().dim_size, [256, 256, 256]);
    }

    #[test]
    fn parse_rejects_two_dimensions() {
        let text = MINIMAL.replace("NDims = 3", "NDims = 2");
        assert!(matches!(
            parse_header(text.lines()),
            Err(MhaError::UnsupportedValue { key, .. }) if key == "NDims"
        ));
    }

    #[test]
    fn parse_is_whitespace_tolerant_and_keeps_extras() {
        let text = "NDims\t=   3\nTransformMatrix = 1 0 0 0 1 0 0 0 1\nDimSize =  2\t3   4 \nAnatomicalOrientation = RAI\nElementType = MET_SHORT\nElementSpacing = 0.5 0.5 2\nElementDataFile = LOCAL\nIgnored = after\n";
        let h = parse_header(text.lines()).unwrap();
        assert_eq!(h.dim_size, [2, 3, 4]);
        assert_eq!(h.element_spacing, [0.5, 0.5, 2.0]);
        assert_eq!(
            h.extra,
            vec![
                ("TransformMatrix".to_string(), "1 0 0 0 1 0 0 0 1".to_string()),
                ("AnatomicalOrientation".to_string(), "RAI".to_string()),
            ]
        );
    }

    #[test]
    fn keys_are_case_sensitive() {
        let text = MINIMAL.replace("NDims", "ndims");
        assert_eq!(
            parse_header(text.lines()),
            Err(MhaError::MissingRequiredKey("NDims"))
        );
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let text = MINIMAL.replace("NDims = 3", "NDims 3");
        assert!(matches!(
            parse_header(text.lines()),
            Err(MhaError::MalformedLine { line: 2, .. })
        ));
    }

    #[test]
    fn read_constant_uchar() {
        let bytes = with_payload(MINIMAL, &[7u8; 64]);
        let (h, v) = read_volume(&bytes).unwrap();
        assert_eq!(h.dim_size, [4, 4, 4]);
        assert!(v.data().iter().all(|&x| x == 7.0));
    }

    // 0..8 as little-endian i16, hand-encoded
    const SHORT_PAYLOAD: [u8; 16] = [0, 0, 1, 0, 2, 0, 3, 0, 4, 0, 5, 0, 6, 0, 7, 0];
    const SHORT_HEADER: &str =
        "ObjectType = Image\nNDims = 3\nDimSize = 2 2 2\nElementType = MET_SHORT\nElementDataFile = LOCAL\n";

    #[test]
    fn read_short_little_endian() {
        let (_, v) = read_volume(&with_payload(SHORT_HEADER, &SHORT_PAYLOAD)).unwrap();
        for k in 0..2 {
            for j in 0..2 {
                for i in 0..2 {
                    assert_eq!(v.at(i, j, k), (i + 2 * j + 4 * k) as f32);
                }
            }
        }
    }

    #[test]
    fn read_big_endian() {
        let header = SHORT_HEADER.replace("ElementDataFile", "BinaryDataByteOrderMSB = True\nElementDataFile");
        let payload: Vec<u8> = (0i16..8).flat_map(|v| v.to_be_bytes()).collect();
        let (h, v) = read_volume(&with_payload(&header, &payload)).unwrap();
        assert!(h.byte_order_msb);
        assert_eq!(v.data(), &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
    }

    #[test]
    fn payload_length_is_exact() {
        assert_eq!(
            read_volume(&with_payload(MINIMAL, &[0u8; 63])),
            Err(MhaError::PayloadTooShort {
                expected: 64,
                actual: 63,
                offset: MINIMAL.len()
            })
        );
        assert!(matches!(
            read_volume(&with_payload(MINIMAL, &[0u8; 65])),
            Err(MhaError::PayloadTooLong { expected: 64, actual: 65, .. })
        ));
    }

    #[test]
    fn compressed_is_rejected() {
        let header = MINIMAL.replace("ElementDataFile", "CompressedData = True\nElementDataFile");
        assert_eq!(
            read_volume(&with_payload(&header, &[0u8; 64])),
            Err(MhaError::UnsupportedCompression)
        );
    }

    #[test]
    fn crlf_header_is_accepted() {
        let header = MINIMAL.replace('\n', "\r\n");
        let (_, v) = read_volume(&with_payload(&header, &[3u8; 64])).unwrap();
        assert_eq!(v.value_range(), (3.0, 3.0));
    }

    #[test]
    fn short_round_trip_is_bit_identical() {
        let bytes = with_payload(SHORT_HEADER, &SHORT_PAYLOAD);
        let (h, v) = read_volume(&bytes).unwrap();
        let out = write_volume(&h, &v, ElementType::Short);
        assert_eq!(out.clamped, 0);
        assert_eq!(&out.bytes[out.bytes.len() - 16..], &SHORT_PAYLOAD);
        let (h2, v2) = read_volume(&out.bytes).unwrap();
        assert_eq!(v2, v);
        assert_eq!(h2, h);
    }

    #[test]
    fn zero_volume_as_uchar() {
        let v = ScalarVolume::constant([4, 4, 4], 0.0).unwrap();
        let h = MhaHeader::for_volume(&v, ElementType::UChar);
        let out = write_volume(&h, &v, ElementType::UChar);
        let text = String::from_utf8_lossy(&out.bytes);
        let payload_start = text.find("ElementDataFile = LOCAL\n").unwrap() + 24;
        assert_eq!(&out.bytes[payload_start..], &[0u8; 64]);
    }

    #[test]
    fn clamping_is_counted() {
        let mut data = vec![0.0f32; 8];
        data[3] = 300.0;
        data[5] = -4.0;
        let v = ScalarVolume::from_data([2, 2, 2], data).unwrap();
        let out = write_volume(&MhaHeader::for_volume(&v, ElementType::UChar), &v, ElementType::UChar);
        assert_eq!(out.clamped, 2);
        let payload = &out.bytes[out.bytes.len() - 8..];
        assert_eq!(payload[3], 255);
        assert_eq!(payload[5], 0);
    }

    #[test]
    fn header_canonical_order() {
        let v = ScalarVolume::constant([1, 1, 1], 0.0).unwrap();
        let mut h = MhaHeader::for_volume(&v, ElementType::Float);
        h.extra.push(("Modality".into(), "MET_MOD_US".into()));
        let out = write_volume(&h, &v, ElementType::Float);
        let text = String::from_utf8_lossy(&out.bytes[..out.bytes.len() - 4]);
        let keys: Vec<&str> = text
            .lines()
            .map(|l| l.split_once(" = ").unwrap().0)
            .collect();
        assert_eq!(
            keys,
            [
                "ObjectType",
                "NDims",
                "DimSize",
                "ElementType",
                "ElementSpacing",
                "Offset",
                "BinaryDataByteOrderMSB",
                "Modality",
                "ElementDataFile"
            ]
        );
    }

    proptest! {
        #[test]
        fn parser_is_total(bytes in proptest::collection::vec(any::<u8>(), 0..512)) {
            let _ = read_volume(&bytes);
        }

        #[test]
        fn parser_is_total_on_header_like_text(
            lines in proptest::collection::vec(
                (prop_oneof![Just("NDims"), Just("DimSize"), Just("ElementType"), Just("ElementSpacing"),
                             Just("Offset"), Just("CompressedData"), Just("ElementDataFile"), Just("X")],
                 "[ 0-9a-zA-Z_.\\-]{0,24}"),
                0..10)
        ) {
            let text: Vec<String> = lines.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            let _ = parse_header(&text);
        }

        #[test]
        fn float_round_trip(
            dims in (1usize..5, 1usize..5, 1usize..5),
            spacing in (0.01f64..10.0, 0.01f64..10.0, 0.01f64..10.0),
            origin in (-100.0f64..100.0, -100.0f64..100.0, -100.0f64..100.0),
            msb in any::<bool>(),
            seed in any::<u32>(),
        ) {
            let dims = [dims.0, dims.1, dims.2];
            let n = dims.iter().product::<usize>();
            let data: Vec<f32> = (0..n).map(|i| ((i as u32).wrapping_mul(2654435761) ^ seed) as f32 * 1e-3 - 1e6).collect();
            let v = ScalarVolume::new(dims, [spacing.0, spacing.1, spacing.2], [origin.0, origin.1, origin.2], data).unwrap();
            let mut h = MhaHeader::for_volume(&v, ElementType::Float);
            h.byte_order_msb = msb;
            let out = write_volume(&h, &v, ElementType::Float);
            let (h2, v2) = read_volume(&out.bytes).unwrap();
            prop_assert_eq!(h2, h);
            prop_assert_eq!(v2, v);
        }
    }
}
