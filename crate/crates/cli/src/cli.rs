use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use usviz_core::metaimage::ElementType;
use usviz_core::Axis;

#[derive(Debug, Parser)]
#[command(
    name = "usviz",
    version,
    about = "Ultrasound volume filtering, surface extraction and mesh serving",
    after_help = "Log verbosity is read from the USVIZ_LOG environment variable (e.g. USVIZ_LOG=info)."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print dimensions, element type, spacing and value range of a volume
    Info { input: PathBuf },
    /// Generate a synthetic phantom volume
    Synth(SynthArgs),
    /// Apply Gaussian and/or median filters and write a new volume
    Filter(FilterArgs),
    /// Extract an isosurface with marching cubes
    Isosurface(IsosurfaceArgs),
    /// Build a mesh from stacked per-slice Delaunay triangulations
    Delaunay(DelaunayArgs),
    /// Run the HTTP service for the browser viewer
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("phantom").required(true).args(["sphere", "noise"]))]
pub struct SynthArgs {
    /// Sphere phantom with N^3 voxels, centered in the grid
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub sphere: Option<u64>,
    /// Sphere radius in voxels [default: N/4]
    #[arg(long, requires = "sphere", value_parser = positive_f64)]
    pub radius: Option<f64>,
    #[arg(long, default_value_t = 1.0, requires = "sphere", allow_negative_numbers = true)]
    pub inside: f32,
    #[arg(long, default_value_t = 0.0, requires = "sphere", allow_negative_numbers = true)]
    pub outside: f32,
    /// Gaussian-plus-impulse noise phantom with N^3 voxels
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub noise: Option<u64>,
    #[arg(long, default_value_t = 0, requires = "noise")]
    pub seed: u64,
    #[arg(long, default_value_t = 100.0, requires = "noise", allow_negative_numbers = true)]
    pub base: f32,
    #[arg(long, default_value_t = 10.0, requires = "noise", value_parser = non_negative_f32)]
    pub sigma: f32,
    #[arg(long, default_value_t = 0.0, requires = "noise", value_parser = fraction)]
    pub impulse_fraction: f64,
    #[arg(long, default_value_t = 255.0, requires = "noise", allow_negative_numbers = true)]
    pub impulse_value: f32,
    #[command(flatten)]
    pub out: VolumeOutput,
}

#[derive(Debug, Args)]
pub struct VolumeOutput {
    /// Output file; standard output when omitted
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Element type written to the output file
    #[arg(long = "type", default_value = "float", value_parser = parse_element_type)]
    pub element_type: ElementType,
}

/// Filter flags; the order they appear on the command line is the order
/// they are applied in.
#[derive(Debug, Args)]
pub struct FilterFlags {
    /// Gaussian blur with this sigma in voxels (repeatable)
    #[arg(long, value_name = "SIGMA", allow_negative_numbers = true, value_parser = positive_f64)]
    pub gaussian: Vec<f64>,
    /// Median over a (2r+1)^3 window (repeatable)
    #[arg(long, value_name = "RADIUS", allow_negative_numbers = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub median: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub filters: FilterFlags,
    #[command(flatten)]
    pub out: VolumeOutput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeshFormat {
    Obj,
    Vtk,
}

#[derive(Debug, Args)]
pub struct MeshOutput {
    /// Iso level [default: midpoint of the filtered volume's value range]
    #[arg(long, allow_negative_numbers = true, value_parser = finite_f32)]
    pub iso: Option<f32>,
    #[arg(long, value_enum, default_value_t = MeshFormat::Obj)]
    pub format: MeshFormat,
    /// Output file; standard output when omitted
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IsosurfaceArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub filters: FilterFlags,
    #[command(flatten)]
    pub mesh: MeshOutput,
}

#[derive(Debug, Args)]
pub struct DelaunayArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub filters: FilterFlags,
    #[command(flatten)]
    pub mesh: MeshOutput,
    #[arg(long, default_value = "z", value_parser = parse_axis)]
    pub axis: Axis,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub slice_step: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub point_step: u64,
    /// Longest triangle edge kept, in mm
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true, value_parser = positive_f64)]
    pub max_edge: f64,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: std::net::IpAddr,
    /// Directory holding uploaded datasets
    #[arg(long, default_value = "usviz-data")]
    pub data_dir: PathBuf,
    /// Viewer bundle served at /
    #[arg(long)]
    pub static_dir: Option<PathBuf>,
    /// Upload size limit in MiB
    #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_upload_mib: u64,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn finite_f32(s: &str) -> Result<f32, String> {
    match s.parse::<f32>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("expected a finite number, got {s:?}")),
    }
}

fn non_negative_f32(s: &str) -> Result<f32, String> {
    match s.parse::<f32>() {
        Ok(v) if v >= 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a non-negative number, got {s:?}")),
    }
}

fn fraction(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if (0.0..=1.0).contains(&v) => Ok(v),
        _ => Err(format!("expected a number in [0, 1], got {s:?}")),
    }
}

fn parse_element_type(s: &str) -> Result<ElementType, String> {
    s.parse::<ElementType>().map_err(|_| {
        format!("unknown element type {s:?} (uchar, char, ushort, short, uint, int, float, double)")
    })
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    s.parse::<Axis>().map_err(|_| format!("expected x, y or z, got {s:?}"))
}
