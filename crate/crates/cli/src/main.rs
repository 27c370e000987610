//! `usviz` command-line front end.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on file or data errors.

mod cli;

use anyhow::{Context, Result};
use clap::{ArgMatches, CommandFactory, FromArgMatches};
use cli::{Cli, Command, FilterFlags, MeshFormat, MeshOutput, VolumeOutput};
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use usviz_core::delaunay::StackParams;
use usviz_core::mesh::{export_obj, export_vtk_legacy, mesh_stats};
use usviz_core::metaimage::{read_volume, write_volume, MhaHeader};
use usviz_core::pipeline::{default_iso, extract, Algorithm, FilterChain, FilterStep};
use usviz_core::volume::{synth_noise, synth_sphere};
use usviz_core::ScalarVolume;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("USVIZ_LOG", "warn")).init();
    let matches = match Cli::command().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let sub = matches.subcommand().map(|(_, m)| m).expect("subcommand is required");
    match run(cli.command, sub) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, matches: &ArgMatches) -> Result<()> {
    match command {
        Command::Info { input } => info(&input),
        Command::Synth(args) => {
            let volume = if let Some(n) = args.sphere {
                let n = n as usize;
                let radius = args.radius.unwrap_or(n as f64 / 4.0);
                let center = (n as f64 - 1.0) / 2.0;
                synth_sphere([n; 3], [center; 3], radius, args.inside, args.outside)?
            } else {
                let n = args.noise.expect("clap requires --sphere or --noise") as usize;
                synth_noise(
                    [n; 3],
                    args.seed,
                    args.base,
                    args.sigma,
                    args.impulse_fraction,
                    args.impulse_value,
                )?
            };
            let header = MhaHeader::for_volume(&volume, args.out.element_type);
            write_volume_to(&header, &volume, &args.out)
        }
        Command::Filter(args) => {
            let (mut header, volume) = load(&args.input)?;
            let chain = filter_chain(&args.filters, matches);
            let filtered = chain.apply(&volume)?;
            log::info!("applied [{chain}] to {}", args.input.display());
            header.element_type = args.out.element_type;
            write_volume_to(&header, &filtered, &args.out)
        }
        Command::Isosurface(args) => {
            let (_, volume) = load(&args.input)?;
            let chain = filter_chain(&args.filters, matches);
            mesh_command(&volume, &chain, &args.mesh, &Algorithm::MarchingCubes)
        }
        Command::Delaunay(args) => {
            let (_, volume) = load(&args.input)?;
            let chain = filter_chain(&args.filters, matches);
            let params = StackParams {
                axis: args.axis,
                slice_step: args.slice_step as usize,
                point_step: args.point_step as usize,
                max_edge: args.max_edge,
            };
            mesh_command(&volume, &chain, &args.mesh, &Algorithm::Delaunay(params))
        }
        Command::Serve(args) => {
            let mut config = usviz_server::ServerConfig::new(&args.data_dir);
            config.static_dir = args.static_dir;
            config.max_upload_bytes = (args.max_upload_mib as usize).saturating_mul(1024 * 1024);
            let addr = std::net::SocketAddr::new(args.host, args.port);
            eprintln!("serving on http://{addr} (data in {})", args.data_dir.display());
            let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
            runtime
                .block_on(usviz_server::serve(config, addr))
                .with_context(|| format!("serving on {addr}"))
        }
    }
}

/// Filter steps in command-line order.
fn filter_chain(flags: &FilterFlags, matches: &ArgMatches) -> FilterChain {
    let positions = |id: &str| -> Vec<usize> {
        matches.indices_of(id).map(|i| i.collect()).unwrap_or_default()
    };
    let mut steps: Vec<(usize, FilterStep)> = positions("gaussian")
        .into_iter()
        .zip(flags.gaussian.iter().map(|&s| FilterStep::Gaussian(s)))
        .chain(
            positions("median")
                .into_iter()
                .zip(flags.median.iter().map(|&r| FilterStep::Median(r as usize))),
        )
        .collect();
    steps.sort_by_key(|(i, _)| *i);
    FilterChain(steps.into_iter().map(|(_, s)| s).collect())
}

fn load(path: &Path) -> Result<(MhaHeader, ScalarVolume)> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let parsed = read_volume(&bytes).with_context(|| format!("{}", path.display()))?;
    Ok(parsed)
}

fn info(path: &Path) -> Result<()> {
    let (header, volume) = load(path)?;
    let [nx, ny, nz] = volume.dims();
    let join = |v: [f64; 3]| v.map(|c| c.to_string()).join(" ");
    let (lo, hi) = volume.value_range();
    let mut out = std::io::stdout().lock();
    writeln!(out, "file: {}", path.display())?;
    writeln!(out, "dims: {nx} x {ny} x {nz}")?;
    writeln!(out, "element type: {}", header.element_type.token())?;
    writeln!(out, "spacing: {}", join(volume.spacing()))?;
    writeln!(out, "origin: {}", join(volume.origin()))?;
    writeln!(out, "value range: {lo} {hi}")?;
    Ok(())
}

fn write_volume_to(header: &MhaHeader, volume: &ScalarVolume, out: &VolumeOutput) -> Result<()> {
    let mut header = header.clone();
    header.element_type = out.element_type;
    let written = write_volume(&header, volume, out.element_type);
    if written.clamped > 0 {
        log::warn!(
            "{} voxel(s) clamped to the {} range",
            written.clamped,
            out.element_type.token()
        );
    }
    emit(out.output.as_deref(), &written.bytes)
}

fn mesh_command(volume: &ScalarVolume, chain: &FilterChain, out: &MeshOutput, algorithm: &Algorithm) -> Result<()> {
    let filtered = chain.apply(volume)?;
    let iso = out.iso.unwrap_or_else(|| default_iso(&filtered));
    let mesh = extract(&filtered, iso, algorithm)?;
    let stats = mesh_stats(&mesh);
    eprintln!(
        "{} at iso {iso}: {} vertices, {} triangles, euler characteristic {}, {} boundary edges",
        algorithm.name(),
        stats.vertex_count,
        stats.triangle_count,
        stats.euler_characteristic,
        stats.boundary_edge_count
    );
    let text = match out.format {
        MeshFormat::Obj => export_obj(&mesh),
        MeshFormat::Vtk => export_vtk_legacy(&mesh),
    };
    emit(out.output.as_deref(), text.as_bytes())
}

/// Writes to `path` atomically (temp file in the same directory, then
/// rename), or to standard output when no path is given.
fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(bytes)?;
        return Ok(stdout.flush()?);
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a file in {}", dir.display()))?;
    tmp.write_all(bytes)
        .with_context(|| format!("cannot write {}", path.display()))?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}
