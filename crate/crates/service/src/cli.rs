//! The `seg` command line.
//!
//! Exit codes: 0 success, 2 I/O or parse failure, 3 rasterization failure,
//! 4 metric precondition failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use segstudio::metrics::{build_report, render_report, ReportFormat};
use segstudio::nrrd::read_nrrd;
use segstudio::pipeline::{encode_mask, load_contours, load_mask, reorient_file};
use segstudio::{rasterize, Error, Mask, NoProgress, ProgressSink, RasterOptions};

use crate::config::{self, ServiceConfig};

pub const EXIT_IO: u8 = 2;
pub const EXIT_RASTER: u8 = 3;
pub const EXIT_METRICS: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "seg", version, about = "Contour-to-mask segmentation toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the geometry of an NRRD volume.
    Info { file: PathBuf },
    /// Reorient a volume to RAS.
    Convert {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Fill contours into a binary mask on the source grid.
    Mask(MaskArgs),
    /// Dice and Hausdorff distance between two masks.
    Metrics {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Also write the full report as JSON to this file.
        #[arg(long, value_name = "REPORT")]
        json: Option<PathBuf>,
    },
    /// Run the HTTP job service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct MaskArgs {
    #[arg(long)]
    pub contours: PathBuf,
    #[arg(long)]
    pub meta: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Fill self-intersecting contours with the even-odd rule.
    #[arg(long)]
    pub lenient: bool,
    #[arg(long, default_value_t = Mask::DEFAULT_FOREGROUND, value_parser = clap::value_parser!(u8).range(1..))]
    pub fg_value: u8,
    /// Report `progress <pct>` lines on stderr.
    #[arg(long)]
    pub progress: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "PORT", default_value_t = config::DEFAULT_PORT)]
    pub port: u16,
    #[arg(long, env = "WORKDIR")]
    pub workdir: Option<PathBuf>,
    #[arg(long, env = "JOB_TTL_HOURS", default_value_t = config::DEFAULT_TTL_HOURS)]
    pub job_ttl_hours: f64,
    #[arg(long, env = "MAX_UPLOAD_MB", default_value_t = config::DEFAULT_MAX_UPLOAD_MB)]
    pub max_upload_mb: usize,
    #[arg(long, env = "WORKERS")]
    pub workers: Option<usize>,
    #[arg(long, env = "STATIC_DIR")]
    pub static_dir: Option<PathBuf>,
}

impl ServeArgs {
    pub fn to_config(&self) -> ServiceConfig {
        let defaults = ServiceConfig::default();
        ServiceConfig {
            port: self.port,
            workdir: self.workdir.clone().unwrap_or(defaults.workdir),
            job_ttl: config::ttl_from_hours(self.job_ttl_hours),
            max_upload_bytes: self.max_upload_mb.saturating_mul(1 << 20),
            workers: self.workers.unwrap_or(defaults.workers),
            static_dir: self.static_dir.clone(),
        }
    }
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub exit: u8,
    pub message: String,
}

impl Failure {
    fn io(path: &Path, err: std::io::Error) -> Self {
        Self {
            exit: EXIT_IO,
            message: format!("{}: {err}", path.display()),
        }
    }

    fn pipeline(err: &Error) -> Self {
        let exit = match err {
            Error::Raster(_) => EXIT_RASTER,
            Error::Metrics(_) => EXIT_METRICS,
            _ => EXIT_IO,
        };
        Self {
            exit,
            message: format!("{}: {err}", err.code()),
        }
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.exit)
        }
    }
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Info { file } => info(&file),
        Command::Convert { input, output } => {
            let bytes = read(&input)?;
            let out = reorient_file(&bytes).map_err(|e| Failure::pipeline(&e.into()))?;
            write(&output, &out)
        }
        Command::Mask(args) => mask(&args),
        Command::Metrics { a, b, json } => metrics(&a, &b, json.as_deref()),
        Command::Serve(args) => serve(&args),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::io(path, e))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| Failure::io(path, e))
}

fn info(path: &Path) -> Result<(), Failure> {
    let doc = read_nrrd(&read(path)?).map_err(|e| Failure::pipeline(&e.into()))?;
    let g = doc.volume.geometry();
    let join = |v: [f64; 3]| v.map(|x| format!("{x}")).join(" ");
    let [nx, ny, nz] = g.sizes();
    println!("sizes: {nx} {ny} {nz}");
    println!("origin: {}", join(g.origin()));
    let dirs: Vec<String> = g
        .directions()
        .iter()
        .map(|d| format!("({})", join(*d)))
        .collect();
    println!("directions: {}", dirs.join(" "));
    println!("spacing: {}", join(g.spacing()));
    println!("basis: {}", g.basis());
    println!("type: {}", doc.volume.scalar_type().name());
    println!("encoding: {}", doc.header.encoding.name());
    for note in &doc.diagnostics {
        println!("note: {note}");
    }
    Ok(())
}

fn mask(args: &MaskArgs) -> Result<(), Failure> {
    let vtk = read_text(&args.contours)?;
    let meta = read_text(&args.meta)?;
    let (_, set) = load_contours(&vtk, &meta).map_err(|e| Failure::pipeline(&e))?;
    let options = RasterOptions {
        lenient: args.lenient,
        foreground: args.fg_value,
        ..RasterOptions::default()
    };
    let stderr = |p: u8| eprintln!("progress {p}");
    let sink: &dyn ProgressSink = if args.progress { &stderr } else { &NoProgress };
    let mask = rasterize(&set, sink, &options).map_err(|e| Failure::pipeline(&e.into()))?;
    write(&args.output, &encode_mask(&mask))
}

fn metrics(a: &Path, b: &Path, json: Option<&Path>) -> Result<(), Failure> {
    let load = |p: &Path| load_mask(&read(p)?).map_err(|e| Failure::pipeline(&e));
    let (ma, mb) = (load(a)?, load(b)?);
    let report = build_report(&ma, &mb).map_err(|e| Failure::pipeline(&e.into()))?;
    print!("{}", render_report(&report, ReportFormat::Text));
    if let Some(path) = json {
        write(path, render_report(&report, ReportFormat::Json).as_bytes())?;
    }
    Ok(())
}

fn serve(args: &ServeArgs) -> Result<(), Failure> {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .init();
    let config = args.to_config();
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure {
        exit: EXIT_IO,
        message: e.to_string(),
    })?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(("0.0.0.0", config.port))
            .await
            .map_err(|e| Failure {
                exit: EXIT_IO,
                message: format!("cannot bind port {}: {e}", config.port),
            })?;
        crate::serve(config, listener).await.map_err(|e| Failure {
            exit: EXIT_IO,
            message: e.to_string(),
        })
    })
}
