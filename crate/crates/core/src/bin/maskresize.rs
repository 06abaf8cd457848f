use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use maskresize::harness::{self, io, DataSource, ExperimentConfig, OutputFormat, Strategy};
use maskresize::interp::{resize_bicubic, resize_bilinear, resize_nn};
use maskresize::maskproc::mask_resize;
use maskresize::metrics::{self, BfTolerance};
use maskresize::{CubicKernel, Error, LabelSet, MaskResizeStrategy, ResizeSpec, Result, Size};

/// Label-preserving mask resizing, segmentation metrics and strategy comparison
#[derive(Parser, Debug)]
#[command(name = "maskresize", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Resize one 8-bit grayscale image or mask
    Resize(ResizeArgs),
    /// Run the round-trip comparison and write a report
    Compare(CompareArgs),
    /// Score a predicted mask against a ground-truth mask
    Metrics(MetricsArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ResizeStrategy {
    /// Nearest neighbour
    Nn,
    /// Plain bilinear; may create values outside the label set
    Bilinear,
    /// Plain bicubic; may create values outside the label set
    Bicubic,
    /// Per-class bicubic with threshold, median filter and subtraction
    BicProcessed,
    /// Per-class bilinear with threshold, median filter and subtraction
    BilProcessed,
}

#[derive(Args, Debug)]
struct ResizeArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long = "out", value_name = "FILE")]
    output: PathBuf,
    #[arg(long)]
    width: usize,
    #[arg(long)]
    height: usize,
    #[arg(long, value_enum)]
    strategy: ResizeStrategy,
    /// Median window for the processed strategies (odd, >= 3)
    #[arg(long, default_value_t = MaskResizeStrategy::DEFAULT_MEDIAN_WINDOW)]
    median_window: usize,
    /// Threshold as a fraction of full scale for the processed strategies
    #[arg(long, default_value_t = MaskResizeStrategy::DEFAULT_THRESHOLD)]
    threshold: f64,
    /// Cubic kernel sharpness
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    cubic_a: f64,
    /// Admissible labels in priority order, background last
    #[arg(long, default_value = "255,128,0")]
    labels: LabelSet,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Flat key = value experiment config
    #[arg(long, value_name = "FILE", conflicts_with = "synthetic")]
    config: Option<PathBuf>,
    /// Use generated nested-ellipse masks instead of a dataset
    #[arg(long)]
    synthetic: bool,
    /// Number of synthetic shapes
    #[arg(long, default_value_t = 50)]
    shapes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Annotation resolution
    #[arg(long, value_name = "WxH")]
    source: Option<Size>,
    /// Comma-separated evaluation sizes
    #[arg(long, value_name = "WxH,...", value_delimiter = ',')]
    targets: Option<Vec<Size>>,
    /// Comma-separated strategy names, e.g. NN-NN,BIC-NN,BIC-BIC
    #[arg(long, value_delimiter = ',')]
    strategies: Option<Vec<Strategy>>,
    /// Boundary tolerance: a diagonal fraction, or pixels as `2px`
    #[arg(long)]
    bf_tol: Option<BfTolerance>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Report path; stdout if omitted
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args, Debug)]
struct MetricsArgs {
    #[arg(long, value_name = "FILE")]
    pred: PathBuf,
    #[arg(long, value_name = "FILE")]
    gt: PathBuf,
    /// Boundary tolerance in pixels (default: 0.75% of the diagonal)
    #[arg(long, value_name = "PX")]
    bf_tol: Option<f64>,
    #[arg(long, default_value = "255,128,0")]
    labels: LabelSet,
    /// Print JSON instead of a table
    #[arg(long)]
    json: bool,
}

fn resize(args: &ResizeArgs) -> Result<()> {
    let spec = ResizeSpec::new(Size::new(args.width, args.height)?);
    let kernel = CubicKernel::new(args.cubic_a);
    match args.strategy {
        ResizeStrategy::Nn | ResizeStrategy::Bilinear | ResizeStrategy::Bicubic => {
            let img = io::read_image(&args.input)?;
            let out = match args.strategy {
                ResizeStrategy::Nn => resize_nn(&img, &spec),
                ResizeStrategy::Bilinear => resize_bilinear(&img, &spec),
                _ => resize_bicubic(&img, &spec, kernel),
            };
            io::write_image(&args.output, &out)
        }
        ResizeStrategy::BicProcessed | ResizeStrategy::BilProcessed => {
            let mask = io::read_mask(&args.input, &args.labels)?;
            let strategy = match args.strategy {
                ResizeStrategy::BicProcessed => MaskResizeStrategy::bicubic().with_kernel(kernel),
                _ => MaskResizeStrategy::bilinear(),
            }
            .with_median_window(args.median_window)?
            .with_threshold(args.threshold)?;
            let out = mask_resize(&mask, &spec, &strategy)?;
            io::write_mask(&args.output, &out)
        }
    }
}

fn compare(args: &CompareArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None if args.synthetic => ExperimentConfig {
            data: DataSource::Synthetic {
                shapes: args.shapes,
            },
            seed: args.seed,
            ..ExperimentConfig::default()
        },
        None => {
            return Err(Error::InvalidInput(
                "compare needs --config <file> or --synthetic".into(),
            ))
        }
    };
    if let Some(s) = args.source {
        config.source_size = s;
    }
    if let Some(t) = &args.targets {
        config.target_sizes = t.clone();
    }
    if let Some(s) = &args.strategies {
        config.strategies = s.clone();
    }
    if let Some(t) = args.bf_tol {
        config.bf_tolerance = t;
    }
    if let Some(out) = &args.out {
        config.out = Some(out.clone());
    }
    let format = args
        .format
        .map(OutputFormat::from)
        .or_else(|| config.out.as_deref().and_then(OutputFormat::from_path))
        .unwrap_or(config.format);

    let threads = harness::threads_from_env()?;
    let report = harness::with_threads(threads, || harness::run_comparison(&config))?;
    match &config.out {
        Some(path) => {
            harness::emit_report(&report, format, path)?;
            log::info!("wrote {}", path.display());
        }
        None => print!("{}", report.render(format)),
    }
    Ok(())
}

fn show(score: metrics::Score) -> String {
    harness::report::format_score(score)
}

fn metrics_cmd(args: &MetricsArgs) -> Result<()> {
    let pred = io::read_mask(&args.pred, &args.labels)?;
    let gt = io::read_mask(&args.gt, &args.labels)?;
    let tol = match args.bf_tol {
        Some(px) => BfTolerance::pixels(px)?,
        None => BfTolerance::default(),
    };
    let report = metrics::evaluate(&pred, &gt, tol)?;
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("metrics serialize")
        );
        return Ok(());
    }
    println!(
        "{:>6} {:>10} {:>10} {:>10}",
        "label", "accuracy", "iou", "bf"
    );
    for c in &report.classes {
        println!(
            "{:>6} {:>10} {:>10} {:>10}",
            c.label,
            show(c.accuracy),
            show(c.iou),
            show(c.bf)
        );
    }
    println!("global_accuracy {}", show(Some(report.global_accuracy)));
    println!("mean_accuracy   {}", show(report.mean_accuracy));
    println!("mean_iou        {}", show(report.mean_iou));
    println!("weighted_iou    {}", show(report.weighted_iou));
    println!("mean_bf         {}", show(report.mean_bf));
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Resize(args) => resize(args),
        Command::Compare(args) => compare(args),
        Command::Metrics(args) => metrics_cmd(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
