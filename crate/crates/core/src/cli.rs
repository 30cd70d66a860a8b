//! The `mirrorscene` command line.
//!
//! Data goes to stdout (JSON reports, output paths), logs to stderr.
//! Exit codes: 0 success, 1 bad configuration, input or failed validation,
//! 2 filesystem errors.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use log::info;
use serde_json::json;

use crate::assets::Catalog;
use crate::dataset::{contact_sheet, evaluate_metrics, generate, validate, GenerationConfig};
use crate::error::{Error, Result};
use crate::metrics::oracle_match;
use crate::render::{encode_passes, render, render_reflection_oracle, PreparedScene};
use crate::scene::SceneSpec;

#[derive(Debug, Parser)]
#[command(name = "mirrorscene", version, about = "Planar-mirror scene dataset generator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a dataset of rendered mirror scenes.
    Generate(GenerateArgs),
    /// Render the views of one scene.json together with its reflection oracle.
    RenderOne(RenderOneArgs),
    /// Re-check a finished dataset; prints a JSON report.
    Validate(ValidateArgs),
    /// Masked-region PSNR and SSIM per sample and averaged; prints JSON.
    Metrics(MetricsArgs),
    /// Write a grid of pass thumbnails for a few samples.
    ContactSheet(ContactSheetArgs),
}

/// Generation knobs shared by `generate` and `render-one`. Flags override
/// values from `--config`.
#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// TOML file with GenerationConfig fields.
    #[arg(long, value_name = "TOML")]
    pub config: Option<PathBuf>,
    /// Global seed of the dataset.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Catalog JSON or directory containing catalog.json.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    /// Square image side in pixels.
    #[arg(long)]
    pub resolution: Option<u32>,
    /// Samples per pixel (a perfect square).
    #[arg(long)]
    pub spp: Option<u32>,
    /// Area-light samples per shading point.
    #[arg(long)]
    pub shadow_samples: Option<u32>,
    /// Worker threads; all logical cores by default.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub common: ConfigArgs,
    /// Number of scenes to attempt.
    #[arg(long)]
    pub scenes: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Pairing table JSON.
    #[arg(long)]
    pub pairing: Option<PathBuf>,
    /// Probability that a scene holds a pair of objects.
    #[arg(long)]
    pub multi_object_prob: Option<f64>,
    /// Only lower floating objects when grounding.
    #[arg(long)]
    pub strict_paper_grounding: bool,
}

#[derive(Debug, Args)]
pub struct RenderOneArgs {
    #[command(flatten)]
    pub common: ConfigArgs,
    /// Scene file to render.
    #[arg(long)]
    pub scene: PathBuf,
    /// Output directory for passes and oracle images.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// manifest.jsonl or the dataset directory.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Catalog to use instead of the one recorded in the manifest.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    /// Accepted for uniformity; validation draws no random numbers.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; all logical cores by default.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// manifest.jsonl or the dataset directory.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Directory of predicted images laid out like the dataset; without it,
    /// renders are compared with the reflection oracle.
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    /// Catalog to use instead of the one recorded in the manifest.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    /// Accepted for uniformity; metrics draw no random numbers.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; all logical cores by default.
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ContactSheetArgs {
    /// manifest.jsonl or the dataset directory.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Output PNG.
    #[arg(long)]
    pub out: PathBuf,
    /// Number of sample rows.
    #[arg(long, default_value_t = 4)]
    pub rows: usize,
    /// Seed of the row selection.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<GenerationConfig> {
        let mut c = match &self.config {
            Some(p) => GenerationConfig::load(p)?,
            None => GenerationConfig::default(),
        };
        if let Some(v) = self.seed {
            c.global_seed = v;
        }
        if let Some(v) = &self.catalog {
            c.catalog = Some(v.clone());
        }
        if let Some(v) = self.resolution {
            c.resolution = v;
        }
        if let Some(v) = self.spp {
            c.samples_per_pixel = v;
        }
        if let Some(v) = self.shadow_samples {
            c.shadow_samples = v;
        }
        if let Some(v) = self.workers {
            c.workers = Some(v);
        }
        Ok(c)
    }
}

impl GenerateArgs {
    /// The effective configuration: defaults, then `--config`, then flags.
    pub fn resolve(&self) -> Result<GenerationConfig> {
        let mut c = self.common.resolve()?;
        if let Some(v) = self.scenes {
            c.num_scenes = v;
        }
        if let Some(v) = &self.out {
            c.out_dir = v.clone();
        }
        if let Some(v) = &self.pairing {
            c.pairing = Some(v.clone());
        }
        if let Some(v) = self.multi_object_prob {
            c.multi_object_prob = v;
        }
        if self.strict_paper_grounding {
            c.strict_paper_grounding = true;
        }
        c.validate()?;
        Ok(c)
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::json("encoding report", e))?;
    println!("{text}");
    Ok(())
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    if workers == Some(0) {
        return Err(Error::FatalConfig("workers must be at least 1".into()));
    }
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        b = b.num_threads(n);
    }
    b.build()
        .map_err(|e| Error::FatalConfig(format!("cannot start worker pool: {e}")))?
        .install(f)
}

fn cmd_generate(args: &GenerateArgs) -> Result<i32> {
    let config = args.resolve()?;
    let manifest = generate(&config)?;
    let path = manifest.root.join(crate::dataset::MANIFEST_FILE);
    info!(
        "{} scenes written, {} skipped",
        manifest.header.scenes_written,
        manifest.header.skipped.len()
    );
    println!("{}", path.display());
    Ok(0)
}

fn cmd_render_one(args: &RenderOneArgs) -> Result<i32> {
    let mut config = args.common.resolve()?;
    let text =
        std::fs::read_to_string(&args.scene).map_err(|e| Error::io(format!("reading {}", args.scene.display()), e))?;
    let spec = SceneSpec::from_json(&text)?;
    if args.common.resolution.is_none() && args.common.config.is_none() {
        config.resolution = spec.resolution;
    }
    config.validate()?;
    let settings = config.render_settings();
    let catalog_path = config.catalog_path();
    let catalog = Catalog::load(&catalog_path)
        .map_err(|e| Error::FatalConfig(format!("cannot load catalog {}: {e}", catalog_path.display())))?;
    let scene = PreparedScene::new(&spec, &catalog)?;
    let mut views = Vec::new();
    with_workers(config.workers, || {
        for (slot, view) in spec.cameras.iter().enumerate() {
            let base = format!("view{slot}");
            let passes = render(&scene, view, &settings);
            let files = encode_passes(&passes, &args.out, &base)?;
            let oracle = render_reflection_oracle(&scene, view, &settings)?;
            let oracle_path = args.out.join(format!("{base}_oracle.png"));
            let img = image::RgbImage::from_raw(
                settings.width,
                settings.height,
                oracle.rgb.iter().flatten().copied().collect(),
            )
            .expect("oracle size");
            img.save_with_format(&oracle_path, image::ImageFormat::Png)
                .map_err(|e| Error::image(format!("writing {}", oracle_path.display()), e))?;
            let m = oracle_match(&passes, &oracle.rgb, &oracle.valid).ok();
            views.push(json!({
                "view": slot,
                "rig_index": view.index,
                "match_rate": m.map(|m| m.match_rate),
                "max_error": m.map(|m| m.max_error),
                "files": files.paths.iter().chain([&oracle_path]).map(|p| p.display().to_string()).collect::<Vec<_>>(),
            }));
        }
        Ok(())
    })?;
    print_json(&json!({ "scene_id": spec.scene_id, "resolution": settings.width, "views": views }))?;
    Ok(0)
}

fn cmd_validate(args: &ValidateArgs) -> Result<i32> {
    let report = with_workers(args.workers, || validate(&args.manifest, args.catalog.as_deref()))?;
    print_json(&report)?;
    for f in &report.failures {
        log::error!("{} failed for scene {}: {}", f.check, f.scene_id, f.detail);
    }
    Ok(if report.ok { 0 } else { 1 })
}

fn cmd_metrics(args: &MetricsArgs) -> Result<i32> {
    let report = with_workers(args.workers, || {
        evaluate_metrics(&args.manifest, args.predictions.as_deref(), args.catalog.as_deref())
    })?;
    print_json(&report)?;
    Ok(0)
}

fn cmd_contact_sheet(args: &ContactSheetArgs) -> Result<i32> {
    contact_sheet(&args.manifest, &args.out, args.rows, args.seed)?;
    println!("{}", args.out.display());
    Ok(0)
}

/// Exit code for an error: 2 for filesystem failures, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_io() {
        2
    } else {
        1
    }
}

pub fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::RenderOne(a) => cmd_render_one(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::ContactSheet(a) => cmd_contact_sheet(a),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Usage errors exit 1; `--help` and `--version` exit 0.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            log::error!("{e}");
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
