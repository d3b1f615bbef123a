use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ringfilter::commands::{self, Family, MeasurePath};
use ringfilter::config::RunConfig;
use ringfilter::formats::{json::to_string_f17, read_text};
use ringfilter::Result;

#[derive(Parser)]
#[command(name = "ringfilter", version, about = "Ring-sampled imageless detection pipeline")]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the config output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rasterize the configured scene to scene.mwgrid.
    Scene,
    /// Measure one ring of the scene to ring.ringcsv.
    Measure {
        #[arg(long, default_value = "analytic", value_parser = ["analytic", "oracle"])]
        path: String,
    },
    /// Build dataset.featcsv from synthetic or imported rings.
    Dataset,
    /// Train one classifier on the whole dataset to model_<family>.json.
    Train {
        #[arg(long, value_parser = ["thr", "knn", "svm"])]
        classifier: String,
    },
    /// Monte-Carlo evaluation to mc_report.csv and mc_report.json.
    Eval {
        #[arg(long, value_parser = ["thr", "knn", "svm"])]
        classifier: Option<String>,
        #[arg(long)]
        iters: Option<usize>,
    },
    /// Reconstruct images from the ring and from a dense mask.
    Reconstruct,
    /// SSIM between two MWGRID images.
    Ssim {
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long)]
        test: Option<PathBuf>,
    },
    /// timing.json, roc.csv and contours.csv.
    Report,
    /// Every stage in order.
    Pipeline {
        #[arg(long)]
        iters: Option<usize>,
    },
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let text = match &cli.config {
        Some(p) => read_text(p)?,
        None => "{}".to_string(),
    };
    RunConfig::from_json(&text, cli.seed, cli.out.as_deref())
}

fn paths(ps: &[PathBuf]) -> Result<String> {
    let names: Vec<String> = ps.iter().map(|p| p.display().to_string()).collect();
    Ok(serde_json::json!({ "outputs": names }).to_string())
}

fn ssim_paths(cli: &Cli, reference: &Option<PathBuf>, test: &Option<PathBuf>) -> Result<(PathBuf, PathBuf, Option<PathBuf>)> {
    if let (Some(r), Some(t)) = (reference, test) {
        return Ok((r.clone(), t.clone(), cli.out.clone()));
    }
    let cfg = load(cli)?;
    let dir = &cfg.output_dir;
    Ok((
        reference.clone().unwrap_or_else(|| dir.join(commands::SCENE_FILE)),
        test.clone().unwrap_or_else(|| dir.join(commands::RECON_FILE)),
        Some(dir.clone()),
    ))
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Scene => paths(&[commands::cmd_scene(&load(cli)?)?]),
        Command::Measure { path } => {
            let p: MeasurePath = path.parse()?;
            paths(&[commands::cmd_measure(&load(cli)?, p)?])
        }
        Command::Dataset => paths(&[commands::cmd_dataset(&load(cli)?)?]),
        Command::Train { classifier } => {
            let f: Family = classifier.parse()?;
            paths(&[commands::cmd_train(&load(cli)?, f)?])
        }
        Command::Eval { classifier, iters } => {
            let f = classifier.as_deref().map(str::parse::<Family>).transpose()?;
            let (a, b) = commands::cmd_eval(&load(cli)?, f, *iters)?;
            paths(&[a, b])
        }
        Command::Reconstruct => {
            let (a, b) = commands::cmd_reconstruct(&load(cli)?)?;
            paths(&[a, b])
        }
        Command::Ssim { reference, test } => {
            let (r, t, out) = ssim_paths(cli, reference, test)?;
            to_string_f17(&commands::cmd_ssim(&r, &t, out.as_deref())?)
        }
        Command::Report => paths(&commands::cmd_report(&load(cli)?)?),
        Command::Pipeline { iters } => {
            let cfg = load(cli)?;
            let mut out = vec![
                commands::cmd_scene(&cfg)?,
                commands::cmd_measure(&cfg, MeasurePath::Analytic)?,
                commands::cmd_dataset(&cfg)?,
            ];
            for f in [Family::Threshold, Family::Knn, Family::Svm] {
                if cfg.classifiers.iter().any(|s| f.matches(s)) {
                    out.push(commands::cmd_train(&cfg, f)?);
                }
            }
            let (a, b) = commands::cmd_eval(&cfg, None, *iters)?;
            let (c, d) = commands::cmd_reconstruct(&cfg)?;
            out.extend([a, b, c, d]);
            let dir: &Path = &cfg.output_dir;
            commands::cmd_ssim(&dir.join(commands::SCENE_FILE), &dir.join(commands::RECON_FILE), Some(dir))?;
            out.push(dir.join(commands::SSIM_FILE));
            out.extend(commands::cmd_report(&cfg)?);
            paths(&out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn };
    env_logger::Builder::new().filter_level(level).init();
    match run(&cli) {
        Ok(s) => {
            println!("{s}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", commands::error_json(&e));
            ExitCode::from(commands::exit_code(&e) as u8)
        }
    }
}
