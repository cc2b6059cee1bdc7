//! Command implementations behind the `invctl` binary.
//!
//! Exit codes: 0 on success, 1 on runtime errors, 2 on usage errors.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::dataset::{decimate, load_dataset, save_dataset, segment_and_split, Dataset, Split};
use crate::error::{Error, Result};
use crate::eval::{evaluate, resynthesize, write_comparison_wavs, write_report, EvalReport};
use crate::gestures::{export_gesture, import_gesture, random_gesture, GestureSpec};
use crate::nn::{load_checkpoint, save_checkpoint, train_with, write_log, AdamConfig, TrainConfig};
use crate::physics::{build_preset, ModelPreset};
use crate::{wav, DECIMATION};

#[derive(Debug, Parser)]
#[command(name = "invctl", version, about = "Render gestures into sound and learn to invert it")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a gesture WAV through a synthesizer.
    Synth(SynthArgs),
    /// Write a seeded random gesture as a mono WAV.
    GenGestures(GenGesturesArgs),
    /// Render, decimate, segment and split a gesture corpus.
    BuildDataset(BuildDatasetArgs),
    /// Train an LSTM on a dataset.
    Train(TrainArgs),
    /// Score a checkpoint on a dataset split.
    Eval(EvalArgs),
    /// Render one predicted gesture and write comparison files.
    Resynth(ResynthArgs),
}

fn parse_preset(s: &str) -> std::result::Result<ModelPreset, String> {
    s.parse::<ModelPreset>().map_err(|_| {
        let names: Vec<&str> = ModelPreset::ALL.iter().map(|p| p.name()).collect();
        format!("unknown preset {s:?}; expected one of {}", names.join(", "))
    })
}

fn positive_seconds(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("duration must be positive, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_split(s: &str) -> std::result::Result<Split, String> {
    match s {
        "train" => Ok(Split::Train),
        "val" => Ok(Split::Val),
        "test" => Ok(Split::Test),
        other => Err(format!("unknown split {other:?}; expected train, val or test")),
    }
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_parser = parse_preset)]
    pub preset: ModelPreset,
    #[arg(long)]
    pub gesture: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenGesturesArgs {
    #[arg(long, default_value_t = GestureSpec::DEFAULT_DURATION, value_parser = positive_seconds)]
    pub seconds: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = GestureSpec::DEFAULT_CUTOFF, value_parser = positive_seconds)]
    pub cutoff: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BuildDatasetArgs {
    #[arg(long, value_parser = parse_preset)]
    pub preset: ModelPreset,
    #[arg(long)]
    pub gesture: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value_t = 64)]
    pub epochs: usize,
    #[arg(long, default_value_t = 98)]
    pub batch: usize,
    #[arg(long, default_value_t = 2)]
    pub layers: usize,
    #[arg(long, default_value_t = 64)]
    pub units: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    /// 1 = sequential.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long)]
    pub ckpt: PathBuf,
    #[arg(long)]
    pub log: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub ckpt: PathBuf,
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long, default_value = "test", value_parser = parse_split)]
    pub split: Split,
}

#[derive(Debug, Args)]
pub struct ResynthArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub ckpt: PathBuf,
    /// Defaults to the preset recorded in the dataset.
    #[arg(long, value_parser = parse_preset)]
    pub preset: Option<ModelPreset>,
    #[arg(long)]
    pub index: usize,
    #[arg(long)]
    pub out: PathBuf,
}

fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{} is not a readable file", path.display())))
    }
}

fn require_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => Err(Error::InvalidArgument(
            format!("output directory {} does not exist", dir.display()),
        )),
        _ => Ok(()),
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth(a) => cmd_synth(&a),
        Command::GenGestures(a) => cmd_gen_gestures(&a),
        Command::BuildDataset(a) => cmd_build_dataset(&a).map(|_| ()),
        Command::Train(a) => cmd_train(&a),
        Command::Eval(a) => cmd_eval(&a).map(|_| ()),
        Command::Resynth(a) => cmd_resynth(&a),
    }
}

pub fn cmd_synth(args: &SynthArgs) -> Result<()> {
    require_parent(&args.out)?;
    let gesture = import_gesture(&args.gesture)?;
    let audio = build_preset(args.preset).render(gesture.samples())?;
    wav::write_mono(&args.out, &audio)?;
    println!(
        "rendered {:.2} s through {} -> {}",
        gesture.duration(),
        args.preset,
        args.out.display()
    );
    Ok(())
}

pub fn cmd_gen_gestures(args: &GenGesturesArgs) -> Result<()> {
    require_parent(&args.out)?;
    let spec = GestureSpec {
        duration: args.seconds,
        seed: args.seed,
        smoothness_cutoff: args.cutoff,
    };
    let gesture = random_gesture(&spec);
    export_gesture(&args.out, &gesture)?;
    println!("wrote {:.2} s gesture -> {}", gesture.duration(), args.out.display());
    Ok(())
}

/// Renders the gesture, decimates audio and gesture alike, then segments and splits.
pub fn build_dataset(preset: ModelPreset, gesture: &[f64], seed: u64) -> Result<Dataset> {
    let audio = build_preset(preset).render(gesture)?;
    let audio = decimate(&audio, DECIMATION)?;
    let gesture = decimate(gesture, DECIMATION)?;
    segment_and_split(&audio, &gesture, preset.name(), seed)
}

pub fn cmd_build_dataset(args: &BuildDatasetArgs) -> Result<Dataset> {
    require_parent(&args.out)?;
    let gesture = import_gesture(&args.gesture)?;
    let dataset = build_dataset(args.preset, gesture.samples(), args.seed)?;
    save_dataset(&dataset, &args.out)?;
    let [train, val, test] = dataset.counts();
    println!(
        "{} segments (train {train}, val {val}, test {test}) -> {}",
        dataset.len(),
        args.out.display()
    );
    Ok(dataset)
}

pub fn cmd_train(args: &TrainArgs) -> Result<()> {
    require_file(&args.data)?;
    require_parent(&args.ckpt)?;
    require_parent(&args.log)?;
    let dataset = load_dataset(&args.data)?;
    let config = TrainConfig {
        epochs: args.epochs,
        batch_size: args.batch,
        seed: args.seed,
        layers: args.layers,
        units: args.units,
        adam: AdamConfig {
            learning_rate: args.lr,
            ..AdamConfig::default()
        },
        threads: args.threads,
    };
    let outcome = train_with(&dataset, &config, |e| {
        println!(
            "epoch {:3}  train {:.6}  val {:.6}  ({:.1} s)",
            e.epoch, e.train_mse, e.val_mse, e.seconds
        )
    })?;
    save_checkpoint(&args.ckpt, &outcome.stack, &outcome.adam)?;
    write_log(&args.log, &outcome.log)?;
    println!("best validation epoch: {}", outcome.best_epoch);
    Ok(())
}

pub fn cmd_eval(args: &EvalArgs) -> Result<EvalReport> {
    require_file(&args.data)?;
    require_file(&args.ckpt)?;
    require_parent(&args.report)?;
    let dataset = load_dataset(&args.data)?;
    let (stack, _) = load_checkpoint(&args.ckpt)?;
    let report = evaluate(&stack, &dataset, args.split)?;
    write_report(&args.report, &report)?;
    println!(
        "{} {}: mean NAE {:.4} over {} segments ({} with zero denominator), MSE {:.6} vs baseline {:.6}",
        report.preset,
        args.split.name(),
        report.mean_nae,
        report.segments.len(),
        report.zero_denominator,
        report.mse,
        report.baseline_mse
    );
    Ok(report)
}

pub fn cmd_resynth(args: &ResynthArgs) -> Result<()> {
    require_file(&args.data)?;
    require_file(&args.ckpt)?;
    let dataset = load_dataset(&args.data)?;
    let preset = match args.preset {
        Some(p) => p,
        None => dataset
            .preset()
            .ok_or_else(|| Error::UnknownPreset(dataset.preset.clone()))?,
    };
    let (stack, _) = load_checkpoint(&args.ckpt)?;
    let resynth = resynthesize(&stack, &dataset, Split::Test, args.index, preset)?;
    write_comparison_wavs(&resynth, &args.out)?;
    println!(
        "test segment {} through {preset} -> {}",
        args.index,
        args.out.display()
    );
    Ok(())
}
