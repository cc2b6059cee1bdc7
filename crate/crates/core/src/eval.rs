//! Scoring predicted gestures and turning them back into sound.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::dataset::{upsample, Dataset, SegmentPair, Split};
use crate::error::{Error, Result};
use crate::gestures::clamp_position;
use crate::nn::{segment_input, segment_target, LstmStack};
use crate::physics::{build_preset, ModelPreset};
use crate::{wav, DECIMATION, GESTURE_LIMIT, SAMPLE_RATE};

/// `mean|Y - Ŷ| / mean|Ŷ|`. The denominator is the prediction, not the target.
pub fn normalized_absolute_error(targets: &[f64], predictions: &[f64]) -> Result<f64> {
    check_lengths(targets, predictions)?;
    let n = targets.len() as f64;
    let numerator = targets
        .iter()
        .zip(predictions)
        .map(|(y, p)| (y - p).abs())
        .sum::<f64>()
        / n;
    let denominator = predictions.iter().map(|p| p.abs()).sum::<f64>() / n;
    if denominator == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(numerator / denominator)
}

/// Same numerator, normalized by the targets instead.
pub fn target_normalized_error(targets: &[f64], predictions: &[f64]) -> Result<f64> {
    normalized_absolute_error(predictions, targets)
}

fn check_lengths(a: &[f64], b: &[f64]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::EmptyInput);
    }
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} targets vs {} predictions",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SegmentScore {
    pub segment: usize,
    /// `None` when every prediction was zero.
    pub nae: Option<f64>,
    pub nae_target_norm: Option<f64>,
    /// In normalized gesture units (metres / 0.05).
    pub mse: f64,
    pub baseline_mse: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub preset: String,
    pub split: Split,
    pub segments: Vec<SegmentScore>,
    /// Mean NAE over segments with a defined NAE.
    pub mean_nae: f64,
    pub mean_nae_target_norm: f64,
    pub mse: f64,
    /// MSE of always predicting the mean training gesture.
    pub baseline_mse: f64,
    pub zero_denominator: usize,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

fn mse(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64
}

/// Scores `predict` on every segment of `split`. Predictions are in
/// normalized gesture units; NAE is computed after rescaling to metres.
pub fn evaluate_with(
    dataset: &Dataset,
    split: Split,
    mut predict: impl FnMut(&SegmentPair) -> Vec<f64>,
) -> Result<EvalReport> {
    let segs = dataset.split(split);
    if segs.is_empty() {
        return Err(Error::InvalidArgument(format!("{} split is empty", split.name())));
    }
    let train = dataset.split(Split::Train);
    let baseline = if train.is_empty() {
        0.0
    } else {
        mean(train.iter().flat_map(segment_target))
    };

    let mut scores = Vec::with_capacity(segs.len());
    for (index, seg) in segs.iter().enumerate() {
        let target = segment_target(seg);
        let pred = predict(seg);
        check_lengths(&target, &pred)?;
        let metres = |v: &[f64]| v.iter().map(|x| x * GESTURE_LIMIT).collect::<Vec<_>>();
        let (y, y_hat) = (metres(&target), metres(&pred));
        let nae = match normalized_absolute_error(&y, &y_hat) {
            Ok(v) => Some(v),
            Err(Error::ZeroDenominator) => None,
            Err(e) => return Err(e),
        };
        scores.push(SegmentScore {
            segment: index,
            nae,
            nae_target_norm: target_normalized_error(&y, &y_hat).ok(),
            mse: mse(&pred, &target),
            baseline_mse: target.iter().map(|t| (t - baseline).powi(2)).sum::<f64>()
                / target.len() as f64,
        });
    }
    Ok(EvalReport {
        preset: dataset.preset.clone(),
        split,
        mean_nae: mean(scores.iter().filter_map(|s| s.nae)),
        mean_nae_target_norm: mean(scores.iter().filter_map(|s| s.nae_target_norm)),
        mse: mean(scores.iter().map(|s| s.mse)),
        baseline_mse: mean(scores.iter().map(|s| s.baseline_mse)),
        zero_denominator: scores.iter().filter(|s| s.nae.is_none()).count(),
        segments: scores,
    })
}

pub fn evaluate(stack: &LstmStack, dataset: &Dataset, split: Split) -> Result<EvalReport> {
    evaluate_with(dataset, split, |seg| stack.predict(&segment_input(seg)))
}

pub const REPORT_HEADER: &str = "segment,nae,nae_target_norm,mse,baseline_mse,zero_denominator";

pub fn write_report(path: impl AsRef<Path>, report: &EvalReport) -> Result<()> {
    let opt = |v: Option<f64>| v.map_or_else(String::new, |x| format!("{x:e}"));
    let mut w = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{REPORT_HEADER}")?;
    for s in &report.segments {
        writeln!(
            w,
            "{},{},{},{:e},{:e},{}",
            s.segment,
            opt(s.nae),
            opt(s.nae_target_norm),
            s.mse,
            s.baseline_mse,
            u8::from(s.nae.is_none())
        )?;
    }
    writeln!(
        w,
        "mean,{:e},{:e},{:e},{:e},{}",
        report.mean_nae,
        report.mean_nae_target_norm,
        report.mse,
        report.baseline_mse,
        report.zero_denominator
    )?;
    w.flush()?;
    Ok(())
}

/// Full-rate signals for one resynthesized segment.
#[derive(Clone, Debug, PartialEq)]
pub struct Resynthesis {
    /// Predicted gesture in metres, clamped to the gesture range.
    pub predicted_gesture: Vec<f64>,
    /// The predicted gesture rendered through the synthesizer.
    pub audio: Vec<f64>,
    /// The stored gesture, upsampled.
    pub true_gesture: Vec<f64>,
    /// The stored audio, upsampled.
    pub target_audio: Vec<f64>,
}

/// Upsamples a decimated gesture (metres) to 44100 Hz, clamps it and renders
/// it through a fresh instance of `preset`.
pub fn render_decimated_gesture(gesture: &[f64], preset: ModelPreset) -> Result<(Vec<f64>, Vec<f64>)> {
    let full: Vec<f64> = upsample(gesture, DECIMATION)?
        .into_iter()
        .map(clamp_position)
        .collect();
    let audio = build_preset(preset).render(&full)?;
    Ok((full, audio))
}

/// Runs the network on one segment of `split` and renders its predicted
/// gesture.
pub fn resynthesize(
    stack: &LstmStack,
    dataset: &Dataset,
    split: Split,
    index: usize,
    preset: ModelPreset,
) -> Result<Resynthesis> {
    let segs = dataset.split(split);
    let seg = segs.get(index).ok_or(Error::IndexOutOfRange {
        index,
        len: segs.len(),
    })?;
    let predicted: Vec<f64> = stack
        .predict(&segment_input(seg))
        .into_iter()
        .map(|v| v * GESTURE_LIMIT)
        .collect();
    resynthesize_from(seg, &predicted, preset)
}

/// Renders an arbitrary decimated gesture (metres) against a stored segment.
pub fn resynthesize_from(seg: &SegmentPair, gesture: &[f64], preset: ModelPreset) -> Result<Resynthesis> {
    let (predicted_gesture, audio) = render_decimated_gesture(gesture, preset)?;
    let widen = |v: &[f32]| v.iter().map(|&x| f64::from(x)).collect::<Vec<_>>();
    Ok(Resynthesis {
        predicted_gesture,
        audio,
        true_gesture: upsample(&widen(&seg.gesture), DECIMATION)?,
        target_audio: upsample(&widen(&seg.audio), DECIMATION)?,
    })
}

/// Writes `gesture_vs_audio.wav` (left: predicted gesture at 5 cm = full
/// scale, right: target audio), `resynth_vs_target.wav` (left: resynthesized
/// audio, right: target audio) and `gesture.csv` with columns `t,y,y_hat`.
pub fn write_comparison_wavs(resynth: &Resynthesis, out_dir: impl AsRef<Path>) -> Result<()> {
    let dir = out_dir.as_ref();
    fs::create_dir_all(dir)?;
    let scaled: Vec<f64> = resynth
        .predicted_gesture
        .iter()
        .map(|g| g / GESTURE_LIMIT)
        .collect();
    wav::write_stereo(dir.join("gesture_vs_audio.wav"), &scaled, &resynth.target_audio)?;
    wav::write_stereo(dir.join("resynth_vs_target.wav"), &resynth.audio, &resynth.target_audio)?;

    let mut w = std::io::BufWriter::new(fs::File::create(dir.join("gesture.csv"))?);
    writeln!(w, "t,y,y_hat")?;
    for (i, (y, y_hat)) in resynth
        .true_gesture
        .iter()
        .zip(&resynth.predicted_gesture)
        .enumerate()
    {
        writeln!(w, "{:.8},{:e},{:e}", i as f64 / SAMPLE_RATE, y, y_hat)?;
    }
    w.flush()?;
    Ok(())
}

/// RMS of consecutive non-overlapping frames; a trailing partial frame is dropped.
pub fn rms_envelope(signal: &[f64], frame: usize) -> Vec<f64> {
    signal
        .chunks_exact(frame)
        .map(|c| (c.iter().map(|v| v * v).sum::<f64>() / frame as f64).sqrt())
        .collect()
}

/// Pearson correlation, `None` if either input is constant.
pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len().min(b.len()) as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        None
    } else {
        Some(sab / (saa * sbb).sqrt())
    }
}
