//! Gesture corpora: seeded random gestures and imported recordings.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::wav;
use crate::{GESTURE_LIMIT, SAMPLE_RATE};

/// Hand position over time, in metres.
#[derive(Clone, Debug, PartialEq)]
pub struct GestureSignal {
    samples: Vec<f64>,
    sample_rate: f64,
}

impl GestureSignal {
    /// Wraps `samples`, clamping each into `[-0.05, 0.05]`.
    pub fn new(mut samples: Vec<f64>, sample_rate: f64) -> Self {
        for s in &mut samples {
            *s = clamp_position(*s);
        }
        Self { samples, sample_rate }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }
}

pub fn clamp_position(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(-GESTURE_LIMIT, GESTURE_LIMIT)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GestureSpec {
    /// Seconds.
    pub duration: f64,
    pub seed: u64,
    /// Hz; at least 99% of the signal energy sits below it.
    pub smoothness_cutoff: f64,
}

impl GestureSpec {
    pub const DEFAULT_CUTOFF: f64 = 8.0;
    /// Six minutes, the length of one recorded corpus.
    pub const DEFAULT_DURATION: f64 = 360.0;

    pub fn new(duration: f64, seed: u64) -> Self {
        Self {
            duration,
            seed,
            smoothness_cutoff: Self::DEFAULT_CUTOFF,
        }
    }
}

// Corner of the smoothing filter relative to the requested cutoff. A
// fourth-order Butterworth leaves about 9% of white-noise power above its
// corner but only ~0.1% above twice the corner.
const CORNER_RATIO: f64 = 0.5;
const WARMUP_SECONDS: f64 = 2.0;
const FILL_PERCENTILE: f64 = 0.99;

/// Lowpass biquad from the bilinear transform, direct form I.
#[derive(Clone, Debug)]
struct Biquad {
    b: [f64; 3],
    a: [f64; 2],
    x: [f64; 2],
    y: [f64; 2],
}

impl Biquad {
    fn lowpass(corner: f64, q: f64, sample_rate: f64) -> Self {
        let w0 = 2.0 * PI * corner / sample_rate;
        let alpha = w0.sin() / (2.0 * q);
        let cos = w0.cos();
        let a0 = 1.0 + alpha;
        let b1 = (1.0 - cos) / a0;
        Self {
            b: [b1 / 2.0, b1, b1 / 2.0],
            a: [-2.0 * cos / a0, (1.0 - alpha) / a0],
            x: [0.0; 2],
            y: [0.0; 2],
        }
    }

    fn process(&mut self, x: f64) -> f64 {
        let y = self.b[0] * x + self.b[1] * self.x[0] + self.b[2] * self.x[1]
            - self.a[0] * self.y[0]
            - self.a[1] * self.y[1];
        self.x = [x, self.x[0]];
        self.y = [y, self.y[0]];
        y
    }
}

/// Fourth-order Butterworth as two cascaded biquads.
fn butterworth4(corner: f64, sample_rate: f64) -> [Biquad; 2] {
    // Q of the two pole pairs: 1 / (2 cos(pi/8)) and 1 / (2 cos(3pi/8)).
    let q1 = 1.0 / (2.0 * (PI / 8.0).cos());
    let q2 = 1.0 / (2.0 * (3.0 * PI / 8.0).cos());
    [
        Biquad::lowpass(corner, q1, sample_rate),
        Biquad::lowpass(corner, q2, sample_rate),
    ]
}

/// A smooth random gesture at 44100 Hz.
///
/// Uniform white noise from [`SplitMix64`] is low-passed by a fourth-order
/// Butterworth with its corner at half the requested cutoff, rescaled so the
/// 99th percentile of `|x|` lands on 5 cm, then clamped to the range.
pub fn random_gesture(spec: &GestureSpec) -> GestureSignal {
    assert!(spec.duration > 0.0, "gesture duration must be positive");
    assert!(spec.smoothness_cutoff > 0.0, "smoothness cutoff must be positive");
    let len = (spec.duration * SAMPLE_RATE).round() as usize;
    let warmup = (WARMUP_SECONDS * SAMPLE_RATE) as usize;

    let mut rng = SplitMix64::new(spec.seed);
    let mut filter = butterworth4(spec.smoothness_cutoff * CORNER_RATIO, SAMPLE_RATE);
    let mut samples = Vec::with_capacity(len);
    for i in 0..warmup + len {
        let noise = rng.uniform(-1.0, 1.0);
        let y = filter.iter_mut().fold(noise, |x, bq| bq.process(x));
        if i >= warmup {
            samples.push(y);
        }
    }

    let mut magnitudes: Vec<f64> = samples.iter().map(|x| x.abs()).collect();
    let rank = ((magnitudes.len() as f64 * FILL_PERCENTILE) as usize).min(magnitudes.len() - 1);
    let (_, &mut level, _) = magnitudes.select_nth_unstable_by(rank, f64::total_cmp);
    let scale = if level > 0.0 { GESTURE_LIMIT / level } else { 0.0 };
    for s in &mut samples {
        *s *= scale;
    }
    GestureSignal::new(samples, SAMPLE_RATE)
}

/// Reads a mono 44100 Hz WAV; full scale maps to +-5 cm.
pub fn import_gesture(path: impl AsRef<Path>) -> Result<GestureSignal> {
    let raw = wav::read_mono(path)?;
    Ok(GestureSignal::new(
        raw.into_iter().map(|x| x * GESTURE_LIMIT).collect(),
        SAMPLE_RATE,
    ))
}

/// Writes a gesture as a mono WAV, 5 cm -> full scale.
pub fn export_gesture(path: impl AsRef<Path>, gesture: &GestureSignal) -> Result<()> {
    if gesture.sample_rate() != SAMPLE_RATE {
        return Err(Error::InvalidArgument(format!(
            "gesture WAVs are written at {SAMPLE_RATE} Hz, signal is at {} Hz",
            gesture.sample_rate()
        )));
    }
    let scaled: Vec<f64> = gesture.samples().iter().map(|x| x / GESTURE_LIMIT).collect();
    wav::write_mono(path, &scaled)
}
